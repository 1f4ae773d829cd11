#include "lodis/states.hpp"

#include <cmath>
#include <fstream>

#include <Eigen/Eigenvalues>

namespace lodis {

namespace {

Complex parse_complex(const nlohmann::json& j, const char* where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw SchemaError(std::string("expected [re, im] pair in ") + where);
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::ordered_json complex_to_json(const Complex& z) {
  return nlohmann::ordered_json::array({z.real(), z.imag()});
}

double pair_overlap(const State& a, const State& b) {
  const PureState* pa = std::get_if<PureState>(&a);
  const PureState* pb = std::get_if<PureState>(&b);
  if (pa && pb) return std::abs(pa->amplitudes.dot(pb->amplitudes));
  return density_of(a).cwiseProduct(density_of(b).transpose()).sum().real();
}

bool pair_orthogonal(const State& a, const State& b, double tol) {
  const PureState* pa = std::get_if<PureState>(&a);
  const PureState* pb = std::get_if<PureState>(&b);
  const double ov = pair_overlap(a, b);
  if (pa && pb) return ov * ov <= tol;   // |<a|b>|^2
  return ov <= tol;                      // Tr(rho_a rho_b)
}

}  // namespace

Matrix density_of(const State& s) {
  if (const PureState* p = std::get_if<PureState>(&s))
    return p->amplitudes * p->amplitudes.adjoint();
  return std::get<MixedState>(s).density;
}

StateSet load_state_set(const nlohmann::json& doc, double tol) {
  if (!doc.is_object()) throw SchemaError("document root must be an object");
  if (!doc.contains("dA") || !doc.contains("dB") || !doc.contains("states"))
    throw SchemaError("document requires keys dA, dB, states");
  if (!doc["dA"].is_number_integer() || !doc["dB"].is_number_integer())
    throw SchemaError("dA and dB must be integers");
  StateSet set;
  set.d_A = doc["dA"].get<int>();
  set.d_B = doc["dB"].get<int>();
  if (set.d_A < 1 || set.d_B < 1) throw SchemaError("dA and dB must be positive");
  if (!doc["states"].is_array() || doc["states"].empty())
    throw SchemaError("states must be a non-empty array");
  const int dim = set.d_A * set.d_B;

  for (const auto& js : doc["states"]) {
    if (!js.is_object() || !js.contains("type")) throw SchemaError("state entry missing type");
    const std::string type = js["type"].get<std::string>();
    if (type == "pure") {
      if (!js.contains("vector") || !js["vector"].is_array())
        throw SchemaError("pure state requires a vector array");
      if (static_cast<int>(js["vector"].size()) != dim)
        throw SchemaError("vector length must equal dA*dB");
      Vector v(dim);
      for (int k = 0; k < dim; ++k) v(k) = parse_complex(js["vector"][k], "vector");
      set.states.push_back(PureState{std::move(v)});
    } else if (type == "mixed") {
      if (!js.contains("matrix") || !js["matrix"].is_array() ||
          static_cast<int>(js["matrix"].size()) != dim)
        throw SchemaError("mixed state requires a (dA*dB)^2 matrix");
      Matrix m(dim, dim);
      for (int r = 0; r < dim; ++r) {
        const auto& row = js["matrix"][r];
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
          throw SchemaError("matrix row length must equal dA*dB");
        for (int c = 0; c < dim; ++c) m(r, c) = parse_complex(row[c], "matrix");
      }
      set.states.push_back(MixedState{std::move(m)});
    } else {
      throw SchemaError("state type must be pure or mixed");
    }
  }

  // Per-state normalization.
  for (int i = 0; i < set.n(); ++i) {
    if (const PureState* p = std::get_if<PureState>(&set.states[i])) {
      const double nrm = p->amplitudes.norm();
      if (std::abs(nrm - 1.0) > 1e-8)
        throw NormalizationError("state " + std::to_string(i) + " has norm " +
                                 std::to_string(nrm));
    } else {
      const Matrix& rho = std::get<MixedState>(set.states[i]).density;
      if (!is_hermitian(rho, 1e-9))
        throw NormalizationError("state " + std::to_string(i) + " density not hermitian");
      if (std::abs(rho.trace().real() - 1.0) > 1e-8)
        throw NormalizationError("state " + std::to_string(i) + " has trace " +
                                 std::to_string(rho.trace().real()));
      Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -tol * 10)
        throw NormalizationError("state " + std::to_string(i) + " is not positive semidefinite");
    }
  }

  // Pairwise orthogonality; report the worst offending pair.
  int worst_a = -1, worst_b = -1;
  double worst = 0.0;
  for (int i = 0; i < set.n(); ++i)
    for (int j = i + 1; j < set.n(); ++j) {
      if (pair_orthogonal(set.states[i], set.states[j], tol)) continue;
      const double ov = pair_overlap(set.states[i], set.states[j]);
      if (ov > worst) {
        worst = ov;
        worst_a = i;
        worst_b = j;
      }
    }
  if (worst_a >= 0)
    throw OrthogonalityError("states " + std::to_string(worst_a) + " and " +
                                 std::to_string(worst_b) + " are not orthogonal (overlap " +
                                 std::to_string(worst) + ")",
                             worst_a, worst_b, worst);
  return set;
}

StateSet load_state_set_file(const std::string& path, double tol) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("JSON parse error: ") + e.what());
  }
  return load_state_set(doc, tol);
}

nlohmann::ordered_json state_set_to_json(const StateSet& set) {
  nlohmann::ordered_json doc;
  doc["dA"] = set.d_A;
  doc["dB"] = set.d_B;
  auto states = nlohmann::ordered_json::array();
  for (const State& s : set.states) {
    nlohmann::ordered_json js;
    if (const PureState* p = std::get_if<PureState>(&s)) {
      js["type"] = "pure";
      auto vec = nlohmann::ordered_json::array();
      for (int k = 0; k < p->amplitudes.size(); ++k)
        vec.push_back(complex_to_json(p->amplitudes(k)));
      js["vector"] = std::move(vec);
    } else {
      const Matrix& m = std::get<MixedState>(s).density;
      js["type"] = "mixed";
      auto mat = nlohmann::ordered_json::array();
      for (int r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::ordered_json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        mat.push_back(std::move(row));
      }
      js["matrix"] = std::move(mat);
    }
    states.push_back(std::move(js));
  }
  doc["states"] = std::move(states);
  return doc;
}

StateSet pad_to_square(const StateSet& set) {
  if (set.is_square()) return set;
  const int d = std::max(set.d_A, set.d_B);
  StateSet out;
  out.d_A = d;
  out.d_B = d;
  // old flat index a*d_B + b maps to a*d + b
  auto map_index = [&](int a, int b) { return a * d + b; };
  for (const State& s : set.states) {
    if (const PureState* p = std::get_if<PureState>(&s)) {
      Vector v = Vector::Zero(d * d);
      for (int a = 0; a < set.d_A; ++a)
        for (int b = 0; b < set.d_B; ++b) v(map_index(a, b)) = p->amplitudes(a * set.d_B + b);
      out.states.push_back(PureState{std::move(v)});
    } else {
      const Matrix& rho = std::get<MixedState>(s).density;
      Matrix m = Matrix::Zero(d * d, d * d);
      for (int a = 0; a < set.d_A; ++a)
        for (int b = 0; b < set.d_B; ++b)
          for (int a2 = 0; a2 < set.d_A; ++a2)
            for (int b2 = 0; b2 < set.d_B; ++b2)
              m(map_index(a, b), map_index(a2, b2)) = rho(a * set.d_B + b, a2 * set.d_B + b2);
      out.states.push_back(MixedState{std::move(m)});
    }
  }
  return out;
}

bool SpectralStateSet::any_degenerate() const {
  for (const SpectralState& s : states)
    if (s.degenerate) return true;
  return false;
}

SpectralStateSet spectral_decompose(const StateSet& set, double tol) {
  if (!set.is_square())
    throw DimensionMismatch("spectral_decompose: state set must be square; pad first");
  const int d = set.d_A;
  SpectralStateSet out;
  out.d = d;
  for (int i = 0; i < set.n(); ++i) {
    SpectralState sp;
    if (const PureState* p = std::get_if<PureState>(&set.states[i])) {
      sp.rank = 1;
      sp.eigenvalues = RVector::Constant(1, 1.0);
      // amplitude of |s_a>_A |s_b>_B sits at a*d + b = column-major (b, a)
      sp.W.push_back(Eigen::Map<const Matrix>(p->amplitudes.data(), d, d));
    } else {
      const Matrix& rho = std::get<MixedState>(set.states[i]).density;
      Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
      if (es.info() != Eigen::Success)
        throw Error("spectral_decompose: eigensolver failed on state " + std::to_string(i));
      const RVector& ev = es.eigenvalues();   // ascending
      if (ev.minCoeff() < -tol)
        throw NormalizationError("state " + std::to_string(i) +
                                 " has a negative eigenvalue beyond tolerance");
      std::vector<double> lam;
      std::vector<Matrix> ws;
      for (int k = static_cast<int>(ev.size()) - 1; k >= 0; --k) {
        if (ev(k) < tol) break;   // ascending order: the rest are smaller
        lam.push_back(ev(k));
        Vector psi = es.eigenvectors().col(k);
        ws.push_back(Eigen::Map<const Matrix>(psi.data(), d, d));
      }
      sp.rank = static_cast<int>(lam.size());
      sp.eigenvalues = Eigen::Map<const RVector>(lam.data(), sp.rank);
      sp.W = std::move(ws);
      for (int a = 0; a + 1 < sp.rank; ++a)
        if (std::abs(sp.eigenvalues(a) - sp.eigenvalues(a + 1)) <= tol) sp.degenerate = true;
    }
    out.states.push_back(std::move(sp));
  }
  return out;
}

Vector gen_bell(int n_idx, int m_idx, int d) {
  if (d < 1 || n_idx < 0 || n_idx >= d || m_idx < 0 || m_idx >= d)
    throw std::out_of_range("gen_bell: indices must satisfy 0 <= n,m < d");
  Vector psi = Vector::Zero(d * d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) {
    const int k = (j + m_idx) % d;
    const double phase = 2.0 * M_PI * j * n_idx / d;
    psi(j * d + k) = norm * Complex(std::cos(phase), std::sin(phase));
  }
  return psi;
}

StateSet gen_bell_set(int d, const std::vector<std::pair<int, int>>& indices) {
  StateSet set;
  set.d_A = d;
  set.d_B = d;
  for (const auto& [n_idx, m_idx] : indices)
    set.states.push_back(PureState{gen_bell(n_idx, m_idx, d)});
  return set;
}

}  // namespace lodis
