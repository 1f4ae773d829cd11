#include "lodis/mas.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace lodis {

namespace {

// Multiplicative window around the rank cutoff inside which a singular
// value is considered undecidable rather than silently classified.
constexpr double kRankAmbiguityWindow = 50.0;

int thm2_threshold(int t, int d) { return t * d + (t * (t - 3)) / 2; }

double thm2_t_bound(int d) {
  return std::sqrt(3.0 * d * d - 3.0 * d + 0.25) - (d - 1.5);
}

// Rank of a real matrix with the relative cutoff, flagging singular values
// that sit too close to the cutoff to call.
int checked_rank(const RVector& sigma, double tol, const std::string& what) {
  const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
  if (smax <= 0.0) return 0;
  const double cutoff = tol * smax;
  int rank = 0;
  for (int k = 0; k < sigma.size(); ++k) {
    if (sigma(k) > cutoff * kRankAmbiguityWindow) {
      ++rank;
    } else if (sigma(k) >= cutoff / kRankAmbiguityWindow) {
      throw RankAmbiguity(what + ": singular value " + std::to_string(sigma(k)) +
                          " within the ambiguity window of cutoff " + std::to_string(cutoff));
    }
  }
  return rank;
}

// Bloch vector of a traceless hermitian 2x2 matrix.
Eigen::Vector3d bloch_of(const Matrix& m) {
  return {m(0, 1).real(), -m(0, 1).imag(), m(0, 0).real()};
}

// Unit vector whose Bloch representation is n: columns form the frame in
// which any traceless matrix with Bloch vector orthogonal to n has zero
// diagonal.
Matrix frame_from_bloch(const Eigen::Vector3d& n) {
  const double theta = std::acos(std::clamp(n(2), -1.0, 1.0));
  const double phi = std::atan2(n(1), n(0));
  const Complex eip(std::cos(phi), std::sin(phi));
  Matrix u(2, 2);
  u(0, 0) = std::cos(theta / 2.0);
  u(1, 0) = eip * std::sin(theta / 2.0);
  u(0, 1) = -std::conj(eip) * std::sin(theta / 2.0);
  u(1, 1) = std::cos(theta / 2.0);
  return u;
}

Matrix zero_diag_base2(const Matrix& h, const Matrix& a) {
  Eigen::Vector3d vh = bloch_of(h);
  Eigen::Vector3d va = bloch_of(a);
  const double sh = vh.norm(), sa = va.norm();
  if (sh < 1e-300 && sa < 1e-300) return Matrix::Identity(2, 2);
  Eigen::Vector3d n = vh.cross(va);
  if (n.norm() > 1e-13 * std::max(sh * sa, 1e-300)) return frame_from_bloch(n.normalized());
  // Parallel or one vanishing: any direction orthogonal to the larger works.
  const Eigen::Vector3d v = (sh >= sa ? vh : va).normalized();
  Eigen::Vector3d axis = std::abs(v(0)) < 0.9 ? Eigen::Vector3d(1, 0, 0) : Eigen::Vector3d(0, 1, 0);
  return frame_from_bloch(v.cross(axis).normalized());
}

// f(theta) = (1-e)/2 - ((1+e)/2) cos(theta) - h sin(theta); changes sign on
// (0, pi), so bisection always lands on a root.
double solve_rotation_angle(int e, double h) {
  auto f = [&](double th) {
    return 0.5 * (1.0 - e) - 0.5 * (1.0 + e) * std::cos(th) - h * std::sin(th);
  };
  double lo = 0.0, hi = M_PI;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) < 1e-12 || hi - lo < 1e-15) return mid;
    if (fm < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

Matrix zero_diag_recursive(const Matrix& h_in, const Matrix& a_in) {
  const int dim = static_cast<int>(h_in.rows());
  if (dim <= 1) return Matrix::Identity(dim, dim);
  if (dim == 2) return zero_diag_base2(h_in, a_in);

  const int e = dim - 1;
  const double scale = std::max({h_in.norm(), a_in.norm(), 1e-300});

  // Level the leading block: after this both diagonals are proportional to
  // diag(1,...,1,-e).
  Matrix hb = h_in.topLeftCorner(e, e);
  Matrix ab = a_in.topLeftCorner(e, e);
  hb -= (hb.trace() / static_cast<double>(e)) * Matrix::Identity(e, e);
  ab -= (ab.trace() / static_cast<double>(e)) * Matrix::Identity(e, e);
  Matrix v = Matrix::Identity(dim, dim);
  v.topLeftCorner(e, e) = zero_diag_recursive(hb, ab);

  Matrix h1 = v.adjoint() * h_in * v;
  Matrix a1 = v.adjoint() * a_in * v;

  RVector dlam = RVector::Ones(dim);
  dlam(dim - 1) = -e;
  dlam /= std::sqrt(static_cast<double>(e) * (e + 1));
  double alpha = 0.0, beta = 0.0;
  for (int k = 0; k < dim; ++k) {
    alpha += h1(k, k).real() * dlam(k);
    beta += a1(k, k).real() * dlam(k);
  }
  const double r = std::hypot(alpha, beta);
  if (r <= 1e-14 * scale) return v;   // diagonals already vanish

  // Rotate in the (h, a) plane so one combination carries the whole
  // diagonal; zeroing the pair is equivalent to zeroing the originals.
  Matrix hp = (alpha * h1 + beta * a1) / r;
  Matrix ap = (-beta * h1 + alpha * a1) / r;
  hp *= std::sqrt(static_cast<double>(e) * (e + 1)) / r;   // diagonal = (1,...,1,-e)

  // Phase adjustment making the trailing 2x2 block of ap purely
  // antisymmetric-imaginary; diagonals are untouched.
  const Complex z = ap(dim - 2, dim - 1);
  const double phi = (std::abs(z) > 0) ? -std::arg(z) : 0.0;
  Vector du = Vector::Ones(dim);
  du(dim - 2) = std::polar(1.0, -(M_PI + 2.0 * phi) / 4.0);
  du(dim - 1) = std::polar(1.0, (M_PI + 2.0 * phi) / 4.0);
  Matrix hpp = du.asDiagonal().inverse() * hp * du.asDiagonal();
  Matrix app = du.asDiagonal().inverse() * ap * du.asDiagonal();

  const double hval = hpp(dim - 2, dim - 1).real();
  const double theta = solve_rotation_angle(e, hval);
  Matrix rot = Matrix::Identity(dim, dim);
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  rot(dim - 2, dim - 2) = c;
  rot(dim - 2, dim - 1) = s;
  rot(dim - 1, dim - 2) = -s;
  rot(dim - 1, dim - 1) = c;
  // conjugation X -> rot X rot^T, accumulated as U = rot^T
  Matrix hppp = rot * hpp * rot.transpose();
  Matrix appp = rot * app * rot.transpose();

  // Last diagonal entries are now zero; finish the leading blocks.
  Matrix w = Matrix::Identity(dim, dim);
  Matrix hblk = hppp.topLeftCorner(e, e);
  Matrix ablk = appp.topLeftCorner(e, e);
  hblk -= (hblk.trace() / static_cast<double>(e)) * Matrix::Identity(e, e);
  ablk -= (ablk.trace() / static_cast<double>(e)) * Matrix::Identity(e, e);
  w.topLeftCorner(e, e) = zero_diag_recursive(hblk, ablk);

  return v * Matrix(du.asDiagonal()) * rot.transpose() * w;
}

RVector fix_sign(const RVector& v) {
  for (int k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) > 1e-12) return v(k) > 0 ? v : RVector(-v);
  }
  return v;
}

}  // namespace

const char* verdict_tag(Verdict v) {
  switch (v) {
    case Verdict::DistinguishableProjective: return "distinguishable_projective";
    case Verdict::NotDistinguishable: return "not_distinguishable";
    case Verdict::NoProjectiveProtocol: return "no_projective_protocol";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

GammaAnalysis analyze_gamma(const SubspaceBasis& Tperp, double tol) {
  const int d = Tperp.dim_ambient;
  const int dt = Tperp.count();
  GammaAnalysis ga;
  ga.t = dt - d;
  SubspaceBasis tp = Tperp;
  tp.tol = tol;
  ga.C_basis = commutator_space(tp);

  std::vector<Matrix> icomm(static_cast<std::size_t>(dt) * dt);
  for (int k = 0; k < dt; ++k)
    for (int l = k + 1; l < dt; ++l)
      icomm[k * dt + l] = Complex(0.0, 1.0) * (Tperp.elements[k] * Tperp.elements[l] -
                                               Tperp.elements[l] * Tperp.elements[k]);

  const int nc = ga.C_basis.count();
  ga.Gamma.reserve(nc);
  for (int g = 0; g < nc; ++g) {
    RMatrix gamma = RMatrix::Zero(dt, dt);
    for (int k = 0; k < dt; ++k)
      for (int l = k + 1; l < dt; ++l) {
        const double val = hs_inner(ga.C_basis.elements[g], icomm[k * dt + l]);
        gamma(k, l) = val;
        gamma(l, k) = -val;
      }
    ga.Gamma.push_back(std::move(gamma));
  }

  // Orthonormal basis of span{Gamma_j} under the Frobenius inner product.
  if (nc > 0) {
    RMatrix stack(nc, dt * dt);
    for (int g = 0; g < nc; ++g)
      stack.row(g) = Eigen::Map<const RVector>(ga.Gamma[g].data(), dt * dt);
    Eigen::JacobiSVD<RMatrix> svd(stack, Eigen::ComputeThinV);
    const RVector sigma = svd.singularValues();
    const double smax = sigma(0);
    for (int c = 0; c < sigma.size() && smax > 0 && sigma(c) > tol * smax; ++c) {
      RMatrix om = Eigen::Map<const RMatrix>(svd.matrixV().col(c).data(), dt, dt);
      om = 0.5 * (om - om.transpose());   // kill symmetric roundoff
      om /= om.norm();
      ga.Omega.push_back(om);
    }
  }

  // Numerical rank of each Omega and the intersection of their supports,
  // computed as the complement of the span of their kernels.
  std::vector<RVector> kernel_rows;
  for (const RMatrix& om : ga.Omega) {
    Eigen::JacobiSVD<RMatrix> svd(om, Eigen::ComputeFullV);
    const RVector sigma = svd.singularValues();
    const int rank = checked_rank(sigma, tol, "omega rank test");
    ga.omega_ranks.push_back(rank);
    for (int c = rank; c < dt; ++c) kernel_rows.push_back(svd.matrixV().col(c));
  }
  if (kernel_rows.empty()) {
    ga.support_intersection = RMatrix::Identity(dt, dt);
    return ga;
  }
  RMatrix kstack(static_cast<int>(kernel_rows.size()), dt);
  for (std::size_t r = 0; r < kernel_rows.size(); ++r)
    kstack.row(static_cast<int>(r)) = kernel_rows[r];
  Eigen::JacobiSVD<RMatrix> svd(kstack, Eigen::ComputeFullV);
  const RVector sigma = svd.singularValues();
  const double smax = sigma(0);
  int krank = 0;
  while (krank < sigma.size() && smax > 0 && sigma(krank) > tol * smax) ++krank;
  ga.support_intersection = svd.matrixV().rightCols(dt - krank);
  return ga;
}

Thm2Analysis theorem2_refute(const SubspaceBasis& Tperp, double tol) {
  const int d = Tperp.dim_ambient;
  const int dt = Tperp.count();
  if (dt <= d)
    throw DimensionMismatch("theorem2_refute: requires dim Tperp > ambient dimension");
  Thm2Analysis res;
  res.t = dt - d;
  res.t_bound = thm2_t_bound(d);
  if (res.t > res.t_bound) return res;   // outside the regime, nothing to conclude
  res.applicable = true;
  res.threshold = thm2_threshold(res.t, d);
  SubspaceBasis tp = Tperp;
  tp.tol = tol;
  res.dim_C = commutator_space(tp).count();
  res.refuted = res.dim_C > res.threshold;
  return res;
}

Thm3Result theorem3_decide(const SubspaceBasis& Tperp, double tol, std::uint64_t seed) {
  const int d = Tperp.dim_ambient;
  const int dt = Tperp.count();
  if (dt != d + 1)
    throw DimensionMismatch("theorem3_decide: requires dim Tperp = d + 1");
  Thm3Result res;
  res.gamma = analyze_gamma(Tperp, tol);

  if (res.gamma.C_basis.count() == 0) {
    // Fully commuting input: its common eigenframe's diagonal span is the
    // MAS. (Unreachable for genuinely independent hermitian families, kept
    // for tolerance-boundary inputs.)
    EigenFrame frame = simultaneous_diagonalize(Tperp, tol, kDefaultRetries, seed);
    SubspaceBasis mas;
    mas.dim_ambient = d;
    mas.tol = tol;
    for (int k = 0; k < d; ++k) {
      const Vector& v = frame.vectors[k];
      mas.elements.push_back(v * v.adjoint());
    }
    res.mas_found = true;
    res.reason = "commutator space is trivial";
    res.mas = std::move(mas);
    res.frame = std::move(frame);
    return res;
  }

  const int ng = static_cast<int>(res.gamma.Omega.size());
  for (int g = 0; g < ng; ++g) {
    if (res.gamma.omega_ranks[g] != 2) {
      res.reason = "pairing matrix " + std::to_string(g) + " has rank " +
                   std::to_string(res.gamma.omega_ranks[g]) + ", expected 2";
      return res;
    }
  }

  RVector e_last;
  if (ng == 1) {
    // A single rank-2 pairing matrix: any direction inside its support
    // yields a valid rotation. Pick the largest column of the support
    // projector, for determinism.
    const RMatrix& om = res.gamma.Omega[0];
    const RMatrix proj = om * om.transpose();   // proportional to the support projector
    int best = 0;
    for (int k = 1; k < dt; ++k)
      if (proj.col(k).norm() > proj.col(best).norm()) best = k;
    const RVector cand = proj.col(best);
    if (cand.norm() < 1e-12) {
      res.reason = "degenerate support projector";
      return res;
    }
    e_last = fix_sign(RVector(cand.normalized()));
  } else {
    const int idim = static_cast<int>(res.gamma.support_intersection.cols());
    if (idim != 1) {
      res.reason = "support intersection has dimension " + std::to_string(idim) +
                   ", expected 1";
      return res;
    }
    e_last = fix_sign(RVector(res.gamma.support_intersection.col(0)));
  }

  // Rows of the rotation: the in-support partners of e_last first, then an
  // orthonormal completion, with e_last itself last.
  std::vector<RVector> rows;
  for (int g = 0; g < ng; ++g) {
    RVector eg = res.gamma.Omega[g] * e_last;
    const double nrm = eg.norm();
    if (nrm < 1e-12) {
      res.reason = "support vector degenerates under pairing matrix " + std::to_string(g);
      return res;
    }
    rows.push_back(fix_sign(RVector(eg / nrm)));
  }
  for (int g = 0; g < ng; ++g)
    for (int g2 = g + 1; g2 < ng; ++g2)
      if (std::abs(rows[g].dot(rows[g2])) > 1e-8) {
        res.reason = "pairing partners are not mutually orthogonal";
        return res;
      }

  RMatrix fixed(ng + 1, dt);
  for (int g = 0; g < ng; ++g) fixed.row(g) = rows[g];
  fixed.row(ng) = e_last;
  Eigen::JacobiSVD<RMatrix> svd(fixed, Eigen::ComputeFullV);
  RMatrix o(dt, dt);
  for (int g = 0; g < ng; ++g) o.row(g) = rows[g];
  for (int c = ng + 1; c < dt; ++c) o.row(c - 1) = fix_sign(RVector(svd.matrixV().col(c)));
  o.row(dt - 1) = e_last;

  SubspaceBasis mas;
  mas.dim_ambient = d;
  mas.tol = tol;
  for (int k = 0; k < d; ++k) {
    Matrix tk = Matrix::Zero(d, d);
    for (int l = 0; l < dt; ++l) tk += o(k, l) * Tperp.elements[l];
    mas.elements.push_back(std::move(tk));
  }
  if (!is_abelian(mas, std::max(tol * 100, 1e-8))) {
    throw InternalConsistencyError(
        "theorem3_decide: constructed subspace fails the commutation check");
  }
  res.mas_found = true;
  res.reason = "all pairing matrices rank 2 with a common support direction";
  res.frame = simultaneous_diagonalize(mas, std::max(tol * 100, 1e-8), kDefaultRetries, seed);
  res.mas = std::move(mas);
  return res;
}

Matrix zero_diagonal_pair(const Matrix& H, const Matrix& A, double tol) {
  if (H.rows() != H.cols() || A.rows() != A.cols() || H.rows() != A.rows())
    throw DimensionMismatch("zero_diagonal_pair: inputs must be square and equal-sized");
  const double scale = std::max({H.norm(), A.norm(), 1.0});
  if (std::abs(H.trace()) > 1e-9 * scale || std::abs(A.trace()) > 1e-9 * scale)
    throw NonTraceless("zero_diagonal_pair: inputs must be traceless");

  const Matrix u = zero_diag_recursive(H, A);
  const Matrix hd = u.adjoint() * H * u;
  const Matrix ad = u.adjoint() * A * u;
  const double worst = std::max(hd.diagonal().cwiseAbs().maxCoeff(),
                                ad.diagonal().cwiseAbs().maxCoeff());
  if (worst > std::max(tol * scale * 100, 1e-9 * scale))
    throw InternalConsistencyError("zero_diagonal_pair: residual diagonal " +
                                   std::to_string(worst));
  return u;
}

std::pair<SubspaceBasis, EigenFrame> mas_from_small_T(const SubspaceBasis& T, double tol) {
  const int d = T.dim_ambient;
  if (d <= 0) throw DimensionMismatch("mas_from_small_T: ambient dimension unset");
  if (T.count() > 2)
    throw DimensionMismatch("mas_from_small_T: requires dim T <= 2");
  const Matrix h = T.count() > 0 ? T.elements[0] : Matrix(Matrix::Zero(d, d));
  const Matrix a = T.count() > 1 ? T.elements[1] : Matrix(Matrix::Zero(d, d));
  const Matrix u = zero_diagonal_pair(h, a, tol);

  EigenFrame frame = frame_from_unitary(u);
  SubspaceBasis mas;
  mas.dim_ambient = d;
  mas.tol = tol;
  for (int k = 0; k < d; ++k) {
    const Vector& v = frame.vectors[k];
    mas.elements.push_back(v * v.adjoint());
  }
  return {std::move(mas), std::move(frame)};
}

MasDecision decide(const TSpaces& ts, double tol, std::uint64_t seed) {
  const int d = ts.Tperp.dim_ambient;
  const int dim_t = ts.T.count();
  const int dim_tp = ts.Tperp.count();

  MasDecision dec;
  dec.side = ts.side;
  dec.dim_Tperp = dim_tp;
  dec.evidence.d = d;
  dec.evidence.dim_T = dim_t;
  dec.evidence.dim_Tperp = dim_tp;
  dec.evidence.t = dim_tp - d;

  auto finish_distinguishable = [&](SubspaceBasis mas, EigenFrame frame,
                                    const std::string& branch, const std::string& reason) {
    // Every frame projector must sit inside Tperp; anything else means the
    // construction and the subspace disagree.
    for (const Vector& v : frame.vectors) {
      const Matrix proj = v * v.adjoint();
      if (span_residual(proj, ts.Tperp) > std::max(tol * 100, 1e-8))
        throw InternalConsistencyError("decide: frame projector escapes Tperp");
    }
    dec.verdict = Verdict::DistinguishableProjective;
    dec.evidence.branch = branch;
    dec.reason = reason;
    dec.mas = std::move(mas);
    dec.frame = std::move(frame);
  };

  if (dim_tp <= d - 1) {
    dec.verdict = Verdict::NotDistinguishable;
    dec.evidence.branch = "dimension_floor";
    dec.reason = "dim Tperp = " + std::to_string(dim_tp) + " < d = " + std::to_string(d) +
                 ": no measurement with d independent outcomes fits";
    return dec;
  }

  if (dim_tp == d) {
    if (is_abelian(ts.Tperp, tol)) {
      EigenFrame frame = simultaneous_diagonalize(ts.Tperp, tol, kDefaultRetries, seed);
      SubspaceBasis mas = ts.Tperp;
      finish_distinguishable(std::move(mas), std::move(frame), "exact_dimension_abelian",
                             "Tperp itself is a maximally abelian subspace");
    } else {
      dec.verdict = Verdict::NotDistinguishable;
      dec.evidence.branch = "exact_dimension_nonabelian";
      dec.reason = "dim Tperp = d but the space does not commute";
    }
    return dec;
  }

  if (dim_tp >= d * d - 2) {
    auto [mas, frame] = mas_from_small_T(ts.T, tol);
    finish_distinguishable(std::move(mas), std::move(frame), "small_T_construction",
                           "dim T <= 2: zero-diagonal construction always yields a MAS");
    return dec;
  }

  if (dim_tp == d + 1) {
    Thm2Analysis t2 = theorem2_refute(ts.Tperp, tol);
    dec.evidence.dim_C = t2.dim_C;
    dec.evidence.refutation_threshold = t2.threshold;
    dec.evidence.t_bound = t2.t_bound;
    if (t2.refuted) {
      dec.verdict = Verdict::NoProjectiveProtocol;
      dec.evidence.branch = "commutator_refutation";
      dec.reason = "commutator space dimension " + std::to_string(t2.dim_C) +
                   " exceeds threshold " + std::to_string(t2.threshold) +
                   "; non-projective measurements remain undecided";
      return dec;
    }
    Thm3Result t3 = theorem3_decide(ts.Tperp, tol, seed);
    dec.evidence.omega_ranks = t3.gamma.omega_ranks;
    dec.evidence.support_intersection_dim =
        static_cast<int>(t3.gamma.support_intersection.cols());
    dec.evidence.dim_C = t3.gamma.C_basis.count();
    if (t3.mas_found) {
      finish_distinguishable(std::move(*t3.mas), std::move(*t3.frame), "rank_pairing_test",
                             t3.reason);
    } else {
      dec.verdict = Verdict::NoProjectiveProtocol;
      dec.evidence.branch = "rank_pairing_test";
      dec.reason = t3.reason + "; non-projective measurements remain undecided";
    }
    return dec;
  }

  // d + 2 <= dim Tperp <= d^2 - 3
  const int t = dim_tp - d;
  dec.evidence.t_bound = thm2_t_bound(d);
  if (t <= dec.evidence.t_bound) {
    Thm2Analysis t2 = theorem2_refute(ts.Tperp, tol);
    dec.evidence.dim_C = t2.dim_C;
    dec.evidence.refutation_threshold = t2.threshold;
    if (t2.refuted) {
      dec.verdict = Verdict::NoProjectiveProtocol;
      dec.evidence.branch = "commutator_refutation";
      dec.reason = "commutator space dimension " + std::to_string(t2.dim_C) +
                   " exceeds threshold " + std::to_string(t2.threshold) +
                   "; non-projective measurements remain undecided";
      return dec;
    }
  }
  dec.verdict = Verdict::Inconclusive;
  dec.evidence.branch = "intermediate_dimension";
  dec.reason = "dim Tperp in the undecided band; commutator refutation does not fire";
  return dec;
}

}  // namespace lodis
