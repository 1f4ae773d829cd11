#ifndef LODIS_STATES_HPP
#define LODIS_STATES_HPP

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "lodis/types.hpp"

namespace lodis {

struct PureState {
  Vector amplitudes;   // length d_A * d_B, index a*d_B + b <-> |s_a>_A |s_b>_B
};

struct MixedState {
  Matrix density;      // (d_A*d_B) x (d_A*d_B), same index convention
};

using State = std::variant<PureState, MixedState>;

struct StateSet {
  int d_A = 0;
  int d_B = 0;
  std::vector<State> states;

  int n() const { return static_cast<int>(states.size()); }
  bool is_square() const { return d_A == d_B; }
};

Matrix density_of(const State& s);

/// Parse and validate a state-set document:
///   { "dA": int, "dB": int, "states": [ {"type":"pure","vector":[[re,im],...]}
///                                     | {"type":"mixed","matrix":[[[re,im],...],...]} ] }
/// Throws SchemaError / NormalizationError / OrthogonalityError.
StateSet load_state_set(const nlohmann::json& doc, double tol = kDefaultTol);
StateSet load_state_set_file(const std::string& path, double tol = kDefaultTol);
nlohmann::ordered_json state_set_to_json(const StateSet& set);

/// Embed the smaller party into dimension max(d_A, d_B) by zero padding;
/// pairwise overlaps are preserved exactly.
StateSet pad_to_square(const StateSet& set);

struct SpectralState {
  int rank = 0;
  RVector eigenvalues;        // descending, all > cutoff
  std::vector<Matrix> W;      // coefficient matrices, row = B index, col = A index
  bool degenerate = false;    // repeated retained eigenvalue: eigenvectors non-unique
};

struct SpectralStateSet {
  int d = 0;
  std::vector<SpectralState> states;

  int n() const { return static_cast<int>(states.size()); }
  bool any_degenerate() const;
};

/// Eigendecompose each state and reshape eigenvectors into coefficient
/// matrices. Eigenvalues below `tol` are dropped; values below -tol are an
/// input error.
SpectralStateSet spectral_decompose(const StateSet& set, double tol = kDefaultTol);

/// Generalized Bell state on C^d x C^d: phase e^{2*pi*i*j*n/d} and cyclic
/// shift by m, normalized by 1/sqrt(d). Distinct index pairs give mutually
/// orthogonal states.
Vector gen_bell(int n_idx, int m_idx, int d);

StateSet gen_bell_set(int d, const std::vector<std::pair<int, int>>& indices);

}  // namespace lodis

#endif
