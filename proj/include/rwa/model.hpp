#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rwa/types.hpp"

namespace rwa {

/// Admissible control amplitudes. Both shapes satisfy U subset of nU for all n >= 1.
class AmplitudeSet {
 public:
  enum class Kind { Unbounded, SymmetricInterval };

  static AmplitudeSet unbounded() { return AmplitudeSet(Kind::Unbounded, 0.0); }
  /// [-delta, delta], delta > 0.
  static AmplitudeSet symmetric_interval(double delta);

  Kind kind() const { return kind_; }
  double half_width() const { return delta_; }
  bool contains(double value) const;

 private:
  AmplitudeSet(Kind kind, double delta) : kind_(kind), delta_(delta) {}
  Kind kind_;
  double delta_;
};

/// Driven pair of levels (j, k), 0-based.
struct Transition {
  std::size_t j = 0;
  std::size_t k = 1;
};

/// Finite-dimensional realization of the pair (A, B): A is diagonal with
/// entries i*lambda_k, B is the skew-Hermitian coupling b_jk = <phi_j, B phi_k>.
/// Immutable after construction.
class QuantumModel {
 public:
  QuantumModel(RVector lambdas, CMatrix coupling,
               AmplitudeSet amplitude_set = AmplitudeSet::unbounded(),
               std::vector<std::string> labels = {});

  std::size_t dim() const { return static_cast<std::size_t>(lambdas_.size()); }
  const RVector& lambdas() const { return lambdas_; }
  double lambda(std::size_t i) const { return lambdas_(static_cast<Eigen::Index>(i)); }
  const CMatrix& coupling() const { return coupling_; }
  Complex b(std::size_t j, std::size_t k) const {
    return coupling_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
  }
  const AmplitudeSet& amplitude_set() const { return amplitude_set_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// The diagonal generator A = diag(i*lambda).
  CMatrix free_generator() const;
  /// a*A + c*B as a dense matrix.
  CMatrix generator(double a, double c) const;

 private:
  RVector lambdas_;
  CMatrix coupling_;
  AmplitudeSet amplitude_set_;
  std::vector<std::string> labels_;
};

inline constexpr double kDefaultDegeneracyTol = 1e-9;
inline constexpr int kDefaultMaxHarmonic = 16;

/// Every invariant violation, with 1-based indices. Empty iff admissible.
std::vector<std::string> validate(const QuantumModel& model);

struct NondegeneracyResult {
  bool nondegenerate = false;
  /// Pairs (l <= m) sharing the driven gap, touching {j,k}, with nonzero coupling.
  std::vector<IndexPair> offenders;
  /// Empty when nondegenerate; otherwise which condition failed.
  std::string reason;
};

/// Non-degeneracy of a transition. Gaps match when they agree within
/// tol*|lambda_j - lambda_k|; couplings count as zero when |b| <= tol.
NondegeneracyResult is_nondegenerate(const QuantumModel& model, Transition t,
                                     double tol = kDefaultDegeneracyTol);

struct ResonantPair {
  std::size_t l = 0;
  std::size_t m = 0;
  int harmonic = 0;
};

/// Coupled pairs touching {j,k} whose gap is p*|lambda_j - lambda_k| for some
/// p in [2, max_harmonic]. These are the frequencies a control must cancel.
std::vector<ResonantPair> resonant_pairs(const QuantumModel& model, Transition t,
                                         int max_harmonic = kDefaultMaxHarmonic,
                                         double tol = kDefaultDegeneracyTol);

/// Ratio |gap_lm| / |gap_jk| when it is an integer within tol, else nullopt.
std::optional<long> harmonic_index(const QuantumModel& model, Transition t, std::size_t l,
                                   std::size_t m, double tol = kDefaultDegeneracyTol);

QuantumModel build_two_level(double lambda1, double lambda2, Complex b);

/// lambda_0 = 0 and lambda_{i+1} = lambda_i + gaps[i]; coupling entries drawn
/// from a seeded generator with magnitudes in [0.1, 1] (diagonal purely imaginary).
QuantumModel build_synthetic(std::size_t dim, const std::vector<double>& gaps,
                             std::uint64_t coupling_seed);

/// Galerkin compression onto the first n levels.
QuantumModel truncate(const QuantumModel& model, std::size_t n);

/// || pi_{jk} B (1 - pi_n) ||: largest singular value of rows {j,k}, columns >= n.
double tail_coupling_norm(const QuantumModel& model, Transition t, std::size_t n);

/// Smallest n with tail_coupling_norm < bound; dim() when nothing smaller works.
std::size_t galerkin_dim_for(const QuantumModel& model, Transition t, double bound);

/// Spectral norm of the two-row block pi_{jk} B.
double row_block_norm(const QuantumModel& model, Transition t);

/// Throws InvalidArgument unless j != k and both are below dim().
void check_transition(const QuantumModel& model, Transition t);

/// "(j,k)" with 1-based indices.
std::string format_pair(std::size_t l, std::size_t m);

}  // namespace rwa
