#include "rwa/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rwa/errors.hpp"

namespace rwa {

namespace {

// Largest singular value of the rank <= 2 block formed by rows j and k of the
// coupling, restricted to columns [first_col, dim). Uses the 2x2 Gram matrix.
double two_row_norm(const CMatrix& b, std::size_t j, std::size_t k, Eigen::Index first_col) {
  const Eigen::Index cols = b.cols() - first_col;
  if (cols <= 0) return 0.0;
  const auto rj = b.row(static_cast<Eigen::Index>(j)).tail(cols);
  const auto rk = b.row(static_cast<Eigen::Index>(k)).tail(cols);
  const double a = rj.squaredNorm();
  const double c = rk.squaredNorm();
  const double off = std::abs(rj.dot(rk));
  const double half_diff = 0.5 * (a - c);
  const double top = 0.5 * (a + c) + std::sqrt(half_diff * half_diff + off * off);
  return std::sqrt(std::max(top, 0.0));
}

}  // namespace

AmplitudeSet AmplitudeSet::symmetric_interval(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InvalidArgument("amplitude interval half-width must be positive and finite");
  }
  return AmplitudeSet(Kind::SymmetricInterval, delta);
}

bool AmplitudeSet::contains(double value) const {
  return kind_ == Kind::Unbounded || std::abs(value) <= delta_;
}

QuantumModel::QuantumModel(RVector lambdas, CMatrix coupling, AmplitudeSet amplitude_set,
                           std::vector<std::string> labels)
    : lambdas_(std::move(lambdas)),
      coupling_(std::move(coupling)),
      amplitude_set_(amplitude_set),
      labels_(std::move(labels)) {
  if (lambdas_.size() == 0) throw InvalidArgument("model dimension must be positive");
  if (coupling_.rows() != lambdas_.size() || coupling_.cols() != lambdas_.size()) {
    throw InvalidArgument("coupling matrix must be dim x dim");
  }
  if (!labels_.empty() && labels_.size() != dim()) {
    throw InvalidArgument("labels must be empty or have one entry per level");
  }
}

CMatrix QuantumModel::free_generator() const {
  return (Complex(0.0, 1.0) * lambdas_.cast<Complex>()).asDiagonal();
}

CMatrix QuantumModel::generator(double a, double c) const {
  CMatrix g = c * coupling_;
  g.diagonal() += a * Complex(0.0, 1.0) * lambdas_.cast<Complex>();
  return g;
}

std::string format_pair(std::size_t l, std::size_t m) {
  std::ostringstream os;
  os << '(' << l + 1 << ',' << m + 1 << ')';
  return os.str();
}

std::vector<std::string> validate(const QuantumModel& model) {
  std::vector<std::string> out;
  const std::size_t d = model.dim();
  double scale = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (!std::isfinite(model.lambda(i))) {
      std::ostringstream os;
      os << "lambda_" << i + 1 << " is not finite";
      out.push_back(os.str());
    }
    for (std::size_t k = 0; k < d; ++k) {
      const Complex z = model.b(i, k);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        out.push_back("coupling entry " + format_pair(i, k) + " is not finite");
      } else {
        scale = std::max(scale, std::abs(z));
      }
    }
  }
  const double tol = 1e-12 * scale;
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = j; k < d; ++k) {
      const double defect = std::abs(model.b(k, j) + std::conj(model.b(j, k)));
      if (defect > tol) {
        std::ostringstream os;
        os << "not skew-Hermitian at " << format_pair(k, j) << ": |b_kj + conj(b_jk)| = "
           << defect;
        out.push_back(os.str());
      }
    }
  }
  return out;
}

void check_transition(const QuantumModel& model, Transition t) {
  if (t.j >= model.dim() || t.k >= model.dim()) {
    throw InvalidArgument("transition " + format_pair(t.j, t.k) + " out of range for dim " +
                          std::to_string(model.dim()));
  }
  if (t.j == t.k) throw InvalidArgument("transition indices must differ");
}

NondegeneracyResult is_nondegenerate(const QuantumModel& model, Transition t, double tol) {
  check_transition(model, t);
  if (!(tol > 0.0)) throw InvalidArgument("degeneracy tolerance must be positive");
  NondegeneracyResult res;
  const double gap = std::abs(model.lambda(t.j) - model.lambda(t.k));
  if (!(std::abs(model.b(t.j, t.k)) > tol)) {
    res.reason = "coupling b" + format_pair(t.j, t.k) + " vanishes";
    return res;
  }
  const std::size_t d = model.dim();
  for (std::size_t l = 0; l < d; ++l) {
    for (std::size_t m = l; m < d; ++m) {
      const bool same = (l == t.j && m == t.k) || (l == t.k && m == t.j);
      const bool touches = l == t.j || l == t.k || m == t.j || m == t.k;
      if (same || !touches) continue;
      if (std::abs(model.b(l, m)) <= tol) continue;
      const double g = std::abs(model.lambda(l) - model.lambda(m));
      if (std::abs(gap - g) <= tol * gap) res.offenders.push_back({l, m});
    }
  }
  if (gap == 0.0) {
    res.reason = "zero spectral gap";
  } else if (!res.offenders.empty()) {
    res.reason = "gap shared with coupled pairs";
  } else {
    res.nondegenerate = true;
  }
  return res;
}

std::optional<long> harmonic_index(const QuantumModel& model, Transition t, std::size_t l,
                                   std::size_t m, double tol) {
  const double gap = std::abs(model.lambda(t.j) - model.lambda(t.k));
  const double g = std::abs(model.lambda(l) - model.lambda(m));
  if (gap == 0.0) return std::nullopt;
  const double ratio = g / gap;
  const double p = std::round(ratio);
  if (std::abs(g - p * gap) <= tol * std::max(p, 1.0) * gap) return static_cast<long>(p);
  return std::nullopt;
}

std::vector<ResonantPair> resonant_pairs(const QuantumModel& model, Transition t,
                                         int max_harmonic, double tol) {
  check_transition(model, t);
  std::vector<ResonantPair> out;
  const std::size_t d = model.dim();
  for (std::size_t l = 0; l < d; ++l) {
    for (std::size_t m = l + 1; m < d; ++m) {
      const bool touches = l == t.j || l == t.k || m == t.j || m == t.k;
      if (!touches || std::abs(model.b(l, m)) <= tol) continue;
      const auto p = harmonic_index(model, t, l, m, tol);
      if (p && *p >= 2 && *p <= max_harmonic) {
        out.push_back({l, m, static_cast<int>(*p)});
      }
    }
  }
  return out;
}

QuantumModel build_two_level(double lambda1, double lambda2, Complex b) {
  if (lambda1 == lambda2) throw InvalidArgument("two-level model needs distinct eigenvalues");
  if (b == Complex(0.0)) throw InvalidArgument("two-level coupling must be nonzero");
  RVector lambdas(2);
  lambdas << lambda1, lambda2;
  CMatrix c = CMatrix::Zero(2, 2);
  c(0, 1) = b;
  c(1, 0) = -std::conj(b);
  return QuantumModel(std::move(lambdas), std::move(c));
}

QuantumModel build_synthetic(std::size_t dim, const std::vector<double>& gaps,
                             std::uint64_t coupling_seed) {
  if (dim < 2) throw InvalidArgument("synthetic model needs dim >= 2");
  if (gaps.size() != dim - 1) throw InvalidArgument("synthetic model needs dim-1 gaps");
  RVector lambdas(static_cast<Eigen::Index>(dim));
  lambdas(0) = 0.0;
  for (std::size_t i = 0; i + 1 < dim; ++i) {
    if (!(gaps[i] > 0.0)) throw InvalidArgument("synthetic gaps must be positive");
    lambdas(static_cast<Eigen::Index>(i + 1)) = lambdas(static_cast<Eigen::Index>(i)) + gaps[i];
  }
  std::mt19937_64 rng(coupling_seed);
  std::uniform_real_distribution<double> magnitude(0.1, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const auto n = static_cast<Eigen::Index>(dim);
  CMatrix c(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double sign = phase(rng) < std::numbers::pi ? 1.0 : -1.0;
    c(j, j) = Complex(0.0, sign * magnitude(rng));
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double r = magnitude(rng);
      const double th = phase(rng);
      c(j, k) = std::polar(r, th);
      c(k, j) = -std::conj(c(j, k));
    }
  }
  return QuantumModel(std::move(lambdas), std::move(c));
}

QuantumModel truncate(const QuantumModel& model, std::size_t n) {
  if (n < 2 || n > model.dim()) {
    throw InvalidArgument("truncation size " + std::to_string(n) + " outside [2, " +
                          std::to_string(model.dim()) + "]");
  }
  const auto ni = static_cast<Eigen::Index>(n);
  std::vector<std::string> labels;
  if (!model.labels().empty()) {
    labels.assign(model.labels().begin(), model.labels().begin() + static_cast<long>(n));
  }
  return QuantumModel(model.lambdas().head(ni), model.coupling().topLeftCorner(ni, ni),
                      model.amplitude_set(), std::move(labels));
}

double tail_coupling_norm(const QuantumModel& model, Transition t, std::size_t n) {
  check_transition(model, t);
  if (n < std::max(t.j, t.k) + 1 || n > model.dim()) {
    throw InvalidArgument("Galerkin size " + std::to_string(n) + " does not contain " +
                          format_pair(t.j, t.k));
  }
  return two_row_norm(model.coupling(), t.j, t.k, static_cast<Eigen::Index>(n));
}

double row_block_norm(const QuantumModel& model, Transition t) {
  check_transition(model, t);
  return two_row_norm(model.coupling(), t.j, t.k, 0);
}

std::size_t galerkin_dim_for(const QuantumModel& model, Transition t, double bound) {
  check_transition(model, t);
  for (std::size_t n = std::max(t.j, t.k) + 1; n < model.dim(); ++n) {
    if (tail_coupling_norm(model, t, n) < bound) return n;
  }
  return model.dim();
}

}  // namespace rwa
