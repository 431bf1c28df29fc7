#include "rwa/linalg.hpp"

#include <cmath>

#include "rwa/errors.hpp"

namespace rwa {

CMatrix expm_skew_hermitian(const CMatrix& generator, double t) {
  const Eigen::Index d = generator.rows();
  if (d == 0) return generator;
  // iG is Hermitian; symmetrize to wash out rounding in the input.
  CMatrix h = Complex(0.0, 1.0) * generator;
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver failed in expm_skew_hermitian");
  }
  // exp(tG) = exp(-i t H) = V diag(exp(-i mu t)) V^dagger
  CVector phases(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    phases(i) = std::polar(1.0, -es.eigenvalues()(i) * t);
  }
  const CMatrix& v = es.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double unitarity_defect(const CMatrix& u) {
  const CMatrix id = CMatrix::Identity(u.cols(), u.cols());
  return spectral_norm(u.adjoint() * u - id);
}

}  // namespace rwa
