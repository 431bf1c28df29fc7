#pragma once

#include "rwa/types.hpp"

namespace rwa {

/// exp(t * G) for skew-Hermitian G, via the Hermitian eigendecomposition of iG.
/// The result is unitary up to eigensolver accuracy for any real t.
CMatrix expm_skew_hermitian(const CMatrix& generator, double t);

/// Largest singular value. Empty matrices have norm 0.
double spectral_norm(const CMatrix& m);

/// Largest deviation of u^dagger u from the identity, in spectral norm.
double unitarity_defect(const CMatrix& u);

}  // namespace rwa
