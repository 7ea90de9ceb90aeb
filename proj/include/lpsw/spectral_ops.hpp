#pragma once

#include "lpsw/fft.hpp"
#include "lpsw/grid.hpp"

namespace lpsw {

// Exact spectral differentiation. The Nyquist row m = -n/2 has no
// conjugate partner on the lattice; its derivative multiplier is set to
// zero (all fields of interest are dealiased well below it).
SpectralField gradient(const SpectralField& f);    // scalar -> vector
SpectralField divergence(const SpectralField& v);  // vector -> scalar
SpectralField laplacian(const SpectralField& f);   // componentwise

Field gradient(const Field& f);
Field divergence(const Field& v);
Field laplacian(const Field& f);

// 2/3-rule truncation: zero all modes with |m_1| > n/3 or |m_2| > n/3.
void dealias_inplace(SpectralField& f);
Field dealias(const Field& f);

// Dealiased pointwise product: both inputs truncated, multiplied in
// sample space, result truncated. Component semantics:
//   (1,1) -> 1   scalar product
//   (1,2), (2,1) -> 2   scalar times vector
//   (2,2) -> 1   pointwise dot product
Field pointwise_product(const Field& f, const Field& g);

// Product of two sample-space arrays already band-limited to the dealias
// band, returned truncated. Used by solver inner loops.
Field banded_product(const Field& f, const Field& g);

// Exact translation f(. - d) via phase shift.
SpectralField translate(const SpectralField& f, double d1, double d2);

// Grid-quadrature integral of component 0: spacing^2 * sum of samples.
double integral(const Field& f);

// Heat semigroup multiplier table exp(-nu |k|^2 t).
std::vector<double> heat_multiplier(const Grid& g, double nu, double t);

bool is_dealiased(const SpectralField& f, double tol = 1e-14);

}  // namespace lpsw
