#pragma once

#include "lpsw/grid.hpp"

namespace lpsw {

// Discrete Fourier transform pair, normalised so that
//   f(x) = sum_m coef[m] exp(i k_m . x)
// and inverse(forward(f)) == f to machine precision. With this scaling
// Parseval reads  spacing^2 * sum_x |f(x)|^2 = L^2 * sum_m |coef[m]|^2.
SpectralField dft_forward(const Field& f);
Field dft_inverse(const SpectralField& F);

// Inverse transform of a single component into a scalar Field.
Field dft_inverse_component(const SpectralField& F, int c);

}  // namespace lpsw
