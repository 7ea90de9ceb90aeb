#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "lpsw/errors.hpp"

namespace lpsw {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Uniform periodic grid on the square torus [0, L)^2 with n samples per
// axis. The frequency lattice is k = (2*pi/L) * m with integer
// m in [-n/2, n/2) per axis.
struct Grid {
    int n = 0;
    double length = 0.0;

    double spacing() const { return length / n; }
    double dk() const { return kTwoPi / length; }
    std::size_t size() const { return static_cast<std::size_t>(n) * n; }

    // signed frequency index for storage index q in [0, n)
    int freq_index(int q) const { return q < n / 2 ? q : q - n; }
    double wavenumber(int m) const { return dk() * m; }

    double nyquist() const { return dk() * (n / 2); }          // per axis
    double lattice_kmax() const;                               // box corner
    int dealias_cutoff() const { return n / 3; }               // keep |m_i| <= n/3

    bool operator==(const Grid&) const = default;
};

Grid make_grid(int n, double length);

// Sampled field on a grid. components: 1 = scalar, 2 = vector,
// 4 = 2-tensor (velocity gradients). Storage is planar: all samples of
// component 0 first, row-major (index ix * n + iy), then component 1, ...
class Field {
  public:
    Field() = default;
    Field(const Grid& grid, int components);

    const Grid& grid() const { return grid_; }
    int components() const { return components_; }
    std::size_t samples_per_component() const { return grid_.size(); }

    std::span<double> comp(int c);
    std::span<const double> comp(int c) const;
    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

    double& at(int c, int ix, int iy) {
        return data_[static_cast<std::size_t>(c) * grid_.size() +
                     static_cast<std::size_t>(ix) * grid_.n + iy];
    }
    double at(int c, int ix, int iy) const {
        return data_[static_cast<std::size_t>(c) * grid_.size() +
                     static_cast<std::size_t>(ix) * grid_.n + iy];
    }

    bool empty() const { return data_.empty(); }

  private:
    Grid grid_;
    int components_ = 0;
    std::vector<double> data_;
};

// Fourier coefficients of a Field, planar complex storage with the same
// row-major index convention; coefficient m is stored at
// (m1 mod n) * n + (m2 mod n). Normalised so that
// f(x) = sum_m coef[m] exp(i k_m . x).
class SpectralField {
  public:
    SpectralField() = default;
    SpectralField(const Grid& grid, int components);

    const Grid& grid() const { return grid_; }
    int components() const { return components_; }

    std::span<std::complex<double>> comp(int c);
    std::span<const std::complex<double>> comp(int c) const;
    std::span<std::complex<double>> data() { return coef_; }
    std::span<const std::complex<double>> data() const { return coef_; }

    std::complex<double>& at(int c, int ix, int iy) {
        return coef_[static_cast<std::size_t>(c) * grid_.size() +
                     static_cast<std::size_t>(ix) * grid_.n + iy];
    }
    const std::complex<double>& at(int c, int ix, int iy) const {
        return coef_[static_cast<std::size_t>(c) * grid_.size() +
                     static_cast<std::size_t>(ix) * grid_.n + iy];
    }

    bool empty() const { return coef_.empty(); }

  private:
    Grid grid_;
    int components_ = 0;
    std::vector<std::complex<double>> coef_;
};

// Elementwise helpers (kernel-backed).
Field& operator+=(Field& a, const Field& b);
Field& operator-=(Field& a, const Field& b);
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double alpha, const Field& a);
void axpy(Field& y, double alpha, const Field& x);  // y += alpha x

SpectralField& operator+=(SpectralField& a, const SpectralField& b);
SpectralField& operator-=(SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double alpha, const SpectralField& a);
void axpy(SpectralField& y, double alpha, const SpectralField& x);

double max_abs(const Field& f);
bool all_finite(const Field& f);
bool all_finite(const SpectralField& f);

void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace lpsw
