#include "lpsw/grid.hpp"

#include <cmath>

#include "lpsw/kernels.hpp"

namespace lpsw {

double Grid::lattice_kmax() const {
    // largest |k| on the lattice: the (-n/2, -n/2) corner
    const double kn = nyquist();
    return std::sqrt(2.0) * kn;
}

Grid make_grid(int n, double length) {
    std::vector<std::string> bad;
    if (n < 16) bad.push_back("grid n must be >= 16, got " + std::to_string(n));
    if ((n & (n - 1)) != 0) bad.push_back("grid n must be a power of two, got " + std::to_string(n));
    if (!(length > 0.0)) bad.push_back("grid length must be positive, got " + std::to_string(length));
    if (!bad.empty()) throw ConfigError(bad);
    return Grid{n, length};
}

Field::Field(const Grid& grid, int components) : grid_(grid), components_(components) {
    if (components != 1 && components != 2 && components != 4)
        throw ConfigError("field components must be 1, 2 or 4, got " + std::to_string(components));
    data_.assign(grid_.size() * components, 0.0);
}

std::span<double> Field::comp(int c) {
    return {data_.data() + static_cast<std::size_t>(c) * grid_.size(), grid_.size()};
}
std::span<const double> Field::comp(int c) const {
    return {data_.data() + static_cast<std::size_t>(c) * grid_.size(), grid_.size()};
}

SpectralField::SpectralField(const Grid& grid, int components)
    : grid_(grid), components_(components) {
    if (components != 1 && components != 2 && components != 4)
        throw ConfigError("field components must be 1, 2 or 4, got " + std::to_string(components));
    coef_.assign(grid_.size() * components, {0.0, 0.0});
}

std::span<std::complex<double>> SpectralField::comp(int c) {
    return {coef_.data() + static_cast<std::size_t>(c) * grid_.size(), grid_.size()};
}
std::span<const std::complex<double>> SpectralField::comp(int c) const {
    return {coef_.data() + static_cast<std::size_t>(c) * grid_.size(), grid_.size()};
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b))
        throw ConfigError(std::string(what) + ": grid mismatch (n=" + std::to_string(a.n) + ",L=" +
                          std::to_string(a.length) + " vs n=" + std::to_string(b.n) + ",L=" +
                          std::to_string(b.length) + ")");
}

namespace {
void require_same_shape(const Field& a, const Field& b, const char* what) {
    require_same_grid(a.grid(), b.grid(), what);
    if (a.components() != b.components())
        throw ConfigError(std::string(what) + ": component mismatch");
}
void require_same_shape(const SpectralField& a, const SpectralField& b, const char* what) {
    require_same_grid(a.grid(), b.grid(), what);
    if (a.components() != b.components())
        throw ConfigError(std::string(what) + ": component mismatch");
}
}  // namespace

Field& operator+=(Field& a, const Field& b) {
    require_same_shape(a, b, "field add");
    kernels::active().vadd(a.data().data(), a.data().data(), b.data().data(), a.data().size());
    return a;
}

Field& operator-=(Field& a, const Field& b) {
    require_same_shape(a, b, "field sub");
    kernels::active().vsub(a.data().data(), a.data().data(), b.data().data(), a.data().size());
    return a;
}

Field operator+(const Field& a, const Field& b) {
    Field out = a;
    out += b;
    return out;
}

Field operator-(const Field& a, const Field& b) {
    Field out = a;
    out -= b;
    return out;
}

Field operator*(double alpha, const Field& a) {
    Field out = a;
    kernels::active().vscale(out.data().data(), alpha, out.data().size());
    return out;
}

void axpy(Field& y, double alpha, const Field& x) {
    require_same_shape(y, x, "field axpy");
    kernels::active().vaxpy(y.data().data(), alpha, x.data().data(), y.data().size());
}

SpectralField& operator+=(SpectralField& a, const SpectralField& b) {
    require_same_shape(a, b, "spectral add");
    auto* pa = reinterpret_cast<double*>(a.data().data());
    const auto* pb = reinterpret_cast<const double*>(b.data().data());
    kernels::active().vadd(pa, pa, pb, 2 * a.data().size());
    return a;
}

SpectralField& operator-=(SpectralField& a, const SpectralField& b) {
    require_same_shape(a, b, "spectral sub");
    auto* pa = reinterpret_cast<double*>(a.data().data());
    const auto* pb = reinterpret_cast<const double*>(b.data().data());
    kernels::active().vsub(pa, pa, pb, 2 * a.data().size());
    return a;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    SpectralField out = a;
    out -= b;
    return out;
}

SpectralField operator*(double alpha, const SpectralField& a) {
    SpectralField out = a;
    auto* p = reinterpret_cast<double*>(out.data().data());
    kernels::active().vscale(p, alpha, 2 * out.data().size());
    return out;
}

void axpy(SpectralField& y, double alpha, const SpectralField& x) {
    require_same_shape(y, x, "spectral axpy");
    auto* py = reinterpret_cast<double*>(y.data().data());
    const auto* px = reinterpret_cast<const double*>(x.data().data());
    kernels::active().vaxpy(py, alpha, px, 2 * y.data().size());
}

double max_abs(const Field& f) {
    return kernels::active().max_abs(f.data().data(), f.data().size());
}

bool all_finite(const Field& f) {
    return std::isfinite(kernels::active().sum_abs(f.data().data(), f.data().size()));
}

bool all_finite(const SpectralField& f) {
    const auto* p = reinterpret_cast<const double*>(f.data().data());
    return std::isfinite(kernels::active().sum_abs(p, 2 * f.data().size()));
}

}  // namespace lpsw
