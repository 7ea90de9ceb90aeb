#include "lpsw/spectral_ops.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "lpsw/kernels.hpp"

namespace lpsw {
namespace {

// 0/1 dealias masks cached per grid size.
const std::vector<double>& dealias_mask(const Grid& g) {
    static std::mutex mutex;
    static std::map<int, std::vector<double>> masks;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = masks.find(g.n);
    if (it != masks.end()) return it->second;

    std::vector<double> mask(g.size(), 0.0);
    const int cut = g.dealias_cutoff();
    for (int qx = 0; qx < g.n; ++qx) {
        const int m1 = g.freq_index(qx);
        for (int qy = 0; qy < g.n; ++qy) {
            const int m2 = g.freq_index(qy);
            if (std::abs(m1) <= cut && std::abs(m2) <= cut)
                mask[static_cast<std::size_t>(qx) * g.n + qy] = 1.0;
        }
    }
    return masks.emplace(g.n, std::move(mask)).first->second;
}

// derivative wavenumber: zero at the unpaired Nyquist index
double deriv_k(const Grid& g, int m) { return m == -g.n / 2 ? 0.0 : g.wavenumber(m); }

}  // namespace

SpectralField gradient(const SpectralField& f) {
    if (f.components() != 1) throw ConfigError("gradient: expected scalar field");
    const Grid& g = f.grid();
    SpectralField out(g, 2);
    auto in = f.comp(0);
    auto gx = out.comp(0);
    auto gy = out.comp(1);
    for (int qx = 0; qx < g.n; ++qx) {
        const double k1 = deriv_k(g, g.freq_index(qx));
        for (int qy = 0; qy < g.n; ++qy) {
            const double k2 = deriv_k(g, g.freq_index(qy));
            const std::size_t idx = static_cast<std::size_t>(qx) * g.n + qy;
            const std::complex<double> v = in[idx];
            gx[idx] = {-k1 * v.imag(), k1 * v.real()};
            gy[idx] = {-k2 * v.imag(), k2 * v.real()};
        }
    }
    return out;
}

SpectralField divergence(const SpectralField& v) {
    if (v.components() != 2) throw ConfigError("divergence: expected vector field");
    const Grid& g = v.grid();
    SpectralField out(g, 1);
    auto vx = v.comp(0);
    auto vy = v.comp(1);
    auto d = out.comp(0);
    for (int qx = 0; qx < g.n; ++qx) {
        const double k1 = deriv_k(g, g.freq_index(qx));
        for (int qy = 0; qy < g.n; ++qy) {
            const double k2 = deriv_k(g, g.freq_index(qy));
            const std::size_t idx = static_cast<std::size_t>(qx) * g.n + qy;
            const std::complex<double> a = vx[idx];
            const std::complex<double> b = vy[idx];
            d[idx] = {-k1 * a.imag() - k2 * b.imag(), k1 * a.real() + k2 * b.real()};
        }
    }
    return out;
}

SpectralField laplacian(const SpectralField& f) {
    const Grid& g = f.grid();
    SpectralField out = f;
    std::vector<double> k2tab(g.size());
    for (int qx = 0; qx < g.n; ++qx) {
        const double k1 = g.wavenumber(g.freq_index(qx));
        for (int qy = 0; qy < g.n; ++qy) {
            const double k2 = g.wavenumber(g.freq_index(qy));
            k2tab[static_cast<std::size_t>(qx) * g.n + qy] = -(k1 * k1 + k2 * k2);
        }
    }
    for (int c = 0; c < f.components(); ++c) {
        auto* p = reinterpret_cast<double*>(out.comp(c).data());
        kernels::active().mul_table(p, k2tab.data(), g.size());
    }
    return out;
}

Field gradient(const Field& f) { return dft_inverse(gradient(dft_forward(f))); }
Field divergence(const Field& v) { return dft_inverse(divergence(dft_forward(v))); }
Field laplacian(const Field& f) { return dft_inverse(laplacian(dft_forward(f))); }

void dealias_inplace(SpectralField& f) {
    const auto& mask = dealias_mask(f.grid());
    for (int c = 0; c < f.components(); ++c) {
        auto* p = reinterpret_cast<double*>(f.comp(c).data());
        kernels::active().mul_table(p, mask.data(), f.grid().size());
    }
}

Field dealias(const Field& f) {
    SpectralField F = dft_forward(f);
    dealias_inplace(F);
    return dft_inverse(F);
}

namespace {

Field product_of_banded(const Field& a, const Field& b) {
    require_same_grid(a.grid(), b.grid(), "pointwise_product");
    const auto& k = kernels::active();
    const std::size_t n2 = a.grid().size();
    Field out;
    if (a.components() == 1 && b.components() == 1) {
        out = Field(a.grid(), 1);
        k.vmul(out.comp(0).data(), a.comp(0).data(), b.comp(0).data(), n2);
    } else if (a.components() == 1 || b.components() == 1) {
        const Field& scal = a.components() == 1 ? a : b;
        const Field& vec = a.components() == 1 ? b : a;
        out = Field(a.grid(), vec.components());
        for (int c = 0; c < vec.components(); ++c)
            k.vmul(out.comp(c).data(), scal.comp(0).data(), vec.comp(c).data(), n2);
    } else if (a.components() == b.components()) {
        // pointwise dot product
        out = Field(a.grid(), 1);
        std::vector<double> tmp(n2);
        k.vmul(out.comp(0).data(), a.comp(0).data(), b.comp(0).data(), n2);
        for (int c = 1; c < a.components(); ++c) {
            k.vmul(tmp.data(), a.comp(c).data(), b.comp(c).data(), n2);
            k.vadd(out.comp(0).data(), out.comp(0).data(), tmp.data(), n2);
        }
    } else {
        throw ConfigError("pointwise_product: unsupported component combination");
    }
    SpectralField F = dft_forward(out);
    dealias_inplace(F);
    return dft_inverse(F);
}

}  // namespace

Field pointwise_product(const Field& f, const Field& g) {
    return product_of_banded(dealias(f), dealias(g));
}

Field banded_product(const Field& f, const Field& g) { return product_of_banded(f, g); }

SpectralField translate(const SpectralField& f, double d1, double d2) {
    const Grid& g = f.grid();
    SpectralField out = f;
    for (int c = 0; c < f.components(); ++c) {
        auto spec = out.comp(c);
        for (int qx = 0; qx < g.n; ++qx) {
            const double k1 = g.wavenumber(g.freq_index(qx));
            for (int qy = 0; qy < g.n; ++qy) {
                const double k2 = g.wavenumber(g.freq_index(qy));
                const std::size_t idx = static_cast<std::size_t>(qx) * g.n + qy;
                const double phase = -(k1 * d1 + k2 * d2);
                spec[idx] *= std::complex<double>(std::cos(phase), std::sin(phase));
            }
        }
    }
    return out;
}

double integral(const Field& f) {
    const double h = f.grid().spacing();
    double s = 0.0;
    for (double v : f.comp(0)) s += v;
    return s * h * h;
}

std::vector<double> heat_multiplier(const Grid& g, double nu, double t) {
    std::vector<double> e(g.size());
    for (int qx = 0; qx < g.n; ++qx) {
        const double k1 = g.wavenumber(g.freq_index(qx));
        for (int qy = 0; qy < g.n; ++qy) {
            const double k2 = g.wavenumber(g.freq_index(qy));
            e[static_cast<std::size_t>(qx) * g.n + qy] = std::exp(-nu * (k1 * k1 + k2 * k2) * t);
        }
    }
    return e;
}

bool is_dealiased(const SpectralField& f, double tol) {
    const auto& mask = dealias_mask(f.grid());
    double outside = 0.0, total = 0.0;
    for (int c = 0; c < f.components(); ++c) {
        auto spec = f.comp(c);
        for (std::size_t i = 0; i < spec.size(); ++i) {
            const double m = std::norm(spec[i]);
            total += m;
            if (mask[i] == 0.0) outside += m;
        }
    }
    return outside <= tol * tol * std::max(total, 1e-300);
}

}  // namespace lpsw
