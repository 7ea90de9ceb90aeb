#include "lpsw/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "lpsw/kernels.hpp"

namespace lpsw {
namespace {

// Cached FFTW plans per grid size. Plans are created with FFTW_ESTIMATE
// (deterministic, no runtime measurement) and FFTW_UNALIGNED so they can
// be executed on any buffer via fftw_execute_dft.
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    struct Plans {
        fftw_plan forward = nullptr;
        fftw_plan backward = nullptr;
    };

    const Plans& get(int n) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(n);
        if (it != plans_.end()) return it->second;

        std::vector<std::complex<double>> buf(static_cast<std::size_t>(n) * n);
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        Plans plans;
        plans.forward =
            fftw_plan_dft_2d(n, n, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans.backward =
            fftw_plan_dft_2d(n, n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        return plans_.emplace(n, plans).first->second;
    }

  private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<int, Plans> plans_;
};

}  // namespace

SpectralField dft_forward(const Field& f) {
    if (f.empty()) throw ConfigError("dft_forward: empty field");
    const Grid& g = f.grid();
    SpectralField out(g, f.components());
    const auto& plans = PlanCache::instance().get(g.n);
    const double scale = 1.0 / static_cast<double>(g.size());
    for (int c = 0; c < f.components(); ++c) {
        auto spec = out.comp(c);
        auto in = f.comp(c);
        for (std::size_t i = 0; i < in.size(); ++i) spec[i] = {in[i], 0.0};
        auto* p = reinterpret_cast<fftw_complex*>(spec.data());
        fftw_execute_dft(plans.forward, p, p);
        kernels::active().vscale(reinterpret_cast<double*>(spec.data()), scale, 2 * spec.size());
    }
    return out;
}

Field dft_inverse(const SpectralField& F) {
    if (F.empty()) throw ConfigError("dft_inverse: empty spectrum");
    const Grid& g = F.grid();
    Field out(g, F.components());
    const auto& plans = PlanCache::instance().get(g.n);
    std::vector<std::complex<double>> buf(g.size());
    for (int c = 0; c < F.components(); ++c) {
        auto spec = F.comp(c);
        std::copy(spec.begin(), spec.end(), buf.begin());
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        fftw_execute_dft(plans.backward, p, p);
        auto vals = out.comp(c);
        // real input data: imaginary parts are rounding noise
        for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = buf[i].real();
    }
    return out;
}

Field dft_inverse_component(const SpectralField& F, int c) {
    if (F.empty()) throw ConfigError("dft_inverse_component: empty spectrum");
    if (c < 0 || c >= F.components())
        throw ConfigError("dft_inverse_component: component out of range");
    const Grid& g = F.grid();
    Field out(g, 1);
    const auto& plans = PlanCache::instance().get(g.n);
    std::vector<std::complex<double>> buf(g.size());
    auto spec = F.comp(c);
    std::copy(spec.begin(), spec.end(), buf.begin());
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(plans.backward, p, p);
    auto vals = out.comp(0);
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = buf[i].real();
    return out;
}

}  // namespace lpsw
