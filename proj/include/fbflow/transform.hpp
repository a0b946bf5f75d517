#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include "fbflow/field.hpp"

namespace fbflow {

namespace detail {

/// Cached FFTW plans per (n, sign). Plans created with FFTW_ESTIMATE so the
/// algorithm choice (and hence rounding) is reproducible run to run.
class FftPlans {
  public:
    static FftPlans& instance() {
        static FftPlans p;
        return p;
    }

    void execute(std::vector<cplx>& data, int n, int sign) {
        fftw_plan plan = nullptr;
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto key = std::make_pair(n, sign);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                scratch_.assign(size_t(n) * n * n, cplx(0));
                auto* p = reinterpret_cast<fftw_complex*>(scratch_.data());
                plan = fftw_plan_dft_3d(n, n, n, p, p, sign, FFTW_ESTIMATE);
                plans_[key] = plan;
            } else {
                plan = it->second;
            }
        }
        auto* d = reinterpret_cast<fftw_complex*>(data.data());
        fftw_execute_dft(plan, d, d);
    }

  private:
    FftPlans() = default;
    ~FftPlans() {
        for (auto& kv : plans_) fftw_destroy_plan(kv.second);
    }
    std::mutex mu_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
    std::vector<cplx> scratch_;
};

}  // namespace detail

/// Unscaled DFTs. fft_raw is the adjoint of ifft_raw: ifft_raw places
/// coefficient k at phase e^{+2 pi i k m / n}.
inline void ifft_raw(std::vector<cplx>& a, int n) {
    detail::FftPlans::instance().execute(a, n, FFTW_BACKWARD);
}
inline void fft_raw(std::vector<cplx>& a, int n) {
    detail::FftPlans::instance().execute(a, n, FFTW_FORWARD);
}

/// Physical samples of one spectral component on the 2 pi L periodic box:
/// u(x_m) = (2 pi L)^{-3} sum_k uhat_k e^{i xi_k . x_m}.
inline std::vector<cplx> to_physical(const SpectralField& f, int c) {
    std::vector<cplx> a = f.comp[c];
    ifft_raw(a, f.grid.n);
    const double L = f.grid.box_scale;
    const double s = 1.0 / std::pow(2.0 * M_PI * L, 3);
    for (auto& v : a) v *= s;
    return a;
}

/// Inverse of to_physical: uhat_k = sum_m u(x_m) e^{-i xi_k . x_m} (2 pi L / n)^3.
inline std::vector<cplx> to_spectral(std::vector<cplx> phys, const FrequencyGrid& g) {
    fft_raw(phys, g.n);
    const double s = std::pow(2.0 * M_PI * g.box_scale / g.n, 3);
    for (auto& v : phys) v *= s;
    return phys;
}

/// 2/3-rule mask: zero every mode with any |integer mode| > n/3.
inline void dealias_mask(std::vector<cplx>& a, const FrequencyGrid& g) {
    const int kmax = g.n / 3;
    for (int ix = 0; ix < g.n; ++ix) {
        bool bx = std::abs(g.mode(ix)) > kmax;
        for (int iy = 0; iy < g.n; ++iy) {
            bool by = std::abs(g.mode(iy)) > kmax;
            for (int iz = 0; iz < g.n; ++iz)
                if (bx || by || std::abs(g.mode(iz)) > kmax)
                    a[g.index_of(ix, iy, iz)] = cplx(0);
        }
    }
}

inline void dealias_mask(SpectralField& f) {
    for (auto& c : f.comp) dealias_mask(c, f.grid);
}

/// Lattice convolution of two spectral components,
///   (a * b)(xi_m) ~= sum_k a(xi_k) b(xi_m - xi_k) L^{-3},
/// the Riemann-sum analogue of the continuum Fourier-side convolution.
/// Computed by inverse transform, pointwise multiplication, forward
/// transform. Inputs and the result are dealiased by the 2/3 rule, so modes
/// with |k| <= n/3 equal the exact (unaliased) convolution of the masked
/// inputs.
inline std::vector<cplx> convolve_component(std::vector<cplx> a, std::vector<cplx> b,
                                            const FrequencyGrid& g) {
    dealias_mask(a, g);
    dealias_mask(b, g);
    ifft_raw(a, g.n);
    ifft_raw(b, g.n);
    for (int64_t i = 0; i < g.size(); ++i) a[i] *= b[i];
    fft_raw(a, g.n);
    const double s = g.cell_volume() / double(g.size());
    for (auto& v : a) v *= s;
    dealias_mask(a, g);
    return a;
}

/// Full 16-component tensor product v (x) w on the Fourier side (plain
/// convolution convention, see convolve_component).
struct TensorProduct {
    FrequencyGrid grid;
    std::array<std::array<std::vector<cplx>, 4>, 4> comp;  // comp[k][l] = v_k w_l
};

inline TensorProduct pointwise_product_physical(const SpectralField& v,
                                                const SpectralField& w) {
    v.require_same_grid(w);
    const auto& g = v.grid;
    TensorProduct t;
    t.grid = g;
    std::array<std::vector<cplx>, 4> pv, pw;
    for (int c = 0; c < 4; ++c) {
        auto a = v.comp[c];
        dealias_mask(a, g);
        ifft_raw(a, g.n);
        pv[c] = std::move(a);
        auto b = w.comp[c];
        dealias_mask(b, g);
        ifft_raw(b, g.n);
        pw[c] = std::move(b);
    }
    const double s = g.cell_volume() / double(g.size());
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
            std::vector<cplx> prod(g.size());
            for (int64_t i = 0; i < g.size(); ++i) prod[i] = pv[k][i] * pw[l][i];
            fft_raw(prod, g.n);
            for (auto& x : prod) x *= s;
            dealias_mask(prod, g);
            prod[0] = cplx(0);
            t.comp[k][l] = std::move(prod);
        }
    return t;
}

/// On-demand reduction of the tensor: i sum_{k<=3} xi_k (v_k w_l)^ per
/// component l, the Fourier side of the tilde-divergence of v (x) w.
inline SpectralField divergence_contraction(const TensorProduct& t) {
    const auto& g = t.grid;
    SpectralField out(g, true);
    for (int l = 0; l < 4; ++l)
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy)
                for (int iz = 0; iz < g.n; ++iz) {
                    int64_t i = g.index_of(ix, iy, iz);
                    cplx acc = g.wn(ix) * t.comp[0][l][i] +
                               g.wn(iy) * t.comp[1][l][i] +
                               g.wn(iz) * t.comp[2][l][i];
                    out.comp[l][i] = cplx(0.0, 1.0) * acc;
                }
    out.zero_mode_clear();
    return out;
}

/// Componentwise (diagonal) product a_c b_c, as used by the Bony split and
/// the scalar product laws.
inline SpectralField componentwise_product(const SpectralField& a,
                                           const SpectralField& b) {
    a.require_same_grid(b);
    SpectralField out(a.grid, a.real_flag && b.real_flag);
    for (int c = 0; c < 4; ++c)
        out.comp[c] = convolve_component(a.comp[c], b.comp[c], a.grid);
    out.zero_mode_clear();
    return out;
}

}  // namespace fbflow
