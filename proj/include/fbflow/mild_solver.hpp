#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fbflow/littlewood_paley.hpp"
#include "fbflow/params.hpp"
#include "fbflow/semigroup.hpp"
#include "fbflow/transform.hpp"

namespace fbflow {

struct SolverConfig {
    double alpha = 0.5;       // space-time exponent in (0,1)
    double t_end = 1.0;
    int n_time = 16;          // uniform sub-intervals on [0, t_end]
    double picard_tol = 1e-9;
    int max_iters = 40;
    PhysicalParams params = PhysicalParams::from_n_big(1.0, 0.0, 0.0);
    BesovParams besov{0.5, 2.0, 2.0};  // data-space indices (s, p, r)
    DyadicPartition partition{-6, 8};
    bool disable_nonlinearity = false;  // test hook: linear problem only

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("SolverConfig: alpha in (0,1)");
        if (n_time < 8) throw std::invalid_argument("SolverConfig: n_time >= 8");
        if (!(t_end > 0.0)) throw std::invalid_argument("SolverConfig: t_end > 0");
    }
};

/// P-tilde grad . (v (x) w): dealiased tensor product contracted with
/// i xi_k over the first slot (k = 1..3; the fourth derivative slot of the
/// tilde gradient is zero), then the partial Helmholtz projection.
inline SpectralField nonlinear_flux(const SpectralField& v, const SpectralField& w) {
    v.require_same_grid(w);
    const auto& g = v.grid;
    std::array<std::vector<cplx>, 3> pv;
    std::array<std::vector<cplx>, 4> pw;
    for (int k = 0; k < 3; ++k) {
        auto a = v.comp[k];
        dealias_mask(a, g);
        ifft_raw(a, g.n);
        pv[k] = std::move(a);
    }
    for (int l = 0; l < 4; ++l) {
        auto b = w.comp[l];
        dealias_mask(b, g);
        ifft_raw(b, g.n);
        pw[l] = std::move(b);
    }
    const double s = g.cell_volume() / double(g.size());
    SpectralField out(g, v.real_flag && w.real_flag);
    std::vector<cplx> prod(g.size());
    for (int l = 0; l < 4; ++l) {
        std::array<std::vector<cplx>, 3> conv;
        for (int k = 0; k < 3; ++k) {
            for (int64_t i = 0; i < g.size(); ++i) prod[i] = pv[k][i] * pw[l][i];
            fft_raw(prod, g.n);
            conv[k] = prod;
        }
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy)
                for (int iz = 0; iz < g.n; ++iz) {
                    int64_t i = g.index_of(ix, iy, iz);
                    cplx acc = g.wn(ix) * conv[0][i] + g.wn(iy) * conv[1][i] +
                               g.wn(iz) * conv[2][i];
                    out.comp[l][i] = cplx(0.0, 1.0) * s * acc;
                }
    }
    out = helmholtz_project(out);
    dealias_mask(out);
    out.zero_mode_clear();
    return out;
}

namespace detail {

/// Exact per-mode integral of the semigroup factor over one sub-interval:
/// int_a^b T-hat(xi, t - tau) dtau, returned as the three scalar weights
/// (cos-part, sin-part, heat-part) multiplying M1, M2, M3.
struct KernelWeights {
    double wc, ws, wh;
};

inline KernelWeights kernel_weights(double w, double k, double t, double a, double b) {
    // int_a^b trig(w (t-tau)) e^{-k (t-tau)} dtau via u = t - tau,
    // int_{t-b}^{t-a} e^{(iw - k) u} du.
    std::complex<double> z(-k, w);
    std::complex<double> I = (std::exp(z * (t - a)) - std::exp(z * (t - b))) / z;
    double wh = (std::exp(-k * (t - b)) - std::exp(-k * (t - a))) / k;
    return {I.real(), I.imag(), wh};
}

}  // namespace detail

/// int_0^t T(t - tau) f(tau) dtau for a sampled forcing trajectory. On each
/// sub-interval the forcing is frozen at its midpoint value (mean of the
/// endpoint samples) and the kernel is integrated exactly per mode.
inline SpectralField duhamel_forced(const Trajectory& f, double t,
                                    const PhysicalParams& prm) {
    f.validate();
    if (t < 0.0 || t > f.times.back() * (1.0 + 1e-12))
        throw std::invalid_argument("duhamel_forced: t beyond trajectory range");
    const auto& g = f.fields.front().grid;
    SpectralField out(g, f.fields.front().real_flag);
    for (size_t i = 0; i + 1 < f.times.size(); ++i) {
        double a = f.times[i];
        if (a >= t) break;
        double b = std::min(f.times[i + 1], t);
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy)
                for (int iz = 0; iz < g.n; ++iz) {
                    Vec3 xi{g.wn(ix), g.wn(iy), g.wn(iz)};
                    double n2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
                    if (n2 == 0.0) continue;
                    int64_t id = g.index_of(ix, iy, iz);
                    auto mm = multiplier_matrices(xi, prm);
                    double w = xi_prime(xi, prm) / std::sqrt(n2);
                    auto kw = detail::kernel_weights(w, prm.nu * n2, t, a, b);
                    std::array<cplx, 4> fm;
                    for (int c = 0; c < 4; ++c)
                        fm[c] = 0.5 * (f.fields[i].comp[c][id] +
                                       f.fields[i + 1].comp[c][id]);
                    auto a1 = mat4_apply(mm.m1, fm);
                    auto a2 = mat4_apply(mm.m2, fm);
                    auto a3 = mat4_apply(mm.m3, fm);
                    for (int c = 0; c < 4; ++c)
                        out.comp[c][id] +=
                            kw.wc * a1[c] + kw.ws * a2[c] + kw.wh * a3[c];
                }
    }
    out.zero_mode_clear();
    return out;
}

/// B(v,w)(t) = int_0^t T(t-tau) P-tilde grad . [v (x) w] dtau. The flux is
/// sampled on the shared time grid and frozen at sub-interval midpoints; the
/// stiff semigroup factor is integrated in closed form per mode, so there is
/// no step-size restriction from the heat decay.
inline SpectralField duhamel_bilinear(const Trajectory& v, const Trajectory& w,
                                      double t, const SolverConfig& cfg) {
    v.validate();
    w.validate();
    if (v.times != w.times)
        throw std::invalid_argument("duhamel_bilinear: trajectories must share grid");
    if (t < 0.0 || t > v.times.back() * (1.0 + 1e-12))
        throw std::invalid_argument("duhamel_bilinear: t beyond trajectory range");
    const auto& g = v.fields.front().grid;
    const PhysicalParams& prm = cfg.params;
    SpectralField out(g, true);
    SpectralField flux_prev = nonlinear_flux(v.fields[0], w.fields[0]);
    for (size_t i = 0; i + 1 < v.times.size(); ++i) {
        double a = v.times[i];
        if (a >= t) break;
        double b = std::min(v.times[i + 1], t);
        SpectralField flux_next = nonlinear_flux(v.fields[i + 1], w.fields[i + 1]);
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy)
                for (int iz = 0; iz < g.n; ++iz) {
                    Vec3 xi{g.wn(ix), g.wn(iy), g.wn(iz)};
                    double n2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
                    if (n2 == 0.0) continue;
                    int64_t id = g.index_of(ix, iy, iz);
                    auto mm = multiplier_matrices(xi, prm);
                    double wq = xi_prime(xi, prm) / std::sqrt(n2);
                    auto kw = detail::kernel_weights(wq, prm.nu * n2, t, a, b);
                    std::array<cplx, 4> fm;
                    for (int c = 0; c < 4; ++c)
                        fm[c] = 0.5 * (flux_prev.comp[c][id] + flux_next.comp[c][id]);
                    auto a1 = mat4_apply(mm.m1, fm);
                    auto a2 = mat4_apply(mm.m2, fm);
                    auto a3 = mat4_apply(mm.m3, fm);
                    for (int c = 0; c < 4; ++c)
                        out.comp[c][id] +=
                            kw.wc * a1[c] + kw.ws * a2[c] + kw.wh * a3[c];
                }
        flux_prev = std::move(flux_next);
    }
    out.zero_mode_clear();
    return out;
}

/// Linear trajectory T(t_i) v0 on a uniform grid of cfg.n_time sub-intervals.
inline Trajectory semigroup_trajectory(const SpectralField& v0,
                                       const SolverConfig& cfg) {
    Trajectory tr;
    for (int i = 0; i <= cfg.n_time; ++i) {
        double t = cfg.t_end * i / cfg.n_time;
        tr.times.push_back(t);
        tr.fields.push_back(apply_semigroup(v0, t, cfg.params));
    }
    return tr;
}

/// X^alpha-style solution norm: the sum of the two Chemin-Lerner norms with
/// exponents 2/(1 +- alpha) and regularity s + 1 +- alpha.
inline double x_alpha_norm(const Trajectory& traj, const SolverConfig& cfg) {
    const auto& b = cfg.besov;
    TimeNormParams plus(2.0 / (1.0 + cfg.alpha),
                        BesovParams(b.s + 1.0 + cfg.alpha, b.p, b.r), cfg.t_end);
    TimeNormParams minus(2.0 / (1.0 - cfg.alpha),
                         BesovParams(b.s + 1.0 - cfg.alpha, b.p, b.r), cfg.t_end);
    return chemin_lerner_norm(traj, plus, cfg.partition) +
           chemin_lerner_norm(traj, minus, cfg.partition);
}

struct PicardIteration {
    int iter;
    double diff_norm;  // X^alpha norm of v^{n} - v^{n-1}
    double ratio;      // diff_n / diff_{n-1}
};

struct PicardResult {
    Trajectory trajectory;
    std::vector<PicardIteration> iterations;
    double residual = 0.0;  // X^alpha norm of v - T(.)v0 + B(v,v)
    bool converged = false;
    bool diverged = false;
};

namespace detail {

/// One Picard sweep: B(v,v)(t_i) for every grid time, via the semigroup
/// recurrence B(t_{i+1}) = T(dt) B(t_i) + int_{t_i}^{t_{i+1}} T(t_{i+1}-tau)
/// flux_mid dtau (exact per mode, flux frozen at the interval midpoint).
inline std::vector<SpectralField> bilinear_sweep(const Trajectory& v,
                                                 const SolverConfig& cfg) {
    const auto& g = v.fields.front().grid;
    const PhysicalParams& prm = cfg.params;
    std::vector<SpectralField> B;
    B.emplace_back(g, true);
    SpectralField flux_prev = nonlinear_flux(v.fields[0], v.fields[0]);
    for (size_t i = 0; i + 1 < v.times.size(); ++i) {
        double a = v.times[i], b = v.times[i + 1];
        double dt = b - a;
        SpectralField flux_next = nonlinear_flux(v.fields[i + 1], v.fields[i + 1]);
        SpectralField next = apply_semigroup(B.back(), dt, prm);
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy)
                for (int iz = 0; iz < g.n; ++iz) {
                    Vec3 xi{g.wn(ix), g.wn(iy), g.wn(iz)};
                    double n2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
                    if (n2 == 0.0) continue;
                    int64_t id = g.index_of(ix, iy, iz);
                    auto mm = multiplier_matrices(xi, prm);
                    double wq = xi_prime(xi, prm) / std::sqrt(n2);
                    auto kw = detail::kernel_weights(wq, prm.nu * n2, b, a, b);
                    std::array<cplx, 4> fm;
                    for (int c = 0; c < 4; ++c)
                        fm[c] = 0.5 * (flux_prev.comp[c][id] + flux_next.comp[c][id]);
                    auto a1 = mat4_apply(mm.m1, fm);
                    auto a2 = mat4_apply(mm.m2, fm);
                    auto a3 = mat4_apply(mm.m3, fm);
                    for (int c = 0; c < 4; ++c)
                        next.comp[c][id] +=
                            kw.wc * a1[c] + kw.ws * a2[c] + kw.wh * a3[c];
                }
        next.zero_mode_clear();
        B.push_back(std::move(next));
        flux_prev = std::move(flux_next);
    }
    return B;
}

}  // namespace detail

/// Picard iteration v^{n+1} = T(.)v0 - B(v^n, v^n), seeded at v^0 = T(.)v0.
/// Stops when the X^alpha norm of successive differences drops below
/// picard_tol; reports divergence when the contraction ratio stays >= 1 for
/// three consecutive iterations.
inline PicardResult picard_solve(const SpectralField& v0, const SolverConfig& cfg) {
    cfg.validate();
    if (max_divergence(v0) > 1e-10 * std::max(1.0, v0.max_abs()))
        throw std::invalid_argument("picard_solve: v0 must be divergence-free");
    PicardResult res;
    Trajectory lin = semigroup_trajectory(v0, cfg);
    Trajectory v = lin;
    double prev_diff = -1.0;
    int bad_streak = 0;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        Trajectory vn;
        vn.times = v.times;
        if (cfg.disable_nonlinearity) {
            vn.fields = lin.fields;
        } else {
            auto B = detail::bilinear_sweep(v, cfg);
            vn.fields.reserve(v.fields.size());
            for (size_t i = 0; i < v.fields.size(); ++i)
                vn.fields.push_back(lin.fields[i] - B[i]);
        }
        Trajectory diff;
        diff.times = v.times;
        for (size_t i = 0; i < v.fields.size(); ++i)
            diff.fields.push_back(vn.fields[i] - v.fields[i]);
        double d = x_alpha_norm(diff, cfg);
        double ratio = prev_diff > 0.0 ? d / prev_diff : 0.0;
        res.iterations.push_back({it, d, ratio});
        v = std::move(vn);
        if (!std::isfinite(d)) {
            res.diverged = true;
            break;
        }
        if (d < cfg.picard_tol) {
            res.converged = true;
            break;
        }
        if (prev_diff > 0.0 && ratio >= 1.0) {
            if (++bad_streak >= 3) {
                res.diverged = true;
                break;
            }
        } else {
            bad_streak = 0;
        }
        prev_diff = d;
    }
    // integral-equation residual of the accepted trajectory
    if (res.diverged) {
        res.residual = std::numeric_limits<double>::quiet_NaN();
        res.trajectory = std::move(v);
        return res;
    }
    Trajectory resid;
    resid.times = v.times;
    if (cfg.disable_nonlinearity) {
        for (size_t i = 0; i < v.fields.size(); ++i)
            resid.fields.push_back(v.fields[i] - lin.fields[i]);
    } else {
        auto B = detail::bilinear_sweep(v, cfg);
        for (size_t i = 0; i < v.fields.size(); ++i)
            resid.fields.push_back(v.fields[i] - lin.fields[i] + B[i]);
    }
    res.residual = x_alpha_norm(resid, cfg);
    res.trajectory = std::move(v);
    return res;
}

struct ProbeRow {
    double amplitude;
    bool converged;
    int iterations;
    double final_ratio;
    double sup_fb_norm;   // sup over samples of the data-space FB norm
    double max_fb_jump;   // max |norm(t_{i+1}) - norm(t_i)| between samples
};

struct ProbeReport {
    std::vector<ProbeRow> rows;
    double threshold = 0.0;  // geometric mean of last converged / first diverged
};

/// Amplitude sweep around the small-data threshold: scales v0, runs Picard,
/// records convergence and the continuity of the FB norm in time.
inline ProbeReport wellposedness_probe(const SpectralField& v0,
                                       const std::vector<double>& amplitudes,
                                       const SolverConfig& cfg) {
    ProbeReport rep;
    double base = fb_norm(v0, cfg.besov, cfg.partition);
    double largest_conv = 0.0, smallest_div = 0.0;
    for (double amp : amplitudes) {
        SpectralField u = v0;
        if (base > 0.0) u *= amp / base;  // amplitude = target fb_norm of data
        PicardResult pr = picard_solve(u, cfg);
        double supn = 0.0, jump = 0.0, prev = -1.0;
        for (const auto& fld : pr.trajectory.fields) {
            double nn = fb_norm(fld, cfg.besov, cfg.partition);
            supn = std::max(supn, nn);
            if (prev >= 0.0) jump = std::max(jump, std::abs(nn - prev));
            prev = nn;
        }
        double fr = pr.iterations.empty() ? 0.0 : pr.iterations.back().ratio;
        rep.rows.push_back({amp, pr.converged, int(pr.iterations.size()), fr, supn,
                            jump});
        if (pr.converged)
            largest_conv = std::max(largest_conv, amp);
        else if (smallest_div == 0.0 || amp < smallest_div)
            smallest_div = amp;
    }
    if (largest_conv > 0.0 && smallest_div > 0.0)
        rep.threshold = std::sqrt(largest_conv * smallest_div);
    return rep;
}

}  // namespace fbflow
