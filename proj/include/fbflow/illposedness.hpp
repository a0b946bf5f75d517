#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "fbflow/field.hpp"
#include "fbflow/littlewood_paley.hpp"
#include "fbflow/parallel.hpp"
#include "fbflow/params.hpp"
#include "fbflow/quadrature.hpp"
#include "fbflow/semigroup.hpp"

namespace fbflow {

struct EBox {
    std::array<double, 3> lo{0.5, 0.25, -0.25};
    std::array<double, 3> hi{0.75, 0.5, 0.25};
};

/// Detection-region constant: the smallest value of 1 - xi1^2/|xi|^2 on the
/// box (attained at max |xi1|, min |xi2|, |xi3|).
inline double e_region_c_value(const EBox& e) {
    auto minabs = [](double lo, double hi) {
        return (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(std::abs(lo), std::abs(hi));
    };
    double x1 = std::max(std::abs(e.lo[0]), std::abs(e.hi[0]));
    double x2 = minabs(e.lo[1], e.hi[1]);
    double x3 = minabs(e.lo[2], e.hi[2]);
    return 1.0 - x1 * x1 / (x1 * x1 + x2 * x2 + x3 * x3);
}

struct CounterexampleConfig {
    int m_big = 3;
    double r = 4.0;  // target summability, in (2, inf]
    PhysicalParams params = PhysicalParams::from_n_big(1.0, 1.0, 1.0);
    double t_lo = 0.0, t_hi = 0.0;  // 0 means the default admissible window
    int quad_order_eta = 8;   // Gauss points per axis on the unit cubes
    int quad_points_xi = 6;   // Gauss points per axis over the E box
    int n_t_samples = 16;     // log-uniform samples across the window
    EBox e_region;
    int workers = 2;

    double window_lo() const {
        return t_lo > 0.0 ? t_lo : 1.0 / (params.nu * std::ldexp(1.0, 2 * m_big));
    }
    double window_hi() const { return t_hi > 0.0 ? t_hi : 1.0 / params.n_big; }

    void validate() const {
        const double nu = params.nu, N = params.n_big, Om = params.omega;
        if (m_big < 1) throw std::invalid_argument("counterexample: M >= 1");
        if (!(r > 2.0)) throw std::invalid_argument("counterexample: r in (2, inf]");
        if (!(N >= std::abs(Om)) || !(Om != 0.0))
            throw std::invalid_argument("counterexample: need N >= |Omega| > 0");
        if (m_big + 1e-9 < 0.5 * std::log2(N / nu))
            throw std::invalid_argument("counterexample: M >= log2(N/nu)/2 required");
        double lo = window_lo(), hi = window_hi();
        if (!(lo < hi) || lo * (1.0 + 1e-9) < 1.0 / (nu * std::ldexp(1.0, 2 * m_big)) ||
            hi > (1.0 / N) * (1.0 + 1e-9))
            throw std::invalid_argument(
                "counterexample: window must lie in [1/(nu 2^{2M}), 1/N]");
        if (e_region.lo[0] < 1e-3 || e_region.hi[0] > 1.0)
            throw std::invalid_argument("counterexample: E needs 1/1000 <= xi1 <= 1");
        double corner = 0.0;
        for (int d = 0; d < 3; ++d) {
            double m = std::max(std::abs(e_region.lo[d]), std::abs(e_region.hi[d]));
            corner += m * m;
        }
        if (corner > 1.0 + 1e-12)
            throw std::invalid_argument("counterexample: E must lie in |xi| <= 1");
        if (!(e_region_c_value(e_region) > 0.0))
            throw std::invalid_argument("counterexample: inf(1 - xi1^2/|xi|^2) > 0 fails");
        if (quad_order_eta < 1 || quad_points_xi < 1 || n_t_samples < 2)
            throw std::invalid_argument("counterexample: quadrature orders invalid");
    }
};

/// Closed-form spectral profile of the initial data f^M: unit-half-width
/// indicator cubes at +-2^j e2 for j = M..2M, amplitude 2^j/sqrt(M), the
/// divergence-free direction i (xi2, -xi1, 0, 0)/|xi|.
struct CounterexampleProfile {
    int m_big;

    std::array<cplx, 4> evaluate(const Vec3& xi) const {
        double amp = 0.0;
        for (int j = m_big; j <= 2 * m_big; ++j) {
            double c = std::ldexp(1.0, j);
            for (double sg : {+1.0, -1.0}) {
                if (std::abs(xi[0]) <= 1.0 && std::abs(xi[1] - sg * c) <= 1.0 &&
                    std::abs(xi[2]) <= 1.0)
                    amp += c;
            }
        }
        if (amp == 0.0) return {cplx(0), cplx(0), cplx(0), cplx(0)};
        double n = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        cplx f = cplx(0.0, amp / std::sqrt(double(m_big))) / n;
        return {f * xi[1], -f * xi[0], cplx(0), cplx(0)};
    }
};

inline CounterexampleProfile build_counterexample(const CounterexampleConfig& cfg) {
    if (cfg.m_big < 1) throw std::invalid_argument("build_counterexample: M >= 1");
    return CounterexampleProfile{cfg.m_big};
}

/// Sample the profile onto a lattice. The indicator of each cube is replaced
/// by its average over the lattice cell (separable per-axis overlap), so the
/// lattice Riemann sum reproduces cube integrals exactly and lattice
/// convolutions track the continuum ones; the smooth factor is evaluated at
/// the cell center. Requires the grid to resolve the top frequency.
inline SpectralField sample_counterexample(const CounterexampleProfile& prof,
                                           const FrequencyGrid& grid) {
    const double top = std::ldexp(1.0, 2 * prof.m_big) + 1.0;
    if (grid.nyquist() < top)
        throw std::invalid_argument(
            "sample_counterexample: grid Nyquist below 2^{2M}+1");
    SpectralField f(grid, true);
    const double h = grid.spacing();
    auto overlap1d = [h](double x, double c) {
        // |[x-h/2, x+h/2] cap [c-1, c+1]| / h
        double lo = std::max(x - 0.5 * h, c - 1.0), hi = std::min(x + 0.5 * h, c + 1.0);
        return std::max(0.0, hi - lo) / h;
    };
    for (int ix = 0; ix < grid.n; ++ix)
        for (int iy = 0; iy < grid.n; ++iy)
            for (int iz = 0; iz < grid.n; ++iz) {
                Vec3 xi{grid.wn(ix), grid.wn(iy), grid.wn(iz)};
                double amp = 0.0;
                for (int j = prof.m_big; j <= 2 * prof.m_big; ++j) {
                    double c = std::ldexp(1.0, j);
                    for (double sg : {+1.0, -1.0})
                        amp += c * overlap1d(xi[0], 0.0) * overlap1d(xi[1], sg * c) *
                               overlap1d(xi[2], 0.0);
                }
                if (amp == 0.0) continue;
                double n2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
                cplx v = cplx(0.0, amp / std::sqrt(double(prof.m_big))) / std::sqrt(n2);
                int64_t i = grid.index_of(ix, iy, iz);
                f.comp[0][i] = v * xi[1];
                f.comp[1][i] = -v * xi[0];
            }
    f.zero_mode_clear();
    return f;
}

struct CounterexampleNorm {
    double value = 0.0;
    std::vector<BlockNormRecord> blocks;
};

/// FB^{-1}_{1,r} norm of f^M, computed from the closed-form profile by
/// per-cube tensor Gauss quadrature of the psi_j-weighted L^1 integrals.
inline CounterexampleNorm counterexample_norm_analytic(int m_big, double r,
                                                       int quad_order,
                                                       const DyadicPartition& part) {
    GaussRule g1 = gauss_legendre(quad_order);
    std::map<int, double> block;
    const double s = -1.0;
    for (int k = m_big; k <= 2 * m_big; ++k) {
        double c = std::ldexp(1.0, k);
        for (double sg : {+1.0, -1.0}) {
            for (int a = 0; a < quad_order; ++a)
                for (int b = 0; b < quad_order; ++b)
                    for (int cc = 0; cc < quad_order; ++cc) {
                        double x1 = g1.nodes[a];
                        double x2 = sg * c + g1.nodes[b];
                        double x3 = g1.nodes[cc];
                        double w = g1.weights[a] * g1.weights[b] * g1.weights[cc];
                        double rr = std::sqrt(x1 * x1 + x2 * x2 + x3 * x3);
                        double mag = (c / std::sqrt(double(m_big))) *
                                     std::sqrt(x1 * x1 + x2 * x2) / rr;
                        for (int j = k - 2; j <= k + 1; ++j) {
                            double pj = part.psi(std::ldexp(rr, -j));
                            if (pj > 0.0) block[j] += w * pj * mag;
                        }
                    }
        }
    }
    CounterexampleNorm out;
    std::vector<double> weighted;
    for (const auto& [j, bn] : block) {
        double wj = std::pow(2.0, s * j) * bn;
        out.blocks.push_back({j, bn, wj});
        weighted.push_back(wj);
    }
    out.value = detail::ell_r(weighted, r);
    return out;
}

inline CounterexampleNorm counterexample_norm(const CounterexampleConfig& cfg) {
    DyadicPartition part = make_partition(cfg.m_big - 4, 2 * cfg.m_big + 4);
    return counterexample_norm_analytic(cfg.m_big, cfg.r, cfg.quad_order_eta, part);
}

// ---- second Picard iterate on the detection region ----

namespace detail {

struct TrigCoef {
    int eps;
    cplx c;
};
/// trig decompositions: cos x = sum c e^{i eps x}, sin likewise, 1 = e^{0}.
inline const std::array<std::vector<TrigCoef>, 3>& trig_tables() {
    static const std::array<std::vector<TrigCoef>, 3> t = {
        std::vector<TrigCoef>{{+1, cplx(0.5, 0.0)}, {-1, cplx(0.5, 0.0)}},
        std::vector<TrigCoef>{{+1, cplx(0.0, -0.5)}, {-1, cplx(0.0, 0.5)}},
        std::vector<TrigCoef>{{0, cplx(1.0, 0.0)}}};
    return t;
}

/// g_i = M_i(zeta) d(zeta) with d = (zeta2, -zeta1, 0, 0)/|zeta|; also the
/// oscillation frequency |zeta|'/|zeta| and nu |zeta|^2.
struct EvolvedDirection {
    std::array<double, 4> g[3];
    double omega;  // |zeta|'/|zeta|
    double nu_z2;  // nu |zeta|^2
};

inline EvolvedDirection evolved_direction(const Vec3& z, const PhysicalParams& prm) {
    EvolvedDirection out;
    double n2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
    double n = std::sqrt(n2);
    auto mm = multiplier_matrices(z, prm);
    std::array<double, 4> d{z[1] / n, -z[0] / n, 0.0, 0.0};
    out.g[0] = mat4_apply(mm.m1, d);
    out.g[1] = mat4_apply(mm.m2, d);
    out.g[2] = mat4_apply(mm.m3, d);
    out.omega = xi_prime(z, prm) / n;
    out.nu_z2 = prm.nu * n2;
    return out;
}

}  // namespace detail

/// F[A2(f^M)](xi, t) at one frequency, with the diagnostic split. The eta
/// integral runs over the finitely many cube pairings (j; +,-) and (j; -,+)
/// that survive the support constraints for |xi| <= 1, by tensor Gauss
/// quadrature on the intersection boxes; the tau integral is in closed form
/// through complex exponential antiderivatives.
struct SecondIterateValue {
    std::array<cplx, 4> value{};
    double k1 = 0.0, k2 = 0.0, k3 = 0.0;  // first components of the (3.9)-split
    double j133 = 0.0;                    // main term of the K111 split
    double bracket_min = 0.0, bracket_max = 0.0;  // J133 integrand sign window
    std::array<std::array<double, 3>, 3> k1_split{};  // |K1_{kl}|, optional
};

inline SecondIterateValue second_iterate_at(const Vec3& xi, double t,
                                            const CounterexampleConfig& cfg,
                                            bool with_k1_split = false) {
    using namespace detail;
    const PhysicalParams& prm = cfg.params;
    const int M = cfg.m_big;
    const auto& tables = trig_tables();
    const double n2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    const double beta = prm.nu * n2;
    const double w0 = xi_prime(xi, prm) / std::sqrt(n2);

    // e^{s0 t} for s0 = i eps w0 - beta, eps in {-1, 0, +1}
    std::array<cplx, 3> E0;
    for (int e0 = -1; e0 <= 1; ++e0)
        E0[e0 + 1] = std::exp(cplx(-beta * t, e0 * w0 * t));

    GaussRule base = gauss_legendre(cfg.quad_order_eta);
    const int Q = cfg.quad_order_eta;

    std::array<std::array<cplx, 4>, 3> acc{};  // per outer-basis {cos, sin, 1}
    cplx acc_j133(0.0, 0.0);
    std::array<std::array<cplx, 3>, 3> acc_kl{};
    double brk_min = 1e300, brk_max = -1e300;
    const double lerw = (1.0 - xi[0] * xi[0] / n2) * xi[0];

    for (int j = M; j <= 2 * M; ++j) {
        const double cj = std::ldexp(1.0, j);
        const double amp2 = std::ldexp(1.0, 2 * j) / double(M);
        for (double sg : {+1.0, -1.0}) {
            // eta in cube(-sg 2^j e2), xi - eta in cube(+sg 2^j e2)
            std::array<double, 3> ce{0.0, -sg * cj, 0.0}, co{0.0, sg * cj, 0.0};
            std::array<double, 3> lo, hi;
            bool empty = false;
            for (int d = 0; d < 3; ++d) {
                lo[d] = std::max(ce[d] - 1.0, xi[d] - co[d] - 1.0);
                hi[d] = std::min(ce[d] + 1.0, xi[d] - co[d] + 1.0);
                if (!(hi[d] > lo[d])) empty = true;
            }
            if (empty) continue;
            std::array<std::vector<double>, 3> pts, wts;
            for (int d = 0; d < 3; ++d) {
                double mid = 0.5 * (lo[d] + hi[d]), half = 0.5 * (hi[d] - lo[d]);
                pts[d].resize(Q);
                wts[d].resize(Q);
                for (int q = 0; q < Q; ++q) {
                    pts[d][q] = mid + half * base.nodes[q];
                    wts[d][q] = half * base.weights[q];
                }
            }
            for (int qa = 0; qa < Q; ++qa)
                for (int qb = 0; qb < Q; ++qb)
                    for (int qc = 0; qc < Q; ++qc) {
                        Vec3 eta{pts[0][qa], pts[1][qb], pts[2][qc]};
                        double wt = wts[0][qa] * wts[1][qb] * wts[2][qc];
                        Vec3 zet{xi[0] - eta[0], xi[1] - eta[1], xi[2] - eta[2]};
                        auto De = evolved_direction(eta, prm);
                        auto Dz = evolved_direction(zet, prm);
                        double q = De.nu_z2 + Dz.nu_z2;

                        // e^{s1 t} over the 3x3 (eps1, eps2) grid
                        cplx E1[3][3];
                        for (int e1 = -1; e1 <= 1; ++e1)
                            for (int e2 = -1; e2 <= 1; ++e2)
                                E1[e1 + 1][e2 + 1] = std::exp(
                                    cplx(-q * t, (e1 * Dz.omega + e2 * De.omega) * t));

                        // G[a][e1][e2] = sum_{eps0} c0 (E1 - E0)/(s1 - s0)
                        cplx G[3][3][3];
                        for (int e1 = -1; e1 <= 1; ++e1)
                            for (int e2 = -1; e2 <= 1; ++e2) {
                                cplx s1(-q, e1 * Dz.omega + e2 * De.omega);
                                for (int a = 0; a < 3; ++a) {
                                    cplx gg(0.0, 0.0);
                                    for (const auto& tc : tables[a]) {
                                        cplx s0(-beta, tc.eps * w0);
                                        gg += tc.c * (E1[e1 + 1][e2 + 1] -
                                                      E0[tc.eps + 1]) /
                                              (s1 - s0);
                                    }
                                    G[a][e1 + 1][e2 + 1] = gg;
                                }
                            }
                        // I[a][i][ip] = sum c1 c2 G[a][eps1][eps2]
                        cplx I[3][3][3];
                        for (int i = 0; i < 3; ++i)
                            for (int ip = 0; ip < 3; ++ip) {
                                cplx v0(0, 0), v1(0, 0), v2(0, 0);
                                for (const auto& c1 : tables[i])
                                    for (const auto& c2 : tables[ip]) {
                                        cplx cc = c1.c * c2.c;
                                        v0 += cc * G[0][c1.eps + 1][c2.eps + 1];
                                        v1 += cc * G[1][c1.eps + 1][c2.eps + 1];
                                        v2 += cc * G[2][c1.eps + 1][c2.eps + 1];
                                    }
                                I[0][i][ip] = v0;
                                I[1][i][ip] = v1;
                                I[2][i][ip] = v2;
                            }

                        // a_i = sum_k xi_k g_i,k(zeta)
                        double ai[3];
                        for (int i = 0; i < 3; ++i)
                            ai[i] = xi[0] * Dz.g[i][0] + xi[1] * Dz.g[i][1] +
                                    xi[2] * Dz.g[i][2];
                        const cplx pref = cplx(0.0, -1.0) * (amp2 * wt);
                        for (int a = 0; a < 3; ++a) {
                            cplx h[3];
                            for (int ip = 0; ip < 3; ++ip)
                                h[ip] = ai[0] * I[a][0][ip] + ai[1] * I[a][1][ip] +
                                        ai[2] * I[a][2][ip];
                            for (int l = 0; l < 4; ++l)
                                acc[a][l] += pref * (h[0] * De.g[0][l] +
                                                     h[1] * De.g[1][l] +
                                                     h[2] * De.g[2][l]);
                        }
                        double bracket = Dz.g[2][0] * De.g[2][0];
                        brk_min = std::min(brk_min, bracket);
                        brk_max = std::max(brk_max, bracket);
                        acc_j133 += pref * lerw * bracket * I[0][2][2];
                        if (with_k1_split) {
                            for (int k = 0; k < 3; ++k)
                                for (int l = 0; l < 3; ++l) {
                                    // row 1 of the Leray symbol: delta_{1l} - xi1 xi_l / |xi|^2
                                    double coeff = (l == 0 ? 1.0 : 0.0) -
                                                   xi[0] * xi[l] / n2;
                                    cplx sum(0, 0);
                                    for (int i = 0; i < 3; ++i)
                                        for (int ip = 0; ip < 3; ++ip)
                                            sum += Dz.g[i][k] * De.g[ip][l] *
                                                   I[0][i][ip];
                                    acc_kl[k][l] += (-amp2 * wt) * coeff * xi[k] * sum;
                                }
                        }
                    }
        }
    }

    SecondIterateValue out;
    Mat4 P = leray_matrix(xi);
    auto mm = multiplier_matrices(xi, prm);
    auto p1 = mat4_apply(P, acc[0]);
    auto p2 = mat4_apply(P, acc[1]);
    std::array<cplx, 4> d31;
    for (int l = 0; l < 4; ++l) d31[l] = acc[2][l] - acc[0][l];
    auto p3 = mat4_apply(P, d31);
    auto t2 = mat4_apply(mm.m2, p2);
    auto t3 = mat4_apply(mm.m3, p3);
    for (int l = 0; l < 4; ++l) out.value[l] = p1[l] + t2[l] + t3[l];
    out.k1 = std::abs(p1[0]);
    out.k2 = std::abs(t2[0]);
    out.k3 = std::abs(t3[0]);
    out.j133 = std::abs(acc_j133);
    out.bracket_min = brk_min;
    out.bracket_max = brk_max;
    if (with_k1_split)
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) out.k1_split[k][l] = std::abs(acc_kl[k][l]);
    return out;
}

struct SecondIterateNode {
    Vec3 xi;
    double weight;
    SecondIterateValue val;
};

struct SecondIterateResult {
    std::vector<SecondIterateNode> nodes;
    double l1_value = 0.0;  // int_E |F[A2]| dxi (pointwise C^4 magnitude)
    double l1_k1 = 0.0, l1_k2 = 0.0, l1_k3 = 0.0, l1_j133 = 0.0;
    double lower_bound = 0.0;  // C_E * l1_value
    double c_e = 0.0;
    double bracket_min = 0.0, bracket_max = 0.0;
};

/// Detection constant of the block-restriction bound: with the partition
/// summing to one on E, || . ||_{FB^{-1}_{1,r}} >= C_E || F[.] ||_{L^1(E)}
/// with C_E = (min_j 2^{-j}) x (min partition mass on E) / #blocks meeting E.
inline double detection_constant(const EBox& e, const DyadicPartition& part,
                                 int probe = 5) {
    std::vector<int> blocks;
    double min_mass = 1e300;
    for (int j = part.j_min; j <= part.j_max; ++j) {
        double mx = 0.0;
        for (int a = 0; a <= probe; ++a)
            for (int b = 0; b <= probe; ++b)
                for (int c = 0; c <= probe; ++c) {
                    double x = e.lo[0] + (e.hi[0] - e.lo[0]) * a / probe;
                    double y = e.lo[1] + (e.hi[1] - e.lo[1]) * b / probe;
                    double z = e.lo[2] + (e.hi[2] - e.lo[2]) * c / probe;
                    mx = std::max(mx, part.psi_hat(std::sqrt(x * x + y * y + z * z), j));
                }
        if (mx > 0.0) blocks.push_back(j);
    }
    if (blocks.empty()) return 0.0;
    for (int a = 0; a <= probe; ++a)
        for (int b = 0; b <= probe; ++b)
            for (int c = 0; c <= probe; ++c) {
                double x = e.lo[0] + (e.hi[0] - e.lo[0]) * a / probe;
                double y = e.lo[1] + (e.hi[1] - e.lo[1]) * b / probe;
                double z = e.lo[2] + (e.hi[2] - e.lo[2]) * c / probe;
                double r = std::sqrt(x * x + y * y + z * z);
                double mass = 0.0;
                for (int j : blocks) mass += part.psi_hat(r, j);
                min_mass = std::min(min_mass, mass);
            }
    int jmax = *std::max_element(blocks.begin(), blocks.end());
    return min_mass * std::pow(2.0, -double(jmax)) / double(blocks.size());
}

/// Evaluate F[A2(f^M)](., t) on a tensor Gauss grid over the E box and
/// integrate. Parallel over xi nodes; per-node results land in fixed slots
/// so the reduction order is deterministic.
inline SecondIterateResult second_iterate_on_E(const CounterexampleConfig& cfg,
                                               double t) {
    cfg.validate();
    if (t < cfg.window_lo() * (1.0 - 1e-12) || t > cfg.window_hi() * (1.0 + 1e-12))
        throw std::invalid_argument("second_iterate_on_E: t outside window");
    const int Q = cfg.quad_points_xi;
    std::array<GaussRule, 3> rules;
    for (int d = 0; d < 3; ++d)
        rules[d] = gauss_on(cfg.e_region.lo[d], cfg.e_region.hi[d], Q);
    SecondIterateResult res;
    res.nodes.resize(size_t(Q) * Q * Q);
    parallel_for(int64_t(res.nodes.size()), cfg.workers, [&](int64_t idx) {
        int a = int(idx / (Q * Q)), b = int((idx / Q) % Q), c = int(idx % Q);
        Vec3 xi{rules[0].nodes[a], rules[1].nodes[b], rules[2].nodes[c]};
        double w = rules[0].weights[a] * rules[1].weights[b] * rules[2].weights[c];
        res.nodes[idx] = {xi, w, second_iterate_at(xi, t, cfg)};
    });
    res.bracket_min = 1e300;
    res.bracket_max = -1e300;
    for (const auto& nd : res.nodes) {
        double mag = 0.0;
        for (int l = 0; l < 4; ++l) mag += std::norm(nd.val.value[l]);
        mag = std::sqrt(mag);
        res.l1_value += nd.weight * mag;
        res.l1_k1 += nd.weight * nd.val.k1;
        res.l1_k2 += nd.weight * nd.val.k2;
        res.l1_k3 += nd.weight * nd.val.k3;
        res.l1_j133 += nd.weight * nd.val.j133;
        res.bracket_min = std::min(res.bracket_min, nd.val.bracket_min);
        res.bracket_max = std::max(res.bracket_max, nd.val.bracket_max);
    }
    DyadicPartition part = make_partition(-8, 8);
    res.c_e = detection_constant(cfg.e_region, part);
    res.lower_bound = res.c_e * res.l1_value;
    return res;
}

// ---- the inflation experiment ----

struct InflationRow {
    int m;
    bool feasible = true;
    double data_norm = 0.0;   // ||f^M||_{FB^{-1}_{1,r}}
    double floor = 0.0;       // min over t samples of the E-restricted lower bound
    double floor_t = 0.0;
    double k1 = 0.0, k2 = 0.0, k3 = 0.0, j133 = 0.0;  // L^1(E) at floor_t
    double k23_hi = 0.0, k23_half = 0.0;  // K2+K3 at t_hi and t_hi/2
};

struct InflationReport {
    std::vector<InflationRow> rows;
    double c_e = 0.0;
    double r = 4.0;
    // verdict pieces
    bool data_decreasing = false;
    bool floor_positive = false;
    bool floor_flat = false;   // max/min across M within a factor 3
    bool k23_scales = false;   // halving t at least roughly halves K2+K3
    double floor_min = 0.0, floor_max = 0.0;
    double data_exponent = 0.0;  // fitted d log ||f^M|| / d log M
    bool verdict() const {
        return data_decreasing && floor_positive && floor_flat && k23_scales;
    }
};

/// Pinned verdict thresholds: the floor must stay above 0.005 (measured
/// values sit near 0.03 at nu = Omega = N = 1), min/max across M within a
/// factor 3, and halving t must shrink K2+K3 by at least 1.8x.
inline InflationReport inflation_experiment(const std::vector<int>& m_values,
                                            CounterexampleConfig cfg) {
    InflationReport rep;
    rep.r = cfg.r;
    bool first = true;
    for (int M : m_values) {
        CounterexampleConfig c = cfg;
        c.m_big = M;
        InflationRow row;
        row.m = M;
        try {
            c.validate();
        } catch (const std::exception&) {
            row.feasible = false;
            rep.rows.push_back(row);
            continue;
        }
        row.data_norm = counterexample_norm(c).value;
        double lo = c.window_lo(), hi = c.window_hi();
        double best = 1e300, best_t = lo;
        for (int i = 0; i < c.n_t_samples; ++i) {
            double t = lo * std::pow(hi / lo, c.n_t_samples == 1
                                                  ? 0.0
                                                  : double(i) / (c.n_t_samples - 1));
            auto r2 = second_iterate_on_E(c, t);
            if (first) {
                rep.c_e = r2.c_e;
                first = false;
            }
            if (r2.lower_bound < best) {
                best = r2.lower_bound;
                best_t = t;
                row.k1 = r2.l1_k1;
                row.k2 = r2.l1_k2;
                row.k3 = r2.l1_k3;
                row.j133 = r2.l1_j133;
            }
        }
        row.floor = best;
        row.floor_t = best_t;
        auto rhi = second_iterate_on_E(c, hi);
        row.k23_hi = rhi.l1_k2 + rhi.l1_k3;
        double th = std::max(0.5 * hi, lo);
        auto rhalf = second_iterate_on_E(c, th);
        row.k23_half = rhalf.l1_k2 + rhalf.l1_k3;
        rep.rows.push_back(row);
    }
    // verdicts over the feasible rows
    std::vector<const InflationRow*> ok;
    for (const auto& r : rep.rows)
        if (r.feasible) ok.push_back(&r);
    if (ok.size() >= 2) {
        rep.data_decreasing = true;
        for (size_t i = 1; i < ok.size(); ++i)
            if (!(ok[i]->data_norm < ok[i - 1]->data_norm)) rep.data_decreasing = false;
        double fmin = 1e300, fmax = 0.0;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        rep.k23_scales = true;
        for (const auto* r : ok) {
            fmin = std::min(fmin, r->floor);
            fmax = std::max(fmax, r->floor);
            double x = std::log(double(r->m)), y = std::log(r->data_norm);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            if (!(r->k23_hi >= 1.8 * r->k23_half)) rep.k23_scales = false;
        }
        double nn = double(ok.size());
        rep.data_exponent = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
        rep.floor_min = fmin;
        rep.floor_max = fmax;
        rep.floor_positive = fmin > 0.005;
        rep.floor_flat = fmax <= 3.0 * fmin;
    }
    return rep;
}

/// Support geometry check used by the pairing-completeness tests: the cube
/// at sigma 2^j e2 meets xi - (cube at sigma' 2^{j'} e2) only when j = j'
/// and sigma' = -sigma, for |xi| <= 1 and j, j' >= 1.
inline bool pairing_contributes(const Vec3& xi, int j, double sg_eta, int jp,
                                double sg_other) {
    for (int d = 0; d < 3; ++d) {
        double ce = (d == 1) ? sg_eta * std::ldexp(1.0, j) : 0.0;
        double co = (d == 1) ? sg_other * std::ldexp(1.0, jp) : 0.0;
        double lo = std::max(ce - 1.0, xi[d] - co - 1.0);
        double hi = std::min(ce + 1.0, xi[d] - co + 1.0);
        if (!(hi > lo)) return false;
    }
    return true;
}

}  // namespace fbflow
