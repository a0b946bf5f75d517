#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "fbflow/field.hpp"
#include "fbflow/params.hpp"

namespace fbflow {

using Mat4 = std::array<std::array<double, 4>, 4>;
using Vec3 = std::array<double, 3>;

inline Mat4 zero_mat4() {
    Mat4 m{};
    return m;
}

/// |xi|' = sqrt(N^2 xi1^2 + N^2 xi2^2 + Omega^2 xi3^2).
inline double xi_prime(const Vec3& xi, const PhysicalParams& prm) {
    const double N = prm.n_big, Om = prm.omega;
    return std::sqrt(N * N * (xi[0] * xi[0] + xi[1] * xi[1]) +
                     Om * Om * xi[2] * xi[2]);
}

/// Partial Helmholtz projector: Leray on the first three components
/// (delta_jk - xi_j xi_k / |xi|^2, the symbol of delta_jk + R_j R_k), identity
/// on the fourth.
inline Mat4 leray_matrix(const Vec3& xi) {
    Mat4 P = zero_mat4();
    double n2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    for (int j = 0; j < 4; ++j) P[j][j] = 1.0;
    if (n2 == 0.0) return P;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) P[j][k] -= xi[j] * xi[k] / n2;
    return P;
}

struct MultiplierMatrices {
    Mat4 m1, m2, m3;
    bool degenerate = false;  // |xi|' == 0 fallback in effect
};

/// The three oscillation matrices of the Stokes-Coriolis-Stratification
/// semigroup, evaluated at one frequency. On the divergence-free-augmented
/// subspace, M3 is the projector onto the non-oscillating mode, M1 the
/// projector onto the rotating plane, and M2 its quarter-turn, so that
///   T(t) = e^{-nu |xi|^2 t} [cos(w t) M1 + sin(w t) M2 + M3],
/// with w = |xi|'/|xi|, solves dv/dt = -nu |xi|^2 v - P B v for the Coriolis/
/// stratification coupling B of the P = 1 system. Relative to the printed
/// source, M2 carries the opposite overall sign and has |xi_h|^2 in its
/// (3,4)/(4,3) entries; this variant is the one that satisfies the
/// composition law T(s)T(t) = T(s+t) (checked against a matrix-exponential
/// oracle in the tests).
///
/// When |xi|' == 0 the formulas are singular; the fallback convention is
/// M1 = M2 = 0 and M3 = the partial Helmholtz projector, the limit along
/// N = Omega -> 0 (identity on divergence-free-augmented vectors; at
/// xi_h = 0 it reduces to the identity on components 1,2,4 with the third
/// row and column zero). The flag marks that case.
inline MultiplierMatrices multiplier_matrices(const Vec3& xi,
                                              const PhysicalParams& prm) {
    const double N = prm.n_big, Om = prm.omega;
    const double x1 = xi[0], x2 = xi[1], x3 = xi[2];
    const double xh2 = x1 * x1 + x2 * x2;
    const double n2 = xh2 + x3 * x3;
    const double p2 = N * N * xh2 + Om * Om * x3 * x3;
    MultiplierMatrices out;
    if (p2 == 0.0 || n2 == 0.0) {
        out.m1 = zero_mat4();
        out.m2 = zero_mat4();
        out.m3 = leray_matrix(xi);
        out.degenerate = true;
        return out;
    }
    const double n = std::sqrt(n2), p = std::sqrt(p2), np = n * p;

    Mat4& M1 = out.m1;
    M1[0] = {Om * Om * x3 * x3 / p2, 0.0, -N * N * x1 * x3 / p2, Om * N * x2 * x3 / p2};
    M1[1] = {0.0, Om * Om * x3 * x3 / p2, -N * N * x2 * x3 / p2, -Om * N * x1 * x3 / p2};
    M1[2] = {-Om * Om * x1 * x3 / p2, -Om * Om * x2 * x3 / p2, N * N * xh2 / p2, 0.0};
    M1[3] = {Om * N * x2 * x3 / p2, -Om * N * x1 * x3 / p2, 0.0, N * N * xh2 / p2};

    Mat4& M2 = out.m2;
    M2[0] = {0.0, Om * x3 * x3 / np, -Om * x2 * x3 / np, -N * x1 * x3 / np};
    M2[1] = {-Om * x3 * x3 / np, 0.0, Om * x1 * x3 / np, -N * x2 * x3 / np};
    M2[2] = {Om * x2 * x3 / np, -Om * x1 * x3 / np, 0.0, N * xh2 / np};
    M2[3] = {N * x1 * x3 / np, N * x2 * x3 / np, -N * xh2 / np, 0.0};

    Mat4& M3 = out.m3;
    M3[0] = {N * N * x2 * x2 / p2, -N * N * x1 * x2 / p2, 0.0, -N * Om * x2 * x3 / p2};
    M3[1] = {-N * N * x1 * x2 / p2, N * N * x1 * x1 / p2, 0.0, N * Om * x1 * x3 / p2};
    M3[2] = {0.0, 0.0, 0.0, 0.0};
    M3[3] = {-N * Om * x2 * x3 / p2, N * Om * x1 * x3 / p2, 0.0, Om * Om * x3 * x3 / p2};
    return out;
}

template <typename T>
inline std::array<T, 4> mat4_apply(const Mat4& m, const std::array<T, 4>& v) {
    std::array<T, 4> out;
    for (int j = 0; j < 4; ++j)
        out[j] = m[j][0] * v[0] + m[j][1] * v[1] + m[j][2] * v[2] + m[j][3] * v[3];
    return out;
}

/// T_{Omega,N}(t): per-mode multiplier application. Zero mode stays zero.
inline SpectralField apply_semigroup(const SpectralField& f, double t,
                                     const PhysicalParams& prm) {
    if (t < 0.0) throw std::invalid_argument("apply_semigroup: t must be >= 0");
    const auto& g = f.grid;
    SpectralField out(g, f.real_flag);
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            for (int iz = 0; iz < g.n; ++iz) {
                Vec3 xi{g.wn(ix), g.wn(iy), g.wn(iz)};
                double n2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
                int64_t i = g.index_of(ix, iy, iz);
                if (n2 == 0.0) continue;
                auto mm = multiplier_matrices(xi, prm);
                double w = xi_prime(xi, prm) / std::sqrt(n2);
                double heat = std::exp(-prm.nu * n2 * t);
                double c = std::cos(w * t) * heat, s = std::sin(w * t) * heat;
                std::array<cplx, 4> v{f.comp[0][i], f.comp[1][i], f.comp[2][i],
                                      f.comp[3][i]};
                auto a1 = mat4_apply(mm.m1, v);
                auto a2 = mat4_apply(mm.m2, v);
                auto a3 = mat4_apply(mm.m3, v);
                for (int cpt = 0; cpt < 4; ++cpt)
                    out.comp[cpt][i] = c * a1[cpt] + s * a2[cpt] + heat * a3[cpt];
            }
    out.zero_mode_clear();
    return out;
}

/// Partial Helmholtz projection: Leray on the velocity part, fourth
/// component untouched, zero mode zero.
inline SpectralField helmholtz_project(const SpectralField& f) {
    const auto& g = f.grid;
    SpectralField out = f;
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            for (int iz = 0; iz < g.n; ++iz) {
                Vec3 xi{g.wn(ix), g.wn(iy), g.wn(iz)};
                double n2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
                if (n2 == 0.0) continue;
                int64_t i = g.index_of(ix, iy, iz);
                cplx dot = xi[0] * f.comp[0][i] + xi[1] * f.comp[1][i] +
                           xi[2] * f.comp[2][i];
                for (int c = 0; c < 3; ++c)
                    out.comp[c][i] = f.comp[c][i] - xi[c] * dot / n2;
            }
    out.zero_mode_clear();
    return out;
}

}  // namespace fbflow
