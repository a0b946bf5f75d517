#pragma once

#include <cstdint>
#include <random>

#include "fbflow/field.hpp"
#include "fbflow/littlewood_paley.hpp"
#include "fbflow/semigroup.hpp"

namespace fbflow {

/// Random real-valued 4-component field supported on |xi| in [r_lo, r_hi]:
/// gaussian coefficients on a half-space of modes, conjugates mirrored so the
/// field is real, zero mode zero.
inline SpectralField random_band_limited(const FrequencyGrid& g, double r_lo,
                                         double r_hi, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralField f(g, true);
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            for (int iz = 0; iz < g.n; ++iz) {
                int kx = g.mode(ix), ky = g.mode(iy), kz = g.mode(iz);
                // pick one representative of each +-k pair, skip Nyquist rows
                // (unpaired under k -> -k) and the zero mode
                if (std::abs(kx) == g.n / 2 || std::abs(ky) == g.n / 2 ||
                    std::abs(kz) == g.n / 2)
                    continue;
                bool rep = kx > 0 || (kx == 0 && ky > 0) ||
                           (kx == 0 && ky == 0 && kz > 0);
                if (!rep) continue;
                double r = abs_xi(g, ix, iy, iz);
                if (r < r_lo || r > r_hi) continue;
                int64_t i = g.index_of(ix, iy, iz);
                int64_t im = g.index_of(g.index_of_mode(-kx), g.index_of_mode(-ky),
                                        g.index_of_mode(-kz));
                for (int c = 0; c < 4; ++c) {
                    cplx v(gauss(rng), gauss(rng));
                    f.comp[c][i] = v;
                    f.comp[c][im] = std::conj(v);
                }
            }
    f.zero_mode_clear();
    return f;
}

/// Same, projected to the divergence-free-augmented space.
inline SpectralField random_solenoidal(const FrequencyGrid& g, double r_lo,
                                       double r_hi, uint64_t seed) {
    return helmholtz_project(random_band_limited(g, r_lo, r_hi, seed));
}

/// Rescale so the data-space FB norm equals target (no-op on the zero field).
inline SpectralField scaled_to_norm(SpectralField f, double target,
                                    const BesovParams& prm, const DyadicPartition& part) {
    double n = fb_norm(f, prm, part);
    if (n > 0.0) f *= target / n;
    return f;
}

}  // namespace fbflow
