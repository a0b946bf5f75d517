#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fbflow {

/// Periodic frequency lattice. Wavenumbers along each axis are k/box_scale
/// for integer k in [-n/2, n/2), stored in FFT order (0, 1, ..., n/2-1,
/// -n/2, ..., -1).
struct FrequencyGrid {
    int n = 0;                     // lattice points per axis, even, >= 8
    double box_scale = 1.0;        // periodic box half-period L
    std::vector<double> wavenumbers;  // per-axis values in FFT order

    int64_t size() const { return int64_t(n) * n * n; }

    int index_of(int ix, int iy, int iz) const {
        return (ix * n + iy) * n + iz;
    }

    /// Signed integer mode for storage index i along one axis.
    int mode(int i) const { return i < n / 2 ? i : i - n; }

    double wn(int i) const { return wavenumbers[i]; }

    /// Storage index of integer mode k (k in [-n/2, n/2)).
    int index_of_mode(int k) const { return k >= 0 ? k : k + n; }

    double spacing() const { return 1.0 / box_scale; }
    double cell_volume() const { return 1.0 / (box_scale * box_scale * box_scale); }
    /// Largest representable wavenumber magnitude along an axis.
    double nyquist() const { return (n / 2) / box_scale; }

    bool operator==(const FrequencyGrid& o) const {
        return n == o.n && box_scale == o.box_scale;
    }
};

inline FrequencyGrid make_grid(int n_per_axis, double box_scale) {
    if (n_per_axis < 8 || n_per_axis % 2 != 0)
        throw std::invalid_argument("make_grid: n_per_axis must be even and >= 8");
    if (!(box_scale > 0.0))
        throw std::invalid_argument("make_grid: box_scale must be positive");
    FrequencyGrid g;
    g.n = n_per_axis;
    g.box_scale = box_scale;
    g.wavenumbers.resize(n_per_axis);
    for (int i = 0; i < n_per_axis; ++i)
        g.wavenumbers[i] = g.mode(i) / box_scale;
    return g;
}

}  // namespace fbflow
