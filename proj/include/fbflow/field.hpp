#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbflow/grid.hpp"

namespace fbflow {

using cplx = std::complex<double>;

/// Four-component complex field on a frequency lattice, representing
/// (u1, u2, u3, sqrt(g) theta / script_n) in Fourier variables. The zero
/// wavenumber coefficient is kept at exactly zero (homogeneous setting,
/// distributions modulo polynomials).
struct SpectralField {
    FrequencyGrid grid;
    std::array<std::vector<cplx>, 4> comp;
    bool real_flag = true;  // field is intended to be real in physical space

    SpectralField() = default;
    explicit SpectralField(const FrequencyGrid& g, bool real = true)
        : grid(g), real_flag(real) {
        for (auto& c : comp) c.assign(g.size(), cplx(0.0, 0.0));
    }

    cplx& at(int c, int ix, int iy, int iz) { return comp[c][grid.index_of(ix, iy, iz)]; }
    const cplx& at(int c, int ix, int iy, int iz) const {
        return comp[c][grid.index_of(ix, iy, iz)];
    }

    void zero_mode_clear() {
        for (auto& c : comp) c[0] = cplx(0.0, 0.0);
    }

    SpectralField& operator+=(const SpectralField& o) {
        require_same_grid(o);
        for (int c = 0; c < 4; ++c)
            for (int64_t i = 0; i < grid.size(); ++i) comp[c][i] += o.comp[c][i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        require_same_grid(o);
        for (int c = 0; c < 4; ++c)
            for (int64_t i = 0; i < grid.size(); ++i) comp[c][i] -= o.comp[c][i];
        return *this;
    }
    SpectralField& operator*=(double s) {
        for (auto& c : comp)
            for (auto& v : c) v *= s;
        return *this;
    }
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

    void require_same_grid(const SpectralField& o) const {
        if (!(grid == o.grid))
            throw std::invalid_argument("SpectralField: grid mismatch");
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& c : comp)
            for (const auto& v : c) m = std::max(m, std::abs(v));
        return m;
    }

    /// Max deviation from conjugate symmetry hat(u)(-xi) == conj(hat(u)(xi)).
    double conjugate_symmetry_defect() const {
        double d = 0.0;
        const int n = grid.n;
        for (int c = 0; c < 4; ++c)
            for (int ix = 0; ix < n; ++ix) {
                int jx = (n - ix) % n;
                for (int iy = 0; iy < n; ++iy) {
                    int jy = (n - iy) % n;
                    for (int iz = 0; iz < n; ++iz) {
                        int jz = (n - iz) % n;
                        cplx a = comp[c][grid.index_of(ix, iy, iz)];
                        cplx b = comp[c][grid.index_of(jx, jy, jz)];
                        d = std::max(d, std::abs(a - std::conj(b)));
                    }
                }
            }
        return d;
    }
};

/// i (xi1 u1 + xi2 u2 + xi3 u3) per lattice point; fourth component ignored.
inline std::vector<cplx> divergence(const SpectralField& f) {
    const auto& g = f.grid;
    std::vector<cplx> out(g.size());
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            for (int iz = 0; iz < g.n; ++iz) {
                int64_t i = g.index_of(ix, iy, iz);
                cplx s = g.wn(ix) * f.comp[0][i] + g.wn(iy) * f.comp[1][i] +
                         g.wn(iz) * f.comp[2][i];
                out[i] = cplx(0.0, 1.0) * s;
            }
    return out;
}

inline double max_divergence(const SpectralField& f) {
    double m = 0.0;
    for (const auto& v : divergence(f)) m = std::max(m, std::abs(v));
    return m;
}

// ---- serialization: flat binary, bit-exact round trip ----
// layout: magic "FBF1", u32 version, u64 n, f64 box_scale, u8 real_flag,
// then 4 * n^3 complex<double> in row-major (x-major) wavenumber order.

inline void save_field(const SpectralField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_field: cannot open " + path);
    os.write("FBF1", 4);
    uint32_t ver = 1;
    uint64_t n = uint64_t(f.grid.n);
    uint8_t rf = f.real_flag ? 1 : 0;
    os.write(reinterpret_cast<const char*>(&ver), sizeof ver);
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    os.write(reinterpret_cast<const char*>(&f.grid.box_scale), sizeof(double));
    os.write(reinterpret_cast<const char*>(&rf), sizeof rf);
    for (const auto& c : f.comp)
        os.write(reinterpret_cast<const char*>(c.data()),
                 std::streamsize(c.size() * sizeof(cplx)));
    if (!os) throw std::runtime_error("save_field: write failed: " + path);
}

inline SpectralField load_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_field: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (std::memcmp(magic, "FBF1", 4) != 0)
        throw std::runtime_error("load_field: bad magic in " + path);
    uint32_t ver = 0;
    uint64_t n = 0;
    double L = 0.0;
    uint8_t rf = 0;
    is.read(reinterpret_cast<char*>(&ver), sizeof ver);
    is.read(reinterpret_cast<char*>(&n), sizeof n);
    is.read(reinterpret_cast<char*>(&L), sizeof L);
    is.read(reinterpret_cast<char*>(&rf), sizeof rf);
    if (ver != 1) throw std::runtime_error("load_field: unsupported version");
    SpectralField f(make_grid(int(n), L), rf != 0);
    for (auto& c : f.comp)
        is.read(reinterpret_cast<char*>(c.data()),
                std::streamsize(c.size() * sizeof(cplx)));
    if (!is) throw std::runtime_error("load_field: truncated file: " + path);
    return f;
}

}  // namespace fbflow
