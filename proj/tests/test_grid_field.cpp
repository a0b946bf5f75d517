#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "fbflow/field.hpp"
#include "fbflow/random_fields.hpp"
#include "fbflow/semigroup.hpp"

using namespace fbflow;

TEST_CASE("make_grid wavenumber layout") {
    FrequencyGrid g = make_grid(8, 1.0);
    std::vector<double> ws = g.wavenumbers;
    std::sort(ws.begin(), ws.end());
    std::vector<double> expect{-4, -3, -2, -1, 0, 1, 2, 3};
    REQUIRE(ws == expect);

    FrequencyGrid g2 = make_grid(16, 2.0);
    double finest = 0.0;
    for (double w : g2.wavenumbers)
        if (w > finest) finest = w;
    REQUIRE(finest == 3.5);
    REQUIRE(g2.spacing() == 0.5);

    // zero wavenumber present exactly once, symmetric except Nyquist
    REQUIRE(std::count(g2.wavenumbers.begin(), g2.wavenumbers.end(), 0.0) == 1);
    for (double w : g2.wavenumbers) {
        if (w == -4.0) continue;  // Nyquist entry is unpaired
        REQUIRE(std::count(g2.wavenumbers.begin(), g2.wavenumbers.end(), -w) == 1);
    }
}

TEST_CASE("make_grid precondition errors") {
    REQUIRE_THROWS_AS(make_grid(7, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(make_grid(6, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(make_grid(9, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(make_grid(16, 0.0), std::invalid_argument);
}

TEST_CASE("divergence of the rotational profile vanishes") {
    FrequencyGrid g = make_grid(16, 1.0);
    SpectralField f(g);
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            for (int iz = 0; iz < g.n; ++iz) {
                double x = g.wn(ix), y = g.wn(iy), z = g.wn(iz);
                double gauss = std::exp(-0.1 * (x * x + y * y + z * z));
                int64_t i = g.index_of(ix, iy, iz);
                f.comp[0][i] = y * gauss;
                f.comp[1][i] = -x * gauss;
            }
    f.zero_mode_clear();
    REQUIRE(max_divergence(f) < 1e-14);
}

TEST_CASE("divergence of a single x-mode") {
    FrequencyGrid g = make_grid(8, 1.0);
    SpectralField f(g);
    f.at(0, g.index_of_mode(1), 0, 0) = cplx(1.0, 0.0);
    auto d = divergence(f);
    cplx at_mode = d[g.index_of(g.index_of_mode(1), 0, 0)];
    REQUIRE(std::abs(at_mode - cplx(0.0, 1.0)) < 1e-15);
    double elsewhere = 0.0;
    for (int64_t i = 0; i < g.size(); ++i)
        if (i != g.index_of(g.index_of_mode(1), 0, 0))
            elsewhere = std::max(elsewhere, std::abs(d[i]));
    REQUIRE(elsewhere == 0.0);
}

TEST_CASE("projected random field is solenoidal") {
    FrequencyGrid g = make_grid(16, 1.0);
    SpectralField f = random_solenoidal(g, 1.0, 6.0, 42);
    REQUIRE(max_divergence(f) < 1e-12 * f.max_abs());
    REQUIRE(f.conjugate_symmetry_defect() < 1e-12);
    // zero mode stays zero
    for (int c = 0; c < 4; ++c) REQUIRE(f.comp[c][0] == cplx(0.0, 0.0));
}

TEST_CASE("field serialization round-trips bit-exactly") {
    FrequencyGrid g = make_grid(8, 2.5);
    SpectralField f = random_band_limited(g, 0.1, 1.5, 7);
    f.real_flag = false;
    std::string p1 = "serialize_a.bin", p2 = "serialize_b.bin";
    save_field(f, p1);
    SpectralField f2 = load_field(p1);
    REQUIRE(f2.grid.n == f.grid.n);
    REQUIRE(f2.grid.box_scale == f.grid.box_scale);
    REQUIRE(f2.real_flag == f.real_flag);
    save_field(f2, p2);
    std::ifstream a(p1, std::ios::binary), b(p2, std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    REQUIRE(sa == sb);
    for (int c = 0; c < 4; ++c) REQUIRE(f2.comp[c] == f.comp[c]);
    std::remove(p1.c_str());
    std::remove(p2.c_str());

    std::ofstream bad("serialize_bad.bin", std::ios::binary);
    bad << "not a field";
    bad.close();
    REQUIRE_THROWS_AS(load_field("serialize_bad.bin"), std::runtime_error);
    REQUIRE_THROWS_AS(load_field("no_such_file.bin"), std::runtime_error);
    std::remove("serialize_bad.bin");
}

TEST_CASE("physical params enforce Prandtl one") {
    REQUIRE_THROWS_AS(PhysicalParams(1.0, 0.5, 0.0, 1.0, 1.0), std::invalid_argument);
    PhysicalParams p = PhysicalParams::prandtl_one(0.7, 2.0, 3.0, 4.0);
    REQUIRE(p.n_big == 3.0 * std::sqrt(4.0));
    REQUIRE(p.burger.has_value());
    REQUIRE(*p.burger == 2.0 / 3.0);
    PhysicalParams q = PhysicalParams::from_n_big(1.0, 1.0, 0.0);
    REQUIRE_FALSE(q.burger.has_value());
}
