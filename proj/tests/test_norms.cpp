#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fracspace/besov.hpp"
#include "fracspace/cocompact.hpp"
#include "fracspace/exponents.hpp"
#include "fracspace/norms.hpp"
#include "fracspace/testset.hpp"

using namespace fracspace;

TEST_CASE("lp norm of constants and zero") {
    const GridSpec g = GridSpec::make(2, {16, 32, 1}, {2.0, 3.0, 1.0});
    const GridFunction one = catalog_function(CatalogName::constant, {1.0}, g);
    const double V = g.volume();
    for (double p : {1.0, 2.0, 3.5, 7.0})
        CHECK(lp_norm(one, p) == Catch::Approx(std::pow(V, 1.0 / p)).epsilon(1e-13));
    CHECK(lp_norm(one, inf_exponent) == Catch::Approx(1.0));

    const GridFunction zero = GridFunction::zeros(g);
    CHECK(lp_norm(zero, 2.0) == 0.0);
    CHECK_THROWS_AS(lp_norm(one, 0.5), DomainError);
}

TEST_CASE("lp norm of a gaussian matches an independent quadrature oracle") {
    const GridSpec g = GridSpec::uniform(1, 128, 8.0);
    const double sigma = 0.5;
    const GridFunction f = catalog_function(CatalogName::gaussian_bump, {sigma}, g);
    const double norm2 = lp_norm(f, 2.0);

    // Independent oracle: refined direct quadrature of the formula squared.
    const int fine = 8 * g.n[0];
    double acc = 0.0;
    for (int i = 0; i < fine; ++i) {
        const double x = g.length[0] * i / fine;
        double v = 0.0;
        for (int m = -1; m <= 1; ++m) {
            const double d = x - 4.0 + m * g.length[0];
            v += std::exp(-d * d / (2.0 * sigma * sigma));
        }
        acc += v * v;
    }
    acc *= g.length[0] / fine;
    CHECK(norm2 == Catch::Approx(std::sqrt(acc)).epsilon(1e-10));
}

TEST_CASE("lp norm basics: homogeneity and triangle inequality") {
    const GridSpec g = GridSpec::uniform(1, 64, 2.0);
    const GridFunction a = random_function(g, 11, 0.6);
    const GridFunction b = random_function(g, 12, 0.6);
    for (double p : {1.0, 2.0, 4.0}) {
        GridFunction sc = a;
        for (cplx& z : sc.values) z *= -3.25;
        CHECK(lp_norm(sc, p) == Catch::Approx(3.25 * lp_norm(a, p)).epsilon(1e-12));
        GridFunction sum = a;
        for (std::size_t i = 0; i < sum.size(); ++i) sum.values[i] += b.values[i];
        CHECK(lp_norm(sum, p) <= lp_norm(a, p) + lp_norm(b, p) + 1e-12);
    }
}

TEST_CASE("bessel potential diagonal action") {
    const GridSpec g = GridSpec::uniform(1, 64, 2.0);

    SECTION("gamma = 0 is the identity") {
        const GridFunction f = random_function(g, 3, 0.8);
        const GridFunction out = bessel_potential(f, 0.0);
        for (std::size_t i = 0; i < f.size(); ++i) CHECK(out.values[i] == f.values[i]);
    }

    SECTION("pure modes are scaled by the multiplier") {
        const int mode = 7;
        GridFunction f = GridFunction::zeros(g, Kind::complex);
        for (int i = 0; i < g.n[0]; ++i)
            f.values[i] = std::polar(1.0, two_pi * mode * g.coordinate(0, i) / g.length[0]);
        const double xi = two_pi * mode / g.length[0];
        const double gamma = 1.3;
        const double expected = std::pow(1.0 + xi * xi, gamma / 2.0);
        const GridFunction out = bessel_potential(f, gamma);
        for (std::size_t i = 0; i < f.size(); ++i)
            CHECK(std::abs(out.values[i] - expected * f.values[i]) < 1e-12 * expected);
    }

    SECTION("gamma and -gamma invert each other") {
        const GridFunction f = random_function(g, 4, 0.8);
        const GridFunction back = bessel_potential(bessel_potential(f, 2.2), -2.2);
        double err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            err = std::max(err, std::abs(back.values[i] - f.values[i]));
            scale = std::max(scale, std::abs(f.values[i]));
        }
        CHECK(err <= 1e-11 * scale);
    }

    SECTION("multipliers compose additively") {
        const GridFunction f = random_function(g, 5, 0.8);
        const GridFunction two_step = bessel_potential(bessel_potential(f, 0.7), 1.1);
        const GridFunction one_step = bessel_potential(f, 1.8);
        double err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            err = std::max(err, std::abs(two_step.values[i] - one_step.values[i]));
            scale = std::max(scale, std::abs(one_step.values[i]));
        }
        CHECK(err <= 1e-12 * scale);
    }
}

TEST_CASE("sobolev norm closed forms") {
    const GridSpec g = GridSpec::uniform(1, 64, 2.0);
    const double V = g.volume();

    const GridFunction c = catalog_function(CatalogName::constant, {3.0}, g);
    for (double alpha : {0.3, 1.0, 2.5})
        CHECK(sobolev_norm(c, alpha, 2.0) == Catch::Approx(3.0 * std::sqrt(V)).epsilon(1e-12));
    CHECK(sobolev_norm(c, 0.7, 3.0) == Catch::Approx(3.0 * std::pow(V, 1.0 / 3.0)).epsilon(1e-12));

    const int mode = 5;
    GridFunction e = GridFunction::zeros(g, Kind::complex);
    for (int i = 0; i < g.n[0]; ++i)
        e.values[i] = std::polar(1.0, two_pi * mode * g.coordinate(0, i) / g.length[0]);
    const double xi = two_pi * mode / g.length[0];
    const double alpha = 0.8;
    CHECK(sobolev_norm(e, alpha, 2.0) ==
          Catch::Approx(std::pow(1.0 + xi * xi, alpha / 2.0) * std::sqrt(V)).epsilon(1e-12));

    CHECK_THROWS_AS(sobolev_norm(c, -0.1, 2.0), DomainError);
    CHECK_THROWS_AS(sobolev_norm(c, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(sobolev_norm(c, 1.0, inf_exponent), DomainError);
}

TEST_CASE("sobolev norm agrees with the spectral-sum route at p = 2") {
    const GridSpec g = GridSpec::uniform(1, 128, 4.0);
    for (std::uint64_t seed = 20; seed < 30; ++seed) {
        const GridFunction f = random_function(g, seed, 0.7);
        for (double alpha : {0.4, 1.0, 1.7}) {
            const double via_lambda = sobolev_norm(f, alpha, 2.0);
            const double via_sum = hs_norm_spectral(f, alpha);
            CHECK(via_lambda == Catch::Approx(via_sum).epsilon(1e-12));
        }
    }
}

TEST_CASE("sobolev norm is monotone in alpha at p = 2") {
    const GridSpec g = GridSpec::uniform(1, 64, 2.0);
    for (std::uint64_t seed = 40; seed < 45; ++seed) {
        const GridFunction f = random_function(g, seed, 0.7);
        double prev = sobolev_norm(f, 0.0, 2.0);
        for (double alpha : {0.25, 0.5, 1.0, 1.5}) {
            const double cur = sobolev_norm(f, alpha, 2.0);
            CHECK(cur >= prev * (1.0 - 1e-13));
            prev = cur;
        }
    }
}

TEST_CASE("Holder interpolation inequality across random functions") {
    const GridSpec g = GridSpec::uniform(1, 128, 3.0);
    const std::array<std::array<double, 3>, 4> triples{{
        {1.0, 2.0, 4.0}, {2.0, 3.0, 6.0}, {1.5, 2.0, 8.0}, {2.0, 4.0, inf_exponent}}};
    for (std::uint64_t seed = 60; seed < 80; ++seed) {
        const GridFunction f = random_function(g, seed, 0.6);
        for (const auto& tr : triples) {
            const double theta = ExponentBook::holder_theta(tr[0], tr[1], tr[2]);
            const double lhs = lp_norm(f, tr[1]);
            const double rhs =
                std::pow(lp_norm(f, tr[0]), 1.0 - theta) * std::pow(lp_norm(f, tr[2]), theta);
            CHECK(lhs <= rhs + 1e-12 * std::max(lhs, rhs));
        }
    }
}

TEST_CASE("all norms are invariant under lattice shifts") {
    const GridSpec g = GridSpec::uniform(1, 64, 4.0);
    for (std::uint64_t seed = 90; seed < 95; ++seed) {
        const GridFunction f = random_function(g, seed, 0.7);
        const GridFunction shifted = lattice_shift(f, LatticeShift{{17, 0, 0}});
        for (double p : {1.0, 2.0, 4.0})
            CHECK(lp_norm(shifted, p) == Catch::Approx(lp_norm(f, p)).epsilon(1e-12));
        CHECK(sobolev_norm(shifted, 0.9, 2.0) ==
              Catch::Approx(sobolev_norm(f, 0.9, 2.0)).epsilon(1e-12));
        CHECK(sobolev_norm(shifted, 1.0, 3.0) ==
              Catch::Approx(sobolev_norm(f, 1.0, 3.0)).epsilon(1e-12));
    }
}

TEST_CASE("exponent book") {
    CHECK(ExponentBook::intermediate_p(2.0, 6.0, 0.5) == Catch::Approx(3.0));
    CHECK(ExponentBook::intermediate_p(2.0, 4.0, 1e-9) == Catch::Approx(2.0).epsilon(1e-6));
    CHECK(ExponentBook::interp_constant(0.5, 2.0) == Catch::Approx(std::sqrt(2.0)));
    CHECK(ExponentBook::interp_constant(0.31, inf_exponent) == 1.0);

    CHECK(ExponentBook::critical_exponent(1.0, 2.0, 3) == Catch::Approx(6.0));
    CHECK(ExponentBook::critical_exponent(1.0, 2.0, 1) == inf_exponent);
    CHECK(ExponentBook::critical_exponent(0.25, 2.0, 1) == Catch::Approx(4.0));

    CHECK(ExponentBook::holder_theta(2.0, 3.0, 6.0) == Catch::Approx(0.5));
    CHECK_THROWS_AS(ExponentBook::holder_theta(3.0, 2.0, 6.0), DomainError);
    CHECK_THROWS_AS(ExponentBook::intermediate_p(6.0, 2.0, 0.5), DomainError);

    const auto entries = exponent_book(2.0, 6.0, 0.5);
    CHECK(entries.p == Catch::Approx(3.0));
    CHECK(entries.c_theta_p == Catch::Approx(ExponentBook::interp_constant(0.5, 3.0)));
}

TEST_CASE("besov norm basics") {
    const GridSpec g = GridSpec::uniform(1, 64, 4.0);

    const GridFunction zero = GridFunction::zeros(g);
    CHECK(besov_norm(zero, 0.5, 2.0, 2.0) == 0.0);

    const GridFunction f = random_function(g, 101, 0.5);
    const double base = besov_norm(f, 0.5, 2.0, 2.0);
    GridFunction sc = f;
    for (cplx& z : sc.values) z *= -2.5;
    CHECK(besov_norm(sc, 0.5, 2.0, 2.0) == Catch::Approx(2.5 * base).epsilon(1e-11));

    CHECK_THROWS_AS(besov_norm(f, -0.5, 2.0, 2.0), DomainError);
    CHECK_THROWS_AS(besov_norm(f, 0.5, 1.0, 2.0), DomainError);
    CHECK_THROWS_AS(besov_norm(f, 0.5, 2.0, 0.5), DomainError);
}

TEST_CASE("besov norm brackets the H^s norm at p = q = 2") {
    // Equivalent-norm bracket measured against the exact H^s norm and frozen
    // as a regression bound; the spec allows C <= 4.
    const GridSpec g = GridSpec::uniform(1, 64, 4.0);
    const double s = 0.5;
    double worst_lo = 1.0, worst_hi = 1.0;
    for (std::uint64_t seed = 200; seed < 400; ++seed) {
        const GridFunction f = random_function(g, seed, 0.5);
        const double hs = hs_norm_spectral(f, s);
        if (hs == 0.0) continue;
        const double ratio = besov_norm(f, s, 2.0, 2.0) / hs;
        worst_lo = std::min(worst_lo, ratio);
        worst_hi = std::max(worst_hi, ratio);
        CHECK(ratio >= 0.25);
        CHECK(ratio <= 4.0);
    }
    INFO("besov/Hs ratio range [" << worst_lo << ", " << worst_hi << "]");
    CHECK(worst_lo > 0.25);
    CHECK(worst_hi < 4.0);
}
