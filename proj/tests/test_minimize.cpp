#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fracspace/cocompact.hpp"
#include "fracspace/minimize.hpp"
#include "fracspace/testset.hpp"
#include "quotient_oracle.hpp"

using namespace fracspace;
using fracspace::testing::QuotientOracle;

namespace {

MinimizeProblem reference_problem() {
    MinimizeProblem prob;
    prob.alpha = 0.6;
    prob.q = 4.0;
    prob.grid = GridSpec::uniform(1, 256, 16.0);
    prob.tol_el = 1e-8;
    return prob;
}

} // namespace

TEST_CASE("q = 2 diagnostic recovers kappa = 1 at the zero mode") {
    MinimizeProblem prob = reference_problem();
    prob.q = 2.0;
    CHECK_THROWS_AS(solve_kappa(prob, default_seed(prob.grid)), PreconditionError);
    prob.allow_q2_diagnostic = true;
    const MinimizerResult res = solve_kappa(prob, default_seed(prob.grid));
    CHECK(res.converged);
    CHECK(res.energy == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("kappa solve matches the 20-restart brute-force oracle") {
    const MinimizeProblem prob = reference_problem();
    const MinimizerResult res = solve_kappa(prob, default_seed(prob.grid));
    REQUIRE(res.converged);
    CHECK(res.el_residual <= 1e-6);

    // Constraint and multiplier identities at the reported minimizer.
    GridFunction u4 = res.u;
    CHECK(std::abs(std::pow(lp_norm(u4, 4.0), 4.0) - 1.0) <= 1e-10);
    CHECK(res.lambda == Catch::Approx(res.energy).epsilon(1e-8));
    CHECK(res.energy == Catch::Approx(std::pow(sobolev_norm(res.u, prob.alpha, 2.0), 2.0))
                            .epsilon(1e-10));

    // Energy trace is nonincreasing up to slack.
    for (std::size_t i = 1; i < res.energy_trace.size(); ++i)
        CHECK(res.energy_trace[i] <= res.energy_trace[i - 1] * (1.0 + 1e-12));

    std::vector<double> ones(prob.grid.size(), 1.0);
    const QuotientOracle oracle(prob.alpha, prob.q, prob.grid, ones);
    const double best = oracle.best_of(20, 1500, 9000);
    CHECK(res.energy <= best * 1.005);
    CHECK(res.energy >= best * 0.995);
}

TEST_CASE("kappa solve is invariant under lattice-shifted seeds") {
    const MinimizeProblem prob = reference_problem();
    const GridFunction seed = default_seed(prob.grid);
    const LatticeShift y{{96, 0, 0}};
    const MinimizerResult a = solve_kappa(prob, seed);
    const MinimizerResult b = solve_kappa(prob, lattice_shift(seed, y));
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(b.energy == Catch::Approx(a.energy).epsilon(1e-8));

    const GridFunction moved = lattice_shift(a.u, y);
    GridFunction diff = b.u;
    for (std::size_t i = 0; i < diff.size(); ++i) diff.values[i] -= moved.values[i];
    settle_kind(diff);
    CHECK(lp_norm(diff, 2.0) <= 1e-6 * lp_norm(a.u, 2.0));
}

TEST_CASE("solver input validation and divergence guard") {
    MinimizeProblem prob = reference_problem();
    const GridFunction zero = GridFunction::zeros(prob.grid);
    CHECK_THROWS_AS(solve_kappa(prob, zero), DomainError);

    MinimizeProblem bad = prob;
    bad.q = 1.5;
    CHECK_THROWS_AS(solve_kappa(bad, default_seed(prob.grid)), PreconditionError);

    MinimizeProblem coarse = prob;
    coarse.tau = 2e2;  // far beyond the stability threshold
    CHECK_THROWS_AS(solve_kappa(coarse, default_seed(prob.grid)), NumericalError);
}

TEST_CASE("penalty problem strictly improves on kappa") {
    MinimizeProblem prob = reference_problem();
    const MinimizerResult kappa = solve_kappa(prob, default_seed(prob.grid));

    MinimizeProblem pen = prob;
    GridFunction b = catalog_function(CatalogName::gaussian_bump, {2.0}, prob.grid);
    for (cplx& z : b.values) z = 1.0 + 0.5 * z.real();
    pen.weight_b = b;
    pen.b_infinity = 1.0;

    const PenaltyResult res = solve_penalty(pen, default_seed(prob.grid), &kappa);
    REQUIRE(res.converged);
    double F = 0.0;
    for (std::size_t i = 0; i < res.u.size(); ++i)
        F += b.values[i].real() * std::pow(std::abs(res.u.values[i]), pen.q);
    F *= prob.grid.cell_volume();
    CHECK(std::abs(F - 1.0) <= 1e-10);
    CHECK(res.improves_on_kappa);
    CHECK(res.energy <= kappa.energy - 1e-3 * kappa.energy);
}

TEST_CASE("penalty weight validation") {
    MinimizeProblem prob = reference_problem();

    // b identical to b_infinity: strict inequality fails.
    MinimizeProblem degenerate = prob;
    degenerate.weight_b = catalog_function(CatalogName::constant, {1.0}, prob.grid);
    degenerate.b_infinity = 1.0;
    CHECK_THROWS_AS(solve_penalty(degenerate, default_seed(prob.grid)), PreconditionError);

    CHECK_THROWS_AS(solve_penalty(prob, default_seed(prob.grid)), PreconditionError);
}

TEST_CASE("penalty energies follow the weight-scaling law") {
    MinimizeProblem pen = reference_problem();
    GridFunction b = catalog_function(CatalogName::gaussian_bump, {2.0}, pen.grid);
    for (cplx& z : b.values) z = 1.0 + 0.5 * z.real();
    pen.weight_b = b;
    pen.b_infinity = 1.0;
    const PenaltyResult base = solve_penalty(pen, default_seed(pen.grid));

    const double c = 2.0;
    MinimizeProblem scaled = pen;
    GridFunction cb = b;
    for (cplx& z : cb.values) z *= c;
    scaled.weight_b = cb;
    scaled.b_infinity = c * 1.0;
    const PenaltyResult res = solve_penalty(scaled, default_seed(pen.grid));

    CHECK(res.energy ==
          Catch::Approx(base.energy * std::pow(c, -2.0 / pen.q)).epsilon(1e-6));
}

TEST_CASE("symmetry diagnostic") {
    const GridSpec g2 = GridSpec::uniform(2, 32, 8.0);

    SECTION("exactly radial inputs score zero") {
        MinimizerResult fake;
        fake.u = catalog_function(CatalogName::gaussian_bump, {0.5}, g2);
        fake.converged = true;
        fake.el_residual = 0.0;
        CHECK(symmetry_diagnostic(fake) <= 1e-12);
    }

    SECTION("non-converged inputs are rejected") {
        MinimizerResult fake;
        fake.u = catalog_function(CatalogName::gaussian_bump, {0.5}, g2);
        fake.converged = false;
        fake.el_residual = 1.0;
        CHECK_THROWS_AS(symmetry_diagnostic(fake), PreconditionError);
    }

    SECTION("a converged 2D minimizer is close to radial") {
        MinimizeProblem prob;
        prob.alpha = 0.8;
        prob.q = 3.0;
        prob.grid = g2;
        prob.tol_el = 1e-7;
        const MinimizerResult res = solve_kappa(prob, default_seed(g2));
        REQUIRE(res.converged);
        CHECK(symmetry_diagnostic(res, 1e-6) <= 0.05);
    }

    SECTION("a two-bump candidate is flagged as asymmetric") {
        GridFunction two = catalog_function(CatalogName::gaussian_bump, {0.4, 2.0, 4.0}, g2);
        const GridFunction other =
            catalog_function(CatalogName::gaussian_bump, {0.4, 6.0, 4.0}, g2);
        for (std::size_t i = 0; i < two.size(); ++i) two.values[i] += other.values[i];
        MinimizerResult fake;
        fake.u = two;
        fake.converged = true;
        fake.el_residual = 0.0;
        CHECK(symmetry_diagnostic(fake) > 0.5);
    }
}
