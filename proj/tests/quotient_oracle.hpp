#pragma once

// Test-side brute-force oracle for the constrained ground-state problems:
// minimizes the scale-free quotient R(u) = E(u) / F(u)^{2/q} by steepest
// descent with Armijo backtracking from random restarts, best value kept.
// Independent of the solver's fixed-step projected flow.

#include <cmath>
#include <cstdint>
#include <vector>

#include "fracspace/fft.hpp"
#include "fracspace/grid.hpp"
#include "fracspace/testset.hpp"

namespace fracspace::testing {

struct QuotientOracle {
    double alpha, q;
    GridSpec grid;
    std::vector<double> b;
    FrequencyGrid freq;
    std::vector<double> mult;

    QuotientOracle(double alpha_, double q_, const GridSpec& g, const std::vector<double>& weight)
        : alpha(alpha_), q(q_), grid(g), b(weight), freq(g) {
        mult.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            mult[i] = std::pow(1.0 + freq.norm_sq(i), alpha);
    }

    double energy(const std::vector<double>& u, std::vector<double>* lam_u = nullptr) const {
        GridFunction f = GridFunction::zeros(grid, Kind::real);
        for (std::size_t i = 0; i < u.size(); ++i) f.values[i] = u[i];
        GridFunction fhat = forward_transform(f);
        double e = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            e += mult[i] * std::norm(fhat.values[i]);
            fhat.values[i] *= mult[i];
        }
        if (lam_u) {
            GridFunction g2 = inverse_transform(fhat);
            lam_u->resize(u.size());
            for (std::size_t i = 0; i < u.size(); ++i) (*lam_u)[i] = g2.values[i].real();
        }
        return grid.volume() * e;
    }

    double constraint(const std::vector<double>& u) const {
        double f = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) f += b[i] * std::pow(std::abs(u[i]), q);
        return grid.cell_volume() * f;
    }

    double quotient(const std::vector<double>& u) const {
        return energy(u) / std::pow(constraint(u), 2.0 / q);
    }

    double minimize_from(std::vector<double> u, int iters) const {
        double step = 1e-2;
        double R = quotient(u);
        for (int it = 0; it < iters; ++it) {
            std::vector<double> lam_u;
            const double E = energy(u, &lam_u);
            const double F = constraint(u);
            const double lam = E / F;
            std::vector<double> d(u.size());
            double dn = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                d[i] = lam_u[i] - lam * b[i] * std::pow(std::abs(u[i]), q - 2.0) * u[i];
                dn += d[i] * d[i];
            }
            if (dn == 0.0) break;
            bool accepted = false;
            for (int bt = 0; bt < 40; ++bt) {
                std::vector<double> trial(u.size());
                for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] - step * d[i];
                const double Rt = quotient(trial);
                if (Rt < R) {
                    u = std::move(trial);
                    R = Rt;
                    step *= 1.5;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;
        }
        return R;
    }

    double best_of(int restarts, int iters, std::uint64_t seed0) const {
        double best = std::numeric_limits<double>::infinity();
        for (int r = 0; r < restarts; ++r) {
            const GridFunction f = random_function(grid, seed0 + r, 0.25, Kind::real);
            std::vector<double> u(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) u[i] = f.values[i].real();
            best = std::min(best, minimize_from(std::move(u), iters));
        }
        return best;
    }
};

} // namespace fracspace::testing
