#pragma once

#include <cmath>
#include <limits>

#include "fracspace/errors.hpp"

namespace fracspace {

inline constexpr double inf_exponent = std::numeric_limits<double>::infinity();

// Exponent bookkeeping: critical exponents, Holder interpolation parameters
// and the real-method normalization constants.
struct ExponentBook {
    // p*_alpha = p N / (N - alpha p) when N > alpha p, infinity otherwise.
    static double critical_exponent(double alpha, double p, int N) {
        if (!(alpha > 0.0)) throw DomainError("critical exponent needs alpha > 0");
        if (!(p > 1.0) || p == inf_exponent) throw DomainError("critical exponent needs 1 < p < inf");
        if (N < 1) throw DomainError("dimension must be positive");
        if (N > alpha * p) return p * N / (N - alpha * p);
        return inf_exponent;
    }

    // Theta(p0, p, p1) = (1/p0 - 1/p) / (1/p0 - 1/p1), defined for p0 < p < p1.
    static double holder_theta(double p0, double p, double p1) {
        if (!(1.0 <= p0 && p0 < p && p < p1 && p1 <= inf_exponent))
            throw DomainError("Holder interpolation needs 1 <= p0 < p < p1 <= inf");
        const double i0 = 1.0 / p0;
        const double i = 1.0 / p;
        const double i1 = (p1 == inf_exponent) ? 0.0 : 1.0 / p1;
        return (i0 - i) / (i0 - i1);
    }

    // c_{theta,inf} = 1, c_{theta,p} = (1/(theta (1-theta) p))^{1/p}.
    static double interp_constant(double theta, double p) {
        if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0,1)");
        if (p == inf_exponent) return 1.0;
        if (!(p >= 1.0)) throw DomainError("exponent must be >= 1");
        return std::pow(1.0 / (theta * (1.0 - theta) * p), 1.0 / p);
    }

    // 1/p = (1-theta)/p0 + theta/p1.
    static double intermediate_p(double p0, double p1, double theta) {
        if (!(1.0 <= p0 && p0 < p1 && p1 <= inf_exponent))
            throw DomainError("intermediate exponent needs 1 <= p0 < p1 <= inf");
        if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0,1)");
        const double i0 = 1.0 / p0;
        const double i1 = (p1 == inf_exponent) ? 0.0 : 1.0 / p1;
        const double ip = (1.0 - theta) * i0 + theta * i1;
        return ip > 0.0 ? 1.0 / ip : inf_exponent;
    }
};

struct ExponentBookEntries {
    double p;
    double c_theta_p;
};

inline ExponentBookEntries exponent_book(double p0, double p1, double theta) {
    const double p = ExponentBook::intermediate_p(p0, p1, theta);
    return {p, ExponentBook::interp_constant(theta, p)};
}

} // namespace fracspace
