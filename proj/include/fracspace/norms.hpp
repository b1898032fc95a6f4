#pragma once

#include <cmath>

#include "fracspace/exponents.hpp"
#include "fracspace/fft.hpp"
#include "fracspace/grid.hpp"

namespace fracspace {

// L^p norm by grid quadrature; p = inf returns the max modulus.
inline double lp_norm(const GridFunction& f, double p) {
    f.validate();
    if (!(p >= 1.0)) throw DomainError("L^p norm needs p >= 1");
    if (p == inf_exponent) return max_abs(f);
    return std::pow(integrate_abs_pow(f, p), 1.0 / p);
}

// Bessel potential Lambda^gamma: spectral multiplier (1+|xi|^2)^{gamma/2}.
inline GridFunction bessel_potential(const GridFunction& f, double gamma) {
    if (gamma == 0.0) {
        GridFunction copy = f;
        copy.validate();
        return copy;
    }
    const double half = 0.5 * gamma;
    return apply_radial_multiplier(f, [half](double q) { return std::pow(1.0 + q, half); });
}

// W^{alpha,p} norm evaluated by the Lambda^{alpha/2}-then-L^p route.
inline double sobolev_norm(const GridFunction& f, double alpha, double p) {
    if (alpha < 0.0) throw DomainError("Sobolev order must be nonnegative");
    if (!(p > 1.0) || p == inf_exponent)
        throw DomainError("Sobolev norm needs 1 < p < inf");
    if (alpha == 0.0) return lp_norm(f, p);
    return lp_norm(bessel_potential(f, alpha), p);
}

// H^s norm as a direct spectral sum: (V sum (1+|xi|^2)^s |fhat|^2)^{1/2}.
// Independent evaluation route of the p=2 Sobolev norm.
inline double hs_norm_spectral(const GridFunction& f, double s) {
    GridFunction fhat = forward_transform(f);
    const FrequencyGrid freq(f.grid);
    std::vector<double> buf(fhat.size());
    for (std::size_t i = 0; i < fhat.size(); ++i)
        buf[i] = std::pow(1.0 + freq.norm_sq(i), s) * std::norm(fhat.values[i]);
    return std::sqrt(f.grid.volume() * pairwise_sum(buf));
}

} // namespace fracspace
