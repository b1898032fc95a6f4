#pragma once

#include "fracspace/interp.hpp"

namespace fracspace {

// Besov norm B^{s,p,q} as the (1/2, q) real-interpolation norm of the couple
// (W^{0,p}, W^{2s,p}), evaluated through the splitting-based K upper bound.
// One fixed choice of (s0, s1, theta); an equivalent norm, constants are not
// canonical.
inline double besov_norm(const GridFunction& f, double s, double p, double q,
                         const QuadratureConfig& cfg = {}, const SplittingConfig& split = {}) {
    if (!(s > 0.0)) throw DomainError("Besov smoothness must be positive");
    if (!(p > 1.0) || p == inf_exponent) throw DomainError("Besov norm needs 1 < p < inf");
    if (!(q >= 1.0)) throw DomainError("Besov norm needs 1 <= q <= inf");
    const CoupleSpec couple = CoupleSpec::wsp(0.0, 2.0 * s, p);
    return real_interp_norm(f, couple, 0.5, q, cfg, KSource::splitting_upper, split).value;
}

} // namespace fracspace
