#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fracspace/exponents.hpp"
#include "fracspace/mollify.hpp"
#include "fracspace/norms.hpp"

namespace fracspace {

// A couple (W^{s0,p}, W^{s1,p}) of Bessel-potential spaces over the same
// exponent p. For p = 2 the couple is Fourier-diagonal with spectral weights
// w_j(xi) = (1+|xi|^2)^{s_j/2} and the quadratic K-functional has a closed
// per-frequency form; for p != 2 only mollifier-splitting upper bounds are
// available.
struct CoupleSpec {
    double s0 = 0.0;
    double s1 = 0.0;
    double p = 2.0;

    static CoupleSpec same_space() { return {0.0, 0.0, 2.0}; }
    static CoupleSpec l2_hs(double s) { return {0.0, s, 2.0}; }
    static CoupleSpec hs0_hs1(double s0, double s1) { return {s0, s1, 2.0}; }
    static CoupleSpec lp_w1p(double p) { return {0.0, 1.0, p}; }
    static CoupleSpec wsp(double s0, double s1, double p) { return {s0, s1, p}; }

    void validate() const {
        if (s0 < 0.0 || s1 < 0.0) throw DomainError("couple smoothness orders must be >= 0");
        if (!(p > 1.0) || p == inf_exponent) throw DomainError("couple exponent needs 1 < p < inf");
    }

    bool diagonal() const { return p == 2.0; }
    bool same() const { return s0 == s1; }

    double weight0(double xi_sq) const { return std::pow(1.0 + xi_sq, 0.5 * s0); }
    double weight1(double xi_sq) const { return std::pow(1.0 + xi_sq, 0.5 * s1); }

    double norm0(const GridFunction& f) const { return sobolev_norm(f, s0, p); }
    double norm1(const GridFunction& f) const { return sobolev_norm(f, s1, p); }

    std::string label() const {
        return "(W^{" + std::to_string(s0) + "," + std::to_string(p) + "}, W^{" +
               std::to_string(s1) + "," + std::to_string(p) + "})";
    }
};

struct KCurve {
    enum class Kind { exact_k2, splitting_upper };
    Kind kind = Kind::exact_k2;
    std::vector<double> t;
    std::vector<double> K;
};

// K nondecreasing and K/t nonincreasing, up to the stated slack.
inline bool kcurve_shape_ok(const KCurve& c, double slack = 1e-10) {
    double scale_k = 0.0, scale_kt = 0.0;
    for (std::size_t i = 0; i < c.t.size(); ++i) {
        if (!std::isfinite(c.K[i]) || c.K[i] < 0.0) return false;
        scale_k = std::max(scale_k, c.K[i]);
        scale_kt = std::max(scale_kt, c.K[i] / c.t[i]);
    }
    for (std::size_t i = 0; i + 1 < c.t.size(); ++i) {
        if (c.K[i + 1] + slack * scale_k < c.K[i]) return false;
        if (c.K[i + 1] / c.t[i + 1] > c.K[i] / c.t[i] + slack * scale_kt) return false;
    }
    return true;
}

// Exact quadratic K-functional on a Fourier-diagonal couple:
//   K2(t,a)^2 = V sum_xi |ahat|^2 t^2 w0^2 w1^2 / (w0^2 + t^2 w1^2),
// the per-frequency minimum of ||a0||_0^2 + t^2 ||a1||_1^2. Brackets the
// Peetre functional: K2 <= K <= sqrt(2) K2.
inline KCurve k2_diagonal(const GridFunction& a, const CoupleSpec& couple,
                          const std::vector<double>& t_nodes) {
    couple.validate();
    if (!couple.diagonal()) throw DomainError("exact K2 requires a diagonal (p=2) couple");
    for (double t : t_nodes)
        if (!(t > 0.0)) throw DomainError("K-functional nodes must be positive");

    GridFunction ahat = forward_transform(a);
    const FrequencyGrid freq(a.grid);
    const std::size_t n = ahat.size();
    std::vector<double> mass(n), w0sq(n), w1sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double q = freq.norm_sq(i);
        mass[i] = std::norm(ahat.values[i]);
        const double w0 = couple.weight0(q), w1 = couple.weight1(q);
        w0sq[i] = w0 * w0;
        w1sq[i] = w1 * w1;
    }

    KCurve curve;
    curve.kind = KCurve::Kind::exact_k2;
    curve.t = t_nodes;
    curve.K.resize(t_nodes.size());
    const double vol = a.grid.volume();
    std::vector<double> buf(n);
    for (std::size_t j = 0; j < t_nodes.size(); ++j) {
        const double t2 = t_nodes[j] * t_nodes[j];
        for (std::size_t i = 0; i < n; ++i)
            buf[i] = mass[i] * (t2 * w0sq[i] * w1sq[i]) / (w0sq[i] + t2 * w1sq[i]);
        curve.K[j] = std::sqrt(vol * pairwise_sum(buf));
    }
    return curve;
}

struct SplittingConfig {
    int tau_count = 48;
    double tau_min = 1e-3;
    double tau_max = 0.9;
    int quad_points = 64;
};

// Upper bound for K(t,a) from mollifier splittings a = (I - M_tau)a + M_tau a,
// minimized over a fixed tau grid, together with the two trivial splittings
// a = a + 0 and a = 0 + a. Valid for any couple whose endpoint norms we can
// evaluate; never claimed exact.
inline KCurve k_splitting_upper(const GridFunction& a, const CoupleSpec& couple,
                                const std::vector<double>& t_nodes,
                                const SplittingConfig& cfg = {}) {
    couple.validate();
    if (cfg.tau_count <= 0) throw ConfigError("splitting bound needs a nonempty tau grid");
    if (!(0.0 < cfg.tau_min && cfg.tau_min <= cfg.tau_max && cfg.tau_max < 1.0))
        throw ConfigError("tau grid must satisfy 0 < tau_min <= tau_max < 1");
    for (double t : t_nodes)
        if (!(t > 0.0)) throw DomainError("K-functional nodes must be positive");

    const double n0 = couple.norm0(a);
    const double n1 = couple.norm1(a);

    std::vector<double> A(cfg.tau_count), B(cfg.tau_count);
    const double lmin = std::log(cfg.tau_min), lmax = std::log(cfg.tau_max);
    for (int k = 0; k < cfg.tau_count; ++k) {
        const double tau =
            cfg.tau_count == 1
                ? cfg.tau_min
                : std::exp(lmin + (lmax - lmin) * k / static_cast<double>(cfg.tau_count - 1));
        MollifierSpec spec{tau, cfg.quad_points};
        GridFunction m = mollify(a, spec);
        GridFunction diff = a;
        for (std::size_t i = 0; i < diff.size(); ++i) diff.values[i] -= m.values[i];
        settle_kind(diff);
        A[k] = couple.norm0(diff);
        B[k] = couple.norm1(m);
    }

    KCurve curve;
    curve.kind = KCurve::Kind::splitting_upper;
    curve.t = t_nodes;
    curve.K.resize(t_nodes.size());
    for (std::size_t j = 0; j < t_nodes.size(); ++j) {
        const double t = t_nodes[j];
        double best = std::min(n0, t * n1);
        for (int k = 0; k < cfg.tau_count; ++k) best = std::min(best, A[k] + t * B[k]);
        curve.K[j] = best;
    }
    return curve;
}

struct QuadratureConfig {
    double t_min = 1e-6;
    double t_max = 1e6;
    int nodes = 400;
    bool strict = false;

    void validate() const {
        if (!(t_min > 0.0 && t_min < t_max)) throw ConfigError("need 0 < t_min < t_max");
        if (nodes < 2) throw ConfigError("quadrature needs at least 2 nodes");
    }
};

// Midpoints of a uniform partition in log t; K sources are sampled here.
inline std::vector<double> quadrature_nodes(const QuadratureConfig& cfg) {
    cfg.validate();
    const double lo = std::log(cfg.t_min), hi = std::log(cfg.t_max);
    const double h = (hi - lo) / cfg.nodes;
    std::vector<double> t(cfg.nodes);
    for (int i = 0; i < cfg.nodes; ++i) t[i] = std::exp(lo + (i + 0.5) * h);
    return t;
}

struct RealInterpResult {
    double value = 0.0;
    double truncation_rel = 0.0;  // estimated relative contribution of the tails
    bool truncation_warning = false;
};

// (theta,q) norm from a sampled K-curve: midpoint rule in log t plus
// closed-form head/tail corrections from the K asymptotics (K/t -> const as
// t -> 0, K -> const as t -> infinity). For q = inf the sup is taken over
// the piecewise envelope implied by the K-shape constraints, which
// reproduces sup_t t^{-theta} min(1,t) exactly.
inline RealInterpResult interp_norm_from_curve(const KCurve& curve, double theta, double q,
                                               const QuadratureConfig& cfg = {}) {
    cfg.validate();
    if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0,1)");
    if (!(q >= 1.0)) throw DomainError("second parameter q must satisfy 1 <= q <= inf");
    const std::vector<double> nodes = quadrature_nodes(cfg);
    if (curve.t.size() != nodes.size())
        throw DomainError("K-curve nodes must match the quadrature grid");
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (std::abs(curve.t[i] - nodes[i]) > 1e-9 * nodes[i])
            throw DomainError("K-curve nodes must match the quadrature grid");

    RealInterpResult res;
    const std::size_t n = nodes.size();
    double kmax = 0.0;
    for (double k : curve.K) kmax = std::max(kmax, k);
    if (kmax == 0.0) return res;

    if (q == inf_exponent) {
        // sup over nodes, sharpened across each cell by
        // K(t) <= min(K_{i+1}, t K_i / t_i).
        double sup = 0.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = std::pow(curve.t[i], -theta) * curve.K[i];
            if (v > sup) {
                sup = v;
                arg = i;
            }
            if (i + 1 < n && curve.K[i] > 0.0) {
                const double ve = std::pow(curve.t[i], -theta) * std::pow(curve.K[i], theta) *
                                  std::pow(curve.K[i + 1], 1.0 - theta);
                if (ve > sup) {
                    sup = ve;
                    arg = i;
                }
            }
        }
        res.value = sup;
        res.truncation_warning = (arg == 0 || arg + 1 >= n);
        res.truncation_rel = res.truncation_warning ? 1.0 : 0.0;
        if (cfg.strict && res.truncation_warning)
            throw TruncationError("sup attained at the edge of the t-range; widen [t_min, t_max]");
        return res;
    }

    const double h = (std::log(cfg.t_max) - std::log(cfg.t_min)) / cfg.nodes;
    std::vector<double> buf(n);
    for (std::size_t i = 0; i < n; ++i)
        buf[i] = std::pow(std::pow(curve.t[i], -theta) * curve.K[i], q) * h;
    const double interior = pairwise_sum(buf);

    // K(t) ~ (K_0/t_0) t below the range, K(t) ~ K_last above it.
    const double left_edge = cfg.t_min;
    const double right_edge = cfg.t_max;
    const double head = std::pow(curve.K.front() / curve.t.front(), q) *
                        std::pow(left_edge, (1.0 - theta) * q) / ((1.0 - theta) * q);
    const double tail =
        std::pow(curve.K.back(), q) * std::pow(right_edge, -theta * q) / (theta * q);

    const double total = interior + head + tail;
    res.value = std::pow(total, 1.0 / q);
    if (interior > 0.0)
        res.truncation_rel = (res.value - std::pow(interior, 1.0 / q)) / res.value;
    else
        res.truncation_rel = 1.0;
    res.truncation_warning = res.truncation_rel > 0.01;
    if (cfg.strict && res.truncation_warning)
        throw TruncationError("quadrature truncation estimate " +
                              std::to_string(res.truncation_rel) +
                              " exceeds 1% of the value; widen [t_min, t_max]");
    return res;
}

enum class KSource { automatic, exact_k2, splitting_upper };

// Real-method (theta,q) norm of a for the given couple. Diagonal couples use
// the exact quadratic K; everything else goes through the splitting bound.
inline RealInterpResult real_interp_norm(const GridFunction& a, const CoupleSpec& couple,
                                         double theta, double q,
                                         const QuadratureConfig& cfg = {},
                                         KSource source = KSource::automatic,
                                         const SplittingConfig& split = {}) {
    couple.validate();
    if (source == KSource::automatic)
        source = couple.diagonal() ? KSource::exact_k2 : KSource::splitting_upper;
    if (source == KSource::exact_k2 && !couple.diagonal())
        throw DomainError("exact K2 requires a diagonal (p=2) couple");
    const std::vector<double> nodes = quadrature_nodes(cfg);
    const KCurve curve = (source == KSource::exact_k2)
                             ? k2_diagonal(a, couple, nodes)
                             : k_splitting_upper(a, couple, nodes, split);
    return interp_norm_from_curve(curve, theta, q, cfg);
}

// Diagonal complex-method norm: L^2 norm with the geometric-mean spectral
// weight w0^{1-theta} w1^{theta}. Coincides with the Calderon space norm on
// Fourier-diagonal Hilbert couples.
inline double complex_diag_norm(const GridFunction& a, const CoupleSpec& couple, double theta) {
    couple.validate();
    if (!couple.diagonal()) throw DomainError("complex diagonal norm requires a p=2 couple");
    if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0,1)");
    GridFunction ahat = forward_transform(a);
    const FrequencyGrid freq(a.grid);
    std::vector<double> buf(ahat.size());
    for (std::size_t i = 0; i < ahat.size(); ++i) {
        const double q = freq.norm_sq(i);
        const double w = std::pow(couple.weight0(q), 1.0 - theta) *
                         std::pow(couple.weight1(q), theta);
        buf[i] = w * w * std::norm(ahat.values[i]);
    }
    return std::sqrt(a.grid.volume() * pairwise_sum(buf));
}

// A diagonal operator given by a radial spectral multiplier.
struct SpectralOperator {
    std::string name;
    std::function<double(double /*|xi|^2*/)> multiplier;

    static SpectralOperator identity() {
        return {"identity", [](double) { return 1.0; }};
    }
    static SpectralOperator bessel(double gamma) {
        const double half = 0.5 * gamma;
        return {"bessel(" + std::to_string(gamma) + ")",
                [half](double q) { return std::pow(1.0 + q, half); }};
    }
    static SpectralOperator mollifier(int dim, double t) {
        const BumpKernel* kernel = &shared_bump_kernel(dim);
        return {"mollifier(t=" + std::to_string(t) + ")",
                [kernel, t](double q) { return kernel->hat(t * std::sqrt(q)); }};
    }

    GridFunction apply(const GridFunction& f) const {
        return apply_radial_multiplier(f, multiplier);
    }
};

struct OperatorBoundReport {
    double endpoint0 = 0.0;    // ||T||_{A0 -> B0} on the grid
    double endpoint1 = 0.0;    // ||T||_{A1 -> B1} on the grid
    double bound = 0.0;        // endpoint0^{1-theta} endpoint1^{theta}
    double worst_ratio = 0.0;  // max ||Ta|| / (bound ||a||) over the test set
    std::size_t n_checked = 0;
};

// Checks the interpolated operator bound
//   ||Ta||_{(B0,B1)_{theta,q}} <= ||T||_{A0->B0}^{1-theta} ||T||_{A1->B1}^{theta}
//   * ||a||_{(A0,A1)_{theta,q}}
// over a test set, with endpoint norms computed exactly as multiplier suprema
// on the frequency grid.
inline OperatorBoundReport check_operator_bound(const SpectralOperator& op,
                                                const CoupleSpec& source,
                                                const CoupleSpec& target, double theta, double q,
                                                const std::vector<GridFunction>& test_set,
                                                const QuadratureConfig& cfg = {}) {
    source.validate();
    target.validate();
    if (!source.diagonal() || !target.diagonal())
        throw UnsupportedOperatorError(
            "endpoint norms are only computable for diagonal couples");
    if (test_set.empty()) throw PreconditionError("operator bound check needs a test set");

    OperatorBoundReport rep;
    const GridSpec& grid = test_set.front().grid;
    const FrequencyGrid freq(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double xq = freq.norm_sq(i);
        const double m = std::abs(op.multiplier(xq));
        rep.endpoint0 = std::max(rep.endpoint0, m * target.weight0(xq) / source.weight0(xq));
        rep.endpoint1 = std::max(rep.endpoint1, m * target.weight1(xq) / source.weight1(xq));
    }
    rep.bound = std::pow(rep.endpoint0, 1.0 - theta) * std::pow(rep.endpoint1, theta);

    for (const GridFunction& a : test_set) {
        if (!(a.grid == grid))
            throw PreconditionError("operator bound test set must share one grid");
        const double na = real_interp_norm(a, source, theta, q, cfg).value;
        if (na == 0.0) continue;
        const GridFunction ta = op.apply(a);
        const double nta = real_interp_norm(ta, target, theta, q, cfg).value;
        if (rep.bound == 0.0) {
            if (nta > 0.0) rep.worst_ratio = inf_exponent;
        } else {
            rep.worst_ratio = std::max(rep.worst_ratio, nta / (rep.bound * na));
        }
        ++rep.n_checked;
    }
    return rep;
}

} // namespace fracspace
