#pragma once

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

#include "fracspace/fft.hpp"
#include "fracspace/grid.hpp"
#include "fracspace/norms.hpp"
#include "fracspace/parallel.hpp"

namespace fracspace {

namespace detail {

// Adaptive Simpson with an absolute tolerance; integrands here are smooth
// and bounded by 1.
template <class F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol, int panels) {
    double total = 0.0;
    const double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        const double x0 = a + k * h, x1 = x0 + h, xm = 0.5 * (x0 + x1);
        const double f0 = f(x0), fm = f(xm), f1 = f(x1);
        const double whole = h / 6.0 * (f0 + 4.0 * fm + f1);
        total += adaptive_simpson_rec(f, x0, x1, f0, fm, f1, whole, tol / panels, 40);
    }
    return total;
}

inline double sinc(double x) {
    if (std::abs(x) < 1e-6) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

} // namespace detail

// The standard bump rho(z) = c exp(-1/(1-|z|^2)) on |z|<1, normalized so
// that its integral over R^N is 1. hat() evaluates the continuous Fourier
// transform at radius s; the profile is radial so one scalar table serves
// the whole frequency grid.
class BumpKernel {
public:
    explicit BumpKernel(int dim, int quad_points = 64) : dim_(dim), panels_(quad_points) {
        if (dim < 1 || dim > 3) throw DomainError("bump kernel supports dimensions 1..3");
        if (quad_points < 16) throw DomainError("bump quadrature needs at least 16 nodes per axis");
        const double raw = radial_integral([](double) { return 1.0; }, panels_);
        normalization_ = 1.0 / raw;
        // Recompute on a refined mesh; the two must agree to the invariant
        // tolerance before the kernel is usable.
        const double refined = radial_integral([](double) { return 1.0; }, 2 * panels_);
        if (std::abs(normalization_ * refined - 1.0) > 1e-10)
            throw NumericalError("bump normalization failed its 1e-10 self-check");
    }

    int dim() const { return dim_; }
    double normalization() const { return normalization_; }

    // hat(s) = integral of rho(z) e^{i s e.z} dz for any unit vector e.
    // hat(0) = 1 by the normalization, so constants and means survive
    // mollification exactly.
    double hat(double s) const {
        s = std::abs(s);
        if (s == 0.0) return 1.0;
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = memo_.find(s);
            if (it != memo_.end()) return it->second;
        }
        const double value = hat_uncached(s);
        std::lock_guard<std::mutex> lock(mu_);
        memo_.emplace(s, value);
        return value;
    }

private:
    template <class W>
    double radial_integral(const W& weight, int panels) const {
        const auto integrand = [&](double r) {
            const double one_m = 1.0 - r * r;
            const double core = (one_m > 0.0) ? std::exp(-1.0 / one_m) : 0.0;
            double jac = 1.0;
            if (dim_ == 2) jac = r;
            if (dim_ == 3) jac = r * r;
            return core * jac * weight(r);
        };
        double surface = 2.0;
        if (dim_ == 2) surface = 2.0 * std::numbers::pi;
        if (dim_ == 3) surface = 4.0 * std::numbers::pi;
        return surface * detail::adaptive_simpson(integrand, 0.0, 1.0, 1e-13, panels);
    }

    double hat_uncached(double s) const {
        // Extra panels keep the oscillatory kernels resolved at large s.
        const int panels = std::max(panels_, static_cast<int>(std::ceil(s)) + 8);
        double raw = 0.0;
        switch (dim_) {
        case 1:
            raw = radial_integral([s](double r) { return std::cos(s * r); }, panels);
            break;
        case 2:
            raw = radial_integral([s](double r) { return std::cyl_bessel_j(0.0, s * r); }, panels);
            break;
        case 3:
            raw = radial_integral([s](double r) { return detail::sinc(s * r); }, panels);
            break;
        }
        return normalization_ * raw;
    }

    int dim_;
    int panels_;
    double normalization_ = 1.0;
    mutable std::mutex mu_;
    mutable std::unordered_map<double, double> memo_;
};

inline const BumpKernel& shared_bump_kernel(int dim) {
    static BumpKernel k1(1), k2(2), k3(3);
    switch (dim) {
    case 1: return k1;
    case 2: return k2;
    case 3: return k3;
    }
    throw DomainError("bump kernel supports dimensions 1..3");
}

struct MollifierSpec {
    double t = 0.1;        // scale in (0,1)
    int quad_points = 64;  // nodes per axis for the z-integral tables

    void validate() const {
        if (!(t > 0.0 && t < 1.0)) throw DomainError("mollifier scale t must lie in (0,1)");
        if (quad_points < 16) throw DomainError("bump quadrature needs at least 16 nodes per axis");
    }
};

// (M_t u)(x) = integral over |z|<1 of rho(z) u(x + t z) dz, evaluated as the
// spectral multiplier rhohat(t |xi|). Exact shift covariance comes for free.
inline GridFunction mollify(const GridFunction& u, const MollifierSpec& spec) {
    spec.validate();
    u.validate();
    double min_len = u.grid.length[0];
    for (int a = 1; a < u.grid.dim; ++a) min_len = std::min(min_len, u.grid.length[a]);
    if (!(spec.t < 0.5 * min_len))
        throw DomainError("mollifier displacement t must stay below half the box length");
    const BumpKernel& kernel = shared_bump_kernel(u.grid.dim);
    const double t = spec.t;
    return apply_radial_multiplier(
        u, [&kernel, t](double q) { return kernel.hat(t * std::sqrt(q)); });
}

struct MollifierFitReport {
    std::vector<double> t;
    std::vector<double> residual;  // ||u - M_t u||_p per node
    double grad_norm = 0.0;        // ||grad u||_p
    double slope = 0.0;            // log-log fit of residual vs t
    double c_hat = 0.0;            // max residual / (t ||grad u||_p)
    bool degenerate = false;       // residuals at noise level, fit skipped
};

// Measures ||u - M_t u||_p across scales and fits the decay rate. The
// first-order bound residual <= C t ||grad u||_p needs slope >= 1; smooth
// band-limited inputs come out near 2.
inline MollifierFitReport residual_bound_check(const GridFunction& u, double p,
                                               const std::vector<double>& t_nodes,
                                               int quad_points = 64) {
    if (!(p > 1.0) || p == inf_exponent)
        throw DomainError("residual bound check needs 1 < p < inf");
    if (t_nodes.empty()) throw ConfigError("residual bound check needs at least one t node");

    MollifierFitReport rep;
    rep.t = t_nodes;
    std::sort(rep.t.begin(), rep.t.end());
    rep.residual.resize(rep.t.size());

    const double scale = lp_norm(u, p);
    for (std::size_t i = 0; i < rep.t.size(); ++i) {
        MollifierSpec spec{rep.t[i], quad_points};
        GridFunction m = mollify(u, spec);
        GridFunction diff = u;
        for (std::size_t k = 0; k < diff.size(); ++k) diff.values[k] -= m.values[k];
        settle_kind(diff);
        rep.residual[i] = lp_norm(diff, p);
    }
    rep.grad_norm = lp_norm(gradient_magnitude(u), p);

    const double floor = 1e-14 * std::max(scale, 1.0);
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < rep.t.size(); ++i) {
        if (rep.residual[i] > floor) {
            lx.push_back(std::log(rep.t[i]));
            ly.push_back(std::log(rep.residual[i]));
        }
    }
    if (lx.size() < 2 || rep.grad_norm <= floor) {
        rep.degenerate = true;
        return rep;
    }

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    rep.slope = sxy / sxx;
    for (std::size_t i = 0; i < rep.t.size(); ++i)
        rep.c_hat = std::max(rep.c_hat, rep.residual[i] / (rep.t[i] * rep.grad_norm));
    return rep;
}

struct SigmaCurve {
    std::vector<double> t;
    std::vector<double> sigma;   // test-set max of ||(I-M_t)f||_target / ||f||_source
    std::string test_set;        // descriptor of the frozen suite
    double max_source_ratio = 0.0;  // Def 2.3(i) companion: max ||M_t f|| / ||f|| on the source
    bool trend_ok = false;       // sigma(t_min) <= 0.1 sigma(t_max)
};

// Empirical operator-norm decay of I - M_t from W^{m0,p0} to W^{m1,p1} over
// a frozen test set. A lower bound of the true operator norm; regression
// semantics only.
inline SigmaCurve sigma_estimate(double m0, double p0, double m1, double p1,
                                 const std::vector<double>& t_nodes,
                                 const std::vector<GridFunction>& test_set,
                                 const std::string& descriptor, int quad_points = 64) {
    if (test_set.empty()) throw PreconditionError("sigma estimate needs a nonempty test set");
    if (t_nodes.empty()) throw ConfigError("sigma estimate needs at least one t node");
    if (!(m0 > m1) || m1 < 0.0)
        throw PreconditionError("sigma estimate needs smoothness orders m0 > m1 >= 0");
    const int N = test_set.front().grid.dim;
    if (!(1.0 / p0 - 1.0 / p1 < (m0 - m1) / N))
        throw PreconditionError("exponent condition violated: 1/p0 - 1/p1 < (m0 - m1)/N");

    std::vector<double> source_norm(test_set.size());
    for (std::size_t i = 0; i < test_set.size(); ++i) {
        if (!(test_set[i].grid == test_set.front().grid))
            throw PreconditionError("sigma estimate test set must share one grid");
        source_norm[i] = sobolev_norm(test_set[i], m0, p0);
        if (source_norm[i] == 0.0)
            throw PreconditionError("sigma estimate test set contains the zero function");
    }

    SigmaCurve curve;
    curve.t = t_nodes;
    std::sort(curve.t.begin(), curve.t.end());
    curve.sigma.assign(curve.t.size(), 0.0);
    curve.test_set = descriptor;

    std::vector<double> source_ratio(curve.t.size(), 0.0);
    for (std::size_t ti = 0; ti < curve.t.size(); ++ti) {
        MollifierSpec spec{curve.t[ti], quad_points};
        std::vector<double> ratio(test_set.size()), mratio(test_set.size());
        parallel_for(test_set.size(), [&](std::size_t i) {
            GridFunction m = mollify(test_set[i], spec);
            GridFunction diff = test_set[i];
            for (std::size_t k = 0; k < diff.size(); ++k) diff.values[k] -= m.values[k];
            settle_kind(diff);
            ratio[i] = sobolev_norm(diff, m1, p1) / source_norm[i];
            mratio[i] = sobolev_norm(m, m0, p0) / source_norm[i];
        });
        for (std::size_t i = 0; i < test_set.size(); ++i) {
            curve.sigma[ti] = std::max(curve.sigma[ti], ratio[i]);
            source_ratio[ti] = std::max(source_ratio[ti], mratio[i]);
        }
    }
    for (double r : source_ratio) curve.max_source_ratio = std::max(curve.max_source_ratio, r);
    curve.trend_ok = curve.sigma.front() <= 0.1 * curve.sigma.back();
    return curve;
}

} // namespace fracspace
