#pragma once

#include <fftw3.h>

#include <functional>
#include <map>
#include <mutex>
#include <tuple>

#include "fracspace/grid.hpp"

namespace fracspace {

namespace detail {

// Plans are cached per (shape, direction) and executed through the
// new-array interface, which is safe to call concurrently. Creation goes
// through the planner lock because the FFTW planner itself is not
// thread-safe. FFTW_UNALIGNED lets plans run on plain std::vector storage.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    fftw_plan get(const GridSpec& g, int sign) {
        const Key key{g.dim, g.n[0], g.n[1], g.n[2], sign};
        std::lock_guard<std::mutex> lock(mu_);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        std::vector<cplx> scratch_in(g.size()), scratch_out(g.size());
        int dims[3] = {g.n[0], g.n[1], g.n[2]};
        fftw_plan p = fftw_plan_dft(
            g.dim, dims,
            reinterpret_cast<fftw_complex*>(scratch_in.data()),
            reinterpret_cast<fftw_complex*>(scratch_out.data()),
            sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

private:
    using Key = std::tuple<int, int, int, int, int>;
    std::mutex mu_;
    std::map<Key, fftw_plan> plans_;
};

inline void execute_dft(const GridSpec& g, int sign, const std::vector<cplx>& in,
                        std::vector<cplx>& out) {
    out.resize(in.size());
    fftw_plan p = PlanCache::instance().get(g, sign);
    // const_cast is safe: out-of-place c2c transforms do not write the input.
    fftw_execute_dft(p,
                     reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

} // namespace detail

// Spectral coefficients with the normalization fhat(xi) = mean of
// f(x) e^{-i xi.x}, so the xi=0 coefficient is the mean of f.
inline GridFunction forward_transform(const GridFunction& f) {
    f.validate();
    GridFunction out;
    out.grid = f.grid;
    out.kind = Kind::complex;
    detail::execute_dft(f.grid, FFTW_FORWARD, f.values, out.values);
    const double scale = 1.0 / static_cast<double>(f.size());
    for (cplx& z : out.values) z *= scale;
    return out;
}

// Inverse of forward_transform (unnormalized backward DFT).
inline GridFunction inverse_transform(const GridFunction& fhat) {
    fhat.validate();
    GridFunction out;
    out.grid = fhat.grid;
    out.kind = Kind::complex;
    detail::execute_dft(fhat.grid, FFTW_BACKWARD, fhat.values, out.values);
    settle_kind(out);
    return out;
}

// Applies a spectral multiplier given as a function of |xi|^2. Radial real
// multipliers preserve realness, which settle_kind picks up after the
// round trip.
inline GridFunction apply_radial_multiplier(const GridFunction& f,
                                            const std::function<double(double)>& mult) {
    GridFunction fhat = forward_transform(f);
    const FrequencyGrid freq(f.grid);
    for (std::size_t i = 0; i < fhat.size(); ++i) fhat.values[i] *= mult(freq.norm_sq(i));
    GridFunction out = inverse_transform(fhat);
    if (f.kind == Kind::real && out.kind == Kind::complex) {
        // Radial multipliers act symmetrically; any imaginary residue is
        // round-off, but keep the tagged kind honest.
        settle_kind(out);
    }
    return out;
}

// Partial derivative along one axis via the i*xi_a multiplier.
inline GridFunction spectral_derivative(const GridFunction& f, int axis) {
    GridFunction fhat = forward_transform(f);
    const FrequencyGrid freq(f.grid);
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        const double xi = freq.vector(i)[axis];
        fhat.values[i] *= cplx{0.0, xi};
    }
    GridFunction out = inverse_transform(fhat);
    settle_kind(out);
    return out;
}

// Pointwise gradient magnitude |grad f|(x); exact for band-limited f.
inline GridFunction gradient_magnitude(const GridFunction& f) {
    GridFunction out = GridFunction::zeros(f.grid, Kind::real);
    std::vector<double> acc(f.size(), 0.0);
    for (int a = 0; a < f.grid.dim; ++a) {
        GridFunction d = spectral_derivative(f, a);
        for (std::size_t i = 0; i < f.size(); ++i) acc[i] += std::norm(d.values[i]);
    }
    for (std::size_t i = 0; i < f.size(); ++i) out.values[i] = std::sqrt(acc[i]);
    return out;
}

// Translation by a real displacement via spectral phases. Exact for
// band-limited functions; integer-cell shifts should go through
// lattice_shift instead, which permutes samples.
inline GridFunction fractional_shift(const GridFunction& f, std::array<double, 3> y) {
    GridFunction fhat = forward_transform(f);
    const FrequencyGrid freq(f.grid);
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        const auto xi = freq.vector(i);
        double phase = 0.0;
        for (int a = 0; a < f.grid.dim; ++a) phase -= xi[a] * y[a];
        fhat.values[i] *= std::polar(1.0, phase);
    }
    GridFunction out = inverse_transform(fhat);
    settle_kind(out);
    return out;
}

} // namespace fracspace
