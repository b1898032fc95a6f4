#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "fracspace/errors.hpp"
#include "fracspace/reduce.hpp"

namespace fracspace {

using cplx = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Periodic box discretization: N axes (1..3), n_i samples per axis,
// box lengths L_i. Sample x_i(j) = j * L_i / n_i.
struct GridSpec {
    int dim = 1;
    std::array<int, 3> n{8, 1, 1};
    std::array<double, 3> length{1.0, 1.0, 1.0};

    static GridSpec make(int dim, std::array<int, 3> n, std::array<double, 3> length) {
        GridSpec g;
        g.dim = dim;
        g.n = n;
        g.length = length;
        for (int a = dim; a < 3; ++a) {
            g.n[a] = 1;
            g.length[a] = 1.0;
        }
        g.validate();
        return g;
    }

    static GridSpec uniform(int dim, int points, double box_length) {
        return make(dim, {points, points, points}, {box_length, box_length, box_length});
    }

    void validate() const {
        if (dim < 1 || dim > 3)
            throw MalformedInputError("grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
        std::uint64_t total = 1;
        for (int a = 0; a < dim; ++a) {
            if (n[a] < 8)
                throw MalformedInputError("grid needs at least 8 points per axis, got " + std::to_string(n[a]));
            if (!(length[a] > 0.0) || !std::isfinite(length[a]))
                throw MalformedInputError("box length must be positive and finite");
            total *= static_cast<std::uint64_t>(n[a]);
            if (total > (std::uint64_t{1} << 31))
                throw MalformedInputError("grid point count exceeds addressable budget");
        }
    }

    std::size_t size() const {
        std::size_t s = 1;
        for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(n[a]);
        return s;
    }

    double spacing(int axis) const { return length[axis] / n[axis]; }

    double cell_volume() const {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= spacing(a);
        return v;
    }

    double volume() const {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= length[a];
        return v;
    }

    // Row-major flat index; trailing axes beyond dim have extent 1.
    std::size_t index(std::array<int, 3> i) const {
        std::size_t idx = 0;
        for (int a = 0; a < dim; ++a) idx = idx * n[a] + static_cast<std::size_t>(i[a]);
        return idx;
    }

    std::array<int, 3> coords(std::size_t idx) const {
        std::array<int, 3> c{0, 0, 0};
        for (int a = dim - 1; a >= 0; --a) {
            c[a] = static_cast<int>(idx % n[a]);
            idx /= n[a];
        }
        return c;
    }

    double coordinate(int axis, int i) const { return spacing(axis) * i; }

    bool operator==(const GridSpec& o) const {
        if (dim != o.dim) return false;
        for (int a = 0; a < dim; ++a)
            if (n[a] != o.n[a] || length[a] != o.length[a]) return false;
        return true;
    }
};

enum class Kind { real, complex };

// Sampled function on a periodic grid; the universal value type of the
// library. Values are stored complex; kind==real promises the imaginary
// parts are numerically negligible.
struct GridFunction {
    GridSpec grid;
    std::vector<cplx> values;
    Kind kind = Kind::complex;

    static GridFunction zeros(const GridSpec& g, Kind kind = Kind::real) {
        GridFunction f;
        f.grid = g;
        f.values.assign(g.size(), cplx{0.0, 0.0});
        f.kind = kind;
        return f;
    }

    std::size_t size() const { return values.size(); }

    void validate() const {
        grid.validate();
        if (values.size() != grid.size())
            throw MalformedInputError("value count " + std::to_string(values.size()) +
                                      " does not match grid size " + std::to_string(grid.size()));
        if (kind == Kind::real) {
            double max_mod = 0.0, max_im = 0.0;
            for (const cplx& z : values) {
                max_mod = std::max(max_mod, std::abs(z));
                max_im = std::max(max_im, std::abs(z.imag()));
            }
            if (max_im > 1e-12 * max_mod && max_im > 0.0)
                throw MalformedInputError("function tagged real has imaginary part " +
                                          std::to_string(max_im));
        }
    }
};

// Tags a function as real when the imaginary residue is below the invariant
// threshold, otherwise leaves it complex.
inline void settle_kind(GridFunction& f) {
    double max_mod = 0.0, max_im = 0.0;
    for (const cplx& z : f.values) {
        max_mod = std::max(max_mod, std::abs(z));
        max_im = std::max(max_im, std::abs(z.imag()));
    }
    f.kind = (max_im <= 1e-12 * max_mod || max_mod == 0.0) ? Kind::real : Kind::complex;
}

// Frequencies in the spectral transform's native ordering: along each axis
// the modes run 0, 1, ..., n/2-1, -n/2, ..., -1 (so index 0 carries xi = 0),
// scaled by 2*pi/L. This layout is fixed; everything spectral relies on it.
struct FrequencyGrid {
    GridSpec grid;
    std::array<std::vector<double>, 3> axis_freq;

    explicit FrequencyGrid(const GridSpec& g) : grid(g) {
        for (int a = 0; a < g.dim; ++a) {
            const int n = g.n[a];
            axis_freq[a].resize(n);
            for (int i = 0; i < n; ++i) {
                const int m = (i < (n + 1) / 2) ? i : i - n;
                axis_freq[a][i] = two_pi * m / g.length[a];
            }
        }
    }

    double component(int axis, int i) const { return axis_freq[axis][i]; }

    double norm_sq(std::size_t flat) const {
        const auto c = grid.coords(flat);
        double q = 0.0;
        for (int a = 0; a < grid.dim; ++a) {
            const double xi = axis_freq[a][c[a]];
            q += xi * xi;
        }
        return q;
    }

    std::array<double, 3> vector(std::size_t flat) const {
        const auto c = grid.coords(flat);
        std::array<double, 3> v{0.0, 0.0, 0.0};
        for (int a = 0; a < grid.dim; ++a) v[a] = axis_freq[a][c[a]];
        return v;
    }
};

// Trapezoidal quadrature on the periodic grid (no boundary terms).
inline double integrate_abs_pow(const GridFunction& f, double p) {
    std::vector<double> buf(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) buf[i] = std::pow(std::abs(f.values[i]), p);
    return f.grid.cell_volume() * pairwise_sum(buf);
}

inline cplx integrate(const GridFunction& f) {
    std::vector<double> re(f.size()), im(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        re[i] = f.values[i].real();
        im[i] = f.values[i].imag();
    }
    return f.grid.cell_volume() * cplx{pairwise_sum(re), pairwise_sum(im)};
}

// <f, g> = integral of f * conj(g).
inline cplx inner_product(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid == g.grid)) throw MalformedInputError("inner product needs matching grids");
    std::vector<double> re(f.size()), im(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const cplx z = f.values[i] * std::conj(g.values[i]);
        re[i] = z.real();
        im[i] = z.imag();
    }
    return f.grid.cell_volume() * cplx{pairwise_sum(re), pairwise_sum(im)};
}

inline double max_abs(const GridFunction& f) {
    double m = 0.0;
    for (const cplx& z : f.values) m = std::max(m, std::abs(z));
    return m;
}

} // namespace fracspace
