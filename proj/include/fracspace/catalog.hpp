#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fracspace/grid.hpp"

namespace fracspace {

enum class CatalogName { gaussian_bump, compact_bump, sine_mode, constant, plateau };

inline CatalogName parse_catalog_name(const std::string& s) {
    if (s == "gaussian_bump") return CatalogName::gaussian_bump;
    if (s == "compact_bump") return CatalogName::compact_bump;
    if (s == "sine_mode") return CatalogName::sine_mode;
    if (s == "constant") return CatalogName::constant;
    if (s == "plateau") return CatalogName::plateau;
    throw DomainError("unknown catalog function '" + s + "'");
}

namespace detail {

// Minimum-image displacement from c along one periodic axis.
inline double min_image(double x, double c, double L) {
    double d = std::fmod(x - c, L);
    if (d > 0.5 * L) d -= L;
    if (d < -0.5 * L) d += L;
    return d;
}

// C-infinity step: 0 at s<=0, 1 at s>=1.
inline double smooth_step(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / s);
    const double b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}

inline std::array<double, 3> center_from_params(const std::vector<double>& params,
                                                std::size_t offset, const GridSpec& g) {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    if (params.size() > offset) {
        if (params.size() != offset + static_cast<std::size_t>(g.dim))
            throw DomainError("center parameters must supply one coordinate per axis");
        for (int a = 0; a < g.dim; ++a) c[a] = params[offset + a];
    } else {
        for (int a = 0; a < g.dim; ++a) c[a] = 0.5 * g.length[a];
    }
    return c;
}

} // namespace detail

// Deterministic sampled test functions. Parameter conventions:
//   constant:      { c }
//   sine_mode:     { k_1, ..., k_N }   integer modes, sin(2 pi sum k_a x_a / L_a)
//   gaussian_bump: { sigma [, center...] }   periodized over +-1 box images
//   compact_bump:  { R [, center...] }       exp(1 - 1/(1 - (r/R)^2)) inside r < R
//   plateau:       { R1, R2 [, center...] }  1 for r <= R1, 0 for r >= R2
inline GridFunction catalog_function(CatalogName name, const std::vector<double>& params,
                                     const GridSpec& grid) {
    grid.validate();
    GridFunction f = GridFunction::zeros(grid, Kind::real);
    const std::size_t total = grid.size();

    switch (name) {
    case CatalogName::constant: {
        if (params.size() != 1) throw DomainError("constant takes exactly one parameter");
        for (std::size_t i = 0; i < total; ++i) f.values[i] = params[0];
        return f;
    }
    case CatalogName::sine_mode: {
        if (params.size() != static_cast<std::size_t>(grid.dim))
            throw DomainError("sine_mode takes one integer mode per axis");
        for (std::size_t i = 0; i < total; ++i) {
            const auto c = grid.coords(i);
            double phase = 0.0;
            for (int a = 0; a < grid.dim; ++a)
                phase += two_pi * params[a] * grid.coordinate(a, c[a]) / grid.length[a];
            f.values[i] = std::sin(phase);
        }
        return f;
    }
    case CatalogName::gaussian_bump: {
        if (params.empty()) throw DomainError("gaussian_bump needs a width parameter");
        const double sigma = params[0];
        if (!(sigma > 0.0)) throw DomainError("gaussian width must be positive");
        const auto center = detail::center_from_params(params, 1, grid);
        const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
        // Periodization over the adjacent box images; further images are
        // below 1e-14 for sigma <= L/8.
        const int img = 1;
        for (std::size_t i = 0; i < total; ++i) {
            const auto c = grid.coords(i);
            double sum = 0.0;
            std::array<int, 3> m{0, 0, 0};
            const int m1 = grid.dim > 1 ? img : 0;
            const int m2 = grid.dim > 2 ? img : 0;
            for (m[0] = -img; m[0] <= img; ++m[0])
                for (m[1] = -m1; m[1] <= m1; ++m[1])
                    for (m[2] = -m2; m[2] <= m2; ++m[2]) {
                        double r2 = 0.0;
                        for (int a = 0; a < grid.dim; ++a) {
                            const double d =
                                grid.coordinate(a, c[a]) - center[a] + m[a] * grid.length[a];
                            r2 += d * d;
                        }
                        sum += std::exp(-r2 * inv2s2);
                    }
            f.values[i] = sum;
        }
        return f;
    }
    case CatalogName::compact_bump: {
        if (params.empty()) throw DomainError("compact_bump needs a radius parameter");
        const double R = params[0];
        if (!(R > 0.0)) throw DomainError("bump radius must be positive");
        for (int a = 0; a < grid.dim; ++a)
            if (R > 0.5 * grid.length[a])
                throw DomainError("bump radius exceeds half the box length");
        const auto center = detail::center_from_params(params, 1, grid);
        for (std::size_t i = 0; i < total; ++i) {
            const auto c = grid.coords(i);
            double r2 = 0.0;
            for (int a = 0; a < grid.dim; ++a) {
                const double d =
                    detail::min_image(grid.coordinate(a, c[a]), center[a], grid.length[a]);
                r2 += d * d;
            }
            const double s2 = r2 / (R * R);
            f.values[i] = (s2 < 1.0) ? std::exp(1.0 - 1.0 / (1.0 - s2)) : 0.0;
        }
        return f;
    }
    case CatalogName::plateau: {
        if (params.size() < 2) throw DomainError("plateau needs inner and outer radii");
        const double R1 = params[0], R2 = params[1];
        if (!(0.0 < R1 && R1 < R2)) throw DomainError("plateau radii must satisfy 0 < R1 < R2");
        for (int a = 0; a < grid.dim; ++a)
            if (R2 > 0.5 * grid.length[a])
                throw DomainError("bump radius exceeds half the box length");
        const auto center = detail::center_from_params(params, 2, grid);
        for (std::size_t i = 0; i < total; ++i) {
            const auto c = grid.coords(i);
            double r2 = 0.0;
            for (int a = 0; a < grid.dim; ++a) {
                const double d =
                    detail::min_image(grid.coordinate(a, c[a]), center[a], grid.length[a]);
                r2 += d * d;
            }
            const double r = std::sqrt(r2);
            f.values[i] = 1.0 - detail::smooth_step((r - R1) / (R2 - R1));
        }
        return f;
    }
    }
    throw DomainError("unknown catalog function");
}

inline GridFunction catalog_function(const std::string& name, const std::vector<double>& params,
                                     const GridSpec& grid) {
    return catalog_function(parse_catalog_name(name), params, grid);
}

} // namespace fracspace
