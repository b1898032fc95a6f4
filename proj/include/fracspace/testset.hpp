#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracspace/catalog.hpp"
#include "fracspace/fft.hpp"
#include "fracspace/grid.hpp"
#include "fracspace/rng.hpp"

namespace fracspace {

// Band-limited pseudo-random function: gaussian spectral coefficients on
// modes |m_a| <= band_fraction * n_a / 2, fully determined by the seed.
inline GridFunction random_function(const GridSpec& grid, std::uint64_t seed,
                                    double band_fraction = 0.5, Kind kind = Kind::complex) {
    grid.validate();
    GaussianStream rng(seed);
    GridFunction fhat = GridFunction::zeros(grid, Kind::complex);
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        const auto c = grid.coords(i);
        bool in_band = true;
        for (int a = 0; a < grid.dim && in_band; ++a) {
            const int n = grid.n[a];
            const int m = (c[a] < (n + 1) / 2) ? c[a] : c[a] - n;
            if (std::abs(m) > band_fraction * n / 2.0) in_band = false;
        }
        // Draw unconditionally so the stream position is independent of the
        // band mask.
        const double re = rng.gaussian();
        const double im = rng.gaussian();
        if (in_band) fhat.values[i] = cplx{re, im};
    }
    GridFunction f = inverse_transform(fhat);
    if (kind == Kind::real) {
        for (cplx& z : f.values) z = z.real();
        f.kind = Kind::real;
    }
    return f;
}

inline std::vector<GridFunction> random_suite(const GridSpec& grid, std::size_t count,
                                              std::uint64_t seed0, double band_fraction = 0.5,
                                              Kind kind = Kind::complex) {
    std::vector<GridFunction> suite;
    suite.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        suite.push_back(random_function(grid, seed0 + i, band_fraction, kind));
    return suite;
}

inline constexpr const char* smooth_test_set_name = "smooth-v1";

// Frozen smooth suite used by the mollifier decay and sigma estimates:
// bumps of three widths, two single modes, and a fixed multiscale sum.
inline std::vector<GridFunction> smooth_test_set(const GridSpec& grid) {
    grid.validate();
    double min_len = grid.length[0];
    for (int a = 1; a < grid.dim; ++a) min_len = std::min(min_len, grid.length[a]);

    std::vector<GridFunction> set;
    set.push_back(catalog_function(CatalogName::gaussian_bump, {min_len / 16.0}, grid));
    set.push_back(catalog_function(CatalogName::gaussian_bump, {min_len / 8.0}, grid));
    set.push_back(catalog_function(CatalogName::gaussian_bump, {min_len / 24.0}, grid));

    std::vector<double> mode1(grid.dim, 0.0), mode3(grid.dim, 0.0);
    mode1[0] = 1.0;
    mode3[0] = 3.0;
    set.push_back(catalog_function(CatalogName::sine_mode, mode1, grid));
    set.push_back(catalog_function(CatalogName::sine_mode, mode3, grid));

    // Multiscale sum: bump + weighted higher modes.
    GridFunction multi = catalog_function(CatalogName::gaussian_bump, {min_len / 10.0}, grid);
    std::vector<double> mode2(grid.dim, 0.0), mode5(grid.dim, 0.0);
    mode2[0] = 2.0;
    mode5[0] = 5.0;
    GridFunction m2 = catalog_function(CatalogName::sine_mode, mode2, grid);
    GridFunction m5 = catalog_function(CatalogName::sine_mode, mode5, grid);
    for (std::size_t i = 0; i < multi.size(); ++i)
        multi.values[i] += 0.5 * m2.values[i] + 0.25 * m5.values[i];
    set.push_back(multi);
    return set;
}

} // namespace fracspace
