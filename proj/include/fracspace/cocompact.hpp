#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "fracspace/besov.hpp"
#include "fracspace/exponents.hpp"
#include "fracspace/fft.hpp"
#include "fracspace/grid.hpp"
#include "fracspace/norms.hpp"

namespace fracspace {

// Translation by an integer number of grid cells per axis; the discrete
// realization of the lattice-shift group. Always an exact permutation of
// samples, never an interpolation.
struct LatticeShift {
    std::array<long, 3> cells{0, 0, 0};

    LatticeShift inverse() const { return {{-cells[0], -cells[1], -cells[2]}}; }

    LatticeShift compose(const LatticeShift& o) const {
        return {{cells[0] + o.cells[0], cells[1] + o.cells[1], cells[2] + o.cells[2]}};
    }

    bool operator==(const LatticeShift& o) const { return cells == o.cells; }
};

// Builds a shift from a physical displacement, rejecting anything that does
// not land on whole grid cells.
inline LatticeShift shift_from_physical(const GridSpec& grid, std::array<double, 3> displacement) {
    LatticeShift y;
    for (int a = 0; a < grid.dim; ++a) {
        const double cells = displacement[a] / grid.spacing(a);
        const double rounded = std::round(cells);
        if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, std::abs(cells)))
            throw DomainError("shift of " + std::to_string(displacement[a]) +
                              " is not an integer number of grid cells");
        y.cells[a] = static_cast<long>(rounded);
    }
    return y;
}

// g_y u = u(. - y): cyclic index shift, exact group action.
inline GridFunction lattice_shift(const GridFunction& u, const LatticeShift& y) {
    u.validate();
    GridFunction out = GridFunction::zeros(u.grid, u.kind);
    const GridSpec& g = u.grid;
    std::array<long, 3> wrapped{0, 0, 0};
    for (int a = 0; a < g.dim; ++a) {
        const long n = g.n[a];
        wrapped[a] = ((y.cells[a] % n) + n) % n;
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        auto c = g.coords(i);
        std::array<int, 3> d = c;
        for (int a = 0; a < g.dim; ++a)
            d[a] = static_cast<int>((c[a] + wrapped[a]) % g.n[a]);
        out.values[g.index(d)] = u.values[i];
    }
    return out;
}

struct SequenceSpec {
    enum class Kind { translating_bump, vanishing, multi_profile };
    Kind kind = Kind::vanishing;
    std::vector<GridFunction> profiles;
    // Per-profile shift velocity in grid cells; the k-th term shifts by k*v.
    std::vector<std::array<long, 3>> velocities;
    double p = 2.0;               // vanishing scaling exponent N/p
    double support_radius = 0.0;  // declared support radius of the base profile
};

namespace detail {

inline double min_image_cell_distance(const GridSpec& g, const std::array<long, 3>& a,
                                      const std::array<long, 3>& b) {
    double d2 = 0.0;
    for (int ax = 0; ax < g.dim; ++ax) {
        const long n = g.n[ax];
        long d = ((a[ax] - b[ax]) % n + n) % n;
        d = std::min(d, n - d);
        const double phys = d * g.spacing(ax);
        d2 += phys * phys;
    }
    return std::sqrt(d2);
}

// Band-limited dilation about the box center by an integer factor k:
// refine to k*n samples per axis by zero-padding the spectrum, then read
// off every sample of the k-times-slower function around the center. The
// returned samples are exactly w(c + (x - c)/k) for the band-limited
// interpolant w.
inline GridFunction dilate_about_center(const GridFunction& w, int k) {
    if (k == 1) return w;
    const GridSpec& g = w.grid;
    GridSpec fine;
    fine.dim = g.dim;
    for (int a = 0; a < g.dim; ++a) {
        fine.n[a] = g.n[a] * k;
        fine.length[a] = g.length[a];
    }
    fine.validate();

    GridFunction what = forward_transform(w);
    GridFunction fhat = GridFunction::zeros(fine, Kind::complex);
    for (std::size_t i = 0; i < what.size(); ++i) {
        const auto c = g.coords(i);
        std::array<int, 3> fc{0, 0, 0};
        for (int a = 0; a < g.dim; ++a) {
            const int m = (c[a] < (g.n[a] + 1) / 2) ? c[a] : c[a] - g.n[a];
            fc[a] = (m >= 0) ? m : m + fine.n[a];
        }
        fhat.values[fine.index(fc)] = what.values[i];
    }
    GridFunction refined = inverse_transform(fhat);

    GridFunction out = GridFunction::zeros(g, w.kind);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto c = g.coords(i);
        std::array<int, 3> fc{0, 0, 0};
        for (int a = 0; a < g.dim; ++a) {
            const long center_c = g.n[a] / 2;
            const long center_f = static_cast<long>(fine.n[a]) / 2;
            long j = center_f + (c[a] - center_c);
            j = ((j % fine.n[a]) + fine.n[a]) % fine.n[a];
            fc[a] = static_cast<int>(j);
        }
        out.values[i] = refined.values[fine.index(fc)];
    }
    settle_kind(out);
    return out;
}

} // namespace detail

// Deterministic canonical sequences: translating bumps, vanishing
// (spreading-and-flattening) dilations u_k = k^{-N/p} w(c + (x-c)/k), and
// sums of mutually diverging profiles.
inline GridFunction generate_sequence(const SequenceSpec& spec, int k) {
    if (k < 1) throw DomainError("sequence index k must be >= 1");
    if (spec.profiles.empty()) throw GenerationError("sequence spec has no base profile");
    const GridSpec& g = spec.profiles.front().grid;
    double min_len = g.length[0];
    for (int a = 1; a < g.dim; ++a) min_len = std::min(min_len, g.length[a]);

    switch (spec.kind) {
    case SequenceSpec::Kind::translating_bump: {
        if (spec.velocities.size() != 1)
            throw GenerationError("translating_bump needs exactly one shift velocity");
        LatticeShift y{{k * spec.velocities[0][0], k * spec.velocities[0][1],
                        k * spec.velocities[0][2]}};
        return lattice_shift(spec.profiles.front(), y);
    }
    case SequenceSpec::Kind::vanishing: {
        if (!(spec.p > 0.0)) throw GenerationError("vanishing scaling needs p > 0");
        if (spec.support_radius > 0.0 && k * spec.support_radius > 0.25 * min_len)
            throw GenerationError("dilated support exceeds the box convention (radius <= L/4)");
        GridFunction u = detail::dilate_about_center(spec.profiles.front(), k);
        const double scale = std::pow(static_cast<double>(k),
                                      -static_cast<double>(g.dim) / spec.p);
        for (cplx& z : u.values) z *= scale;
        return u;
    }
    case SequenceSpec::Kind::multi_profile: {
        if (spec.velocities.size() != spec.profiles.size())
            throw GenerationError("multi_profile needs one shift velocity per profile");
        std::vector<std::array<long, 3>> shifts(spec.profiles.size());
        for (std::size_t n = 0; n < spec.profiles.size(); ++n)
            for (int a = 0; a < 3; ++a) shifts[n][a] = k * spec.velocities[n][a];
        // Mutual divergence: the min-image separation at k must not have
        // shrunk relative to k-1 (it wraps on the torus eventually).
        for (std::size_t n = 0; n < shifts.size(); ++n)
            for (std::size_t m = n + 1; m < shifts.size(); ++m) {
                const double now = detail::min_image_cell_distance(g, shifts[n], shifts[m]);
                if (k > 1) {
                    std::array<long, 3> pn, pm;
                    for (int a = 0; a < 3; ++a) {
                        pn[a] = (k - 1) * spec.velocities[n][a];
                        pm[a] = (k - 1) * spec.velocities[m][a];
                    }
                    const double prev = detail::min_image_cell_distance(g, pn, pm);
                    if (now + 1e-12 < prev)
                        throw GenerationError(
                            "shift paths stopped diverging at k = " + std::to_string(k) +
                            " (torus wrap)");
                } else if (now == 0.0) {
                    throw GenerationError("multi_profile shift paths must be distinct");
                }
            }
        GridFunction u = GridFunction::zeros(g, Kind::complex);
        for (std::size_t n = 0; n < spec.profiles.size(); ++n) {
            GridFunction part = lattice_shift(spec.profiles[n], LatticeShift{shifts[n]});
            for (std::size_t i = 0; i < u.size(); ++i) u.values[i] += part.values[i];
        }
        settle_kind(u);
        return u;
    }
    }
    throw GenerationError("unknown sequence kind");
}

struct ProfileDecomposition {
    std::vector<GridFunction> profiles;  // recentered at the origin cell
    std::vector<LatticeShift> shifts;    // in grid cells
    GridFunction remainder;
    double bl_residual = 0.0;
    double reconstruction_error = 0.0;
};

inline double brezis_lieb_check(const GridFunction& u, const std::vector<GridFunction>& profiles,
                                const std::vector<LatticeShift>& shifts, double p);

// Greedy profile extraction by local L^2 mass: find the lattice cell with
// the largest mass, window it (cell plus a one-cell halo), record the
// windowed content and its shift, subtract, repeat. Stops when no cell
// holds more than eps_stop of the current residual's L^2 norm, so running
// it again on its own remainder extracts nothing.
inline ProfileDecomposition profile_extract(const GridFunction& u, int cell_size, double eps_stop,
                                            int max_profiles) {
    u.validate();
    if (max_profiles <= 0) throw ConfigError("max_profiles must be positive");
    if (!(eps_stop > 0.0)) throw DomainError("eps_stop must be positive");
    const GridSpec& g = u.grid;
    if (cell_size < 1) throw DomainError("cell_size must be positive");
    for (int a = 0; a < g.dim; ++a)
        if (g.n[a] % cell_size != 0)
            throw DomainError("cell_size must divide every grid extent");

    std::array<int, 3> cells{1, 1, 1};
    std::size_t n_cells = 1;
    for (int a = 0; a < g.dim; ++a) {
        cells[a] = g.n[a] / cell_size;
        n_cells *= static_cast<std::size_t>(cells[a]);
    }

    ProfileDecomposition dec;
    GridFunction r = u;

    const auto cell_of = [&](const std::array<int, 3>& c) {
        std::size_t idx = 0;
        for (int a = 0; a < g.dim; ++a) idx = idx * cells[a] + c[a] / cell_size;
        return idx;
    };
    const auto cell_coords = [&](std::size_t idx) {
        std::array<int, 3> c{0, 0, 0};
        for (int a = g.dim - 1; a >= 0; --a) {
            c[a] = static_cast<int>(idx % cells[a]);
            idx /= cells[a];
        }
        return c;
    };

    while (static_cast<int>(dec.profiles.size()) < max_profiles) {
        std::vector<double> mass(n_cells, 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double m = std::norm(r.values[i]);
            mass[cell_of(g.coords(i))] += m;
            total += m;
        }
        if (total == 0.0) break;
        std::size_t best = 0;
        for (std::size_t c = 1; c < n_cells; ++c)
            if (mass[c] > mass[best]) best = c;
        if (std::sqrt(mass[best]) < eps_stop * std::sqrt(total)) break;

        const auto bc = cell_coords(best);
        LatticeShift shift;
        for (int a = 0; a < g.dim; ++a)
            shift.cells[a] = static_cast<long>(bc[a]) * cell_size;

        // Window: the cell plus a one-cell halo on each side, periodic.
        GridFunction windowed = GridFunction::zeros(g, r.kind);
        for (std::size_t i = 0; i < r.size(); ++i) {
            const auto c = g.coords(i);
            bool inside = true;
            for (int a = 0; a < g.dim && inside; ++a) {
                const int n = g.n[a];
                int d = c[a] - static_cast<int>(shift.cells[a]);
                d = ((d % n) + n) % n;
                if (d >= 2 * cell_size && d < n - cell_size) inside = false;
            }
            if (inside) windowed.values[i] = r.values[i];
        }

        for (std::size_t i = 0; i < r.size(); ++i) r.values[i] -= windowed.values[i];
        dec.profiles.push_back(lattice_shift(windowed, shift.inverse()));
        dec.shifts.push_back(shift);
    }

    settle_kind(r);
    dec.remainder = r;

    GridFunction recon = GridFunction::zeros(g, Kind::complex);
    for (std::size_t n = 0; n < dec.profiles.size(); ++n) {
        GridFunction part = lattice_shift(dec.profiles[n], dec.shifts[n]);
        for (std::size_t i = 0; i < recon.size(); ++i) recon.values[i] += part.values[i];
    }
    for (std::size_t i = 0; i < recon.size(); ++i)
        recon.values[i] += dec.remainder.values[i] - u.values[i];
    settle_kind(recon);
    dec.reconstruction_error = lp_norm(recon, 2.0);
    const double u2 = lp_norm(u, 2.0);
    dec.bl_residual =
        (u2 > 0.0 && !dec.profiles.empty())
            ? brezis_lieb_check(u, dec.profiles, dec.shifts, 2.0)
            : 0.0;
    return dec;
}

// Iterated Brezis-Lieb defect: | int|u|^p - sum int|w_n|^p - int|u - sum
// shifted w_n|^p | normalized by int|u|^p.
inline double brezis_lieb_check(const GridFunction& u, const std::vector<GridFunction>& profiles,
                                const std::vector<LatticeShift>& shifts, double p) {
    u.validate();
    if (!(p >= 1.0) || p == inf_exponent)
        throw DomainError("Brezis-Lieb check needs 1 <= p < inf");
    if (profiles.size() != shifts.size())
        throw PreconditionError("profiles and shifts must pair up");
    for (std::size_t i = 0; i < shifts.size(); ++i)
        for (std::size_t j = i + 1; j < shifts.size(); ++j)
            if (shifts[i] == shifts[j])
                throw PreconditionError("Brezis-Lieb shifts must be distinct");

    const double iu = integrate_abs_pow(u, p);
    if (iu == 0.0) throw DegenerateInputError("Brezis-Lieb check on the zero function");

    double sum_profiles = 0.0;
    GridFunction rem = u;
    for (std::size_t n = 0; n < profiles.size(); ++n) {
        sum_profiles += integrate_abs_pow(profiles[n], p);
        GridFunction part = lattice_shift(profiles[n], shifts[n]);
        for (std::size_t i = 0; i < rem.size(); ++i) rem.values[i] -= part.values[i];
    }
    settle_kind(rem);
    const double irem = integrate_abs_pow(rem, p);
    return std::abs(iu - sum_profiles - irem) / iu;
}

struct SpaceDescriptor {
    enum class Family { sobolev, besov };
    Family family = Family::sobolev;
    double smoothness = 1.0;  // alpha for Sobolev, s for Besov
    double p = 2.0;
    double q0 = 2.0;  // Besov third index

    double norm(const GridFunction& f) const {
        if (family == Family::sobolev) return sobolev_norm(f, smoothness, p);
        return besov_norm(f, smoothness, p, q0);
    }

    std::string label() const {
        if (family == Family::sobolev)
            return "W^{" + std::to_string(smoothness) + "," + std::to_string(p) + "}";
        return "B^{" + std::to_string(smoothness) + "," + std::to_string(p) + "," +
               std::to_string(q0) + "}";
    }
};

struct DemoRow {
    int k;
    double source_norm;
    double target_norm;
};

struct CocompactnessReport {
    std::vector<DemoRow> rows;
    double predicted_exponent = 0.0;  // N (1/p - 1/q)
    bool source_bracket_ok = false;   // source norms within [1/2, 2] of k=1
    bool decay_monotone = false;
    bool decay_matches = false;       // per-k match of k^{-N(1/p-1/q)} within 10%
    bool reached_20pct = false;       // informational: final <= 20% of initial
    bool verdict = false;
};

// Desk-scale witness of the cocompactness mechanism: a vanishing sequence
// keeps its source-space norm bounded while its subcritical L^q norm decays
// along the scaling law k^{-N(1/p-1/q)}.
inline CocompactnessReport cocompactness_demo(const SpaceDescriptor& source, double q,
                                              const SequenceSpec& spec, int k_max) {
    if (spec.kind != SequenceSpec::Kind::vanishing)
        throw PreconditionError("cocompactness demo needs a vanishing sequence spec");
    if (k_max < 2) throw DomainError("k_max must be at least 2");
    const GridSpec& g = spec.profiles.front().grid;
    const double p = source.p;
    const double crit = ExponentBook::critical_exponent(source.smoothness, p, g.dim);
    if (!(q > p))
        throw PreconditionError("exponent window violated: need q > p (cocompactness fails at q = p)");
    if (!(q < crit))
        throw PreconditionError("exponent window violated: need q < p*_alpha = " +
                                std::to_string(crit));
    if (source.family == SpaceDescriptor::Family::besov) {
        if (!(source.q0 >= p))
            throw PreconditionError("Besov demo needs q0 >= p");
    }

    CocompactnessReport rep;
    rep.predicted_exponent = g.dim * (1.0 / p - 1.0 / q);
    for (int k = 1; k <= k_max; ++k) {
        GridFunction u = generate_sequence(spec, k);
        rep.rows.push_back({k, source.norm(u), lp_norm(u, q)});
    }

    const double src1 = rep.rows.front().source_norm;
    const double tgt1 = rep.rows.front().target_norm;
    rep.source_bracket_ok = true;
    rep.decay_monotone = true;
    rep.decay_matches = true;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        if (!(row.source_norm >= 0.5 * src1 && row.source_norm <= 2.0 * src1))
            rep.source_bracket_ok = false;
        if (i > 0 && row.target_norm > rep.rows[i - 1].target_norm * (1.0 + 1e-12))
            rep.decay_monotone = false;
        const double predicted = tgt1 * std::pow(static_cast<double>(row.k),
                                                 -rep.predicted_exponent);
        if (!(row.target_norm >= 0.9 * predicted && row.target_norm <= 1.1 * predicted))
            rep.decay_matches = false;
    }
    rep.reached_20pct = rep.rows.back().target_norm <= 0.2 * tgt1;
    rep.verdict = rep.source_bracket_ok && rep.decay_monotone && rep.decay_matches;
    return rep;
}

} // namespace fracspace
