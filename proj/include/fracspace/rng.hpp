#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace fracspace {

// Deterministic Gaussian stream built on the mt19937_64 bit stream with an
// explicit Box-Muller transform. std::mt19937_64 output is pinned by the
// standard; distributions are not, so we avoid them for anything whose
// values get frozen into tests or emitted artifacts.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {
        // 53-bit mantissa in [0, 1).
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace fracspace
