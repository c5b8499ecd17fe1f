#pragma once

// Seeded test-function batteries. The generator is std::mt19937_64 and a
// uniform draw on [0, 1) is (x >> 11) · 2^−53 of the raw 64-bit output, so a
// battery is reproducible from its seed in any language with an MT19937-64.

#include "symlab/errors.hpp"
#include "symlab/radial_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace symlab {

class BatteryRng
{
public:
    explicit BatteryRng(std::uint64_t seed)
        : engine_(seed)
    {}

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    /// Integer in [lo, hi].
    int integer(int lo, int hi)
    {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<int>(static_cast<std::uint64_t>(uniform01() * static_cast<double>(span)));
    }

private:
    std::mt19937_64 engine_;
};

/// Smooth step χ(t): 1 for t ≤ 1/2, 0 for t ≥ 1, C^∞ in between.
inline double smooth_cutoff(double t)
{
    const auto psi = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
    if (t <= 0.5) {
        return 1.0;
    }
    if (t >= 1.0) {
        return 0.0;
    }
    const double a = psi(1.0 - t);
    return a / (a + psi(t - 0.5));
}

/// Piecewise-linear profile with 3..7 random knots, values in [0.05, 1], zero at R.
inline RadialFunction random_pl_profile(BatteryRng& rng, const RadialGrid& grid)
{
    const int knots = rng.integer(3, 7);
    const double R = grid.radius();
    std::vector<double> xs{0.0};
    for (int i = 1; i < knots; ++i) {
        xs.push_back(rng.uniform(0.0, R));
    }
    std::sort(xs.begin(), xs.end());
    xs.push_back(R);
    std::vector<double> ys;
    for (int i = 0; i < knots; ++i) {
        ys.push_back(rng.uniform(0.05, 1.0));
    }
    ys.push_back(0.0);
    return RadialFunction::sample(grid, [&](double r) {
        const auto it = std::upper_bound(xs.begin(), xs.end(), r);
        if (it == xs.end()) {
            return ys.back();
        }
        const std::size_t j = static_cast<std::size_t>(it - xs.begin());
        const double x0 = xs[j - 1];
        const double x1 = xs[j];
        const double t = x1 > x0 ? (r - x0) / (x1 - x0) : 0.0;
        return (1.0 - t) * ys[j - 1] + t * ys[j];
    });
}

/// Radially non-increasing piecewise-linear profile with 3..7 random knots, values in [0, 1].
inline RadialFunction random_nonincreasing_profile(BatteryRng& rng, const RadialGrid& grid)
{
    const int knots = rng.integer(3, 7);
    const double R = grid.radius();
    std::vector<double> xs{0.0};
    for (int i = 1; i < knots; ++i) {
        xs.push_back(rng.uniform(0.0, R));
    }
    std::sort(xs.begin(), xs.end());
    xs.push_back(R);
    std::vector<double> ys;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ys.push_back(rng.uniform01());
    }
    std::sort(ys.begin(), ys.end(), std::greater<>());
    return RadialFunction::sample(grid, [&](double r) {
        const auto it = std::upper_bound(xs.begin(), xs.end(), r);
        if (it == xs.end()) {
            return ys.back();
        }
        const std::size_t j = static_cast<std::size_t>(it - xs.begin());
        const double x0 = xs[j - 1];
        const double x1 = xs[j];
        const double t = x1 > x0 ? (r - x0) / (x1 - x0) : 0.0;
        return std::max((1.0 - t) * ys[j - 1] + t * ys[j], 0.0);
    });
}

struct SmoothBump
{
    std::string label;
    RadialFunction u;
};

/// Smooth compactly supported profiles in the variable r², vanishing to high
/// order at R: random positive combinations of (1 − (r/R)²)^q with q ≥ q_min,
/// a shifted Gaussian-type bump, and a polynomially decaying bump times χ(r/R).
inline std::vector<SmoothBump> smooth_bump_battery(BatteryRng& rng, const RadialGrid& grid, int count, int q_min)
{
    const double R = grid.radius();
    std::vector<SmoothBump> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const int kind = i % 3;
        if (kind == 0) {
            const int terms = rng.integer(1, 3);
            std::vector<std::pair<double, int>> coef;
            for (int j = 0; j < terms; ++j) {
                coef.emplace_back(rng.uniform(0.2, 1.0), q_min + rng.integer(0, 4));
            }
            out.push_back({"poly", RadialFunction::sample(grid, [&](double r) {
                               const double s = std::max(1.0 - (r / R) * (r / R), 0.0);
                               double acc = 0.0;
                               for (auto [a, q] : coef) {
                                   acc += a * std::pow(s, q);
                               }
                               return acc;
                           })});
        } else if (kind == 1) {
            const double width = rng.uniform(0.15, 0.4) * R;
            const int q = q_min + rng.integer(0, 2);
            out.push_back({"gauss", RadialFunction::sample(grid, [&](double r) {
                               const double s = std::max(1.0 - (r / R) * (r / R), 0.0);
                               return std::exp(-(r / width) * (r / width)) * std::pow(s, q);
                           })});
        } else {
            const double sigma = rng.uniform(0.2, 0.5) * R;
            const double beta = rng.uniform(0.5, 2.0);
            out.push_back({"decay", RadialFunction::sample(grid, [&](double r) {
                               return std::pow(1.0 + (r / sigma) * (r / sigma), -beta) * smooth_cutoff(r / R);
                           })});
        }
    }
    return out;
}

} // namespace symlab
