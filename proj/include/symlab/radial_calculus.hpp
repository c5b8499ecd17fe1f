#pragma once

// Radial grids and functions on a model manifold, the radial Laplace–Beltrami
// operator Δu = u'' + (A'/A) u', the iterated magnitudes |D^m u| and
// volume-weighted integrals.

#include "symlab/errors.hpp"
#include "symlab/model_geometry.hpp"
#include "symlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace symlab {

enum class Spacing
{
    uniform,
    geometric,
    custom
};

class RadialGrid
{
public:
    static constexpr int min_intervals = 16;

    /// Nodes r_i = i R / N, i = 0..N.
    static RadialGrid uniform(double radius, int intervals)
    {
        detail::require(radius > 0.0, "RadialGrid: radius must be positive");
        check_intervals(intervals);
        std::vector<double> nodes(static_cast<std::size_t>(intervals) + 1);
        for (int i = 0; i <= intervals; ++i) {
            nodes[static_cast<std::size_t>(i)] = radius * i / intervals;
        }
        nodes.back() = radius;
        return RadialGrid(std::move(nodes), Spacing::uniform);
    }

    /// Cells growing by `ratio` from the centre outwards: h_{i+1} = ratio · h_i.
    static RadialGrid geometric(double radius, int intervals, double ratio)
    {
        detail::require(radius > 0.0, "RadialGrid: radius must be positive");
        detail::require(ratio > 0.0, "RadialGrid: geometric ratio must be positive");
        check_intervals(intervals);
        std::vector<double> nodes(static_cast<std::size_t>(intervals) + 1, 0.0);
        double h = ratio == 1.0 ? radius / intervals
                                : radius * (ratio - 1.0) / (std::pow(ratio, intervals) - 1.0);
        for (int i = 1; i <= intervals; ++i) {
            nodes[static_cast<std::size_t>(i)] = nodes[static_cast<std::size_t>(i) - 1] + h;
            h *= ratio;
        }
        nodes.back() = radius;
        return RadialGrid(std::move(nodes), Spacing::geometric);
    }

    explicit RadialGrid(std::vector<double> nodes, Spacing spacing = Spacing::custom)
        : nodes_(std::move(nodes))
        , spacing_(spacing)
    {
        check_intervals(static_cast<int>(nodes_.size()) - 1);
        detail::require(nodes_.front() == 0.0, "RadialGrid: first node must be 0");
        for (std::size_t i = 1; i < nodes_.size(); ++i) {
            detail::require(nodes_[i] > nodes_[i - 1], "RadialGrid: nodes must be strictly increasing");
        }
    }

    std::span<const double> nodes() const { return nodes_; }
    double operator[](std::size_t i) const { return nodes_[i]; }
    std::size_t size() const { return nodes_.size(); }
    int intervals() const { return static_cast<int>(nodes_.size()) - 1; }
    double radius() const { return nodes_.back(); }
    Spacing spacing() const { return spacing_; }

    /// Index of the cell [r_i, r_{i+1}] containing r (clamped to the grid).
    std::size_t cell_of(double r) const
    {
        if (r <= nodes_.front()) {
            return 0;
        }
        if (r >= nodes_.back()) {
            return nodes_.size() - 2;
        }
        const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
        return static_cast<std::size_t>(it - nodes_.begin()) - 1;
    }

private:
    static void check_intervals(int intervals)
    {
        if (intervals < min_intervals) {
            throw config_error("RadialGrid: at least " + std::to_string(min_intervals)
                + " intervals required, got " + std::to_string(intervals));
        }
    }

    std::vector<double> nodes_;
    Spacing spacing_ = Spacing::custom;
};

/// Nodal values of a radial profile; between nodes it is the piecewise-linear interpolant.
class RadialFunction
{
public:
    RadialFunction(RadialGrid grid, std::vector<double> values)
        : grid_(std::move(grid))
        , values_(std::move(values))
    {
        detail::require(values_.size() == grid_.size(), "RadialFunction: value count must match the grid");
        for (double v : values_) {
            detail::require(std::isfinite(v), "RadialFunction: values must be finite");
        }
    }

    template <class F>
    static RadialFunction sample(const RadialGrid& grid, F&& f)
    {
        std::vector<double> values(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            values[i] = f(grid[i]);
        }
        return RadialFunction(grid, std::move(values));
    }

    const RadialGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    double operator()(double r) const
    {
        const std::size_t c = grid_.cell_of(r);
        const double r0 = grid_[c];
        const double r1 = grid_[c + 1];
        const double t = (r - r0) / (r1 - r0);
        return (1.0 - t) * values_[c] + t * values_[c + 1];
    }

    RadialFunction scaled(double factor) const
    {
        std::vector<double> v(values_);
        for (double& x : v) {
            x *= factor;
        }
        return RadialFunction(grid_, std::move(v));
    }

    bool is_zero() const
    {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
    }

private:
    RadialGrid grid_;
    std::vector<double> values_;
};

/// A radial weight h(r) ≥ 0. `singular_order` σ declares h(r) ~ r^{−σ} at the
/// origin so that integrability against r^{n−1} can be checked up front.
struct Weight
{
    std::string label;
    std::function<double(double)> h;
    double singular_order = 0.0;
    std::map<std::string, double> params;
};

inline Weight unit_weight()
{
    return {"one", [](double) { return 1.0; }, 0.0, {}};
}

/// h(r) = r^{−σ}.
inline Weight power_weight(double sigma)
{
    return {"r^-" + std::to_string(sigma), [sigma](double r) { return std::pow(r, -sigma); }, sigma,
        {{"sigma", sigma}}};
}

namespace detail {

// Fornberg's recursion: weights[i][d] approximates the d-th derivative at x0
// from values at nodes x[i], for d = 0, 1, 2.
inline std::vector<std::array<double, 3>> fd_weights(double x0, std::span<const double> x)
{
    const std::size_t count = x.size();
    std::vector<std::array<double, 3>> c(count, std::array<double, 3>{0.0, 0.0, 0.0});
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < count; ++i) {
        const std::size_t mn = std::min<std::size_t>(i, 2);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k) {
                    c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k) {
                c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    return c;
}

inline double apply_weights(const std::vector<std::array<double, 3>>& w, std::span<const double> values,
    std::size_t first, std::size_t order)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i][order] * values[first + i];
    }
    return acc;
}

inline void require_resolution(const RadialGrid& grid)
{
    if (grid.intervals() < RadialGrid::min_intervals) {
        throw config_error("grid too coarse for differentiation");
    }
}

} // namespace detail

/// ∂_r u by second-order differences (one-sided at both ends of the grid).
inline RadialFunction radial_derivative(const RadialFunction& u)
{
    const RadialGrid& g = u.grid();
    detail::require_resolution(g);
    const auto r = g.nodes();
    const auto v = u.values();
    const std::size_t last = g.size() - 1;
    std::vector<double> out(g.size());
    {
        const auto w = detail::fd_weights(r[0], r.subspan(0, 3));
        out[0] = detail::apply_weights(w, v, 0, 1);
    }
    for (std::size_t i = 1; i < last; ++i) {
        const double h1 = r[i] - r[i - 1];
        const double h2 = r[i + 1] - r[i];
        out[i] = -h2 / (h1 * (h1 + h2)) * v[i - 1] + (h2 - h1) / (h1 * h2) * v[i]
            + h1 / (h2 * (h1 + h2)) * v[i + 1];
    }
    {
        const auto w = detail::fd_weights(r[last], r.subspan(last - 2, 3));
        out[last] = detail::apply_weights(w, v, last - 2, 1);
    }
    return RadialFunction(g, std::move(out));
}

/// Radial Laplace–Beltrami operator (1/A)(A u')' = u'' + (A'/A) u'.
/// At the pole the symmetric closure u_{−1} = u_1 gives Δu(0) = n u''(0).
inline RadialFunction laplacian(const ModelManifold& M, const RadialFunction& u)
{
    const RadialGrid& g = u.grid();
    detail::require_resolution(g);
    const auto r = g.nodes();
    const auto v = u.values();
    const std::size_t last = g.size() - 1;
    const int n = M.dimension();
    std::vector<double> out(g.size());

    const double h0 = r[1] - r[0];
    out[0] = n * 2.0 * (v[1] - v[0]) / (h0 * h0);

    for (std::size_t i = 1; i < last; ++i) {
        const double h1 = r[i] - r[i - 1];
        const double h2 = r[i + 1] - r[i];
        const double d1 = -h2 / (h1 * (h1 + h2)) * v[i - 1] + (h2 - h1) / (h1 * h2) * v[i]
            + h1 / (h2 * (h1 + h2)) * v[i + 1];
        const double d2 = 2.0 / (h1 * (h1 + h2)) * v[i - 1] - 2.0 / (h1 * h2) * v[i]
            + 2.0 / (h2 * (h1 + h2)) * v[i + 1];
        out[i] = d2 + M.log_density_derivative(r[i]) * d1;
    }

    const auto w2 = detail::fd_weights(r[last], r.subspan(last - 3, 4));
    const auto w1 = detail::fd_weights(r[last], r.subspan(last - 2, 3));
    out[last] = detail::apply_weights(w2, v, last - 3, 2)
        + M.log_density_derivative(r[last]) * detail::apply_weights(w1, v, last - 2, 1);
    return RadialFunction(g, std::move(out));
}

/// Δ^k u (k-fold composition of the discrete Laplacian).
inline RadialFunction laplacian_power(const ModelManifold& M, const RadialFunction& u, int k)
{
    detail::require(k >= 0, "laplacian_power: k must be non-negative");
    RadialFunction out = u;
    for (int j = 0; j < k; ++j) {
        out = laplacian(M, out);
    }
    return out;
}

/// |D^m u|: |Δ^k u| for m = 2k and |∂_r Δ^k u| for m = 2k + 1 (|∇ρ| = 1).
inline RadialFunction iterated_magnitude(const ModelManifold& M, const RadialFunction& u, int m)
{
    detail::require(m >= 1, "iterated_magnitude: m must be >= 1");
    RadialFunction out = laplacian_power(M, u, m / 2);
    if (m % 2 == 1) {
        out = radial_derivative(out);
    }
    std::vector<double> mag(out.values().begin(), out.values().end());
    for (double& x : mag) {
        x = std::abs(x);
    }
    return RadialFunction(u.grid(), std::move(mag));
}

/// ∫_0^R |u|^p h(r) A(r) dr, integrating the piecewise-linear interpolant of u
/// cell by cell with a 7-point Gauss rule. Gauss nodes are interior, so h is
/// never evaluated at r = 0.
inline double weighted_integral(const ModelManifold& M, const RadialFunction& u, double p, const Weight& w)
{
    detail::require(p > 0.0, "weighted_integral: exponent must be positive");
    if (w.singular_order >= M.dimension()) {
        throw domain_error("weighted_integral: weight singularity r^-" + std::to_string(w.singular_order)
            + " is not integrable in dimension " + std::to_string(M.dimension()));
    }
    const RadialGrid& g = u.grid();
    const auto v = u.values();
    double total = 0.0;
    for (std::size_t c = 0; c + 1 < g.size(); ++c) {
        const double r0 = g[c];
        const double r1 = g[c + 1];
        const double u0 = v[c];
        const double u1 = v[c + 1];
        if (u0 == 0.0 && u1 == 0.0) {
            continue;
        }
        const double inv = 1.0 / (r1 - r0);
        total += quad::gauss_legendre<7>(
            [&](double r) {
                const double t = (r - r0) * inv;
                const double val = std::abs((1.0 - t) * u0 + t * u1);
                return detail::real_pow(val, p) * w.h(r) * M.area_density(r);
            },
            r0, r1);
    }
    return total;
}

/// (∫ |u|^q dv)^{1/q}.
inline double lp_norm(const ModelManifold& M, const RadialFunction& u, double q)
{
    detail::require(q > 0.0, "lp_norm: q must be positive");
    return std::pow(weighted_integral(M, u, q, unit_weight()), 1.0 / q);
}

/// ∫ |∇u|^p dv for the piecewise-linear interpolant of u: on each cell the
/// slope is constant and the cell's volume is vol(B(r_{i+1})) − vol(B(r_i)).
inline double gradient_energy(const ModelManifold& M, const RadialFunction& u, double p)
{
    detail::require(p > 0.0, "gradient_energy: exponent must be positive");
    const RadialGrid& g = u.grid();
    const auto v = u.values();
    double total = 0.0;
    double vol_prev = M.ball_volume(g[0]);
    for (std::size_t c = 0; c + 1 < g.size(); ++c) {
        const double vol_next = M.ball_volume(g[c + 1]);
        const double slope = (v[c + 1] - v[c]) / (g[c + 1] - g[c]);
        if (slope != 0.0) {
            total += detail::real_pow(std::abs(slope), p) * (vol_next - vol_prev);
        }
        vol_prev = vol_next;
    }
    return total;
}

} // namespace symlab
