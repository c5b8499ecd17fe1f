#pragma once

// Radial Poisson and polyharmonic Navier problems on geodesic balls of a
// model manifold, solved through the radial Green representation
//
//     u(r) = ∫_r^R (1/A(s)) ∫_0^s f(t) A(t) dt ds,
//
// which satisfies −Δu = f, u'(0) = 0 and u(R) = 0.

#include "symlab/errors.hpp"
#include "symlab/model_geometry.hpp"
#include "symlab/quadrature.hpp"
#include "symlab/radial_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace symlab {

struct NavierProblem
{
    ModelManifold model;
    RadialFunction f;
    int k = 1;

    double radius() const { return f.grid().radius(); }
};

struct SolveReport
{
    RadialFunction solution;
    double residual_inf = 0.0;
    // Observed order of the discrete solution under grid halving, NaN when the
    // grid cannot be coarsened twice.
    double refinement_order = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// Inner integrals F(r) = ∫_0^r f A by a 7-point Gauss rule on each half cell
// applied to the piecewise-linear f; w = F/A; the outer integral of w is a
// backward Simpson sweep using the cell midpoints.
inline std::vector<double> green_solve(const ModelManifold& M, const RadialGrid& g, std::span<const double> f)
{
    const std::size_t size = g.size();
    std::vector<double> w(size, 0.0);
    std::vector<double> w_mid(size - 1, 0.0);
    double F = 0.0;
    for (std::size_t c = 0; c + 1 < size; ++c) {
        const double r0 = g[c];
        const double r1 = g[c + 1];
        const double mid = 0.5 * (r0 + r1);
        const double f0 = f[c];
        const double f1 = f[c + 1];
        const double inv = 1.0 / (r1 - r0);
        const auto integrand = [&](double r) {
            const double t = (r - r0) * inv;
            return ((1.0 - t) * f0 + t * f1) * M.area_density(r);
        };
        F += quad::gauss_legendre<7>(integrand, r0, mid);
        w_mid[c] = F / M.area_density(mid);
        F += quad::gauss_legendre<7>(integrand, mid, r1);
        const double area = M.area_density(r1);
        if (!(area > 0.0)) {
            throw numeric_error("green_solve: vanishing sphere area at an interior radius");
        }
        w[c + 1] = F / area;
    }
    std::vector<double> u(size, 0.0);
    for (std::size_t c = size - 1; c-- > 0;) {
        u[c] = u[c + 1] + (g[c + 1] - g[c]) / 6.0 * (w[c] + 4.0 * w_mid[c] + w[c + 1]);
    }
    return u;
}

inline std::vector<double> navier_solve(const ModelManifold& M, const RadialGrid& g, std::span<const double> f, int k)
{
    std::vector<double> current(f.begin(), f.end());
    for (int j = 0; j < k; ++j) {
        current = green_solve(M, g, current);
    }
    return current;
}

inline RadialGrid every_other_node(const RadialGrid& g)
{
    std::vector<double> nodes;
    nodes.reserve(g.size() / 2 + 1);
    for (std::size_t i = 0; i < g.size(); i += 2) {
        nodes.push_back(g[i]);
    }
    return RadialGrid(std::move(nodes), g.spacing());
}

inline std::vector<double> every_other_value(std::span<const double> v)
{
    std::vector<double> out;
    out.reserve(v.size() / 2 + 1);
    for (std::size_t i = 0; i < v.size(); i += 2) {
        out.push_back(v[i]);
    }
    return out;
}

// log2(‖u_{4h} − u_{2h}‖∞ / ‖u_{2h} − u_h‖∞) on the nodes shared by all three grids.
inline double observed_order(const ModelManifold& M, const RadialGrid& g, std::span<const double> f, int k,
    std::span<const double> fine)
{
    if (g.intervals() % 4 != 0 || g.intervals() / 4 < RadialGrid::min_intervals) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const RadialGrid g2 = every_other_node(g);
    const RadialGrid g4 = every_other_node(g2);
    const std::vector<double> f2 = every_other_value(f);
    const std::vector<double> f4 = every_other_value(f2);
    const std::vector<double> u2 = navier_solve(M, g2, f2, k);
    const std::vector<double> u4 = navier_solve(M, g4, f4, k);
    double d_coarse = 0.0;
    double d_fine = 0.0;
    for (std::size_t i = 0; i < g4.size(); ++i) {
        d_coarse = std::max(d_coarse, std::abs(u4[i] - u2[2 * i]));
        d_fine = std::max(d_fine, std::abs(u2[2 * i] - fine[4 * i]));
    }
    if (d_fine == 0.0 || d_coarse == 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::log2(d_coarse / d_fine);
}

inline SolveReport finish_report(const ModelManifold& M, const RadialFunction& f, int k, std::vector<double> u)
{
    const RadialGrid& g = f.grid();
    const auto fv = f.values();
    const bool nonnegative = std::all_of(fv.begin(), fv.end(), [](double x) { return x >= 0.0; });
    if (nonnegative && std::any_of(u.begin(), u.end(), [](double x) { return x < 0.0; })) {
        throw numeric_error("solve: maximum principle violated for a non-negative source");
    }
    const double order = observed_order(M, g, fv, k, u);

    RadialFunction solution(g, std::move(u));
    // Residual of the last second-order solve: −Δu_k = u_{k−1}.
    std::vector<double> previous = k == 1 ? std::vector<double>(fv.begin(), fv.end()) : navier_solve(M, g, fv, k - 1);
    const RadialFunction lap = laplacian(M, solution);
    double residual = 0.0;
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        residual = std::max(residual, std::abs(lap[i] + previous[i]));
    }
    return {std::move(solution), residual, order};
}

} // namespace detail

/// −Δu = f on the geodesic ball of radius R = f.grid().radius(), u(R) = 0.
inline SolveReport solve_poisson(const ModelManifold& M, const RadialFunction& f)
{
    return detail::finish_report(M, f, 1, detail::green_solve(M, f.grid(), f.values()));
}

/// (−Δ)^k u = f with u = Δu = ⋯ = Δ^{k−1}u = 0 on the boundary sphere, by k
/// successive second-order solves.
inline SolveReport solve_navier(const ModelManifold& M, const RadialFunction& f, int k)
{
    detail::require(k >= 1, "solve_navier: k must be >= 1");
    return detail::finish_report(M, f, k, detail::navier_solve(M, f.grid(), f.values(), k));
}

inline SolveReport solve(const NavierProblem& problem)
{
    return solve_navier(problem.model, problem.f, problem.k);
}

} // namespace symlab
