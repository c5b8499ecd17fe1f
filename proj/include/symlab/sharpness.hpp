#pragma once

// Talentian bubbles t_λ(r) = (λ + r²)^{(4−n)/2}, the integrals
// H(λ, s) = ∫_M (λ + ρ²)^{−s} dv, and the λ → ∞ behaviour of the
// second-order Sobolev quotient along the bubble family.

#include "symlab/errors.hpp"
#include "symlab/model_geometry.hpp"
#include "symlab/quadrature.hpp"
#include "symlab/radial_calculus.hpp"
#include "symlab/battery.hpp"
#include "symlab/scalar_constants.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace symlab {

struct BubbleFamily
{
    int n = 5;
    double lambda = 1.0;

    double operator()(double r) const { return std::pow(lambda + r * r, 0.5 * (4.0 - n)); }
};

/// t_λ sampled on the grid, optionally multiplied by the smooth cutoff χ(r / cutoff_radius).
inline RadialFunction bubble_profile(
    int n, double lambda, const RadialGrid& grid, std::optional<double> cutoff_radius = std::nullopt)
{
    detail::require(n > 4, "bubble_profile: requires n > 4");
    detail::require(lambda > 0.0, "bubble_profile: lambda must be positive");
    const BubbleFamily bubble{n, lambda};
    return RadialFunction::sample(grid, [&](double r) {
        const double cut = cutoff_radius ? smooth_cutoff(r / *cutoff_radius) : 1.0;
        return bubble(r) * cut;
    });
}

/// ∫_0^R (λ + r²)^{−s} A(r) dr on any model.
inline double h_integral_truncated(const ModelManifold& M, double lambda, double s, double R)
{
    detail::require(lambda > 0.0, "h_integral: lambda must be positive");
    detail::require(R > 0.0, "h_integral: radius must be positive");
    const auto f = [&](double r) { return std::pow(lambda + r * r, -s) * M.area_density(r); };
    // Dyadic pieces in units of √λ keep each adaptive rule on a scale it resolves.
    double total = 0.0;
    double lo = 0.0;
    double hi = std::min(std::sqrt(lambda), R);
    while (lo < R) {
        total += quad::adaptive(f, lo, hi, 1e-13);
        lo = hi;
        hi = std::min(2.0 * hi, R);
    }
    return total;
}

/// H(λ, s) = ∫_M (λ + ρ²)^{−s} dv on Euclidean space or a cone, integrated
/// until the analytic tail bound α n ω_n R^{n−2s} / (2s − n) is below 1e−9 of the value.
inline double h_integral(const ModelManifold& M, double lambda, double s)
{
    const int n = M.dimension();
    if (M.kind() == ModelKind::hyperbolic) {
        throw domain_error("h_integral: the integral over all of hyperbolic space diverges; use h_integral_truncated");
    }
    detail::require(s > 0.5 * n, "h_integral: requires s > n/2");
    detail::require(lambda > 0.0, "h_integral: lambda must be positive");
    const auto f = [&](double r) { return std::pow(lambda + r * r, -s) * M.area_density(r); };
    const double tail_scale = M.opening() * n * unit_ball_volume(n) / (2.0 * s - n);
    double total = 0.0;
    double lo = 0.0;
    double hi = std::sqrt(lambda);
    for (int piece = 0; piece < 2000; ++piece) {
        total += quad::adaptive(f, lo, hi, 1e-13);
        const double tail = tail_scale * std::pow(hi, n - 2.0 * s);
        if (tail <= 1e-9 * total) {
            return total;
        }
        lo = hi;
        hi *= 2.0;
    }
    throw numeric_error("h_integral: tail bound not reached");
}

struct SweepReport
{
    std::vector<double> lambdas;
    std::vector<double> quotients;  // discrete quotient of the truncated bubble
    std::vector<double> assembled;  // three-H assembly of the same quotient
    std::vector<double> cutoff_radii;
    double limit_target = 0.0;      // AVR^{4/n} S_{2,2}
    double tol = 0.02;
    bool converged = false;

    double rel_gap(std::size_t i) const { return quotients[i] / limit_target - 1.0; }
};

/// Cutoff radius R with (R / (2√λ))^{4−n} = tail: beyond r the integrands of
/// ∫(Δt_λ)² and ∫t_λ^{2n/(n−4)} carry a fraction ~ (r/√λ)^{4−n} of the total,
/// and the cutoff starts at R/2. The cutoff's own derivatives add a
/// contribution about forty times the tail, so tail = 1e−5 keeps the quotient
/// within 0.1% of the untruncated bubble.
inline double bubble_cutoff_radius(int n, double lambda, double tail = 1e-5)
{
    return 2.0 * std::sqrt(lambda) * std::pow(tail, -1.0 / (n - 4.0));
}

/// Radial grid r = √λ sinh(ξ), ξ uniform: resolves the bubble core at scale √λ
/// and stretches geometrically through its tail.
inline RadialGrid bubble_grid(double lambda, double R, int intervals)
{
    const double c = std::sqrt(lambda);
    const double top = std::asinh(R / c);
    std::vector<double> nodes(static_cast<std::size_t>(intervals) + 1);
    for (int i = 0; i <= intervals; ++i) {
        nodes[static_cast<std::size_t>(i)] = c * std::sinh(top * i / intervals);
    }
    nodes.front() = 0.0;
    nodes.back() = R;
    return RadialGrid(std::move(nodes), Spacing::custom);
}

/// Q(λ) = ∫(Δ t_λ)² dv / (∫ t_λ^{2n/(n−4)} dv)^{(n−4)/n} computed from the
/// sampled, smoothly truncated bubble, and from the closed form
/// (Δt_λ)² = (n−4)²(λ+r²)^{−n}(nλ + 2r²)² expanded into H(λ,n−2), H(λ,n−1), H(λ,n).
inline SweepReport sharpness_sweep(
    const ModelManifold& M, const std::vector<double>& lambdas, int intervals = 8192, double tol = 0.02)
{
    const int n = M.dimension();
    if (M.kind() == ModelKind::hyperbolic) {
        throw domain_error("sharpness_sweep: hyperbolic space has zero asymptotic volume ratio");
    }
    detail::require(n > 4, "sharpness_sweep: requires n > 4");
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        detail::require(lambdas[i] > lambdas[i - 1], "sharpness_sweep: lambdas must be strictly increasing");
    }
    SweepReport rep;
    rep.tol = tol;
    rep.limit_target = std::pow(M.asymptotic_volume_ratio(), 4.0 / n) * sobolev_constant_s2(n, 2);
    const double pstar = 2.0 * n / (n - 4.0);
    for (double lambda : lambdas) {
        detail::require(lambda > 0.0, "sharpness_sweep: lambdas must be positive");
        const double R = bubble_cutoff_radius(n, lambda);
        const RadialGrid grid = bubble_grid(lambda, R, intervals);
        const RadialFunction u = bubble_profile(n, lambda, grid, R);
        const double num = weighted_integral(M, laplacian(M, u), 2.0, unit_weight());
        const double den = std::pow(weighted_integral(M, u, pstar, unit_weight()), 2.0 / pstar);

        const double h2 = h_integral(M, lambda, n - 2.0);
        const double h1 = h_integral(M, lambda, n - 1.0);
        const double h0 = h_integral(M, lambda, static_cast<double>(n));
        const double assembled_num = (n - 4.0) * (n - 4.0)
            * (4.0 * h2 + 4.0 * (n - 2.0) * lambda * h1 + (n - 2.0) * (n - 2.0) * lambda * lambda * h0);

        rep.lambdas.push_back(lambda);
        rep.cutoff_radii.push_back(R);
        rep.quotients.push_back(num / den);
        rep.assembled.push_back(assembled_num / std::pow(h0, (n - 4.0) / n));
    }
    rep.converged = !rep.quotients.empty() && std::abs(rep.rel_gap(rep.quotients.size() - 1)) <= tol;
    return rep;
}

} // namespace symlab
