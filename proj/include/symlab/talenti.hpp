#pragma once

// Iterated Talenti comparison: for (−Δ_g)^k u = f on a geodesic ball with
// Navier conditions and (−Δ)^k v = f* on the Euclidean ball of equal volume,
// c_g^{2k} u* ≤ v pointwise.

#include "symlab/errors.hpp"
#include "symlab/model_geometry.hpp"
#include "symlab/radial_calculus.hpp"
#include "symlab/radial_poisson.hpp"
#include "symlab/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace symlab {

struct ComparisonReport
{
    int k = 1;
    int grid_N = 0;
    double tol = 0.0;
    double scale = 1.0;        // c_g^{2k}
    double min_margin = 0.0;   // min over nodes of v − c^{2k} u*
    double max_ratio = 0.0;    // max of c^{2k} u* / v where v > 0
    bool pass = false;
    RadialFunction u_star;
    RadialFunction v;
};

inline double default_talenti_tolerance(int intervals) { return 1e-6 + 10.0 / intervals; }

inline void require_nonincreasing_source(const RadialFunction& f)
{
    const auto v = f.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 0.0) {
            throw domain_error("talenti_compare: source must be non-negative");
        }
        if (i > 0 && v[i] > v[i - 1]) {
            throw domain_error("talenti_compare: source must be radially non-increasing");
        }
    }
}

inline ComparisonReport talenti_compare(
    const ModelManifold& M, const RadialFunction& f, int k, std::optional<double> tol = std::nullopt)
{
    detail::require(k >= 1, "talenti_compare: k must be >= 1");
    require_nonincreasing_source(f);
    const int intervals = f.grid().intervals();

    const SolveReport u = solve_navier(M, f, k);
    SymmetrizedPair u_sym = schwarz_rearrange(M, u.solution);
    SymmetrizedPair f_sym = schwarz_rearrange(M, f);
    SolveReport v = solve_navier(euclidean_model(M.dimension()), f_sym.u_star, k);

    ComparisonReport rep{.k = k,
        .grid_N = intervals,
        .tol = tol.value_or(default_talenti_tolerance(intervals)),
        .scale = std::pow(M.c_iso(), 2.0 * k),
        .u_star = std::move(u_sym.u_star),
        .v = std::move(v.solution)};

    const RadialGrid& star = rep.u_star.grid();
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < star.size(); ++j) {
        const double lhs = rep.scale * rep.u_star[j];
        const double rhs = rep.v(star[j]);
        rep.min_margin = std::min(rep.min_margin, rhs - lhs);
        if (rhs > 0.0) {
            rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
        }
    }
    rep.pass = rep.min_margin >= -rep.tol;
    return rep;
}

/// max over nodes with b > 0 of |a / (scale · b) − 1|, with a interpolated onto b's grid.
inline double max_relative_deviation(const RadialFunction& a, const RadialFunction& b, double scale = 1.0)
{
    double worst = 0.0;
    const RadialGrid& g = b.grid();
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (b[j] > 0.0) {
            worst = std::max(worst, std::abs(a(g[j]) / (scale * b[j]) - 1.0));
        }
    }
    return worst;
}

} // namespace symlab
