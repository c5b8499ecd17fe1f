#pragma once

// Schwarz symmetrization of radial profiles on a model manifold onto the
// centred Euclidean ball of equal volume, together with numerical checks of
// the Cavalieri principle and the Pólya–Szegő and Hardy–Littlewood
// inequalities.
//
// A profile u is identified with the piecewise-linear interpolant of its
// nodal values. Its distribution function μ(t) = vol{|u| > t} is evaluated
// exactly: on each grid cell the super-level set is an interval whose
// endpoint moves linearly with t, and its volume is a difference of geodesic
// ball volumes.

#include "symlab/errors.hpp"
#include "symlab/model_geometry.hpp"
#include "symlab/radial_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace symlab {

class DistributionFunction
{
public:
    DistributionFunction(const ModelManifold& M, const RadialFunction& u)
        : model_(M)
        , nodes_(u.grid().nodes().begin(), u.grid().nodes().end())
    {
        abs_.reserve(u.size());
        volumes_.reserve(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            abs_.push_back(std::abs(u[i]));
            volumes_.push_back(M.ball_volume(nodes_[i]));
        }
        levels_ = abs_;
        std::sort(levels_.begin(), levels_.end(), std::greater<>());
        levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
        measures_.reserve(levels_.size());
        for (double t : levels_) {
            measures_.push_back((*this)(t));
        }
    }

    /// μ(t) = vol{|u| > t}.
    double operator()(double t) const
    {
        double mu = 0.0;
        for (std::size_t c = 0; c + 1 < nodes_.size(); ++c) {
            const double a = abs_[c];
            const double b = abs_[c + 1];
            if (std::min(a, b) > t) {
                mu += volumes_[c + 1] - volumes_[c];
            } else if (std::max(a, b) > t) {
                const double rx = nodes_[c] + (t - a) / (b - a) * (nodes_[c + 1] - nodes_[c]);
                mu += a > b ? model_.ball_volume(rx) - volumes_[c] : volumes_[c + 1] - model_.ball_volume(rx);
            }
        }
        return mu;
    }

    /// Distinct nodal levels of |u| in decreasing order.
    const std::vector<double>& levels() const { return levels_; }
    /// μ evaluated at each entry of levels().
    const std::vector<double>& measures() const { return measures_; }
    double domain_volume() const { return volumes_.back(); }
    double max_level() const { return levels_.front(); }
    double min_level() const { return levels_.back(); }

private:
    ModelManifold model_;
    std::vector<double> nodes_;
    std::vector<double> abs_;
    std::vector<double> volumes_;
    std::vector<double> levels_;
    std::vector<double> measures_;
};

inline DistributionFunction distribution_function(const ModelManifold& M, const RadialFunction& u)
{
    return DistributionFunction(M, u);
}

struct SymmetrizedPair
{
    double star_radius = 0.0;
    RadialFunction u_star;
};

namespace detail {

// Inverts μ on a sequence of increasing target volumes by sweeping the level
// bands (L_{b+1}, L_b) between consecutive nodal levels from the top down.
// Inside a band the set of cells cut by the level is fixed, so μ is a smooth
// decreasing function there and a safeguarded Newton iteration applies.
class LevelSweep
{
public:
    LevelSweep(const ModelManifold& M, const RadialFunction& u)
        : model_(M)
        , nodes_(u.grid().nodes().begin(), u.grid().nodes().end())
    {
        const std::size_t count = u.size();
        abs_.resize(count);
        volumes_.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            abs_[i] = std::abs(u[i]);
            volumes_[i] = M.ball_volume(nodes_[i]);
        }
        levels_ = abs_;
        std::sort(levels_.begin(), levels_.end(), std::greater<>());
        levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
        if (levels_.back() > 0.0) {
            levels_.push_back(0.0);
        }
        const std::size_t bands = levels_.size() - 1;
        enter_.resize(bands);
        fill_.resize(bands);
        position_.assign(count - 1, npos);
        for (std::size_t c = 0; c + 1 < count; ++c) {
            const std::size_t hi = level_index(std::max(abs_[c], abs_[c + 1]));
            const std::size_t lo = level_index(std::min(abs_[c], abs_[c + 1]));
            if (hi < lo && hi < bands) {
                enter_[hi].push_back(c);
            }
            if (lo < bands) {
                fill_[lo].push_back(c);
            }
        }
    }

    double max_level() const { return levels_.front(); }
    double domain_volume() const { return volumes_.back(); }

    /// u*(target) = inf{t ≥ 0 : μ(t) ≤ target}; targets must be non-decreasing across calls.
    double invert(double target)
    {
        const std::size_t bands = levels_.size() - 1;
        if (!started_) {
            if (bands > 0) {
                load_band(0);
            }
            started_ = true;
        }
        while (band_ < bands && lower_value_ <= target) {
            ++band_;
            if (band_ < bands) {
                load_band(band_);
            }
        }
        if (band_ >= bands) {
            return levels_.back();
        }
        double hi = levels_[band_];
        double lo = levels_[band_ + 1];
        if (upper_value_ > target) {
            return hi; // plateau at level L_b: μ jumps across the target
        }
        double t = lower_value_ > upper_value_
            ? lo + (hi - lo) * (lower_value_ - target) / (lower_value_ - upper_value_)
            : 0.5 * (lo + hi);
        if (!(t > lo && t < hi)) {
            t = 0.5 * (lo + hi);
        }
        for (int iter = 0; iter < 200; ++iter) {
            double slope = 0.0;
            const double g = mu(t, &slope) - target;
            if (g > 0.0) {
                lo = t;
            } else {
                hi = t;
            }
            if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi
                || std::abs(g) <= 1e-15 * std::max(target, 1e-300)) {
                break;
            }
            double next = slope < 0.0 ? t - g / slope : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) {
                next = 0.5 * (lo + hi);
            }
            t = next;
        }
        return t;
    }

private:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    std::size_t level_index(double value) const
    {
        const auto it = std::lower_bound(levels_.begin(), levels_.end(), value, std::greater<>());
        return static_cast<std::size_t>(it - levels_.begin());
    }

    void load_band(std::size_t b)
    {
        for (std::size_t c : enter_[b]) {
            position_[c] = crossing_.size();
            crossing_.push_back(c);
        }
        for (std::size_t c : fill_[b]) {
            if (position_[c] != npos) {
                const std::size_t pos = position_[c];
                const std::size_t moved = crossing_.back();
                crossing_[pos] = moved;
                position_[moved] = pos;
                crossing_.pop_back();
                position_[c] = npos;
            }
            full_volume_ += volumes_[c + 1] - volumes_[c];
        }
        upper_value_ = mu(levels_[b]);
        lower_value_ = mu(levels_[b + 1]);
    }

    // μ restricted to the current band (continuous extension to its closure).
    double mu(double t, double* derivative = nullptr) const
    {
        double total = full_volume_;
        double d = 0.0;
        for (std::size_t c : crossing_) {
            const double a = abs_[c];
            const double b = abs_[c + 1];
            const double dr = nodes_[c + 1] - nodes_[c];
            const double rx = nodes_[c] + (t - a) / (b - a) * dr;
            if (a > b) {
                total += model_.ball_volume(rx) - volumes_[c];
            } else {
                total += volumes_[c + 1] - model_.ball_volume(rx);
            }
            if (derivative) {
                d -= model_.area_density(rx) * dr / std::abs(b - a);
            }
        }
        if (derivative) {
            *derivative = d;
        }
        return total;
    }

    ModelManifold model_;
    std::vector<double> nodes_;
    std::vector<double> abs_;
    std::vector<double> volumes_;
    std::vector<double> levels_;
    std::vector<std::vector<std::size_t>> enter_;
    std::vector<std::vector<std::size_t>> fill_;
    std::vector<std::size_t> position_;
    std::vector<std::size_t> crossing_;
    double full_volume_ = 0.0;
    double upper_value_ = 0.0;
    double lower_value_ = 0.0;
    std::size_t band_ = 0;
    bool started_ = false;
};

} // namespace detail

/// Schwarz symmetrization u ↦ u* onto the Euclidean ball Ω* with vol(Ω*) = vol(Ω),
/// sampled on a uniform grid of the same number of intervals over [0, R*].
inline SymmetrizedPair schwarz_rearrange(const ModelManifold& M, const RadialFunction& u)
{
    const int n = M.dimension();
    const int intervals = u.grid().intervals();
    detail::LevelSweep sweep(M, u);
    const double omega = unit_ball_volume(n);
    const double star_radius = std::pow(sweep.domain_volume() / omega, 1.0 / n);
    RadialGrid star = RadialGrid::uniform(star_radius, intervals);

    double min_abs = std::abs(u[0]);
    for (double v : u.values()) {
        min_abs = std::min(min_abs, std::abs(v));
    }

    std::vector<double> values(star.size());
    values.front() = sweep.max_level();
    for (std::size_t j = 1; j + 1 < star.size(); ++j) {
        values[j] = sweep.invert(omega * std::pow(star[j], n));
    }
    // Left limit at the boundary sphere: the essential infimum of |u|.
    values.back() = min_abs;
    for (std::size_t j = 1; j < values.size(); ++j) {
        values[j] = std::min(values[j], values[j - 1]);
    }
    return {star_radius, RadialFunction(std::move(star), std::move(values))};
}

struct RearrangementReport
{
    double q = 0.0;
    double p = 0.0;
    double cavalieri_err = 0.0;
    double ps_lhs = 0.0;  // ‖∇u‖_p on the model
    double ps_rhs = 0.0;  // c_g ‖∇u*‖_p on Euclidean space
    double ps_margin = 0.0;
    double hl_lhs = 0.0;  // ∫ |u|^p h(ρ) dv_g
    double hl_rhs = 0.0;  // ∫ (u*)^p h(|x|) dx
    double hl_margin = 0.0;
    bool cavalieri_ok = false;
    bool polya_szego_ok = false;
    bool hardy_littlewood_ok = false;

    bool all_ok() const { return cavalieri_ok && polya_szego_ok && hardy_littlewood_ok; }
};

/// Margins, all relative: Cavalieri |‖u‖_q − ‖u*‖_q| / ‖u‖_q; Pólya–Szegő
/// (‖∇u‖_p − c‖∇u*‖_p) / ‖∇u‖_p; Hardy–Littlewood (RHS − LHS) / RHS.
/// One report per entry of qs; the gradient and weighted terms do not depend on q.
inline std::vector<RearrangementReport> rearrangement_checks(const ModelManifold& M, const RadialFunction& u,
    const SymmetrizedPair& pair, const std::vector<double>& qs, double p, const Weight& h, double tol = 1e-6)
{
    for (double q : qs) {
        detail::require(q > 0.0, "rearrangement_checks: q must be positive");
    }
    detail::require(p > 1.0, "rearrangement_checks: p must be > 1");
    const ModelManifold flat = euclidean_model(M.dimension());

    RearrangementReport common;
    common.p = p;
    common.ps_lhs = std::pow(gradient_energy(M, u, p), 1.0 / p);
    common.ps_rhs = M.c_iso() * std::pow(gradient_energy(flat, pair.u_star, p), 1.0 / p);
    common.ps_margin = common.ps_lhs > 0.0 ? (common.ps_lhs - common.ps_rhs) / common.ps_lhs : -common.ps_rhs;
    common.hl_lhs = weighted_integral(M, u, p, h);
    common.hl_rhs = weighted_integral(flat, pair.u_star, p, h);
    common.hl_margin = common.hl_rhs > 0.0 ? (common.hl_rhs - common.hl_lhs) / common.hl_rhs : -common.hl_lhs;
    common.polya_szego_ok = common.ps_margin >= -tol;
    common.hardy_littlewood_ok = common.hl_margin >= -tol;

    std::vector<RearrangementReport> reports;
    reports.reserve(qs.size());
    for (double q : qs) {
        RearrangementReport rep = common;
        rep.q = q;
        const double norm_u = lp_norm(M, u, q);
        const double norm_star = lp_norm(flat, pair.u_star, q);
        rep.cavalieri_err = norm_u > 0.0 ? std::abs(norm_u - norm_star) / norm_u : std::abs(norm_star);
        rep.cavalieri_ok = rep.cavalieri_err <= tol;
        reports.push_back(rep);
    }
    return reports;
}

inline RearrangementReport rearrangement_checks(const ModelManifold& M, const RadialFunction& u,
    const SymmetrizedPair& pair, double q, double p, const Weight& h, double tol = 1e-6)
{
    return rearrangement_checks(M, u, pair, std::vector<double>{q}, p, h, tol).front();
}

inline RearrangementReport rearrangement_checks(
    const ModelManifold& M, const RadialFunction& u, double q, double p, const Weight& h, double tol = 1e-6)
{
    return rearrangement_checks(M, u, schwarz_rearrange(M, u), q, p, h, tol);
}

} // namespace symlab
