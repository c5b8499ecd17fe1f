#pragma once

// Rotationally symmetric model spaces centred at a pole: Euclidean space,
// Euclidean cones of prescribed asymptotic volume ratio, and hyperbolic space.
// Geodesic spheres about the pole have area A(r); everything else (volumes,
// the radial Laplacian) is derived from A.

#include "symlab/errors.hpp"
#include "symlab/quadrature.hpp"
#include "symlab/scalar_constants.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace symlab {

enum class ModelKind
{
    euclidean,
    cone,
    hyperbolic
};

inline std::string to_string(ModelKind kind)
{
    switch (kind) {
    case ModelKind::euclidean: return "euclidean";
    case ModelKind::cone: return "cone";
    case ModelKind::hyperbolic: return "hyperbolic";
    }
    return "unknown";
}

struct ModelSpec
{
    ModelKind kind = ModelKind::euclidean;
    double avr = 1.0; // cone opening: fraction of the full solid angle

    static ModelSpec euclidean() { return {ModelKind::euclidean, 1.0}; }
    static ModelSpec cone(double avr) { return {ModelKind::cone, avr}; }
    static ModelSpec hyperbolic() { return {ModelKind::hyperbolic, 0.0}; }
};

namespace detail {

// Integer powers by repeated squaring.
inline double ipow(double x, int k)
{
    double result = 1.0;
    for (; k > 0; k >>= 1) {
        if (k & 1) {
            result *= x;
        }
        x *= x;
    }
    return result;
}

inline double real_pow(double x, double p)
{
    if (p >= 0.0 && p <= 16.0 && p == std::floor(p)) {
        return ipow(x, static_cast<int>(p));
    }
    return std::pow(x, p);
}

// ∫_0^r sinh^k(t) dt. Short radii use a Gauss rule (no cancellation); longer
// radii use the reduction I_k = sinh^{k-1} cosh / k − (k−1)/k · I_{k−2}.
inline double sinh_power_integral(int k, double r)
{
    if (k == 2 && r <= 1.0) {
        // (sinh 2r − 2r)/4 = Σ_{j≥1} (2r)^{2j+1} / (4 (2j+1)!), summed without cancellation.
        const double x = 2.0 * r;
        const double x2 = x * x;
        double term = x * x2 / 6.0;
        double sum = 0.0;
        for (int j = 1; j < 30 && term > 1e-17 * sum; ++j) {
            sum += term;
            term *= x2 / ((2.0 * j + 2.0) * (2.0 * j + 3.0));
        }
        return 0.25 * sum;
    }
    if (r <= 1.0) {
        return quad::gauss_legendre<15>([k](double t) { return ipow(std::sinh(t), k); }, 0.0, r);
    }
    const double sh = std::sinh(r);
    const double ch = std::cosh(r);
    double even = r;        // I_0
    double odd = ch - 1.0;  // I_1
    if (k == 0) {
        return even;
    }
    if (k == 1) {
        return odd;
    }
    double prev2 = (k % 2 == 0) ? even : odd;
    for (int j = (k % 2 == 0) ? 2 : 3; j <= k; j += 2) {
        prev2 = ipow(sh, j - 1) * ch / j - (j - 1.0) / j * prev2;
    }
    return prev2;
}

} // namespace detail

class ModelManifold
{
public:
    int dimension() const { return n_; }
    ModelKind kind() const { return kind_; }
    /// Cone opening α (1 for Euclidean space, 0 for hyperbolic space).
    double opening() const { return opening_; }
    /// Isoperimetric constant c_g.
    double c_iso() const { return c_iso_; }

    /// Area of the geodesic sphere of radius r about the pole.
    double area_density(double r) const
    {
        const double base = n_ * omega_n_;
        switch (kind_) {
        case ModelKind::euclidean:
        case ModelKind::cone: return opening_ * base * detail::ipow(r, n_ - 1);
        case ModelKind::hyperbolic: return base * detail::ipow(std::sinh(r), n_ - 1);
        }
        return 0.0;
    }

    /// A'(r)/A(r), the mean curvature of the geodesic sphere (ρΔρ/ρ).
    double log_density_derivative(double r) const
    {
        if (kind_ == ModelKind::hyperbolic) {
            return (n_ - 1) / std::tanh(r);
        }
        return (n_ - 1) / r;
    }

    double ball_volume(double r) const
    {
        detail::require(r >= 0.0, "ball_volume: radius must be non-negative");
        if (kind_ == ModelKind::hyperbolic) {
            return n_ * omega_n_ * detail::sinh_power_integral(n_ - 1, r);
        }
        return opening_ * omega_n_ * detail::ipow(r, n_);
    }

    double asymptotic_volume_ratio() const
    {
        return kind_ == ModelKind::hyperbolic ? 0.0 : opening_;
    }

    /// vol(B(r)) / (ω_n r^n), the quantity whose limit defines the AVR.
    double volume_ratio_at(double r) const
    {
        detail::require(r > 0.0, "volume_ratio_at: radius must be positive");
        if (kind_ == ModelKind::hyperbolic) {
            // Stay in log space: the hyperbolic volume overflows long before the ratio underflows.
            const double log_ratio = (n_ - 1) * r - (n_ - 1) * std::log(2.0) - std::log(n_ - 1.0)
                + std::log(static_cast<double>(n_)) - n_ * std::log(r);
            if (r > 30.0) {
                return std::exp(log_ratio);
            }
        }
        return ball_volume(r) / (omega_n_ * std::pow(r, n_));
    }

    friend ModelManifold make_model(int n, ModelSpec spec, std::optional<double> c_override);

private:
    ModelManifold() = default;

    int n_ = 0;
    ModelKind kind_ = ModelKind::euclidean;
    double opening_ = 1.0;
    double c_iso_ = 1.0;
    double omega_n_ = 0.0;
};

/// Default isoperimetric constant for a model: AVR^{1/n} on cones,
/// 1 on Euclidean space and on hyperbolic space with n ≤ 4 (Cartan–Hadamard
/// conjecture settled there), Croke's constant on hyperbolic space with n ≥ 5.
inline double default_isoperimetric_constant(int n, ModelSpec spec)
{
    switch (spec.kind) {
    case ModelKind::euclidean: return 1.0;
    case ModelKind::cone: return std::pow(spec.avr, 1.0 / n);
    case ModelKind::hyperbolic: return n >= 5 ? croke_constant(n) : 1.0;
    }
    return 1.0;
}

inline ModelManifold make_model(int n, ModelSpec spec, std::optional<double> c_override = std::nullopt)
{
    detail::require(n >= 2, "make_model: dimension must be >= 2");
    if (spec.kind == ModelKind::cone) {
        detail::require(spec.avr > 0.0 && spec.avr <= 1.0, "make_model: cone avr must lie in (0, 1]");
    }
    if (c_override) {
        detail::require(*c_override > 0.0 && *c_override <= 1.0,
            "make_model: isoperimetric constant override must lie in (0, 1]");
    }
    ModelManifold m;
    m.n_ = n;
    m.kind_ = spec.kind;
    m.omega_n_ = unit_ball_volume(n);
    switch (spec.kind) {
    case ModelKind::euclidean: m.opening_ = 1.0; break;
    case ModelKind::cone: m.opening_ = spec.avr; break;
    case ModelKind::hyperbolic: m.opening_ = 0.0; break;
    }
    m.c_iso_ = c_override.value_or(default_isoperimetric_constant(n, spec));
    return m;
}

inline ModelManifold euclidean_model(int n) { return make_model(n, ModelSpec::euclidean()); }

} // namespace symlab
