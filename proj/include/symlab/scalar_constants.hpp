#pragma once

// Special functions and the explicit constants of the higher-order Sobolev
// and Rellich inequalities (Euclidean sharp constants, isoperimetric
// constants of model geometries, bubble asymptotics).

#include "symlab/errors.hpp"
#include "symlab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace symlab {

/// Euler's Γ on the positive reals.
inline double gamma(double x)
{
    if (!std::isfinite(x) || x <= 0.0) {
        throw domain_error("gamma: argument must be positive and finite, got " + std::to_string(x));
    }
    return std::tgamma(x);
}

/// ω_n = π^{n/2} / Γ(n/2 + 1), the volume of the Euclidean unit ball.
inline double unit_ball_volume(int n)
{
    detail::require(n >= 1, "unit_ball_volume: n must be >= 1");
    const double half = 0.5 * n;
    return std::pow(std::numbers::pi, half) / gamma(half + 1.0);
}

namespace detail {

// Π f_i^exponent over positive factors. Long products go through logarithms so
// that large dimensions do not overflow the intermediate result.
inline double product_of_powers(const std::vector<double>& factors, double exponent)
{
    for (double f : factors) {
        require(f > 0.0, "product_of_powers: factors must be positive");
    }
    if (factors.size() > 8) {
        double log_sum = 0.0;
        for (double f : factors) {
            log_sum += exponent * std::log(f);
        }
        return std::exp(log_sum);
    }
    double prod = 1.0;
    for (double f : factors) {
        prod *= std::pow(f, exponent);
    }
    return prod;
}

} // namespace detail

/// Critical Sobolev exponent p* = np/(n − mp).
inline double critical_exponent(int n, int m, double p)
{
    detail::require(n > m * p, "critical_exponent: requires n > m*p");
    return n * p / (n - m * p);
}

/// Sharp Euclidean constant S_{m,2} in ∫|D^m u|² ≥ S_{m,2} (∫|u|^{2*})^{2/2*}:
///
///     S_{m,2} = π^m n (n − 2m) Π_{s=1}^{m−1} (n² − 4s²) · (Γ(n/2)/Γ(n))^{2m/n}.
///
/// The reciprocal of this value is the best constant of the reversed
/// embedding ‖u‖²_{2*} ≤ K ‖(−Δ)^{m/2} u‖².
inline double sobolev_constant_s2(int n, int m)
{
    detail::require(m >= 1, "sobolev_constant_s2: m must be >= 1");
    detail::require(n > 2 * m, "sobolev_constant_s2: requires n > 2m");
    std::vector<double> factors;
    for (int s = 1; s <= m - 1; ++s) {
        factors.push_back(static_cast<double>(n) * n - 4.0 * s * s);
    }
    const double poly = std::pow(std::numbers::pi, m) * n * (n - 2.0 * m)
        * detail::product_of_powers(factors, 1.0);
    const double gamma_ratio = std::exp(std::lgamma(0.5 * n) - std::lgamma(static_cast<double>(n)));
    return poly * std::pow(gamma_ratio, 2.0 * m / n);
}

/// Sharp Euclidean Rellich constant R_{m,p} for ∫|D^m u|^p ≥ R_{m,p} ∫|u|^p / |x|^{mp}.
inline double rellich_constant(int n, int m, double p)
{
    detail::require(m >= 1, "rellich_constant: m must be >= 1");
    detail::require(p > 1.0, "rellich_constant: p must be > 1");
    detail::require(n > m * p, "rellich_constant: requires n > m*p");
    const int k = m / 2;
    const double np = n / p;
    const double nq = n * (p - 1.0) / p;
    std::vector<double> factors;
    if (m % 2 == 0) {
        for (int s = 1; s <= k; ++s) {
            factors.push_back(np - 2.0 * s);
            factors.push_back(nq + 2.0 * s - 2.0);
        }
        return detail::product_of_powers(factors, p);
    }
    factors.push_back((n - p) / p);
    for (int s = 1; s <= k; ++s) {
        factors.push_back(np - 2.0 * s - 1.0);
        factors.push_back(nq + 2.0 * s - 1.0);
    }
    return detail::product_of_powers(factors, p);
}

/// Croke's isoperimetric constant for Cartan–Hadamard manifolds (n ≥ 3).
inline double croke_constant(int n)
{
    detail::require(n >= 3, "croke_constant: requires n >= 3");
    const double cos_exp = static_cast<double>(n) / (n - 2);
    const double sin_exp = n - 2.0;
    const double inner = quad::adaptive(
        [&](double t) { return std::pow(std::cos(t), cos_exp) * std::pow(std::sin(t), sin_exp); },
        0.0, 0.5 * std::numbers::pi, 1e-13);
    const double wn = unit_ball_volume(n);
    const double wn1 = unit_ball_volume(n - 1);
    return std::pow(n, -1.0 / n) * std::pow(wn, 1.0 - 2.0 / n)
        * std::pow((n - 1.0) * wn1 * inner, 2.0 / n - 1.0);
}

/// Isoperimetric constant under a bounded elliptic Kato constant k_inf and
/// volume growth lower bound beta.
inline double kato_constant(int n, double beta, double k_inf)
{
    detail::require(n >= 3, "kato_constant: requires n >= 3");
    detail::require(beta > 0.0, "kato_constant: beta must be positive");
    detail::require(k_inf >= 0.0, "kato_constant: k_inf must be non-negative");
    detail::require(k_inf < 1.0 / (n - 2), "kato_constant: requires k_inf < 1/(n-2)");
    const double base = 1.0 - (n - 2.0) * k_inf;
    return std::pow(base, 4.0 * (n - 1) / (static_cast<double>(n) * (n - 2)))
        * std::pow(beta, 1.0 / n) * std::pow(unit_ball_volume(n), -1.0 / n);
}

/// Leading coefficient L_m = 4^{−m} Π_{j=1}^{m} (n + 2m − 4j)² of the
/// Gazzola–Grunau–Mitidieri higher-order Hardy inequality.
inline double gazzola_Lm(int n, int m)
{
    detail::require(m >= 1, "gazzola_Lm: m must be >= 1");
    detail::require(n > 2 * m, "gazzola_Lm: requires n > 2m");
    std::vector<double> factors;
    for (int j = 1; j <= m; ++j) {
        factors.push_back(0.5 * (n + 2.0 * m - 4.0 * j));
    }
    return detail::product_of_powers(factors, 2.0);
}

/// lim_{λ→∞} λ^{s−n/2} ∫_M (λ + ρ²)^{−s} dv = ω_n · AVR · Γ(n/2+1) Γ(s−n/2) / Γ(s).
inline double bubble_limit_constant(int n, double s, double avr)
{
    detail::require(n >= 1, "bubble_limit_constant: n must be >= 1");
    detail::require(s > 0.5 * n, "bubble_limit_constant: requires s > n/2");
    detail::require(avr > 0.0 && avr <= 1.0, "bubble_limit_constant: avr must lie in (0, 1]");
    const double log_ratio = std::lgamma(0.5 * n + 1.0) + std::lgamma(s - 0.5 * n) - std::lgamma(s);
    return unit_ball_volume(n) * avr * std::exp(log_ratio);
}

struct InequalityConstants
{
    int n = 0;
    int m = 0;
    double p = 0.0;
    double pstar = 0.0;
    std::optional<double> sobolev_s2;
    double rellich = 0.0;
};

inline InequalityConstants inequality_constants(int n, int m, double p)
{
    InequalityConstants c;
    c.n = n;
    c.m = m;
    c.p = p;
    c.pstar = critical_exponent(n, m, p);
    c.rellich = rellich_constant(n, m, p);
    if (p == 2.0) {
        c.sobolev_s2 = sobolev_constant_s2(n, m);
    }
    return c;
}

} // namespace symlab
