#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <utility>

namespace symlab::quad {

/// Adaptive Gauss–Kronrod (15/31) on a finite interval.
/// The tolerance is relative to the L1 norm of the integrand, which is an
/// absolute tolerance for integrands of order one.
template <class F>
double adaptive(F&& f, double a, double b, double tol = 1e-12, unsigned max_depth = 25)
{
    if (a == b) {
        return 0.0;
    }
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        std::forward<F>(f), a, b, max_depth, tol, &error);
}

/// Fixed Gauss–Legendre rule with `Points` nodes on [a, b]; never evaluates the endpoints.
template <unsigned Points, class F>
double gauss_legendre(F&& f, double a, double b)
{
    if (a == b) {
        return 0.0;
    }
    return boost::math::quadrature::gauss<double, Points>::integrate(std::forward<F>(f), a, b);
}

} // namespace symlab::quad
