#pragma once

// One-dimensional Rayleigh quotients on X = {v ∈ C²([0,1]) : v'(0) = v(1) = 0}:
//
//   gradient:  inf ∫ r^a |v'|² / ∫ r^a v²           (Λ(n) for a = n − 1, γ for a = 1)
//   λ_ϑ:       inf ∫ r^{2p−1} |Δ_ϑ v|^p / ∫ r^{2p−1} |v|^p
//   Λ_ϑ:       inf ∫ r³ |v|^{p−2} (Δ_ϑ v)² / ∫ r^{2p−1} |v|^p
//
// with Δ_ϑ v = v'' + (ϑ − 1) v' / r.

#include "symlab/battery.hpp"
#include "symlab/errors.hpp"
#include "symlab/scalar_constants.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace symlab {

/// Smallest eigenvalue of −(r^a v')' = λ r^a v on [0, 1] with v'(0) = v(1) = 0.
///
/// Cell-centred finite volumes on r_i = i/N: control volumes [r_i − h/2, r_i + h/2]
/// (half a cell at the origin) with exact moments of r^a, fluxes r_{i+1/2}^a
/// (v_{i+1} − v_i)/h. Inverse iteration with a tridiagonal (Thomas) solve.
inline double gradient_eigenvalue(double a, int intervals = 2000, int max_iterations = 500)
{
    detail::require(a >= 0.0, "gradient_eigenvalue: density exponent must be >= 0");
    detail::require(intervals >= 8, "gradient_eigenvalue: at least 8 intervals required");
    const std::size_t N = static_cast<std::size_t>(intervals);
    const double h = 1.0 / intervals;
    const auto moment = [a](double lo, double hi) { return (std::pow(hi, a + 1.0) - std::pow(lo, a + 1.0)) / (a + 1.0); };

    std::vector<double> mass(N);
    std::vector<double> flux(N); // flux[i] couples v_i and v_{i+1}
    for (std::size_t i = 0; i < N; ++i) {
        const double r = i * h;
        mass[i] = moment(std::max(r - 0.5 * h, 0.0), r + 0.5 * h);
        flux[i] = std::pow(r + 0.5 * h, a) / h;
    }
    std::vector<double> diag(N);
    for (std::size_t i = 0; i < N; ++i) {
        diag[i] = flux[i] + (i > 0 ? flux[i - 1] : 0.0);
    }

    // Thomas factorisation of K (diag, off-diagonal −flux).
    std::vector<double> c_prime(N);
    std::vector<double> denom(N);
    denom[0] = diag[0];
    for (std::size_t i = 1; i < N; ++i) {
        c_prime[i - 1] = -flux[i - 1] / denom[i - 1];
        denom[i] = diag[i] + flux[i - 1] * c_prime[i - 1];
    }
    const auto solve = [&](std::vector<double> rhs) {
        rhs[0] /= denom[0];
        for (std::size_t i = 1; i < N; ++i) {
            rhs[i] = (rhs[i] + flux[i - 1] * rhs[i - 1]) / denom[i];
        }
        for (std::size_t i = N - 1; i-- > 0;) {
            rhs[i] -= c_prime[i] * rhs[i + 1];
        }
        return rhs;
    };
    const auto rayleigh = [&](const std::vector<double>& v) {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double next = i + 1 < N ? v[i + 1] : 0.0;
            num += flux[i] * (next - v[i]) * (next - v[i]);
            den += mass[i] * v[i] * v[i];
        }
        return num / den;
    };

    std::vector<double> v(N);
    for (std::size_t i = 0; i < N; ++i) {
        v[i] = 1.0 - (i * h) * (i * h);
    }
    double lambda = rayleigh(v);
    for (int it = 0; it < max_iterations; ++it) {
        std::vector<double> rhs(N);
        for (std::size_t i = 0; i < N; ++i) {
            rhs[i] = mass[i] * v[i];
        }
        v = solve(std::move(rhs));
        const double scale = *std::max_element(v.begin(), v.end());
        for (double& x : v) {
            x /= scale;
        }
        const double next = rayleigh(v);
        if (std::abs(next - lambda) <= 1e-15 * next) {
            return next;
        }
        lambda = next;
    }
    throw numeric_error("gradient_eigenvalue: inverse iteration did not converge after "
        + std::to_string(max_iterations) + " iterations (last estimate " + std::to_string(lambda) + ")");
}

/// Λ(n) = inf ∫ r^{n−1}|v'|² / ∫ r^{n−1} v², the first Dirichlet eigenvalue of the unit n-ball.
inline double Lambda(int n, int intervals = 2000) { return gradient_eigenvalue(n - 1.0, intervals); }

enum class ThetaQuotient
{
    lambda_small, // λ_ϑ
    Lambda_big    // Λ_ϑ
};

struct ThetaOptions
{
    int basis_size = 8;
    int starts = 4;
    std::uint64_t seed = 7;
    int max_iterations = 20000;
};

struct ThetaResult
{
    double value = 0.0;
    int starts_converged = 0;
    int iterations = 0;
};

namespace detail {

// Ritz space spanned by 1 − r^{2j}, j = 1..J (each lies in X), with all
// integrals evaluated by composite 30-point Gauss–Legendre on [0, 1].
class ThetaRitz
{
public:
    ThetaRitz(double theta, double p, int basis)
        : p_(p)
    {
        constexpr int pieces = 4;
        using rule = boost::math::quadrature::gauss<double, 30>;
        const auto& abscissa = rule::abscissa();
        const auto& weights = rule::weights();
        for (int piece = 0; piece < pieces; ++piece) {
            const double lo = static_cast<double>(piece) / pieces;
            const double half = 0.5 / pieces;
            const double mid = lo + half;
            for (std::size_t i = 0; i < abscissa.size(); ++i) {
                const double offsets[2] = {abscissa[i], -abscissa[i]};
                const int copies = abscissa[i] == 0.0 ? 1 : 2;
                for (int s = 0; s < copies; ++s) {
                    r_.push_back(mid + half * offsets[s]);
                    w_.push_back(half * weights[i]);
                }
            }
        }
        const std::size_t Q = r_.size();
        phi_.resize(static_cast<Eigen::Index>(Q), basis);
        lap_.resize(static_cast<Eigen::Index>(Q), basis);
        for (std::size_t q = 0; q < Q; ++q) {
            const double r = r_[q];
            for (int j = 1; j <= basis; ++j) {
                const auto row = static_cast<Eigen::Index>(q);
                phi_(row, j - 1) = 1.0 - std::pow(r, 2 * j);
                // Δ_ϑ r^{2j} = 2j (2j + ϑ − 2) r^{2j−2}
                lap_(row, j - 1) = -2.0 * j * (2.0 * j + theta - 2.0) * std::pow(r, 2 * j - 2);
            }
        }
    }

    // Gram matrices of the p = 2 problem ∫ r³ (Δ_ϑ v)² and ∫ r³ v².
    std::pair<Eigen::MatrixXd, Eigen::MatrixXd> quadratic_forms() const
    {
        const Eigen::Index J = phi_.cols();
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(J, J);
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(J, J);
        for (std::size_t q = 0; q < r_.size(); ++q) {
            const auto row = static_cast<Eigen::Index>(q);
            const double weight = w_[q] * std::pow(r_[q], 3);
            K.noalias() += weight * lap_.row(row).transpose() * lap_.row(row);
            M.noalias() += weight * phi_.row(row).transpose() * phi_.row(row);
        }
        return {K, M};
    }

    // Quotient value and gradient with respect to the coefficients.
    double evaluate(ThetaQuotient kind, const Eigen::VectorXd& c, Eigen::VectorXd& grad) const
    {
        const Eigen::VectorXd v = phi_ * c;
        const Eigen::VectorXd L = lap_ * c;
        const Eigen::Index J = c.size();
        double num = 0.0;
        double den = 0.0;
        Eigen::VectorXd g_num = Eigen::VectorXd::Zero(J);
        Eigen::VectorXd g_den = Eigen::VectorXd::Zero(J);
        for (std::size_t q = 0; q < r_.size(); ++q) {
            const auto row = static_cast<Eigen::Index>(q);
            const double r = r_[q];
            const double vq = v(row);
            const double Lq = L(row);
            const double av = std::abs(vq);
            const double wd = w_[q] * std::pow(r, 2.0 * p_ - 1.0);
            den += wd * std::pow(av, p_);
            g_den += wd * p_ * std::pow(av, p_ - 2.0) * vq * phi_.row(row).transpose();
            if (kind == ThetaQuotient::lambda_small) {
                const double aL = std::abs(Lq);
                num += wd * std::pow(aL, p_);
                g_num += wd * p_ * std::pow(aL, p_ - 2.0) * Lq * lap_.row(row).transpose();
            } else {
                const double wn = w_[q] * r * r * r;
                const double vpow = std::pow(av, p_ - 2.0);
                num += wn * vpow * Lq * Lq;
                g_num += wn * 2.0 * vpow * Lq * lap_.row(row).transpose();
                if (p_ != 2.0 && vq != 0.0) {
                    g_num += wn * (p_ - 2.0) * vpow / vq * Lq * Lq * phi_.row(row).transpose();
                }
            }
        }
        const double value = num / den;
        grad = (g_num - value * g_den) / den;
        return value;
    }

private:
    double p_;
    std::vector<double> r_;
    std::vector<double> w_;
    Eigen::MatrixXd phi_;
    Eigen::MatrixXd lap_;
};

} // namespace detail

/// Minimises λ_ϑ or Λ_ϑ over the Ritz space. For p = 2 both are the smallest
/// generalized eigenvalue of the quadratic forms; otherwise the quotient is
/// minimised by preconditioned projected gradient descent from several seeded
/// starts around the p = 2 minimiser.
inline ThetaResult theta_quotient_min(ThetaQuotient kind, double theta, double p, const ThetaOptions& opt = {})
{
    detail::require(p >= 2.0, "theta_quotient_min: requires p >= 2");
    detail::require(theta > 0.0, "theta_quotient_min: theta must be positive");
    detail::require(opt.basis_size >= 2, "theta_quotient_min: basis_size must be >= 2");
    const detail::ThetaRitz ritz(theta, p, opt.basis_size);
    const auto [K, M] = ritz.quadratic_forms();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(K, M);
    if (eig.info() != Eigen::Success) {
        throw numeric_error("theta_quotient_min: generalized eigensolver failed");
    }
    if (p == 2.0) {
        return {eig.eigenvalues()(0), 1, 0};
    }

    const Eigen::LLT<Eigen::MatrixXd> precond(K);
    const Eigen::VectorXd base = eig.eigenvectors().col(0);
    const auto normalise = [&M](Eigen::VectorXd c) { return Eigen::VectorXd(c / std::sqrt(c.dot(M * c))); };

    BatteryRng rng(opt.seed);
    ThetaResult best{std::numeric_limits<double>::infinity(), 0, 0};
    for (int start = 0; start < opt.starts; ++start) {
        Eigen::VectorXd c = base;
        if (start > 0) {
            for (Eigen::Index j = 0; j < c.size(); ++j) {
                c(j) += 0.3 * std::abs(base(j)) * rng.uniform(-1.0, 1.0);
            }
        }
        c = normalise(c);
        Eigen::VectorXd grad;
        double value = ritz.evaluate(kind, c, grad);
        double step = 1.0;
        bool converged = false;
        int it = 0;
        for (; it < opt.max_iterations; ++it) {
            const Eigen::VectorXd dir = precond.solve(grad);
            const double slope = grad.dot(dir);
            if (slope <= 1e-28 * value * value) {
                converged = true;
                break;
            }
            Eigen::VectorXd trial_grad;
            double trial_value = value;
            Eigen::VectorXd trial;
            step *= 2.0;
            for (int back = 0; back < 60; ++back) {
                trial = normalise(c - step * dir);
                trial_value = ritz.evaluate(kind, trial, trial_grad);
                if (trial_value <= value - 1e-4 * step * slope) {
                    break;
                }
                step *= 0.5;
            }
            if (!(trial_value < value)) {
                converged = true; // no further descent at machine precision
                break;
            }
            const double gain = value - trial_value;
            c = trial;
            grad = trial_grad;
            value = trial_value;
            if (gain <= 1e-15 * value) {
                converged = true;
                break;
            }
        }
        if (converged) {
            ++best.starts_converged;
            best.value = std::min(best.value, value);
        }
        best.iterations += it;
    }
    if (best.starts_converged == 0) {
        throw numeric_error("theta_quotient_min: no start converged within " + std::to_string(opt.max_iterations)
            + " iterations (theta=" + std::to_string(theta) + ", p=" + std::to_string(p) + ")");
    }
    return best;
}

/// Constants of the Gazzola–Grunau–Mitidieri improved Rellich inequality of order two.
struct GazzolaConstants
{
    int n = 0;
    double p = 2.0;
    double theta = 4.0;
    double gamma = 0.0;         // = Λ(2)
    double lambda_theta = 0.0;
    double Lambda_theta = 0.0;
    double Gamma = 0.0;         // max of the scaled Λ_ϑ and λ_ϑ
    double Gamma_first = 0.0;   // (p−1)^{p−1}(n−2p)^{p−2}n^{p−2}/p^{2(p−2)} · Λ_ϑ
};

inline GazzolaConstants gazzola_constants(int n, double p, int intervals = 2000, const ThetaOptions& opt = {})
{
    detail::require(p >= 2.0, "gazzola_constants: requires p >= 2");
    detail::require(n >= 2.0 * p, "gazzola_constants: requires n >= 2p");
    GazzolaConstants g;
    g.n = n;
    g.p = p;
    g.theta = 4.0 + n * (p - 2.0) / p;
    g.gamma = gradient_eigenvalue(1.0, intervals);
    g.lambda_theta = theta_quotient_min(ThetaQuotient::lambda_small, g.theta, p, opt).value;
    g.Lambda_theta = theta_quotient_min(ThetaQuotient::Lambda_big, g.theta, p, opt).value;
    g.Gamma_first = std::pow(p - 1.0, p - 1.0) * std::pow(n - 2.0 * p, p - 2.0) * std::pow(n, p - 2.0)
        / std::pow(p, 2.0 * (p - 2.0)) * g.Lambda_theta;
    g.Gamma = std::max(g.Gamma_first, g.lambda_theta);
    return g;
}

} // namespace symlab
