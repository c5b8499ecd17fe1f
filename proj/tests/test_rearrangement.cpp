#include "symlab/battery.hpp"
#include "symlab/quadrature.hpp"
#include "symlab/rearrangement.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace symlab;

namespace {

constexpr double pi = std::numbers::pi;

template <class F>
double bisect(F&& f, double lo, double hi)
{
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

// sinh 2ρ − 2ρ without cancellation near the origin.
double sinh_excess(double rho)
{
    if (rho < 1e-2) {
        const double r2 = rho * rho;
        return 4.0 / 3.0 * rho * r2 * (1.0 + r2 / 5.0 + 2.0 * r2 * r2 / 105.0);
    }
    return std::sinh(2.0 * rho) - 2.0 * rho;
}

// Euclidean radius of the ball with the volume of the geodesic ball of radius ρ in H³.
double h3_star_radius(double rho) { return std::cbrt(0.75 * sinh_excess(rho)); }

RadialFunction profile(const RadialGrid& g, std::initializer_list<std::pair<double, double>> knots)
{
    const std::vector<std::pair<double, double>> k(knots);
    return RadialFunction::sample(g, [&](double r) {
        for (std::size_t i = 0; i + 1 < k.size(); ++i) {
            if (r <= k[i + 1].first) {
                const double t = (r - k[i].first) / (k[i + 1].first - k[i].first);
                return (1.0 - t) * k[i].second + t * k[i + 1].second;
            }
        }
        return k.back().second;
    });
}

bool nonincreasing(const RadialFunction& f)
{
    for (std::size_t i = 1; i < f.size(); ++i) {
        if (f[i] > f[i - 1]) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST(DistributionFunction, LinearProfileInThreeDimensions)
{
    const RadialFunction u = profile(RadialGrid::uniform(1.0, 64), {{0.0, 1.0}, {1.0, 0.0}});
    const DistributionFunction mu(euclidean_model(3), u);
    for (double t : {0.0, 0.1, 0.37, 0.5, 0.99}) {
        EXPECT_NEAR(mu(t), 4.0 * pi / 3.0 * std::pow(1.0 - t, 3), 1e-13) << t;
    }
    EXPECT_DOUBLE_EQ(mu(1.0), 0.0);
    EXPECT_DOUBLE_EQ(mu.max_level(), 1.0);
    EXPECT_DOUBLE_EQ(mu.min_level(), 0.0);
    EXPECT_NEAR(mu.domain_volume(), 4.0 * pi / 3.0, 1e-14);
}

TEST(DistributionFunction, LevelsDecreaseAndMeasuresIncrease)
{
    BatteryRng rng(11);
    const RadialGrid g = RadialGrid::uniform(2.0, 128);
    for (int trial = 0; trial < 10; ++trial) {
        const DistributionFunction mu(make_model(4, ModelSpec::hyperbolic()), random_pl_profile(rng, g));
        const auto& levels = mu.levels();
        const auto& measures = mu.measures();
        ASSERT_EQ(levels.size(), measures.size());
        for (std::size_t i = 1; i < levels.size(); ++i) {
            EXPECT_LT(levels[i], levels[i - 1]);
            EXPECT_GE(measures[i], measures[i - 1]);
        }
        EXPECT_DOUBLE_EQ(measures.front(), 0.0);
    }
}

TEST(SchwarzRearrange, DecreasingEuclideanProfileIsFixed)
{
    const RadialGrid g = RadialGrid::uniform(1.5, 200);
    const RadialFunction u = RadialFunction::sample(g, [](double r) { return std::exp(-r) - std::exp(-1.5); });
    const SymmetrizedPair pair = schwarz_rearrange(euclidean_model(5), u);
    EXPECT_NEAR(pair.star_radius, 1.5, 1e-13);
    for (std::size_t i = 0; i < u.size(); ++i) {
        EXPECT_NEAR(pair.u_star[i], u[i], 1e-10) << i;
    }
}

TEST(SchwarzRearrange, ConeShrinksTheRadius)
{
    const double alpha = 0.3;
    const int n = 3;
    const RadialGrid g = RadialGrid::uniform(1.0, 100);
    const RadialFunction u = RadialFunction::sample(g, [](double r) { return std::cos(0.5 * pi * r); });
    const SymmetrizedPair pair = schwarz_rearrange(make_model(n, ModelSpec::cone(alpha)), u);
    const double shrink = std::pow(alpha, 1.0 / n);
    EXPECT_NEAR(pair.star_radius, shrink, 1e-13);
    for (std::size_t j = 0; j < pair.u_star.size(); ++j) {
        const double s = pair.u_star.grid()[j];
        EXPECT_NEAR(pair.u_star[j], std::cos(0.5 * pi * s / shrink), 1e-9) << j;
    }
}

TEST(SchwarzRearrange, HatFunctionInThePlane)
{
    // μ(t) = π[(1 − t/2)² − (t/2)²] = π(1 − t), so u*(s) = 1 − s².
    const RadialFunction u = profile(RadialGrid::uniform(1.0, 64), {{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}});
    const SymmetrizedPair pair = schwarz_rearrange(euclidean_model(2), u);
    for (std::size_t j = 0; j < pair.u_star.size(); ++j) {
        const double s = pair.u_star.grid()[j];
        EXPECT_NEAR(pair.u_star[j], 1.0 - s * s, 1e-10) << j;
    }
}

TEST(SchwarzRearrange, HatFunctionInSpaceAgainstBisection)
{
    const RadialFunction u = profile(RadialGrid::uniform(1.0, 80), {{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}});
    const SymmetrizedPair pair = schwarz_rearrange(euclidean_model(3), u);
    for (std::size_t j = 1; j + 1 < pair.u_star.size(); ++j) {
        const double s = pair.u_star.grid()[j];
        const double target = s * s * s;
        const double t = bisect([&](double tt) { return target - (std::pow(1.0 - 0.5 * tt, 3) - std::pow(0.5 * tt, 3)); },
            0.0, 1.0);
        EXPECT_NEAR(pair.u_star[j], t, 1e-10) << j;
    }
}

TEST(SchwarzRearrange, JumpInTheDistributionGivesAPlateau)
{
    // u = 1/2 on [0, 0.4], up to 1 at 0.6, down to 0 at 1. In the plane
    // u*(s) = 1 − s²/0.96 for s² ≤ 0.48, 1/2 up to s² = 0.64, then (1 − s)/0.4.
    const RadialFunction u = profile(RadialGrid::uniform(1.0, 100), {{0.0, 0.5}, {0.4, 0.5}, {0.6, 1.0}, {1.0, 0.0}});
    const SymmetrizedPair pair = schwarz_rearrange(euclidean_model(2), u);
    int plateau_nodes = 0;
    for (std::size_t j = 0; j < pair.u_star.size(); ++j) {
        const double s = pair.u_star.grid()[j];
        const double s2 = s * s;
        double expected = 0.5;
        if (s2 <= 0.48) {
            expected = 1.0 - s2 / 0.96;
        } else if (s2 >= 0.64) {
            expected = (1.0 - s) / 0.4;
        } else {
            ++plateau_nodes;
        }
        EXPECT_NEAR(pair.u_star[j], expected, 1e-9) << "s=" << s;
    }
    EXPECT_GT(plateau_nodes, 5);
}

TEST(SchwarzRearrange, HyperbolicLinearProfile)
{
    // {u > t} is the geodesic ball of radius 1 − t, so u*(s) = 1 − ρ(s) with s = h3_star_radius(ρ).
    const RadialFunction u = profile(RadialGrid::uniform(1.0, 256), {{0.0, 1.0}, {1.0, 0.0}});
    const SymmetrizedPair pair = schwarz_rearrange(make_model(3, ModelSpec::hyperbolic()), u);
    EXPECT_NEAR(pair.star_radius, h3_star_radius(1.0), 1e-13);
    for (std::size_t j = 1; j < pair.u_star.size(); ++j) {
        const double s = pair.u_star.grid()[j];
        const double rho = bisect([&](double r) { return h3_star_radius(r) - s; }, 0.0, 1.0);
        EXPECT_NEAR(pair.u_star[j], 1.0 - rho, 1e-10) << j;
    }
}

TEST(RearrangementChecks, HardyLittlewoodFailsOnHyperbolicSpaceWithDecreasingWeight)
{
    // For h = 1/r both sides reduce to integrals over ρ ∈ (0, 1) against 4π sinh²ρ dρ,
    // the Euclidean side carrying 1/s(ρ) with s(ρ) > ρ, hence a smaller value.
    const double p = 2.0;
    const ModelManifold H = make_model(3, ModelSpec::hyperbolic());
    const RadialFunction u = profile(RadialGrid::uniform(1.0, 4096), {{0.0, 1.0}, {1.0, 0.0}});
    const auto integrand = [p](double rho, double radius) {
        return std::pow(1.0 - rho, p) / radius * 4.0 * pi * std::pow(std::sinh(rho), 2);
    };
    const double lhs = quad::adaptive([&](double rho) { return integrand(rho, rho); }, 0.0, 1.0, 1e-13);
    const double rhs = quad::adaptive([&](double rho) { return integrand(rho, h3_star_radius(rho)); }, 0.0, 1.0, 1e-13);
    ASSERT_GT(lhs, rhs);

    const RearrangementReport rep = rearrangement_checks(H, u, 2.0, p, power_weight(1.0));
    EXPECT_NEAR(rep.hl_lhs, lhs, 1e-6 * lhs);
    EXPECT_NEAR(rep.hl_rhs, rhs, 1e-5 * rhs);
    EXPECT_NEAR(rep.hl_margin, (rhs - lhs) / rhs, 1e-5);
    EXPECT_FALSE(rep.hardy_littlewood_ok);
    EXPECT_TRUE(rep.cavalieri_ok);
    EXPECT_TRUE(rep.polya_szego_ok);
    EXPECT_GT(rep.ps_margin, 0.0);
}

TEST(RearrangementChecks, SignAndScaleEquivariance)
{
    BatteryRng rng(5);
    const RadialGrid g = RadialGrid::uniform(1.0, 256);
    const ModelManifold C = make_model(4, ModelSpec::cone(0.7));
    for (int trial = 0; trial < 5; ++trial) {
        const RadialFunction u = random_pl_profile(rng, g);
        const SymmetrizedPair base = schwarz_rearrange(C, u);
        const SymmetrizedPair neg = schwarz_rearrange(C, u.scaled(-1.0));
        const SymmetrizedPair big = schwarz_rearrange(C, u.scaled(3.0));
        for (std::size_t j = 0; j < base.u_star.size(); ++j) {
            EXPECT_NEAR(neg.u_star[j], base.u_star[j], 1e-13);
            EXPECT_NEAR(big.u_star[j], 3.0 * base.u_star[j], 1e-12);
        }
    }
}

class RearrangementBattery : public ::testing::TestWithParam<ModelSpec>
{};

TEST_P(RearrangementBattery, CavalieriPolyaSzegoAndShape)
{
    const int n = 3;
    const ModelManifold M = make_model(n, GetParam());
    BatteryRng rng(2024);
    const RadialGrid g = RadialGrid::uniform(1.0, 8192);
    for (int trial = 0; trial < 4; ++trial) {
        const RadialFunction u = random_pl_profile(rng, g);
        const SymmetrizedPair pair = schwarz_rearrange(M, u);
        EXPECT_TRUE(nonincreasing(pair.u_star));
        EXPECT_GE(pair.u_star[pair.u_star.size() - 1], 0.0);
        double top = 0.0;
        for (double v : u.values()) {
            top = std::max(top, std::abs(v));
        }
        EXPECT_DOUBLE_EQ(pair.u_star[0], top);
        EXPECT_NEAR(unit_ball_volume(n) * std::pow(pair.star_radius, n), M.ball_volume(1.0), 1e-12 * M.ball_volume(1.0));
        for (double q : {1.0, 2.0, 4.0}) {
            const RearrangementReport rep = rearrangement_checks(M, u, pair, q, 2.0, unit_weight());
            EXPECT_TRUE(rep.cavalieri_ok) << "q=" << q << " err=" << rep.cavalieri_err;
            EXPECT_TRUE(rep.polya_szego_ok) << rep.ps_margin;
            EXPECT_TRUE(rep.hardy_littlewood_ok) << rep.hl_margin;
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Models, RearrangementBattery,
    ::testing::Values(ModelSpec::euclidean(), ModelSpec::cone(0.5), ModelSpec::hyperbolic()),
    [](const auto& info) { return std::string(to_string(info.param.kind)); });

TEST(RearrangementChecks, HardyLittlewoodHoldsOnConesForDecreasingWeights)
{
    BatteryRng rng(77);
    const RadialGrid g = RadialGrid::uniform(1.0, 2048);
    const ModelManifold C = make_model(3, ModelSpec::cone(0.4));
    const Weight bell{"inv-1pr2", [](double r) { return 1.0 / ((1.0 + r) * (1.0 + r)); }, 0.0, {}};
    for (int trial = 0; trial < 6; ++trial) {
        const RadialFunction u = random_pl_profile(rng, g);
        for (const Weight& w : {power_weight(1.0), bell}) {
            const RearrangementReport rep = rearrangement_checks(C, u, 2.0, 3.0, w, 1e-5);
            EXPECT_GT(rep.hl_margin, -1e-5) << w.label;
        }
    }
}
