#include "symlab/radial_calculus.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace symlab;

namespace {
constexpr double pi = std::numbers::pi;

} // namespace

TEST(RadialGrid, UniformNodes)
{
    const RadialGrid g = RadialGrid::uniform(2.0, 16);
    EXPECT_EQ(g.size(), 17u);
    EXPECT_EQ(g.intervals(), 16);
    EXPECT_DOUBLE_EQ(g[0], 0.0);
    EXPECT_DOUBLE_EQ(g[8], 1.0);
    EXPECT_DOUBLE_EQ(g.radius(), 2.0);
    EXPECT_EQ(g.spacing(), Spacing::uniform);
}

TEST(RadialGrid, GeometricNodesGrowByTheRatio)
{
    const RadialGrid g = RadialGrid::geometric(1.0, 20, 1.1);
    EXPECT_DOUBLE_EQ(g.radius(), 1.0);
    for (std::size_t i = 2; i < g.size() - 1; ++i) {
        EXPECT_NEAR((g[i] - g[i - 1]) / (g[i - 1] - g[i - 2]), 1.1, 1e-10);
    }
}

TEST(RadialGrid, RejectsCoarseOrInvalidGrids)
{
    EXPECT_THROW(RadialGrid::uniform(1.0, 15), config_error);
    EXPECT_THROW(RadialGrid::uniform(-1.0, 32), domain_error);
    std::vector<double> nodes(20);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        nodes[i] = static_cast<double>(i);
    }
    nodes[5] = nodes[4];
    EXPECT_THROW(RadialGrid{nodes}, domain_error);
}

TEST(RadialGrid, CellLookup)
{
    const RadialGrid g = RadialGrid::uniform(1.0, 16);
    EXPECT_EQ(g.cell_of(0.0), 0u);
    EXPECT_EQ(g.cell_of(0.5), 8u);
    EXPECT_EQ(g.cell_of(0.51), 8u);
    EXPECT_EQ(g.cell_of(1.0), 15u);
    EXPECT_EQ(g.cell_of(5.0), 15u);
}

TEST(RadialFunction, PiecewiseLinearInterpolation)
{
    const RadialGrid g = RadialGrid::uniform(1.0, 16);
    const RadialFunction u = RadialFunction::sample(g, [](double r) { return 3.0 * r - 1.0; });
    EXPECT_NEAR(u(0.123), 3.0 * 0.123 - 1.0, 1e-14);
    EXPECT_NEAR(u.scaled(2.0)(0.5), 1.0, 1e-14);
    EXPECT_FALSE(u.is_zero());
    EXPECT_TRUE(u.scaled(0.0).is_zero());
    EXPECT_THROW(RadialFunction(g, std::vector<double>(3, 0.0)), domain_error);
    std::vector<double> bad(g.size(), 0.0);
    bad[3] = std::nan("");
    EXPECT_THROW(RadialFunction(g, bad), domain_error);
}

TEST(RadialDerivative, ExactOnQuadratics)
{
    const RadialGrid g = RadialGrid::geometric(2.0, 40, 1.05);
    const RadialFunction u = RadialFunction::sample(g, [](double r) { return r * r - 3.0 * r + 1.0; });
    const RadialFunction du = radial_derivative(u);
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_NEAR(du[i], 2.0 * g[i] - 3.0, 1e-10) << i;
    }
}

TEST(Laplacian, EuclideanQuadraticIsTwoN)
{
    for (int n : {2, 3, 5}) {
        const ModelManifold M = euclidean_model(n);
        const RadialFunction u = RadialFunction::sample(RadialGrid::uniform(1.0, 64), [](double r) { return r * r; });
        const RadialFunction lap = laplacian(M, u);
        for (std::size_t i = 0; i < lap.size(); ++i) {
            EXPECT_NEAR(lap[i], 2.0 * n, 1e-9) << "n=" << n << " i=" << i;
        }
    }
}

TEST(Laplacian, HyperbolicCoshIsAnEigenfunction)
{
    // On H³, Δ cosh r = cosh'' + 2 coth r · sinh r = 3 cosh r.
    const ModelManifold H = make_model(3, ModelSpec::hyperbolic());
    const auto error_at = [&](int N) {
        const RadialFunction u = RadialFunction::sample(RadialGrid::uniform(2.0, N), [](double r) { return std::cosh(r); });
        const RadialFunction lap = laplacian(H, u);
        double worst = 0.0;
        for (std::size_t i = 0; i < lap.size(); ++i) {
            worst = std::max(worst, std::abs(lap[i] - 3.0 * std::cosh(u.grid()[i])));
        }
        return worst;
    };
    const double coarse = error_at(500);
    const double fine = error_at(1000);
    EXPECT_LT(fine, 1e-4);
    EXPECT_GT(std::log2(coarse / fine), 1.8);
}

TEST(LaplacianPower, BiharmonicOfQuartic)
{
    const int n = 5;
    const ModelManifold M = euclidean_model(n);
    const RadialFunction u = RadialFunction::sample(RadialGrid::uniform(1.0, 400), [](double r) { return std::pow(r, 4); });
    const RadialFunction lap = laplacian_power(M, u, 1);
    const RadialFunction bilap = laplacian_power(M, u, 2);
    for (std::size_t i = 3; i + 2 < u.size(); ++i) {
        const double r = u.grid()[i];
        EXPECT_NEAR(lap[i], 4.0 * (n + 2) * r * r, 1e-3);
        EXPECT_NEAR(bilap[i], 8.0 * n * (n + 2), 1e-3 * 8.0 * n * (n + 2));
    }
    EXPECT_EQ(laplacian_power(M, u, 0)[7], u[7]);
    EXPECT_THROW(laplacian_power(M, u, -1), domain_error);
}

TEST(IteratedMagnitude, OddOrderIsTheGradientOfTheLaplacian)
{
    const int n = 4;
    const ModelManifold M = euclidean_model(n);
    const RadialFunction u = RadialFunction::sample(RadialGrid::uniform(1.0, 200), [](double r) { return -std::pow(r, 4); });
    // |∇Δ(−r⁴)| = 8(n+2) r.
    const RadialFunction d3 = iterated_magnitude(M, u, 3);
    for (std::size_t i = 3; i + 3 < u.size(); ++i) {
        EXPECT_NEAR(d3[i], 8.0 * (n + 2) * u.grid()[i], 1e-3);
    }
    const RadialFunction d1 = iterated_magnitude(M, u, 1);
    EXPECT_NEAR(d1[100], 4.0 * std::pow(0.5, 3), 1e-4);
    EXPECT_THROW(iterated_magnitude(M, u, 0), domain_error);
}

TEST(WeightedIntegral, ExactForPolynomialsOfLinearProfiles)
{
    const ModelManifold M = euclidean_model(3);
    const RadialGrid g = RadialGrid::uniform(1.0, 32);
    const RadialFunction u = RadialFunction::sample(g, [](double r) { return r; });
    // ∫ r² · 4π r² dr over [0,1].
    EXPECT_NEAR(weighted_integral(M, u, 2.0, unit_weight()), 4.0 * pi / 5.0, 1e-13);
    EXPECT_NEAR(lp_norm(M, u, 2.0), std::sqrt(4.0 * pi / 5.0), 1e-13);
    const RadialFunction one = RadialFunction::sample(g, [](double) { return 1.0; });
    EXPECT_NEAR(weighted_integral(M, one, 1.0, power_weight(2.0)), 4.0 * pi, 1e-12);
}

TEST(WeightedIntegral, ConeScalesByOpening)
{
    const RadialGrid g = RadialGrid::uniform(1.5, 64);
    const RadialFunction u = RadialFunction::sample(g, [](double r) { return std::exp(-r); });
    const double e = weighted_integral(euclidean_model(4), u, 3.0, power_weight(1.0));
    const double c = weighted_integral(make_model(4, ModelSpec::cone(0.3)), u, 3.0, power_weight(1.0));
    EXPECT_NEAR(c, 0.3 * e, 1e-14 * e);
}

TEST(WeightedIntegral, RejectsNonIntegrableWeight)
{
    const RadialFunction u = RadialFunction::sample(RadialGrid::uniform(1.0, 32), [](double) { return 1.0; });
    EXPECT_THROW(weighted_integral(euclidean_model(3), u, 2.0, power_weight(3.0)), domain_error);
    EXPECT_THROW(weighted_integral(euclidean_model(3), u, 0.0, unit_weight()), domain_error);
}

TEST(GradientEnergy, LinearProfileGivesBallVolume)
{
    for (const ModelSpec spec : {ModelSpec::euclidean(), ModelSpec::cone(0.5), ModelSpec::hyperbolic()}) {
        const ModelManifold M = make_model(3, spec);
        const RadialFunction u = RadialFunction::sample(RadialGrid::uniform(1.0, 50), [](double r) { return 1.0 - r; });
        EXPECT_NEAR(gradient_energy(M, u, 2.0), M.ball_volume(1.0), 1e-12 * M.ball_volume(1.0));
        EXPECT_NEAR(gradient_energy(M, u.scaled(2.0), 3.0), 8.0 * M.ball_volume(1.0), 1e-11 * M.ball_volume(1.0));
    }
}
