#include <array>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "rieszflow/error.hpp"
#include "rieszflow/map_json.hpp"
#include "rieszflow/maps.hpp"

using namespace rieszflow;

namespace {

MapSpec random_chain(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.3, 0.9);
    std::uniform_real_distribution<double> a(0.5, 2.0);
    std::uniform_real_distribution<double> b(-1.0, 1.0);
    const std::array<std::size_t, 2> hidden{8, 8};
    std::vector<Block> blocks;
    blocks.emplace_back(AffineBlock{a(rng), b(rng)});
    blocks.emplace_back(ResidualBlock{make_lipmlp(hidden, u(rng), seed, 1.5)});
    blocks.emplace_back(ResidualBlock{make_lipmlp(hidden, u(rng), seed + 1000, 1.5)});
    blocks.emplace_back(AffineBlock{a(rng), b(rng)});
    return MapSpec(std::move(blocks));
}

}  // namespace

TEST(MapSpec, Validation) {
    EXPECT_THROW(MapSpec::affine(0.0, 1.0), InvalidArgument);
    EXPECT_THROW(MapSpec::affine(-2.0, 1.0), InvalidArgument);
    EXPECT_THROW(MapSpec({}, 2), Unsupported);
}

TEST(MapForward, Examples) {
    EXPECT_EQ(map_forward(MapSpec::affine(2, 1), 3.0), 7.0);
    EXPECT_EQ(map_forward(MapSpec::shift(2), 0.5), -1.5);
    EXPECT_EQ(map_inverse(MapSpec::affine(2, 1), 7.0), 3.0);
    EXPECT_EQ(jacobian_det(MapSpec::affine(2, 1), -4.0), 2.0);
    const auto [r, R] = lipschitz_interval(MapSpec::affine(2, 1));
    EXPECT_EQ(r, 2.0);
    EXPECT_EQ(R, 2.0);
}

TEST(LipschitzInterval, ResidualTimesAffine) {
    const std::array<std::size_t, 1> hidden{4};
    const MapSpec m({ResidualBlock{make_lipmlp(hidden, 0.25, 1)}, AffineBlock{2.0, 0.0}});
    const auto [r, R] = lipschitz_interval(m);
    EXPECT_DOUBLE_EQ(r, 2 * 0.75);
    EXPECT_DOUBLE_EQ(R, 2 * 1.25);
}

TEST(MapInverse, RoundTripOnRandomChains) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const MapSpec m = random_chain(seed);
        for (double x = -8; x <= 8; x += 0.37) {
            EXPECT_NEAR(map_inverse(m, map_forward(m, x)), x, 1e-10) << "seed " << seed;
            const double y = x * 1.3;
            EXPECT_NEAR(map_forward(m, map_inverse(m, y)), y, 1e-10) << "seed " << seed;
        }
    }
}

TEST(MapForward, DifferenceQuotientsInCertifiedInterval) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const MapSpec m = random_chain(seed);
        const auto [r, R] = lipschitz_interval(m);
        std::mt19937_64 rng(seed + 77);
        std::uniform_real_distribution<double> u(-10, 10);
        for (int i = 0; i < 10000; ++i) {
            const double x = u(rng), y = u(rng);
            if (std::abs(x - y) < 1e-6) continue;
            const double q = (map_forward(m, x) - map_forward(m, y)) / (x - y);
            EXPECT_GE(q, r * (1 - 1e-9));
            EXPECT_LE(q, R * (1 + 1e-9));
        }
    }
}

TEST(MapForward, JacobianMatchesCentralDifference) {
    const MapSpec m = random_chain(3);
    const double h = 1e-6;
    for (double x : {-4.0, -1.1, 0.0, 2.5, 6.0}) {
        const double fd = (map_forward(m, x + h) - map_forward(m, x - h)) / (2 * h);
        EXPECT_NEAR(jacobian_det(m, x), fd, 1e-7);
        const auto [y, jd] = forward_with_jacobian(m, x);
        EXPECT_EQ(y, map_forward(m, x));
        EXPECT_EQ(jd, jacobian_det(m, x));
    }
}

TEST(Density, Identities) {
    const MapSpec m = random_chain(5);
    const auto [r, R] = lipschitz_interval(m);
    for (double y = -6; y <= 6; y += 0.5) {
        const double gh = density(m, DensityKind::PushForward, y);
        // g_h(y) · h'(h⁻¹(y)) = 1
        EXPECT_NEAR(gh * jacobian_det(m, map_inverse(m, y)), 1.0, 1e-12);
        EXPECT_GE(gh, 1.0 / R * (1 - 1e-12));
        EXPECT_LE(gh, 1.0 / r * (1 + 1e-12));
        EXPECT_EQ(density(m, DensityKind::InversePushForward, y), jacobian_det(m, y));
    }
    EXPECT_EQ(density(MapSpec::affine(2, 1), DensityKind::PushForward, 0.3), 0.5);
}

TEST(MapInverse, NonConvergenceForUnconstrainedNet) {
    Matrix w(1, 1);
    w(0, 0) = -3.0;
    const LipMlp net = LipMlp({DenseLayer{w, {0.0}}}, 0.5).with_parameters(std::vector<double>{-3.0, 0.0});
    const MapSpec m = MapSpec::residual(net);
    EXPECT_FALSE(m.residuals_constrained());
    EXPECT_THROW(map_inverse(m, 1.0), NonConvergence);
}

TEST(MapSpec, ParametersRoundTrip) {
    const MapSpec m = random_chain(2);
    const auto p = m.parameters();
    EXPECT_EQ(p.size(), m.parameter_count());
    EXPECT_EQ(m.with_parameters(p).parameters(), p);
    EXPECT_TRUE(m.residuals_constrained());
}

TEST(MapJson, RoundTripIsBitExact) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const MapSpec m = random_chain(seed);
        const MapSpec back = map_from_string(map_to_string(m));
        EXPECT_EQ(back.parameters(), m.parameters());
        EXPECT_EQ(map_to_string(back), map_to_string(m));
        for (double x : {-3.3, 0.1, 4.7}) EXPECT_EQ(map_forward(back, x), map_forward(m, x));
    }
    EXPECT_EQ(map_forward(map_from_string(map_to_string(MapSpec::identity())), 1.25), 1.25);
}

TEST(MapJson, MalformedInputs) {
    EXPECT_THROW(map_from_string("not json"), ParseError);
    EXPECT_THROW(map_from_string("{}"), ParseError);
    EXPECT_THROW(map_from_string(R"({"dimension":1,"blocks":[{"type":"affine","alpha":1}]})"), ParseError);
    EXPECT_THROW(map_from_string(R"({"dimension":1,"blocks":[{"type":"spline"}]})"), ParseError);
}
