#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "rieszflow/symmetric_eigen.hpp"

using namespace rieszflow;

TEST(SymmetricEigen, Diagonal) {
    Matrix a(3, 3);
    a(0, 0) = 3;
    a(1, 1) = -1;
    a(2, 2) = 2;
    const auto e = symmetric_eigen(a);
    EXPECT_EQ(e.values, (std::vector<double>{-1, 2, 3}));
}

TEST(SymmetricEigen, TwoByTwoClosedForm) {
    Matrix a(2, 2);
    a(0, 0) = 2;
    a(0, 1) = a(1, 0) = 1;
    a(1, 1) = 3;
    const auto e = symmetric_eigen(a);
    const double mid = 2.5, rad = std::sqrt(0.25 + 1.0);
    EXPECT_NEAR(e.values[0], mid - rad, 1e-14);
    EXPECT_NEAR(e.values[1], mid + rad, 1e-14);
}

TEST(SymmetricEigen, RandomResidualsAndOrthogonality) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> dist;
    for (std::size_t n : {1u, 4u, 9u, 20u}) {
        Matrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = dist(rng);
        const auto e = symmetric_eigen(a);
        double trace = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) trace += a(i, i);
        for (std::size_t k = 0; k < n; ++k) {
            sum += e.values[k];
            if (k) EXPECT_LE(e.values[k - 1], e.values[k]);
            for (std::size_t i = 0; i < n; ++i) {
                double av = 0.0;
                for (std::size_t j = 0; j < n; ++j) av += a(i, j) * e.vectors(j, k);
                EXPECT_NEAR(av, e.values[k] * e.vectors(i, k), 1e-12);
            }
            for (std::size_t l = 0; l < n; ++l) {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += e.vectors(i, k) * e.vectors(i, l);
                EXPECT_NEAR(dot, k == l ? 1.0 : 0.0, 1e-12);
            }
        }
        EXPECT_NEAR(sum, trace, 1e-12);
    }
}
