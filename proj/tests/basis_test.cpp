#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>
#include <mpfr.h>

#include "rieszflow/basis.hpp"
#include "rieszflow/error.hpp"
#include "rieszflow/kernels.hpp"
#include "rieszflow/operators.hpp"
#include "rieszflow/quad.hpp"

using namespace rieszflow;

namespace {

// γ_n(x) from the explicit sum h_n(x) = n! Σ_m (-1)^m (2x)^{n-2m} / (m! (n-2m)!)
// in 256-bit MPFR. Independent of the recurrence under test.
double hermite_mpfr(unsigned n, double x) {
    constexpr mpfr_prec_t prec = 256;
    mpfr_t sum, term, two_x, tmp, fact;
    mpfr_inits2(prec, sum, term, two_x, tmp, fact, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_zero(sum, 1);
    mpfr_set_d(two_x, 2.0 * x, MPFR_RNDN);
    for (unsigned m = 0; 2 * m <= n; ++m) {
        mpfr_pow_ui(term, two_x, n - 2 * m, MPFR_RNDN);
        mpfr_fac_ui(fact, m, MPFR_RNDN);
        mpfr_div(term, term, fact, MPFR_RNDN);
        mpfr_fac_ui(fact, n - 2 * m, MPFR_RNDN);
        mpfr_div(term, term, fact, MPFR_RNDN);
        if (m % 2) mpfr_neg(term, term, MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);
    }
    mpfr_fac_ui(fact, n, MPFR_RNDN);
    mpfr_mul(sum, sum, fact, MPFR_RNDN);  // h_n(x)

    // a_n = (2^n n! √π)^{-1/2}
    mpfr_const_pi(tmp, MPFR_RNDN);
    mpfr_sqrt(tmp, tmp, MPFR_RNDN);
    mpfr_mul(tmp, tmp, fact, MPFR_RNDN);
    mpfr_mul_2ui(tmp, tmp, n, MPFR_RNDN);
    mpfr_rec_sqrt(tmp, tmp, MPFR_RNDN);
    mpfr_mul(sum, sum, tmp, MPFR_RNDN);

    mpfr_set_d(tmp, -0.5 * x * x, MPFR_RNDN);
    mpfr_exp(tmp, tmp, MPFR_RNDN);
    mpfr_mul(sum, sum, tmp, MPFR_RNDN);
    const double out = mpfr_get_d(sum, MPFR_RNDN);
    mpfr_clears(sum, term, two_x, tmp, fact, static_cast<mpfr_ptr>(nullptr));
    return out;
}

}  // namespace

TEST(HermiteEval, ClosedFormValues) {
    const double pi_quarter = std::pow(std::numbers::pi, -0.25);
    EXPECT_NEAR(hermite_eval(0, 0.0), pi_quarter, 1e-15);
    EXPECT_NEAR(hermite_eval(0, 0.0), 0.7511255445, 1e-10);
    EXPECT_EQ(hermite_eval(1, 0.0), 0.0);
    EXPECT_NEAR(hermite_eval(2, 0.0), -pi_quarter / std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(hermite_eval(2, 0.0), -0.5311259661, 1e-10);
}

TEST(HermiteEval, MatchesExtendedPrecisionExplicitSum) {
    for (unsigned n = 0; n <= 30; ++n) {
        for (int k = -160; k <= 160; ++k) {
            const double x = k / 20.0;
            const double ref = hermite_mpfr(n, x);
            const double got = hermite_eval(n, x);
            if (ref == 0.0) {
                EXPECT_EQ(got, 0.0) << "n=" << n << " x=" << x;
            } else {
                EXPECT_LT(std::abs(got - ref) / std::abs(ref), 1e-10) << "n=" << n << " x=" << x;
            }
        }
    }
}

TEST(HermiteEval, Parity) {
    for (std::size_t n = 0; n < 40; ++n) {
        const double sign = (n % 2) ? -1.0 : 1.0;
        for (double x : {0.1, 0.7, 1.3, 2.9, 5.5, 7.25}) {
            EXPECT_EQ(hermite_eval(n, -x), sign * hermite_eval(n, x)) << "n=" << n << " x=" << x;
        }
    }
}

TEST(HermiteEval, AllMatchesScalarBitForBit) {
    std::vector<double> all(25);
    for (double x : {-6.0, -0.3, 0.0, 1.1, 4.75}) {
        hermite_all(x, all);
        for (std::size_t n = 0; n < all.size(); ++n) EXPECT_EQ(all[n], hermite_eval(n, x));
    }
}

TEST(HermiteEval, DerivativeMatchesCentralDifference) {
    const double h = 1e-5;
    for (std::size_t n = 0; n < 12; ++n) {
        for (double x : {-2.5, -0.4, 0.0, 1.7, 3.2}) {
            const double fd = (hermite_eval(n, x + h) - hermite_eval(n, x - h)) / (2 * h);
            EXPECT_NEAR(hermite_deriv(n, x), fd, 1e-8) << "n=" << n << " x=" << x;
        }
    }
}

TEST(BasisColumn, Examples) {
    const auto spec = BasisSpec::hermite(3);
    const std::vector<double> zero{0.0};
    EXPECT_EQ(basis_column(spec, 1, zero), std::vector<double>{0.0});

    const std::vector<double> pts{0.0, 1.0};
    const auto col = basis_column(spec, 0, pts);
    ASSERT_EQ(col.size(), 2u);
    EXPECT_NEAR(col[0], 0.7511255445, 1e-10);
    EXPECT_NEAR(col[1], std::pow(std::numbers::pi, -0.25) * std::exp(-0.5), 1e-15);
    EXPECT_NEAR(col[1], 0.4555807, 1e-7);

    EXPECT_NEAR(basis_column(spec, 2, zero)[0], -0.5311259661, 1e-10);
}

TEST(BasisColumn, AgreesExactlyWithScalarCalls) {
    const auto spec = BasisSpec::hermite(10);
    std::vector<double> pts;
    for (int k = -50; k <= 50; ++k) pts.push_back(k * 0.13);
    for (std::size_t n = 0; n < 10; ++n) {
        const auto col = basis_column(spec, n, pts);
        for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(col[i], hermite_eval(n, pts[i]));
    }
}

TEST(BasisColumn, IndexOutOfRange) {
    const auto spec = BasisSpec::hermite(3);
    const std::vector<double> pts{0.0};
    EXPECT_THROW(basis_column(spec, 3, pts), IndexOutOfRange);
}

TEST(BasisSpec, RejectsEmptySection) { EXPECT_THROW(BasisSpec::hermite(0), InvalidArgument); }

TEST(BasisSpec, QuadratureOrthonormality) {
    const QuadRule& rule = default_rule();
    const auto report = gram_matrix({BasisSpec::hermite(16), MapSpec::identity(), Flavor::Composition}, 16, rule);
    EXPECT_LT(max_abs_diff(report.gram, Matrix::identity(16)), 1e-10);
}
