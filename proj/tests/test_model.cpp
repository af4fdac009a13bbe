#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "infopt/error.hpp"
#include "infopt/model.hpp"

using namespace infopt;

namespace {

EpidemicParams standard_params() { return {0.3, 0.1, 0.2, 0.0, 0.0}; }

std::string out_of_range_field(const EpidemicParams& p) {
    try {
        validate(p);
    } catch (const OutOfRangeError& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST(ValidateParams, StandardScenarioPasses) {
    const auto [p, s] = validate_params(standard_params(), {0.99, 0.01});
    EXPECT_EQ(p, standard_params());
    EXPECT_NEAR(s.z(), 0.0, 1e-16);
}

TEST(ValidateParams, NegativeBetaNamesBeta) {
    EpidemicParams p = standard_params();
    p.beta = -0.1;
    EXPECT_EQ(out_of_range_field(p), "beta");
}

TEST(ValidateParams, RhoOutsideUnitIntervalNamesRho) {
    EpidemicParams p = standard_params();
    p.rho = 1.5;
    EXPECT_EQ(out_of_range_field(p), "rho");
}

TEST(ValidateParams, RejectsNonFiniteAndZeroRates) {
    EpidemicParams p = standard_params();
    p.gamma = 0.0;
    EXPECT_EQ(out_of_range_field(p), "gamma");
    p = standard_params();
    p.sigma = std::nan("");
    EXPECT_EQ(out_of_range_field(p), "sigma");
    p = standard_params();
    p.zeta = -1e-9;
    EXPECT_EQ(out_of_range_field(p), "zeta");
}

TEST(ValidateState, FractionsMustLieInUnitInterval) {
    EXPECT_NO_THROW(validate(SirState{1.0, 0.0}));
    EXPECT_THROW(validate(SirState{1.2, 0.5}), OutOfRangeError);
    EXPECT_THROW(validate(SirState{0.5, -0.01}), OutOfRangeError);
}

TEST(ValidateTerms, StrikeUpToOneInclusive) {
    EXPECT_NO_THROW(validate(OptionTerms{OptionKind::Call, 1.0, 10.0, 0.0, 1.0}));
    EXPECT_THROW(validate(OptionTerms{OptionKind::Call, 1.01, 10.0, 0.0, 1.0}), OutOfRangeError);
    EXPECT_THROW(validate(OptionTerms{OptionKind::Call, 0.1, 0.0, 0.0, 1.0}), OutOfRangeError);
    EXPECT_THROW(validate(OptionTerms{OptionKind::Put, 0.1, 1.0, 0.0, 0.0}), OutOfRangeError);
}

TEST(Eta, ZeroSusceptiblesCollapseToZeta) {
    EXPECT_DOUBLE_EQ(eta(0.0, {0.3, 0.1, 0.5, 0.2, 0.3}), 0.2);
}

TEST(Eta, PerfectCorrelationCancels) {
    EXPECT_DOUBLE_EQ(eta(0.5, {0.3, 0.1, 0.5, 0.25, 1.0}), 0.0);
}

TEST(Eta, IndependentDriversAddInQuadrature) {
    // 0.25^2 + 0.2^2 = 0.1025
    EXPECT_NEAR(eta(0.5, {0.3, 0.1, 0.5, 0.2, 0.0}), 0.3201562118716424, 1e-15);
}

TEST(Eta, ZeroZetaIsExactlySigmaX) {
    const EpidemicParams p{0.3, 0.1, 0.37, 0.0, -0.6};
    for (double x = 0.0; x <= 1.0; x += 0.01) EXPECT_EQ(eta(x, p), p.sigma * x);
}

TEST(Eta, NonnegativeOverRandomParams) {
    std::mt19937_64 gen(20200317);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 20000; ++trial) {
        const EpidemicParams p{0.3, 0.1, 2.0 * unit(gen), 2.0 * unit(gen), 2.0 * unit(gen) - 1.0};
        const double x = unit(gen);
        const double e = eta(x, p);
        ASSERT_GE(e, 0.0);
        ASSERT_TRUE(std::isfinite(e));
        EXPECT_NEAR(e * e, infected_log_variance(x, p, Model::TwoFactor), 1e-12);
    }
    EXPECT_GE(eta(0.5, {0.3, 0.1, 0.4, 0.2, 1.0}), 0.0);
    EXPECT_GE(eta(0.5, {0.3, 0.1, 0.4, 0.2, -1.0}), 0.0);
}

TEST(Payoff, CallAndPutValues) {
    EXPECT_DOUBLE_EQ(payoff({OptionKind::Call, 0.1, 1.0}, 0.3), 0.2);
    EXPECT_EQ(payoff({OptionKind::Call, 0.1, 1.0}, 0.05), 0.0);
    EXPECT_DOUBLE_EQ(payoff({OptionKind::Put, 0.1, 1.0}, 0.05), 0.05);
}

TEST(Payoff, ParityAndBoundsOverGrid) {
    for (double k = 0.0; k <= 1.0; k += 0.05) {
        const OptionTerms call{OptionKind::Call, k, 1.0};
        const OptionTerms put{OptionKind::Put, k, 1.0};
        for (double y = 0.0; y <= 1.0; y += 0.01) {
            EXPECT_NEAR(payoff(call, y) - payoff(put, y), y - k, 1e-15);
            EXPECT_GE(payoff(call, y), 0.0);
            EXPECT_LE(payoff(call, y), 1.0);
            EXPECT_GE(payoff(put, y), 0.0);
            EXPECT_LE(payoff(put, y), 1.0);
        }
    }
}

TEST(ErrorKinds, NamesAreStable) {
    EXPECT_STREQ(to_string(ErrorKind::StepCountTooSmall), "StepCountTooSmall");
    EXPECT_EQ(to_string(Model::TwoFactor), "two_factor");
    EXPECT_EQ(to_string(OptionKind::Put), "put");
}
