#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "qcsym/quadratic.hpp"

namespace qcsym {
namespace {

const MetallicMean kMeans[] = {MetallicMean::rho(), MetallicMean::tau(), MetallicMean::eta()};

MeanBasis power_in_mean_basis(const MetallicMean& m, int n) { return to_mean_basis(m, metallic_power(m, n)); }

TEST(MetallicMean, MinimalPolynomials) {
    EXPECT_EQ(MetallicMean::rho().p, 2);
    EXPECT_EQ(MetallicMean::rho().q, 1);
    EXPECT_EQ(MetallicMean::tau().p, 1);
    EXPECT_EQ(MetallicMean::tau().q, 1);
    EXPECT_EQ(MetallicMean::eta().p, 2);
    EXPECT_EQ(MetallicMean::eta().q, 2);
    for (const auto& m : kMeans) {
        const double x = m.value();
        EXPECT_NEAR(x * x, m.p * x + m.q, 1e-12) << m.name();
    }
}

TEST(MetallicPower, TauSixth) {
    EXPECT_EQ(power_in_mean_basis(MetallicMean::tau(), 6), (MeanBasis{8, 5}));
}

TEST(MetallicPower, RhoCubed) {
    EXPECT_EQ(power_in_mean_basis(MetallicMean::rho(), 3), (MeanBasis{5, 2}));
}

TEST(MetallicPower, ZerothPowerIsOne) {
    for (const auto& m : kMeans) EXPECT_EQ(power_in_mean_basis(m, 0), (MeanBasis{0, 1}));
    EXPECT_EQ(metallic_power(MetallicMean::eta(), 0), QuadraticInteger::one(3));
}

TEST(MetallicPower, TauInverse) {
    EXPECT_EQ(power_in_mean_basis(MetallicMean::tau(), -1), (MeanBasis{1, -1}));
}

TEST(MetallicPower, EtaHasNoInverse) {
    EXPECT_THROW(metallic_power(MetallicMean::eta(), -1), Error);
    try {
        metallic_power(MetallicMean::eta(), -3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("not a unit"), std::string::npos);
    }
}

TEST(MetallicPower, RecurrenceHoldsComponentwise) {
    for (const auto& m : kMeans) {
        for (int n = 0; n <= 30; ++n) {
            const auto a = power_in_mean_basis(m, n + 2);
            const auto b = power_in_mean_basis(m, n + 1);
            const auto c = power_in_mean_basis(m, n);
            EXPECT_EQ(a.mean_coeff, m.p * b.mean_coeff + m.q * c.mean_coeff) << m.name() << " n=" << n;
            EXPECT_EQ(a.unit_coeff, m.p * b.unit_coeff + m.q * c.unit_coeff) << m.name() << " n=" << n;
        }
    }
}

TEST(MetallicPower, EmbeddingMatchesFloatingPower) {
    for (const auto& m : kMeans) {
        for (int n = 0; n <= 20; ++n) {
            const double expected = std::pow(m.value(), n);
            EXPECT_LT(std::abs(metallic_power(m, n).embed() - expected), 1e-9 * expected) << m.name() << " n=" << n;
        }
    }
}

TEST(MetallicPower, UnitProperty) {
    for (const auto& m : {MetallicMean::rho(), MetallicMean::tau()}) {
        for (int n = 0; n <= 25; ++n) {
            EXPECT_EQ(metallic_power(m, n) * metallic_power(m, -n), QuadraticInteger::one(m.base())) << m.name() << " n=" << n;
        }
    }
    for (int n = 1; n <= 5; ++n) EXPECT_THROW(metallic_power(MetallicMean::eta(), -n), Error);
}

TEST(MetallicPower, OverflowIsReported) { EXPECT_THROW(metallic_power(MetallicMean::rho(), 200), Error); }

TEST(RecurrenceSequence, Fibonacci) {
    EXPECT_EQ(recurrence_sequence(MetallicMean::tau(), 8), (std::vector<std::int64_t>{0, 1, 1, 2, 3, 5, 8, 13}));
}

TEST(RecurrenceSequence, Pell) {
    EXPECT_EQ(recurrence_sequence(MetallicMean::rho(), 6), (std::vector<std::int64_t>{0, 1, 2, 5, 12, 29}));
}

TEST(RecurrenceSequence, Bronze) {
    EXPECT_EQ(recurrence_sequence(MetallicMean::eta(), 6), (std::vector<std::int64_t>{0, 1, 2, 6, 16, 44}));
}

TEST(RecurrenceSequence, EmptyAndMatchesPowerCoefficients) {
    EXPECT_TRUE(recurrence_sequence(MetallicMean::tau(), 0).empty());
    for (const auto& m : kMeans) {
        const auto seq = recurrence_sequence(m, 15);
        for (int n = 0; n < 15; ++n) EXPECT_EQ(seq[static_cast<std::size_t>(n)], power_in_mean_basis(m, n).mean_coeff);
    }
}

TEST(QuadMul, RhoSquared) {
    const QuadraticInteger rho{1, 1, 2};
    EXPECT_EQ(quad_mul(rho, rho), (QuadraticInteger{2, 3, 2}));
}

TEST(QuadMul, EtaSquared) {
    const QuadraticInteger eta{1, 1, 3};
    EXPECT_EQ(quad_mul(eta, eta), (QuadraticInteger{2, 4, 3}));
}

TEST(QuadMul, IdentityAndMismatch) {
    const QuadraticInteger x{-7, 4, 5};
    EXPECT_EQ(quad_mul(x, QuadraticInteger::one(5)), x);
    EXPECT_THROW(quad_mul(QuadraticInteger{1, 1, 2}, QuadraticInteger{1, 1, 3}), Error);
}

TEST(QuadMul, NormIsMultiplicative) {
    for (int d : {2, 3, 5}) {
        for (std::int64_t a = -4; a <= 4; ++a)
            for (std::int64_t b = -4; b <= 4; ++b)
                for (std::int64_t c = -3; c <= 3; ++c) {
                    const QuadraticInteger x{a, b, d}, y{c, a - b, d};
                    EXPECT_EQ(quad_norm(x * y), quad_norm(x) * quad_norm(y));
                    EXPECT_NEAR((x * y).embed(), x.embed() * y.embed(), 1e-9);
                }
    }
    EXPECT_EQ(quad_norm(MetallicMean::eta().element()), -2);
    EXPECT_EQ(quad_norm(MetallicMean::rho().element()), -1);
    EXPECT_EQ(quad_norm(MetallicMean::tau().element()), -1);
}

TEST(EulerPhi, Values) {
    EXPECT_EQ(euler_phi(14), 6);
    EXPECT_EQ(euler_phi(16), 8);
    EXPECT_EQ(euler_phi(18), 6);
    EXPECT_EQ(euler_phi(1), 1);
    EXPECT_THROW(euler_phi(0), Error);
}

TEST(EulerPhi, AgreesWithGcdCount) {
    for (std::int64_t n = 1; n <= 200; ++n) {
        std::int64_t count = 0;
        for (std::int64_t k = 1; k <= n; ++k) {
            std::int64_t a = n, b = k;
            while (b) {
                a %= b;
                std::swap(a, b);
            }
            if (a == 1) ++count;
        }
        EXPECT_EQ(euler_phi(n), count) << n;
    }
}

} // namespace
} // namespace qcsym
