#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "smprod/jeval.hpp"

using smprod::Ball;
using smprod::ComplexBall;
using smprod::Discriminant;
using smprod::FundamentalPoint;

namespace {

// j = E4^3 / Delta with Delta = q prod (1 - q^n)^24, straight from the product formula in
// ball arithmetic; truncation is left to the caller's tolerance.
ComplexBall j_from_product(const ComplexBall& z, mpfr_prec_t prec) {
    const ComplexBall q = smprod::q_of(z, prec);
    ComplexBall prod(Ball(1, prec), Ball(0, prec));
    ComplexBall qn = q;
    ComplexBall e4(Ball(1, prec), Ball(0, prec));
    for (long n = 1; n <= 400; ++n) {
        const ComplexBall one_minus = ComplexBall(Ball(1, prec), Ball(0, prec)) - qn;
        prod = prod * one_minus;
        long sigma3 = 0;
        for (long d = 1; d <= n; ++d) {
            if (n % d == 0) sigma3 += d * d * d;
        }
        e4 = e4 + qn * (240 * sigma3);
        qn = qn * q;
    }
    const ComplexBall delta = q * smprod::pow(prod, 24);
    return smprod::pow(e4, 3) / delta;
}

double rel_diff(const ComplexBall& a, const ComplexBall& b) {
    const std::complex<double> x(a.re.mid_double(), a.im.mid_double()), y(b.re.mid_double(), b.im.mid_double());
    return std::abs(x - y) / std::max(1.0, std::abs(y));
}

}  // namespace

TEST(JEval, RationalSingularModuliAreContained) {
    struct Case {
        long d;
        long j;
    };
    for (const Case c : {Case{-4, 1728}, Case{-7, -3375}, Case{-8, 8000}, Case{-11, -32768}, Case{-12, 54000},
                         Case{-16, 287496}, Case{-19, -884736}, Case{-27, -12288000}, Case{-28, 16581375},
                         Case{-43, -884736000}, Case{-67, -147197952000}}) {
        const Discriminant d(c.d);
        const auto j = smprod::eval_j(FundamentalPoint::from_form(d, smprod::enumerate_forms(d).front()), 128);
        EXPECT_TRUE(j.re.contains(mpz_class(c.j))) << c.d << " " << j.to_string();
        EXPECT_TRUE(j.im.contains_zero());
    }
    const Discriminant d163(-163);
    const auto j163 = smprod::eval_j(FundamentalPoint::from_form(d163, {1, 1, 41}), 128);
    EXPECT_TRUE(j163.re.contains(mpz_class("-262537412640768000")));
    EXPECT_FALSE(j163.re.contains(mpz_class("-262537412640767999")));
}

TEST(JEval, SpecialPoints) {
    const auto ji = smprod::eval_j(FundamentalPoint::i(), 200);
    EXPECT_TRUE(ji.re.contains(mpz_class(1728)));
    EXPECT_TRUE(ji.im.contains_zero());
    const auto jz = smprod::eval_j(FundamentalPoint::zeta6(), 200);
    EXPECT_TRUE(jz.contains_zero());
}

TEST(JEval, MeetsRequestedAccuracy) {
    for (mpfr_prec_t prec : {64, 128, 512}) {
        const auto j = smprod::eval_j(FundamentalPoint::from_rationals(mpq_class(1, 7), mpq_class(13, 10)), prec);
        EXPECT_TRUE(smprod::detail::meets_accuracy(j, prec));
    }
    const auto tall = smprod::eval_j(FundamentalPoint::from_rationals(0, 40), 128);
    EXPECT_TRUE(smprod::detail::meets_accuracy(tall, 128));
}

TEST(JEval, RejectsBadInput) {
    EXPECT_THROW(FundamentalPoint::from_rationals(0, mpq_class(1, 2)), smprod::outside_domain);
    EXPECT_THROW(FundamentalPoint::from_rationals(mpq_class(3, 4), 2), smprod::outside_domain);
    EXPECT_THROW(FundamentalPoint::from_rationals(0, 0), smprod::outside_domain);
    EXPECT_THROW(smprod::eval_j(FundamentalPoint::i(), 32), smprod::invalid_argument);
    EXPECT_THROW(FundamentalPoint::from_form(Discriminant(-15), {1, 0, 4}), smprod::invalid_argument);
}

TEST(JEval, HalfOfTheDomain) {
    EXPECT_EQ(FundamentalPoint::from_rationals(mpq_class(1, 4), 2).half(), smprod::Half::plus);
    EXPECT_EQ(FundamentalPoint::from_rationals(mpq_class(-1, 4), 2).half(), smprod::Half::minus);
    EXPECT_EQ(FundamentalPoint::i().half(), smprod::Half::boundary);
}

TEST(JEvalOracle, AgreesWithProductFormula) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.87, 3.0);
    for (int t = 0; t < 40; ++t) {
        const double x = re(rng), y = std::max(im(rng), std::sqrt(1.0 - x * x) + 1e-9);
        const auto z = FundamentalPoint::from_doubles(x, y);
        const auto a = smprod::eval_j(z, 128);
        const auto b = j_from_product(z.at(256), 256);
        EXPECT_LT(rel_diff(a, b), 1e-25) << x << " " << y;
    }
}

TEST(JEvalProperty, InvariantUnderModularTransformations) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.9, 2.5);
    for (int t = 0; t < 100; ++t) {
        const double x = re(rng), y = std::max(im(rng), std::sqrt(1.0 - x * x) + 1e-6);
        const auto z = FundamentalPoint::from_doubles(x, y);
        const ComplexBall zb = z.at(400);
        // z -> -1/(z + 3), then back into the domain
        const ComplexBall one(Ball(1, 400), Ball(0, 400));
        const ComplexBall moved = -(one / (zb + 3));
        const ComplexBall back = smprod::reduce_to_fundamental_domain(moved);
        const auto j1 = smprod::eval_j(z, 128);
        const auto j2 = smprod::eval_j(FundamentalPoint::from_ball(back), 128);
        EXPECT_TRUE(j1.overlaps(j2)) << j1.to_string() << " vs " << j2.to_string();
    }
}

TEST(JEvalProperty, QApproximationBound) {
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.866, 50.0);
    const Ball limit(2079, 64);
    for (int t = 0; t < 1000; ++t) {
        const double x = re(rng), y = std::max(im(rng), std::sqrt(1.0 - x * x) + 1e-12);
        const Ball r = smprod::check_q_approx(FundamentalPoint::from_doubles(x, y));
        ASSERT_TRUE(smprod::certainly_less_equal(r, limit)) << x << " " << y << " " << r.to_string();
    }
}

TEST(JEvalProperty, QApproximationValues) {
    const Ball at_i = smprod::check_q_approx(FundamentalPoint::i());
    // |1728 - e^{2 pi}| = 1192.50830...
    EXPECT_NEAR(at_i.mid_double(), 1728 - std::exp(2 * M_PI), 1e-9);
    EXPECT_NEAR(smprod::check_q_approx(FundamentalPoint::from_rationals(0, 50)).mid_double(), 744.0, 1e-6);
}

TEST(JEvalProperty, NearZeta6CubeEnvelope) {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> theta(M_PI / 2, 5 * M_PI / 6), logd(std::log(1e-6), std::log(1e-3));
    for (int t = 0; t < 200; ++t) {
        const double th = theta(rng), d = std::exp(logd(rng)) * 0.999;
        const double x = 0.5 + d * std::cos(th), y = std::sqrt(3.0) / 2 + d * std::sin(th);
        const auto z = FundamentalPoint::from_doubles(x, y);
        const auto c = smprod::check_near_zeta6(z);
        ASSERT_EQ(c.regime, smprod::Zeta6Regime::near);
        ASSERT_TRUE(c.holds) << "theta=" << th << " d=" << d << " |j|=" << c.abs_j.to_string();
    }
}

TEST(JEvalProperty, FarFromZeta6FloorHolds) {
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> re(0.0, 0.5), im(0.866, 3.0);
    int done = 0;
    while (done < 200) {
        const double x = re(rng), y = im(rng);
        if (x * x + y * y < 1.0) continue;
        if (std::hypot(x - 0.5, y - std::sqrt(3.0) / 2) < 1.01e-3) continue;
        const auto c = smprod::check_near_zeta6(FundamentalPoint::from_doubles(x, y));
        ASSERT_EQ(c.regime, smprod::Zeta6Regime::far);
        ASSERT_TRUE(c.holds) << x << " " << y;
        ++done;
    }
}

TEST(JEvalNearZeta6, RejectsMinusHalf) {
    EXPECT_THROW(smprod::check_near_zeta6(FundamentalPoint::from_rationals(mpq_class(-1, 4), 2)), smprod::invalid_argument);
}

TEST(ThirdDerivative, ClosedForm) {
    const auto d3 = smprod::third_derivative_at_zeta6(128);
    EXPECT_TRUE(d3.re.contains_zero());
    EXPECT_NEAR(d3.im.mid_double(), -274470.48387618745647, 1e-9);
    EXPECT_NEAR(std::abs(d3.im.mid_double()) / 6, 45745.08, 1e-2);
}

// j(zeta6 + h) / h^3 -> j'''(zeta6) / 6, with one Richardson step to cancel the O(h) term.
TEST(ThirdDerivative, FiniteDifferenceOracle) {
    const mpfr_prec_t prec = 400;
    auto quotient = [&](const mpq_class& h) {
        // step along the imaginary axis direction, which stays inside the domain
        const auto z = FundamentalPoint::from_surds(smprod::QuadraticSurd::of(mpq_class(1, 2)),
                                                    smprod::QuadraticSurd{h, mpq_class(1, 2), 3});
        const auto j = smprod::eval_j(z, prec);
        const ComplexBall ih(Ball(0, prec), Ball::from_rational(h, prec));
        return j / smprod::pow(ih, 3);
    };
    const mpq_class h(1, 100000000);
    const ComplexBall f1 = quotient(h);
    const ComplexBall f2 = quotient(h / 2);
    const ComplexBall rich = f2 * 2 - f1;
    const auto closed = smprod::third_derivative_at_zeta6(128);
    EXPECT_NEAR(rich.re.mid_double(), 0.0, 1e-3);
    EXPECT_NEAR(rich.im.mid_double() * 6, closed.im.mid_double(), 1e-2);
}

TEST(Schwarz, CoefficientBelow761000) {
    const double r = std::sqrt(3.0) / 4;
    const double c = smprod::schwarz_coefficient(45745.08, r, 23000.0, 3);
    EXPECT_LT(c, 761000.0);
    EXPECT_GT(c, 759000.0);
    const mpfr_prec_t p = 128;
    const Ball a = abs(smprod::third_derivative_at_zeta6(p).im) / 6;
    const Ball cb = smprod::schwarz_coefficient(a, sqrt(Ball(3, p)) / 4, Ball(23000, p), 3);
    EXPECT_TRUE(smprod::certainly_less(cb, Ball(761000, p)));
    EXPECT_THROW(smprod::schwarz_coefficient(1.0, 0.0, 1.0, 3), smprod::invalid_argument);
}
