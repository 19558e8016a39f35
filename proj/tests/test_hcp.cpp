#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "smprod/hcp.hpp"
#include "test_support.hpp"

using smprod::Discriminant;
using smprod::HilbertClassPoly;
using smprod::RatioEntry;

TEST(Hcp, LinearPolynomialsFromRationalModuli) {
    for (const auto& row : test_support::read_table(test_support::golden("table1.txt"))) {
        const HilbertClassPoly p = smprod::hilbert_class_poly(Discriminant(std::stol(row[0])));
        ASSERT_EQ(p.degree(), 1);
        EXPECT_EQ(mpz_class(-p.coefficient(0)).get_str(), row[1]);
    }
}

TEST(Hcp, Table2PolynomialsExactly) {
    const auto rows = test_support::read_table(test_support::golden("table2.txt"));
    ASSERT_EQ(rows.size(), 29u);
    for (const auto& row : rows) {
        const HilbertClassPoly p = smprod::hilbert_class_poly(Discriminant(std::stol(row[0])));
        EXPECT_EQ(p.to_string(), row[1]) << row[0];
    }
}

TEST(Hcp, DiscriminantMinus23) {
    const HilbertClassPoly p = smprod::hilbert_class_poly(Discriminant(-23));
    EXPECT_EQ(p.coeffs, (std::vector<mpz_class>{mpz_class("12771880859375"), mpz_class("-5151296875"), 3491750}));
    EXPECT_EQ(p.to_string(), "x^3 + 3491750x^2 - 5151296875x + 12771880859375");
    const auto v = smprod::verify_hilbert_poly(p);
    EXPECT_TRUE(v.ok());
    EXPECT_TRUE(v.irreducibility_checked);
    EXPECT_TRUE(v.irreducible);
}

TEST(Hcp, RequiredPrecisionCoversCoefficients) {
    EXPECT_GE(smprod::required_precision(Discriminant(-4)), 51);
    EXPECT_GE(smprod::required_precision(Discriminant(-427)), 134);
    const HilbertClassPoly p = smprod::hilbert_class_poly(Discriminant(-427));
    const auto bits = static_cast<long>(mpz_sizeinbase(p.coefficient(0).get_mpz_t(), 2));
    EXPECT_GE(smprod::required_precision(Discriminant(-427)), bits + 40);
}

TEST(Hcp, StableUnderDoubledPrecision) {
    for (long d : {-23L, -47L, -96L, -104L, -231L, -299L}) {
        const Discriminant disc(d);
        const HilbertClassPoly p = smprod::hilbert_class_poly(disc);
        const mpfr_prec_t prec = 2 * smprod::required_precision(disc);
        const auto poly = smprod::expand_from_roots(smprod::conjugate_roots(disc, prec), prec + 32);
        for (int i = 0; i < p.degree(); ++i) {
            const auto r = smprod::round_coefficient(poly[static_cast<std::size_t>(i)]);
            ASSERT_TRUE(r.ok);
            EXPECT_EQ(r.value, p.coefficient(i)) << d << " a_" << i;
        }
    }
}

TEST(HcpProperty, RootsVanishAndResidualsAreTiny) {
    double worst = 0;
    for (long n = 3; n <= 300; ++n) {
        if (!Discriminant::is_valid(-n)) continue;
        const Discriminant d(-n);
        smprod::HcpBuildReport report;
        const HilbertClassPoly p = smprod::hilbert_class_poly(d, &report);
        ASSERT_EQ(p.degree(), smprod::class_number(d));
        worst = std::max(worst, report.max_residual);
        const auto roots = smprod::conjugate_roots(d, smprod::required_precision(d));
        for (const auto& r : roots) ASSERT_TRUE(smprod::evaluate(p, r).contains_zero()) << -n;
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(HcpVerify, DetectsTampering) {
    HilbertClassPoly p = smprod::hilbert_class_poly(Discriminant(-15));
    EXPECT_TRUE(smprod::verify_hilbert_poly(p).ok());
    p.coeffs[1] += 1;
    const auto v = smprod::verify_hilbert_poly(p);
    EXPECT_TRUE(v.degree_matches);
    EXPECT_FALSE(v.roots_vanish);
    EXPECT_FALSE(v.ok());
    HilbertClassPoly wrong_degree{Discriminant(-15), {mpz_class(5)}};
    EXPECT_FALSE(smprod::verify_hilbert_poly(wrong_degree).degree_matches);
}

TEST(HcpVerify, IrreducibilityForSmallDegrees) {
    for (long d : {-15L, -23L, -56L, -96L, -39L}) {
        const auto v = smprod::verify_hilbert_poly(smprod::hilbert_class_poly(Discriminant(d)));
        EXPECT_TRUE(v.irreducibility_checked) << d;
        EXPECT_TRUE(v.irreducible) << d;
    }
    EXPECT_FALSE(smprod::verify_hilbert_poly(smprod::hilbert_class_poly(Discriminant(-87))).irreducibility_checked);
}

TEST(Ratio, MinusFifteen) {
    const auto r = smprod::ratio_vector(smprod::hilbert_class_poly(Discriminant(-15)));
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].kind, RatioEntry::Kind::finite);
    mpq_class expected(mpz_class(-121287375), mpz_class(191025) * 191025);
    expected.canonicalize();
    EXPECT_EQ(r[0].value, expected);
    EXPECT_EQ(smprod::scientific(r[0].value), "-3.32e-03");
    const auto r427 = smprod::ratio_vector(smprod::hilbert_class_poly(Discriminant(-427)));
    EXPECT_EQ(smprod::scientific(r427[0].value), "6.36e-25");
}

TEST(Ratio, ZeroDenominatorTags) {
    const HilbertClassPoly p{Discriminant(-15), {mpz_class(5), mpz_class(0)}};
    EXPECT_EQ(smprod::ratio_vector(p)[0].kind, RatioEntry::Kind::infinite);
    EXPECT_EQ(smprod::ratio_vector(p)[0].to_string(), "INFINITE");
    const HilbertClassPoly cube{Discriminant(-23), {mpz_class(0), mpz_class(0), mpz_class(0)}};
    const auto r = smprod::ratio_vector(cube);
    EXPECT_EQ(r[0].kind, RatioEntry::Kind::indeterminate);
    EXPECT_EQ(r[1].kind, RatioEntry::Kind::indeterminate);
    EXPECT_THROW(smprod::ratio_vector(smprod::hilbert_class_poly(Discriminant(-4))), smprod::invalid_argument);
}

TEST(Ratio, ProductCompatibility) {
    const auto h15 = smprod::hilbert_class_poly(Discriminant(-15));
    const auto h20 = smprod::hilbert_class_poly(Discriminant(-20));
    EXPECT_FALSE(smprod::product_compatible(h15, h20));
    EXPECT_TRUE(smprod::product_compatible(h15, h15));
    const auto h96 = smprod::hilbert_class_poly(Discriminant(-96));
    ASSERT_EQ(h96.degree(), 4);
    EXPECT_FALSE(smprod::product_compatible(h96, h96));
    EXPECT_THROW(smprod::product_compatible(h15, h96), smprod::degree_mismatch);
}

// For a genuine pairing the identity holds: q(x) = prod (x - A / r_k) for the roots r_k of p.
TEST(Ratio, IdentityHoldsForConstructedPairing) {
    // p = (x - 2)(x - 3)(x - 7), A = 42: roots of q are 21, 14, 6
    const HilbertClassPoly p{Discriminant(-23), {mpz_class(-42), mpz_class(41), mpz_class(-12)}};
    const HilbertClassPoly q{Discriminant(-23), {mpz_class(-1764), mpz_class(504), mpz_class(-41)}};
    EXPECT_TRUE(smprod::product_compatible(p, q));
}
