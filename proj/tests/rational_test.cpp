#include "matchdist/high_precision.hpp"
#include "matchdist/rational.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

using namespace matchdist;

TEST(ParseRational, DecimalsAreExact) {
    EXPECT_EQ(parse_rational("0.1"), Rational(1, 10));
    EXPECT_EQ(parse_rational("0.5"), Rational(1, 2));
    EXPECT_EQ(parse_rational("-2.25"), Rational(-9, 4));
    EXPECT_EQ(parse_rational(".75"), Rational(3, 4));
    EXPECT_EQ(parse_rational("3."), Rational(3));
    EXPECT_EQ(parse_rational("+7"), Rational(7));
}

TEST(ParseRational, LeadingZerosAreDecimal) {
    EXPECT_EQ(parse_rational("0.09"), Rational(9, 100));
    EXPECT_EQ(parse_rational("010"), Rational(10));
    EXPECT_EQ(parse_rational("010/03"), Rational(10, 3));
    EXPECT_EQ(parse_rational("0.0189"), Rational(189, 10000));
}

TEST(ParseRational, Fractions) {
    EXPECT_EQ(parse_rational("1/2"), Rational(1, 2));
    EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
    EXPECT_EQ(parse_rational("-9/10"), Rational(-9, 10));
}

TEST(ParseRational, RejectsInexactOrMalformedInput) {
    for (const char* bad : {"", "-", "1e-3", "2E5", "0x10", "1/0", "1/", "/2", "1.2.3", " 1", "1 ", "nan", "."}) {
        EXPECT_THROW(parse_rational(bad), std::invalid_argument) << bad;
    }
}

TEST(FractionString, OmitsUnitDenominator) {
    EXPECT_EQ(to_fraction_string(Rational(5, 8)), "5/8");
    EXPECT_EQ(to_fraction_string(Rational(-3)), "-3");
    EXPECT_EQ(to_fraction_string(Rational(0)), "0");
}

TEST(IntegerHelpers, FactorialAndBinomial) {
    EXPECT_EQ(factorial(0), 1);
    EXPECT_EQ(factorial(10), 3628800);
    EXPECT_EQ(binomial(10, 3), 120);
    EXPECT_EQ(binomial(3, 5), 0);
    EXPECT_EQ(pow(Rational(-2, 3), 3), Rational(-8, 27));
    EXPECT_EQ(pow(Rational(7, 5), 0), Rational(1));
}

TEST(FloorLog2, BracketsValue) {
    EXPECT_EQ(floor_log2(Rational(1)), 0);
    EXPECT_EQ(floor_log2(Rational(3, 2)), 0);
    EXPECT_EQ(floor_log2(Rational(1, 2)), -1);
    EXPECT_EQ(floor_log2(Rational(1, 3)), -2);
    EXPECT_EQ(floor_log2(Rational(-1024)), 10);
    EXPECT_THROW(floor_log2(Rational(0)), std::domain_error);
}

TEST(FormatDecimal, CorrectlyRoundedSignificantDigits) {
    EXPECT_EQ(format_decimal(Rational(5, 8), 15), "0.625");
    EXPECT_EQ(format_decimal(Rational(2, 3), 4), "0.6667");
    EXPECT_EQ(format_decimal(Rational(-1, 3), 3), "-0.333");
    EXPECT_EQ(format_decimal(Rational(19, 3), 5), "6.3333");
    EXPECT_EQ(format_decimal(Rational(999999, 1000000), 3), "1");
    EXPECT_EQ(format_decimal(Rational(1, 200), 1), "0.005");
    EXPECT_EQ(format_decimal(Rational(25, 1000), 1), "0.03");  // half away from zero
    EXPECT_EQ(format_decimal(Rational(123456), 2), "120000");
    EXPECT_EQ(format_decimal(Rational(1, 3000000), 3), "3.33e-7");
    EXPECT_EQ(format_decimal(Rational(0), 5), "0");
}
