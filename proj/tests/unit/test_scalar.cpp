#include <gtest/gtest.h>

#include "gbdef/error.hpp"
#include "gbdef/scalar.hpp"

using namespace gbdef;

TEST(Scalar, RationalsStayCanonical) {
  Scalar a = Scalar::rational(6, -4);
  EXPECT_EQ(a.to_string(), "-3/2");
  EXPECT_EQ((a + Scalar::rational(3, 2)).to_string(), "0");
  EXPECT_TRUE((a * a.inverse()).is_one());
}

TEST(Scalar, ResiduesReduceModP) {
  Field f = Field::prime(7);
  Scalar a = f.from_int(-1);
  EXPECT_EQ(a.as_residue(), 6u);
  EXPECT_EQ((a * a).as_residue(), 1u);
  EXPECT_EQ(f.from_int(3).inverse().as_residue(), 5u);
  EXPECT_TRUE((f.from_int(5) + f.from_int(2)).is_zero());
}

TEST(Scalar, LargePrimeArithmetic) {
  Field f = Field::prime(18446744073709551557ULL);  // largest 64-bit prime
  Scalar a = f.from_int(-2);
  EXPECT_TRUE((a * a.inverse()).is_one());
  EXPECT_EQ((a * a).as_residue(), 4u);
}

TEST(Scalar, MixingFieldsThrows) {
  EXPECT_THROW(Scalar::rational(1) + Scalar::residue(1, 5), FieldMismatch);
  EXPECT_THROW(Scalar::residue(1, 5) * Scalar::residue(1, 7), FieldMismatch);
}

TEST(Scalar, NonPrimeModulusRejected) {
  EXPECT_THROW(Field::prime(6), InvalidArgument);
  EXPECT_THROW(Field::prime(1), InvalidArgument);
  EXPECT_NO_THROW(Field::prime(2));
}

TEST(Scalar, ParsesTextSyntax) {
  EXPECT_EQ(parse_scalar("-7/21", Field::rational()), Scalar::rational(-1, 3));
  EXPECT_EQ(parse_scalar("4", Field::prime(5)).as_residue(), 4u);
  for (const char* bad : {"", "1/0", "1/-2", "--1", "a", "1.5"}) {
    EXPECT_THROW(parse_scalar(bad, Field::rational()), ParseError) << bad;
  }
  EXPECT_THROW(parse_scalar("5", Field::prime(5)), ParseError);
  EXPECT_THROW(parse_scalar("-1", Field::prime(5)), ParseError);
}
