#include <gtest/gtest.h>

#include "reluriesz/coeff_io.hpp"
#include "reluriesz/errors.hpp"
#include "reluriesz/rng.hpp"

using namespace reluriesz;

TEST(CoeffIo, RoundTripIsExact) {
  Rng rng(1);
  RieszCoeffs g(3, rng.normal());
  g.add(MultiIndex{1, 0, -2}, rng.normal(), rng.normal());
  g.add(MultiIndex{0, 0, 5}, 1.0 / 3.0, -0.0);
  const auto text = to_json(g);
  const auto back = parse_riesz_coeffs(text);
  EXPECT_EQ(back, g);
  EXPECT_EQ(to_json(back), text);

  FourierCoeffs f(1, 2.5);
  f.add(MultiIndex{4}, 0.1, 0.2);
  EXPECT_EQ(parse_fourier_coeffs(to_json(f)), f);
  EXPECT_TRUE(std::holds_alternative<FourierCoeffs>(parse_coeffs(to_json(f))));
}

TEST(CoeffIo, Errors) {
  EXPECT_THROW(parse_coeffs("{\"dim\": 1, \"a0\": 0, \"terms\": ["), ParseError);
  EXPECT_THROW(parse_coeffs("{\"dim\": 1, \"terms\": []}"), ParseError);
  EXPECT_THROW(parse_coeffs("{\"dim\": 1, \"a0\": 0, \"alpha0\": 1, \"terms\": []}"), ParseError);
  EXPECT_THROW(parse_coeffs("{\"dim\": 2, \"a0\": 0, \"terms\": [{\"k\": [1], \"c\": 1}]}"), DimensionError);
  EXPECT_THROW(parse_coeffs("{\"dim\": 1, \"a0\": 0, \"terms\": [{\"k\": [-1], \"c\": 1}]}"), DomainError);
  EXPECT_THROW(parse_coeffs("{\"dim\": 1, \"a0\": 0, \"terms\": [{\"k\": [1], \"c\": \"x\"}]}"), ParseError);
  EXPECT_THROW(parse_coeffs("{\"dim\": 1, \"a0\": 0, \"terms\": [{\"k\": [1]}, {\"k\": [1]}]}"), ParseError);
  EXPECT_THROW(parse_riesz_coeffs("{\"dim\": 1, \"a0\": 0, \"terms\": []}"), ParseError);
  try {
    parse_coeffs("{\"dim\": 1, \"a0\": 0, \"terms\": [{\"k\": [1], \"c\": 1}, {\"c\": 1}]}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("$.terms[1]"), std::string::npos);
  }
}
