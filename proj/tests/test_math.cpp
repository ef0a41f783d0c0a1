#include <doctest.h>

#include <cmath>

#include "htga/math.hpp"

using namespace htga;

TEST_SUITE_BEGIN("math");

TEST_CASE("log_choose matches integer binomials") {
  CHECK(log_choose(10, 3) == doctest::Approx(std::log(120.0)).epsilon(1e-14));
  CHECK(log_choose(4, 2) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
  CHECK(log_choose(7, 0) == 0.0);
  CHECK(log_choose(7, 7) == 0.0);
  CHECK(log_choose(5, 6) == kNegInf);
  CHECK(log_choose(5, -1) == kNegInf);
}

TEST_CASE("log1mexp at both scales") {
  CHECK(log1mexp(-1e-12) == doctest::Approx(std::log(1e-12)).epsilon(1e-9));
  CHECK(log1mexp(-50.0) == doctest::Approx(-std::exp(-50.0)).epsilon(1e-9));
  CHECK(log1mexp(0.0) == kNegInf);
}

TEST_CASE("one_minus_pow1m against direct evaluation") {
  CHECK(one_minus_pow1m(0.25, 3) == doctest::Approx(1.0 - 0.75 * 0.75 * 0.75).epsilon(1e-15));
  CHECK(one_minus_pow1m(1e-12, 1e6) == doctest::Approx(1e-6).epsilon(1e-5));
  CHECK(one_minus_pow1m(0.0, 10) == 0.0);
  CHECK(one_minus_pow1m(1.0, 10) == 1.0);
}

TEST_CASE("gamma_q reference values") {
  // Q(1, x) = exp(-x); Q(1/2, x) = erfc(sqrt(x)).
  CHECK(gamma_q(1.0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(gamma_q(0.5, 1.0) == doctest::Approx(std::erfc(1.0)).epsilon(1e-12));
  CHECK(gamma_q(5.0, 0.0) == 1.0);
  // chi-square with 4 df at its mean: p = exp(-2)*(1+2) = 0.40600585...
  CHECK(chi_square_p_value(4.0, 4.0) == doctest::Approx(std::exp(-2.0) * 3.0).epsilon(1e-12));
}

TEST_CASE("log-sum-exp accumulator") {
  LogSumExp acc;
  acc.add(std::log(0.25));
  acc.add(std::log(0.5));
  acc.add(std::log(0.25));
  CHECK(acc.value() == doctest::Approx(0.0).epsilon(1e-14));
  LogSumExp wide;
  wide.add(-1000.0);
  wide.add(-1100.0);
  CHECK(wide.value() == doctest::Approx(-1000.0 + std::log1p(std::exp(-100.0))).epsilon(1e-14));
  LogSumExp empty;
  CHECK(empty.value() == kNegInf);
}

TEST_SUITE_END();
