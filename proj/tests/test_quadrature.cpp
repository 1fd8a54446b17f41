#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aoi/quadrature.hpp"

using namespace aoi;

TEST_CASE("polynomial integrates exactly") {
  const auto r = integrate_adaptive([](double x) { return x * x; }, 0.0, 3.0);
  CHECK(std::abs(r.value - 9.0) < 1e-12);
}

TEST_CASE("sine over a period") {
  const auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(std::abs(r.value - 2.0) < 1e-10);
  CHECK(r.error >= 0.0);
  CHECK(r.error < 1e-6);
}

TEST_CASE("error estimate bounds the true error") {
  const auto f = [](double x) { return std::exp(-x) / (1.0 + x * x); };
  const auto r = integrate_adaptive(f, 0.0, 10.0, 1e-12, 1e-12);
  const auto fine = integrate_adaptive(f, 0.0, 5.0, 1e-13, 1e-13).value +
                    integrate_adaptive(f, 5.0, 10.0, 1e-13, 1e-13).value;
  CHECK(std::abs(r.value - fine) <= std::max(r.error, 1e-13));
}

TEST_CASE("degenerate interval gives zero") {
  const auto r = integrate_adaptive([](double x) { return std::exp(x); }, 2.0, 2.0);
  CHECK(r.value == 0.0);
}

TEST_CASE("budget exhaustion reports failure") {
  const auto f = [](double x) { return std::sin(1000.0 * x); };
  CHECK_THROWS_AS(integrate_adaptive(f, 0.0, 10.0, 1e-14, 1e-14, 3), QuadratureFailure);
}

TEST_CASE("refinement splits the worst interval first") {
  int calls = 0;
  const auto f = [&](double x) {
    ++calls;
    return x < 1.0 ? std::sqrt(std::abs(x)) : 1.0;
  };
  const auto r = integrate_adaptive(f, 0.0, 2.0, 1e-10, 1e-10);
  CHECK(std::abs(r.value - (2.0 / 3.0 + 1.0)) < 1e-8);
  CHECK(r.intervals > 1);
  CHECK(calls == 15 * (2 * r.intervals - 1));
}
