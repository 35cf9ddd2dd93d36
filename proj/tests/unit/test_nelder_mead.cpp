#include <doctest.h>

#include <cmath>
#include <vector>

#include "qrl/error.hpp"
#include "qrl/nelder_mead.hpp"

using namespace qrl;

TEST_CASE("minimizes a shifted quadratic") {
  const Objective f = [](std::span<const double> x) {
    return (x[0] - 1.0) * (x[0] - 1.0) + 4.0 * (x[1] + 2.0) * (x[1] + 2.0) + 3.0;
  };
  const std::vector<double> start{0.0, 0.0};
  const NelderMeadResult r = nelder_mead_minimize(f, start);
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.x[1] == doctest::Approx(-2.0).epsilon(1e-7));
  CHECK(r.value == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("Rosenbrock") {
  const Objective f = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const std::vector<double> start{-1.2, 1.0};
  NelderMeadOptions opt;
  opt.max_iterations = 10000;
  const NelderMeadResult r = nelder_mead_minimize(f, start, opt);
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("NaN regions are avoided and iteration limits reported") {
  const Objective f = [](std::span<const double> x) {
    return x[0] < 0.0 ? std::nan("") : (x[0] - 0.5) * (x[0] - 0.5);
  };
  const std::vector<double> start{0.05};
  NelderMeadOptions opt;
  const std::vector<double> signs{-1.0};
  const NelderMeadResult r = nelder_mead_minimize(f, start, opt, signs);
  CHECK(r.x[0] == doctest::Approx(0.5).epsilon(1e-7));

  opt.max_iterations = 3;
  const NelderMeadResult capped = nelder_mead_minimize(f, start, opt);
  CHECK_FALSE(capped.converged);
  CHECK(capped.iterations == 3);
}

TEST_CASE("argument errors") {
  const Objective f = [](std::span<const double>) { return 0.0; };
  CHECK_THROWS_AS(nelder_mead_minimize(f, std::vector<double>{}), DomainError);
  const std::vector<double> start{0.0, 0.0};
  const std::vector<double> signs{1.0};
  CHECK_THROWS_AS(nelder_mead_minimize(f, start, {}, signs), DomainError);
}
