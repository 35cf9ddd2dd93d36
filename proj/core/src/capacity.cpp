#include "qrl/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include <fmt/format.h>

#include "qrl/error.hpp"
#include "qrl/nelder_mead.hpp"

namespace qrl {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

BlochVector cap_radius(std::span<const double> x, double cap) {
  BlochVector p{x[0], x[1], x[2]};
  const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  if (norm > cap) {
    for (double& c : p) {
      c *= cap / norm;
    }
  }
  return p;
}

struct Seed {
  double value;
  std::vector<double> x;
};

// Keeps the first `count` seeds in descending value; ties keep grid order.
std::vector<Seed> best_seeds(std::vector<Seed> seeds, int count) {
  std::stable_sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.value > b.value; });
  seeds.resize(std::min<std::size_t>(seeds.size(), static_cast<std::size_t>(std::max(count, 0))));
  return seeds;
}

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError(fmt::format("epsilon = {} outside (0, 1)", epsilon));
  }
}

}  // namespace

Matrix ConditioningState::sigma() const {
  return Matrix(2, 2,
                {Complex(0.5 * (1.0 + bloch[2]), 0.0), Complex(0.5 * bloch[0], -0.5 * bloch[1]),
                 Complex(0.5 * bloch[0], 0.5 * bloch[1]), Complex(0.5 * (1.0 - bloch[2]), 0.0)});
}

double g_eps(double x) {
  if (!(x > 0.0 && x <= 1.0)) {
    throw DomainError(fmt::format("g_eps: argument {} outside (0, 1]", x));
  }
  // 1 - sqrt(1 - x^2) rewritten to avoid cancellation for small x.
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  return -std::log2(x * x / (1.0 + s));
}

double renyi2_divergence(const BipartiteState& rho, const ConditioningState& sigma, double floor) {
  const Matrix side = kron(Matrix::identity(2), herm_power(sigma.sigma(), -0.25, floor));
  const Matrix sandwich = side * rho.rho_bf * side;
  // sandwich is Hermitian, so Tr(sandwich^2) is its squared Frobenius norm.
  double tr_sq = 0.0;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      tr_sq += std::norm(sandwich(r, c));
    }
  }
  if (!(tr_sq > 0.0) || !std::isfinite(tr_sq)) {
    throw NumericalError(fmt::format("renyi2_divergence: Tr[sandwich^2] = {}", tr_sq));
  }
  return std::log2(tr_sq);
}

H2Result h2_conditional(const BipartiteState& rho, const OptimizerConfig& config) {
  const double cap = config.radius_cap;
  const double floor = config.spectral_floor;
  int evaluations = 0;
  auto neg_d2 = [&](std::span<const double> x) {
    ++evaluations;
    return -renyi2_divergence(rho, ConditioningState{cap_radius(x, cap)}, floor);
  };

  std::vector<Seed> seeds;
  const int g = std::max(config.sigma_grid, 2);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      for (int k = 0; k < g; ++k) {
        std::vector<double> x{-1.0 + 2.0 * i / (g - 1), -1.0 + 2.0 * j / (g - 1), -1.0 + 2.0 * k / (g - 1)};
        if (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] > 1.0 + 1e-12) {
          continue;
        }
        const double v = neg_d2(x);
        seeds.push_back({v, std::move(x)});
      }
    }
  }
  seeds = best_seeds(std::move(seeds), config.sigma_restarts);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int r = 0; r < config.sigma_random_restarts; ++r) {
    std::vector<double> x(3);
    do {
      for (double& c : x) {
        c = unit(rng);
      }
    } while (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] > 1.0);
    const double v = neg_d2(x);
    seeds.push_back({v, std::move(x)});
  }

  H2Result best;
  best.value = -std::numeric_limits<double>::infinity();
  NelderMeadOptions nm;
  nm.initial_step = 1.0 / (g - 1);
  nm.diameter_tolerance = config.sigma_tolerance;
  nm.max_iterations = config.max_iterations;
  const Objective minimize_d2 = [&](std::span<const double> x) { return -neg_d2(x); };
  for (const Seed& seed : seeds) {
    if (seed.value > best.value) {
      best.value = seed.value;
      best.sigma = ConditioningState{cap_radius(seed.x, cap)};
    }
    const NelderMeadResult run = nelder_mead_minimize(minimize_d2, seed.x, nm);
    best.iterations += run.iterations;
    if (-run.value >= best.value) {
      best.value = -run.value;
      best.sigma = ConditioningState{cap_radius(run.x, cap)};
      best.converged = run.converged;
    }
  }
  best.evaluations = evaluations;

  if (!std::isfinite(best.value)) {
    throw NumericalError("h2_conditional: no finite objective value");
  }
  if (best.value > 1.0 + 1e-9) {
    throw NumericalError(fmt::format("h2_conditional: {} exceeds the 1-bit dimension bound", best.value));
  }
  return best;
}

double delta_objective(double epsilon, double delta) {
  return g_eps(std::sqrt(0.5 * epsilon) - delta) - 4.0 * std::log2(delta);
}

namespace {

// d/d delta of delta_objective, from g'(x) = -(2/x + x/(s(1+s))) / ln 2.
double delta_slope(double epsilon, double delta) {
  const double x = std::sqrt(0.5 * epsilon) - delta;
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  return (2.0 / x + x / (s * (1.0 + s)) - 4.0 / delta) / std::numbers::ln2;
}

}  // namespace

DeltaStar delta_star(double epsilon) {
  require_epsilon(epsilon);
  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.0;
  double hi = std::sqrt(0.5 * epsilon);
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = delta_objective(epsilon, x1);
  double f2 = delta_objective(epsilon, x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = delta_objective(epsilon, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = delta_objective(epsilon, x2);
    }
  }
  double delta = 0.5 * (lo + hi);
  // Near the minimum the objective is flat to rounding, so the bracket above
  // pins delta only to ~1e-8 relative. Bisect the slope to finish.
  double a = delta * (1.0 - 1e-5);
  double b = std::min(delta * (1.0 + 1e-5), 0.5 * (delta + std::sqrt(0.5 * epsilon)));
  if (delta_slope(epsilon, a) < 0.0 && delta_slope(epsilon, b) > 0.0) {
    for (int k = 0; k < 200 && b - a > 0.0; ++k) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) {
        break;
      }
      (delta_slope(epsilon, m) < 0.0 ? a : b) = m;
    }
    delta = 0.5 * (a + b);
  }
  return {delta, delta_objective(epsilon, delta)};
}

double delta_star_closed_form(double epsilon) {
  require_epsilon(epsilon);
  using C = std::complex<double>;
  const C e(epsilon, 0.0);
  const C i(0.0, 1.0);
  const C radicand = std::sqrt(2.0 * e * e * e) + std::sqrt(1728.0 * e * e + 715392.0 * e - 5971968.0) +
                     648.0 * std::sqrt(2.0 * e);
  const C cube = std::pow(radicand, 1.0 / 3.0);
  const C value = 13.0 * std::sqrt(e) / (15.0 * std::sqrt(2.0)) -
                  (1.0 + i * std::sqrt(3.0)) * cube / (30.0 * std::pow(2.0, 2.0 / 3.0)) -
                  (1.0 - i * std::sqrt(3.0)) * (e + 144.0) / (30.0 * std::cbrt(2.0) * cube);
  return value.real();
}

double bound_correction(double epsilon) { return delta_star(epsilon).objective + 2.0; }

CapacityResult one_shot_lower_bound(double h2, double epsilon, long long n) {
  require_epsilon(epsilon);
  if (n < 1) {
    throw DomainError(fmt::format("one_shot_lower_bound: n = {} must be positive", n));
  }
  if (!std::isfinite(h2)) {
    throw NumericalError("one_shot_lower_bound: non-finite H2");
  }
  const DeltaStar ds = delta_star(epsilon);
  CapacityResult out;
  out.h2 = h2;
  out.epsilon = epsilon;
  out.n = n;
  out.delta_star = ds.delta;
  out.correction = ds.objective + 2.0;
  out.raw_bound = h2 - out.correction / static_cast<double>(n);
  out.clamped_bound = std::max(0.0, out.raw_bound);
  return out;
}

H2Result probe_h2(const UnitaryParams& p, const ProbeState& probe, const OptimizerConfig& config) {
  return h2_conditional(choi_bf(stinespring_isometry(p, probe)), config);
}

BestProbeH2 best_probe_h2(const UnitaryParams& p, const OptimizerConfig& config) {
  validate(p);
  BestProbeH2 best;
  best.value = -std::numeric_limits<double>::infinity();
  bool all_converged = true;

  auto consider = [&](const ProbeState& probe, const H2Result& h2) {
    ++best.evaluations;
    if (h2.value > best.value) {
      best.value = h2.value;
      best.probe = probe;
      best.sigma = h2.sigma;
      best.converged = h2.converged;
    }
    return h2.value;
  };

  const int g = std::max(config.probe_grid, 2);
  std::vector<Seed> seeds;
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const ProbeState probe{kPi * i / (g - 1), kTwoPi * j / g};
      const double v = consider(probe, probe_h2(p, probe, config));
      seeds.push_back({v, {probe.phi1, probe.phi2}});
    }
  }
  seeds = best_seeds(std::move(seeds), config.probe_restarts);

  NelderMeadOptions nm;
  nm.initial_step = 0.5 * kPi / (g - 1);
  nm.diameter_tolerance = config.probe_tolerance;
  nm.max_iterations = config.max_iterations;
  const Objective objective = [&](std::span<const double> x) {
    const ProbeState probe = ProbeState::canonical(x[0], x[1]);
    return -consider(probe, probe_h2(p, probe, config));
  };
  for (const Seed& seed : seeds) {
    const NelderMeadResult run = nelder_mead_minimize(objective, seed.x, nm);
    all_converged = all_converged && run.converged;
  }
  best.converged = best.converged && all_converged;
  return best;
}

}  // namespace qrl
