#include "qrl/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "qrl/error.hpp"
#include "qrl/nelder_mead.hpp"

namespace qrl {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

double dot(const BlochVector& a, const BlochVector& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Neumaier summation; the order of add() calls fixes the result bit for bit.
class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Angular node with the prior and angular weights folded in. The direction
// vectors are the unit-radius parts of the environment derivatives:
// d_r = 2 e, d_theta1 = 2 r u1, d_theta2 = 2 r u2.
struct AngularNode {
  double weight;
  double theta1;
  double theta2;
  BlochVector e;
  BlochVector u1;
  BlochVector u2;
};

std::vector<AngularNode> angular_nodes(const QuadratureSpec& quad) {
  const QuadratureRule t1 = paneled_gauss_legendre(quad.theta1_nodes, quad.theta1_panels, 0.0, kPi);
  const QuadratureRule t2 = paneled_gauss_legendre(quad.theta2_nodes, quad.theta2_panels, 0.0, kTwoPi);
  std::vector<AngularNode> nodes;
  nodes.reserve(t1.size() * t2.size());
  for (std::size_t i = 0; i < t1.size(); ++i) {
    const double s1 = std::sin(t1.nodes[i]);
    const double c1 = std::cos(t1.nodes[i]);
    const double w1 = t1.weights[i] * std::sin(0.5 * t1.nodes[i]) / kTwoPi;
    for (std::size_t j = 0; j < t2.size(); ++j) {
      const double s2 = std::sin(t2.nodes[j]);
      const double c2 = std::cos(t2.nodes[j]);
      nodes.push_back({w1 * t2.weights[j], t1.nodes[i], t2.nodes[j], {s1 * c2, s1 * s2, c1},
                       {c1 * c2, c1 * s2, -s1}, {-s1 * s2, s1 * c2, 0.0}});
    }
  }
  return nodes;
}

double trace_from_bloch(const BlochVector& n, const std::array<BlochVector, 3>& d, double purity_tol) {
  const double one_minus = 1.0 - dot(n, n);
  double tr = dot(d[0], d[0]) + dot(d[1], d[1]) + dot(d[2], d[2]);
  // det(rho) = (1 - |n|^2) / 4.
  if (0.25 * one_minus >= purity_tol) {
    const double a = dot(n, d[0]);
    const double b = dot(n, d[1]);
    const double c = dot(n, d[2]);
    tr += (a * a + b * b + c * c) / one_minus;
  }
  return tr;
}

void require_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 0.4)) {
    throw DomainError(fmt::format("eta = {} outside [0, 0.4]", eta));
  }
}

}  // namespace

QfiMatrix qfi_matrix(const Matrix& rho, std::span<const Matrix> derivs, double purity_tol) {
  if (rho.rows() != 2 || rho.cols() != 2) {
    throw DimensionError(fmt::format("qfi_matrix: expected a 2x2 state, got {}x{}", rho.rows(), rho.cols()));
  }
  if (derivs.size() != 3) {
    throw DimensionError(fmt::format("qfi_matrix: expected 3 derivatives, got {}", derivs.size()));
  }
  const double det = (rho(0, 0) * rho(1, 1) - rho(0, 1) * rho(1, 0)).real();
  const bool pure = det < purity_tol;
  QfiMatrix f;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = a; b < 3; ++b) {
      const double base = (derivs[a] * derivs[b]).trace().real();
      const double v = pure ? 2.0 * base : base + (rho * derivs[a] * rho * derivs[b]).trace().real() / det;
      f.entries[a][b] = v;
      f.entries[b][a] = v;
    }
  }
  return f;
}

QfiMatrix qfi_from_bloch(const BlochVector& n, std::span<const BlochVector> dirs, double purity_tol) {
  if (dirs.size() != 3) {
    throw DimensionError(fmt::format("qfi_from_bloch: expected 3 directions, got {}", dirs.size()));
  }
  const double one_minus = 1.0 - dot(n, n);
  const bool pure = 0.25 * one_minus < purity_tol;
  QfiMatrix f;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = a; b < 3; ++b) {
      double v = dot(dirs[a], dirs[b]);
      if (!pure) {
        v += dot(n, dirs[a]) * dot(n, dirs[b]) / one_minus;
      }
      f.entries[a][b] = v;
      f.entries[b][a] = v;
    }
  }
  return f;
}

QfiMatrix channel_qfi(const UnitaryParams& p, const ProbeState& probe, const EnvState& env, double purity_tol) {
  validate(env);
  const ChannelIsometry iso = stinespring_isometry(p, probe);
  const std::array<Matrix, 3> d_env = env_bloch_derivatives(env);
  std::array<Matrix, 3> d_out;
  for (std::size_t a = 0; a < 3; ++a) {
    d_out[a] = apply_channel(iso, d_env[a]);
  }
  return qfi_matrix(apply_channel(iso, env), d_out, purity_tol);
}

double prior_weight(const EnvState& env) { return std::sin(0.5 * env.theta1) / kTwoPi; }

QuadratureSpec QuadratureSpec::refined() const {
  QuadratureSpec out = *this;
  out.r_per_panel *= 2;
  out.theta1_nodes *= 2;
  out.theta1_panels *= 2;
  out.theta2_nodes *= 2;
  out.theta2_panels *= 2;
  out.angular_tolerance *= 1e-2;
  return out;
}

QuadratureSpec QuadratureSpec::tensor() {
  QuadratureSpec out;
  out.angular = AngularRule::tensor;
  return out;
}

QuadratureRule radial_rule(const QuadratureSpec& quad, double eta) {
  require_eta(eta);
  const double hi = 0.5 - eta;
  const std::vector<double> breaks = graded_breaks(0.0, hi, 2.0 * std::max(eta, 1e-12));
  return composite_gauss_legendre(quad.r_per_panel, breaks);
}

double prior_mass(const QuadratureSpec& quad) {
  const QuadratureRule r = radial_rule(quad, 0.0);
  double r_len = 0.0;
  for (double w : r.weights) {
    r_len += w;
  }
  Accumulator acc;
  for (const AngularNode& node : angular_nodes(quad)) {
    acc.add(node.weight);
  }
  return r_len * acc.value();
}

namespace {

// Integral over r of tr F for one direction; me, mu1, mu2 are the linear
// channel images of e, u1, u2.
double radial_integral(const BlochMap& map, const QuadratureRule& r, const BlochVector& me, const BlochVector& mu1,
                       const BlochVector& mu2, double theta1, double theta2, double purity_tol) {
  double inner = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double two_r = 2.0 * r.nodes[k];
    BlochVector n;
    std::array<BlochVector, 3> d;
    for (std::size_t i = 0; i < 3; ++i) {
      n[i] = two_r * me[i] + map.offset[i];
      d[0][i] = 2.0 * me[i];
      d[1][i] = two_r * mu1[i];
      d[2][i] = two_r * mu2[i];
    }
    const double tr = trace_from_bloch(n, d, purity_tol);
    if (!std::isfinite(tr)) {
      throw NumericalError(fmt::format("avg_trace_qfi: non-finite integrand at r = {}, theta1 = {}, theta2 = {}",
                                       r.nodes[k], theta1, theta2));
    }
    inner += r.weights[k] * tr;
  }
  return inner;
}

double tensor_average(const BlochMap& map, const QuadratureRule& r, const QuadratureSpec& quad, double purity_tol) {
  Accumulator total;
  for (const AngularNode& node : angular_nodes(quad)) {
    const double inner = radial_integral(map, r, map.apply_linear(node.e), map.apply_linear(node.u1),
                                         map.apply_linear(node.u2), node.theta1, node.theta2, purity_tol);
    total.add(node.weight * inner);
  }
  return total.value();
}

double adaptive_average(const BlochMap& map, const QuadratureRule& r, const QuadratureSpec& quad,
                        double purity_tol) {
  using boost::math::quadrature::gauss_kronrod;
  const auto depth = static_cast<unsigned>(std::max(quad.max_depth, 1));
  auto over_theta2 = [&](double t1) {
    const double s1 = std::sin(t1);
    const double c1 = std::cos(t1);
    auto integrand = [&](double t2) {
      const double s2 = std::sin(t2);
      const double c2 = std::cos(t2);
      const BlochVector e{s1 * c2, s1 * s2, c1};
      const BlochVector u1{c1 * c2, c1 * s2, -s1};
      const BlochVector u2{-s1 * s2, s1 * c2, 0.0};
      return radial_integral(map, r, map.apply_linear(e), map.apply_linear(u1), map.apply_linear(u2), t1, t2,
                             purity_tol);
    };
    const double inner =
        gauss_kronrod<double, 15>::integrate(integrand, 0.0, kTwoPi, depth, 0.1 * quad.angular_tolerance);
    return inner * std::sin(0.5 * t1) / kTwoPi;
  };
  return gauss_kronrod<double, 15>::integrate(over_theta2, 0.0, kPi, depth, quad.angular_tolerance);
}

}  // namespace

double avg_trace_qfi(const UnitaryParams& p, const ProbeState& probe, const QuadratureSpec& quad, double eta,
                     double purity_tol) {
  require_eta(eta);
  if (quad.angular == AngularRule::adaptive && !(quad.angular_tolerance > 0.0)) {
    throw DomainError(fmt::format("angular tolerance {} must be positive", quad.angular_tolerance));
  }
  const BlochMap map = bloch_map(stinespring_isometry(p, probe));
  const QuadratureRule r = radial_rule(quad, eta);
  return quad.angular == AngularRule::tensor ? tensor_average(map, r, quad, purity_tol)
                                             : adaptive_average(map, r, quad, purity_tol);
}

const char* to_string(Classification c) { return c == Classification::divergent ? "divergent" : "finite"; }

double growth_slope(std::span<const EtaPoint> trace, double lo, double hi) {
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  int m = 0;
  for (const EtaPoint& pt : trace) {
    if (pt.eta < lo * (1.0 - 1e-12) || pt.eta > hi * (1.0 + 1e-12)) {
      continue;
    }
    const double x = std::log(1.0 / pt.eta);
    sx += x;
    sy += pt.value;
    sxx += x * x;
    sxy += x * pt.value;
    ++m;
  }
  if (m < 2) {
    throw DomainError(fmt::format("growth_slope: {} schedule points in [{}, {}], need 2", m, lo, hi));
  }
  const double denom = m * sxx - sx * sx;
  if (!(denom > 0.0)) {
    throw DomainError("growth_slope: repeated cutoffs in the fit window");
  }
  return (m * sxy - sx * sy) / denom;
}

AvgQfiResult evaluate_probe(const UnitaryParams& p, const ProbeState& probe, const FisherConfig& config) {
  validate(p);
  if (config.eta_schedule.size() < 2) {
    throw DomainError("eta schedule needs at least two cutoffs");
  }
  for (double eta : config.eta_schedule) {
    if (!(eta > 0.0)) {
      throw DomainError(fmt::format("eta schedule entry {} must be positive", eta));
    }
    require_eta(eta);
  }
  AvgQfiResult out;
  out.probe_opt = probe;
  for (double eta : config.eta_schedule) {
    out.eta_trace.push_back({eta, avg_trace_qfi(p, probe, config.quad, eta, config.purity_tol)});
    ++out.evaluations;
  }
  out.slope = growth_slope(out.eta_trace, config.slope_window_lo, config.slope_window_hi);

  std::vector<EtaPoint> sorted = out.eta_trace;
  std::stable_sort(sorted.begin(), sorted.end(), [](const EtaPoint& a, const EtaPoint& b) { return a.eta < b.eta; });
  if (out.slope > config.slope_threshold) {
    out.classification = Classification::divergent;
    out.value = sorted[0].value;
    out.cr_scalar = 0.0;
    return out;
  }
  // Linear extrapolation to eta = 0 through the two smallest cutoffs.
  const EtaPoint& a = sorted[0];
  const EtaPoint& b = sorted[1];
  out.value = std::max(0.0, a.value - (b.value - a.value) * a.eta / (b.eta - a.eta));
  out.cr_scalar = out.value > 0.0 ? 4.0 / out.value : std::numeric_limits<double>::infinity();
  return out;
}

AvgQfiResult maximize_over_probe(const UnitaryParams& p, const FisherConfig& config) {
  validate(p);
  if (config.eta_schedule.empty()) {
    throw DomainError("eta schedule is empty");
  }
  const double eta = *std::min_element(config.eta_schedule.begin(), config.eta_schedule.end());
  require_eta(eta);

  int evaluations = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  ProbeState best_probe;
  auto value_at = [&](const ProbeState& probe) {
    ++evaluations;
    const double v = avg_trace_qfi(p, probe, config.search_quad, eta, config.purity_tol);
    if (v > best_value) {
      best_value = v;
      best_probe = probe;
    }
    return v;
  };

  struct Seed {
    double value;
    std::vector<double> x;
  };
  std::vector<Seed> seeds;
  const int g = std::max(config.probe_grid, 2);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const ProbeState probe{kPi * i / (g - 1), kTwoPi * j / g};
      seeds.push_back({value_at(probe), {probe.phi1, probe.phi2}});
    }
  }
  std::stable_sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.value > b.value; });
  seeds.resize(std::min<std::size_t>(seeds.size(), static_cast<std::size_t>(std::max(config.probe_restarts, 0))));

  NelderMeadOptions nm;
  nm.initial_step = 0.5 * kPi / (g - 1);
  nm.diameter_tolerance = config.probe_tolerance;
  nm.max_iterations = config.max_iterations;
  bool converged = true;
  const Objective objective = [&](std::span<const double> x) {
    return -value_at(ProbeState::canonical(x[0], x[1]));
  };
  for (const Seed& seed : seeds) {
    converged = nelder_mead_minimize(objective, seed.x, nm).converged && converged;
  }

  AvgQfiResult out = evaluate_probe(p, best_probe, config);
  out.converged = converged;
  out.evaluations += evaluations;
  return out;
}

}  // namespace qrl
