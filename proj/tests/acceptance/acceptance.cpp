// Acceptance run: one PASS/FAIL line per criterion, CSV and SVG artifacts in
// --csv-dir. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qrl/capacity.hpp"
#include "qrl/fisher.hpp"
#include "qrl/harness.hpp"
#include "qrl/report_io.hpp"

using namespace qrl;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, std::string note) {
    if (!ok) {
      pass = false;
      notes.push_back("FAILED " + std::move(note));
    } else {
      notes.push_back(std::move(note));
    }
  }
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
  std::string joined;
  for (const std::string& n : o.notes) {
    joined += (joined.empty() ? "" : "; ") + n;
  }
  fmt::print("{} {} {}: {}\n", o.pass ? "PASS" : "FAIL", id, name, joined);
  std::fflush(stdout);
  if (!o.pass) {
    ++failures;
  }
}

std::string reports_csv(const std::vector<MeritReport>& rows) {
  std::ostringstream s;
  write_reports_csv(s, rows);
  return s.str();
}

// Drops the last column (wall_time_ms) from every line.
std::string without_wall_time(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    out += line.substr(0, line.rfind(',')) + "\n";
  }
  return out;
}

std::vector<UnitaryParams> random_tetrahedron_points(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> u(0.0, kHalfPi);
  std::vector<UnitaryParams> out;
  for (int i = 0; i < count; ++i) {
    std::array<double, 3> a{u(rng), u(rng), u(rng)};
    std::sort(a.begin(), a.end(), std::greater<>());
    out.push_back({a[0], a[1], a[2]});
  }
  return out;
}

ProbeState random_probe(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {kPi * u(rng), 2.0 * kPi * u(rng)};
}

EnvState random_env(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {0.45 * u(rng), 0.05 + (kPi - 0.1) * u(rng), 2.0 * kPi * u(rng)};
}

// 5 x 5 x 5 interior grid of environment states.
std::vector<EnvState> env_grid() {
  std::vector<EnvState> out;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      for (int k = 0; k < 5; ++k) {
        out.push_back({0.05 + 0.1 * i, kPi * (j + 0.5) / 5.0, 2.0 * kPi * (k + 0.5) / 5.0});
      }
    }
  }
  return out;
}

struct CptpTally {
  int states = 0;
  double worst_trace = 0.0;
  double worst_eig = 0.0;

  void add(const Matrix& m) {
    const DensityCheck c = validate_density(m);
    ++states;
    worst_trace = std::max(worst_trace, c.trace_error);
    worst_eig = std::max(worst_eig, -c.min_eigenvalue);
  }
  [[nodiscard]] bool ok() const { return worst_trace <= 1e-10 && worst_eig <= 1e-10; }
};

void check_channel_outputs(const UnitaryParams& p, const ProbeState& probe, const std::vector<EnvState>& grid,
                           CptpTally& tally) {
  const ChannelIsometry iso = stinespring_isometry(p, probe);
  tally.add(choi_bf(iso).rho_bf);
  for (const EnvState& env : grid) {
    tally.add(apply_channel(iso, env));
    tally.add(apply_complement(iso, env));
  }
}

double value_or_inf(const MeritReport& row) {
  return row.status == Status::divergent ? std::numeric_limits<double>::infinity()
                                         : row.value.value_or(std::numeric_limits<double>::quiet_NaN());
}

struct Artifacts {
  std::map<EdgeId, std::vector<MeritReport>> h2;
  std::map<EdgeId, std::vector<MeritReport>> qfi;
  std::map<Vertex, std::vector<MeritReport>> vertices;
  BoundTable swap_bound;
  double h2_sweep_seconds = 0.0;
  double qfi_sweep_seconds = 0.0;

  // File name -> contents, wall time removed.
  [[nodiscard]] std::map<std::string, std::string> comparable() const {
    std::map<std::string, std::string> out;
    for (const auto& [e, rows] : h2) {
      out[fmt::format("h2_{}.csv", to_string(e))] = without_wall_time(reports_csv(rows));
    }
    for (const auto& [e, rows] : qfi) {
      out[fmt::format("qfi_{}.csv", to_string(e))] = without_wall_time(reports_csv(rows));
    }
    for (const auto& [v, rows] : vertices) {
      out[fmt::format("vertex_{}.csv", to_string(v))] = without_wall_time(reports_csv(rows));
    }
    std::ostringstream bound;
    write_bound_csv(bound, swap_bound);
    out["bound_SWAP.csv"] = bound.str();
    return out;
  }
};

const std::vector<long long> kBoundNs{100, 1000, 10000, 100000, 1000000};

Artifacts produce(const EvaluationConfig& eval, int workers, int samples) {
  Artifacts a;
  SweepConfig cfg;
  cfg.samples = samples;
  cfg.eval = eval;
  cfg.workers = workers;

  auto start = Clock::now();
  cfg.metric = Metric::h2;
  for (EdgeId e : kAllEdges) {
    cfg.edge = e;
    a.h2[e] = run_edge_sweep(cfg);
  }
  a.h2_sweep_seconds = seconds_since(start);

  start = Clock::now();
  cfg.metric = Metric::qfi;
  for (EdgeId e : kAllEdges) {
    cfg.edge = e;
    a.qfi[e] = run_edge_sweep(cfg);
  }
  a.qfi_sweep_seconds = seconds_since(start);

  for (Vertex v : kAllVertices) {
    a.vertices[v] = run_vertex_report(v, eval);
  }
  a.swap_bound = run_bound_table(vertex_params(Vertex::S), std::nullopt, {0.05}, kBoundNs, eval.optimizer);
  return a;
}

void write_artifacts(const std::filesystem::path& dir, const Artifacts& a) {
  std::filesystem::create_directories(dir);
  for (const auto& [e, rows] : a.h2) {
    write_file((dir / fmt::format("h2_{}.csv", to_string(e))).string(), reports_csv(rows));
  }
  for (const auto& [e, rows] : a.qfi) {
    write_file((dir / fmt::format("qfi_{}.csv", to_string(e))).string(), reports_csv(rows));
  }
  for (const auto& [v, rows] : a.vertices) {
    write_file((dir / fmt::format("vertex_{}.csv", to_string(v))).string(), reports_csv(rows));
  }
  std::ostringstream bound;
  write_bound_csv(bound, a.swap_bound);
  write_file((dir / "bound_SWAP.csv").string(), bound.str());

  auto plot = [&](const std::map<EdgeId, std::vector<MeritReport>>& sweeps, const std::string& title,
                  const std::string& y_label, const std::string& file, bool skip_ds) {
    PlotSpec spec{title, "edge angle (rad)", y_label, {}};
    for (const auto& [e, rows] : sweeps) {
      if (!(skip_ds && e == EdgeId::DS)) {
        spec.series.push_back(sweep_series(rows));
      }
    }
    std::ostringstream svg;
    write_svg(svg, spec);
    write_file((dir / file).string(), svg.str());
  };
  plot(a.h2, "max H2(B|F) along the edges", "H2 (bits)", "h2_edges.svg", false);
  plot(a.qfi, "F-bar along the edges", "F-bar", "qfi_edges.svg", true);
}

// ---------------------------------------------------------------------------

Outcome vertex_capacity(const OptimizerConfig& opt) {
  Outcome o;
  for (Vertex v : kAllVertices) {
    const auto start = Clock::now();
    const BestProbeH2 r = best_probe_h2(vertex_params(v), opt);
    const double secs = seconds_since(start);
    const std::string name(to_string(v));
    if (v == Vertex::I || v == Vertex::C) {
      o.require(r.value <= 1e-6, fmt::format("{} raw {:.3g} clamped {:.3g} ({:.1f}s)", name, r.value,
                                             std::max(0.0, r.value), secs));
    } else {
      o.require(r.value >= 1.0 - 1e-3 && r.value <= 1.0,
                fmt::format("{} 1 - {:.3g} ({:.1f}s)", name, 1.0 - r.value, secs));
    }
    o.require(secs < 30.0, fmt::format("{} runtime {:.1f}s < 30s", name, secs));
  }
  return o;
}

Outcome bound_expression(const BoundTable& swap) {
  Outcome o;
  o.require(std::abs(swap.h2 - 1.0) <= 1e-3, fmt::format("SWAP H2 = 1 - {:.3g}", 1.0 - swap.h2));
  double previous = -1.0;
  bool increasing = true;
  double worst_formula = 0.0;
  for (const BoundRow& row : swap.rows) {
    const double corr = g_eps(std::sqrt(0.5 * row.epsilon) - row.delta_star) +
                        4.0 * std::log2(1.0 / row.delta_star) + 2.0;
    worst_formula = std::max(worst_formula, std::abs(row.correction - corr));
    worst_formula = std::max(worst_formula, std::abs(row.clamped - std::max(0.0, swap.h2 - corr / row.n)));
    increasing = increasing && row.clamped > previous;
    previous = row.clamped;
  }
  o.require(worst_formula <= 1e-12, fmt::format("formula residual {:.2g}", worst_formula));
  o.require(increasing, fmt::format("strictly increasing over n = 1e2..1e6 (correction {:.4f})",
                                    swap.rows.front().correction));
  const double at_1e6 = swap.rows.back().clamped;
  o.require(std::abs(at_1e6 - 1.0) <= 1e-3, fmt::format("n = 1e6 bound {:.6f}", at_1e6));

  for (double eps : {0.01, 0.05, 0.1}) {
    const DeltaStar ds = delta_star(eps);
    const double h = 1e-7 * std::sqrt(0.5 * eps);
    const double slope = (delta_objective(eps, ds.delta + h) - delta_objective(eps, ds.delta - h)) / (2.0 * h);
    const double closed = delta_star_closed_form(eps);
    o.require(std::abs(slope) < 1e-6 && std::abs(ds.delta - closed) < 1e-6,
              fmt::format("eps {}: delta* {:.9f}, slope {:.1e}, closed form diff {:.1e}", eps, ds.delta, slope,
                          std::abs(ds.delta - closed)));
  }
  return o;
}

// Edge angle where the raw H2 changes sign, refined by bisection.
std::optional<double> threshold_angle(EdgeId e, const std::vector<MeritReport>& rows, const OptimizerConfig& opt,
                                      int& sign_changes) {
  sign_changes = 0;
  std::optional<std::size_t> bracket;
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    const bool below = rows[k].status == Status::clamped;
    const bool above = rows[k + 1].status == Status::ok && rows[k + 1].value.value_or(0.0) > 0.0;
    if (below && above) {
      ++sign_changes;
      bracket = k;
    }
  }
  if (!bracket) {
    return std::nullopt;
  }
  double lo = rows[*bracket].t;
  double hi = rows[*bracket + 1].t;
  for (int i = 0; i < 24; ++i) {
    const double mid = 0.5 * (lo + hi);
    (best_probe_h2(edge_point(e, mid).params, opt).value > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi) * kHalfPi;
}

Outcome edge_capacity(const Artifacts& a, const OptimizerConfig& opt) {
  Outcome o;
  const auto start = Clock::now();
  double ic_max = 0.0;
  for (const MeritReport& r : a.h2.at(EdgeId::IC)) {
    ic_max = std::max(ic_max, r.value.value_or(std::numeric_limits<double>::infinity()));
  }
  o.require(ic_max <= 1e-3, fmt::format("IC max {:.2g}", ic_max));

  double ds_dev = 0.0;
  for (const MeritReport& r : a.h2.at(EdgeId::DS)) {
    ds_dev = std::max(ds_dev, std::abs(r.value.value_or(std::numeric_limits<double>::infinity()) - 1.0));
  }
  o.require(ds_dev <= 1e-3, fmt::format("DS max |H2 - 1| {:.2g}", ds_dev));

  const double target = kPi / 3.4;
  for (EdgeId e : {EdgeId::IS, EdgeId::ID}) {
    int changes = 0;
    const auto angle = threshold_angle(e, a.h2.at(e), opt, changes);
    if (!angle) {
      o.require(false, fmt::format("{} no zero-to-positive sign change", to_string(e)));
      continue;
    }
    o.require(changes == 1 && std::abs(*angle - target) <= 0.05,
              fmt::format("{} threshold at edge angle {:.4f} (pi/3.4 = {:.4f}, |alpha| {:.4f})", to_string(e), *angle,
                          target, edge_point(e, *angle / kHalfPi).alpha_norm));
  }

  for (EdgeId e : {EdgeId::CS, EdgeId::CD}) {
    const auto& rows = a.h2.at(e);
    double worst_drop = 0.0;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
      worst_drop = std::max(worst_drop, rows[k].value.value_or(0.0) - rows[k + 1].value.value_or(0.0));
    }
    o.require(worst_drop <= 1e-4, fmt::format("{} largest decrease {:.2g}", to_string(e), worst_drop));
  }
  const double total = a.h2_sweep_seconds + seconds_since(start);
  o.require(total < 600.0, fmt::format("sweeps + thresholds {:.0f}s < 600s", total));
  return o;
}

Outcome qfi_closed_forms() {
  Outcome o;
  const std::vector<EnvState> grid = env_grid();
  const std::vector<ProbeState> probes{{0.0, 0.0}, {0.9, 0.4}, {kHalfPi, 2.0}, {2.5, 5.0}};
  double worst_swap = 0.0;
  double worst_cnot = 0.0;
  double worst_dcnot = 0.0;
  for (const ProbeState& probe : probes) {
    const double sp = std::sin(probe.phi1) * std::cos(probe.phi2);
    const double k = 1.0 - sp * sp;
    const double cp2 = std::pow(std::cos(probe.phi1), 2);
    for (const EnvState& env : grid) {
      const double r2 = env.r * env.r;
      const double s1 = std::sin(env.theta1);
      const double c1 = std::cos(env.theta1);
      const double s2 = std::sin(env.theta2);
      const double c2 = std::cos(env.theta2);

      const QfiMatrix sw = channel_qfi(vertex_params(Vertex::S), probe, env);
      const std::array<double, 3> sw_ref{4.0 / (1.0 - 4.0 * r2), 4.0 * r2, 4.0 * r2 * s1 * s1};

      const QfiMatrix cn = channel_qfi(vertex_params(Vertex::C), probe, env);
      const double cn_den = 1.0 - 4.0 * r2 * s1 * s1 * c2 * c2;
      const std::array<double, 3> cn_ref{4.0 * s1 * s1 * c2 * c2 * k / cn_den, 4.0 * r2 * c1 * c1 * c2 * c2 * k / cn_den,
                                         4.0 * r2 * s1 * s1 * s2 * s2 * k / cn_den};

      const QfiMatrix dc = channel_qfi(vertex_params(Vertex::D), probe, env);
      const double q = c1 * c1 + s1 * s1 * cp2;
      const double dc_den = 1.0 - 4.0 * r2 * q;
      const std::array<double, 3> dc_ref{4.0 * q / dc_den, 4.0 * r2 * (s1 * s1 - (4.0 * r2 - c1 * c1) * cp2) / dc_den,
                                         4.0 * r2 * s1 * s1 * cp2};
      for (std::size_t a = 0; a < 3; ++a) {
        worst_swap = std::max(worst_swap, std::abs(sw(a, a) - sw_ref[a]));
        worst_cnot = std::max(worst_cnot, std::abs(cn(a, a) - cn_ref[a]));
        worst_dcnot = std::max(worst_dcnot, std::abs(dc(a, a) - dc_ref[a]));
      }
    }
  }
  o.require(worst_swap <= 1e-8, fmt::format("SWAP max diff {:.1e}", worst_swap));
  o.require(worst_cnot <= 1e-8, fmt::format("CNOT max diff {:.1e}", worst_cnot));
  o.require(worst_dcnot <= 1e-8, fmt::format("DCNOT max diff {:.1e}", worst_dcnot));
  return o;
}

Outcome vertex_fisher(const FisherConfig& config) {
  Outcome o;
  // Slope calibration against the SWAP boundary integral 2 ln((1 - eta) / eta) + O(1).
  std::vector<EtaPoint> analytic;
  for (double eta : config.eta_schedule) {
    const double c = std::pow(0.5 - eta, 3);
    analytic.push_back({eta, 2.0 * std::log((1.0 - eta) / eta) + 8.0 / 3.0 * c + 64.0 / 45.0 * c});
  }
  const double analytic_slope = growth_slope(analytic, config.slope_window_lo, config.slope_window_hi);
  o.require(analytic_slope > config.slope_threshold, fmt::format("analytic SWAP slope {:.4f}", analytic_slope));

  for (Vertex v : kAllVertices) {
    const auto start = Clock::now();
    const AvgQfiResult r = maximize_over_probe(vertex_params(v), config);
    const double secs = seconds_since(start);
    const std::string name(to_string(v));
    switch (v) {
      case Vertex::I:
        o.require(r.value == 0.0 && r.classification == Classification::finite,
                  fmt::format("I {} {} ({:.0f}s)", r.value, to_string(r.classification), secs));
        break;
      case Vertex::C: {
        const bool location = std::abs(std::sin(r.probe_opt.phi1)) < 1e-3 || std::abs(std::cos(r.probe_opt.phi2)) < 1e-3;
        o.require(std::abs(r.value - 1.76108) <= 1e-2 && r.classification == Classification::finite && location,
                  fmt::format("C {:.5f} {} at phi = ({:.4f}, {:.4f}) ({:.0f}s)", r.value, to_string(r.classification),
                              r.probe_opt.phi1, r.probe_opt.phi2, secs));
        break;
      }
      default:
        o.require(r.classification == Classification::divergent,
                  fmt::format("{} {} slope {:.3f} ({:.0f}s)", name, to_string(r.classification), r.slope, secs));
    }
    o.require(secs < 300.0, fmt::format("{} runtime < 300s", name));
  }
  return o;
}

Outcome edge_fisher(const Artifacts& a) {
  Outcome o;
  int ds_finite = 0;
  for (const MeritReport& r : a.qfi.at(EdgeId::DS)) {
    ds_finite += r.status == Status::divergent ? 0 : 1;
  }
  o.require(ds_finite == 0, fmt::format("DS points not divergent: {}", ds_finite));

  // Sample k of every edge sits at the same edge angle k/(samples-1) * pi/2.
  const double slack = 2e-2;
  struct Pair {
    EdgeId lower;
    EdgeId upper;
  };
  for (const Pair& p : {Pair{EdgeId::IC, EdgeId::ID}, Pair{EdgeId::ID, EdgeId::IS}, Pair{EdgeId::IS, EdgeId::CS},
                        Pair{EdgeId::IS, EdgeId::CD}}) {
    const auto& lo = a.qfi.at(p.lower);
    const auto& hi = a.qfi.at(p.upper);
    int violations = 0;
    double worst = 0.0;
    double worst_angle = 0.0;
    for (std::size_t k = 0; k < lo.size(); ++k) {
      const double l = value_or_inf(lo[k]);
      const double h = value_or_inf(hi[k]);
      if (std::isinf(l) && std::isinf(h)) {
        continue;
      }
      const double excess = std::isnan(l) || std::isnan(h) ? std::numeric_limits<double>::infinity() : l - h;
      if (excess > slack) {
        ++violations;
        if (excess > worst) {
          worst = excess;
          worst_angle = lo[k].edge_angle;
        }
      }
    }
    o.require(violations == 0, fmt::format("{} <= {}: {} violations{}", to_string(p.lower), to_string(p.upper),
                                           violations,
                                           violations ? fmt::format(" (worst {:.3f} at {:.3f})", worst, worst_angle)
                                                      : std::string()));
  }

  const auto& cs = a.qfi.at(EdgeId::CS);
  const auto& cd = a.qfi.at(EdgeId::CD);
  int apart = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const double x = value_or_inf(cs[k]);
    const double y = value_or_inf(cd[k]);
    if (std::isinf(x) && std::isinf(y)) {
      continue;
    }
    const double d = std::abs(x - y);
    if (!(d <= slack)) {
      ++apart;
      worst = std::max(worst, d);
    }
  }
  o.require(apart == 0, fmt::format("CS ~ CD: {} points apart by more than {} (worst {:.3f})", apart, slack, worst));
  o.require(true, fmt::format("sweeps took {:.0f}s", a.qfi_sweep_seconds));
  return o;
}

Outcome oracle_equivalence(const OptimizerConfig& opt, std::uint64_t seed) {
  Outcome o;
  std::mt19937_64 rng(seed);
  double worst_gap = -std::numeric_limits<double>::infinity();
  for (const UnitaryParams& p : random_tetrahedron_points(rng, 50)) {
    const BipartiteState rho = choi_bf(stinespring_isometry(p, random_probe(rng)));
    const double refined = h2_conditional(rho, opt).value;
    double grid = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 20; ++i) {
      for (int j = 0; j <= 20; ++j) {
        for (int k = 0; k <= 20; ++k) {
          const BlochVector b{-1.0 + i / 10.0, -1.0 + j / 10.0, -1.0 + k / 10.0};
          if (std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]) > opt.radius_cap) {
            continue;
          }
          grid = std::max(grid, -renyi2_divergence(rho, ConditioningState{b}, opt.spectral_floor));
        }
      }
    }
    worst_gap = std::max(worst_gap, grid - refined);
  }
  o.require(worst_gap <= 1e-4, fmt::format("max(grid - refined) over 50 states {:.2e}", worst_gap));

  double worst_fd = 0.0;
  const double h = 1e-5;
  for (int i = 0; i < 200; ++i) {
    const UnitaryParams p = random_tetrahedron_points(rng, 1)[0];
    const ProbeState probe = random_probe(rng);
    const EnvState env = random_env(rng);
    const ChannelIsometry iso = stinespring_isometry(p, probe);
    std::array<Matrix, 3> d;
    for (std::size_t a = 0; a < 3; ++a) {
      EnvState lo = env;
      EnvState hi = env;
      (a == 0 ? lo.r : a == 1 ? lo.theta1 : lo.theta2) -= h;
      (a == 0 ? hi.r : a == 1 ? hi.theta1 : hi.theta2) += h;
      d[a] = (apply_channel(iso, hi) - apply_channel(iso, lo)) * Complex(1.0 / (2.0 * h));
    }
    const QfiMatrix fd = qfi_matrix(apply_channel(iso, env), d);
    const QfiMatrix exact = channel_qfi(p, probe, env);
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        worst_fd = std::max(worst_fd, std::abs(fd(a, b) - exact(a, b)));
      }
    }
  }
  o.require(worst_fd <= 1e-6, fmt::format("QFI vs finite differences on 200 states {:.2e}", worst_fd));
  return o;
}

Outcome structural(const Artifacts& a, std::uint64_t seed) {
  Outcome o;
  const std::vector<EnvState> grid = env_grid();
  CptpTally tally;
  int points = 0;
  for (const auto* sweeps : {&a.h2, &a.qfi}) {
    for (const auto& [e, rows] : *sweeps) {
      for (const MeritReport& r : rows) {
        if (r.probe) {
          check_channel_outputs(r.alpha, *r.probe, grid, tally);
          ++points;
        }
      }
    }
  }
  o.require(tally.ok() && points == 12 * static_cast<int>(a.h2.begin()->second.size()),
            fmt::format("{} sweep points, {} states: trace err {:.1e}, min eigenvalue {:.1e}", points, tally.states,
                        tally.worst_trace, -tally.worst_eig));

  const double mass = prior_mass();
  o.require(std::abs(mass - 1.0) <= 1e-8, fmt::format("prior mass 1 + {:.1e}", mass - 1.0));

  std::mt19937_64 rng(seed + 1);
  double worst = 0.0;
  for (const UnitaryParams& p : random_tetrahedron_points(rng, 200)) {
    worst = std::max(worst, max_abs_diff(magic_basis_reconstruction(p), build_unitary(p)));
  }
  o.require(worst <= 1e-12, fmt::format("magic-basis reconstruction max diff {:.1e}", worst));
  return o;
}

Outcome determinism(const Artifacts& first, const EvaluationConfig& eval, int workers, int samples) {
  Outcome o;
  const auto start = Clock::now();
  const Artifacts second = produce(eval, workers, samples);
  const auto a = first.comparable();
  const auto b = second.comparable();
  int differing = 0;
  for (const auto& [name, text] : a) {
    const auto it = b.find(name);
    if (it == b.end() || it->second != text) {
      ++differing;
      o.notes.push_back("differs: " + name);
    }
  }
  o.require(differing == 0 && a.size() == b.size(),
            fmt::format("{} CSV files identical across reruns with {} workers ({:.0f}s)", a.size(), workers,
                        seconds_since(start)));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string csv_dir = "acceptance_csv";
  int workers = 0;
  int samples = 41;
  std::uint64_t seed = OptimizerConfig{}.seed;
  app.add_option("--csv-dir", csv_dir, "Where CSV and SVG artifacts go");
  app.add_option("--workers", workers, "Sweep workers (0 = all cores)");
  app.add_option("--samples", samples, "Points per edge")->check(CLI::Range(2, 1001));
  app.add_option("--seed", seed, "Optimizer and sampling seed");
  CLI11_PARSE(app, argc, argv);

  EvaluationConfig eval;
  eval.optimizer.seed = seed;

  const auto start = Clock::now();
  report(1, "vertex capacity", vertex_capacity(eval.optimizer));

  const Artifacts artifacts = produce(eval, workers, samples);
  write_artifacts(csv_dir, artifacts);

  report(2, "bound expression", bound_expression(artifacts.swap_bound));
  report(3, "capacity along edges", edge_capacity(artifacts, eval.optimizer));
  report(4, "vertex QFI closed forms", qfi_closed_forms());
  report(5, "vertex F-bar", vertex_fisher(eval.fisher));
  report(6, "F-bar along edges", edge_fisher(artifacts));
  report(7, "oracle equivalence", oracle_equivalence(eval.optimizer, seed));
  report(8, "structural invariants", structural(artifacts, seed));

  // A different worker count changes the scheduling, not the results.
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int rerun_workers = workers == 1 ? std::max(2, hw) : 1;
  report(9, "determinism", determinism(artifacts, eval, rerun_workers, samples));

  fmt::print("{} of 9 criteria failed; total {:.0f}s; artifacts in {}\n", failures, seconds_since(start), csv_dir);
  return failures == 0 ? 0 : 1;
}
