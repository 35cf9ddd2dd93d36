#include "qrl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "qrl/error.hpp"

namespace qrl {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

const char* to_string(Metric m) {
  switch (m) {
    case Metric::h2:
      return "h2";
    case Metric::qfi:
      return "qfi";
    case Metric::bound:
      return "bound";
  }
  return "?";
}

const char* to_string(Status s) {
  switch (s) {
    case Status::ok:
      return "ok";
    case Status::clamped:
      return "clamped";
    case Status::divergent:
      return "divergent";
    case Status::non_converged:
      return "non-converged";
    case Status::failed:
      return "failed";
  }
  return "?";
}

Metric parse_metric(std::string_view text) {
  if (text == "h2") {
    return Metric::h2;
  }
  if (text == "qfi") {
    return Metric::qfi;
  }
  if (text == "bound") {
    return Metric::bound;
  }
  throw DomainError(fmt::format("unknown metric '{}'", text));
}

MeritReport evaluate_point(const std::string& label, double t, const UnitaryParams& p, double edge_angle,
                           Metric metric, const EvaluationConfig& config) {
  const auto start = Clock::now();
  MeritReport row;
  row.label = label;
  row.t = t;
  row.alpha = p;
  row.alpha_norm = p.norm();
  row.edge_angle = edge_angle;
  row.metric = metric;
  try {
    switch (metric) {
      case Metric::h2: {
        const BestProbeH2 best = best_probe_h2(p, config.optimizer);
        row.value = std::max(0.0, best.value);
        row.probe = best.probe;
        row.sigma = best.sigma;
        row.status = best.value < 0.0 ? Status::clamped : Status::ok;
        if (!best.converged) {
          row.status = Status::non_converged;
        }
        break;
      }
      case Metric::bound: {
        const BestProbeH2 best = best_probe_h2(p, config.optimizer);
        const CapacityResult bound = one_shot_lower_bound(best.value, config.epsilon, config.n);
        row.value = bound.clamped_bound;
        row.probe = best.probe;
        row.sigma = best.sigma;
        row.status = bound.raw_bound < 0.0 ? Status::clamped : Status::ok;
        if (!best.converged) {
          row.status = Status::non_converged;
        }
        break;
      }
      case Metric::qfi: {
        const AvgQfiResult fbar = maximize_over_probe(p, config.fisher);
        row.probe = fbar.probe_opt;
        if (fbar.classification == Classification::divergent) {
          row.status = Status::divergent;
        } else {
          row.value = fbar.value;
          row.status = fbar.converged ? Status::ok : Status::non_converged;
        }
        break;
      }
    }
  } catch (const Error& e) {
    row.value.reset();
    row.status = Status::failed;
    row.message = e.what();
  }
  row.wall_time_ms = elapsed_ms(start);
  return row;
}

std::vector<MeritReport> run_vertex_report(Vertex v, const EvaluationConfig& config) {
  const UnitaryParams p = vertex_params(v);
  const std::string label(to_string(v));
  std::vector<MeritReport> rows;
  for (Metric m : {Metric::h2, Metric::bound, Metric::qfi}) {
    rows.push_back(evaluate_point(label, 0.0, p, p.norm(), m, config));
  }
  return rows;
}

std::vector<MeritReport> run_edge_sweep(const SweepConfig& cfg, const ProgressFn& progress) {
  if (cfg.samples < 2) {
    throw DomainError(fmt::format("samples = {} must be at least 2", cfg.samples));
  }
  if (cfg.workers < 0) {
    throw DomainError(fmt::format("workers = {} must be non-negative", cfg.workers));
  }
  const auto count = static_cast<std::size_t>(cfg.samples);
  std::vector<MeritReport> rows(count);
  const std::string label(to_string(cfg.edge));

  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  auto work = [&] {
    for (std::size_t k = next.fetch_add(1); k < count; k = next.fetch_add(1)) {
      const double t = static_cast<double>(k) / static_cast<double>(count - 1);
      const EdgePoint pt = edge_point(cfg.edge, t);
      rows[k] = evaluate_point(label, t, pt.params, pt.edge_angle, cfg.metric, cfg.eval);
      if (progress) {
        const std::lock_guard lock(progress_mutex);
        progress(rows[k]);
      }
    }
  };

  unsigned workers = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers) : std::thread::hardware_concurrency();
  workers = std::clamp(workers, 1u, static_cast<unsigned>(count));
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < workers; ++w) {
    pool.emplace_back(work);
  }
  work();
  pool.clear();
  // Slots are indexed by k, so rows are already ordered by t.
  return rows;
}

BoundTable run_bound_table(const UnitaryParams& p, std::optional<ProbeState> probe,
                           const std::vector<double>& epsilons, const std::vector<long long>& ns,
                           const OptimizerConfig& config) {
  validate(p);
  if (epsilons.empty() || ns.empty()) {
    throw DomainError("bound table needs at least one epsilon and one n");
  }
  BoundTable table;
  table.alpha = p;
  if (probe) {
    const H2Result h2 = probe_h2(p, *probe, config);
    table.h2 = h2.value;
    table.probe = *probe;
    table.sigma = h2.sigma;
    table.converged = h2.converged;
  } else {
    const BestProbeH2 best = best_probe_h2(p, config);
    table.h2 = best.value;
    table.probe = best.probe;
    table.sigma = best.sigma;
    table.converged = best.converged;
  }
  for (double eps : epsilons) {
    for (long long n : ns) {
      const CapacityResult r = one_shot_lower_bound(table.h2, eps, n);
      table.rows.push_back({eps, n, r.delta_star, r.correction, r.raw_bound, r.clamped_bound});
    }
  }
  return table;
}

AvgQfiResult run_qfi_report(const UnitaryParams& p, std::optional<ProbeState> probe, const FisherConfig& config) {
  return probe ? evaluate_probe(p, *probe, config) : maximize_over_probe(p, config);
}

}  // namespace qrl
