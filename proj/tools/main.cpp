// qrl: vertex reports, edge sweeps and bound tables for the two-qubit
// environment-retrieval figures of merit.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "qrl/error.hpp"
#include "qrl/harness.hpp"
#include "qrl/report_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("qrl");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  const char* env = std::getenv("QRL_LOG");
  if (env == nullptr) {
    return;
  }
  const std::string level(env);
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else if (level != "info") {
    spdlog::warn("QRL_LOG='{}' not one of error|info|debug; using info", level);
  }
}

// CSV or JSON by extension; stdout when no path is given.
void emit(const std::string& path, const std::string& csv, const std::string& json) {
  if (path.empty()) {
    std::cout << csv;
    return;
  }
  qrl::write_file(path, qrl::wants_json(path) ? json : csv);
  spdlog::info("wrote {}", path);
}

qrl::UnitaryParams alpha_from(const std::vector<double>& v) {
  if (v.size() != 3) {
    throw qrl::DomainError(fmt::format("--alpha needs 3 values, got {}", v.size()));
  }
  return {v[0], v[1], v[2]};
}

std::optional<qrl::ProbeState> probe_from(const std::vector<double>& v) {
  if (v.empty()) {
    return std::nullopt;
  }
  if (v.size() != 2) {
    throw qrl::DomainError(fmt::format("--probe needs 2 values, got {}", v.size()));
  }
  return qrl::ProbeState::canonical(v[0], v[1]);
}

int rows_exit_code(const std::vector<qrl::MeritReport>& rows) {
  int code = kExitOk;
  for (const qrl::MeritReport& r : rows) {
    if (r.status == qrl::Status::failed) {
      spdlog::error("{} t={} {}: {}", r.label, r.t, qrl::to_string(r.metric), r.message);
      code = kExitNumerical;
    } else if (r.status == qrl::Status::non_converged) {
      spdlog::error("{} t={} {}: optimizer did not converge", r.label, r.t, qrl::to_string(r.metric));
      code = kExitNumerical;
    }
  }
  return code;
}

void log_row(const qrl::MeritReport& r) {
  spdlog::debug("{} t={:.4f} {} = {} [{}] {:.0f} ms", r.label, r.t, qrl::to_string(r.metric),
                r.value ? fmt::format("{:.6g}", *r.value) : std::string("-"), qrl::to_string(r.status),
                r.wall_time_ms);
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Environment-state retrieval figures of merit for two-qubit unitaries"};
  app.require_subcommand(1);
  // Global options may also follow the subcommand name.
  app.fallthrough();
  app.set_config("--config", "", "INI/TOML file; one section per subcommand, flags override")->check(CLI::ExistingFile);

  qrl::EvaluationConfig eval;
  int workers = 0;
  std::vector<double> eta_schedule;
  app.add_option("--seed", eval.optimizer.seed, "Seed for the optimizer restarts");
  app.add_option("--workers", workers, "Worker threads for sweeps (0 = all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--eta-schedule", eta_schedule, "Radial cutoffs for the averaged Fisher information")
      ->delimiter(',');

  std::string vertex_name;
  std::string out_path;
  auto* vertex = app.add_subcommand("vertex", "H2, bound and F-bar at a tetrahedron vertex");
  vertex->add_option("--name", vertex_name, "I, C, S or D")->required();
  vertex->add_option("--epsilon", eval.epsilon, "Error tolerance")->capture_default_str();
  vertex->add_option("--n", eval.n, "Channel uses")->capture_default_str();
  vertex->add_option("--out", out_path, "Output file (.csv or .json); stdout if omitted");

  std::string edge_name;
  std::string metric_name = "h2";
  int samples = 41;
  std::string svg_path;
  auto* sweep = app.add_subcommand("sweep", "Figure of merit along a tetrahedron edge");
  sweep->add_option("--edge", edge_name, "IC, IS, ID, CS, CD or DS")->required();
  sweep->add_option("--metric", metric_name, "h2, qfi or bound")->capture_default_str();
  sweep->add_option("--samples", samples, "Points along the edge")->capture_default_str();
  sweep->add_option("--epsilon", eval.epsilon, "Error tolerance (bound metric)")->capture_default_str();
  sweep->add_option("--n", eval.n, "Channel uses (bound metric)")->capture_default_str();
  sweep->add_option("--svg", svg_path, "SVG plot path");
  sweep->add_option("--out", out_path, "Output file (.csv or .json)")->required();

  std::vector<double> alpha;
  std::vector<double> probe;
  std::vector<double> epsilons;
  std::vector<long long> ns;
  auto* bound = app.add_subcommand("bound", "Capacity bound table over (epsilon, n)");
  bound->add_option("--alpha", alpha, "alpha_x,alpha_y,alpha_z")->delimiter(',')->required();
  bound->add_option("--probe", probe, "phi1,phi2; optimized when omitted")->delimiter(',');
  bound->add_option("--epsilons", epsilons, "Comma-separated tolerances")->delimiter(',')->required();
  bound->add_option("--ns", ns, "Comma-separated channel-use counts")->delimiter(',')->required();
  bound->add_option("--out", out_path, "Output file (.csv or .json)")->required();

  auto* qfi = app.add_subcommand("qfi", "Prior-averaged Fisher information and its divergence class");
  qfi->add_option("--alpha", alpha, "alpha_x,alpha_y,alpha_z")->delimiter(',')->required();
  qfi->add_option("--probe", probe, "phi1,phi2; optimized when omitted")->delimiter(',');
  qfi->add_option("--out", out_path, "Output file (.csv or .json)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  if (!eta_schedule.empty()) {
    eval.fisher.eta_schedule = eta_schedule;
  }

  try {
    if (*vertex) {
      const auto v = qrl::parse_vertex(vertex_name);
      if (!v) {
        throw qrl::DomainError(fmt::format("unknown vertex '{}'", vertex_name));
      }
      const auto rows = qrl::run_vertex_report(*v, eval);
      for (const auto& r : rows) {
        log_row(r);
      }
      std::ostringstream csv;
      std::ostringstream json;
      qrl::write_reports_csv(csv, rows);
      qrl::write_reports_json(json, rows);
      emit(out_path, csv.str(), json.str());
      return rows_exit_code(rows);
    }

    if (*sweep) {
      const auto e = qrl::parse_edge(edge_name);
      if (!e) {
        throw qrl::DomainError(fmt::format("unknown edge '{}'", edge_name));
      }
      qrl::SweepConfig cfg;
      cfg.edge = *e;
      cfg.samples = samples;
      cfg.metric = qrl::parse_metric(metric_name);
      cfg.eval = eval;
      cfg.workers = workers;
      spdlog::info("sweep {} {} with {} samples", qrl::to_string(cfg.edge), metric_name, samples);
      const auto rows = qrl::run_edge_sweep(cfg, log_row);
      std::ostringstream csv;
      std::ostringstream json;
      qrl::write_reports_csv(csv, rows);
      qrl::write_reports_json(json, rows);
      emit(out_path, csv.str(), json.str());
      if (!svg_path.empty()) {
        qrl::PlotSpec plot{fmt::format("{} along edge {}", metric_name, qrl::to_string(cfg.edge)),
                           "edge angle (rad)", metric_name, {qrl::sweep_series(rows)}};
        std::ostringstream svg;
        qrl::write_svg(svg, plot);
        qrl::write_file(svg_path, svg.str());
        spdlog::info("wrote {}", svg_path);
      }
      return rows_exit_code(rows);
    }

    if (*bound) {
      const auto table = qrl::run_bound_table(alpha_from(alpha), probe_from(probe), epsilons, ns, eval.optimizer);
      std::ostringstream csv;
      std::ostringstream json;
      qrl::write_bound_csv(csv, table);
      qrl::write_bound_json(json, table);
      emit(out_path, csv.str(), json.str());
      if (!table.converged) {
        spdlog::error("H2 optimizer did not converge");
        return kExitNumerical;
      }
      return kExitOk;
    }

    if (*qfi) {
      const qrl::UnitaryParams p = alpha_from(alpha);
      const auto result = qrl::run_qfi_report(p, probe_from(probe), eval.fisher);
      spdlog::info("F-bar {} (slope {:.4f}), value {:.6g}", qrl::to_string(result.classification), result.slope,
                   result.value);
      std::ostringstream csv;
      std::ostringstream json;
      qrl::write_qfi_csv(csv, p, result);
      qrl::write_qfi_json(json, p, result);
      emit(out_path, csv.str(), json.str());
      if (!result.converged) {
        spdlog::error("probe optimizer did not converge");
        return kExitNumerical;
      }
      return kExitOk;
    }
  } catch (const qrl::DomainError& e) {
    spdlog::error("{}", e.what());
    return kExitInvalid;
  } catch (const qrl::DimensionError& e) {
    spdlog::error("{}", e.what());
    return kExitInvalid;
  } catch (const qrl::NumericalError& e) {
    spdlog::error("{}", e.what());
    return kExitNumerical;
  }
  return kExitOk;
}
