#pragma once

// Point evaluations behind the command-line tool: vertex reports, edge sweeps
// of H2 / F-bar / the capacity bound, and (epsilon, n) bound tables.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrl/capacity.hpp"
#include "qrl/fisher.hpp"
#include "qrl/unitary.hpp"

namespace qrl {

enum class Metric { h2, qfi, bound };
enum class Status { ok, clamped, divergent, non_converged, failed };

const char* to_string(Metric m);
const char* to_string(Status s);
Metric parse_metric(std::string_view text);

struct MeritReport {
  std::string label;  ///< edge name, or vertex name for vertex reports
  double t = 0.0;
  UnitaryParams alpha;
  double alpha_norm = 0.0;
  double edge_angle = 0.0;  ///< t * pi / 2 along an edge, |alpha| otherwise
  Metric metric = Metric::h2;
  std::optional<double> value;  ///< empty when divergent or failed
  Status status = Status::ok;
  std::optional<ProbeState> probe;
  std::optional<ConditioningState> sigma;
  double wall_time_ms = 0.0;
  std::string message;  ///< failure text; not part of the CSV
};

struct EvaluationConfig {
  OptimizerConfig optimizer;
  FisherConfig fisher;
  double epsilon = 0.05;
  long long n = 100;
};

struct SweepConfig {
  EdgeId edge = EdgeId::IC;
  int samples = 41;
  Metric metric = Metric::h2;
  EvaluationConfig eval;
  int workers = 0;  ///< 0 = hardware concurrency
};

/// Evaluates one metric at one parameter point. Errors are caught and
/// recorded as Status::failed.
MeritReport evaluate_point(const std::string& label, double t, const UnitaryParams& p, double edge_angle,
                           Metric metric, const EvaluationConfig& config);

/// h2, bound and qfi rows for a vertex.
std::vector<MeritReport> run_vertex_report(Vertex v, const EvaluationConfig& config);

using ProgressFn = std::function<void(const MeritReport&)>;

/// samples points t = k / (samples - 1) along the edge, evaluated by a pool of
/// workers and returned in increasing t. Throws DomainError for samples < 2.
std::vector<MeritReport> run_edge_sweep(const SweepConfig& cfg, const ProgressFn& progress = {});

struct BoundRow {
  double epsilon = 0.0;
  long long n = 1;
  double delta_star = 0.0;
  double correction = 0.0;
  double raw = 0.0;
  double clamped = 0.0;
};

struct BoundTable {
  UnitaryParams alpha;
  double h2 = 0.0;
  ProbeState probe;
  ConditioningState sigma;
  bool converged = true;
  std::vector<BoundRow> rows;  ///< epsilon-major, n in the given order
};

/// h2 at the given probe (or the optimal probe when none is given), then the
/// bound for every (epsilon, n).
BoundTable run_bound_table(const UnitaryParams& p, std::optional<ProbeState> probe,
                           const std::vector<double>& epsilons, const std::vector<long long>& ns,
                           const OptimizerConfig& config = {});

/// F-bar at the given probe, or maximized over probes when none is given.
AvgQfiResult run_qfi_report(const UnitaryParams& p, std::optional<ProbeState> probe,
                            const FisherConfig& config = {});

}  // namespace qrl
