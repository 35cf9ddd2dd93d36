#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qrl/fisher.hpp"
#include "qrl/harness.hpp"

namespace qrl {

inline constexpr std::string_view kReportCsvHeader =
    "edge,t,alpha_x,alpha_y,alpha_z,alpha_norm,metric,value,status,probe_phi1,probe_phi2,"
    "sigma_p1,sigma_p2,sigma_p3,wall_time_ms";

inline constexpr std::string_view kBoundCsvHeader =
    "alpha_x,alpha_y,alpha_z,h2,probe_phi1,probe_phi2,epsilon,n,delta_star,correction,raw,clamped";

/// Numbers use a fixed 12 significant digit format so reruns compare byte
/// for byte; only wall_time_ms varies between runs.
void write_reports_csv(std::ostream& out, const std::vector<MeritReport>& rows);
void write_bound_csv(std::ostream& out, const BoundTable& table);
void write_qfi_csv(std::ostream& out, const UnitaryParams& p, const AvgQfiResult& result);

void write_reports_json(std::ostream& out, const std::vector<MeritReport>& rows);
void write_bound_json(std::ostream& out, const BoundTable& table);
void write_qfi_json(std::ostream& out, const UnitaryParams& p, const AvgQfiResult& result);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;  ///< NaN breaks the polyline, +inf pins to the top edge
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

/// 800x600 SVG: linear axes with ticks, one polyline per series, legend.
void write_svg(std::ostream& out, const PlotSpec& plot);

/// One series from a sweep, value against edge_angle. Divergent points are
/// mapped to +inf, failures to NaN.
PlotSeries sweep_series(const std::vector<MeritReport>& rows);

/// True when path ends in ".json".
bool wants_json(std::string_view path);

/// Throws DomainError if the file cannot be written.
void write_file(const std::string& path, const std::string& contents);

}  // namespace qrl
