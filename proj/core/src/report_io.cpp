#include "qrl/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "qrl/error.hpp"

namespace qrl {

namespace {

using nlohmann::json;

std::string num(double x) { return fmt::format("{:.12g}", x); }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json probe_json(const ProbeState& p) { return {{"phi1", p.phi1}, {"phi2", p.phi2}}; }

json alpha_json(const UnitaryParams& p) { return json::array({p.alpha_x, p.alpha_y, p.alpha_z}); }

json qfi_to_json(const UnitaryParams& p, const AvgQfiResult& r) {
  json trace = json::array();
  for (const EtaPoint& pt : r.eta_trace) {
    trace.push_back({{"eta", pt.eta}, {"value", pt.value}});
  }
  const bool divergent = r.classification == Classification::divergent;
  return {{"alpha", alpha_json(p)},
          {"classification", to_string(r.classification)},
          {"value", divergent ? json(nullptr) : json(r.value)},
          {"cr_scalar", std::isinf(r.cr_scalar) ? json("inf") : json(r.cr_scalar)},
          {"slope", r.slope},
          {"probe", probe_json(r.probe_opt)},
          {"converged", r.converged},
          {"eta_trace", trace}};
}

// Nice tick step covering `span` with roughly `target` intervals.
double tick_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0}) {
    if (m * mag >= raw) {
      return m * mag;
    }
  }
  return 10.0 * mag;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

}  // namespace

void write_reports_csv(std::ostream& out, const std::vector<MeritReport>& rows) {
  out << kReportCsvHeader << '\n';
  for (const MeritReport& r : rows) {
    const std::string value = r.value ? num(*r.value) : std::string();
    const std::string phi1 = r.probe ? num(r.probe->phi1) : std::string();
    const std::string phi2 = r.probe ? num(r.probe->phi2) : std::string();
    std::string sigma = ",,";
    if (r.sigma) {
      sigma = fmt::format("{},{},{}", num(r.sigma->bloch[0]), num(r.sigma->bloch[1]), num(r.sigma->bloch[2]));
    }
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{},{:.3f}\n", r.label, num(r.t), num(r.alpha.alpha_x),
               num(r.alpha.alpha_y), num(r.alpha.alpha_z), num(r.alpha_norm), to_string(r.metric), value,
               to_string(r.status), phi1, phi2, sigma, r.wall_time_ms);
  }
}

void write_bound_csv(std::ostream& out, const BoundTable& table) {
  out << kBoundCsvHeader << '\n';
  for (const BoundRow& row : table.rows) {
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{}\n", num(table.alpha.alpha_x), num(table.alpha.alpha_y),
               num(table.alpha.alpha_z), num(table.h2), num(table.probe.phi1), num(table.probe.phi2),
               num(row.epsilon), row.n, num(row.delta_star), num(row.correction), num(row.raw), num(row.clamped));
  }
}

void write_qfi_csv(std::ostream& out, const UnitaryParams& p, const AvgQfiResult& result) {
  out << "alpha_x,alpha_y,alpha_z,probe_phi1,probe_phi2,eta,regularized_value,classification,value,slope,cr_scalar\n";
  const bool divergent = result.classification == Classification::divergent;
  const std::string value = divergent ? std::string() : num(result.value);
  for (const EtaPoint& pt : result.eta_trace) {
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{}\n", num(p.alpha_x), num(p.alpha_y), num(p.alpha_z),
               num(result.probe_opt.phi1), num(result.probe_opt.phi2), num(pt.eta), num(pt.value),
               to_string(result.classification), value, num(result.slope), num(result.cr_scalar));
  }
}

void write_reports_json(std::ostream& out, const std::vector<MeritReport>& rows) {
  json doc = json::array();
  for (const MeritReport& r : rows) {
    json row{{"edge", r.label},
             {"t", r.t},
             {"alpha", alpha_json(r.alpha)},
             {"alpha_norm", r.alpha_norm},
             {"metric", to_string(r.metric)},
             {"value", optional_number(r.value)},
             {"status", to_string(r.status)},
             {"probe", r.probe ? probe_json(*r.probe) : json(nullptr)},
             {"sigma", r.sigma ? json(r.sigma->bloch) : json(nullptr)},
             {"wall_time_ms", r.wall_time_ms}};
    if (!r.message.empty()) {
      row["message"] = r.message;
    }
    doc.push_back(std::move(row));
  }
  out << doc.dump(2) << '\n';
}

void write_bound_json(std::ostream& out, const BoundTable& table) {
  json rows = json::array();
  for (const BoundRow& row : table.rows) {
    rows.push_back({{"epsilon", row.epsilon},
                    {"n", row.n},
                    {"delta_star", row.delta_star},
                    {"correction", row.correction},
                    {"raw", row.raw},
                    {"clamped", row.clamped}});
  }
  const json doc{{"alpha", alpha_json(table.alpha)},
                 {"h2", table.h2},
                 {"probe", probe_json(table.probe)},
                 {"sigma", table.sigma.bloch},
                 {"converged", table.converged},
                 {"rows", rows}};
  out << doc.dump(2) << '\n';
}

void write_qfi_json(std::ostream& out, const UnitaryParams& p, const AvgQfiResult& result) {
  out << qfi_to_json(p, result).dump(2) << '\n';
}

PlotSeries sweep_series(const std::vector<MeritReport>& rows) {
  PlotSeries s;
  if (!rows.empty()) {
    s.name = rows.front().label;
  }
  for (const MeritReport& r : rows) {
    s.x.push_back(r.edge_angle);
    if (r.value) {
      s.y.push_back(*r.value);
    } else if (r.status == Status::divergent) {
      s.y.push_back(std::numeric_limits<double>::infinity());
    } else {
      s.y.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return s;
}

void write_svg(std::ostream& out, const PlotSpec& plot) {
  constexpr double kWidth = 800.0;
  constexpr double kHeight = 600.0;
  constexpr double kLeft = 80.0;
  constexpr double kRight = 160.0;
  constexpr double kTop = 50.0;
  constexpr double kBottom = 70.0;

  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = 0.0;
  double y_hi = -std::numeric_limits<double>::infinity();
  for (const PlotSeries& s : plot.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      if (std::isfinite(s.y[i])) {
        y_lo = std::min(y_lo, s.y[i]);
        y_hi = std::max(y_hi, s.y[i]);
      }
    }
  }
  if (!std::isfinite(x_lo)) {
    x_lo = 0.0;
    x_hi = 1.0;
  }
  if (x_hi <= x_lo) {
    x_hi = x_lo + 1.0;
  }
  if (!std::isfinite(y_hi) || y_hi <= y_lo) {
    y_hi = y_lo + 1.0;
  }
  y_hi += 0.05 * (y_hi - y_lo);

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) {
    if (std::isinf(y)) {
      return y > 0 ? kTop : kTop + ph;
    }
    return kTop + (1.0 - (y - y_lo) / (y_hi - y_lo)) * ph;
  };

  fmt::print(out,
             "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\" "
             "font-family=\"sans-serif\" font-size=\"12\">\n");
  fmt::print(out, "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n");
  fmt::print(out, "<text x=\"{:.1f}\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
             kLeft + pw / 2, escape_xml(plot.title));
  fmt::print(out, "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" stroke=\"black\"/>\n",
             kLeft, kTop, pw, ph);

  const double xs = tick_step(x_hi - x_lo, 8);
  for (double x = std::ceil(x_lo / xs) * xs; x <= x_hi + 1e-12; x += xs) {
    fmt::print(out, "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n", px(x),
               kTop + ph, kTop + ph + 5);
    fmt::print(out, "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.3g}</text>\n", px(x),
               kTop + ph + 20, std::abs(x) < 1e-12 ? 0.0 : x);
  }
  const double ys = tick_step(y_hi - y_lo, 6);
  for (double y = std::ceil(y_lo / ys) * ys; y <= y_hi + 1e-12; y += ys) {
    fmt::print(out, "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"black\"/>\n",
               kLeft - 5, py(y), kLeft);
    fmt::print(out, "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.3g}</text>\n", kLeft - 8, py(y) + 4,
               std::abs(y) < 1e-12 ? 0.0 : y);
  }
  fmt::print(out, "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2,
             kHeight - 20, escape_xml(plot.x_label));
  fmt::print(out, "<text x=\"20\" y=\"{0:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0:.1f})\">{1}</text>\n",
             kTop + ph / 2, escape_xml(plot.y_label));

  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const PlotSeries& s = plot.series[k];
    const char* color = kColors[k % kColors.size()];
    // NaN splits the series into separate polylines.
    std::string points;
    auto flush = [&] {
      if (!points.empty()) {
        fmt::print(out, "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", color, points);
        points.clear();
      }
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isnan(s.y[i])) {
        flush();
        continue;
      }
      points += fmt::format("{}{:.2f},{:.2f}", points.empty() ? "" : " ", px(s.x[i]), py(s.y[i]));
    }
    flush();
    const double ly = kTop + 20.0 + 20.0 * static_cast<double>(k);
    fmt::print(out, "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
               kLeft + pw + 15, ly, kLeft + pw + 45, color);
    fmt::print(out, "<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", kLeft + pw + 52, ly + 4, escape_xml(s.name));
  }
  out << "</svg>\n";
}

bool wants_json(std::string_view path) { return path.size() >= 5 && path.substr(path.size() - 5) == ".json"; }

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw DomainError(fmt::format("cannot open '{}' for writing", path));
  }
  f << contents;
  if (!f) {
    throw DomainError(fmt::format("write to '{}' failed", path));
  }
}

}  // namespace qrl
