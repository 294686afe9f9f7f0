#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "mdiqsdc/cli.hpp"

namespace mdiqsdc::cli {
namespace {

double parse_number(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return v;
}

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string{}; }

std::string fmt(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string{}; }

void check_x(double x) {
  if (!(x >= 0.0 && x <= 0.5)) throw std::invalid_argument("x = p/2 must lie in [0, 0.5]");
}

ProtocolConfig analytic_config(ProtocolKind kind, double x, const SweepOptions& opts) {
  ProtocolConfig cfg;
  cfg.kind = kind;
  cfg.p = 2.0 * x;
  cfg.noise = opts.noise;
  cfg.gains = opts.gains;
  cfg.dl04_encoding = opts.dl04_encoding;
  return cfg;
}

}  // namespace

std::string_view to_string(Curve c) {
  switch (c) {
    case Curve::MdiTs: return "mdi-ts";
    case Curve::TwoStep: return "two-step";
    case Curve::MdiDl04: return "mdi-dl04";
    case Curve::Dl04: return "dl04";
  }
  return "?";
}

std::optional<Curve> parse_curve(std::string_view name) {
  for (Curve c : kAllCurves)
    if (to_string(c) == name) return c;
  return std::nullopt;
}

Grid Grid::parse(std::string_view text) {
  const auto first = text.find(':');
  const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
  if (second == std::string_view::npos) throw std::invalid_argument("grid must be start:stop:step");
  Grid g{parse_number(text.substr(0, first)), parse_number(text.substr(first + 1, second - first - 1)),
         parse_number(text.substr(second + 1))};
  if (!(g.step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(g.start <= g.stop)) throw std::invalid_argument("grid start exceeds stop");
  check_x(g.start);
  check_x(g.stop);
  return g;
}

std::vector<double> Grid::points() const {
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> xs;
  xs.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) xs.push_back(std::min(start + static_cast<double>(i) * step, stop));
  return xs;
}

SweepRow analytic_row(Curve curve, double x, const SweepOptions& opts) {
  check_x(x);
  SweepRow row;
  row.x = x;
  row.p = 2.0 * x;
  row.curve = curve;

  switch (curve) {
    case Curve::MdiTs:
    case Curve::MdiDl04: {
      const auto kind = curve == Curve::MdiTs ? ProtocolKind::MdiTs : ProtocolKind::MdiDl04;
      const auto a = analytic_expectation(analytic_config(kind, x, opts));
      row.eps_z = a.check.eps_z;
      row.eps_x = a.check.eps_x;
      row.eps_y = a.check.eps_y;
      row.h_of_e = a.h_of_e;
      row.eve_info = a.eve_info;
      row.capacity_raw = a.capacity.raw;
      break;
    }
    case Curve::TwoStep: {
      // One channel use: the pair sees a single depolarizing leg.
      const auto errors = depolarizing_pauli_dist(ChannelParam(row.p));
      const auto rates = error_rates_from_deltas(bell_diagonal_from_errors(errors));
      const ErrorVector ev{errors.probs};
      row.eps_z = rates.eps_z;
      row.eps_x = rates.eps_x;
      row.eps_y = rates.eps_y;
      row.h_of_e = shannon_entropy(ev);
      row.eve_info = eve_info_mdi_ts(rates.eps_z, rates.eps_x);
      row.capacity_raw = capacity_two_step_non_mdi(ev, rates.eps_z, rates.eps_x, opts.gains).raw;
      break;
    }
    case Curve::Dl04: {
      const auto errors = depolarizing_pauli_dist(ChannelParam(row.p));
      const auto rates = error_rates_from_deltas(bell_diagonal_from_errors(errors));
      const double e = rates.eps_z;  // bit flips seen by a Z-basis readout
      row.eps_z = rates.eps_z;
      row.eps_x = rates.eps_x;
      row.eps_y = rates.eps_y;
      row.h_of_e = binary_entropy(e);
      row.eve_info = eve_info_dl04_non_mdi(rates.eps_x, rates.eps_z);
      row.capacity_raw = capacity_dl04_non_mdi(e, rates.eps_x, rates.eps_z, opts.gains).raw;
      break;
    }
  }
  row.capacity_clamped = CapacityResult::of(row.capacity_raw).clamped;
  return row;
}

std::vector<SweepRow> run_sweep(const SweepOptions& opts) {
  std::vector<SweepRow> rows;
  rows.reserve(opts.curves.size() * opts.xs.size());
  for (Curve c : opts.curves)
    for (double x : opts.xs) rows.push_back(analytic_row(c, x, opts));
  return rows;
}

std::optional<double> zero_crossing(Curve curve, const SweepOptions& opts) {
  return find_zero_crossing([&](double x) { return analytic_row(curve, x, opts).capacity_raw; }, 0.0, 0.5, 1e-6);
}

SweepRow analytic_row(const ProtocolConfig& cfg) {
  const auto a = analytic_expectation(cfg);
  SweepRow row;
  row.x = cfg.p / 2.0;
  row.p = cfg.p;
  row.curve = cfg.kind == ProtocolKind::MdiTs ? Curve::MdiTs : Curve::MdiDl04;
  row.eps_z = a.check.eps_z;
  row.eps_x = a.check.eps_x;
  row.eps_y = a.check.eps_y;
  row.h_of_e = a.h_of_e;
  row.eve_info = a.eve_info;
  row.capacity_raw = a.capacity.raw;
  row.capacity_clamped = a.capacity.clamped;
  return row;
}

SweepRow montecarlo_row(const ProtocolConfig& cfg, const TranscriptStats& stats) {
  SweepRow row;
  row.x = cfg.p / 2.0;
  row.p = cfg.p;
  row.curve = cfg.kind == ProtocolKind::MdiTs ? Curve::MdiTs : Curve::MdiDl04;
  row.montecarlo = true;
  row.seed = cfg.seed;
  row.rounds = stats.rounds;
  auto value = [](const RateEstimate& r) { return r.available() ? std::optional(r.value) : std::nullopt; };
  row.eps_z = value(stats.eps_z);
  row.eps_x = value(stats.eps_x);
  row.eps_y = value(stats.eps_y);
  if (cfg.kind == ProtocolKind::MdiTs) {
    if (stats.message_errors) row.h_of_e = shannon_entropy(*stats.message_errors);
    if (row.eps_z && row.eps_x) row.eve_info = eve_info_mdi_ts(*row.eps_z, *row.eps_x);
  } else {
    if (stats.bit_error.available()) row.h_of_e = binary_entropy(stats.bit_error.value);
    const auto& eu = stats.rate(dl04_leakage_basis(cfg.dl04_encoding));
    if (eu.available()) row.eve_info = binary_entropy(eu.value);
  }
  if (stats.capacity) {
    row.capacity_raw = stats.capacity->raw;
    row.capacity_clamped = stats.capacity->clamped;
  }
  return row;
}

std::string csv_header() {
  return "x,p,protocol,eps_z,eps_x,eps_y,H_of_E,eve_info,capacity_raw,capacity_clamped,source,seed,rounds\n";
}

std::string csv_line(const SweepRow& r) {
  std::string line;
  for (const std::string& field :
       {fmt(r.x), fmt(r.p), std::string(to_string(r.curve)), fmt(r.eps_z), fmt(r.eps_x), fmt(r.eps_y),
        fmt(r.h_of_e), fmt(r.eve_info), fmt(r.capacity_raw), fmt(r.capacity_clamped),
        std::string(r.montecarlo ? "montecarlo" : "analytic"), fmt(r.seed), fmt(r.rounds)}) {
    if (!line.empty()) line += ',';
    line += field;
  }
  return line + '\n';
}

std::string to_csv(std::span<const SweepRow> rows) {
  std::string out = csv_header();
  for (const auto& r : rows) out += csv_line(r);
  return out;
}

std::string render_svg(std::span<const SweepRow> rows) {
  constexpr double kWidth = 720, kHeight = 480;
  constexpr double kLeft = 70, kRight = 170, kTop = 30, kBottom = 60;
  constexpr std::array<const char*, 4> kColors{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};

  double x_min = 0.0, x_max = 0.5, y_max = 1.0;
  if (!rows.empty()) {
    x_min = x_max = rows.front().x;
    for (const auto& r : rows) {
      x_min = std::min(x_min, r.x);
      x_max = std::max(x_max, r.x);
      y_max = std::max(y_max, r.capacity_clamped);
    }
  }
  if (x_max <= x_min) x_max = x_min + 1e-3;
  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + (1.0 - y / y_max) * plot_h; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
  svg += "<metadata><![CDATA[\n" + to_csv(rows) + "]]></metadata>\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) + "\" fill=\"white\"/>\n";

  // Axes, ticks and labels.
  svg += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(py(0)) + "\" x2=\"" + fmt(kLeft + plot_w) + "\" y2=\"" +
         fmt(py(0)) + "\"/>\n";
  svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(kLeft) + "\" y2=\"" +
         fmt(py(0)) + "\"/>\n";
  svg += "</g>\n<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double x = x_min + (x_max - x_min) * i / 5.0;
    svg += "<text x=\"" + fmt(px(x)) + "\" y=\"" + fmt(py(0) + 18) + "\" text-anchor=\"middle\">" + fmt(x) +
           "</text>\n";
    const double y = y_max * i / 5.0;
    svg += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(py(y) + 4) + "\" text-anchor=\"end\">" + fmt(y) +
           "</text>\n";
  }
  svg += "<text x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"" + fmt(kHeight - 15) +
         "\" text-anchor=\"middle\">channel parameter p/2</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt(kTop + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         fmt(kTop + plot_h / 2) + ")\">secrecy capacity (bits)</text>\n";
  svg += "</g>\n";

  // One polyline per (curve, source) in order of first appearance.
  std::vector<std::pair<Curve, bool>> series;
  for (const auto& r : rows)
    if (std::find(series.begin(), series.end(), std::pair{r.curve, r.montecarlo}) == series.end())
      series.emplace_back(r.curve, r.montecarlo);
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto [curve, mc] = series[s];
    const std::string name = std::string(to_string(curve)) + (mc ? " (montecarlo)" : "");
    const char* color = kColors[static_cast<std::size_t>(curve)];
    std::string points;
    for (const auto& r : rows) {
      if (r.curve != curve || r.montecarlo != mc) continue;
      if (!points.empty()) points += ' ';
      points += fmt(px(r.x)) + "," + fmt(py(r.capacity_clamped));
    }
    svg += "<polyline data-curve=\"" + name + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"" +
           (mc ? " stroke-dasharray=\"6 3\"" : "") + " points=\"" + points + "\"/>\n";
    const double ly = kTop + 10 + 20.0 * static_cast<double>(s);
    svg += "<line x1=\"" + fmt(kWidth - kRight + 15) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
           fmt(kWidth - kRight + 40) + "\" y2=\"" + fmt(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(kWidth - kRight + 45) + "\" y=\"" + fmt(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + name + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace mdiqsdc::cli
