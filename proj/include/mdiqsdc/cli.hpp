#pragma once

// Front end: parameter sweeps of the closed-form capacities, Monte Carlo
// runs, and the oracle verification suite, with CSV and SVG output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdiqsdc/protocol_sim.hpp"

namespace mdiqsdc::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kUsageError = 2, kInsufficientStatistics = 3 };

enum class Curve : std::uint8_t { MdiTs, TwoStep, MdiDl04, Dl04 };

inline constexpr std::array<Curve, 4> kAllCurves{Curve::MdiTs, Curve::TwoStep, Curve::MdiDl04, Curve::Dl04};

std::string_view to_string(Curve c);
std::optional<Curve> parse_curve(std::string_view name);

struct SweepRow {
  double x = 0.0;  // p / 2
  double p = 0.0;
  Curve curve = Curve::MdiTs;
  std::optional<double> eps_z, eps_x, eps_y;
  std::optional<double> h_of_e;
  std::optional<double> eve_info;
  double capacity_raw = 0.0;
  double capacity_clamped = 0.0;
  bool montecarlo = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> rounds;
};

/// Inclusive grid over x = p/2.
struct Grid {
  double start = 0.0;
  double stop = 0.5;
  double step = 0.005;

  // Parses "start:stop:step"; throws std::invalid_argument.
  static Grid parse(std::string_view text);
  std::vector<double> points() const;
};

struct SweepOptions {
  std::vector<Curve> curves{kAllCurves.begin(), kAllCurves.end()};
  std::vector<double> xs = Grid{}.points();
  NoisePlacement noise = NoisePlacement::FirstLegOnly;
  Gains gains{};
  PauliLabel dl04_encoding = PauliLabel::Y;
};

// Closed-form row for one curve at x = p/2 (x in [0, 1/2]).
SweepRow analytic_row(Curve curve, double x, const SweepOptions& opts);
std::vector<SweepRow> run_sweep(const SweepOptions& opts);

// First x in [0, 1/2] where the raw capacity reaches zero, by bisection to 1e-6.
std::optional<double> zero_crossing(Curve curve, const SweepOptions& opts);

SweepRow montecarlo_row(const ProtocolConfig& cfg, const TranscriptStats& stats);
SweepRow analytic_row(const ProtocolConfig& cfg);

// Comma-separated, 12 significant digits, LF endings.
std::string csv_header();
std::string csv_line(const SweepRow& row);
std::string to_csv(std::span<const SweepRow> rows);

// Line plot of the clamped capacities; the CSV is embedded verbatim.
std::string render_svg(std::span<const SweepRow> rows);

/// One named check of the verification suite.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Expected product-state decompositions in BellLabel order.
struct DecompositionEntry {
  PhotonState a;
  PhotonState b;
  std::array<double, 4> amplitudes;
};

struct VerifyFixtures {
  std::vector<DecompositionEntry> decompositions;

  static VerifyFixtures standard();
};

std::vector<CheckResult> run_verification(const VerifyFixtures& fixtures = VerifyFixtures::standard());

// Entry point shared by the executable and the tests; `args` excludes the
// program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace mdiqsdc::cli
