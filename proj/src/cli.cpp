#include "mdiqsdc/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <algorithm>
#include <ostream>
#include <sstream>

namespace mdiqsdc::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags shared by every subcommand.
struct Flags {
  std::string protocol;
  std::optional<double> p;
  std::optional<double> x;
  std::string grid;
  std::uint64_t rounds = 100000;
  std::uint64_t seed = 1;
  double check_fraction = 0.5;
  std::string noise = "first-leg-only";
  std::string encoding = "y";
  std::string attack = "none";
  double q = 1.0;
  double eta = 1.0;
  std::string csv;
  std::string svg;
  std::string config;
};

void add_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--protocol", f.protocol, "mdi-ts | mdi-dl04 | two-step | dl04")
      ->check(CLI::IsMember({"mdi-ts", "mdi-dl04", "two-step", "dl04"}));
  auto* p = cmd.add_option("--p", f.p, "depolarizing parameter of each leg");
  auto* x = cmd.add_option("--x", f.x, "x = p/2");
  p->excludes(x);
  cmd.add_option("--grid", f.grid, "sweep grid over x as start:stop:step");
  cmd.add_option("--rounds", f.rounds, "Monte Carlo rounds");
  cmd.add_option("--seed", f.seed, "RNG seed");
  cmd.add_option("--check-fraction", f.check_fraction, "probability that a round is a security check");
  cmd.add_option("--noise", f.noise, "noise placement")->check(CLI::IsMember({"first-leg-only", "both-legs"}));
  cmd.add_option("--encoding", f.encoding, "MDI-DL04 encoding U1")->check(CLI::IsMember({"x", "y", "z"}));
  cmd.add_option("--attack", f.attack, "adversary model")->check(CLI::IsMember({"none", "intercept-resend"}));
  cmd.add_option("--q", f.q, "gain Q");
  cmd.add_option("--eta", f.eta, "gain gap eta");
  cmd.add_option("--csv", f.csv, "CSV output path (default stdout)");
  cmd.add_option("--svg", f.svg, "SVG output path");
  cmd.add_option("--config", f.config, "file of key = value lines; flags take precedence");
}

NoisePlacement parse_noise(const std::string& s) {
  return s == "both-legs" ? NoisePlacement::BothLegs : NoisePlacement::FirstLegOnly;
}

PauliLabel parse_encoding(const std::string& s) {
  if (s == "x") return PauliLabel::X;
  if (s == "z") return PauliLabel::Z;
  return PauliLabel::Y;
}

// Reads "key = value" lines, skipping blanks and '#' comments.
std::vector<std::string> config_arguments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    if (key.empty() || key == "config") throw UsageError(path + ":" + std::to_string(lineno) + ": invalid key");
    args.push_back("--" + key);
    args.push_back(trim(line.substr(eq + 1)));
  }
  return args;
}

// Splices config-file arguments in front of the command-line flags so that
// the later, explicit flags win.
std::vector<std::string> expand_config(std::span<const std::string> args) {
  std::vector<std::string> out(args.begin(), args.end());
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      continue;
    }
    const auto extra = config_arguments(path);
    out.insert(out.begin() + (out.empty() ? 0 : 1), extra.begin(), extra.end());
    break;
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open " + path + " for writing");
  f << content;
  f.flush();
  if (!f) throw UsageError("failed writing " + path);
}

ProtocolConfig protocol_config(const Flags& f) {
  ProtocolConfig cfg;
  if (f.protocol.empty() || f.protocol == "mdi-ts") {
    cfg.kind = ProtocolKind::MdiTs;
  } else if (f.protocol == "mdi-dl04") {
    cfg.kind = ProtocolKind::MdiDl04;
  } else {
    throw UsageError("simulate supports --protocol mdi-ts or mdi-dl04");
  }
  cfg.p = f.p ? *f.p : f.x ? 2.0 * *f.x : 0.0;
  cfg.rounds = f.rounds;
  cfg.seed = f.seed;
  cfg.check_fraction = f.check_fraction;
  cfg.noise = parse_noise(f.noise);
  cfg.dl04_encoding = parse_encoding(f.encoding);
  cfg.attack.enabled = f.attack == "intercept-resend";
  cfg.gains = Gains{.q = f.q, .eta = f.eta};
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

std::string plus_minus(const char* name, const RateEstimate& r) {
  char buf[128];
  if (!r.available()) {
    std::snprintf(buf, sizeof buf, "%s = n/a (no checks)\n", name);
  } else {
    std::snprintf(buf, sizeof buf, "%s = %.6f +/- %.6f (%llu trials)\n", name, r.value, r.std_error,
                  static_cast<unsigned long long>(r.trials));
  }
  return buf;
}

int cmd_sweep(const Flags& f, std::ostream& out, std::ostream& err) {
  SweepOptions opts;
  if (!f.protocol.empty()) opts.curves = {*parse_curve(f.protocol)};
  try {
    if (f.p || f.x) {
      opts.xs = {f.p ? *f.p / 2.0 : *f.x};
    } else if (!f.grid.empty()) {
      opts.xs = Grid::parse(f.grid).points();
    }
    opts.noise = parse_noise(f.noise);
    opts.dl04_encoding = parse_encoding(f.encoding);
    opts.gains = Gains{.q = f.q, .eta = f.eta};
    opts.gains.validate();
    const auto rows = run_sweep(opts);
    const std::string csv = to_csv(rows);
    std::ostream& summary = f.csv.empty() ? err : out;
    if (f.csv.empty()) {
      out << csv;
    } else {
      write_file(f.csv, csv);
    }
    if (!f.svg.empty()) write_file(f.svg, render_svg(rows));
    for (Curve c : opts.curves) {
      const auto crossing = zero_crossing(c, opts);
      char buf[96];
      if (crossing) {
        std::snprintf(buf, sizeof buf, "zero-crossing %s: x* = %.6f\n", std::string(to_string(c)).c_str(),
                      *crossing);
      } else {
        std::snprintf(buf, sizeof buf, "zero-crossing %s: none in [0, 0.5]\n", std::string(to_string(c)).c_str());
      }
      summary << buf;
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  return kSuccess;
}

int cmd_simulate(const Flags& f, std::ostream& out, std::ostream& err) {
  const ProtocolConfig cfg = protocol_config(f);
  const TranscriptStats stats = run_protocol(cfg);
  std::ostream& summary = f.csv.empty() ? err : out;

  summary << "protocol " << to_string(cfg.kind) << ", p = " << cfg.p << ", rounds " << stats.rounds << ", seed "
          << cfg.seed << ", noise " << to_string(cfg.noise)
          << (cfg.attack.enabled ? ", attack intercept-resend" : ", attack none") << '\n';
  summary << plus_minus("eps_z", stats.eps_z) << plus_minus("eps_x", stats.eps_x)
          << plus_minus("eps_y", stats.eps_y);
  if (cfg.kind == ProtocolKind::MdiDl04) summary << plus_minus("bit error e", stats.bit_error);

  if (!stats.capacity) {
    err << "insufficient statistics: " << stats.unavailable_reason << '\n';
    return kInsufficientStatistics;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "capacity = %.6f +/- %.6f (analytic %.6f)\n", stats.capacity->raw,
                stats.capacity_std_error, analytic_expectation(cfg).capacity.raw);
  summary << buf;

  const std::vector<SweepRow> rows{montecarlo_row(cfg, stats), analytic_row(cfg)};
  const std::string csv = to_csv(rows);
  if (f.csv.empty()) {
    out << csv;
  } else {
    write_file(f.csv, csv);
  }
  if (!f.svg.empty()) write_file(f.svg, render_svg(rows));
  return kSuccess;
}

int cmd_verify(std::ostream& out) {
  bool ok = true;
  for (const auto& r : run_verification()) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) out << ": " << r.detail;
    out << '\n';
    ok = ok && r.passed;
  }
  return ok ? kSuccess : kVerificationFailed;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulator for measurement-device-independent QSDC protocols", "mdiqsdc"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  Flags flags;
  auto* sweep = app.add_subcommand("sweep", "closed-form capacity curves over x = p/2");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo protocol run");
  auto* verify = app.add_subcommand("verify", "oracle equivalence and invariant checks");
  for (auto* cmd : {sweep, simulate, verify}) add_flags(*cmd, flags);

  try {
    std::vector<std::string> argv = expand_config(args);
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kSuccess : kUsageError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*sweep) return cmd_sweep(flags, out, err);
    if (*simulate) return cmd_simulate(flags, out, err);
    return cmd_verify(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace mdiqsdc::cli
