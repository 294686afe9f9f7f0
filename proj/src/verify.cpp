#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "mdiqsdc/cli.hpp"
#include "mdiqsdc/dm_oracle.hpp"

namespace mdiqsdc::cli {
namespace {

constexpr double kS = 0.70710678118654752440;
constexpr double kAmplitudeTolerance = 1e-12;
constexpr double kBackendTolerance = 1e-12;
constexpr double kHolevoSlack = 1e-9;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

CheckResult check_bell_states() {
  // Amplitudes over |00>, |01>, |10>, |11> in BellLabel order.
  const std::array<std::array<double, 4>, 4> expected{{
      {0.0, kS, -kS, 0.0},
      {0.0, kS, kS, 0.0},
      {kS, 0.0, 0.0, -kS},
      {kS, 0.0, 0.0, kS},
  }};
  CheckResult r{"bell-states", true, {}};
  for (auto label : kBellLabels) {
    const PureState s = bell_state(label);
    for (std::size_t i = 0; i < 4; ++i)
      if (std::abs(s[i] - Complex{expected[index(label)][i]}) >= kAmplitudeTolerance) {
        r.passed = false;
        r.detail += std::string(to_string(label)) + " amplitude " + std::to_string(i) + " differs; ";
      }
  }
  return r;
}

CheckResult check_decompositions(const VerifyFixtures& fixtures) {
  CheckResult r{"product-decomposition", true, {}};
  for (const auto& entry : fixtures.decompositions) {
    const auto amps = product_decompose(entry.a, entry.b);
    for (auto label : kBellLabels)
      if (std::abs(amps[index(label)] - Complex{entry.amplitudes[index(label)]}) >= kAmplitudeTolerance) {
        r.passed = false;
        r.detail += "|" + std::string(to_string(entry.a)) + std::string(to_string(entry.b)) + "> on " +
                    std::string(to_string(label)) + "; ";
      }
  }
  return r;
}

CheckResult check_swap_table() {
  CheckResult r{"swap-correction", true, {}};
  const auto fidelities = oracle::swap_fidelities();
  const auto derived = oracle::derive_swap_corrections();
  for (auto outcome : kBellLabels) {
    const double f = fidelities[index(outcome)];
    if (std::abs(f - 1.0) > kAmplitudeTolerance) {
      r.passed = false;
      r.detail += std::string(to_string(outcome)) + " fidelity " + num(f) + "; ";
    }
    if (derived[index(outcome)] != swap_correction(outcome)) {
      r.passed = false;
      r.detail += std::string(to_string(outcome)) + " correction mismatch; ";
    }
  }
  return r;
}

CheckResult check_backends() {
  CheckResult r{"backend-equivalence", true, {}};
  double worst = 0.0;
  for (auto kind : {ProtocolKind::MdiTs, ProtocolKind::MdiDl04})
    for (double p : {0.0, 0.1, 0.5, 1.0})
      for (bool attack : {false, true})
        for (auto noise : {NoisePlacement::FirstLegOnly, NoisePlacement::BothLegs})
          for (auto encoding : {PauliLabel::X, PauliLabel::Y, PauliLabel::Z}) {
            ProtocolConfig cfg;
            cfg.kind = kind;
            cfg.p = p;
            cfg.noise = noise;
            cfg.dl04_encoding = encoding;
            cfg.attack.enabled = attack;
            const double d =
                frame_round_distributions(cfg).max_abs_diff(oracle::round_distributions(cfg));
            worst = std::max(worst, d);
            if (d > kBackendTolerance) {
              r.passed = false;
              r.detail += std::string(to_string(kind)) + " p=" + num(p) + (attack ? " attack" : "") + " " +
                          std::string(to_string(noise)) + " U1=" + std::string(to_string(encoding)) +
                          " diff " + num(d) + "; ";
            }
          }
  if (r.passed) r.detail = "max diff " + num(worst);
  return r;
}

CheckResult check_holevo_grid() {
  CheckResult r{"holevo-bound", true, {}};
  double worst = -1.0;
  int points = 0;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4 - i; ++j)
      for (int k = 0; k <= 4 - i - j; ++k) {
        const auto d = BellDiagonal::from({i / 4.0, j / 4.0, k / 4.0, (4 - i - j - k) / 4.0});
        const auto rates = error_rates_from_deltas(d);
        const double chi = oracle::mdi_ts_eve_holevo(d);
        const double bound = eve_info_mdi_ts(rates.eps_z, rates.eps_x);
        worst = std::max(worst, chi - bound);
        ++points;
        if (chi > bound + kHolevoSlack) {
          r.passed = false;
          r.detail += "delta=(" + num(d.deltas[0]) + "," + num(d.deltas[1]) + "," + num(d.deltas[2]) + "," +
                      num(d.deltas[3]) + ") chi " + num(chi) + " > " + num(bound) + "; ";
        }
      }
  if (r.passed) r.detail = std::to_string(points) + " points, max(chi - bound) " + num(worst);
  return r;
}

CheckResult check_channel_identities() {
  CheckResult r{"channel-identities", true, {}};
  const auto source = DensityMatrix::from_pure(bell_state(BellLabel::PsiMinus));
  for (int step = 0; step <= 10; ++step) {
    const double p = step / 10.0;
    const auto noisy = depolarize(source, ChannelParam(p), 1);
    const auto d = pauli_twirl(noisy);
    const std::array<double, 4> expected{1.0 - 0.75 * p, p / 4, p / 4, p / 4};
    const auto rates = error_rates_from_measurements(noisy);
    bool ok = std::abs(rates.eps_z - p / 2) < kAmplitudeTolerance &&
              std::abs(rates.eps_x - p / 2) < kAmplitudeTolerance &&
              std::abs(rates.eps_y - p / 2) < kAmplitudeTolerance;
    for (std::size_t i = 0; i < 4; ++i) ok = ok && std::abs(d.deltas[i] - expected[i]) < kAmplitudeTolerance;
    if (!ok) {
      r.passed = false;
      r.detail += "p=" + num(p) + "; ";
    }
  }
  return r;
}

}  // namespace

VerifyFixtures VerifyFixtures::standard() {
  using P = PhotonState;
  return VerifyFixtures{{
      {P::Zero, P::Zero, {0.0, 0.0, kS, kS}},
      {P::One, P::One, {0.0, 0.0, -kS, kS}},
      {P::Zero, P::One, {kS, kS, 0.0, 0.0}},
      {P::One, P::Zero, {-kS, kS, 0.0, 0.0}},
      {P::Plus, P::Plus, {0.0, kS, 0.0, kS}},
      {P::Minus, P::Minus, {0.0, -kS, 0.0, kS}},
      {P::Plus, P::Minus, {-kS, 0.0, kS, 0.0}},
      {P::Minus, P::Plus, {kS, 0.0, kS, 0.0}},
  }};
}

std::vector<CheckResult> run_verification(const VerifyFixtures& fixtures) {
  const std::vector<std::pair<std::string, std::function<CheckResult()>>> checks{
      {"bell-states", check_bell_states},
      {"product-decomposition", [&] { return check_decompositions(fixtures); }},
      {"swap-correction", check_swap_table},
      {"channel-identities", check_channel_identities},
      {"backend-equivalence", check_backends},
      {"holevo-bound", check_holevo_grid},
  };
  std::vector<CheckResult> results;
  for (const auto& [name, check] : checks) {
    try {
      results.push_back(check());
    } catch (const std::exception& e) {
      results.push_back({name, false, std::string("exception: ") + e.what()});
    }
  }
  return results;
}

}  // namespace mdiqsdc::cli
