#include "mdiqsdc/protocol_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdiqsdc {
namespace {

// Cumulative table for sampling a Pauli error with one uniform draw.
class PauliSampler {
 public:
  explicit PauliSampler(const PauliDistribution& d) {
    double acc = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      acc += d.probs[i];
      cumulative_[i] = acc;
    }
  }

  PauliLabel operator()(Rng& rng) const {
    const double u = rng.uniform();
    std::size_t i = 0;
    while (i < 3 && u >= cumulative_[i]) ++i;
    return static_cast<PauliLabel>(i);
  }

 private:
  std::array<double, 3> cumulative_{};
};

std::uint8_t flips(PauliLabel frame, Basis b) { return anticommutes(frame, basis_pauli(b)) ? 1 : 0; }

// Slope of the binary entropy; zero at the endpoints where the binomial
// variance vanishes anyway.
double entropy_slope(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return std::log2((1.0 - x) / x);
}

double rate_variance(const RateEstimate& r) { return r.std_error * r.std_error; }

// Frame of the retained pair after the swap correction.
PauliLabel corrected_frame(BellLabel outcome, PauliLabel leg_a, PauliLabel leg_b) {
  return compose(compose(compose(bell_frame(outcome), leg_a), leg_b), swap_correction(outcome));
}

PauliDistribution first_leg_a(const ProtocolConfig& cfg) {
  const auto dep = depolarizing_pauli_dist(ChannelParam(cfg.p));
  return cfg.attack.enabled ? convolve(dep, intercept_resend_distribution(cfg.attack.bases)) : dep;
}

}  // namespace

std::string_view to_string(ProtocolKind k) { return k == ProtocolKind::MdiTs ? "mdi-ts" : "mdi-dl04"; }

std::string_view to_string(NoisePlacement n) {
  return n == NoisePlacement::FirstLegOnly ? "first-leg-only" : "both-legs";
}

std::string_view to_string(Basis b) {
  switch (b) {
    case Basis::Z: return "Z";
    case Basis::X: return "X";
    case Basis::Y: return "Y";
  }
  return "?";
}

void ProtocolConfig::validate() const {
  if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
  if (!(check_fraction > 0.0 && check_fraction < 1.0))
    throw std::invalid_argument("check fraction must lie in (0,1)");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("channel parameter must lie in [0,1]");
  if (!(transmittance > 0.0 && transmittance <= 1.0))
    throw std::invalid_argument("transmittance must lie in (0,1]");
  if (dl04_encoding == PauliLabel::I) throw std::invalid_argument("MDI-DL04 encoding U1 must not be the identity");
  if (attack.enabled && attack.bases.empty()) throw std::invalid_argument("attack needs at least one basis");
  gains.validate();
}

RateEstimate& TranscriptStats::rate(Basis b) {
  switch (b) {
    case Basis::Z: return eps_z;
    case Basis::X: return eps_x;
    case Basis::Y: return eps_y;
  }
  throw std::invalid_argument("unknown basis");
}

const RateEstimate& TranscriptStats::rate(Basis b) const { return const_cast<TranscriptStats&>(*this).rate(b); }

RateEstimate RateEstimate::from_counts(std::uint64_t errors, std::uint64_t trials) {
  RateEstimate r{.trials = trials, .errors = errors};
  if (trials == 0) return r;
  r.value = static_cast<double>(errors) / static_cast<double>(trials);
  r.std_error = std::sqrt(r.value * (1.0 - r.value) / static_cast<double>(trials));
  return r;
}

PauliLabel swap_correction(BellLabel outcome) { return bell_frame(outcome); }

Basis dl04_measurement_basis(PauliLabel encoding) {
  switch (encoding) {
    case PauliLabel::X: return Basis::Z;
    case PauliLabel::Z: return Basis::X;
    case PauliLabel::Y: return Basis::Z;  // i sigma_y flips both Z and X outcomes
    case PauliLabel::I: break;
  }
  throw std::invalid_argument("MDI-DL04 encoding U1 must not be the identity");
}

Basis dl04_leakage_basis(PauliLabel encoding) {
  switch (encoding) {
    case PauliLabel::X: return Basis::X;
    case PauliLabel::Y: return Basis::Y;
    case PauliLabel::Z: return Basis::Z;
    case PauliLabel::I: break;
  }
  throw std::invalid_argument("MDI-DL04 encoding U1 must not be the identity");
}

std::vector<Basis> check_bases(const ProtocolConfig& cfg) {
  if (cfg.kind == ProtocolKind::MdiDl04 && cfg.dl04_encoding == PauliLabel::Y)
    return {Basis::Z, Basis::X, Basis::Y};
  return {Basis::Z, Basis::X};
}

PauliLabel eve_intercept_resend(PauliLabel in_flight_error, std::span<const Basis> bases, Rng& rng) {
  const Basis b = bases[rng.below(static_cast<std::uint32_t>(bases.size()))];
  return rng.bit() ? compose(in_flight_error, basis_pauli(b)) : in_flight_error;
}

PauliDistribution intercept_resend_distribution(std::span<const Basis> bases) {
  if (bases.empty()) throw std::invalid_argument("attack needs at least one basis");
  PauliDistribution d{{0.5, 0.0, 0.0, 0.0}};
  const double share = 0.5 / static_cast<double>(bases.size());
  for (Basis b : bases) d.probs[index(basis_pauli(b))] += share;
  return d;
}

// ---------------------------------------------------------------------------
// Monte Carlo

std::vector<RoundRecord> simulate_rounds(const ProtocolConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const PauliSampler leg(depolarizing_pauli_dist(ChannelParam(cfg.p)));
  const auto bases = check_bases(cfg);
  const bool both_legs = cfg.noise == NoisePlacement::BothLegs;
  const bool lossy = cfg.transmittance < 1.0;
  const Basis dl04_basis =
      cfg.kind == ProtocolKind::MdiDl04 ? dl04_measurement_basis(cfg.dl04_encoding) : Basis::Z;

  std::vector<RoundRecord> records;
  records.reserve(cfg.rounds);
  for (std::uint64_t round = 0; round < cfg.rounds; ++round) {
    RoundRecord rec;
    PauliLabel leg_a = leg(rng);
    const PauliLabel leg_b = leg(rng);
    if (cfg.attack.enabled) leg_a = eve_intercept_resend(leg_a, cfg.attack.bases, rng);
    rec.swap_outcome = static_cast<BellLabel>(rng.below(4));
    const PauliLabel frame = corrected_frame(rec.swap_outcome, leg_a, leg_b);

    if (rng.uniform() < cfg.check_fraction) {
      rec.role = RoundRole::Check;
      rec.basis = bases[rng.below(static_cast<std::uint32_t>(bases.size()))];
      rec.alice_bit = rng.bit();
      // |psi-> is anti-correlated in every basis.
      rec.bob_bit = rec.alice_bit ^ 1 ^ flips(frame, rec.basis);
      records.push_back(rec);
      continue;
    }

    rec.role = RoundRole::Message;
    if (cfg.kind == ProtocolKind::MdiTs) {
      const auto symbol = static_cast<PauliLabel>(rng.below(4));
      const auto cover = static_cast<PauliLabel>(rng.below(4));
      PauliLabel f = compose(compose(frame, symbol), cover);
      if (both_legs) {
        f = compose(f, leg(rng));
        f = compose(f, leg(rng));
      }
      rec.encoded = static_cast<std::uint8_t>(symbol);
      rec.announced = bell_from_frame(f);
      const bool delivered = !lossy || rng.uniform() < cfg.transmittance * cfg.transmittance;
      if (delivered) {
        const PauliLabel seen = bell_frame(rec.announced);
        rec.decoded = static_cast<std::uint8_t>(cfg.cover_bookkeeping ? compose(seen, cover) : seen);
      }
    } else {
      const std::uint8_t bit = rng.bit();
      PauliLabel f = bit ? compose(frame, cfg.dl04_encoding) : frame;
      if (both_legs) f = compose(f, leg(rng));
      rec.encoded = bit;
      rec.basis = dl04_basis;
      rec.alice_bit = rng.bit();
      rec.bob_bit = rec.alice_bit ^ 1 ^ flips(f, dl04_basis);
      const bool delivered = !lossy || rng.uniform() < cfg.transmittance;
      if (delivered) rec.decoded = rec.alice_bit ^ rec.bob_bit ^ 1;
    }
    records.push_back(rec);
  }
  return records;
}

TranscriptStats estimate_stats(std::span<const RoundRecord> records, const ProtocolConfig& cfg) {
  if (records.empty()) throw std::invalid_argument("no rounds to estimate from");
  TranscriptStats st;
  st.kind = cfg.kind;
  st.rounds = records.size();

  std::array<std::uint64_t, 3> checks{}, disagreements{};
  std::uint64_t bit_errors = 0;
  for (const auto& r : records) {
    if (r.role == RoundRole::Check) {
      ++st.check_rounds;
      const auto b = static_cast<std::size_t>(r.basis);
      ++checks[b];
      // Agreement means anti-parallel outcomes.
      if (r.alice_bit == r.bob_bit) ++disagreements[b];
      continue;
    }
    ++st.message_rounds;
    if (!r.decoded) continue;
    ++st.delivered_messages;
    const std::uint8_t diff = *r.decoded ^ r.encoded;
    if (cfg.kind == ProtocolKind::MdiTs) {
      ++st.symbol_error_counts[diff];
    } else if (diff != 0) {
      ++bit_errors;
    }
  }
  for (Basis b : kAllBases) {
    const auto i = static_cast<std::size_t>(b);
    st.rate(b) = RateEstimate::from_counts(disagreements[i], checks[i]);
  }
  st.gain = st.message_rounds ? static_cast<double>(st.delivered_messages) / static_cast<double>(st.message_rounds)
                              : 0.0;

  std::vector<Basis> required;
  if (cfg.kind == ProtocolKind::MdiTs) {
    required = {Basis::Z, Basis::X};
  } else {
    required = {dl04_leakage_basis(cfg.dl04_encoding)};
  }
  for (Basis b : required)
    if (!st.rate(b).available())
      st.unavailable_reason += "no check rounds in basis " + std::string(to_string(b)) + "; ";
  if (st.delivered_messages == 0) st.unavailable_reason += "no decoded message rounds; ";

  const double n_msg = static_cast<double>(st.delivered_messages);
  if (cfg.kind == ProtocolKind::MdiTs && st.delivered_messages > 0) {
    std::array<double, 4> probs{};
    for (std::size_t i = 0; i < 4; ++i) probs[i] = static_cast<double>(st.symbol_error_counts[i]) / n_msg;
    st.message_errors = ErrorVector{probs};
  } else if (cfg.kind == ProtocolKind::MdiDl04) {
    st.bit_error = RateEstimate::from_counts(bit_errors, st.delivered_messages);
  }

  if (!st.unavailable_reason.empty()) {
    st.unavailable_reason.resize(st.unavailable_reason.size() - 2);
    return st;
  }

  const Gains g{.q = cfg.gains.q * st.gain, .eta = cfg.gains.eta};
  if (cfg.kind == ProtocolKind::MdiTs) {
    const auto& ev = *st.message_errors;
    st.capacity = capacity_mdi_ts(ev, st.eps_z.value, st.eps_x.value, g);
    double sum_sq = 0.0;
    for (double p : ev.probs)
      if (p > 0.0) sum_sq += p * std::log2(p) * std::log2(p);
    const double h = shannon_entropy(ev);
    const double var_h = std::max(sum_sq - h * h, 0.0) / n_msg;
    const double var_z = std::pow(entropy_slope(st.eps_z.value), 2) * rate_variance(st.eps_z);
    const double var_x = std::pow(entropy_slope(st.eps_x.value), 2) * rate_variance(st.eps_x);
    st.capacity_std_error = g.q * std::sqrt(var_h + g.eta * g.eta * (var_z + var_x));
  } else {
    const auto& eu = st.rate(dl04_leakage_basis(cfg.dl04_encoding));
    st.capacity = capacity_mdi_dl04(st.bit_error.value, eu.value, g);
    const double var_e = std::pow(entropy_slope(st.bit_error.value), 2) * rate_variance(st.bit_error);
    const double var_u = std::pow(entropy_slope(eu.value), 2) * rate_variance(eu);
    st.capacity_std_error = g.q * std::sqrt(var_e + g.eta * g.eta * var_u);
  }
  return st;
}

TranscriptStats run_mdi_ts(const ProtocolConfig& cfg) {
  if (cfg.kind != ProtocolKind::MdiTs) throw std::invalid_argument("configuration is not for MDI-TS");
  return estimate_stats(simulate_rounds(cfg), cfg);
}

TranscriptStats run_mdi_dl04(const ProtocolConfig& cfg) {
  if (cfg.kind != ProtocolKind::MdiDl04) throw std::invalid_argument("configuration is not for MDI-DL04");
  return estimate_stats(simulate_rounds(cfg), cfg);
}

TranscriptStats run_protocol(const ProtocolConfig& cfg) {
  return cfg.kind == ProtocolKind::MdiTs ? run_mdi_ts(cfg) : run_mdi_dl04(cfg);
}

// ---------------------------------------------------------------------------
// Exact Pauli-frame model

AnalyticExpectation analytic_expectation(const ProtocolConfig& cfg) {
  cfg.validate();
  const auto dep = depolarizing_pauli_dist(ChannelParam(cfg.p));
  const bool both_legs = cfg.noise == NoisePlacement::BothLegs;

  AnalyticExpectation out;
  out.pair_errors = convolve(first_leg_a(cfg), dep);
  out.check = error_rates_from_deltas(bell_diagonal_from_errors(out.pair_errors));
  const Gains g = cfg.gains;

  if (cfg.kind == ProtocolKind::MdiTs) {
    out.message_errors = both_legs ? convolve(out.pair_errors, convolve(dep, dep)) : out.pair_errors;
    // Symbol differences 00, 01, 10, 11 correspond to I, X, Y, Z.
    out.symbol_errors = ErrorVector{out.message_errors.probs};
    out.h_of_e = shannon_entropy(out.symbol_errors);
    out.eve_info = eve_info_mdi_ts(out.check.eps_z, out.check.eps_x);
    out.capacity = capacity_mdi_ts(out.symbol_errors, out.check.eps_z, out.check.eps_x,
                                   Gains{.q = g.q * cfg.transmittance * cfg.transmittance, .eta = g.eta});
  } else {
    out.message_errors = both_legs ? convolve(out.pair_errors, dep) : out.pair_errors;
    const PauliLabel measured = basis_pauli(dl04_measurement_basis(cfg.dl04_encoding));
    for (auto p : kPauliLabels)
      if (anticommutes(p, measured)) out.bit_error += out.message_errors[p];
    const Basis leak = dl04_leakage_basis(cfg.dl04_encoding);
    out.eps_u = leak == Basis::Z ? out.check.eps_z : leak == Basis::X ? out.check.eps_x : out.check.eps_y;
    out.h_of_e = binary_entropy(out.bit_error);
    out.eve_info = binary_entropy(out.eps_u);
    out.capacity =
        capacity_mdi_dl04(out.bit_error, out.eps_u, Gains{.q = g.q * cfg.transmittance, .eta = g.eta});
  }
  return out;
}

double RoundDistributions::max_abs_diff(const RoundDistributions& other) const {
  double worst = 0.0;
  auto visit = [&worst](const auto& a, const auto& b, auto&& self) -> void {
    if constexpr (std::is_same_v<std::decay_t<decltype(a)>, double>) {
      worst = std::max(worst, std::abs(a - b));
    } else {
      for (std::size_t i = 0; i < a.size(); ++i) self(a[i], b[i], self);
    }
  };
  visit(check, other.check, visit);
  visit(ts_message, other.ts_message, visit);
  visit(dl04_message, other.dl04_message, visit);
  return worst;
}

RoundDistributions frame_round_distributions(const ProtocolConfig& cfg) {
  cfg.validate();
  const auto dep = depolarizing_pauli_dist(ChannelParam(cfg.p));
  const auto leg_a = first_leg_a(cfg);
  const bool both_legs = cfg.noise == NoisePlacement::BothLegs;
  const PauliDistribution second_a = both_legs ? dep : PauliDistribution::identity();
  const PauliDistribution second_b = second_a;
  const Basis dl04_basis = dl04_measurement_basis(cfg.dl04_encoding);

  RoundDistributions out;
  for (auto outcome : kBellLabels) {
    const auto c = index(outcome);
    for (auto ea : kPauliLabels) {
      for (auto eb : kPauliLabels) {
        const double w = 0.25 * leg_a[ea] * dep[eb];
        if (w == 0.0) continue;
        const PauliLabel frame = corrected_frame(outcome, ea, eb);

        for (Basis b : kAllBases)
          for (std::uint8_t a = 0; a < 2; ++a)
            out.check[static_cast<std::size_t>(b)][c][a][a ^ 1 ^ flips(frame, b)] += 0.5 * w;

        for (auto na : kPauliLabels) {
          for (auto nb : kPauliLabels) {
            const double wn = w * second_a[na] * second_b[nb];
            if (wn == 0.0) continue;
            for (auto symbol : kPauliLabels)
              for (auto cover : kPauliLabels) {
                const PauliLabel f = compose(compose(compose(compose(frame, symbol), cover), na), nb);
                out.ts_message[index(symbol)][index(cover)][c][index(bell_from_frame(f))] += wn;
              }
          }
          // MDI-DL04 re-transmits only Alice's photon.
          const double wa = w * second_a[na];
          if (wa == 0.0) continue;
          for (std::uint8_t bit = 0; bit < 2; ++bit) {
            const PauliLabel f = compose(bit ? compose(frame, cfg.dl04_encoding) : frame, na);
            for (std::uint8_t a = 0; a < 2; ++a)
              out.dl04_message[bit][c][a][a ^ 1 ^ flips(f, dl04_basis)] += 0.5 * wa;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace mdiqsdc
