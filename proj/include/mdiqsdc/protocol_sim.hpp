#pragma once

// Monte Carlo execution of the equivalent MDI-TS and MDI-DL04 protocols in
// the Pauli frame.
//
// Each round: Alice and Bob each emit |psi-> and send one photon to Charlie
// through a depolarizing leg. Charlie Bell-measures the two in-flight
// photons; Bob applies a correction so the retained pair is nominally |psi->.
// The round then either becomes a correlation check (both sides measure in
// the same random basis) or carries a message.
//
// Because every channel and protocol operation is a Pauli, the retained pair
// is tracked as a single Pauli "frame" relative to |psi->, so a round costs a
// handful of table lookups.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mdiqsdc/channels.hpp"
#include "mdiqsdc/infotheory.hpp"
#include "mdiqsdc/quantum_core.hpp"

namespace mdiqsdc {

enum class ProtocolKind : std::uint8_t { MdiTs, MdiDl04 };
enum class NoisePlacement : std::uint8_t { FirstLegOnly, BothLegs };
enum class Basis : std::uint8_t { Z = 0, X = 1, Y = 2 };
enum class RoundRole : std::uint8_t { Check, Message };

inline constexpr std::array<Basis, 3> kAllBases{Basis::Z, Basis::X, Basis::Y};

std::string_view to_string(ProtocolKind k);
std::string_view to_string(NoisePlacement n);
std::string_view to_string(Basis b);

// The Pauli whose eigenbasis is measured.
constexpr PauliLabel basis_pauli(Basis b) {
  constexpr PauliLabel ops[3] = {PauliLabel::Z, PauliLabel::X, PauliLabel::Y};
  return ops[static_cast<std::size_t>(b)];
}

struct AttackModel {
  bool enabled = false;
  std::vector<Basis> bases{Basis::Z, Basis::X};

  bool operator==(const AttackModel&) const = default;
};

struct ProtocolConfig {
  ProtocolKind kind = ProtocolKind::MdiTs;
  std::uint64_t rounds = 1000;
  double check_fraction = 0.5;
  double p = 0.0;  // depolarizing strength of each leg
  NoisePlacement noise = NoisePlacement::FirstLegOnly;
  Gains gains{};
  PauliLabel dl04_encoding = PauliLabel::Y;  // U1 for MDI-DL04
  AttackModel attack{};
  std::uint64_t seed = 0;
  // Per-photon survival probability of a message transmission. Lossless
  // by default; a lost message round stays undecoded and lowers the gain.
  double transmittance = 1.0;
  // When false Bob decodes without undoing his cover operation.
  bool cover_bookkeeping = true;

  // Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

/// One executed round.
struct RoundRecord {
  BellLabel swap_outcome = BellLabel::PsiMinus;  // Charlie's first Bell result
  RoundRole role = RoundRole::Check;
  // Check rounds: the shared basis. MDI-DL04 message rounds: the basis
  // Charlie and Bob measure in.
  Basis basis = Basis::Z;
  std::uint8_t alice_bit = 0;  // check: Alice's outcome; MDI-DL04 message: Charlie's outcome
  std::uint8_t bob_bit = 0;
  std::uint8_t encoded = 0;                       // symbol 0..3 (MDI-TS) or bit (MDI-DL04)
  BellLabel announced = BellLabel::PsiMinus;      // MDI-TS: Charlie's second Bell result
  std::optional<std::uint8_t> decoded;            // absent for checks and lost messages

  bool operator==(const RoundRecord&) const = default;
};

struct RateEstimate {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double value = 0.0;
  double std_error = 0.0;  // binomial

  static RateEstimate from_counts(std::uint64_t errors, std::uint64_t trials);
  bool available() const { return trials > 0; }
  bool operator==(const RateEstimate&) const = default;
};

struct TranscriptStats {
  ProtocolKind kind = ProtocolKind::MdiTs;
  std::uint64_t rounds = 0;
  std::uint64_t check_rounds = 0;
  std::uint64_t message_rounds = 0;
  std::uint64_t delivered_messages = 0;
  RateEstimate eps_z, eps_x, eps_y;
  std::array<std::uint64_t, 4> symbol_error_counts{};  // MDI-TS, by symbol difference
  std::optional<ErrorVector> message_errors;           // MDI-TS
  RateEstimate bit_error;                              // MDI-DL04
  double gain = 0.0;
  std::optional<CapacityResult> capacity;
  double capacity_std_error = 0.0;  // delta method
  std::string unavailable_reason;   // set when capacity is absent

  RateEstimate& rate(Basis b);
  const RateEstimate& rate(Basis b) const;
  bool operator==(const TranscriptStats&) const = default;
};

/// Deterministic 64-bit generator; owned per run.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint8_t bit() { return static_cast<std::uint8_t>(engine_() >> 63); }
  std::uint32_t below(std::uint32_t n) { return static_cast<std::uint32_t>((engine_() >> 32) * n >> 32); }

 private:
  std::mt19937_64 engine_;
};

// Pauli Bob applies to his retained photon so that the retained pair becomes
// |psi->, given Charlie's outcome when both sources emitted |psi->.
PauliLabel swap_correction(BellLabel outcome);

// Basis Charlie and Bob measure in for MDI-DL04 encoding U1: a basis whose
// outcomes U1 flips.
Basis dl04_measurement_basis(PauliLabel encoding);
// Basis whose QBER bounds the leakage for encoding U1 (eps_u).
Basis dl04_leakage_basis(PauliLabel encoding);
// Check bases in use: Z and X, plus Y for MDI-DL04 with U1 = i sigma_y.
std::vector<Basis> check_bases(const ProtocolConfig& cfg);

// Eve measures the in-flight photon in a uniformly random basis from
// `bases` and resends the eigenstate she saw. In the Pauli frame this is a
// dephasing along the chosen basis: its Pauli with probability 1/2.
PauliLabel eve_intercept_resend(PauliLabel in_flight_error, std::span<const Basis> bases, Rng& rng);
PauliDistribution intercept_resend_distribution(std::span<const Basis> bases);

std::vector<RoundRecord> simulate_rounds(const ProtocolConfig& cfg);
TranscriptStats estimate_stats(std::span<const RoundRecord> records, const ProtocolConfig& cfg);
TranscriptStats run_mdi_ts(const ProtocolConfig& cfg);
TranscriptStats run_mdi_dl04(const ProtocolConfig& cfg);
TranscriptStats run_protocol(const ProtocolConfig& cfg);

/// Exact expectations of the quantities a run estimates.
struct AnalyticExpectation {
  PauliDistribution pair_errors;     // retained pair after correction
  PauliDistribution message_errors;  // net symbol error (MDI-TS) or residual frame at measurement (MDI-DL04)
  ErrorRates check;
  ErrorVector symbol_errors;  // MDI-TS
  double bit_error = 0.0;     // MDI-DL04
  double eps_u = 0.0;         // MDI-DL04
  double h_of_e = 0.0;        // H(E) or h(e)
  double eve_info = 0.0;      // leakage term without eta
  CapacityResult capacity;
};

AnalyticExpectation analytic_expectation(const ProtocolConfig& cfg);

/// Per-round outcome distributions, conditioned on the round type and joint
/// over Charlie's first outcome.
struct RoundDistributions {
  // check[basis][swap][alice][bob]
  std::array<std::array<std::array<std::array<double, 2>, 2>, 4>, 3> check{};
  // ts_message[symbol][cover][swap][announced]
  std::array<std::array<std::array<std::array<double, 4>, 4>, 4>, 4> ts_message{};
  // dl04_message[bit][swap][charlie][bob]
  std::array<std::array<std::array<std::array<double, 2>, 2>, 4>, 2> dl04_message{};

  double max_abs_diff(const RoundDistributions& other) const;
};

// Enumerates the Pauli-frame model exactly (no sampling).
RoundDistributions frame_round_distributions(const ProtocolConfig& cfg);

}  // namespace mdiqsdc
