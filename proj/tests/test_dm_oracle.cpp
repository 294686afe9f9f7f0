#include <doctest.h>

#include <cmath>

#include "mdiqsdc/dm_oracle.hpp"

using namespace mdiqsdc;

TEST_CASE("two-pair source") {
  const auto src = oracle::two_pair_source();
  CHECK(src.dim() == 16);
  const std::size_t kept_a_sent_a[] = {oracle::kKeptA, oracle::kSentA};
  const auto pair = partial_trace(DensityMatrix::from_pure(src), kept_a_sent_a);
  CHECK(pair.expectation(bell_state(BellLabel::PsiMinus).amplitudes()) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Charlie's outcomes are uniform and the swap table restores the singlet") {
  const auto src = DensityMatrix::from_pure(oracle::two_pair_source());
  for (auto c : kBellLabels) CHECK(oracle::project_sent_pair(src, c).trace().real() == doctest::Approx(0.25));
  for (double f : oracle::swap_fidelities()) CHECK(std::abs(f - 1.0) < 1e-12);
  const auto derived = oracle::derive_swap_corrections();
  for (auto c : kBellLabels) CHECK(derived[index(c)] == swap_correction(c));
}

TEST_CASE("frame model matches the density-matrix oracle") {
  for (auto kind : {ProtocolKind::MdiTs, ProtocolKind::MdiDl04})
    for (double p : {0.0, 0.1, 0.5, 1.0})
      for (bool attack : {false, true})
        for (auto noise : {NoisePlacement::FirstLegOnly, NoisePlacement::BothLegs}) {
          ProtocolConfig cfg;
          cfg.kind = kind;
          cfg.p = p;
          cfg.noise = noise;
          cfg.attack.enabled = attack;
          for (auto u : {PauliLabel::X, PauliLabel::Y, PauliLabel::Z}) {
            cfg.dl04_encoding = u;
            CHECK(frame_round_distributions(cfg).max_abs_diff(oracle::round_distributions(cfg)) < 1e-12);
          }
        }
  ProtocolConfig single_basis;
  single_basis.p = 0.2;
  single_basis.attack.enabled = true;
  single_basis.attack.bases = {Basis::Y};
  CHECK(frame_round_distributions(single_basis).max_abs_diff(oracle::round_distributions(single_basis)) < 1e-12);
}

TEST_CASE("density-matrix intercept-resend on one half of the singlet") {
  const auto singlet = DensityMatrix::from_pure(bell_state(BellLabel::PsiMinus));
  const std::vector<Basis> zx{Basis::Z, Basis::X};
  const auto attacked = oracle::intercept_resend(singlet, zx, 1);
  const auto rates = error_rates_from_measurements(attacked);
  CHECK(rates.eps_z == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(rates.eps_x == doctest::Approx(0.25).epsilon(1e-14));
  const auto framed = bell_diagonal_from_errors(intercept_resend_distribution(zx));
  const auto probs = bell_measure(attacked);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(probs[i] - framed.deltas[i]) < 1e-14);
}

TEST_CASE("frame distributions are normalized") {
  ProtocolConfig cfg;
  cfg.p = 0.3;
  cfg.attack.enabled = true;
  const auto d = frame_round_distributions(cfg);
  for (std::size_t b = 0; b < 3; ++b) {
    double total = 0;
    for (const auto& swap : d.check[b])
      for (const auto& row : swap)
        for (double v : row) total += v;
    CHECK(total == doctest::Approx(1.0));
  }
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t c = 0; c < 4; ++c) {
      double total = 0;
      for (const auto& swap : d.ts_message[s][c])
        for (double v : swap) total += v;
      CHECK(total == doctest::Approx(1.0));
    }
}

TEST_CASE("Eve's Holevo quantity stays under the entropy bound") {
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4 - i; ++j)
      for (int k = 0; k <= 4 - i - j; ++k) {
        const auto d = BellDiagonal::from({i / 4.0, j / 4.0, k / 4.0, (4 - i - j - k) / 4.0});
        const auto r = error_rates_from_deltas(d);
        const double chi = oracle::mdi_ts_eve_holevo(d);
        CHECK(chi >= -1e-12);
        CHECK(chi <= eve_info_mdi_ts(r.eps_z, r.eps_x) + 1e-9);
      }
  // A pure singlet leaves Eve nothing; the fully mixed pair gives her both bits.
  CHECK(std::abs(oracle::mdi_ts_eve_holevo(BellDiagonal::from({1, 0, 0, 0}))) < 1e-12);
  CHECK(oracle::mdi_ts_eve_holevo(BellDiagonal::from({0.25, 0.25, 0.25, 0.25})) == doctest::Approx(2.0));
}
