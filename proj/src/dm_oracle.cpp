#include "mdiqsdc/dm_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "mdiqsdc/channels.hpp"

namespace mdiqsdc::oracle {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

using Ket2 = std::array<Complex, 2>;

// Eigenvectors of the basis operator: outcome 0 is the +1 eigenvector.
Ket2 basis_vector(Basis b, std::uint8_t outcome) {
  const double s = outcome ? -kInvSqrt2 : kInvSqrt2;
  switch (b) {
    case Basis::Z: return outcome ? Ket2{0.0, 1.0} : Ket2{1.0, 0.0};
    case Basis::X: return {kInvSqrt2, s};
    case Basis::Y: return {kInvSqrt2, Complex{0.0, s}};
  }
  throw std::invalid_argument("unknown basis");
}

std::array<Complex, 4> product_ket(const Ket2& a, const Ket2& b) {
  return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

// Joint probability of single-qubit outcomes (a, b) in basis `basis` on both
// qubits of a normalized two-qubit state.
double joint_outcome(const DensityMatrix& pair, Basis basis, std::uint8_t a, std::uint8_t b) {
  return pair.expectation(product_ket(basis_vector(basis, a), basis_vector(basis, b)));
}

ComplexMatrix conjugated(ComplexMatrix m, const Matrix2& u, std::size_t qubit) {
  m.conjugate_qubit(u, qubit);
  return m;
}

}  // namespace

PureState two_pair_source() {
  const PureState singlet = bell_state(BellLabel::PsiMinus);
  std::vector<Complex> v(16);
  for (std::size_t sa = 0; sa < 2; ++sa)
    for (std::size_t sb = 0; sb < 2; ++sb)
      for (std::size_t ca = 0; ca < 2; ++ca)
        for (std::size_t cb = 0; cb < 2; ++cb)
          v[sa << 3 | sb << 2 | ca << 1 | cb] = singlet[sa << 1 | ca] * singlet[sb << 1 | cb];
  return PureState::from_amplitudes(std::move(v));
}

DensityMatrix intercept_resend(const DensityMatrix& dm, std::span<const Basis> bases, std::size_t qubit) {
  if (bases.empty()) throw std::invalid_argument("attack needs at least one basis");
  if (qubit >= dm.num_qubits()) throw std::out_of_range("qubit index out of range");
  const std::size_t n = dm.num_qubits();
  const std::size_t mask = std::size_t{1} << (n - 1 - qubit);
  ComplexMatrix out(dm.dim());
  for (Basis b : bases) {
    for (std::uint8_t o = 0; o < 2; ++o) {
      const Ket2 v = basis_vector(b, o);
      // Projector |v><v| embedded on `qubit`; Eve resends |v>.
      const Matrix2 proj{v[0] * std::conj(v[0]), v[0] * std::conj(v[1]), v[1] * std::conj(v[0]),
                         v[1] * std::conj(v[1])};
      ComplexMatrix term(dm.dim());
      for (std::size_t r = 0; r < dm.dim(); ++r)
        for (std::size_t c = 0; c < dm.dim(); ++c) {
          const std::size_t rb = (r & mask) ? 1 : 0, cb = (c & mask) ? 1 : 0;
          Complex acc = 0.0;
          for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t l = 0; l < 2; ++l) {
              const std::size_t rr = k ? (r | mask) : (r & ~mask);
              const std::size_t cc = l ? (c | mask) : (c & ~mask);
              acc += proj[rb * 2 + k] * dm(rr, cc) * proj[l * 2 + cb];
            }
          term(r, c) = acc;
        }
      out += (1.0 / static_cast<double>(bases.size())) * term;
    }
  }
  return DensityMatrix::trusted(std::move(out));
}

ComplexMatrix project_sent_pair(const DensityMatrix& four_qubit, BellLabel outcome) {
  if (four_qubit.dim() != 16) throw std::invalid_argument("expected a four-qubit register");
  const PureState bell = bell_state(outcome);
  ComplexMatrix out(4);
  for (std::size_t kr = 0; kr < 4; ++kr)
    for (std::size_t kc = 0; kc < 4; ++kc) {
      Complex acc = 0.0;
      for (std::size_t xr = 0; xr < 4; ++xr) {
        if (bell[xr] == Complex{}) continue;
        for (std::size_t xc = 0; xc < 4; ++xc) {
          if (bell[xc] == Complex{}) continue;
          acc += std::conj(bell[xr]) * four_qubit(kr << 2 | xr, kc << 2 | xc) * bell[xc];
        }
      }
      out(kr, kc) = acc;
    }
  return out;
}

namespace {

// Statevector version of project_sent_pair, normalized.
PureState retained_pair(const PureState& source, BellLabel outcome) {
  const PureState bell = bell_state(outcome);
  std::vector<Complex> v(4);
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t x = 0; x < 4; ++x) v[k] += std::conj(bell[x]) * source[k << 2 | x];
  double norm = 0.0;
  for (const auto& a : v) norm += std::norm(a);
  for (auto& a : v) a /= std::sqrt(norm);
  return PureState::from_amplitudes(std::move(v));
}

}  // namespace

std::array<double, 4> swap_fidelities() {
  const PureState source = two_pair_source();
  const PureState singlet = bell_state(BellLabel::PsiMinus);
  std::array<double, 4> out{};
  for (auto outcome : kBellLabels) {
    const PureState kept = apply_pauli(retained_pair(source, outcome), swap_correction(outcome), kKeptB);
    out[index(outcome)] = fidelity(kept, singlet);
  }
  return out;
}

std::array<PauliLabel, 4> derive_swap_corrections() {
  const PureState source = two_pair_source();
  const PureState singlet = bell_state(BellLabel::PsiMinus);
  std::array<PauliLabel, 4> out{};
  for (auto outcome : kBellLabels) {
    const PureState kept = retained_pair(source, outcome);
    int matches = 0;
    for (auto p : kPauliLabels)
      if (equivalent(apply_pauli(kept, p, kKeptB), singlet)) {
        out[index(outcome)] = p;
        ++matches;
      }
    if (matches != 1) throw std::logic_error("swap correction is not unique");
  }
  return out;
}

RoundDistributions round_distributions(const ProtocolConfig& cfg) {
  cfg.validate();
  const ChannelParam p(cfg.p);
  const bool both_legs = cfg.noise == NoisePlacement::BothLegs;
  const Basis dl04_basis = dl04_measurement_basis(cfg.dl04_encoding);

  DensityMatrix source = DensityMatrix::from_pure(two_pair_source());
  source = depolarize(source, p, kSentA);
  source = depolarize(source, p, kSentB);
  if (cfg.attack.enabled) source = intercept_resend(source, cfg.attack.bases, kSentA);

  RoundDistributions out;
  for (auto outcome : kBellLabels) {
    const auto c = index(outcome);
    ComplexMatrix kept = project_sent_pair(source, outcome);
    const double prob = kept.trace().real();
    if (prob <= 0.0) continue;
    kept *= 1.0 / prob;
    kept.conjugate_qubit(pauli_matrix(swap_correction(outcome)), 1);

    for (Basis b : kAllBases) {
      const auto pair = DensityMatrix::trusted(kept);
      for (std::uint8_t a = 0; a < 2; ++a)
        for (std::uint8_t bb = 0; bb < 2; ++bb)
          out.check[static_cast<std::size_t>(b)][c][a][bb] = prob * joint_outcome(pair, b, a, bb);
    }

    for (auto symbol : kPauliLabels)
      for (auto cover : kPauliLabels) {
        ComplexMatrix m = conjugated(kept, encoding_matrix(symbol), 0);
        m.conjugate_qubit(encoding_matrix(cover), 1);
        DensityMatrix sent = DensityMatrix::trusted(std::move(m));
        if (both_legs) sent = depolarize(depolarize(sent, p, 0), p, 1);
        const auto probs = bell_measure(sent);
        for (auto label : kBellLabels)
          out.ts_message[index(symbol)][index(cover)][c][index(label)] = prob * probs[index(label)];
      }

    for (std::uint8_t bit = 0; bit < 2; ++bit) {
      DensityMatrix encoded = DensityMatrix::trusted(
          conjugated(kept, encoding_matrix(bit ? cfg.dl04_encoding : PauliLabel::I), 0));
      if (both_legs) encoded = depolarize(encoded, p, 0);
      for (std::uint8_t a = 0; a < 2; ++a)
        for (std::uint8_t bb = 0; bb < 2; ++bb)
          out.dl04_message[bit][c][a][bb] = prob * joint_outcome(encoded, dl04_basis, a, bb);
    }
  }
  return out;
}

double mdi_ts_eve_holevo(const BellDiagonal& d) {
  // Qubits (A, B, E0, E1).
  const ComplexMatrix purified = ComplexMatrix::outer(purify_bell_diagonal(d).amplitudes());
  ComplexMatrix covered(16);
  for (auto cover : kPauliLabels) covered += 0.25 * conjugated(purified, encoding_matrix(cover), 1);

  std::vector<DensityMatrix> ensemble;
  for (auto symbol : kPauliLabels)
    ensemble.push_back(DensityMatrix::trusted(conjugated(covered, encoding_matrix(symbol), 0)));
  const std::array<double, 4> priors{0.25, 0.25, 0.25, 0.25};
  return holevo_bound(ensemble, priors);
}

}  // namespace mdiqsdc::oracle
