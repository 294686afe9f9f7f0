#include "mdiqsdc/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace mdiqsdc {

PauliDistribution PauliDistribution::from(std::array<double, 4> probs) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("negative Pauli error probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kStateTolerance) throw std::invalid_argument("Pauli error probabilities do not sum to 1");
  return PauliDistribution{probs};
}

ChannelParam::ChannelParam(double p) : p_(p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("channel parameter must lie in [0,1]");
}

DensityMatrix apply_pauli_channel(const DensityMatrix& dm, const PauliDistribution& dist, std::size_t qubit) {
  ComplexMatrix out(dm.dim());
  for (auto p : kPauliLabels) {
    if (dist[p] == 0.0) continue;
    ComplexMatrix term = dm.matrix();
    term.conjugate_qubit(pauli_matrix(p), qubit);
    out += dist[p] * term;
  }
  return DensityMatrix::trusted(std::move(out));
}

DensityMatrix depolarize(const DensityMatrix& dm, ChannelParam p, std::size_t qubit) {
  if (qubit >= dm.num_qubits()) throw std::out_of_range("qubit index out of range");
  return apply_pauli_channel(dm, depolarizing_pauli_dist(p), qubit);
}

PauliDistribution depolarizing_pauli_dist(ChannelParam p) {
  const double q = p.value() / 4.0;
  return PauliDistribution{{1.0 - 3.0 * q, q, q, q}};
}

PauliDistribution convolve(const PauliDistribution& a, const PauliDistribution& b) {
  PauliDistribution out{{0.0, 0.0, 0.0, 0.0}};
  for (auto pa : kPauliLabels)
    for (auto pb : kPauliLabels) out.probs[index(compose(pa, pb))] += a[pa] * b[pb];
  return out;
}

BellDiagonal bell_diagonal_from_errors(const PauliDistribution& dist) {
  BellDiagonal d;
  for (auto p : kPauliLabels) d.deltas[index(bell_from_frame(p))] = dist[p];
  return d;
}

PauliDistribution errors_from_bell_diagonal(const BellDiagonal& d) {
  PauliDistribution dist;
  for (auto b : kBellLabels) dist.probs[index(bell_frame(b))] = d[b];
  return dist;
}

ErrorRates error_rates_from_deltas(const BellDiagonal& d) {
  const double d2 = d[BellLabel::PsiPlus], d3 = d[BellLabel::PhiMinus], d4 = d[BellLabel::PhiPlus];
  return ErrorRates{.eps_z = d3 + d4, .eps_x = d2 + d4, .eps_y = d2 + d3};
}

ErrorRates error_rates_from_measurements(const DensityMatrix& dm) {
  if (dm.dim() != 4) throw std::invalid_argument("correlation check needs a two-qubit state");
  const double s = 0.70710678118654752440;
  const Complex i{0.0, 1.0};
  // Eigenvectors of Z, X and Y with eigenvalue +1 and -1.
  const std::array<std::array<std::array<Complex, 2>, 2>, 3> bases{{
      {{{1.0, 0.0}, {0.0, 1.0}}},
      {{{s, s}, {s, -s}}},
      {{{s, s * i}, {s, -s * i}}},
  }};
  std::array<double, 3> equal{};
  for (std::size_t b = 0; b < 3; ++b) {
    for (std::size_t o = 0; o < 2; ++o) {
      const auto& v = bases[b][o];
      const std::array<Complex, 4> ket{v[0] * v[0], v[0] * v[1], v[1] * v[0], v[1] * v[1]};
      equal[b] += dm.expectation(ket);
    }
  }
  return ErrorRates{.eps_z = equal[0], .eps_x = equal[1], .eps_y = equal[2]};
}

}  // namespace mdiqsdc
