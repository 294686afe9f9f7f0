#pragma once

// Pauli noise models: the depolarizing channel, its Pauli-error form,
// composition of independent Pauli channels, and the map from Bell-diagonal
// weights to the error rates seen in correlated checks.

#include <array>
#include <cstddef>

#include "mdiqsdc/quantum_core.hpp"

namespace mdiqsdc {

/// Probabilities of an I, X, Y or Z error.
struct PauliDistribution {
  std::array<double, 4> probs{1.0, 0.0, 0.0, 0.0};  // indexed by PauliLabel

  // Throws std::invalid_argument unless nonnegative and summing to 1 within 1e-12.
  static PauliDistribution from(std::array<double, 4> probs);
  static PauliDistribution identity() { return {}; }

  double operator[](PauliLabel p) const { return probs[index(p)]; }
};

/// Depolarizing strength p in [0,1].
class ChannelParam {
 public:
  explicit ChannelParam(double p);
  double value() const { return p_; }

 private:
  double p_;
};

struct ErrorRates {
  double eps_z = 0.0;
  double eps_x = 0.0;
  double eps_y = 0.0;
};

// (1 - 3p/4) rho + (p/4)(X rho X + Y rho Y + Z rho Z) on one qubit.
DensityMatrix depolarize(const DensityMatrix& dm, ChannelParam p, std::size_t qubit);

// sum_P prob(P) P rho P on one qubit.
DensityMatrix apply_pauli_channel(const DensityMatrix& dm, const PauliDistribution& dist, std::size_t qubit);

PauliDistribution depolarizing_pauli_dist(ChannelParam p);

// Distribution of the product of two independent Pauli errors.
PauliDistribution convolve(const PauliDistribution& a, const PauliDistribution& b);

// Bell-diagonal state reached from |psi-> by a Pauli error drawn from dist.
BellDiagonal bell_diagonal_from_errors(const PauliDistribution& dist);
PauliDistribution errors_from_bell_diagonal(const BellDiagonal& d);

// eps_z = d3 + d4, eps_x = d2 + d4, eps_y = d2 + d3 (errors relative to the
// anti-correlated |psi-> reference).
ErrorRates error_rates_from_deltas(const BellDiagonal& d);

// The same rates read directly off a two-qubit state as the probability that
// matching single-qubit measurements in Z, X or Y give equal outcomes.
ErrorRates error_rates_from_measurements(const DensityMatrix& dm);

}  // namespace mdiqsdc
