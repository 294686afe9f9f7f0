#pragma once

// Density-matrix reference backend. Everything here is computed with full
// 4-qubit matrices and projectors, independent of the Pauli-frame shortcuts,
// and is used to cross-check the fast simulator.
//
// Register order for the swapping stage: (S_A, S_B, C_A, C_B), where S_x is
// the photon a party keeps and C_x the one sent to Charlie.

#include <array>
#include <span>

#include "mdiqsdc/protocol_sim.hpp"
#include "mdiqsdc/quantum_core.hpp"

namespace mdiqsdc::oracle {

inline constexpr std::size_t kKeptA = 0;
inline constexpr std::size_t kKeptB = 1;
inline constexpr std::size_t kSentA = 2;
inline constexpr std::size_t kSentB = 3;

// |psi->_{S_A C_A} (x) |psi->_{S_B C_B} in register order.
PureState two_pair_source();

// Measure-and-resend on one qubit with a uniformly random basis from `bases`.
DensityMatrix intercept_resend(const DensityMatrix& dm, std::span<const Basis> bases, std::size_t qubit);

// Charlie's Bell projection on (C_A, C_B): the unnormalized state left on
// (S_A, S_B), whose trace is the outcome probability.
ComplexMatrix project_sent_pair(const DensityMatrix& four_qubit, BellLabel outcome);

// Fidelity with |psi-> of the retained pair after Bob applies
// swap_correction(outcome), for noiseless legs. Indexed by outcome.
std::array<double, 4> swap_fidelities();

// For each outcome, the unique Pauli on S_B that restores |psi->, found by
// exhaustive search over the 16-dim statevector.
std::array<PauliLabel, 4> derive_swap_corrections();

RoundDistributions round_distributions(const ProtocolConfig& cfg);

// Eve's Holevo quantity about Alice's dense-coding symbol: the ensemble
// U_ij^A rho_ABE^c U_ij^A+ with uniform priors, where rho_ABE^c is the
// purification of `d` under Bob's uniform cover on B.
double mdi_ts_eve_holevo(const BellDiagonal& d);

}  // namespace mdiqsdc::oracle
