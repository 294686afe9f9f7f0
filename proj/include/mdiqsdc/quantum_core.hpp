#pragma once

// Exact state algebra for systems of up to four qubits: Bell basis, Pauli
// operators, projective measurements, entropies and purifications.
//
// Qubit 0 is the most significant bit of a computational-basis index, so a
// two-qubit vector is ordered |00>, |01>, |10>, |11>.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace mdiqsdc {

using Complex = std::complex<double>;

inline constexpr double kStateTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;

enum class BellLabel : std::uint8_t { PsiMinus = 0, PsiPlus = 1, PhiMinus = 2, PhiPlus = 3 };

inline constexpr std::array<BellLabel, 4> kBellLabels{
    BellLabel::PsiMinus, BellLabel::PsiPlus, BellLabel::PhiMinus, BellLabel::PhiPlus};

enum class PauliLabel : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline constexpr std::array<PauliLabel, 4> kPauliLabels{
    PauliLabel::I, PauliLabel::X, PauliLabel::Y, PauliLabel::Z};

// Single-photon preparations used by the security-check decomposition.
enum class PhotonState : std::uint8_t { Zero, One, Plus, Minus };

constexpr std::size_t index(BellLabel b) { return static_cast<std::size_t>(b); }
constexpr std::size_t index(PauliLabel p) { return static_cast<std::size_t>(p); }

std::string_view to_string(BellLabel b);
std::string_view to_string(PauliLabel p);
std::string_view to_string(PhotonState s);

// Pauli group modulo phases, i.e. Z2 x Z2. Bit 0 carries the X part and
// bit 1 the Z part.
constexpr std::uint8_t pauli_bits(PauliLabel p) {
  constexpr std::uint8_t bits[4] = {0b00, 0b01, 0b11, 0b10};
  return bits[index(p)];
}

constexpr PauliLabel pauli_from_bits(std::uint8_t bits) {
  constexpr PauliLabel labels[4] = {PauliLabel::I, PauliLabel::X, PauliLabel::Z, PauliLabel::Y};
  return labels[bits & 0b11];
}

constexpr PauliLabel compose(PauliLabel a, PauliLabel b) {
  return pauli_from_bits(pauli_bits(a) ^ pauli_bits(b));
}

constexpr bool anticommutes(PauliLabel a, PauliLabel b) {
  const auto pa = pauli_bits(a), pb = pauli_bits(b);
  const int symplectic = ((pa & 1) & (pb >> 1)) ^ ((pa >> 1) & (pb & 1));
  return symplectic != 0;
}

// Every Bell state is P_B |psi-> for exactly one Pauli P (up to phase), and a
// Pauli on either qubit shifts the label by group multiplication.
constexpr PauliLabel bell_frame(BellLabel b) {
  constexpr PauliLabel frames[4] = {PauliLabel::I, PauliLabel::Z, PauliLabel::X, PauliLabel::Y};
  return frames[index(b)];
}

constexpr BellLabel bell_from_frame(PauliLabel p) {
  constexpr BellLabel labels[4] = {BellLabel::PsiMinus, BellLabel::PhiMinus, BellLabel::PhiPlus,
                                   BellLabel::PsiPlus};
  return labels[index(p)];
}

using Matrix2 = std::array<Complex, 4>;  // row-major 2x2

// Encoding convention: U00 = I, U01 = sigma_x, U10 = i sigma_y, U11 = sigma_z.
Matrix2 pauli_matrix(PauliLabel p);
Matrix2 encoding_matrix(PauliLabel p);

/// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix outer(std::span<const Complex> ket);

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
  std::span<const Complex> data() const { return data_; }

  Complex trace() const;
  ComplexMatrix adjoint() const;
  double max_abs_diff(const ComplexMatrix& other) const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(double s);
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator*(double s, ComplexMatrix m) { return m *= s; }

  // this <- U this U^dagger with U acting on one qubit of the register.
  void conjugate_qubit(const Matrix2& u, std::size_t qubit);

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
// sorted ascending. Iterates until every off-diagonal magnitude is below
// 1e-13.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

/// Normalized state vector over one to four qubits.
class PureState {
 public:
  // Throws std::invalid_argument unless the length is 2^n (1 <= n <= 4), all
  // components are finite and the squared norm is 1 within 1e-12.
  static PureState from_amplitudes(std::vector<Complex> amplitudes);
  static PureState basis(std::size_t dim, std::size_t index);
  static PureState photon(PhotonState s);

  std::size_t dim() const { return amplitudes_.size(); }
  std::size_t num_qubits() const;
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
  double squared_norm() const;

  // |<a|b>|^2
  friend double fidelity(const PureState& a, const PureState& b);
  // Equality up to a global phase.
  friend bool equivalent(const PureState& a, const PureState& b);
  friend PureState tensor(const PureState& a, const PureState& b);

 private:
  explicit PureState(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {}
  std::vector<Complex> amplitudes_;

  friend PureState apply_pauli(const PureState& state, PauliLabel op, std::size_t qubit);
};

struct BellDiagonal;

/// Hermitian, unit-trace, positive semidefinite matrix over one to four qubits.
class DensityMatrix {
 public:
  // Validates Hermiticity and trace within 1e-12 and eigenvalues >= -1e-10.
  static DensityMatrix from_matrix(ComplexMatrix m);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);
  static DensityMatrix from_bell_diagonal(const BellDiagonal& d);

  std::size_t dim() const { return m_.dim(); }
  std::size_t num_qubits() const;
  const ComplexMatrix& matrix() const { return m_; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  // Expectation <psi|rho|psi> for a vector of matching dimension.
  double expectation(std::span<const Complex> ket) const;

  // Bypasses validation; reserved for maps already known to be CPTP.
  static DensityMatrix trusted(ComplexMatrix m) { return DensityMatrix(std::move(m)); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

struct BellDiagonal {
  std::array<double, 4> deltas{};  // indexed by BellLabel

  // Throws std::invalid_argument unless each entry is in [0,1] and the sum is
  // 1 within 1e-12.
  static BellDiagonal from(std::array<double, 4> deltas);

  double operator[](BellLabel b) const { return deltas[index(b)]; }
};

// Amplitudes in the computational basis.
PureState bell_state(BellLabel label);

PureState apply_pauli(const PureState& state, PauliLabel op, std::size_t qubit);
DensityMatrix apply_pauli(const DensityMatrix& state, PauliLabel op, std::size_t qubit);

// <Psi_i| rho |Psi_i> in BellLabel order.
std::array<double, 4> bell_measure(const DensityMatrix& dm);

// <Psi_i| a b> in BellLabel order.
std::array<Complex, 4> product_decompose(PhotonState a, PhotonState b);

// The Bell-basis diagonal of a two-qubit state.
BellDiagonal pauli_twirl(const DensityMatrix& dm);

// sum_i sqrt(delta_i) |Psi_i>_AB |i>_E over qubits (A, B, E0, E1).
PureState purify_bell_diagonal(const BellDiagonal& d);

// Keeps the listed qubits (strictly increasing, non-empty) and traces out
// the rest. Throws std::invalid_argument for an invalid selector.
DensityMatrix partial_trace(const DensityMatrix& dm, std::span<const std::size_t> keep);

// Entropy in bits; eigenvalues in [-1e-10, 0) are treated as zero.
double von_neumann_entropy(const DensityMatrix& dm);

// S(sum p_i rho_i) - sum p_i S(rho_i). Throws on empty input, mismatched
// dimensions or priors that are negative or do not sum to 1 within 1e-12.
double holevo_bound(std::span<const DensityMatrix> states, std::span<const double> priors);

}  // namespace mdiqsdc
