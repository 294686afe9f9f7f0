#include "mdiqsdc/quantum_core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mdiqsdc {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kJacobiTolerance = 1e-13;
constexpr int kMaxJacobiSweeps = 100;

bool valid_dim(std::size_t dim) {
  return dim >= 2 && dim <= 16 && std::has_single_bit(dim);
}

std::size_t qubits_of(std::size_t dim) { return static_cast<std::size_t>(std::countr_zero(dim)); }

void check_qubit(std::size_t dim, std::size_t qubit) {
  if (qubit >= qubits_of(dim)) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) + " out of range for dimension " +
                            std::to_string(dim));
  }
}

// Bit mask of a qubit inside a basis index; qubit 0 is the most significant.
std::size_t qubit_mask(std::size_t dim, std::size_t qubit) {
  return std::size_t{1} << (qubits_of(dim) - 1 - qubit);
}

double plogp(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }

}  // namespace

std::string_view to_string(BellLabel b) {
  switch (b) {
    case BellLabel::PsiMinus: return "psi-";
    case BellLabel::PsiPlus: return "psi+";
    case BellLabel::PhiMinus: return "phi-";
    case BellLabel::PhiPlus: return "phi+";
  }
  return "?";
}

std::string_view to_string(PauliLabel p) {
  switch (p) {
    case PauliLabel::I: return "I";
    case PauliLabel::X: return "X";
    case PauliLabel::Y: return "Y";
    case PauliLabel::Z: return "Z";
  }
  return "?";
}

std::string_view to_string(PhotonState s) {
  switch (s) {
    case PhotonState::Zero: return "0";
    case PhotonState::One: return "1";
    case PhotonState::Plus: return "+";
    case PhotonState::Minus: return "-";
  }
  return "?";
}

Matrix2 pauli_matrix(PauliLabel p) {
  const Complex i{0.0, 1.0};
  switch (p) {
    case PauliLabel::I: return {1.0, 0.0, 0.0, 1.0};
    case PauliLabel::X: return {0.0, 1.0, 1.0, 0.0};
    case PauliLabel::Y: return {0.0, -i, i, 0.0};
    case PauliLabel::Z: return {1.0, 0.0, 0.0, -1.0};
  }
  return {};
}

Matrix2 encoding_matrix(PauliLabel p) {
  if (p == PauliLabel::Y) return {0.0, 1.0, -1.0, 0.0};
  return pauli_matrix(p);
}

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> ket) {
  ComplexMatrix m(ket.size());
  for (std::size_t r = 0; r < ket.size(); ++r)
    for (std::size_t c = 0; c < ket.size(); ++c) m(r, c) = ket[r] * std::conj(ket[c]);
  return m;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix a(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) a(c, r) = std::conj((*this)(r, c));
  return a;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
  if (other.dim_ != dim_) throw std::invalid_argument("matrix dimension mismatch");
  double worst = 0.0;
  for (std::size_t k = 0; k < data_.size(); ++k) worst = std::max(worst, std::abs(data_[k] - other.data_[k]));
  return worst;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("matrix dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(double s) {
  for (auto& v : data_) v *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("matrix dimension mismatch");
  const std::size_t n = a.dim_;
  ComplexMatrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex v = a(r, k);
      if (v == Complex{}) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += v * b(k, c);
    }
  return out;
}

void ComplexMatrix::conjugate_qubit(const Matrix2& u, std::size_t qubit) {
  check_qubit(dim_, qubit);
  const std::size_t mask = qubit_mask(dim_, qubit);
  // rows: this <- U this
  for (std::size_t r0 = 0; r0 < dim_; ++r0) {
    if (r0 & mask) continue;
    const std::size_t r1 = r0 | mask;
    for (std::size_t c = 0; c < dim_; ++c) {
      const Complex a = (*this)(r0, c), b = (*this)(r1, c);
      (*this)(r0, c) = u[0] * a + u[1] * b;
      (*this)(r1, c) = u[2] * a + u[3] * b;
    }
  }
  // columns: this <- this U^dagger
  for (std::size_t c0 = 0; c0 < dim_; ++c0) {
    if (c0 & mask) continue;
    const std::size_t c1 = c0 | mask;
    for (std::size_t r = 0; r < dim_; ++r) {
      const Complex a = (*this)(r, c0), b = (*this)(r, c1);
      (*this)(r, c0) = a * std::conj(u[0]) + b * std::conj(u[1]);
      (*this)(r, c1) = a * std::conj(u[2]) + b * std::conj(u[3]);
    }
  }
}

// ---------------------------------------------------------------------------
// Hermitian eigenvalues

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  ComplexMatrix a = m;
  auto off_diagonal_max = [&] {
    double worst = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) worst = std::max(worst, std::abs(a(p, q)));
    return worst;
  };

  for (int sweep = 0; sweep < kMaxJacobiSweeps && off_diagonal_max() >= kJacobiTolerance; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r < 1e-300) continue;
        // Phase rotation makes the (p,q) block real symmetric, then a real
        // Givens rotation zeroes it. J = D R with D = diag(1, e^{-i phi}).
        const Complex phase = apq / r;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * r, aqq - app);
        const double c = std::cos(theta), s = std::sin(theta);
        const Complex jpp = c, jpq = s, jqp = -s * std::conj(phase), jqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i).real();
  std::sort(eig.begin(), eig.end());
  return eig;
}

// ---------------------------------------------------------------------------
// PureState

PureState PureState::from_amplitudes(std::vector<Complex> amplitudes) {
  if (!valid_dim(amplitudes.size()))
    throw std::invalid_argument("state dimension must be 2, 4, 8 or 16");
  for (const auto& a : amplitudes)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw std::invalid_argument("non-finite amplitude");
  PureState s(std::move(amplitudes));
  if (std::abs(s.squared_norm() - 1.0) > kStateTolerance)
    throw std::invalid_argument("state is not normalized");
  return s;
}

PureState PureState::basis(std::size_t dim, std::size_t idx) {
  if (!valid_dim(dim) || idx >= dim) throw std::invalid_argument("invalid basis state");
  std::vector<Complex> v(dim);
  v[idx] = 1.0;
  return PureState(std::move(v));
}

PureState PureState::photon(PhotonState s) {
  switch (s) {
    case PhotonState::Zero: return PureState({1.0, 0.0});
    case PhotonState::One: return PureState({0.0, 1.0});
    case PhotonState::Plus: return PureState({kInvSqrt2, kInvSqrt2});
    case PhotonState::Minus: return PureState({kInvSqrt2, -kInvSqrt2});
  }
  throw std::invalid_argument("unknown photon state");
}

std::size_t PureState::num_qubits() const { return qubits_of(dim()); }

double PureState::squared_norm() const {
  double n = 0.0;
  for (const auto& a : amplitudes_) n += std::norm(a);
  return n;
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("state dimension mismatch");
  Complex overlap = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) overlap += std::conj(a[i]) * b[i];
  return std::norm(overlap);
}

bool equivalent(const PureState& a, const PureState& b) {
  return fidelity(a, b) >= 1.0 - kStateTolerance;
}

PureState tensor(const PureState& a, const PureState& b) {
  if (a.dim() * b.dim() > 16) throw std::invalid_argument("tensor product exceeds four qubits");
  std::vector<Complex> v;
  v.reserve(a.dim() * b.dim());
  for (const auto& x : a.amplitudes_)
    for (const auto& y : b.amplitudes_) v.push_back(x * y);
  return PureState(std::move(v));
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m) {
  if (!valid_dim(m.dim())) throw std::invalid_argument("density matrix dimension must be 2, 4, 8 or 16");
  for (const auto& v : m.data())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("non-finite density matrix entry");
  if (m.max_abs_diff(m.adjoint()) > kStateTolerance) throw std::invalid_argument("matrix is not Hermitian");
  if (std::abs(m.trace() - Complex{1.0}) > kStateTolerance) throw std::invalid_argument("trace is not 1");
  const auto eig = hermitian_eigenvalues(m);
  if (eig.front() < -kPsdTolerance) throw std::invalid_argument("matrix is not positive semidefinite");
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(ComplexMatrix::outer(psi.amplitudes()));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  if (!valid_dim(dim)) throw std::invalid_argument("invalid dimension");
  return DensityMatrix(1.0 / static_cast<double>(dim) * ComplexMatrix::identity(dim));
}

DensityMatrix DensityMatrix::from_bell_diagonal(const BellDiagonal& d) {
  ComplexMatrix m(4);
  for (auto label : kBellLabels) m += d[label] * ComplexMatrix::outer(bell_state(label).amplitudes());
  return DensityMatrix(std::move(m));
}

std::size_t DensityMatrix::num_qubits() const { return qubits_of(dim()); }

double DensityMatrix::expectation(std::span<const Complex> ket) const {
  if (ket.size() != dim()) throw std::invalid_argument("vector dimension mismatch");
  Complex v = 0.0;
  for (std::size_t r = 0; r < dim(); ++r) {
    if (ket[r] == Complex{}) continue;
    Complex row = 0.0;
    for (std::size_t c = 0; c < dim(); ++c) row += m_(r, c) * ket[c];
    v += std::conj(ket[r]) * row;
  }
  return v.real();
}

BellDiagonal BellDiagonal::from(std::array<double, 4> deltas) {
  double sum = 0.0;
  for (double d : deltas) {
    if (!(d >= 0.0 && d <= 1.0)) throw std::invalid_argument("Bell-diagonal weight outside [0,1]");
    sum += d;
  }
  if (std::abs(sum - 1.0) > kStateTolerance) throw std::invalid_argument("Bell-diagonal weights do not sum to 1");
  return BellDiagonal{deltas};
}

// ---------------------------------------------------------------------------
// Operations

PureState bell_state(BellLabel label) {
  const double s = kInvSqrt2;
  switch (label) {
    case BellLabel::PsiMinus: return PureState::from_amplitudes({0.0, s, -s, 0.0});
    case BellLabel::PsiPlus: return PureState::from_amplitudes({0.0, s, s, 0.0});
    case BellLabel::PhiMinus: return PureState::from_amplitudes({s, 0.0, 0.0, -s});
    case BellLabel::PhiPlus: return PureState::from_amplitudes({s, 0.0, 0.0, s});
  }
  throw std::invalid_argument("unknown Bell label");
}

PureState apply_pauli(const PureState& state, PauliLabel op, std::size_t qubit) {
  check_qubit(state.dim(), qubit);
  const auto u = pauli_matrix(op);
  const std::size_t mask = qubit_mask(state.dim(), qubit);
  std::vector<Complex> v = state.amplitudes_;
  for (std::size_t i0 = 0; i0 < v.size(); ++i0) {
    if (i0 & mask) continue;
    const std::size_t i1 = i0 | mask;
    const Complex a = state[i0], b = state[i1];
    v[i0] = u[0] * a + u[1] * b;
    v[i1] = u[2] * a + u[3] * b;
  }
  return PureState(std::move(v));
}

DensityMatrix apply_pauli(const DensityMatrix& state, PauliLabel op, std::size_t qubit) {
  ComplexMatrix m = state.matrix();
  m.conjugate_qubit(pauli_matrix(op), qubit);
  return DensityMatrix::trusted(std::move(m));
}

std::array<double, 4> bell_measure(const DensityMatrix& dm) {
  if (dm.dim() != 4) throw std::invalid_argument("Bell measurement needs a two-qubit state");
  std::array<double, 4> probs{};
  for (auto label : kBellLabels) probs[index(label)] = dm.expectation(bell_state(label).amplitudes());
  return probs;
}

std::array<Complex, 4> product_decompose(PhotonState a, PhotonState b) {
  const PureState ab = tensor(PureState::photon(a), PureState::photon(b));
  std::array<Complex, 4> out{};
  for (auto label : kBellLabels) {
    const PureState bell = bell_state(label);
    Complex overlap = 0.0;
    for (std::size_t i = 0; i < 4; ++i) overlap += std::conj(bell[i]) * ab[i];
    out[index(label)] = overlap;
  }
  return out;
}

BellDiagonal pauli_twirl(const DensityMatrix& dm) {
  auto probs = bell_measure(dm);
  for (double& p : probs) p = std::clamp(p, 0.0, 1.0);
  return BellDiagonal::from(probs);
}

PureState purify_bell_diagonal(const BellDiagonal& d) {
  std::vector<Complex> v(16);
  for (auto label : kBellLabels) {
    const double w = std::sqrt(d[label]);
    const PureState bell = bell_state(label);
    for (std::size_t ab = 0; ab < 4; ++ab) v[ab * 4 + index(label)] += w * bell[ab];
  }
  return PureState::from_amplitudes(std::move(v));
}

DensityMatrix partial_trace(const DensityMatrix& dm, std::span<const std::size_t> keep) {
  const std::size_t n = dm.num_qubits();
  if (keep.empty()) throw std::invalid_argument("partial trace must keep at least one qubit");
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] >= n) throw std::invalid_argument("partial trace selector out of range");
    if (k > 0 && keep[k] <= keep[k - 1])
      throw std::invalid_argument("partial trace selector must be strictly increasing");
  }
  if (keep.size() == n) return dm;

  std::vector<std::size_t> traced;
  for (std::size_t q = 0; q < n; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);

  // Scatters a reduced index and an environment index into a full index.
  auto compose_index = [&](std::size_t kept_bits, std::size_t env_bits) {
    std::size_t full = 0;
    for (std::size_t k = 0; k < keep.size(); ++k)
      if (kept_bits >> (keep.size() - 1 - k) & 1) full |= qubit_mask(dm.dim(), keep[k]);
    for (std::size_t t = 0; t < traced.size(); ++t)
      if (env_bits >> (traced.size() - 1 - t) & 1) full |= qubit_mask(dm.dim(), traced[t]);
    return full;
  };

  const std::size_t out_dim = std::size_t{1} << keep.size();
  const std::size_t env_dim = std::size_t{1} << traced.size();
  ComplexMatrix out(out_dim);
  for (std::size_t r = 0; r < out_dim; ++r)
    for (std::size_t c = 0; c < out_dim; ++c)
      for (std::size_t e = 0; e < env_dim; ++e) out(r, c) += dm(compose_index(r, e), compose_index(c, e));
  return DensityMatrix::trusted(std::move(out));
}

double von_neumann_entropy(const DensityMatrix& dm) {
  double s = 0.0;
  for (double lambda : hermitian_eigenvalues(dm.matrix())) {
    if (lambda < 0.0 && lambda >= -kPsdTolerance) lambda = 0.0;
    s += plogp(lambda);
  }
  return s;
}

double holevo_bound(std::span<const DensityMatrix> states, std::span<const double> priors) {
  if (states.empty()) throw std::invalid_argument("empty ensemble");
  if (states.size() != priors.size()) throw std::invalid_argument("ensemble and prior sizes differ");
  const std::size_t dim = states.front().dim();
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != dim) throw std::invalid_argument("ensemble dimension mismatch");
    if (!(priors[i] >= 0.0)) throw std::invalid_argument("negative prior");
    total += priors[i];
  }
  if (std::abs(total - 1.0) > kStateTolerance) throw std::invalid_argument("priors do not sum to 1");

  ComplexMatrix average(dim);
  double conditional = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (priors[i] == 0.0) continue;
    average += priors[i] * states[i].matrix();
    conditional += priors[i] * von_neumann_entropy(states[i]);
  }
  return von_neumann_entropy(DensityMatrix::trusted(std::move(average))) - conditional;
}

}  // namespace mdiqsdc
