#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "mdiqsdc/quantum_core.hpp"

using namespace mdiqsdc;

namespace {

const double kS = 1.0 / std::sqrt(2.0);

// Reference Kronecker product of 2x2 matrices acting on a two-qubit vector,
// written independently of the library's bit-twiddling.
std::vector<Complex> kron_apply(const Matrix2& a, const Matrix2& b, std::span<const Complex> v) {
  std::vector<Complex> out(4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const Complex k = a[(r >> 1) * 2 + (c >> 1)] * b[(r & 1) * 2 + (c & 1)];
      out[r] += k * v[c];
    }
  return out;
}

ComplexMatrix random_hermitian(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    m(r, r) = g(rng);
    for (std::size_t c = r + 1; c < dim; ++c) {
      m(r, c) = {g(rng), g(rng)};
      m(c, r) = std::conj(m(r, c));
    }
  }
  return m;
}

DensityMatrix random_state(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) a(r, c) = {g(rng), g(rng)};
  ComplexMatrix rho = a * a.adjoint();
  rho *= 1.0 / rho.trace().real();
  return DensityMatrix::from_matrix(rho);
}

double shannon_bits(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0) h -= v * std::log2(v);
  return h;
}

}  // namespace

TEST_CASE("bell states have the standard amplitudes") {
  const auto phi_plus = bell_state(BellLabel::PhiPlus);
  CHECK(std::abs(phi_plus[0] - kS) < 1e-15);
  CHECK(std::abs(phi_plus[3] - kS) < 1e-15);
  CHECK(std::abs(phi_plus[1]) == 0.0);
  const auto psi_minus = bell_state(BellLabel::PsiMinus);
  CHECK(std::abs(psi_minus[1] - kS) < 1e-15);
  CHECK(std::abs(psi_minus[2] + kS) < 1e-15);
  for (auto b : kBellLabels) CHECK(bell_state(b).squared_norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("bell states are orthonormal") {
  for (auto a : kBellLabels)
    for (auto b : kBellLabels)
      CHECK(fidelity(bell_state(a), bell_state(b)) == doctest::Approx(a == b ? 1.0 : 0.0));
}

TEST_CASE("apply_pauli matches a Kronecker-product oracle") {
  const Matrix2 id{1.0, 0.0, 0.0, 1.0};
  for (auto b : kBellLabels)
    for (auto op : kPauliLabels)
      for (std::size_t q : {0u, 1u}) {
        const auto s = bell_state(b);
        const auto got = apply_pauli(s, op, q);
        const auto ref = q == 0 ? kron_apply(pauli_matrix(op), id, s.amplitudes())
                                : kron_apply(id, pauli_matrix(op), s.amplitudes());
        for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(got[i] - ref[i]) < 1e-15);
      }
}

TEST_CASE("apply_pauli examples") {
  const auto psi_minus = bell_state(BellLabel::PsiMinus);
  CHECK(equivalent(apply_pauli(psi_minus, PauliLabel::I, 0), psi_minus));
  CHECK(equivalent(apply_pauli(psi_minus, PauliLabel::I, 1), psi_minus));
  CHECK(equivalent(apply_pauli(psi_minus, PauliLabel::Z, 1), bell_state(BellLabel::PsiPlus)));
  for (auto op : kPauliLabels)
    CHECK(equivalent(apply_pauli(apply_pauli(psi_minus, op, 0), op, 0), psi_minus));
  CHECK_THROWS_AS(apply_pauli(psi_minus, PauliLabel::X, 2), std::out_of_range);
  CHECK_THROWS_AS(apply_pauli(DensityMatrix::from_pure(psi_minus), PauliLabel::X, 5), std::out_of_range);
}

TEST_CASE("Paulis permute Bell labels and follow the frame rule") {
  for (auto b : kBellLabels)
    for (auto op : kPauliLabels)
      for (std::size_t q : {0u, 1u}) {
        const auto probs = bell_measure(apply_pauli(DensityMatrix::from_pure(bell_state(b)), op, q));
        const auto expected = bell_from_frame(compose(bell_frame(b), op));
        for (auto l : kBellLabels) CHECK(probs[index(l)] == doctest::Approx(l == expected ? 1.0 : 0.0));
      }
}

TEST_CASE("Pauli group bookkeeping") {
  for (auto a : kPauliLabels) {
    CHECK(compose(a, a) == PauliLabel::I);
    CHECK(compose(a, PauliLabel::I) == a);
    CHECK_FALSE(anticommutes(a, a));
    CHECK(bell_frame(bell_from_frame(a)) == a);
    for (auto b : kPauliLabels) {
      CHECK(compose(a, b) == compose(b, a));
      // Matrix oracle: AB = +/- BA.
      const auto ma = pauli_matrix(a), mb = pauli_matrix(b);
      Matrix2 ab{}, ba{};
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          for (int k = 0; k < 2; ++k) {
            ab[r * 2 + c] += ma[r * 2 + k] * mb[k * 2 + c];
            ba[r * 2 + c] += mb[r * 2 + k] * ma[k * 2 + c];
          }
      double diff_plus = 0, diff_minus = 0;
      for (int i = 0; i < 4; ++i) {
        diff_plus += std::abs(ab[i] - ba[i]);
        diff_minus += std::abs(ab[i] + ba[i]);
      }
      CHECK(anticommutes(a, b) == (diff_minus < 1e-15));
      CHECK(!anticommutes(a, b) == (diff_plus < 1e-15));
    }
  }
}

TEST_CASE("bell_measure examples") {
  const auto p = bell_measure(DensityMatrix::from_pure(bell_state(BellLabel::PsiMinus)));
  CHECK(p[0] == doctest::Approx(1.0));
  const auto mixed = bell_measure(DensityMatrix::maximally_mixed(4));
  for (double v : mixed) CHECK(v == doctest::Approx(0.25));
  const auto pp = PureState::photon(PhotonState::Plus);
  const auto q = bell_measure(DensityMatrix::from_pure(tensor(pp, pp)));
  CHECK(q[index(BellLabel::PhiPlus)] == doctest::Approx(0.5));
  CHECK(q[index(BellLabel::PsiPlus)] == doctest::Approx(0.5));
  CHECK(q[index(BellLabel::PhiMinus)] == doctest::Approx(0.0));
  CHECK(q[index(BellLabel::PsiMinus)] == doctest::Approx(0.0));
}

TEST_CASE("product decompositions") {
  using P = PhotonState;
  const auto zz = product_decompose(P::Zero, P::Zero);
  CHECK(std::abs(zz[index(BellLabel::PhiPlus)] - kS) < 1e-12);
  CHECK(std::abs(zz[index(BellLabel::PhiMinus)] - kS) < 1e-12);
  CHECK(std::abs(zz[index(BellLabel::PsiPlus)]) < 1e-12);
  const auto mp = product_decompose(P::Minus, P::Plus);
  CHECK(std::abs(mp[index(BellLabel::PhiMinus)] - kS) < 1e-12);
  CHECK(std::abs(mp[index(BellLabel::PsiMinus)] - kS) < 1e-12);

  const std::pair<P, P> pairs[] = {{P::Zero, P::Zero}, {P::One, P::One},   {P::Zero, P::One},
                                   {P::One, P::Zero},  {P::Plus, P::Plus}, {P::Minus, P::Minus},
                                   {P::Plus, P::Minus}, {P::Minus, P::Plus}};
  for (auto [a, b] : pairs) {
    const auto amps = product_decompose(a, b);
    const auto probs = bell_measure(DensityMatrix::from_pure(tensor(PureState::photon(a), PureState::photon(b))));
    double total = 0.0;
    for (auto l : kBellLabels) {
      total += std::norm(amps[index(l)]);
      CHECK(std::abs(std::norm(amps[index(l)]) - probs[index(l)]) < 1e-12);
      // Each same-basis product state splits evenly over two Bell states.
      CHECK((std::abs(std::norm(amps[index(l)]) - 0.5) < 1e-12 || std::norm(amps[index(l)]) < 1e-24));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // Reassemble the product state from its Bell amplitudes.
    std::vector<Complex> rebuilt(4);
    for (auto l : kBellLabels)
      for (std::size_t i = 0; i < 4; ++i) rebuilt[i] += amps[index(l)] * bell_state(l)[i];
    const auto direct = tensor(PureState::photon(a), PureState::photon(b));
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(rebuilt[i] - direct[i]) < 1e-12);
  }
}

TEST_CASE("pauli_twirl examples") {
  const auto d = pauli_twirl(DensityMatrix::from_pure(bell_state(BellLabel::PsiMinus)));
  CHECK(d.deltas[0] == doctest::Approx(1.0));
  for (double v : pauli_twirl(DensityMatrix::maximally_mixed(4)).deltas) CHECK(v == doctest::Approx(0.25));

  // One-sided depolarizing written out as an explicit Kraus sum.
  for (double p : {0.0, 0.1, 0.37, 0.8, 1.0}) {
    const auto base = DensityMatrix::from_pure(bell_state(BellLabel::PsiMinus));
    ComplexMatrix m = (1.0 - 0.75 * p) * base.matrix();
    for (auto op : {PauliLabel::X, PauliLabel::Y, PauliLabel::Z})
      m += (p / 4) * apply_pauli(base, op, 1).matrix();
    const auto tw = pauli_twirl(DensityMatrix::from_matrix(m));
    CHECK(tw.deltas[0] == doctest::Approx(1.0 - 0.75 * p).epsilon(1e-12));
    for (std::size_t i = 1; i < 4; ++i) CHECK(tw.deltas[i] == doctest::Approx(p / 4).epsilon(1e-12));
  }
}

TEST_CASE("pauli_twirl is idempotent") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = pauli_twirl(random_state(4, rng));
    const auto again = pauli_twirl(DensityMatrix::from_bell_diagonal(d));
    for (std::size_t i = 0; i < 4; ++i) CHECK(again.deltas[i] == doctest::Approx(d.deltas[i]).epsilon(1e-12));
  }
}

TEST_CASE("purification and partial trace") {
  const std::size_t ab[] = {0, 1};
  const auto pure = purify_bell_diagonal(BellDiagonal::from({1, 0, 0, 0}));
  CHECK(equivalent(pure, tensor(bell_state(BellLabel::PsiMinus), PureState::basis(4, 0))));

  const auto uniform = partial_trace(DensityMatrix::from_pure(purify_bell_diagonal(BellDiagonal::from({0.25, 0.25, 0.25, 0.25}))), ab);
  CHECK(uniform.matrix().max_abs_diff(DensityMatrix::maximally_mixed(4).matrix()) < 1e-12);

  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4 - i; ++j)
      for (int k = 0; k <= 4 - i - j; ++k) {
        const auto d = BellDiagonal::from({i / 4.0, j / 4.0, k / 4.0, (4 - i - j - k) / 4.0});
        const auto reduced = partial_trace(DensityMatrix::from_pure(purify_bell_diagonal(d)), ab);
        CHECK(reduced.matrix().max_abs_diff(DensityMatrix::from_bell_diagonal(d).matrix()) < 1e-12);
      }
}

TEST_CASE("partial_trace examples and selector errors") {
  const auto singlet = DensityMatrix::from_pure(bell_state(BellLabel::PsiMinus));
  const std::size_t first[] = {0};
  CHECK(partial_trace(singlet, first).matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
  const std::size_t all[] = {0, 1};
  CHECK(partial_trace(singlet, all).matrix().max_abs_diff(singlet.matrix()) == 0.0);

  // Product state: tracing out one factor returns the other.
  const auto a = PureState::photon(PhotonState::Plus), b = PureState::photon(PhotonState::One);
  const auto prod = DensityMatrix::from_pure(tensor(a, b));
  const std::size_t second[] = {1};
  CHECK(partial_trace(prod, second).matrix().max_abs_diff(DensityMatrix::from_pure(b).matrix()) < 1e-15);

  const std::size_t bad_range[] = {2};
  const std::size_t bad_order[] = {1, 0};
  const std::size_t dup[] = {0, 0};
  CHECK_THROWS_AS(partial_trace(singlet, bad_range), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(singlet, bad_order), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(singlet, dup), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(singlet, std::span<const std::size_t>{}), std::invalid_argument);
}

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(DensityMatrix::from_pure(bell_state(BellLabel::PhiPlus))) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed(4)) == doctest::Approx(2.0));
  CHECK(von_neumann_entropy(DensityMatrix::from_bell_diagonal(BellDiagonal::from({0.5, 0.5, 0, 0}))) ==
        doctest::Approx(1.0));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::array<double, 4> w{u(rng), u(rng), u(rng), u(rng)};
    if (trial % 5 == 0) w[trial % 4] = 0.0;
    const double s = w[0] + w[1] + w[2] + w[3];
    for (auto& v : w) v /= s;
    const auto d = BellDiagonal::from(w);
    CHECK(std::abs(von_neumann_entropy(DensityMatrix::from_bell_diagonal(d)) - shannon_bits(w)) < 1e-10);
  }
}

TEST_CASE("Jacobi eigenvalues against trace invariants and a known spectrum") {
  std::mt19937_64 rng(3);
  for (std::size_t dim : {2u, 4u, 8u, 16u}) {
    const auto m = random_hermitian(dim, rng);
    const auto eig = hermitian_eigenvalues(m);
    REQUIRE(eig.size() == dim);
    const auto m2 = m * m;
    const auto m3 = m2 * m;
    double t1 = 0, t2 = 0, t3 = 0;
    for (double e : eig) {
      t1 += e;
      t2 += e * e;
      t3 += e * e * e;
    }
    CHECK(t1 == doctest::Approx(m.trace().real()).epsilon(1e-10));
    CHECK(t2 == doctest::Approx(m2.trace().real()).epsilon(1e-10));
    CHECK(t3 == doctest::Approx(m3.trace().real()).epsilon(1e-10));
    for (std::size_t i = 1; i < dim; ++i) CHECK(eig[i - 1] <= eig[i]);
  }
  // diag(1,2,3,4) rotated by a Bell-basis change.
  ComplexMatrix m(4);
  for (auto l : kBellLabels) {
    auto proj = ComplexMatrix::outer(bell_state(l).amplitudes());
    proj *= static_cast<double>(index(l) + 1);
    m += proj;
  }
  const auto eig = hermitian_eigenvalues(m);
  for (std::size_t i = 0; i < 4; ++i) CHECK(eig[i] == doctest::Approx(i + 1.0).epsilon(1e-12));
}

TEST_CASE("Holevo quantity") {
  const auto rho = DensityMatrix::from_pure(PureState::photon(PhotonState::Plus));
  const std::vector<DensityMatrix> same{rho, rho, rho};
  const std::vector<double> thirds{1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(std::abs(holevo_bound(same, thirds)) < 1e-12);

  std::vector<DensityMatrix> bells;
  for (auto l : kBellLabels) bells.push_back(DensityMatrix::from_pure(bell_state(l)));
  const std::vector<double> quarters(4, 0.25);
  CHECK(holevo_bound(bells, quarters) == doctest::Approx(2.0));
  const std::vector<DensityMatrix> two{bells[0], bells[3]};
  const std::vector<double> halves{0.5, 0.5};
  CHECK(holevo_bound(two, halves) == doctest::Approx(1.0));

  CHECK_THROWS_AS(holevo_bound(std::span<const DensityMatrix>{}, std::span<const double>{}), std::invalid_argument);
  const std::vector<DensityMatrix> mixed_dims{rho, bells[0]};
  CHECK_THROWS_AS(holevo_bound(mixed_dims, halves), std::invalid_argument);
  const std::vector<double> bad_priors{0.7, 0.7};
  CHECK_THROWS_AS(holevo_bound(two, bad_priors), std::invalid_argument);
  const std::vector<double> negative{1.5, -0.5};
  CHECK_THROWS_AS(holevo_bound(two, negative), std::invalid_argument);
  CHECK_THROWS_AS(holevo_bound(two, quarters), std::invalid_argument);
}

TEST_CASE("Holevo quantity is invariant under a common unitary") {
  std::mt19937_64 rng(17);
  const Matrix2 h{kS, kS, kS, -kS};
  const Matrix2 s{1.0, 0.0, 0.0, Complex{0.0, 1.0}};
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<DensityMatrix> states;
    for (int i = 0; i < 3; ++i) states.push_back(random_state(4, rng));
    const std::vector<double> priors{0.2, 0.3, 0.5};
    const double before = holevo_bound(states, priors);
    std::vector<DensityMatrix> rotated;
    for (const auto& st : states) {
      ComplexMatrix m = st.matrix();
      m.conjugate_qubit(h, 0);
      m.conjugate_qubit(s, 1);
      m.conjugate_qubit(h, 1);
      rotated.push_back(DensityMatrix::from_matrix(m));
    }
    CHECK(std::abs(holevo_bound(rotated, priors) - before) < 1e-9);
  }
}

TEST_CASE("constructors enforce invariants") {
  CHECK_THROWS_AS(PureState::from_amplitudes({1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(PureState::from_amplitudes({1.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PureState::from_amplitudes({std::nan(""), 0.0}), std::invalid_argument);
  CHECK_NOTHROW(PureState::from_amplitudes({kS, Complex{0.0, kS}}));

  ComplexMatrix not_hermitian(2);
  not_hermitian(0, 0) = 1.0;
  not_hermitian(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(not_hermitian), std::invalid_argument);
  ComplexMatrix bad_trace = ComplexMatrix::identity(2);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(bad_trace), std::invalid_argument);
  ComplexMatrix negative(2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(negative), std::invalid_argument);

  CHECK_THROWS_AS(BellDiagonal::from({0.5, 0.5, 0.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(BellDiagonal::from({0.5, 0.4, 0.0, 0.0}), std::invalid_argument);

  // Every library-built state satisfies the invariants.
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto st = random_state(4, rng);
    for (auto op : kPauliLabels) CHECK_NOTHROW(DensityMatrix::from_matrix(apply_pauli(st, op, 1).matrix()));
    const auto d = pauli_twirl(st);
    CHECK_NOTHROW(DensityMatrix::from_matrix(DensityMatrix::from_bell_diagonal(d).matrix()));
    const auto pure = purify_bell_diagonal(d);
    CHECK_NOTHROW(PureState::from_amplitudes({pure.amplitudes().begin(), pure.amplitudes().end()}));
  }
}
