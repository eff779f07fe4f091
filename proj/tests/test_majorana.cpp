#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "mcm/majorana.hpp"

using namespace mcm;

namespace {

// Independent Jordan-Wigner construction via Kronecker products (mode 0 is the
// least significant bit of the basis index, hence the rightmost factor).
MatC kron(const MatC& a, const MatC& b) {
  MatC out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

MatC oracle_gamma(int label) {
  MatC I2 = MatC::Identity(2, 2), Z(2, 2), X(2, 2), Y(2, 2);
  Z << 1, 0, 0, -1;  // (-1)^n on |0>,|1>
  X << 0, 1, 1, 0;
  Y << 0, cplx(0, -1), cplx(0, 1), 0;  // gB = -i(c - c†) in the |0>,|1> basis
  const int mode = label / 2;
  MatC out = MatC::Identity(1, 1);
  for (int m = 3; m >= 0; --m) {
    MatC f = m < mode ? Z : m == mode ? (label % 2 ? Y : X) : I2;
    out = kron(out, f);
  }
  return out;
}

Eigen::Vector2cd random_qubit(std::mt19937_64& g) {
  std::normal_distribution<double> n;
  Eigen::Vector2cd v(cplx(n(g), n(g)), cplx(n(g), n(g)));
  return v.normalized();
}

}  // namespace

TEST_CASE("single Majorana matrices match the Kronecker oracle") {
  for (int l = 0; l < 8; ++l) CHECK((majorana_matrix(l) - oracle_gamma(l)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("anticommutation over all pairs") {
  const MatC I = MatC::Identity(16, 16);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const MatC ga = majorana_matrix(a), gb = majorana_matrix(b);
      const MatC ac = ga * gb + gb * ga;
      CHECK((ac - (a == b ? 2.0 : 0.0) * I).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("canonical strings") {
  CHECK((to_matrix(make_string(0, {})) - MatC::Identity(16, 16)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(make_string(0, {0, 0}) == make_string(0, {}));
  CHECK(make_string(0, {1, 0}) == make_string(2, {0, 1}));
  CHECK(to_string(parse_string("i g01 g02")) == "i g01 g02");
  CHECK(to_string(parse_string("-g01 g02 g03 g04")) == "-g01 g02 g03 g04");
  CHECK(to_string(parse_string("-i g04 gp4")) == "-i g04 gp4");
  CHECK(parse_string("i g02 g01") == parse_string("-i g01 g02"));
  CHECK_THROWS_AS(parse_string("i g09"), Error);
}

TEST_CASE("multiply agrees with matrices") {
  std::mt19937_64 g(1);
  std::uniform_int_distribution<int> u(0, 255), k(0, 3);
  for (int t = 0; t < 200; ++t) {
    MajoranaString a{k(g), std::uint8_t(u(g))}, b{k(g), std::uint8_t(u(g))};
    CHECK((to_matrix(multiply(a, b)) - to_matrix(a) * to_matrix(b)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((to_matrix(adjoint(a)) - to_matrix(a).adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    const MatC m = to_matrix(a);
    CHECK(is_hermitian(a) == ((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-13));
  }
  // sigma_z1 sigma_x1 = (i g01 g02)(i g01 g03) = -g02 g03... check against i sigma_y
  const auto zx = multiply(pauli_string(1, 'z'), pauli_string(1, 'x'));
  CHECK(zx == multiply(make_string(1, {}), pauli_string(1, 'y')));
  // disjoint even strings commute
  const auto a = make_string(0, {0, 1}), b = make_string(0, {6, 7});
  CHECK(multiply(a, b) == multiply(b, a));
  for (int q = 1; q <= 3; ++q)
    for (char ax : {'x', 'y', 'z'}) CHECK(multiply(pauli_string(q, ax), pauli_string(q, ax)) == make_string(0, {}));
}

TEST_CASE("encoded Pauli algebra") {
  const MatC I = MatC::Identity(16, 16);
  for (int q = 1; q <= 3; ++q)
    for (int r = 1; r <= 3; ++r)
      for (char a : {'x', 'y', 'z'})
        for (char b : {'x', 'y', 'z'}) {
          const MatC A = to_matrix(pauli_string(q, a)), B = to_matrix(pauli_string(r, b));
          const bool anti = q == r && a != b;
          CHECK(((A * B + (anti ? 1.0 : -1.0) * B * A)).cwiseAbs().maxCoeff() < 1e-13);
          CHECK(commutes(pauli_string(q, a), total_parity()));
        }
  // XY = iZ on every encoded qubit
  for (int q = 1; q <= 3; ++q) {
    const MatC X = to_matrix(pauli_string(q, 'x')), Y = to_matrix(pauli_string(q, 'y')),
               Z = to_matrix(pauli_string(q, 'z'));
    CHECK((X * Y - kI * Z).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((X * X - I).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("i gA gB = 2n - 1 for each fermion") {
  for (int k = 0; k < 4; ++k) {
    const MatC m = to_matrix(make_string(1, {2 * k, 2 * k + 1}));
    for (int s = 0; s < kFockDim; ++s) CHECK(std::abs(m(s, s) - cplx((s >> k & 1) ? 1.0 : -1.0)) < 1e-15);
  }
}

TEST_CASE("logical basis") {
  const MatC& B = logical_basis();
  CHECK((B.adjoint() * B - MatC::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
  // all logical states are in the even sector
  const MatC P = to_matrix(total_parity());
  CHECK((P * B - B).cwiseAbs().maxCoeff() < 1e-12);
  // |000> is the occupation state n = (1,0,1,0)
  CHECK(std::abs(std::abs(B(0b0101, 0)) - 1.0) < 1e-12);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        FockState s;
        s.amp = B.col(4 * a + 2 * b + c);
        CHECK(bloch_vector(s, 1)[2] == doctest::Approx(a ? -1.0 : 1.0));
        CHECK(bloch_vector(s, 2)[2] == doctest::Approx(b ? -1.0 : 1.0));
        CHECK(bloch_vector(s, 3)[2] == doctest::Approx(c ? -1.0 : 1.0));
        CHECK(s.sector() == Sector::even);
      }
}

TEST_CASE("encode and decode round trip") {
  std::mt19937_64 g(7);
  for (int t = 0; t < 20; ++t) {
    const auto q1 = random_qubit(g), q2 = random_qubit(g), q3 = random_qubit(g);
    const FockState s = encode_logical(q1, q2, q3);
    CHECK(std::abs(s.amp.norm() - 1.0) < 1e-12);
    const VecC c = logical_amplitudes(s);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int d = 0; d < 2; ++d) CHECK(std::abs(c(4 * a + 2 * b + d) - q1(a) * q2(b) * q3(d)) < 1e-12);
    // Bloch vector of qubit 1 against the two-level formula
    const auto bv = bloch_vector(s, 1);
    const cplx r = std::conj(q1(0)) * q1(1);
    CHECK(bv[0] == doctest::Approx(2 * r.real()).epsilon(1e-12));
    CHECK(bv[1] == doctest::Approx(2 * r.imag()).epsilon(1e-12));
    CHECK(bv[2] == doctest::Approx(std::norm(q1(0)) - std::norm(q1(1))).epsilon(1e-12));
  }
  const Eigen::Vector2cd zero(1, 0), plus(1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
  const FockState s = encode_logical(plus, zero, zero);
  CHECK(bloch_vector(s, 1)[0] == doctest::Approx(1.0));
  CHECK(expectation(s, total_parity()).real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(encode_logical(Eigen::Vector2cd(1, 1), zero, zero), Error);
}

TEST_CASE("parity measurement") {
  const Eigen::Vector2cd zero(1, 0), plus(1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
  const FockState s = encode_logical(plus, zero, zero);
  const auto z1 = pauli_string(1, 'z');
  CHECK(outcome_probability(s, z1, 1) == doctest::Approx(0.5));
  CHECK(outcome_probability(s, z1, -1) == doctest::Approx(0.5));
  const auto r = measure_forced(s, z1, -1);
  CHECK(bloch_vector(r.post, 1)[2] == doctest::Approx(-1.0));
  // repeating the measurement is deterministic
  CHECK(outcome_probability(r.post, z1, -1) == doctest::Approx(1.0));
  CHECK_THROWS_WITH(measure_forced(r.post, z1, 1), "incompatible forced outcome");
  CHECK_THROWS_AS(measure_forced(s, make_string(0, {0, 1}), 1), Error);  // anti-Hermitian

  Rng rng(42);
  int plus_count = 0;
  const int n = 4000;
  for (int k = 0; k < n; ++k) plus_count += measure(s, z1, rng).outcome == 1;
  CHECK(std::abs(plus_count - n / 2) < 4 * std::sqrt(n / 4.0));
  Rng a(5), b(5);
  for (int k = 0; k < 10; ++k) CHECK(a.uniform() == b.uniform());
}
