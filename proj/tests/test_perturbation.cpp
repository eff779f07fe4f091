#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <random>

#include "mcm/lattice.hpp"
#include "mcm/mode_expansion.hpp"
#include "mcm/toy_models.hpp"

using namespace mcm;

namespace {

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= double(x.size());
  my /= double(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

MatC random_hermitian(std::mt19937_64& g, Index d) {
  std::normal_distribution<double> n;
  MatC a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = cplx(n(g), n(g));
  return 0.5 * (a + a.adjoint());
}

DrivenOperator<cplx> op(Index d, double omega, std::map<int, MatC> h) {
  DrivenOperator<cplx> o;
  o.dim = d;
  o.omega = omega;
  o.harmonics = std::move(h);
  return o;
}

// Random H0 (static) and V (harmonics 0, +-1), subspace = one Sambe state
// with the first-order shift removed from V.
PerturbationProblem random_problem(unsigned seed) {
  std::mt19937_64 g(seed);
  const Index d = 6;
  const double w = 2 * kPi;
  MatC h0 = random_hermitian(g, d);
  Eigen::SelfAdjointEigenSolver<MatC> es(h0);
  MatC v0 = random_hermitian(g, d);
  std::normal_distribution<double> n;
  MatC v1(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) v1(i, j) = cplx(n(g), n(g));
  const VecC psi = es.eigenvectors().col(2);
  v0 -= (psi.adjoint() * v0 * psi)(0, 0).real() * MatC::Identity(d, d);
  PerturbationProblem p;
  p.H0 = op(d, w, {{0, h0}});
  p.V = op(d, w, {{0, v0}, {1, v1}, {-1, v1.adjoint()}});
  p.M = 2;
  VecC s = VecC::Zero(5 * d);
  s.segment(2 * d, d) = psi;
  p.subspace = {s};
  return p;
}

LeadModelParams two_lead(int ni, int nj, double lam) {
  LeadModelParams p;
  p.eps_plus = 1.0;
  p.eps_minus = 1.3;
  p.n = {ni, nj};
  auto add = [&](int lead, int n, cplx v) {
    if (n % 2) p.couplings[{Species::pi, lead, -1}] = v;
    else p.couplings[{Species::zero, lead, 0}] = v;
  };
  add(0, ni, lam);
  add(1, nj, lam * cplx(0.8, 0.3));
  return p;
}

LeadModelParams four_lead(double lam, bool links) {
  LeadModelParams p;
  p.eps_plus = 1.0;
  p.eps_minus = 1.3;
  p.n = {0, 0, 0, 0};
  const cplx l[4] = {1.0, cplx(0.8, 0.3), cplx(0.6, -0.5), cplx(0.9, 0.2)};
  for (int s = 0; s < 4; ++s) p.couplings[{Species::zero, s, 0}] = lam * l[s];
  if (links) {
    p.links[{0, 1}] = 0.7 * lam;
    p.links[{2, 3}] = cplx(0.4, 0.3) * lam;
  }
  return p;
}

double exact_vs_order(const PerturbationProblem& p, int order) {
  return (effective_hamiltonian(p, order).full() - exact_effective_hamiltonian(p).full()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("static two-level problem: second order is -|v|^2/Delta") {
  const double D = 0.9;
  const cplx v(0.3, -0.2);
  MatC h0 = MatC::Zero(2, 2), v0 = MatC::Zero(2, 2);
  h0(1, 1) = D;
  v0(0, 1) = v;
  v0(1, 0) = std::conj(v);
  PerturbationProblem p;
  p.H0 = op(2, 2 * kPi, {{0, h0}});
  p.V = op(2, 2 * kPi, {{0, v0}});
  p.lambda = 0.1;
  p.subspace = {sambe_unit(2, 2, 0, 0)};
  const auto q = quasienergy_corrections(p);
  CHECK(q.second(0) == doctest::Approx(-std::norm(v) / D).epsilon(1e-13));
  CHECK(std::abs(q.third(0)) < 1e-15);
}

TEST_CASE("driven two-level problem: the absorbed photon shifts the denominator") {
  const double D = 0.9, w = 2 * kPi;
  const cplx v(0.3, -0.2);
  MatC h0 = MatC::Zero(2, 2), x = MatC::Zero(2, 2);
  h0(1, 1) = D;
  x(0, 1) = v;  // v e^{iwt} |0><1| + h.c.
  PerturbationProblem p;
  p.H0 = op(2, w, {{0, h0}});
  p.V = op(2, w, {{1, x}, {-1, x.adjoint()}});
  p.subspace = {sambe_unit(2, 2, 0, 0)};
  CHECK(quasienergy_corrections(p).second(0) == doctest::Approx(-std::norm(v) / (D - w)).epsilon(1e-13));
}

TEST_CASE("V = 0 gives no corrections") {
  PerturbationProblem p = random_problem(3);
  for (auto& [m, h] : p.V.harmonics) h.setZero();
  p.lambda = 0.3;
  const auto q = quasienergy_corrections(p);
  CHECK(std::abs(q.delta(0)) < 1e-15);
  CHECK(effective_hamiltonian(p).matrix.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("random Floquet problem: truncation error scales as lambda^(p+1)") {
  PerturbationProblem p = random_problem(11);
  std::vector<double> lam, e2, e3;
  for (double l : {0.02, 0.01, 0.005, 0.0025}) {
    p.lambda = l;
    const auto q = quasienergy_corrections(p);
    const double ex = exact_effective_hamiltonian(p).full()(0, 0).real();
    lam.push_back(l);
    e2.push_back(std::abs(ex - (q.unperturbed(0) + l * l * q.second(0))));
    e3.push_back(std::abs(ex - (q.unperturbed(0) + q.delta(0))));
  }
  CHECK(slope(lam, e2) == doctest::Approx(3.0).epsilon(0.2 / 3));
  CHECK(slope(lam, e3) == doctest::Approx(4.0).epsilon(0.3 / 4));
}

TEST_CASE("van Vleck form reduces to the Rayleigh-Schrodinger shifts") {
  PerturbationProblem p = random_problem(5);
  p.lambda = 0.01;
  const auto q = quasienergy_corrections(p);
  const auto h = effective_hamiltonian(p);
  CHECK(std::abs(h.second(0, 0).real() - q.second(0)) < 1e-12);
  CHECK(std::abs(h.third(0, 0).real() - q.third(0)) < 1e-12);
}

TEST_CASE("effective Hamiltonians are Hermitian") {
  std::mt19937_64 g(8);
  const Index d = 5;
  MatC h0 = MatC::Zero(d, d);
  for (Index k = 0; k < d; ++k) h0(k, k) = 0.37 * double(k) - 0.6;
  MatC v1 = random_hermitian(g, d) + kI * random_hermitian(g, d);
  PerturbationProblem p;
  p.H0 = op(d, 2 * kPi, {{0, h0}});
  p.V = op(d, 2 * kPi, {{0, random_hermitian(g, d)}, {1, v1}, {-1, v1.adjoint()}});
  p.lambda = 0.05;
  p.subspace = {sambe_unit(d, 2, 0, 0), sambe_unit(d, 2, 2, 0), sambe_unit(d, 2, 3, 1)};
  const auto h = effective_hamiltonian(p);
  CHECK(h.hermiticity < 1e-12);
  CHECK(exact_effective_hamiltonian(p).hermiticity < 1e-12);
}

TEST_CASE("first-order coupling inside a degenerate cluster is rejected") {
  MatC h0 = MatC::Zero(3, 3), v0 = MatC::Zero(3, 3);
  h0(2, 2) = 1.0;
  v0(0, 1) = v0(1, 0) = 0.2;
  PerturbationProblem p;
  p.H0 = op(3, 2 * kPi, {{0, h0}});
  p.V = op(3, 2 * kPi, {{0, v0}});
  p.subspace = {sambe_unit(3, 2, 0, 0), sambe_unit(3, 2, 1, 0)};
  CHECK_THROWS_AS(quasienergy_corrections(p), Error);
  CHECK_NOTHROW(effective_hamiltonian(p));
}

TEST_CASE("states outside the subspace must be gapped") {
  MatC h0 = MatC::Zero(2, 2), v0 = MatC::Zero(2, 2);
  v0(0, 1) = v0(1, 0) = 0.2;
  PerturbationProblem p;
  p.H0 = op(2, 2 * kPi, {{0, h0}});
  p.V = op(2, 2 * kPi, {{0, v0}});
  p.subspace = {sambe_unit(2, 2, 0, 0)};
  CHECK_THROWS_AS(quasienergy_corrections(p), Error);
}

TEST_CASE("lead couplings: closed forms") {
  LeadModelParams p;
  p.n = {0, 0};
  p.couplings[{Species::zero, 0, 0}] = 0.1;
  p.couplings[{Species::zero, 1, 0}] = 0.1;
  const auto T = lead_effective_coupling(p);
  CHECK(T.pair == SpeciesPair::zz);
  CHECK(std::abs(T.harmonics.at(0) - cplx(0, 0.02)) < 1e-15);
  CHECK(T.warnings.empty());
  CHECK(T.window() == doctest::Approx(1.0));

  p.n = {0, 1};
  p.couplings.erase({Species::zero, 1, 0});
  p.couplings[{Species::pi, 1, -1}] = 0.1;
  const auto Tz = lead_effective_coupling(p);
  CHECK(Tz.pair == SpeciesPair::zp);
  CHECK(Tz.harmonics.count(-1) == 1);
  CHECK(Tz.window() == doctest::Approx(2.0));
  LeadModelParams q;
  q.n = {1, 0};
  q.couplings[{Species::pi, 0, -1}] = 0.1;
  q.couplings[{Species::zero, 1, 0}] = 0.1;
  CHECK(lead_effective_coupling(q).harmonics.count(1) == 1);  // pi lead first: conjugate phase
  CHECK(std::abs(Tz.at(0.5) - cplx(0, 0.02) * std::exp(cplx(0, -0.5 * kPi))) < 1e-15);

  p.n = {1, 1};
  p.couplings.erase({Species::zero, 0, 0});
  p.couplings[{Species::pi, 0, -1}] = 0.1;
  CHECK(lead_effective_coupling(p).harmonics.count(-2) == 1);

  p.n = {2, 1};
  p.couplings.clear();
  CHECK_THROWS_WITH_AS(lead_effective_coupling(p), doctest::Contains("n_i = 2"), Error);

  p.n = {0, 0};
  p.couplings[{Species::zero, 0, 0}] = 0.2;
  CHECK(lead_effective_coupling(p).warnings.size() == 1);
  p.eps_minus = 0;
  CHECK_THROWS_AS(validate(p), Error);
}

TEST_CASE("four-lead amplitude coefficients") {
  LeadModelParams p;
  p.n = {0, 0, 0, 0};
  for (int s = 0; s < 4; ++s) p.couplings[{Species::zero, s, 0}] = 0.1;
  auto h = four_lead_effective(p);
  CHECK(std::abs(h.c14) == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(std::abs(h.c24) == 0.0);
  CHECK(std::abs(h.c13) == 0.0);
  p.links[{0, 1}] = 0.01;
  p.links[{2, 3}] = 0.01;
  h = four_lead_effective(p);
  CHECK(std::abs(h.c24) == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(std::abs(h.c13) == doctest::Approx(1e-4).epsilon(1e-12));
}

TEST_CASE("Jordan-Wigner operators") {
  const int modes = 3;
  const MatC I = MatC::Identity(8, 8);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      const MatC ga = jw_majorana(modes, a / 2, a % 2), gb = jw_majorana(modes, b / 2, b % 2);
      CHECK((ga * gb + gb * ga - 2.0 * (a == b) * I).cwiseAbs().maxCoeff() < 1e-15);
    }
  for (int m = 0; m < modes; ++m) {
    const MatC c = jw_annihilation(modes, m);
    const MatC n = c.adjoint() * c;
    const MatC lhs = kI * jw_majorana(modes, m, false) * jw_majorana(modes, m, true);
    CHECK((lhs - (2.0 * n - I)).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("toy models: dimensions and Hermiticity") {
  const ToyModel t2 = build_two_lead_toy(two_lead(0, 1, 0.02));
  CHECK(t2.states.size() == 16);
  CHECK(hermiticity_residual(t2.V) < 1e-15);
  LeadModelParams p4 = four_lead(0.02, true);
  const ToyModel t4 = build_four_lead_toy(p4);
  CHECK(t4.states.size() == 44);
  CHECK(hermiticity_residual(t4.V) < 1e-15);
  p4.couplings[{Species::pi, 0, 1}] = 0.1;
  CHECK_THROWS_AS(build_four_lead_toy(p4), Error);
}

TEST_CASE("toy models: lambda = 0 gives residual 0") {
  LeadModelParams p = two_lead(0, 0, 0.0);
  p.couplings.clear();
  CHECK(verify_effective_model(p, SpeciesPair::zz).residual == 0.0);
}

TEST_CASE("toy models reproduce the co-tunneling amplitudes") {
  for (auto [ni, nj, pair] : {std::tuple{0, 0, SpeciesPair::zz}, std::tuple{1, 1, SpeciesPair::pp},
                              std::tuple{0, 1, SpeciesPair::zp}, std::tuple{1, 0, SpeciesPair::zp}}) {
    CAPTURE(ni);
    CAPTURE(nj);
    const auto r = verify_effective_model(two_lead(ni, nj, 0.02), pair);
    CHECK(r.residual < 5e-2);
    CHECK(r.model.front().cwiseAbs().maxCoeff() > 1e-4);
  }
  CHECK(verify_effective_model(four_lead(0.02, false), SpeciesPair::zz).residual < 5e-2);
}

TEST_CASE("parity flip reverses the transfer amplitude") {
  const LeadModelParams p = two_lead(0, 0, 0.02);
  const ToyModel toy = build_two_lead_toy(p);
  const ToyProblem tp = toy_problem(toy, 1.0, 2);
  const MatC h = exact_effective_hamiltonian(tp.problem).matrix;
  const cplx kappa = -(1.0 / p.eps_plus + 1.0 / p.eps_minus) *
                     std::conj(p.coupling(Species::zero, 0, 0)) * p.coupling(Species::zero, 1, 0);
  for (int pi_bit : {0, 1}) {
    cplx t[2];
    for (int z = 0; z < 2; ++z) {
      const int sys = z | pi_bit << 1;
      t[z] = h(tp.column(sys | 1 << 3), tp.column(sys | 1 << 2));
    }
    CHECK(std::abs(t[0] + t[1]) < 1e-10 * std::abs(t[0]));
    CHECK(std::abs(std::abs(t[0]) - std::abs(kappa)) < 2e-3 * std::abs(kappa));
  }
}

TEST_CASE("two-lead model with a direct link: second order leaves O(lambda^3)") {
  std::vector<double> lam, e2, e3;
  for (double l : {0.02, 0.01, 0.005}) {
    LeadModelParams p = two_lead(0, 0, 1.0);
    p.links[{0, 1}] = 0.7;
    const ToyProblem tp = toy_problem(build_two_lead_toy(p), l, 2);
    lam.push_back(l);
    e2.push_back(exact_vs_order(tp.problem, 2));
    e3.push_back(exact_vs_order(tp.problem, 3));
  }
  CHECK(slope(lam, e2) == doctest::Approx(3.0).epsilon(0.2 / 3));
  CHECK(slope(lam, e3) == doctest::Approx(4.0).epsilon(0.3 / 4));
}

TEST_CASE("four-lead model: third order leaves O(lambda^4)") {
  std::vector<double> lam, e3;
  for (double l : {0.02, 0.01, 0.005}) {
    const ToyProblem tp = toy_problem(build_four_lead_toy(four_lead(1.0, true)), l, 2);
    lam.push_back(l);
    e3.push_back(exact_vs_order(tp.problem, 3));
  }
  CHECK(slope(lam, e3) == doctest::Approx(4.0).epsilon(0.3 / 4));
}

TEST_CASE("four-lead model: second-order block is the g01 g04 amplitude") {
  const LeadModelParams p = four_lead(1.0, true);
  const ToyProblem tp = toy_problem(build_four_lead_toy(p), 1.0, 2);
  const auto h = effective_hamiltonian(tp.problem);
  const MatC ref = four_lead_effective(p).c14 * jw_majorana(2, 0, false) * jw_majorana(2, 1, true);
  MatC blk(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) blk(a, b) = h.second(tp.column(a | 1 << 5), tp.column(b | 1 << 2));
  CHECK((blk - ref).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("four-lead amplitude operator") {
  FourLeadAmplitude h{1.0, 0.0, 0.0};
  const MatC g1 = jw_majorana(2, 0, false), g4 = jw_majorana(2, 1, true);
  CHECK((h.matrix() - g1 * g4).cwiseAbs().maxCoeff() < 1e-15);
  // (g01 g04)^2 = -1
  CHECK((h.matrix() * h.matrix() + MatC::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);
}

// ---- mode expansion -------------------------------------------------------

TEST_CASE("Majorana form of a single site") {
  MatC h(2, 2);
  h << 0.7, 0, 0, -0.7;
  const MatR A = majorana_form(h);
  CHECK(A(0, 1) == doctest::Approx(0.7));
  CHECK(A(1, 0) == doctest::Approx(-0.7));
  CHECK(std::abs(A(0, 0)) < 1e-15);
}

TEST_CASE("Majorana form reproduces the many-body commutator") {
  // Two sites, 4 Majoranas on a 2-mode Fock space.
  const DrivenBdG b = build_chain(2, 0.8, 0.5, 0.3, 0.0);
  const MatC h = b.harmonic(0);
  const MatR A = majorana_form(h);
  MatC H = MatC::Zero(4, 4);
  std::vector<MatC> g;
  for (int k = 0; k < 4; ++k) g.push_back(jw_majorana(2, k / 2, k % 2));
  std::vector<MatC> c = {jw_annihilation(2, 0), jw_annihilation(2, 1)};
  // H = 1/2 Psi^dag h Psi with Psi = (c_0, c_0^dag, c_1, c_1^dag)
  std::vector<MatC> psi = {c[0], c[0].adjoint(), c[1], c[1].adjoint()};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) H += 0.5 * h(i, j) * psi[std::size_t(i)].adjoint() * psi[std::size_t(j)];
  for (int k = 0; k < 4; ++k) {
    const MatC lhs = H * g[std::size_t(k)] - g[std::size_t(k)] * H;
    MatC rhs = MatC::Zero(4, 4);
    for (int a = 0; a < 4; ++a) rhs += kI * A(a, k) * g[std::size_t(a)];
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("undriven zero mode is the seed") {
  const auto [A0, A1] = majorana_drive(build_chain(6, 1, 1, 0, 0));
  const auto ex = majorana_mode_expansion(A0, A1, 2 * kPi, Species::zero, 3);
  CHECK(ex.kernel_dim == 2);
  CHECK(ex.residuals[0] < 1e-14);
  double rest = 0;
  for (const auto& [n, g] : ex.components)
    if (n != 0) rest += g.norm();
  CHECK(rest < 1e-14);
  CHECK((ex.at(0.3) - ex.seed).norm() < 1e-14);
}

TEST_CASE("driven chain: zero-mode residuals decrease order by order") {
  const double mu1 = 0.5, w = 2 * kPi;
  const auto [A0, A1] = majorana_drive(build_chain(8, 1, 1, 0, mu1, false, w));
  const auto ex = majorana_mode_expansion(A0, A1, w, Species::zero, 3);
  REQUIRE(ex.residuals.size() == 4);
  for (int k = 0; k < 3; ++k) {
    CHECK(ex.residuals[std::size_t(k + 1)] < ex.residuals[std::size_t(k)]);
  }
  // each order gains roughly a factor ||h||/w
  CHECK(ex.residuals[1] / ex.residuals[0] < 0.5);
}

TEST_CASE("mode expansion operators are Hermitian at random times") {
  std::mt19937_64 g(21);
  std::uniform_real_distribution<double> u(0, 2);
  const auto [A0, A1] = majorana_drive(build_chain(6, 1, 1, 0.2, 0.4));
  const auto z = majorana_mode_expansion(A0, A1, 2 * kPi, Species::zero, 3, nullptr, {2.0 / 3, -0.4, 1e-3});
  const auto [P0, P1] = majorana_drive(build_chain(2, 1, 1, 0, 0.05));
  const double w = 2 * pi_seed_spectrum(P0, P1).back();
  const auto pc = majorana_mode_expansion(P0, P1, w, Species::pi, 3, nullptr, {2.0 / 3, -2.0 / 3, 1e-8});
  const auto pp = majorana_mode_expansion(P0, P1, w, Species::pi, 1);
  double worst = 0;
  for (int k = 0; k < 10; ++k) {
    const double t = u(g);
    CHECK(z.hermiticity(t) < 1e-10);
    CHECK(pc.hermiticity(t) < 1e-10);
    worst = std::max(worst, pp.hermiticity(t));
  }
  // B = -2/5 breaks gamma_bar_{1-n} = gamma_bar_n^* at first order
  CHECK(worst > 1e-4);
}

TEST_CASE("pi seed satisfies its defining condition") {
  const auto [A0, A1] = majorana_drive(build_chain(4, 1, 0.6, 0.5, 0.3));
  const auto spec = pi_seed_spectrum(A0, A1);
  REQUIRE(!spec.empty());
  const double w = 2 * spec.back();
  const auto ex = majorana_mode_expansion(A0, A1, w, Species::pi, 0);
  const VecC g = ex.seed;
  const VecC r = kI * (A0.cast<cplx>() * g) + 0.5 * kI * (A1.cast<cplx>() * g.conjugate()) - 0.5 * w * g;
  CHECK(r.norm() < 1e-10);
  CHECK(ex.residuals[0] > 0);  // harmonics -1 and 2 remain
}

TEST_CASE("first-order pi step: residual minimizers") {
  // 2-site sweet spot: h1 maps the dimer seed onto ker h0, isolating the A/B step.
  const auto [A0, A1] = majorana_drive(build_chain(2, 1, 1, 0, 0.05));
  const double w = 2 * pi_seed_spectrum(A0, A1).back();
  const VecC seed = majorana_mode_expansion(A0, A1, w, Species::pi, 0).seed;
  auto r2 = [&](double A, double B) {
    const double r = majorana_mode_expansion(A0, A1, w, Species::pi, 1, &seed, {A, B, 1e-8}).residuals[1];
    return r * r;
  };
  auto argmin = [](auto f) {  // residual^2 is quadratic in each coefficient
    const double a = f(-1.0), b = f(0.0), c = f(1.0);
    return -(c - a) / (2 * (a + c - 2 * b));
  };
  CHECK(argmin([&](double x) { return r2(x, -0.4); }) == doctest::Approx(2.0 / 3).epsilon(2e-3));
  CHECK(argmin([&](double x) { return r2(2.0 / 3, x); }) == doctest::Approx(-2.0 / 3).epsilon(2e-3));
  CHECK(r2(2.0 / 3 + 0.1, -0.4) > r2(2.0 / 3, -0.4));
  CHECK(r2(2.0 / 3 - 0.1, -0.4) > r2(2.0 / 3, -0.4));
}

TEST_CASE("missing seeds are reported") {
  const auto [A0, A1] = majorana_drive(build_chain(3, 1, 1, 3.0, 0.2));
  CHECK_THROWS_WITH_AS(majorana_mode_expansion(A0, A1, 2 * kPi, Species::zero, 1),
                       doctest::Contains("kernel dimension 0"), Error);
  CHECK_THROWS_WITH_AS(majorana_mode_expansion(A0, A1, 40.0, Species::pi, 1),
                       doctest::Contains("kernel dimension"), Error);
  VecC bad = VecC::Zero(6);
  bad(2) = 1;
  CHECK_THROWS_AS(majorana_mode_expansion(A0, A1, 2 * kPi, Species::zero, 1, &bad), Error);
}
