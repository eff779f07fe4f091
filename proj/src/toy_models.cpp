#include "mcm/toy_models.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace mcm {

MatC jw_annihilation(int modes, int mode) {
  const Index dim = Index(1) << modes;
  MatC c = MatC::Zero(dim, dim);
  for (Index s = 0; s < dim; ++s) {
    if (!(s >> mode & 1)) continue;
    int below = 0;
    for (int m = 0; m < mode; ++m) below += int(s >> m & 1);
    c(s ^ (Index(1) << mode), s) = below % 2 ? -1.0 : 1.0;
  }
  return c;
}

MatC jw_majorana(int modes, int mode, bool b_type) {
  const MatC c = jw_annihilation(modes, mode);
  const MatC cd = c.adjoint();
  return b_type ? MatC(-kI * (c - cd)) : MatC(c + cd);
}

namespace {

MatC lift(const MatC& x) {  // I_3 (x) x
  const Index d = x.rows();
  MatC out = MatC::Zero(3 * d, 3 * d);
  for (int r = 0; r < 3; ++r) out.block(r * d, r * d, d, d) = x;
  return out;
}

void add_harmonic(std::map<int, MatC>& h, int m, const MatC& x) {
  auto it = h.find(m);
  if (it == h.end()) h.emplace(m, x);
  else it->second += x;
}

// V = X + X^dag from the harmonics of X.
DrivenOperator<cplx> hermitian_from(const ToyModel& toy, const std::map<int, MatC>& X) {
  DrivenOperator<cplx> V;
  V.dim = Index(toy.states.size());
  V.omega = toy.omega;
  std::map<int, MatC> full;
  for (const auto& [m, x] : X) {
    add_harmonic(full, m, x);
    add_harmonic(full, -m, x.adjoint());
  }
  for (const auto& [m, x] : full) V.harmonics[m] = toy.restrict(x);
  return V;
}

void finish(ToyModel& t, const LeadModelParams& p) {
  const int nm = t.modes();
  const Index fdim = Index(1) << nm;
  for (int r = -1; r <= 1; ++r)
    for (Index occ = 0; occ < fdim; ++occ) {
      int k = 0;
      for (int l = 0; l < t.leads; ++l) k += int(occ >> (t.system_modes + l) & 1);
      if (r + k == 1) t.states.push_back(occ + fdim * (r + 1));
    }
  const Index d = Index(t.states.size());
  t.H0.dim = d;
  t.H0.omega = p.omega;
  MatC h = MatC::Zero(d, d);
  for (Index k = 0; k < d; ++k) {
    const int occ = t.occupation_of(k), r = t.register_of(k);
    double e = r == 1 ? -p.eps_plus : r == -1 ? -p.eps_minus : 0.0;
    for (int l = 0; l < t.leads; ++l)
      if (occ >> (t.system_modes + l) & 1) e += 0.5 * p.n[std::size_t(l)] * p.omega;
    if (t.has_pi && !(occ >> 1 & 1)) e += 0.5 * p.omega;  // odd pi parity
    h(k, k) = e;
  }
  t.H0.harmonics[0] = h;

  std::map<int, MatC> X;
  const MatC down = t.lower_register();
  for (const auto& [key, lam] : p.couplings) {
    const auto& [sp, lead, n] = key;
    const MatC dd = t.lead_annihilation(lead).adjoint();
    const MatC g = t.majorana(sp, lead);
    if (sp == Species::zero) {
      add_harmonic(X, n / 2, lam * dd * g * down);
    } else {
      const MatC Po = t.mpm_projector(true), Pe = t.mpm_projector(false);
      add_harmonic(X, (n - 1) / 2, lam * dd * (Po * g * Pe) * down);
      add_harmonic(X, (n + 1) / 2, lam * dd * (Pe * g * Po) * down);
    }
  }
  for (const auto& [key, a] : p.links)
    add_harmonic(X, 0, a * t.lead_annihilation(key.second).adjoint() * t.lead_annihilation(key.first));
  if (X.empty()) X.emplace(0, MatC::Zero(3 * fdim, 3 * fdim));
  t.V = hermitian_from(t, X);
}

}  // namespace

MatC ToyModel::restrict(const MatC& full) const {
  const Index d = Index(states.size());
  MatC out(d, d);
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) out(a, b) = full(states[std::size_t(a)], states[std::size_t(b)]);
  return out;
}

int ToyModel::register_of(Index k) const { return int(states[std::size_t(k)] >> modes()) - 1; }
int ToyModel::occupation_of(Index k) const {
  return int(states[std::size_t(k)] & ((Index(1) << modes()) - 1));
}

Index ToyModel::find(int occupation, int r) const {
  const Index target = Index(occupation) + (Index(1) << modes()) * (r + 1);
  for (std::size_t k = 0; k < states.size(); ++k)
    if (states[k] == target) return Index(k);
  return -1;
}

MatC ToyModel::majorana(Species s, int corner) const {
  if (kind == "two-lead") {
    if (corner < 0 || corner > 1 || s == Species::bulk) throw Error("toy model: bad Majorana label");
    return lift(jw_majorana(modes(), s == Species::zero ? 0 : 1, corner == 1));
  }
  if (s != Species::zero || corner < 0 || corner > 3) throw Error("toy model: four-lead model has zero modes only");
  return lift(jw_majorana(modes(), corner / 2, corner % 2 == 1));
}

MatC ToyModel::lead_annihilation(int lead) const {
  if (lead < 0 || lead >= leads) throw Error("toy model: bad lead index");
  return lift(jw_annihilation(modes(), system_modes + lead));
}

MatC ToyModel::lower_register() const {
  const Index d = Index(1) << modes();
  MatC out = MatC::Zero(3 * d, 3 * d);
  out.block(0, d, d, d).setIdentity();      // N -> N-1
  out.block(d, 2 * d, d, d).setIdentity();  // N+1 -> N
  return out;
}

MatC ToyModel::mpm_projector(bool odd) const {
  if (!has_pi) throw Error("toy model: no pi modes");
  const Index d = Index(1) << modes();
  MatC p = MatC::Zero(d, d);
  for (Index s = 0; s < d; ++s)
    if (bool(s >> 1 & 1) != odd) p(s, s) = 1.0;
  return lift(p);
}

ToyModel build_two_lead_toy(const LeadModelParams& p) {
  validate(p);
  if (p.n.size() != 2) throw Error("two-lead toy: needs exactly two leads");
  ToyModel t;
  t.kind = "two-lead";
  t.system_modes = 2;
  t.leads = 2;
  t.has_pi = true;
  t.omega = p.omega;
  finish(t, p);
  return t;
}

ToyModel build_four_lead_toy(const LeadModelParams& p) {
  validate(p);
  if (p.n.size() != 4) throw Error("four-lead toy: needs exactly four leads");
  for (const auto& [k, v] : p.couplings)
    if (std::get<0>(k) != Species::zero) throw Error("four-lead toy: zero-mode couplings only");
  ToyModel t;
  t.kind = "four-lead";
  t.system_modes = 2;
  t.leads = 4;
  t.has_pi = false;
  t.omega = p.omega;
  finish(t, p);
  return t;
}

Index ToyProblem::column(int occupation) const {
  for (std::size_t k = 0; k < state.size(); ++k)
    if (toy_occupation[k] == occupation) return Index(k);
  return -1;
}

ToyProblem toy_problem(const ToyModel& toy, double lambda, int M) {
  ToyProblem tp;
  tp.problem.H0 = toy.H0;
  tp.problem.V = toy.V;
  tp.problem.lambda = lambda;
  tp.problem.M = M;
  const MatC& h = toy.H0.harmonics.at(0);
  for (Index k = 0; k < toy.H0.dim; ++k) {
    if (toy.register_of(k) != 0) continue;
    const double e = h(k, k).real();
    const int n = int(std::lround((fold_quasienergy(e, toy.omega) - e) / toy.omega));
    if (std::abs(n) >= M) throw Error("toy_problem: Sambe cutoff too small for the lead energies");
    tp.problem.subspace.push_back(sambe_unit(toy.H0.dim, M, k, n));
    tp.state.push_back(k);
    tp.harmonic.push_back(n);
    tp.toy_occupation.push_back(toy.occupation_of(k));
  }
  return tp;
}

MatC FourLeadAmplitude::matrix() const {
  auto g = [](int c) { return jw_majorana(2, c / 2, c % 2 == 1); };
  return c14 * g(0) * g(3) + c24 * g(1) * g(3) + c13 * g(0) * g(2);
}

DrivenOperator<cplx> toy_effective_operator(const ToyModel& toy, const LeadModelParams& p, SpeciesPair pair) {
  if (toy.kind != "two-lead") throw Error("toy_effective_operator: two-lead model expected");
  const double c = 1.0 / p.eps_plus + 1.0 / p.eps_minus;
  const MatC hop = toy.lead_annihilation(1).adjoint() * toy.lead_annihilation(0);  // d_j^dag d_i
  std::map<int, MatC> X;
  const int ni = p.n[0];
  switch (pair) {
    case SpeciesPair::zz: {
      const cplx k = -c * std::conj(p.coupling(Species::zero, 0, 0)) * p.coupling(Species::zero, 1, 0);
      add_harmonic(X, 0, k * toy.majorana(Species::zero, 0) * toy.majorana(Species::zero, 1) * hop);
      break;
    }
    case SpeciesPair::pp: {
      // gp_i(t) gp_j(t) is static and the two coupling phases cancel.
      const cplx k = -c * std::conj(p.coupling(Species::pi, 0, -1)) * p.coupling(Species::pi, 1, -1);
      add_harmonic(X, 0, k * toy.majorana(Species::pi, 0) * toy.majorana(Species::pi, 1) * hop);
      break;
    }
    case SpeciesPair::zp: {
      const MatC Po = toy.mpm_projector(true), Pe = toy.mpm_projector(false);
      const bool i_pi = ni % 2 != 0;
      const int pl = i_pi ? 0 : 1;  // lead facing the pi mode
      const cplx k = -c * std::conj(p.coupling(i_pi ? Species::pi : Species::zero, 0, i_pi ? -1 : 0)) *
                     p.coupling(i_pi ? Species::zero : Species::pi, 1, i_pi ? 0 : -1);
      const MatC g0 = toy.majorana(Species::zero, 1 - pl), gp = toy.majorana(Species::pi, pl);
      // gp(t) e^{-i w t/2} = e^{-i w t} P_o gp P_e + P_e gp P_o, and the
      // conjugate phase e^{+i w t/2} when the pi lead is the source.
      const MatC a = Po * gp * Pe, b = Pe * gp * Po;
      if (i_pi) {
        add_harmonic(X, 0, k * a * g0 * hop);
        add_harmonic(X, 1, k * b * g0 * hop);
      } else {
        add_harmonic(X, -1, k * g0 * a * hop);
        add_harmonic(X, 0, k * g0 * b * hop);
      }
      break;
    }
  }
  return hermitian_from(toy, X);
}

DrivenOperator<cplx> toy_effective_operator(const ToyModel& toy, const LeadModelParams& p,
                                            const FourLeadAmplitude& h) {
  if (toy.kind != "four-lead") throw Error("toy_effective_operator: four-lead model expected");
  auto g = [&](int c) { return toy.majorana(Species::zero, c); };
  const double c = 1.0 / p.eps_plus + 1.0 / p.eps_minus;
  std::map<int, MatC> X;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      const MatC hop = toy.lead_annihilation(b).adjoint() * toy.lead_annihilation(a);
      MatC op;
      if (a == 0 && b == 3) {
        op = h.c14 * g(0) * g(3) + h.c24 * g(1) * g(3) + h.c13 * g(0) * g(2);
      } else {
        const cplx k = -c * std::conj(p.coupling(Species::zero, a, 0)) * p.coupling(Species::zero, b, 0);
        op = k * g(a) * g(b);
      }
      add_harmonic(X, 0, op * hop);
    }
  return hermitian_from(toy, X);
}

EffectiveModelCheck compare_levels(const ToyProblem& tp, const MatC& model_block) {
  const EffectiveHamiltonian ex = exact_effective_hamiltonian(tp.problem);
  const VecR& E0 = ex.energies;
  std::vector<double> centers;
  for (Index k = 0; k < E0.size(); ++k) {
    bool seen = false;
    for (double c : centers) seen = seen || std::abs(c - E0(k)) < 1e-8;
    if (!seen) centers.push_back(E0(k));
  }
  std::sort(centers.begin(), centers.end());
  MatC model = model_block;
  model.diagonal() += E0.cast<cplx>();
  const VecR le = Eigen::SelfAdjointEigenSolver<MatC>(ex.full()).eigenvalues();
  const VecR lm = Eigen::SelfAdjointEigenSolver<MatC>(model).eigenvalues();
  auto group = [&](const VecR& lev) {
    std::vector<std::vector<double>> g(centers.size());
    for (Index k = 0; k < lev.size(); ++k) {
      std::size_t best = 0;
      for (std::size_t c = 1; c < centers.size(); ++c)
        if (std::abs(lev(k) - centers[c]) < std::abs(lev(k) - centers[best])) best = c;
      g[best].push_back(lev(k));
    }
    return g;
  };
  const auto ge = group(le), gm = group(lm);
  EffectiveModelCheck out;
  out.cluster_energy = Eigen::Map<const VecR>(centers.data(), Index(centers.size()));
  double dmax = 0, mmax = 0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    if (ge[c].size() != gm[c].size()) throw Error("compare_levels: cluster sizes differ");
    auto center = [](std::vector<double> v) {
      double mean = 0;
      for (double x : v) mean += x;
      mean /= double(v.size());
      VecR r(Index(v.size()));
      std::sort(v.begin(), v.end());
      for (std::size_t k = 0; k < v.size(); ++k) r(Index(k)) = v[k] - mean;
      return r;
    };
    out.exact.push_back(center(ge[c]));
    out.model.push_back(center(gm[c]));
    dmax = std::max(dmax, (out.exact.back() - out.model.back()).cwiseAbs().maxCoeff());
    mmax = std::max(mmax, out.model.back().cwiseAbs().maxCoeff());
  }
  out.residual = mmax > 0 ? dmax / mmax : (dmax < 1e-14 ? 0.0 : INFINITY);
  return out;
}

EffectiveModelCheck verify_effective_model(const LeadModelParams& p, SpeciesPair pair, int M) {
  if (p.n.size() == 4) {
    if (pair != SpeciesPair::zz) throw Error("verify_effective_model: four-lead model is 00 only");
    const ToyModel toy = build_four_lead_toy(p);
    const ToyProblem tp = toy_problem(toy, 1.0, M);
    const MatC S = sambe_toeplitz(toy_effective_operator(toy, p, four_lead_effective(p)), M);
    MatC P(S.rows(), Index(tp.problem.subspace.size()));
    for (Index k = 0; k < P.cols(); ++k) P.col(k) = tp.problem.subspace[std::size_t(k)];
    return compare_levels(tp, P.adjoint() * S * P);
  }
  const ToyModel toy = build_two_lead_toy(p);
  if (infer_pair(p.n[0], p.n[1]) != pair) throw Error("verify_effective_model: species pair does not match n_i, n_j");
  const ToyProblem tp = toy_problem(toy, 1.0, M);
  const MatC S = sambe_toeplitz(toy_effective_operator(toy, p, pair), M);
  MatC P(S.rows(), Index(tp.problem.subspace.size()));
  for (Index k = 0; k < P.cols(); ++k) P.col(k) = tp.problem.subspace[std::size_t(k)];
  return compare_levels(tp, P.adjoint() * S * P);
}

}  // namespace mcm
