#include "mcm/perturbation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mcm {

MatC sambe_toeplitz(const DrivenOperator<cplx>& op, int M) {
  const Index d = op.dim, B = 2 * M + 1;
  MatC out = MatC::Zero(B * d, B * d);
  for (int n = -M; n <= M; ++n)
    for (const auto& [m, hm] : op.harmonics) {
      const int k = n - m;
      if (k < -M || k > M) continue;
      out.block(Index(n + M) * d, Index(k + M) * d, d, d) = hm;
    }
  return out;
}

VecC sambe_unit(Index dim, int M, Index b, int n) {
  if (n < -M || n > M || b < 0 || b >= dim) throw Error("sambe_unit: index out of range");
  VecC v = VecC::Zero((2 * M + 1) * dim);
  v(Index(n + M) * dim + b) = 1.0;
  return v;
}

std::vector<VecC> sambe_states_near(const DrivenOperator<cplx>& H0, int M, double target, double tol) {
  const SambeMatrix s = assemble_sambe(H0, M);
  Eigen::SelfAdjointEigenSolver<MatC> es(s.matrix);
  std::vector<VecC> out;
  for (Index k = 0; k < es.eigenvalues().size(); ++k) {
    const VecC v = es.eigenvectors().col(k);
    if (dominant_harmonic(v, M, H0.dim) != 0) continue;
    if (circular_distance(es.eigenvalues()(k), target, H0.omega) < tol) out.push_back(v);
  }
  return out;
}

namespace {

struct Split {
  MatC S0, Vs;
  MatC P;    // subspace columns
  VecR Ep;
  MatC Phi;  // complement eigenvectors
  VecR El;
};

Split split_problem(const PerturbationProblem& p) {
  if (p.subspace.empty()) throw Error("perturbation: empty subspace");
  if (p.H0.dim != p.V.dim) throw Error("perturbation: H0 and V dimensions differ");
  if (hermiticity_residual(p.H0) > 1e-12 || hermiticity_residual(p.V) > 1e-12)
    throw Error("perturbation: H0 and V must satisfy f^(-m) = f^(m)^dagger");
  Split s;
  s.S0 = assemble_sambe(p.H0, p.M).matrix;
  s.Vs = sambe_toeplitz(p.V, p.M);
  const Index D = s.S0.rows(), np = Index(p.subspace.size());
  s.P.resize(D, np);
  for (Index j = 0; j < np; ++j) {
    if (p.subspace[std::size_t(j)].size() != D) throw Error("perturbation: subspace vector has wrong length");
    s.P.col(j) = p.subspace[std::size_t(j)];
  }
  const double ortho = (s.P.adjoint() * s.P - MatC::Identity(np, np)).cwiseAbs().maxCoeff();
  if (ortho > p.tol) {
    std::ostringstream os;
    os << "perturbation: subspace not orthonormal (deviation " << ortho << ")";
    throw Error(os.str());
  }
  s.Ep.resize(np);
  for (Index j = 0; j < np; ++j) {
    s.Ep(j) = (s.P.col(j).adjoint() * s.S0 * s.P.col(j))(0, 0).real();
    const double r = (s.S0 * s.P.col(j) - s.Ep(j) * s.P.col(j)).norm();
    if (r > p.tol * (1.0 + std::abs(s.Ep(j)))) {
      std::ostringstream os;
      os << "perturbation: subspace vector " << j << " is not an H0 eigenvector (residual " << r << ")";
      throw Error(os.str());
    }
  }
  // Orthonormal complement, diagonalized within itself.
  const MatC Q = MatC::Identity(D, D) - s.P * s.P.adjoint();
  Eigen::SelfAdjointEigenSolver<MatC> qs(Q);
  MatC C(D, D - np);
  Index c = 0;
  for (Index k = 0; k < D; ++k)
    if (qs.eigenvalues()(k) > 0.5) {
      if (c == D - np) throw Error("perturbation: complement rank mismatch");
      C.col(c++) = qs.eigenvectors().col(k);
    }
  if (c != D - np) throw Error("perturbation: complement rank mismatch");
  Eigen::SelfAdjointEigenSolver<MatC> cs(C.adjoint() * s.S0 * C);
  s.El = cs.eigenvalues();
  s.Phi = C * cs.eigenvectors();
  return s;
}

double inv_gap(double a, double b, double gap_tol) {
  if (std::abs(a - b) < gap_tol) {
    std::ostringstream os;
    os << "perturbation: state outside the subspace at " << b << " is degenerate with " << a;
    throw Error(os.str());
  }
  return 1.0 / (a - b);
}

// Groups of subspace indices with equal unperturbed quasienergy.
std::vector<std::vector<Index>> clusters(const VecR& E, double tol) {
  std::vector<Index> idx(std::size_t(E.size()));
  std::iota(idx.begin(), idx.end(), Index(0));
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return E(a) < E(b); });
  std::vector<std::vector<Index>> out;
  for (Index i : idx) {
    if (!out.empty() && std::abs(E(i) - E(out.back().front())) < tol) out.back().push_back(i);
    else out.push_back({i});
  }
  return out;
}

}  // namespace

QuasienergyCorrections quasienergy_corrections(const PerturbationProblem& p, int order) {
  if (order != 2 && order != 3) throw Error("quasienergy_corrections: order must be 2 or 3");
  const Split s = split_problem(p);
  const Index np = s.P.cols(), nl = s.Phi.cols();
  // All states: subspace first, then complement.
  MatC B(s.P.rows(), np + nl);
  B << s.P, s.Phi;
  VecR E(np + nl);
  E << s.Ep, s.El;
  const MatC Vb = B.adjoint() * s.Vs * B;
  const double vscale = std::max(1.0, Vb.cwiseAbs().maxCoeff());

  QuasienergyCorrections out;
  out.unperturbed = s.Ep;
  out.second = VecR::Zero(np);
  out.third = VecR::Zero(np);
  out.rotation = MatC::Zero(np, np);
  for (const auto& cl : clusters(s.Ep, 1e-8)) {
    const Index k = Index(cl.size());
    for (Index a : cl)
      for (Index b : cl)
        if (std::abs(Vb(a, b)) > p.tol * vscale) {
          std::ostringstream os;
          os << "quasienergy_corrections: first-order element <" << a << "|V|" << b << "> = " << Vb(a, b)
             << " is nonzero; use effective_hamiltonian";
          throw Error(os.str());
        }
    const double Ec = s.Ep(cl.front());
    std::vector<Index> outside;
    std::vector<bool> in(std::size_t(np + nl), false);
    for (Index a : cl) in[std::size_t(a)] = true;
    for (Index o = 0; o < np + nl; ++o)
      if (!in[std::size_t(o)]) outside.push_back(o);
    const Index no = Index(outside.size());
    MatC Z(no, k);  // V_{o,a}
    VecR dinv(no);
    for (Index r = 0; r < no; ++r) {
      dinv(r) = inv_gap(Ec, E(outside[std::size_t(r)]), p.gap_tol);
      for (Index c = 0; c < k; ++c) Z(r, c) = Vb(outside[std::size_t(r)], cl[std::size_t(c)]);
    }
    const MatC W = Z.adjoint() * dinv.asDiagonal() * Z;
    Eigen::SelfAdjointEigenSolver<MatC> ws(W);
    const MatC R = ws.eigenvectors();
    const MatC Wr = R.adjoint() * W * R;
    for (Index a = 0; a < k; ++a)
      for (Index b = 0; b < k; ++b)
        if (a != b) out.offdiag_residual = std::max(out.offdiag_residual, std::abs(Wr(a, b)));
    if (out.offdiag_residual > 1e-10 * std::max(1.0, W.cwiseAbs().maxCoeff()))
      throw Error("quasienergy_corrections: second-order block not diagonal after rotation");
    MatC Voo(no, no);
    for (Index r = 0; r < no; ++r)
      for (Index c = 0; c < no; ++c) Voo(r, c) = Vb(outside[std::size_t(r)], outside[std::size_t(c)]);
    for (Index a = 0; a < k; ++a) {
      const Index j = cl[std::size_t(a)];
      out.second(j) = ws.eigenvalues()(a);
      for (Index c = 0; c < k; ++c) out.rotation(cl[std::size_t(c)], j) = R(c, a);
      if (order == 3) {
        const VecC z = dinv.asDiagonal() * (Z * R.col(a));
        out.third(j) = (z.adjoint() * Voo * z)(0, 0).real();
      }
    }
  }
  out.delta = p.lambda * p.lambda * out.second;
  if (order == 3) out.delta += p.lambda * p.lambda * p.lambda * out.third;
  return out;
}

MatC EffectiveHamiltonian::full() const {
  MatC h = matrix;
  h.diagonal() += energies.cast<cplx>();
  return h;
}

EffectiveHamiltonian effective_hamiltonian(const PerturbationProblem& p, int order) {
  if (order < 1 || order > 3) throw Error("effective_hamiltonian: order must be 1, 2 or 3");
  const Split s = split_problem(p);
  const Index np = s.P.cols(), nl = s.Phi.cols();
  const MatC Vpp = s.P.adjoint() * s.Vs * s.P;
  const MatC Vpl = s.P.adjoint() * s.Vs * s.Phi;
  const MatC Vll = s.Phi.adjoint() * s.Vs * s.Phi;
  MatR D(np, nl);
  for (Index m = 0; m < np; ++m)
    for (Index l = 0; l < nl; ++l) D(m, l) = inv_gap(s.Ep(m), s.El(l), p.gap_tol);
  const MatC Y = Vpl.cwiseProduct(D.cast<cplx>());

  EffectiveHamiltonian h;
  h.energies = s.Ep;
  h.first = Vpp;
  h.second = 0.5 * (Y * Vpl.adjoint() + Vpl * Y.adjoint());
  h.third = MatC::Zero(np, np);
  if (order == 3) {
    const MatC G = Y.adjoint() * Vpp;  // (l, m')
    const MatC A = -0.5 * Vpl * D.transpose().cast<cplx>().cwiseProduct(G);
    MatC C1(np, np);
    for (Index m = 0; m < np; ++m) {
      const Eigen::RowVectorXcd row = (Y.row(m) * Vll).cwiseProduct(D.row(m).cast<cplx>());
      C1.row(m) = row * Vpl.adjoint();
    }
    h.third = A + A.adjoint() + 0.5 * (C1 + C1.adjoint());
  }
  const double l = p.lambda;
  h.matrix = l * h.first;
  if (order >= 2) h.matrix += l * l * h.second;
  if (order >= 3) h.matrix += l * l * l * h.third;
  h.hermiticity = (h.matrix - h.matrix.adjoint()).cwiseAbs().maxCoeff();
  return h;
}

EffectiveHamiltonian exact_effective_hamiltonian(const PerturbationProblem& p) {
  const Split s = split_problem(p);
  const Index np = s.P.cols();
  Eigen::SelfAdjointEigenSolver<MatC> es(s.S0 + p.lambda * s.Vs);
  const MatC ov = s.P.adjoint() * es.eigenvectors();
  std::vector<Index> idx(std::size_t(ov.cols()));
  std::iota(idx.begin(), idx.end(), Index(0));
  std::partial_sort(idx.begin(), idx.begin() + np, idx.end(),
                    [&](Index a, Index b) { return ov.col(a).squaredNorm() > ov.col(b).squaredNorm(); });
  MatC X(np, np);
  VecR E(np);
  for (Index k = 0; k < np; ++k) {
    X.col(k) = ov.col(idx[std::size_t(k)]);
    E(k) = es.eigenvalues()(idx[std::size_t(k)]);
  }
  Eigen::SelfAdjointEigenSolver<MatC> gs(X.adjoint() * X);
  if (gs.eigenvalues().minCoeff() < 1e-6)
    throw Error("exact_effective_hamiltonian: perturbed states have negligible subspace weight");
  const MatC U = X * gs.operatorInverseSqrt();
  EffectiveHamiltonian h;
  h.energies = s.Ep;
  MatC full = U * E.cast<cplx>().asDiagonal() * U.adjoint();
  h.matrix = full;
  h.matrix.diagonal() -= s.Ep.cast<cplx>();
  h.hermiticity = (h.matrix - h.matrix.adjoint()).cwiseAbs().maxCoeff();
  return h;
}

// ---- lead couplings -------------------------------------------------------

cplx LeadModelParams::coupling(Species s, int lead, int harmonic) const {
  auto it = couplings.find({s, lead, harmonic});
  return it == couplings.end() ? cplx(0) : it->second;
}

cplx LeadModelParams::link(int a, int b) const {
  auto it = links.find({a, b});
  return it == links.end() ? cplx(0) : it->second;
}

double LeadModelParams::max_coupling() const {
  double m = 0;
  for (const auto& [k, v] : couplings) m = std::max(m, std::abs(v));
  for (const auto& [k, v] : links) m = std::max(m, std::abs(v));
  return m;
}

std::vector<std::string> validate(const LeadModelParams& p) {
  if (p.eps_plus == 0 || p.eps_minus == 0) throw Error("lead model: eps_plus and eps_minus must be nonzero");
  if (!(p.omega > 0)) throw Error("lead model: omega must be positive");
  for (const auto& [k, v] : p.couplings) {
    const auto& [sp, lead, n] = k;
    if (lead < 0 || lead >= int(p.n.size())) throw Error("lead model: coupling refers to an unknown lead");
    if (sp == Species::bulk) throw Error("lead model: couplings must be to zero or pi modes");
    const bool odd = (n % 2) != 0;
    if ((sp == Species::pi) != odd)
      throw Error("lead model: zero-mode couplings take even n, pi-mode couplings odd n");
  }
  for (const auto& [k, v] : p.links)
    if (k.first < 0 || k.second < 0 || k.first >= int(p.n.size()) || k.second >= int(p.n.size()) ||
        k.first == k.second)
      throw Error("lead model: invalid link");
  std::vector<std::string> w;
  const double ratio = p.max_coupling() / std::min(std::abs(p.eps_plus), std::abs(p.eps_minus));
  if (ratio > 0.1) {
    std::ostringstream os;
    os << "coupling / charging gap = " << ratio << " > 0.1; perturbation theory may be inaccurate";
    w.push_back(os.str());
  }
  return w;
}

std::string pair_name(SpeciesPair s) {
  switch (s) {
    case SpeciesPair::zz: return "00";
    case SpeciesPair::pp: return "pipi";
    case SpeciesPair::zp: return "0pi";
  }
  return "?";
}

SpeciesPair infer_pair(int n_i, int n_j) {
  const bool oi = n_i % 2 != 0, oj = n_j % 2 != 0;
  if (!oi && !oj) return SpeciesPair::zz;
  if (oi && oj) return SpeciesPair::pp;
  return SpeciesPair::zp;
}

cplx EffectiveCoupling::at(double t) const {
  cplx v = 0;
  for (const auto& [k, c] : harmonics) v += c * std::exp(kI * (0.5 * k * omega * t));
  return v;
}

double EffectiveCoupling::window() const {
  const double T = 2.0 * kPi / omega;
  return pair == SpeciesPair::zp ? 2.0 * T : T;
}

EffectiveCoupling lead_effective_coupling(const LeadModelParams& p, int i, int j) {
  EffectiveCoupling out;
  out.warnings = validate(p);
  out.omega = p.omega;
  if (i < 0 || j < 0 || i >= int(p.n.size()) || j >= int(p.n.size()) || i == j)
    throw Error("lead_effective_coupling: invalid lead indices");
  const int ni = p.n[std::size_t(i)], nj = p.n[std::size_t(j)];
  if (std::abs(ni) > 1 || std::abs(nj) > 1) {
    std::ostringstream os;
    os << "lead_effective_coupling: unsupported lead energies n_i = " << ni << ", n_j = " << nj
       << " (only -1, 0, 1)";
    throw Error(os.str());
  }
  const double c = 1.0 / p.eps_plus + 1.0 / p.eps_minus;
  out.pair = infer_pair(ni, nj);
  switch (out.pair) {
    case SpeciesPair::zz:
      out.harmonics[0] = c * kI * std::conj(p.coupling(Species::zero, i, 0)) * p.coupling(Species::zero, j, 0);
      break;
    case SpeciesPair::pp:
      out.harmonics[-2] = c * kI * std::conj(p.coupling(Species::pi, i, -1)) * p.coupling(Species::pi, j, -1);
      break;
    case SpeciesPair::zp: {
      // Even lead carries the zero mode; an odd i takes the roles swapped.
      const Species si = ni % 2 ? Species::pi : Species::zero;
      const Species sj = nj % 2 ? Species::pi : Species::zero;
      // e^{-i w t/2}, or its conjugate when the pi-mode lead comes first.
      out.harmonics[si == Species::pi ? 1 : -1] = c * kI * std::conj(p.coupling(si, i, si == Species::pi ? -1 : 0)) *
                                                  p.coupling(sj, j, sj == Species::pi ? -1 : 0);
      break;
    }
  }
  return out;
}

FourLeadAmplitude four_lead_effective(const LeadModelParams& p) {
  validate(p);
  if (p.n.size() != 4) throw Error("four_lead_effective: needs four leads");
  for (int n : p.n)
    if (n != 0) throw Error("four_lead_effective: all lead energies must be zero");
  const double c = 1.0 / p.eps_plus + 1.0 / p.eps_minus;
  const double c3 = 1.0 / (p.eps_minus * p.eps_minus);
  auto l = [&](int s) { return p.coupling(Species::zero, s, 0); };
  FourLeadAmplitude a;
  a.c14 = -l(3) * std::conj(l(0)) * c;
  a.c24 = -c3 * p.link(0, 1) * l(3) * std::conj(l(1));
  a.c13 = -c3 * p.link(2, 3) * l(2) * std::conj(l(0));
  return a;
}

}  // namespace mcm
