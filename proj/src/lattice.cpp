#include "mcm/lattice.hpp"

#include <cmath>

namespace mcm {

LatticeParams reference_params(int Nx, int Ny) {
  LatticeParams p;
  p.Nx = Nx;
  p.Ny = Ny;
  p.Jx = kPi / 2 + 0.3;
  p.Dx = kPi / 2 - 0.2;
  p.Jy = 0.15;
  p.dJ = 0.05;
  p.Dy = 0.55;
  p.dDy = 0.45;
  p.mu0 = kPi / 2 + 0.12;
  p.dmu0 = 0.02;
  p.mu1 = 4.0;
  p.dmu1 = 0.0;
  return p;
}

void validate(const LatticeParams& p) {
  if (p.Nx < 1 || p.Ny < 1) throw Error("lattice: Nx and Ny must be >= 1");
  for (double v : {p.Jx, p.Jy, p.dJ, p.Dx, p.Dy, p.dDy, p.mu0, p.dmu0, p.mu1, p.dmu1})
    if (!std::isfinite(v)) throw Error("lattice: non-finite coupling");
  if (!(p.omega > 0) || !std::isfinite(p.omega)) throw Error("lattice: omega must be > 0");
}

namespace {

// h = [[t + mu, Dp], [Dp†, -(t + mu)^*]] on the interleaved Nambu basis.
// t is the hermitian hopping matrix, pair the antisymmetrized pairing.
MatC nambu(const MatC& t, const MatC& pair, const VecR& mu) {
  const Index n = t.rows();
  MatC hp = t;
  hp.diagonal() += mu.cast<cplx>();
  MatC h(2 * n, 2 * n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      h(2 * a, 2 * b) = hp(a, b);
      h(2 * a + 1, 2 * b + 1) = -std::conj(hp(a, b));
      h(2 * a, 2 * b + 1) = pair(a, b);
      h(2 * a + 1, 2 * b) = std::conj(pair(b, a));
    }
  return h;
}

DrivenBdG assemble(const MatC& hop, const MatC& D, const VecR& mu0, const VecR& mu1,
                   double omega) {
  const Index n = hop.rows();
  MatC t = hop + hop.adjoint();
  MatC pair = D - D.transpose();
  DrivenBdG out;
  out.dim = 2 * n;
  out.omega = omega;
  out.harmonics[0] = nambu(t, pair, mu0);
  MatC zero = MatC::Zero(n, n);
  MatC h1 = nambu(zero, zero, 0.5 * mu1);
  out.harmonics[1] = h1;
  out.harmonics[-1] = h1.adjoint();
  return out;
}

}  // namespace

DrivenBdG build_realspace_bdg(const LatticeParams& p) {
  validate(p);
  const int Lx = 2 * p.Nx, Ly = 2 * p.Ny;
  const Index n = Index(Lx) * Ly;
  const bool px = p.boundary == Boundary::periodic_x || p.boundary == Boundary::periodic_both;
  const bool py = p.boundary == Boundary::periodic_y || p.boundary == Boundary::periodic_both;
  auto site = [&](int x, int y) { return Index(x) + Index(Lx) * y; };

  MatC hop = MatC::Zero(n, n), D = MatC::Zero(n, n);
  VecR mu0(n), mu1(n);
  for (int y = 0; y < Ly; ++y) {
    // rows are numbered j = 1..2Ny in the model
    const double s = ((y + 1) % 2 == 0) ? 1.0 : -1.0;
    for (int x = 0; x < Lx; ++x) {
      const Index r = site(x, y);
      mu0(r) = p.mu0 + s * p.dmu0;
      mu1(r) = p.mu1 + s * p.dmu1;
      if (x + 1 < Lx || px) {
        const Index r2 = site((x + 1) % Lx, y);
        hop(r2, r) += -p.Jx;
        D(r2, r) += p.Dx;
      }
      if (y + 1 < Ly || py) {
        const Index r2 = site(x, (y + 1) % Ly);
        hop(r2, r) += -(p.Jy + s * p.dJ);
        D(r2, r) += kI * (p.Dy + s * p.dDy);
      }
    }
  }
  return assemble(hop, D, mu0, mu1, p.omega);
}

DrivenBdG build_chain(int sites, double J, double Dc, double mu0, double mu1, bool periodic,
                      double omega) {
  if (sites < 1) throw Error("chain: need at least one site");
  MatC hop = MatC::Zero(sites, sites), D = MatC::Zero(sites, sites);
  for (int x = 0; x < sites; ++x) {
    if (x + 1 < sites || periodic) {
      const int x2 = (x + 1) % sites;
      hop(x2, x) += -J;
      D(x2, x) += Dc;
    }
  }
  return assemble(hop, D, VecR::Constant(sites, mu0), VecR::Constant(sites, mu1), omega);
}

DrivenBdG reduce_to_1d(const LatticeParams& p) {
  validate(p);
  if (std::abs(p.Jy - p.dJ) > 1e-12 || std::abs(p.Dy - p.dDy) > 1e-12)
    throw Error("reduce_to_1d: decoupling requires Jy == dJ and Dy == dDy");
  const bool px = p.boundary == Boundary::periodic_x || p.boundary == Boundary::periodic_both;
  // row j = 1 carries mu - dmu
  return build_chain(2 * p.Nx, p.Jx, p.Dx, p.mu0 - p.dmu0, p.mu1 - p.dmu1, px, p.omega);
}

namespace {

Eigen::Matrix2cd pauli(int k) {
  Eigen::Matrix2cd s;
  switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -kI, kI, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

MatC kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  MatC out(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
  return out;
}

}  // namespace

DrivenBdG build_momentum_bdg(const LatticeParams& p, double kx, double ky) {
  validate(p);
  const double Jm = p.Jy - p.dJ, Jp = p.Jy + p.dJ;
  const double Dm = p.Dy - p.dDy, Dp = p.Dy + p.dDy;
  const auto s0 = pauli(0), sx = pauli(1), sy = pauli(2), sz = pauli(3);

  Eigen::Matrix2cd A = -(Jm + Jp * std::cos(ky)) * sx - Jp * std::sin(ky) * sy +
                       (-2.0 * p.Jx * std::cos(kx) + p.mu0) * s0 + p.dmu0 * sz;
  Eigen::Matrix2cd B = (Dm - Dp * std::cos(ky)) * sy + Dp * std::sin(ky) * sx;

  DrivenBdG out;
  out.dim = 4;
  out.omega = p.omega;
  out.harmonics[0] = kron(A, sz) + kron(B, sx) + 2.0 * p.Dx * std::sin(kx) * kron(s0, sy);
  MatC h1 = kron(0.5 * p.mu1 * s0 + 0.5 * p.dmu1 * sz, sz);
  out.harmonics[1] = h1;
  out.harmonics[-1] = h1;
  return out;
}

std::vector<std::pair<double, double>> bloch_kgrid(const LatticeParams& p) {
  std::vector<std::pair<double, double>> ks;
  const int Lx = 2 * p.Nx;
  for (int a = 0; a < Lx; ++a)
    for (int b = 0; b < p.Ny; ++b)
      ks.emplace_back(2 * kPi * a / Lx, 2 * kPi * b / p.Ny);
  return ks;
}

SymmetryOp make_symmetry(SymmetryKind kind) {
  const auto s0 = pauli(0), sx = pauli(1), sz = pauli(3);
  SymmetryOp op{kind, MatC(), false, 1.0, true};
  switch (kind) {
    case SymmetryKind::particle_hole:  // eta_x K
      op.matrix = kron(s0, sx);
      op.antiunitary = true;
      op.sign = -1.0;
      break;
    case SymmetryKind::chiral:  // sigma_z eta_x
      op.matrix = kron(sz, sx);
      op.sign = -1.0;
      op.flips_k = false;
      break;
    case SymmetryKind::time_reversal:  // sigma_z K
      op.matrix = kron(sz, s0);
      op.antiunitary = true;
      break;
    case SymmetryKind::inversion:  // sigma_x eta_z
      op.matrix = kron(sx, sz);
      break;
  }
  return op;
}

double check_symmetry(const LatticeParams& p, const SymmetryOp& sym,
                      const std::vector<std::pair<double, double>>& kgrid) {
  double r = 0.0;
  const MatC& S = sym.matrix;
  for (auto [kx, ky] : kgrid) {
    const DrivenBdG h = build_momentum_bdg(p, kx, ky);
    const DrivenBdG g = sym.flips_k ? build_momentum_bdg(p, -kx, -ky) : h;
    for (const auto& [m, hm] : h.harmonics) {
      MatC lhs = sym.antiunitary ? MatC(S * hm.conjugate() * S.adjoint())
                                 : MatC(S * hm * S.adjoint());
      const int mt = sym.antiunitary ? -m : m;
      r = std::max(r, (lhs - sym.sign * g.harmonic(mt)).cwiseAbs().maxCoeff());
    }
  }
  return r;
}

}  // namespace mcm
