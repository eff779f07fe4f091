#pragma once

#include <vector>

#include "mcm/types.hpp"

namespace mcm {

enum class Boundary { open, periodic_x, periodic_y, periodic_both };

// Couplings in units of hbar/T. Lattice is (2Nx) x (2Ny) sites.
struct LatticeParams {
  int Nx = 1, Ny = 1;
  double Jx = 0, Jy = 0, dJ = 0;
  double Dx = 0, Dy = 0, dDy = 0;
  double mu0 = 0, dmu0 = 0, mu1 = 0, dmu1 = 0;
  double omega = 2.0 * kPi;
  Boundary boundary = Boundary::open;
};

LatticeParams reference_params(int Nx = 8, int Ny = 8);
void validate(const LatticeParams& p);

// Basis index of (x, y, nambu): site-major with x fastest, nambu innermost.
inline Index basis_index(const LatticeParams& p, int x, int y, int nambu) {
  return 2 * (Index(x) + Index(2 * p.Nx) * y) + nambu;
}

DrivenBdG build_realspace_bdg(const LatticeParams& p);

// 4x4 Bloch components, ordering sigma (row in the two-row cell) x eta (Nambu).
DrivenBdG build_momentum_bdg(const LatticeParams& p, double kx, double ky);

// Momenta compatible with a periodic (2Nx) x (2Ny) lattice.
std::vector<std::pair<double, double>> bloch_kgrid(const LatticeParams& p);

// Row j=1 chain (2Nx sites). Requires Jy == dJ and Dy == dDy.
DrivenBdG reduce_to_1d(const LatticeParams& p);

// Open or periodic chain with uniform couplings and drive mu0 + mu1 cos(wt).
DrivenBdG build_chain(int sites, double J, double D, double mu0, double mu1,
                      bool periodic = false, double omega = 2.0 * kPi);

enum class SymmetryKind { particle_hole, chiral, time_reversal, inversion };

struct SymmetryOp {
  SymmetryKind kind;
  MatC matrix;
  bool antiunitary = false;
  double sign = 1.0;     // target relation: S h(k) S^-1 = sign * h(k')
  bool flips_k = true;   // k' = -k
};

SymmetryOp make_symmetry(SymmetryKind kind);

double check_symmetry(const LatticeParams& p, const SymmetryOp& sym,
                      const std::vector<std::pair<double, double>>& kgrid);

}  // namespace mcm
