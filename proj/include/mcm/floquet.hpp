#pragma once

#include <array>
#include <map>
#include <vector>

#include "mcm/types.hpp"

namespace mcm {

struct SambeMatrix {
  int M = 0;
  Index blockdim = 0;
  double omega = 2.0 * kPi;
  MatC matrix;

  Index block_offset(int n) const { return Index(n + M) * blockdim; }
};

// Block (n, m) = h^(n-m) + n*omega*delta_nm, n, m = -M..M.
template <class Scalar>
SambeMatrix assemble_sambe(const DrivenOperator<Scalar>& op, int M) {
  if (M < 1) throw Error("assemble_sambe: M must be >= 1");
  SambeMatrix s;
  s.M = M;
  s.blockdim = op.dim;
  s.omega = op.omega;
  const Index B = 2 * M + 1, d = op.dim;
  s.matrix = MatC::Zero(B * d, B * d);
  for (int n = -M; n <= M; ++n) {
    for (const auto& [m, hm] : op.harmonics) {
      const int k = n - m;
      if (k < -M || k > M) continue;
      s.matrix.block(s.block_offset(n), s.block_offset(k), d, d) = hm.template cast<cplx>();
    }
    s.matrix.block(s.block_offset(n), s.block_offset(n), d, d).diagonal().array() +=
        double(n) * op.omega;
  }
  return s;
}

double hermiticity_residual(const SambeMatrix& s);

enum class Species { zero, pi, bulk };
const char* species_name(Species s);

// Fold into (-omega/2, omega/2].
double fold_quasienergy(double e, double omega);
// Distance to target on the circle of circumference omega.
double circular_distance(double e, double target, double omega);

struct FloquetMode {
  double quasienergy = 0;   // folded
  double raw = 0;           // Sambe eigenvalue of the stored replica
  double omega = 2.0 * kPi;
  Species species = Species::bulk;
  int M = 0;
  std::vector<VecC> components;  // psi^(n), n = -M..M, index n + M

  const VecC& component(int n) const { return components[std::size_t(n + M)]; }
};

struct SpectrumOptions {
  double tol0 = -1;       // default 1e-3 omega
  double tolpi = -1;      // default 1e-3 omega
  Index dense_limit = 1500;
};

struct SpectrumResult {
  double omega = 2.0 * kPi;
  int M = 0;
  Index blockdim = 0;
  VecR raw;                       // all Sambe eigenvalues, ascending
  std::vector<double> quasienergies;  // one per physical state, folded, sorted
  std::vector<FloquetMode> modes;     // candidates near 0 and omega/2 with vectors
  double gap0 = 0, gappi = 0;         // nearest non-mode level to 0 / omega/2
};

// Central-harmonic index of a Sambe vector: argmax_n ||psi^(n)||^2, ties to smaller |n|.
int dominant_harmonic(const VecC& v, int M, Index blockdim);

SpectrumResult quasienergy_spectrum(const SambeMatrix& s, const SpectrumOptions& opt = {});

std::vector<FloquetMode> find_majorana_modes(const SpectrumResult& spec, double tol0,
                                             double tolpi);

// Mix degenerate modes of one species into corner-localized combinations.
// Requires an open-boundary 2D lattice with (2Nx) x (2Ny) sites.
std::vector<FloquetMode> corner_basis_rotation(const std::vector<FloquetMode>& modes, int Nx,
                                               int Ny);

std::array<double, 4> corner_localization(const FloquetMode& mode, int Nx, int Ny,
                                          double corner_frac);

std::map<int, double> fourier_weight_profile(const FloquetMode& mode);

// Per-site probability of harmonic n (sums Nambu components).
VecR site_probability(const FloquetMode& mode, int n);

double convergence_check(const DrivenBdG& bdg, int M, const SpectrumOptions& opt = {});

// Mode counts from a spectrum with the given tolerances.
std::pair<int, int> mode_counts(const SpectrumResult& spec, double tol0, double tolpi);

}  // namespace mcm
