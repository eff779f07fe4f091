#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "mcm/floquet.hpp"
#include "mcm/types.hpp"

namespace mcm {

// H0 + lambda V in Sambe space with cutoff M. `subspace` holds Sambe vectors
// (length (2M+1) * dim) that are eigenvectors of the unperturbed Sambe matrix.
struct PerturbationProblem {
  DrivenOperator<cplx> H0;
  DrivenOperator<cplx> V;
  double lambda = 0;
  int M = 2;
  std::vector<VecC> subspace;
  double tol = 1e-10;        // orthonormality / eigenvector / degeneracy tolerance
  double gap_tol = 1e-8;     // minimum |E_j - E_l| to any state outside the subspace
};

// Sambe matrix of a driven operator without the n*omega diagonal.
MatC sambe_toeplitz(const DrivenOperator<cplx>& op, int M);

// Unit Sambe vector for basis state `b` placed in harmonic block n.
VecC sambe_unit(Index dim, int M, Index b, int n);

// Central-harmonic eigenvectors of H0 with folded quasienergy within tol of target.
std::vector<VecC> sambe_states_near(const DrivenOperator<cplx>& H0, int M, double target, double tol);

struct QuasienergyCorrections {
  VecR unperturbed;        // E_j
  VecR second, third;      // per-state coefficients of lambda^2 and lambda^3
  VecR delta;              // lambda^2 second (+ lambda^3 third)
  MatC rotation;           // subspace coordinates of the rotated states (columns)
  double offdiag_residual = 0;  // max off-diagonal second-order element after rotation
};

// Rayleigh-Schrodinger quasienergy shifts through `order` (2 or 3), valid when
// <j|V|j'> = 0 inside each degenerate cluster (throws otherwise). Clusters are
// rotated so the second-order block is diagonal.
QuasienergyCorrections quasienergy_corrections(const PerturbationProblem& p, int order = 3);

struct EffectiveHamiltonian {
  VecR energies;    // unperturbed E_m of the subspace states
  MatC matrix;      // correction lambda H1 + lambda^2 H2 (+ lambda^3 H3), subspace coordinates
  MatC first, second, third;  // per-order blocks without lambda powers
  double hermiticity = 0;
  MatC full() const;  // diag(E) + matrix
};

// Canonical (van Vleck) effective Hamiltonian through `order` (1..3). Reduces to
// quasienergy_corrections when the first-order block vanishes.
EffectiveHamiltonian effective_hamiltonian(const PerturbationProblem& p, int order = 3);

// Exact counterpart: eigenvectors of the full Sambe matrix with the largest
// weight on the subspace, mapped back by the symmetric (des Cloizeaux) projection.
EffectiveHamiltonian exact_effective_hamiltonian(const PerturbationProblem& p);

// ---- lead couplings -------------------------------------------------------

// Couplings are keyed by (species, lead, n): lambda_bar_{species,lead,n}, the
// Fourier component with exp(i n omega t / 2). Zero-mode couplings use even n,
// pi-mode couplings odd n.
struct LeadModelParams {
  double eps_plus = 1.0, eps_minus = 1.0;
  double omega = 2.0 * kPi;
  std::vector<int> n;  // lead energies n * omega / 2
  std::map<std::tuple<Species, int, int>, cplx> couplings;
  // Direct links: amplitude a for the term a d_b^dag d_a + h.c., key (a, b).
  std::map<std::pair<int, int>, cplx> links;

  cplx coupling(Species s, int lead, int n) const;
  cplx link(int a, int b) const;
  double max_coupling() const;
};

// Warnings for |lambda| / min|eps| > 0.1; throws on eps = 0.
std::vector<std::string> validate(const LeadModelParams& p);

enum class SpeciesPair { zz, pp, zp };
std::string pair_name(SpeciesPair s);  // "00", "pipi", "0pi"
SpeciesPair infer_pair(int n_i, int n_j);

// T(t) = sum_k c_k exp(i k omega t / 2).
struct EffectiveCoupling {
  SpeciesPair pair = SpeciesPair::zz;
  std::map<int, cplx> harmonics;
  double omega = 2.0 * kPi;
  std::vector<std::string> warnings;

  cplx at(double t) const;
  // Averaging window: T, or 2T for the mixed pair.
  double window() const;
};

// Second-order co-tunneling amplitude between leads i and j. Requires
// n_i, n_j in {-1, 0, 1}.
EffectiveCoupling lead_effective_coupling(const LeadModelParams& p, int i = 0, int j = 1);

// h_1234 = c14 g01 g04 + c24 g02 g04 + c13 g01 g03, the d_4^dag d_1 amplitude.
struct FourLeadAmplitude {
  cplx c14, c24, c13;
  // Operator on the 4-dim Fock space of (g01,g02),(g03,g04), same conventions
  // as the toy models.
  MatC matrix() const;
};

// Through third order. Leads 0..3 are l_{1,a}..l_{4,a}, all at n = 0; the link (0,1)
// amplitude is lambda~*_{12}, (2,3) is lambda~*_{34}.
FourLeadAmplitude four_lead_effective(const LeadModelParams& p);

}  // namespace mcm
