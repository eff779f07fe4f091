#pragma once

#include <map>
#include <vector>

#include "mcm/floquet.hpp"
#include "mcm/types.hpp"

namespace mcm {

// H = (i/4) g^T A g for a BdG matrix with H = 1/2 Psi^dag h Psi (site-major,
// Nambu innermost). Majoranas ordered (gA_x, gB_x) with c_x = (gA_x + i gB_x) / 2.
// A is real antisymmetric; [H, v.g] = (i A v).g.
MatR majorana_form(const MatC& bdg);

// h(t) = h0 + h1 cos(wt) in Majorana form. Requires h^(1) = h^(-1) and no higher harmonics.
std::pair<MatR, MatR> majorana_drive(const DrivenBdG& bdg);

// Real eigenvalues of the linearized pi-mode seed condition
// [h0, g] + [h1, g^dag]/2 = (w/2) g, written for g = x + i y.
std::vector<double> pi_seed_spectrum(const MatR& A0, const MatR& A1);

struct ModeExpansionOptions {
  double A = 2.0 / 3.0;   // first-order pi step, harmonic -1
  double B = -2.0 / 5.0;  // first-order pi step, harmonic 2
  double seed_tol = 1e-8;
};

// gamma(t) = sum_n g_n e^{i n w t} for zero modes. For pi modes the components
// are those of gamma_bar, gamma(t) = e^{-i w t/2} gamma_bar(t).
struct ModeExpansion {
  Species species = Species::zero;
  double omega = 2.0 * kPi;
  int order = 0;
  std::map<int, VecC> components;
  std::vector<double> residuals;  // r_k after order k = 0..order
  VecC seed;
  Index kernel_dim = 0;           // zero modes: dim ker A0
  double seed_eigenvalue = 0;     // pi modes: eigenvalue of the seed condition used

  VecC at(double t) const;        // coefficient vector of gamma(t)
  double hermiticity(double t) const;  // max |Im| of at(t)
};

// Sambe residual ||[H - i d/dt, gamma] - eps gamma|| over |n| <= cutoff
// (eps = 0 or w/2 for gamma_bar).
double mode_residual(const MatR& A0, const MatR& A1, double omega, Species species,
                     const std::map<int, VecC>& components, int cutoff);

// Nested-commutator expansion through `order`. Without a seed, zero modes start
// from ker A0 and pi modes from the seed condition at w/2 (throws if neither exists).
ModeExpansion majorana_mode_expansion(const MatR& A0, const MatR& A1, double omega, Species species,
                                      int order, const VecC* seed = nullptr,
                                      const ModeExpansionOptions& opt = {});

}  // namespace mcm
