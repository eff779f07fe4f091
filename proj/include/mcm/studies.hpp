#pragma once

#include <string>
#include <vector>

#include "mcm/mode_expansion.hpp"
#include "mcm/toy_models.hpp"

namespace mcm {

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// max |exact - truncated| over the effective Hamiltonian of a toy problem.
double truncation_error(const PerturbationProblem& p, int order);

// Toy couplings at unit scale; lambda multiplies them in toy_problem.
LeadModelParams scaling_two_lead(SpeciesPair pair, bool link);
LeadModelParams scaling_four_lead();

struct ScalingStudy {
  std::string model;
  std::vector<double> lambdas, err2, err3;
  double slope2 = 0, slope3 = 0;
};
ScalingStudy toy_scaling(const std::string& model, const LeadModelParams& p, const std::vector<double>& lambdas,
                         int M = 2);

// Centered-level splitting of the lowest N-sector cluster for both parities of
// (g0i, g0j); the two returned amplitudes d_j^dag d_i should be opposite.
std::pair<cplx, cplx> parity_amplitudes(const LeadModelParams& p, double lambda);

struct ResidualHistory {
  std::vector<double> residuals;
  bool decreasing = false;  // strictly, over every consecutive order
};
ResidualHistory zero_mode_history(const DrivenBdG& chain, double omega, int orders);

// First-order pi step on a driven chain whose pi seed fixes omega = 2 x seed eigenvalue.
struct CoefficientScan {
  double omega = 0;
  double A_min = 0, B_min = 0;        // quadratic minimizers of residual^2
  double r_ref = 0;                   // residual at (A, B) under test
  std::vector<double> dA, dB;         // perturbations tried
  std::vector<double> rA, rB;         // residuals at A + dA, B + dB
  bool A_minimal = false, B_minimal = false;
};
CoefficientScan pi_coefficient_scan(const DrivenBdG& chain, double A, double B, const std::vector<double>& deltas);

}  // namespace mcm
