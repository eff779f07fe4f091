#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mcm/majorana.hpp"
#include "mcm/perturbation.hpp"

namespace mcm {

// Active leads by name ("l1a".."l4b"), source first. model.n and the coupling keys
// index leads by their position in `leads`. Fluxes are in units of hbar/e.
struct LeadConfig {
  std::vector<std::string> leads;
  LeadModelParams model;
  // Two-lead reference arm lambda e^{i Phi(t)}, Phi(t) = phi0 + phi1 sin(q w t / 2).
  cplx lambda = 0;
  double phi0 = 0, phi1 = 0;
  int flux_harmonic = 2;
  // Four-lead direct links l1a-l2a and l3a-l4a: amplitudes lambda12 e^{-i phi12} d_2^dag d_1
  // and lambda43 e^{-i phi43} d_4^dag d_3.
  double lambda12 = 0, lambda43 = 0, phi12 = 0, phi43 = 0;

  bool four_lead() const { return leads.size() == 4; }
  // The parity the conductance resolves: i g_src g_drn (two-lead) or g01 g02 g03 g04.
  MajoranaString measured() const;
};

// Throws Error on malformed configs.
void validate(const LeadConfig& cfg);

struct ConductanceTerm {
  std::string name;
  double value = 0;  // contribution, parities included
};

struct ConductanceResult {
  double value = 0;
  double constant = 0;
  std::vector<ConductanceTerm> terms;
  // Two-lead: interference = parity * g1 * sin(phi0 - phase).
  double g1 = 0, phase = 0;
};

inline constexpr int kSimpsonIntervals = 256;

// Time average over the window T (2T for 0pi) of |T_ij(t) p + lambda e^{i Phi(t)}|^2.
ConductanceResult two_lead_conductance(const LeadConfig& cfg, int parity, int intervals = kSimpsonIntervals);

// Bessel order of g1 in Phi1: |k| / q with T ~ e^{i k w t / 2}.
double bessel_order(const LeadConfig& cfg);

// Gbar = a0 + A1 p12 + A2 p34 + A3 p12 p34 with p12 = <i g01 g02>, p34 = <i g03 g04>.
// In amplitude-phase form A1 = a1 sin(phi12 - phi12_00), A2 = a2 sin(phi43 - phi43_00),
// A3 p12 p34 = a3 <g01 g02 g03 g04> cos(phi43 - phi43_00 - phi12 + phi12_00).
struct JointCoefficients {
  double a0 = 0, A1 = 0, A2 = 0, A3 = 0;
  double a1 = 0, a2 = 0, a3 = 0, phi12_00 = 0, phi43_00 = 0;
};
JointCoefficients joint_coefficients(const LeadConfig& cfg);
ConductanceResult joint_conductance(const LeadConfig& cfg, int p12, int p34);

// Fluxes nulling A1 and A2 on the branch with A3 > 0, wrapped into (-pi, pi].
std::pair<double, double> tune_fluxes(const LeadConfig& cfg);

struct Classification {
  int parity = 1;
  double margin = 0;  // distance from the midpoint of the two references
};
// calibration = (G at parity +1, G at parity -1).
Classification classify_parity(double measured, std::pair<double, double> calibration);

struct ReadoutDefaults {
  double eps_plus = 1.0, eps_minus = 1.0;
  double omega = 2.0 * kPi;
  double coupling = 0.1;     // lambda_bar of every active lead
  double reference = 0.02;  // two-lead reference arm
  double link = 0.1;        // four-lead link amplitudes
};

// Lead assignment for a Hermitian parity string of 2 Majoranas, or g01 g02 g03 g04.
// Different corners use the a-leads (zero mode n = 0, pi mode n = 1); a zero and a pi
// mode on one corner use l_{c,a} (n = 0) and l_{c,b} (n = -1). Fluxes are set for
// maximal contrast.
LeadConfig readout_config(const MajoranaString& parity, const ReadoutDefaults& d = {});

// Shortest equivalent of p on a state with total parity `total` (+-1): strings of
// more than four Majoranas are multiplied by the total parity.
MajoranaString reduce_parity(const MajoranaString& p, int total);

struct ReadoutResult {
  int outcome = 1;         // eigenvalue of the requested parity
  double conductance = 0;
  FockState post;
  double probability = 1.0;
};

// Born outcome from majorana measure() and the conductance cfg reads for it.
ReadoutResult simulate_readout(const FockState& state, const MajoranaString& parity, const LeadConfig& cfg,
                               Rng& rng);

}  // namespace mcm
