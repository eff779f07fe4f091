#pragma once

#include <string>
#include <vector>

#include "mcm/perturbation.hpp"

namespace mcm {

// Jordan-Wigner operators on `modes` fermions, mode 0 the least significant
// bit: gA = c + c^dag, gB = -i (c - c^dag), so i gA gB = 2n - 1.
MatC jw_annihilation(int modes, int mode);
MatC jw_majorana(int modes, int mode, bool b_type);

// Lead-system Fock model: system Majoranas paired into fermion modes, single-level
// leads, and a particle-number register {N-1, N, N+1} for the system. Only the
// sector with one lead particle per unit of N deficit is kept (N-1 with two
// lead particles, N with one, N+1 with none).
//
// two-lead: modes (g0i, g0j), (gpi, gpj), lead i, lead j. The pi pair is split by
// omega/2 (odd parity above even); gp_s(t) = e^{-i w t/2} P_o gp_s P_e + h.c.
// four-lead: modes (g01, g02), (g03, g04), leads l1a..l4a; zero modes only.
struct ToyModel {
  std::string kind;
  int system_modes = 2;
  int leads = 2;
  bool has_pi = true;
  double omega = 2.0 * kPi;
  std::vector<Index> states;  // full-space index (occupation + 2^modes * (r + 1)) of each kept state
  DrivenOperator<cplx> H0, V;

  int modes() const { return system_modes + leads; }
  MatC restrict(const MatC& full) const;
  int register_of(Index k) const;       // r in {-1, 0, 1}
  int occupation_of(Index k) const;     // fermion bit pattern
  Index find(int occupation, int r) const;  // kept index or -1
  // Full-space operators.
  MatC majorana(Species s, int corner) const;  // corner 0-based (lead index it faces)
  MatC lead_annihilation(int lead) const;
  MatC lower_register() const;  // e^{-i phi}: N -> N-1
  MatC mpm_projector(bool odd) const;
};

ToyModel build_two_lead_toy(const LeadModelParams& p);
ToyModel build_four_lead_toy(const LeadModelParams& p);

// N-sector states folded into (-omega/2, omega/2] as Sambe unit vectors.
struct ToyProblem {
  PerturbationProblem problem;
  std::vector<Index> state;  // kept-state index of each subspace column
  std::vector<int> harmonic;
  std::vector<int> toy_occupation;  // occupation pattern of each subspace column
  Index column(int occupation) const;  // subspace column of an N-sector occupation pattern
};
ToyProblem toy_problem(const ToyModel& toy, double lambda, int M);

// The effective operator of the co-tunneling amplitude between leads 0 and 1
// (two-lead) on the toy Fock space. The four-lead form has h_1234 d_4^dag d_1
// plus the second-order amplitudes of the other five lead pairs.
DrivenOperator<cplx> toy_effective_operator(const ToyModel& toy, const LeadModelParams& p, SpeciesPair pair);
DrivenOperator<cplx> toy_effective_operator(const ToyModel& toy, const LeadModelParams& p,
                                            const FourLeadAmplitude& h);

struct EffectiveModelCheck {
  double residual = 0;             // max |exact - model| / max |model| over centered cluster levels
  std::vector<VecR> exact, model;  // centered levels per cluster
  VecR cluster_energy;
};

// Exact Sambe levels of the toy model against the co-tunneling effective operator,
// each cluster centered on its mean so constant self-energy shifts drop out.
EffectiveModelCheck verify_effective_model(const LeadModelParams& p, SpeciesPair pair, int M = 3);
EffectiveModelCheck compare_levels(const ToyProblem& tp, const MatC& model_block);

}  // namespace mcm
