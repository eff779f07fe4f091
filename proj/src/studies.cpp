#include "mcm/studies.hpp"

#include <cmath>

namespace mcm {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("loglog_slope: need two or more matching points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw Error("loglog_slope: values must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= double(x.size());
  my /= double(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

double truncation_error(const PerturbationProblem& p, int order) {
  return (effective_hamiltonian(p, order).full() - exact_effective_hamiltonian(p).full()).cwiseAbs().maxCoeff();
}

LeadModelParams scaling_two_lead(SpeciesPair pair, bool link) {
  LeadModelParams p;
  p.eps_plus = 1.0;
  p.eps_minus = 1.3;
  const int ni = pair == SpeciesPair::pp ? 1 : 0, nj = pair == SpeciesPair::zz ? 0 : 1;
  p.n = {ni, nj};
  auto add = [&](int lead, int n, cplx v) {
    if (n % 2) p.couplings[{Species::pi, lead, -1}] = v;
    else p.couplings[{Species::zero, lead, 0}] = v;
  };
  add(0, ni, 1.0);
  add(1, nj, cplx(0.8, 0.3));
  if (link) p.links[{0, 1}] = 0.7;
  return p;
}

LeadModelParams scaling_four_lead() {
  LeadModelParams p;
  p.eps_plus = 1.0;
  p.eps_minus = 1.3;
  p.n = {0, 0, 0, 0};
  const cplx l[4] = {1.0, cplx(0.8, 0.3), cplx(0.6, -0.5), cplx(0.9, 0.2)};
  for (int s = 0; s < 4; ++s) p.couplings[{Species::zero, s, 0}] = l[s];
  p.links[{0, 1}] = 0.7;
  p.links[{2, 3}] = cplx(0.4, 0.3);
  return p;
}

ScalingStudy toy_scaling(const std::string& model, const LeadModelParams& p, const std::vector<double>& lambdas,
                         int M) {
  ScalingStudy s;
  s.model = model;
  const ToyModel toy = p.n.size() == 4 ? build_four_lead_toy(p) : build_two_lead_toy(p);
  for (double l : lambdas) {
    const ToyProblem tp = toy_problem(toy, l, M);
    s.lambdas.push_back(l);
    s.err2.push_back(truncation_error(tp.problem, 2));
    s.err3.push_back(truncation_error(tp.problem, 3));
  }
  s.slope2 = loglog_slope(s.lambdas, s.err2);
  s.slope3 = loglog_slope(s.lambdas, s.err3);
  return s;
}

std::pair<cplx, cplx> parity_amplitudes(const LeadModelParams& p, double lambda) {
  if (p.n.size() != 2) throw Error("parity_amplitudes: two-lead model expected");
  const ToyProblem tp = toy_problem(build_two_lead_toy(p), lambda, 2);
  const MatC h = exact_effective_hamiltonian(tp.problem).matrix;
  // bit 0: (g0i, g0j), bit 1: (gpi, gpj), bits 2-3: leads i, j
  cplx t[2];
  for (int z = 0; z < 2; ++z) t[z] = h(tp.column(z | 1 << 3), tp.column(z | 1 << 2));
  return {t[0], t[1]};
}

ResidualHistory zero_mode_history(const DrivenBdG& chain, double omega, int orders) {
  const auto [A0, A1] = majorana_drive(chain);
  const auto ex = majorana_mode_expansion(A0, A1, omega, Species::zero, orders);
  ResidualHistory h;
  h.residuals = ex.residuals;
  h.decreasing = h.residuals.size() > 1;
  for (std::size_t k = 1; k < h.residuals.size(); ++k)
    if (!(h.residuals[k] < h.residuals[k - 1])) h.decreasing = false;
  return h;
}

CoefficientScan pi_coefficient_scan(const DrivenBdG& chain, double A, double B, const std::vector<double>& deltas) {
  const auto [A0, A1] = majorana_drive(chain);
  const auto spec = pi_seed_spectrum(A0, A1);
  if (spec.empty()) throw Error("pi_coefficient_scan: chain has no real pi seed eigenvalue");
  CoefficientScan s;
  s.omega = 2.0 * spec.back();
  const VecC seed = majorana_mode_expansion(A0, A1, s.omega, Species::pi, 0).seed;
  auto r = [&](double a, double b) {
    return majorana_mode_expansion(A0, A1, s.omega, Species::pi, 1, &seed, {a, b, 1e-8}).residuals[1];
  };
  // residual^2 is quadratic in each coefficient
  auto argmin = [](auto f) {
    const double a = f(-1.0), b = f(0.0), c = f(1.0);
    return -(c - a) / (2 * (a + c - 2 * b));
  };
  s.A_min = argmin([&](double x) { return std::pow(r(x, B), 2); });
  s.B_min = argmin([&](double x) { return std::pow(r(A, x), 2); });
  s.r_ref = r(A, B);
  s.A_minimal = s.B_minimal = true;
  for (double d : deltas) {
    s.dA.push_back(d);
    s.dB.push_back(d);
    s.rA.push_back(r(A + d, B));
    s.rB.push_back(r(A, B + d));
    if (!(s.rA.back() > s.r_ref)) s.A_minimal = false;
    if (!(s.rB.back() > s.r_ref)) s.B_minimal = false;
  }
  return s;
}

}  // namespace mcm
