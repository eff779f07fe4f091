#include "mcm/readout.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mcm {

namespace {

struct LeadName {
  int corner = 1;
  char arm = 'a';
};

LeadName parse_lead(const std::string& s) {
  if (s.size() != 3 || s[0] != 'l' || s[1] < '1' || s[1] > '4' || (s[2] != 'a' && s[2] != 'b'))
    throw Error("readout: invalid lead name '" + s + "' (expected l1a..l4b)");
  return {s[1] - '0', s[2]};
}

std::string lead_name(int corner, char arm) { return "l" + std::to_string(corner) + arm; }

// Composite Simpson on [0, T].
template <class F>
double simpson(F&& f, double T, int intervals) {
  const double h = T / intervals;
  double s = f(0.0) + f(T);
  for (int k = 1; k < intervals; ++k) s += (k % 2 ? 4.0 : 2.0) * f(k * h);
  return s * h / 3.0;
}

LeadModelParams four_lead_model(const LeadConfig& cfg) {
  LeadModelParams m = cfg.model;
  m.links[{0, 1}] = cfg.lambda12 * std::exp(-kI * cfg.phi12);
  m.links[{2, 3}] = cfg.lambda43 * std::exp(-kI * cfg.phi43);
  return m;
}

double wrap_phase(double x) {
  x = std::remainder(x, 2.0 * kPi);
  return x <= -kPi ? x + 2.0 * kPi : x;
}

// argmax of J_1 on the first lobe
constexpr double kJ1Peak = 1.8411837813406593;

}  // namespace

void validate(const LeadConfig& cfg) {
  const auto& L = cfg.leads;
  if (L.size() != 2 && L.size() != 4) throw Error("readout: a config has 2 or 4 active leads");
  for (const auto& s : L) parse_lead(s);
  for (std::size_t a = 0; a < L.size(); ++a)
    for (std::size_t b = a + 1; b < L.size(); ++b)
      if (L[a] == L[b]) throw Error("readout: duplicate lead " + L[a]);
  if (cfg.model.n.size() != L.size()) throw Error("readout: need one n index per active lead");
  if (L.size() == 2) {
    for (int n : cfg.model.n)
      if (std::abs(n) > 1) throw Error("readout: two-lead n indices must be -1, 0 or 1");
    if (cfg.flux_harmonic != 1 && cfg.flux_harmonic != 2) throw Error("readout: flux harmonic must be 1 or 2");
  } else {
    for (int c = 0; c < 4; ++c) {
      if (L[std::size_t(c)] != lead_name(c + 1, 'a'))
        throw Error("readout: four-lead configs use l1a, l2a, l3a, l4a in that order");
      if (cfg.model.n[std::size_t(c)] != 0) throw Error("readout: four-lead configs need n = 0 on every lead");
    }
  }
  validate(cfg.model);
}

MajoranaString LeadConfig::measured() const {
  validate(*this);
  if (four_lead()) return make_string(0, {0, 1, 2, 3});
  std::vector<int> labels;
  for (std::size_t k = 0; k < 2; ++k) {
    const int n = model.n[k];
    labels.push_back((n % 2 ? 4 : 0) + parse_lead(leads[k]).corner - 1);
  }
  if (labels[0] == labels[1]) throw Error("readout: both leads address the same Majorana");
  return make_string(1, labels);
}

ConductanceResult two_lead_conductance(const LeadConfig& cfg, int parity, int intervals) {
  validate(cfg);
  if (cfg.four_lead()) throw Error("two_lead_conductance: needs a two-lead config");
  if (parity != 1 && parity != -1) throw Error("two_lead_conductance: parity must be +1 or -1");
  if (intervals < 2 || intervals % 2) throw Error("two_lead_conductance: Simpson needs an even interval count");
  const EffectiveCoupling T = lead_effective_coupling(cfg.model, 0, 1);
  const double W = T.window(), w = cfg.model.omega;
  const double q = cfg.flux_harmonic;
  auto arm = [&](double t) { return cfg.lambda * std::exp(kI * (cfg.phi1 * std::sin(0.5 * q * w * t))); };

  ConductanceResult r;
  r.value = simpson([&](double t) { return std::norm(double(parity) * T.at(t) + std::exp(kI * cfg.phi0) * arm(t)); },
                    W, intervals) / W;
  r.constant = simpson([&](double t) { return std::norm(T.at(t)) + std::norm(cfg.lambda); }, W, intervals) / W;
  const double re = simpson([&](double t) { return (std::conj(T.at(t)) * arm(t)).real(); }, W, intervals) / W;
  const double im = simpson([&](double t) { return (std::conj(T.at(t)) * arm(t)).imag(); }, W, intervals) / W;
  const cplx C(re, im);
  r.g1 = 2.0 * std::abs(C);
  r.phase = r.g1 > 0 ? wrap_phase(-std::arg(C) - 0.5 * kPi) : 0.0;
  r.terms.push_back({"interference", parity * 2.0 * (std::exp(kI * cfg.phi0) * C).real()});
  return r;
}

double bessel_order(const LeadConfig& cfg) {
  validate(cfg);
  if (cfg.four_lead()) throw Error("bessel_order: needs a two-lead config");
  const EffectiveCoupling T = lead_effective_coupling(cfg.model, 0, 1);
  return std::abs(T.harmonics.begin()->first) / double(cfg.flux_harmonic);
}

JointCoefficients joint_coefficients(const LeadConfig& cfg) {
  validate(cfg);
  if (!cfg.four_lead()) throw Error("joint_conductance: needs a four-lead config");
  const FourLeadAmplitude a = four_lead_effective(four_lead_model(cfg));
  JointCoefficients j;
  j.a0 = std::norm(a.c14) + std::norm(a.c24) + std::norm(a.c13);
  j.A1 = 2.0 * (std::conj(a.c14) * a.c24).imag();
  j.A2 = -2.0 * (std::conj(a.c14) * a.c13).imag();
  j.A3 = -2.0 * (std::conj(a.c24) * a.c13).real();
  // Flux-free parts: c24 = K24 e^{-i phi12}, c13 = K13 e^{-i phi43}.
  const cplx K24 = a.c24 * std::exp(kI * cfg.phi12), K13 = a.c13 * std::exp(kI * cfg.phi43);
  j.a1 = -2.0 * std::abs(a.c14 * K24);
  j.a2 = 2.0 * std::abs(a.c14 * K13);
  j.a3 = 2.0 * std::abs(K24 * K13);
  j.phi12_00 = std::arg(std::conj(a.c14) * K24);
  j.phi43_00 = std::arg(std::conj(a.c14) * K13);
  return j;
}

ConductanceResult joint_conductance(const LeadConfig& cfg, int p12, int p34) {
  if ((p12 != 1 && p12 != -1) || (p34 != 1 && p34 != -1)) throw Error("joint_conductance: parities must be +1 or -1");
  const JointCoefficients j = joint_coefficients(cfg);
  ConductanceResult r;
  r.constant = j.a0;
  r.terms = {{"a1", j.A1 * p12}, {"a2", j.A2 * p34}, {"a3", j.A3 * p12 * p34}};
  r.value = r.constant;
  for (const auto& t : r.terms) r.value += t.value;
  return r;
}

std::pair<double, double> tune_fluxes(const LeadConfig& cfg) {
  LeadConfig c = cfg;
  c.phi12 = c.phi43 = 0;
  const JointCoefficients j = joint_coefficients(c);
  if (!(j.a3 > 1e-300) || j.a1 == 0 || j.a2 == 0)
    throw Error("tune_fluxes: degenerate couplings (a3 = 0), the fluxes cannot be tuned");
  c.phi12 = j.phi12_00;
  c.phi43 = j.phi43_00;
  if (joint_coefficients(c).A3 < 0) c.phi12 += kPi;
  return {wrap_phase(c.phi12), wrap_phase(c.phi43)};
}

Classification classify_parity(double measured, std::pair<double, double> calibration) {
  const auto [gp, gm] = calibration;
  if (gp == gm) throw Error("classify_parity: calibration references coincide");
  const double mid = 0.5 * (gp + gm);
  Classification c;
  c.margin = std::abs(measured - mid);
  if (c.margin < 1e-9) {
    std::ostringstream os;
    os << "classify_parity: ambiguous reading " << measured << " (margin " << c.margin << " < 1e-9)";
    throw Error(os.str());
  }
  c.parity = std::abs(measured - gp) < std::abs(measured - gm) ? 1 : -1;
  return c;
}

LeadConfig readout_config(const MajoranaString& parity, const ReadoutDefaults& d) {
  if (!is_hermitian(parity)) throw Error("readout_config: parity string must be Hermitian");
  LeadConfig cfg;
  cfg.model.eps_plus = d.eps_plus;
  cfg.model.eps_minus = d.eps_minus;
  cfg.model.omega = d.omega;
  std::vector<int> labels;
  for (int k = 0; k < 8; ++k)
    if (parity.mask >> k & 1) labels.push_back(k);

  if (parity.mask == 0x0F) {
    for (int c = 1; c <= 4; ++c) {
      cfg.leads.push_back(lead_name(c, 'a'));
      cfg.model.n.push_back(0);
      cfg.model.couplings[{Species::zero, c - 1, 0}] = d.coupling;
    }
    cfg.lambda12 = cfg.lambda43 = d.link;
    std::tie(cfg.phi12, cfg.phi43) = tune_fluxes(cfg);
    return cfg;
  }
  if (labels.size() != 2)
    throw Error("readout_config: no lead configuration for " + to_string(parity) +
                " (supported: two Majoranas or g01 g02 g03 g04)");

  const int ca = labels[0] % 4 + 1, cb = labels[1] % 4 + 1;
  const bool pa = labels[0] >= 4, pb = labels[1] >= 4;
  if (ca == cb) {
    // g0c gpc: both leads on corner c
    cfg.leads = {lead_name(ca, 'a'), lead_name(ca, 'b')};
    cfg.model.n = {0, -1};
  } else {
    cfg.leads = {lead_name(ca, 'a'), lead_name(cb, 'a')};
    cfg.model.n = {pa ? 1 : 0, pb ? 1 : 0};
  }
  for (int k = 0; k < 2; ++k) {
    const bool pi = cfg.model.n[std::size_t(k)] % 2 != 0;
    cfg.model.couplings[{pi ? Species::pi : Species::zero, k, pi ? -1 : 0}] = d.coupling;
  }
  cfg.lambda = d.reference;
  const bool mixed = pa != pb;
  cfg.flux_harmonic = mixed ? 1 : 2;
  cfg.phi1 = pa || pb ? kJ1Peak : 0.0;
  cfg.phi0 = 0;
  // interference = p g1 sin(phi0 - phase), largest at phi0 = phase + pi/2
  cfg.phi0 = wrap_phase(two_lead_conductance(cfg, 1).phase + 0.5 * kPi);
  return cfg;
}

MajoranaString reduce_parity(const MajoranaString& p, int total) {
  if (total != 1 && total != -1) throw Error("reduce_parity: total parity must be +1 or -1");
  if (p.length() <= 4) return p;
  MajoranaString r = multiply(p, total_parity());
  if (total < 0) r.phase_k = (r.phase_k + 2) % 4;
  return r;
}

ReadoutResult simulate_readout(const FockState& state, const MajoranaString& parity, const LeadConfig& cfg,
                               Rng& rng) {
  MajoranaString target = parity;
  if (parity.length() > 4) {
    const double t = expectation(state, total_parity()).real();
    if (std::abs(std::abs(t) - 1.0) > 1e-9)
      throw Error("simulate_readout: state has no definite total parity, cannot reduce " + to_string(parity));
    target = reduce_parity(parity, t > 0 ? 1 : -1);
  }
  const MajoranaString m = cfg.measured();
  int sigma = 0;
  if (m == target) sigma = 1;
  else if (m.mask == target.mask && (m.phase_k + 2) % 4 == target.phase_k) sigma = -1;
  else
    throw Error("simulate_readout: config measures " + to_string(m) + ", not " + to_string(parity));

  const MeasureResult mr = measure(state, parity, rng);
  ReadoutResult out;
  out.outcome = mr.outcome;
  out.post = mr.post;
  out.probability = mr.probability;
  const int s = sigma * mr.outcome;
  if (!cfg.four_lead()) {
    out.conductance = two_lead_conductance(cfg, s).value;
  } else {
    // <i g01 g02 i g03 g04> = -<g01 g02 g03 g04>
    const JointCoefficients j = joint_coefficients(cfg);
    const double p12 = expectation(mr.post, make_string(1, {0, 1})).real();
    const double p34 = expectation(mr.post, make_string(1, {2, 3})).real();
    out.conductance = j.a0 + j.A1 * p12 + j.A2 * p34 - j.A3 * s;
  }
  return out;
}

}  // namespace mcm
