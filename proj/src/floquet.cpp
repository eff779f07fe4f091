#include "mcm/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcm/eigensolver.hpp"

namespace mcm {

double hermiticity_residual(const SambeMatrix& s) {
  return (s.matrix - s.matrix.adjoint()).cwiseAbs().maxCoeff();
}

const char* species_name(Species s) {
  switch (s) {
    case Species::zero: return "zero";
    case Species::pi: return "pi";
    default: return "bulk";
  }
}

double fold_quasienergy(double e, double omega) {
  double f = e - omega * std::floor(e / omega + 0.5);
  // floor maps the boundary to -omega/2; the representative is +omega/2
  if (f <= -0.5 * omega) f += omega;
  return f;
}

double circular_distance(double e, double target, double omega) {
  return std::abs(fold_quasienergy(e - target, omega));
}

int dominant_harmonic(const VecC& v, int M, Index blockdim) {
  int best = 0;
  double wbest = -1.0;
  // visit n in order 0, 1, -1, 2, -2, ... so ties keep the smaller |n|
  for (int a = 0; a <= 2 * M; ++a) {
    const int n = (a % 2 == 1) ? (a + 1) / 2 : -(a / 2);
    const double w = v.segment(Index(n + M) * blockdim, blockdim).squaredNorm();
    if (w > wbest * (1.0 + 1e-12)) {
      wbest = w;
      best = n;
    }
  }
  return best;
}

namespace {

FloquetMode make_mode(const VecC& v, double raw, int M, Index d, double omega, double tol0,
                      double tolpi) {
  FloquetMode m;
  m.raw = raw;
  m.quasienergy = fold_quasienergy(raw, omega);
  m.M = M;
  m.omega = omega;
  for (int n = -M; n <= M; ++n) m.components.push_back(v.segment(Index(n + M) * d, d));
  if (std::abs(m.quasienergy) <= tol0)
    m.species = Species::zero;
  else if (circular_distance(m.quasienergy, 0.5 * omega, omega) <= tolpi)
    m.species = Species::pi;
  return m;
}

}  // namespace

SpectrumResult quasienergy_spectrum(const SambeMatrix& s, const SpectrumOptions& opt) {
  const double w = s.omega;
  const double tol0 = opt.tol0 > 0 ? opt.tol0 : 1e-3 * w;
  const double tolpi = opt.tolpi > 0 ? opt.tolpi : 1e-3 * w;
  const Index n = s.matrix.rows();
  const Index d = s.blockdim;
  const bool dense = n <= opt.dense_limit;

  auto near_mode = [&](double e) {
    return std::abs(e) <= tol0 || std::abs(e - 0.5 * w) <= tolpi || std::abs(e + 0.5 * w) <= tolpi;
  };
  PartialEigen pe = hermitian_eigen(
      s.matrix, [&](double e) { return dense || near_mode(e); }, opt.dense_limit);

  SpectrumResult r;
  r.omega = w;
  r.M = s.M;
  r.blockdim = d;
  r.raw = pe.values;

  for (std::size_t k = 0; k < pe.selected.size(); ++k) {
    const double e = pe.values(pe.selected[k]);
    const VecC v = pe.vectors.col(Index(k));
    const bool central = dominant_harmonic(v, s.M, d) == 0;
    if (dense && central) r.quasienergies.push_back(fold_quasienergy(e, w));
    if (central && near_mode(e)) r.modes.push_back(make_mode(v, e, s.M, d, w, tol0, tolpi));
  }
  if (!dense) {
    for (Index i = 0; i < n; ++i) {
      const double e = pe.values(i);
      if (e > -0.5 * w && e <= 0.5 * w) r.quasienergies.push_back(e);
    }
  }
  std::sort(r.quasienergies.begin(), r.quasienergies.end());

  r.gap0 = r.gappi = std::numeric_limits<double>::infinity();
  for (double e : r.quasienergies) {
    if (std::abs(e) > tol0) r.gap0 = std::min(r.gap0, std::abs(e));
    const double dp = circular_distance(e, 0.5 * w, w);
    if (dp > tolpi) r.gappi = std::min(r.gappi, dp);
  }
  return r;
}

std::pair<int, int> mode_counts(const SpectrumResult& spec, double tol0, double tolpi) {
  int z = 0, p = 0;
  for (double e : spec.quasienergies) {
    if (std::abs(e) <= tol0) ++z;
    else if (circular_distance(e, 0.5 * spec.omega, spec.omega) <= tolpi) ++p;
  }
  return {z, p};
}

std::vector<FloquetMode> find_majorana_modes(const SpectrumResult& spec, double tol0,
                                             double tolpi) {
  std::vector<FloquetMode> out;
  for (FloquetMode m : spec.modes) {
    if (std::abs(m.quasienergy) <= tol0)
      m.species = Species::zero;
    else if (circular_distance(m.quasienergy, 0.5 * spec.omega, spec.omega) <= tolpi)
      m.species = Species::pi;
    else
      continue;
    out.push_back(std::move(m));
  }
  std::stable_sort(out.begin(), out.end(), [](const FloquetMode& a, const FloquetMode& b) {
    if (a.species != b.species) return a.species < b.species;
    return a.raw < b.raw;
  });
  return out;
}

namespace {

// Replica shifted by k harmonics: psi'^(n) = psi^(n-k), raw eigenvalue + k omega.
FloquetMode shifted(const FloquetMode& m, int k, double omega) {
  FloquetMode s = m;
  const Index d = m.components.front().size();
  for (int n = -m.M; n <= m.M; ++n) {
    const int src = n - k;
    s.components[std::size_t(n + m.M)] =
        (src >= -m.M && src <= m.M) ? m.component(src) : VecC::Zero(d);
  }
  s.raw = m.raw + k * omega;
  return s;
}

}  // namespace

std::vector<FloquetMode> corner_basis_rotation(const std::vector<FloquetMode>& modes, int Nx,
                                               int Ny) {
  const int Lx = 2 * Nx, Ly = 2 * Ny;
  std::vector<FloquetMode> out;
  for (Species sp : {Species::zero, Species::pi}) {
    std::vector<FloquetMode> cl;
    for (const auto& m : modes) {
      if (m.species != sp) continue;
      // pi representatives sit at +omega/2 or -omega/2; use the +omega/2 frame
      cl.push_back(sp == Species::pi && m.raw < 0 ? shifted(m, 1, m.omega) : m);
    }
    if (cl.empty()) continue;
    const int M = cl.front().M;
    const Index d = cl.front().components.front().size();
    if (d != Index(2) * Lx * Ly) throw Error("corner_basis_rotation: lattice size mismatch");

    const Index k = Index(cl.size());
    MatC Q = MatC::Zero(k, k);
    for (int n = -M; n <= M; ++n) {
      MatC V(d, k);
      for (Index a = 0; a < k; ++a) V.col(a) = cl[a].component(n);
      VecR q(d);
      for (int y = 0; y < Ly; ++y)
        for (int x = 0; x < Lx; ++x) {
          const Index i = 2 * (Index(x) + Index(Lx) * y);
          q(i) = q(i + 1) = double((x >= Lx / 2 ? 1 : 0) + (y >= Ly / 2 ? 2 : 0));
        }
      Q += V.adjoint() * q.cast<cplx>().asDiagonal() * V;
    }
    Eigen::SelfAdjointEigenSolver<MatC> es(Q);
    const MatC& U = es.eigenvectors();
    for (Index c = 0; c < k; ++c) {
      FloquetMode r = cl.front();
      for (int n = -M; n <= M; ++n) {
        VecC v = VecC::Zero(d);
        for (Index a = 0; a < k; ++a) v += U(a, c) * cl[a].component(n);
        r.components[std::size_t(n + M)] = v;
      }
      double nrm = 0, raw = 0;
      for (const auto& v : r.components) nrm += v.squaredNorm();
      for (auto& v : r.components) v /= std::sqrt(nrm);
      for (Index a = 0; a < k; ++a) raw += std::norm(U(a, c)) * cl[a].raw;
      r.raw = raw;
      r.quasienergy = fold_quasienergy(raw, r.omega);
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::array<double, 4> corner_localization(const FloquetMode& mode, int Nx, int Ny,
                                          double corner_frac) {
  const int Lx = 2 * Nx, Ly = 2 * Ny;
  const int cx = int(std::lround(corner_frac * Lx)), cy = int(std::lround(corner_frac * Ly));
  std::array<double, 4> w{0, 0, 0, 0};
  double total = 0;
  for (int n = -mode.M; n <= mode.M; ++n) {
    const VecC& v = mode.component(n);
    total += v.squaredNorm();
    for (int y = 0; y < Ly; ++y)
      for (int x = 0; x < Lx; ++x) {
        const bool left = x < cx, right = x >= Lx - cx, bottom = y < cy, top = y >= Ly - cy;
        const Index i = 2 * (Index(x) + Index(Lx) * y);
        const double p = std::norm(v(i)) + std::norm(v(i + 1));
        if (left && bottom) w[0] += p;
        if (right && bottom) w[1] += p;
        if (left && top) w[2] += p;
        if (right && top) w[3] += p;
      }
  }
  if (total > 0)
    for (auto& x : w) x /= total;
  return w;
}

std::map<int, double> fourier_weight_profile(const FloquetMode& mode) {
  std::map<int, double> out;
  double total = 0;
  for (int n = -mode.M; n <= mode.M; ++n) total += mode.component(n).squaredNorm();
  for (int n = -mode.M; n <= mode.M; ++n) out[n] = mode.component(n).squaredNorm() / total;
  return out;
}

VecR site_probability(const FloquetMode& mode, int n) {
  const VecC& v = mode.component(n);
  VecR p(v.size() / 2);
  for (Index i = 0; i < p.size(); ++i) p(i) = std::norm(v(2 * i)) + std::norm(v(2 * i + 1));
  return p;
}

double convergence_check(const DrivenBdG& bdg, int M, const SpectrumOptions& opt) {
  if (M < 2) throw Error("convergence_check: M must be >= 2");
  const double w = bdg.omega;
  auto pick = [&](const SpectrumResult& s, double target) {
    std::vector<double> e = s.quasienergies;
    std::stable_sort(e.begin(), e.end(), [&](double a, double b) {
      return circular_distance(a, target, w) < circular_distance(b, target, w);
    });
    e.resize(std::min<std::size_t>(16, e.size()));
    for (auto& x : e) x = fold_quasienergy(x - target, w);
    std::sort(e.begin(), e.end());
    return e;
  };
  SpectrumOptions o = opt;
  const auto a = quasienergy_spectrum(assemble_sambe(bdg, M), o);
  const auto b = quasienergy_spectrum(assemble_sambe(bdg, M - 1), o);
  double r = 0;
  for (double target : {0.0, 0.5 * w}) {
    const auto ea = pick(a, target), eb = pick(b, target);
    for (std::size_t i = 0; i < std::min(ea.size(), eb.size()); ++i)
      r = std::max(r, std::abs(ea[i] - eb[i]));
  }
  return r;
}

}  // namespace mcm
