#include "mcm/mode_expansion.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace mcm {

MatR majorana_form(const MatC& bdg) {
  const Index d = bdg.rows();
  if (d != bdg.cols() || d % 2) throw Error("majorana_form: BdG matrix must be square with even dimension");
  MatC W = MatC::Zero(d, d);
  for (Index x = 0; x < d / 2; ++x) {
    W(2 * x, 2 * x) = 0.5;
    W(2 * x, 2 * x + 1) = 0.5 * kI;
    W(2 * x + 1, 2 * x) = 0.5;
    W(2 * x + 1, 2 * x + 1) = -0.5 * kI;
  }
  const MatC Q = W.adjoint() * bdg * W;
  const MatC A = -kI * (Q - Q.transpose());
  if (A.imag().cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, A.cwiseAbs().maxCoeff()))
    throw Error("majorana_form: BdG matrix lacks particle-hole structure");
  return A.real();
}

std::pair<MatR, MatR> majorana_drive(const DrivenBdG& bdg) {
  if (bdg.max_harmonic() > 1) throw Error("majorana_drive: only h0 + h1 cos(wt) drives are supported");
  const MatC hp = bdg.harmonic(1), hm = bdg.harmonic(-1);
  if ((hp - hm).cwiseAbs().maxCoeff() > 1e-12) throw Error("majorana_drive: drive is not a cosine");
  return {majorana_form(bdg.harmonic(0)), majorana_form(2.0 * hp)};
}

namespace {

MatR seed_matrix(const MatR& A0, const MatR& A1) {
  const Index d = A0.rows();
  MatR M = MatR::Zero(2 * d, 2 * d);
  M.topRightCorner(d, d) = -A0 + 0.5 * A1;
  M.bottomLeftCorner(d, d) = A0 + 0.5 * A1;
  return M;
}

std::map<int, VecC> apply_floquet(const MatR& A0, const MatR& A1, double omega, double eps,
                                  const std::map<int, VecC>& g) {
  const MatC K0 = kI * A0.cast<cplx>(), K1h = 0.5 * kI * A1.cast<cplx>();
  std::map<int, VecC> out;
  auto add = [&](int n, const VecC& v) {
    auto it = out.find(n);
    if (it == out.end()) out.emplace(n, v);
    else it->second += v;
  };
  for (const auto& [n, gn] : g) {
    add(n, K0 * gn + (n * omega - eps) * gn);
    const VecC k1 = K1h * gn;
    add(n - 1, k1);
    add(n + 1, k1);
  }
  return out;
}

}  // namespace

std::vector<double> pi_seed_spectrum(const MatR& A0, const MatR& A1) {
  Eigen::EigenSolver<MatR> es(seed_matrix(A0, A1), false);
  std::vector<double> out;
  const double scale = std::max(1.0, A0.cwiseAbs().maxCoeff() + A1.cwiseAbs().maxCoeff());
  for (Index k = 0; k < es.eigenvalues().size(); ++k)
    if (std::abs(es.eigenvalues()(k).imag()) < 1e-9 * scale) out.push_back(es.eigenvalues()(k).real());
  std::sort(out.begin(), out.end());
  return out;
}

VecC ModeExpansion::at(double t) const {
  VecC v = VecC::Zero(seed.size());
  for (const auto& [n, gn] : components) v += std::exp(kI * (n * omega * t)) * gn;
  if (species == Species::pi) v *= std::exp(-kI * (0.5 * omega * t));
  return v;
}

double ModeExpansion::hermiticity(double t) const { return at(t).imag().cwiseAbs().maxCoeff(); }

double mode_residual(const MatR& A0, const MatR& A1, double omega, Species species,
                     const std::map<int, VecC>& components, int cutoff) {
  const double eps = species == Species::pi ? 0.5 * omega : 0.0;
  double s = 0;
  for (const auto& [n, r] : apply_floquet(A0, A1, omega, eps, components))
    if (std::abs(n) <= cutoff) s += r.squaredNorm();
  return std::sqrt(s);
}

ModeExpansion majorana_mode_expansion(const MatR& A0, const MatR& A1, double omega, Species species,
                                      int order, const VecC* seed, const ModeExpansionOptions& opt) {
  const Index d = A0.rows();
  if (A0.cols() != d || A1.rows() != d || A1.cols() != d) throw Error("mode expansion: A0, A1 shape mismatch");
  if (species == Species::bulk) throw Error("mode expansion: species must be zero or pi");
  if (order < 0) throw Error("mode expansion: order must be >= 0");
  if (!(omega > 0)) throw Error("mode expansion: omega must be positive");

  ModeExpansion ex;
  ex.species = species;
  ex.omega = omega;
  ex.order = order;
  const double scale = std::max(1.0, A0.cwiseAbs().maxCoeff());
  Eigen::JacobiSVD<MatR> svd(A0, Eigen::ComputeFullV);
  const VecR sv = svd.singularValues();
  for (Index k = 0; k < sv.size(); ++k)
    if (sv(k) < opt.seed_tol * scale) ++ex.kernel_dim;

  if (species == Species::zero) {
    if (seed) {
      if ((A0 * *seed).norm() > opt.seed_tol * scale * seed->norm())
        throw Error("mode expansion: seed does not commute with h0");
      ex.seed = *seed;
    } else {
      if (ex.kernel_dim == 0) {
        std::ostringstream os;
        os << "mode expansion: no zero-mode seed, h0 kernel dimension 0 (smallest singular value "
           << sv(sv.size() - 1) << ")";
        throw Error(os.str());
      }
      // Kernel projection of the best-covered basis Majorana: a localized seed.
      const MatR Ker = svd.matrixV().rightCols(ex.kernel_dim);
      Index best = 0;
      Ker.rowwise().squaredNorm().maxCoeff(&best);
      VecR v = Ker * Ker.row(best).transpose();
      ex.seed = (v / v.norm()).cast<cplx>();
    }
    ex.components[0] = ex.seed;
  } else {
    const double target = 0.5 * omega;
    if (seed) {
      const VecC r = kI * (A0.cast<cplx>() * *seed) + 0.5 * kI * (A1.cast<cplx>() * seed->conjugate()) -
                     target * *seed;
      if (r.norm() > opt.seed_tol * std::max(1.0, omega) * seed->norm())
        throw Error("mode expansion: seed does not satisfy the pi-mode condition at omega/2");
      ex.seed = *seed;
      ex.seed_eigenvalue = target;
    } else {
      Eigen::EigenSolver<MatR> es(seed_matrix(A0, A1));
      Index best = -1;
      for (Index k = 0; k < es.eigenvalues().size(); ++k) {
        const cplx l = es.eigenvalues()(k);
        if (std::abs(l.imag()) > 1e-9 * std::max(1.0, omega)) continue;
        if (best < 0 || std::abs(l.real() - target) < std::abs(es.eigenvalues()(best).real() - target)) best = k;
      }
      if (best < 0 || std::abs(es.eigenvalues()(best).real() - target) > opt.seed_tol * std::max(1.0, omega)) {
        std::ostringstream os;
        os << "mode expansion: no pi-mode seed at omega/2 = " << target << " (h0 kernel dimension "
           << ex.kernel_dim << ", nearest real seed eigenvalue "
           << (best < 0 ? NAN : es.eigenvalues()(best).real()) << ")";
        throw Error(os.str());
      }
      VecC v = es.eigenvectors().col(best);
      Index big = 0;
      v.cwiseAbs().maxCoeff(&big);
      v *= std::abs(v(big)) / v(big);
      const VecR xy = v.real();
      VecC g = xy.head(d).cast<cplx>() + kI * xy.tail(d).cast<cplx>();
      ex.seed = g / g.norm();
      ex.seed_eigenvalue = es.eigenvalues()(best).real();
    }
    ex.components[0] = ex.seed;
    ex.components[1] = ex.seed.conjugate();
  }

  const int cutoff = order + 2;
  const double eps = species == Species::pi ? 0.5 * omega : 0.0;
  ex.residuals.push_back(mode_residual(A0, A1, omega, species, ex.components, cutoff));
  for (int k = 1; k <= order; ++k) {
    const auto r = apply_floquet(A0, A1, omega, eps, ex.components);
    for (const auto& [n, rn] : r) {
      if (std::abs(n) > cutoff) continue;
      VecC delta;
      if (species == Species::zero) {
        if (n == 0) continue;
        delta = -rn / (n * omega);
      } else {
        if (n == 0 || n == 1) continue;
        if (k == 1 && n == -1) delta = opt.A * rn / omega;
        else if (k == 1 && n == 2) delta = opt.B * rn / omega;
        else delta = -rn / (n * omega - eps);
      }
      auto it = ex.components.find(n);
      if (it == ex.components.end()) ex.components.emplace(n, delta);
      else it->second += delta;
    }
    ex.residuals.push_back(mode_residual(A0, A1, omega, species, ex.components, cutoff));
  }
  return ex;
}

}  // namespace mcm
