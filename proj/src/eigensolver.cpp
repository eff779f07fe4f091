#include "mcm/eigensolver.hpp"

#include <cmath>

namespace mcm {

namespace {

// LU with partial pivoting of the tridiagonal T - sigma (LAPACK gttrf layout).
struct TridiagLU {
  VecR dl, d, du, du2;
  std::vector<int> pivot;

  TridiagLU(const VecR& diag, const VecR& off, double sigma, double tiny) {
    const Index n = diag.size();
    d = diag.array() - sigma;
    dl = off;
    du = off;
    du2 = VecR::Zero(std::max<Index>(n - 2, 0));
    pivot.assign(n, 0);
    for (Index i = 0; i + 1 < n; ++i) {
      if (std::abs(d(i)) >= std::abs(dl(i))) {
        if (d(i) == 0.0) d(i) = tiny;
        const double f = dl(i) / d(i);
        dl(i) = f;
        d(i + 1) -= f * du(i);
        pivot[i] = 0;
      } else {
        const double f = d(i) / dl(i);
        d(i) = dl(i);
        dl(i) = f;
        const double tmp = du(i);
        du(i) = d(i + 1);
        d(i + 1) = tmp - f * d(i + 1);
        if (i + 2 < n) {
          du2(i) = du(i + 1);
          du(i + 1) = -f * du(i + 1);
        }
        pivot[i] = 1;
      }
      if (std::abs(d(i)) < tiny) d(i) = d(i) < 0 ? -tiny : tiny;
    }
    if (n > 0 && std::abs(d(n - 1)) < tiny) d(n - 1) = tiny;
  }

  void solve(VecR& b) const {
    const Index n = d.size();
    for (Index i = 0; i + 1 < n; ++i) {
      if (pivot[i] == 0) {
        b(i + 1) -= dl(i) * b(i);
      } else {
        const double t = b(i);
        b(i) = b(i + 1);
        b(i + 1) = t - dl(i) * b(i);
      }
    }
    b(n - 1) /= d(n - 1);
    if (n > 1) b(n - 2) = (b(n - 2) - du(n - 2) * b(n - 1)) / d(n - 2);
    for (Index i = n - 3; i >= 0; --i)
      b(i) = (b(i) - du(i) * b(i + 1) - du2(i) * b(i + 2)) / d(i);
  }
};

VecR tridiag_apply(const VecR& diag, const VecR& off, const VecR& x) {
  const Index n = diag.size();
  VecR y = diag.cwiseProduct(x);
  for (Index i = 0; i + 1 < n; ++i) {
    y(i) += off(i) * x(i + 1);
    y(i + 1) += off(i) * x(i);
  }
  return y;
}

// Eigenvectors of the symmetric tridiagonal (diag, off) for the given
// eigenvalues, reorthogonalized inside clusters.
MatR tridiag_vectors(const VecR& diag, const VecR& off, const std::vector<double>& lambdas) {
  const Index n = diag.size();
  const double norm = diag.cwiseAbs().maxCoeff() + 2.0 * (n > 1 ? off.cwiseAbs().maxCoeff() : 0.0);
  const double scale = std::max(norm, 1e-300);
  const double tiny = 1e-15 * scale;
  const double cluster = 1e-3 * scale;
  MatR out(n, Index(lambdas.size()));

  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double lam = lambdas[k];
    TridiagLU lu(diag, off, lam, tiny);
    VecR x(n);
    // fixed deterministic start vector
    for (Index i = 0; i < n; ++i) x(i) = 1.0 + 0.5 * std::sin(0.7 * double(i) + 0.3 * double(k));
    x.normalize();
    for (int it = 0; it < 6; ++it) {
      lu.solve(x);
      for (std::size_t j = 0; j < k; ++j)
        if (std::abs(lambdas[j] - lam) < cluster) x -= out.col(Index(j)).dot(x) * out.col(Index(j));
      const double nx = x.norm();
      if (!(nx > 0) || !std::isfinite(nx)) throw Error("eigensolver: inverse iteration breakdown");
      x /= nx;
      if (it >= 2 && (tridiag_apply(diag, off, x) - lam * x).norm() < 1e-13 * scale) break;
    }
    out.col(Index(k)) = x;
  }
  return out;
}

}  // namespace

PartialEigen hermitian_eigen(const MatC& A, const std::function<bool(double)>& want,
                             Index dense_limit) {
  PartialEigen out;
  const Index n = A.rows();
  if (n == 0) return out;

  if (n <= dense_limit) {
    Eigen::SelfAdjointEigenSolver<MatC> es(A);
    if (es.info() != Eigen::Success) throw Error("eigensolver: dense decomposition failed");
    out.values = es.eigenvalues();
    for (Index i = 0; i < n; ++i)
      if (want(out.values(i))) out.selected.push_back(i);
    out.vectors.resize(n, Index(out.selected.size()));
    for (std::size_t k = 0; k < out.selected.size(); ++k)
      out.vectors.col(Index(k)) = es.eigenvectors().col(out.selected[k]);
    return out;
  }

  Eigen::Tridiagonalization<MatC> tri(A);
  const VecR diag = tri.diagonal().real();
  const VecR off = tri.subDiagonal().real();

  Eigen::SelfAdjointEigenSolver<MatR> vals;
  vals.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  if (vals.info() != Eigen::Success) throw Error("eigensolver: tridiagonal QR failed");
  out.values = vals.eigenvalues();

  std::vector<double> lambdas;
  for (Index i = 0; i < n; ++i)
    if (want(out.values(i))) {
      out.selected.push_back(i);
      lambdas.push_back(out.values(i));
    }
  if (lambdas.empty()) {
    out.vectors.resize(n, 0);
    return out;
  }
  const MatR y = tridiag_vectors(diag, off, lambdas);
  out.vectors = tri.matrixQ() * y.cast<cplx>();
  return out;
}

}  // namespace mcm
