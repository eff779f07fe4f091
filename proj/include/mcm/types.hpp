#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>

namespace mcm {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

template <class Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatC = MatX<cplx>;
using VecC = VecX<cplx>;
using MatR = MatX<double>;
using VecR = VecX<double>;
using Index = Eigen::Index;

// Time-periodic operator H(t) = sum_m h^(m) exp(i m omega t).
template <class Scalar>
struct DrivenOperator {
  Index dim = 0;
  double omega = 2.0 * kPi;
  std::map<int, MatX<Scalar>> harmonics;

  MatX<Scalar> harmonic(int m) const {
    auto it = harmonics.find(m);
    if (it == harmonics.end()) return MatX<Scalar>::Zero(dim, dim);
    return it->second;
  }
  int max_harmonic() const {
    int r = 0;
    for (const auto& [m, h] : harmonics) r = std::max(r, std::abs(m));
    return r;
  }
};

using DrivenBdG = DrivenOperator<cplx>;

// H(t) as a dense matrix.
template <class Scalar>
MatC at_time(const DrivenOperator<Scalar>& op, double t) {
  MatC h = MatC::Zero(op.dim, op.dim);
  for (const auto& [m, hm] : op.harmonics)
    h += std::exp(kI * (double(m) * op.omega * t)) * hm.template cast<cplx>();
  return h;
}

// max over m of ||h^(-m) - h^(m)†||, the condition for H(t) Hermitian at all t.
template <class Scalar>
double hermiticity_residual(const DrivenOperator<Scalar>& op) {
  double r = 0.0;
  for (const auto& [m, hm] : op.harmonics)
    r = std::max(r, (op.harmonic(-m) - hm.adjoint()).cwiseAbs().maxCoeff());
  return r;
}

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mcm
