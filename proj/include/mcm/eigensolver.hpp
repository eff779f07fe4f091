#pragma once

#include <functional>
#include <vector>

#include "mcm/types.hpp"

namespace mcm {

// All eigenvalues of a Hermitian matrix, eigenvectors only for the selected ones.
struct PartialEigen {
  VecR values;                  // ascending
  std::vector<Index> selected;  // indices into values
  MatC vectors;                 // one column per selected index
};

// Above `dense_limit` the matrix is reduced to real tridiagonal form, all
// eigenvalues come from the tridiagonal, and the selected eigenvectors from
// inverse iteration followed by the Householder back-transform.
PartialEigen hermitian_eigen(const MatC& A, const std::function<bool(double)>& want,
                             Index dense_limit = 1500);

}  // namespace mcm
