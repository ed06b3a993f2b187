// Copyright 2026 The qmt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmt/unitary_chart.hpp"

#include <cmath>
#include <string>

namespace qmt {

ComplexMatrix unitary_from_params(Index dim, std::span<const double> params) {
  if (dim < 1 || static_cast<Index>(params.size()) != dim * dim) {
    throw Error(ErrorCode::BadParameterLength, "search",
                "unitary_from_params: expected " + std::to_string(dim * dim) +
                    " parameters, got " + std::to_string(params.size()));
  }
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  std::size_t p = 0;
  for (Index j = 0; j < dim; ++j) h(j, j) = params[p++];
  for (Index j = 0; j < dim; ++j) {
    for (Index k = j + 1; k < dim; ++k) {
      h(j, k) = cplx(params[p], params[p + 1]);
      h(k, j) = std::conj(h(j, k));
      p += 2;
    }
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "search",
                "unitary_from_params: eigen-solver failed");
  }
  ComplexVector phases(dim);
  for (Index j = 0; j < dim; ++j) {
    phases(j) = std::polar(1.0, es.eigenvalues()(j));
  }
  const ComplexMatrix& v = es.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

StateVector pure_state_from_params(Index dim, std::span<const double> params) {
  ComplexVector psi = unitary_from_params(dim, params).col(0);
  psi /= psi.norm();
  return StateVector::from(std::move(psi));
}

}  // namespace qmt
