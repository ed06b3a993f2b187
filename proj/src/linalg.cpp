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

#include "qmt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qmt {
namespace {

constexpr const char* kModule = "linalg";

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, kModule, msg);
}

void require_square_finite(const ComplexMatrix& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    fail(ErrorCode::InvalidValue,
         std::string(what) + ": matrix must be square with dim >= 1");
  }
  if (!all_finite(m)) {
    fail(ErrorCode::InvalidValue, std::string(what) + ": non-finite entry");
  }
}

}  // namespace

double frobenius(const ComplexMatrix& m) { return m.norm(); }

bool all_finite(const ComplexMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

void require_same_dim(Index a, Index b, const char* module, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch, module,
                std::string(what) + ": dimension " + std::to_string(a) +
                    " does not match " + std::to_string(b));
  }
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    fail(ErrorCode::DimensionMismatch, "commutator: operand shapes differ");
  }
  ComplexMatrix ab = a * b;
  ComplexMatrix ba = b * a;
  return ab - ba;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector vec(const ComplexMatrix& m) {
  ComplexVector v(m.size());
  // Eigen's default storage is column-major, which is exactly column stacking.
  std::copy(m.data(), m.data() + m.size(), v.data());
  return v;
}

ComplexMatrix unvec(const ComplexVector& v, Index dim) {
  if (v.size() != dim * dim) {
    fail(ErrorCode::DimensionMismatch, "unvec: length is not dim^2");
  }
  ComplexMatrix m(dim, dim);
  std::copy(v.data(), v.data() + v.size(), m.data());
  return m;
}

double hermitian_residual(const ComplexMatrix& m) {
  return (m - m.adjoint()).norm();
}

double min_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    fail(ErrorCode::NumericalFailure, "min_eigenvalue: eigen-solver failed");
  }
  return es.eigenvalues()(0);
}

bool is_positive_semidefinite(const ComplexMatrix& m, double tol) {
  require_square_finite(m, "is_positive_semidefinite");
  if (hermitian_residual(m) > kDefaultTol) {
    fail(ErrorCode::NotSelfAdjoint, "is_positive_semidefinite: input is not "
                                    "self-adjoint");
  }
  return min_eigenvalue(m) >= -tol;
}

SelfAdjointOperator SelfAdjointOperator::from(ComplexMatrix m,
                                              const Tolerances& tol) {
  require_square_finite(m, "SelfAdjointOperator");
  const double r = hermitian_residual(m);
  if (r > tol.hermitian) {
    throw Error(ErrorCode::NotSelfAdjoint, kModule,
                "SelfAdjointOperator: ||M - M^dagger||_F = " +
                    std::to_string(r) + " exceeds tolerance");
  }
  return SelfAdjointOperator(std::move(m));
}

Projection Projection::from(ComplexMatrix m, const Tolerances& tol) {
  require_square_finite(m, "Projection");
  if (hermitian_residual(m) > tol.hermitian) {
    throw Error(ErrorCode::NotSelfAdjoint, kModule,
                "Projection: matrix is not self-adjoint");
  }
  const double r = (m * m - m).norm();
  if (r > tol.idempotent) {
    fail(ErrorCode::InvalidValue,
         "Projection: ||P^2 - P||_F = " + std::to_string(r) +
             " exceeds tolerance");
  }
  return Projection(std::move(m));
}

Index Projection::rank() const {
  return static_cast<Index>(std::lround(m_.trace().real()));
}

StateVector StateVector::from(ComplexVector v, const Tolerances& tol) {
  if (v.size() < 1) fail(ErrorCode::InvalidValue, "StateVector: empty");
  if (!all_finite(v)) fail(ErrorCode::InvalidValue, "StateVector: non-finite");
  const double n = v.norm();
  if (std::abs(n - 1.0) > tol.norm) {
    fail(ErrorCode::InvalidValue,
         "StateVector: norm " + std::to_string(n) + " is not 1");
  }
  return StateVector(std::move(v));
}

DensityOperator DensityOperator::from(ComplexMatrix m, const Tolerances& tol) {
  require_square_finite(m, "DensityOperator");
  if (hermitian_residual(m) > tol.hermitian) {
    throw Error(ErrorCode::NotSelfAdjoint, kModule,
                "DensityOperator: matrix is not self-adjoint");
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > tol.trace) {
    fail(ErrorCode::InvalidValue,
         "DensityOperator: trace " + std::to_string(tr) + " is not 1");
  }
  const double lo = min_eigenvalue(m);
  if (lo < -tol.psd) {
    fail(ErrorCode::InvalidValue, "DensityOperator: negative eigenvalue " +
                                      std::to_string(lo));
  }
  return DensityOperator(std::move(m));
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
  const auto& v = psi.amplitudes();
  return DensityOperator(v * v.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(Index dim) {
  if (dim < 1) fail(ErrorCode::InvalidValue, "maximally_mixed: dim < 1");
  return DensityOperator(ComplexMatrix::Identity(dim, dim) /
                         static_cast<double>(dim));
}

SpectralDecomposition SpectralDecomposition::from(
    std::vector<double> outcomes, std::vector<Projection> projections,
    double tol) {
  if (outcomes.empty() || outcomes.size() != projections.size()) {
    fail(ErrorCode::InvalidValue,
         "SpectralDecomposition: outcomes and projections must be nonempty "
         "and of equal length");
  }
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!std::isfinite(outcomes[i])) {
      fail(ErrorCode::InvalidValue, "SpectralDecomposition: non-finite outcome");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (outcomes[i] == outcomes[j]) {
        fail(ErrorCode::InvalidValue,
             "SpectralDecomposition: duplicate outcome " +
                 std::to_string(outcomes[i]));
      }
    }
  }
  const Index d = projections.front().dim();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < projections.size(); ++i) {
    require_same_dim(projections[i].dim(), d, kModule, "SpectralDecomposition");
    sum += projections[i].matrix();
    for (std::size_t j = 0; j < i; ++j) {
      if ((projections[i].matrix() * projections[j].matrix()).norm() > tol) {
        fail(ErrorCode::InvalidValue,
             "SpectralDecomposition: projections " + std::to_string(j) +
                 " and " + std::to_string(i) + " are not orthogonal");
      }
    }
  }
  if ((sum - ComplexMatrix::Identity(d, d)).norm() > tol) {
    fail(ErrorCode::InvalidValue,
         "SpectralDecomposition: projections do not sum to the identity");
  }
  return SpectralDecomposition(std::move(outcomes), std::move(projections));
}

ComplexMatrix SpectralDecomposition::observable() const {
  ComplexMatrix a = ComplexMatrix::Zero(dim(), dim());
  for (std::size_t i = 0; i < size(); ++i) {
    a += outcomes_[i] * projections_[i].matrix();
  }
  return a;
}

SpectralDecomposition spectral_decompose(const SelfAdjointOperator& a,
                                         double cluster_tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix());
  if (es.info() != Eigen::Success) {
    fail(ErrorCode::NumericalFailure, "spectral_decompose: eigen-solver failed");
  }
  const auto& values = es.eigenvalues();
  const auto& vectors = es.eigenvectors();
  const Index d = a.dim();

  std::vector<double> outcomes;
  std::vector<Projection> projections;
  Index start = 0;
  while (start < d) {
    Index end = start + 1;
    while (end < d && values(end) - values(end - 1) <= cluster_tol) ++end;
    const Index k = end - start;
    const auto block = vectors.middleCols(start, k);
    outcomes.push_back(values.segment(start, k).mean());
    projections.push_back(Projection::from(block * block.adjoint()));
    start = end;
  }
  return SpectralDecomposition::from(std::move(outcomes),
                                     std::move(projections));
}

Projection projection_meet(const Projection& p, const Projection& q) {
  require_same_dim(p.dim(), q.dim(), kModule, "projection_meet");
  const Index d = p.dim();

  // Kernel vectors of both projections; the meet is the orthogonal
  // complement of their span.
  std::vector<ComplexVector> kernel;
  for (const Projection* e : {&p, &q}) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(e->matrix());
    if (es.info() != Eigen::Success) {
      fail(ErrorCode::NumericalFailure, "projection_meet: eigen-solver failed");
    }
    for (Index i = 0; i < d; ++i) {
      if (es.eigenvalues()(i) < 0.5) kernel.push_back(es.eigenvectors().col(i));
    }
  }
  ComplexMatrix identity = ComplexMatrix::Identity(d, d);
  if (kernel.empty()) return Projection::from(identity);

  ComplexMatrix n(d, static_cast<Index>(kernel.size()));
  for (std::size_t j = 0; j < kernel.size(); ++j) {
    n.col(static_cast<Index>(j)) = kernel[j];
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(n, Eigen::ComputeThinU);
  Index rank = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > kDefaultTol) ++rank;
  }
  const auto basis = svd.matrixU().leftCols(rank);
  ComplexMatrix meet = identity - basis * basis.adjoint();
  return Projection::from(std::move(meet));
}

double expectation(const SelfAdjointOperator& a, const DensityOperator& rho) {
  require_same_dim(a.dim(), rho.dim(), kModule, "expectation");
  return (rho.matrix() * a.matrix()).trace().real();
}

double std_dev(const SelfAdjointOperator& a, const DensityOperator& rho) {
  require_same_dim(a.dim(), rho.dim(), kModule, "std_dev");
  const double mean = expectation(a, rho);
  const double second =
      (rho.matrix() * a.matrix() * a.matrix()).trace().real();
  return std::sqrt(std::max(0.0, second - mean * mean));
}

}  // namespace qmt
