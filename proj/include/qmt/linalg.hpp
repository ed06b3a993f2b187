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

#pragma once

// Dense complex matrix foundation. Every operator in the library is a dense
// dim x dim Eigen matrix; the strong types below only exist after their
// invariants have been checked, and are immutable afterwards.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qmt/error.hpp"

namespace qmt {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kClusterTol = 1e-8;

/// Per-invariant tolerances. All default to kDefaultTol.
struct Tolerances {
  double hermitian = kDefaultTol;
  double idempotent = kDefaultTol;
  double psd = kDefaultTol;
  double trace = kDefaultTol;
  double norm = kDefaultTol;
};

double frobenius(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column-stacking vectorisation: columns of `m` are stacked left to right.
ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, Index dim);

/// ||m - m^dagger||_F.
double hermitian_residual(const ComplexMatrix& m);

/// Smallest eigenvalue of a self-adjoint matrix (lower triangle is used).
double min_eigenvalue(const ComplexMatrix& m);

/// Throws NotSelfAdjoint when `m` is not self-adjoint within the default
/// hermitian tolerance.
bool is_positive_semidefinite(const ComplexMatrix& m, double tol = kDefaultTol);

class SelfAdjointOperator {
 public:
  static SelfAdjointOperator from(ComplexMatrix m, const Tolerances& tol = {});

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

 private:
  explicit SelfAdjointOperator(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

class Projection {
 public:
  static Projection from(ComplexMatrix m, const Tolerances& tol = {});

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  Index rank() const;

 private:
  explicit Projection(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

class StateVector {
 public:
  static StateVector from(ComplexVector v, const Tolerances& tol = {});

  const ComplexVector& amplitudes() const noexcept { return v_; }
  Index dim() const noexcept { return v_.size(); }

 private:
  explicit StateVector(ComplexVector v) : v_(std::move(v)) {}
  ComplexVector v_;
};

class DensityOperator {
 public:
  static DensityOperator from(ComplexMatrix m, const Tolerances& tol = {});
  static DensityOperator pure(const StateVector& psi);
  static DensityOperator maximally_mixed(Index dim);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

 private:
  explicit DensityOperator(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Outcomes x_1 < ... < x_n with mutually orthogonal projections summing to
/// the identity.
class SpectralDecomposition {
 public:
  static SpectralDecomposition from(std::vector<double> outcomes,
                                    std::vector<Projection> projections,
                                    double tol = kDefaultTol);

  const std::vector<double>& outcomes() const noexcept { return outcomes_; }
  const std::vector<Projection>& projections() const noexcept {
    return projections_;
  }
  std::size_t size() const noexcept { return outcomes_.size(); }
  Index dim() const { return projections_.front().dim(); }

  /// sum_j x_j E(x_j)
  ComplexMatrix observable() const;

 private:
  SpectralDecomposition(std::vector<double> outcomes,
                        std::vector<Projection> projections)
      : outcomes_(std::move(outcomes)), projections_(std::move(projections)) {}
  std::vector<double> outcomes_;
  std::vector<Projection> projections_;
};

/// Eigenvalues closer than `cluster_tol` (consecutive gaps) share one
/// outcome, labelled by their arithmetic mean. Outcomes are ascending.
SpectralDecomposition spectral_decompose(const SelfAdjointOperator& a,
                                         double cluster_tol = kClusterTol);

/// Projection onto range(p) intersected with range(q).
Projection projection_meet(const Projection& p, const Projection& q);

/// Re Tr[rho a]
double expectation(const SelfAdjointOperator& a, const DensityOperator& rho);

double std_dev(const SelfAdjointOperator& a, const DensityOperator& rho);

void require_same_dim(Index a, Index b, const char* module, const char* what);

}  // namespace qmt
