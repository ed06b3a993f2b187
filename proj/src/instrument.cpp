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

#include "qmt/instrument.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace qmt {
namespace {

constexpr const char* kModule = "instrument";

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, kModule, msg);
}

std::string outcome_text(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

Instrument::Instrument(std::vector<double> outcomes,
                       std::vector<std::vector<ComplexMatrix>> kraus)
    : outcomes_(std::move(outcomes)), kraus_(std::move(kraus)) {
  if (outcomes_.empty()) fail(ErrorCode::InvalidInstrument, "no outcomes");
  if (outcomes_.size() != kraus_.size()) {
    fail(ErrorCode::InvalidInstrument,
         "outcome count does not match Kraus set count");
  }
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (!std::isfinite(outcomes_[i])) {
      fail(ErrorCode::InvalidInstrument, "non-finite outcome label");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (outcomes_[i] == outcomes_[j]) {
        fail(ErrorCode::InvalidInstrument,
             "duplicate outcome " + outcome_text(outcomes_[i]));
      }
    }
    if (kraus_[i].empty()) {
      fail(ErrorCode::InvalidInstrument,
           "outcome " + outcome_text(outcomes_[i]) + " has no Kraus operators");
    }
  }
  dim_ = kraus_.front().front().rows();
  if (dim_ < 1) fail(ErrorCode::InvalidInstrument, "dimension must be >= 1");
  for (std::size_t i = 0; i < kraus_.size(); ++i) {
    for (const auto& k : kraus_[i]) {
      if (k.rows() != dim_ || k.cols() != dim_) {
        throw Error(ErrorCode::DimensionMismatch, kModule,
                    "Kraus operator of outcome " + outcome_text(outcomes_[i]) +
                        " is not " + std::to_string(dim_) + "x" +
                        std::to_string(dim_));
      }
      if (!all_finite(k)) {
        fail(ErrorCode::InvalidInstrument, "non-finite Kraus entry");
      }
    }
  }

  effects_.reserve(size());
  superops_.reserve(size());
  for (const auto& set : kraus_) {
    ComplexMatrix e = ComplexMatrix::Zero(dim_, dim_);
    ComplexMatrix s = ComplexMatrix::Zero(dim_ * dim_, dim_ * dim_);
    for (const auto& k : set) {
      e.noalias() += k.adjoint() * k;
      s += kron(k.conjugate(), k);
    }
    effects_.push_back(std::move(e));
    superops_.push_back(std::move(s));
  }
}

std::size_t Instrument::index_of(double x) const {
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (outcomes_[i] == x) return i;
  }
  fail(ErrorCode::UnknownOutcome, "outcome " + outcome_text(x) +
                                      " is not in the instrument's outcome set");
}

ComplexMatrix Instrument::apply(std::size_t index,
                                const ComplexMatrix& rho) const {
  ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& k : kraus_.at(index)) {
    out.noalias() += k * rho * k.adjoint();
  }
  return out;
}

InstrumentDiagnostics validate(const Instrument& inst, double tol) {
  InstrumentDiagnostics diag;
  const Index d = inst.dim();
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    total += inst.effect(i);
    const ComplexMatrix c = choi_matrix(inst, i);
    diag.choi_min_eigenvalues.push_back(min_eigenvalue(c));
  }
  diag.trace_residual = (total - ComplexMatrix::Identity(d, d)).norm();
  diag.passed = diag.trace_residual <= tol;
  for (double m : diag.choi_min_eigenvalues) {
    if (m < -tol) diag.passed = false;
  }
  return diag;
}

void require_valid(const Instrument& inst, double tol) {
  const auto diag = validate(inst, tol);
  if (!diag.passed) {
    fail(ErrorCode::InvalidInstrument,
         "instrument is not trace-preserving: ||sum K^dagger K - I||_F = " +
             std::to_string(diag.trace_residual));
  }
}

Povm povm(const Instrument& inst) {
  const Index d = inst.dim();
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  Povm out;
  out.outcomes = inst.outcomes();
  for (std::size_t i = 0; i < inst.size(); ++i) {
    total += inst.effect(i);
    // Sum of K^dagger K is Hermitian up to rounding.
    out.effects.push_back(SelfAdjointOperator::from(inst.effect(i)));
  }
  const double r = (total - ComplexMatrix::Identity(d, d)).norm();
  if (r > kDefaultTol) {
    fail(ErrorCode::InvalidInstrument,
         "effects do not sum to the identity (residual " + std::to_string(r) +
             ")");
  }
  return out;
}

ComplexMatrix apply_outcome(const Instrument& inst, double x,
                            const DensityOperator& rho) {
  require_same_dim(inst.dim(), rho.dim(), kModule, "apply_outcome");
  return inst.apply(inst.index_of(x), rho.matrix());
}

double outcome_probability(const Instrument& inst, double x,
                           const DensityOperator& rho) {
  require_same_dim(inst.dim(), rho.dim(), kModule, "outcome_probability");
  const std::size_t i = inst.index_of(x);
  return (inst.effect(i) * rho.matrix()).trace().real();
}

DensityOperator state_update(const Instrument& inst, double x,
                             const DensityOperator& rho) {
  const ComplexMatrix out = apply_outcome(inst, x, rho);
  const double p = out.trace().real();
  if (!(p > kProbabilityFloor)) {
    fail(ErrorCode::ZeroProbabilityConditioning,
         "outcome " + outcome_text(x) + " has probability " +
             std::to_string(p) + ", cannot condition on it");
  }
  ComplexMatrix updated = out / p;
  updated = 0.5 * (updated + updated.adjoint()).eval();
  return DensityOperator::from(std::move(updated));
}

double sequential_joint(std::span<const MeasurementStep> steps,
                        const DensityOperator& rho) {
  ComplexMatrix state = rho.matrix();
  for (const auto& step : steps) {
    require_same_dim(step.instrument->dim(), rho.dim(), kModule,
                     "sequential_joint");
    state = step.instrument->apply(step.instrument->index_of(step.outcome),
                                   state);
  }
  return state.trace().real();
}

double conditional_probability(const Instrument& a, double x,
                               const Instrument& b, double y,
                               const DensityOperator& rho) {
  const double pa = outcome_probability(a, x, rho);
  if (!(pa > kProbabilityFloor)) {
    fail(ErrorCode::ZeroProbabilityConditioning,
         "conditioning outcome " + outcome_text(x) + " has probability " +
             std::to_string(pa));
  }
  const MeasurementStep steps[] = {{&a, x}, {&b, y}};
  return sequential_joint(steps, rho) / pa;
}

const ComplexMatrix& superoperator_matrix(const Instrument& inst, double x) {
  return inst.superoperator(inst.index_of(x));
}

ComplexMatrix choi_matrix(const Instrument& inst, std::size_t index) {
  const Index d = inst.dim();
  ComplexMatrix c = ComplexMatrix::Zero(d * d, d * d);
  for (const auto& k : inst.kraus(index)) {
    const ComplexVector v = vec(k);
    c.noalias() += v * v.adjoint();
  }
  return c;
}

Instrument canonicalize(const Instrument& inst) {
  const Index d = inst.dim();
  std::vector<std::vector<ComplexMatrix>> kraus;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(choi_matrix(inst, i));
    if (es.info() != Eigen::Success) {
      fail(ErrorCode::NumericalFailure, "canonicalize: eigen-solver failed");
    }
    std::vector<ComplexMatrix> set;
    for (Index j = d * d - 1; j >= 0; --j) {
      const double lambda = es.eigenvalues()(j);
      if (lambda <= 1e-12) break;
      set.push_back(std::sqrt(lambda) * unvec(es.eigenvectors().col(j), d));
    }
    if (set.empty()) set.push_back(ComplexMatrix::Zero(d, d));
    kraus.push_back(std::move(set));
  }
  return Instrument(inst.outcomes(), std::move(kraus));
}

}  // namespace qmt
