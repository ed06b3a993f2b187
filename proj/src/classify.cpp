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

#include "qmt/classify.hpp"

#include <algorithm>
#include <cmath>

namespace qmt {
namespace {

constexpr const char* kModule = "classify";

void require_instrument(const Instrument& inst) {
  try {
    require_valid(inst);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidInstrument, kModule, e.what());
  }
}

ComplexMatrix dual_apply(const Instrument& inst, std::size_t i,
                         const ComplexMatrix& y) {
  ComplexMatrix out = ComplexMatrix::Zero(inst.dim(), inst.dim());
  for (const auto& k : inst.kraus(i)) out.noalias() += k.adjoint() * y * k;
  return out;
}

bool sharp_effects(const Instrument& inst, double tol) {
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const ComplexMatrix& e = inst.effect(i);
    if (hermitian_residual(e) > tol) return false;
    if ((e * e - e).norm() > tol) return false;
    for (std::size_t j = 0; j < i; ++j) {
      if ((e * inst.effect(j)).norm() > tol) return false;
    }
  }
  return true;
}

bool projective_updates(const Instrument& inst, double tol) {
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const ComplexMatrix& e = inst.effect(i);
    const ComplexMatrix lueders = kron(e.conjugate(), e);
    if ((inst.superoperator(i) - lueders).norm() > tol) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(Taxon t) {
  switch (t) {
    case Taxon::Projective: return "P";
    case Taxon::SharpRepeatableNonProj: return "SRPbar";
    case Taxon::SharpNonRepeatable: return "SRbar";
    case Taxon::Unsharp: return "Unsharp";
  }
  return "?";
}

bool is_sharp(const Instrument& inst, double tol) {
  require_instrument(inst);
  return sharp_effects(inst, tol);
}

bool is_projective(const Instrument& inst, double tol) {
  require_instrument(inst);
  return sharp_effects(inst, tol) && projective_updates(inst, tol);
}

double repeatability_defect(const Instrument& inst) {
  double worst = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const ComplexMatrix& e = inst.effect(i);
    worst = std::max(worst, (dual_apply(inst, i, e) - e).norm());
  }
  return worst;
}

bool is_repeatable(const Instrument& inst, double tol) {
  require_instrument(inst);
  return repeatability_defect(inst) <= tol;
}

double repeatability_residual_on_basis_states(const Instrument& inst) {
  const Index d = inst.dim();
  std::vector<ComplexVector> states;
  for (Index i = 0; i < d; ++i) states.push_back(ComplexVector::Unit(d, i));
  const double s = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      ComplexVector plus = ComplexVector::Zero(d);
      plus(i) = s;
      plus(j) = s;
      ComplexVector iplus = ComplexVector::Zero(d);
      iplus(i) = s;
      iplus(j) = cplx(0.0, s);
      states.push_back(plus);
      states.push_back(iplus);
    }
  }
  double worst = 0.0;
  for (const auto& psi : states) {
    const ComplexMatrix rho = psi * psi.adjoint();
    for (std::size_t x = 0; x < inst.size(); ++x) {
      const ComplexMatrix once = inst.apply(x, rho);
      const double p1 = once.trace().real();
      const double p2 = inst.apply(x, once).trace().real();
      worst = std::max(worst, std::abs(p2 - p1));
    }
  }
  return worst;
}

Invasiveness invasiveness(const Instrument& inst, const DensityOperator* rho,
                          double tol) {
  const Index d = inst.dim();
  ComplexMatrix total = ComplexMatrix::Zero(d * d, d * d);
  for (std::size_t i = 0; i < inst.size(); ++i) total += inst.superoperator(i);
  Invasiveness out;
  out.global_noninvasive =
      (total - ComplexMatrix::Identity(d * d, d * d)).norm() <= tol;
  if (rho != nullptr) {
    require_same_dim(d, rho->dim(), kModule, "invasiveness");
    ComplexMatrix image = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < inst.size(); ++i) {
      image += inst.apply(i, rho->matrix());
    }
    out.state_noninvasive = (image - rho->matrix()).norm() <= tol;
  }
  return out;
}

ClassLabel classify_label(const Instrument& inst, double tol) {
  require_instrument(inst);
  ClassLabel label;
  label.sharp = sharp_effects(inst, tol);
  label.repeatable = repeatability_defect(inst) <= tol;
  label.projective = label.sharp && projective_updates(inst, tol);
  label.invasive = !invasiveness(inst, nullptr, tol).global_noninvasive;
  if (label.projective) {
    label.taxon = Taxon::Projective;
  } else if (label.sharp && label.repeatable) {
    label.taxon = Taxon::SharpRepeatableNonProj;
  } else if (label.sharp) {
    label.taxon = Taxon::SharpNonRepeatable;
  } else {
    label.taxon = Taxon::Unsharp;
  }
  return label;
}

}  // namespace qmt
