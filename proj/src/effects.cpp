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

#include "qmt/effects.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qmt/linalg.hpp"

namespace qmt {
namespace {

constexpr const char* kModule = "effects";

void require_pair(const Instrument& a, const Instrument& b,
                  const DensityOperator& rho, const char* what) {
  require_same_dim(a.dim(), b.dim(), kModule, what);
  require_same_dim(a.dim(), rho.dim(), kModule, what);
}

double trace_with(const ComplexMatrix& effect, const ComplexMatrix& sigma) {
  // Tr[effect sigma] without forming the product.
  return (effect.transpose().cwiseProduct(sigma)).sum().real();
}

// Index of the "yes" (larger) and "no" (smaller) outcome of a binary
// instrument.
std::pair<std::size_t, std::size_t> yes_no(const Instrument& inst) {
  if (inst.size() != 2) {
    throw Error(ErrorCode::NotBinaryOutcomes, kModule,
                "QQ analysis needs two outcomes, instrument has " +
                    std::to_string(inst.size()));
  }
  return inst.outcomes()[0] > inst.outcomes()[1]
             ? std::pair<std::size_t, std::size_t>{0, 1}
             : std::pair<std::size_t, std::size_t>{1, 0};
}

// Odometer over outcome tuples, last observable fastest.
bool next_tuple(std::vector<std::size_t>& tuple,
                std::span<const SpectralDecomposition> observables) {
  for (std::size_t k = tuple.size(); k-- > 0;) {
    if (++tuple[k] < observables[k].size()) return true;
    tuple[k] = 0;
  }
  return false;
}

}  // namespace

JointTable joint_table(const Instrument& first, const Instrument& second,
                       const DensityOperator& rho) {
  require_pair(first, second, rho, "joint_table");
  JointTable p(first.size(), std::vector<double>(second.size(), 0.0));
  for (std::size_t x = 0; x < first.size(); ++x) {
    const ComplexMatrix sigma = first.apply(x, rho.matrix());
    for (std::size_t y = 0; y < second.size(); ++y) {
      p[x][y] = trace_with(second.effect(y), sigma);
    }
  }
  return p;
}

double qoe_deviation(const Instrument& a, const Instrument& b,
                     const DensityOperator& rho) {
  const JointTable ab = joint_table(a, b, rho);
  const JointTable ba = joint_table(b, a, rho);
  double worst = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) {
    for (std::size_t y = 0; y < b.size(); ++y) {
      worst = std::max(worst, std::abs(ab[x][y] - ba[y][x]));
    }
  }
  return worst;
}

QoeReport qoe_report(const Instrument& a, const Instrument& b,
                     const DensityOperator& rho, double tol) {
  require_pair(a, b, rho, "qoe_report");
  const Index d = a.dim();
  const ComplexVector v = vec(rho.matrix());
  QoeReport report;
  for (std::size_t x = 0; x < a.size(); ++x) {
    for (std::size_t y = 0; y < b.size(); ++y) {
      QoeEntry e;
      e.x = a.outcomes()[x];
      e.y = b.outcomes()[y];
      const MeasurementStep ab[] = {{&a, e.x}, {&b, e.y}};
      const MeasurementStep ba[] = {{&b, e.y}, {&a, e.x}};
      e.p_ab = sequential_joint(ab, rho);
      e.p_ba = sequential_joint(ba, rho);
      e.deviation = std::abs(e.p_ab - e.p_ba);

      const ComplexVector w =
          a.superoperator(x) * (b.superoperator(y) * v) -
          b.superoperator(y) * (a.superoperator(x) * v);
      cplx tr = 0.0;
      for (Index i = 0; i < d; ++i) tr += w(i * d + i);
      e.trace_commutator = std::abs(tr);

      report.max_abs_deviation = std::max(report.max_abs_deviation, e.deviation);
      report.entries.push_back(e);
    }
  }
  report.shows_qoe = report.max_abs_deviation > tol;
  return report;
}

double u_commutator_norm(const Instrument& a, double x, const Instrument& b,
                         double y) {
  require_same_dim(a.dim(), b.dim(), kModule, "u_commutator_norm");
  return commutator(superoperator_matrix(a, x), superoperator_matrix(b, y))
      .norm();
}

double max_u_commutator_norm(const Instrument& a, const Instrument& b) {
  double worst = 0.0;
  for (double x : a.outcomes()) {
    for (double y : b.outcomes()) {
      worst = std::max(worst, u_commutator_norm(a, x, b, y));
    }
  }
  return worst;
}

double o_commutator_norm(const Instrument& a, const Instrument& b) {
  require_same_dim(a.dim(), b.dim(), kModule, "o_commutator_norm");
  double worst = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) {
    for (std::size_t y = 0; y < b.size(); ++y) {
      worst = std::max(worst, commutator(a.effect(x), b.effect(y)).norm());
    }
  }
  return worst;
}

RreBranches rre_branches(const Instrument& a, const Instrument& b,
                         const DensityOperator& rho) {
  require_pair(a, b, rho, "rre_report");
  RreBranches r;
  for (std::size_t x = 0; x < a.size(); ++x) {
    const ComplexMatrix sa = a.apply(x, rho.matrix());
    const double pa = sa.trace().real();
    r.aa.push_back(std::abs(trace_with(a.effect(x), sa) - pa));
    for (std::size_t y = 0; y < b.size(); ++y) {
      const ComplexMatrix sab = b.apply(y, sa);
      const double pab = sab.trace().real();
      r.aba.push_back(std::abs(trace_with(a.effect(x), sab) - pab));
    }
  }
  for (std::size_t y = 0; y < b.size(); ++y) {
    const ComplexMatrix sb = b.apply(y, rho.matrix());
    for (std::size_t x = 0; x < a.size(); ++x) {
      const ComplexMatrix sba = a.apply(x, sb);
      const double pba = sba.trace().real();
      r.bab.push_back(std::abs(trace_with(b.effect(y), sba) - pba));
    }
  }
  return r;
}

RreReport rre_report(const Instrument& a, const Instrument& b,
                     const DensityOperator& rho) {
  const RreBranches br = rre_branches(a, b, rho);
  RreReport r;
  r.aa_residual = *std::max_element(br.aa.begin(), br.aa.end());
  r.aba_residual = *std::max_element(br.aba.begin(), br.aba.end());
  r.bab_residual = *std::max_element(br.bab.begin(), br.bab.end());
  return r;
}

QqReport qq_value(const Instrument& a, const Instrument& b,
                  const DensityOperator& rho) {
  const auto [ay, an] = yes_no(a);
  const auto [by, bn] = yes_no(b);
  const JointTable ab = joint_table(a, b, rho);  // ab[x][y]: A first
  const JointTable ba = joint_table(b, a, rho);  // ba[y][x]: B first
  QqReport r;
  r.q_y = ba[by][ay] - ab[ay][by];
  r.q_n = ba[bn][an] - ab[an][bn];
  r.q = (ba[by][ay] + ba[bn][an]) - (ab[ay][by] + ab[an][bn]);
  r.q_alt = (ba[by][an] + ba[bn][ay]) - (ab[ay][bn] + ab[an][by]);
  return r;
}

double ftp_residual(const Instrument& a, const Instrument& b, double y,
                    const DensityOperator& rho) {
  require_pair(a, b, rho, "ftp_residual");
  const double pb = outcome_probability(b, y, rho);
  double total = 0.0;
  for (double x : a.outcomes()) {
    const double pa = outcome_probability(a, x, rho);
    if (pa > kProbabilityFloor) {
      total += pa * conditional_probability(a, x, b, y, rho);
    } else {
      const MeasurementStep steps[] = {{&a, x}, {&b, y}};
      total += sequential_joint(steps, rho);
    }
  }
  return pb - total;
}

double max_ftp_residual(const Instrument& a, const Instrument& b,
                        const DensityOperator& rho) {
  double worst = 0.0;
  for (double y : b.outcomes()) {
    worst = std::max(worst, std::abs(ftp_residual(a, b, y, rho)));
  }
  return worst;
}

JointExistence joint_existence(std::span<const SpectralDecomposition> observables,
                               const StateVector& psi, double tol) {
  if (observables.empty()) {
    throw Error(ErrorCode::InvalidValue, kModule,
                "joint_existence: no observables given");
  }
  for (const auto& obs : observables) {
    require_same_dim(obs.dim(), psi.dim(), kModule, "joint_existence");
  }
  const std::size_t n = observables.size();
  JointExistence out;
  std::vector<JointOutcome> joint;

  std::vector<std::size_t> tuple(n, 0);
  while (true) {
    // All n! orderings of the product E_{s1} ... E_{sn} psi.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    double lo = INFINITY;
    double hi = -INFINITY;
    do {
      ComplexVector v = psi.amplitudes();
      for (std::size_t k = n; k-- > 0;) {
        const std::size_t obs = order[k];
        v = observables[obs].projections()[tuple[obs]].matrix() * v;
      }
      const double p = v.squaredNorm();
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    } while (std::next_permutation(order.begin(), order.end()));

    Projection meet = observables[0].projections()[tuple[0]];
    for (std::size_t k = 1; k < n; ++k) {
      meet = projection_meet(meet, observables[k].projections()[tuple[k]]);
    }
    const double pm = (meet.matrix() * psi.amplitudes()).squaredNorm();
    lo = std::min(lo, pm);
    hi = std::max(hi, pm);
    out.max_discrepancy = std::max(out.max_discrepancy, hi - lo);

    JointOutcome jo;
    for (std::size_t k = 0; k < n; ++k) {
      jo.outcomes.push_back(observables[k].outcomes()[tuple[k]]);
    }
    jo.probability = pm;
    joint.push_back(std::move(jo));

    if (!next_tuple(tuple, observables)) break;
  }

  out.exists = out.max_discrepancy <= tol;
  if (out.exists) out.joint = std::move(joint);
  return out;
}

StateDependentCommutation state_dependent_commutation(
    const SelfAdjointOperator& a1, const SelfAdjointOperator& a2,
    const Instrument& i1, const Instrument& i2,
    const std::variant<StateVector, DensityOperator>& state) {
  const DensityOperator rho =
      std::holds_alternative<StateVector>(state)
          ? DensityOperator::pure(std::get<StateVector>(state))
          : std::get<DensityOperator>(state);
  require_same_dim(a1.dim(), a2.dim(), kModule, "state_dependent_commutation");
  require_same_dim(a1.dim(), rho.dim(), kModule, "state_dependent_commutation");
  require_pair(i1, i2, rho, "state_dependent_commutation");

  StateDependentCommutation out;
  const ComplexMatrix& r = rho.matrix();
  out.observable_commutator =
      std::abs((r * commutator(a1.matrix(), a2.matrix())).trace());

  for (std::size_t x = 0; x < i1.size(); ++x) {
    for (std::size_t y = 0; y < i2.size(); ++y) {
      const ComplexMatrix c = i1.apply(x, i2.apply(y, r)) -
                              i2.apply(y, i1.apply(x, r));
      out.update_commutator = std::max(out.update_commutator, c.norm());
    }
  }

  // ||C psi||^2 = Tr[C rho C^dagger] also covers mixed states.
  const auto s1 = spectral_decompose(a1);
  const auto s2 = spectral_decompose(a2);
  for (const auto& e1 : s1.projections()) {
    for (const auto& e2 : s2.projections()) {
      const ComplexMatrix c = commutator(e1.matrix(), e2.matrix());
      const double n2 = (c * r * c.adjoint()).trace().real();
      out.projection_commutator =
          std::max(out.projection_commutator, std::sqrt(std::max(0.0, n2)));
    }
  }
  return out;
}

RobertsonCheck robertson_check(const SelfAdjointOperator& a,
                               const SelfAdjointOperator& b,
                               const DensityOperator& rho) {
  require_same_dim(a.dim(), b.dim(), kModule, "robertson_check");
  require_same_dim(a.dim(), rho.dim(), kModule, "robertson_check");
  RobertsonCheck out;
  out.lhs = std_dev(a, rho) * std_dev(b, rho);
  out.rhs =
      std::abs((rho.matrix() * commutator(a.matrix(), b.matrix())).trace()) /
      2.0;
  out.holds = out.lhs >= out.rhs - 1e-10;
  return out;
}

std::string_view to_string(Diagnostic d) {
  switch (d) {
    case Diagnostic::QoeDeviation: return "qoe_deviation";
    case Diagnostic::AbaResidual: return "aba_residual";
    case Diagnostic::BabResidual: return "bab_residual";
    case Diagnostic::AaResidual: return "aa_residual";
    case Diagnostic::QqAbs: return "qq_abs";
    case Diagnostic::FtpAbs: return "ftp_abs";
    case Diagnostic::UCommNorm: return "u_comm_norm";
    case Diagnostic::OCommNorm: return "o_comm_norm";
  }
  return "?";
}

std::optional<Diagnostic> parse_diagnostic(std::string_view name) {
  struct Alias {
    std::string_view name;
    Diagnostic d;
  };
  static constexpr Alias kAliases[] = {
      {"qoe", Diagnostic::QoeDeviation},  {"qoe_deviation", Diagnostic::QoeDeviation},
      {"aba", Diagnostic::AbaResidual},   {"aba_residual", Diagnostic::AbaResidual},
      {"bab", Diagnostic::BabResidual},   {"bab_residual", Diagnostic::BabResidual},
      {"aa", Diagnostic::AaResidual},     {"aa_residual", Diagnostic::AaResidual},
      {"qq", Diagnostic::QqAbs},          {"qq_abs", Diagnostic::QqAbs},
      {"ftp", Diagnostic::FtpAbs},        {"ftp_abs", Diagnostic::FtpAbs},
      {"ucomm", Diagnostic::UCommNorm},   {"u_comm_norm", Diagnostic::UCommNorm},
      {"ocomm", Diagnostic::OCommNorm},   {"o_comm_norm", Diagnostic::OCommNorm},
  };
  for (const auto& alias : kAliases) {
    if (alias.name == name) return alias.d;
  }
  return std::nullopt;
}

double evaluate(Diagnostic d, const Instrument& a, const Instrument& b,
                const DensityOperator& rho) {
  switch (d) {
    case Diagnostic::QoeDeviation: return qoe_deviation(a, b, rho);
    case Diagnostic::AbaResidual: return rre_report(a, b, rho).aba_residual;
    case Diagnostic::BabResidual: return rre_report(a, b, rho).bab_residual;
    case Diagnostic::AaResidual: return rre_report(a, b, rho).aa_residual;
    case Diagnostic::QqAbs: return std::abs(qq_value(a, b, rho).q);
    case Diagnostic::FtpAbs: return max_ftp_residual(a, b, rho);
    case Diagnostic::UCommNorm: return max_u_commutator_norm(a, b);
    case Diagnostic::OCommNorm: return o_commutator_norm(a, b);
  }
  return 0.0;
}

}  // namespace qmt
