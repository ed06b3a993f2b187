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

#include "qmt/search.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "qmt/random.hpp"

namespace qmt {
namespace {

constexpr const char* kModule = "search";
constexpr double kInitialStep = 0.5;
constexpr double kCollapsedSimplex = 1e-10;
constexpr int kPolishSteps = 60;
constexpr double kPolishTighten = 2.0;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

using Objective = std::function<double(const std::vector<double>&)>;

struct Descent {
  std::vector<double> x;
  double f = 0.0;
  long iterations = 0;
};

// Nelder-Mead with dimension-adaptive coefficients. A collapsed simplex is
// rebuilt around the current best vertex, so the whole iteration budget is
// spent descending. Stops early once the penalty reaches zero.
Descent nelder_mead(const Objective& f, std::vector<double> x0, int max_iters) {
  const std::size_t n = x0.size();
  const double nd = static_cast<double>(n);
  const double alpha = 1.0;
  const double gamma = 1.0 + 2.0 / nd;
  const double rho = 0.75 - 1.0 / (2.0 * nd);
  const double sigma = 1.0 - 1.0 / nd;

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  auto build = [&](const std::vector<double>& base) {
    for (std::size_t i = 0; i <= n; ++i) {
      simplex[i] = base;
      if (i > 0) simplex[i][i - 1] += kInitialStep;
      values[i] = f(simplex[i]);
    }
  };
  build(x0);

  std::vector<std::size_t> order(n + 1);
  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return values[a] < values[b];
    });
  };

  long it = 0;
  std::vector<double> centroid(n), trial(n), trial2(n);
  while (it < max_iters) {
    sort_vertices();
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];
    if (values[best] == 0.0) break;
    ++it;

    double spread = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        spread = std::max(spread, std::abs(simplex[i][k] - simplex[best][k]));
      }
    }
    if (spread < kCollapsedSimplex) {
      const std::vector<double> keep = simplex[best];
      build(keep);
      continue;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[order[i]][k];
    }
    for (double& c : centroid) c /= nd;

    for (std::size_t k = 0; k < n; ++k) {
      trial[k] = centroid[k] + alpha * (centroid[k] - simplex[worst][k]);
    }
    const double fr = f(trial);
    if (fr < values[best]) {
      for (std::size_t k = 0; k < n; ++k) {
        trial2[k] = centroid[k] + gamma * (trial[k] - centroid[k]);
      }
      const double fe = f(trial2);
      if (fe < fr) {
        simplex[worst] = trial2;
        values[worst] = fe;
      } else {
        simplex[worst] = trial;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = trial;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    for (std::size_t k = 0; k < n; ++k) {
      trial2[k] = outside ? centroid[k] + rho * (trial[k] - centroid[k])
                          : centroid[k] + rho * (simplex[worst][k] - centroid[k]);
    }
    const double fc = f(trial2);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = trial2;
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= n; ++i) {
      const std::size_t v = order[i];
      for (std::size_t k = 0; k < n; ++k) {
        simplex[v][k] = simplex[best][k] + sigma * (simplex[v][k] - simplex[best][k]);
      }
      values[v] = f(simplex[v]);
    }
  }
  sort_vertices();
  return {simplex[order.front()], values[order.front()], it};
}

struct Point {
  InstrumentPair pair;
  DensityOperator rho;
};

Point materialise(Family family, const EffectConstraintSet& constraints,
                  std::span<const double> params, std::span<const double> state_params) {
  InstrumentPair pair = instantiate(family, params);
  if (const auto* fixed = std::get_if<DensityOperator>(&constraints.state)) {
    return {std::move(pair), *fixed};
  }
  return {std::move(pair),
          DensityOperator::pure(pure_state_from_params(family_dim(family), state_params))};
}

std::vector<double> constraint_values(const std::vector<Constraint>& targets,
                                      const Point& p) {
  std::optional<RreReport> rre;
  std::vector<double> out;
  out.reserve(targets.size());
  for (const auto& c : targets) {
    switch (c.diagnostic) {
      case Diagnostic::AaResidual:
      case Diagnostic::AbaResidual:
      case Diagnostic::BabResidual:
        if (!rre) rre = rre_report(p.pair.a, p.pair.b, p.rho);
        out.push_back(c.diagnostic == Diagnostic::AaResidual    ? rre->aa_residual
                      : c.diagnostic == Diagnostic::AbaResidual ? rre->aba_residual
                                                                : rre->bab_residual);
        break;
      default:
        out.push_back(evaluate(c.diagnostic, p.pair.a, p.pair.b, p.rho));
    }
  }
  return out;
}

// Terms of the penalty. An upper bound on an RRE residual is split into
// one term per branch (the maximum is below the bound iff every branch is),
// which keeps the penalty smooth where branches trade places.
struct Term {
  std::size_t constraint;
  double value;
};

std::vector<Term> penalty_terms(const std::vector<Constraint>& targets, const Point& p) {
  std::optional<RreBranches> rre;
  std::vector<Term> out;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const Constraint& c = targets[i];
    const bool branch = c.diagnostic == Diagnostic::AaResidual ||
                        c.diagnostic == Diagnostic::AbaResidual ||
                        c.diagnostic == Diagnostic::BabResidual;
    if (!branch) {
      out.push_back({i, evaluate(c.diagnostic, p.pair.a, p.pair.b, p.rho)});
      continue;
    }
    if (!rre) rre = rre_branches(p.pair.a, p.pair.b, p.rho);
    const std::vector<double>& values = c.diagnostic == Diagnostic::AaResidual    ? rre->aa
                                        : c.diagnostic == Diagnostic::AbaResidual ? rre->aba
                                                                                  : rre->bab;
    if (c.comparator == Comparator::LessEqual) {
      for (double v : values) out.push_back({i, v});
    } else {
      out.push_back({i, *std::max_element(values.begin(), values.end())});
    }
  }
  return out;
}

// Violations are measured between square roots. The diagnostics are
// probabilities and norms that vanish quadratically near their zero sets, so
// this keeps the penalty's valleys well conditioned without changing which
// points are feasible. `tighten` moves each threshold into the feasible side
// (factor on the square-root scale) for the polishing stage.
std::vector<double> scaled_violations(const std::vector<Constraint>& targets,
                                      const std::vector<Term>& terms,
                                      double tighten = 1.0) {
  std::vector<double> out(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const Constraint& c = targets[terms[i].constraint];
    const double v = std::sqrt(std::max(0.0, terms[i].value));
    const double t = std::sqrt(std::max(0.0, c.threshold));
    out[i] = c.comparator == Comparator::LessEqual ? std::max(0.0, v - t / tighten)
                                                   : std::max(0.0, t * tighten - v);
  }
  return out;
}

double penalty(const std::vector<Constraint>& targets, const Point& p) {
  double total = 0.0;
  for (double v : scaled_violations(targets, penalty_terms(targets, p))) total += v * v;
  return total;
}

using Residuals = std::function<std::optional<Eigen::VectorXd>(const std::vector<double>&)>;

// Levenberg-Marquardt on the violation vector with a forward-difference
// Jacobian. Returns the polished point and the number of steps taken.
std::pair<std::vector<double>, long> polish(const Residuals& residuals,
                                            std::vector<double> x, int max_steps) {
  const std::size_t n = x.size();
  auto r = residuals(x);
  if (!r) return {std::move(x), 0};
  double lambda = 1e-3;
  long steps = 0;
  Eigen::MatrixXd jac(r->size(), static_cast<Index>(n));
  while (steps < max_steps && r->squaredNorm() > 0.0) {
    ++steps;
    for (std::size_t k = 0; k < n; ++k) {
      const double h = 1e-7 * std::max(1.0, std::abs(x[k]));
      std::vector<double> xh = x;
      xh[k] += h;
      const auto rh = residuals(xh);
      if (!rh) return {std::move(x), steps};
      jac.col(static_cast<Index>(k)) = (*rh - *r) / h;
    }
    const Eigen::VectorXd g = jac.transpose() * *r;
    const Eigen::MatrixXd a = jac.transpose() * jac;
    bool accepted = false;
    while (!accepted && lambda < 1e10) {
      const Eigen::MatrixXd damped =
          a + lambda * Eigen::MatrixXd::Identity(static_cast<Index>(n), static_cast<Index>(n));
      const Eigen::VectorXd delta = damped.ldlt().solve(-g);
      std::vector<double> trial = x;
      for (std::size_t k = 0; k < n; ++k) trial[k] += delta(static_cast<Index>(k));
      const auto rt = residuals(trial);
      if (rt && rt->squaredNorm() < r->squaredNorm()) {
        x = std::move(trial);
        r = rt;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!accepted) break;
  }
  return {std::move(x), steps};
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Proj2: return "proj2";
    case Family::Proj4: return "proj4";
    case Family::Ok4: return "ok4";
    case Family::Srp4: return "srp4";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::Proj2, Family::Proj4, Family::Ok4, Family::Srp4}) {
    if (to_string(f) == name) return f;
  }
  throw Error(ErrorCode::UnknownFamily, kModule,
              "unknown family '" + std::string(name) +
                  "' (expected proj2, proj4, ok4 or srp4)");
}

std::size_t param_count(Family f) {
  switch (f) {
    case Family::Proj2: return 8;
    case Family::Proj4: return 32;
    case Family::Ok4: return kOkParamCount;
    case Family::Srp4: return kSrpPairParamCount;
  }
  return 0;
}

Index family_dim(Family f) { return f == Family::Proj2 ? 2 : 4; }

InstrumentPair instantiate(Family f, std::span<const double> params) {
  switch (f) {
    case Family::Proj2: return projective_pair(2, 1, params);
    case Family::Proj4: return projective_pair(4, 2, params);
    case Family::Ok4: {
      auto ok = ok_commuting_pair(params);
      return {std::move(ok.a), std::move(ok.b)};
    }
    case Family::Srp4: return srp_binary_pair(params);
  }
  throw Error(ErrorCode::UnknownFamily, kModule, "unknown family");
}

std::vector<Constraint> parse_constraints(std::string_view text) {
  std::vector<Constraint> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item = trim(text.substr(pos, comma - pos));
    pos = comma + 1;
    if (item.empty()) {
      throw Error(ErrorCode::ParseError, kModule, "empty constraint in '" +
                                                      std::string(text) + "'");
    }
    std::size_t op = item.find("<=");
    Comparator cmp = Comparator::LessEqual;
    if (op == std::string_view::npos) {
      op = item.find(">=");
      cmp = Comparator::GreaterEqual;
    }
    if (op == std::string_view::npos) {
      throw Error(ErrorCode::ParseError, kModule,
                  "constraint '" + std::string(item) + "' has no <= or >=");
    }
    const std::string_view name = trim(item.substr(0, op));
    const std::string_view number = trim(item.substr(op + 2));
    const auto diag = parse_diagnostic(name);
    if (!diag) {
      throw Error(ErrorCode::ParseError, kModule,
                  "unknown diagnostic '" + std::string(name) + "'");
    }
    double threshold = 0.0;
    const auto [end, ec] =
        std::from_chars(number.data(), number.data() + number.size(), threshold);
    if (ec != std::errc() || end != number.data() + number.size() ||
        !std::isfinite(threshold)) {
      throw Error(ErrorCode::ParseError, kModule,
                  "bad threshold '" + std::string(number) + "' in '" +
                      std::string(item) + "'");
    }
    out.push_back({*diag, cmp, threshold});
  }
  return out;
}

std::string to_string(const Constraint& c) {
  std::ostringstream os;
  os << to_string(c.diagnostic)
     << (c.comparator == Comparator::LessEqual ? "<=" : ">=") << c.threshold;
  return os.str();
}

double hinge_violation(const Constraint& c, double value) {
  const double v = c.comparator == Comparator::LessEqual ? value - c.threshold
                                                         : c.threshold - value;
  return std::max(0.0, v);
}

bool satisfied(const Constraint& c, double value) {
  return c.comparator == Comparator::LessEqual ? value <= c.threshold
                                               : value >= c.threshold;
}

std::vector<std::pair<Diagnostic, double>> all_diagnostics(
    const InstrumentPair& pair, const DensityOperator& rho) {
  const QoeReport qoe = qoe_report(pair.a, pair.b, rho);
  const RreReport rre = rre_report(pair.a, pair.b, rho);
  std::vector<std::pair<Diagnostic, double>> out = {
      {Diagnostic::QoeDeviation, qoe.max_abs_deviation},
      {Diagnostic::AbaResidual, rre.aba_residual},
      {Diagnostic::BabResidual, rre.bab_residual},
      {Diagnostic::AaResidual, rre.aa_residual},
  };
  if (pair.a.size() == 2 && pair.b.size() == 2) {
    out.emplace_back(Diagnostic::QqAbs, std::abs(qq_value(pair.a, pair.b, rho).q));
  }
  out.emplace_back(Diagnostic::FtpAbs, max_ftp_residual(pair.a, pair.b, rho));
  out.emplace_back(Diagnostic::UCommNorm, max_u_commutator_norm(pair.a, pair.b));
  out.emplace_back(Diagnostic::OCommNorm, o_commutator_norm(pair.a, pair.b));
  return out;
}

SearchResult search_effects(Family family, const EffectConstraintSet& constraints,
                            const SearchBudget& budget) {
  if (budget.restarts < 1 || budget.max_iters < 0) {
    throw Error(ErrorCode::BadParameters, kModule,
                "search budget needs restarts >= 1 and max_iters >= 0");
  }
  for (const auto& c : constraints.targets) {
    if (!std::isfinite(c.threshold)) {
      throw Error(ErrorCode::BadParameters, kModule, "non-finite threshold");
    }
  }
  if (const auto* fixed = std::get_if<DensityOperator>(&constraints.state)) {
    require_same_dim(fixed->dim(), family_dim(family), kModule, "search_effects");
  }
  const std::size_t n_model = param_count(family);
  const bool free_state = std::holds_alternative<OptimizeOverState>(constraints.state);
  const std::size_t n_state =
      free_state ? static_cast<std::size_t>(family_dim(family) * family_dim(family)) : 0;
  const std::size_t n = n_model + n_state;

  const Objective objective = [&](const std::vector<double>& x) {
    const std::span<const double> all(x);
    try {
      const Point p = materialise(family, constraints, all.first(n_model),
                                  all.subspan(n_model));
      return penalty(constraints.targets, p);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const Residuals tightened = [&](const std::vector<double>& x)
      -> std::optional<Eigen::VectorXd> {
    const std::span<const double> all(x);
    try {
      const Point p = materialise(family, constraints, all.first(n_model),
                                  all.subspan(n_model));
      const auto v = scaled_violations(
          constraints.targets, penalty_terms(constraints.targets, p), kPolishTighten);
      return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  Descent best;
  best.f = std::numeric_limits<double>::infinity();
  int best_restart = -1;
  long iterations = 0;
  for (int r = 0; r < budget.restarts; ++r) {
    std::vector<double> x0(n, 0.0);
    if (r > 0) {
      Rng rng(budget.seed + static_cast<std::uint64_t>(r));
      for (double& v : x0) v = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    Descent d = nelder_mead(objective, std::move(x0), budget.max_iters);
    iterations += d.iterations;
    if (d.f > 0.0 && std::isfinite(d.f)) {
      auto [x, steps] = polish(tightened, d.x, kPolishSteps);
      iterations += steps;
      const double f = objective(x);
      if (f < d.f) {
        d.x = std::move(x);
        d.f = f;
      }
    }
    if (d.f < best.f) {
      best = std::move(d);
      best_restart = r;
    }
    if (best.f == 0.0) break;
  }
  if (best_restart < 0) {
    // Every start failed to materialise; report the origin.
    best.x.assign(n, 0.0);
    best_restart = 0;
  }

  // Fresh evaluation at the returned point.
  const std::span<const double> all(best.x);
  const Point p = materialise(family, constraints, all.first(n_model), all.subspan(n_model));
  SearchResult result{family,
                      {best.x.begin(), best.x.begin() + static_cast<long>(n_model)},
                      {best.x.begin() + static_cast<long>(n_model), best.x.end()},
                      p.rho,
                      all_diagnostics(p.pair, p.rho)};
  const std::vector<double> values = constraint_values(constraints.targets, p);
  result.objective = penalty(constraints.targets, p);
  result.feasible = true;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!satisfied(constraints.targets[i], values[i])) result.feasible = false;
  }
  result.iterations = iterations;
  result.restart = best_restart;
  result.seed = budget.seed;
  return result;
}

}  // namespace qmt
