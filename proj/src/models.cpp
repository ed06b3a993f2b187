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

#include "qmt/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qmt/random.hpp"
#include "qmt/unitary_chart.hpp"

namespace qmt {
namespace {

constexpr const char* kModule = "models";

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, kModule, msg);
}

void require_params(std::span<const double> params, std::size_t expected,
                    const char* what) {
  if (params.size() != expected) {
    fail(ErrorCode::BadParameters,
         std::string(what) + ": expected " + std::to_string(expected) +
             " parameters, got " + std::to_string(params.size()));
  }
  for (double p : params) {
    if (!std::isfinite(p)) {
      fail(ErrorCode::BadParameters, std::string(what) + ": non-finite parameter");
    }
  }
}

ComplexMatrix columns(Index dim, std::initializer_list<Index> which) {
  ComplexMatrix basis = ComplexMatrix::Zero(dim, static_cast<Index>(which.size()));
  Index c = 0;
  for (Index i : which) basis(i, c++) = 1.0;
  return basis;
}

ComplexMatrix block_unitary(std::span<const double> params, std::size_t block) {
  return unitary_from_params(2, params.subspan(4 * block, 4));
}

// Binary spectral decomposition with "yes" range spanned by `yes_basis`.
SpectralDecomposition binary_spec(const ComplexMatrix& yes_basis) {
  const Index d = yes_basis.rows();
  const ComplexMatrix yes = yes_basis * yes_basis.adjoint();
  const ComplexMatrix no = ComplexMatrix::Identity(d, d) - yes;
  return SpectralDecomposition::from({0.0, 1.0},
                                     {Projection::from(no), Projection::from(yes)});
}

}  // namespace

Instrument projective_instrument(const SpectralDecomposition& spec) {
  std::vector<std::vector<ComplexMatrix>> kraus;
  for (const auto& e : spec.projections()) kraus.push_back({e.matrix()});
  return Instrument(spec.outcomes(), std::move(kraus));
}

Instrument srp_instrument(const SpectralDecomposition& spec,
                          const IntraEigenspaceUnitaries& w, double tol) {
  const Index d = spec.dim();
  for (const auto& [x, u] : w) {
    if (std::find(spec.outcomes().begin(), spec.outcomes().end(), x) ==
        spec.outcomes().end()) {
      std::ostringstream os;
      os << "unitary given for unknown outcome " << x;
      throw Error(ErrorCode::UnknownOutcome, kModule, os.str());
    }
  }
  std::vector<std::vector<ComplexMatrix>> kraus;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double x = spec.outcomes()[i];
    const ComplexMatrix& e = spec.projections()[i].matrix();
    const auto it = w.find(x);
    if (it == w.end()) {
      kraus.push_back({e});
      continue;
    }
    const ComplexMatrix& u = it->second;
    std::ostringstream label;
    label << "W for outcome " << x;
    if (u.rows() != d || u.cols() != d) {
      throw Error(ErrorCode::DimensionMismatch, kModule,
                  label.str() + " has the wrong shape");
    }
    if ((u.adjoint() * u - ComplexMatrix::Identity(d, d)).norm() > tol) {
      fail(ErrorCode::IncompatibleUnitaries, label.str() + " is not unitary");
    }
    const ComplexMatrix ue = u * e;
    if ((ue - e * ue).norm() > tol) {
      fail(ErrorCode::IncompatibleUnitaries,
           label.str() + " does not map range E(x) into itself");
    }
    kraus.push_back({ue});
  }
  return Instrument(spec.outcomes(), std::move(kraus));
}

ComplexMatrix embed_on_range(const ComplexMatrix& basis,
                             const ComplexMatrix& block) {
  const Index d = basis.rows();
  return basis * block * basis.adjoint() +
         (ComplexMatrix::Identity(d, d) - basis * basis.adjoint());
}

Instrument trivial_noninvasive(Index dim, std::span<const double> weights) {
  if (dim < 1) fail(ErrorCode::BadWeights, "dimension must be >= 1");
  if (weights.empty()) fail(ErrorCode::BadWeights, "no weights given");
  double total = 0.0;
  for (double k : weights) {
    if (!std::isfinite(k) || k < 0.0) {
      fail(ErrorCode::BadWeights, "weights must be finite and nonnegative");
    }
    total += k;
  }
  if (std::abs(total - 1.0) > kDefaultTol) {
    fail(ErrorCode::BadWeights, "weights sum to " + std::to_string(total));
  }
  std::vector<double> outcomes;
  std::vector<std::vector<ComplexMatrix>> kraus;
  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    outcomes.push_back(static_cast<double>(i));
    kraus.push_back({std::sqrt(weights[i]) * id});
  }
  return Instrument(std::move(outcomes), std::move(kraus));
}

Instrument random_unsharp(Index dim, int n_outcomes, std::uint64_t seed) {
  if (dim < 2 || n_outcomes < 2) {
    fail(ErrorCode::BadParameters, "random_unsharp needs dim >= 2 and >= 2 outcomes");
  }
  constexpr int kKrausPerOutcome = 2;
  Rng rng(seed);
  while (true) {
    std::vector<std::vector<ComplexMatrix>> kraus(n_outcomes);
    ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
    for (auto& set : kraus) {
      for (int k = 0; k < kKrausPerOutcome; ++k) {
        set.push_back(random_gaussian(dim, dim, rng));
        s += set.back().adjoint() * set.back();
      }
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
    if (es.info() != Eigen::Success || es.eigenvalues()(0) <= 1e-12) continue;
    const ComplexMatrix inv_sqrt = es.eigenvectors() *
                                   es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                   es.eigenvectors().adjoint();
    bool near_projection = false;
    for (auto& set : kraus) {
      ComplexMatrix effect = ComplexMatrix::Zero(dim, dim);
      for (auto& k : set) {
        k = (k * inv_sqrt).eval();
        effect += k.adjoint() * k;
      }
      if ((effect * effect - effect).norm() <= 1e-6) near_projection = true;
    }
    if (near_projection) continue;
    std::vector<double> outcomes(n_outcomes);
    std::iota(outcomes.begin(), outcomes.end(), 0.0);
    return Instrument(std::move(outcomes), std::move(kraus));
  }
}

Instrument random_projective(Index dim, int n_outcomes, std::uint64_t seed) {
  if (dim < 1 || n_outcomes < 1 || n_outcomes > dim) {
    fail(ErrorCode::BadParameters,
         "random_projective needs 1 <= n_outcomes <= dim");
  }
  Rng rng(seed);
  const ComplexMatrix u = random_unitary(dim, rng);
  // The first n_outcomes basis vectors seed the groups; the rest are placed
  // uniformly at random.
  std::vector<int> group(dim);
  for (Index i = 0; i < dim; ++i) {
    group[i] = i < n_outcomes ? static_cast<int>(i)
                              : static_cast<int>(rng.below(n_outcomes));
  }
  std::vector<std::vector<ComplexMatrix>> kraus(n_outcomes);
  std::vector<double> outcomes(n_outcomes);
  for (int x = 0; x < n_outcomes; ++x) {
    outcomes[x] = x;
    ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
    for (Index i = 0; i < dim; ++i) {
      if (group[i] == x) e += u.col(i) * u.col(i).adjoint();
    }
    kraus[x].push_back(std::move(e));
  }
  return Instrument(std::move(outcomes), std::move(kraus));
}

InstrumentPair wang_busemeyer_pair(double theta) {
  ComplexMatrix a_yes = ComplexMatrix::Zero(2, 1);
  a_yes(0, 0) = 1.0;
  ComplexMatrix b_yes(2, 1);
  b_yes(0, 0) = std::cos(theta);
  b_yes(1, 0) = std::sin(theta);
  return {projective_instrument(binary_spec(a_yes)),
          projective_instrument(binary_spec(b_yes))};
}

CommutingPair ok_commuting_pair(std::span<const double> params) {
  require_params(params, kOkParamCount, "ok_commuting_pair");
  const ComplexMatrix a_yes = columns(4, {0, 1});
  const ComplexMatrix a_no = columns(4, {2, 3});
  const ComplexMatrix b_yes = columns(4, {0, 2});
  const ComplexMatrix b_no = columns(4, {1, 3});

  SpectralDecomposition obs_a = binary_spec(a_yes);
  SpectralDecomposition obs_b = binary_spec(b_yes);
  const IntraEigenspaceUnitaries wa = {
      {1.0, embed_on_range(a_yes, block_unitary(params, 0))},
      {0.0, embed_on_range(a_no, block_unitary(params, 1))}};
  const IntraEigenspaceUnitaries wb = {
      {1.0, embed_on_range(b_yes, block_unitary(params, 2))},
      {0.0, embed_on_range(b_no, block_unitary(params, 3))}};
  Instrument a = srp_instrument(obs_a, wa);
  Instrument b = srp_instrument(obs_b, wb);
  return {std::move(a), std::move(b), std::move(obs_a), std::move(obs_b)};
}

InstrumentPair projective_pair(Index dim, Index rank,
                               std::span<const double> params) {
  if (rank < 1 || rank >= dim) {
    fail(ErrorCode::BadParameters, "projective_pair: rank must be in [1, dim)");
  }
  const std::size_t n = static_cast<std::size_t>(dim * dim);
  require_params(params, 2 * n, "projective_pair");
  const ComplexMatrix ua = unitary_from_params(dim, params.subspan(0, n));
  const ComplexMatrix ub = unitary_from_params(dim, params.subspan(n, n));
  return {projective_instrument(binary_spec(ua.leftCols(rank))),
          projective_instrument(binary_spec(ub.leftCols(rank)))};
}

InstrumentPair srp_binary_pair(std::span<const double> params) {
  require_params(params, kSrpPairParamCount, "srp_binary_pair");
  const ComplexMatrix r = unitary_from_params(4, params.subspan(16, 16));
  const ComplexMatrix a_yes = columns(4, {0, 1});
  const ComplexMatrix a_no = columns(4, {2, 3});
  const ComplexMatrix b_yes = r.leftCols(2);
  const ComplexMatrix b_no = r.rightCols(2);
  // Looser tolerance: the rotated eigenspaces carry rounding from the chart.
  constexpr double kTol = 1e-8;
  const IntraEigenspaceUnitaries wa = {
      {1.0, embed_on_range(a_yes, block_unitary(params, 0))},
      {0.0, embed_on_range(a_no, block_unitary(params, 1))}};
  const IntraEigenspaceUnitaries wb = {
      {1.0, embed_on_range(b_yes, block_unitary(params, 2))},
      {0.0, embed_on_range(b_no, block_unitary(params, 3))}};
  return {srp_instrument(binary_spec(a_yes), wa, kTol),
          srp_instrument(binary_spec(b_yes), wb, kTol)};
}

}  // namespace qmt
