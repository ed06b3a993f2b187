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

#include "qmt/montecarlo.hpp"

#include <algorithm>
#include <cmath>

namespace qmt {
namespace {

constexpr const char* kModule = "montecarlo";

void require_sequence(std::span<const Instrument> seq, const DensityOperator& rho) {
  if (seq.empty()) {
    throw Error(ErrorCode::InvalidValue, kModule, "empty instrument sequence");
  }
  for (const Instrument& inst : seq) {
    require_same_dim(inst.dim(), rho.dim(), kModule, "simulate_sequence");
  }
}

// Inverse CDF. Rounding can leave the cumulative sum just short of u, in
// which case the last outcome with positive weight is taken.
std::size_t pick(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it != cumulative.end()) return static_cast<std::size_t>(it - cumulative.begin());
  std::size_t last = cumulative.size() - 1;
  while (last > 0 && cumulative[last] == cumulative[last - 1]) --last;
  return last;
}

std::vector<double> cumulative_of(const Instrument& inst, const ComplexMatrix& sigma) {
  std::vector<double> cdf(inst.size());
  const double total = sigma.trace().real();
  double acc = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double p = (inst.effect(i) * sigma).trace().real() / total;
    acc += std::max(0.0, p);
    cdf[i] = acc;
  }
  return cdf;
}

// Conditional outcome distributions per visited prefix. Unnormalised states
// are cached with them, so a prefix is expanded once per run.
class PrefixTree {
 public:
  PrefixTree(std::span<const Instrument> seq, const DensityOperator& rho) : seq_(seq) {
    nodes_.push_back({rho.matrix(), cumulative_of(seq_[0], rho.matrix()), {}});
  }

  std::vector<std::size_t> sample(Rng& rng) {
    std::vector<std::size_t> path;
    path.reserve(seq_.size());
    std::size_t node = 0;
    for (std::size_t step = 0; step < seq_.size(); ++step) {
      const std::size_t i = pick(nodes_[node].cdf, rng.uniform());
      path.push_back(i);
      if (step + 1 < seq_.size()) node = child(node, step, i);
    }
    return path;
  }

 private:
  struct Node {
    ComplexMatrix sigma;
    std::vector<double> cdf;
    std::vector<std::size_t> children;  // 0 = not expanded
  };

  std::size_t child(std::size_t node, std::size_t step, std::size_t i) {
    if (nodes_[node].children.empty()) {
      nodes_[node].children.assign(seq_[step].size(), 0);
    }
    if (nodes_[node].children[i] == 0) {
      ComplexMatrix sigma = seq_[step].apply(i, nodes_[node].sigma);
      std::vector<double> cdf = cumulative_of(seq_[step + 1], sigma);
      nodes_.push_back({std::move(sigma), std::move(cdf), {}});
      nodes_[node].children[i] = nodes_.size() - 1;
    }
    return nodes_[node].children[i];
  }

  std::span<const Instrument> seq_;
  std::vector<Node> nodes_;
};

std::size_t yes_index(const Instrument& inst) {
  if (inst.size() != 2) {
    throw Error(ErrorCode::NotBinaryOutcomes, kModule,
                "split-ballot simulation needs binary instruments");
  }
  return inst.outcomes()[0] > inst.outcomes()[1] ? 0 : 1;
}

std::uint64_t table_total(const CountTable& t) {
  return t[0][0] + t[0][1] + t[1][0] + t[1][1];
}

}  // namespace

TrajectorySample sample_trajectory(std::span<const Instrument> seq,
                                   const DensityOperator& rho, Rng& rng) {
  require_sequence(seq, rho);
  TrajectorySample out{{}, rho};
  for (const Instrument& inst : seq) {
    const std::vector<double> cdf = cumulative_of(inst, out.final_state.matrix());
    const double x = inst.outcomes()[pick(cdf, rng.uniform())];
    out.outcomes.push_back(x);
    out.final_state = state_update(inst, x, out.final_state);
  }
  return out;
}

EmpiricalStats simulate_sequence(std::span<const Instrument> seq,
                                 const DensityOperator& rho, std::uint64_t n,
                                 std::uint64_t seed) {
  require_sequence(seq, rho);
  if (n < 1) throw Error(ErrorCode::InvalidValue, kModule, "n must be >= 1");

  PrefixTree tree(seq, rho);
  std::map<std::vector<std::size_t>, std::uint64_t> by_index;
  for (std::uint64_t chunk = 0; chunk * kChunkSize < n; ++chunk) {
    Rng rng(derive_seed(seed, chunk));
    const std::uint64_t end = std::min(n, (chunk + 1) * kChunkSize);
    for (std::uint64_t t = chunk * kChunkSize; t < end; ++t) ++by_index[tree.sample(rng)];
  }

  EmpiricalStats stats;
  stats.n = n;
  for (const auto& [path, count] : by_index) {
    OutcomeTuple tuple;
    for (std::size_t s = 0; s < path.size(); ++s) tuple.push_back(seq[s].outcomes()[path[s]]);
    stats.counts[tuple] = count;
    stats.frequencies[tuple] = static_cast<double>(count) / static_cast<double>(n);
  }
  return stats;
}

EmpiricalStats empirical_qq(const CountTable& counts_ab, const CountTable& counts_ba) {
  const std::uint64_t n_ab = table_total(counts_ab);
  const std::uint64_t n_ba = table_total(counts_ba);
  if (n_ab == 0) throw Error(ErrorCode::EmptyTable, kModule, "AB table has no counts");
  if (n_ba == 0) throw Error(ErrorCode::EmptyTable, kModule, "BA table has no counts");

  EmpiricalStats stats;
  stats.n = n_ab + n_ba;
  const auto record = [&](double order, const CountTable& t) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const OutcomeTuple key{order, a == kYes ? 1.0 : 0.0, b == kYes ? 1.0 : 0.0};
        stats.counts[key] = t[a][b];
        stats.frequencies[key] =
            static_cast<double>(t[a][b]) / static_cast<double>(stats.n);
      }
    }
  };
  record(0.0, counts_ab);
  record(1.0, counts_ba);

  // q is a difference of two "same answer" proportions, one per arm.
  const double d_ab =
      static_cast<double>(counts_ab[kYes][kYes] + counts_ab[kNo][kNo]) / static_cast<double>(n_ab);
  const double d_ba =
      static_cast<double>(counts_ba[kYes][kYes] + counts_ba[kNo][kNo]) / static_cast<double>(n_ba);
  const double se = std::sqrt(d_ab * (1.0 - d_ab) / static_cast<double>(n_ab) +
                              d_ba * (1.0 - d_ba) / static_cast<double>(n_ba));
  stats.q_hat = d_ba - d_ab;
  stats.q_se = se;
  if (se == 0.0) {
    throw Error(ErrorCode::DegenerateVariance, kModule,
                "standard error of q is zero, z is undefined");
  }
  stats.z = *stats.q_hat / se;
  return stats;
}

std::pair<CountTable, CountTable> simulate_split_ballot(const Instrument& a,
                                                        const Instrument& b,
                                                        const DensityOperator& rho,
                                                        std::uint64_t n_per_arm,
                                                        std::uint64_t seed) {
  const std::size_t ay = yes_index(a);
  const std::size_t by = yes_index(b);
  const Instrument ab[] = {a, b};
  const Instrument ba[] = {b, a};
  const EmpiricalStats s_ab = simulate_sequence(ab, rho, n_per_arm, derive_seed(seed, 0));
  const EmpiricalStats s_ba = simulate_sequence(ba, rho, n_per_arm, derive_seed(seed, 1));

  const auto answer = [](const Instrument& inst, std::size_t yes, double x) {
    return inst.outcomes()[yes] == x ? kYes : kNo;
  };
  CountTable t_ab{};
  CountTable t_ba{};
  for (const auto& [tuple, count] : s_ab.counts) {
    t_ab[answer(a, ay, tuple[0])][answer(b, by, tuple[1])] += count;
  }
  for (const auto& [tuple, count] : s_ba.counts) {
    t_ba[answer(a, ay, tuple[1])][answer(b, by, tuple[0])] += count;
  }
  return {t_ab, t_ba};
}

}  // namespace qmt
