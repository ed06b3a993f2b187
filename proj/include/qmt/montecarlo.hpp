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

// Synthetic respondents. Each trajectory walks an instrument sequence: at
// every step one uniform draw picks the outcome by inverse CDF over the
// instrument's outcome order, then the state is updated. Trajectories are
// grouped in fixed-size chunks, chunk c drawing from Rng(derive_seed(seed, c)),
// so counts do not depend on how chunks are scheduled.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qmt/instrument.hpp"
#include "qmt/random.hpp"

namespace qmt {

inline constexpr std::uint64_t kChunkSize = 8192;

using OutcomeTuple = std::vector<double>;

struct TrajectorySample {
  OutcomeTuple outcomes;
  DensityOperator final_state;
};

struct EmpiricalStats {
  std::map<OutcomeTuple, std::uint64_t> counts;
  std::uint64_t n = 0;
  std::map<OutcomeTuple, double> frequencies;
  std::optional<double> q_hat;
  std::optional<double> q_se;
  std::optional<double> z;
};

/// One trajectory with explicit state updates.
TrajectorySample sample_trajectory(std::span<const Instrument> seq,
                                   const DensityOperator& rho, Rng& rng);

EmpiricalStats simulate_sequence(std::span<const Instrument> seq,
                                 const DensityOperator& rho, std::uint64_t n,
                                 std::uint64_t seed);

/// table[a][b] counts respondents answering a to A and b to B, index 0 for
/// "yes" and 1 for "no", whatever the order the questions were asked in.
using CountTable = std::array<std::array<std::uint64_t, 2>, 2>;
inline constexpr int kYes = 0;
inline constexpr int kNo = 1;

/// Split-ballot estimate of q = p(ByAy) + p(BnAn) - [p(AyBy) + p(AnBn)].
/// The two arms are independent multinomials. Counts are keyed
/// {order, a, b}: order 0 for AB and 1 for BA, answers 1 for yes, 0 for no.
/// Throws EmptyTable, DegenerateVariance.
EmpiricalStats empirical_qq(const CountTable& counts_ab, const CountTable& counts_ba);

/// AB and BA arms of n_per_arm respondents each, with yes the larger
/// outcome of each binary instrument. Arm seeds are derived from `seed`.
std::pair<CountTable, CountTable> simulate_split_ballot(const Instrument& a,
                                                        const Instrument& b,
                                                        const DensityOperator& rho,
                                                        std::uint64_t n_per_arm,
                                                        std::uint64_t seed);

}  // namespace qmt
