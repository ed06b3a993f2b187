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

#include <gtest/gtest.h>

#include <numbers>

#include "qmt/effects.hpp"
#include "qmt/models.hpp"
#include "qmt/random.hpp"
#include "qmt/unitary_chart.hpp"
#include "test_util.hpp"

namespace qmt {
namespace {

using testing::mat2;

void expect_code(ErrorCode code, const auto& f) {
  try {
    f();
    FAIL() << "no exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(UnitaryChart, OracleDimThree) {
  const cplx want[3][3] = {
      {{0.52130368224202694, -0.096543713015611973},
       {-0.75333322678436865, 0.13202442090253183},
       {-0.36582211732803049, 0.012432318355867389}},
      {{-0.14983095788647063, 0.19432215406508865},
       {0.28263227506292277, -0.07881109267509824},
       {-0.8641454464935483, 0.32703217053816908}},
      {{0.36438535291251861, 0.72521354195795928},
       {0.20442513681088875, 0.53588877009316482},
       {0.098561251677104611, -0.051067625158580154}}};
  const ComplexMatrix u = unitary_from_params(3, testing::params(9, 0.1));
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 3; ++j) {
      EXPECT_NEAR(std::abs(u(i, j) - want[i][j]), 0.0, 1e-12) << i << "," << j;
    }
  }
}

TEST(UnitaryChart, DimOnePhase) {
  const std::vector<double> p = {std::numbers::pi};
  EXPECT_NEAR(std::abs(unitary_from_params(1, p)(0, 0) - cplx(-1.0)), 0.0, 1e-15);
}

TEST(UnitaryChart, QuarterTurn) {
  const std::vector<double> p = {0.0, 0.0, 0.0, -std::numbers::pi / 2};
  EXPECT_LT((unitary_from_params(2, p) - mat2(0, 1, -1, 0)).norm(), 1e-15);
}

TEST(UnitaryChart, ZeroIsIdentity) {
  const std::vector<double> p(16, 0.0);
  EXPECT_EQ(unitary_from_params(4, p), ComplexMatrix::Identity(4, 4));
}

TEST(UnitaryChart, BadLength) {
  const std::vector<double> p(8, 0.1);
  expect_code(ErrorCode::BadParameterLength, [&] { unitary_from_params(3, p); });
  expect_code(ErrorCode::BadParameterLength, [&] { pure_state_from_params(2, p); });
}

TEST(UnitaryChart, UnitaryOnRandomDraws) {
  Rng rng(41);
  for (int t = 0; t < 1000; ++t) {
    const Index d = 1 + static_cast<Index>(rng.below(5));
    const auto p = testing::random_params(static_cast<std::size_t>(d * d), rng);
    const ComplexMatrix u = unitary_from_params(d, p);
    EXPECT_LE((u.adjoint() * u - ComplexMatrix::Identity(d, d)).norm(), 1e-12);
    EXPECT_NEAR(pure_state_from_params(d, p).amplitudes().norm(), 1.0, 1e-12);
  }
}

TEST(SrpInstrument, PovmIsTheSpectralProjections) {
  Rng rng(42);
  for (int t = 0; t < 50; ++t) {
    const auto pair = srp_binary_pair(testing::random_params(kSrpPairParamCount, rng));
    EXPECT_TRUE(validate(pair.a).passed);
    EXPECT_TRUE(validate(pair.b).passed);
    for (const Instrument* inst : {&pair.a, &pair.b}) {
      for (std::size_t x = 0; x < inst->size(); ++x) {
        const ComplexMatrix& e = inst->effect(x);
        EXPECT_LE((e * e - e).norm(), 1e-10);
      }
    }
  }
}

TEST(SrpInstrument, RejectsUnitaryLeavingEigenspace) {
  const auto spec = spectral_decompose(SelfAdjointOperator::from(testing::pauli_z()));
  expect_code(ErrorCode::IncompatibleUnitaries,
              [&] { srp_instrument(spec, {{1.0, testing::pauli_x()}}); });
  expect_code(ErrorCode::IncompatibleUnitaries,
              [&] { srp_instrument(spec, {{1.0, mat2(2, 0, 0, 1)}}); });
}

TEST(TrivialNoninvasive, Weights) {
  const std::vector<double> good = {0.2, 0.8};
  const Instrument inst = trivial_noninvasive(3, good);
  EXPECT_TRUE(validate(inst).passed);
  EXPECT_LT((inst.effect(1) - 0.8 * ComplexMatrix::Identity(3, 3)).norm(), 1e-15);
  const std::vector<double> negative = {1.2, -0.2};
  const std::vector<double> short_sum = {0.2, 0.3};
  const std::vector<double> none;
  expect_code(ErrorCode::BadWeights, [&] { trivial_noninvasive(2, negative); });
  expect_code(ErrorCode::BadWeights, [&] { trivial_noninvasive(2, short_sum); });
  expect_code(ErrorCode::BadWeights, [&] { trivial_noninvasive(2, none); });
}

TEST(RandomUnsharp, DeterministicAndValid) {
  const Instrument a = random_unsharp(3, 3, 99);
  const Instrument b = random_unsharp(3, 3, 99);
  const Instrument c = random_unsharp(3, 3, 100);
  EXPECT_EQ(a.kraus(), b.kraus());
  EXPECT_NE(a.kraus(), c.kraus());
  EXPECT_TRUE(validate(a).passed);
  EXPECT_EQ(a.kraus(0).size(), 2u);
}

TEST(RandomProjective, DeterministicAndValid) {
  const Instrument a = random_projective(4, 3, 7);
  EXPECT_EQ(a.kraus(), random_projective(4, 3, 7).kraus());
  EXPECT_TRUE(validate(a).passed);
  EXPECT_EQ(a.size(), 3u);
}

TEST(WangBusemeyer, RightAngleIsOrthogonal) {
  const auto pair = wang_busemeyer_pair(std::numbers::pi / 2);
  const auto e0 = testing::pure(testing::ket({1.0, 0.0}));
  const JointTable ab = joint_table(pair.a, pair.b, e0);
  EXPECT_NEAR(ab[1][1], 0.0, 1e-15);
}

TEST(WangBusemeyer, QuarterAngleConditional) {
  const auto pair = wang_busemeyer_pair(std::numbers::pi / 4);
  const auto e0 = testing::pure(testing::ket({1.0, 0.0}));
  EXPECT_NEAR(joint_table(pair.a, pair.b, e0)[1][1], 0.5, 1e-15);
}

TEST(WangBusemeyer, QqHoldsOnRandomStates) {
  Rng rng(43);
  for (int t = 0; t < 100; ++t) {
    const auto pair = wang_busemeyer_pair(rng.uniform(0.0, std::numbers::pi));
    EXPECT_LE(std::abs(qq_value(pair.a, pair.b, random_density(2, rng)).q), 1e-12);
  }
}

TEST(OkCommutingPair, ObservablesCommuteExactly) {
  Rng rng(44);
  for (int t = 0; t < 50; ++t) {
    const auto pair = ok_commuting_pair(testing::random_params(kOkParamCount, rng));
    EXPECT_EQ(commutator(pair.observable_a.observable(), pair.observable_b.observable()).norm(),
              0.0);
    EXPECT_TRUE(validate(pair.a).passed);
    EXPECT_TRUE(validate(pair.b).passed);
    for (std::size_t x = 0; x < 2; ++x) {
      EXPECT_LE((pair.a.effect(x) - pair.observable_a.projections()[x].matrix()).norm(), 1e-10);
      EXPECT_LE((pair.b.effect(x) - pair.observable_b.projections()[x].matrix()).norm(), 1e-10);
    }
  }
}

TEST(OkCommutingPair, BadParameters) {
  const std::vector<double> short_params(15, 0.0);
  expect_code(ErrorCode::BadParameters, [&] { ok_commuting_pair(short_params); });
  std::vector<double> nan_params(16, 0.0);
  nan_params[3] = std::numeric_limits<double>::quiet_NaN();
  expect_code(ErrorCode::BadParameters, [&] { ok_commuting_pair(nan_params); });
}

TEST(ProjectivePair, RankAndValidity) {
  Rng rng(45);
  const auto pair = testing::random_projective_pair(4, 2, rng);
  EXPECT_TRUE(validate(pair.a).passed);
  EXPECT_NEAR(pair.a.effect(1).trace().real(), 2.0, 1e-12);
  EXPECT_NEAR(pair.b.effect(1).trace().real(), 2.0, 1e-12);
}

TEST(EmbedOnRange, ActsAsIdentityOffRange) {
  ComplexMatrix basis = ComplexMatrix::Zero(3, 1);
  basis(1, 0) = 1.0;
  ComplexMatrix block(1, 1);
  block(0, 0) = cplx(0, 1);
  const ComplexMatrix u = embed_on_range(basis, block);
  EXPECT_EQ(u(0, 0), cplx(1.0));
  EXPECT_EQ(u(1, 1), cplx(0, 1));
  EXPECT_EQ(u(2, 2), cplx(1.0));
}

}  // namespace
}  // namespace qmt
