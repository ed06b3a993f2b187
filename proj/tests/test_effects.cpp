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
#include "test_util.hpp"

namespace qmt {
namespace {

using testing::ket;
using testing::mat2;
using testing::pauli_x;
using testing::pauli_z;

constexpr double kOracleTol = 1e-12;

DensityOperator wb_state() {
  return testing::pure(ket({std::cos(0.3), std::polar(1.0, 0.7) * std::sin(0.3)}));
}

DensityOperator ok_state() {
  return testing::pure(ket({1.0, cplx(0, 2), -1.0, 0.5}));
}

DensityOperator srp_state() {
  return testing::pure(ket({0.5, cplx(0, 0.5), -0.5, 0.5}));
}

void expect_table(const JointTable& t, const std::vector<std::vector<double>>& want) {
  ASSERT_EQ(t.size(), want.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    ASSERT_EQ(t[i].size(), want[i].size());
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      EXPECT_NEAR(t[i][j], want[i][j], kOracleTol) << i << "," << j;
    }
  }
}

struct OracleCase {
  std::vector<std::vector<double>> ab;
  std::vector<std::vector<double>> ba;
  double qoe, aba, bab, q, q_y, q_n, ftp0, ftp1, ucomm;
};

void expect_oracle(const Instrument& a, const Instrument& b,
                   const DensityOperator& rho, const OracleCase& o) {
  expect_table(joint_table(a, b, rho), o.ab);
  expect_table(joint_table(b, a, rho), o.ba);
  EXPECT_NEAR(qoe_deviation(a, b, rho), o.qoe, kOracleTol);
  const RreReport r = rre_report(a, b, rho);
  EXPECT_NEAR(r.aba_residual, o.aba, kOracleTol);
  EXPECT_NEAR(r.bab_residual, o.bab, kOracleTol);
  const QqReport q = qq_value(a, b, rho);
  EXPECT_NEAR(q.q, o.q, kOracleTol);
  EXPECT_NEAR(q.q_y, o.q_y, kOracleTol);
  EXPECT_NEAR(q.q_n, o.q_n, kOracleTol);
  EXPECT_NEAR(ftp_residual(a, b, b.outcomes()[0], rho), o.ftp0, kOracleTol);
  EXPECT_NEAR(ftp_residual(a, b, b.outcomes()[1], rho), o.ftp1, kOracleTol);
  EXPECT_NEAR(max_u_commutator_norm(a, b), o.ucomm, 1e-10);
}

TEST(EffectsOracle, WangBusemeyerPiOverFive) {
  const auto pair = wang_busemeyer_pair(std::numbers::pi / 5);
  expect_oracle(pair.a, pair.b, wb_state(),
                {{{0.057159662098820313, 0.030172530446340523},
                  {0.31531897236618578, 0.59734883508865333}},
                 {{0.10937875500487677, 0.057737112053984234},
                  {0.28775439075854203, 0.54512974218259691}},
                 0.25758186031220154, 0.20637894673809082, 0.18833769385447041,
                 0.0, -0.052219092906056419, 0.052219092906056461,
                 -0.20536276740614506, 0.20536276740614512, 0.69981536457978044});
  EXPECT_NEAR(rre_report(pair.a, pair.b, wb_state()).aa_residual, 0.0, kOracleTol);
}

TEST(EffectsOracle, OkCommutingPair) {
  const auto pair = ok_commuting_pair(testing::params(kOkParamCount, 0.1));
  expect_oracle(pair.a, pair.b, ok_state(),
                {{{0.076734369593580584, 0.12326563040641945},
                  {0.67928119709603996, 0.1207188029039597}},
                 {{0.54274761210792044, 0.13725238789207916},
                  {0.16699708894514664, 0.15300291105485336}},
                 0.54202880920396079, 0.44782806465975145, 0.41405171662495088,
                 0.49829735066523356, 0.032284108150893664, 0.46601324251433984,
                 -0.07601556668962095, 0.076015566689620895, 1.4142128331806481});
  EXPECT_LT(o_commutator_norm(pair.a, pair.b), 1e-12);
}

TEST(EffectsOracle, SrpBinaryPair) {
  const auto pair = srp_binary_pair(testing::params(kSrpPairParamCount, 0.05));
  expect_oracle(pair.a, pair.b, srp_state(),
                {{{0.29621002336169372, 0.20378997663830611},
                  {0.33772992372551935, 0.16227007627448048}},
                 {{0.53700569807086596, 0.21406669005283288},
                  {0.16033871245981626, 0.08858889941648454}},
                 0.24079567470917224, 0.18047181448832028, 0.2186268265770101,
                 0.16711449785117627, -0.073681176857995939, 0.24079567470917224,
                 0.11713244103648579, -0.11713244103648579, 1.4061397098646276});
}

TEST(EffectsOracle, RobertsonThreeByThree) {
  ComplexMatrix a(3, 3);
  a << 1, cplx(0, 1), 0, cplx(0, -1), 0, 2, 0, 2, -1;
  ComplexMatrix b(3, 3);
  b << 0, 1, 0.5, 1, 2, cplx(0, -1), 0.5, cplx(0, 1), 1;
  const auto rho = testing::pure(ket({1.0, cplx(0, 1), 2.0}));
  const RobertsonCheck r = robertson_check(SelfAdjointOperator::from(a),
                                           SelfAdjointOperator::from(b), rho);
  EXPECT_NEAR(r.lhs, 1.2226956153929869, kOracleTol);
  EXPECT_NEAR(r.rhs, 0.33333333333333337, kOracleTol);
  EXPECT_TRUE(r.holds);
}

TEST(Qoe, SameInstrumentHasNone) {
  const Instrument z = testing::luders(pauli_z());
  const QoeReport r = qoe_report(z, z, testing::plus_state());
  EXPECT_EQ(r.max_abs_deviation, 0.0);
  EXPECT_FALSE(r.shows_qoe);
}

TEST(Qoe, ZThenXOnPlus) {
  // p(Z=+, X=+) = 1/4 while p(X=+, Z=+) = 1/2.
  const Instrument z = testing::luders(pauli_z());
  const Instrument x = testing::luders(pauli_x());
  const QoeReport r = qoe_report(z, x, testing::plus_state());
  EXPECT_NEAR(r.max_abs_deviation, 0.25, 1e-15);
  EXPECT_TRUE(r.shows_qoe);
  EXPECT_EQ(r.entries.size(), 4u);
}

TEST(Rre, WangBusemeyerAtBasisState) {
  const double theta = std::numbers::pi / 5;
  const auto pair = wang_busemeyer_pair(theta);
  const auto e0 = testing::pure(ket({1.0, 0.0}));
  const double c2 = std::cos(theta) * std::cos(theta);
  const RreReport r = rre_report(pair.a, pair.b, e0);
  EXPECT_NEAR(r.aba_residual, c2 * (1.0 - c2), 1e-14);
  EXPECT_NEAR(r.aa_residual, 0.0, 1e-15);
}

TEST(Rre, BranchLayout) {
  const auto pair = wang_busemeyer_pair(0.4);
  const RreBranches br = rre_branches(pair.a, pair.b, wb_state());
  EXPECT_EQ(br.aa.size(), 2u);
  EXPECT_EQ(br.aba.size(), 4u);
  EXPECT_EQ(br.bab.size(), 4u);
  const RreReport r = rre_report(pair.a, pair.b, wb_state());
  EXPECT_EQ(r.aba_residual, *std::max_element(br.aba.begin(), br.aba.end()));
  EXPECT_EQ(r.bab_residual, *std::max_element(br.bab.begin(), br.bab.end()));
}

TEST(Qq, RejectsNonBinary) {
  const Instrument three = random_projective(3, 3, 4);
  const Instrument two = random_projective(3, 2, 5);
  try {
    qq_value(three, two, DensityOperator::maximally_mixed(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotBinaryOutcomes);
  }
}

TEST(Ftp, ZThenXOnPlus) {
  const Instrument z = testing::luders(pauli_z());
  const Instrument x = testing::luders(pauli_x());
  // Outcomes come from a numerical eigensolver, so index them by position.
  EXPECT_NEAR(ftp_residual(z, x, x.outcomes()[1], testing::plus_state()), 0.5, 1e-15);
  EXPECT_NEAR(ftp_residual(z, x, x.outcomes()[0], testing::plus_state()), -0.5, 1e-15);
}

TEST(Ftp, UnknownOutcome) {
  const Instrument z = testing::luders(pauli_z());
  EXPECT_THROW(ftp_residual(z, z, 0.5, testing::plus_state()), Error);
}

TEST(JointExistence, CommutingDiagonalFamily) {
  ComplexMatrix a = ComplexMatrix::Zero(4, 4);
  ComplexMatrix b = ComplexMatrix::Zero(4, 4);
  a(2, 2) = a(3, 3) = 1.0;
  b(1, 1) = b(3, 3) = 1.0;
  const std::vector<SpectralDecomposition> obs = {
      spectral_decompose(SelfAdjointOperator::from(a)),
      spectral_decompose(SelfAdjointOperator::from(b))};
  const ComplexVector v = ket({0.1, cplx(0, 0.5), -0.7, 0.3});
  const StateVector psi = StateVector::from(v / v.norm());
  const JointExistence j = joint_existence(obs, psi);
  EXPECT_TRUE(j.exists);
  ASSERT_TRUE(j.joint.has_value());
  ASSERT_EQ(j.joint->size(), 4u);
  for (Index i = 0; i < 4; ++i) {
    EXPECT_NEAR((*j.joint)[static_cast<std::size_t>(i)].probability,
                std::norm(psi.amplitudes()(i)), 1e-14);
  }
}

TEST(JointExistence, ZAndXAtBasisStateFail) {
  const std::vector<SpectralDecomposition> obs = {
      spectral_decompose(SelfAdjointOperator::from(pauli_z())),
      spectral_decompose(SelfAdjointOperator::from(pauli_x()))};
  const JointExistence j = joint_existence(obs, StateVector::from(ket({1.0, 0.0})));
  EXPECT_FALSE(j.exists);
  EXPECT_FALSE(j.joint.has_value());
  EXPECT_NEAR(j.max_discrepancy, 0.5, 1e-14);
}

TEST(JointExistence, SingleObservableIsBorn) {
  const std::vector<SpectralDecomposition> obs = {
      spectral_decompose(SelfAdjointOperator::from(pauli_z()))};
  const JointExistence j = joint_existence(obs, StateVector::from(ket({0.6, 0.8})));
  ASSERT_TRUE(j.exists);
  EXPECT_NEAR((*j.joint)[0].probability, 0.64, 1e-14);
  EXPECT_NEAR((*j.joint)[1].probability, 0.36, 1e-14);
}

TEST(StateCommutation, XAndZAtBasisState) {
  const auto x = SelfAdjointOperator::from(pauli_x());
  const auto z = SelfAdjointOperator::from(pauli_z());
  const auto r = state_dependent_commutation(
      x, z, testing::luders(pauli_x()), testing::luders(pauli_z()),
      StateVector::from(ket({1.0, 0.0})));
  EXPECT_NEAR(r.observable_commutator, 0.0, 1e-15);
  EXPECT_NEAR(r.projection_commutator, 0.5, 1e-14);
  EXPECT_GT(r.update_commutator, 0.1);
}

TEST(StateCommutation, CommonEigenvectorGivesNoOrderEffect) {
  // Both observables have e0 as eigenvector but disagree on span{e1, e2}.
  ComplexMatrix a = ComplexMatrix::Zero(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  a(2, 2) = 3.0;
  ComplexMatrix b = ComplexMatrix::Zero(3, 3);
  b(0, 0) = 1.0;
  b(1, 2) = b(2, 1) = 1.0;
  const Instrument ia = testing::luders(a);
  const Instrument ib = testing::luders(b);
  const auto psi = StateVector::from(ket({1.0, 0.0, 0.0}));
  const auto r = state_dependent_commutation(SelfAdjointOperator::from(a),
                                             SelfAdjointOperator::from(b), ia, ib, psi);
  EXPECT_LT(r.update_commutator, 1e-14);
  EXPECT_LT(r.projection_commutator, 1e-14);
  EXPECT_LT(qoe_deviation(ia, ib, DensityOperator::pure(psi)), 1e-14);
  EXPECT_GT(max_u_commutator_norm(ia, ib), 0.1);
}

TEST(Robertson, Examples) {
  const auto x = SelfAdjointOperator::from(pauli_x());
  const auto z = SelfAdjointOperator::from(pauli_z());
  const RobertsonCheck same = robertson_check(x, x, testing::plus_state());
  EXPECT_NEAR(same.rhs, 0.0, 1e-15);
  EXPECT_TRUE(same.holds);
  const RobertsonCheck mixed = robertson_check(x, z, DensityOperator::maximally_mixed(2));
  EXPECT_NEAR(mixed.lhs, 1.0, 1e-14);
  EXPECT_NEAR(mixed.rhs, 0.0, 1e-15);
  // Z is sharp at e0, so the product of spreads vanishes.
  const RobertsonCheck e0 = robertson_check(x, z, testing::pure(ket({1.0, 0.0})));
  EXPECT_NEAR(e0.lhs, 0.0, 1e-15);
  EXPECT_NEAR(e0.rhs, 0.0, 1e-15);
  EXPECT_TRUE(e0.holds);
}

TEST(Diagnostics, NamesRoundTrip) {
  for (Diagnostic d : {Diagnostic::QoeDeviation, Diagnostic::AbaResidual,
                       Diagnostic::BabResidual, Diagnostic::AaResidual, Diagnostic::QqAbs,
                       Diagnostic::FtpAbs, Diagnostic::UCommNorm, Diagnostic::OCommNorm}) {
    EXPECT_EQ(parse_diagnostic(to_string(d)), d);
  }
  EXPECT_FALSE(parse_diagnostic("bogus").has_value());
}

TEST(EffectsProperties, EntryDeviationMatchesChannelCommutator) {
  Rng rng(31);
  for (int t = 0; t < 200; ++t) {
    const Index d = 2 + static_cast<Index>(rng.below(3));
    const Instrument a = random_unsharp(d, 2 + static_cast<int>(rng.below(2)), rng.next());
    const Instrument b = random_unsharp(d, 2, rng.next());
    const QoeReport r = qoe_report(a, b, random_density(d, rng));
    for (const QoeEntry& e : r.entries) {
      EXPECT_NEAR(e.deviation, e.trace_commutator, 1e-12);
    }
  }
}

TEST(EffectsProperties, QqComplementsSumToZero) {
  Rng rng(32);
  for (int t = 0; t < 200; ++t) {
    const Index d = 2 + static_cast<Index>(rng.below(3));
    const Instrument a = random_unsharp(d, 2, rng.next());
    const Instrument b = random_unsharp(d, 2, rng.next());
    const QqReport q = qq_value(a, b, random_density(d, rng));
    EXPECT_NEAR(q.q + q.q_alt, 0.0, 1e-12);
    EXPECT_NEAR(q.q, q.q_y + q.q_n, 1e-12);
  }
}

TEST(EffectsProperties, ProjectivePairsSatisfyQq) {
  Rng rng(33);
  for (int t = 0; t < 200; ++t) {
    const Index d = 2 + static_cast<Index>(rng.below(4));
    const Index rank = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(d - 1)));
    const auto pair = testing::random_projective_pair(d, rank, rng);
    EXPECT_LE(std::abs(qq_value(pair.a, pair.b, random_density(d, rng)).q), 1e-10);
  }
}

TEST(EffectsProperties, CommutingUpdatesHaveNoOrderEffect) {
  Rng rng(34);
  for (int t = 0; t < 100; ++t) {
    const Index d = 2 + static_cast<Index>(rng.below(4));
    const ComplexMatrix u = random_unitary(d, rng);
    ComplexMatrix da = ComplexMatrix::Zero(d, d);
    ComplexMatrix db = ComplexMatrix::Zero(d, d);
    for (Index i = 0; i < d; ++i) {
      da(i, i) = static_cast<double>(rng.below(3));
      db(i, i) = static_cast<double>(rng.below(3));
    }
    const Instrument a = testing::luders(u * da * u.adjoint());
    const Instrument b = testing::luders(u * db * u.adjoint());
    EXPECT_LE(max_u_commutator_norm(a, b), 1e-10);
    EXPECT_LE(qoe_deviation(a, b, random_density(d, rng)), 1e-10);
  }
}

TEST(EffectsProperties, TrivialFirstMeasurementHasNoFtpResidual) {
  Rng rng(35);
  const std::vector<double> w = {0.25, 0.75};
  for (int t = 0; t < 100; ++t) {
    const Index d = 2 + static_cast<Index>(rng.below(3));
    const Instrument a = trivial_noninvasive(d, w);
    const Instrument b = random_unsharp(d, 3, rng.next());
    const DensityOperator rho = random_density(d, rng);
    EXPECT_LE(max_ftp_residual(a, b, rho), 1e-12);
    EXPECT_LE(max_u_commutator_norm(a, b), 1e-12);
  }
  // Lueders Z leaves the maximally mixed state unchanged.
  const Instrument z = testing::luders(pauli_z());
  const Instrument x = testing::luders(pauli_x());
  EXPECT_LE(max_ftp_residual(z, x, DensityOperator::maximally_mixed(2)), 1e-15);
}

TEST(EffectsProperties, RobertsonHoldsOnRandomTriples) {
  Rng rng(36);
  for (int t = 0; t < 1000; ++t) {
    const Index d = 2 + static_cast<Index>(rng.below(5));
    const RobertsonCheck r = robertson_check(random_observable(d, rng),
                                             random_observable(d, rng),
                                             random_density(d, rng));
    EXPECT_TRUE(r.holds) << r.lhs << " < " << r.rhs;
  }
}

TEST(EffectsProperties, DimensionMismatch) {
  const Instrument z = testing::luders(pauli_z());
  const Instrument three = random_projective(3, 2, 1);
  try {
    qoe_deviation(z, three, DensityOperator::maximally_mixed(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

}  // namespace
}  // namespace qmt
