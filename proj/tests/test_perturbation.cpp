// Copyright 2026 The weakmetro Authors
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

#include <cmath>

#include "test_support.hpp"
#include "weakmetro/errors.hpp"
#include "weakmetro/models.hpp"
#include "weakmetro/oracle.hpp"
#include "weakmetro/perturbation.hpp"

namespace weakmetro {
namespace {

using testing::kPi;

double wrap(double a) {
  a = std::fmod(a, 2 * kPi);
  return a < 0 ? a + 2 * kPi : a;
}

// Distance on the circle, so 2 pi - 1e-15 and 0 count as equal.
double angle_distance(double a, double b) {
  const double d = std::abs(wrap(a) - wrap(b));
  return std::min(d, 2 * kPi - d);
}

PerturbationProblem random_problem(testing::Rng& rng, int dim, int params, int level) {
  std::vector<HermitianOperator> perturbations;
  for (int mu = 0; mu < params; ++mu) perturbations.push_back(testing::random_hermitian(dim, rng));
  return PerturbationProblem(testing::random_hermitian(dim, rng), std::move(perturbations), level);
}

TEST(PerturbationProblem, ValidatesShapeAndLevel) {
  EXPECT_THROW(PerturbationProblem(sigma_z(), {}, 0), ValidationError);
  EXPECT_THROW(PerturbationProblem(sigma_z(), {spin1_x()}, 0), ValidationError);
  EXPECT_THROW(PerturbationProblem(sigma_z(), {sigma_x()}, 2), ValidationError);
  EXPECT_THROW(PerturbationProblem(sigma_z(), {sigma_x()}, -1), ValidationError);
}

TEST(FirstOrderCorrection, QubitIsHalfOfOne) {
  const auto problem = build_model({ModelKind::kQubit1Param});
  const FirstOrderCorrection c = first_order_correction(problem, 0);
  EXPECT_NEAR(std::abs(c.raw(0)), 0.0, 1e-15);
  EXPECT_NEAR(c.raw(1).real(), 0.5, 1e-15);
  EXPECT_NEAR(c.raw(1).imag(), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(c.squared_norm, 0.25);
  ASSERT_TRUE(c.direction.has_value());
  EXPECT_LE((c.raw - std::sqrt(c.squared_norm) * *c.direction).norm(), 1e-15);
}

TEST(FirstOrderCorrection, AnharmonicNorms) {
  for (int dim : {8, 12, 16, 24}) {
    const auto problem = build_model({ModelKind::kAnharmonic2Param, 0.0, dim});
    EXPECT_NEAR(first_order_correction(problem, 0).squared_norm, 29.0 / 24.0, 1e-10) << dim;
    EXPECT_NEAR(first_order_correction(problem, 1).squared_norm, 39.0 / 32.0, 1e-10) << dim;
  }
}

TEST(FirstOrderCorrection, CommutingPerturbationVanishes) {
  const PerturbationProblem problem(sigma_z(), {sigma_z()}, 1);
  const FirstOrderCorrection c = first_order_correction(problem, 0);
  EXPECT_EQ(c.squared_norm, 0.0);
  EXPECT_TRUE(c.vanishes());
  EXPECT_EQ(c.raw.norm(), 0.0);
}

TEST(FirstOrderCorrection, DegenerateCoupledLevelIsRefused) {
  ComplexMatrix h0 = ComplexMatrix::Zero(3, 3);
  h0.diagonal() << 1.0, 1.0, 2.0;
  ComplexMatrix coupling = ComplexMatrix::Zero(3, 3);
  coupling(0, 1) = coupling(1, 0) = 1.0;
  const PerturbationProblem problem(HermitianOperator(h0), {HermitianOperator(coupling)}, 0);
  EXPECT_THROW(first_order_correction(problem, 0), DegeneracyError);
  try {
    first_order_correction(problem, 0);
  } catch (const DegeneracyError& e) {
    EXPECT_EQ(e.level(), 0);
    EXPECT_EQ(e.partner(), 1);
  }
}

TEST(FirstOrderCorrection, DegenerateButUncoupledLevelIsFine) {
  ComplexMatrix h0 = ComplexMatrix::Zero(3, 3);
  h0.diagonal() << 1.0, 1.0, 2.0;
  ComplexMatrix coupling = ComplexMatrix::Zero(3, 3);
  coupling(0, 2) = coupling(2, 0) = 1.0;
  const PerturbationProblem problem(HermitianOperator(h0), {HermitianOperator(coupling)}, 0);
  EXPECT_NEAR(first_order_correction(problem, 0).squared_norm, 1.0, 1e-14);
}

TEST(FirstOrderCorrection, OrthogonalToReferenceOnRandomProblems) {
  auto rng = testing::make_rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = testing::uniform_int(rng, 2, 12);
    const auto problem = random_problem(rng, dim, 2, testing::uniform_int(rng, 0, dim - 1));
    for (const auto& c : first_order_corrections(problem)) {
      EXPECT_LE(std::abs(problem.reference_state().dot(c.raw)), 1e-10);
      EXPECT_NEAR(c.squared_norm, c.raw.squaredNorm(), 1e-12 * std::max(1.0, c.squared_norm));
    }
  }
}

TEST(Overlaps, QutritIsCosAlpha) {
  for (double alpha : {0.3, 1.0, kPi / 2, 2.5}) {
    const auto problem = build_model({ModelKind::kQutrit2Param, alpha});
    const OverlapMatrix w = overlaps(first_order_corrections(problem));
    EXPECT_NEAR(w(0, 1).real(), std::cos(alpha), 1e-14);
    EXPECT_NEAR(w(0, 1).imag(), 0.0, 1e-14);
  }
}

TEST(Overlaps, QubitTwoParameterIsPhase) {
  for (double alpha : {0.3, 1.0, kPi / 2, 2.5}) {
    const auto problem = build_model({ModelKind::kQubit2Param, alpha});
    const OverlapMatrix w = overlaps(first_order_corrections(problem));
    EXPECT_LE(std::abs(w(0, 1) - std::polar(1.0, alpha)), 1e-14);
  }
}

TEST(Overlaps, AnharmonicPairIsOrthogonal) {
  const auto problem = build_model({ModelKind::kAnharmonic2Param});
  EXPECT_LE(std::abs(overlaps(first_order_corrections(problem))(0, 1)), 1e-14);
}

TEST(Overlaps, ZeroCorrectionIsRefused) {
  const PerturbationProblem problem(sigma_z(), {sigma_x(), sigma_z()}, 1);
  EXPECT_THROW(overlaps(first_order_corrections(problem)), ZeroCorrectionError);
}

TEST(Overlaps, HermitianWithUnitDiagonalOnRandomProblems) {
  auto rng = testing::make_rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto problem = random_problem(rng, 6, 3, 2);
    const OverlapMatrix w = overlaps(first_order_corrections(problem));
    EXPECT_LE(max_abs(w.entries() - w.entries().adjoint()), 1e-14);
    for (int mu = 0; mu < 3; ++mu) {
      EXPECT_NEAR(w(mu, mu).real(), 1.0, 1e-14);
      for (int nu = 0; nu < 3; ++nu) EXPECT_LE(std::abs(w(mu, nu)), 1.0 + 1e-12);
    }
  }
}

TEST(AngleDecomposition, QutritAnglesFollowMixingAngle) {
  for (double alpha : {kPi / 2, kPi / 3, 0.4}) {
    const auto problem = build_model({ModelKind::kQutrit2Param, alpha});
    const auto cs = first_order_corrections(problem);
    const AngleDecomposition dec = angle_decomposition(cs[0], cs[1]);
    EXPECT_LE(angle_distance(dec.theta1, 3 * kPi / 2), 1e-12) << alpha;
    EXPECT_LE(angle_distance(dec.theta2, 3 * kPi / 2), 1e-12) << alpha;
    EXPECT_LE(angle_distance(dec.gamma, -alpha), 1e-12) << alpha;
    EXPECT_LE(angle_distance(dec.varphi, 2 * alpha), 1e-12) << alpha;
    for (double a : {dec.theta1, dec.theta2, dec.gamma, dec.varphi}) {
      EXPECT_GE(a, 0.0);
      EXPECT_LT(a, 2 * kPi);
    }
  }
}

TEST(AngleDecomposition, OrthogonalInputsReconstructExactly) {
  const auto problem = build_model({ModelKind::kAnharmonic2Param});
  const auto cs = first_order_corrections(problem);
  const AngleDecomposition dec = angle_decomposition(cs[0], cs[1]);
  const auto [phi1, phi2] = dec.directions();
  EXPECT_LE((phi1 - *cs[0].direction).norm(), 1e-10);
  EXPECT_LE((phi2 - *cs[1].direction).norm(), 1e-10);
  EXPECT_LE(std::abs(dec.overlap()), 1e-12);
}

TEST(AngleDecomposition, ParallelCorrectionsAreRefused) {
  const auto problem = build_model({ModelKind::kQubit2Param, 0.8});
  const auto cs = first_order_corrections(problem);
  EXPECT_THROW(angle_decomposition(cs[0], cs[1]), ParallelCorrectionsError);
}

TEST(AngleDecomposition, RoundTripOnRandomPairs) {
  auto rng = testing::make_rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = testing::uniform_int(rng, 3, 10);
    const auto problem = random_problem(rng, dim, 2, testing::uniform_int(rng, 0, dim - 1));
    const auto cs = first_order_corrections(problem);
    const AngleDecomposition dec = angle_decomposition(cs[0], cs[1]);
    const auto [phi1, phi2] = dec.directions();
    EXPECT_LE((phi1 - *cs[0].direction).norm(), 1e-10);
    EXPECT_LE((phi2 - *cs[1].direction).norm(), 1e-10);
    EXPECT_LE(std::abs(dec.overlap() - cs[0].direction->dot(*cs[1].direction)), 1e-10);
    EXPECT_LE(std::abs(dec.basis_j.dot(dec.basis_k)), 1e-12);
    EXPECT_LE(std::abs(dec.reference.dot(dec.basis_j)), 1e-10);
    EXPECT_LE(std::abs(dec.reference.dot(dec.basis_k)), 1e-10);
  }
}

TEST(PerturbedState, QubitAmplitudes) {
  const auto problem = build_model({ModelKind::kQubit1Param});
  RealVector lambda(1);
  lambda << 0.01;
  const StateVector psi = perturbed_state(problem, lambda);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-15);
  EXPECT_NEAR((psi(1) / psi(0)).real(), 0.005, 1e-15);
  EXPECT_NEAR((psi(1) / psi(0)).imag(), 0.0, 1e-15);
}

TEST(PerturbedState, ZeroCouplingGivesReference) {
  const auto problem = build_model({ModelKind::kQutrit2Param, 0.7});
  EXPECT_EQ(perturbed_state(problem, RealVector::Zero(2)), problem.reference_state());
}

TEST(PerturbedState, QubitTwoParameterAmplitudes) {
  const double alpha = 0.9;
  const auto problem = build_model({ModelKind::kQubit2Param, alpha});
  RealVector lambda(2);
  lambda << 2e-3, -1e-3;
  const StateVector psi = perturbed_state(problem, lambda);
  const Complex expected = 0.5 * (lambda(0) + lambda(1) * std::polar(1.0, alpha));
  EXPECT_LE(std::abs(psi(1) / psi(0) - expected), 1e-15);
}

TEST(PerturbedState, RejectsWrongCouplingCount) {
  const auto problem = build_model({ModelKind::kQubit1Param});
  EXPECT_THROW(perturbed_state(problem, RealVector::Zero(2)), ValidationError);
}

TEST(PerturbedState, WithinSecondOrderOfExactEigenstate) {
  auto rng = testing::make_rng(14);
  for (auto kind : {ModelKind::kQubit1Param, ModelKind::kQubit2Param, ModelKind::kQutrit2Param,
                    ModelKind::kAnharmonic2Param}) {
    const auto problem = build_model({kind, 0.6});
    for (int trial = 0; trial < 10; ++trial) {
      RealVector lambda(problem.parameter_count());
      for (int mu = 0; mu < lambda.size(); ++mu) lambda(mu) = testing::uniform(rng, -1.0, 1.0);
      lambda *= 1e-3 / lambda.norm();
      const StateVector approx = perturbed_state(problem, lambda);
      const StateVector exact = oracle::exact_eigenstate(problem.h0(), problem.perturbations(),
                                                         lambda, problem.level());
      EXPECT_LE((testing::align_to(exact, approx) - approx).norm(), 10 * lambda.squaredNorm())
          << to_string(kind);
    }
  }
}

}  // namespace
}  // namespace weakmetro
