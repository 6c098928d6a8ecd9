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
#include <limits>

#include "test_support.hpp"
#include "weakmetro/dynamic_estimation.hpp"
#include "weakmetro/errors.hpp"
#include "weakmetro/models.hpp"

namespace weakmetro {
namespace {

using testing::kPi;

// Values below come from an independent numpy evaluation of the closed-form
// Q11(t), Q22(t) (bisection / golden section at 1e-15).
constexpr double kAnharmonicCrossingLow = 0.7213246398834835;
constexpr double kAnharmonicCrossingHigh = 2.787753355206531;
constexpr double kAnharmonicMinimumTime = 2.0180230121810627;
constexpr double kAnharmonicMinimumBound = 0.14178767862548836;
constexpr double kAnharmonicBoundAtTwo = 0.1418217036882795;

TEST(Sinc, Convention) {
  EXPECT_EQ(sinc(0.0), 1.0);
  EXPECT_NEAR(sinc(1e-9), 1.0, 1e-16);
  EXPECT_NEAR(sinc(kPi), 0.0, 1e-16);
  EXPECT_NEAR(sinc(0.5), std::sin(0.5) / 0.5, 1e-16);
}

TEST(KOperatorSpectral, QubitClosedForm) {
  const SpectralDecomposition spectrum = hermitian_eig(sigma_z());
  for (double t : {0.0, 0.4, 1.0, 2.5, 7.0}) {
    const KOperator k = k_operator_spectral(spectrum, sigma_x(), t);
    EXPECT_LE(std::abs(k.op.matrix()(0, 1) - std::polar(std::sin(t), t)), 1e-14) << t;
    EXPECT_LE(std::abs(k.op.matrix()(1, 0) - std::polar(std::sin(t), -t)), 1e-14) << t;
    EXPECT_LE(std::abs(k.op.matrix()(0, 0)), 1e-15);
    EXPECT_LE(std::abs(k.op.matrix()(1, 1)), 1e-15);
  }
}

TEST(KOperatorSpectral, CommutingPerturbationGrowsLinearly) {
  const HermitianOperator h0 = spin1_z();
  const KOperator k = k_operator_spectral(hermitian_eig(h0), h0, 1.7);
  EXPECT_LE(max_abs(k.op.matrix() - 1.7 * h0.matrix()), 1e-14);
  const KOperator kq = k_operator_quadrature(h0, h0, 1.7);
  EXPECT_LE(max_abs(kq.op.matrix() - 1.7 * h0.matrix()), 1e-13);
}

TEST(KOperatorSpectral, AnharmonicVacuumExpectations) {
  const auto problem = build_model({ModelKind::kAnharmonic2Param});
  const StateVector vacuum = testing::basis_state(problem.dim(), 0);
  for (double t : {0.1, 1.0, 2.0, kPi, 5.5}) {
    const auto ks = k_operators(problem, t);
    EXPECT_LE(std::abs(expectation(vacuum, ks[0].op.matrix())), 1e-10) << t;
    EXPECT_LE(std::abs(expectation(vacuum, ks[1].op.matrix()) - 0.75 * t), 1e-10) << t;
  }
}

TEST(KOperator, ZeroAtTimeZeroAndRejectsNegativeTime) {
  auto rng = testing::make_rng(31);
  const HermitianOperator h0 = testing::random_hermitian(4, rng);
  const HermitianOperator h = testing::random_hermitian(4, rng);
  EXPECT_EQ(max_abs(k_operator_spectral(hermitian_eig(h0), h, 0.0).op.matrix()), 0.0);
  EXPECT_EQ(max_abs(k_operator_quadrature(h0, h, 0.0).op.matrix()), 0.0);
  EXPECT_THROW(k_operator_spectral(hermitian_eig(h0), h, -1.0), ValidationError);
  EXPECT_THROW(k_operator_quadrature(h0, h, -1.0), ValidationError);
  EXPECT_THROW(k_operator_quadrature(h0, sigma_x(), 1.0), ValidationError);
}

TEST(KOperator, SpectralMatchesQuadratureOnRandomPairs) {
  auto rng = testing::make_rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = testing::uniform_int(rng, 2, 12);
    const HermitianOperator h0 = testing::random_hermitian(dim, rng);
    const HermitianOperator h = testing::random_hermitian(dim, rng);
    const double t = testing::uniform(rng, 0.0, 10.0);
    const KOperator spectral = k_operator_spectral(hermitian_eig(h0), h, t);
    const KOperator quadrature = k_operator_quadrature(h0, h, t);
    EXPECT_LE(max_abs(spectral.op.matrix() - quadrature.op.matrix()), 1e-8) << trial;
  }
}

TEST(QfiDynamicSingle, QubitMatchesClosedFormOnGrid) {
  const auto problem = build_model({ModelKind::kQubit1Param});
  for (double t : linspace(0.0, 2 * kPi, 13)) {
    const KOperator k = k_operators(problem, t).front();
    for (double theta : linspace(0.0, kPi, 7)) {
      for (double phi : linspace(0.0, 2 * kPi, 7)) {
        const StateVector psi = default_probe({ModelKind::kQubit1Param}, theta, phi);
        EXPECT_NEAR(qfi_dynamic_single(psi, k), reference_qubit_dynamic_qfi(t, theta, phi), 1e-12);
      }
    }
  }
}

TEST(QfiDynamicSingle, QubitPeaksAtQuarterPeriod) {
  const auto problem = build_model({ModelKind::kQubit1Param});
  const StateVector psi = default_probe({ModelKind::kQubit1Param}, 0.0, 0.0);
  EXPECT_NEAR(qfi_dynamic_single(psi, k_operators(problem, kPi / 2).front()), 4.0, 1e-14);
  EXPECT_EQ(qfi_dynamic_single(psi, k_operators(problem, 0.0).front()), 0.0);
  for (double t : linspace(0.0, kPi, 31)) {
    EXPECT_LE(qfi_dynamic_single(psi, k_operators(problem, t).front()), 4.0 + 1e-14);
  }
}

TEST(QfimDynamic, QutritClosedForm) {
  for (double alpha : {0.4, kPi / 3, kPi / 2, 2.2}) {
    const auto problem = build_model({ModelKind::kQutrit2Param, alpha});
    for (double t : {0.3, 1.0, 2.0, kPi, 4.5}) {
      const EstimationReport r = dynamic_report(problem, problem.reference_state(), t);
      const QutritDynamicReference ref = reference_qutrit_dynamic(t, alpha);
      EXPECT_LE((r.qfim.entries() - ref.qfim).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LE(r.uhlmann.entries().cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_NEAR(r.bound_b, ref.bound_b, 1e-12 * ref.bound_b);
      EXPECT_NEAR(*r.quantumness_r, 0.0, 1e-12);
    }
  }
}

TEST(QfimDynamic, AnharmonicClosedForm) {
  const auto problem = build_model({ModelKind::kAnharmonic2Param});
  for (double t : linspace(0.1, 2 * kPi, 40)) {
    const EstimationReport r = dynamic_report(problem, problem.reference_state(), t);
    const AnharmonicDynamicReference ref = reference_anharmonic_dynamic(t);
    EXPECT_NEAR(r.qfim(0, 0), ref.q11, 1e-10) << t;
    EXPECT_NEAR(r.qfim(1, 1), ref.q22, 1e-10) << t;
    EXPECT_NEAR(r.qfim(0, 1), ref.q12, 1e-10) << t;
  }
  const EstimationReport at_two = dynamic_report(problem, problem.reference_state(), 2.0);
  EXPECT_NEAR(at_two.bound_b, kAnharmonicBoundAtTwo, 1e-12);
}

TEST(QfimDynamic, AnharmonicSingularAtHalfPeriod) {
  const auto problem = build_model({ModelKind::kAnharmonic2Param});
  const EstimationReport r = dynamic_report(problem, problem.reference_state(), kPi);
  EXPECT_NEAR(r.qfim(0, 0), 58.0 / 3.0, 1e-10);
  EXPECT_NEAR(r.qfim(1, 1), 0.0, 1e-10);
  EXPECT_TRUE(r.singular());
  EXPECT_EQ(r.bound_b, std::numeric_limits<double>::infinity());
  EXPECT_THROW(r.require_regular(), SingularQfimError);
}

TEST(QfimDynamic, RejectsMixedTimesAndEmptyInput) {
  const auto problem = build_model({ModelKind::kQutrit2Param, 0.5});
  std::vector<KOperator> ks = k_operators(problem, 1.0);
  ks[1] = k_operators(problem, 2.0)[1];
  EXPECT_THROW(qfim_dynamic(problem.reference_state(), ks), ValidationError);
  EXPECT_THROW(qfim_dynamic(problem.reference_state(), {}), ValidationError);
}

TEST(QfimDynamic, CovarianceIsPositiveSemidefinite) {
  auto rng = testing::make_rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = testing::uniform_int(rng, 2, 10);
    const PerturbationProblem problem(testing::random_hermitian(dim, rng),
                                      {testing::random_hermitian(dim, rng),
                                       testing::random_hermitian(dim, rng),
                                       testing::random_hermitian(dim, rng)},
                                      0);
    const EstimationReport r =
        dynamic_report(problem, testing::random_state(dim, rng), testing::uniform(rng, 0, 6));
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(r.qfim.entries());
    EXPECT_GE(solver.eigenvalues().minCoeff(), -1e-10);
    EXPECT_LE((r.uhlmann.entries() + r.uhlmann.entries().transpose()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(QfimDynamic, PeriodicForIntegerGapSpectra) {
  struct Case {
    ModelSpec spec;
    double period;
  };
  const Case cases[] = {{{ModelKind::kQubit2Param, 0.7}, kPi},
                        {{ModelKind::kQutrit2Param, 0.7}, 2 * kPi},
                        {{ModelKind::kAnharmonic2Param}, 2 * kPi}};
  for (const auto& c : cases) {
    const auto problem = build_model(c.spec);
    const StateVector psi = default_probe(c.spec, 0.8, 0.3);
    for (double t : {0.3, 1.1, 2.0}) {
      const EstimationReport a = dynamic_report(problem, psi, t);
      const EstimationReport b = dynamic_report(problem, psi, t + c.period);
      EXPECT_LE((a.qfim.entries() - b.qfim.entries()).cwiseAbs().maxCoeff(), 1e-9)
          << to_string(c.spec.kind);
      EXPECT_LE((a.uhlmann.entries() - b.uhlmann.entries()).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(QfimDynamic, FockTruncationConverged) {
  const auto small = build_model({ModelKind::kAnharmonic2Param, 0.0, 16});
  const auto large = build_model({ModelKind::kAnharmonic2Param, 0.0, 24});
  for (double t : {0.5, 2.0, 4.0}) {
    const EstimationReport a = dynamic_report(small, small.reference_state(), t);
    const EstimationReport b = dynamic_report(large, large.reference_state(), t);
    EXPECT_LE((a.qfim.entries() - b.qfim.entries()).cwiseAbs().maxCoeff(), 1e-9) << t;
  }
}

TEST(KOperator, FirstOrderEvolutionIsAccurate) {
  const double lambda = 1e-3;
  for (const ModelSpec spec : {ModelSpec{ModelKind::kQubit1Param},
                               ModelSpec{ModelKind::kQutrit2Param, 0.5},
                               ModelSpec{ModelKind::kAnharmonic2Param}}) {
    const auto problem = build_model(spec);
    const StateVector psi0 = default_probe(spec, 1.0, 0.2);
    const HermitianOperator& h1 = problem.perturbation(0);
    const double h1_norm = hermitian_eig(h1).eigenvalues.cwiseAbs().maxCoeff();
    RealVector lambdas = RealVector::Zero(problem.parameter_count());
    lambdas(0) = lambda;
    const HermitianOperator h = problem.hamiltonian(lambdas);
    for (double t : linspace(0.0, kPi, 9)) {
      const StateVector exact = evolve(h, t, psi0);
      const ComplexMatrix k = k_operators(problem, t).front().op.matrix();
      const StateVector approx =
          propagator(problem.unperturbed(), t) * (psi0 - Complex(0, lambda) * (k * psi0));
      const double scale = lambda * t * h1_norm;
      EXPECT_LE((exact - approx).norm(), 10 * scale * scale + 1e-14) << to_string(spec.kind) << t;
    }
  }
}

TEST(ScanTime, ValidatesGrid) {
  const auto problem = build_model({ModelKind::kQubit1Param});
  const StateVector psi = problem.reference_state();
  EXPECT_THROW(scan_time(problem, psi, {}), ValidationError);
  EXPECT_THROW(scan_time(problem, psi, {1.0, 1.0}), ValidationError);
  EXPECT_THROW(scan_time(problem, psi, {-1.0, 1.0}), ValidationError);
  EXPECT_THROW(linspace(0, 1, 1), ValidationError);
}

TEST(ScanTime, AnharmonicBeatsStaticInsideWindow) {
  const auto problem = build_model({ModelKind::kAnharmonic2Param});
  const StateVector psi = problem.reference_state();
  const TimeScan scan = scan_time(problem, psi, linspace(0.05, kPi, 200));
  ASSERT_TRUE(scan.static_reference.has_value());
  EXPECT_NEAR(*scan.static_reference, 466.0 / 1131.0, 1e-12);
  ASSERT_EQ(scan.reports.size(), 200u);
  EXPECT_EQ(scan.bounds().back(), std::numeric_limits<double>::infinity());

  const auto crossings = bound_crossings(problem, psi, scan, *scan.static_reference);
  ASSERT_EQ(crossings.size(), 2u);
  EXPECT_NEAR(crossings[0], kAnharmonicCrossingLow, 1e-9);
  EXPECT_NEAR(crossings[1], kAnharmonicCrossingHigh, 1e-9);
  for (std::size_t i = 0; i < scan.times.size(); ++i) {
    const bool inside = scan.times[i] > crossings[0] && scan.times[i] < crossings[1];
    EXPECT_EQ(scan.reports[i].bound_b < *scan.static_reference, inside) << scan.times[i];
  }

  const BoundMinimum best = bound_minimum(problem, psi, scan, 1.5, 2.5);
  EXPECT_NEAR(best.time, kAnharmonicMinimumTime, 1e-6);
  EXPECT_NEAR(best.bound, kAnharmonicMinimumBound, 1e-12);
}

TEST(ScanTime, QutritBestAtHalfPeriod) {
  const auto problem = build_model({ModelKind::kQutrit2Param, kPi / 2});
  const StateVector psi = problem.reference_state();
  const TimeScan scan = scan_time(problem, psi, linspace(0.1, 2 * kPi - 0.1, 101));
  const BoundMinimum best = bound_minimum(problem, psi, scan, 0.1, 2 * kPi - 0.1);
  EXPECT_NEAR(best.time, kPi, 1e-6);
  EXPECT_NEAR(best.bound, 0.125, 1e-12);
}

TEST(ScanTime, NoStaticReferenceForForeignProbe) {
  const auto problem = build_model({ModelKind::kQubit1Param});
  const StateVector psi = default_probe({ModelKind::kQubit1Param}, 1.0, 0.0);
  const TimeScan scan = scan_time(problem, psi, {0.5, 1.0});
  EXPECT_FALSE(scan.static_reference.has_value());
}

}  // namespace
}  // namespace weakmetro
