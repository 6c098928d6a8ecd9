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

// Ground truth by brute force: exact diagonalization, exact evolution and
// finite differences. Nothing in here uses perturbative corrections, so it
// can be used to check them.

#pragma once

#include <functional>
#include <vector>

#include "weakmetro/operator_core.hpp"
#include "weakmetro/perturbation.hpp"
#include "weakmetro/static_estimation.hpp"

namespace weakmetro::oracle {

inline constexpr double kDefaultStep = 1e-4;
inline constexpr int kDefaultPathSteps = 4;

using ScalarFamily = std::function<StateVector(double)>;
using VectorFamily = std::function<StateVector(const RealVector&)>;

/// Eigenvector of H0 + sum lambda_mu H_mu continuously connected to the
/// `level`-th eigenvector of H0. The coupling path is walked in
/// `path_steps` equal steps and the eigenvector with the largest overlap is
/// followed; the phase makes the overlap with the unperturbed eigenvector
/// real and positive. Throws LevelTrackingError when two candidates are
/// comparably close at some step.
StateVector exact_eigenstate(const HermitianOperator& h0,
                             const std::vector<HermitianOperator>& perturbations,
                             const RealVector& lambdas, int level,
                             int path_steps = kDefaultPathSteps);

/// lambda -> exact_eigenstate(problem, lambda).
VectorFamily exact_eigenstate_family(const PerturbationProblem& problem);

/// lambda -> e^{-i H(lambda) t} psi0.
VectorFamily exact_evolved_family(const PerturbationProblem& problem, const StateVector& psi0,
                                  double t);

/// Restricts a multi-parameter family to coordinate `mu` around `base`.
ScalarFamily along(VectorFamily family, RealVector base, int mu);

struct FidelityQfi {
  /// 8 (1 - |<psi(l - e/2)|psi(l + e/2)>|) / e^2 at the requested step.
  double value;
  /// Same quotient at step e/2.
  double half_step;
  /// Richardson combination (4 half_step - value) / 3.
  double extrapolated;
};

FidelityQfi fidelity_qfi(const ScalarFamily& family, double lambda, double eps = kDefaultStep);

struct FiniteDifferenceQfim {
  QfiMatrix qfim;
  UhlmannMatrix uhlmann;
};

/// Central-difference QFIM and Uhlmann curvature,
///   Q = 4 Re G, D = 4 Im G, G_{mu nu} = <d_mu psi|d_nu psi> - <d_mu psi|psi><psi|d_nu psi>,
/// which is invariant under lambda-dependent global phases. Derivatives are
/// Richardson-combined from steps eps and eps/2; throws StepSizeError when
/// the two steps disagree by more than 10%.
FiniteDifferenceQfim fd_qfim(const VectorFamily& family, const RealVector& lambda,
                             double eps = kDefaultStep);

}  // namespace weakmetro::oracle
