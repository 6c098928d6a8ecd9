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

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "weakmetro/operator_core.hpp"
#include "weakmetro/perturbation.hpp"

namespace weakmetro {

/// Eigenvalues of Q below this fraction of the largest one make Q singular.
inline constexpr double kSingularityTolerance = 1e-10;
/// Slack allowed when clipping R into [0, 1].
inline constexpr double kQuantumnessSlack = 1e-9;

/// Real symmetric positive semidefinite P x P matrix.
class QfiMatrix {
 public:
  explicit QfiMatrix(RealMatrix entries);
  const RealMatrix& entries() const { return entries_; }
  double operator()(int mu, int nu) const { return entries_(mu, nu); }
  int size() const { return static_cast<int>(entries_.rows()); }

 private:
  RealMatrix entries_;
};

/// Real antisymmetric P x P matrix with zero diagonal.
class UhlmannMatrix {
 public:
  explicit UhlmannMatrix(RealMatrix entries);
  static UhlmannMatrix zero(int size);
  const RealMatrix& entries() const { return entries_; }
  double operator()(int mu, int nu) const { return entries_(mu, nu); }
  int size() const { return static_cast<int>(entries_.rows()); }

 private:
  RealMatrix entries_;
};

/// Everything a caller needs to judge a statistical model at one point.
/// A singular Q is recorded (bound_b = +inf, quantumness_r empty) rather
/// than thrown; call require_regular() for the strict behaviour.
struct EstimationReport {
  QfiMatrix qfim;
  UhlmannMatrix uhlmann;
  double bound_b;
  std::optional<double> quantumness_r;
  int qfim_rank;
  std::optional<std::vector<HermitianOperator>> slds;

  bool singular() const { return qfim_rank < qfim.size(); }
  /// Throws SingularQfimError when Q is singular.
  void require_regular() const;
};

/// 4 N
double qfi_single(const FirstOrderCorrection& correction);

/// SLD of the normalized first-order family psi(lambda) at `lambda`, to
/// first order:
///
///   2 sqrt(N) [ |psi0><phi| + |phi><psi0| + 2 lambda sqrt(N) |phi><phi| ]
///     - 4 lambda N |psi0><psi0|
///
/// At lambda = 0 this is 2 sqrt(N) sigma_x on span{psi0, phi}.
/// Throws ZeroCorrectionError when N = 0.
HermitianOperator sld_single(const FirstOrderCorrection& correction, double lambda = 0.0);

/// Pure-state SLD 2 (|dpsi><psi| + |psi><dpsi|).
HermitianOperator sld_pure(const StateVector& psi, const StateVector& dpsi);

/// Q_{mu nu} = 4 Re <psi^1_mu|psi^1_nu> = 4 sqrt(N_mu N_nu) Re omega_{mu nu}.
QfiMatrix qfim_static(const std::vector<FirstOrderCorrection>& corrections);

/// D_{mu nu} = 4 Im <psi^1_mu|psi^1_nu> = 4 sqrt(N_mu N_nu) Im omega_{mu nu}.
UhlmannMatrix uhlmann_static(const std::vector<FirstOrderCorrection>& corrections);

/// Number of eigenvalues of Q above kSingularityTolerance times the largest.
int qfim_rank(const QfiMatrix& q);

/// Tr[Q^-1]. Throws SingularQfimError (carrying the rank) when Q is singular.
double bound_B(const QfiMatrix& q);

/// Asymptotic incompatibility. P = 2 uses sqrt(det D / det Q); larger P use
/// quantumness_R_spectral. Throws SingularQfimError when Q is singular.
double quantumness_R(const QfiMatrix& q, const UhlmannMatrix& d);

/// Largest |eigenvalue| of i Q^-1 D, for any P.
double quantumness_R_spectral(const QfiMatrix& q, const UhlmannMatrix& d);

/// Assembles B and R from Q and D, recording singularity instead of throwing.
EstimationReport make_report(QfiMatrix q, UhlmannMatrix d);

/// Leading-order report for the stationary perturbed state of `problem`.
/// SLDs, when requested, are taken at lambda = 0.
EstimationReport static_report(const PerturbationProblem& problem, bool with_slds = false);

/// Explicit two-parameter SLDs from the angle decomposition, with the
/// matrix elements on the basis {psi0, j, k}
///
///   [L1]: 0, 2 sqrt(N1) c1, 2 sqrt(N1) s1 in the first row and column,
///         4 (l1 N1 c1^2 + l2 sqrt(N1 N2) c1 c2 cos(gamma)) on (j, j), ...
///
/// embedded back into the full Hilbert space. These are the SLDs of the
/// unnormalized first-order expansion psi0 + l1 psi^1_1 + l2 psi^1_2.
std::pair<HermitianOperator, HermitianOperator> sld_two_param_explicit(
    const AngleDecomposition& decomposition, double n1, double n2, double lambda1,
    double lambda2);

}  // namespace weakmetro
