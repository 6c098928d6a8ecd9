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

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "weakmetro/operator_core.hpp"

namespace weakmetro {

/// Levels closer than this fraction of the H0 spectral spread count as
/// degenerate.
inline constexpr double kDegeneracyTolerance = 1e-8;
/// Couplings |<m|H_mu|n>| below this fraction of ‖H_mu‖_max are treated as
/// exact zeros.
inline constexpr double kCouplingTolerance = 1e-12;
/// |omega| within this of 1 means the two corrections are parallel.
inline constexpr double kParallelTolerance = 1e-10;

/// H = H0 + sum_mu lambda_mu H_mu, perturbing the unperturbed eigenstate
/// with index `level` in the ascending spectrum of H0.
class PerturbationProblem {
 public:
  PerturbationProblem(HermitianOperator h0, std::vector<HermitianOperator> perturbations,
                      int level);

  const HermitianOperator& h0() const { return h0_; }
  const std::vector<HermitianOperator>& perturbations() const { return perturbations_; }
  const HermitianOperator& perturbation(int mu) const;
  int parameter_count() const { return static_cast<int>(perturbations_.size()); }
  int level() const { return level_; }
  int dim() const { return h0_.dim(); }

  const SpectralDecomposition& unperturbed() const { return *spectrum_; }
  const std::shared_ptr<const SpectralDecomposition>& shared_unperturbed() const {
    return spectrum_;
  }

  /// |psi_n^0>, phase fixed by the eigensolver convention.
  StateVector reference_state() const;

  /// H0 + sum_mu lambdas(mu) H_mu.
  HermitianOperator hamiltonian(const RealVector& lambdas) const;

 private:
  HermitianOperator h0_;
  std::vector<HermitianOperator> perturbations_;
  int level_;
  std::shared_ptr<const SpectralDecomposition> spectrum_;
};

/// |psi^1_mu> = sum_{m != n} <m|H_mu|n> / (E_n - E_m) |m>.
struct FirstOrderCorrection {
  int parameter = 0;
  /// Unnormalized correction, orthogonal to the reference state.
  StateVector raw;
  /// N_mu = ‖raw‖².
  double squared_norm = 0.0;
  /// raw / sqrt(N); empty when N == 0.
  std::optional<StateVector> direction;
  /// |psi_n^0>
  StateVector reference;
  /// `raw` expanded in the H0 eigenbasis.
  StateVector eigen_coefficients;
  std::shared_ptr<const SpectralDecomposition> unperturbed;

  bool vanishes() const { return !direction.has_value(); }
};

/// Throws DegeneracyError when a coupled level is degenerate with `level`.
FirstOrderCorrection first_order_correction(const PerturbationProblem& problem, int mu);

/// One correction per perturbation, in parameter order.
std::vector<FirstOrderCorrection> first_order_corrections(const PerturbationProblem& problem);

/// omega_{mu nu} = <phi_mu|phi_nu>. Hermitian with unit diagonal.
class OverlapMatrix {
 public:
  explicit OverlapMatrix(ComplexMatrix entries);
  const ComplexMatrix& entries() const { return entries_; }
  Complex operator()(int mu, int nu) const { return entries_(mu, nu); }
  int size() const { return static_cast<int>(entries_.rows()); }

 private:
  ComplexMatrix entries_;
};

/// Throws ZeroCorrectionError if any correction vanishes.
OverlapMatrix overlaps(const std::vector<FirstOrderCorrection>& corrections);

/// Two-parameter geometry of the corrections inside span{phi_1, phi_2}:
///
///   phi_1 = cos(theta1/2) |j> + sin(theta1/2) |k>
///   phi_2 = e^{i gamma} (cos(theta2/2) |j> + e^{i varphi} sin(theta2/2) |k>)
///
/// so that omega = c1 c2 e^{i gamma} + s1 s2 e^{i(gamma + varphi)}.
/// All angles lie in [0, 2pi).
struct AngleDecomposition {
  StateVector reference;
  StateVector basis_j;
  StateVector basis_k;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double gamma = 0.0;
  double varphi = 0.0;

  /// (phi_1, phi_2) rebuilt from the angles and basis.
  std::pair<StateVector, StateVector> directions() const;
  Complex overlap() const;
};

/// Basis choice: when the two corrections only involve two H0 eigenvectors,
/// those eigenvectors are used as |j>, |k> (ordered by the position of their
/// largest component). Otherwise |j> = phi_1 and |k> is the Gram-Schmidt
/// remainder of phi_2. The basis is then rephased so cos(theta1/2) and
/// sin(theta1/2) are real with sin >= 0, and cos(theta2/2) takes the sign of
/// cos(theta1/2).
///
/// Throws ZeroCorrectionError for a vanishing correction and
/// ParallelCorrectionsError when |omega| = 1 within 1e-10.
AngleDecomposition angle_decomposition(const FirstOrderCorrection& c1,
                                       const FirstOrderCorrection& c2);

/// |psi^0> + sum_mu lambda_mu |psi^1_mu>, unnormalized.
StateVector first_order_state(const PerturbationProblem& problem, const RealVector& lambdas);

/// first_order_state, renormalized. Logs a warning to std::clog when
/// ‖lambda‖ > 0.1.
StateVector perturbed_state(const PerturbationProblem& problem, const RealVector& lambdas);

}  // namespace weakmetro
