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

// Preset systems and their closed-form reference results. Units hbar = m =
// omega = 1.
//
// Qubit basis: index 0 is |0> (sigma_z = +1), index 1 is |1>. The preset
// perturbs |0>, which is the upper level of sigma_z; the library follows
// the algebra and does not relabel it.
//
// Spin-1 basis: index 0, 1, 2 hold m = +1, 0, -1.

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "weakmetro/operator_core.hpp"
#include "weakmetro/perturbation.hpp"

namespace weakmetro {

enum class ModelKind { kQubit1Param, kQubit2Param, kQutrit2Param, kAnharmonic2Param };

inline constexpr int kDefaultFockDim = 16;
/// x^4 acting twice on the vacuum reaches Fock level 8.
inline constexpr int kMinFockDim = 8;
/// Fock levels this close to the cutoff carry truncation artefacts.
inline constexpr int kTruncationMargin = 4;

struct ModelSpec {
  ModelKind kind = ModelKind::kQubit1Param;
  /// Mixing angle (radians) between the two perturbations.
  double alpha = 0.0;
  /// Number of Fock levels; anharmonic oscillator only.
  int fock_dim = kDefaultFockDim;
};

std::string_view to_string(ModelKind kind);
/// Accepts "qubit", "qubit2", "qutrit", "anharmonic".
std::optional<ModelKind> parse_model_kind(std::string_view name);

/// Throws ValidationError for fock_dim < 8 or a non-finite alpha.
PerturbationProblem build_model(const ModelSpec& spec);

/// Number of leading basis states whose matrix elements are free of
/// truncation artefacts.
int trusted_dimension(const ModelSpec& spec);

/// Default dynamical probe: cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> for
/// the qubit presets, the perturbed eigenstate otherwise.
StateVector default_probe(const ModelSpec& spec, double theta = 0.0, double phi = 0.0);

HermitianOperator sigma_x();
HermitianOperator sigma_y();
HermitianOperator sigma_z();
HermitianOperator spin1_x();
HermitianOperator spin1_y();
HermitianOperator spin1_z();

/// Truncated annihilation operator a on `dim` Fock levels.
ComplexMatrix annihilation(int dim);
/// a^+ a + 1/2
HermitianOperator harmonic_oscillator(int dim);
/// x^n = (a + a^+)^n / 2^{n/2} projected onto the first `dim` Fock levels,
/// assembled from its normal-ordered expansion so every retained matrix
/// element is exact.
HermitianOperator position_power(int dim, int n);

// Closed forms.

/// 4 sin^2 t [1 - cos^2(t + phi) sin^2 theta]
double reference_qubit_dynamic_qfi(double t, double theta, double phi);

struct QutritStaticReference {
  RealMatrix qfim;
  double bound_b;
  double quantumness_r;
};
/// Q = 4 [[1, cos a], [cos a, 1]], B = csc^2(a) / 2, R = 0.
QutritStaticReference reference_qutrit_static(double alpha);

struct QutritDynamicReference {
  RealMatrix qfim;
  double bound_b;
  double quantumness_r;
};
/// Q = 16 sin^2(t/2) [[1, cos a], [cos a, 1]], B = 1 / (8 sin^2(t/2) sin^2 a).
QutritDynamicReference reference_qutrit_dynamic(double t, double alpha);

struct AnharmonicStaticReference {
  double n1;
  double n2;
  double bound_b;
};
/// N1 = 29/24, N2 = 39/32, B = 466/1131.
AnharmonicStaticReference reference_anharmonic_static();

struct AnharmonicDynamicReference {
  double q11;
  double q22;
  double q12;
};
/// Q11 = 29/3 - 9 cos t - (2/3) cos 3t, Q22 = 3 (7 + cos 2t) sin^2 t, Q12 = 0.
AnharmonicDynamicReference reference_anharmonic_dynamic(double t);

}  // namespace weakmetro
