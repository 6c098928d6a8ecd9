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

#include "weakmetro/models.hpp"

#include <cmath>
#include <sstream>

#include "weakmetro/errors.hpp"

namespace weakmetro {
namespace {

constexpr Complex kI{0.0, 1.0};

double factorial(int n) {
  double out = 1.0;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

ComplexMatrix matrix_power(const ComplexMatrix& m, int n) {
  ComplexMatrix out = ComplexMatrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < n; ++i) out = out * m;
  return out;
}

// Index of `energy` in the ascending spectrum of h0.
int level_with_eigenvalue(const HermitianOperator& h0, double energy) {
  const RealVector e = hermitian_eig(h0).eigenvalues;
  Eigen::Index index = 0;
  (e.array() - energy).abs().minCoeff(&index);
  return static_cast<int>(index);
}

void validate(const ModelSpec& spec) {
  if (!std::isfinite(spec.alpha)) throw ValidationError("model: alpha must be finite");
  if (spec.kind == ModelKind::kAnharmonic2Param && spec.fock_dim < kMinFockDim) {
    std::ostringstream os;
    os << "model: fock_dim must be >= " << kMinFockDim << ", got " << spec.fock_dim;
    throw ValidationError(os.str());
  }
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kQubit1Param:
      return "qubit";
    case ModelKind::kQubit2Param:
      return "qubit2";
    case ModelKind::kQutrit2Param:
      return "qutrit";
    case ModelKind::kAnharmonic2Param:
      return "anharmonic";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  for (ModelKind kind : {ModelKind::kQubit1Param, ModelKind::kQubit2Param,
                         ModelKind::kQutrit2Param, ModelKind::kAnharmonic2Param}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

HermitianOperator sigma_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianOperator(m);
}

HermitianOperator sigma_y() {
  ComplexMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return HermitianOperator(m);
}

HermitianOperator sigma_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return HermitianOperator(m);
}

HermitianOperator spin1_x() {
  ComplexMatrix m(3, 3);
  m << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  return HermitianOperator(m / std::sqrt(2.0));
}

HermitianOperator spin1_y() {
  ComplexMatrix m(3, 3);
  m << 0, -kI, 0, kI, 0, -kI, 0, kI, 0;
  return HermitianOperator(m / std::sqrt(2.0));
}

HermitianOperator spin1_z() {
  ComplexMatrix m(3, 3);
  m << 1, 0, 0, 0, 0, 0, 0, 0, -1;
  return HermitianOperator(m);
}

ComplexMatrix annihilation(int dim) {
  if (dim < 1) throw ValidationError("annihilation: dimension must be >= 1");
  ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

HermitianOperator harmonic_oscillator(int dim) {
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) h(n, n) = n + 0.5;
  return HermitianOperator(h);
}

HermitianOperator position_power(int dim, int n) {
  if (n < 0) throw ValidationError("position_power: exponent must be >= 0");
  const ComplexMatrix a = annihilation(dim);
  const ComplexMatrix a_dag = a.adjoint();
  // x^n = n!/2^{n/2} sum_k sum_l a^{+l} a^{n-2k-l} / (2^k k! l! (n-2k-l)!)
  ComplexMatrix x_n = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; 2 * k <= n; ++k) {
    for (int l = 0; l <= n - 2 * k; ++l) {
      const int lowering = n - 2 * k - l;
      const double weight =
          1.0 / (std::pow(2.0, k) * factorial(k) * factorial(l) * factorial(lowering));
      x_n += weight * matrix_power(a_dag, l) * matrix_power(a, lowering);
    }
  }
  x_n *= factorial(n) / std::pow(2.0, 0.5 * n);
  return HermitianOperator::from_nearly_hermitian(x_n, kHermiticityTolerance);
}

PerturbationProblem build_model(const ModelSpec& spec) {
  validate(spec);
  const double ca = std::cos(spec.alpha);
  const double sa = std::sin(spec.alpha);
  switch (spec.kind) {
    case ModelKind::kQubit1Param:
      return PerturbationProblem(sigma_z(), {sigma_x()}, level_with_eigenvalue(sigma_z(), 1.0));
    case ModelKind::kQubit2Param:
      return PerturbationProblem(sigma_z(), {sigma_x(), sigma_x() * ca + sigma_y() * sa},
                                 level_with_eigenvalue(sigma_z(), 1.0));
    case ModelKind::kQutrit2Param:
      return PerturbationProblem(spin1_z(), {spin1_x(), spin1_x() * ca + spin1_y() * sa},
                                 level_with_eigenvalue(spin1_z(), 0.0));
    case ModelKind::kAnharmonic2Param: {
      const int dim = spec.fock_dim;
      return PerturbationProblem(harmonic_oscillator(dim),
                                 {position_power(dim, 3), position_power(dim, 4)}, 0);
    }
  }
  throw ValidationError("build_model: unknown model kind");
}

int trusted_dimension(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::kQubit1Param:
    case ModelKind::kQubit2Param:
      return 2;
    case ModelKind::kQutrit2Param:
      return 3;
    case ModelKind::kAnharmonic2Param:
      return spec.fock_dim - kTruncationMargin;
  }
  return 0;
}

StateVector default_probe(const ModelSpec& spec, double theta, double phi) {
  if (spec.kind == ModelKind::kQubit1Param || spec.kind == ModelKind::kQubit2Param) {
    StateVector psi(2);
    psi << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
    return psi;
  }
  return build_model(spec).reference_state();
}

double reference_qubit_dynamic_qfi(double t, double theta, double phi) {
  const double s = std::sin(t);
  const double c = std::cos(t + phi);
  const double st = std::sin(theta);
  return 4.0 * s * s * (1.0 - c * c * st * st);
}

QutritStaticReference reference_qutrit_static(double alpha) {
  RealMatrix q(2, 2);
  q << 1.0, std::cos(alpha), std::cos(alpha), 1.0;
  const double s = std::sin(alpha);
  return {4.0 * q, 1.0 / (2.0 * s * s), 0.0};
}

QutritDynamicReference reference_qutrit_dynamic(double t, double alpha) {
  const double h = std::sin(t / 2);
  const double s = std::sin(alpha);
  RealMatrix q(2, 2);
  q << 1.0, std::cos(alpha), std::cos(alpha), 1.0;
  return {16.0 * h * h * q, 1.0 / (8.0 * h * h * s * s), 0.0};
}

AnharmonicStaticReference reference_anharmonic_static() {
  return {29.0 / 24.0, 39.0 / 32.0, 466.0 / 1131.0};
}

AnharmonicDynamicReference reference_anharmonic_dynamic(double t) {
  const double s = std::sin(t);
  return {29.0 / 3.0 - 9.0 * std::cos(t) - 2.0 / 3.0 * std::cos(3.0 * t),
          3.0 * (7.0 + std::cos(2.0 * t)) * s * s, 0.0};
}

}  // namespace weakmetro
