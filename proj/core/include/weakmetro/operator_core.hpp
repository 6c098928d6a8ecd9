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

#include <complex>

#include <Eigen/Dense>

namespace weakmetro {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Amplitudes of a pure state. Corrections are stored unnormalized in the
/// same type; functions that need a normalized input check it themselves.
using StateVector = Eigen::VectorXcd;

inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kNormTolerance = 1e-10;

/// Largest entry magnitude, the norm used by every tolerance in the library.
double max_abs(const ComplexMatrix& m);

/// Throws ValidationError unless `m` is square, non-empty and finite.
void require_square_finite(const ComplexMatrix& m, const char* what);

/// Throws ValidationError unless |‖psi‖ - 1| <= kNormTolerance.
void require_normalized(const StateVector& psi, const char* what);

/// Dense Hermitian matrix. Construction rejects matrices with
/// ‖A - A†‖_max > 1e-12 ‖A‖_max.
class HermitianOperator {
 public:
  explicit HermitianOperator(ComplexMatrix matrix);

  /// Accepts a matrix that is Hermitian up to `tolerance` (relative) and
  /// replaces it with its Hermitian part. Used for numerically assembled
  /// operators such as quadrature sums.
  static HermitianOperator from_nearly_hermitian(const ComplexMatrix& matrix,
                                                 double tolerance);

  static HermitianOperator zero(int dim);

  const ComplexMatrix& matrix() const { return matrix_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

  HermitianOperator operator+(const HermitianOperator& other) const;
  HermitianOperator operator*(double scale) const;

 private:
  struct Unchecked {};
  HermitianOperator(ComplexMatrix matrix, Unchecked) : matrix_(std::move(matrix)) {}

  ComplexMatrix matrix_;
};

/// A = V diag(E) V†, eigenvalues ascending. Each column of V has its
/// largest-magnitude component real and positive.
struct SpectralDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  double spread() const;
  ComplexMatrix reconstruct() const;
  /// V† A V
  ComplexMatrix to_eigenbasis(const ComplexMatrix& a) const;
  /// V A V†
  ComplexMatrix from_eigenbasis(const ComplexMatrix& a) const;
};

SpectralDecomposition hermitian_eig(const HermitianOperator& a);

/// e^{-iHt} assembled from the spectral decomposition of H.
ComplexMatrix propagator(const SpectralDecomposition& spectrum, double t);

/// e^{-iHt} psi. `psi` must be normalized.
StateVector evolve(const HermitianOperator& h, double t, const StateVector& psi);
StateVector evolve(const SpectralDecomposition& spectrum, double t,
                   const StateVector& psi);

/// <psi|A|psi>
Complex expectation(const StateVector& psi, const ComplexMatrix& a);

/// Multiplies `psi` by the phase making its largest-magnitude component
/// real and positive. Zero vectors are returned unchanged.
StateVector fix_phase(const StateVector& psi);

/// The outer product |a><b|.
ComplexMatrix outer(const StateVector& a, const StateVector& b);

}  // namespace weakmetro
