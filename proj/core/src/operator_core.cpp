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

#include "weakmetro/operator_core.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "weakmetro/errors.hpp"

namespace weakmetro {

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_square_finite(const ComplexMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x"
       << m.cols();
    throw ValidationError(os.str());
  }
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + ": matrix has non-finite entries");
  }
}

void require_normalized(const StateVector& psi, const char* what) {
  const double norm = psi.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kNormTolerance) {
    std::ostringstream os;
    os << what << ": state is not normalized (norm " << norm << ")";
    throw ValidationError(os.str());
  }
}

HermitianOperator::HermitianOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  require_square_finite(matrix_, "HermitianOperator");
  const double scale = max_abs(matrix_);
  const double defect = max_abs(matrix_ - matrix_.adjoint());
  if (defect > kHermiticityTolerance * scale) {
    std::ostringstream os;
    os << "HermitianOperator: matrix is not Hermitian (|A - A^+|_max = " << defect
       << ", |A|_max = " << scale << ")";
    throw ValidationError(os.str());
  }
}

HermitianOperator HermitianOperator::from_nearly_hermitian(const ComplexMatrix& matrix,
                                                           double tolerance) {
  require_square_finite(matrix, "HermitianOperator");
  const double scale = max_abs(matrix);
  const double defect = max_abs(matrix - matrix.adjoint());
  if (defect > tolerance * std::max(scale, 1.0)) {
    std::ostringstream os;
    os << "HermitianOperator: Hermiticity defect " << defect << " exceeds tolerance "
       << tolerance;
    throw ValidationError(os.str());
  }
  ComplexMatrix hermitian_part = 0.5 * (matrix + matrix.adjoint());
  return HermitianOperator(std::move(hermitian_part), Unchecked{});
}

HermitianOperator HermitianOperator::zero(int dim) {
  if (dim < 1) throw ValidationError("HermitianOperator::zero: dimension must be >= 1");
  return HermitianOperator(ComplexMatrix::Zero(dim, dim), Unchecked{});
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
  if (other.dim() != dim()) throw ValidationError("HermitianOperator: dimension mismatch");
  return HermitianOperator(matrix_ + other.matrix_, Unchecked{});
}

HermitianOperator HermitianOperator::operator*(double scale) const {
  if (!std::isfinite(scale)) throw ValidationError("HermitianOperator: non-finite scale");
  return HermitianOperator(matrix_ * scale, Unchecked{});
}

double SpectralDecomposition::spread() const {
  return dim() == 0 ? 0.0 : eigenvalues.maxCoeff() - eigenvalues.minCoeff();
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

ComplexMatrix SpectralDecomposition::to_eigenbasis(const ComplexMatrix& a) const {
  return eigenvectors.adjoint() * a * eigenvectors;
}

ComplexMatrix SpectralDecomposition::from_eigenbasis(const ComplexMatrix& a) const {
  return eigenvectors * a * eigenvectors.adjoint();
}

StateVector fix_phase(const StateVector& psi) {
  if (psi.size() == 0) return psi;
  const double peak = psi.cwiseAbs().maxCoeff();
  if (peak == 0.0) return psi;
  // First component within round-off of the peak, so near-ties resolve
  // the same way on every platform.
  Eigen::Index anchor = 0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (std::abs(psi(i)) >= peak * (1.0 - 1e-10)) {
      anchor = i;
      break;
    }
  }
  const Complex phase = std::conj(psi(anchor)) / std::abs(psi(anchor));
  return psi * phase;
}

SpectralDecomposition hermitian_eig(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    const double norm = a.matrix().norm();
    std::ostringstream os;
    os << "hermitian_eig: eigensolver did not converge (Frobenius norm " << norm << ")";
    throw EigenSolverError(os.str(), norm);
  }
  SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j) {
    out.eigenvectors.col(j) = fix_phase(out.eigenvectors.col(j));
  }
  return out;
}

ComplexMatrix propagator(const SpectralDecomposition& spectrum, double t) {
  Eigen::VectorXcd phases(spectrum.dim());
  for (int i = 0; i < spectrum.dim(); ++i) {
    phases(i) = std::polar(1.0, -spectrum.eigenvalues(i) * t);
  }
  return spectrum.eigenvectors * phases.asDiagonal() * spectrum.eigenvectors.adjoint();
}

StateVector evolve(const SpectralDecomposition& spectrum, double t, const StateVector& psi) {
  if (psi.size() != spectrum.dim()) {
    throw ValidationError("evolve: state and Hamiltonian dimensions differ");
  }
  if (!std::isfinite(t)) throw ValidationError("evolve: non-finite time");
  require_normalized(psi, "evolve");
  StateVector coefficients = spectrum.eigenvectors.adjoint() * psi;
  for (int i = 0; i < spectrum.dim(); ++i) {
    coefficients(i) *= std::polar(1.0, -spectrum.eigenvalues(i) * t);
  }
  return spectrum.eigenvectors * coefficients;
}

StateVector evolve(const HermitianOperator& h, double t, const StateVector& psi) {
  if (psi.size() != h.dim()) {
    throw ValidationError("evolve: state and Hamiltonian dimensions differ");
  }
  return evolve(hermitian_eig(h), t, psi);
}

Complex expectation(const StateVector& psi, const ComplexMatrix& a) {
  if (a.rows() != a.cols() || psi.size() != a.rows()) {
    throw ValidationError("expectation: dimension mismatch");
  }
  return psi.dot(a * psi);
}

ComplexMatrix outer(const StateVector& a, const StateVector& b) {
  return a * b.adjoint();
}

}  // namespace weakmetro
