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

#include "weakmetro/static_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "weakmetro/errors.hpp"

namespace weakmetro {
namespace {

void require_square_real(const RealMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x"
       << m.cols();
    throw ValidationError(os.str());
  }
  if (!m.allFinite()) throw ValidationError(std::string(what) + ": non-finite entries");
}

double real_max_abs(const RealMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Gram matrix G_{mu nu} = <psi^1_mu|psi^1_nu> of the raw corrections.
ComplexMatrix correction_gram(const std::vector<FirstOrderCorrection>& corrections) {
  if (corrections.empty()) throw ValidationError("need at least one correction");
  const int p = static_cast<int>(corrections.size());
  const auto dim = corrections.front().raw.size();
  ComplexMatrix basis(dim, p);
  for (int mu = 0; mu < p; ++mu) {
    if (corrections[mu].raw.size() != dim) {
      throw ValidationError("corrections have different dimensions");
    }
    basis.col(mu) = corrections[mu].raw;
  }
  ComplexMatrix gram = basis.adjoint() * basis;
  // Exact Hermitian symmetry so Q and D inherit their invariants bitwise.
  return 0.5 * (gram + gram.adjoint());
}

void throw_singular(const QfiMatrix& q, int rank, const char* what) {
  std::ostringstream os;
  os << what << ": QFI matrix is singular (rank " << rank << " of " << q.size()
     << "); the parameters are not jointly identifiable";
  throw SingularQfimError(os.str(), rank, q.size());
}

}  // namespace

QfiMatrix::QfiMatrix(RealMatrix entries) : entries_(std::move(entries)) {
  require_square_real(entries_, "QfiMatrix");
  const double scale = std::max(1.0, real_max_abs(entries_));
  if (real_max_abs(entries_ - entries_.transpose()) > 1e-10 * scale) {
    throw ValidationError("QfiMatrix: not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(entries_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10 * scale) {
    std::ostringstream os;
    os << "QfiMatrix: not positive semidefinite (min eigenvalue "
       << solver.eigenvalues().minCoeff() << ")";
    throw ValidationError(os.str());
  }
}

UhlmannMatrix::UhlmannMatrix(RealMatrix entries) : entries_(std::move(entries)) {
  require_square_real(entries_, "UhlmannMatrix");
  const double scale = std::max(1.0, real_max_abs(entries_));
  if (real_max_abs(entries_ + entries_.transpose()) > 1e-10 * scale) {
    throw ValidationError("UhlmannMatrix: not antisymmetric");
  }
  entries_.diagonal().setZero();
}

UhlmannMatrix UhlmannMatrix::zero(int size) {
  return UhlmannMatrix(RealMatrix::Zero(size, size));
}

void EstimationReport::require_regular() const {
  if (singular()) throw_singular(qfim, qfim_rank, "EstimationReport");
}

double qfi_single(const FirstOrderCorrection& correction) {
  return 4.0 * correction.squared_norm;
}

HermitianOperator sld_single(const FirstOrderCorrection& correction, double lambda) {
  if (correction.vanishes()) {
    throw ZeroCorrectionError("sld_single: correction for parameter " +
                                  std::to_string(correction.parameter) + " vanishes",
                              correction.parameter);
  }
  const double root_n = std::sqrt(correction.squared_norm);
  const StateVector& psi0 = correction.reference;
  const StateVector& phi = *correction.direction;
  ComplexMatrix l = 2.0 * root_n *
                    (outer(psi0, phi) + outer(phi, psi0) + 2.0 * lambda * root_n * outer(phi, phi));
  l -= 4.0 * lambda * correction.squared_norm * outer(psi0, psi0);
  return HermitianOperator::from_nearly_hermitian(l, kHermiticityTolerance);
}

HermitianOperator sld_pure(const StateVector& psi, const StateVector& dpsi) {
  if (psi.size() != dpsi.size()) throw ValidationError("sld_pure: dimension mismatch");
  const ComplexMatrix half = outer(dpsi, psi);
  return HermitianOperator::from_nearly_hermitian(2.0 * (half + half.adjoint()),
                                                  kHermiticityTolerance);
}

QfiMatrix qfim_static(const std::vector<FirstOrderCorrection>& corrections) {
  return QfiMatrix(4.0 * correction_gram(corrections).real());
}

UhlmannMatrix uhlmann_static(const std::vector<FirstOrderCorrection>& corrections) {
  return UhlmannMatrix(4.0 * correction_gram(corrections).imag());
}

int qfim_rank(const QfiMatrix& q) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(q.entries(), Eigen::EigenvaluesOnly);
  const RealVector& eig = solver.eigenvalues();
  const double top = eig.maxCoeff();
  if (!(top > 0.0)) return 0;
  return static_cast<int>((eig.array() > kSingularityTolerance * top).count());
}

double bound_B(const QfiMatrix& q) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(q.entries(), Eigen::EigenvaluesOnly);
  const RealVector& eig = solver.eigenvalues();
  const double top = eig.maxCoeff();
  const int rank = top > 0.0 ? static_cast<int>((eig.array() > kSingularityTolerance * top).count())
                             : 0;
  if (rank < q.size()) throw_singular(q, rank, "bound_B");
  return eig.cwiseInverse().sum();
}

double quantumness_R_spectral(const QfiMatrix& q, const UhlmannMatrix& d) {
  if (d.size() != q.size()) throw ValidationError("quantumness_R: Q and D sizes differ");
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(q.entries());
  const RealVector& eig = solver.eigenvalues();
  const double top = eig.maxCoeff();
  const int rank = top > 0.0 ? static_cast<int>((eig.array() > kSingularityTolerance * top).count())
                             : 0;
  if (rank < q.size()) throw_singular(q, rank, "quantumness_R");
  // i Q^-1 D is similar to the Hermitian matrix i Q^-1/2 D Q^-1/2.
  const RealMatrix inv_sqrt = solver.eigenvectors() *
                              eig.cwiseSqrt().cwiseInverse().asDiagonal() *
                              solver.eigenvectors().transpose();
  const RealMatrix whitened = inv_sqrt * d.entries() * inv_sqrt;
  const ComplexMatrix hermitian = Complex(0.0, 1.0) * whitened.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> spectral(0.5 * (hermitian + hermitian.adjoint()),
                                                        Eigen::EigenvaluesOnly);
  double r = spectral.eigenvalues().cwiseAbs().maxCoeff();
  if (r > 1.0 && r <= 1.0 + kQuantumnessSlack) r = 1.0;
  return r;
}

double quantumness_R(const QfiMatrix& q, const UhlmannMatrix& d) {
  if (d.size() != q.size()) throw ValidationError("quantumness_R: Q and D sizes differ");
  if (q.size() != 2) return quantumness_R_spectral(q, d);
  const int rank = qfim_rank(q);
  if (rank < 2) throw_singular(q, rank, "quantumness_R");
  const double det_q = q(0, 0) * q(1, 1) - q(0, 1) * q(1, 0);
  const double det_d = d(0, 1) * d(0, 1);
  double r = std::sqrt(det_d / det_q);
  if (r > 1.0 && r <= 1.0 + kQuantumnessSlack) r = 1.0;
  return r;
}

EstimationReport make_report(QfiMatrix q, UhlmannMatrix d) {
  const int rank = qfim_rank(q);
  const bool singular = rank < q.size();
  double b = std::numeric_limits<double>::infinity();
  std::optional<double> r;
  if (!singular) {
    b = bound_B(q);
    r = quantumness_R(q, d);
  }
  return EstimationReport{std::move(q), std::move(d), b, r, rank, std::nullopt};
}

EstimationReport static_report(const PerturbationProblem& problem, bool with_slds) {
  const std::vector<FirstOrderCorrection> corrections = first_order_corrections(problem);
  EstimationReport report = make_report(qfim_static(corrections), uhlmann_static(corrections));
  if (with_slds) {
    std::vector<HermitianOperator> slds;
    slds.reserve(corrections.size());
    for (const auto& c : corrections) {
      slds.push_back(c.vanishes() ? HermitianOperator::zero(problem.dim()) : sld_single(c));
    }
    report.slds = std::move(slds);
  }
  return report;
}

std::pair<HermitianOperator, HermitianOperator> sld_two_param_explicit(
    const AngleDecomposition& dec, double n1, double n2, double lambda1, double lambda2) {
  if (!(n1 > 0.0) || !(n2 > 0.0)) {
    throw ValidationError("sld_two_param_explicit: squared norms must be positive");
  }
  const double c1 = std::cos(dec.theta1 / 2);
  const double s1 = std::sin(dec.theta1 / 2);
  const double c2 = std::cos(dec.theta2 / 2);
  const double s2 = std::sin(dec.theta2 / 2);
  const double r1 = std::sqrt(n1);
  const double r2 = std::sqrt(n2);
  const double r12 = std::sqrt(n1 * n2);
  const Complex e_gamma = std::polar(1.0, dec.gamma);
  const Complex e_minus_gamma_varphi = std::polar(1.0, -(dec.gamma + dec.varphi));
  const Complex e_minus_varphi = std::polar(1.0, -dec.varphi);
  const Complex mixed = c1 * s2 * e_minus_gamma_varphi + c2 * s1 * e_gamma;

  Eigen::Matrix3cd alpha = Eigen::Matrix3cd::Zero();
  alpha(1, 1) = 4.0 * (lambda1 * n1 * c1 * c1 + lambda2 * r12 * c1 * c2 * std::cos(dec.gamma));
  alpha(2, 2) = 4.0 * (lambda1 * n1 * s1 * s1 +
                       lambda2 * r12 * s1 * s2 * std::cos(dec.gamma + dec.varphi));
  alpha(0, 1) = alpha(1, 0) = 2.0 * r1 * c1;
  alpha(0, 2) = alpha(2, 0) = 2.0 * r1 * s1;
  alpha(1, 2) = 4.0 * lambda1 * n1 * c1 * s1 + 2.0 * lambda2 * r12 * mixed;
  alpha(2, 1) = std::conj(alpha(1, 2));

  Eigen::Matrix3cd beta = Eigen::Matrix3cd::Zero();
  beta(1, 1) = 4.0 * (lambda2 * n2 * c2 * c2 + lambda1 * r12 * c1 * c2 * std::cos(dec.gamma));
  beta(2, 2) = 4.0 * (lambda2 * n2 * s2 * s2 +
                      lambda1 * r12 * s1 * s2 * std::cos(dec.gamma + dec.varphi));
  beta(0, 1) = 2.0 * r2 * c2 * std::conj(e_gamma);
  beta(1, 0) = std::conj(beta(0, 1));
  beta(0, 2) = 2.0 * r2 * s2 * e_minus_gamma_varphi;
  beta(2, 0) = std::conj(beta(0, 2));
  beta(1, 2) = 4.0 * lambda2 * n2 * c2 * s2 * e_minus_varphi + 2.0 * lambda1 * r12 * mixed;
  beta(2, 1) = std::conj(beta(1, 2));

  const auto dim = dec.reference.size();
  if (dec.basis_j.size() != dim || dec.basis_k.size() != dim) {
    throw ValidationError("sld_two_param_explicit: basis dimension mismatch");
  }
  ComplexMatrix frame(dim, 3);
  frame.col(0) = dec.reference;
  frame.col(1) = dec.basis_j;
  frame.col(2) = dec.basis_k;
  return {HermitianOperator::from_nearly_hermitian(frame * alpha * frame.adjoint(),
                                                   kHermiticityTolerance),
          HermitianOperator::from_nearly_hermitian(frame * beta * frame.adjoint(),
                                                   kHermiticityTolerance)};
}

}  // namespace weakmetro
