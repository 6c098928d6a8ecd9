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

#include "weakmetro/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include "weakmetro/errors.hpp"

namespace weakmetro {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double angle) {
  double wrapped = std::fmod(angle, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  // fmod can land exactly on 2pi after the shift for tiny negative inputs.
  if (wrapped >= kTwoPi) wrapped = 0.0;
  return wrapped;
}

Eigen::Index anchor_index(const StateVector& v) {
  Eigen::Index index = 0;
  v.cwiseAbs().maxCoeff(&index);
  return index;
}

}  // namespace

PerturbationProblem::PerturbationProblem(HermitianOperator h0,
                                         std::vector<HermitianOperator> perturbations,
                                         int level)
    : h0_(std::move(h0)), perturbations_(std::move(perturbations)), level_(level) {
  if (perturbations_.empty()) {
    throw ValidationError("PerturbationProblem: need at least one perturbation");
  }
  for (std::size_t mu = 0; mu < perturbations_.size(); ++mu) {
    if (perturbations_[mu].dim() != h0_.dim()) {
      std::ostringstream os;
      os << "PerturbationProblem: perturbation " << mu << " has dimension "
         << perturbations_[mu].dim() << ", H0 has " << h0_.dim();
      throw ValidationError(os.str());
    }
  }
  if (level_ < 0 || level_ >= h0_.dim()) {
    std::ostringstream os;
    os << "PerturbationProblem: level " << level_ << " outside [0, " << h0_.dim() << ")";
    throw ValidationError(os.str());
  }
  spectrum_ = std::make_shared<const SpectralDecomposition>(hermitian_eig(h0_));
}

const HermitianOperator& PerturbationProblem::perturbation(int mu) const {
  if (mu < 0 || mu >= parameter_count()) {
    std::ostringstream os;
    os << "PerturbationProblem: parameter index " << mu << " outside [0, "
       << parameter_count() << ")";
    throw ValidationError(os.str());
  }
  return perturbations_[mu];
}

StateVector PerturbationProblem::reference_state() const {
  return spectrum_->eigenvectors.col(level_);
}

HermitianOperator PerturbationProblem::hamiltonian(const RealVector& lambdas) const {
  if (lambdas.size() != parameter_count()) {
    std::ostringstream os;
    os << "PerturbationProblem: expected " << parameter_count() << " couplings, got "
       << lambdas.size();
    throw ValidationError(os.str());
  }
  HermitianOperator h = h0_;
  for (int mu = 0; mu < parameter_count(); ++mu) {
    h = h + perturbations_[mu] * lambdas(mu);
  }
  return h;
}

FirstOrderCorrection first_order_correction(const PerturbationProblem& problem, int mu) {
  const HermitianOperator& h_mu = problem.perturbation(mu);
  const SpectralDecomposition& spectrum = problem.unperturbed();
  const int n = problem.level();
  const double e_n = spectrum.eigenvalues(n);
  const double gap_floor = kDegeneracyTolerance * spectrum.spread();
  const double coupling_floor = kCouplingTolerance * max_abs(h_mu.matrix());

  const StateVector couplings =
      spectrum.eigenvectors.adjoint() * (h_mu.matrix() * spectrum.eigenvectors.col(n));

  FirstOrderCorrection out;
  out.parameter = mu;
  out.reference = problem.reference_state();
  out.unperturbed = problem.shared_unperturbed();
  out.eigen_coefficients = StateVector::Zero(problem.dim());
  for (int m = 0; m < problem.dim(); ++m) {
    if (m == n) continue;
    const Complex coupling = couplings(m);
    if (std::abs(coupling) <= coupling_floor) continue;
    const double gap = e_n - spectrum.eigenvalues(m);
    if (std::abs(gap) <= gap_floor) {
      std::ostringstream os;
      os << "first_order_correction: level " << n << " is degenerate with level " << m
         << " (gap " << gap << ") and perturbation " << mu << " couples them ("
         << std::abs(coupling) << ")";
      throw DegeneracyError(os.str(), n, m);
    }
    out.eigen_coefficients(m) = coupling / gap;
  }
  out.raw = spectrum.eigenvectors * out.eigen_coefficients;
  out.squared_norm = out.eigen_coefficients.squaredNorm();
  if (!std::isfinite(out.squared_norm)) {
    throw NonFiniteError("first_order_correction: correction norm is not finite");
  }
  if (out.squared_norm > 0.0) {
    out.direction = out.raw / std::sqrt(out.squared_norm);
  }
  return out;
}

std::vector<FirstOrderCorrection> first_order_corrections(const PerturbationProblem& problem) {
  std::vector<FirstOrderCorrection> out;
  out.reserve(problem.parameter_count());
  for (int mu = 0; mu < problem.parameter_count(); ++mu) {
    out.push_back(first_order_correction(problem, mu));
  }
  return out;
}

OverlapMatrix::OverlapMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
  require_square_finite(entries_, "OverlapMatrix");
  if (max_abs(entries_ - entries_.adjoint()) > 1e-12) {
    throw ValidationError("OverlapMatrix: not Hermitian");
  }
  for (int i = 0; i < size(); ++i) {
    if (std::abs(entries_(i, i) - 1.0) > 1e-12) {
      throw ValidationError("OverlapMatrix: diagonal must be 1");
    }
  }
  if (max_abs(entries_) > 1.0 + 1e-12) {
    throw ValidationError("OverlapMatrix: |omega| exceeds 1");
  }
}

OverlapMatrix overlaps(const std::vector<FirstOrderCorrection>& corrections) {
  if (corrections.empty()) throw ValidationError("overlaps: no corrections");
  const int p = static_cast<int>(corrections.size());
  for (const auto& c : corrections) {
    if (c.vanishes()) {
      throw ZeroCorrectionError("overlaps: correction for parameter " +
                                    std::to_string(c.parameter) + " vanishes",
                                c.parameter);
    }
  }
  ComplexMatrix omega(p, p);
  for (int mu = 0; mu < p; ++mu) {
    omega(mu, mu) = 1.0;
    for (int nu = mu + 1; nu < p; ++nu) {
      const Complex value = corrections[mu].direction->dot(*corrections[nu].direction);
      omega(mu, nu) = value;
      omega(nu, mu) = std::conj(value);
    }
  }
  return OverlapMatrix(std::move(omega));
}

std::pair<StateVector, StateVector> AngleDecomposition::directions() const {
  const double c1 = std::cos(theta1 / 2);
  const double s1 = std::sin(theta1 / 2);
  const double c2 = std::cos(theta2 / 2);
  const double s2 = std::sin(theta2 / 2);
  StateVector phi1 = c1 * basis_j + s1 * basis_k;
  StateVector phi2 =
      std::polar(1.0, gamma) * (c2 * basis_j + std::polar(s2, varphi) * basis_k);
  return {std::move(phi1), std::move(phi2)};
}

Complex AngleDecomposition::overlap() const {
  const double c1 = std::cos(theta1 / 2);
  const double s1 = std::sin(theta1 / 2);
  const double c2 = std::cos(theta2 / 2);
  const double s2 = std::sin(theta2 / 2);
  return c1 * c2 * std::polar(1.0, gamma) + s1 * s2 * std::polar(1.0, gamma + varphi);
}

AngleDecomposition angle_decomposition(const FirstOrderCorrection& c1,
                                       const FirstOrderCorrection& c2) {
  for (const FirstOrderCorrection* c : {&c1, &c2}) {
    if (c->vanishes()) {
      throw ZeroCorrectionError("angle_decomposition: correction for parameter " +
                                    std::to_string(c->parameter) + " vanishes",
                                c->parameter);
    }
  }
  if (c1.raw.size() != c2.raw.size() ||
      (c1.reference - c2.reference).cwiseAbs().maxCoeff() > kNormTolerance) {
    throw ValidationError("angle_decomposition: corrections belong to different problems");
  }
  const StateVector& phi1 = *c1.direction;
  const StateVector& phi2 = *c2.direction;
  const Complex omega = phi1.dot(phi2);
  if (std::abs(omega) >= 1.0 - kParallelTolerance) {
    std::ostringstream os;
    os << "angle_decomposition: corrections are parallel up to a phase (|omega| = "
       << std::abs(omega) << "); their span is one-dimensional";
    throw ParallelCorrectionsError(os.str());
  }

  AngleDecomposition out;
  out.reference = c1.reference;

  // Eigenbasis support of both corrections.
  std::vector<int> support;
  if (c1.unperturbed && c1.eigen_coefficients.size() == c1.raw.size()) {
    const double floor =
        1e-12 * std::max(c1.eigen_coefficients.cwiseAbs().maxCoeff(),
                         c2.eigen_coefficients.cwiseAbs().maxCoeff());
    for (int m = 0; m < c1.eigen_coefficients.size(); ++m) {
      if (std::abs(c1.eigen_coefficients(m)) > floor ||
          std::abs(c2.eigen_coefficients(m)) > floor) {
        support.push_back(m);
      }
    }
  }
  if (support.size() == 2) {
    StateVector first = c1.unperturbed->eigenvectors.col(support[0]);
    StateVector second = c1.unperturbed->eigenvectors.col(support[1]);
    if (anchor_index(second) < anchor_index(first)) std::swap(first, second);
    out.basis_j = std::move(first);
    out.basis_k = std::move(second);
  } else {
    out.basis_j = phi1;
    StateVector remainder = phi2 - omega * phi1;
    out.basis_k = remainder / remainder.norm();
  }

  constexpr double kTiny = 1e-14;
  Complex a1 = out.basis_j.dot(phi1);
  Complex b1 = out.basis_k.dot(phi1);
  // Relative phase: make b1/a1 real, moving |k> by at most pi/2.
  if (std::abs(a1) > kTiny && std::abs(b1) > kTiny) {
    double chi = std::arg(b1) - std::arg(a1);
    chi = std::remainder(chi, std::numbers::pi);
    if (std::abs(chi) > kTiny) {
      out.basis_k *= std::polar(1.0, chi);
      b1 = out.basis_k.dot(phi1);
    }
  }
  // Common phase: sin(theta1/2) >= 0, or cos(theta1/2) > 0 when sin vanishes.
  const double common = std::abs(b1) > kTiny ? std::arg(b1) : std::arg(a1);
  if (std::abs(common) > kTiny) {
    const Complex rotation = std::polar(1.0, common);
    out.basis_j *= rotation;
    out.basis_k *= rotation;
    a1 = out.basis_j.dot(phi1);
    b1 = out.basis_k.dot(phi1);
  }
  const double cos1 = a1.real();
  const double sin1 = std::max(0.0, b1.real());
  out.theta1 = wrap_angle(2.0 * std::atan2(sin1, cos1));

  const Complex a2 = out.basis_j.dot(phi2);
  const Complex b2 = out.basis_k.dot(phi2);
  const double sign = cos1 < 0.0 ? -1.0 : 1.0;
  const double cos2 = sign * std::abs(a2);
  const double sin2 = std::abs(b2);
  double gamma = 0.0;
  if (std::abs(a2) > kTiny) {
    gamma = std::arg(a2 / cos2);
  } else if (std::abs(b2) > kTiny) {
    gamma = std::arg(b2);
  }
  const double varphi = std::abs(b2) > kTiny ? std::arg(b2) - gamma : 0.0;
  out.theta2 = wrap_angle(2.0 * std::atan2(sin2, cos2));
  out.gamma = wrap_angle(gamma);
  out.varphi = wrap_angle(varphi);

  const auto [r1, r2] = out.directions();
  const double residual = std::max((r1 - phi1).norm(), (r2 - phi2).norm());
  if (residual > 1e-10) {
    std::ostringstream os;
    os << "angle_decomposition: reconstruction residual " << residual;
    throw NumericalError(os.str());
  }
  return out;
}

StateVector first_order_state(const PerturbationProblem& problem, const RealVector& lambdas) {
  if (lambdas.size() != problem.parameter_count()) {
    std::ostringstream os;
    os << "first_order_state: expected " << problem.parameter_count() << " couplings, got "
       << lambdas.size();
    throw ValidationError(os.str());
  }
  StateVector psi = problem.reference_state();
  for (int mu = 0; mu < problem.parameter_count(); ++mu) {
    if (lambdas(mu) == 0.0) continue;
    psi += lambdas(mu) * first_order_correction(problem, mu).raw;
  }
  return psi;
}

StateVector perturbed_state(const PerturbationProblem& problem, const RealVector& lambdas) {
  if (lambdas.size() == problem.parameter_count() && lambdas.norm() > 0.1) {
    std::clog << "weakmetro: warning: |lambda| = " << lambdas.norm()
              << " is outside the weak-coupling regime\n";
  }
  StateVector psi = first_order_state(problem, lambdas);
  return psi / psi.norm();
}

}  // namespace weakmetro
