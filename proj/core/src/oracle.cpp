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

#include "weakmetro/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "weakmetro/errors.hpp"

namespace weakmetro::oracle {
namespace {

// Rotates `v` so that <anchor|v> is real and positive.
StateVector align_phase(const StateVector& v, const StateVector& anchor) {
  const Complex overlap = anchor.dot(v);
  if (std::abs(overlap) == 0.0) return v;
  return v * (std::conj(overlap) / std::abs(overlap));
}

StateVector checked_sample(const VectorFamily& family, const RealVector& at,
                           Eigen::Index dim) {
  StateVector psi = family(at);
  if (psi.size() != dim || !psi.allFinite()) {
    throw NonFiniteError("fd_qfim: family returned a non-finite or mis-sized state");
  }
  return psi;
}

// Phase-aligned central-difference derivatives, one column per parameter.
ComplexMatrix central_derivatives(const VectorFamily& family, const RealVector& lambda,
                                  const StateVector& psi, double eps) {
  const auto p = lambda.size();
  ComplexMatrix d(psi.size(), p);
  for (Eigen::Index mu = 0; mu < p; ++mu) {
    RealVector plus = lambda;
    RealVector minus = lambda;
    plus(mu) += eps;
    minus(mu) -= eps;
    const StateVector up = align_phase(checked_sample(family, plus, psi.size()), psi);
    const StateVector down = align_phase(checked_sample(family, minus, psi.size()), psi);
    d.col(mu) = (up - down) / (2.0 * eps);
  }
  return d;
}

ComplexMatrix geometric_tensor(const ComplexMatrix& d, const StateVector& psi) {
  const Eigen::VectorXcd projections = d.adjoint() * psi;  // <d_mu psi|psi>
  ComplexMatrix g = d.adjoint() * d - projections * projections.adjoint();
  return 0.5 * (g + g.adjoint());
}

}  // namespace

StateVector exact_eigenstate(const HermitianOperator& h0,
                             const std::vector<HermitianOperator>& perturbations,
                             const RealVector& lambdas, int level, int path_steps) {
  if (lambdas.size() != static_cast<Eigen::Index>(perturbations.size())) {
    throw ValidationError("exact_eigenstate: coupling count does not match perturbations");
  }
  if (level < 0 || level >= h0.dim()) throw ValidationError("exact_eigenstate: level out of range");
  if (path_steps < 1) throw ValidationError("exact_eigenstate: path_steps must be >= 1");

  const SpectralDecomposition start = hermitian_eig(h0);
  const StateVector unperturbed = start.eigenvectors.col(level);
  if (lambdas.isZero(0.0)) return unperturbed;

  StateVector current = unperturbed;
  for (int step = 1; step <= path_steps; ++step) {
    const double fraction = static_cast<double>(step) / path_steps;
    ComplexMatrix h = h0.matrix();
    for (std::size_t mu = 0; mu < perturbations.size(); ++mu) {
      if (perturbations[mu].dim() != h0.dim()) {
        throw ValidationError("exact_eigenstate: perturbation dimension mismatch");
      }
      h += (fraction * lambdas(static_cast<Eigen::Index>(mu))) * perturbations[mu].matrix();
    }
    const SpectralDecomposition spectrum =
        hermitian_eig(HermitianOperator::from_nearly_hermitian(h, kHermiticityTolerance));
    const RealVector weights = (spectrum.eigenvectors.adjoint() * current).cwiseAbs2();
    Eigen::Index best = 0;
    const double best_weight = weights.maxCoeff(&best);
    double runner_up = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
      if (i != best) runner_up = std::max(runner_up, weights(i));
    }
    if (best_weight - runner_up < 0.5) {
      std::ostringstream os;
      os << "exact_eigenstate: cannot follow level " << level << " at path fraction "
         << fraction << " (overlaps " << best_weight << " vs " << runner_up
         << "); a level crossing or degeneracy is in the way";
      throw LevelTrackingError(os.str());
    }
    StateVector next = spectrum.eigenvectors.col(best);
    const Complex to_start = unperturbed.dot(next);
    current = std::abs(to_start) > 1e-8 ? align_phase(next, unperturbed)
                                        : align_phase(next, current);
  }
  return current;
}

VectorFamily exact_eigenstate_family(const PerturbationProblem& problem) {
  return [h0 = problem.h0(), perturbations = problem.perturbations(),
          level = problem.level()](const RealVector& lambdas) {
    return exact_eigenstate(h0, perturbations, lambdas, level);
  };
}

VectorFamily exact_evolved_family(const PerturbationProblem& problem, const StateVector& psi0,
                                  double t) {
  if (psi0.size() != problem.dim()) {
    throw ValidationError("exact_evolved_family: probe dimension mismatch");
  }
  require_normalized(psi0, "exact_evolved_family");
  return [problem, psi0, t](const RealVector& lambdas) {
    return evolve(problem.hamiltonian(lambdas), t, psi0);
  };
}

ScalarFamily along(VectorFamily family, RealVector base, int mu) {
  if (mu < 0 || mu >= base.size()) throw ValidationError("along: parameter index out of range");
  return [family = std::move(family), base = std::move(base), mu](double value) {
    RealVector at = base;
    at(mu) = value;
    return family(at);
  };
}

FidelityQfi fidelity_qfi(const ScalarFamily& family, double lambda, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError("fidelity_qfi: eps must be > 0");
  const auto quotient = [&](double step) {
    const StateVector left = family(lambda - step / 2);
    const StateVector right = family(lambda + step / 2);
    if (left.size() != right.size()) throw ValidationError("fidelity_qfi: family changed dimension");
    // |<l|r>| = 1 - Q step^2 / 8 + ..., so the unsquared overlap carries the
    // factor 8; with the squared overlap the prefactor would be 4.
    const double overlap = std::abs(left.dot(right)) / (left.norm() * right.norm());
    if (!std::isfinite(overlap)) throw NonFiniteError("fidelity_qfi: non-finite overlap");
    return 8.0 * (1.0 - overlap) / (step * step);
  };
  const double full = quotient(eps);
  const double half = quotient(eps / 2);
  return FidelityQfi{full, half, (4.0 * half - full) / 3.0};
}

FiniteDifferenceQfim fd_qfim(const VectorFamily& family, const RealVector& lambda, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError("fd_qfim: eps must be > 0");
  if (lambda.size() < 1) throw ValidationError("fd_qfim: need at least one parameter");
  StateVector psi = family(lambda);
  if (!psi.allFinite() || psi.size() == 0) throw NonFiniteError("fd_qfim: non-finite state");
  psi /= psi.norm();

  const ComplexMatrix coarse = central_derivatives(family, lambda, psi, eps);
  const ComplexMatrix fine = central_derivatives(family, lambda, psi, eps / 2);
  const ComplexMatrix g_coarse = geometric_tensor(coarse, psi);
  const ComplexMatrix g_fine = geometric_tensor(fine, psi);
  const double scale = std::max(max_abs(g_fine), 1e-8);
  if (max_abs(g_coarse - g_fine) > 0.1 * scale) {
    std::ostringstream os;
    os << "fd_qfim: steps " << eps << " and " << eps / 2 << " disagree by "
       << max_abs(g_coarse - g_fine) / scale << " (relative); choose another step";
    throw StepSizeError(os.str());
  }
  const ComplexMatrix extrapolated = (4.0 * fine - coarse) / 3.0;
  const ComplexMatrix g = geometric_tensor(extrapolated, psi);
  return FiniteDifferenceQfim{QfiMatrix(4.0 * g.real()), UhlmannMatrix(4.0 * g.imag())};
}

}  // namespace weakmetro::oracle
