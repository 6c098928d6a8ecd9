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

// Leading-order sensing with an evolved probe. To first order in the
// couplings the interaction-picture propagator is 1 - i sum_mu lambda_mu
// K_mu(t); time ordering only enters at second order and is dropped.

#pragma once

#include <optional>
#include <vector>

#include "weakmetro/operator_core.hpp"
#include "weakmetro/perturbation.hpp"
#include "weakmetro/static_estimation.hpp"

namespace weakmetro {

/// K_mu(t) = int_0^t U0^+(s) H_mu U0(s) ds.
struct KOperator {
  HermitianOperator op;
  double time = 0.0;
  int parameter_index = 0;
};

/// sin(x) / x with sinc(0) = 1.
double sinc(double x);

/// Closed form in the H0 eigenbasis:
/// [K]_{mn} = [H_mu]_{mn} t e^{i D t / 2} sinc(D t / 2), D = E_m - E_n.
KOperator k_operator_spectral(const SpectralDecomposition& h0_spectrum,
                              const HermitianOperator& h_mu, double t,
                              int parameter_index = 0);

/// Same operator by composite Gauss-Legendre quadrature of the integrand.
/// `panels` <= 0 selects 16 panels per unit time.
KOperator k_operator_quadrature(const HermitianOperator& h0, const HermitianOperator& h_mu,
                                double t, int panels = 0, int parameter_index = 0);

/// One spectral K-operator per perturbation of `problem`.
std::vector<KOperator> k_operators(const PerturbationProblem& problem, double t);

/// 4 Var_{psi0}(K) = 4 (<K^2> - <K>^2).
double qfi_dynamic_single(const StateVector& psi0, const KOperator& k);

/// Q = 4 Re C and D = 4 Im C with C_{mu nu} = <K_mu K_nu> - <K_mu><K_nu>.
/// Singular Q is flagged in the report (B = +inf), not thrown.
EstimationReport qfim_dynamic(const StateVector& psi0, const std::vector<KOperator>& ks);

/// qfim_dynamic for the K-operators of `problem` at time t.
EstimationReport dynamic_report(const PerturbationProblem& problem, const StateVector& psi0,
                                double t);

struct TimeScan {
  std::vector<double> times;
  std::vector<EstimationReport> reports;
  /// Static bound B for the same problem, set when psi0 is the perturbed
  /// eigenstate and the static QFIM is regular.
  std::optional<double> static_reference;

  std::vector<double> bounds() const;
};

/// Evaluates dynamic_report on each grid time. `times` must be non-empty,
/// strictly increasing and non-negative.
TimeScan scan_time(const PerturbationProblem& problem, const StateVector& psi0,
                   const std::vector<double>& times);

/// n evenly spaced points from lo to hi inclusive (n >= 2).
std::vector<double> linspace(double lo, double hi, int n);

/// Times where B(t) crosses `level`, located by bisection between adjacent
/// scan samples whose B straddles the level.
std::vector<double> bound_crossings(const PerturbationProblem& problem, const StateVector& psi0,
                                    const TimeScan& scan, double level,
                                    double tolerance = 1e-12);

struct BoundMinimum {
  double time;
  double bound;
};

/// Minimum of B(t) on [t_lo, t_hi]: best scan sample in the window, then
/// golden-section refinement between its neighbours.
BoundMinimum bound_minimum(const PerturbationProblem& problem, const StateVector& psi0,
                           const TimeScan& scan, double t_lo, double t_hi,
                           double tolerance = 1e-10);

}  // namespace weakmetro
