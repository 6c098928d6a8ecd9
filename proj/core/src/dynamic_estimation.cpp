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

#include "weakmetro/dynamic_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "weakmetro/errors.hpp"
#include "weakmetro/quadrature.hpp"

namespace weakmetro {
namespace {

void require_time(double t, const char* what) {
  if (!std::isfinite(t) || t < 0.0) {
    std::ostringstream os;
    os << what << ": time must be finite and non-negative, got " << t;
    throw ValidationError(os.str());
  }
}

double bound_at(const PerturbationProblem& problem, const StateVector& psi0, double t) {
  return dynamic_report(problem, psi0, t).bound_b;
}

}  // namespace

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

KOperator k_operator_spectral(const SpectralDecomposition& h0_spectrum,
                              const HermitianOperator& h_mu, double t, int parameter_index) {
  require_time(t, "k_operator_spectral");
  if (h_mu.dim() != h0_spectrum.dim()) {
    throw ValidationError("k_operator_spectral: dimension mismatch");
  }
  ComplexMatrix k = h0_spectrum.to_eigenbasis(h_mu.matrix());
  const int dim = h0_spectrum.dim();
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) {
      const double half_phase = 0.5 * (h0_spectrum.eigenvalues(m) - h0_spectrum.eigenvalues(n)) * t;
      k(m, n) *= t * sinc(half_phase) * std::polar(1.0, half_phase);
    }
  }
  return KOperator{HermitianOperator::from_nearly_hermitian(h0_spectrum.from_eigenbasis(k), 1e-10),
                   t, parameter_index};
}

KOperator k_operator_quadrature(const HermitianOperator& h0, const HermitianOperator& h_mu,
                                double t, int panels, int parameter_index) {
  require_time(t, "k_operator_quadrature");
  if (h_mu.dim() != h0.dim()) throw ValidationError("k_operator_quadrature: dimension mismatch");
  if (t == 0.0) return KOperator{HermitianOperator::zero(h0.dim()), 0.0, parameter_index};
  const SpectralDecomposition spectrum = hermitian_eig(h0);
  const ComplexMatrix& h = h_mu.matrix();
  const auto integrand = [&](double s) {
    const ComplexMatrix u = propagator(spectrum, s);
    return ComplexMatrix(u.adjoint() * h * u);
  };
  const int count = panels > 0 ? panels : default_panel_count(0.0, t);
  const ComplexMatrix k = integrate_operator(integrand, 0.0, t, count);
  return KOperator{HermitianOperator::from_nearly_hermitian(k, 1e-9), t, parameter_index};
}

std::vector<KOperator> k_operators(const PerturbationProblem& problem, double t) {
  std::vector<KOperator> ks;
  ks.reserve(problem.parameter_count());
  for (int mu = 0; mu < problem.parameter_count(); ++mu) {
    ks.push_back(k_operator_spectral(problem.unperturbed(), problem.perturbation(mu), t, mu));
  }
  return ks;
}

double qfi_dynamic_single(const StateVector& psi0, const KOperator& k) {
  if (psi0.size() != k.op.dim()) throw ValidationError("qfi_dynamic_single: dimension mismatch");
  require_normalized(psi0, "qfi_dynamic_single");
  const StateVector k_psi = k.op.matrix() * psi0;
  const double mean = psi0.dot(k_psi).real();
  return 4.0 * (k_psi - mean * psi0).squaredNorm();
}

EstimationReport qfim_dynamic(const StateVector& psi0, const std::vector<KOperator>& ks) {
  if (ks.empty()) throw ValidationError("qfim_dynamic: no K-operators");
  require_normalized(psi0, "qfim_dynamic");
  const int p = static_cast<int>(ks.size());
  ComplexMatrix centered(psi0.size(), p);
  for (int mu = 0; mu < p; ++mu) {
    if (ks[mu].op.dim() != psi0.size()) throw ValidationError("qfim_dynamic: dimension mismatch");
    if (ks[mu].time != ks.front().time) {
      throw ValidationError("qfim_dynamic: K-operators evaluated at different times");
    }
    const StateVector k_psi = ks[mu].op.matrix() * psi0;
    const double mean = psi0.dot(k_psi).real();
    centered.col(mu) = k_psi - mean * psi0;
  }
  ComplexMatrix covariance = centered.adjoint() * centered;
  covariance = 0.5 * (covariance + covariance.adjoint());
  return make_report(QfiMatrix(4.0 * covariance.real()), UhlmannMatrix(4.0 * covariance.imag()));
}

EstimationReport dynamic_report(const PerturbationProblem& problem, const StateVector& psi0,
                                double t) {
  return qfim_dynamic(psi0, k_operators(problem, t));
}

std::vector<double> TimeScan::bounds() const {
  std::vector<double> out;
  out.reserve(reports.size());
  for (const auto& r : reports) out.push_back(r.bound_b);
  return out;
}

TimeScan scan_time(const PerturbationProblem& problem, const StateVector& psi0,
                   const std::vector<double>& times) {
  if (times.empty()) throw ValidationError("scan_time: empty time grid");
  for (std::size_t i = 0; i < times.size(); ++i) {
    require_time(times[i], "scan_time");
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw ValidationError("scan_time: time grid must be strictly increasing");
    }
  }
  if (psi0.size() != problem.dim()) throw ValidationError("scan_time: dimension mismatch");

  TimeScan scan;
  scan.times = times;
  scan.reports.reserve(times.size());
  for (double t : times) scan.reports.push_back(dynamic_report(problem, psi0, t));

  const StateVector reference = problem.reference_state();
  if (std::abs(std::abs(reference.dot(psi0)) - 1.0) <= kNormTolerance) {
    try {
      const EstimationReport stationary = static_report(problem);
      if (!stationary.singular()) scan.static_reference = stationary.bound_b;
    } catch (const NumericalError&) {
      // Degenerate level: the dynamic scan stays valid without a reference.
    }
  }
  return scan;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw ValidationError("linspace: need at least two points");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  out.back() = hi;
  return out;
}

std::vector<double> bound_crossings(const PerturbationProblem& problem, const StateVector& psi0,
                                    const TimeScan& scan, double level, double tolerance) {
  std::vector<double> out;
  const std::vector<double> b = scan.bounds();
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const bool below_left = b[i] < level;
    const bool below_right = b[i + 1] < level;
    if (below_left == below_right) continue;
    double lo = scan.times[i];
    double hi = scan.times[i + 1];
    while (hi - lo > tolerance) {
      const double mid = 0.5 * (lo + hi);
      if ((bound_at(problem, psi0, mid) < level) == below_left) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

BoundMinimum bound_minimum(const PerturbationProblem& problem, const StateVector& psi0,
                           const TimeScan& scan, double t_lo, double t_hi, double tolerance) {
  std::size_t best = scan.times.size();
  for (std::size_t i = 0; i < scan.times.size(); ++i) {
    const double t = scan.times[i];
    if (t < t_lo || t > t_hi) continue;
    if (best == scan.times.size() || scan.reports[i].bound_b < scan.reports[best].bound_b) best = i;
  }
  if (best == scan.times.size()) {
    throw ValidationError("bound_minimum: no scan samples inside the window");
  }
  double a = best > 0 ? std::max(t_lo, scan.times[best - 1]) : scan.times[best];
  double b = best + 1 < scan.times.size() ? std::min(t_hi, scan.times[best + 1]) : scan.times[best];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = bound_at(problem, psi0, x1);
  double f2 = bound_at(problem, psi0, x2);
  while (b - a > tolerance) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = bound_at(problem, psi0, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = bound_at(problem, psi0, x2);
    }
  }
  const double t_min = 0.5 * (a + b);
  BoundMinimum out{t_min, bound_at(problem, psi0, t_min)};
  if (scan.reports[best].bound_b < out.bound) {
    out = {scan.times[best], scan.reports[best].bound_b};
  }
  return out;
}

}  // namespace weakmetro
