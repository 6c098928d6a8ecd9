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

#include "weakmetro/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "weakmetro/errors.hpp"

namespace weakmetro {

namespace {

// (P_n(x), P_{n-1}(x)) by the three-term recurrence.
std::pair<double, double> legendre_pair(int n, double x) {
  double previous = 1.0;
  double current = x;
  for (int k = 2; k <= n; ++k) {
    const double next = ((2.0 * k - 1.0) * x * current - (k - 1.0) * previous) / k;
    previous = current;
    current = next;
  }
  return {current, previous};
}

}  // namespace

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw ValidationError("gauss_legendre: need at least one node");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Roots are symmetric; solve for the upper half and mirror.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double derivative = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [pn, pn1] = legendre_pair(n, x);
      derivative = n * (x * pn - pn1) / (x * x - 1.0);
      const double step = pn / derivative;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const auto [pn, pn1] = legendre_pair(n, x);
    derivative = n * (x * pn - pn1) / (x * x - 1.0);
    const double weight = 2.0 / ((1.0 - x * x) * derivative * derivative);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = weight;
    rule.weights[n - 1 - i] = weight;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

int default_panel_count(double t_lo, double t_hi) {
  const double width = std::abs(t_hi - t_lo);
  return std::max(1, static_cast<int>(std::ceil(kDefaultPanelsPerUnitTime * width)));
}

ComplexMatrix integrate_operator(const MatrixIntegrand& f, double t_lo, double t_hi,
                                 int panels, int nodes_per_panel) {
  if (!std::isfinite(t_lo) || !std::isfinite(t_hi) || t_hi < t_lo) {
    throw ValidationError("integrate_operator: need finite bounds with t_hi >= t_lo");
  }
  if (panels < 1) throw ValidationError("integrate_operator: panels must be >= 1");
  const GaussLegendreRule rule = gauss_legendre(nodes_per_panel);
  const double width = (t_hi - t_lo) / panels;
  const double half = 0.5 * width;

  ComplexMatrix total;
  for (int p = 0; p < panels; ++p) {
    const double mid = t_lo + (p + 0.5) * width;
    for (int q = 0; q < nodes_per_panel; ++q) {
      const double s = mid + half * rule.nodes[q];
      ComplexMatrix sample = f(s);
      if (!sample.allFinite()) {
        std::ostringstream os;
        os << "integrate_operator: non-finite integrand at s = " << s;
        throw NonFiniteError(os.str());
      }
      if (total.size() == 0) {
        total = ComplexMatrix::Zero(sample.rows(), sample.cols());
      } else if (sample.rows() != total.rows() || sample.cols() != total.cols()) {
        throw ValidationError("integrate_operator: integrand changed shape");
      }
      total += (half * rule.weights[q]) * sample;
    }
  }
  return total;
}

}  // namespace weakmetro
