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

#include <functional>
#include <vector>

#include "weakmetro/operator_core.hpp"

namespace weakmetro {

inline constexpr int kDefaultNodesPerPanel = 8;
inline constexpr double kDefaultPanelsPerUnitTime = 16.0;

/// Nodes and weights on [-1, 1], nodes ascending.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Newton iteration on P_n; exact for polynomials of degree <= 2n - 1.
GaussLegendreRule gauss_legendre(int n);

/// ceil(16 * (hi - lo)), at least one panel.
int default_panel_count(double t_lo, double t_hi);

using MatrixIntegrand = std::function<ComplexMatrix(double)>;

/// Composite Gauss-Legendre integral of a matrix-valued function, applied
/// entrywise over `panels` equal sub-intervals of [t_lo, t_hi].
ComplexMatrix integrate_operator(const MatrixIntegrand& f, double t_lo,
                                 double t_hi, int panels,
                                 int nodes_per_panel = kDefaultNodesPerPanel);

}  // namespace weakmetro
