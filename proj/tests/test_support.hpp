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

#include <cmath>
#include <numbers>
#include <random>

#include "weakmetro/operator_core.hpp"

namespace weakmetro::testing {

using Rng = std::mt19937_64;

inline constexpr double kPi = std::numbers::pi;

inline Rng make_rng(std::uint64_t salt = 0) { return Rng(0x5eed2026ULL ^ salt); }

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline ComplexMatrix random_complex(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  }
  return m;
}

/// GUE-like sample: (G + G^+) / 2 with Gaussian entries.
inline HermitianOperator random_hermitian(int dim, Rng& rng) {
  const ComplexMatrix g = random_complex(dim, dim, rng);
  return HermitianOperator(ComplexMatrix(0.5 * (g + g.adjoint())));
}

inline StateVector random_state(int dim, Rng& rng) {
  StateVector psi = random_complex(dim, 1, rng);
  return psi / psi.norm();
}

/// Global phase that best aligns `b` onto `a`, applied to `b`.
inline StateVector align_to(const StateVector& b, const StateVector& a) {
  const Complex overlap = a.dot(b);
  if (std::abs(overlap) == 0.0) return b;
  return b * (std::conj(overlap) / std::abs(overlap));
}

inline StateVector basis_state(int dim, int index) {
  StateVector e = StateVector::Zero(dim);
  e(index) = 1.0;
  return e;
}

}  // namespace weakmetro::testing
