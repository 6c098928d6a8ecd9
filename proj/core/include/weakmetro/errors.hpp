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

#include <stdexcept>
#include <string>

namespace weakmetro {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: dimension mismatch, non-Hermitian operator, out-of-range index,
/// malformed grid. The caller can fix these by changing arguments.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The inputs are well formed but the requested quantity does not exist or
/// cannot be computed reliably.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class EigenSolverError : public NumericalError {
 public:
  EigenSolverError(const std::string& what, double matrix_norm)
      : NumericalError(what), matrix_norm_(matrix_norm) {}
  double matrix_norm() const { return matrix_norm_; }

 private:
  double matrix_norm_;
};

class NonFiniteError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A level coupled by a perturbation is degenerate with the perturbed level.
class DegeneracyError : public NumericalError {
 public:
  DegeneracyError(const std::string& what, int level, int partner)
      : NumericalError(what), level_(level), partner_(partner) {}
  int level() const { return level_; }
  int partner() const { return partner_; }

 private:
  int level_;
  int partner_;
};

/// A first-order correction vanishes, so its direction is undefined.
class ZeroCorrectionError : public NumericalError {
 public:
  ZeroCorrectionError(const std::string& what, int parameter)
      : NumericalError(what), parameter_(parameter) {}
  int parameter() const { return parameter_; }

 private:
  int parameter_;
};

/// Two corrections are parallel up to a phase; their span is one-dimensional.
class ParallelCorrectionsError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularQfimError : public NumericalError {
 public:
  SingularQfimError(const std::string& what, int rank, int dimension)
      : NumericalError(what), rank_(rank), dimension_(dimension) {}
  int rank() const { return rank_; }
  int dimension() const { return dimension_; }

 private:
  int rank_;
  int dimension_;
};

/// Eigenvector continuity along a coupling path could not be established.
class LevelTrackingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Finite-difference results at step eps and eps/2 disagree.
class StepSizeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace weakmetro
