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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weakmetro/models.hpp"
#include "weakmetro/perturbation.hpp"

namespace weakmetro::cli {

enum class Command { kStatic, kDynamic, kScan, kOracleCheck };
enum class OutputFormat { kCsv, kJson };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitInternal = 1;

struct RunConfig {
  Command command = Command::kStatic;
  ModelSpec model;
  /// JSON Hamiltonian file; takes precedence over `model` when set.
  std::optional<std::string> model_file;
  double theta = 0.0;
  double phi = 0.0;
  double time = 1.0;
  double t_min = 0.05;
  double t_max = 3.1;
  int t_steps = 200;
  /// Couplings for oracle-check. One value is broadcast to every parameter.
  std::vector<double> lambda{1e-3};
  OutputFormat output_format = OutputFormat::kCsv;
  std::optional<std::string> output_path;
};

/// A problem ready to analyse plus the probe used by dynamic commands.
struct LoadedModel {
  std::string name;
  PerturbationProblem problem;
  StateVector probe;
};

/// Checks the cross-field invariants (grid ordering, t_steps >= 2, finite
/// angles). Throws ValidationError.
void validate(const RunConfig& config);

LoadedModel load_model(const RunConfig& config);

/// Hamiltonian file layout:
///
///   {"dim": 2,
///    "h0": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
///    "perturbations": [ <dim x dim matrix of [re, im]> , ... ],
///    "level": 0,            (optional, default 0)
///    "psi0": [[1, 0], [0, 0]]}  (optional probe, default: the level's eigenvector)
LoadedModel model_from_json(const nlohmann::json& doc, std::string name);
nlohmann::json model_to_json(const PerturbationProblem& problem,
                             const std::optional<StateVector>& probe = std::nullopt);

/// Finite numbers stay numbers; inf / -inf / nan become the strings
/// "inf" / "-inf" / "nan" so nothing is lost on a round trip.
nlohmann::json json_number(double value);
double number_from_json(const nlohmann::json& value);

/// "%.17g" with the literals inf, -inf and nan.
std::string csv_number(double value);

/// Runs one command and writes the artifact to `out`. Returns the exit code;
/// diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv, then runs. `--out FILE` redirects the artifact away from
/// `out`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace weakmetro::cli
