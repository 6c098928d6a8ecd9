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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>

#include <CLI11.hpp>

#include "weakmetro/dynamic_estimation.hpp"
#include "weakmetro/errors.hpp"
#include "weakmetro/oracle.hpp"
#include "weakmetro/static_estimation.hpp"

namespace weakmetro::cli {
namespace {

using nlohmann::json;

constexpr double kSignificantEntry = 1e-3;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view command_name(Command c) {
  switch (c) {
    case Command::kStatic:
      return "static";
    case Command::kDynamic:
      return "dynamic";
    case Command::kScan:
      return "scan";
    case Command::kOracleCheck:
      return "oracle-check";
  }
  return "unknown";
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw ValidationError(std::string(name) + " must be finite");
  }
}

// --- JSON model files -------------------------------------------------------

Complex parse_entry(const json& pair, const std::string& where) {
  if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
    throw ValidationError(where + ": expected a [re, im] pair");
  }
  return {pair[0].get<double>(), pair[1].get<double>()};
}

ComplexMatrix parse_matrix(const json& rows, int dim, const std::string& where) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim) {
    throw ValidationError(where + ": expected " + std::to_string(dim) + " rows");
  }
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw ValidationError(where + ": row " + std::to_string(i) + " must have " +
                            std::to_string(dim) + " entries");
    }
    for (int j = 0; j < dim; ++j) {
      m(i, j) = parse_entry(row[j], where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json real_matrix_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json_number(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// --- Shared report fields ---------------------------------------------------

// Normalized overlaps omega = G_{mu nu} / sqrt(G_mu_mu G_nu_nu) with
// G = (Q + i D) / 4. For the static scheme G is the Gram matrix of the
// first-order corrections; for the dynamic scheme it is the covariance of
// the K-operators. Empty when some diagonal entry vanishes.
std::optional<ComplexMatrix> normalized_overlaps(const EstimationReport& report) {
  const RealMatrix& q = report.qfim.entries();
  const RealMatrix& d = report.uhlmann.entries();
  const auto p = q.rows();
  for (Eigen::Index mu = 0; mu < p; ++mu) {
    if (!(q(mu, mu) > 0.0)) return std::nullopt;
  }
  ComplexMatrix omega(p, p);
  for (Eigen::Index mu = 0; mu < p; ++mu) {
    for (Eigen::Index nu = 0; nu < p; ++nu) {
      omega(mu, nu) = Complex(q(mu, nu), d(mu, nu)) / std::sqrt(q(mu, mu) * q(nu, nu));
    }
  }
  return omega;
}

std::string index_label(const char* prefix, Eigen::Index mu, Eigen::Index nu) {
  return prefix + std::to_string(mu + 1) + std::to_string(nu + 1);
}

// Column layout shared by scan rows and the flat CSV of single reports:
// upper-triangular Q entries, strictly upper D entries, then B and R. For
// two parameters this is exactly Q11,Q12,Q22,D12,B,R.
std::vector<std::string> report_columns(int p) {
  std::vector<std::string> names;
  for (int mu = 0; mu < p; ++mu) {
    for (int nu = mu; nu < p; ++nu) names.push_back(index_label("Q", mu, nu));
  }
  for (int mu = 0; mu < p; ++mu) {
    for (int nu = mu + 1; nu < p; ++nu) names.push_back(index_label("D", mu, nu));
  }
  names.emplace_back("B");
  names.emplace_back("R");
  return names;
}

std::vector<double> report_values(const EstimationReport& report) {
  const int p = report.qfim.size();
  std::vector<double> values;
  for (int mu = 0; mu < p; ++mu) {
    for (int nu = mu; nu < p; ++nu) values.push_back(report.qfim(mu, nu));
  }
  for (int mu = 0; mu < p; ++mu) {
    for (int nu = mu + 1; nu < p; ++nu) values.push_back(report.uhlmann(mu, nu));
  }
  values.push_back(report.bound_b);
  values.push_back(report.quantumness_r.value_or(kNaN));
  return values;
}

json report_json(const EstimationReport& report) {
  json out;
  out["qfim"] = real_matrix_json(report.qfim.entries());
  out["uhlmann"] = real_matrix_json(report.uhlmann.entries());
  out["bound_b"] = json_number(report.bound_b);
  out["quantumness_r"] = report.quantumness_r ? json_number(*report.quantumness_r) : json(nullptr);
  out["qfim_rank"] = report.qfim_rank;
  out["singular"] = report.singular();
  json norms = json::array();
  for (int mu = 0; mu < report.qfim.size(); ++mu) norms.push_back(json_number(report.qfim(mu, mu) / 4.0));
  out["norms"] = std::move(norms);
  const auto omega = normalized_overlaps(report);
  out["overlaps"] = omega ? matrix_to_json(*omega) : json(nullptr);
  return out;
}

void write_report_csv(std::ostream& os, const EstimationReport& report,
                      std::optional<double> time) {
  os << "quantity,value\n";
  if (time) os << "t," << csv_number(*time) << '\n';
  const auto names = report_columns(report.qfim.size());
  const auto values = report_values(report);
  for (std::size_t i = 0; i < names.size(); ++i) os << names[i] << ',' << csv_number(values[i]) << '\n';
  for (int mu = 0; mu < report.qfim.size(); ++mu) {
    os << 'N' << mu + 1 << ',' << csv_number(report.qfim(mu, mu) / 4.0) << '\n';
  }
  const auto omega = normalized_overlaps(report);
  for (int mu = 0; mu < report.qfim.size(); ++mu) {
    for (int nu = mu + 1; nu < report.qfim.size(); ++nu) {
      const Complex w = omega ? (*omega)(mu, nu) : Complex(kNaN, kNaN);
      os << index_label("omega", mu, nu) << "_re," << csv_number(w.real()) << '\n';
      os << index_label("omega", mu, nu) << "_im," << csv_number(w.imag()) << '\n';
    }
  }
}

json header_json(const RunConfig& config, const LoadedModel& model) {
  json out;
  out["command"] = command_name(config.command);
  out["model"] = model.name;
  out["dim"] = model.problem.dim();
  out["level"] = model.problem.level();
  out["parameters"] = model.problem.parameter_count();
  return out;
}

// --- Commands ---------------------------------------------------------------

void run_static(const RunConfig& config, const LoadedModel& model, std::ostream& os) {
  const EstimationReport report = static_report(model.problem);
  if (config.output_format == OutputFormat::kJson) {
    json doc = header_json(config, model);
    doc.update(report_json(report));
    os << doc.dump(2) << '\n';
  } else {
    write_report_csv(os, report, std::nullopt);
  }
}

void run_dynamic(const RunConfig& config, const LoadedModel& model, std::ostream& os) {
  const EstimationReport report = dynamic_report(model.problem, model.probe, config.time);
  if (config.output_format == OutputFormat::kJson) {
    json doc = header_json(config, model);
    doc["time"] = json_number(config.time);
    doc.update(report_json(report));
    os << doc.dump(2) << '\n';
  } else {
    write_report_csv(os, report, config.time);
  }
}

void run_scan(const RunConfig& config, const LoadedModel& model, std::ostream& os) {
  const std::vector<double> times = linspace(config.t_min, config.t_max, config.t_steps);
  const TimeScan scan = scan_time(model.problem, model.probe, times);
  std::vector<std::string> columns{"t"};
  for (auto& name : report_columns(model.problem.parameter_count())) columns.push_back(name);

  if (config.output_format == OutputFormat::kJson) {
    json doc = header_json(config, model);
    doc["static_reference"] = scan.static_reference ? json_number(*scan.static_reference) : json(nullptr);
    doc["columns"] = columns;
    json rows = json::array();
    for (std::size_t i = 0; i < times.size(); ++i) {
      json row = json::array({json_number(times[i])});
      for (double v : report_values(scan.reports[i])) row.push_back(json_number(v));
      rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(2) << '\n';
    return;
  }
  os << "# static_reference," << csv_number(scan.static_reference.value_or(kNaN)) << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (std::size_t i = 0; i < times.size(); ++i) {
    os << csv_number(times[i]);
    for (double v : report_values(scan.reports[i])) os << ',' << csv_number(v);
    os << '\n';
  }
}

struct Comparison {
  std::string quantity;
  double engine;
  double oracle;
};

struct SchemeCheck {
  std::string scheme;
  std::vector<Comparison> entries;
  std::optional<std::string> error;
};

double relative_error(const Comparison& c) {
  if (std::abs(c.engine) <= kSignificantEntry) return kNaN;
  return std::abs(c.oracle - c.engine) / std::abs(c.engine);
}

SchemeCheck compare(std::string scheme, const std::function<EstimationReport()>& engine,
                    const std::function<oracle::FiniteDifferenceQfim()>& truth) {
  SchemeCheck check{std::move(scheme), {}, std::nullopt};
  try {
    const EstimationReport report = engine();
    const oracle::FiniteDifferenceQfim fd = truth();
    const int p = report.qfim.size();
    for (int mu = 0; mu < p; ++mu) {
      for (int nu = mu; nu < p; ++nu) {
        check.entries.push_back({index_label("Q", mu, nu), report.qfim(mu, nu), fd.qfim(mu, nu)});
      }
    }
    for (int mu = 0; mu < p; ++mu) {
      for (int nu = mu + 1; nu < p; ++nu) {
        check.entries.push_back(
            {index_label("D", mu, nu), report.uhlmann(mu, nu), fd.uhlmann(mu, nu)});
      }
    }
  } catch (const NumericalError& e) {
    check.error = e.what();
  }
  return check;
}

int run_oracle_check(const RunConfig& config, const LoadedModel& model, std::ostream& os) {
  const int p = model.problem.parameter_count();
  RealVector lambda(p);
  if (config.lambda.size() == 1) {
    lambda.setConstant(config.lambda.front());
  } else if (static_cast<int>(config.lambda.size()) == p) {
    for (int mu = 0; mu < p; ++mu) lambda(mu) = config.lambda[mu];
  } else {
    throw ValidationError("--lambda needs 1 or " + std::to_string(p) + " values, got " +
                          std::to_string(config.lambda.size()));
  }

  const PerturbationProblem& problem = model.problem;
  std::vector<SchemeCheck> checks;
  checks.push_back(compare(
      "static", [&] { return static_report(problem); },
      [&] { return oracle::fd_qfim(oracle::exact_eigenstate_family(problem), lambda); }));
  checks.push_back(compare(
      "dynamic", [&] { return dynamic_report(problem, model.probe, config.time); },
      [&] {
        return oracle::fd_qfim(oracle::exact_evolved_family(problem, model.probe, config.time),
                               lambda);
      }));

  bool failed = false;
  if (config.output_format == OutputFormat::kJson) {
    json doc = header_json(config, model);
    doc["time"] = json_number(config.time);
    json lam = json::array();
    for (int mu = 0; mu < p; ++mu) lam.push_back(json_number(lambda(mu)));
    doc["lambda"] = std::move(lam);
    for (const auto& check : checks) {
      json section;
      if (check.error) {
        failed = true;
        section["error"] = *check.error;
      } else {
        double worst = 0.0;
        json entries = json::array();
        for (const auto& c : check.entries) {
          const double rel = relative_error(c);
          if (std::isfinite(rel)) worst = std::max(worst, rel);
          entries.push_back({{"quantity", c.quantity},
                             {"engine", json_number(c.engine)},
                             {"oracle", json_number(c.oracle)},
                             {"relative_error", json_number(rel)}});
        }
        section["entries"] = std::move(entries);
        section["max_relative_error"] = json_number(worst);
      }
      doc[check.scheme] = std::move(section);
    }
    os << doc.dump(2) << '\n';
  } else {
    os << "scheme,quantity,engine,oracle,relative_error\n";
    for (const auto& check : checks) {
      if (check.error) {
        failed = true;
        os << "# " << check.scheme << " skipped: " << *check.error << '\n';
        continue;
      }
      for (const auto& c : check.entries) {
        os << check.scheme << ',' << c.quantity << ',' << csv_number(c.engine) << ','
           << csv_number(c.oracle) << ',' << csv_number(relative_error(c)) << '\n';
      }
    }
  }
  return failed ? kExitNumerical : kExitOk;
}

}  // namespace

json json_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

double number_from_json(const json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return kNaN;
  }
  throw ValidationError("expected a number or one of \"inf\", \"-inf\", \"nan\"");
}

std::string csv_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void validate(const RunConfig& config) {
  require_finite(config.model.alpha, "--alpha");
  require_finite(config.theta, "--theta");
  require_finite(config.phi, "--phi");
  require_finite(config.time, "--time");
  if (config.time < 0.0) throw ValidationError("--time must be >= 0");
  if (config.command == Command::kScan) {
    require_finite(config.t_min, "--t-min");
    require_finite(config.t_max, "--t-max");
    if (config.t_min < 0.0) throw ValidationError("--t-min must be >= 0");
    if (!(config.t_min < config.t_max)) throw ValidationError("--t-min must be < --t-max");
    if (config.t_steps < 2) throw ValidationError("--t-steps must be >= 2");
  }
  if (config.lambda.empty()) throw ValidationError("--lambda needs at least one value");
  for (double l : config.lambda) require_finite(l, "--lambda");
}

LoadedModel model_from_json(const json& doc, std::string name) {
  if (!doc.is_object()) throw ValidationError("model file: top level must be an object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<int>() < 1) {
    throw ValidationError("model file: \"dim\" must be a positive integer");
  }
  const int dim = doc["dim"].get<int>();
  if (!doc.contains("h0")) throw ValidationError("model file: missing \"h0\"");
  HermitianOperator h0(parse_matrix(doc["h0"], dim, "h0"));

  if (!doc.contains("perturbations") || !doc["perturbations"].is_array() ||
      doc["perturbations"].empty()) {
    throw ValidationError("model file: \"perturbations\" must be a non-empty array");
  }
  std::vector<HermitianOperator> perturbations;
  for (std::size_t mu = 0; mu < doc["perturbations"].size(); ++mu) {
    perturbations.emplace_back(
        parse_matrix(doc["perturbations"][mu], dim, "perturbations[" + std::to_string(mu) + "]"));
  }

  int level = 0;
  if (doc.contains("level")) {
    if (!doc["level"].is_number_integer()) throw ValidationError("model file: \"level\" must be an integer");
    level = doc["level"].get<int>();
  }
  PerturbationProblem problem(std::move(h0), std::move(perturbations), level);

  StateVector probe = problem.reference_state();
  if (doc.contains("psi0")) {
    const json& entries = doc["psi0"];
    if (!entries.is_array() || static_cast<int>(entries.size()) != dim) {
      throw ValidationError("model file: \"psi0\" must hold " + std::to_string(dim) + " entries");
    }
    for (int i = 0; i < dim; ++i) probe(i) = parse_entry(entries[i], "psi0[" + std::to_string(i) + "]");
    require_normalized(probe, "model file psi0");
  }
  return LoadedModel{std::move(name), std::move(problem), std::move(probe)};
}

json model_to_json(const PerturbationProblem& problem, const std::optional<StateVector>& probe) {
  json doc;
  doc["dim"] = problem.dim();
  doc["h0"] = matrix_to_json(problem.h0().matrix());
  json perturbations = json::array();
  for (const auto& h : problem.perturbations()) perturbations.push_back(matrix_to_json(h.matrix()));
  doc["perturbations"] = std::move(perturbations);
  doc["level"] = problem.level();
  if (probe) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < probe->size(); ++i) entries.push_back({(*probe)(i).real(), (*probe)(i).imag()});
    doc["psi0"] = std::move(entries);
  }
  return doc;
}

LoadedModel load_model(const RunConfig& config) {
  if (config.model_file) {
    std::ifstream in(*config.model_file);
    if (!in) throw ValidationError("cannot read model file '" + *config.model_file + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ValidationError("model file '" + *config.model_file + "' is not valid JSON: " + e.what());
    }
    return model_from_json(doc, *config.model_file);
  }
  return LoadedModel{std::string(to_string(config.model.kind)), build_model(config.model),
                     default_probe(config.model, config.theta, config.phi)};
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    const LoadedModel model = load_model(config);
    // Render fully before writing so a failure never leaves half an artifact.
    std::ostringstream artifact;
    int status = kExitOk;
    switch (config.command) {
      case Command::kStatic:
        run_static(config, model, artifact);
        break;
      case Command::kDynamic:
        run_dynamic(config, model, artifact);
        break;
      case Command::kScan:
        run_scan(config, model, artifact);
        break;
      case Command::kOracleCheck:
        status = run_oracle_check(config, model, artifact);
        break;
    }
    if (config.output_path) {
      std::ofstream file(*config.output_path);
      if (!file) throw ValidationError("cannot write '" + *config.output_path + "'");
      file << artifact.str();
    } else {
      out << artifact.str();
    }
    return status;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum Fisher information and incompatibility for weakly perturbed Hamiltonians",
               "weakmetro"};
  RunConfig config;

  std::string command;
  app.add_option("command", command, "static | dynamic | scan | oracle-check")
      ->required()
      ->check(CLI::IsMember({"static", "dynamic", "scan", "oracle-check"}));

  std::string model_name = std::string(to_string(config.model.kind));
  auto* model_opt = app.add_option("--model", model_name, "Preset: qubit, qubit2, qutrit, anharmonic")
                        ->check(CLI::IsMember({"qubit", "qubit2", "qutrit", "anharmonic"}));
  std::string model_file;
  app.add_option("--model-file", model_file, "JSON Hamiltonian file")->excludes(model_opt);
  app.add_option("--alpha", config.model.alpha, "Mixing angle of the second perturbation (radians)");
  app.add_option("--theta", config.theta, "Qubit probe polar angle (radians)");
  app.add_option("--phi", config.phi, "Qubit probe azimuth (radians)");
  app.add_option("--time", config.time, "Evolution time for dynamic and oracle-check");
  app.add_option("--t-min", config.t_min, "Scan start time");
  app.add_option("--t-max", config.t_max, "Scan end time");
  app.add_option("--t-steps", config.t_steps, "Number of scan samples (>= 2)");
  app.add_option("--fock-dim", config.model.fock_dim, "Fock levels for the anharmonic preset");
  app.add_option("--lambda", config.lambda, "Couplings for oracle-check, comma separated")
      ->delimiter(',');
  std::string format = "csv";
  app.add_option("--output-format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  std::string out_path;
  app.add_option("--out", out_path, "Write the artifact to FILE instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (command == "static") config.command = Command::kStatic;
  if (command == "dynamic") config.command = Command::kDynamic;
  if (command == "scan") config.command = Command::kScan;
  if (command == "oracle-check") config.command = Command::kOracleCheck;
  config.model.kind = *parse_model_kind(model_name);
  if (!model_file.empty()) config.model_file = model_file;
  config.output_format = format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
  if (!out_path.empty()) config.output_path = out_path;
  return run(config, out, err);
}

}  // namespace weakmetro::cli
