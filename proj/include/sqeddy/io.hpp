#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "sqeddy/critical.hpp"
#include "sqeddy/hopf.hpp"
#include "sqeddy/verify.hpp"

namespace sqeddy {

using json = nlohmann::ordered_json;

struct RunConfig {
  int N = 5;
  double mu = 0.0;
  std::optional<double> nu;  // fixed viscosity for spectrum / oracle
  double nu_min = 0.15;
  double nu_max = 0.30;
  int cutoff = 43;
  int simplicity_cutoff = 40;  // full-grid size for the simplicity count
  int branch_cutoff = 23;      // space cutoff of the Hopf branch
  int time_modes = 8;
  std::vector<double> epsilons{0.005, 0.01, 0.02, 0.04};
  double root_tolerance = 1e-10;
  double eigen_tolerance = 1e-8;  // cutoff-convergence tolerance of the rightmost eigenvalue
  double fixed_point_tolerance = 1e-12;
  int grid = 64;
  double dt = 1e-3;  // meets the explicit-step guideline at K = 23, nu <= 0.3
  double oracle_time = 400.0;
  std::vector<double> sweep_nus;
  std::vector<int> sweep_cutoffs;
  std::string out = "out";
  std::optional<std::string> critical;  // path of a persisted CriticalPoint

  /// Throws ConfigError on any invalid field.
  void validate() const;
  DomainParams params() const { return principal_modes(N); }
};

/// Keys match the field names; unknown keys are rejected.
RunConfig config_from_json(const json& j);
RunConfig load_config(const std::filesystem::path& path);

json to_json(cplx z);
json to_json(const VerificationReport& report);
json to_json(const CriticalPoint& cp, const std::optional<VerificationReport>& report);
VerificationReport report_from_json(const json& j);
CriticalPoint critical_from_json(const json& j);

json to_json(const BranchPoint& point);
/// Columns eps, sigma, omega, iterations, residual_aabb.
std::string branch_csv(const std::vector<BranchPoint>& points);

/// Samples of sum a_{n,m} sin(n x/N) sin(m y/N) on a uniform grid of
/// [0, N pi]^2 with `resolution` points per axis, boundary included.
struct FieldGrid {
  int resolution = 0;
  double length = 0.0;
  Eigen::MatrixXcd values;  // values(i, j) at x_i, y_j

  double coordinate(int i) const { return length * i / (resolution - 1); }
};

/// Throws ConfigError for resolution < 16.
FieldGrid export_field(const CoefficientField& field, int resolution);
/// RFC 4180 CSV with header x,y,re,im.
std::string field_csv(const FieldGrid& grid);

/// Pretty JSON text with a trailing newline; doubles in shortest round-trip form.
std::string dump(const json& j);
std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file, then renames over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace sqeddy
