#include "sqeddy/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sqeddy/error.hpp"

namespace sqeddy {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json coefficients_json(const CoefficientField& field) {
  json arr = json::array();
  for (std::size_t i = 0; i < field.size(); ++i) {
    const ModeIndex mode = field.mode_set()[i];
    arr.push_back({{"n", mode.n}, {"m", mode.m}, {"re", field[i].real()}, {"im", field[i].imag()}});
  }
  return arr;
}

CoefficientField coefficients_from_json(const json& arr, const ModeSetPtr& modes, const char* what) {
  CoefficientField out(modes);
  for (const auto& e : arr) {
    const ModeIndex mode{e.at("n").get<int>(), e.at("m").get<int>()};
    if (!modes->contains(mode)) {
      throw ConfigError(std::string(what) + ": mode (" + std::to_string(mode.n) + ", " + std::to_string(mode.m) +
                        ") is not on the lattice");
    }
    out.set(mode, cplx(e.at("re").get<double>(), e.at("im").get<double>()));
  }
  return out;
}

cplx cplx_from_json(const json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

template <typename T>
void read_into(const json& j, T& target) {
  target = j.get<T>();
}

}  // namespace

void RunConfig::validate() const {
  const DomainParams p = principal_modes(N);
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(mu >= 0.0, "mu must be >= 0");
  require(!nu || *nu > 0.0, "nu must be > 0");
  require(nu_min > 0.0 && nu_max > nu_min, "need 0 < nu_min < nu_max");
  require(cutoff >= p.m0, "cutoff must be >= m0");
  require(branch_cutoff >= p.m0, "branch_cutoff must be >= m0");
  require(simplicity_cutoff >= p.m0, "simplicity_cutoff must be >= m0");
  require(time_modes >= 1, "time_modes must be >= 1");
  require(root_tolerance > 0.0 && eigen_tolerance > 0.0 && fixed_point_tolerance > 0.0,
          "tolerances must be > 0");
  require(grid >= 16, "grid resolution must be >= 16");
  require(dt > 0.0 && oracle_time > 0.0, "dt and oracle_time must be > 0");
  for (const double e : epsilons) require(std::isfinite(e), "epsilon values must be finite");
  for (const double v : sweep_nus) require(v > 0.0, "sweep viscosities must be > 0");
  for (const int K : sweep_cutoffs) require(K >= p.m0, "sweep cutoffs must be >= m0");
  require(!out.empty(), "out path must not be empty");
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "N") read_into(value, c.N);
      else if (key == "mu") read_into(value, c.mu);
      else if (key == "nu") c.nu = value.get<double>();
      else if (key == "nu_min") read_into(value, c.nu_min);
      else if (key == "nu_max") read_into(value, c.nu_max);
      else if (key == "cutoff") read_into(value, c.cutoff);
      else if (key == "simplicity_cutoff") read_into(value, c.simplicity_cutoff);
      else if (key == "branch_cutoff") read_into(value, c.branch_cutoff);
      else if (key == "time_modes") read_into(value, c.time_modes);
      else if (key == "epsilons") read_into(value, c.epsilons);
      else if (key == "root_tolerance") read_into(value, c.root_tolerance);
      else if (key == "eigen_tolerance") read_into(value, c.eigen_tolerance);
      else if (key == "fixed_point_tolerance") read_into(value, c.fixed_point_tolerance);
      else if (key == "grid") read_into(value, c.grid);
      else if (key == "dt") read_into(value, c.dt);
      else if (key == "oracle_time") read_into(value, c.oracle_time);
      else if (key == "sweep_nus") read_into(value, c.sweep_nus);
      else if (key == "sweep_cutoffs") read_into(value, c.sweep_cutoffs);
      else if (key == "out") read_into(value, c.out);
      else if (key == "critical") c.critical = value.get<std::string>();
      else throw ConfigError("unknown configuration key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

json to_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const VerificationReport& r) {
  return {
      {"energy_residual", r.energy_residual},
      {"conjugate_residual", r.conjugate_residual},
      {"symmetry_deviation", r.symmetry_deviation},
      {"inner_product_direct", to_json(r.inner_product_direct)},
      {"inner_product_formula", to_json(r.inner_product_formula)},
      {"crossing_direct", to_json(r.crossing_direct)},
      {"crossing_formula", to_json(r.crossing_formula)},
      {"crossing_ratio", to_json(r.crossing_ratio)},
      {"simplicity_count", {r.simplicity_count_plus, r.simplicity_count_minus}},
      {"full_cutoff", r.full_cutoff},
  };
}

VerificationReport report_from_json(const json& j) {
  VerificationReport r;
  try {
    r.energy_residual = j.at("energy_residual").get<double>();
    r.conjugate_residual = j.at("conjugate_residual").get<double>();
    r.symmetry_deviation = j.at("symmetry_deviation").get<double>();
    r.inner_product_direct = cplx_from_json(j.at("inner_product_direct"));
    r.inner_product_formula = cplx_from_json(j.at("inner_product_formula"));
    r.crossing_direct = cplx_from_json(j.at("crossing_direct"));
    r.crossing_formula = cplx_from_json(j.at("crossing_formula"));
    r.crossing_ratio = cplx_from_json(j.at("crossing_ratio"));
    r.simplicity_count_plus = j.at("simplicity_count").at(0).get<int>();
    r.simplicity_count_minus = j.at("simplicity_count").at(1).get<int>();
    r.full_cutoff = j.at("full_cutoff").get<int>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed verification report: ") + e.what());
  }
  return r;
}

json to_json(const CriticalPoint& cp, const std::optional<VerificationReport>& report) {
  json j = {
      {"N", cp.params.N},
      {"n0", cp.params.n0},
      {"m0", cp.params.m0},
      {"K", cp.cutoff},
      {"mu_c", cp.mu_c},
      {"nu_c", cp.nu_c},
      {"omega_c", cp.omega_c},
      {"crossing_derivative", to_json(cp.crossing_derivative)},
      {"coefficients", coefficients_json(cp.psi_c)},
      {"conjugate_coefficients", coefficients_json(cp.psi_c_star)},
  };
  if (report) j["verification"] = to_json(*report);
  return j;
}

CriticalPoint critical_from_json(const json& j) {
  try {
    CriticalPoint cp;
    cp.params = DomainParams{j.at("N").get<int>(), j.at("n0").get<int>(), j.at("m0").get<int>()};
    if (!(cp.params == principal_modes(cp.params.N))) throw ConfigError("inconsistent (N, n0, m0)");
    cp.cutoff = j.at("K").get<int>();
    const auto modes = ModeSet::lattice(cp.params, cp.cutoff);
    cp.mu_c = j.at("mu_c").get<double>();
    cp.nu_c = j.at("nu_c").get<double>();
    cp.omega_c = j.at("omega_c").get<double>();
    cp.crossing_derivative = cplx_from_json(j.at("crossing_derivative"));
    cp.psi_c = coefficients_from_json(j.at("coefficients"), modes, "coefficients");
    cp.psi_c_star = coefficients_from_json(j.at("conjugate_coefficients"), modes, "conjugate_coefficients");
    return cp;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed critical-point document: ") + e.what());
  }
}

json to_json(const BranchPoint& p) {
  json components = json::array();
  if (p.phi.modes()) {
    for (int k = -p.phi.F(); k <= p.phi.F(); ++k) {
      json coeffs = json::array();
      const auto col = p.phi.component(k);
      for (Eigen::Index i = 0; i < col.size(); ++i) {
        if (col[i] == cplx{}) continue;
        const ModeIndex mode = p.phi.mode_set()[static_cast<std::size_t>(i)];
        coeffs.push_back({{"n", mode.n}, {"m", mode.m}, {"re", col[i].real()}, {"im", col[i].imag()}});
      }
      components.push_back({{"k", k}, {"coefficients", std::move(coeffs)}});
    }
  }
  return {
      {"epsilon", p.epsilon},
      {"sigma", p.sigma},
      {"omega", p.omega},
      {"iterations", p.iterations},
      {"residual_aabb", p.residual_aabb},
      {"max_orthogonality", p.max_orthogonality},
      {"contraction_factor", p.contraction_factor},
      {"K", p.phi.modes() ? p.phi.mode_set().cutoff() : 0},
      {"F", p.phi.modes() ? p.phi.F() : 0},
      {"phi", std::move(components)},
  };
}

std::string branch_csv(const std::vector<BranchPoint>& points) {
  std::string out = "eps,sigma,omega,iterations,residual_aabb\r\n";
  for (const auto& p : points) {
    out += g17(p.epsilon) + "," + g17(p.sigma) + "," + g17(p.omega) + "," + std::to_string(p.iterations) + "," +
           g17(p.residual_aabb) + "\r\n";
  }
  return out;
}

FieldGrid export_field(const CoefficientField& field, int resolution) {
  if (resolution < 16) throw ConfigError("field resolution must be >= 16");
  const int N = field.mode_set().N();
  FieldGrid grid;
  grid.resolution = resolution;
  grid.length = N * std::numbers::pi;
  grid.values = Eigen::MatrixXcd::Zero(resolution, resolution);
  // Separable evaluation: S_x(i, n) S_y(j, m), with exact zeros on the boundary.
  const int K = field.mode_set().cutoff();
  Eigen::MatrixXd S(resolution, K + 1);
  for (int i = 0; i < resolution; ++i) {
    for (int n = 0; n <= K; ++n) {
      S(i, n) = (i == 0 || i == resolution - 1) ? 0.0 : std::sin(n * grid.coordinate(i) / N);
    }
  }
  for (std::size_t t = 0; t < field.size(); ++t) {
    const ModeIndex mode = field.mode_set()[t];
    grid.values += field[t] * (S.col(mode.n) * S.col(mode.m).transpose()).cast<cplx>();
  }
  return grid;
}

std::string field_csv(const FieldGrid& grid) {
  std::string out = "x,y,re,im\r\n";
  for (int i = 0; i < grid.resolution; ++i) {
    for (int j = 0; j < grid.resolution; ++j) {
      const cplx v = grid.values(i, j);
      out += g17(grid.coordinate(i)) + "," + g17(grid.coordinate(j)) + "," + g17(v.real()) + "," + g17(v.imag()) +
             "\r\n";
    }
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace sqeddy
