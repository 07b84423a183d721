#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "sqeddy/critical.hpp"
#include "sqeddy/error.hpp"
#include "sqeddy/io.hpp"
#include "sqeddy/verify.hpp"

using namespace sqeddy;
namespace fs = std::filesystem;

namespace {

const DomainParams P5 = principal_modes(5);

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sqeddy_test_io";
  fs::create_directories(dir);
  return dir / name;
}

cplx field_value(const CoefficientField& f, double x, double y) {
  const int N = f.mode_set().N();
  cplx v = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const ModeIndex m = f.mode_set()[i];
    v += f[i] * std::sin(m.n * x / N) * std::sin(m.m * y / N);
  }
  return v;
}

int sign_changes(const std::vector<double>& v) {
  int count = 0;
  for (std::size_t i = 1; i < v.size(); ++i) count += (v[i - 1] < 0.0) != (v[i] < 0.0);
  return count;
}

}  // namespace

TEST_CASE("config round trip and validation") {
  const json j = json::parse(R"({"N": 7, "mu": 0.01, "nu_min": 0.1, "nu_max": 0.4, "cutoff": 33,
                                "epsilons": [0.01, 0.03], "out": "elsewhere"})");
  const RunConfig c = config_from_json(j);
  CHECK(c.N == 7);
  CHECK(c.mu == 0.01);
  CHECK(c.cutoff == 33);
  CHECK(c.epsilons == std::vector<double>{0.01, 0.03});
  CHECK(c.out == "elsewhere");
  CHECK(c.branch_cutoff == 23);
  CHECK(c.params() == principal_modes(7));

  CHECK_THROWS_AS(config_from_json(json::parse(R"({"N": 5, "cutof": 10})")), ConfigError);
  // Values are checked after command-line overrides are merged.
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"N": 4})")).validate(), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"nu_min": 0.3, "nu_max": 0.2})")).validate(), ConfigError);
  CHECK_NOTHROW(c.validate());
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"cutoff": "many"})")), ConfigError);

  const fs::path path = scratch("config.json");
  write_atomic(path, dump(j));
  CHECK(load_config(path).N == 7);
  CHECK_THROWS_AS(load_config(scratch("missing.json")), ConfigError);
}

TEST_CASE("critical document round trip") {
  const CriticalPoint cp = find_critical(P5, 0.0, {0.15, 0.30}, 23);
  const VerificationReport report = verify_critical(cp, 30);
  const json doc = to_json(cp, report);
  for (const char* key : {"N", "n0", "m0", "K", "omega_c", "nu_c", "mu_c", "coefficients", "conjugate_coefficients",
                          "crossing_derivative", "verification"}) {
    CHECK(doc.contains(key));
  }
  const std::string text = dump(doc);
  const CriticalPoint back = critical_from_json(json::parse(text));
  CHECK(back.omega_c == cp.omega_c);
  CHECK(back.nu_c == cp.nu_c);
  CHECK(back.cutoff == cp.cutoff);
  CHECK((back.psi_c.values() - cp.psi_c.values()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.psi_c_star.values() - cp.psi_c_star.values()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.crossing_derivative == cp.crossing_derivative);

  const VerificationReport again = verify_critical(back, 30);
  CHECK(dump(to_json(again)) == dump(to_json(report)));
  CHECK(dump(to_json(report_from_json(doc.at("verification")))) == dump(to_json(report)));
  CHECK(dump(to_json(back, again)) == text);
}

TEST_CASE("field export") {
  const auto grid = ModeSet::full_grid(P5, 3);
  const FieldGrid g = export_field(CoefficientField::unit(grid, {1, 1}), 33);
  CHECK(g.resolution == 33);
  CHECK(g.length == doctest::Approx(5.0 * std::numbers::pi));
  Eigen::Index i = 0, j = 0;
  g.values.real().maxCoeff(&i, &j);
  CHECK(i == 16);
  CHECK(j == 16);
  CHECK(g.values(16, 16).real() == doctest::Approx(1.0));
  for (int k = 0; k < 33; ++k) {
    CHECK(g.values(0, k) == cplx{});
    CHECK(g.values(32, k) == cplx{});
    CHECK(g.values(k, 0) == cplx{});
    CHECK(g.values(k, 32) == cplx{});
  }
  CHECK_THROWS_AS(export_field(CoefficientField::unit(grid, {1, 1}), 8), ConfigError);

  const std::string csv = field_csv(g);
  CHECK(csv.rfind("x,y,re,im\r\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 33 * 33 + 1);
}

TEST_CASE("nodal structure of the critical eigenfunction") {
  const CriticalPoint cp = find_critical(P5, 0.0, {0.15, 0.30}, 33);
  const double L = 5.0 * std::numbers::pi;
  std::vector<double> along_y, along_x;
  const int samples = 400;
  for (int s = 1; s < samples; ++s) {
    const double t = L * s / samples;
    along_y.push_back(field_value(cp.psi_c, L / 4.0, t).real());
    along_x.push_back(field_value(cp.psi_c, t, L / 2.0).real());
  }
  const FieldGrid g = export_field(cp.psi_c, 41);
  CHECK(std::abs(g.values(10, 23) - field_value(cp.psi_c, g.coordinate(10), g.coordinate(23))) <= 1e-12);
  CHECK(sign_changes(along_y) > 0);
  CHECK(sign_changes(along_x) > 0);
}

TEST_CASE("branch table") {
  BranchPoint origin;
  origin.omega = 0.125;
  const std::string csv = branch_csv({origin});
  CHECK(csv == "eps,sigma,omega,iterations,residual_aabb\r\n0,1,0.125,0,0\r\n");
}

TEST_CASE("atomic writes") {
  const fs::path path = scratch("atomic.txt");
  write_atomic(path, "first\n");
  write_atomic(path, "second\n");
  CHECK(read_file(path) == "second\n");
  CHECK_FALSE(fs::exists(path.string() + ".tmp"));
  CHECK(dump(json{{"a", 0.1}}) == "{\n  \"a\": 0.1\n}\n");
}
