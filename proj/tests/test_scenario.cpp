#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "circ/errors.hpp"
#include "circ/runs.hpp"
#include "circ/scenario.hpp"

using namespace circ;

namespace {

const char* kSample = R"(# sample scenario
[body]
shape = ellipse
a = 2.0
b = 1.0
panels = 96
rho = 1.0

[dynamics]
gamma = 1.5
dt = 0.002
steps = 250
integrator = rk4
space = se2_magnetic
Pi0 = 0.1
Px0 = 0.8
Py0 = -0.3
theta0 = 0.2
x0 = 1.0
y0 = -1.0

[outputs]
trajectory = traj.txt
grid_n = 8
field_steps = 0,250
)";

ScenarioFile parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

}  // namespace

TEST_CASE("scenario parsing fills every section") {
  const ScenarioFile s = parse_string(kSample);
  const auto& ell = std::get<EllipseSpec>(s.shape);
  CHECK(ell.a == 2.0);
  CHECK(ell.b == 1.0);
  CHECK(s.panels == 96);
  CHECK(s.gamma == 1.5);
  CHECK(s.dt == 0.002);
  CHECK(s.steps == 250);
  CHECK(s.integrator == IntegratorKind::Rk4);
  CHECK(s.pi0.lin.x() == 0.8);
  CHECK(s.pose0.theta() == 0.2);
  CHECK(s.trajectory == "traj.txt");
  CHECK(s.field_steps == std::vector<long>({0, 250}));
  CHECK(s.extension_level() == 1.5);  // p0 defaults to gamma
}

TEST_CASE("scenario round-trips through its serialization") {
  const ScenarioFile s = parse_string(kSample);
  std::ostringstream out;
  write_scenario(s, out);
  const ScenarioFile s2 = parse_string(out.str());
  std::ostringstream out2;
  write_scenario(s2, out2);
  CHECK(out.str() == out2.str());  // fixed point => key-by-key equality
  CHECK(s2.gamma == s.gamma);
  CHECK(s2.steps == s.steps);
  CHECK(std::get<EllipseSpec>(s2.shape).a == 2.0);
}

TEST_CASE("unknown and missing keys are reported by name") {
  try {
    parse_string("[body]\nshape = circle\nradius = 1\nwingspan = 3\n[dynamics]\ngamma = 1\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("body.wingspan") != std::string::npos);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  try {
    parse_string("[body]\nshape = circle\nradius = 1\n[dynamics]\ndt = 0.1\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("dynamics.gamma") != std::string::npos);
  }
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_string("[body]\nshape = circle\nradius one\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_string("key = 1\n"), ValidationError);      // outside section
  CHECK_THROWS_AS(parse_string("[body\nshape = circle\n"), ValidationError);
  CHECK_THROWS_AS(
      parse_string("[body]\nshape = circle\nradius = 1\nradius = 2\n[dynamics]\ngamma = 0\n"),
      ValidationError);  // duplicate
  CHECK_THROWS_AS(parse_string("[body]\nshape = hexagon\n[dynamics]\ngamma = 0\n"),
                  ValidationError);
}

TEST_CASE("simulate pipeline writes deterministic outputs") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "circbody_test_sim";
  fs::create_directories(dir);

  ScenarioFile s = parse_string(kSample);
  s.shape = CircleSpec{1.0};
  s.panels = 64;
  s.steps = 50;
  run_simulate(s, dir.string());
  std::ifstream traj1(dir / "traj.txt");
  std::stringstream buf1;
  buf1 << traj1.rdbuf();
  REQUIRE(!buf1.str().empty());
  CHECK(buf1.str().rfind("t Pi Px Py", 0) == 0);

  run_simulate(s, dir.string());
  std::ifstream traj2(dir / "traj.txt");
  std::stringstream buf2;
  buf2 << traj2.rdbuf();
  CHECK(buf1.str() == buf2.str());  // byte-identical reruns

  std::ifstream summary(dir / "summary.txt");
  std::stringstream sbuf;
  sbuf << summary.rdbuf();
  CHECK(sbuf.str().find("M_f:") != std::string::npos);
  CHECK(sbuf.str().find("H_max_drift") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("leaves output traces satisfy their defining equations") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "circbody_test_leaves";
  fs::create_directories(dir);

  ScenarioFile s = parse_string(kSample);
  s.shape = CircleSpec{1.0};
  s.panels = 64;
  s.steps = 200;
  run_leaves(s, dir.string());

  std::ifstream in(dir / "leaves.txt");
  REQUIRE(in.good());
  std::string tag;
  double traj_c0 = 0.0;
  bool have_c0 = false;
  int checked = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    ls >> tag;
    if (tag == "paper" || tag == "verified") {
      double phi, px, pi_val;
      ls >> phi >> px >> pi_val;
      const double c = tag == "paper" ? 1.0 : 0.5;
      CHECK(std::abs(pi_val + c * px * px / s.gamma - phi) < 1e-12);
      ++checked;
    } else if (tag == "traj") {
      double t, pi_ang, px, py, cas;
      ls >> t >> pi_ang >> px >> py >> cas;
      if (!have_c0) {
        traj_c0 = cas;
        have_c0 = true;
      }
      CHECK(std::abs(cas - traj_c0) < 1e-8);
      ++checked;
    }
  }
  CHECK(checked > 100);

  // Gamma = 0 is the singular limit
  s.gamma = 0.0;
  CHECK_THROWS_AS(run_leaves(s, dir.string()), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("field snapshots mask interior points and decay far away") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "circbody_test_field";
  fs::create_directories(dir);

  ScenarioFile s = parse_string(kSample);
  s.shape = CircleSpec{1.0};
  s.panels = 128;
  s.steps = 0;
  s.pi0 = Se2Momentum();  // no body motion, pure circulation
  s.gamma = 2.0 * M_PI;
  s.grid_n = 9;
  s.grid_min_x = s.grid_min_y = -3.7;
  s.grid_max_x = s.grid_max_y = 3.7;
  s.field_steps = {0};
  run_field(s, dir.string());

  std::ifstream in(dir / "field.txt");
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "step t x y ux uy inside");
  int masked = 0, outside = 0;
  long idx;
  double t, x, y, ux, uy;
  int inside;
  while (in >> idx >> t >> x >> y >> ux >> uy >> inside) {
    if (inside == 1) {
      ++masked;
      CHECK(ux == 0.0);
    } else {
      ++outside;
      const double r = std::hypot(x, y);
      if (r > 1.2) {
        // pure circulation: |u| = Gamma / (2 pi r)
        CHECK(std::hypot(ux, uy) == doctest::Approx(1.0 / r).epsilon(1e-3));
      }
    }
  }
  CHECK(masked > 0);      // grid center lands inside the body
  CHECK(outside > masked);
  fs::remove_all(dir);
}

TEST_CASE("verification suite passes clean and fails the planted defect") {
  std::ostringstream report;
  VerifyOptions opt;
  CHECK(run_verify(opt, report) == 0);
  const std::string text = report.str();
  CHECK(text.find("factor-tension casimir_coefficient") != std::string::npos);
  CHECK(text.find("factor-tension cocycle_scale") != std::string::npos);
  CHECK(text.find("factor-tension psi_scale") != std::string::npos);
  CHECK(text.find("FAIL") == std::string::npos);

  // reproducibility: identical seed, identical report
  std::ostringstream again;
  CHECK(run_verify(opt, again) == 0);
  CHECK(again.str() == text);

  opt.inject_defect = true;
  std::ostringstream bad;
  CHECK(run_verify(opt, bad) != 0);
  CHECK(bad.str().find("jacobi_se2_magnetic") != std::string::npos);
  CHECK(bad.str().find("FAIL") != std::string::npos);
}
