#include <doctest.h>

#include <sstream>

#include "core/error.hpp"
#include "core/model.hpp"

using namespace floqept;

TEST_CASE("defaults validate") {
  ModelParams p;
  SimConfig c;
  CHECK(validate(p, c).ok());
  CHECK(p.n() == 1);
  CHECK(p.signed_order() == -1);
  CHECK(p.mismatch() == doctest::Approx(50.0));
  CHECK(p.modulation_index() == doctest::Approx(4300.0 / 3000.0));
}

TEST_CASE("required truncation follows drive depth") {
  ModelParams p;
  p.delta_b = 4300;
  p.omega_b = 3000;
  CHECK(required_truncation(p) == 5);
  p.delta_b = 0;
  CHECK(required_truncation(p) == 3);
  p.delta_b = 3000;
  p.omega_b = 1000;
  CHECK(required_truncation(p) == 6);
}

TEST_CASE("validation reports every offending field") {
  ModelParams p;
  SimConfig c;
  p.omega_b = 0;
  p.gamma_c = -1;
  c.grid.step = 0;
  auto r = validate(p, c);
  CHECK_FALSE(r.ok());
  auto text = r.to_string();
  CHECK(text.find("omega_b must be positive") != std::string::npos);
  CHECK(text.find("gamma_c") != std::string::npos);
  CHECK(text.find("grid_step") != std::string::npos);

  ModelParams q;
  SimConfig d;
  d.truncation_m = 2;
  auto r2 = validate(q, d);
  CHECK(r2.to_string().find("at least 5") != std::string::npos);
  try {
    require_valid(q, d);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation);
  }
}

TEST_CASE("negative band order is rejected") {
  ModelParams p;
  p.n1 = 0;
  p.n2 = 1;
  CHECK_FALSE(validate(p, SimConfig{}).ok());
}

TEST_CASE("frequency grid arithmetic") {
  FrequencyGrid g{2900, 3200, 1};
  CHECK(g.size() == 301);
  CHECK(g.at(300) == doctest::Approx(3200));
  FrequencyGrid h{0, 1, 0.1};
  CHECK(h.size() == 11);
  FrequencyGrid bad{1, 0, 1};
  CHECK(bad.size() == 0);
}

TEST_CASE("settings round trip") {
  ModelParams p;
  SimConfig c;
  p.delta0 = -3055.8;
  p.gamma_c = 12.25;
  p.n1 = 2;
  c.truncation_m = 11;
  c.grid = {-100, 100, 0.5};
  c.sim_duration = 2.5;
  std::istringstream in(format_settings(p, c));
  ModelParams q;
  SimConfig d;
  load_settings(in, q, d);
  CHECK(format_settings(q, d) == format_settings(p, c));
  CHECK(q.delta0 == p.delta0);
  CHECK(d.grid.step == 0.5);
}

TEST_CASE("settings parser handles comments and rejects junk") {
  ModelParams p;
  SimConfig c;
  std::istringstream ok("# comment\n\n  omega_b =  1500 \ngamma_c=260\n");
  load_settings(ok, p, c);
  CHECK(p.omega_b == 1500);
  CHECK(p.gamma_c == 260);

  std::istringstream unknown("bogus = 1\n");
  CHECK_THROWS_AS(load_settings(unknown, p, c), Error);
  std::istringstream notnum("omega_b = fast\n");
  CHECK_THROWS_AS(load_settings(notnum, p, c), Error);
  std::istringstream noeq("omega_b 1500\n");
  CHECK_THROWS_AS(load_settings(noeq, p, c), Error);
  std::istringstream badint("n1 = 1.5\n");
  CHECK_THROWS_AS(load_settings(badint, p, c), Error);
}

TEST_CASE("missing settings file is an io error") {
  ModelParams p;
  SimConfig c;
  try {
    load_settings_file("/nonexistent/floqept.cfg", p, c);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
}
