#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "core/error.hpp"
#include "engine/floquet.hpp"
#include "numerics/bessel.hpp"
#include "observables/observables.hpp"

using namespace floqept;
using namespace floqept::observables;

namespace {

ModelParams reference_point() {
  ModelParams p;
  p.delta0 = -3050;
  p.omega_b = 3000;
  p.delta_b = 4300;
  p.gamma_c = 93;
  p.gamma12 = 50;
  return p;
}

double lorentz(double x, double x0, double hw) { return 1.0 / (1.0 + (x - x0) * (x - x0) / (hw * hw)); }

}  // namespace

TEST_CASE("detect_peaks: symmetric triangle") {
  std::vector<double> x, y;
  const double x0 = 3.3;
  for (int i = 0; i <= 100; ++i) {
    x.push_back(i * 0.1);
    y.push_back(std::max(0.0, 2.0 - std::abs(x.back() - x0)));
  }
  auto pk = detect_peaks(x, y, 0.1);
  REQUIRE(pk.size() == 1);
  CHECK(std::abs(pk[0].center - x0) <= 0.1 * 1e-2);
  CHECK(pk[0].fwhm == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("detect_peaks: two Lorentzians ten widths apart") {
  const double hw = 5, fwhm = 2 * hw;
  std::vector<double> x, y;
  for (double v = -100; v <= 200; v += 0.5) {
    x.push_back(v);
    y.push_back(lorentz(v, 20.3, hw) + lorentz(v, 20.3 + 10 * fwhm, hw));
  }
  auto pk = detect_peaks(x, y, 0.05);
  REQUIRE(pk.size() == 2);
  CHECK(std::abs(pk[0].center - 20.3) < 0.01 * fwhm);
  CHECK(std::abs(pk[1].center - (20.3 + 10 * fwhm)) < 0.01 * fwhm);
  CHECK(pk[0].center < pk[1].center);
  for (const auto& p : pk) CHECK(p.fwhm == doctest::Approx(fwhm).epsilon(0.02));
}

TEST_CASE("property: detect_peaks is scale invariant") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> x, y;
  for (int i = 0; i < 400; ++i) {
    x.push_back(i);
    y.push_back(lorentz(i, 100, 8) + 0.6 * lorentz(i, 260, 15) + 0.01 * u(rng));
  }
  auto base = detect_peaks(x, y, 0.1);
  REQUIRE(base.size() == 2);
  for (double s : {1e-6, 0.5, 7.0, 1e5}) {
    std::vector<double> ys(y);
    for (double& v : ys) v *= s;
    auto pk = detect_peaks(x, ys, 0.1);
    REQUIRE(pk.size() == base.size());
    for (std::size_t i = 0; i < pk.size(); ++i) {
      CHECK(pk[i].center == doctest::Approx(base[i].center).epsilon(1e-12));
      CHECK(pk[i].fwhm == doctest::Approx(base[i].fwhm).epsilon(1e-12));
      CHECK(pk[i].height == doctest::Approx(s * base[i].height).epsilon(1e-12));
    }
  }
}

TEST_CASE("detect_peaks rejects bad input") {
  CHECK_THROWS_AS(detect_peaks({}, {}, 0.1), Error);
  CHECK_THROWS_AS(detect_peaks({1, 2, 3}, {1, 2}, 0.1), Error);
  CHECK_THROWS_AS(detect_peaks({1, 2, 3}, {0, 1, 0}, 0.0), Error);
  try {
    detect_peaks({}, {}, 0.1);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_argument);
  }
}

TEST_CASE("label_sidebands") {
  PeakSet pk{{-6190, 1, 1, {}}, {10, 1, 1, {}}, {1500, 1, 1, {}}, {3102, 1, 1, {}}};
  label_sidebands(pk, 0, 3100);
  CHECK(pk[0].label == -2);
  CHECK(pk[1].label == 0);
  CHECK(!pk[2].label);
  CHECK(pk[3].label == 1);
}

TEST_CASE("spectrum: static single resonance") {
  ModelParams p;
  p.delta0 = 0;
  p.gamma_c = 0;
  p.delta_b = 0;
  p.gamma12 = 50;
  SimConfig cfg;
  cfg.truncation_m = 3;
  cfg.grid = {-500, 500, 1};
  auto tr = synthesize_spectrum(p, cfg, {Channel::ch1});
  REQUIRE(tr.grid.size() == 1001);
  for (std::size_t i = 0; i < tr.grid.size(); ++i) {
    const double d = tr.grid[i];
    // |1 / (d - i g)|^2
    CHECK(tr.channel(Channel::ch1)[i] == doctest::Approx(1.0 / (d * d + 2500.0)).epsilon(1e-10));
    CHECK(tr.channel(Channel::ch2)[i] == 0.0);
  }
  auto pk = detect_peaks(tr, 0.05, Channel::ch1);
  REQUIRE(pk.size() == 1);
  CHECK(std::abs(pk[0].center) < 1e-9);
  CHECK(pk[0].fwhm == doctest::Approx(100.0).epsilon(1e-3));
}

TEST_CASE("spectrum invariants and stark offset") {
  ModelParams p = reference_point();
  p.stark_shift = 100;
  SimConfig cfg;
  cfg.grid = {-4000, -2000, 5};
  SpectrumOptions o;
  o.sidebands = true;
  o.jobs = 2;
  auto tr = synthesize_spectrum(p, cfg, {Channel::ch1, Channel::ch2}, o);
  REQUIRE(tr.has_sidebands());
  for (std::size_t i = 0; i < tr.grid.size(); ++i) {
    CHECK(tr.grid[i] == doctest::Approx(cfg.grid.at(i) + 100));
    if (i) CHECK(tr.grid[i] > tr.grid[i - 1]);
    for (Channel c : {Channel::ch1, Channel::ch2}) {
      CHECK(tr.channel(c)[i] >= 0);
      double sum = 0;
      for (const auto& s : tr.sideband[index(c)]) sum += s[i];
      CHECK(sum == doctest::Approx(tr.channel(c)[i]).epsilon(1e-12));
    }
  }
  // The same run serially is bit-identical.
  o.jobs = 1;
  auto serial = synthesize_spectrum(p, cfg, {Channel::ch1, Channel::ch2}, o);
  CHECK(serial.power[0] == tr.power[0]);
  CHECK(serial.power[1] == tr.power[1]);
}

TEST_CASE("spectrum: driven transfer shows carrier and two sideband orders") {
  ModelParams p;
  p.delta0 = 0;
  p.gamma_c = 2;
  p.delta_b = 3000;
  p.omega_b = 3100;
  p.gamma12 = 50;
  p.n1 = 0;
  SimConfig cfg;
  cfg.truncation_m = required_truncation(p) + 2;
  cfg.grid = {-7000, 7000, 2};
  auto tr = synthesize_spectrum(p, cfg, {Channel::ch1});
  auto pk = detect_peaks(tr, 1e-3, Channel::ch2);
  label_sidebands(pk, 0, p.omega_b);
  std::map<int, Peak> by;
  for (const auto& k : pk)
    if (k.label) by[*k.label] = k;
  for (int m = -2; m <= 2; ++m) {
    REQUIRE(by.count(m) == 1);
    CHECK(std::abs(by[m].center - m * p.omega_b) < 2.0);
  }
  CHECK(by[0].height > by[1].height);
  CHECK(by[1].height > by[2].height);
  CHECK(by[1].height == doctest::Approx(by[-1].height).epsilon(1e-3));

  // Self-spectrum heights follow J_m(x)^2 relative to the carrier.
  auto self = detect_peaks(tr, 1e-3, Channel::ch1);
  label_sidebands(self, 0, p.omega_b);
  const double x = p.delta_b / p.omega_b;
  double h0 = 0;
  for (const auto& k : self)
    if (k.label == 0) h0 = k.height;
  REQUIRE(h0 > 0);
  for (const auto& k : self) {
    if (!k.label || std::abs(*k.label) > 2) continue;
    const double ratio = std::pow(numerics::bessel_j(*k.label, x) / numerics::bessel_j(0, x), 2);
    CHECK(k.height / h0 == doctest::Approx(ratio).epsilon(0.02));
  }
}

TEST_CASE("property: sideband heights sum independently of drive depth") {
  double ref = 0;
  for (double db : {0.0, 1500.0, 3000.0, 4300.0, 6000.0}) {
    ModelParams p;
    p.delta0 = 0;
    p.gamma_c = 0;
    p.gamma12 = 50;
    p.delta_b = db;
    p.omega_b = 3000;
    p.n1 = 0;
    const int mt = required_truncation(p) + 4;
    engine::LabFrameModel model(p);
    double sum = 0;
    for (int m = -mt; m <= mt; ++m)
      sum += engine::steady_state_response(model, mt, {Channel::ch1, m * p.omega_b, 1.0}).power(Channel::ch1);
    if (db == 0) ref = sum;
    CHECK(sum == doctest::Approx(ref).epsilon(0.02));
  }
}

TEST_CASE("separation: coupled reference point merges, uncoupled reads the mismatch") {
  ModelParams p = reference_point();
  SimConfig cfg;
  auto coupled = measure_separation(p, cfg);
  CHECK(coupled.merged);
  CHECK(coupled.separation == 0.0);
  CHECK(coupled.fwhm > 0);

  p.gamma_c = 0;
  auto bare = measure_separation(p, cfg);
  CHECK(!bare.merged);
  CHECK(std::abs(bare.separation - 50) < 0.1);
  CHECK(bare.eigen_separation == doctest::Approx(50));
}

TEST_CASE("separation: zero coupling follows the mismatch across a grid") {
  ModelParams p = reference_point();
  p.gamma_c = 0;
  p.gamma12 = 2;
  SimConfig cfg;
  SeparationOptions o;
  o.jobs = 2;
  const std::vector<double> grid{3005, 3020, 3075, 3200};
  auto curve = separation_curve(p, grid, cfg, o);
  REQUIRE(curve.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(curve[i].delta0_abs == grid[i]);
    CHECK(!curve[i].merged);
    CHECK(std::abs(curve[i].separation - (grid[i] - 3000)) < 0.05);
  }
}

TEST_CASE("property: separation plateau, monotone branch and asymptotics") {
  ModelParams p = reference_point();
  p.gamma12 = 2;
  SimConfig cfg;
  const double ge = engine::effective_coupling(p);
  std::vector<double> grid;
  for (double d = 3000; d <= 3200; d += 10) grid.push_back(d);
  auto curve = separation_curve(p, grid, cfg);
  double prev = 0;
  bool past = false;
  for (const auto& pt : curve) {
    const double mu = pt.delta0_abs - 3000;
    if (mu < 2 * ge - 2) CHECK(pt.merged);
    if (mu > 2 * ge + 2) CHECK(!pt.merged);
    if (!pt.merged) {
      if (past) CHECK(pt.separation >= prev - 10);
      past = true;
      prev = pt.separation;
    }
    if (mu > 4 * ge) {
      const double oracle = std::sqrt(mu * mu - 4 * ge * ge);
      CHECK(std::abs(pt.separation - oracle) < 0.05 * oracle);
    }
  }
}

TEST_CASE("separation: static comparison bifurcates at twice the coupling") {
  ModelParams p;
  p.delta0 = -150;
  p.delta_b = 0;
  p.gamma_c = 93;
  p.gamma12 = 2;
  p.n1 = 0;
  SimConfig cfg;
  cfg.truncation_m = 3;
  CHECK(measure_separation(p, cfg).merged);
  p.delta0 = -220;
  auto pt = measure_separation(p, cfg);
  CHECK(!pt.merged);
  CHECK(std::abs(pt.separation - std::sqrt(220.0 * 220 - 186.0 * 186)) < 0.05 * 117);
}

TEST_CASE("separation rejects bad steps") {
  SeparationOptions o;
  o.fine_step = 2;
  CHECK_THROWS_AS(measure_separation(reference_point(), SimConfig{}, o), Error);
}

TEST_CASE("beat: weak coupling at the reference detuning") {
  ModelParams p = reference_point();
  p.gamma_c = 2;
  SimConfig cfg;
  auto b = beat_frequency(p, cfg);
  REQUIRE(b.found);
  CHECK(std::abs(b.frequency - 50) < b.resolution);
  CHECK(b.frequency >= 0);
  CHECK(b.frequency < b.nyquist);
  CHECK(b.confidence >= 8);
}

TEST_CASE("beat: none found at exact resonance") {
  ModelParams p = reference_point();
  p.gamma_c = 2;
  p.delta0 = -3000;
  auto b = beat_frequency(p, SimConfig{});
  CHECK(!b.found);
  CHECK(!b.note.empty());
}

TEST_CASE("property: beat equals the mismatch over 10..500 Hz") {
  for (double mu : {10.0, 35.0, 100.0, 260.0, 500.0}) {
    ModelParams p = reference_point();
    p.gamma_c = 2;
    p.delta0 = -(3000 + mu);
    auto b = beat_frequency(p, SimConfig{});
    REQUIRE_MESSAGE(b.found, "mu=" << mu << " note=" << b.note);
    CHECK_MESSAGE(std::abs(b.frequency - mu) < b.resolution, "mu=" << mu << " beat=" << b.frequency);
  }
}

TEST_CASE("separation raises the truncation for higher-order sidebands") {
  ModelParams p = reference_point();
  p.omega_b = 1000;
  p.gamma_c = 380;
  p.gamma12 = 2;
  p.delta_b = 4637.67;
  p.n1 = 3;
  p.delta0 = -3080;
  SimConfig lo, hi;
  lo.truncation_m = required_truncation(p);
  hi.truncation_m = required_truncation(p) + 6;
  const auto a = measure_separation(p, lo);
  const auto b = measure_separation(p, hi);
  CHECK(a.merged == b.merged);
  CHECK(std::abs(a.ch1_center - b.ch1_center) < 0.05);
  CHECK(std::abs(a.ch2_center - b.ch2_center) < 0.05);
}
