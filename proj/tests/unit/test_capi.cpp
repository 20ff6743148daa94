#include <doctest.h>
#include <floqept/floqept.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

namespace {

struct Cfg {
  floqept_config* p = nullptr;
  Cfg() { REQUIRE(floqept_config_create(&p) == FLOQEPT_OK); }
  ~Cfg() { floqept_config_destroy(p); }
  Cfg(const Cfg&) = delete;
  Cfg& operator=(const Cfg&) = delete;
  void set(const char* k, double v) { REQUIRE(floqept_config_set_double(p, k, v) == FLOQEPT_OK); }
  double get(const char* k) const {
    double v = 0;
    REQUIRE(floqept_config_get_double(p, k, &v) == FLOQEPT_OK);
    return v;
  }
};

std::string settings_text(const floqept_config* c) {
  size_t need = 0;
  REQUIRE(floqept_config_format(c, nullptr, 0, &need) == FLOQEPT_OK);
  std::string s(need, '\0');
  REQUIRE(floqept_config_format(c, s.data(), s.size(), &need) == FLOQEPT_OK);
  s.resize(need - 1);
  return s;
}

}  // namespace

TEST_CASE("status and enum names") {
  CHECK(std::string(floqept_status_name(FLOQEPT_OK)) == "ok");
  CHECK(std::string(floqept_phase_name(FLOQEPT_EP)) == "EP");
  floqept_route r{};
  CHECK(floqept_route_parse("monodromy", &r) == FLOQEPT_OK);
  CHECK(r == FLOQEPT_ROUTE_MONODROMY);
  CHECK(floqept_route_parse("spectral-pipeline", &r) == FLOQEPT_OK);
  CHECK(std::string(floqept_route_name(r)) == "spectral-pipeline");
  CHECK(floqept_route_parse("nonsense", &r) == FLOQEPT_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(floqept_last_error()) > 0);
  CHECK(std::strlen(floqept_version()) > 0);
}

TEST_CASE("null handles are rejected, destroy accepts null") {
  CHECK(floqept_config_create(nullptr) == FLOQEPT_ERR_INVALID_ARGUMENT);
  floqept_branches b{};
  CHECK(floqept_static_eigen(nullptr, &b) == FLOQEPT_ERR_INVALID_ARGUMENT);
  CHECK(std::string(floqept_last_error()).find("config") != std::string::npos);
  floqept_config_destroy(nullptr);
  floqept_spectrum_destroy(nullptr);
  floqept_peaks_destroy(nullptr);
  floqept_gamma_curve_destroy(nullptr);
  // A successful call clears the message.
  Cfg c;
  CHECK(floqept_static_eigen(c.p, &b) == FLOQEPT_OK);
  CHECK(std::string(floqept_last_error()).empty());
}

TEST_CASE("config keys, set/get and text round trip") {
  Cfg c;
  REQUIRE(floqept_config_key_count() == 16);
  for (size_t i = 0; i < floqept_config_key_count(); ++i) {
    double v = 0;
    CHECK(floqept_config_get_double(c.p, floqept_config_key(i), &v) == FLOQEPT_OK);
  }
  CHECK(floqept_config_key(99) == nullptr);
  CHECK(floqept_config_set(c.p, "gamma_c", "123.25") == FLOQEPT_OK);
  CHECK(c.get("gamma_c") == 123.25);
  CHECK(floqept_config_set(c.p, "no_such_key", "1") == FLOQEPT_ERR_INVALID_ARGUMENT);
  CHECK(floqept_config_set(c.p, "gamma_c", "abc") != FLOQEPT_OK);
  CHECK(floqept_config_set_double(c.p, "n1", 1.5) == FLOQEPT_ERR_INVALID_ARGUMENT);
  c.set("rel_tol", 1e-9);
  c.set("delta0", 0.1 + 0.2);

  const std::string text = settings_text(c.p);
  Cfg d;
  REQUIRE(floqept_config_load_text(d.p, text.c_str()) == FLOQEPT_OK);
  CHECK(settings_text(d.p) == text);
  CHECK(d.get("delta0") == 0.1 + 0.2);

  char small[8];
  size_t need = 0;
  CHECK(floqept_config_format(c.p, small, sizeof small, &need) == FLOQEPT_ERR_RANGE);
  CHECK(need == text.size() + 1);
}

TEST_CASE("load is transactional and file errors are io") {
  Cfg c;
  const double before = c.get("gamma_c");
  CHECK(floqept_config_load_text(c.p, "gamma_c = 10\nbogus = 3\n") != FLOQEPT_OK);
  CHECK(c.get("gamma_c") == before);
  CHECK(floqept_config_load_text(c.p, "# comment\n\ngamma_c = 10\n") == FLOQEPT_OK);
  CHECK(c.get("gamma_c") == 10);
  CHECK(floqept_config_load_file(c.p, "/nonexistent/dir/x.cfg") == FLOQEPT_ERR_IO);

  const std::string path = "capi_test_settings.cfg";
  std::FILE* f = std::fopen(path.c_str(), "w");
  REQUIRE(f);
  std::fputs("omega_b = 2500\nn1 = 2\n", f);
  std::fclose(f);
  CHECK(floqept_config_load_file(c.p, path.c_str()) == FLOQEPT_OK);
  CHECK(c.get("omega_b") == 2500);
  CHECK(c.get("n1") == 2);
  std::remove(path.c_str());
}

TEST_CASE("validation report lists every problem") {
  Cfg c;
  CHECK(floqept_config_validate(c.p) == FLOQEPT_OK);
  c.set("gamma12", -1);
  c.set("grid_step", 0);
  CHECK(floqept_config_validate(c.p) == FLOQEPT_ERR_VALIDATION);
  const std::string msg = floqept_last_error();
  CHECK(msg.find("gamma12") != std::string::npos);
  CHECK(msg.find("grid_step") != std::string::npos);
  floqept_branches b{};
  CHECK(floqept_static_eigen(c.p, &b) == FLOQEPT_ERR_VALIDATION);
}

TEST_CASE("clone is independent") {
  Cfg c;
  c.set("gamma_c", 7);
  floqept_config* d = nullptr;
  REQUIRE(floqept_config_clone(c.p, &d) == FLOQEPT_OK);
  CHECK(floqept_config_set_double(d, "gamma_c", 9) == FLOQEPT_OK);
  CHECK(c.get("gamma_c") == 7);
  floqept_config_destroy(d);
}

TEST_CASE("static branches against the two-mode closed form") {
  Cfg c;
  for (double d0 : {-400.0, -186.0, -50.0, 0.0, 120.0, 3000.0}) {
    c.set("delta0", d0);
    c.set("gamma_c", 93);
    floqept_branches b{};
    REQUIRE(floqept_static_eigen(c.p, &b) == FLOQEPT_OK);
    const std::complex<double> root = std::sqrt(std::complex<double>(d0 * d0 / 4 - 93.0 * 93.0, 0));
    const std::complex<double> plus = d0 / 2 + root, minus = d0 / 2 - root;
    CAPTURE(d0);
    CHECK(std::abs(std::complex<double>(b.re_plus, b.im_plus) - plus) +
              std::abs(std::complex<double>(b.re_minus, b.im_minus) - minus) <
          1e-9 * 400);
  }
  c.set("delta0", -186);
  floqept_branches b{};
  REQUIRE(floqept_static_eigen(c.p, &b) == FLOQEPT_OK);
  CHECK(b.phase == FLOQEPT_EP);
}

TEST_CASE("effective coupling and rwa exceptional point") {
  Cfg c;
  double ge = 0;
  REQUIRE(floqept_effective_coupling(c.p, &ge) == FLOQEPT_OK);
  const double x = c.get("delta_b") / c.get("omega_b");
  const double ref = c.get("gamma_c") * std::abs(std::cyl_bessel_j(0.0, x) * std::cyl_bessel_j(1.0, x));
  CHECK(ge == doctest::Approx(ref).epsilon(1e-12));
  // Just inside and just outside |mu| = 2 gamma_eff.
  c.set("delta0", -(3000 + 2 * ref - 0.5));
  floqept_branches b{};
  REQUIRE(floqept_rwa_eigen(c.p, &b) == FLOQEPT_OK);
  CHECK(b.phase == FLOQEPT_UNBROKEN);
  c.set("delta0", -(3000 + 2 * ref + 0.5));
  REQUIRE(floqept_rwa_eigen(c.p, &b) == FLOQEPT_OK);
  CHECK(b.phase == FLOQEPT_BROKEN);
}

TEST_CASE("monodromy determinant matches the decay") {
  Cfg c;
  floqept_quasienergies q{};
  REQUIRE(floqept_monodromy(c.p, &q) == FLOQEPT_OK);
  const double T = 1.0 / c.get("omega_b");
  CHECK(q.determinant_abs == doctest::Approx(std::exp(-4 * M_PI * c.get("gamma12") * T)).epsilon(1e-8));
  CHECK(q.determinant_expected == doctest::Approx(q.determinant_abs).epsilon(1e-8));
  CHECK(q.steps > 0);
  // Common decay survives as the mean of the imaginary parts.
  CHECK(0.5 * (q.im[0] + q.im[1]) == doctest::Approx(-c.get("gamma12")).epsilon(1e-6));
  for (double re : q.re) {
    CHECK(re >= -0.5 * c.get("omega_b"));
    CHECK(re < 0.5 * c.get("omega_b"));
  }
}

TEST_CASE("spectrum handle and peak labels") {
  Cfg c;
  c.set("omega_b", 3100);
  c.set("grid_start", -7000);
  c.set("grid_stop", 7000);
  c.set("grid_step", 2);
  floqept_spectrum* s = nullptr;
  REQUIRE(floqept_spectrum_compute(c.p, 1u, 1, 1, &s) == FLOQEPT_OK);
  std::unique_ptr<floqept_spectrum, void (*)(floqept_spectrum*)> guard(s, floqept_spectrum_destroy);
  const size_t n = floqept_spectrum_size(s);
  CHECK(n == 7001);
  CHECK(floqept_spectrum_grid(s)[0] == -7000);
  CHECK(floqept_spectrum_sideband(s, FLOQEPT_CH2, 0) != nullptr);
  CHECK(floqept_spectrum_sideband(s, FLOQEPT_CH2, floqept_spectrum_truncation(s) + 1) == nullptr);
  // Sideband pieces add up to the total.
  const double* total = floqept_spectrum_power(s, FLOQEPT_CH2);
  const int mt = floqept_spectrum_truncation(s);
  for (size_t i = 0; i < n; i += 500) {
    double sum = 0;
    for (int m = -mt; m <= mt; ++m) sum += floqept_spectrum_sideband(s, FLOQEPT_CH2, m)[i];
    CHECK(sum == doctest::Approx(total[i]).epsilon(1e-9));
  }

  floqept_peaks* pk = nullptr;
  REQUIRE(floqept_detect_peaks(floqept_spectrum_grid(s), total, n, 1e-3, &pk) == FLOQEPT_OK);
  std::unique_ptr<floqept_peaks, void (*)(floqept_peaks*)> pguard(pk, floqept_peaks_destroy);
  REQUIRE(floqept_peaks_label(pk, c.get("stark_shift"), 3100) == FLOQEPT_OK);
  std::vector<int> labels;
  for (size_t i = 0; i < floqept_peaks_count(pk); ++i) {
    floqept_peak p{};
    REQUIRE(floqept_peaks_get(pk, i, &p) == FLOQEPT_OK);
    if (p.has_label) labels.push_back(p.label);
  }
  CHECK(labels == std::vector<int>{-2, -1, 0, 1, 2});
  floqept_peak p{};
  CHECK(floqept_peaks_get(pk, 99, &p) == FLOQEPT_ERR_RANGE);
}

TEST_CASE("steady-state power of a single driven mode") {
  Cfg c;
  c.set("gamma_c", 0);
  c.set("delta_b", 0);
  c.set("delta0", 0);
  double pw[2];
  for (double d : {0.0, 30.0, 200.0}) {
    REQUIRE(floqept_steady_state_power(c.p, FLOQEPT_CH1, d, pw) == FLOQEPT_OK);
    CHECK(pw[0] == doctest::Approx(1.0 / (d * d + 2500)).epsilon(1e-9));
    CHECK(pw[1] == doctest::Approx(0).epsilon(1e-15));
  }
}

TEST_CASE("separation and beat at the reference point") {
  Cfg c;
  floqept_separation_point sp{};
  REQUIRE(floqept_separation(c.p, nullptr, &sp) == FLOQEPT_OK);
  CHECK(sp.merged == 1);
  c.set("gamma_c", 0);
  REQUIRE(floqept_separation(c.p, nullptr, &sp) == FLOQEPT_OK);
  CHECK(sp.separation == doctest::Approx(50).epsilon(0.04));

  c.set("gamma_c", 2);
  floqept_beat bt{};
  REQUIRE(floqept_beat_frequency(c.p, 16, 8, &bt) == FLOQEPT_OK);
  CHECK(bt.found == 1);
  CHECK(std::abs(bt.frequency - 50) <= bt.resolution);
  floqept_beat dflt{};
  REQUIRE(floqept_beat_frequency(c.p, 0, 0, &dflt) == FLOQEPT_OK);
  CHECK(dflt.frequency == bt.frequency);
  CHECK(floqept_beat_frequency(c.p, 16, 8, nullptr) == FLOQEPT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("closed-form ep and indicator agree") {
  Cfg c;
  floqept_ep_options o;
  floqept_ep_options_init(&o);
  floqept_ep_result r{};
  REQUIRE(floqept_locate_ep(c.p, 1, FLOQEPT_ROUTE_CLOSED_FORM, &o, &r) == FLOQEPT_OK);
  double ge = 0;
  REQUIRE(floqept_effective_coupling(c.p, &ge) == FLOQEPT_OK);
  CHECK(std::abs(r.delta0_abs - (3000 + 2 * ge)) <= 0.5);
  CHECK(r.hi - r.lo <= o.bracket_width);
  int broken = -1;
  REQUIRE(floqept_ep_indicator(c.p, 1, FLOQEPT_ROUTE_CLOSED_FORM, r.hi + 1, &o, &broken) == FLOQEPT_OK);
  CHECK(broken == 1);
  REQUIRE(floqept_ep_indicator(c.p, 1, FLOQEPT_ROUTE_CLOSED_FORM, r.lo - 1, &o, &broken) == FLOQEPT_OK);
  CHECK(broken == 0);
  CHECK(floqept_locate_ep(c.p, -1, FLOQEPT_ROUTE_CLOSED_FORM, &o, &r) != FLOQEPT_OK);
}

TEST_CASE("gamma curve fit recovers the generating parameters") {
  std::vector<floqept_gamma_point> pts;
  for (double w = 2000; w <= 8000; w += 500) pts.push_back({w, floqept_coupling_model(w, 93, 4300), 1});
  floqept_gamma_curve* g = nullptr;
  REQUIRE(floqept_gamma_curve_fit(pts.data(), pts.size(), &g) == FLOQEPT_OK);
  CHECK(floqept_gamma_curve_fitted(g) == 1);
  CHECK(floqept_gamma_curve_gamma_c(g) == doctest::Approx(93).epsilon(1e-6));
  CHECK(floqept_gamma_curve_delta_b(g) == doctest::Approx(4300).epsilon(1e-6));
  CHECK(floqept_gamma_curve_size(g) == pts.size());
  floqept_gamma_point p{};
  CHECK(floqept_gamma_curve_point(g, pts.size(), &p) == FLOQEPT_ERR_RANGE);
  floqept_gamma_curve_destroy(g);
}

TEST_CASE("bessel and height fit") {
  double v = 0;
  for (int m : {0, 1, 2, 5}) {
    REQUIRE(floqept_bessel_j(m, 1.7, &v) == FLOQEPT_OK);
    CHECK(v == doctest::Approx(std::cyl_bessel_j(double(m), 1.7)).epsilon(1e-12));
  }
  CHECK(floqept_bessel_j(1, 60, &v) == FLOQEPT_ERR_RANGE);

  std::vector<double> w, h;
  for (double x = 1000; x <= 8000; x += 500) {
    w.push_back(x);
    const double j = std::cyl_bessel_j(1.0, 3000 / x);
    h.push_back(2e-4 * j * j);
  }
  floqept_fit_result f{};
  REQUIRE(floqept_fit_sideband_heights(w.data(), h.data(), w.size(), 1, &f) == FLOQEPT_OK);
  CHECK(f.converged == 1);
  CHECK(f.k == doctest::Approx(3000).epsilon(1e-6));
  CHECK(f.alpha == doctest::Approx(2e-4).epsilon(1e-6));
  CHECK(f.r_squared > 0.999999);
}

TEST_CASE("drive depth solve and roots") {
  double db = 0;
  REQUIRE(floqept_solve_drive_depth(260, 1500, 2, 0, 43, 3.0, 3.6, &db) == FLOQEPT_OK);
  const double x = db / 1500;
  CHECK(260 * std::abs(std::cyl_bessel_j(2.0, x) * std::cyl_bessel_j(0.0, x)) == doctest::Approx(43).epsilon(1e-9));
  CHECK(floqept_solve_drive_depth(93, 1500, 2, 0, 43, 3.0, 3.6, &db) == FLOQEPT_ERR_NUMERICAL);

  size_t count = 0;
  REQUIRE(floqept_drive_depth_roots(260, 2, 0, 43, 20, nullptr, 0, &count) == FLOQEPT_OK);
  CHECK(count > 0);
  std::vector<double> roots(count);
  REQUIRE(floqept_drive_depth_roots(260, 2, 0, 43, 20, roots.data(), roots.size(), &count) == FLOQEPT_OK);
  for (double r : roots)
    CHECK(260 * std::abs(std::cyl_bessel_j(2.0, r) * std::cyl_bessel_j(0.0, r)) == doctest::Approx(43).epsilon(1e-8));
}

TEST_CASE("phase diagram layout is omega-major") {
  Cfg c;
  const double d[] = {2900, 3000, 3300};
  const double w[] = {3000, 3200};
  floqept_phase_cell cells[6];
  REQUIRE(floqept_phase_diagram(c.p, d, 3, w, 2, 1, 1.0, cells) == FLOQEPT_OK);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(cells[i * 3 + j].omega_b == w[i]);
      CHECK(cells[i * 3 + j].delta0_abs == d[j]);
      CHECK(cells[i * 3 + j].mu == doctest::Approx(d[j] - w[i]));
    }
  CHECK(cells[1].phase == FLOQEPT_UNBROKEN);
  CHECK(cells[2].phase == FLOQEPT_BROKEN);
}
