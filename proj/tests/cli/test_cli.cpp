// Drives the floqept executable end to end and inspects what it writes.
#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path work = fs::path(FLOQEPT_TEST_WORKDIR);

fs::path fresh(const std::string& name) {
  const fs::path d = work / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// Runs the tool with the given argument string; returns the exit code.
int tool(const std::string& args, const std::string& env = "FLOQEPT_CONFIG=") {
  const std::string cmd = env + " '" FLOQEPT_CLI "' " + args + " > '" + (work / "last.out").string() + "' 2> '" +
                          (work / "last.err").string() + "'";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

struct Csv {
  std::vector<std::string> header;
  std::vector<std::map<std::string, std::string>> rows;
  double num(std::size_t i, const std::string& col) const { return std::stod(rows.at(i).at(col)); }
};

Csv load_csv(const fs::path& p) {
  std::istringstream in(slurp(p));
  Csv t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!s.empty() && s.back() == ',') out.push_back("");
    return out;
  };
  std::getline(in, line);
  t.header = split(line);
  while (std::getline(in, line)) {
    auto cells = split(line);
    REQUIRE(cells.size() == t.header.size());
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < cells.size(); ++i) row[t.header[i]] = cells[i];
    t.rows.push_back(row);
  }
  return t;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("static eigen: one EP row") {
  const auto d = fresh("eigen_static");
  REQUIRE(tool("eigen --delta0 -186 --gamma-c 93 --static --out " + q(d)) == 0);
  const auto t = load_csv(d / "eigen.csv");
  CHECK(t.header == std::vector<std::string>{"delta0_abs", "route", "re_nu_plus", "im_nu_plus", "re_nu_minus",
                                             "im_nu_minus", "phase_tag"});
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].at("phase_tag") == "EP");
  CHECK(t.num(0, "delta0_abs") == 186);
  const auto s = load_json(d / "eigen.json");
  CHECK(s["schema_version"] == 1);
  CHECK(s["subcommand"] == "eigen");
  CHECK(fs::exists(d / "eigen.manifest.json"));
}

TEST_CASE("eigen sweep: grid arithmetic and route consistency") {
  const auto d = fresh("eigen_sweep");
  REQUIRE(tool("eigen --sweep-delta0 2900:3200:1 --omega-b 3000 --n 1 --out " + q(d)) == 0);
  CHECK(load_csv(d / "eigen.csv").rows.size() == 301);

  REQUIRE(tool("eigen --sweep-delta0 2900:3200:1 --omega-b 3000 --n 1 --route monodromy --out " + q(d)) == 0);
  const auto mono = load_csv(d / "eigen.csv");
  REQUIRE(tool("eigen --sweep-delta0 2900:3200:1 --omega-b 3000 --n 1 --route rwa --out " + q(d)) == 0);
  const auto rwa = load_csv(d / "eigen.csv");
  REQUIRE(mono.rows.size() == 301);
  REQUIRE(rwa.rows.size() == 301);

  // Rotating-wave and exact branches differ by higher-order drive corrections
  // (~1 Hz here); next to an EP the square-root branch point magnifies that, so
  // rows within 5 Hz of an rwa transition are held to the looser bound only.
  std::vector<double> edges;
  for (std::size_t i = 1; i < rwa.rows.size(); ++i)
    if (rwa.rows[i].at("phase_tag") != rwa.rows[i - 1].at("phase_tag")) edges.push_back(rwa.num(i, "delta0_abs"));
  CHECK(edges.size() >= 2);
  int agree = 0;
  for (std::size_t i = 0; i < rwa.rows.size(); ++i) {
    double dev = 0;
    for (const char* col : {"re_nu_plus", "re_nu_minus", "im_nu_plus", "im_nu_minus"})
      dev = std::max(dev, std::abs(rwa.num(i, col) - mono.num(i, col)));
    bool near_edge = false;
    for (double e : edges) near_edge = near_edge || std::abs(rwa.num(i, "delta0_abs") - e) <= 5;
    CAPTURE(rwa.num(i, "delta0_abs"));
    CHECK(dev <= (near_edge ? 6.0 : 2.0));
    if (!near_edge && rwa.rows[i].at("phase_tag") == mono.rows[i].at("phase_tag")) ++agree;
  }
  CHECK(agree >= 270);
}

TEST_CASE("spectrum peak table shows carrier and sidebands") {
  const auto d = fresh("spectrum");
  REQUIRE(tool("spectrum --omega-b 3100 --probe ch1 --read ch2 --grid -7000:7000:1 --out " + q(d)) == 0);
  const auto t = load_csv(d / "spectrum.csv");
  CHECK(t.header == std::vector<std::string>{"detuning", "power_ch2"});
  CHECK(t.rows.size() == 14001);
  const auto p = load_csv(d / "spectrum_peaks.csv");
  std::vector<std::string> labels;
  for (const auto& r : p.rows) labels.push_back(r.at("sideband"));
  CHECK(labels == std::vector<std::string>{"-2", "-1", "0", "1", "2"});
  for (std::size_t i = 1; i < p.rows.size(); ++i)
    CHECK(p.num(i, "center") - p.num(i - 1, "center") == doctest::Approx(3100).epsilon(0.02));
}

TEST_CASE("beat summary near the detuning mismatch") {
  const auto d = fresh("beat");
  REQUIRE(tool("beat --delta0 -3050 --omega-b 3000 --gamma-c 2 --out " + q(d)) == 0);
  const auto s = load_json(d / "beat.json");
  CHECK(s["found"] == true);
  CHECK(std::abs(s["beat_hz"].get<double>() - 50) <= s["resolution"].get<double>());
}

TEST_CASE("fit closure on pipeline heights") {
  const auto d = fresh("fit");
  REQUIRE(tool("spectrum --heights-omegas 1000:8000:500 --delta0 0 --gamma-c 1 --n1 0 --delta-b 3000 "
               "--truncation-m 4 --out " +
               q(d)) == 0);
  REQUIRE(tool("fit --model bessel-heights --m 1 --input " + q(d / "heights.csv") + " --out " + q(d)) == 0);
  const auto s = load_json(d / "fit.json");
  CHECK(s["converged"] == true);
  CHECK(s["k"].get<double>() == doctest::Approx(3000).epsilon(0.05));
  const auto t = load_csv(d / "fit.csv");
  CHECK(t.rows.size() == 15);
}

TEST_CASE("gamma curve and its fit") {
  const auto d = fresh("gamma");
  REQUIRE(tool("gamma-curve --omegas 2500:8000:500 --route monodromy --gamma12 2 --out " + q(d)) == 0);
  const auto s = load_json(d / "gamma_curve.json");
  CHECK(s["fitted"] == true);
  CHECK(s["delta_b"].get<double>() == doctest::Approx(4300).epsilon(0.05));
  REQUIRE(tool("fit --model gamma-curve --input " + q(d / "gamma_curve.csv") + " --out " + q(d)) == 0);
  CHECK(load_json(d / "fit.json")["gamma_c"].get<double>() == doctest::Approx(93).epsilon(0.05));
}

TEST_CASE("separation, ep and phase diagram run") {
  const auto d = fresh("misc");
  REQUIRE(tool("separation --out " + q(d)) == 0);
  CHECK(load_csv(d / "separation.csv").rows.at(0).at("merged") == "1");
  REQUIRE(tool("ep --route closed-form --out " + q(d)) == 0);
  const auto ep = load_csv(d / "ep.csv");
  CHECK(ep.num(0, "delta0_abs") == doctest::Approx(3055.9).epsilon(1e-4));
  REQUIRE(tool("phase-diagram --delta0-range 2900:3200:10 --out " + q(d)) == 0);
  CHECK(load_csv(d / "phase_diagram.csv").rows.size() == 31);
}

TEST_CASE("exit codes") {
  const auto d = fresh("codes");
  CHECK(tool("eigen --gamma12 -1 --out " + q(d / "a")) == 2);
  CHECK(slurp(work / "last.err").find("gamma12") != std::string::npos);
  CHECK(!fs::exists(d / "a" / "eigen.csv"));
  CHECK(tool("eigen --no-such-flag") == 2);
  CHECK(tool("validate --gamma-c -3") == 2);
  CHECK(tool("validate") == 0);
  CHECK(tool("ep --target-gamma-eff 500 --x-range 3.0:3.6 --out " + q(d)) == 3);
  CHECK(!slurp(work / "last.err").empty());
  CHECK(tool("fit --model bessel-heights --input " + q(d / "missing.csv") + " --out " + q(d)) == 4);
  CHECK(tool("eigen --config " + q(d / "missing.cfg") + " --out " + q(d)) == 4);
  CHECK(tool("eigen --out " + q(d), "FLOQEPT_CONFIG=" + (d / "missing.cfg").string()) == 4);
}

TEST_CASE("config file, environment and flag precedence") {
  const auto d = fresh("precedence");
  {
    std::ofstream(d / "a.cfg") << "gamma_c = 80\nomega_b = 3100\n";
  }
  REQUIRE(tool("eigen --set gamma_c=70 --out " + q(d), "FLOQEPT_CONFIG=" + (d / "a.cfg").string()) == 0);
  auto s = load_json(d / "eigen.json")["settings"];
  CHECK(s["gamma_c"] == 70.0);
  CHECK(s["omega_b"] == 3100.0);
  REQUIRE(tool("eigen --config " + q(d / "a.cfg") + " --set gamma_c=70 --gamma-c 60 --n 2 --out " + q(d)) == 0);
  s = load_json(d / "eigen.json")["settings"];
  CHECK(s["gamma_c"] == 60.0);
  CHECK(s["n1"] == 2);
}

TEST_CASE("determinism and manifest round trip") {
  const auto a = fresh("rt_a"), b = fresh("rt_b"), c = fresh("rt_c");
  {
    std::ofstream(a / "p.cfg") << "gamma_c = 85\n";
  }
  const std::string cmd = "separation --config " + q(a / "p.cfg") + " --sweep-delta0 3000:3100:25 --gamma12 2 --out ";
  REQUIRE(tool(cmd + q(a)) == 0);
  REQUIRE(tool(cmd + q(b)) == 0);
  CHECK(slurp(a / "separation.csv") == slurp(b / "separation.csv"));
  CHECK(slurp(a / "separation.json") == slurp(b / "separation.json"));

  const auto m = load_json(a / "separation.manifest.json");
  CHECK(m["schema_version"] == 1);
  CHECK(m["subcommand"] == "separation");
  CHECK(m["settings"]["gamma_c"] == 85.0);
  CHECK(m["wall_seconds"].get<double>() >= 0);
  CHECK(m["outputs"].size() == 2);
  REQUIRE(tool("--manifest " + q(a / "separation.manifest.json") + " --out " + q(c)) == 0);
  CHECK(slurp(a / "separation.csv") == slurp(c / "separation.csv"));
  CHECK(slurp(a / "separation.json") == slurp(c / "separation.json"));
  // The config file is no longer needed once recorded.
  fs::remove(a / "p.cfg");
  REQUIRE(tool("--manifest " + q(a / "separation.manifest.json") + " --out " + q(c)) == 0);
  CHECK(slurp(a / "separation.csv") == slurp(c / "separation.csv"));
}
