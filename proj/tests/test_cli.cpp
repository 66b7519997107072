#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "sigflip/cli.hpp"

using namespace sigflip;
namespace fs = std::filesystem;

namespace {

fs::path tmp_path(const std::string& name) {
  return fs::temp_directory_path() / ("sigflip_test_" + name);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::istringstream cs(line);
    std::string cell;
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

const char* kMinkowskiConfig = R"({
  "mode": "metric",
  "dimension": 2,
  "coords": ["t", "x"],
  "domain": [[-1, 1], [-1, 1]],
  "grid": [5, 5],
  "metric": [["-1"], ["0", "1"]]
})";

const char* kBrokenTripleConfig = R"({
  "mode": "triple",
  "dimension": 2,
  "coords": ["t", "x"],
  "domain": [[-1, 1], [-1, 1]],
  "grid": [5, 5],
  "g": [["-2"], ["0", "1"]],
  "V": ["1", "0"],
  "f": "1+x"
})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exit_code_from") {
  VerifyVerdicts v;
  v.biconditional = v.det_factorization = v.positivity = v.round_trip =
      v.frame_identities = v.rescaling = true;
  v.det_factorization_applicable = true;
  CHECK(exit_code_from(v) == 0);

  VerifyVerdicts failed = v;
  failed.round_trip = false;
  CHECK(exit_code_from(failed) == 1);

  // an inapplicable factorization verdict cannot fail the run
  VerifyVerdicts na = v;
  na.det_factorization_applicable = false;
  na.det_factorization = false;
  CHECK(exit_code_from(na) == 0);
}

TEST_CASE("analyze: gallery report contents") {
  fs::path out = tmp_path("analyze_kriele.json");
  CHECK(cmd_analyze("gallery:kriele2d", out.string()) == 0);
  auto rep = nlohmann::json::parse(slurp(out));
  CHECK(rep["config_echo"]["source"] == "gallery:kriele2d");
  CHECK(rep["verdicts"].is_null());
  CHECK(rep["timings"].is_null());
  REQUIRE(!rep["h_points"].empty());
  for (const auto& h : rep["h_points"]) {
    CHECK(h["radical_class"] == "Tangent");
    CHECK(h["induced_signature"]["n_zero"] == 1);
    CHECK(std::abs(h["point"][1].get<double>()) <= 1e-10);
    CHECK(!h["f_value"].is_null());
  }
  CHECK(rep["signature_grid"].size() == 81);  // default 9 x 9 grid
}

TEST_CASE("analyze: flat metric has no hypersurface") {
  fs::path cfg = tmp_path("mink.json");
  spit(cfg, kMinkowskiConfig);
  fs::path out = tmp_path("analyze_mink.json");
  CHECK(cmd_analyze(cfg.string(), out.string()) == 0);
  auto rep = nlohmann::json::parse(slurp(out));
  CHECK(rep["h_points"].empty());
  CHECK(rep["degenerate_edges"].empty());
  for (const auto& e : rep["signature_grid"]) {
    CHECK(e["signature"][0] == 1);
    CHECK(e["signature"][1] == 0);
    CHECK(e["signature"][2] == 1);
  }
}

TEST_CASE("analyze: byte-identical reruns") {
  fs::path a = tmp_path("rerun_a.json"), b = tmp_path("rerun_b.json");
  CHECK(cmd_analyze("gallery:transverse3d", a.string()) == 0);
  CHECK(cmd_analyze("gallery:transverse3d", b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("analyze: config errors exit 2") {
  CHECK(cmd_analyze("gallery:nope", "") == 2);
  CHECK(cmd_analyze("/no/such/file.json", "") == 2);
  fs::path bad = tmp_path("bad.json");
  spit(bad, "{ not json");
  CHECK(cmd_analyze(bad.string(), "") == 2);
}

TEST_CASE("transform: CSV grid of the derived metric") {
  fs::path out = tmp_path("transform_kriele.csv");
  CHECK(cmd_transform("gallery:kriele2d", out.string()) == 0);
  auto rows = csv_rows(slurp(out));
  REQUIRE(rows.size() == 82);  // header + 9*9
  REQUIRE(rows[0] ==
          std::vector<std::string>{"t", "x", "gt_00", "gt_01", "gt_11", "f",
                                   "det_gt"});
  bool found = false;
  for (const auto& r : rows) {
    if (r[0] == "0" && r[1] == "0.5") {
      found = true;
      CHECK(r[2] == "0.5");  // gt_00
      CHECK(r[3] == "0");
      CHECK(r[4] == "1");
      CHECK(r[5] == "1.5");  // f
      CHECK(r[6] == "0.5");  // det
    }
  }
  CHECK(found);

  // mode mismatch
  fs::path cfg = tmp_path("mink2.json");
  spit(cfg, kMinkowskiConfig);
  CHECK(cmd_transform(cfg.string(), tmp_path("t.csv").string()) == 2);
}

TEST_CASE("decompose: recovers f and g, flags the band") {
  fs::path out = tmp_path("decompose_kriele.csv");
  CHECK(cmd_decompose("gallery:kriele2d", out.string()) == 0);
  auto rows = csv_rows(slurp(out));
  REQUIRE(rows.size() == 82);
  REQUIRE(rows[0] ==
          std::vector<std::string>{"t", "x", "f", "g_00", "g_01", "g_11",
                                   "extrapolated"});
  int flagged = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    double x = std::stod(r[1]);
    double f = std::stod(r[2]);
    CHECK(std::abs(f - (1 + x)) <= 1e-12);
    CHECK(std::abs(std::stod(r[3]) + 1.0) <= 1e-9);
    CHECK(std::abs(std::stod(r[4])) <= 1e-9);
    CHECK(std::abs(std::stod(r[5]) - 1.0) <= 1e-9);
    if (r[6] == "1") {
      ++flagged;
      CHECK(x == 0.0);
    }
  }
  CHECK(flagged == 9);  // exactly the x = 0 column of the 9 x 9 grid
}

TEST_CASE("decompose: explicit vector spec rescales f") {
  fs::path out = tmp_path("decompose_2v.csv");
  CliOptions opts;
  opts.vector_spec = "2,0";
  CHECK(cmd_decompose("gallery:kriele2d", out.string(), opts) == 0);
  auto rows = csv_rows(slurp(out));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double x = std::stod(rows[i][1]);
    CHECK(std::abs(std::stod(rows[i][2]) - (1 + 4 * x)) <= 1e-12);
  }
}

TEST_CASE("decompose: argument and sector errors") {
  fs::path cfg = tmp_path("mink3.json");
  spit(cfg, kMinkowskiConfig);
  // metric-mode config without a vector spec
  CHECK(cmd_decompose(cfg.string(), "") == 2);

  CliOptions ok;
  ok.vector_spec = "1,0";
  CHECK(cmd_decompose(cfg.string(), tmp_path("d_mink.csv").string(), ok) == 0);

  CliOptions wrong_arity;
  wrong_arity.vector_spec = "1";
  CHECK(cmd_decompose(cfg.string(), "", wrong_arity) == 2);

  // spacelike V in a Lorentzian sector is an analysis error
  CliOptions spacelike;
  spacelike.vector_spec = "0,1";
  CHECK(cmd_decompose("gallery:kriele2d", "", spacelike) == 3);
}

TEST_CASE("decompose: f = 0 for the flat metric") {
  fs::path cfg = tmp_path("mink4.json");
  spit(cfg, kMinkowskiConfig);
  fs::path out = tmp_path("d_mink0.csv");
  CliOptions opts;
  opts.vector_spec = "1,0";
  CHECK(cmd_decompose(cfg.string(), out.string(), opts) == 0);
  auto rows = csv_rows(slurp(out));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][2] == "0");        // f
    CHECK(rows[i][6] == "0");        // never near H
    CHECK(rows[i][3] == "-1");       // g = gt
    CHECK(rows[i][5] == "1");
  }
}

TEST_CASE("verify: gallery items pass with a full verdict set") {
  fs::path out = tmp_path("verify_kriele.json");
  CHECK(cmd_verify("gallery:kriele2d", out.string()) == 0);
  auto rep = nlohmann::json::parse(slurp(out));
  const auto& v = rep["verdicts"];
  for (const char* key : {"biconditional", "det_factorization", "positivity",
                          "round_trip", "frame_identities", "rescaling"}) {
    CAPTURE(key);
    REQUIRE(v.contains(key));
    CHECK(v[key]["pass"] == true);
  }
  CHECK(v["det_factorization"]["applicable"] == true);
  CHECK(v["positivity"]["min_ratio"].get<double>() > 0.0);
}

TEST_CASE("verify: mode and triple failures map to exit codes") {
  fs::path cfg = tmp_path("mink5.json");
  spit(cfg, kMinkowskiConfig);
  CHECK(cmd_verify(cfg.string(), "") == 2);

  fs::path broken = tmp_path("broken.json");
  spit(broken, kBrokenTripleConfig);
  CHECK(cmd_verify(broken.string(), "") == 3);
}

TEST_CASE("seed override changes sampling, not validity") {
  fs::path a = tmp_path("seed_a.json"), b = tmp_path("seed_b.json");
  CliOptions sa, sb;
  sa.seed = 1;
  sb.seed = 2;
  CHECK(cmd_verify("gallery:transverse2d", a.string(), sa) == 0);
  CHECK(cmd_verify("gallery:transverse2d", b.string(), sb) == 0);
  auto ra = nlohmann::json::parse(slurp(a));
  auto rb = nlohmann::json::parse(slurp(b));
  CHECK(ra["config_echo"]["seed"] == 1);
  CHECK(rb["config_echo"]["seed"] == 2);
  // identical seeds reproduce bytes
  fs::path a2 = tmp_path("seed_a2.json");
  CHECK(cmd_verify("gallery:transverse2d", a2.string(), sa) == 0);
  CHECK(slurp(a) == slurp(a2));
}

TEST_CASE("binary smoke: argument handling through the real entry point") {
  const std::string bin = SIGFLIP_BIN_PATH;
  auto run = [&](const std::string& args) {
    int status = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
  };
  CHECK(run("--help") == 0);
  CHECK(run("analyze --help") == 0);
  CHECK(run("") == 2);                        // missing subcommand
  CHECK(run("analyze") == 2);                 // missing spec
  CHECK(run("analyze gallery:nope") == 2);
  CHECK(run("analyze gallery:kriele2d --out /tmp/sigflip_test_smoke.json") ==
        0);
  CHECK(run("verify gallery:transverse2d --out /tmp/sigflip_test_smoke2.json") ==
        0);
}

}  // TEST_SUITE
