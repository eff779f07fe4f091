#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mcm/config.hpp"

using namespace mcm;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "mcm_cli_test";

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  fs::create_directories(kRoot);
  const fs::path p = kRoot / name;
  std::ofstream(p) << text;
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(MCM_CLI_PATH) + " " + args + " >" + (kRoot / "stdout.txt").string() + " 2>" +
                          (kRoot / "stderr.txt").string();
  fs::create_directories(kRoot);
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

// 4x4 sites, small Sambe cutoff: fast spectra.
const char* kSmallLattice = R"({
  "lattice": {"Nx": 2, "Ny": 2},
  "spectrum": {"M": 3, "tol_frac": 0.05}
})";

}  // namespace

TEST_CASE("config: defaults round-trip") {
  const ExperimentConfig c;
  const std::string s = serialize_config(c);
  CHECK(serialize_config(parse_config(s)) == s);
  CHECK(json::parse(s)["schema_version"] == kSchemaVersion);
}

TEST_CASE("config: edited values round-trip losslessly") {
  ExperimentConfig c;
  c.lattice.Jx = 0.1 + 0.2;  // not representable in few digits
  c.lattice.boundary = Boundary::periodic_x;
  c.protocol.seed = 18446744073709551615ULL;
  c.protocol.id = "tgate2";
  c.readout.parities = {"i g01 g03"};
  c.ptcheck.lambdas = {1.0 / 3, 1e-3};
  const ExperimentConfig d = parse_config(serialize_config(c));
  CHECK(d.lattice.Jx == c.lattice.Jx);
  CHECK(d.lattice.boundary == Boundary::periodic_x);
  CHECK(*d.protocol.seed == *c.protocol.seed);
  CHECK(d.ptcheck.lambdas == c.ptcheck.lambdas);
  CHECK(serialize_config(d) == serialize_config(c));
}

TEST_CASE("config: partial files take defaults") {
  const ExperimentConfig c = parse_config(R"({"lattice": {"Nx": 3}})");
  CHECK(c.lattice.Nx == 3);
  CHECK(c.lattice.Ny == 8);
  CHECK(c.spectrum.M == 6);
  CHECK(!c.protocol.seed);
}

TEST_CASE("config: rejects unknown keys and bad values") {
  CHECK_THROWS_AS(parse_config(R"({"lattice": {"Nx": 3, "Nz": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"extra": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"ptcheck": {"chain": {"sites": 4, "bogus": 0}}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"lattice": {"Nx": "three"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"lattice": {"Nx": 2.5}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"lattice": {"boundary": "twisted"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 2})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"protocol": {"id": "swap"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"protocol": {"seed": -4}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"readout": {"parities": ["g01 g02 gp3 gp4"]}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"output": {"format": "xml"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"lattice": {"omega": -1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
}

TEST_CASE("cli: malformed configs exit with code 2") {
  const auto bad = write_config("bad.json", "{\"lattice\": [1, 2");
  CHECK(run("spectrum --config " + bad.string()) == 2);
  const auto unknown = write_config("unknown.json", R"({"spectrum": {"M": 2, "cutoff": 3}})");
  CHECK(run("modes --config " + unknown.string()) == 2);
  CHECK(slurp(kRoot / "stderr.txt").find("unknown key") != std::string::npos);
  CHECK(run("spectrum --config " + (kRoot / "missing.json").string()) == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("readout --format xml") == 2);
}

TEST_CASE("cli: protocol runs need a seed") {
  CHECK(run("protocol --out " + (kRoot / "noseed").string()) == 2);
  CHECK(!fs::exists(kRoot / "noseed"));
}

TEST_CASE("cli: cnot enumeration verifies and is reproducible") {
  const auto cfg = write_config("cnot.json", R"({"protocol": {"id": "cnot", "mode": "enumerate", "inputs": 3}})");
  const fs::path a = kRoot / "cnot_a", b = kRoot / "cnot_b";
  REQUIRE(run("protocol --config " + cfg.string() + " --seed 11 --out " + a.string()) == 0);
  REQUIRE(run("protocol --config " + cfg.string() + " --seed 11 --out " + b.string()) == 0);
  const json rep = read_json(a / "protocol_report.json");
  CHECK(rep["schema_version"] == kSchemaVersion);
  CHECK(rep["min_fidelity"].get<double>() >= 1 - 1e-10);
  CHECK(rep["pass"] == true);
  for (const char* f : {"protocol_report.json", "protocol_branches.csv"})
    CHECK(slurp(a / f) == slurp(b / f));
  REQUIRE(run("protocol --config " + cfg.string() + " --seed 12 --out " + b.string()) == 0);
  CHECK(slurp(a / "protocol_branches.csv") != slurp(b / "protocol_branches.csv"));
}

TEST_CASE("cli: sampled protocol log") {
  const fs::path a = kRoot / "sample_a", b = kRoot / "sample_b";
  const auto cfg = write_config("h.json", R"({"protocol": {"id": "hadamard1", "seed": 5, "inputs": 4}})");
  REQUIRE(run("protocol --config " + cfg.string() + " --out " + a.string()) == 0);
  REQUIRE(run("protocol --config " + cfg.string() + " --out " + b.string()) == 0);
  CHECK(slurp(a / "protocol_log.json") == slurp(b / "protocol_log.json"));
  const json log = read_json(a / "protocol_log.json");
  CHECK(log["runs"].size() == 4);
  const json& step = log["runs"][0]["steps"][0];
  for (const char* k : {"step", "parity", "outcome", "probability", "retry"}) CHECK(step.contains(k));
  CHECK(read_json(a / "protocol_report.json")["pass"] == true);
}

TEST_CASE("cli: identity sample has no infidelity") {
  const auto cfg = write_config("id.json", R"({"protocol": {"id": "identity", "seed": 1, "inputs": 3}})");
  REQUIRE(run("protocol --config " + cfg.string() + " --out " + (kRoot / "ident").string()) == 0);
  CHECK(read_json(kRoot / "ident" / "protocol_report.json")["min_fidelity"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("cli: tgate without a magic ancilla fails verification") {
  const auto cfg = write_config("t.json", R"({"protocol": {"id": "tgate1", "seed": 3, "inputs": 4, "ancilla": "zero"}})");
  REQUIRE(run("protocol --config " + cfg.string() + " --out " + (kRoot / "tzero").string()) == 0);
  const json rep = read_json(kRoot / "tzero" / "protocol_report.json");
  CHECK(rep["pass"] == false);
  CHECK(slurp(kRoot / "stdout.txt").find("FAIL") != std::string::npos);
}

TEST_CASE("cli: readout tables") {
  const fs::path a = kRoot / "ro_a", b = kRoot / "ro_b";
  REQUIRE(run("readout --out " + a.string()) == 0);
  REQUIRE(run("readout --out " + b.string()) == 0);
  for (const char* f : {"readout_sweep.csv", "readout_joint.csv", "readout_report.json"})
    CHECK(slurp(a / f) == slurp(b / f));
  const json rep = read_json(a / "readout_report.json");
  bool saw_four = false, saw_bessel = false;
  for (const auto& e : rep["parities"]) {
    if (e.contains("tables")) {
      saw_four = true;
      CHECK(e["tables"]["tuned"]["distinct_values"] == 2);
      CHECK(e["tables"]["tuned"]["nulling_ratio"].get<double>() < 1e-10);
      CHECK(e["tables"]["detuned"]["distinct_values"] == 4);
    }
    if (e.contains("bessel")) {
      saw_bessel = true;
      CHECK(e["bessel"]["pass"] == true);
    }
  }
  CHECK(saw_four);
  CHECK(saw_bessel);
  std::istringstream csv(slurp(a / "readout_sweep.csv"));
  std::string header;
  std::getline(csv, header);
  CHECK(header == "parity_string,flux,parity,G,g0,g1_term");

  REQUIRE(run("readout --format json --out " + (kRoot / "ro_json").string()) == 0);
  const json sweep = read_json(kRoot / "ro_json" / "readout_sweep.json");
  CHECK(sweep["rows"].size() > 0);
  CHECK(!fs::exists(kRoot / "ro_json" / "readout_sweep.csv"));
}

TEST_CASE("cli: ptcheck slopes and coefficient line") {
  const fs::path a = kRoot / "pt_a", b = kRoot / "pt_b";
  REQUIRE(run("ptcheck --out " + a.string()) == 0);
  const std::string out = slurp(kRoot / "stdout.txt");
  CHECK(out.find("coefficient check") != std::string::npos);
  REQUIRE(run("ptcheck --out " + b.string()) == 0);
  for (const char* f : {"ptcheck_scaling.csv", "ptcheck_residuals.csv", "ptcheck_report.json"})
    CHECK(slurp(a / f) == slurp(b / f));
  const json rep = read_json(a / "ptcheck_report.json");
  CHECK(rep["scaling_pass"] == true);
  CHECK(rep["zero_mode_decreasing"] == true);
  CHECK(rep["parity_flip_residual"].get<double>() < 1e-10);
  for (const auto& s : rep["scaling"])
    if (s["model"] == "two-lead-00-link") CHECK(s["slope2"].get<double>() == doctest::Approx(3.0).epsilon(0.2 / 3));
  // lambda = 0 rows are exact
  std::istringstream csv(slurp(a / "ptcheck_scaling.csv"));
  std::string line;
  int zero_rows = 0;
  while (std::getline(csv, line))
    if (line.find(",0,0,0") != std::string::npos) ++zero_rows;
  CHECK(zero_rows == 4);
}

TEST_CASE("cli: spectrum and modes on a small lattice") {
  const auto cfg = write_config("small.json", kSmallLattice);
  const fs::path a = kRoot / "sp_a", b = kRoot / "sp_b";
  REQUIRE(run("spectrum --config " + cfg.string() + " --out " + a.string()) == 0);
  REQUIRE(run("spectrum --config " + cfg.string() + " --out " + b.string()) == 0);
  CHECK(slurp(a / "spectrum.csv") == slurp(b / "spectrum.csv"));
  CHECK(slurp(a / "spectrum_summary.json") == slurp(b / "spectrum_summary.json"));
  const json s = read_json(a / "spectrum_summary.json");
  CHECK(s["sites"] == 16);
  CHECK(s["counts"]["zero"].get<int>() + s["counts"]["pi"].get<int>() >= 0);

  REQUIRE(run("modes --config " + cfg.string() + " --out " + a.string()) == 0);
  const json m = read_json(a / "modes_summary.json");
  CHECK(m["modes"].size() == s["counts"]["zero"].get<std::size_t>() + s["counts"]["pi"].get<std::size_t>());
}

TEST_CASE("cli: static Kitaev limit and trivial phase") {
  // Jy = dJ, Dy = dDy, no drive: decoupled chains at the sweet spot, one zero mode per chain end.
  const auto kit = write_config("kitaev.json", R"({
    "lattice": {"Nx": 2, "Ny": 1, "Jx": 1, "Dx": 1, "Jy": 0, "dJ": 0, "Dy": 0, "dDy": 0,
                "mu0": 0, "dmu0": 0, "mu1": 0, "dmu1": 0},
    "spectrum": {"M": 1}
  })");
  REQUIRE(run("spectrum --config " + kit.string() + " --out " + (kRoot / "kit").string()) == 0);
  const json s = read_json(kRoot / "kit" / "spectrum_summary.json");
  CHECK(s["counts"]["zero"] == 4);
  CHECK(s["counts"]["pi"] == 0);

  const auto triv = write_config("trivial.json", R"({
    "lattice": {"Nx": 2, "Ny": 2, "Jx": 0.3, "Dx": 0.3, "Jy": 0.1, "dJ": 0, "Dy": 0.1, "dDy": 0,
                "mu0": 3.0, "dmu0": 0, "mu1": 0, "dmu1": 0},
    "spectrum": {"M": 1}
  })");
  REQUIRE(run("modes --config " + triv.string() + " --out " + (kRoot / "triv").string()) == 0);
  CHECK(read_json(kRoot / "triv" / "modes_summary.json")["modes"].empty());
  CHECK(slurp(kRoot / "stderr.txt").find("warning") != std::string::npos);
}
