#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcm/lattice.hpp"
#include "mcm/readout.hpp"

namespace mcm {

// Malformed or invalid configuration (the CLI maps this to exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

inline constexpr int kSchemaVersion = 1;

struct SpectrumSettings {
  int M = 6;
  double tol_frac = 1e-3;  // mode windows, in units of omega
  double corner_frac = 0.25;
};

struct ProtocolSettings {
  std::string id = "cnot";
  std::string mode = "sample";  // sample | enumerate
  std::optional<std::uint64_t> seed;
  int inputs = 10;
  std::string ancilla = "default";  // default | magic | zero
  std::string corrections = "measured";  // measured | direct
  bool literal_tables = false;
  int max_retries = 2;
};

struct ReadoutSettings {
  ReadoutDefaults defaults;
  std::vector<std::string> parities = {"i g01 g02", "i gp2 gp4", "i g04 gp4", "g01 g02 g03 g04"};
  int sweep_points = 65;
  int bessel_points = 30;
  double bessel_max = 3.0;
};

struct ChainSettings {
  int sites = 8;
  double J = 1.0, D = 1.0, mu0 = 0.0, mu1 = 0.5;
  double omega = 2.0 * kPi;
};

struct PtcheckSettings {
  std::vector<double> lambdas = {0.02, 0.01, 0.005};
  int M = 2;
  ChainSettings chain;
  int orders = 3;
  ChainSettings pi_chain = {2, 1.0, 1.0, 0.0, 0.05, 0.0};  // omega fixed by the pi seed
  double A = 2.0 / 3.0, B = -2.0 / 5.0;
  std::vector<double> deltas = {-0.1, 0.1};
};

struct OutputSettings {
  std::string dir = "out";
  std::string format = "csv";  // csv | json
};

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  LatticeParams lattice = reference_params(8, 8);
  SpectrumSettings spectrum;
  ProtocolSettings protocol;
  ReadoutSettings readout;
  PtcheckSettings ptcheck;
  OutputSettings output;
};

// JSON text. Missing keys take defaults; unknown keys and bad values throw ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
// Every field, in a fixed order; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const ExperimentConfig& c);
void validate(const ExperimentConfig& c);

std::string boundary_name(Boundary b);
Boundary parse_boundary(const std::string& s);

}  // namespace mcm
