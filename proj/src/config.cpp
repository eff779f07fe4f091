#include "mcm/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mcm/protocols.hpp"

namespace mcm {

using json = nlohmann::ordered_json;

namespace {

// Reads the keys of one JSON object and rejects the rest.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("config: " + where() + " must be an object");
  }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!it->is_number()) throw ConfigError("");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!it->is_number_integer()) throw ConfigError("");
      }
      out = it->template get<T>();
    } catch (const std::exception&) {
      throw ConfigError("config: " + where(key) + " has the wrong type");
    }
  }

  template <class F>
  void object(const std::string& key, F&& f) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    Reader sub(*it, where(key));
    f(sub);
    sub.finish();
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  void mark(const std::string& key) { seen_.insert(key); }
  const json& at(const std::string& key) const { return j_.at(key); }
  std::string where(const std::string& key = "") const {
    const std::string p = key.empty() ? path_ : path_.empty() ? key : path_ + "." + key;
    return p.empty() ? "top level" : "'" + p + "'";
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError("config: unknown key " + where(k));
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_chain(Reader& r, ChainSettings& c, bool with_omega) {
  r.get("sites", c.sites);
  r.get("J", c.J);
  r.get("D", c.D);
  r.get("mu0", c.mu0);
  r.get("mu1", c.mu1);
  if (with_omega) r.get("omega", c.omega);
}

json chain_json(const ChainSettings& c, bool with_omega) {
  json j = {{"sites", c.sites}, {"J", c.J}, {"D", c.D}, {"mu0", c.mu0}, {"mu1", c.mu1}};
  if (with_omega) j["omega"] = c.omega;
  return j;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError("config: " + msg);
}

}  // namespace

std::string boundary_name(Boundary b) {
  switch (b) {
    case Boundary::open: return "open";
    case Boundary::periodic_x: return "periodic_x";
    case Boundary::periodic_y: return "periodic_y";
    case Boundary::periodic_both: return "periodic_both";
  }
  return "open";
}

Boundary parse_boundary(const std::string& s) {
  for (Boundary b : {Boundary::open, Boundary::periodic_x, Boundary::periodic_y, Boundary::periodic_both})
    if (boundary_name(b) == s) return b;
  throw ConfigError("config: unknown boundary '" + s + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  ExperimentConfig c;
  Reader top(j, "");
  top.get("schema_version", c.schema_version);
  if (c.schema_version != kSchemaVersion)
    throw ConfigError("config: unsupported schema_version " + std::to_string(c.schema_version));

  top.object("lattice", [&](Reader& r) {
    auto& p = c.lattice;
    r.get("Nx", p.Nx);
    r.get("Ny", p.Ny);
    r.get("Jx", p.Jx);
    r.get("Jy", p.Jy);
    r.get("dJ", p.dJ);
    r.get("Dx", p.Dx);
    r.get("Dy", p.Dy);
    r.get("dDy", p.dDy);
    r.get("mu0", p.mu0);
    r.get("dmu0", p.dmu0);
    r.get("mu1", p.mu1);
    r.get("dmu1", p.dmu1);
    r.get("omega", p.omega);
    std::string b = boundary_name(p.boundary);
    r.get("boundary", b);
    p.boundary = parse_boundary(b);
  });
  top.object("spectrum", [&](Reader& r) {
    r.get("M", c.spectrum.M);
    r.get("tol_frac", c.spectrum.tol_frac);
    r.get("corner_frac", c.spectrum.corner_frac);
  });
  top.object("protocol", [&](Reader& r) {
    auto& p = c.protocol;
    r.get("id", p.id);
    r.get("mode", p.mode);
    if (r.has("seed") && !r.at("seed").is_null()) {
      std::uint64_t s = 0;
      require(r.at("seed").is_number_unsigned(), r.where("seed") + " must be a non-negative integer");
      r.get("seed", s);
      p.seed = s;
    } else {
      r.mark("seed");
    }
    r.get("inputs", p.inputs);
    r.get("ancilla", p.ancilla);
    r.get("corrections", p.corrections);
    r.get("literal_tables", p.literal_tables);
    r.get("max_retries", p.max_retries);
  });
  top.object("readout", [&](Reader& r) {
    auto& s = c.readout;
    r.get("eps_plus", s.defaults.eps_plus);
    r.get("eps_minus", s.defaults.eps_minus);
    r.get("omega", s.defaults.omega);
    r.get("coupling", s.defaults.coupling);
    r.get("reference", s.defaults.reference);
    r.get("link", s.defaults.link);
    r.get("parities", s.parities);
    r.get("sweep_points", s.sweep_points);
    r.get("bessel_points", s.bessel_points);
    r.get("bessel_max", s.bessel_max);
  });
  top.object("ptcheck", [&](Reader& r) {
    auto& s = c.ptcheck;
    r.get("lambdas", s.lambdas);
    r.get("M", s.M);
    r.object("chain", [&](Reader& q) { read_chain(q, s.chain, true); });
    r.get("orders", s.orders);
    r.object("pi_chain", [&](Reader& q) { read_chain(q, s.pi_chain, false); });
    r.get("A", s.A);
    r.get("B", s.B);
    r.get("deltas", s.deltas);
  });
  top.object("output", [&](Reader& r) {
    r.get("dir", c.output.dir);
    r.get("format", c.output.format);
  });
  top.finish();
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  const auto& l = c.lattice;
  const auto& pr = c.protocol;
  const auto& ro = c.readout;
  const auto& pt = c.ptcheck;
  json j;
  j["schema_version"] = c.schema_version;
  j["lattice"] = {{"Nx", l.Nx},   {"Ny", l.Ny},       {"Jx", l.Jx},   {"Jy", l.Jy},       {"dJ", l.dJ},
                  {"Dx", l.Dx},   {"Dy", l.Dy},       {"dDy", l.dDy}, {"mu0", l.mu0},     {"dmu0", l.dmu0},
                  {"mu1", l.mu1}, {"dmu1", l.dmu1},   {"omega", l.omega}, {"boundary", boundary_name(l.boundary)}};
  j["spectrum"] = {{"M", c.spectrum.M}, {"tol_frac", c.spectrum.tol_frac}, {"corner_frac", c.spectrum.corner_frac}};
  j["protocol"] = {{"id", pr.id}, {"mode", pr.mode}};
  j["protocol"]["seed"] = pr.seed ? json(*pr.seed) : json(nullptr);
  j["protocol"]["inputs"] = pr.inputs;
  j["protocol"]["ancilla"] = pr.ancilla;
  j["protocol"]["corrections"] = pr.corrections;
  j["protocol"]["literal_tables"] = pr.literal_tables;
  j["protocol"]["max_retries"] = pr.max_retries;
  j["readout"] = {{"eps_plus", ro.defaults.eps_plus},   {"eps_minus", ro.defaults.eps_minus},
                  {"omega", ro.defaults.omega},         {"coupling", ro.defaults.coupling},
                  {"reference", ro.defaults.reference}, {"link", ro.defaults.link},
                  {"parities", ro.parities},            {"sweep_points", ro.sweep_points},
                  {"bessel_points", ro.bessel_points},  {"bessel_max", ro.bessel_max}};
  j["ptcheck"] = {{"lambdas", pt.lambdas},
                  {"M", pt.M},
                  {"chain", chain_json(pt.chain, true)},
                  {"orders", pt.orders},
                  {"pi_chain", chain_json(pt.pi_chain, false)},
                  {"A", pt.A},
                  {"B", pt.B},
                  {"deltas", pt.deltas}};
  j["output"] = {{"dir", c.output.dir}, {"format", c.output.format}};
  return j.dump(2) + "\n";
}

void validate(const ExperimentConfig& c) {
  try {
    validate(c.lattice);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  require(c.spectrum.M >= 1, "spectrum.M must be >= 1");
  require(c.spectrum.tol_frac > 0 && c.spectrum.tol_frac < 0.25, "spectrum.tol_frac must be in (0, 0.25)");
  require(c.spectrum.corner_frac > 0 && c.spectrum.corner_frac <= 0.5, "spectrum.corner_frac must be in (0, 0.5]");

  const auto& pr = c.protocol;
  require(is_protocol_id(pr.id), "unknown protocol id '" + pr.id + "'");
  require(pr.mode == "sample" || pr.mode == "enumerate", "protocol.mode must be sample or enumerate");
  require(pr.inputs >= 1, "protocol.inputs must be >= 1");
  require(pr.ancilla == "default" || pr.ancilla == "magic" || pr.ancilla == "zero",
          "protocol.ancilla must be default, magic or zero");
  require(pr.corrections == "measured" || pr.corrections == "direct",
          "protocol.corrections must be measured or direct");
  require(pr.max_retries >= 0, "protocol.max_retries must be >= 0");

  const auto& ro = c.readout;
  require(ro.defaults.eps_plus > 0 && ro.defaults.eps_minus > 0, "readout charging energies must be > 0");
  require(ro.defaults.omega > 0, "readout.omega must be > 0");
  require(ro.sweep_points >= 2, "readout.sweep_points must be >= 2");
  require(ro.bessel_points >= 2 && ro.bessel_max > 0, "readout Bessel sweep needs >= 2 points and bessel_max > 0");
  for (const auto& s : ro.parities) {
    try {
      readout_config(parse_string(s), ro.defaults);
    } catch (const Error& e) {
      throw ConfigError("config: readout parity '" + s + "': " + e.what());
    }
  }

  const auto& pt = c.ptcheck;
  require(pt.lambdas.size() >= 2, "ptcheck.lambdas needs two or more values");
  for (double l : pt.lambdas) require(l > 0, "ptcheck.lambdas must be positive");
  require(pt.M >= 1, "ptcheck.M must be >= 1");
  require(pt.orders >= 1, "ptcheck.orders must be >= 1");
  require(pt.chain.sites >= 2 && pt.pi_chain.sites >= 2, "ptcheck chains need >= 2 sites");
  require(pt.chain.omega > 0, "ptcheck.chain.omega must be > 0");

  require(!c.output.dir.empty(), "output.dir must not be empty");
  require(c.output.format == "csv" || c.output.format == "json", "output.format must be csv or json");
}

}  // namespace mcm
