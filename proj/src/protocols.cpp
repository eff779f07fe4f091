#include "mcm/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mcm {

namespace {

constexpr double kZeroProb = 1e-14;

struct Truncated {};

MajoranaString z3() { return pauli_string(3, 'z'); }
MajoranaString x3() { return pauli_string(3, 'x'); }

void check_qubit(int q) {
  if (q != 1 && q != 2) throw Error("protocols: logical qubit must be 1 or 2");
}

struct Ctx {
  ProtocolRun& run;
  Driver& drv;
  const ProtocolOptions& opt;
  int depth;

  int measure(const std::string& label, const MajoranaString& p, int retry = 0) {
    const int o = drv.choose(outcome_probability(run.state, p, 1));
    const MeasureResult r = measure_forced(run.state, p, o);
    run.state = r.post;
    run.probability *= r.probability;
    run.steps.push_back({label, p, o, r.probability, depth, retry});
    return o;
  }

  Ctx nested() const { return {run, drv, opt, depth + 1}; }
};

void apply_direct(FockState& s, Gate g) {
  switch (g) {
    case Gate::X1: s.amp = apply_string(pauli_string(1, 'x'), s.amp); break;
    case Gate::Z1: s.amp = apply_string(pauli_string(1, 'z'), s.amp); break;
    case Gate::X2: s.amp = apply_string(pauli_string(2, 'x'), s.amp); break;
    case Gate::Z2: s.amp = apply_string(pauli_string(2, 'z'), s.amp); break;
    case Gate::P1: s.amp += apply_string(make_string(0, {0, 1}), s.amp).eval(); break;
    case Gate::P2: s.amp += apply_string(make_string(0, {4, 5}), s.amp).eval(); break;
  }
  s.amp.normalize();
}

void pauli_fix(Ctx& c, int q, char axis);
void phase(Ctx& c, int q);

void apply_correction(Ctx& c, Gate g) {
  if (c.depth == 0) c.run.corrections.push_back(g);
  if (c.opt.corrections == CorrectionMode::direct) {
    apply_direct(c.run.state, g);
    return;
  }
  Ctx sub = c.nested();
  switch (g) {
    case Gate::X1: pauli_fix(sub, 1, 'x'); break;
    case Gate::Z1: pauli_fix(sub, 1, 'z'); break;
    case Gate::X2: pauli_fix(sub, 2, 'x'); break;
    case Gate::Z2: pauli_fix(sub, 2, 'z'); break;
    case Gate::P1: phase(sub, 1); break;
    case Gate::P2: phase(sub, 2); break;
  }
}

void finish(Ctx& c, const CorrectionTable& t, const std::vector<int>& s, int anc) {
  const CorrectionRow& row = t.lookup(s, anc);
  if (c.depth == 0) {
    c.run.outcomes = s;
    c.run.table_row = row.condition;
  }
  for (Gate g : row.gates) apply_correction(c, g);
}

void pauli_fix(Ctx& c, int q, char axis) {
  check_qubit(q);
  if (axis != 'x' && axis != 'z') throw Error("pauli_fix: axis must be x or z");
  ancilla_sign(c.run.state);
  const MajoranaString pa = multiply(pauli_string(q, axis), z3());
  const std::string la = std::string("s") + axis + std::to_string(q) + " sz3";
  std::vector<int> s;
  const int s1 = c.measure("sx3", x3());
  s.push_back(s1);
  for (int retry = 0;; ++retry) {
    s.push_back(c.measure(la, pa, retry));
    const int last = c.measure("sx3", x3(), retry);
    s.push_back(last);
    if (last != s1) break;
    if (retry + 1 >= c.opt.retry_cap)
      throw Error("pauli_fix: forced measurement retry cap exceeded after " + std::to_string(retry + 1) +
                  " retries (" + std::to_string(c.run.steps.size()) + " steps logged)");
    ++c.run.retries;
    c.drv.on_retry(retry + 1);
  }
  s.push_back(c.measure("sz3", z3()));
  if (c.depth == 0) {
    c.run.outcomes = s;
    c.run.table_row = "s_last=-s1";
  }
}

void hadamard(Ctx& c, int q) {
  check_qubit(q);
  const int a = ancilla_sign(c.run.state);
  const MajoranaString xz = q == 1 ? make_string(1, {1, 3}) : make_string(1, {5, 7});
  const MajoranaString zz = q == 1 ? make_string(1, {2, 3}) : make_string(1, {6, 7});
  std::vector<int> s;
  s.push_back(c.measure("sx3", x3()));
  s.push_back(c.measure(to_string(xz), xz));
  s.push_back(c.measure(to_string(zz), zz));
  s.push_back(c.measure("sx3", x3()));
  s.push_back(c.measure("sz3", z3()));
  finish(c, hadamard_table(q), s, a);
}

void phase(Ctx& c, int q) {
  check_qubit(q);
  const int a = ancilla_sign(c.run.state);
  // Pi_{13,zy}^{s2} = (1 - s2 i g03 gp4), Pi_{23,zy}^{s2} = (1 + s2 i gp3 g04)
  const MajoranaString zy = q == 1 ? make_string(3, {2, 7}) : make_string(1, {6, 3});
  std::vector<int> s;
  s.push_back(c.measure("sx3", x3()));
  s.push_back(c.measure(to_string(zy), zy));
  s.push_back(c.measure("sz3", z3()));
  finish(c, phase_table(q, c.opt.literal_tables), s, c.opt.literal_tables ? a : s[2]);
}

void cnot(Ctx& c) {
  const int a = ancilla_sign(c.run.state);
  const MajoranaString p2 = make_string(1, {5, 7}), p3 = make_string(1, {2, 5});
  std::vector<int> s;
  s.push_back(c.measure("sx3", x3()));
  s.push_back(c.measure(to_string(p2), p2));
  s.push_back(c.measure(to_string(p3), p3));
  s.push_back(c.measure("sz3", z3()));
  finish(c, cnot_table(c.opt.literal_tables), s, c.opt.literal_tables ? a : s[3]);
}

void tgate(Ctx& c, int q) {
  check_qubit(q);
  const MajoranaString zz = multiply(pauli_string(q, 'z'), z3());
  std::vector<int> s;
  s.push_back(c.measure("sz" + std::to_string(q) + " sz3", zz));
  s.push_back(c.measure("sx3", x3()));
  s.push_back(c.measure("sz3", z3()));
  finish(c, tgate_table(q), s, 0);
}

CorrectionRow row(std::string cond, std::function<bool(const std::vector<int>&, int)> f, std::vector<Gate> g) {
  return {std::move(cond), std::move(f), std::move(g)};
}

}  // namespace

int ScriptDriver::choose(double p_plus) {
  if (next_ >= outcomes_.size()) throw Error("script driver: outcome list exhausted");
  const int o = outcomes_[next_++];
  if (o != 1 && o != -1) throw Error("script driver: outcomes must be +1 or -1");
  (void)p_plus;
  return o;
}

std::string gate_name(Gate g) {
  switch (g) {
    case Gate::X1: return "X1";
    case Gate::Z1: return "Z1";
    case Gate::X2: return "X2";
    case Gate::Z2: return "Z2";
    case Gate::P1: return "P1";
    case Gate::P2: return "P2";
  }
  return "?";
}

Gate pauli_gate(int qubit, char axis) {
  check_qubit(qubit);
  if (axis == 'x') return qubit == 1 ? Gate::X1 : Gate::X2;
  if (axis == 'z') return qubit == 1 ? Gate::Z1 : Gate::Z2;
  throw Error("pauli_gate: axis must be x or z");
}

const CorrectionRow& CorrectionTable::lookup(const std::vector<int>& s, int anc) const {
  if (int(s.size()) != num_outcomes) throw Error("correction table " + protocol + ": wrong number of outcomes");
  const CorrectionRow* hit = nullptr;
  for (const auto& r : rows) {
    if (!r.match(s, anc)) continue;
    if (hit) throw Error("correction table " + protocol + ": rows overlap");
    hit = &r;
  }
  if (!hit) {
    std::string o;
    for (int x : s) o += x > 0 ? '+' : '-';
    throw Error("correction table " + protocol + " incomplete: no row for outcomes " + o);
  }
  return *hit;
}

CorrectionTable hadamard_table(int q) {
  check_qubit(q);
  const Gate X = pauli_gate(q, 'x'), Z = pauli_gate(q, 'z');
  CorrectionTable t{"hadamard" + std::to_string(q), 5, {}};
  t.rows.push_back(row("s2=-s3, s1=-s4", [](auto& s, int) { return s[1] == -s[2] && s[0] == -s[3]; }, {}));
  t.rows.push_back(row("s2=s3, s1=-s4", [](auto& s, int) { return s[1] == s[2] && s[0] == -s[3]; }, {Z, X}));
  t.rows.push_back(row("s2=s3, s1=s4", [](auto& s, int) { return s[1] == s[2] && s[0] == s[3]; }, {X}));
  t.rows.push_back(row("s2=-s3, s1=s4", [](auto& s, int) { return s[1] == -s[2] && s[0] == s[3]; }, {Z}));
  return t;
}

CorrectionTable phase_table(int q, bool literal) {
  check_qubit(q);
  const Gate Z = pauli_gate(q, 'z');
  const std::string a = literal ? "s" : "s3";
  CorrectionTable t{"phase" + std::to_string(q), 3, {}};
  t.rows.push_back(row("s1=" + a + "*s2", [](auto& s, int anc) { return s[0] == anc * s[1]; }, {}));
  t.rows.push_back(row("s1=-" + a + "*s2", [](auto& s, int anc) { return s[0] == -anc * s[1]; }, {Z}));
  return t;
}

CorrectionTable cnot_table(bool literal) {
  CorrectionTable t{"cnot", 4, {}};
  // literal rows use the ancilla value before the protocol; the default rows
  // use s4 and the opposite sign of s1*s3
  const int f = literal ? 1 : -1;
  const std::string a = literal ? "s" : "s4", p = literal ? "s1*s3" : "-s1*s3";
  t.rows.push_back(row(p + "=" + a + "*s2=1", [f](auto& s, int anc) { return f * s[0] * s[2] == 1 && anc * s[1] == 1; }, {}));
  t.rows.push_back(row(p + "=-" + a + "*s2=-1", [f](auto& s, int anc) { return f * s[0] * s[2] == -1 && anc * s[1] == 1; },
                       {Gate::X2}));
  t.rows.push_back(row(p + "=" + a + "*s2=-1", [f](auto& s, int anc) { return f * s[0] * s[2] == -1 && anc * s[1] == -1; },
                       {Gate::Z1}));
  t.rows.push_back(row(p + "=-" + a + "*s2=1", [f](auto& s, int anc) { return f * s[0] * s[2] == 1 && anc * s[1] == -1; },
                       {Gate::X2, Gate::Z1}));
  return t;
}

CorrectionTable tgate_table(int q) {
  check_qubit(q);
  const Gate Z = pauli_gate(q, 'z'), P = q == 1 ? Gate::P1 : Gate::P2;
  CorrectionTable t{"tgate" + std::to_string(q), 3, {}};
  t.rows.push_back(row("s1=s2=1", [](auto& s, int) { return s[0] == 1 && s[1] == 1; }, {}));
  t.rows.push_back(row("s1=-s2=1", [](auto& s, int) { return s[0] == 1 && s[1] == -1; }, {Z}));
  t.rows.push_back(row("s1=-s2=-1", [](auto& s, int) { return s[0] == -1 && s[1] == 1; }, {P}));
  t.rows.push_back(row("s1=s2=-1", [](auto& s, int) { return s[0] == -1 && s[1] == -1; }, {Z, P}));
  return t;
}

int ancilla_sign(const FockState& s, double tol) {
  const double e = expectation(s, z3()).real();
  if (std::abs(std::abs(e) - 1.0) > tol) throw Error("protocol: ancilla is not in a sigma_z^(3) eigenstate");
  return e > 0 ? 1 : -1;
}

namespace {

template <class F>
ProtocolRun run_with(const std::string& id, const FockState& in, Driver& d, const ProtocolOptions& opt, F body) {
  ProtocolRun run;
  run.id = id;
  run.state = in;
  Ctx c{run, d, opt, 0};
  body(c);
  return run;
}

}  // namespace

ProtocolRun run_pauli_fix(const FockState& in, int qubit, char axis, Driver& d, const ProtocolOptions& opt) {
  return run_with(std::string("pauli-") + axis + std::to_string(qubit), in, d, opt,
                  [&](Ctx& c) { pauli_fix(c, qubit, axis); });
}

ProtocolRun run_hadamard(const FockState& in, int qubit, Driver& d, const ProtocolOptions& opt) {
  return run_with("hadamard" + std::to_string(qubit), in, d, opt, [&](Ctx& c) { hadamard(c, qubit); });
}

ProtocolRun run_phase(const FockState& in, int qubit, Driver& d, const ProtocolOptions& opt) {
  return run_with("phase" + std::to_string(qubit), in, d, opt, [&](Ctx& c) { phase(c, qubit); });
}

ProtocolRun run_cnot(const FockState& in, Driver& d, const ProtocolOptions& opt) {
  return run_with("cnot", in, d, opt, [&](Ctx& c) { cnot(c); });
}

ProtocolRun run_tgate(const FockState& in, int qubit, Driver& d, const ProtocolOptions& opt) {
  return run_with("tgate" + std::to_string(qubit), in, d, opt, [&](Ctx& c) { tgate(c, qubit); });
}

ProtocolRun run_identity(const FockState& in, Driver& d) {
  const ProtocolOptions opt;
  return run_with("identity", in, d, opt, [&](Ctx& c) {
    ancilla_sign(c.run.state);
    c.run.outcomes = {c.measure("sz3", z3())};
    c.run.table_row = "any";
  });
}

const std::vector<std::string>& protocol_ids() {
  static const std::vector<std::string> ids = {"identity", "pauli-x1", "pauli-z1", "pauli-x2", "pauli-z2",
                                               "hadamard1", "hadamard2", "phase1",  "phase2",   "cnot",
                                               "tgate1",    "tgate2"};
  return ids;
}

namespace {

std::string canonical_id(const std::string& id) {
  if (id == "pauli-x") return "pauli-x1";
  if (id == "pauli-z") return "pauli-z1";
  return id;
}

}  // namespace

bool is_protocol_id(const std::string& id) {
  const auto& ids = protocol_ids();
  return std::find(ids.begin(), ids.end(), canonical_id(id)) != ids.end();
}

ProtocolRun run_protocol(const std::string& raw, const FockState& in, Driver& d, const ProtocolOptions& opt) {
  const std::string id = canonical_id(raw);
  if (id == "identity") return run_identity(in, d);
  if (id.rfind("pauli-", 0) == 0 && id.size() == 8) return run_pauli_fix(in, id[7] - '0', id[6], d, opt);
  if (id == "hadamard1" || id == "hadamard2") return run_hadamard(in, id.back() - '0', d, opt);
  if (id == "phase1" || id == "phase2") return run_phase(in, id.back() - '0', d, opt);
  if (id == "cnot") return run_cnot(in, d, opt);
  if (id == "tgate1" || id == "tgate2") return run_tgate(in, id.back() - '0', d, opt);
  throw Error("unknown protocol id '" + raw + "'");
}

ProtocolRun run_protocol(const std::string& id, const FockState& in, Rng& rng, const ProtocolOptions& opt) {
  SampleDriver d(rng);
  return run_protocol(id, in, d, opt);
}

GateSpec gate_spec(const std::string& raw) {
  const std::string id = canonical_id(raw);
  if (!is_protocol_id(id)) throw Error("unknown protocol id '" + raw + "'");
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd I = Eigen::Matrix2cd::Identity();
  MatC target;
  auto on = [&](int q, const Eigen::Matrix2cd& m) {
    MatC out(4, 4);
    const Eigen::Matrix2cd a = q == 1 ? m : I, b = q == 1 ? I : m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
    return out;
  };
  const int q = id.back() == '2' ? 2 : 1;
  if (id == "identity") {
    target = MatC::Identity(4, 4);
  } else if (id.rfind("pauli-", 0) == 0) {
    if (id[6] == 'x') u << 0, 1, 1, 0;
    else u << 1, 0, 0, -1;
    target = on(q, u);
  } else if (id.rfind("hadamard", 0) == 0) {
    u << 1, 1, 1, -1;
    target = on(q, u / std::sqrt(2.0));
  } else if (id.rfind("phase", 0) == 0) {
    u << 1, 0, 0, kI;
    target = on(q, u);
  } else if (id == "cnot") {
    target = MatC::Zero(4, 4);
    target(0, 0) = target(1, 1) = target(2, 3) = target(3, 2) = 1;
  } else {
    u << std::exp(-kI * kPi / 8.0), 0, 0, std::exp(kI * kPi / 8.0);
    target = on(q, u);
  }
  return {id, target};
}

Eigen::Vector2cd magic_state() {
  return Eigen::Vector2cd(std::exp(-kI * kPi / 8.0), std::exp(kI * kPi / 8.0)) / std::sqrt(2.0);
}

namespace {

// rows |ab> (2a+b), columns ancilla c
MatC pair_matrix(const FockState& s) {
  const VecC a = logical_amplitudes(s);
  MatC A(4, 2);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c) A(r, c) = a(2 * r + c);
  return A;
}

}  // namespace

VecC logical_pair(const FockState& s, double tol) {
  const MatC A = pair_matrix(s);
  Eigen::JacobiSVD<MatC> svd(A, Eigen::ComputeFullU);
  const auto sv = svd.singularValues();
  if (std::abs(sv(0) - 1.0) > tol) throw Error("logical_pair: state leaks out of the logical subspace");
  if (sv(1) > tol) throw Error("logical_pair: ancilla is entangled with qubits 1-2");
  return svd.matrixU().col(0);
}

FockState encode_pair(const VecC& q12, const Eigen::Vector2cd& anc) {
  if (q12.size() != 4) throw Error("encode_pair: expected 4 amplitudes");
  VecC c(8);
  for (int r = 0; r < 4; ++r)
    for (int k = 0; k < 2; ++k) c(2 * r + k) = q12(r) * anc(k);
  FockState s;
  s.amp = logical_basis() * c;
  s.amp.normalize();
  return s;
}

FockState reset_ancilla(const FockState& s, const Eigen::Vector2cd& anc) {
  return encode_pair(logical_pair(s), anc);
}

double gate_fidelity(const FockState& in, const FockState& out, const MatC& target) {
  const VecC t = target * logical_pair(in);
  return (t.adjoint() * pair_matrix(out)).norm();
}

double verify_gate(const std::vector<FockState>& in, const std::vector<FockState>& out, const GateSpec& spec) {
  if (in.size() != out.size()) throw Error("verify_gate: input/output count mismatch");
  double worst = 0;
  for (std::size_t k = 0; k < in.size(); ++k) worst = std::max(worst, 1.0 - gate_fidelity(in[k], out[k], spec.target));
  return worst;
}

namespace {

class EnumDriver : public Driver {
 public:
  explicit EnumDriver(int max_retries) : max_retries_(max_retries) {}

  int choose(double pp) override {
    if (pos_ < path_.size()) {
      const Decision& d = path_[pos_++];
      prob_ *= d.outcome > 0 ? pp : 1 - pp;
      return d.outcome;
    }
    Decision d{1, false};
    if (pp < kZeroProb) d.outcome = -1;
    else if (pp <= 1 - kZeroProb) d.open = true;
    path_.push_back(d);
    ++pos_;
    prob_ *= d.outcome > 0 ? pp : 1 - pp;
    return d.outcome;
  }

  void on_retry(int r) override {
    if (r > max_retries_) throw Truncated{};
  }

  double probability() const { return prob_; }

  // Moves to the next unexplored branch; false when done.
  bool advance() {
    pos_ = 0;
    prob_ = 1.0;
    while (!path_.empty() && !path_.back().open) path_.pop_back();
    if (path_.empty()) return false;
    path_.back() = {-1, false};
    return true;
  }

 private:
  struct Decision {
    int outcome;
    bool open;
  };
  std::vector<Decision> path_;
  std::size_t pos_ = 0;
  double prob_ = 1.0;
  int max_retries_;
};

}  // namespace

std::size_t EnumerationReport::num_branches() const {
  std::size_t n = 0;
  for (const auto& b : branches) n += b.size();
  return n;
}

EnumerationReport enumerate_branches(const std::string& id, const std::vector<FockState>& inputs,
                                     const ProtocolOptions& opt, int max_retries) {
  const GateSpec spec = gate_spec(id);
  EnumerationReport rep;
  rep.id = spec.name;
  std::set<std::string> rows;
  for (const FockState& in : inputs) {
    std::vector<Branch> out;
    EnumDriver d(max_retries);
    double total = 0, truncated = 0;
    do {
      try {
        const ProtocolRun run = run_protocol(id, in, d, opt);
        Branch b;
        for (const auto& st : run.steps) b.outcomes.push_back(st.outcome);
        b.probability = run.probability;
        b.fidelity = gate_fidelity(in, run.state, spec.target);
        b.table_row = run.table_row;
        b.retries = run.retries;
        rows.insert(run.table_row);
        rep.min_fidelity = std::min(rep.min_fidelity, b.fidelity);
        total += b.probability;
        out.push_back(std::move(b));
      } catch (const Truncated&) {
        truncated += d.probability();
      }
    } while (d.advance());
    rep.truncated_probability = std::max(rep.truncated_probability, truncated);
    rep.max_probability_defect = std::max(rep.max_probability_defect, std::abs(total + truncated - 1.0));
    rep.branches.push_back(std::move(out));
  }
  rep.rows_used.assign(rows.begin(), rows.end());
  return rep;
}

}  // namespace mcm
