#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mcm/majorana.hpp"

namespace mcm {

// Source of measurement outcomes. p_plus is the Born probability of +1.
class Driver {
 public:
  virtual ~Driver() = default;
  virtual int choose(double p_plus) = 0;
  // Called when a forced-measurement loop starts retry number `retries` (1, 2, ...).
  virtual void on_retry(int retries) { (void)retries; }
};

class SampleDriver : public Driver {
 public:
  explicit SampleDriver(Rng& rng) : rng_(rng) {}
  int choose(double p_plus) override { return rng_.uniform() < p_plus ? 1 : -1; }

 private:
  Rng& rng_;
};

// Replays a fixed outcome list; throws when it runs out.
class ScriptDriver : public Driver {
 public:
  explicit ScriptDriver(std::vector<int> outcomes) : outcomes_(std::move(outcomes)) {}
  int choose(double p_plus) override;
  std::size_t consumed() const { return next_; }

 private:
  std::vector<int> outcomes_;
  std::size_t next_ = 0;
};

enum class Gate { X1, Z1, X2, Z2, P1, P2 };
std::string gate_name(Gate g);
Gate pauli_gate(int qubit, char axis);

enum class CorrectionMode { measured, direct };

struct ProtocolOptions {
  CorrectionMode corrections = CorrectionMode::measured;
  // Literal correction tables, with s the ancilla value before the protocol.
  // The default tables read s as the closing sigma_z^(3) outcome and fix the
  // CNOT s1*s3 sign (see README).
  bool literal_tables = false;
  int retry_cap = 64;
};

struct StepRecord {
  std::string label;
  MajoranaString parity;
  int outcome = 1;
  double probability = 1.0;
  int depth = 0;  // 0 for the main sequence, >0 inside correction sub-protocols
  int retry = 0;
};

struct ProtocolRun {
  std::string id;
  std::vector<StepRecord> steps;
  std::vector<int> outcomes;  // main-sequence outcomes s1, s2, ...
  std::string table_row;
  std::vector<Gate> corrections;
  FockState state;
  int retries = 0;
  double probability = 1.0;
};

// One row per case; `match` gets the main outcomes and the ancilla sign the
// table refers to.
struct CorrectionRow {
  std::string condition;
  std::function<bool(const std::vector<int>& s, int anc)> match;
  std::vector<Gate> gates;  // application order
};

struct CorrectionTable {
  std::string protocol;
  int num_outcomes = 0;
  std::vector<CorrectionRow> rows;
  // Throws Error if zero or several rows match.
  const CorrectionRow& lookup(const std::vector<int>& s, int anc) const;
};

CorrectionTable hadamard_table(int qubit);
CorrectionTable phase_table(int qubit, bool literal);
CorrectionTable cnot_table(bool literal);
CorrectionTable tgate_table(int qubit);

// Ancilla sigma_z^(3) sign; throws if not an eigenstate to `tol`.
int ancilla_sign(const FockState& s, double tol = 1e-9);

ProtocolRun run_pauli_fix(const FockState& in, int qubit, char axis, Driver& d, const ProtocolOptions& opt = {});
ProtocolRun run_hadamard(const FockState& in, int qubit, Driver& d, const ProtocolOptions& opt = {});
ProtocolRun run_phase(const FockState& in, int qubit, Driver& d, const ProtocolOptions& opt = {});
ProtocolRun run_cnot(const FockState& in, Driver& d, const ProtocolOptions& opt = {});
ProtocolRun run_tgate(const FockState& in, int qubit, Driver& d, const ProtocolOptions& opt = {});
ProtocolRun run_identity(const FockState& in, Driver& d);

// Ids: identity, pauli-x1, pauli-z1, pauli-x2, pauli-z2 (pauli-x, pauli-z mean
// qubit 1), hadamard1, hadamard2, phase1, phase2, cnot, tgate1, tgate2.
const std::vector<std::string>& protocol_ids();
bool is_protocol_id(const std::string& id);
ProtocolRun run_protocol(const std::string& id, const FockState& in, Driver& d, const ProtocolOptions& opt = {});
ProtocolRun run_protocol(const std::string& id, const FockState& in, Rng& rng, const ProtocolOptions& opt = {});

// Target on logical qubits 1-2, 4x4 in the basis |ab>, index 2a + b.
struct GateSpec {
  std::string name;
  MatC target;
};
GateSpec gate_spec(const std::string& protocol_id);

Eigen::Vector2cd magic_state();

// Logical qubits 1-2 of a state whose ancilla is unentangled; throws otherwise.
VecC logical_pair(const FockState& s, double tol = 1e-9);
// Keeps qubits 1-2, re-prepares qubit 3 in `ancilla`.
FockState reset_ancilla(const FockState& s, const Eigen::Vector2cd& ancilla);
FockState encode_pair(const VecC& q12, const Eigen::Vector2cd& ancilla);

// |<target psi12 (x) phi | out>| maximized over the ancilla state phi.
double gate_fidelity(const FockState& in, const FockState& out, const MatC& target);
double verify_gate(const std::vector<FockState>& in, const std::vector<FockState>& out, const GateSpec& spec);

struct Branch {
  std::vector<int> outcomes;  // every outcome in order, nested ones included
  double probability = 0;
  double fidelity = 0;
  std::string table_row;
  int retries = 0;
};

struct EnumerationReport {
  std::string id;
  std::vector<std::vector<Branch>> branches;  // per input
  double min_fidelity = 1.0;
  double truncated_probability = 0;           // max over inputs
  double max_probability_defect = 0;          // |sum of branches + truncated - 1|
  std::vector<std::string> rows_used;
  std::size_t num_branches() const;
};

// All outcome strings in forced mode; forced loops are followed for at most
// `max_retries` retries, deeper branches count as truncated. A branch that no
// table row matches throws.
EnumerationReport enumerate_branches(const std::string& id, const std::vector<FockState>& inputs,
                                     const ProtocolOptions& opt = {}, int max_retries = 2);

}  // namespace mcm
