#include "mcm/majorana.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace mcm {

namespace {

const char* kLabelNames[8] = {"g01", "g02", "g03", "g04", "gp1", "gp2", "gp3", "gp4"};

cplx ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

}  // namespace

std::string label_name(int index) {
  if (index < 0 || index > 7) throw Error("majorana: label out of range");
  return kLabelNames[index];
}

cplx MajoranaString::phase() const { return ipow(phase_k); }
int MajoranaString::length() const { return std::popcount(unsigned(mask)); }

MajoranaString multiply(const MajoranaString& a, const MajoranaString& b) {
  // moving each factor of b left past the larger factors of a costs one sign each
  int swaps = 0;
  for (int y = 0; y < 8; ++y)
    if (b.mask >> y & 1) swaps += std::popcount(unsigned(a.mask) >> (y + 1));
  MajoranaString r;
  r.mask = a.mask ^ b.mask;
  r.phase_k = (a.phase_k + b.phase_k + 2 * (swaps % 2)) % 4;
  return r;
}

MajoranaString make_string(int phase_k, const std::vector<int>& labels) {
  MajoranaString r;
  r.phase_k = ((phase_k % 4) + 4) % 4;
  for (int l : labels) {
    if (l < 0 || l > 7) throw Error("majorana: label out of range");
    MajoranaString g;
    g.mask = std::uint8_t(1u << l);
    r = multiply(r, g);
  }
  return r;
}

MajoranaString adjoint(const MajoranaString& s) {
  // reversing k factors costs k(k-1)/2 transpositions
  const int k = s.length();
  MajoranaString r = s;
  r.phase_k = (4 - s.phase_k) % 4;
  if ((k * (k - 1) / 2) % 2) r.phase_k = (r.phase_k + 2) % 4;
  return r;
}

bool is_hermitian(const MajoranaString& s) { return adjoint(s) == s; }

bool commutes(const MajoranaString& a, const MajoranaString& b) {
  return multiply(a, b) == multiply(b, a);
}

MajoranaString total_parity() { return make_string(0, {0, 1, 2, 3, 4, 5, 6, 7}); }

MajoranaString parse_string(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  int k = 0;
  std::vector<int> labels;
  bool first = true;
  while (in >> tok) {
    if (first) {
      first = false;
      if (tok[0] == '-' || tok[0] == '+') {
        if (tok[0] == '-') k += 2;
        tok = tok.substr(1);
      }
      if (!tok.empty() && tok[0] == 'i') {
        k += 1;
        tok = tok.substr(1);
      }
      if (tok.empty() || tok == "1") continue;
    }
    int idx = -1;
    for (int l = 0; l < 8; ++l)
      if (tok == kLabelNames[l]) idx = l;
    if (idx < 0) throw Error("majorana: cannot parse token '" + tok + "'");
    labels.push_back(idx);
  }
  if (first) throw Error("majorana: empty string");
  return make_string(k, labels);
}

std::string to_string(const MajoranaString& s) {
  static const char* prefix[4] = {"", "i", "-", "-i"};
  std::string body;
  for (int l = 0; l < 8; ++l)
    if (s.mask >> l & 1) body += (body.empty() ? "" : " ") + std::string(kLabelNames[l]);
  if (body.empty()) return s.phase_k == 0 ? "1" : s.phase_k == 2 ? "-1" : prefix[s.phase_k];
  if (s.phase_k % 2 == 0) return prefix[s.phase_k] + body;
  return std::string(prefix[s.phase_k]) + " " + body;
}

namespace {

// g_label |s> = amp |s ^ bit>
void majorana_action(int label, int s, int& t, cplx& amp) {
  const int mode = label / 2;
  const double jw = (std::popcount(unsigned(s) & ((1u << mode) - 1)) % 2) ? -1.0 : 1.0;
  t = s ^ (1 << mode);
  amp = jw;
  // c|1> = |0>, c†|0> = |1>; gA = c + c†, gB = -i (c - c†)
  if (label % 2) amp *= (s >> mode & 1) ? cplx(0, -1) : cplx(0, 1);
}

}  // namespace

MatC majorana_matrix(int label) {
  if (label < 0 || label > 7) throw Error("majorana: label out of range");
  MatC g = MatC::Zero(kFockDim, kFockDim);
  for (int s = 0; s < kFockDim; ++s) {
    int t;
    cplx amp;
    majorana_action(label, s, t, amp);
    g(t, s) = amp;
  }
  return g;
}

VecC apply_string(const MajoranaString& p, const VecC& v) {
  if (v.size() != kFockDim) throw Error("majorana: state must have 16 amplitudes");
  VecC out = VecC::Zero(kFockDim);
  for (int s = 0; s < kFockDim; ++s) {
    // rightmost factor acts first
    int t = s;
    cplx amp = p.phase();
    for (int l = 7; l >= 0; --l) {
      if (!(p.mask >> l & 1)) continue;
      int u;
      cplx a;
      majorana_action(l, t, u, a);
      t = u;
      amp *= a;
    }
    out(t) += amp * v(s);
  }
  return out;
}

MatC to_matrix(const MajoranaString& s) {
  MatC m(kFockDim, kFockDim);
  for (int c = 0; c < kFockDim; ++c) m.col(c) = apply_string(s, VecC::Unit(kFockDim, c));
  return m;
}

Sector FockState::sector(double tol) const {
  double even = 0, odd = 0;
  for (int s = 0; s < kFockDim; ++s) (std::popcount(unsigned(s)) % 2 ? odd : even) += std::norm(amp(s));
  if (odd <= tol) return Sector::even;
  if (even <= tol) return Sector::odd;
  return Sector::mixed;
}

MajoranaString pauli_string(int qubit, char axis) {
  // sigma_z: i g01 g02 | i gp1 gp2 | g01 g02 g03 g04
  // sigma_x: i g01 g03 | i gp1 gp3 | i g04 gp4
  if (axis == 'y') return multiply(make_string(1, {}), multiply(pauli_string(qubit, 'x'), pauli_string(qubit, 'z')));
  switch (qubit) {
    case 1: return axis == 'z' ? make_string(1, {0, 1}) : make_string(1, {0, 2});
    case 2: return axis == 'z' ? make_string(1, {4, 5}) : make_string(1, {4, 6});
    case 3: return axis == 'z' ? make_string(0, {0, 1, 2, 3}) : make_string(1, {3, 7});
    default: throw Error("majorana: qubit must be 1..3");
  }
}

MajoranaString pauli_product(int qa, char aa, int qb, char ab) {
  return multiply(pauli_string(qa, aa), pauli_string(qb, ab));
}

const MatC& logical_basis() {
  static const MatC basis = [] {
    MatC B(kFockDim, 8);
    // |000>: common +1 eigenvector of the three sigma_z and the total parity
    MatC P = MatC::Identity(kFockDim, kFockDim);
    for (int q = 1; q <= 3; ++q)
      P = P * (MatC::Identity(kFockDim, kFockDim) + to_matrix(pauli_string(q, 'z'))) * 0.5;
    P = P * (MatC::Identity(kFockDim, kFockDim) + to_matrix(total_parity())) * 0.5;
    Eigen::SelfAdjointEigenSolver<MatC> es(P);
    VecC v = es.eigenvectors().col(kFockDim - 1);
    Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    v *= std::abs(v(imax)) / v(imax);
    const MatC X1 = to_matrix(pauli_string(1, 'x'));
    const MatC X2 = to_matrix(pauli_string(2, 'x'));
    const MatC X3 = to_matrix(pauli_string(3, 'x'));
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          VecC w = v;
          if (c) w = X3 * w;
          if (b) w = X2 * w;
          if (a) w = X1 * w;
          B.col(4 * a + 2 * b + c) = w;
        }
    return B;
  }();
  return basis;
}

FockState encode_logical(const Eigen::Vector2cd& q1, const Eigen::Vector2cd& q2,
                         const Eigen::Vector2cd& q3) {
  for (const auto* q : {&q1, &q2, &q3})
    if (std::abs(q->squaredNorm() - 1.0) > 1e-10) throw Error("encode_logical: qubit state not normalized");
  VecC c(8);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int d = 0; d < 2; ++d) c(4 * a + 2 * b + d) = q1(a) * q2(b) * q3(d);
  FockState s;
  s.amp = logical_basis() * c;
  return s;
}

VecC logical_amplitudes(const FockState& s) { return logical_basis().adjoint() * s.amp; }

cplx expectation(const FockState& s, const MajoranaString& p) {
  return s.amp.dot(apply_string(p, s.amp));
}

std::array<double, 3> bloch_vector(const FockState& s, int qubit) {
  return {expectation(s, pauli_string(qubit, 'x')).real(),
          expectation(s, pauli_string(qubit, 'y')).real(),
          expectation(s, pauli_string(qubit, 'z')).real()};
}

namespace {

VecC project(const FockState& s, const MajoranaString& p, int outcome) {
  if (!is_hermitian(p) || p.mask == 0) throw Error("measure: parity must be a Hermitian non-trivial string");
  return 0.5 * (s.amp + double(outcome) * apply_string(p, s.amp));
}

}  // namespace

double outcome_probability(const FockState& s, const MajoranaString& p, int outcome) {
  return project(s, p, outcome).squaredNorm();
}

MeasureResult measure_forced(const FockState& s, const MajoranaString& p, int outcome) {
  if (outcome != 1 && outcome != -1) throw Error("measure: outcome must be +1 or -1");
  VecC v = project(s, p, outcome);
  const double prob = v.squaredNorm();
  if (prob < 1e-14) throw Error("incompatible forced outcome");
  MeasureResult r;
  r.outcome = outcome;
  r.probability = prob;
  r.post.amp = v / std::sqrt(prob);
  return r;
}

MeasureResult measure(const FockState& s, const MajoranaString& p, Rng& rng) {
  const double pp = outcome_probability(s, p, 1);
  const int outcome = rng.uniform() < pp ? 1 : -1;
  return measure_forced(s, p, outcome);
}

}  // namespace mcm
