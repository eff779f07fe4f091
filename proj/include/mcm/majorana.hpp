#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mcm/types.hpp"

namespace mcm {

// Labels 0..7 in canonical order: g01 g02 g03 g04 gp1 gp2 gp3 gp4.
enum class MajSpecies { zero, pi };
struct MajoranaLabel {
  MajSpecies species;
  int corner;  // 1..4
  int index() const { return (species == MajSpecies::zero ? 0 : 4) + corner - 1; }
};
std::string label_name(int index);

// phase * product of the set bits of `mask` in ascending label order.
// phase = i^k with k = phase_k in 0..3.
struct MajoranaString {
  int phase_k = 0;
  std::uint8_t mask = 0;

  cplx phase() const;
  int length() const;
  bool operator==(const MajoranaString&) const = default;
};

// Canonicalizes any product (repeats contracted, reordering signs tracked).
MajoranaString make_string(int phase_k, const std::vector<int>& labels);
MajoranaString parse_string(const std::string& text);  // e.g. "i g01 g02", "-g01 g02 g03 g04"
std::string to_string(const MajoranaString& s);

MajoranaString multiply(const MajoranaString& a, const MajoranaString& b);
MajoranaString adjoint(const MajoranaString& s);
bool is_hermitian(const MajoranaString& s);
bool commutes(const MajoranaString& a, const MajoranaString& b);
MajoranaString total_parity();

// Fock space of 4 fermions, (g01,g02) (g03,g04) (gp1,gp2) (gp3,gp4), Jordan-Wigner
// ordered; bit k of the basis index is the occupation of mode k.
inline constexpr int kFockDim = 16;
MatC majorana_matrix(int label);
MatC to_matrix(const MajoranaString& s);
VecC apply_string(const MajoranaString& s, const VecC& v);

enum class Sector { even, odd, mixed };

struct FockState {
  VecC amp = VecC::Zero(kFockDim);
  Sector sector(double tol = 1e-12) const;
};

// Encoded Pauli operators, qubit 1..3, axis 'x','y','z'.
MajoranaString pauli_string(int qubit, char axis);
// pauli(qubit_a, axis_a) * pauli(qubit_b, axis_b)
MajoranaString pauli_product(int qa, char aa, int qb, char ab);

// Columns |abc>, logical index 4a + 2b + c.
const MatC& logical_basis();

FockState encode_logical(const Eigen::Vector2cd& q1, const Eigen::Vector2cd& q2,
                         const Eigen::Vector2cd& q3);
// Amplitudes on the logical basis (8 entries, index 4a + 2b + c).
VecC logical_amplitudes(const FockState& s);
std::array<double, 3> bloch_vector(const FockState& s, int qubit);

cplx expectation(const FockState& s, const MajoranaString& p);

// RNG with a portable uniform mapping (std distributions are implementation-defined).
struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed = 0) : engine(seed) {}
  double uniform() { return double(engine() >> 11) * 0x1.0p-53; }
};

struct MeasureResult {
  int outcome = 1;
  FockState post;
  double probability = 1.0;
};

double outcome_probability(const FockState& s, const MajoranaString& p, int outcome);
MeasureResult measure(const FockState& s, const MajoranaString& p, Rng& rng);
MeasureResult measure_forced(const FockState& s, const MajoranaString& p, int outcome);

}  // namespace mcm
