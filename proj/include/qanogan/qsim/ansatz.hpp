#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qanogan/qsim/state.hpp"
#include "qanogan/rng.hpp"

namespace qanogan::qsim {

// The four hardware-efficient circuit families. All place one single-qubit
// rotation block per qubit per layer; they differ in how rotation axes are
// chosen and in the entangling pattern:
//   C1: random axis per rotation, CNOT chain control i -> target i+1
//   C2: random axis per rotation, CNOT chain control i+1 -> target i
//   C3: fixed RX, RY, RZ triple per qubit, then the C1 chain
//   C4: random axis per rotation, no entangling gates
enum class CircuitKind : std::uint8_t { C1 = 1, C2 = 2, C3 = 3, C4 = 4 };

enum class RotationAxis : std::uint8_t { X = 0, Y = 1, Z = 2 };

// One gate in execution order. Trainable rotations carry a parameter slot;
// a rotation is never both trainable and fixed.
struct GateOp {
  enum class Kind : std::uint8_t { RX = 0, RY = 1, RZ = 2, CNOT = 3 };

  Kind kind = Kind::RX;
  int target = 0;
  std::optional<int> control;       // CNOT only
  std::optional<int> param_slot;    // trainable rotations
  std::optional<double> fixed_angle;  // frozen rotations
};

struct AnsatzLayout {
  CircuitKind kind = CircuitKind::C1;
  int n_qubits = 0;
  int depth = 0;
  int n_params = 0;
  std::vector<GateOp> gates;              // execution order
  std::vector<std::size_t> layer_offsets;  // depth+1 entries; gates[layer_offsets[l]..layer_offsets[l+1]) is layer l
};

// Rotation axes indexed by parameter slot. Drawn once at build time and held
// fixed for the life of the model.
struct BasisAssignment {
  std::vector<RotationAxis> bases;
};

std::pair<AnsatzLayout, BasisAssignment> build_ansatz(CircuitKind kind, int n_qubits,
                                                      int depth, std::uint64_t seed);

// Runs the ansatz on the given state. theta.size() must equal n_params.
void apply_circuit(QubitState& state, const AnsatzLayout& layout,
                   const BasisAssignment& bases, std::span<const double> theta);

// g_q(z; theta, nu): prepares the latent state, runs the circuit, and reads
// out <Z_i> for every qubit, exactly from the amplitudes.
std::vector<double> circuit_expectations(const AnsatzLayout& layout,
                                         const BasisAssignment& bases,
                                         std::span<const double> theta,
                                         std::span<const double> z);

// Same readout estimated from a fresh sample of `shots` bitstrings.
std::vector<double> circuit_expectations_sampled(const AnsatzLayout& layout,
                                                 const BasisAssignment& bases,
                                                 std::span<const double> theta,
                                                 std::span<const double> z, int shots,
                                                 RngStream& rng);

// Independent draws in (-pi, pi] for every parameter slot.
std::vector<double> random_init(const AnsatzLayout& layout, std::uint64_t seed);

// Identity-block initialization with block size one: layers are paired and
// the second layer of each pair is rebuilt as the structural adjoint of the
// first (gates reversed, entangling block reversed, same axes, negated
// angles), so every pair collapses to the identity at the initial parameters.
// An unpaired final layer stays random. Returns the rebuilt circuit, since
// the mirror layers replace the originally drawn ones.
struct IdentityBlockInit {
  AnsatzLayout layout;
  BasisAssignment bases;
  std::vector<double> theta;
};

IdentityBlockInit identity_block_init(const AnsatzLayout& layout,
                                      const BasisAssignment& bases, std::uint64_t seed);

}  // namespace qanogan::qsim
