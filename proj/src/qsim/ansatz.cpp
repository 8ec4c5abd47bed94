#include "qanogan/qsim/ansatz.hpp"

#include <cmath>
#include <stdexcept>

namespace qanogan::qsim {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

GateOp::Kind rotation_kind(RotationAxis axis) {
  switch (axis) {
    case RotationAxis::X: return GateOp::Kind::RX;
    case RotationAxis::Y: return GateOp::Kind::RY;
    case RotationAxis::Z: return GateOp::Kind::RZ;
  }
  throw std::invalid_argument("rotation_kind: bad axis");
}

void check_layout(const AnsatzLayout& layout, const BasisAssignment& bases,
                  std::span<const double> theta) {
  if (static_cast<int>(bases.bases.size()) != layout.n_params) {
    throw std::invalid_argument("apply_circuit: basis count does not match parameter count");
  }
  if (static_cast<int>(theta.size()) != layout.n_params) {
    throw std::invalid_argument("apply_circuit: theta size does not match parameter count");
  }
}

}  // namespace

std::pair<AnsatzLayout, BasisAssignment> build_ansatz(CircuitKind kind, int n_qubits,
                                                      int depth, std::uint64_t seed) {
  if (n_qubits < 1) throw std::invalid_argument("build_ansatz: need at least one qubit");
  if (depth < 1) throw std::invalid_argument("build_ansatz: depth must be positive");
  switch (kind) {
    case CircuitKind::C1:
    case CircuitKind::C2:
    case CircuitKind::C3:
    case CircuitKind::C4:
      break;
    default:
      throw std::invalid_argument("build_ansatz: unknown circuit kind");
  }

  RngStream basis_rng = derive_stream(seed, "ansatz-bases");

  AnsatzLayout layout;
  layout.kind = kind;
  layout.n_qubits = n_qubits;
  layout.depth = depth;
  BasisAssignment bases;

  auto add_rotation = [&](int qubit, RotationAxis axis) {
    GateOp g;
    g.kind = rotation_kind(axis);
    g.target = qubit;
    g.param_slot = static_cast<int>(bases.bases.size());
    layout.gates.push_back(g);
    bases.bases.push_back(axis);
  };

  auto add_cnot = [&](int control, int target) {
    GateOp g;
    g.kind = GateOp::Kind::CNOT;
    g.control = control;
    g.target = target;
    layout.gates.push_back(g);
  };

  for (int layer = 0; layer < depth; ++layer) {
    layout.layer_offsets.push_back(layout.gates.size());
    if (kind == CircuitKind::C3) {
      for (int q = 0; q < n_qubits; ++q) {
        add_rotation(q, RotationAxis::X);
        add_rotation(q, RotationAxis::Y);
        add_rotation(q, RotationAxis::Z);
      }
    } else {
      for (int q = 0; q < n_qubits; ++q) {
        add_rotation(q, static_cast<RotationAxis>(basis_rng.uniform_int(3)));
      }
    }
    if (kind == CircuitKind::C1 || kind == CircuitKind::C3) {
      for (int i = 0; i + 1 < n_qubits; ++i) add_cnot(i, i + 1);
    } else if (kind == CircuitKind::C2) {
      for (int i = 0; i + 1 < n_qubits; ++i) add_cnot(i + 1, i);
    }
  }
  layout.layer_offsets.push_back(layout.gates.size());
  layout.n_params = static_cast<int>(bases.bases.size());
  return {std::move(layout), std::move(bases)};
}

void apply_circuit(QubitState& state, const AnsatzLayout& layout,
                   const BasisAssignment& bases, std::span<const double> theta) {
  check_layout(layout, bases, theta);
  if (state.n_qubits != layout.n_qubits) {
    throw std::invalid_argument("apply_circuit: state and layout qubit counts differ");
  }
  for (const GateOp& g : layout.gates) {
    if (g.kind == GateOp::Kind::CNOT) {
      apply_cnot(state, *g.control, g.target);
      continue;
    }
    double angle = 0.0;
    RotationAxis axis;
    if (g.param_slot) {
      angle = theta[*g.param_slot];
      axis = bases.bases[*g.param_slot];
    } else if (g.fixed_angle) {
      angle = *g.fixed_angle;
      switch (g.kind) {
        case GateOp::Kind::RX: axis = RotationAxis::X; break;
        case GateOp::Kind::RY: axis = RotationAxis::Y; break;
        default: axis = RotationAxis::Z; break;
      }
    } else {
      throw std::invalid_argument("apply_circuit: rotation has neither slot nor angle");
    }
    switch (axis) {
      case RotationAxis::X: apply_rx(state, g.target, angle); break;
      case RotationAxis::Y: apply_ry(state, g.target, angle); break;
      case RotationAxis::Z: apply_rz(state, g.target, angle); break;
    }
  }
}

std::vector<double> circuit_expectations(const AnsatzLayout& layout,
                                         const BasisAssignment& bases,
                                         std::span<const double> theta,
                                         std::span<const double> z) {
  if (static_cast<int>(z.size()) != layout.n_qubits) {
    throw std::invalid_argument("circuit_expectations: latent size must equal qubit count");
  }
  QubitState state = prepare_latent_state(z);
  apply_circuit(state, layout, bases, theta);
  return expect_z_analytic(state);
}

std::vector<double> circuit_expectations_sampled(const AnsatzLayout& layout,
                                                 const BasisAssignment& bases,
                                                 std::span<const double> theta,
                                                 std::span<const double> z, int shots,
                                                 RngStream& rng) {
  if (static_cast<int>(z.size()) != layout.n_qubits) {
    throw std::invalid_argument("circuit_expectations_sampled: latent size must equal qubit count");
  }
  QubitState state = prepare_latent_state(z);
  apply_circuit(state, layout, bases, theta);
  return expect_z_from_sample(sample_bitstrings(state, shots, rng));
}

std::vector<double> random_init(const AnsatzLayout& layout, std::uint64_t seed) {
  RngStream rng = derive_stream(seed, "theta-init");
  std::vector<double> theta(static_cast<std::size_t>(layout.n_params));
  for (double& t : theta) t = kPi - 2.0 * kPi * rng.uniform();  // (-pi, pi]
  return theta;
}

IdentityBlockInit identity_block_init(const AnsatzLayout& layout,
                                      const BasisAssignment& bases, std::uint64_t seed) {
  if (static_cast<int>(bases.bases.size()) != layout.n_params) {
    throw std::invalid_argument("identity_block_init: basis count does not match parameter count");
  }
  RngStream rng = derive_stream(seed, "theta-init");

  IdentityBlockInit out;
  out.layout.kind = layout.kind;
  out.layout.n_qubits = layout.n_qubits;
  out.layout.depth = layout.depth;

  // Gate indices of the most recent source layer, used to build its mirror.
  std::vector<std::size_t> source;

  for (int layer = 0; layer < layout.depth; ++layer) {
    out.layout.layer_offsets.push_back(out.layout.gates.size());
    if (layer % 2 == 0) {
      // Fresh layer: copy the drawn structure, remap slots, draw angles.
      source.clear();
      for (std::size_t i = layout.layer_offsets[layer];
           i < layout.layer_offsets[layer + 1]; ++i) {
        GateOp g = layout.gates[i];
        if (g.param_slot) {
          const RotationAxis axis = bases.bases[*g.param_slot];
          g.param_slot = static_cast<int>(out.bases.bases.size());
          out.bases.bases.push_back(axis);
          out.theta.push_back(kPi - 2.0 * kPi * rng.uniform());
        }
        source.push_back(out.layout.gates.size());
        out.layout.gates.push_back(g);
      }
    } else {
      // Mirror layer: reversed gate order undoes the previous layer exactly.
      for (auto it = source.rbegin(); it != source.rend(); ++it) {
        GateOp g = out.layout.gates[*it];
        if (g.param_slot) {
          const RotationAxis axis = out.bases.bases[*g.param_slot];
          const double angle = out.theta[*g.param_slot];
          g.param_slot = static_cast<int>(out.bases.bases.size());
          out.bases.bases.push_back(axis);
          out.theta.push_back(-angle);
        } else if (g.fixed_angle) {
          g.fixed_angle = -*g.fixed_angle;
        }
        out.layout.gates.push_back(g);
      }
    }
  }
  out.layout.layer_offsets.push_back(out.layout.gates.size());
  out.layout.n_params = static_cast<int>(out.bases.bases.size());
  return out;
}

}  // namespace qanogan::qsim
