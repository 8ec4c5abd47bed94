#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qanogan/rng.hpp"

namespace qanogan::qsim {

using Complex = std::complex<double>;

// Dense statevector over n qubits. Qubit 0 is the most significant bit of
// the amplitude index: for n = 2 the basis state |q0 q1> = |10> sits at
// index 0b10 = 2.
struct QubitState {
  int n_qubits = 0;
  std::vector<Complex> amplitudes;

  QubitState() = default;
  explicit QubitState(int n);  // |0...0>

  std::size_t dim() const { return amplitudes.size(); }
  double norm_sq() const;
};

void apply_rx(QubitState& state, int qubit, double angle);
void apply_ry(QubitState& state, int qubit, double angle);
void apply_rz(QubitState& state, int qubit, double angle);
void apply_cnot(QubitState& state, int control, int target);

// State preparation: one R_x(z_i) per qubit applied to |0...0>.
QubitState prepare_latent_state(std::span<const double> z);

// Exact <Z_i> for every qubit, read off the amplitudes.
std::vector<double> expect_z_analytic(const QubitState& state);

// A batch of measured bitstrings. Bit of qubit q inside a bitstring follows
// the amplitude-index convention (qubit 0 is the most significant bit).
struct ShotSample {
  int n_qubits = 0;
  std::vector<std::uint64_t> bitstrings;

  int size() const { return static_cast<int>(bitstrings.size()); }
};

// Draws sample_size bitstrings from the Born distribution |<x|psi>|^2.
ShotSample sample_bitstrings(const QubitState& state, int sample_size, RngStream& rng);

// <Z_i> estimates from counts: (zeros_i - ones_i) / sample_size per qubit.
std::vector<double> expect_z_from_sample(const ShotSample& sample);

}  // namespace qanogan::qsim
