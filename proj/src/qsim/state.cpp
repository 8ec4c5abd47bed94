#include "qanogan/qsim/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qanogan::qsim {

namespace {

constexpr int kMaxQubits = 24;  // 2^24 amplitudes; well past anything we run

void check_qubit(const QubitState& state, int qubit, const char* what) {
  if (qubit < 0 || qubit >= state.n_qubits) {
    throw std::invalid_argument(std::string(what) + ": qubit index out of range");
  }
}

std::size_t qubit_mask(const QubitState& state, int qubit) {
  return std::size_t{1} << (state.n_qubits - 1 - qubit);
}

// Applies [[m00, m01], [m10, m11]] to the given qubit.
void apply_single_qubit(QubitState& state, int qubit, Complex m00, Complex m01,
                        Complex m10, Complex m11) {
  const std::size_t mask = qubit_mask(state, qubit);
  const std::size_t dim = state.dim();
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & mask) continue;
    const Complex a0 = state.amplitudes[i];
    const Complex a1 = state.amplitudes[i | mask];
    state.amplitudes[i] = m00 * a0 + m01 * a1;
    state.amplitudes[i | mask] = m10 * a0 + m11 * a1;
  }
}

}  // namespace

QubitState::QubitState(int n) : n_qubits(n) {
  if (n < 1) throw std::invalid_argument("QubitState: need at least one qubit");
  if (n > kMaxQubits) throw std::invalid_argument("QubitState: too many qubits");
  amplitudes.assign(std::size_t{1} << n, Complex{0.0, 0.0});
  amplitudes[0] = Complex{1.0, 0.0};
}

double QubitState::norm_sq() const {
  double acc = 0.0;
  for (const Complex& a : amplitudes) acc += std::norm(a);
  return acc;
}

void apply_rx(QubitState& state, int qubit, double angle) {
  check_qubit(state, qubit, "apply_rx");
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  apply_single_qubit(state, qubit, {c, 0.0}, {0.0, -s}, {0.0, -s}, {c, 0.0});
}

void apply_ry(QubitState& state, int qubit, double angle) {
  check_qubit(state, qubit, "apply_ry");
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  apply_single_qubit(state, qubit, {c, 0.0}, {-s, 0.0}, {s, 0.0}, {c, 0.0});
}

void apply_rz(QubitState& state, int qubit, double angle) {
  check_qubit(state, qubit, "apply_rz");
  const Complex lo{std::cos(angle / 2.0), -std::sin(angle / 2.0)};
  const Complex hi{std::cos(angle / 2.0), std::sin(angle / 2.0)};
  const std::size_t mask = qubit_mask(state, qubit);
  for (std::size_t i = 0; i < state.dim(); ++i) {
    state.amplitudes[i] *= (i & mask) ? hi : lo;
  }
}

void apply_cnot(QubitState& state, int control, int target) {
  check_qubit(state, control, "apply_cnot");
  check_qubit(state, target, "apply_cnot");
  if (control == target) {
    throw std::invalid_argument("apply_cnot: control and target must differ");
  }
  const std::size_t cmask = qubit_mask(state, control);
  const std::size_t tmask = qubit_mask(state, target);
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if ((i & cmask) && !(i & tmask)) {
      std::swap(state.amplitudes[i], state.amplitudes[i | tmask]);
    }
  }
}

QubitState prepare_latent_state(std::span<const double> z) {
  if (z.empty()) throw std::invalid_argument("prepare_latent_state: z is empty");
  for (double v : z) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("prepare_latent_state: z has a non-finite entry");
    }
  }
  QubitState state(static_cast<int>(z.size()));
  for (int q = 0; q < state.n_qubits; ++q) apply_rx(state, q, z[q]);
  return state;
}

std::vector<double> expect_z_analytic(const QubitState& state) {
  std::vector<double> acc(state.n_qubits, 0.0);
  for (std::size_t x = 0; x < state.dim(); ++x) {
    const double p = std::norm(state.amplitudes[x]);
    if (p == 0.0) continue;
    for (int q = 0; q < state.n_qubits; ++q) {
      acc[q] += (x & qubit_mask(state, q)) ? -p : p;
    }
  }
  return acc;
}

ShotSample sample_bitstrings(const QubitState& state, int sample_size, RngStream& rng) {
  if (sample_size < 1) {
    throw std::invalid_argument("sample_bitstrings: sample size must be positive");
  }
  std::vector<double> cumulative(state.dim());
  double total = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    total += std::norm(state.amplitudes[i]);
    cumulative[i] = total;
  }
  ShotSample sample;
  sample.n_qubits = state.n_qubits;
  sample.bitstrings.reserve(static_cast<std::size_t>(sample_size));
  for (int s = 0; s < sample_size; ++s) {
    const double u = rng.uniform() * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t idx =
        std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                              state.dim() - 1);
    sample.bitstrings.push_back(idx);
  }
  return sample;
}

std::vector<double> expect_z_from_sample(const ShotSample& sample) {
  if (sample.bitstrings.empty()) {
    throw std::invalid_argument("expect_z_from_sample: empty sample");
  }
  std::vector<double> acc(sample.n_qubits, 0.0);
  for (std::uint64_t bits : sample.bitstrings) {
    for (int q = 0; q < sample.n_qubits; ++q) {
      const std::uint64_t mask = std::uint64_t{1} << (sample.n_qubits - 1 - q);
      acc[q] += (bits & mask) ? -1.0 : 1.0;
    }
  }
  const double inv = 1.0 / static_cast<double>(sample.bitstrings.size());
  for (double& v : acc) v *= inv;
  return acc;
}

}  // namespace qanogan::qsim
