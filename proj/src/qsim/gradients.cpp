#include "qanogan/qsim/gradients.hpp"

#include <stdexcept>

namespace qanogan::qsim {

namespace {

constexpr double kShift = 1.5707963267948966192313216916397514;  // pi / 2

std::vector<double> evaluate(const AnsatzLayout& layout, const BasisAssignment& bases,
                             std::span<const double> theta, std::span<const double> z,
                             std::optional<int> shots, RngStream* rng) {
  if (shots) {
    if (rng == nullptr) {
      throw std::invalid_argument("shift-rule gradient: sampled mode needs an rng");
    }
    return circuit_expectations_sampled(layout, bases, theta, z, *shots, *rng);
  }
  return circuit_expectations(layout, bases, theta, z);
}

}  // namespace

Jacobian grad_theta_forward_diff(const AnsatzLayout& layout, const BasisAssignment& bases,
                                 std::span<const double> theta, std::span<const double> z,
                                 double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grad_theta_forward_diff: step must be positive");
  const std::vector<double> base = circuit_expectations(layout, bases, theta, z);
  Jacobian jac(layout.n_qubits, layout.n_params);
  std::vector<double> shifted(theta.begin(), theta.end());
  for (int m = 0; m < layout.n_params; ++m) {
    shifted[m] = theta[m] + step;
    const std::vector<double> plus = circuit_expectations(layout, bases, shifted, z);
    shifted[m] = theta[m];
    for (int r = 0; r < layout.n_qubits; ++r) jac(r, m) = (plus[r] - base[r]) / step;
  }
  return jac;
}

Jacobian grad_theta_param_shift(const AnsatzLayout& layout, const BasisAssignment& bases,
                                std::span<const double> theta, std::span<const double> z,
                                std::optional<int> shots, RngStream* rng) {
  Jacobian jac(layout.n_qubits, layout.n_params);
  std::vector<double> shifted(theta.begin(), theta.end());
  for (int m = 0; m < layout.n_params; ++m) {
    shifted[m] = theta[m] + kShift;
    const std::vector<double> plus = evaluate(layout, bases, shifted, z, shots, rng);
    shifted[m] = theta[m] - kShift;
    const std::vector<double> minus = evaluate(layout, bases, shifted, z, shots, rng);
    shifted[m] = theta[m];
    for (int r = 0; r < layout.n_qubits; ++r) jac(r, m) = 0.5 * (plus[r] - minus[r]);
  }
  return jac;
}

Jacobian grad_latent_forward_diff(const AnsatzLayout& layout, const BasisAssignment& bases,
                                  std::span<const double> theta, std::span<const double> z,
                                  double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grad_latent_forward_diff: step must be positive");
  const std::vector<double> base = circuit_expectations(layout, bases, theta, z);
  Jacobian jac(layout.n_qubits, layout.n_qubits);
  std::vector<double> shifted(z.begin(), z.end());
  for (int m = 0; m < layout.n_qubits; ++m) {
    shifted[m] = z[m] + step;
    const std::vector<double> plus = circuit_expectations(layout, bases, theta, shifted);
    shifted[m] = z[m];
    for (int r = 0; r < layout.n_qubits; ++r) jac(r, m) = (plus[r] - base[r]) / step;
  }
  return jac;
}

Jacobian grad_latent_param_shift(const AnsatzLayout& layout, const BasisAssignment& bases,
                                 std::span<const double> theta, std::span<const double> z,
                                 std::optional<int> shots, RngStream* rng) {
  Jacobian jac(layout.n_qubits, layout.n_qubits);
  std::vector<double> shifted(z.begin(), z.end());
  for (int m = 0; m < layout.n_qubits; ++m) {
    shifted[m] = z[m] + kShift;
    const std::vector<double> plus = evaluate(layout, bases, theta, shifted, shots, rng);
    shifted[m] = z[m] - kShift;
    const std::vector<double> minus = evaluate(layout, bases, theta, shifted, shots, rng);
    shifted[m] = z[m];
    for (int r = 0; r < layout.n_qubits; ++r) jac(r, m) = 0.5 * (plus[r] - minus[r]);
  }
  return jac;
}

}  // namespace qanogan::qsim
