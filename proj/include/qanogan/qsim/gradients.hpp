#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qanogan/qsim/ansatz.hpp"

namespace qanogan::qsim {

// Row-major matrix of partial derivatives, one row per measured qubit.
struct Jacobian {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  Jacobian() = default;
  Jacobian(int r, int c) : rows(r), cols(c), values(static_cast<std::size_t>(r) * c, 0.0) {}

  double operator()(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
  double& operator()(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
};

// d<Z_i>/d theta_m via one-sided differences of the exact expectations:
// (g(theta + step e_m) - g(theta)) / step.
Jacobian grad_theta_forward_diff(const AnsatzLayout& layout, const BasisAssignment& bases,
                                 std::span<const double> theta, std::span<const double> z,
                                 double step);

// d<Z_i>/d theta_m via the two-point shift rule,
// [g(theta + (pi/2) e_m) - g(theta - (pi/2) e_m)] / 2, which is exact for
// single-axis Pauli rotations. When shots is set, every shifted circuit is
// estimated from a fresh sample drawn through rng.
Jacobian grad_theta_param_shift(const AnsatzLayout& layout, const BasisAssignment& bases,
                                std::span<const double> theta, std::span<const double> z,
                                std::optional<int> shots = std::nullopt,
                                RngStream* rng = nullptr);

// The same two rules applied to the state-preparation angles z.
Jacobian grad_latent_forward_diff(const AnsatzLayout& layout, const BasisAssignment& bases,
                                  std::span<const double> theta, std::span<const double> z,
                                  double step);

Jacobian grad_latent_param_shift(const AnsatzLayout& layout, const BasisAssignment& bases,
                                 std::span<const double> theta, std::span<const double> z,
                                 std::optional<int> shots = std::nullopt,
                                 RngStream* rng = nullptr);

}  // namespace qanogan::qsim
