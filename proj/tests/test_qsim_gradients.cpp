#include "qanogan/qsim/gradients.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace qanogan;
using namespace qanogan::qsim;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Single trainable rotation on one qubit, built by hand so the axis is not
// left to the basis draw.
std::pair<AnsatzLayout, BasisAssignment> single_rotation(RotationAxis axis) {
  AnsatzLayout layout;
  layout.kind = CircuitKind::C4;
  layout.n_qubits = 1;
  layout.depth = 1;
  GateOp g;
  g.kind = axis == RotationAxis::X   ? GateOp::Kind::RX
           : axis == RotationAxis::Y ? GateOp::Kind::RY
                                     : GateOp::Kind::RZ;
  g.target = 0;
  g.param_slot = 0;
  layout.gates.push_back(g);
  layout.layer_offsets = {0, 1};
  layout.n_params = 1;
  BasisAssignment bases;
  bases.bases = {axis};
  return {layout, bases};
}

}  // namespace

TEST_CASE("shift rule is exact for a lone X rotation") {
  auto [layout, bases] = single_rotation(RotationAxis::X);
  const std::vector<double> z{0.37};
  const std::vector<double> theta{1.21};
  // <Z> = cos(z + theta); d/dtheta = -sin(z + theta).
  const Jacobian jac = grad_theta_param_shift(layout, bases, theta, z);
  REQUIRE(jac.rows == 1);
  REQUIRE(jac.cols == 1);
  CHECK(jac(0, 0) == doctest::Approx(-std::sin(z[0] + theta[0])).epsilon(1e-12));
}

TEST_CASE("shift rule is exact for a lone Z rotation") {
  auto [layout, bases] = single_rotation(RotationAxis::Z);
  // R_z commutes with Z, so the expectation cannot depend on theta.
  const Jacobian jac =
      grad_theta_param_shift(layout, bases, std::vector<double>{0.8}, std::vector<double>{0.5});
  CHECK(std::abs(jac(0, 0)) < 1e-14);
}

TEST_CASE("forward differences track the shift rule on a full ansatz") {
  auto [layout, bases] = build_ansatz(CircuitKind::C1, 3, 2, 99);
  const std::vector<double> theta = random_init(layout, 99);
  const std::vector<double> z{0.3, -0.9, 1.7};

  const Jacobian exact = grad_theta_param_shift(layout, bases, theta, z);
  const Jacobian fd = grad_theta_forward_diff(layout, bases, theta, z, 1e-4);
  REQUIRE(fd.rows == 3);
  REQUIRE(fd.cols == layout.n_params);
  for (int r = 0; r < fd.rows; ++r) {
    for (int c = 0; c < fd.cols; ++c) {
      // One-sided differences carry an O(step) bias.
      CHECK(std::abs(fd(r, c) - exact(r, c)) < 5e-4);
    }
  }

  // Shrinking the step shrinks the bias.
  const Jacobian fd_fine = grad_theta_forward_diff(layout, bases, theta, z, 1e-7);
  double coarse_err = 0.0, fine_err = 0.0;
  for (std::size_t i = 0; i < fd.values.size(); ++i) {
    coarse_err += std::abs(fd.values[i] - exact.values[i]);
    fine_err += std::abs(fd_fine.values[i] - exact.values[i]);
  }
  CHECK(fine_err < coarse_err);

  CHECK_THROWS_AS(grad_theta_forward_diff(layout, bases, theta, z, 0.0), std::invalid_argument);
}

TEST_CASE("shift rule matches a tight central difference on every family") {
  for (CircuitKind kind : {CircuitKind::C1, CircuitKind::C2, CircuitKind::C3, CircuitKind::C4}) {
    auto [layout, bases] = build_ansatz(kind, 3, 2, 7);
    const std::vector<double> theta = random_init(layout, 7);
    const std::vector<double> z{-0.4, 1.3, 0.6};

    const Jacobian shift = grad_theta_param_shift(layout, bases, theta, z);
    std::vector<double> probe(theta);
    for (int m = 0; m < layout.n_params; ++m) {
      const double h = 1e-6;
      probe[m] = theta[m] + h;
      const std::vector<double> plus = circuit_expectations(layout, bases, probe, z);
      probe[m] = theta[m] - h;
      const std::vector<double> minus = circuit_expectations(layout, bases, probe, z);
      probe[m] = theta[m];
      for (int r = 0; r < 3; ++r) {
        const double central = (plus[r] - minus[r]) / (2.0 * h);
        CHECK(std::abs(shift(r, m) - central) < 1e-8);
      }
    }
  }
}

TEST_CASE("latent gradients reduce to -sin on a bare preparation") {
  AnsatzLayout layout;
  layout.kind = CircuitKind::C4;
  layout.n_qubits = 2;
  layout.depth = 1;
  layout.layer_offsets = {0, 0};
  layout.n_params = 0;
  BasisAssignment bases;

  const std::vector<double> z{0.9, -1.8};
  const Jacobian jac = grad_latent_param_shift(layout, bases, {}, z);
  REQUIRE(jac.rows == 2);
  REQUIRE(jac.cols == 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double want = (i == j) ? -std::sin(z[i]) : 0.0;
      CHECK(std::abs(jac(i, j) - want) < 1e-12);
    }
  }

  const Jacobian fd = grad_latent_forward_diff(layout, bases, {}, z, 1e-5);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(fd(i, j) - jac(i, j)) < 1e-4);
    }
  }
}

TEST_CASE("latent gradients flow through entanglers") {
  auto [layout, bases] = build_ansatz(CircuitKind::C1, 3, 2, 13);
  const std::vector<double> theta = random_init(layout, 13);
  const std::vector<double> z{0.25, -0.75, 1.5};

  const Jacobian shift = grad_latent_param_shift(layout, bases, theta, z);
  std::vector<double> probe(z);
  for (int m = 0; m < 3; ++m) {
    const double h = 1e-6;
    probe[m] = z[m] + h;
    const std::vector<double> plus = circuit_expectations(layout, bases, theta, probe);
    probe[m] = z[m] - h;
    const std::vector<double> minus = circuit_expectations(layout, bases, theta, probe);
    probe[m] = z[m];
    for (int r = 0; r < 3; ++r) {
      CHECK(std::abs(shift(r, m) - (plus[r] - minus[r]) / (2.0 * h)) < 1e-8);
    }
  }
}

TEST_CASE("sampled shift rule needs an rng and converges with shots") {
  auto [layout, bases] = build_ansatz(CircuitKind::C2, 2, 1, 5);
  const std::vector<double> theta = random_init(layout, 5);
  const std::vector<double> z{0.4, 1.0};

  CHECK_THROWS_AS(grad_theta_param_shift(layout, bases, theta, z, 100, nullptr),
                  std::invalid_argument);

  const Jacobian exact = grad_theta_param_shift(layout, bases, theta, z);

  RngStream rng1 = derive_stream(21, "shots");
  RngStream rng2 = derive_stream(21, "shots");
  const Jacobian a = grad_theta_param_shift(layout, bases, theta, z, 20000, &rng1);
  const Jacobian b = grad_theta_param_shift(layout, bases, theta, z, 20000, &rng2);
  CHECK(a.values == b.values);  // same stream, same estimate

  for (std::size_t i = 0; i < a.values.size(); ++i) {
    CHECK(std::abs(a.values[i] - exact.values[i]) < 0.05);
  }
}

TEST_CASE("identity-block start still has live gradients") {
  // The circuit is the identity at the initial point, but the parameters are
  // not at a stationary point of the expectations in general.
  auto [layout, bases] = build_ansatz(CircuitKind::C1, 3, 2, 29);
  const IdentityBlockInit init = identity_block_init(layout, bases, 29);
  const std::vector<double> z{0.8, -0.3, 1.9};
  const Jacobian jac = grad_theta_param_shift(init.layout, init.bases, init.theta, z);
  double total = 0.0;
  for (double v : jac.values) total += std::abs(v);
  CHECK(total > 1e-3);
}
