#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qanogan/rng.hpp"

namespace qanogan::nn {

enum class Activation : std::uint8_t { Identity = 0, LeakyRelu = 1, Sigmoid = 2 };

// Slope of the leaky rectifier's negative half.
inline constexpr double kLeakyReluSlope = 0.2;

struct DenseLayer {
  int in_dim = 0;
  int out_dim = 0;
  std::vector<double> weights;  // row-major, out_dim x in_dim
  std::vector<double> bias;     // out_dim
  Activation activation = Activation::Identity;
};

// A plain fully connected net. Parameters are exposed as one flat vector
// (per layer: weights row-major, then bias) so optimizer state can be kept
// in a single array.
class DenseNetwork {
 public:
  DenseNetwork() = default;
  explicit DenseNetwork(std::vector<DenseLayer> layers);

  const std::vector<DenseLayer>& layers() const { return layers_; }
  bool empty() const { return layers_.empty(); }
  int input_dim() const;
  int output_dim() const;
  std::size_t param_count() const;

  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> flat);

  // True when any layer uses an activation with non-constant slope.
  bool has_curved_activation() const;

 private:
  std::vector<DenseLayer> layers_;
};

// Intermediate values of one forward pass, consumed by backward().
struct ForwardCache {
  std::vector<std::vector<double>> inputs;   // input to each layer
  std::vector<std::vector<double>> preacts;  // affine output before activation
};

std::vector<double> forward(const DenseNetwork& net, std::span<const double> x,
                            ForwardCache* cache = nullptr);

struct BackwardResult {
  std::vector<double> param_grads;          // flat, parameters() layout
  std::vector<double> input_grad;           // dL/dx
  std::vector<std::vector<double>> deltas;  // dL/d(preact) per layer
};

// Exact reverse-mode gradients for the loss whose gradient with respect to
// the network output is `upstream`. The cache must come from a forward pass
// of this network on the same input; a mismatched cache is rejected.
BackwardResult backward(const DenseNetwork& net, const ForwardCache& cache,
                        std::span<const double> upstream);

// Forward pass of the locally linearized network: biases dropped and each
// activation replaced by its slope at the cached pre-activations. Returns
// c_0 = u and c_l after every layer. Only meaningful for piecewise-linear
// activations; a network with a sigmoid layer is rejected.
std::vector<std::vector<double>> tangent_forward(const DenseNetwork& net,
                                                 const ForwardCache& cache,
                                                 std::span<const double> u);

// Weights uniform in +-sqrt(6 / (in + out)), row-major.
std::vector<double> glorot_uniform(int out_dim, int in_dim, RngStream& rng);

// Glorot weights, zero biases. widths are the layer output sizes.
DenseNetwork make_dense_network(int input_dim, const std::vector<int>& widths,
                                const std::vector<Activation>& activations, RngStream& rng);

// Versioned little-endian binary format.
void save_network(const DenseNetwork& net, std::ostream& out);
DenseNetwork load_network(std::istream& in);
void save_network_file(const DenseNetwork& net, const std::string& path);
DenseNetwork load_network_file(const std::string& path);

}  // namespace qanogan::nn
