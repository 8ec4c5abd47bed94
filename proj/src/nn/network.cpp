#include "qanogan/nn/network.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace qanogan::nn {

namespace {

double activate(Activation act, double v) {
  switch (act) {
    case Activation::Identity: return v;
    case Activation::LeakyRelu: return v >= 0.0 ? v : kLeakyReluSlope * v;
    case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-v));
  }
  throw std::invalid_argument("activate: bad activation tag");
}

// Slope as a function of the pre-activation. The rectifier kink at zero is
// assigned the positive-side slope.
double activate_slope(Activation act, double v) {
  switch (act) {
    case Activation::Identity: return 1.0;
    case Activation::LeakyRelu: return v >= 0.0 ? 1.0 : kLeakyReluSlope;
    case Activation::Sigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-v));
      return s * (1.0 - s);
    }
  }
  throw std::invalid_argument("activate_slope: bad activation tag");
}

void check_cache(const DenseNetwork& net, const ForwardCache& cache) {
  const auto& layers = net.layers();
  if (cache.inputs.size() != layers.size() || cache.preacts.size() != layers.size()) {
    throw std::logic_error("backward: cache does not match this network");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (static_cast<int>(cache.inputs[l].size()) != layers[l].in_dim ||
        static_cast<int>(cache.preacts[l].size()) != layers[l].out_dim) {
      throw std::logic_error("backward: cache does not match this network");
    }
  }
}

}  // namespace

DenseNetwork::DenseNetwork(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    if (layer.in_dim < 1 || layer.out_dim < 1) {
      throw std::invalid_argument("DenseNetwork: layer dimensions must be positive");
    }
    if (layer.weights.size() != static_cast<std::size_t>(layer.in_dim) * layer.out_dim ||
        layer.bias.size() != static_cast<std::size_t>(layer.out_dim)) {
      throw std::invalid_argument("DenseNetwork: weight or bias size mismatch");
    }
    if (l > 0 && layers_[l - 1].out_dim != layer.in_dim) {
      throw std::invalid_argument("DenseNetwork: consecutive layer dimensions disagree");
    }
  }
}

int DenseNetwork::input_dim() const {
  return layers_.empty() ? 0 : layers_.front().in_dim;
}

int DenseNetwork::output_dim() const {
  return layers_.empty() ? 0 : layers_.back().out_dim;
}

std::size_t DenseNetwork::param_count() const {
  std::size_t n = 0;
  for (const DenseLayer& layer : layers_) n += layer.weights.size() + layer.bias.size();
  return n;
}

std::vector<double> DenseNetwork::parameters() const {
  std::vector<double> flat;
  flat.reserve(param_count());
  for (const DenseLayer& layer : layers_) {
    flat.insert(flat.end(), layer.weights.begin(), layer.weights.end());
    flat.insert(flat.end(), layer.bias.begin(), layer.bias.end());
  }
  return flat;
}

void DenseNetwork::set_parameters(std::span<const double> flat) {
  if (flat.size() != param_count()) {
    throw std::invalid_argument("set_parameters: flat vector has wrong size");
  }
  std::size_t off = 0;
  for (DenseLayer& layer : layers_) {
    std::copy(flat.begin() + off, flat.begin() + off + layer.weights.size(),
              layer.weights.begin());
    off += layer.weights.size();
    std::copy(flat.begin() + off, flat.begin() + off + layer.bias.size(), layer.bias.begin());
    off += layer.bias.size();
  }
}

bool DenseNetwork::has_curved_activation() const {
  for (const DenseLayer& layer : layers_) {
    if (layer.activation == Activation::Sigmoid) return true;
  }
  return false;
}

std::vector<double> forward(const DenseNetwork& net, std::span<const double> x,
                            ForwardCache* cache) {
  if (net.empty()) throw std::invalid_argument("forward: empty network");
  if (static_cast<int>(x.size()) != net.input_dim()) {
    throw std::invalid_argument("forward: input size does not match the network");
  }
  if (cache) {
    cache->inputs.clear();
    cache->preacts.clear();
  }
  std::vector<double> cur(x.begin(), x.end());
  for (const DenseLayer& layer : net.layers()) {
    if (cache) cache->inputs.push_back(cur);
    std::vector<double> pre(static_cast<std::size_t>(layer.out_dim), 0.0);
    for (int r = 0; r < layer.out_dim; ++r) {
      double acc = layer.bias[r];
      const double* wrow = layer.weights.data() + static_cast<std::size_t>(r) * layer.in_dim;
      for (int c = 0; c < layer.in_dim; ++c) acc += wrow[c] * cur[c];
      pre[r] = acc;
    }
    if (cache) cache->preacts.push_back(pre);
    cur.resize(pre.size());
    for (std::size_t i = 0; i < pre.size(); ++i) cur[i] = activate(layer.activation, pre[i]);
  }
  return cur;
}

BackwardResult backward(const DenseNetwork& net, const ForwardCache& cache,
                        std::span<const double> upstream) {
  check_cache(net, cache);
  const auto& layers = net.layers();
  if (static_cast<int>(upstream.size()) != net.output_dim()) {
    throw std::invalid_argument("backward: upstream size does not match the output");
  }

  BackwardResult result;
  result.param_grads.assign(net.param_count(), 0.0);
  result.deltas.resize(layers.size());

  // Flat offsets of each layer's weight block.
  std::vector<std::size_t> offsets(layers.size());
  std::size_t off = 0;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    offsets[l] = off;
    off += layers[l].weights.size() + layers[l].bias.size();
  }

  std::vector<double> grad_out(upstream.begin(), upstream.end());
  for (std::size_t li = layers.size(); li-- > 0;) {
    const DenseLayer& layer = layers[li];
    std::vector<double>& delta = result.deltas[li];
    delta.assign(static_cast<std::size_t>(layer.out_dim), 0.0);
    for (int r = 0; r < layer.out_dim; ++r) {
      delta[r] = grad_out[r] * activate_slope(layer.activation, cache.preacts[li][r]);
    }

    double* wgrad = result.param_grads.data() + offsets[li];
    double* bgrad = wgrad + layer.weights.size();
    const std::vector<double>& input = cache.inputs[li];
    for (int r = 0; r < layer.out_dim; ++r) {
      const double d = delta[r];
      double* row = wgrad + static_cast<std::size_t>(r) * layer.in_dim;
      for (int c = 0; c < layer.in_dim; ++c) row[c] += d * input[c];
      bgrad[r] += d;
    }

    std::vector<double> grad_in(static_cast<std::size_t>(layer.in_dim), 0.0);
    for (int r = 0; r < layer.out_dim; ++r) {
      const double d = delta[r];
      const double* wrow = layer.weights.data() + static_cast<std::size_t>(r) * layer.in_dim;
      for (int c = 0; c < layer.in_dim; ++c) grad_in[c] += d * wrow[c];
    }
    grad_out = std::move(grad_in);
  }
  result.input_grad = std::move(grad_out);
  return result;
}

std::vector<std::vector<double>> tangent_forward(const DenseNetwork& net,
                                                 const ForwardCache& cache,
                                                 std::span<const double> u) {
  check_cache(net, cache);
  if (net.has_curved_activation()) {
    throw std::logic_error("tangent_forward: network has a curved activation");
  }
  if (static_cast<int>(u.size()) != net.input_dim()) {
    throw std::invalid_argument("tangent_forward: input size does not match the network");
  }
  std::vector<std::vector<double>> chain;
  chain.reserve(net.layers().size() + 1);
  chain.emplace_back(u.begin(), u.end());
  for (std::size_t li = 0; li < net.layers().size(); ++li) {
    const DenseLayer& layer = net.layers()[li];
    const std::vector<double>& cur = chain.back();
    std::vector<double> next(static_cast<std::size_t>(layer.out_dim), 0.0);
    for (int r = 0; r < layer.out_dim; ++r) {
      double acc = 0.0;
      const double* wrow = layer.weights.data() + static_cast<std::size_t>(r) * layer.in_dim;
      for (int c = 0; c < layer.in_dim; ++c) acc += wrow[c] * cur[c];
      next[r] = acc * activate_slope(layer.activation, cache.preacts[li][r]);
    }
    chain.push_back(std::move(next));
  }
  return chain;
}

std::vector<double> glorot_uniform(int out_dim, int in_dim, RngStream& rng) {
  if (out_dim < 1 || in_dim < 1) {
    throw std::invalid_argument("glorot_uniform: dimensions must be positive");
  }
  const double bound = std::sqrt(6.0 / (in_dim + out_dim));
  std::vector<double> w(static_cast<std::size_t>(out_dim) * in_dim);
  for (double& v : w) v = rng.uniform(-bound, bound);
  return w;
}

DenseNetwork make_dense_network(int input_dim, const std::vector<int>& widths,
                                const std::vector<Activation>& activations, RngStream& rng) {
  if (widths.empty()) throw std::invalid_argument("make_dense_network: no layers");
  if (widths.size() != activations.size()) {
    throw std::invalid_argument("make_dense_network: one activation per layer required");
  }
  std::vector<DenseLayer> layers;
  int in_dim = input_dim;
  for (std::size_t l = 0; l < widths.size(); ++l) {
    DenseLayer layer;
    layer.in_dim = in_dim;
    layer.out_dim = widths[l];
    layer.weights = glorot_uniform(layer.out_dim, layer.in_dim, rng);
    layer.bias.assign(static_cast<std::size_t>(layer.out_dim), 0.0);
    layer.activation = activations[l];
    layers.push_back(std::move(layer));
    in_dim = widths[l];
  }
  return DenseNetwork(std::move(layers));
}

namespace {

constexpr char kMagic[4] = {'Q', 'N', 'E', 'T'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void put_f64(std::ostream& out, double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(b, 8);
}

std::uint32_t get_u32(std::istream& in) {
  char b[4];
  in.read(b, 4);
  if (!in) throw std::runtime_error("load_network: truncated stream");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[i])) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  char b[8];
  in.read(b, 8);
  if (!in) throw std::runtime_error("load_network: truncated stream");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(b[i])) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

void save_network(const DenseNetwork& net, std::ostream& out) {
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  const auto& layers = net.layers();
  put_u32(out, static_cast<std::uint32_t>(layers.size()));
  put_u32(out, static_cast<std::uint32_t>(net.input_dim()));
  for (const DenseLayer& layer : layers) put_u32(out, static_cast<std::uint32_t>(layer.out_dim));
  for (const DenseLayer& layer : layers) {
    char tag = static_cast<char>(layer.activation);
    out.write(&tag, 1);
  }
  for (const DenseLayer& layer : layers) {
    for (double v : layer.weights) put_f64(out, v);
    for (double v : layer.bias) put_f64(out, v);
  }
  if (!out) throw std::runtime_error("save_network: write failed");
}

DenseNetwork load_network(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("load_network: bad magic");
  }
  const std::uint32_t version = get_u32(in);
  if (version != kVersion) throw std::runtime_error("load_network: unsupported version");
  const std::uint32_t n_layers = get_u32(in);
  if (n_layers == 0 || n_layers > 1024) throw std::runtime_error("load_network: bad layer count");
  std::vector<std::uint32_t> dims(n_layers + 1);
  dims[0] = get_u32(in);
  for (std::uint32_t l = 0; l < n_layers; ++l) dims[l + 1] = get_u32(in);
  std::vector<Activation> acts(n_layers);
  for (std::uint32_t l = 0; l < n_layers; ++l) {
    char tag;
    in.read(&tag, 1);
    if (!in) throw std::runtime_error("load_network: truncated stream");
    if (tag < 0 || tag > 2) throw std::runtime_error("load_network: bad activation tag");
    acts[l] = static_cast<Activation>(tag);
  }
  std::vector<DenseLayer> layers;
  for (std::uint32_t l = 0; l < n_layers; ++l) {
    DenseLayer layer;
    layer.in_dim = static_cast<int>(dims[l]);
    layer.out_dim = static_cast<int>(dims[l + 1]);
    layer.activation = acts[l];
    layer.weights.resize(static_cast<std::size_t>(layer.in_dim) * layer.out_dim);
    for (double& v : layer.weights) v = get_f64(in);
    layer.bias.resize(static_cast<std::size_t>(layer.out_dim));
    for (double& v : layer.bias) v = get_f64(in);
    layers.push_back(std::move(layer));
  }
  return DenseNetwork(std::move(layers));
}

void save_network_file(const DenseNetwork& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_network_file: cannot open " + path);
  save_network(net, out);
}

DenseNetwork load_network_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_network_file: cannot open " + path);
  return load_network(in);
}

}  // namespace qanogan::nn
