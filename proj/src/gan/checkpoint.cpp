#include "qanogan/gan/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace qanogan::gan {

namespace {

constexpr char kMagic[4] = {'Q', 'A', 'G', 'M'};
constexpr std::uint32_t kVersion = 1;

void put_u8(std::ostream& out, std::uint8_t v) {
  out.write(reinterpret_cast<const char*>(&v), 1);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

void put_i32(std::ostream& out, std::int32_t v) { put_u32(out, static_cast<std::uint32_t>(v)); }

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint8_t get_u8(std::istream& in) {
  char b;
  in.read(&b, 1);
  if (!in) throw std::runtime_error("load_model: truncated stream");
  return static_cast<std::uint8_t>(b);
}

std::uint32_t get_u32(std::istream& in) {
  char b[4];
  in.read(b, 4);
  if (!in) throw std::runtime_error("load_model: truncated stream");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[i])) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  char b[8];
  in.read(b, 8);
  if (!in) throw std::runtime_error("load_model: truncated stream");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(b[i])) << (8 * i);
  return v;
}

std::int32_t get_i32(std::istream& in) { return static_cast<std::int32_t>(get_u32(in)); }

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

void put_gate(std::ostream& out, const qsim::GateOp& g) {
  put_u8(out, static_cast<std::uint8_t>(g.kind));
  put_i32(out, g.target);
  put_i32(out, g.control ? *g.control : -1);
  put_i32(out, g.param_slot ? *g.param_slot : -1);
  put_u8(out, g.fixed_angle ? 1 : 0);
  put_f64(out, g.fixed_angle ? *g.fixed_angle : 0.0);
}

qsim::GateOp get_gate(std::istream& in) {
  qsim::GateOp g;
  const std::uint8_t kind = get_u8(in);
  if (kind > 3) throw std::runtime_error("load_model: bad gate kind");
  g.kind = static_cast<qsim::GateOp::Kind>(kind);
  g.target = get_i32(in);
  const std::int32_t control = get_i32(in);
  if (control >= 0) g.control = control;
  const std::int32_t slot = get_i32(in);
  if (slot >= 0) g.param_slot = slot;
  const bool has_fixed = get_u8(in) != 0;
  const double fixed = get_f64(in);
  if (has_fixed) g.fixed_angle = fixed;
  return g;
}

}  // namespace

void save_model(const GanModel& model, std::ostream& out) {
  out.write(kMagic, 4);
  put_u32(out, kVersion);

  const GeneratorConfig& c = model.config;
  put_u8(out, static_cast<std::uint8_t>(c.variant));
  put_u8(out, c.use_upscaling ? 1 : 0);
  put_u8(out, static_cast<std::uint8_t>(c.circuit));
  put_u8(out, static_cast<std::uint8_t>(c.init));
  put_u32(out, static_cast<std::uint32_t>(c.latent_dim));
  put_u32(out, static_cast<std::uint32_t>(c.data_dim));
  put_u32(out, static_cast<std::uint32_t>(c.depth));
  put_u32(out, static_cast<std::uint32_t>(c.body_layers));

  if (c.variant == GeneratorVariant::Quantum) {
    const qsim::AnsatzLayout& layout = model.layout;
    put_u32(out, static_cast<std::uint32_t>(layout.n_params));
    for (qsim::RotationAxis axis : model.bases.bases) {
      put_u8(out, static_cast<std::uint8_t>(axis));
    }
    for (double t : model.theta) put_f64(out, t);
    put_u32(out, static_cast<std::uint32_t>(layout.gates.size()));
    for (const qsim::GateOp& g : layout.gates) put_gate(out, g);
    put_u32(out, static_cast<std::uint32_t>(layout.layer_offsets.size()));
    for (std::size_t off : layout.layer_offsets) put_u64(out, off);
  } else if (c.body_layers > 0) {
    nn::save_network(model.body, out);
  }

  if (c.use_upscaling) nn::save_network(model.upscale, out);
  nn::save_network(model.critic, out);

  put_u64(out, static_cast<std::uint64_t>(model.critic_steps));
  put_u64(out, static_cast<std::uint64_t>(model.generator_steps));
  if (!out) throw std::runtime_error("save_model: write failed");
}

GanModel load_model(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("load_model: bad magic");
  }
  if (get_u32(in) != kVersion) throw std::runtime_error("load_model: unsupported version");

  GanModel model;
  GeneratorConfig& c = model.config;
  const std::uint8_t variant = get_u8(in);
  if (variant > 1) throw std::runtime_error("load_model: bad generator variant");
  c.variant = static_cast<GeneratorVariant>(variant);
  c.use_upscaling = get_u8(in) != 0;
  const std::uint8_t circuit = get_u8(in);
  if (circuit < 1 || circuit > 4) throw std::runtime_error("load_model: bad circuit kind");
  c.circuit = static_cast<qsim::CircuitKind>(circuit);
  const std::uint8_t init = get_u8(in);
  if (init > 1) throw std::runtime_error("load_model: bad init strategy");
  c.init = static_cast<InitStrategy>(init);
  c.latent_dim = static_cast<int>(get_u32(in));
  c.data_dim = static_cast<int>(get_u32(in));
  c.depth = static_cast<int>(get_u32(in));
  c.body_layers = static_cast<int>(get_u32(in));

  if (c.variant == GeneratorVariant::Quantum) {
    qsim::AnsatzLayout& layout = model.layout;
    layout.kind = c.circuit;
    layout.n_qubits = c.latent_dim;
    layout.depth = c.depth;
    layout.n_params = static_cast<int>(get_u32(in));
    model.bases.bases.resize(static_cast<std::size_t>(layout.n_params));
    for (qsim::RotationAxis& axis : model.bases.bases) {
      const std::uint8_t a = get_u8(in);
      if (a > 2) throw std::runtime_error("load_model: bad rotation axis");
      axis = static_cast<qsim::RotationAxis>(a);
    }
    model.theta.resize(static_cast<std::size_t>(layout.n_params));
    for (double& t : model.theta) t = get_f64(in);
    const std::uint32_t n_gates = get_u32(in);
    layout.gates.reserve(n_gates);
    for (std::uint32_t i = 0; i < n_gates; ++i) layout.gates.push_back(get_gate(in));
    const std::uint32_t n_offsets = get_u32(in);
    layout.layer_offsets.resize(n_offsets);
    for (std::size_t& off : layout.layer_offsets) off = static_cast<std::size_t>(get_u64(in));
  } else if (c.body_layers > 0) {
    model.body = nn::load_network(in);
  }

  if (c.use_upscaling) model.upscale = nn::load_network(in);
  model.critic = nn::load_network(in);

  model.critic_steps = static_cast<long>(get_u64(in));
  model.generator_steps = static_cast<long>(get_u64(in));

  model.adam_theta = nn::make_adam(model.theta.size());
  model.adam_body = nn::make_adam(model.body.param_count());
  model.adam_upscale = nn::make_adam(model.upscale.param_count());
  model.adam_critic = nn::make_adam(model.critic.param_count());
  return model;
}

void save_model_file(const GanModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_model_file: cannot open " + path);
  save_model(model, out);
}

GanModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_model_file: cannot open " + path);
  return load_model(in);
}

}  // namespace qanogan::gan
