#include "passmec/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace passmec {

namespace {

constexpr char kMagic[8] = {'P', 'M', 'E', 'C', 'K', 'P', 'T', '\0'};

void write_u32(std::ostream& os, std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void write_i32(std::ostream& os, std::int32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void write_f64(std::ostream& os, double v) { os.write(reinterpret_cast<const char*>(&v), 8); }

void write_string(std::ostream& os, const std::string& s) {
  write_u32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void write_ints(std::ostream& os, const std::vector<int>& v) {
  write_u32(os, static_cast<std::uint32_t>(v.size()));
  for (int x : v) write_i32(os, x);
}

void write_doubles(std::ostream& os, const std::vector<double>& v) {
  write_u32(os, static_cast<std::uint32_t>(v.size()));
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * 8));
}

std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}
std::int32_t read_i32(std::istream& is) {
  std::int32_t v;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}
double read_f64(std::istream& is) {
  double v;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

std::string read_string(std::istream& is) {
  std::uint32_t n = read_u32(is);
  std::string s(n, '\0');
  is.read(s.data(), n);
  return s;
}

std::vector<int> read_ints(std::istream& is) {
  std::uint32_t n = read_u32(is);
  std::vector<int> v(n);
  for (auto& x : v) x = read_i32(is);
  return v;
}

std::vector<double> read_doubles(std::istream& is) {
  std::uint32_t n = read_u32(is);
  std::vector<double> v(n);
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n) * 8);
  return v;
}

}  // namespace

Checkpoint Checkpoint::from_agent(const PpoAgent& agent, const ActionLayout& layout,
                                  const std::string& variant, int observation_size,
                                  const PPOHyper& hyper, const DiscretizationSchedule& schedule) {
  Checkpoint ck;
  ck.layout_tag = layout.tag();
  ck.variant = variant;
  ck.observation_size = observation_size;
  ck.hyper = hyper;
  ck.schedule = schedule;
  ck.policy_sizes = agent.policy.mean_net().sizes();
  ck.policy_params.assign(agent.policy.mean_net().params().begin(),
                          agent.policy.mean_net().params().end());
  ck.log_std = agent.policy.log_std();
  ck.value_sizes = agent.value_net.sizes();
  ck.value_params.assign(agent.value_net.params().begin(), agent.value_net.params().end());
  return ck;
}

PpoAgent Checkpoint::to_agent() const {
  PpoAgent agent;
  std::vector<int> hidden(policy_sizes.begin() + 1, policy_sizes.end() - 1);
  Rng dummy(0);
  agent.policy = GaussianPolicy(policy_sizes.front(), policy_sizes.back(), hidden, dummy);
  if (agent.policy.mean_net().param_count() != static_cast<int>(policy_params.size()))
    throw std::runtime_error("checkpoint: policy parameter count mismatch");
  std::copy(policy_params.begin(), policy_params.end(), agent.policy.mean_net().params().begin());
  agent.policy.log_std() = log_std;

  agent.value_net = DenseNet(value_sizes, Activation::kRelu, Activation::kLinear);
  if (agent.value_net.param_count() != static_cast<int>(value_params.size()))
    throw std::runtime_error("checkpoint: value parameter count mismatch");
  std::copy(value_params.begin(), value_params.end(), agent.value_net.params().begin());
  agent.reset_optimizers(hyper);
  return agent;
}

void Checkpoint::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("checkpoint: cannot open for writing: " + path);
  os.write(kMagic, sizeof(kMagic));
  write_u32(os, kVersion);
  write_string(os, layout_tag);
  write_string(os, variant);
  write_i32(os, observation_size);

  write_f64(os, hyper.learning_rate);
  write_i32(os, hyper.lr_anneal ? 1 : 0);
  write_f64(os, hyper.gamma);
  write_f64(os, hyper.gae_lambda);
  write_f64(os, hyper.clip_epsilon);
  write_i32(os, hyper.update_epochs);
  write_i32(os, hyper.minibatch_size);
  write_i32(os, hyper.batch_size);
  write_f64(os, hyper.value_loss_weight);
  write_f64(os, hyper.entropy_weight);
  write_f64(os, hyper.max_grad_norm);
  write_ints(os, hyper.hidden_sizes);

  write_i32(os, schedule.lb_episodes);
  write_i32(os, schedule.current_episode);
  write_f64(os, schedule.varpi_min);
  write_f64(os, schedule.varpi_max);

  write_ints(os, policy_sizes);
  write_doubles(os, policy_params);
  write_doubles(os, log_std);
  write_ints(os, value_sizes);
  write_doubles(os, value_params);
  if (!os) throw std::runtime_error("checkpoint: write failed: " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);
  std::uint32_t version = read_u32(is);
  if (version != kVersion)
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version) +
                             " (expected " + std::to_string(kVersion) + ")");

  Checkpoint ck;
  ck.layout_tag = read_string(is);
  ck.variant = read_string(is);
  ck.observation_size = read_i32(is);

  ck.hyper.learning_rate = read_f64(is);
  ck.hyper.lr_anneal = read_i32(is) != 0;
  ck.hyper.gamma = read_f64(is);
  ck.hyper.gae_lambda = read_f64(is);
  ck.hyper.clip_epsilon = read_f64(is);
  ck.hyper.update_epochs = read_i32(is);
  ck.hyper.minibatch_size = read_i32(is);
  ck.hyper.batch_size = read_i32(is);
  ck.hyper.value_loss_weight = read_f64(is);
  ck.hyper.entropy_weight = read_f64(is);
  ck.hyper.max_grad_norm = read_f64(is);
  ck.hyper.hidden_sizes = read_ints(is);

  ck.schedule.lb_episodes = read_i32(is);
  ck.schedule.current_episode = read_i32(is);
  ck.schedule.varpi_min = read_f64(is);
  ck.schedule.varpi_max = read_f64(is);

  ck.policy_sizes = read_ints(is);
  ck.policy_params = read_doubles(is);
  ck.log_std = read_doubles(is);
  ck.value_sizes = read_ints(is);
  ck.value_params = read_doubles(is);
  if (!is) throw std::runtime_error("checkpoint: truncated file: " + path);
  return ck;
}

}  // namespace passmec
