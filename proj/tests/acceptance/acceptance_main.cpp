// Acceptance suite: one pass/fail line per criterion, nonzero exit status on
// any failure. Criteria 8-10 train real agents and take several minutes on
// two cores; everything else finishes in seconds.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "passmec/channel.hpp"
#include "passmec/checkpoint.hpp"
#include "passmec/config.hpp"
#include "passmec/env.hpp"
#include "passmec/experiment.hpp"
#include "passmec/rng.hpp"
#include "passmec/trainer.hpp"

using namespace passmec;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail = "") {
  std::printf("%s criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Criterion 1: channel magnitude directly above a UE antenna.
void criterion_1() {
  SystemGeometry g;
  g.finalize();
  cplx entry = los_channel_entry(g, Vec3{5.0, 0.0, 0.0}, Vec3{5.0, 0.0, 3.0});
  double err = std::abs(std::abs(entry) - 2.8421e-4);
  report(1, err < 1e-8, "channel magnitude above a UE antenna is sqrt_eta/3 = 2.8421e-4",
         "|entry| = " + fmt(std::abs(entry)) + ", deviation " + fmt(err));
}

// ---------------------------------------------------------------------------
// Criterion 2: optimized SINR path vs an independent complex-loop oracle.
double sinr_loop_oracle(const ChannelSet& ch, const std::vector<int>& assoc,
                        const std::vector<std::vector<cplx>>& beams, int k) {
  auto gain = [&](int ue, int wg, double& re, double& im) {
    re = im = 0.0;
    for (int m = 0; m < ch.elements_per_receiver; ++m) {
      double hr = ch.h[wg][m].real(), hi = -ch.h[wg][m].imag();
      double sr = 0.0, si = 0.0;
      for (int l = 0; l < ch.ue_antennas; ++l) {
        const cplx& a = ch.H[ue][wg][m * ch.ue_antennas + l];
        sr += a.real() * beams[ue][l].real() - a.imag() * beams[ue][l].imag();
        si += a.real() * beams[ue][l].imag() + a.imag() * beams[ue][l].real();
      }
      re += hr * sr - hi * si;
      im += hr * si + hi * sr;
    }
  };
  double gr, gi;
  gain(k, assoc[k], gr, gi);
  double interference = 0.0;
  for (std::size_t j = 0; j < beams.size(); ++j) {
    if (static_cast<int>(j) == k || assoc[j] != assoc[k]) continue;
    double ir, ii;
    gain(static_cast<int>(j), assoc[k], ir, ii);
    interference += ir * ir + ii * ii;
  }
  return (gr * gr + gi * gi) / (interference + ch.elements_per_receiver * ch.noise_power_w);
}

void criterion_2() {
  Rng rng(1002);
  double worst = 0.0;
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    SystemGeometry g;
    g.num_ues = 1 + static_cast<int>(rng.uniform() * 3);
    g.num_waveguides = 1 + static_cast<int>(rng.uniform() * 2);
    g.pas_per_waveguide = 1 + static_cast<int>(rng.uniform() * 4);
    g.ue_antennas = 1 + static_cast<int>(rng.uniform() * 3);
    g.finalize();

    std::vector<Vec3> centroids(g.num_ues);
    for (auto& c : centroids) {
      c.x = rng.uniform(0.0, g.region_x_m);
      c.y = rng.uniform(-g.region_y_m / 2.0, g.region_y_m / 2.0);
    }
    UEPlacement ue = ue_antenna_positions(g, centroids);
    PAPlacement pa;
    pa.x.resize(g.num_waveguides);
    std::vector<double> raw(g.num_waveguides * g.pas_per_waveguide);
    for (auto& v : raw) v = rng.uniform(-1.0, 1.0);
    pa.x = decode_pa_positions(raw, g);
    ChannelSet ch = build_channels(g, ue, pa, 1e-12);

    std::vector<int> assoc(g.num_ues);
    std::vector<std::vector<cplx>> beams(g.num_ues);
    for (int k = 0; k < g.num_ues; ++k) {
      assoc[k] = static_cast<int>(rng.uniform() * g.num_waveguides);
      beams[k].resize(g.ue_antennas);
      for (auto& w : beams[k]) w = cplx{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)};
    }
    for (int k = 0; k < g.num_ues; ++k) {
      double fast = sinr(ch, assoc, beams, k);
      double slow = sinr_loop_oracle(ch, assoc, beams, k);
      double rel = std::abs(fast - slow) / std::max({fast, slow, 1e-300});
      worst = std::max(worst, rel);
      ++checked;
    }
  }
  report(2, worst < 1e-10,
         "SINR brute-force equivalence on 1000 random instances",
         std::to_string(checked) + " evaluations, worst relative error " + fmt(worst));
}

// ---------------------------------------------------------------------------
// Criterion 3: queue trajectories equal an independent re-simulation.
void criterion_3() {
  Rng rng(1003);
  bool exact = true, nonneg = true, bs_zero_ok = true;
  for (int episode = 0; episode < 100; ++episode) {
    EnvConfig cfg;
    cfg.rng_seed = 50000 + episode;
    bool force_local = episode % 4 == 0;  // a quarter of episodes pin beta = 0
    PassMecEnv env(cfg);
    env.reset(cfg.rng_seed);

    std::vector<double> q_local(cfg.geometry.num_ues, 0.0);
    double q_bs = 0.0;
    const double local_service = cfg.profile.local_service_bits();
    const double bs_service = cfg.profile.bs_service_bits();

    bool done = false;
    while (!done) {
      std::vector<double> action(env.action_size());
      for (auto& v : action) v = rng.uniform(-1.0, 1.0);
      if (force_local) {
        for (int k = 0; k < env.layout().beta_len(); ++k)
          action[env.layout().beta_offset() + k] = -1.0;
      }
      auto res = env.step(action);
      done = res.done;

      double offl = 0.0;
      for (int k = 0; k < cfg.geometry.num_ues; ++k) {
        double local_bits = (1.0 - res.info.beta[k]) * res.info.task_bits[k];
        q_local[k] = std::max(q_local[k] + local_bits - local_service, 0.0);
        offl += res.info.beta[k] * res.info.task_bits[k];
      }
      q_bs = std::max(q_bs + offl - bs_service, 0.0);

      for (int k = 0; k < cfg.geometry.num_ues; ++k) {
        if (env.queues().q_local[k] != q_local[k]) exact = false;
        if (env.queues().q_local[k] < 0.0) nonneg = false;
      }
      if (env.queues().q_bs != q_bs) exact = false;
      if (env.queues().q_bs < 0.0) nonneg = false;
      if (force_local && env.queues().q_bs != 0.0) bs_zero_ok = false;
    }
  }
  report(3, exact && nonneg && bs_zero_ok,
         "queue trajectories equal an independent re-simulation over 100 episodes",
         std::string("exact=") + (exact ? "yes" : "no") + " nonneg=" + (nonneg ? "yes" : "no") +
             " beta0->Qb==0=" + (bs_zero_ok ? "yes" : "no"));
}

// ---------------------------------------------------------------------------
// Criterion 4: codec partition, annealing endpoint, Monte-Carlo frequencies.
void criterion_4() {
  Rng rng(1004);
  double worst_gap = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    int wgs = 2 + static_cast<int>(rng.uniform() * 4);
    int ues = 1 + static_cast<int>(rng.uniform() * 9);
    std::vector<int> loads(wgs, 0);
    int committed = static_cast<int>(rng.uniform() * (ues + 1));
    for (int i = 0; i < committed; ++i) ++loads[static_cast<int>(rng.uniform() * wgs)];
    DiscretizationSchedule sched;
    sched.lb_episodes = 400;
    sched.current_episode = static_cast<int>(rng.uniform() * 500);
    auto seg = lb_segments(loads, ues, sched);
    double sum = std::accumulate(seg.begin(), seg.end(), 0.0);
    worst_gap = std::max(worst_gap, std::abs(sum - sched.range()));
  }
  bool partition_ok = worst_gap < 1e-12;

  // annealing endpoint: epsilon_e = epsilon_train reproduces the even split
  bool endpoint_ok = true;
  for (int wgs = 2; wgs <= 6; ++wgs) {
    DiscretizationSchedule sched;
    sched.lb_episodes = 400;
    sched.current_episode = 400;
    std::vector<int> loads(wgs);
    for (auto& l : loads) l = static_cast<int>(rng.uniform() * 3);
    auto lb = lb_segments(loads, 9, sched);
    auto con = conventional_segments(wgs, sched);
    for (int i = 0; i < wgs; ++i)
      if (lb[i] != con[i]) endpoint_ok = false;
  }

  // Monte-Carlo: fixed LB-phase segments, 1e5 single-UE decodes
  DiscretizationSchedule sched;
  sched.lb_episodes = 400;
  sched.current_episode = 100;
  std::vector<int> loads{2, 1, 0};
  auto segments = lb_segments(loads, 5, sched);
  std::vector<int> counts(3, 0);
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) {
    double varpi = rng.uniform(-1.0, 1.0);
    std::vector<double> one{varpi};
    // single UE per call so the running loads stay at the fixed vector
    double cum = sched.varpi_min;
    int pick = -1;
    for (int n = 0; n < 3; ++n) {
      cum += segments[n];
      if (varpi < cum) {
        pick = n;
        break;
      }
    }
    if (pick < 0) pick = 2;
    ++counts[pick];
  }
  double worst_freq = 0.0;
  for (int n = 0; n < 3; ++n) {
    double expected = segments[n] / sched.range();
    double freq = static_cast<double>(counts[n]) / samples;
    worst_freq = std::max(worst_freq, std::abs(freq - expected));
  }
  bool mc_ok = worst_freq < 0.02;

  report(4, partition_ok && endpoint_ok && mc_ok,
         "codec partition, annealing endpoint and Monte-Carlo frequencies",
         "partition gap " + fmt(worst_gap) + ", endpoint exact " +
             (endpoint_ok ? "yes" : "no") + ", worst frequency deviation " + fmt(worst_freq));
}

// ---------------------------------------------------------------------------
// Criterion 5: feasibility of 1e5 random raw actions.
void criterion_5() {
  SystemGeometry g;
  g.finalize();
  ActionLayout layout{g.num_ues, g.num_waveguides, g.pas_per_waveguide, g.ue_antennas};
  const double p_max = 0.1;
  Rng rng(1005);
  int violations = 0;
  for (int trial = 0; trial < 100000; ++trial) {
    std::vector<double> raw(layout.total());
    for (auto& v : raw) v = rng.uniform(-1.0, 1.0);
    DiscretizationSchedule sched;
    sched.lb_episodes = 400;
    sched.current_episode = static_cast<int>(rng.uniform() * 500);
    DecodedAction a = decode_action(raw, layout, g, p_max, sched);

    for (const auto& beam : a.beams) {
      double norm_sq = 0.0;
      for (const auto& w : beam) norm_sq += std::norm(w);
      if (norm_sq > p_max * (1.0 + 1e-12)) ++violations;
    }
    for (const auto& row : a.pa_x) {
      for (std::size_t m = 0; m < row.size(); ++m) {
        if (row[m] < 0.0 || row[m] > g.region_x_m) ++violations;
        if (m > 0 && row[m] - row[m - 1] < g.antenna_spacing_m - 1e-12) ++violations;
      }
    }
    for (int v : a.assoc)
      if (v < 0 || v >= g.num_waveguides) ++violations;
    for (double b : a.beta)
      if (b < 0.0 || b > 1.0) ++violations;
  }
  report(5, violations == 0, "feasibility of 100000 random raw action decodes",
         std::to_string(violations) + " constraint violations");
}

// ---------------------------------------------------------------------------
// Criterion 6: gradient correctness on the production net shapes.
void criterion_6() {
  Rng rng(1006);
  double worst = 0.0;
  int sampled = 0;
  // the two shapes used in training (K=5 default dims)
  std::vector<DenseNet> nets;
  nets.emplace_back(std::vector<int>{443, 64, 128, 64, 52}, Activation::kTanh, Activation::kTanh);
  nets.emplace_back(std::vector<int>{443, 64, 128, 64, 1}, Activation::kRelu, Activation::kLinear);
  for (auto& net : nets) {
    net.init_params(rng);
    std::vector<double> input(net.input_size());
    for (auto& v : input) v = rng.uniform(-1.0, 1.0);
    std::vector<double> coeff(net.output_size());
    for (auto& v : coeff) v = rng.uniform(-1.0, 1.0);

    DenseNet::Cache cache;
    net.forward(input, cache);
    std::vector<double> grad(net.param_count(), 0.0);
    net.backward(cache, coeff, grad);

    auto loss = [&]() {
      auto out = net.forward(input);
      double l = 0.0;
      for (std::size_t i = 0; i < out.size(); ++i) l += coeff[i] * out[i];
      return l;
    };

    const double h = 1e-5;
    for (int pick = 0; pick < 600; ++pick) {
      int i = static_cast<int>(rng.uniform() * net.param_count());
      double saved = net.params()[i];
      net.params()[i] = saved + h;
      double plus = loss();
      net.params()[i] = saved - h;
      double minus = loss();
      net.params()[i] = saved;
      double fd = (plus - minus) / (2.0 * h);
      double scale = std::max({std::abs(fd), std::abs(grad[i]), 1e-6});
      worst = std::max(worst, std::abs(grad[i] - fd) / scale);
      ++sampled;
    }
  }
  report(6, worst < 1e-4, "analytic vs finite-difference gradients on 64-128-64 nets",
         std::to_string(sampled) + " parameters sampled, worst relative error " + fmt(worst));
}

// ---------------------------------------------------------------------------
// Criterion 7: PPO continuous-bandit sanity, 3/3 seeds.
void criterion_7() {
  PPOHyper hyper;
  hyper.batch_size = 64;
  hyper.minibatch_size = 32;
  hyper.update_epochs = 10;
  hyper.hidden_sizes = {16, 16};
  hyper.learning_rate = 3e-3;

  int solved_seeds = 0;
  std::string detail;
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Rng init(seed);
    PpoAgent agent(1, 1, hyper, init);
    Rng rng(seed + 900);
    RolloutBuffer buffer(hyper.batch_size);
    std::vector<double> obs{0.0};
    bool solved = false;
    int updates = 0;
    for (; updates < 5000 && !solved; ++updates) {
      buffer.clear();
      while (!buffer.full()) {
        auto s = agent.policy.sample(obs, rng);
        Transition tr;
        tr.observation = obs;
        tr.action = s.action;
        tr.log_prob = s.log_prob;
        tr.reward = -(s.action[0] - 0.3) * (s.action[0] - 0.3);
        tr.value = agent.value(obs);
        tr.done = true;
        buffer.push(std::move(tr));
      }
      ppo_update(buffer, agent, 0.0, hyper, rng);
      solved = std::abs(agent.policy.mean(obs)[0] - 0.3) < 0.05;
    }
    if (solved) ++solved_seeds;
    detail += "seed " + std::to_string(seed) + ": " +
              (solved ? std::to_string(updates) + " updates" : "unsolved") + "; ";
  }
  report(7, solved_seeds == 3, "PPO reaches the bandit optimum on 3/3 seeds", detail);
}

// ---------------------------------------------------------------------------
// Criteria 8-10 share trained runs.

fs::path out_root() {
  fs::path p = fs::current_path() / "acceptance_runs";
  fs::create_directories(p);
  return p;
}

ExperimentSpec base_spec() {
  ExperimentSpec spec = parse_experiment_spec(default_spec_json());
  spec.seeds = {1, 2, 3};
  return spec;
}

// Criterion 8: convergence of the full-size pass-movable training.
void criterion_8() {
  ExperimentSpec spec = base_spec();
  spec.variants = {Variant::kPassMovable};
  spec.episodes = 2000;  // paper-scale run
  spec.env.lb_episodes = 400;
  spec.output_dir = (out_root() / "fig3").string();

  auto results = run_training(spec);

  int improved_seeds = 0;
  int plateau_seeds = 0;
  std::string detail;
  for (const auto& r : results) {
    std::ifstream is(r.csv_path);
    std::string line;
    std::getline(is, line);  // header
    std::vector<double> rewards;
    while (std::getline(is, line)) rewards.push_back(parse_metrics_row(line).mean_reward);

    const int n = static_cast<int>(rewards.size());
    double first = std::accumulate(rewards.begin(), rewards.begin() + 200, 0.0) / 200.0;
    double last = std::accumulate(rewards.end() - 200, rewards.end(), 0.0) / 200.0;
    if (last > first) ++improved_seeds;

    // OLS slope on the last 20%
    const int tail = n / 5;
    double xbar = 0.0, ybar = 0.0;
    for (int i = 0; i < tail; ++i) {
      xbar += i;
      ybar += rewards[n - tail + i];
    }
    xbar /= tail;
    ybar /= tail;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < tail; ++i) {
      sxx += (i - xbar) * (i - xbar);
      sxy += (i - xbar) * (rewards[n - tail + i] - ybar);
    }
    double slope = sxy / sxx;
    double sse = 0.0;
    for (int i = 0; i < tail; ++i) {
      double resid = rewards[n - tail + i] - ybar - slope * (i - xbar);
      sse += resid * resid;
    }
    double se = std::sqrt(sse / (tail - 2) / sxx);
    double tstat = slope / se;
    if (std::abs(tstat) < 1.96) ++plateau_seeds;
    detail += "seed " + std::to_string(r.seed) + ": first200 " + fmt(first) + " last200 " +
              fmt(last) + " t " + fmt(tstat) + "; ";
  }
  bool pass = improved_seeds >= 2 && plateau_seeds >= 2;
  report(8, pass,
         "pass-movable training improves and plateaus (>=2/3 seeds, paper-scale settings)",
         detail + std::to_string(improved_seeds) + "/3 improved, " +
             std::to_string(plateau_seeds) + "/3 plateaued");
}

// Criterion 9: latency ordering movable <= fixed <= mimo at K = 5 and K = 7,
// and latency non-decreasing in K per variant.
void criterion_9() {
  ExperimentSpec spec = base_spec();
  spec.episodes = 600;  // shorter runs; the criterion pins no episode count
  spec.env.lb_episodes = 120;
  spec.sweep = SweepAxis::kUeCount;
  spec.sweep_ue_counts = {5, 7};
  spec.output_dir = (out_root() / "fig4").string();

  auto summary = run_sweep(spec);
  auto latency = [&](const std::string& value, Variant v) {
    for (const auto& row : summary) {
      if (row.sweep_value == value && row.variant == variant_name(v)) return row.mean_latency_s;
    }
    return -1.0;
  };

  bool pass = true;
  std::string detail;
  for (const std::string& k : {std::string("5"), std::string("7")}) {
    double movable = latency(k, Variant::kPassMovable);
    double fixed = latency(k, Variant::kPassFixed);
    double mimo = latency(k, Variant::kMimo);
    if (!(movable <= fixed && fixed <= mimo)) pass = false;
    detail += "K=" + k + ": movable " + fmt(movable) + " fixed " + fmt(fixed) + " mimo " +
              fmt(mimo) + "; ";
  }
  for (Variant v : {Variant::kPassMovable, Variant::kPassFixed, Variant::kMimo}) {
    if (latency("7", v) < latency("5", v)) {
      pass = false;
      detail += std::string(variant_name(v)) + " latency decreased in K; ";
    }
  }
  report(9, pass, "evaluated latency orders movable <= fixed <= mimo and grows with K", detail);
}

// Criterion 10: pass-movable latency non-increasing in transmit power.
void criterion_10() {
  ExperimentSpec spec = base_spec();
  spec.episodes = 600;
  spec.env.lb_episodes = 120;
  spec.variants = {Variant::kPassMovable};
  spec.sweep = SweepAxis::kPower;
  spec.sweep_power_dbm = {10.0, 15.0, 20.0, 25.0};
  spec.output_dir = (out_root() / "fig5").string();

  auto summary = run_sweep(spec);
  bool pass = true;
  std::string detail;
  double prev = -1.0;
  for (const auto& row : summary) {
    detail += row.sweep_value + " dBm: " + fmt(row.mean_latency_s) + "; ";
    if (prev >= 0.0 && row.mean_latency_s > prev) pass = false;
    prev = row.mean_latency_s;
  }
  report(10, pass, "pass-movable latency is non-increasing in transmit power", detail);
}

// ---------------------------------------------------------------------------
// Criterion 11: byte-identical CSVs on repeated invocations.
std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void criterion_11() {
  ExperimentSpec spec = base_spec();
  spec.episodes = 20;  // enough for one full PPO update at batch 512
  spec.eval_episodes = 3;
  spec.seeds = {7};
  spec.variants = {Variant::kPassMovable};

  fs::path dir_a = out_root() / "det_a";
  fs::path dir_b = out_root() / "det_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);

  spec.output_dir = dir_a.string();
  auto ra = run_training(spec);
  spec.output_dir = dir_b.string();
  auto rb = run_training(spec);

  bool csv_ok = slurp(ra[0].csv_path) == slurp(rb[0].csv_path);
  bool ckpt_ok = slurp(ra[0].checkpoint_path) == slurp(rb[0].checkpoint_path);

  auto ev_a = evaluate_checkpoint(ra[0].checkpoint_path, spec.env, 3, 11);
  auto ev_b = evaluate_checkpoint(rb[0].checkpoint_path, spec.env, 3, 11);
  bool eval_ok = ev_a.mean_reward == ev_b.mean_reward &&
                 ev_a.mean_latency_s == ev_b.mean_latency_s &&
                 ev_a.qos_fraction == ev_b.qos_fraction;

  report(11, csv_ok && ckpt_ok && eval_ok,
         "repeated train/evaluate invocations are byte-identical",
         std::string("csv=") + (csv_ok ? "same" : "DIFFERS") +
             " checkpoint=" + (ckpt_ok ? "same" : "DIFFERS") +
             " eval=" + (eval_ok ? "same" : "DIFFERS"));
}

}  // namespace

int main(int argc, char** argv) {
  // "--fast" skips the training-heavy criteria (8-10) for quick spot checks.
  bool fast = argc > 1 && std::string(argv[1]) == "--fast";

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  if (!fast) {
    criterion_8();
    criterion_9();
    criterion_10();
  }
  criterion_11();

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criteria FAILED\n", g_failures);
  }
  return g_failures;
}
