#include "passmec/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "passmec/checkpoint.hpp"

namespace passmec {

namespace fs = std::filesystem;

const char* kTrainingCsvHeader =
    "variant,seed,episode,sweep_value,mean_reward,mean_latency_s,qos_fraction,"
    "mean_q_local_bits,mean_q_bs_bits,policy_loss,value_loss,entropy";

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string sweep_value_string(SweepAxis axis, double value) {
  if (axis == SweepAxis::kUeCount) return std::to_string(static_cast<int>(value));
  return fmt(value);
}

// File stem for one run, e.g. "pass-movable_seed2_ues7".
std::string run_stem(const std::string& variant, std::uint64_t seed, SweepAxis axis,
                     const std::string& sweep_value) {
  std::string stem = variant + "_seed" + std::to_string(seed);
  if (axis == SweepAxis::kUeCount) stem += "_ues" + sweep_value;
  if (axis == SweepAxis::kPower) stem += "_dbm" + sweep_value;
  return stem;
}

struct RunJob {
  EnvConfig env;
  std::string variant;
  std::uint64_t seed = 0;
  std::string sweep_value = "na";
  std::string stem;
};

RunResult execute_run(const RunJob& job, const ExperimentSpec& spec) {
  Trainer trainer(job.env, spec.ppo, job.seed);
  std::vector<EpisodeLog> log = trainer.run(spec.episodes);

  fs::path csv_path = fs::path(spec.output_dir) / ("train_" + job.stem + ".csv");
  std::ofstream os(csv_path);
  if (!os) throw std::runtime_error("cannot write " + csv_path.string());
  os << kTrainingCsvHeader << "\n";
  for (const EpisodeLog& row : log) {
    MetricsRow m;
    m.variant = job.variant;
    m.seed = job.seed;
    m.episode = row.episode;
    m.sweep_value = job.sweep_value;
    m.mean_reward = row.mean_reward;
    m.mean_latency_s = row.mean_latency_s;
    m.qos_fraction = row.qos_fraction;
    m.mean_q_local_bits = row.mean_q_local_bits;
    m.mean_q_bs_bits = row.mean_q_bs_bits;
    m.policy_loss = row.policy_loss;
    m.value_loss = row.value_loss;
    m.entropy = row.entropy;
    os << format_metrics_row(m) << "\n";
  }
  os.close();
  if (!os) throw std::runtime_error("write failed: " + csv_path.string());

  fs::path ck_path = fs::path(spec.output_dir) / (job.stem + ".ckpt");
  Checkpoint ck = Checkpoint::from_agent(trainer.agent(), trainer.env().layout(), job.variant,
                                         trainer.env().observation_size(), spec.ppo,
                                         trainer.env().schedule());
  ck.save(ck_path.string());

  // Final deterministic evaluation on a fresh environment stream.
  PassMecEnv eval_env(job.env);
  eval_env.reset(job.seed ^ 0x9e3779b97f4a7c15ull);
  eval_env.set_schedule(trainer.env().schedule());
  EvalSummary eval = evaluate_policy(eval_env, trainer.agent().policy, spec.eval_episodes);

  RunResult result;
  result.variant = job.variant;
  result.seed = job.seed;
  result.sweep_value = job.sweep_value;
  result.csv_path = csv_path.string();
  result.checkpoint_path = ck_path.string();
  result.eval = eval;
  return result;
}

std::vector<RunResult> execute_jobs(const std::vector<RunJob>& jobs, const ExperimentSpec& spec) {
  fs::create_directories(spec.output_dir);
  std::vector<RunResult> results(jobs.size());
  unsigned workers = spec.max_parallel > 0 ? static_cast<unsigned>(spec.max_parallel)
                                           : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, jobs.size());

  std::mutex mu;
  std::size_t next = 0;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      std::size_t idx;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= jobs.size() || first_error) return;
        idx = next++;
      }
      try {
        RunResult r = execute_run(jobs[idx], spec);
        std::lock_guard<std::mutex> lock(mu);
        results[idx] = std::move(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace

std::string format_metrics_row(const MetricsRow& row) {
  std::ostringstream os;
  os << row.variant << ',' << row.seed << ',' << row.episode << ',' << row.sweep_value << ','
     << fmt(row.mean_reward) << ',' << fmt(row.mean_latency_s) << ',' << fmt(row.qos_fraction)
     << ',' << fmt(row.mean_q_local_bits) << ',' << fmt(row.mean_q_bs_bits) << ','
     << fmt(row.policy_loss) << ',' << fmt(row.value_loss) << ',' << fmt(row.entropy);
  return os.str();
}

MetricsRow parse_metrics_row(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (fields.size() != 12)
    throw std::invalid_argument("metrics row: expected 12 fields, got " +
                                std::to_string(fields.size()));
  MetricsRow row;
  row.variant = fields[0];
  row.seed = std::stoull(fields[1]);
  row.episode = std::stoi(fields[2]);
  row.sweep_value = fields[3];
  row.mean_reward = std::stod(fields[4]);
  row.mean_latency_s = std::stod(fields[5]);
  row.qos_fraction = std::stod(fields[6]);
  row.mean_q_local_bits = std::stod(fields[7]);
  row.mean_q_bs_bits = std::stod(fields[8]);
  row.policy_loss = std::stod(fields[9]);
  row.value_loss = std::stod(fields[10]);
  row.entropy = std::stod(fields[11]);
  return row;
}

EnvConfig apply_sweep_value(const EnvConfig& base, SweepAxis axis, double value) {
  EnvConfig cfg = base;
  switch (axis) {
    case SweepAxis::kNone: break;
    case SweepAxis::kUeCount: cfg.geometry.num_ues = static_cast<int>(value); break;
    case SweepAxis::kPower: cfg.p_max_watts = dbm_to_watts(value); break;
  }
  return cfg;
}

std::vector<RunResult> run_training(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<RunJob> jobs;
  for (Variant variant : spec.variants) {
    for (std::uint64_t seed : spec.seeds) {
      RunJob job;
      job.env = spec.env;
      job.env.variant = variant;
      job.variant = variant_name(variant);
      job.seed = seed;
      job.stem = run_stem(job.variant, seed, SweepAxis::kNone, "na");
      jobs.push_back(std::move(job));
    }
  }
  return execute_jobs(jobs, spec);
}

std::vector<SweepSummaryRow> run_sweep(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.sweep == SweepAxis::kNone)
    throw std::invalid_argument("run_sweep: spec.sweep must be 'ues' or 'power'");

  std::vector<double> values;
  if (spec.sweep == SweepAxis::kUeCount)
    for (int k : spec.sweep_ue_counts) values.push_back(k);
  if (spec.sweep == SweepAxis::kPower)
    for (double p : spec.sweep_power_dbm) values.push_back(p);

  std::vector<RunJob> jobs;
  for (double value : values) {
    for (Variant variant : spec.variants) {
      for (std::uint64_t seed : spec.seeds) {
        RunJob job;
        job.env = apply_sweep_value(spec.env, spec.sweep, value);
        job.env.variant = variant;
        job.variant = variant_name(variant);
        job.seed = seed;
        job.sweep_value = sweep_value_string(spec.sweep, value);
        job.stem = run_stem(job.variant, seed, spec.sweep, job.sweep_value);
        jobs.push_back(std::move(job));
      }
    }
  }
  std::vector<RunResult> runs = execute_jobs(jobs, spec);

  // Sequential reduction: one row per (sweep value, variant), stats over seeds.
  std::vector<SweepSummaryRow> summary;
  for (double value : values) {
    std::string value_str = sweep_value_string(spec.sweep, value);
    for (Variant variant : spec.variants) {
      std::vector<const RunResult*> group;
      for (const RunResult& r : runs) {
        if (r.sweep_value == value_str && r.variant == variant_name(variant))
          group.push_back(&r);
      }
      SweepSummaryRow row;
      row.sweep_axis = sweep_axis_name(spec.sweep);
      row.sweep_value = value_str;
      row.variant = variant_name(variant);
      row.num_seeds = static_cast<int>(group.size());
      double lat_sum = 0.0, rew_sum = 0.0, qos_sum = 0.0;
      for (const RunResult* r : group) {
        lat_sum += r->eval.mean_latency_s;
        rew_sum += r->eval.mean_reward;
        qos_sum += r->eval.qos_fraction;
      }
      row.mean_latency_s = lat_sum / group.size();
      row.mean_reward = rew_sum / group.size();
      row.qos_fraction = qos_sum / group.size();
      double var = 0.0;
      for (const RunResult* r : group) {
        double d = r->eval.mean_latency_s - row.mean_latency_s;
        var += d * d;
      }
      row.std_latency_s = std::sqrt(var / group.size());
      summary.push_back(std::move(row));
    }
  }

  fs::path path = fs::path(spec.output_dir) / "sweep_summary.csv";
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "sweep,sweep_value,variant,num_seeds,mean_latency_s,std_latency_s,mean_reward,qos_fraction\n";
  for (const SweepSummaryRow& row : summary) {
    os << row.sweep_axis << ',' << row.sweep_value << ',' << row.variant << ',' << row.num_seeds
       << ',' << fmt(row.mean_latency_s) << ',' << fmt(row.std_latency_s) << ','
       << fmt(row.mean_reward) << ',' << fmt(row.qos_fraction) << "\n";
  }
  os.close();
  if (!os) throw std::runtime_error("write failed: " + path.string());
  return summary;
}

EvalSummary evaluate_checkpoint(const std::string& checkpoint_path, const EnvConfig& env_cfg,
                                int episodes, std::uint64_t seed) {
  if (episodes < 1) throw std::invalid_argument("evaluate: episodes must be >= 1");
  Checkpoint ck = Checkpoint::load(checkpoint_path);

  EnvConfig cfg = env_cfg;
  cfg.variant = variant_from_name(ck.variant);
  cfg.finalize();
  ActionLayout env_layout{cfg.geometry.num_ues, cfg.geometry.num_waveguides,
                          cfg.geometry.pas_per_waveguide, cfg.geometry.ue_antennas};
  ActionLayout ck_layout = ActionLayout::from_tag(ck.layout_tag);
  if (!(env_layout == ck_layout))
    throw std::invalid_argument("evaluate: checkpoint layout " + ck_layout.tag() +
                                " does not match config layout " + env_layout.tag());

  PpoAgent agent = ck.to_agent();
  PassMecEnv env(cfg);
  if (agent.policy.observation_size() != env.observation_size())
    throw std::invalid_argument(
        "evaluate: checkpoint observation size " + std::to_string(agent.policy.observation_size()) +
        " does not match environment observation size " + std::to_string(env.observation_size()));
  env.reset(seed);
  env.set_schedule(ck.schedule);
  return evaluate_policy(env, agent.policy, episodes);
}

}  // namespace passmec
