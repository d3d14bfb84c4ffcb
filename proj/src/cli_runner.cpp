#include "glauber/cli_runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "glauber/cftp.hpp"
#include "glauber/errors.hpp"
#include "glauber/oracle.hpp"
#include "glauber/parallel.hpp"
#include "glauber/verify.hpp"
#include "glauber/version.hpp"

namespace glauber {

namespace {

using nlohmann::json;

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw EstimationError("cannot write output file: " + path.string());
  out << content;
}

std::string csv_num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

json point_json(const Point& p, int dim) {
  json arr = json::array();
  for (int i = 0; i < dim; ++i) arr.push_back(p[i]);
  return arr;
}

json model_json(const ModelParams& m) {
  json sides = json::array();
  for (int i = 0; i < m.box.dim; ++i) sides.push_back(m.box.side[i]);
  return {{"dimension", m.box.dim},
          {"sides", sides},
          {"boundary", m.box.boundary == Boundary::periodic ? "periodic" : "empty"},
          {"activity", m.activity},
          {"potential", m.potential.describe()},
          {"delta", m.delta}};
}

json report_header(const RunConfig& cfg, const std::string& command) {
  return {{"artifact", kArtifactName},
          {"version", kArtifactVersion},
          {"config_hash", fnv1a_hex(resolved_config_text(cfg))},
          {"command", command},
          {"model", model_json(cfg.model)}};
}

json check_json(const CheckResult& c) {
  json d = json::object();
  for (const auto& [k, v] : c.details) d[k] = v;
  return {{"name", c.name},         {"statistic", c.statistic}, {"estimate", c.estimate},
          {"stderr", c.se},         {"target", c.target},       {"threshold", c.threshold},
          {"two_sided", c.two_sided}, {"pass", c.pass},         {"details", d}};
}

json checks_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const CheckResult& c : checks) arr.push_back(check_json(c));
  return arr;
}

/// Time average of |gamma| over [cut, end]; cut falls back to 0 when the
/// trajectory is shorter than the requested burn-in.
double time_avg_count(const Trajectory& traj, double burn_in) {
  const double cut = burn_in < traj.end_time ? burn_in : 0.0;
  const double span = traj.end_time - cut;
  if (!(span > 0.0)) return static_cast<double>(traj.initial.size());
  double n = static_cast<double>(traj.initial.size());
  double t_prev = 0.0;
  double integral = 0.0;
  auto accumulate = [&](double until) {
    const double a = std::max(t_prev, cut);
    if (until > a) integral += n * (until - a);
  };
  for (const Event& e : traj.events) {
    accumulate(e.at_time);
    t_prev = std::max(t_prev, e.at_time);
    if (e.kind == Event::Kind::birth) n += 1.0;
    if (e.kind == Event::Kind::death) n -= 1.0;
  }
  accumulate(traj.end_time);
  return integral / span;
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, unsigned threads) {
  const ModelParams& params = cfg.model;
  const Horizon horizon = cfg.horizon_events > 0 ? Horizon::by_events(cfg.horizon_events)
                                                 : Horizon::by_time(cfg.horizon_time);
  std::vector<double> snapshot_times;
  if (cfg.horizon_events == 0 && cfg.snapshots > 0) {
    for (std::size_t k = 1; k <= cfg.snapshots; ++k)
      snapshot_times.push_back(cfg.horizon_time * static_cast<double>(k) /
                               static_cast<double>(cfg.snapshots));
  }

  std::vector<Trajectory> trajectories(cfg.chains);
  const auto t0 = std::chrono::steady_clock::now();
  parallel_for(cfg.chains, threads, [&](std::size_t j) {
    ChainState state(params, derive_seed(cfg.seed, j));
    if (cfg.init == "poisson") {
      const std::uint64_t n = state.rng.poisson(params.activity * params.box.volume());
      for (std::uint64_t i = 0; i < n; ++i) {
        const Point p = state.rng.uniform_point(params.box);
        if (state.config.find(p) == Configuration::npos) state.config.insert(p);
      }
    }
    trajectories[j] = run(state, params, horizon, snapshot_times);
  });
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::filesystem::path out(cfg.out_dir);
  std::uint64_t births = 0, deaths = 0, rejected = 0;
  std::vector<double> chain_avgs;
  json per_chain = json::array();

  for (std::size_t j = 0; j < cfg.chains; ++j) {
    const Trajectory& traj = trajectories[j];
    std::ostringstream events;
    for (const Event& e : traj.events) {
      json line = {{"t", e.at_time},
                   {"kind", event_kind_name(e.kind)},
                   {"x", point_json(e.where, params.box.dim)}};
      events << line.dump() << "\n";
    }
    write_text(out / ("events_chain" + std::to_string(j) + ".jsonl"), events.str());

    std::ostringstream snap;
    snap << "t,point";
    for (int i = 0; i < params.box.dim; ++i) snap << ",x" << i;
    snap << "\n";
    for (const Snapshot& s : traj.snapshots) {
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        snap << csv_num(s.at_time) << "," << i;
        for (int d = 0; d < params.box.dim; ++d) snap << "," << csv_num(s.points[i][d]);
        snap << "\n";
      }
    }
    write_text(out / ("snapshots_chain" + std::to_string(j) + ".csv"), snap.str());

    std::uint64_t b = 0, d = 0, r = 0;
    for (const Event& e : traj.events) {
      b += e.kind == Event::Kind::birth;
      d += e.kind == Event::Kind::death;
      r += e.kind == Event::Kind::rejected_birth;
    }
    births += b;
    deaths += d;
    rejected += r;
    chain_avgs.push_back(time_avg_count(traj, cfg.burn_in));
    per_chain.push_back({{"chain", j},
                         {"events", traj.events.size()},
                         {"births", b},
                         {"deaths", d},
                         {"rejected_births", r},
                         {"end_time", traj.end_time},
                         {"end_count", traj.initial.size() + b - d},
                         {"time_avg_count", chain_avgs.back()}});
  }

  const Estimate mean_count = batch_mean(chain_avgs);
  const double proposals = static_cast<double>(births + rejected);
  json summary = report_header(cfg, "simulate");
  summary["chains"] = cfg.chains;
  summary["events_total"] = births + deaths + rejected;
  summary["mean_count"] = {{"value", mean_count.value}, {"stderr", mean_count.se}};
  summary["acceptance_ratio"] = proposals > 0.0 ? static_cast<double>(births) / proposals : 1.0;
  summary["per_chain"] = per_chain;
  write_text(out / "summary.json", summary.dump(2) + "\n");

  const double total_events = static_cast<double>(births + deaths + rejected);
  std::fprintf(stderr, "simulate: %.0f events in %.2fs (%.0f events/sec)\n", total_events,
               elapsed, elapsed > 0.0 ? total_events / elapsed : 0.0);
  return 0;
}

int cmd_sample(const RunConfig& cfg, unsigned threads) {
  const ModelParams& params = cfg.model;
  const std::filesystem::path out(cfg.out_dir);

  SampleSet samples;
  if (cfg.sampler == "mcmc") {
    EnsembleConfig ec;
    ec.chain_count = cfg.chains;
    ec.samples_per_chain = cfg.samples;
    ec.burn_in = cfg.burn_in;
    ec.spacing = cfg.spacing;
    ec.seed = cfg.seed;
    samples = sample_ensemble(params, ec, threads);
  } else {
    samples.chains.resize(cfg.chains);
    parallel_for(cfg.chains, threads, [&](std::size_t j) {
      const std::uint64_t chain_seed = derive_seed(cfg.seed, j);
      auto& chain = samples.chains[j];
      chain.reserve(cfg.samples);
      for (std::size_t i = 0; i < cfg.samples; ++i) {
        RandomStream rng(derive_seed(chain_seed, i));
        chain.push_back(TimedSample{0.0, cftp_sample(params, rng)});
      }
    });
  }

  std::ostringstream lines;
  std::vector<double> chain_means;
  for (std::size_t j = 0; j < samples.chains.size(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < samples.chains[j].size(); ++i) {
      const TimedSample& s = samples.chains[j][i];
      json points = json::array();
      for (const Point& p : s.config.points()) points.push_back(point_json(p, params.box.dim));
      json line = {{"chain", j},
                   {"sample", i},
                   {"t", s.at_time},
                   {"n", s.config.size()},
                   {"points", points}};
      lines << line.dump() << "\n";
      sum += static_cast<double>(s.config.size());
    }
    chain_means.push_back(sum / static_cast<double>(samples.chains[j].size()));
  }
  write_text(out / "samples.jsonl", lines.str());

  const Estimate mean_count = batch_mean(chain_means);
  json summary = report_header(cfg, "sample");
  summary["sampler"] = cfg.sampler;
  summary["chains"] = cfg.chains;
  summary["samples_per_chain"] = cfg.samples;
  summary["mean_count"] = {{"value", mean_count.value}, {"stderr", mean_count.se}};
  summary["mean_density"] = mean_count.value / params.box.volume();
  summary["ideal_gas_density"] = params.activity;
  write_text(out / "summary.json", summary.dump(2) + "\n");
  return 0;
}

int cmd_verify(const RunConfig& cfg, unsigned threads) {
  const ModelParams& params = cfg.model;
  const VerifyOptions& options = cfg.verify;
  const std::filesystem::path out(cfg.out_dir);

  const bool needs_samples = options.gnz || options.dirichlet || options.symmetry ||
                             options.coercivity || options.stationarity || options.lower_bound ||
                             options.poincare || options.ruelle;

  VerifyReport report;
  if (needs_samples) {
    EnsembleConfig ec;
    ec.chain_count = cfg.chains;
    ec.samples_per_chain = cfg.samples;
    ec.burn_in = cfg.burn_in;
    ec.spacing = cfg.spacing;
    ec.seed = cfg.seed;
    const SampleSet samples = sample_ensemble(params, ec, threads);

    if (options.gnz)
      report.add_all(check_gnz(samples, params, options.quad, options.sigmas, threads));
    if (options.dirichlet)
      report.add_all(check_dirichlet(samples, params, options.quad, options.sigmas, threads));
    if (options.symmetry)
      report.add_all(check_symmetry(samples, params, options.quad, options.sigmas, threads));
    if (options.coercivity)
      report.add_all(check_coercivity(samples, params, options.quad, options.sigmas, threads));
    if (options.stationarity)
      report.add_all(check_stationarity(samples, params, options.quad, options.sigmas, threads));
    if (options.lower_bound)
      report.add_all(check_lower_bound(samples, params, options.quad, options.sigmas, threads));
    if (options.poincare)
      report.add_all(check_poincare(samples, params, options.sigmas, threads));
    if (options.ruelle) {
      const CorrelationBins bins = correlation_bins(samples, params, options, threads);
      report.add_all(check_ruelle(bins, params, options.sigmas));

      std::ostringstream csv;
      csv << "table,bin,lo,hi,estimate,stderr\n";
      const int nb = bins.k1_bins_per_axis;
      std::size_t stride0 = 1;  // axis 0 varies slowest in the flat k1 index
      for (int i = 1; i < params.box.dim; ++i) stride0 *= static_cast<std::size_t>(nb);
      for (std::size_t i = 0; i < bins.k1.size(); ++i) {
        const auto axis0 = static_cast<int>(i / stride0);
        const double w = params.box.side[0] / nb;
        csv << "k1," << i << "," << csv_num(axis0 * w) << "," << csv_num((axis0 + 1) * w) << ","
            << csv_num(bins.k1[i]) << "," << csv_num(bins.k1_se[i]) << "\n";
      }
      for (std::size_t i = 0; i < bins.k2.size(); ++i)
        csv << "k2," << i << "," << csv_num(bins.r_edges[i]) << "," << csv_num(bins.r_edges[i + 1])
            << "," << csv_num(bins.k2[i]) << "," << csv_num(bins.k2_se[i]) << "\n";
      write_text(out / "correlations.csv", csv.str());
    }
  }
  if (options.gap) report.add_all(check_gap(params, options, threads));

  json rep = report_header(cfg, "verify");
  rep["checks"] = checks_json(report.checks);
  rep["all_pass"] = report.all_pass;
  write_text(out / "report.json", rep.dump(2) + "\n");
  return report.all_pass ? 0 : 1;
}

int cmd_gap(const RunConfig& cfg, unsigned threads) {
  const ModelParams& params = cfg.model;
  const std::filesystem::path out(cfg.out_dir);
  const double bound = 1.0 - params.delta;

  VerifyReport report;
  std::ostringstream csv;
  csv << "observable,lag,corr,corr_stderr\n";
  double min_lambda = std::numeric_limits<double>::infinity();
  double min_ci = 0.0;
  std::string min_name;

  for (const Observable& f : battery::standard(params.box)) {
    const AutocorrEstimate est = autocorrelation(f, params, cfg.verify.autocorr, threads);
    for (std::size_t i = 0; i < est.lag_times.size(); ++i)
      csv << f.name() << "," << csv_num(est.lag_times[i]) << "," << csv_num(est.corr[i]) << ","
          << csv_num(est.corr_se[i]) << "\n";
    if (est.lambda_hat < min_lambda) {
      min_lambda = est.lambda_hat;
      min_ci = est.ci_width;
      min_name = f.name();
    }
    report.add(gap_check_result(f.name(), est, bound));
  }
  write_text(out / "autocorr.csv", csv.str());

  json rep = report_header(cfg, "gap");
  rep["checks"] = checks_json(report.checks);
  rep["min_lambda"] = min_lambda;
  rep["min_lambda_ci_width"] = min_ci;
  rep["min_lambda_observable"] = min_name;
  rep["one_minus_delta"] = bound;
  rep["all_pass"] = report.all_pass;
  write_text(out / "report.json", rep.dump(2) + "\n");
  return report.all_pass ? 0 : 1;
}

int cmd_oracle_compare(const RunConfig& cfg, unsigned threads) {
  const ModelParams& params = cfg.model;
  const std::filesystem::path out(cfg.out_dir);

  const auto dm = oracle::DiscreteModel::make(params, cfg.oracle_cells, cfg.oracle_cap);
  const oracle::RateMatrix rm = oracle::build_rate_matrix(dm);
  const Eigen::VectorXd pi = oracle::stationary_distribution(rm);
  const double gap = oracle::spectral_gap_eig(rm, pi);
  const double ddisc = oracle::delta_discrete(dm);

  // Simulator law over snapped occupancy states.
  EnsembleConfig ec;
  ec.chain_count = cfg.chains;
  ec.samples_per_chain = (cfg.tv_samples + cfg.chains - 1) / cfg.chains;
  ec.burn_in = cfg.burn_in;
  ec.spacing = cfg.spacing;
  ec.seed = cfg.seed;
  const SampleSet samples = sample_ensemble(params, ec, threads);

  std::vector<std::size_t> counts(rm.size() + 1, 0);  // last slot: outside support
  for (const auto& chain : samples.chains)
    for (const TimedSample& s : chain) {
      const auto idx = rm.snap(dm, s.config);
      ++counts[idx ? *idx : rm.size()];
    }
  std::vector<double> probs(pi.data(), pi.data() + pi.size());
  probs.push_back(0.0);
  const double tv = tv_distance(counts, probs);
  const double outside =
      static_cast<double>(counts.back()) / static_cast<double>(samples.total());

  // Generator row comparison: continuum HF at cell-center configurations
  // against the discrete generator row (QF), which approximates -HF.
  const Observable f = battery::standard(params.box)[0];
  Eigen::VectorXd fvec(static_cast<Eigen::Index>(rm.size()));
  std::vector<Configuration> state_configs;
  state_configs.reserve(rm.size());
  for (std::size_t s = 0; s < rm.size(); ++s) {
    Configuration c = params.make_configuration();
    for (std::size_t i = 0; i < dm.cell_count(); ++i)
      if (rm.states[s] >> i & 1) c.insert(dm.centers[i]);
    fvec(static_cast<Eigen::Index>(s)) = f(c);
    state_configs.push_back(std::move(c));
  }
  const Eigen::VectorXd qf = rm.q * fvec;
  double max_diff = 0.0;
  std::size_t compared = 0;
  for (std::size_t s = 0; s < rm.size() && compared < 64; ++s) {
    if (__builtin_popcountll(rm.states[s]) > 2) continue;
    const GeneratorValue hf = apply_generator(f, state_configs[s], params, cfg.verify.quad);
    max_diff = std::max(max_diff, std::abs(hf.value + qf(static_cast<Eigen::Index>(s))));
    ++compared;
  }

  const bool tv_ok = tv < cfg.tv_threshold;
  const bool gap_ok = !(ddisc < 1.0) || gap >= 1.0 - ddisc - 1e-9;
  json rep = report_header(cfg, "oracle-compare");
  rep["state_count"] = rm.size();
  rep["cells"] = dm.cell_count();
  rep["cap"] = dm.cap;
  rep["cell_volume"] = dm.cell_volume;
  rep["gap"] = gap;
  rep["delta_discrete"] = ddisc;
  rep["gap_bound_applicable"] = ddisc < 1.0;
  rep["gap_bound_pass"] = gap_ok;
  rep["tv_distance_vs_mc"] = tv;
  rep["tv_threshold"] = cfg.tv_threshold;
  rep["tv_pass"] = tv_ok;
  rep["unsnappable_sample_fraction"] = outside;
  rep["generator_row_states_compared"] = compared;
  rep["generator_row_max_abs_diff"] = max_diff;
  rep["generator_row_diff_per_cell_volume"] = max_diff / dm.cell_volume;
  rep["all_pass"] = tv_ok && gap_ok;
  write_text(out / "oracle_report.json", rep.dump(2) + "\n");
  return (tv_ok && gap_ok) ? 0 : 1;
}

int run_command(const std::string& command, const std::string& config_path,
                const CliOverrides& overrides) {
  try {
    RunConfig cfg = parse_run_config(config_path);
    if (overrides.seed) apply_seed(cfg, *overrides.seed);
    if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
    const unsigned threads = overrides.threads.value_or(default_threads());

    std::filesystem::create_directories(cfg.out_dir);
    write_text(std::filesystem::path(cfg.out_dir) / "resolved_config.json",
               resolved_config_text(cfg));

    if (command == "simulate") return cmd_simulate(cfg, threads);
    if (command == "sample") return cmd_sample(cfg, threads);
    if (command == "verify") return cmd_verify(cfg, threads);
    if (command == "oracle-compare") return cmd_oracle_compare(cfg, threads);
    if (command == "gap") return cmd_gap(cfg, threads);
    throw DomainError("unknown command: " + command);
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ModelError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const CapacityError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
}

}  // namespace glauber
