#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "annealab/collective.hpp"
#include "annealab/dynamics.hpp"
#include "annealab/errors.hpp"
#include "annealab/harness.hpp"
#include "annealab/instance.hpp"
#include "annealab/metrics.hpp"
#include "annealab/rng.hpp"
#include "annealab/spectrum.hpp"
#include "annealab/textio.hpp"

using nlohmann::json;

namespace annealab {

namespace {

bool is_static(const std::string& mode) { return mode == "static"; }

double mode_tau(const std::string& mode) { return std::strtod(mode.c_str(), nullptr); }

std::vector<std::uint64_t> feasible_set(const DiagonalProblem& diag) {
  std::vector<std::uint64_t> v;
  for (std::uint64_t z = 0; z < diag.size(); ++z)
    if (diag.feasible[z]) v.push_back(z);
  return v;
}

std::vector<std::uint64_t> optimal_set(const DiagonalProblem& diag) {
  std::vector<std::uint64_t> v;
  for (std::uint64_t z = 0; z < diag.size(); ++z)
    if (diag.optimal[z]) v.push_back(z);
  return v;
}

Trajectory run_mode(const DiagonalProblem& diag, const std::string& mode,
                    const std::vector<TargetSet>& targets, int grid_points) {
  if (is_static(mode)) return adiabatic_trajectory(diag, targets, grid_points);
  return evolve(diag, AnnealSchedule{mode_tau(mode)}, targets, grid_points);
}

double pick_root(const std::vector<double>& roots, const std::string& rule) {
  if (roots.empty()) throw CalibrationError("no calibration roots available");
  if (rule == "lowest") return roots.front();
  if (rule == "highest") return roots.back();
  double best = roots.front();
  for (double r : roots)
    if (std::abs(r) < std::abs(best) || (std::abs(r) == std::abs(best) && r < best)) best = r;
  return best;
}

// Calibrated lambda for one landscape, or the fixed configured value.
double choose_lambda(const DiagonalProblem& diag, const ExperimentConfig& cfg) {
  if (!cfg.lambda_calibrated) return cfg.lambda_value;
  const auto roots =
      calibrate_lambda(diag, cfg.mu_target, cfg.lambda_lo, cfg.lambda_hi);
  return pick_root(roots, cfg.lambda_root);
}

std::string qd_cols(const QdReport& r) {
  return csv_num(r.p0) + "," + csv_num(r.p_max) + "," + csv_num(r.s_max) + "," +
         csv_num(r.p_end) + "," + csv_num(r.qd);
}

// Population mean/std of a group of values.
std::pair<double, double> mean_std(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / v.size())};
}

json config_echo(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = cfg.experiment;
  j["problem"] = {{"kind", cfg.kind}, {"n", cfg.n}, {"c", cfg.c_target}, {"w", cfg.capacity}};
  j["instance_count"] = cfg.instance_count;
  j["master_seed"] = cfg.master_seed;
  j["grid_points"] = cfg.grid_points;
  j["tau_modes"] = cfg.tau_modes;
  if (cfg.lambda_calibrated) {
    j["lambda"] = "calibrated";
    j["mu_target"] = cfg.mu_target;
    j["lambda_root"] = cfg.lambda_root;
    j["lambda_window"] = {cfg.lambda_lo, cfg.lambda_hi};
  } else {
    j["lambda"] = cfg.lambda_value;
  }
  j["bin_width"] = cfg.bin_width;
  j["threads"] = cfg.threads;
  return j;
}

json base_meta(const ExperimentConfig& cfg) {
  json j;
  j["config"] = config_echo(cfg);
  j["prng_id"] = Rng::id();
  j["seed_rule"] = "instance seed = master_seed + running instance index";
  return j;
}

void append_warnings(std::vector<std::string>& log, const std::string& context,
                     const Trajectory& traj) {
  for (const auto& w : traj.meta.warnings) log.push_back(context + ": " + w);
}

// ---------------------------------------------------------------------------
// lambda_mu_map: one QKP/GBP instance, Q_d,f over an absolute (lambda, mu)
// grid, plus the mu*(lambda) boundary curve.

ExperimentResult run_lambda_mu_map(const ExperimentConfig& cfg) {
  ExperimentResult res;
  DiagonalProblem diag0;
  std::string label;
  const std::uint64_t seed = cfg.master_seed;
  if (cfg.kind == "gbp") {
    const auto inst = generate_gbp(cfg.n, cfg.c_target, 1.0, 0.0, seed);
    diag0 = build_diagonal(inst);
    label = instance_label(inst);
  } else {
    const auto inst = generate_qkp(cfg.n, cfg.capacity, 1.0, 0.0, seed);
    diag0 = build_diagonal(inst);
    label = instance_label(inst);
  }

  const auto lambdas = cfg.lambda_grid.values();
  const auto mus = cfg.mu_grid.values();

  std::string boundary = "lambda,mu_star\n";
  for (double l : lambdas) boundary += csv_num(l) + "," + csv_num(mu_star(diag0, l)) + "\n";
  res.extra_files.emplace_back("boundary.csv", boundary);

  const std::vector<std::uint64_t> feas = feasible_set(diag0);
  const std::size_t count = lambdas.size() * mus.size();
  std::vector<std::string> rows(count);
  std::vector<std::vector<std::string>> logs(count);
  parallel_for(count, cfg.threads, [&](std::size_t idx) {
    const double l = lambdas[idx / mus.size()];
    const double mu = mus[idx % mus.size()];
    const auto d = diag0.with_coefficients(mu, l);
    const auto traj = adiabatic_trajectory(d, {{"feasible", feas}}, cfg.grid_points);
    const auto qd = compute_qd(traj.grid, traj.find("feasible").values);
    rows[idx] = label + "," + std::to_string(seed) + "," + csv_num(l) + "," + csv_num(mu) +
                ",static," + csv_num(qd.p0) + "," + csv_num(qd.p_max) + "," +
                csv_num(qd.s_max) + "," + csv_num(qd.p_end) + "," + csv_num(qd.chi) + "," +
                csv_num(qd.qd);
    append_warnings(logs[idx],
                    "lambda=" + csv_num(l) + " mu=" + csv_num(mu), traj);
  });

  res.records_header = "instance_id,instance_seed,lambda,mu,tau_mode,p0,p_max,s_max,p_end,chi,qd_f";
  res.records = std::move(rows);
  for (auto& lg : logs)
    for (auto& line : lg) res.log.push_back(std::move(line));

  json meta = base_meta(cfg);
  meta["lambda_grid"] = {{"lo", cfg.lambda_grid.lo}, {"hi", cfg.lambda_grid.hi},
                         {"points", cfg.lambda_grid.points}};
  meta["mu_grid"] = {{"lo", cfg.mu_grid.lo}, {"hi", cfg.mu_grid.hi}, {"points", cfg.mu_grid.points}};
  meta["instance"] = label;
  res.meta_json = meta.dump(2);
  return res;
}

// ---------------------------------------------------------------------------
// mu_slices: static P_f(s) trajectories at mu = factor * mu* for a calibrated
// lambda, one file per slice.

ExperimentResult run_mu_slices(const ExperimentConfig& cfg) {
  ExperimentResult res;
  DiagonalProblem diag0;
  std::string label;
  const std::uint64_t seed = cfg.master_seed;
  if (cfg.kind == "gbp") {
    const auto inst = generate_gbp(cfg.n, cfg.c_target, 1.0, 0.0, seed);
    diag0 = build_diagonal(inst);
    label = instance_label(inst);
  } else {
    const auto inst = generate_qkp(cfg.n, cfg.capacity, 1.0, 0.0, seed);
    diag0 = build_diagonal(inst);
    label = instance_label(inst);
  }

  const double lambda = choose_lambda(diag0, cfg);
  const double mu_c = mu_star(diag0, lambda);
  res.log.push_back("calibrated lambda=" + csv_num(lambda) + " with mu*=" + csv_num(mu_c));

  res.records_header =
      "instance_id,instance_seed,lambda,mu,mu_factor,tau_mode,"
      "p0_f,p_max_f,s_max_f,p_end_f,qd_f,p0_opt,qd_opt";
  for (double factor : cfg.mu_factors) {
    const double mu = factor * mu_c;
    const auto d = diag0.with_coefficients(mu, lambda);
    auto traj = run_mode(d, cfg.tau_modes.front(),
                         {{"feasible", feasible_set(d)}, {"optimal", optimal_set(d)}},
                         cfg.grid_points);
    traj.meta.instance_id = label;
    traj.meta.seed = seed;
    const auto qf = compute_qd(traj.grid, traj.find("feasible").values);
    const auto qo = compute_qd(traj.grid, traj.find("optimal").values);
    res.records.push_back(label + "," + std::to_string(seed) + "," + csv_num(lambda) + "," +
                          csv_num(mu) + "," + csv_num(factor) + "," + cfg.tau_modes.front() +
                          "," + qd_cols(qf) + "," + csv_num(qo.p0) + "," + csv_num(qo.qd));
    const std::string stem = "slice_mu_" + csv_num(factor);
    res.extra_files.emplace_back(stem + ".csv", traj.csv());
    res.extra_files.emplace_back(stem + ".meta.json", traj.meta_json());
    append_warnings(res.log, "factor=" + csv_num(factor), traj);
  }

  json meta = base_meta(cfg);
  meta["instance"] = label;
  meta["lambda"] = lambda;
  meta["mu_star"] = mu_c;
  meta["mu_factors"] = cfg.mu_factors;
  res.meta_json = meta.dump(2);
  return res;
}

// ---------------------------------------------------------------------------
// Shared mu sweep used by delta_ef_sweep, constraint_sweep and p0_vs_maxqd.
// One work item = one (instance, mu) pair; each yields a row per tau mode.

struct SweepRow {
  std::string instance_id;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  double mu = 0.0;
  double factor = 0.0;
  std::string tau_mode;
  double delta_ef = 0.0;
  QdReport f;
  QdReport opt;
};

struct SweepOutput {
  std::vector<SweepRow> rows;  // ordered by (instance, mu, tau mode)
  std::vector<std::string> log;
};

SweepOutput run_ef_sweep_core(const ExperimentConfig& cfg, int c_target,
                              std::int64_t capacity) {
  struct InstanceCtx {
    DiagonalProblem diag;
    std::string label;
    std::uint64_t seed = 0;
    double lambda = 0.0;
    double mu_c = 0.0;
  };
  std::vector<InstanceCtx> instances(cfg.instance_count);
  SweepOutput out;
  for (int i = 0; i < cfg.instance_count; ++i) {
    auto& ctx = instances[i];
    ctx.seed = cfg.master_seed + static_cast<std::uint64_t>(i);
    if (cfg.kind == "gbp") {
      const auto inst = generate_gbp(cfg.n, c_target, 1.0, 0.0, ctx.seed);
      ctx.diag = build_diagonal(inst);
      ctx.label = instance_label(inst);
    } else {
      const auto inst = generate_qkp(cfg.n, capacity, 1.0, 0.0, ctx.seed);
      ctx.diag = build_diagonal(inst);
      ctx.label = instance_label(inst);
    }
    ctx.lambda = choose_lambda(ctx.diag, cfg);
    ctx.mu_c = mu_star(ctx.diag, ctx.lambda);
    out.log.push_back(ctx.label + ": lambda=" + csv_num(ctx.lambda) +
                      " mu*=" + csv_num(ctx.mu_c));
  }

  const auto factors = cfg.mu_factor_grid.values();
  const std::size_t count = instances.size() * factors.size();
  std::vector<std::vector<SweepRow>> rows(count);
  std::vector<std::vector<std::string>> logs(count);
  parallel_for(count, cfg.threads, [&](std::size_t idx) {
    const auto& ctx = instances[idx / factors.size()];
    const double factor = factors[idx % factors.size()];
    const double mu = factor * ctx.mu_c;
    const auto d = ctx.diag.with_coefficients(mu, ctx.lambda);
    const auto sum = summarize(d);
    const std::vector<TargetSet> targets = {{"feasible", feasible_set(d)},
                                            {"optimal", optimal_set(d)}};
    for (const auto& mode : cfg.tau_modes) {
      const auto traj = run_mode(d, mode, targets, cfg.grid_points);
      SweepRow row;
      row.instance_id = ctx.label;
      row.seed = ctx.seed;
      row.lambda = ctx.lambda;
      row.mu = mu;
      row.factor = factor;
      row.tau_mode = mode;
      row.delta_ef = *sum.delta_e_f;
      row.f = compute_qd(traj.grid, traj.find("feasible").values);
      row.opt = compute_qd(traj.grid, traj.find("optimal").values);
      rows[idx].push_back(std::move(row));
      append_warnings(logs[idx], ctx.label + " mu=" + csv_num(mu) + " tau=" + mode, traj);
    }
  });
  for (auto& group : rows)
    for (auto& r : group) out.rows.push_back(std::move(r));
  for (auto& lg : logs)
    for (auto& line : lg) out.log.push_back(std::move(line));
  return out;
}

std::string sweep_row_csv(const SweepRow& r) {
  return r.instance_id + "," + std::to_string(r.seed) + "," + csv_num(r.lambda) + "," +
         csv_num(r.mu) + "," + csv_num(r.factor) + "," + r.tau_mode + "," +
         csv_num(r.delta_ef) + "," + qd_cols(r.f) + "," + qd_cols(r.opt);
}

const char* kSweepCols =
    "instance_id,instance_seed,lambda,mu,mu_factor,tau_mode,delta_ef,"
    "p0_f,p_max_f,s_max_f,p_end_f,qd_f,p0_opt,p_max_opt,s_max_opt,p_end_opt,qd_opt";

// Binned (delta_ef, qd) aggregates per tau mode and label.
std::vector<std::string> sweep_bins(const std::vector<SweepRow>& rows,
                                    const std::vector<std::string>& modes, double width,
                                    const std::string& prefix) {
  std::vector<std::string> out;
  for (const auto& mode : modes) {
    for (const std::string label : {"feasible", "optimal"}) {
      std::vector<double> xs, ys;
      for (const auto& r : rows) {
        if (r.tau_mode != mode) continue;
        xs.push_back(r.delta_ef);
        ys.push_back(label == "feasible" ? r.f.qd : r.opt.qd);
      }
      for (const auto& b : bin_aggregate(xs, ys, width))
        out.push_back(prefix + mode + "," + label + "," + csv_num(b.center) + "," +
                      csv_num(b.mean) + "," + csv_num(b.stddev) + "," +
                      std::to_string(b.count));
    }
  }
  return out;
}

// Spearman of qd against |delta_ef| over the pooled subset with delta_ef < 0,
// per tau mode. The magnitude axis makes the expected trend a negative
// correlation: qd grows as the feasible class approaches the ground level.
json sweep_trend_meta(const std::vector<SweepRow>& rows,
                      const std::vector<std::string>& modes) {
  json j;
  for (const auto& mode : modes) {
    std::vector<double> gaps, qds;
    for (const auto& r : rows) {
      if (r.tau_mode != mode || !(r.delta_ef < 0)) continue;
      gaps.push_back(std::abs(r.delta_ef));
      qds.push_back(r.f.qd);
    }
    json entry;
    entry["points"] = gaps.size();
    if (gaps.size() >= 3) {
      try {
        entry["spearman_qdf_vs_abs_deltaef"] = spearman(qds, gaps);
      } catch (const DataError&) {
        entry["spearman_qdf_vs_abs_deltaef"] = nullptr;
      }
    }
    j[mode] = entry;
  }
  return j;
}

ExperimentResult run_delta_ef_sweep(const ExperimentConfig& cfg) {
  ExperimentResult res;
  auto sweep = run_ef_sweep_core(cfg, cfg.c_target, cfg.capacity);
  res.records_header = kSweepCols;
  for (const auto& r : sweep.rows) res.records.push_back(sweep_row_csv(r));
  res.bins_header = "tau_mode,label,bin_center,mean_qd,std_qd,count";
  res.bins = sweep_bins(sweep.rows, cfg.tau_modes, cfg.bin_width, "");
  res.log = std::move(sweep.log);

  json meta = base_meta(cfg);
  meta["mu_factor_grid"] = {{"lo", cfg.mu_factor_grid.lo}, {"hi", cfg.mu_factor_grid.hi},
                            {"points", cfg.mu_factor_grid.points}};
  meta["trends"] = sweep_trend_meta(sweep.rows, cfg.tau_modes);
  res.meta_json = meta.dump(2);
  return res;
}

ExperimentResult run_constraint_sweep(const ExperimentConfig& cfg) {
  ExperimentResult res;
  res.records_header = std::string("constraint,") + kSweepCols;
  res.bins_header = "constraint,tau_mode,label,bin_center,mean_qd,std_qd,count";
  json families = json::array();

  const auto run_family = [&](const std::string& tag, int c, std::int64_t w) {
    auto sweep = run_ef_sweep_core(cfg, c, w);
    for (const auto& r : sweep.rows) res.records.push_back(tag + "," + sweep_row_csv(r));
    for (auto& b : sweep_bins(sweep.rows, cfg.tau_modes, cfg.bin_width, tag + ","))
      res.bins.push_back(std::move(b));
    for (auto& line : sweep.log) res.log.push_back(tag + ": " + std::move(line));
    json fam;
    fam["constraint"] = tag;
    fam["trends"] = sweep_trend_meta(sweep.rows, cfg.tau_modes);
    families.push_back(fam);
  };

  if (cfg.kind == "gbp") {
    for (int c : cfg.c_values) {
      if ((cfg.n + c) % 2 != 0) {
        res.log.push_back("c=" + std::to_string(c) +
                          ": skipped, no feasible states at this parity");
        continue;
      }
      run_family(std::to_string(c), c, 0);
    }
  } else {
    for (std::int64_t w : cfg.w_values) run_family(std::to_string(w), 0, w);
  }

  json meta = base_meta(cfg);
  meta["families"] = families;
  res.meta_json = meta.dump(2);
  return res;
}

ExperimentResult run_p0_vs_maxqd(const ExperimentConfig& cfg) {
  ExperimentResult res;
  res.records_header =
      "instance_id,instance_seed,constraint,lambda,tau_mode,mu_lo,mu_hi,"
      "p0_f,max_qd_f,p0_opt,max_qd_opt";

  struct Point {
    std::string row;
    double p0_f, max_f, p0_opt, max_opt;
  };
  std::vector<Point> points;

  const auto absorb = [&](const std::string& tag, int c, std::int64_t w) {
    auto sweep = run_ef_sweep_core(cfg, c, w);
    for (auto& line : sweep.log) res.log.push_back(tag + ": " + std::move(line));
    // rows arrive ordered by (instance, mu); fold to one point per instance
    std::map<std::string, std::vector<const SweepRow*>> by_instance;
    std::vector<std::string> order;
    for (const auto& r : sweep.rows) {
      if (!by_instance.count(r.instance_id)) order.push_back(r.instance_id);
      by_instance[r.instance_id].push_back(&r);
    }
    for (const auto& id : order) {
      const auto& rs = by_instance[id];
      Point p;
      p.p0_f = rs.front()->f.p0;
      p.p0_opt = rs.front()->opt.p0;
      p.max_f = 0.0;
      p.max_opt = 0.0;
      double mu_lo = rs.front()->mu, mu_hi = rs.front()->mu;
      for (const auto* r : rs) {
        p.max_f = std::max(p.max_f, r->f.qd);
        p.max_opt = std::max(p.max_opt, r->opt.qd);
        mu_lo = std::min(mu_lo, r->mu);
        mu_hi = std::max(mu_hi, r->mu);
      }
      p.row = id + "," + std::to_string(rs.front()->seed) + "," + tag + "," +
              csv_num(rs.front()->lambda) + "," + rs.front()->tau_mode + "," +
              csv_num(mu_lo) + "," + csv_num(mu_hi) + "," + csv_num(p.p0_f) + "," +
              csv_num(p.max_f) + "," + csv_num(p.p0_opt) + "," + csv_num(p.max_opt);
      points.push_back(std::move(p));
    }
  };

  if (cfg.kind == "gbp") {
    for (int c : cfg.c_values) {
      if ((cfg.n + c) % 2 != 0) {
        res.log.push_back("c=" + std::to_string(c) +
                          ": skipped, no feasible states at this parity");
        continue;
      }
      absorb(std::to_string(c), c, 0);
    }
  } else {
    for (std::int64_t w : cfg.w_values) absorb(std::to_string(w), 0, w);
  }

  for (const auto& p : points) res.records.push_back(p.row);

  // group by identical printed P(0); the 12-digit key absorbs solver roundoff
  // that would otherwise split mathematically equal state-count ratios
  res.bins_header = "label,p0,mean_max_qd,std_max_qd,count";
  for (const std::string label : {"feasible", "optimal"}) {
    std::map<double, std::vector<double>> groups;
    for (const auto& p : points) {
      const bool feas = label == "feasible";
      const double key = std::strtod(csv_num(feas ? p.p0_f : p.p0_opt).c_str(), nullptr);
      groups[key].push_back(feas ? p.max_f : p.max_opt);
    }
    for (const auto& [p0, vals] : groups) {
      const auto [mean, sd] = mean_std(vals);
      res.bins.push_back(label + "," + csv_num(p0) + "," + csv_num(mean) + "," +
                         csv_num(sd) + "," + std::to_string(vals.size()));
    }
  }

  json meta = base_meta(cfg);
  meta["points"] = points.size();
  res.meta_json = meta.dump(2);
  return res;
}

// ---------------------------------------------------------------------------
// delta_ehc_scan: random Ising instances, Q_d,e1 and s_max against the
// classical gap; degenerate gs/e1 levels are skipped and logged.

ExperimentResult run_delta_ehc_scan(const ExperimentConfig& cfg) {
  ExperimentResult res;
  res.records_header =
      "instance_id,instance_seed,kind,tau_mode,delta_ehc,p0_e1,p_max_e1,s_max_e1,p_end_e1,qd_e1";

  struct Item {
    IsingKind kind;
    std::uint64_t seed;
    std::string kind_name;
  };
  std::vector<Item> items;
  std::uint64_t next = 0;
  for (const auto& [kind, name] :
       {std::pair{IsingKind::FM, "fm"}, std::pair{IsingKind::AF, "af"}}) {
    for (int i = 0; i < cfg.instance_count; ++i)
      items.push_back({kind, cfg.master_seed + next++, name});
  }

  struct Outcome {
    std::vector<std::string> rows;
    std::vector<std::string> log;
    double gap = 0.0, qd = 0.0, smax = 0.0;
    bool kept = false;
    std::string kind_name;
  };
  std::vector<Outcome> outcomes(items.size());
  parallel_for(items.size(), cfg.threads, [&](std::size_t idx) {
    const auto& it = items[idx];
    auto& out = outcomes[idx];
    out.kind_name = it.kind_name;
    const auto inst = generate_ising(cfg.n, it.kind, it.seed);
    const auto diag = build_diagonal(inst);
    const auto sum = summarize(diag);
    if (sum.gs_states.size() > 1 || sum.e1_states.size() > 1) {
      out.log.push_back(instance_label(inst) + ": skipped, degenerate gs or e1 level");
      return;
    }
    for (const auto& mode : cfg.tau_modes) {
      const auto traj = run_mode(diag, mode, {{"e1", sum.e1_states}}, cfg.grid_points);
      const auto qd = compute_qd(traj.grid, traj.find("e1").values);
      out.rows.push_back(instance_label(inst) + "," + std::to_string(it.seed) + "," +
                         it.kind_name + "," + mode + "," + csv_num(sum.delta_e_hc) + "," +
                         qd_cols(qd));
      if (is_static(mode) || cfg.tau_modes.size() == 1) {
        out.gap = sum.delta_e_hc;
        out.qd = qd.qd;
        out.smax = qd.s_max;
        out.kept = true;
      }
      append_warnings(out.log, instance_label(inst) + " tau=" + mode, traj);
    }
  });

  json trends;
  for (const std::string kind : {"fm", "af"}) {
    std::vector<double> gaps, qds, smaxs;
    for (const auto& o : outcomes) {
      if (!o.kept || o.kind_name != kind) continue;
      gaps.push_back(o.gap);
      qds.push_back(o.qd);
      smaxs.push_back(o.smax);
    }
    json entry;
    entry["instances"] = gaps.size();
    if (gaps.size() >= 3) {
      entry["spearman_qde1_vs_deltaehc"] = spearman(qds, gaps);
      entry["spearman_smax_vs_deltaehc"] = spearman(smaxs, gaps);
    }
    trends[kind] = entry;
  }

  for (auto& o : outcomes) {
    for (auto& r : o.rows) res.records.push_back(std::move(r));
    for (auto& l : o.log) res.log.push_back(std::move(l));
  }

  json meta = base_meta(cfg);
  meta["trends"] = trends;
  res.meta_json = meta.dump(2);
  return res;
}

// ---------------------------------------------------------------------------
// hd_scan: every ordered (gs, e1) reassignment of one base spectrum per kind,
// mean Q_d,e1 per Hamming distance.

ExperimentResult run_hd_scan(const ExperimentConfig& cfg) {
  ExperimentResult res;
  res.records_header =
      "instance_id,instance_seed,kind,gs_state,e1_state,hd,tau_mode,"
      "p0_e1,p_max_e1,s_max_e1,p_end_e1,qd_e1";
  res.bins_header = "kind,hd,mean_qd,std_qd,count";

  json trends;
  std::uint64_t kind_index = 0;
  for (const auto& [kind, name] :
       {std::pair{IsingKind::FM, "fm"}, std::pair{IsingKind::AF, "af"}}) {
    const std::uint64_t seed = cfg.master_seed + kind_index++;
    const auto inst = generate_ising(cfg.n, kind, seed);
    const auto diag = build_diagonal(inst);
    const std::string label = instance_label(inst);

    const std::uint64_t dim = diag.size();
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    for (std::uint64_t g = 0; g < dim; ++g)
      for (std::uint64_t e = 0; e < dim; ++e)
        if (g != e) pairs.emplace_back(g, e);

    std::vector<std::string> rows(pairs.size());
    std::vector<std::vector<std::string>> logs(pairs.size());
    std::vector<int> hds(pairs.size());
    std::vector<double> qds(pairs.size());
    parallel_for(pairs.size(), cfg.threads, [&](std::size_t idx) {
      const auto [g, e] = pairs[idx];
      const auto permuted = permute_spectrum(diag, g, e);
      const auto traj =
          run_mode(permuted, cfg.tau_modes.front(), {{"e1", {e}}}, cfg.grid_points);
      const auto qd = compute_qd(traj.grid, traj.find("e1").values);
      const int hd = hamming_distance(cfg.n, g, e);
      hds[idx] = hd;
      qds[idx] = qd.qd;
      rows[idx] = label + "," + std::to_string(seed) + "," + name + "," + std::to_string(g) +
                  "," + std::to_string(e) + "," + std::to_string(hd) + "," +
                  cfg.tau_modes.front() + "," + qd_cols(qd);
      append_warnings(logs[idx],
                      label + " gs=" + std::to_string(g) + " e1=" + std::to_string(e), traj);
    });

    for (auto& r : rows) res.records.push_back(std::move(r));
    for (auto& lg : logs)
      for (auto& line : lg) res.log.push_back(std::move(line));

    std::map<int, std::vector<double>> by_hd;
    for (std::size_t i = 0; i < pairs.size(); ++i) by_hd[hds[i]].push_back(qds[i]);
    json means;
    for (const auto& [hd, vals] : by_hd) {
      const auto [mean, sd] = mean_std(vals);
      res.bins.push_back(std::string(name) + "," + std::to_string(hd) + "," + csv_num(mean) +
                         "," + csv_num(sd) + "," + std::to_string(vals.size()));
      means[std::to_string(hd)] = mean;
    }
    trends[name] = {{"mean_qd_by_hd", means}, {"pairs", pairs.size()}};
  }

  json meta = base_meta(cfg);
  meta["trends"] = trends;
  res.meta_json = meta.dump(2);
  return res;
}

// ---------------------------------------------------------------------------
// size_scan: collective-model Q_d,e1 against 1/N in the adiabatic limit.

ExperimentResult run_size_scan(const ExperimentConfig& cfg) {
  ExperimentResult res;
  res.records_header =
      "kind,n,inv_n,j,h,master_seed,tau_mode,k_gs,k_e1,p0_e1,p_max_e1,s_max_e1,p_end_e1,qd_e1";

  struct Item {
    std::string kind;
    double j;
    int n;
  };
  std::vector<Item> items;
  for (const auto& [kind, j] : {std::pair{"fm", cfg.j_fm}, std::pair{"af", cfg.j_af}})
    for (int n : cfg.sizes) items.push_back({kind, j, n});

  std::vector<std::string> rows(items.size());
  std::vector<std::vector<std::string>> logs(items.size());
  std::map<std::pair<std::string, int>, double> qd_by;
  std::vector<double> qd_slot(items.size());
  parallel_for(items.size(), cfg.threads, [&](std::size_t idx) {
    const auto& it = items[idx];
    const auto model = build_collective(it.n, it.j, cfg.h_field);
    const auto levels = lowest_levels(model);
    const auto mode = cfg.tau_modes.front();
    Trajectory traj;
    if (is_static(mode)) {
      traj = collective_static_trajectory(
          model, {{"e1", {static_cast<std::uint64_t>(levels.k_e1)}}}, cfg.grid_points);
    } else {
      traj = collective_evolve(model, AnnealSchedule{mode_tau(mode)},
                               {{"e1", {static_cast<std::uint64_t>(levels.k_e1)}}},
                               cfg.grid_points);
    }
    const auto qd = compute_qd(traj.grid, traj.find("e1").values);
    qd_slot[idx] = qd.qd;
    rows[idx] = it.kind + "," + std::to_string(it.n) + "," + csv_num(1.0 / it.n) + "," +
                csv_num(it.j) + "," + csv_num(cfg.h_field) + "," +
                std::to_string(cfg.master_seed) + "," + mode + "," +
                std::to_string(levels.k_gs) + "," + std::to_string(levels.k_e1) + "," +
                qd_cols(qd);
    append_warnings(logs[idx], it.kind + " n=" + std::to_string(it.n), traj);
  });

  for (std::size_t i = 0; i < items.size(); ++i)
    qd_by[{items[i].kind, items[i].n}] = qd_slot[i];
  res.records = std::move(rows);
  for (auto& lg : logs)
    for (auto& line : lg) res.log.push_back(std::move(line));

  json trends;
  for (const std::string kind : {"fm", "af"}) {
    json entry;
    const int n_max = *std::max_element(cfg.sizes.begin(), cfg.sizes.end());
    entry["qd_at_largest_n"] = qd_by[{kind, n_max}];
    if (qd_by.count({kind, n_max / 2}))
      entry["last_doubling_change"] = std::abs(qd_by[{kind, n_max}] - qd_by[{kind, n_max / 2}]);
    trends[kind] = entry;
  }
  json meta = base_meta(cfg);
  meta["trends"] = trends;
  res.meta_json = meta.dump(2);
  return res;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.experiment == "lambda_mu_map") return run_lambda_mu_map(cfg);
  if (cfg.experiment == "mu_slices") return run_mu_slices(cfg);
  if (cfg.experiment == "delta_ef_sweep") return run_delta_ef_sweep(cfg);
  if (cfg.experiment == "constraint_sweep") return run_constraint_sweep(cfg);
  if (cfg.experiment == "p0_vs_maxqd") return run_p0_vs_maxqd(cfg);
  if (cfg.experiment == "delta_ehc_scan") return run_delta_ehc_scan(cfg);
  if (cfg.experiment == "hd_scan") return run_hd_scan(cfg);
  if (cfg.experiment == "size_scan") return run_size_scan(cfg);
  throw ConfigError("unknown experiment: " + cfg.experiment);
}

// ---------------------------------------------------------------------------
// CLI spot checks.

namespace {

OracleOutcome oracle_combinatorics() {
  OracleOutcome o;
  o.pass = true;
  const auto gbp = generate_gbp(6, 0, 1.0, 0.0, 1);
  const auto diag = build_diagonal(gbp);
  const std::size_t feas = feasible_set(diag).size();
  o.lines.push_back("gbp n=6 c=0 feasible count: " + std::to_string(feas) + " (want 20)");
  o.pass = o.pass && feas == 20;
  const double p0 = static_cast<double>(feas) / 64.0;
  o.lines.push_back("gbp n=6 c=0 P_f(0): " + csv_num(p0) + " (want 0.3125)");
  o.pass = o.pass && p0 == 0.3125;

  for (std::int64_t w = 1; w <= 4; ++w) {
    const auto qkp = generate_qkp(5, w, 1.0, 0.0, 2);
    const int d = qkp.slack_bits;
    bool sound = true;
    for (std::uint64_t x = 0; x < 32; ++x) {
      std::int64_t load = 0;
      for (int i = 0; i < 5; ++i)
        if (!((x >> i) & 1)) load += qkp.weights[i];
      int zeros = 0;
      for (std::uint64_t y = 0; y < (std::uint64_t{1} << d); ++y)
        if (evaluate_energy(qkp, x | (y << 5)).constraint == 0.0) ++zeros;
      sound = sound && (load <= w ? zeros == 1 : zeros == 0);
    }
    o.lines.push_back("qkp n=5 W=" + std::to_string(w) +
                      " slack encoding sound: " + (sound ? "yes" : "NO"));
    o.pass = o.pass && sound;
  }
  return o;
}

OracleOutcome oracle_mu_star() {
  OracleOutcome o;
  o.pass = true;
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (const bool use_gbp : {true, false}) {
      const auto diag = use_gbp ? build_diagonal(generate_gbp(6, 2, 1.0, 0.0, seed))
                                : build_diagonal(generate_qkp(5, 2, 1.0, 0.0, seed));
      for (double lambda : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        const double mu_c = mu_star(diag, lambda);
        if (mu_c <= 0) continue;
        const auto above = summarize(diag.with_coefficients(mu_c * (1 + 1e-6), lambda));
        const auto below = summarize(diag.with_coefficients(mu_c * (1 - 1e-6), lambda));
        const auto d_above = diag.with_coefficients(mu_c * (1 + 1e-6), lambda);
        bool all_above = true;
        for (auto z : above.gs_states) all_above = all_above && d_above.optimal[z];
        const auto d_below = diag.with_coefficients(mu_c * (1 - 1e-6), lambda);
        bool all_below = true;
        for (auto z : below.gs_states) all_below = all_below && d_below.optimal[z];
        if (!all_above || all_below) {
          o.pass = false;
          o.lines.push_back("threshold fails to flip at mu*=" + csv_num(mu_c) +
                            " lambda=" + csv_num(lambda));
        }
        ++checked;
      }
    }
  }
  o.lines.push_back("threshold flip verified at " + std::to_string(checked) +
                    " (instance, lambda) points");
  return o;
}

OracleOutcome oracle_integrator() {
  OracleOutcome o;
  o.pass = true;
  for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
    const auto diag = build_diagonal(generate_ising(3, IsingKind::AF, seed));
    const AnnealSchedule sch{10.0};
    const auto full = evolve_final_state(diag, sch, 2);
    const auto half = evolve_final_state(diag, sch, 2, 0.0005);
    const double drift = std::abs(full.norm() - 1.0);
    double diff = 0.0;
    for (int z = 0; z < 8; ++z)
      diff = std::max(diff, std::abs(std::norm(full.amplitudes[z]) -
                                     std::norm(half.amplitudes[z])));
    o.lines.push_back("seed " + std::to_string(seed) + ": norm drift " + csv_num(drift) +
                      ", half-step probability shift " + csv_num(diff));
    o.pass = o.pass && drift < 1e-9 && diff < 1e-6;
  }
  return o;
}

OracleOutcome oracle_collective() {
  OracleOutcome o;
  o.pass = true;
  for (double j : {1.0, -1.0}) {
    const int n = 4;
    IsingInstance inst;
    inst.n = n;
    inst.kind = j >= 0 ? IsingKind::FM : IsingKind::AF;
    inst.scale_by_n = true;
    inst.couplings.assign(n * (n - 1) / 2, j);
    inst.fields.assign(n, 2.5);
    const auto diag = build_diagonal(inst);
    const auto model = build_collective(n, j, 2.5);

    std::vector<TargetSet> full_t, coll_t;
    for (int k = 0; k <= n; ++k) {
      full_t.push_back({"k" + std::to_string(k), level_states(n, k)});
      coll_t.push_back({"k" + std::to_string(k), {static_cast<std::uint64_t>(k)}});
    }
    const auto f_static = adiabatic_trajectory(diag, full_t, 101);
    const auto c_static = collective_static_trajectory(model, coll_t, 101);
    const auto f_run = evolve(diag, AnnealSchedule{100.0}, full_t, 51);
    const auto c_run = collective_evolve(model, AnnealSchedule{100.0}, coll_t, 51);
    double worst = 0.0;
    for (int k = 0; k <= n; ++k) {
      const auto& label = full_t[k].label;
      const auto sup = [&](const Trajectory& a, const Trajectory& b) {
        double m = 0.0;
        const auto& va = a.find(label).values;
        const auto& vb = b.find(label).values;
        for (std::size_t i = 0; i < va.size(); ++i) m = std::max(m, std::abs(va[i] - vb[i]));
        return m;
      };
      worst = std::max({worst, sup(f_static, c_static), sup(f_run, c_run)});
    }
    o.lines.push_back(std::string("j=") + csv_num(j) +
                      ": worst level-probability mismatch " + csv_num(worst));
    o.pass = o.pass && worst < 1e-8;
  }
  return o;
}

}  // namespace

std::vector<std::string> oracle_names() {
  return {"combinatorics", "mu_star", "integrator", "collective"};
}

OracleOutcome run_oracle(const std::string& name) {
  if (name == "combinatorics") return oracle_combinatorics();
  if (name == "mu_star") return oracle_mu_star();
  if (name == "integrator") return oracle_integrator();
  if (name == "collective") return oracle_collective();
  throw ConfigError("unknown oracle \"" + name + "\"; available: combinatorics, mu_star, "
                    "integrator, collective");
}

}  // namespace annealab
