#include "salo/harness.hpp"

#include "salo/hessian_fd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace salo::harness {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::unique_ptr<Objective> make_problem(const ExperimentConfig& cfg) {
  if (cfg.problem == "quadratic") return std::make_unique<Quadratic>(cfg.quad_coeffs);
  if (cfg.problem == "illcond") return make_ill_conditioned(cfg.illcond_dim, cfg.illcond_cond);
  if (cfg.problem == "rosenbrock") return std::make_unique<Rosenbrock>();
  if (cfg.problem == "multimodal") return std::make_unique<Multimodal>();
  if (cfg.problem == "mlp") {
    return make_mlp(cfg.mlp_layers, cfg.seed, make_dataset(cfg.seed, cfg.samples), cfg.batch);
  }
  throw UsageError("unknown problem id: " + cfg.problem);
}

Stepper make_stepper(const ExperimentConfig& cfg, std::size_t dim) {
  if (cfg.optimizer == "sgd") return make_sgd(dim, cfg.hyper);
  if (cfg.optimizer == "adam") return make_adam(dim, cfg.hyper);
  if (cfg.optimizer == "adamw") return make_adamw(dim, cfg.hyper);
  if (cfg.optimizer == "salo") return make_salo(dim, cfg.salo_hyper);
  throw UsageError("unknown optimizer id: " + cfg.optimizer);
}

namespace {

Summary summarize(const ExperimentConfig& cfg, const Objective& obj, const RunResult& run) {
  Summary s;
  s.optimizer = cfg.optimizer;
  s.diverged = run.diverged;
  s.initial_loss = run.records.empty() ? 0.0 : run.records.front().loss;
  s.best_loss = run.best_loss;
  s.final_loss = run.diverged ? run.records.back().loss : obj.loss(run.final_w);
  for (const auto& r : run.records) {
    if (std::isfinite(r.loss) && r.loss < cfg.threshold) {
      s.steps_to_threshold = r.step;
      break;
    }
  }
  if (const auto* mlp = dynamic_cast<const MlpObjective*>(&obj); mlp && !run.diverged) {
    s.train_loss = mlp->train_loss(run.final_w);
    s.val_loss = mlp->val_loss(run.final_w);
    s.train_acc = mlp->train_accuracy(run.final_w);
    s.val_acc = mlp->val_accuracy(run.final_w);
  }
  return s;
}

}  // namespace

void write_summary_line(const Summary& s, std::ostream& out) {
  out << "# summary,optimizer=" << s.optimizer << ",status=" << (s.diverged ? "diverged" : "ok")
      << ",initial_loss=" << fmt(s.initial_loss) << ",final_loss=" << fmt(s.final_loss)
      << ",best_loss=" << fmt(s.best_loss) << ",steps_to_threshold=" << s.steps_to_threshold;
  if (s.train_loss) {
    out << ",train_loss=" << fmt(*s.train_loss) << ",val_loss=" << fmt(*s.val_loss)
        << ",train_acc=" << fmt(*s.train_acc) << ",val_acc=" << fmt(*s.val_acc);
  }
  out << "\n";
}

void write_run_csv(const std::vector<TrainRecord>& records, const Summary& s, std::ostream& out) {
  out << "step,epoch,loss,lr,beta1,beta3,grad_norm,elapsed_ms\n";
  for (const auto& r : records) {
    out << r.step << ',' << r.epoch << ',' << fmt(r.loss) << ',' << fmt(r.lr) << ','
        << fmt(r.beta1) << ',' << fmt(r.beta3) << ',' << fmt(r.grad_norm) << ','
        << fmt(r.elapsed_ms) << "\n";
  }
  write_summary_line(s, out);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  auto obj = make_problem(cfg);
  Stepper opt = make_stepper(cfg, obj->dim());

  RunOptions opts;
  opts.steps = cfg.steps;
  opts.epochs = cfg.epochs;
  const std::int64_t bpe = static_cast<std::int64_t>(obj->batches_per_epoch());
  const std::int64_t total = cfg.steps > 0 ? cfg.steps : cfg.epochs * bpe;

  std::unique_ptr<FuzzyScheduler> sched;
  if (cfg.scheduler != "off") {
    if (cfg.optimizer != "salo") {
      throw UsageError("fuzzy scheduler requires the salo optimizer");
    }
    SchedulerConfig sc = cfg.sched;
    sc.mode = cfg.scheduler == "table" ? SchedulerMode::table : SchedulerMode::direct;
    if (sc.total_steps <= 1) sc.total_steps = total;
    auto sys = cfg.rules_path
                   ? fuzzy::default_system_with_rules(fuzzy::load_rules_file(*cfg.rules_path))
                   : fuzzy::default_system();
    sched = std::make_unique<FuzzyScheduler>(sc, std::move(sys));
    sched->set_batches_per_epoch(bpe);
    opts.schedule = sched->hook();
  }

  ExperimentResult res;
  res.run = run(opt, *obj, obj->initial_point(), opts);
  res.summary = summarize(cfg, *obj, res.run);

  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path);
    if (!out) throw IoError("cannot open output file: " + cfg.out_path);
    write_run_csv(res.run.records, res.summary, out);
  }
  return res;
}

std::vector<ExperimentResult> compare(const std::vector<ExperimentConfig>& cfgs,
                                      const std::string& out_path) {
  if (cfgs.size() < 2) throw UsageError("compare: need at least 2 configurations");
  for (const auto& c : cfgs) {
    if (c.problem != cfgs.front().problem || c.steps != cfgs.front().steps ||
        c.epochs != cfgs.front().epochs || c.batch != cfgs.front().batch ||
        c.seed != cfgs.front().seed) {
      throw UsageError("compare: configurations must share problem, budget and seed");
    }
  }
  std::vector<ExperimentResult> results;
  results.reserve(cfgs.size());
  for (auto cfg : cfgs) {
    cfg.out_path.clear();  // merged output only
    results.push_back(run_experiment(cfg));
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot open output file: " + out_path);
    out << "optimizer,step,epoch,loss,lr,beta1,beta3,grad_norm,elapsed_ms\n";
    for (std::size_t k = 0; k < cfgs.size(); ++k) {
      for (const auto& r : results[k].run.records) {
        out << cfgs[k].optimizer << ',' << r.step << ',' << r.epoch << ',' << fmt(r.loss) << ','
            << fmt(r.lr) << ',' << fmt(r.beta1) << ',' << fmt(r.beta3) << ',' << fmt(r.grad_norm)
            << ',' << fmt(r.elapsed_ms) << "\n";
      }
    }
    for (const auto& res : results) write_summary_line(res.summary, out);
  }
  return results;
}

int check_hessian(const std::string& problem, const Vec& point, const std::vector<double>& r_list,
                  std::ostream& out) {
  ExperimentConfig cfg;
  cfg.problem = problem;
  auto obj = make_problem(cfg);
  Vec w = point.empty() ? obj->initial_point() : point;
  if (!obj->hess_diag(w)) {
    out << "problem '" << problem << "' has no analytic Hessian diagonal oracle\n";
    return kExitUsage;
  }
  out << "r,mode,max_abs_error\n";
  for (const auto& row : fd_error_report(*obj, w, r_list)) {
    out << fmt(row.r) << ',' << to_string(row.mode) << ',' << fmt(row.max_abs_error) << "\n";
  }
  return kExitOk;
}

int fuzzy_table(const std::string& out_path, std::size_t loss_n, std::size_t iter_n,
                const std::optional<std::string>& rules_path, std::ostream& err) {
  if (loss_n < 2 || iter_n < 2) {
    err << "fuzzy-table: dims must be at least 2x2\n";
    return kExitUsage;
  }
  auto sys = rules_path ? fuzzy::default_system_with_rules(fuzzy::load_rules_file(*rules_path))
                        : fuzzy::default_system();
  const auto table = fuzzy::build_lookup_table(sys, loss_n, iter_n);
  std::ofstream out(out_path);
  if (!out) {
    err << "fuzzy-table: cannot open output file: " << out_path << "\n";
    return kExitIo;
  }
  fuzzy::write_lookup_csv(table, out);
  return kExitOk;
}

}  // namespace salo::harness
