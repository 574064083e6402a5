// Timing harness for the parallel kernels against their serial reference.
// Each workload runs both execution policies, checks that the results match
// exactly, and reports the speedup.

#include "asel/pipeline.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

namespace {

using asel::Exec;

double time_once(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void report_row(const char* name, double serial, double parallel,
                bool identical) {
  std::printf("%-28s %10.3fs %10.3fs %8.2fx   %s\n", name, serial, parallel,
              serial / parallel, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel benchmark"};
  int threads = 0;
  int scale = 1;
  app.add_option("--threads", threads, "parallel worker count (0 = hardware)");
  app.add_option("--scale", scale, "workload multiplier");
  CLI11_PARSE(app, argc, argv);
  asel::set_thread_count(threads);

  std::printf("%-28s %11s %11s %9s\n", "workload", "serial", "parallel",
              "speedup");

  {
    const auto spec = asel::dgp::preset("symmetric");
    asel::CoverageReport a, b;
    const double ts = time_once([&] {
      a = asel::coverage_experiment(spec, asel::Subset{0}, 1000, 200 * scale,
                                    0.95, 7, Exec::Serial);
    });
    const double tp = time_once([&] {
      b = asel::coverage_experiment(spec, asel::Subset{0}, 1000, 200 * scale,
                                    0.95, 7, Exec::Parallel);
    });
    report_row("coverage (200 reps)", ts, tp,
               a.covered == b.covered && a.mean_reward == b.mean_reward);
  }

  {
    const auto spec = asel::dgp::preset("symmetric");
    asel::BiasScalingReport a, b;
    const double ts = time_once([&] {
      a = asel::bias_scaling_experiment(spec, asel::Subset{0},
                                        {0.05, 0.1, 0.2, 0.4}, 50 * scale,
                                        2000, 7, Exec::Serial);
    });
    const double tp = time_once([&] {
      b = asel::bias_scaling_experiment(spec, asel::Subset{0},
                                        {0.05, 0.1, 0.2, 0.4}, 50 * scale,
                                        2000, 7, Exec::Parallel);
    });
    report_row("bias scaling (4x50 reps)", ts, tp, a.slope == b.slope);
  }

  {
    const auto ds =
        asel::dgp::sample(asel::dgp::preset("planted-pair"), 4000 * scale, 7);
    const auto eval = asel::linear_reward_evaluator(ds, 0.0);
    asel::SelectionResult a, b;
    const double ts = time_once([&] {
      a = asel::select_bruteforce(eval, ds.j_count(), 3, Exec::Serial);
    });
    const double tp = time_once([&] {
      b = asel::select_bruteforce(eval, ds.j_count(), 3, Exec::Parallel);
    });
    report_row("bruteforce rewards (C(10,3))", ts, tp, a.subset == b.subset);
  }

  {
    const auto ds = asel::dgp::sample(asel::dgp::preset("single-informative"),
                                      4000, 7);
    asel::PipelineConfig cfg;
    cfg.rule = "singleton-linear";
    cfg.n_sel = 1;
    cfg.seed = 7;
    cfg.n_splits = 10 * scale;
    asel::EvalReport a, b;
    const double ts =
        time_once([&] { a = asel::run_pipeline(ds, cfg, Exec::Serial); });
    const double tp =
        time_once([&] { b = asel::run_pipeline(ds, cfg, Exec::Parallel); });
    report_row("pipeline (10 splits)", ts, tp,
               a.rule.mae.mean == b.rule.mae.mean);
  }

  return 0;
}
