#include "relulab/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "relulab/error.hpp"
#include "relulab/knapsack.hpp"
#include "relulab/text_format.hpp"

namespace relulab {

MilpConfig bench_milp_config(double time_limit_s) {
  MilpConfig cfg;
  cfg.gap_rel = 1e-10;
  cfg.time_limit_s = time_limit_s;
  return cfg;
}

int BenchReport::limit_reached() const {
  int count = 0;
  for (const BenchRun& r : runs) count += r.status == MilpStatus::LimitReached;
  return count;
}

namespace {

struct Job {
  int n;
  std::uint64_t seed;
  Encoding encoding;
};

BenchRun run_one(const ReluNet& net, const BenchOptions& opt, const Job& job, const std::string& hash) {
  using Clock = std::chrono::steady_clock;
  BenchRun run;
  run.n = job.n;
  run.seed = job.seed;
  run.encoding = job.encoding;
  run.config_hash = hash;
  run.workers = opt.workers;

  const auto t0 = Clock::now();
  const KnapsackInstance inst = generate_instance(job.n, job.seed);
  const KnapsackModel km = build_model(inst, net, job.encoding, opt.big_m);
  const auto t1 = Clock::now();
  const MilpResult res = solve_milp(km.model, opt.milp);
  const auto t2 = Clock::now();

  run.rng = inst.rng;
  run.status = res.status;
  run.objective = res.objective;
  run.build_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  run.solve_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  run.simplex_iterations = res.simplex_iterations;
  run.nodes = res.nodes;
  return run;
}

}  // namespace

BenchReport run_bench(const ReluNet& net, const BenchOptions& options) {
  if (options.workers < 1) throw Error(ErrorCode::PreconditionViolated, "workers must be >= 1");
  if (options.seeds < 0) throw Error(ErrorCode::PreconditionViolated, "seeds must be >= 0");
  for (int n : options.n_list) {
    if (n < 1) throw Error(ErrorCode::PreconditionViolated, "n must be >= 1");
    if (n > kBenchDefaultMaxN && !options.allow_large) {
      throw Error(ErrorCode::PreconditionViolated,
                  "n = " + std::to_string(n) + " exceeds " + std::to_string(kBenchDefaultMaxN) +
                      "; pass --allow-large to run it anyway");
    }
  }

  std::vector<Job> jobs;
  for (int n : options.n_list) {
    for (int k = 0; k < options.seeds; ++k) {
      for (Encoding e : options.encodings) jobs.push_back({n, options.first_seed + k, e});
    }
  }

  BenchReport report;
  report.include_build = options.include_build;
  report.runs.resize(jobs.size());
  const std::string hash = options.milp.hash();

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size() || failed.load()) return;
      try {
        report.runs[i] = run_one(net, options, jobs[i], hash);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  const int threads = std::min<int>(options.workers, static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  report.aggregates = aggregate_runs(report.runs);
  return report;
}

std::vector<BenchAggregate> aggregate_runs(const std::vector<BenchRun>& runs) {
  std::vector<BenchAggregate> out;
  auto find = [&](int n, Encoding e) -> BenchAggregate& {
    for (BenchAggregate& a : out) {
      if (a.n == n && a.encoding == e) return a;
    }
    out.push_back({});
    out.back().n = n;
    out.back().encoding = e;
    return out.back();
  };
  for (const BenchRun& r : runs) {
    BenchAggregate& a = find(r.n, r.encoding);
    ++a.runs;
    if (r.status == MilpStatus::LimitReached) ++a.limit_reached;
    if (r.status != MilpStatus::Optimal) continue;
    ++a.solved;
    a.mean_ms += r.solve_ms;
    a.mean_total_ms += r.solve_ms + r.build_ms;
  }
  for (BenchAggregate& a : out) {
    if (a.solved == 0) continue;
    a.mean_ms /= a.solved;
    a.mean_total_ms /= a.solved;
    double ss = 0.0;
    for (const BenchRun& r : runs) {
      if (r.n != a.n || r.encoding != a.encoding || r.status != MilpStatus::Optimal) continue;
      ss += (r.solve_ms - a.mean_ms) * (r.solve_ms - a.mean_ms);
    }
    a.stddev_ms = std::sqrt(ss / a.solved);
  }
  return out;
}

std::string runs_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "n,seed,encoding,status,objective,solve_ms,simplex_iterations,bnb_nodes,config_hash,rng,workers";
  if (report.include_build) out << ",build_ms,total_ms";
  out << "\n";
  for (const BenchRun& r : report.runs) {
    out << r.n << ',' << r.seed << ',' << to_string(r.encoding) << ',' << to_string(r.status) << ','
        << format_number(r.objective) << ',' << format_number(r.solve_ms) << ',' << r.simplex_iterations << ','
        << r.nodes << ',' << r.config_hash << ',' << r.rng << ',' << r.workers;
    if (report.include_build) out << ',' << format_number(r.build_ms) << ',' << format_number(r.solve_ms + r.build_ms);
    out << "\n";
  }
  return out.str();
}

std::string aggregate_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "n,encoding,runs,solved,limit_reached,mean_solve_ms,stddev_solve_ms_population";
  if (report.include_build) out << ",mean_total_ms";
  out << "\n";
  for (const BenchAggregate& a : report.aggregates) {
    out << a.n << ',' << to_string(a.encoding) << ',' << a.runs << ',' << a.solved << ',' << a.limit_reached << ',';
    if (a.solved > 0) {
      out << format_number(a.mean_ms) << ',' << format_number(a.stddev_ms);
    } else {
      out << "nan,nan";
    }
    if (report.include_build) out << ',' << (a.solved > 0 ? format_number(a.mean_total_ms) : std::string("nan"));
    out << "\n";
  }
  return out.str();
}

}  // namespace relulab
