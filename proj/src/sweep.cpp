#include "vodsim/sweep.hpp"

#include <atomic>
#include <sstream>
#include <thread>

#include "vodsim/errors.hpp"
#include "vodsim/metrics.hpp"

namespace vodsim {

Scenario sweep_point(const Scenario& base, std::uint32_t node_count,
                     std::uint64_t seed) {
  Scenario s = base;
  s.seed = seed;
  if (node_count != base.node_count) {
    if (s.layout.positions || s.layout.waypoints) {
      throw ConfigError("sweep: explicit positions/waypoints cannot be resized; "
                        "use a square layout");
    }
    if (s.start_offsets) {
      throw ConfigError("sweep: explicit start_offsets cannot be resized; "
                        "use offset_range_s");
    }
    s.node_count = node_count;
  }
  s.validate();
  return s;
}

SweepResult run_sweep(const Scenario& base, const std::vector<std::uint32_t>& counts,
                      std::uint32_t seeds_per_point, unsigned threads) {
  if (counts.empty()) throw ConfigError("sweep: need at least one node count");
  if (seeds_per_point < 1) throw ConfigError("sweep: seeds_per_point must be >= 1");

  struct Job {
    std::uint32_t count;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::uint32_t c : counts) {
    for (std::uint32_t k = 0; k < seeds_per_point; ++k) {
      jobs.push_back(Job{c, base.seed + k});
    }
  }
  // Validate every cell up front so a bad point fails before any work.
  for (const Job& job : jobs) sweep_point(base, job.count, job.seed);

  std::vector<SweepRow> rows(jobs.size());
  if (threads == 0) {
    threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
  }
  if (threads > jobs.size()) threads = static_cast<unsigned>(jobs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Scenario point = sweep_point(base, jobs[i].count, jobs[i].seed);
      const Report report = run(point);
      const RunSummary s = summarize(report);
      rows[i] = SweepRow{jobs[i].count,        jobs[i].seed,
                         s.improvement.value_or(0.0), s.mean_startup_s,
                         s.mean_stall_total_s, report.global.truncated};
    }
  };

  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  SweepResult result;
  result.rows = std::move(rows);
  for (std::uint32_t c : counts) {
    SweepCountMean m;
    m.node_count = c;
    std::size_t n = 0;
    for (const SweepRow& r : result.rows) {
      if (r.node_count != c) continue;
      m.mean_improvement += r.improvement;
      m.mean_startup_s += r.mean_startup_s;
      m.mean_stall_s += r.mean_stall_s;
      ++n;
    }
    m.mean_improvement /= static_cast<double>(n);
    m.mean_startup_s /= static_cast<double>(n);
    m.mean_stall_s /= static_cast<double>(n);
    result.by_count.push_back(m);
  }
  return result;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "node_count,seed,improvement,mean_startup_s,mean_stall_s,truncated\n";
  for (const SweepRow& r : result.rows) {
    out << r.node_count << ',' << r.seed << ',' << r.improvement << ','
        << r.mean_startup_s << ',' << r.mean_stall_s << ',' << (r.truncated ? 1 : 0)
        << '\n';
  }
  for (const SweepCountMean& m : result.by_count) {
    out << m.node_count << ",mean," << m.mean_improvement << ',' << m.mean_startup_s
        << ',' << m.mean_stall_s << ",\n";
  }
  return out.str();
}

}  // namespace vodsim
