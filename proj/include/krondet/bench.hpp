#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "krondet/closed_form.hpp"
#include "krondet/dense_oracle.hpp"
#include "krondet/generator.hpp"

namespace krondet {

struct DurationStats {
  std::vector<double> samples_ns;
  double min_ns = 0.0;
  double median_ns = 0.0;
  double max_ns = 0.0;
};

namespace detail {

inline DurationStats summarize(std::vector<double> samples) {
  DurationStats s;
  s.samples_ns = std::move(samples);
  std::vector<double> sorted = s.samples_ns;
  std::sort(sorted.begin(), sorted.end());
  s.min_ns = sorted.front();
  s.max_ns = sorted.back();
  const std::size_t mid = sorted.size() / 2;
  s.median_ns = (sorted.size() % 2 != 0)
                    ? sorted[mid]
                    : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return s;
}

// Times `body` reps times after one discarded warm-up run. The result of
// every run feeds a volatile sink so the work cannot be optimized away.
template <class Fn>
DurationStats time_runs(int reps, Fn&& body) {
  if (reps < 1) throw validation_error("repetitions must be >= 1");
  volatile int sink = 0;
  sink = sink + body();  // warm-up, not recorded
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const int v = body();
    const auto t1 = std::chrono::steady_clock::now();
    sink = sink + v;
    samples.push_back(
        std::chrono::duration<double, std::nano>(t1 - t0).count());
  }
  return summarize(std::move(samples));
}

}  // namespace detail

template <class T>
DurationStats time_closed_form(const KronRankOneInstance<T>& inst, int reps) {
  return detail::time_runs(reps,
                           [&] { return closed_form_det(inst).total.sign(); });
}

template <class T>
DurationStats time_dense(const KronRankOneInstance<T>& inst, int reps,
                         std::size_t dense_cap = kDefaultDenseCap) {
  if (inst.dim() > dense_cap) {
    throw resource_error("dense dimension " + std::to_string(inst.dim()) +
                         " exceeds cap " + std::to_string(dense_cap));
  }
  return detail::time_runs(
      reps, [&] { return materialized_det(inst, dense_cap).sign(); });
}

struct BenchRow {
  int n = 0;
  int f = 0;
  std::size_t nf = 0;
  double t_closed_ns = 0.0;
  double t_dense_ns = 0.0;
  double speedup = 0.0;
};

// Times the closed form against materialize+LU on uniform float instances,
// one row per size; timings are medians over `reps` runs.
inline std::vector<BenchRow> bench_grid(
    const std::vector<std::pair<int, int>>& sizes, int reps,
    std::uint64_t seed, std::size_t dense_cap = kDefaultDenseCap) {
  std::vector<BenchRow> rows;
  rows.reserve(sizes.size());
  std::uint64_t k = 0;
  for (const auto& [n, f] : sizes) {
    const auto inst = random_instance<double>(n, f, seed + k++, Profile::kUniform);
    BenchRow row;
    row.n = n;
    row.f = f;
    row.nf = inst.dim();
    row.t_closed_ns = time_closed_form(inst, reps).median_ns;
    row.t_dense_ns = time_dense(inst, reps, dense_cap).median_ns;
    row.speedup = row.t_dense_ns / row.t_closed_ns;
    rows.push_back(row);
  }
  return rows;
}

inline std::string bench_csv_header() {
  return "N,F,NF,t_closed_ns,t_dense_ns,speedup";
}

inline std::string bench_csv_row(const BenchRow& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d,%d,%zu,%.0f,%.0f,%.3f", r.n, r.f, r.nf,
                r.t_closed_ns, r.t_dense_ns, r.speedup);
  return buf;
}

// Least-squares slope of log(y) against log(x); the scaling exponent of a
// timing series.
inline double log_log_slope(const std::vector<double>& xs,
                            const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw validation_error("slope needs >= 2 matching points");
  }
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace krondet
