#pragma once

#include "csplin/gen.hpp"
#include "csplin/horn.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace csplin {

struct BenchPoint {
  int size = 0;  // requested literal count
  std::size_t literals = 0;
  int vars = 0;
  double millis = 0.0;
  bool sat = false;
};

struct BenchResult {
  std::vector<BenchPoint> points;
  double slope = 0.0;  // log-log least-squares fit of time against size
};

/// Solves one generated instance per size and fits a log-log slope. Each
/// size is repeated and the minimum time kept, which damps scheduler noise.
inline BenchResult run_bench(const std::vector<int>& sizes, std::uint64_t seed,
                             double chain_fraction = 0.5, int repeats = 3) {
  BenchResult out;
  for (int n : sizes) {
    CnfFormula f = bench_chain_instance(n, seed + static_cast<std::uint64_t>(n), chain_fraction);
    HornInstance inst(f);
    double best = -1.0;
    bool sat = false;
    for (int r = 0; r < repeats; ++r) {
      auto t0 = std::chrono::steady_clock::now();
      SolveResult res = solve(inst);
      auto t1 = std::chrono::steady_clock::now();
      double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      if (best < 0 || ms < best) best = ms;
      sat = is_sat(res);
    }
    out.points.push_back({n, f.literal_count(), f.arity(), best, sat});
  }
  // Least squares on (ln size, ln time), clamping below the timer noise floor.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& p : out.points) {
    double x = std::log(static_cast<double>(p.size));
    double y = std::log(std::max(p.millis, 0.01));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) {
    double denom = m * sxx - sx * sx;
    if (denom != 0) out.slope = (m * sxy - sx * sy) / denom;
  }
  return out;
}

inline std::vector<int> doubling_sizes(int from, int to) {
  std::vector<int> out;
  for (int n = from; n <= to; n *= 2) out.push_back(n);
  return out;
}

}  // namespace csplin
