#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace attnlab {

// Monte Carlo estimate with its standard error.
struct MomentEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::int64_t n_samples = 0;
  std::string method;

  double z_against(double reference) const {
    if (stderr_ <= 0) return value == reference ? 0.0 : INFINITY;
    return (value - reference) / stderr_;
  }
};

// Streaming mean/variance accumulator (Welford) with a deterministic
// merge order so chunked/parallel reductions reproduce bit-identically.
struct RunningStat {
  double mean = 0.0, m2 = 0.0;
  std::int64_t n = 0;

  void add(double x) {
    ++n;
    double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }

  void merge(const RunningStat& o) {
    if (o.n == 0) return;
    if (n == 0) { *this = o; return; }
    double delta = o.mean - mean;
    std::int64_t tot = n + o.n;
    m2 += o.m2 + delta * delta * (double)n * (double)o.n / (double)tot;
    mean += delta * (double)o.n / (double)tot;
    n = tot;
  }

  double variance() const { return n > 1 ? m2 / (n - 1) : 0.0; }
  double stderr_of_mean() const { return n > 1 ? std::sqrt(variance() / n) : 0.0; }

  MomentEstimate estimate(const std::string& method) const {
    return MomentEstimate{mean, stderr_of_mean(), n, method};
  }
};

}  // namespace attnlab
