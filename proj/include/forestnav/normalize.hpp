#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace forestnav {

// Streaming mean/variance over observation vectors (Welford-style single
// sample merge). Used by the optional observation-normalization wrapper;
// the within-run update order is fixed, so results are reproducible.
struct RunningMeanStd {
  std::vector<double> mean;
  std::vector<double> var;
  double count = 1e-4;

  explicit RunningMeanStd(std::size_t dim = 0)
      : mean(dim, 0.0), var(dim, 1.0) {}

  void update(const std::vector<double>& x) {
    const double new_count = count + 1.0;
    for (std::size_t i = 0; i < mean.size(); ++i) {
      const double delta = x[i] - mean[i];
      const double new_mean = mean[i] + delta / new_count;
      // parallel-variance merge with a batch of one
      const double m2 = var[i] * count + delta * (x[i] - new_mean);
      mean[i] = new_mean;
      var[i] = m2 / new_count;
    }
    count = new_count;
  }

  std::vector<double> normalize(const std::vector<double>& x) const {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      out[i] = (x[i] - mean[i]) / std::sqrt(var[i] + 1e-8);
    return out;
  }
};

// Scalar variant tracking the discounted return, for reward scaling.
struct RunningScalarStd {
  double mean = 0.0;
  double var = 1.0;
  double count = 1e-4;

  void update(double x) {
    const double new_count = count + 1.0;
    const double delta = x - mean;
    const double new_mean = mean + delta / new_count;
    const double m2 = var * count + delta * (x - new_mean);
    mean = new_mean;
    var = m2 / new_count;
    count = new_count;
  }

  double scale(double reward) const { return reward / std::sqrt(var + 1e-8); }
};

}  // namespace forestnav
