#include "accentshift/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace accentshift {

ProbabilityTriple softmax(const ClassifierLogits& logits) {
  for (double v : logits) {
    if (!std::isfinite(v)) throw MetricError("softmax: non-finite logit");
  }
  const double mx = *std::max_element(logits.begin(), logits.end());
  ProbabilityTriple p{};
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
  return p;
}

double mean_target_prob(std::span<const ProbabilityTriple> probs, Accent target) {
  if (probs.empty()) throw MetricError("mean_target_prob: empty list");
  const auto idx = static_cast<std::size_t>(target);
  double sum = 0.0;
  for (const auto& p : probs) sum += p[idx];
  return 100.0 * sum / static_cast<double>(probs.size());
}

AccentEmbedding group_reference(std::span<const AccentEmbedding> embs) {
  if (embs.empty()) throw MetricError("group_reference: empty list");
  const auto dim = embs.front().size();
  AccentEmbedding mean(dim, 0.0);
  for (const auto& e : embs) {
    if (e.size() != dim) {
      throw MetricError("group_reference: dimension mismatch (" + std::to_string(e.size()) +
                        " vs " + std::to_string(dim) + ")");
    }
    for (std::size_t i = 0; i < dim; ++i) mean[i] += e[i];
  }
  for (auto& v : mean) v /= static_cast<double>(embs.size());
  return mean;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw MetricError("cosine: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()) + ")");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw MetricError("cosine: zero-norm vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double corpus_psr(std::uint64_t n1_total, std::uint64_t n2_total) {
  if (n1_total == 0) throw MetricError("PSR undefined: no rule substitutions in source (N1 = 0)");
  return static_cast<double>(n2_total) / static_cast<double>(n1_total);
}

double corpus_psr(std::span<const PsrCounts> counts) {
  std::uint64_t n1 = 0, n2 = 0;
  for (const auto& c : counts) {
    n1 += c.n1;
    n2 += c.n2;
  }
  return corpus_psr(n1, n2);
}

double mean_utmos(std::span<const double> scores) {
  if (scores.empty()) throw MetricError("mean_utmos: empty list");
  double sum = 0.0;
  for (double s : scores) {
    if (!(s >= 1.0 && s <= 5.0)) {
      throw MetricError("mean_utmos: score " + std::to_string(s) + " outside [1, 5]");
    }
    sum += s;
  }
  return sum / static_cast<double>(scores.size());
}

namespace {

// Linear-interpolated quantile (type 7).
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

double silverman_bandwidth(std::span<const double> values) {
  if (values.empty()) throw MetricError("bandwidth: empty input");
  const auto n = static_cast<double>(values.size());
  double sd = 0.0;
  if (values.size() > 1) {
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    sd = std::sqrt(ss / (n - 1.0));
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);

  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = sd;
  const double h = 0.9 * spread * std::pow(n, -0.2);
  return std::max(h, kMinKdeBandwidth);
}

KdeCurve utterance_changes_kde(std::span<const std::uint64_t> values, std::size_t grid_points) {
  if (values.empty()) throw MetricError("kde: empty input");
  if (grid_points < 2) throw MetricError("kde: need at least 2 grid points");

  std::vector<double> xs(values.begin(), values.end());
  KdeCurve curve;
  curve.bandwidth = silverman_bandwidth(xs);
  const double h = curve.bandwidth;
  const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
  const double lo = *mn - 3.0 * h;
  const double hi = *mx + 3.0 * h;
  // Trapezoid error on a sum of Gaussians grows quickly once the step exceeds
  // h/2, so the requested count is only a minimum.
  const auto needed = static_cast<std::size_t>(std::ceil((hi - lo) / (0.5 * h))) + 1;
  grid_points = std::max(grid_points, needed);
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);
  const double norm = 1.0 / (static_cast<double>(xs.size()) * h * std::sqrt(2.0 * std::numbers::pi));

  curve.grid.resize(grid_points);
  curve.density.resize(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double x = i + 1 == grid_points ? hi : lo + step * static_cast<double>(i);
    double acc = 0.0;
    for (double v : xs) {
      const double z = (x - v) / h;
      acc += std::exp(-0.5 * z * z);
    }
    curve.grid[i] = x;
    curve.density[i] = acc * norm;
  }
  return curve;
}

double trapezoid_integral(const KdeCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.grid.size(); ++i) {
    area += 0.5 * (curve.density[i] + curve.density[i - 1]) * (curve.grid[i] - curve.grid[i - 1]);
  }
  return area;
}

}  // namespace accentshift
