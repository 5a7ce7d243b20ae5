#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace accentshift {

class MetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Accent classes in classifier output order.
enum class Accent : std::size_t { NorthAmerican = 0, BritishIsles = 1, Other = 2 };

using ClassifierLogits = std::array<double, 3>;
using ProbabilityTriple = std::array<double, 3>;
using AccentEmbedding = std::vector<double>;

/// Max-shifted softmax. Throws MetricError on non-finite logits.
ProbabilityTriple softmax(const ClassifierLogits& logits);

/// Mean probability of `target` across utterances, as a percentage.
double mean_target_prob(std::span<const ProbabilityTriple> probs, Accent target);

/// Component-wise mean of the embeddings, not renormalized.
AccentEmbedding group_reference(std::span<const AccentEmbedding> embs);

/// dot(a,b) / (|a||b|), clamped to [-1, 1].
double cosine(std::span<const double> a, std::span<const double> b);

struct PsrCounts {
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;
};

/// Corpus-level phoneme shift rate: sum(n2) / sum(n1). Not clamped; throws
/// MetricError when sum(n1) is zero.
double corpus_psr(std::span<const PsrCounts> counts);
double corpus_psr(std::uint64_t n1_total, std::uint64_t n2_total);

double mean_utmos(std::span<const double> scores);

struct KdeCurve {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
};

inline constexpr double kMinKdeBandwidth = 0.25;

/// Silverman rule of thumb: 0.9 * min(sd, IQR/1.34) * n^(-1/5). Falls back to
/// sd when the IQR is zero, then floors at kMinKdeBandwidth.
double silverman_bandwidth(std::span<const double> values);

/// Gaussian KDE of per-utterance change counts on a uniform grid spanning
/// [min - 3h, max + 3h]. `grid_points` is a lower bound: the grid is
/// densified so that its step never exceeds h/2.
KdeCurve utterance_changes_kde(std::span<const std::uint64_t> values, std::size_t grid_points);

/// Trapezoid-rule integral of the curve.
double trapezoid_integral(const KdeCurve& curve);

}  // namespace accentshift
