#ifndef XLQE_STATS_HPP
#define XLQE_STATS_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xlqe/common.hpp"

namespace xlqe {

struct ScoredPair {
  std::string id;
  double metric = 0.0;
  double da = 0.0;
};

/// Metric scores joined with human DA scores. Ids are unique and values finite.
class ScoredPairSeries {
 public:
  ScoredPairSeries() = default;
  explicit ScoredPairSeries(std::vector<ScoredPair> entries);

  const std::vector<ScoredPair>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::vector<double> metric_values() const;
  std::vector<double> da_values() const;

 private:
  std::vector<ScoredPair> entries_;
};

/// Joins metric scores to DA scores by id, in `scores` order. Any id present on one
/// side only is an error.
ScoredPairSeries join_by_id(std::span<const std::pair<std::string, double>> scores,
                            std::span<const std::pair<std::string, double>> gold);

/// Product-moment correlation (two-pass).
double pearson(std::span<const double> xs, std::span<const double> ys);
double pearson(const ScoredPairSeries& series);

/// Kendall tau-b, O(n log n).
double kendall(std::span<const double> xs, std::span<const double> ys);
double kendall(const ScoredPairSeries& series);

}  // namespace xlqe

#endif  // XLQE_STATS_HPP
