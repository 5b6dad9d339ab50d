#include "xlqe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace xlqe {

ScoredPairSeries::ScoredPairSeries(std::vector<ScoredPair> entries) : entries_(std::move(entries)) {
  std::unordered_set<std::string> seen;
  for (const auto& e : entries_) {
    if (!seen.insert(e.id).second) throw DataError("duplicate id \"" + e.id + "\" in series");
    if (!std::isfinite(e.metric) || !std::isfinite(e.da)) {
      throw DataError("non-finite value for id \"" + e.id + "\"");
    }
  }
}

std::vector<double> ScoredPairSeries::metric_values() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.metric);
  return out;
}

std::vector<double> ScoredPairSeries::da_values() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.da);
  return out;
}

ScoredPairSeries join_by_id(std::span<const std::pair<std::string, double>> scores,
                            std::span<const std::pair<std::string, double>> gold) {
  std::unordered_map<std::string, double> gold_by_id;
  for (const auto& [id, da] : gold) {
    if (!gold_by_id.emplace(id, da).second) throw DataError("duplicate gold id \"" + id + "\"");
  }
  std::vector<ScoredPair> joined;
  joined.reserve(scores.size());
  for (const auto& [id, metric] : scores) {
    auto it = gold_by_id.find(id);
    if (it == gold_by_id.end()) throw DataError("id \"" + id + "\" has no gold DA score");
    joined.push_back({id, metric, it->second});
  }
  if (gold_by_id.size() != joined.size()) {
    std::unordered_set<std::string> scored;
    for (const auto& [id, metric] : scores) scored.insert(id);
    for (const auto& [id, da] : gold) {
      if (!scored.count(id)) throw DataError("gold id \"" + id + "\" has no metric score");
    }
  }
  return ScoredPairSeries(std::move(joined));
}

namespace {

void check_lengths(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("correlation inputs differ in length");
  if (xs.size() < 2) throw DataError("correlation needs at least 2 pairs");
}

[[noreturn]] void constant_series() {
  throw DataError("undefined correlation (constant series)");
}

}  // namespace

double pearson(std::span<const double> xs, std::span<const double> ys) {
  check_lengths(xs, ys);
  const Eigen::Map<const VectorXd> x(xs.data(), static_cast<Eigen::Index>(xs.size()));
  const Eigen::Map<const VectorXd> y(ys.data(), static_cast<Eigen::Index>(ys.size()));
  const VectorXd dx = x.array() - x.mean();
  const VectorXd dy = y.array() - y.mean();
  const double sxx = dx.squaredNorm();
  const double syy = dy.squaredNorm();
  if (sxx == 0.0 || syy == 0.0) constant_series();
  const double r = dx.dot(dy) / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double pearson(const ScoredPairSeries& series) {
  return pearson(series.metric_values(), series.da_values());
}

namespace {

// Number of tied pairs within runs of equal values in a sorted sequence.
template <typename It, typename Eq>
std::int64_t tied_pairs(It first, It last, Eq eq) {
  std::int64_t total = 0;
  while (first != last) {
    It run_end = std::next(first);
    while (run_end != last && eq(*first, *run_end)) ++run_end;
    const auto run = static_cast<std::int64_t>(std::distance(first, run_end));
    total += run * (run - 1) / 2;
    first = run_end;
  }
  return total;
}

// Stable merge sort on y that counts exchanges (discordant pairs after sorting by x, y).
std::int64_t merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                         std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, out = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buf[out++] = v[j++];
    } else {
      buf[out++] = v[i++];
    }
  }
  while (i < mid) buf[out++] = v[i++];
  while (j < hi) buf[out++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

double kendall(std::span<const double> xs, std::span<const double> ys) {
  check_lengths(xs, ys);
  const std::size_t n = xs.size();

  std::vector<std::pair<double, double>> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = {xs[i], ys[i]};
  std::sort(pts.begin(), pts.end());

  const auto n0 = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const std::int64_t ties_x =
      tied_pairs(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first == b.first; });
  const std::int64_t ties_xy =
      tied_pairs(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a == b; });

  std::vector<double> y(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = pts[i].second;
  const std::int64_t swaps = merge_count(y, buf, 0, n);
  const std::int64_t ties_y = tied_pairs(y.begin(), y.end(), std::equal_to<>());

  if (ties_x == n0 || ties_y == n0) constant_series();
  // concordant - discordant
  const std::int64_t score = n0 - ties_x - ties_y + ties_xy - 2 * swaps;
  const double denom = std::sqrt(static_cast<double>(n0 - ties_x) * static_cast<double>(n0 - ties_y));
  return static_cast<double>(score) / denom;
}

double kendall(const ScoredPairSeries& series) {
  return kendall(series.metric_values(), series.da_values());
}

}  // namespace xlqe
