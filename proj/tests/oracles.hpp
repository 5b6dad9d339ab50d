// Brute-force reference computations used only by tests. Nothing here touches Eigen or
// the library's scoring/statistics code paths.
#ifndef XLQE_TESTS_ORACLES_HPP
#define XLQE_TESTS_ORACLES_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "xlqe/common.hpp"

namespace oracle {

using Grid = std::vector<std::vector<double>>;

struct Prf {
  double p = 0, r = 0, f = 0;
};

inline Grid dot_products(const Grid& xs, const Grid& ys) {
  Grid out(xs.size(), std::vector<double>(ys.size(), 0.0));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j)
      for (std::size_t t = 0; t < xs[i].size(); ++t) out[i][j] += xs[i][t] * ys[j][t];
  return out;
}

// Row/column maxima by exhaustive scan, then the plain harmonic-mean formula.
inline Prf greedy_prf(const Grid& s) {
  const std::size_t k = s.size(), l = s[0].size();
  double r_sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double best = s[i][0];
    for (std::size_t j = 0; j < l; ++j)
      if (s[i][j] > best) best = s[i][j];
    r_sum += best;
  }
  double p_sum = 0.0;
  for (std::size_t j = 0; j < l; ++j) {
    double best = s[0][j];
    for (std::size_t i = 0; i < k; ++i)
      if (s[i][j] > best) best = s[i][j];
    p_sum += best;
  }
  Prf out;
  out.r = r_sum / static_cast<double>(k);
  out.p = p_sum / static_cast<double>(l);
  out.f = (out.p + out.r == 0.0) ? 0.0 : 2.0 * out.p * out.r / (out.p + out.r);
  return out;
}

// Average of the raw and mask-weighted similarities, built cell by cell.
inline Grid renewed(const Grid& s, const std::set<std::pair<std::size_t, std::size_t>>& aligned,
                    double a) {
  Grid out = s;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s[i].size(); ++j) {
      const double m = aligned.count({i, j}) ? 1.0 : a;
      out[i][j] = (s[i][j] + m * s[i][j]) / 2.0;
    }
  return out;
}

inline double pearson_two_pass(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Kendall tau-b from an O(n^2) enumeration of all pairs.
inline double kendall_pairs(const std::vector<double>& x, const std::vector<double>& y) {
  std::int64_t concordant = 0, discordant = 0, tie_x_only = 0, tie_y_only = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) ++tie_x_only;
      else if (dy == 0) ++tie_y_only;
      else if ((dx > 0) == (dy > 0)) ++concordant;
      else ++discordant;
    }
  const auto untied_x = concordant + discordant + tie_y_only;
  const auto untied_y = concordant + discordant + tie_x_only;
  return static_cast<double>(concordant - discordant) /
         std::sqrt(static_cast<double>(untied_x) * static_cast<double>(untied_y));
}

inline Grid random_grid(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double lo,
                        double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Grid g(rows, std::vector<double>(cols));
  for (auto& row : g)
    for (auto& v : row) v = dist(rng);
  return g;
}

inline xlqe::MatrixXd to_matrix(const Grid& g) {
  xlqe::MatrixXd m(static_cast<Eigen::Index>(g.size()),
                   static_cast<Eigen::Index>(g.empty() ? 0 : g[0].size()));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g[i][j];
  return m;
}

inline double rel_err(double got, double want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

}  // namespace oracle

#endif  // XLQE_TESTS_ORACLES_HPP
