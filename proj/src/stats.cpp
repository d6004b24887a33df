#include "hatch/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hatch {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_stddev(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

namespace {

// Average ranks, ties share the mean of their rank range.
Eigen::VectorXd ranks(const Eigen::VectorXd& xs) {
  const Eigen::Index n = xs.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return xs[a] < xs[b]; });
  Eigen::VectorXd r(n);
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j + 1 < n && xs[order[static_cast<std::size_t>(j + 1)]] ==
                            xs[order[static_cast<std::size_t>(i)]])
      ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Eigen::Index k = i; k <= j; ++k) r[order[static_cast<std::size_t>(k)]] = shared;
    i = j + 1;
  }
  return r;
}

double pearson(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
  const double n = static_cast<double>(xs.size());
  const Eigen::VectorXd cx = xs.array() - xs.mean();
  const Eigen::VectorXd cy = ys.array() - ys.mean();
  const double denom = std::sqrt(cx.squaredNorm() * cy.squaredNorm());
  if (denom <= 0.0) return 0.0;
  (void)n;
  return cx.dot(cy) / denom;
}

}  // namespace

double spearman(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("spearman: size mismatch");
  if (xs.size() < 2) return 0.0;
  return pearson(ranks(xs), ranks(ys));
}

namespace {

// Series expansion of P(a,x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  const double gln = std::lgamma(a);
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - gln);
}

// Lentz continued fraction for Q(a,x), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double gln = std::lgamma(a);
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - gln) * h;
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_p: domain error");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: domain error");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi_squared_sf(double stat, double df) { return gamma_q(df / 2.0, stat / 2.0); }

double chi_squared_gof_pvalue(const Eigen::VectorXd& counts, const Eigen::VectorXd& probs) {
  if (counts.size() != probs.size())
    throw std::invalid_argument("chi_squared_gof_pvalue: size mismatch");
  if (counts.size() < 2) throw std::invalid_argument("chi_squared_gof_pvalue: need >= 2 bins");
  const double total = counts.sum();
  if (!(total > 0.0)) throw std::invalid_argument("chi_squared_gof_pvalue: empty sample");
  double stat = 0.0;
  for (Eigen::Index j = 0; j < counts.size(); ++j) {
    const double expected = total * probs[j];
    if (!(expected > 0.0))
      throw std::invalid_argument("chi_squared_gof_pvalue: zero expected count");
    const double diff = counts[j] - expected;
    stat += diff * diff / expected;
  }
  return chi_squared_sf(stat, static_cast<double>(counts.size() - 1));
}

}  // namespace hatch
