#pragma once

#include <vector>

#include <Eigen/Core>

namespace hatch {

// Standard normal CDF.
double normal_cdf(double z);

// Sample mean / sample standard deviation (n-1 denominator, 0 when n < 2).
double mean(const std::vector<double>& xs);
double sample_stddev(const std::vector<double>& xs);

// Spearman rank correlation with average ranks for ties.
// Returns 0 when either side is constant.
double spearman(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper tail of the chi-squared distribution with df degrees of freedom.
double chi_squared_sf(double stat, double df);

// Pearson chi-squared goodness-of-fit p-value of observed counts against the
// given category probabilities.
double chi_squared_gof_pvalue(const Eigen::VectorXd& counts, const Eigen::VectorXd& probs);

}  // namespace hatch
