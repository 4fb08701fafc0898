#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tabgen::stats {

// Epsilon used in every denominator guard across the project.
inline constexpr double kEpsilon = 1e-8;
// Lower bound for kernel bandwidths (degenerate constant columns).
inline constexpr double kBandwidthFloor = 1e-8;

double mean(std::span<const double> xs);

// Sample standard deviation (divisor n-1); 0 when fewer than two values.
double sample_sd(std::span<const double> xs);

// Median of a sorted sample; even counts average the two central order
// statistics.
double median_sorted(std::span<const double> sorted);

// Empirical quantile with linear interpolation between order statistics
// (position q*(n-1) in the sorted sample).
double quantile_sorted(std::span<const double> sorted, double q);

// Silverman rule of thumb 1.06 * sd * n^(-1/5), floored at kBandwidthFloor.
double silverman_bandwidth(double sd, std::size_t n);

double norm_pdf(double x, double mu, double sigma);
double log_norm_pdf(double x, double mu, double sigma);

// Standard normal CDF / quantile. The quantile uses a rational
// approximation refined with one Halley step; accurate to ~1e-15.
double norm_cdf(double z);
double norm_quantile(double u);

// Student t quantile for 4 degrees of freedom (closed form).
double student_t4_quantile(double u);

// log(sum(exp(xs))); -inf for an empty span or all -inf entries.
double logsumexp(std::span<const double> xs);

// Pearson correlation; NaN when either sample is degenerate.
double pearson(std::span<const double> x, std::span<const double> y);

// Average ranks (1-based, ties averaged).
std::vector<double> average_ranks(std::span<const double> xs);

// Spearman rank correlation with average ranks; NaN when degenerate.
double spearman(std::span<const double> x, std::span<const double> y);

} // namespace tabgen::stats
