#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tabgen/inventory.hpp"

namespace tabgen {

// Per-feature scores for a numeric column.
struct NumericFeatureMetrics {
    double abs_err = 0.0;
    double rel_err = 0.0;
    double sd_diff = 0.0;
    double rel_sd_diff = 0.0;
    double bias_per_sd = 0.0;
    double w1_per_sd = 0.0;
    double ks_stat = 0.0;
    double js_div = 0.0;
};

// Per-feature scores for a categorical column; mean-based metrics do not
// apply, frequency-based ones replace them.
struct CategoricalFeatureMetrics {
    double tv_distance = 0.0;
    double js_div = 0.0;
    std::vector<std::string> categories;      // schema order
    std::vector<double> per_category_abs_err; // aligned with categories
};

struct FeatureMetrics {
    std::string name;
    FeatureKind kind = FeatureKind::Numeric;
    std::optional<NumericFeatureMetrics> numeric;
    std::optional<CategoricalFeatureMetrics> categorical;
};

struct DependenceEntry {
    std::string a, b;
    double pearson_delta = 0.0;
    double spearman_delta = 0.0;
    bool valid = true; // false when a column is constant in either table
};

struct MetricAggregate {
    double mean = 0.0;
    double max = 0.0;
};

struct MetricReport {
    std::vector<FeatureMetrics> features;       // schema order
    std::vector<DependenceEntry> dependence;    // unordered numeric pairs
    std::vector<std::pair<std::string, MetricAggregate>> aggregates;
    std::size_t n_orig = 0;
    std::size_t n_gen = 0;
    std::string method;
};

// --- per-column operations ---------------------------------------------------

// (absolute, relative) mean error; relative guards the denominator with eps.
std::pair<double, double> mean_metrics(std::span<const double> orig,
                                       std::span<const double> gen);

// (absolute, relative) sample-SD difference; both samples need >= 2 values.
std::pair<double, double> sd_metrics(std::span<const double> orig, std::span<const double> gen);

// |mean difference| in units of the original sample SD.
double bias_per_sd(std::span<const double> orig, std::span<const double> gen);

// Exact 1-d Wasserstein distance: the integral of |F_P^-1 - F_Q^-1| over
// (0,1), computed by merging the two quantile-function breakpoint sets; exact
// for unequal sample sizes.
double wasserstein_w1(std::span<const double> orig, std::span<const double> gen);
double wasserstein_per_sd(std::span<const double> orig, std::span<const double> gen);

// Two-sample KS statistic: sup over pooled points (and just below them) of
// the gap between the empirical CDFs.
double ks_statistic(std::span<const double> orig, std::span<const double> gen);

// JS divergence between Gaussian KDEs evaluated on a shared 512-point grid
// spanning the pooled range padded by 3 bandwidths; the bandwidth is
// Silverman on the pooled sample, so identical samples score exactly 0.
// Natural log; bounded by ln 2.
double js_divergence_numeric(std::span<const double> orig, std::span<const double> gen);

// JS divergence between two discrete frequency vectors (same length).
double js_divergence_categorical(std::span<const double> p, std::span<const double> q);

// Total variation distance between two frequency vectors.
double tv_distance(std::span<const double> p, std::span<const double> q);

// |Pearson delta| and |Spearman delta| for every unordered numeric pair;
// pairs with a constant column in either table are marked invalid.
std::vector<DependenceEntry> dependence_delta(const Inventory& orig, const Inventory& gen);

// All per-feature metrics, the dependence table and mean/max aggregates.
// Missing cells are dropped per column before computing.
MetricReport full_report(const Inventory& orig, const Inventory& gen,
                         std::string method_label = {});

nlohmann::ordered_json report_to_json(const MetricReport& report);
void save_report(const MetricReport& report, const std::filesystem::path& path);

// Flat per-feature table: feature,metric,value.
void save_report_csv(const MetricReport& report, const std::filesystem::path& path);

} // namespace tabgen
