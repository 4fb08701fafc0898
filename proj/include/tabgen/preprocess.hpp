#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tabgen/inventory.hpp"

namespace tabgen {

enum class StepKind {
    MissingIndicator,
    ImputeMedian,
    ImputeKnn,
    Winsorize,
    Log,
    RankQuantile,
    Zscore,
};

enum class Invertibility { Yes, Approx, No };
enum class RankTarget { Uniform, Normal };

const char* step_kind_name(StepKind kind);
StepKind step_kind_from_name(const std::string& name);

// Unfitted step description, as listed by the user.
struct StepRequest {
    StepKind kind = StepKind::Zscore;
    std::string column;              // empty for missing_indicator (table-wide)
    std::size_t k = 1;               // impute_knn
    double q_lo = 0.0, q_hi = 1.0;   // winsorize
    RankTarget target = RankTarget::Uniform;
};

std::vector<StepRequest> step_requests_from_json(const nlohmann::json& j);

// A fitted step. Only the fields for its kind are meaningful; fitted
// parameters are frozen at fit time and reapplied verbatim to new data.
struct TransformStep {
    StepKind kind = StepKind::Zscore;
    std::string column;

    // impute_median
    double median = 0.0;
    // impute_knn: neighbor pool in z-scored distance space
    std::size_t k = 0;
    std::vector<std::string> distance_columns;
    std::vector<double> distance_means;
    std::vector<double> distance_sds;
    std::vector<std::vector<double>> neighbor_points;
    std::vector<double> neighbor_targets;
    // winsorize
    double q_lo = 0.0, q_hi = 1.0;
    double clamp_lo = 0.0, clamp_hi = 0.0;
    // rank_quantile: piecewise-linear map through (value, plotting position)
    RankTarget target = RankTarget::Uniform;
    std::vector<double> ref_values;    // distinct sorted training values
    std::vector<double> ref_positions; // strictly increasing in (0,1)
    // zscore
    double mean = 0.0, sd = 0.0;
    // missing_indicator: columns that receive an indicator
    std::vector<std::string> indicator_columns;

    Invertibility invertibility() const;
};

TransformStep fit_step(const Inventory& inv, const StepRequest& request);
Inventory apply_step(const Inventory& inv, const TransformStep& step);
Inventory invert_step(const Inventory& inv, const TransformStep& step);

// Ordered fitted steps plus a fingerprint of the inventory they were fitted
// on. Application never refits.
class TransformPipeline {
public:
    TransformPipeline() = default;
    TransformPipeline(std::vector<TransformStep> steps, std::string fitted_on)
        : steps_(std::move(steps)), fitted_on_(std::move(fitted_on)) {}

    const std::vector<TransformStep>& steps() const { return steps_; }
    const std::string& fitted_on() const { return fitted_on_; }

    Inventory apply(const Inventory& inv) const;

    // Reverse order; throws unless every step is invertible at least
    // approximately (log, zscore exact; rank_quantile approximate).
    Inventory invert(const Inventory& inv) const;

    nlohmann::json to_json() const;
    static TransformPipeline from_json(const nlohmann::json& j);

private:
    std::vector<TransformStep> steps_;
    std::string fitted_on_;
};

// Fits and applies each step in listed order; later steps see the output of
// earlier ones. Step errors are rethrown with the step index.
std::pair<Inventory, TransformPipeline> fit_apply_pipeline(const Inventory& inv,
                                                           const std::vector<StepRequest>& spec);

// One-call convenience operations (fit + apply together).

// Appends `<name>__missing` (categories {present, absent}) for each column
// holding at least one missing cell; originals untouched.
Inventory add_missing_indicators(const Inventory& inv);

std::pair<Inventory, double> impute_median(const Inventory& inv, const std::string& column);

// Missing cells replaced by the mean of the k nearest rows' values; distance
// is Euclidean over z-scored, fully-present numeric columns; ties prefer the
// lower row index.
Inventory impute_knn(const Inventory& inv, const std::string& column, std::size_t k);

std::pair<Inventory, std::pair<double, double>> winsorize(const Inventory& inv,
                                                          const std::string& column,
                                                          double q_lo, double q_hi);

Inventory transform_log(const Inventory& inv, const std::string& column);

std::pair<Inventory, TransformStep> transform_rank_quantile(const Inventory& inv,
                                                            const std::string& column,
                                                            RankTarget target);

std::tuple<Inventory, double, double> transform_zscore(const Inventory& inv,
                                                       const std::string& column);

} // namespace tabgen
