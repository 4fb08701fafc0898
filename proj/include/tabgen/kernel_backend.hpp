#pragma once

#include "tabgen/conditional_model.hpp"
#include "tabgen/inventory.hpp"

namespace tabgen {

struct KernelBackendOptions {
    // Weight of a categorical mismatch when computing context weights; 1
    // means categorical context is ignored, small values sharpen it.
    double lambda_cat = 0.1;
};

// Reference conditional model: a kernel-weighted conditional estimator over
// the training rows. Context weights use a Gaussian kernel per numeric
// column (Silverman bandwidth) and a match/lambda_cat weight per categorical
// column; conditionals are then kernel mixtures under those weights. The
// chain product of these conditionals equals the joint kernel density of the
// training table for every feature order.
class KernelBackend final : public ConditionalModel {
public:
    static KernelBackend fit(const Inventory& train, KernelBackendOptions opts = {});

    const FeatureSchema& schema() const override { return schema_; }

    double log_conditional(std::size_t feature, const Cell& value,
                           const PartialRow& context) const override;

    Cell sample_conditional(std::size_t feature, const PartialRow& context, double temperature,
                            RngStream& rng) const override;

    // Tempered conditional masses over the category list of a categorical
    // feature (sum to 1). Exposed for diagnostics and tests.
    std::vector<double> conditional_masses(std::size_t feature, const PartialRow& context,
                                           double temperature) const;

    double bandwidth(std::size_t feature) const { return bandwidth_.at(feature); }
    double lambda_cat() const { return lambda_cat_; }
    std::size_t train_row_count() const { return n_; }

private:
    KernelBackend() = default;

    // Normalized log-weights over training rows for a context; uniform when
    // the context is empty.
    std::vector<double> context_log_weights(const PartialRow& context) const;

    FeatureSchema schema_;
    std::size_t n_ = 0;
    std::vector<std::vector<double>> numeric_; // per-feature training values
    std::vector<std::vector<int>> codes_;      // per-feature category codes
    std::vector<double> bandwidth_;            // >0 for numeric features
    double lambda_cat_ = 0.1;
};

} // namespace tabgen
