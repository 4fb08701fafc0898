#pragma once

#include <cstdint>
#include <vector>

#include "tabgen/inventory.hpp"

namespace tabgen {

// Per-column marginal fits: kernel resampling for numeric columns, empirical
// frequencies for categorical ones. Columns are deliberately independent; the
// point of this baseline is that it carries no dependence structure.
struct MarginalModel {
    FeatureSchema schema;
    std::vector<std::vector<double>> values;      // per numeric column, sorted
    std::vector<double> bandwidths;               // per column, 0 for categorical
    std::vector<std::vector<double>> frequencies; // per categorical column

    const std::vector<double>& column_frequencies(std::size_t col) const {
        return frequencies.at(col);
    }
};

MarginalModel mc_fit(const Inventory& train);

// n rows, every column drawn independently: numeric = random training value
// plus Gaussian kernel noise, categorical = frequency draw. Rows use rng
// streams derived from (seed, row), so generation is order-independent.
Inventory mc_generate(const MarginalModel& model, std::size_t n, std::uint64_t seed);

struct SmoteConfig {
    std::size_t k = 5;      // neighbor count, must be < source rows
    std::size_t n_new = 1;  // synthetic rows to produce
    std::uint64_t seed = 0;
};

// Linear interpolation between a base row and one of its k nearest
// neighbors: one lambda ~ U[0,1] shared by all numeric cells of a synthetic
// row; categorical cells take the majority label among the k neighbors (ties
// fall back to the base row's label). Distances are Euclidean over z-scored
// numeric columns with a per-mismatch categorical penalty equal to the
// median of the standardized numeric column SDs.
Inventory smote_generate(const Inventory& source, const SmoteConfig& config);

// Interpolation applied per numeric cell; exposed for tests.
inline double smote_interpolate(double base, double neighbor, double lambda) {
    return base + lambda * (neighbor - base);
}

} // namespace tabgen
