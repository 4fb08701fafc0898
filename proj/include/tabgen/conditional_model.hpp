#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tabgen/cell.hpp"
#include "tabgen/rng.hpp"
#include "tabgen/schema.hpp"

namespace tabgen {

// Partially filled row; entries are set for features already in the
// conditioning context.
using PartialRow = std::vector<std::optional<Cell>>;

// Pluggable one-feature-at-a-time conditional distribution. A backend must
// return normalized log-masses for categorical targets and normalized
// log-densities for numeric targets at temperature 1, and draw from the
// tempered conditional in sample_conditional.
class ConditionalModel {
public:
    virtual ~ConditionalModel() = default;

    virtual const FeatureSchema& schema() const = 0;

    // Log-mass (categorical) or log-density (numeric) of `value` for feature
    // `feature` given the context. The context must not cover `feature`.
    virtual double log_conditional(std::size_t feature, const Cell& value,
                                   const PartialRow& context) const = 0;

    // Draws feature `feature` from the tempered conditional; deterministic
    // given the rng state.
    virtual Cell sample_conditional(std::size_t feature, const PartialRow& context,
                                    double temperature, RngStream& rng) const = 0;
};

// The three generation controls plus conditioning and seed.
struct GenerationConfig {
    std::size_t candidate_count = 1;    // pool size N
    double temperature = 1.0;           // sampling diversity T
    std::size_t permutation_count = 1;  // orders averaged per score M
    std::map<std::string, Cell> conditioning;
    std::uint64_t seed = 0;

    void validate(const FeatureSchema& schema) const;
};

// A generated row, its score, and everything needed to reproduce it.
struct Candidate {
    Row row;
    double log_plausibility = 0.0;

    std::vector<std::size_t> order;       // sampling order of unconditioned features
    std::vector<double> per_feature_logp; // chain log-probabilities, one per feature
    std::uint64_t seed = 0;               // rng stream id = (seed, index)
    std::size_t index = 0;
    GenerationConfig config;              // echo of the generating config
};

} // namespace tabgen
