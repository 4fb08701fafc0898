#pragma once

#include <cstdint>
#include <vector>

#include "tabgen/conditional_model.hpp"
#include "tabgen/inventory.hpp"

namespace tabgen {

enum class SelectionRule { Threshold, TopQuantile };
enum class SubsampleMode { ScoreRank, Random };

struct SelectionConfig {
    SelectionRule rule = SelectionRule::TopQuantile;
    double tau = 0.0;    // threshold rule
    double top_q = 0.5;  // top-quantile rule, in (0, 1]
    double alpha = 0.0;  // synthetic fraction of the final corpus, in [0, 1)
    std::uint64_t seed = 0;
    SubsampleMode subsample = SubsampleMode::ScoreRank;
};

// Threshold acceptance: candidates with log-plausibility >= tau, pool order
// preserved.
std::vector<Candidate> select(const std::vector<Candidate>& pool, double tau);

// The ceil(q*N) highest-scoring candidates (ties prefer the lower pool
// index), returned in pool order. Equivalent to select() at the realized
// cutoff score when scores are distinct.
std::vector<Candidate> select_top_quantile(const std::vector<Candidate>& pool, double q);

std::vector<Candidate> apply_selection(const std::vector<Candidate>& pool,
                                       const SelectionConfig& config);

// Observed rows plus accepted synthetic rows with a `__source` provenance
// column appended to the schema.
struct MixedCorpus {
    Inventory table;
    std::size_t observed_count = 0;
    std::size_t synthetic_count = 0;
    std::vector<std::size_t> synthetic_candidate_ids; // pool index per synthetic row
};

// Targets s = round(alpha*n/(1-alpha)) synthetic rows so that s/(n+s) is as
// close to alpha as rounding permits. An oversupplied accepted pool is cut
// to the s best scores (or a seeded random subsample); an undersupplied one
// is an error naming the shortfall.
MixedCorpus mix(const Inventory& observed, const std::vector<Candidate>& accepted, double alpha,
                std::uint64_t seed, SubsampleMode subsample = SubsampleMode::ScoreRank);

// Name of the provenance column added by mix.
inline constexpr const char* kSourceColumn = "__source";

// Drops the provenance column and the synthetic rows, recovering the
// observed inventory.
Inventory strip_provenance(const Inventory& corpus);

} // namespace tabgen
