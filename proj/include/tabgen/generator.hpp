#pragma once

#include <filesystem>

#include "tabgen/conditional_model.hpp"
#include "tabgen/inventory.hpp"

namespace tabgen {

struct RowDraw {
    Row row;
    std::vector<std::size_t> order;       // order the unconditioned features were drawn in
    std::vector<double> per_feature_logp; // chain log-probabilities (conditioned first)
};

// Draws one row: conditioned cells are copied verbatim up front and feed
// every subsequent context; the remaining features are drawn sequentially in
// a fresh uniformly random order.
RowDraw generate_row(const ConditionalModel& model, double temperature,
                     const std::map<std::string, Cell>& conditioning, RngStream& rng);

// Permutation-averaged log-plausibility: the log of the mean over feature
// orders of the chain-rule likelihood, log(1/M * sum_m p(pi_m)). Orders are
// drawn uniformly with the given rng; when M >= d! every order is used
// exactly once instead.
double plausibility(const ConditionalModel& model, const Row& row, std::size_t permutations,
                    RngStream& rng);

// N candidates, each generated and scored on rng streams derived from
// (seed, candidate index), so the pool is identical regardless of execution
// order or thread count.
std::vector<Candidate> generate_pool(const ConditionalModel& model,
                                     const GenerationConfig& config);

// Pool CSV: schema columns plus __log_plausibility and __order, with a JSON
// metadata sidecar at <path>.meta.json carrying the schema, the config echo
// and per-candidate generation metadata.
void save_pool(const std::vector<Candidate>& pool, const FeatureSchema& schema,
               const std::filesystem::path& csv_path);

// Accepted-subset CSV: the pool layout plus a __candidate_id column that
// keeps each row tied to its pool index.
void save_accepted(const std::vector<Candidate>& accepted, const FeatureSchema& schema,
                   const std::filesystem::path& csv_path);

// Reads a pool or accepted CSV; the schema comes from the metadata sidecar
// when present, otherwise from the required `schema` argument.
std::vector<Candidate> load_pool(const std::filesystem::path& csv_path,
                                 const FeatureSchema* schema = nullptr);

} // namespace tabgen
