#include "tabgen/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tabgen/errors.hpp"
#include "tabgen/rng.hpp"

namespace tabgen {

std::vector<Candidate> select(const std::vector<Candidate>& pool, double tau) {
    std::vector<Candidate> accepted;
    for (const auto& cand : pool) {
        if (cand.log_plausibility >= tau) accepted.push_back(cand);
    }
    return accepted;
}

namespace {

// Indices of the m best-scoring candidates, ties broken by lower pool index,
// returned in ascending pool order.
std::vector<std::size_t> top_indices(const std::vector<Candidate>& pool, std::size_t m) {
    std::vector<std::size_t> idx(pool.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (pool[a].log_plausibility != pool[b].log_plausibility) {
            return pool[a].log_plausibility > pool[b].log_plausibility;
        }
        return a < b;
    });
    idx.resize(std::min(m, idx.size()));
    std::sort(idx.begin(), idx.end());
    return idx;
}

} // namespace

std::vector<Candidate> select_top_quantile(const std::vector<Candidate>& pool, double q) {
    if (pool.empty()) throw DataError("select_top_quantile: empty pool");
    if (!(q > 0.0 && q <= 1.0)) throw DataError("select_top_quantile: q must be in (0, 1]");
    const auto count =
        static_cast<std::size_t>(std::ceil(q * static_cast<double>(pool.size())));
    std::vector<Candidate> accepted;
    accepted.reserve(count);
    for (std::size_t i : top_indices(pool, count)) accepted.push_back(pool[i]);
    return accepted;
}

std::vector<Candidate> apply_selection(const std::vector<Candidate>& pool,
                                       const SelectionConfig& config) {
    if (config.rule == SelectionRule::Threshold) return select(pool, config.tau);
    return select_top_quantile(pool, config.top_q);
}

MixedCorpus mix(const Inventory& observed, const std::vector<Candidate>& accepted, double alpha,
                std::uint64_t seed, SubsampleMode subsample) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw DataError("mix: alpha must be in [0, 1)");
    const FeatureSchema& schema = observed.schema();
    for (const auto& cand : accepted) {
        if (cand.row.size() != schema.size()) {
            throw DataError("mix: accepted row width does not match the observed schema");
        }
    }
    if (schema.index_of(kSourceColumn)) {
        throw DataError(std::string("mix: observed table already has a '") + kSourceColumn +
                        "' column");
    }

    const std::size_t n = observed.row_count();
    // Solve s/(n+s) = alpha; round half away from zero.
    const auto target = static_cast<std::size_t>(
        std::llround(alpha * static_cast<double>(n) / (1.0 - alpha)));
    if (accepted.size() < target) {
        throw DataError("mix: need " + std::to_string(target) + " synthetic rows for alpha=" +
                        std::to_string(alpha) + " but only " + std::to_string(accepted.size()) +
                        " accepted (short by " + std::to_string(target - accepted.size()) + ")");
    }

    std::vector<std::size_t> chosen(accepted.size());
    std::iota(chosen.begin(), chosen.end(), std::size_t{0});
    if (accepted.size() > target) {
        if (subsample == SubsampleMode::ScoreRank) {
            chosen = top_indices(accepted, target);
        } else {
            RngStream rng = RngStream::derive(seed, 0x6d6978 /* "mix" */);
            rng.shuffle(chosen);
            chosen.resize(target);
            std::sort(chosen.begin(), chosen.end());
        }
    }

    std::vector<FeatureSpec> specs = schema.features();
    FeatureSpec source;
    source.name = kSourceColumn;
    source.kind = FeatureKind::Categorical;
    source.allow_missing = false;
    source.categories = {"observed", "synthetic"};
    specs.push_back(std::move(source));

    std::vector<Row> rows;
    rows.reserve(n + target);
    for (const auto& row : observed.rows()) {
        Row r = row;
        r.push_back(Cell::category("observed"));
        rows.push_back(std::move(r));
    }
    MixedCorpus corpus;
    for (std::size_t i : chosen) {
        Row r = accepted[i].row;
        r.push_back(Cell::category("synthetic"));
        rows.push_back(std::move(r));
        corpus.synthetic_candidate_ids.push_back(accepted[i].index);
    }

    corpus.table = Inventory(FeatureSchema(std::move(specs)), std::move(rows));
    corpus.observed_count = n;
    corpus.synthetic_count = target;
    return corpus;
}

Inventory strip_provenance(const Inventory& corpus) {
    const auto src = corpus.schema().index_of(kSourceColumn);
    if (!src) {
        throw DataError(std::string("strip_provenance: no '") + kSourceColumn + "' column");
    }
    std::vector<FeatureSpec> specs;
    for (std::size_t c = 0; c < corpus.feature_count(); ++c) {
        if (c != *src) specs.push_back(corpus.schema().at(c));
    }
    std::vector<Row> rows;
    for (const auto& row : corpus.rows()) {
        if (row[*src].category_label() != "observed") continue;
        Row r;
        r.reserve(specs.size());
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c != *src) r.push_back(row[c]);
        }
        rows.push_back(std::move(r));
    }
    return Inventory(FeatureSchema(std::move(specs)), std::move(rows));
}

} // namespace tabgen
