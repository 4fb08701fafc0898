#include "tabgen/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tabgen/errors.hpp"
#include "tabgen/rng.hpp"
#include "tabgen/stats.hpp"

namespace tabgen {

MarginalModel mc_fit(const Inventory& train) {
    if (train.row_count() == 0) throw DataError("mc_fit: training table is empty");
    if (train.has_missing()) throw DataError("mc_fit: training table has missing cells");

    MarginalModel model;
    model.schema = train.schema();
    const std::size_t d = train.feature_count();
    model.values.resize(d);
    model.bandwidths.assign(d, 0.0);
    model.frequencies.resize(d);

    for (std::size_t c = 0; c < d; ++c) {
        const FeatureSpec& spec = model.schema.at(c);
        if (spec.is_numeric()) {
            auto vals = train.numeric_column(c);
            std::sort(vals.begin(), vals.end());
            model.bandwidths[c] =
                stats::silverman_bandwidth(stats::sample_sd(vals), vals.size());
            model.values[c] = std::move(vals);
        } else {
            std::vector<double> freq(spec.categories.size(), 0.0);
            for (const auto& row : train.rows()) {
                freq[static_cast<std::size_t>(spec.category_index(row[c].category_label()))] +=
                    1.0;
            }
            for (double& f : freq) f /= static_cast<double>(train.row_count());
            model.frequencies[c] = std::move(freq);
        }
    }
    return model;
}

Inventory mc_generate(const MarginalModel& model, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw DataError("mc_generate: n must be >= 1");
    const std::size_t d = model.schema.size();

    std::vector<Row> rows;
    rows.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        RngStream rng = RngStream::derive(seed, r);
        Row row;
        row.reserve(d);
        for (std::size_t c = 0; c < d; ++c) {
            const FeatureSpec& spec = model.schema.at(c);
            if (spec.is_numeric()) {
                const auto& vals = model.values[c];
                const double center = vals[rng.uniform_index(vals.size())];
                row.push_back(Cell::number(center + model.bandwidths[c] * rng.normal()));
            } else {
                const auto& freq = model.frequencies[c];
                const double u = rng.uniform01();
                double acc = 0.0;
                std::size_t pick = freq.size() - 1;
                for (std::size_t i = 0; i < freq.size(); ++i) {
                    acc += freq[i];
                    if (u < acc) {
                        pick = i;
                        break;
                    }
                }
                row.push_back(Cell::category(spec.categories[pick]));
            }
        }
        rows.push_back(std::move(row));
    }
    return Inventory(model.schema, std::move(rows));
}

Inventory smote_generate(const Inventory& source, const SmoteConfig& config) {
    const std::size_t n = source.row_count();
    if (config.k < 1) throw DataError("smote: k must be >= 1");
    if (n <= config.k) {
        throw DataError("smote: need more than k=" + std::to_string(config.k) +
                        " source rows, have " + std::to_string(n));
    }
    if (source.has_missing()) throw DataError("smote: source table has missing cells");

    const FeatureSchema& schema = source.schema();
    std::vector<std::size_t> num_cols, cat_cols;
    for (std::size_t c = 0; c < schema.size(); ++c) {
        (schema.at(c).is_numeric() ? num_cols : cat_cols).push_back(c);
    }
    if (num_cols.empty()) throw DataError("smote: needs at least one numeric column");

    // z-scored numeric matrix for the distance computation.
    std::vector<std::vector<double>> z(num_cols.size(), std::vector<double>(n));
    std::vector<double> z_sds(num_cols.size());
    for (std::size_t j = 0; j < num_cols.size(); ++j) {
        const auto vals = source.numeric_column(num_cols[j]);
        const double mu = stats::mean(vals);
        const double sd = stats::sample_sd(vals);
        for (std::size_t r = 0; r < n; ++r) {
            z[j][r] = (vals[r] - mu) / (sd + stats::kEpsilon);
        }
        z_sds[j] = stats::sample_sd(z[j]);
    }
    // SMOTE-NC mismatch penalty: median SD of the standardized numeric
    // columns, added (squared) once per differing categorical cell.
    std::vector<double> sds_sorted = z_sds;
    std::sort(sds_sorted.begin(), sds_sorted.end());
    const double penalty = stats::median_sorted(sds_sorted);
    const double penalty2 = penalty * penalty;

    std::vector<std::vector<int>> cat_codes(cat_cols.size(), std::vector<int>(n));
    for (std::size_t j = 0; j < cat_cols.size(); ++j) {
        const FeatureSpec& spec = schema.at(cat_cols[j]);
        for (std::size_t r = 0; r < n; ++r) {
            cat_codes[j][r] = spec.category_index(source.at(r, cat_cols[j]).category_label());
        }
    }

    auto k_nearest = [&](std::size_t base) {
        std::vector<std::pair<double, std::size_t>> order;
        order.reserve(n - 1);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == base) continue;
            double d2 = 0.0;
            for (std::size_t j = 0; j < num_cols.size(); ++j) {
                const double diff = z[j][base] - z[j][r];
                d2 += diff * diff;
            }
            for (std::size_t j = 0; j < cat_cols.size(); ++j) {
                if (cat_codes[j][base] != cat_codes[j][r]) d2 += penalty2;
            }
            order.push_back({d2, r});
        }
        std::sort(order.begin(), order.end());
        std::vector<std::size_t> nearest(config.k);
        for (std::size_t i = 0; i < config.k; ++i) nearest[i] = order[i].second;
        return nearest;
    };

    std::vector<Row> rows;
    rows.reserve(config.n_new);
    for (std::size_t s = 0; s < config.n_new; ++s) {
        RngStream rng = RngStream::derive(config.seed, s);
        const std::size_t base = rng.uniform_index(n);
        const auto neighbors = k_nearest(base);
        const std::size_t nn = neighbors[rng.uniform_index(neighbors.size())];
        const double lambda = rng.uniform01();

        Row row(schema.size());
        for (std::size_t c : num_cols) {
            row[c] = Cell::number(smote_interpolate(source.at(base, c).number_value(),
                                                    source.at(nn, c).number_value(), lambda));
        }
        for (std::size_t j = 0; j < cat_cols.size(); ++j) {
            const std::size_t c = cat_cols[j];
            const FeatureSpec& spec = schema.at(c);
            std::vector<std::size_t> counts(spec.categories.size(), 0);
            for (std::size_t r : neighbors) ++counts[static_cast<std::size_t>(cat_codes[j][r])];
            const std::size_t best = *std::max_element(counts.begin(), counts.end());
            const auto winners =
                std::count(counts.begin(), counts.end(), best);
            if (winners > 1) {
                row[c] = source.at(base, c); // tie: keep the base row's label
            } else {
                const auto it = std::find(counts.begin(), counts.end(), best);
                row[c] = Cell::category(
                    spec.categories[static_cast<std::size_t>(it - counts.begin())]);
            }
        }
        rows.push_back(std::move(row));
    }
    return Inventory(schema, std::move(rows));
}

} // namespace tabgen
