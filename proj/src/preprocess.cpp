#include "tabgen/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include <nlohmann/json.hpp>

#include "tabgen/errors.hpp"
#include "tabgen/stats.hpp"

namespace tabgen {

const char* step_kind_name(StepKind kind) {
    switch (kind) {
    case StepKind::MissingIndicator: return "missing_indicator";
    case StepKind::ImputeMedian: return "impute_median";
    case StepKind::ImputeKnn: return "impute_knn";
    case StepKind::Winsorize: return "winsorize";
    case StepKind::Log: return "log";
    case StepKind::RankQuantile: return "rank_quantile";
    case StepKind::Zscore: return "zscore";
    }
    return "zscore";
}

StepKind step_kind_from_name(const std::string& name) {
    if (name == "missing_indicator") return StepKind::MissingIndicator;
    if (name == "impute_median") return StepKind::ImputeMedian;
    if (name == "impute_knn") return StepKind::ImputeKnn;
    if (name == "winsorize") return StepKind::Winsorize;
    if (name == "log") return StepKind::Log;
    if (name == "rank_quantile") return StepKind::RankQuantile;
    if (name == "zscore") return StepKind::Zscore;
    throw DataError("unknown transform step kind: '" + name + "'");
}

Invertibility TransformStep::invertibility() const {
    switch (kind) {
    case StepKind::Log:
    case StepKind::Zscore: return Invertibility::Yes;
    case StepKind::RankQuantile: return Invertibility::Approx;
    default: return Invertibility::No;
    }
}

namespace {

const char* invertibility_name(Invertibility inv) {
    switch (inv) {
    case Invertibility::Yes: return "yes";
    case Invertibility::Approx: return "approx";
    case Invertibility::No: return "no";
    }
    return "no";
}

std::size_t numeric_column_index(const Inventory& inv, const std::string& column) {
    const auto idx = inv.schema().index_of(column);
    if (!idx) throw DataError("no such column: '" + column + "'");
    if (!inv.schema().at(*idx).is_numeric()) {
        throw DataError("column '" + column + "' is not numeric");
    }
    return *idx;
}

// Replaces one column's non-missing values in place via fn(double) -> double.
Inventory map_column(const Inventory& inv, std::size_t col, auto&& fn) {
    std::vector<Row> rows = inv.rows();
    for (auto& row : rows) {
        if (!row[col].is_missing()) {
            row[col] = Cell::number(fn(row[col].number_value()));
        }
    }
    return Inventory(inv.schema(), std::move(rows));
}

TransformStep fit_missing_indicator(const Inventory& inv) {
    TransformStep step;
    step.kind = StepKind::MissingIndicator;
    const auto report = validate(inv);
    for (std::size_t c = 0; c < inv.feature_count(); ++c) {
        if (report.missing_counts[c] > 0) {
            step.indicator_columns.push_back(inv.schema().at(c).name);
        }
    }
    return step;
}

Inventory apply_missing_indicator(const Inventory& inv, const TransformStep& step) {
    if (step.indicator_columns.empty()) return inv;

    std::vector<FeatureSpec> specs = inv.schema().features();
    std::vector<std::size_t> sources;
    for (const auto& name : step.indicator_columns) {
        const auto idx = inv.schema().index_of(name);
        if (!idx) throw DataError("missing_indicator: no such column '" + name + "'");
        const std::string indicator = name + "__missing";
        if (inv.schema().index_of(indicator)) {
            throw DataError("missing_indicator: column '" + indicator + "' already exists");
        }
        FeatureSpec spec;
        spec.name = indicator;
        spec.kind = FeatureKind::Categorical;
        spec.allow_missing = false;
        spec.categories = {"present", "absent"};
        specs.push_back(std::move(spec));
        sources.push_back(*idx);
    }

    std::vector<Row> rows = inv.rows();
    for (auto& row : rows) {
        for (std::size_t s : sources) {
            row.push_back(Cell::category(row[s].is_missing() ? "absent" : "present"));
        }
    }
    return Inventory(FeatureSchema(std::move(specs)), std::move(rows));
}

TransformStep fit_impute_median(const Inventory& inv, const std::string& column) {
    const std::size_t col = numeric_column_index(inv, column);
    auto values = inv.numeric_column(col);
    if (values.empty()) {
        throw DataError("impute_median: column '" + column + "' has no non-missing values");
    }
    std::sort(values.begin(), values.end());
    TransformStep step;
    step.kind = StepKind::ImputeMedian;
    step.column = column;
    step.median = stats::median_sorted(values);
    return step;
}

Inventory apply_impute_median(const Inventory& inv, const TransformStep& step) {
    const std::size_t col = numeric_column_index(inv, step.column);
    std::vector<Row> rows = inv.rows();
    for (auto& row : rows) {
        if (row[col].is_missing()) row[col] = Cell::number(step.median);
    }
    return Inventory(inv.schema(), std::move(rows));
}

TransformStep fit_impute_knn(const Inventory& inv, const std::string& column, std::size_t k) {
    if (k < 1) throw DataError("impute_knn: k must be >= 1");
    const std::size_t col = numeric_column_index(inv, column);

    // Distance space: numeric columns (other than the target) without any
    // missing cell, z-scored with training statistics.
    const auto report = validate(inv);
    std::vector<std::size_t> dist_cols;
    for (std::size_t c = 0; c < inv.feature_count(); ++c) {
        if (c == col || !inv.schema().at(c).is_numeric()) continue;
        if (report.missing_counts[c] == 0) dist_cols.push_back(c);
    }
    if (dist_cols.empty()) {
        throw DataError("impute_knn: no fully-present numeric column to measure distance for '" +
                        column + "'");
    }

    TransformStep step;
    step.kind = StepKind::ImputeKnn;
    step.column = column;
    step.k = k;
    for (std::size_t c : dist_cols) {
        std::vector<double> vals = inv.numeric_column(c);
        step.distance_columns.push_back(inv.schema().at(c).name);
        step.distance_means.push_back(stats::mean(vals));
        step.distance_sds.push_back(stats::sample_sd(vals));
    }
    for (std::size_t r = 0; r < inv.row_count(); ++r) {
        if (inv.at(r, col).is_missing()) continue;
        std::vector<double> point(dist_cols.size());
        for (std::size_t j = 0; j < dist_cols.size(); ++j) {
            const double x = inv.at(r, dist_cols[j]).number_value();
            point[j] = (x - step.distance_means[j]) / (step.distance_sds[j] + stats::kEpsilon);
        }
        step.neighbor_points.push_back(std::move(point));
        step.neighbor_targets.push_back(inv.at(r, col).number_value());
    }
    if (step.neighbor_targets.size() < k) {
        throw DataError("impute_knn: only " + std::to_string(step.neighbor_targets.size()) +
                        " rows with '" + column + "' present, need at least " + std::to_string(k));
    }
    return step;
}

Inventory apply_impute_knn(const Inventory& inv, const TransformStep& step) {
    const std::size_t col = numeric_column_index(inv, step.column);
    std::vector<std::size_t> dist_cols;
    for (const auto& name : step.distance_columns) {
        const auto idx = inv.schema().index_of(name);
        if (!idx) throw DataError("impute_knn: no such distance column '" + name + "'");
        dist_cols.push_back(*idx);
    }

    std::vector<Row> rows = inv.rows();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r][col].is_missing()) continue;
        std::vector<double> point(dist_cols.size());
        for (std::size_t j = 0; j < dist_cols.size(); ++j) {
            const Cell& cell = rows[r][dist_cols[j]];
            if (cell.is_missing()) {
                throw DataError("impute_knn: distance column '" + step.distance_columns[j] +
                                "' is missing in row " + std::to_string(r));
            }
            point[j] = (cell.number_value() - step.distance_means[j]) /
                       (step.distance_sds[j] + stats::kEpsilon);
        }
        // (distance^2, pool index); ties resolved by lower pool index.
        std::vector<std::pair<double, std::size_t>> order(step.neighbor_points.size());
        for (std::size_t p = 0; p < step.neighbor_points.size(); ++p) {
            double d2 = 0.0;
            for (std::size_t j = 0; j < point.size(); ++j) {
                const double diff = point[j] - step.neighbor_points[p][j];
                d2 += diff * diff;
            }
            order[p] = {d2, p};
        }
        std::sort(order.begin(), order.end());
        double sum = 0.0;
        for (std::size_t i = 0; i < step.k; ++i) sum += step.neighbor_targets[order[i].second];
        rows[r][col] = Cell::number(sum / static_cast<double>(step.k));
    }
    return Inventory(inv.schema(), std::move(rows));
}

TransformStep fit_winsorize(const Inventory& inv, const std::string& column, double q_lo,
                            double q_hi) {
    if (!(q_lo >= 0.0 && q_lo < q_hi && q_hi <= 1.0)) {
        throw DataError("winsorize: need 0 <= q_lo < q_hi <= 1");
    }
    const std::size_t col = numeric_column_index(inv, column);
    auto values = inv.numeric_column(col);
    if (values.empty()) throw DataError("winsorize: column '" + column + "' is empty");
    std::sort(values.begin(), values.end());
    TransformStep step;
    step.kind = StepKind::Winsorize;
    step.column = column;
    step.q_lo = q_lo;
    step.q_hi = q_hi;
    step.clamp_lo = stats::quantile_sorted(values, q_lo);
    step.clamp_hi = stats::quantile_sorted(values, q_hi);
    return step;
}

TransformStep fit_log(const Inventory& inv, const std::string& column) {
    const std::size_t col = numeric_column_index(inv, column);
    for (double v : inv.numeric_column(col)) {
        if (v <= 0.0) {
            throw DataError("log: column '" + column + "' has a non-positive value " +
                            std::to_string(v));
        }
    }
    TransformStep step;
    step.kind = StepKind::Log;
    step.column = column;
    return step;
}

TransformStep fit_rank_quantile(const Inventory& inv, const std::string& column,
                                RankTarget target) {
    const std::size_t col = numeric_column_index(inv, column);
    auto values = inv.numeric_column(col);
    if (values.size() < 2) {
        throw DataError("rank_quantile: column '" + column + "' needs at least 2 values");
    }
    std::sort(values.begin(), values.end());
    if (values.front() == values.back()) {
        throw DataError("rank_quantile: column '" + column + "' is constant");
    }

    // Plotting positions u = (rank - 0.5)/n with average ranks for ties,
    // collapsed to one (value, u) node per distinct value.
    TransformStep step;
    step.kind = StepKind::RankQuantile;
    step.column = column;
    step.target = target;
    const double n = static_cast<double>(values.size());
    std::size_t i = 0;
    while (i < values.size()) {
        std::size_t j = i;
        while (j + 1 < values.size() && values[j + 1] == values[i]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1);
        step.ref_values.push_back(values[i]);
        step.ref_positions.push_back((avg_rank - 0.5) / n);
        i = j + 1;
    }
    return step;
}

// Piecewise-linear interpolation through (xs, ys); clamps outside the range.
double interp_clamped(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + t * (ys[hi] - ys[lo]);
}

Inventory apply_rank_quantile(const Inventory& inv, const TransformStep& step) {
    const std::size_t col = numeric_column_index(inv, step.column);
    return map_column(inv, col, [&](double x) {
        const double u = interp_clamped(step.ref_values, step.ref_positions, x);
        return step.target == RankTarget::Uniform ? u : stats::norm_quantile(u);
    });
}

Inventory invert_rank_quantile(const Inventory& inv, const TransformStep& step) {
    const std::size_t col = numeric_column_index(inv, step.column);
    return map_column(inv, col, [&](double y) {
        double u = step.target == RankTarget::Uniform ? y : stats::norm_cdf(y);
        u = std::clamp(u, step.ref_positions.front(), step.ref_positions.back());
        return interp_clamped(step.ref_positions, step.ref_values, u);
    });
}

TransformStep fit_zscore(const Inventory& inv, const std::string& column) {
    const std::size_t col = numeric_column_index(inv, column);
    const auto values = inv.numeric_column(col);
    if (values.size() < 2) {
        throw DataError("zscore: column '" + column + "' needs at least 2 values");
    }
    TransformStep step;
    step.kind = StepKind::Zscore;
    step.column = column;
    step.mean = stats::mean(values);
    step.sd = stats::sample_sd(values);
    return step;
}

} // namespace

TransformStep fit_step(const Inventory& inv, const StepRequest& request) {
    switch (request.kind) {
    case StepKind::MissingIndicator: return fit_missing_indicator(inv);
    case StepKind::ImputeMedian: return fit_impute_median(inv, request.column);
    case StepKind::ImputeKnn: return fit_impute_knn(inv, request.column, request.k);
    case StepKind::Winsorize: return fit_winsorize(inv, request.column, request.q_lo, request.q_hi);
    case StepKind::Log: return fit_log(inv, request.column);
    case StepKind::RankQuantile: return fit_rank_quantile(inv, request.column, request.target);
    case StepKind::Zscore: return fit_zscore(inv, request.column);
    }
    throw DataError("unhandled step kind");
}

Inventory apply_step(const Inventory& inv, const TransformStep& step) {
    switch (step.kind) {
    case StepKind::MissingIndicator: return apply_missing_indicator(inv, step);
    case StepKind::ImputeMedian: return apply_impute_median(inv, step);
    case StepKind::ImputeKnn: return apply_impute_knn(inv, step);
    case StepKind::Winsorize: {
        const std::size_t col = numeric_column_index(inv, step.column);
        return map_column(inv, col,
                          [&](double x) { return std::clamp(x, step.clamp_lo, step.clamp_hi); });
    }
    case StepKind::Log: {
        const std::size_t col = numeric_column_index(inv, step.column);
        return map_column(inv, col, [&](double x) {
            if (x <= 0.0) {
                throw DataError("log: non-positive value in column '" + step.column + "'");
            }
            return std::log(x);
        });
    }
    case StepKind::RankQuantile: return apply_rank_quantile(inv, step);
    case StepKind::Zscore: {
        const std::size_t col = numeric_column_index(inv, step.column);
        return map_column(inv, col, [&](double x) {
            return (x - step.mean) / (step.sd + stats::kEpsilon);
        });
    }
    }
    throw DataError("unhandled step kind");
}

Inventory invert_step(const Inventory& inv, const TransformStep& step) {
    switch (step.kind) {
    case StepKind::Log: {
        const std::size_t col = numeric_column_index(inv, step.column);
        return map_column(inv, col, [](double y) { return std::exp(y); });
    }
    case StepKind::Zscore: {
        const std::size_t col = numeric_column_index(inv, step.column);
        return map_column(inv, col, [&](double y) {
            return y * (step.sd + stats::kEpsilon) + step.mean;
        });
    }
    case StepKind::RankQuantile: return invert_rank_quantile(inv, step);
    default:
        throw DataError(std::string("step '") + step_kind_name(step.kind) +
                        "' is not invertible");
    }
}

Inventory TransformPipeline::apply(const Inventory& inv) const {
    Inventory out = inv;
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        try {
            out = apply_step(out, steps_[i]);
        } catch (const DataError& e) {
            throw DataError("pipeline step " + std::to_string(i) + " (" +
                            step_kind_name(steps_[i].kind) + "): " + e.what());
        }
    }
    return out;
}

Inventory TransformPipeline::invert(const Inventory& inv) const {
    Inventory out = inv;
    for (std::size_t i = steps_.size(); i > 0; --i) {
        try {
            out = invert_step(out, steps_[i - 1]);
        } catch (const DataError& e) {
            throw DataError("pipeline step " + std::to_string(i - 1) + " (" +
                            step_kind_name(steps_[i - 1].kind) + "): " + e.what());
        }
    }
    return out;
}

std::pair<Inventory, TransformPipeline> fit_apply_pipeline(const Inventory& inv,
                                                           const std::vector<StepRequest>& spec) {
    const std::string fingerprint = inventory_fingerprint(inv);
    Inventory out = inv;
    std::vector<TransformStep> steps;
    steps.reserve(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
        try {
            TransformStep step = fit_step(out, spec[i]);
            out = apply_step(out, step);
            steps.push_back(std::move(step));
        } catch (const DataError& e) {
            throw DataError("pipeline step " + std::to_string(i) + " (" +
                            step_kind_name(spec[i].kind) + "): " + e.what());
        }
    }
    return {std::move(out), TransformPipeline(std::move(steps), fingerprint)};
}

Inventory add_missing_indicators(const Inventory& inv) {
    return apply_missing_indicator(inv, fit_missing_indicator(inv));
}

std::pair<Inventory, double> impute_median(const Inventory& inv, const std::string& column) {
    const TransformStep step = fit_impute_median(inv, column);
    return {apply_impute_median(inv, step), step.median};
}

Inventory impute_knn(const Inventory& inv, const std::string& column, std::size_t k) {
    return apply_impute_knn(inv, fit_impute_knn(inv, column, k));
}

std::pair<Inventory, std::pair<double, double>> winsorize(const Inventory& inv,
                                                          const std::string& column, double q_lo,
                                                          double q_hi) {
    const TransformStep step = fit_winsorize(inv, column, q_lo, q_hi);
    return {apply_step(inv, step), {step.clamp_lo, step.clamp_hi}};
}

Inventory transform_log(const Inventory& inv, const std::string& column) {
    return apply_step(inv, fit_log(inv, column));
}

std::pair<Inventory, TransformStep> transform_rank_quantile(const Inventory& inv,
                                                            const std::string& column,
                                                            RankTarget target) {
    const TransformStep step = fit_rank_quantile(inv, column, target);
    return {apply_rank_quantile(inv, step), step};
}

std::tuple<Inventory, double, double> transform_zscore(const Inventory& inv,
                                                       const std::string& column) {
    const TransformStep step = fit_zscore(inv, column);
    return {apply_step(inv, step), step.mean, step.sd};
}

// --- JSON (de)serialization -------------------------------------------------

std::vector<StepRequest> step_requests_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw DataError("step list must be a JSON array");
    std::vector<StepRequest> requests;
    for (const auto& js : j) {
        StepRequest req;
        req.kind = step_kind_from_name(js.at("kind").get<std::string>());
        req.column = js.value("column", std::string{});
        if (js.contains("k")) req.k = js["k"].get<std::size_t>();
        if (js.contains("q_lo")) req.q_lo = js["q_lo"].get<double>();
        if (js.contains("q_hi")) req.q_hi = js["q_hi"].get<double>();
        if (js.contains("target")) {
            const auto t = js["target"].get<std::string>();
            if (t == "uniform") req.target = RankTarget::Uniform;
            else if (t == "normal") req.target = RankTarget::Normal;
            else throw DataError("rank_quantile target must be 'uniform' or 'normal'");
        }
        requests.push_back(std::move(req));
    }
    return requests;
}

nlohmann::json TransformPipeline::to_json() const {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : steps_) {
        nlohmann::json js{{"kind", step_kind_name(s.kind)},
                          {"column", s.column},
                          {"invertible", invertibility_name(s.invertibility())}};
        nlohmann::json params = nlohmann::json::object();
        switch (s.kind) {
        case StepKind::MissingIndicator: params["columns"] = s.indicator_columns; break;
        case StepKind::ImputeMedian: params["median"] = s.median; break;
        case StepKind::ImputeKnn:
            params["k"] = s.k;
            params["distance_columns"] = s.distance_columns;
            params["distance_means"] = s.distance_means;
            params["distance_sds"] = s.distance_sds;
            params["neighbor_points"] = s.neighbor_points;
            params["neighbor_targets"] = s.neighbor_targets;
            break;
        case StepKind::Winsorize:
            params["q_lo"] = s.q_lo;
            params["q_hi"] = s.q_hi;
            params["lo"] = s.clamp_lo;
            params["hi"] = s.clamp_hi;
            break;
        case StepKind::Log: break;
        case StepKind::RankQuantile:
            params["target"] = s.target == RankTarget::Uniform ? "uniform" : "normal";
            params["values"] = s.ref_values;
            params["positions"] = s.ref_positions;
            break;
        case StepKind::Zscore:
            params["mean"] = s.mean;
            params["sd"] = s.sd;
            break;
        }
        js["params"] = std::move(params);
        steps.push_back(std::move(js));
    }
    return nlohmann::json{{"fitted_on", fitted_on_}, {"steps", steps}};
}

TransformPipeline TransformPipeline::from_json(const nlohmann::json& j) {
    std::vector<TransformStep> steps;
    for (const auto& js : j.at("steps")) {
        TransformStep s;
        s.kind = step_kind_from_name(js.at("kind").get<std::string>());
        s.column = js.value("column", std::string{});
        const auto& params = js.at("params");
        switch (s.kind) {
        case StepKind::MissingIndicator:
            s.indicator_columns = params.at("columns").get<std::vector<std::string>>();
            break;
        case StepKind::ImputeMedian: s.median = params.at("median").get<double>(); break;
        case StepKind::ImputeKnn:
            s.k = params.at("k").get<std::size_t>();
            s.distance_columns = params.at("distance_columns").get<std::vector<std::string>>();
            s.distance_means = params.at("distance_means").get<std::vector<double>>();
            s.distance_sds = params.at("distance_sds").get<std::vector<double>>();
            s.neighbor_points = params.at("neighbor_points").get<std::vector<std::vector<double>>>();
            s.neighbor_targets = params.at("neighbor_targets").get<std::vector<double>>();
            break;
        case StepKind::Winsorize:
            s.q_lo = params.at("q_lo").get<double>();
            s.q_hi = params.at("q_hi").get<double>();
            s.clamp_lo = params.at("lo").get<double>();
            s.clamp_hi = params.at("hi").get<double>();
            break;
        case StepKind::Log: break;
        case StepKind::RankQuantile:
            s.target = params.at("target").get<std::string>() == "normal" ? RankTarget::Normal
                                                                          : RankTarget::Uniform;
            s.ref_values = params.at("values").get<std::vector<double>>();
            s.ref_positions = params.at("positions").get<std::vector<double>>();
            break;
        case StepKind::Zscore:
            s.mean = params.at("mean").get<double>();
            s.sd = params.at("sd").get<double>();
            break;
        }
        steps.push_back(std::move(s));
    }
    return TransformPipeline(std::move(steps), j.value("fitted_on", std::string{}));
}

} // namespace tabgen
