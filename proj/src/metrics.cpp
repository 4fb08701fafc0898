#include "tabgen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "tabgen/csv_io.hpp"
#include "tabgen/errors.hpp"
#include "tabgen/stats.hpp"

namespace tabgen {

namespace {

constexpr double kProbFloor = 1e-12;
constexpr std::size_t kJsGridPoints = 512;

void require_non_empty(std::span<const double> orig, std::span<const double> gen,
                       const char* op) {
    if (orig.empty() || gen.empty()) {
        throw DataError(std::string(op) + ": empty sample");
    }
}

double kl_half(std::span<const double> p, std::span<const double> m) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > kProbFloor) {
            s += p[i] * std::log(p[i] / std::max(m[i], kProbFloor));
        }
    }
    return s;
}

double js_from_distributions(std::span<const double> p, std::span<const double> q) {
    std::vector<double> m(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
    return 0.5 * kl_half(p, m) + 0.5 * kl_half(q, m);
}

} // namespace

std::pair<double, double> mean_metrics(std::span<const double> orig,
                                       std::span<const double> gen) {
    require_non_empty(orig, gen, "mean_metrics");
    const double mo = stats::mean(orig);
    const double mg = stats::mean(gen);
    const double abs_err = std::abs(mo - mg);
    return {abs_err, abs_err / (std::abs(mo) + stats::kEpsilon)};
}

std::pair<double, double> sd_metrics(std::span<const double> orig, std::span<const double> gen) {
    if (orig.size() < 2 || gen.size() < 2) {
        throw DataError("sd_metrics: both samples need at least 2 values");
    }
    const double so = stats::sample_sd(orig);
    const double sg = stats::sample_sd(gen);
    const double diff = std::abs(so - sg);
    return {diff, diff / (so + stats::kEpsilon)};
}

double bias_per_sd(std::span<const double> orig, std::span<const double> gen) {
    require_non_empty(orig, gen, "bias_per_sd");
    if (orig.size() < 2) throw DataError("bias_per_sd: original sample needs at least 2 values");
    const double so = stats::sample_sd(orig);
    return std::abs(stats::mean(orig) - stats::mean(gen)) / (so + stats::kEpsilon);
}

double wasserstein_w1(std::span<const double> orig, std::span<const double> gen) {
    require_non_empty(orig, gen, "wasserstein");
    std::vector<double> a(orig.begin(), orig.end());
    std::vector<double> b(gen.begin(), gen.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::uint64_t na = a.size();
    const std::uint64_t nb = b.size();

    // The quantile functions are step functions with breakpoints at i/na and
    // j/nb; integrate |difference| over the merged intervals. Breakpoint
    // comparisons use exact integer cross-multiplication.
    double total = 0.0;
    double u = 0.0;
    std::size_t i = 0, j = 0;
    while (i < na && j < nb) {
        const std::uint64_t lhs = (i + 1) * nb;
        const std::uint64_t rhs = (j + 1) * na;
        const double next = lhs <= rhs ? static_cast<double>(i + 1) / static_cast<double>(na)
                                       : static_cast<double>(j + 1) / static_cast<double>(nb);
        total += (next - u) * std::abs(a[i] - b[j]);
        if (lhs <= rhs) ++i;
        if (rhs <= lhs) ++j;
        u = next;
    }
    return total;
}

double wasserstein_per_sd(std::span<const double> orig, std::span<const double> gen) {
    if (orig.size() < 2) {
        throw DataError("wasserstein_per_sd: original sample needs at least 2 values");
    }
    return wasserstein_w1(orig, gen) / (stats::sample_sd(orig) + stats::kEpsilon);
}

double ks_statistic(std::span<const double> orig, std::span<const double> gen) {
    require_non_empty(orig, gen, "ks_statistic");
    std::vector<double> a(orig.begin(), orig.end());
    std::vector<double> b(gen.begin(), gen.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());

    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        double x;
        if (i < a.size() && (j >= b.size() || a[i] <= b[j])) x = a[i];
        else x = b[j];
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double js_divergence_numeric(std::span<const double> orig, std::span<const double> gen) {
    if (orig.size() < 2 || gen.size() < 2) {
        throw DataError("js_divergence: both samples need at least 2 values");
    }
    std::vector<double> pooled(orig.begin(), orig.end());
    pooled.insert(pooled.end(), gen.begin(), gen.end());
    // sorted so the bandwidth and grid do not depend on the argument order
    std::sort(pooled.begin(), pooled.end());
    const double h = stats::silverman_bandwidth(stats::sample_sd(pooled), pooled.size());
    const double lo = pooled.front() - 3.0 * h;
    const double hi = pooled.back() + 3.0 * h;
    const double step = (hi - lo) / static_cast<double>(kJsGridPoints - 1);

    auto grid_density = [&](std::span<const double> sample) {
        std::vector<double> dens(kJsGridPoints, 0.0);
        for (std::size_t k = 0; k < kJsGridPoints; ++k) {
            const double x = lo + step * static_cast<double>(k);
            double s = 0.0;
            for (double v : sample) s += stats::norm_pdf(x, v, h);
            dens[k] = s;
        }
        double total = 0.0;
        for (double dv : dens) total += dv;
        for (double& dv : dens) dv /= total;
        return dens;
    };

    return js_from_distributions(grid_density(orig), grid_density(gen));
}

double js_divergence_categorical(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size() || p.empty()) {
        throw DataError("js_divergence: frequency vectors must have equal non-zero length");
    }
    return js_from_distributions(p, q);
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size() || p.empty()) {
        throw DataError("tv_distance: frequency vectors must have equal non-zero length");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

namespace {

std::vector<double> category_frequencies(const Inventory& inv, std::size_t col) {
    const FeatureSpec& spec = inv.schema().at(col);
    std::vector<double> freq(spec.categories.size(), 0.0);
    double total = 0.0;
    for (const auto& row : inv.rows()) {
        if (row[col].is_missing()) continue;
        freq[static_cast<std::size_t>(spec.category_index(row[col].category_label()))] += 1.0;
        total += 1.0;
    }
    if (total == 0.0) {
        throw DataError("no non-missing values in categorical column '" + spec.name + "'");
    }
    for (double& f : freq) f /= total;
    return freq;
}

// Values of two columns restricted to rows where both are present.
std::pair<std::vector<double>, std::vector<double>> paired_columns(const Inventory& inv,
                                                                   std::size_t a,
                                                                   std::size_t b) {
    std::vector<double> xs, ys;
    for (const auto& row : inv.rows()) {
        if (row[a].is_missing() || row[b].is_missing()) continue;
        xs.push_back(row[a].number_value());
        ys.push_back(row[b].number_value());
    }
    return {std::move(xs), std::move(ys)};
}

} // namespace

std::vector<DependenceEntry> dependence_delta(const Inventory& orig, const Inventory& gen) {
    if (!orig.schema().compatible_with(gen.schema())) {
        throw DataError("dependence_delta: schemas differ");
    }
    if (orig.row_count() < 3 || gen.row_count() < 3) {
        throw DataError("dependence_delta: both tables need at least 3 rows");
    }

    std::vector<std::size_t> num_cols;
    for (std::size_t c = 0; c < orig.feature_count(); ++c) {
        if (orig.schema().at(c).is_numeric()) num_cols.push_back(c);
    }

    std::vector<DependenceEntry> table;
    for (std::size_t i = 0; i < num_cols.size(); ++i) {
        for (std::size_t j = i + 1; j < num_cols.size(); ++j) {
            DependenceEntry entry;
            entry.a = orig.schema().at(num_cols[i]).name;
            entry.b = orig.schema().at(num_cols[j]).name;
            const auto [xo, yo] = paired_columns(orig, num_cols[i], num_cols[j]);
            const auto [xg, yg] = paired_columns(gen, num_cols[i], num_cols[j]);
            const double po = stats::pearson(xo, yo);
            const double pg = stats::pearson(xg, yg);
            const double so = stats::spearman(xo, yo);
            const double sg = stats::spearman(xg, yg);
            if (std::isfinite(po) && std::isfinite(pg) && std::isfinite(so) &&
                std::isfinite(sg)) {
                entry.pearson_delta = std::abs(po - pg);
                entry.spearman_delta = std::abs(so - sg);
            } else {
                entry.valid = false;
            }
            table.push_back(std::move(entry));
        }
    }
    return table;
}

MetricReport full_report(const Inventory& orig, const Inventory& gen, std::string method_label) {
    if (!orig.schema().compatible_with(gen.schema())) {
        throw DataError("full_report: schemas differ (names, kinds or category sets)");
    }

    MetricReport report;
    report.n_orig = orig.row_count();
    report.n_gen = gen.row_count();
    report.method = std::move(method_label);

    for (std::size_t c = 0; c < orig.feature_count(); ++c) {
        const FeatureSpec& spec = orig.schema().at(c);
        FeatureMetrics fm;
        fm.name = spec.name;
        fm.kind = spec.kind;
        if (spec.is_numeric()) {
            const auto o = orig.numeric_column(c);
            const auto g = gen.numeric_column(c);
            NumericFeatureMetrics m;
            std::tie(m.abs_err, m.rel_err) = mean_metrics(o, g);
            std::tie(m.sd_diff, m.rel_sd_diff) = sd_metrics(o, g);
            m.bias_per_sd = bias_per_sd(o, g);
            m.w1_per_sd = wasserstein_per_sd(o, g);
            m.ks_stat = ks_statistic(o, g);
            m.js_div = js_divergence_numeric(o, g);
            fm.numeric = m;
        } else {
            const auto fo = category_frequencies(orig, c);
            const auto fg = category_frequencies(gen, c);
            CategoricalFeatureMetrics m;
            m.tv_distance = tv_distance(fo, fg);
            m.js_div = js_divergence_categorical(fo, fg);
            m.categories = spec.categories;
            m.per_category_abs_err.resize(fo.size());
            for (std::size_t i = 0; i < fo.size(); ++i) {
                m.per_category_abs_err[i] = std::abs(fo[i] - fg[i]);
            }
            fm.categorical = std::move(m);
        }
        report.features.push_back(std::move(fm));
    }

    if (orig.row_count() >= 3 && gen.row_count() >= 3) {
        report.dependence = dependence_delta(orig, gen);
    }

    // mean/max aggregates per metric, over the features it applies to.
    auto aggregate = [&report](const std::string& name, const std::vector<double>& values) {
        if (values.empty()) return;
        MetricAggregate agg;
        agg.max = *std::max_element(values.begin(), values.end());
        double s = 0.0;
        for (double v : values) s += v;
        agg.mean = s / static_cast<double>(values.size());
        report.aggregates.emplace_back(name, agg);
    };

    auto collect_numeric = [&report](auto member) {
        std::vector<double> out;
        for (const auto& fm : report.features) {
            if (fm.numeric) out.push_back((*fm.numeric).*member);
        }
        return out;
    };
    aggregate("abs_err", collect_numeric(&NumericFeatureMetrics::abs_err));
    aggregate("rel_err", collect_numeric(&NumericFeatureMetrics::rel_err));
    aggregate("sd_diff", collect_numeric(&NumericFeatureMetrics::sd_diff));
    aggregate("rel_sd_diff", collect_numeric(&NumericFeatureMetrics::rel_sd_diff));
    aggregate("bias_per_sd", collect_numeric(&NumericFeatureMetrics::bias_per_sd));
    aggregate("w1_per_sd", collect_numeric(&NumericFeatureMetrics::w1_per_sd));
    aggregate("ks_stat", collect_numeric(&NumericFeatureMetrics::ks_stat));

    std::vector<double> js_all, tv_all;
    for (const auto& fm : report.features) {
        if (fm.numeric) js_all.push_back(fm.numeric->js_div);
        if (fm.categorical) {
            js_all.push_back(fm.categorical->js_div);
            tv_all.push_back(fm.categorical->tv_distance);
        }
    }
    aggregate("js_div", js_all);
    aggregate("tv_distance", tv_all);

    std::vector<double> pearson_deltas, spearman_deltas;
    for (const auto& e : report.dependence) {
        if (e.valid) {
            pearson_deltas.push_back(e.pearson_delta);
            spearman_deltas.push_back(e.spearman_delta);
        }
    }
    aggregate("pearson_delta", pearson_deltas);
    aggregate("spearman_delta", spearman_deltas);

    return report;
}

nlohmann::ordered_json report_to_json(const MetricReport& report) {
    nlohmann::ordered_json j;
    j["meta"] = {{"n_orig", report.n_orig},
                 {"n_gen", report.n_gen},
                 {"method", report.method},
                 {"sd_convention", "sample (n-1)"},
                 {"epsilon", stats::kEpsilon},
                 {"log_base", "natural"}};

    nlohmann::ordered_json features = nlohmann::ordered_json::object();
    for (const auto& fm : report.features) {
        nlohmann::ordered_json jf;
        jf["kind"] = feature_kind_name(fm.kind);
        if (fm.numeric) {
            jf["abs_err"] = fm.numeric->abs_err;
            jf["rel_err"] = fm.numeric->rel_err;
            jf["sd_diff"] = fm.numeric->sd_diff;
            jf["rel_sd_diff"] = fm.numeric->rel_sd_diff;
            jf["bias_per_sd"] = fm.numeric->bias_per_sd;
            jf["w1_per_sd"] = fm.numeric->w1_per_sd;
            jf["ks_stat"] = fm.numeric->ks_stat;
            jf["js_div"] = fm.numeric->js_div;
        }
        if (fm.categorical) {
            jf["tv_distance"] = fm.categorical->tv_distance;
            jf["js_div"] = fm.categorical->js_div;
            nlohmann::ordered_json per = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < fm.categorical->per_category_abs_err.size(); ++i) {
                per[fm.categorical->categories[i]] = fm.categorical->per_category_abs_err[i];
            }
            jf["per_category_abs_err"] = std::move(per);
        }
        features[fm.name] = std::move(jf);
    }
    j["features"] = std::move(features);

    nlohmann::ordered_json dep = nlohmann::ordered_json::array();
    for (const auto& e : report.dependence) {
        nlohmann::ordered_json je{{"a", e.a}, {"b", e.b}, {"valid", e.valid}};
        if (e.valid) {
            je["pearson_delta"] = e.pearson_delta;
            je["spearman_delta"] = e.spearman_delta;
        }
        dep.push_back(std::move(je));
    }
    j["dependence"] = std::move(dep);

    nlohmann::ordered_json aggs = nlohmann::ordered_json::object();
    for (const auto& [name, agg] : report.aggregates) {
        aggs[name] = {{"mean", agg.mean}, {"max", agg.max}};
    }
    j["aggregates"] = std::move(aggs);
    return j;
}

void save_report(const MetricReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << report_to_json(report).dump(2) << '\n';
}

void save_report_csv(const MetricReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << "feature,metric,value\n";
    auto emit = [&out](const std::string& feature, const char* metric, double value) {
        out << csv_escape(feature) << ',' << metric << ',' << format_double(value) << '\n';
    };
    for (const auto& fm : report.features) {
        if (fm.numeric) {
            emit(fm.name, "abs_err", fm.numeric->abs_err);
            emit(fm.name, "rel_err", fm.numeric->rel_err);
            emit(fm.name, "sd_diff", fm.numeric->sd_diff);
            emit(fm.name, "rel_sd_diff", fm.numeric->rel_sd_diff);
            emit(fm.name, "bias_per_sd", fm.numeric->bias_per_sd);
            emit(fm.name, "w1_per_sd", fm.numeric->w1_per_sd);
            emit(fm.name, "ks_stat", fm.numeric->ks_stat);
            emit(fm.name, "js_div", fm.numeric->js_div);
        }
        if (fm.categorical) {
            emit(fm.name, "tv_distance", fm.categorical->tv_distance);
            emit(fm.name, "js_div", fm.categorical->js_div);
        }
    }
    for (const auto& e : report.dependence) {
        if (!e.valid) continue;
        emit(e.a + "~" + e.b, "pearson_delta", e.pearson_delta);
        emit(e.a + "~" + e.b, "spearman_delta", e.spearman_delta);
    }
}

} // namespace tabgen
