#include "tabgen/bench.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>

#include "tabgen/baselines.hpp"
#include "tabgen/csv_io.hpp"
#include "tabgen/errors.hpp"
#include "tabgen/generator.hpp"
#include "tabgen/kernel_backend.hpp"
#include "tabgen/stats.hpp"

namespace tabgen {

namespace {

std::uint64_t method_seed(std::uint64_t seed, const std::string& method) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : method) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return RngStream::avalanche(seed ^ h);
}

Inventory run_proposed(const Inventory& train, const BenchOptions& options,
                       std::uint64_t seed) {
    KernelBackendOptions kopts;
    kopts.lambda_cat = options.lambda_cat;
    const KernelBackend model = KernelBackend::fit(train, kopts);

    GenerationConfig cfg = options.gen;
    cfg.seed = seed;
    const auto pool = generate_pool(model, cfg);
    const auto accepted = apply_selection(pool, options.sel);
    if (accepted.empty()) throw MethodError("proposed: selection accepted no candidates");

    std::vector<Row> rows;
    rows.reserve(accepted.size());
    for (const auto& cand : accepted) rows.push_back(cand.row);
    return Inventory(train.schema(), std::move(rows));
}

} // namespace

BenchResult run_comparison(const Inventory& train, const Inventory& truth,
                           const std::vector<std::string>& methods, const BenchOptions& options,
                           std::uint64_t seed) {
    if (methods.empty()) throw DataError("run_comparison: no methods requested");
    if (!train.schema().compatible_with(truth.schema())) {
        throw DataError("run_comparison: train and truth schemas differ");
    }

    BenchResult result;
    result.seed = seed;

    for (const auto& method : methods) {
        BenchMethodResult mr;
        mr.method = method;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            Inventory synthetic;
            const std::uint64_t mseed = method_seed(seed, method);
            if (method == "proposed") {
                synthetic = run_proposed(train, options, mseed);
            } else if (method == "mc") {
                synthetic = mc_generate(mc_fit(train), truth.row_count(), mseed);
            } else if (method == "smote") {
                SmoteConfig cfg;
                cfg.k = options.smote_k;
                cfg.n_new = truth.row_count();
                cfg.seed = mseed;
                synthetic = smote_generate(train, cfg);
            } else {
                const auto it = options.external.find(method);
                if (it == options.external.end()) {
                    throw DataError("unknown method '" + method +
                                    "' (expected proposed, mc, smote, or an external label)");
                }
                synthetic = load_csv(it->second, truth.schema());
            }
            mr.report = full_report(truth, synthetic, method);
            mr.synthetic = std::move(synthetic);
            mr.ok = true;
        } catch (const std::exception& e) {
            mr.ok = false;
            mr.error = e.what();
        }
        mr.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.methods.push_back(std::move(mr));
    }
    return result;
}

namespace {

// Sanitize a method label for use in a file name.
std::string file_label(const std::string& method) {
    std::string out;
    for (char ch : method) {
        out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_') ? ch
                                                                                        : '_';
    }
    return out;
}

std::vector<std::pair<std::string, double>> flat_metrics(const FeatureMetrics& fm) {
    std::vector<std::pair<std::string, double>> out;
    if (fm.numeric) {
        out = {{"abs_err", fm.numeric->abs_err},
               {"rel_err", fm.numeric->rel_err},
               {"sd_diff", fm.numeric->sd_diff},
               {"rel_sd_diff", fm.numeric->rel_sd_diff},
               {"bias_per_sd", fm.numeric->bias_per_sd},
               {"w1_per_sd", fm.numeric->w1_per_sd},
               {"ks_stat", fm.numeric->ks_stat},
               {"js_div", fm.numeric->js_div}};
    } else if (fm.categorical) {
        out = {{"tv_distance", fm.categorical->tv_distance},
               {"js_div", fm.categorical->js_div}};
    }
    return out;
}

} // namespace

void emit_report(const BenchResult& result, const Inventory& truth,
                 const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    for (const auto& mr : result.methods) {
        const auto path = out_dir / ("report_" + file_label(mr.method) + ".json");
        if (mr.ok) {
            save_report(mr.report, path);
        } else {
            std::ofstream out(path, std::ios::binary);
            if (!out) throw DataError("cannot write file: " + path.string());
            out << "{\n  \"method\": \"" << mr.method << "\",\n  \"error\": \"" << mr.error
                << "\"\n}\n";
        }
    }

    // Comparison CSV: one row per (feature, metric), one column per method.
    {
        std::ofstream out(out_dir / "comparison.csv", std::ios::binary);
        if (!out) throw DataError("cannot write comparison.csv");
        out << "feature,metric";
        for (const auto& mr : result.methods) out << ',' << csv_escape(mr.method);
        out << '\n';

        const BenchMethodResult* shape = nullptr;
        for (const auto& mr : result.methods) {
            if (mr.ok) {
                shape = &mr;
                break;
            }
        }
        if (shape) {
            for (std::size_t f = 0; f < shape->report.features.size(); ++f) {
                for (const auto& [metric, _] : flat_metrics(shape->report.features[f])) {
                    out << csv_escape(shape->report.features[f].name) << ',' << metric;
                    for (const auto& mr : result.methods) {
                        out << ',';
                        if (!mr.ok) continue;
                        for (const auto& [name, value] : flat_metrics(mr.report.features[f])) {
                            if (name == metric) {
                                out << format_double(value);
                                break;
                            }
                        }
                    }
                    out << '\n';
                }
            }
            for (std::size_t p = 0; p < shape->report.dependence.size(); ++p) {
                const auto& entry = shape->report.dependence[p];
                for (const char* metric : {"pearson_delta", "spearman_delta"}) {
                    out << csv_escape(entry.a + "~" + entry.b) << ',' << metric;
                    for (const auto& mr : result.methods) {
                        out << ',';
                        if (!mr.ok || !mr.report.dependence[p].valid) continue;
                        const auto& e = mr.report.dependence[p];
                        out << format_double(std::string(metric) == "pearson_delta"
                                                 ? e.pearson_delta
                                                 : e.spearman_delta);
                    }
                    out << '\n';
                }
            }
        }
    }

    // Per-numeric-feature KDE and empirical CDF grids over a shared range.
    const auto& schema = truth.schema();
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (!schema.at(c).is_numeric()) continue;
        const auto truth_vals = truth.numeric_column(c);
        double lo = *std::min_element(truth_vals.begin(), truth_vals.end());
        double hi = *std::max_element(truth_vals.begin(), truth_vals.end());
        for (const auto& mr : result.methods) {
            if (!mr.ok || !mr.synthetic) continue;
            const auto vals = mr.synthetic->numeric_column(c);
            lo = std::min(lo, *std::min_element(vals.begin(), vals.end()));
            hi = std::max(hi, *std::max_element(vals.begin(), vals.end()));
        }
        const double h =
            stats::silverman_bandwidth(stats::sample_sd(truth_vals), truth_vals.size());
        lo -= 3.0 * h;
        hi += 3.0 * h;
        constexpr std::size_t kGrid = 256;
        const double step = (hi - lo) / static_cast<double>(kGrid - 1);

        auto kde_at = [&](const std::vector<double>& sample, double x) {
            double s = 0.0;
            for (double v : sample) s += stats::norm_pdf(x, v, h);
            return s / static_cast<double>(sample.size());
        };
        auto ecdf_at = [](const std::vector<double>& sorted, double x) {
            const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
            return static_cast<double>(it - sorted.begin()) /
                   static_cast<double>(sorted.size());
        };

        std::vector<std::pair<std::string, std::vector<double>>> samples;
        samples.emplace_back("truth", truth_vals);
        for (const auto& mr : result.methods) {
            if (mr.ok && mr.synthetic) samples.emplace_back(mr.method, mr.synthetic->numeric_column(c));
        }
        for (auto& [_, vals] : samples) std::sort(vals.begin(), vals.end());

        const std::string base = file_label(schema.at(c).name);
        std::ofstream kde_out(out_dir / ("kde_" + base + ".csv"), std::ios::binary);
        std::ofstream cdf_out(out_dir / ("cdf_" + base + ".csv"), std::ios::binary);
        if (!kde_out || !cdf_out) throw DataError("cannot write plot grids");
        kde_out << "x";
        cdf_out << "x";
        for (const auto& [label, _] : samples) {
            kde_out << ',' << csv_escape(label);
            cdf_out << ',' << csv_escape(label);
        }
        kde_out << '\n';
        cdf_out << '\n';
        for (std::size_t k = 0; k < kGrid; ++k) {
            const double x = lo + step * static_cast<double>(k);
            kde_out << format_double(x);
            cdf_out << format_double(x);
            for (const auto& [_, vals] : samples) {
                kde_out << ',' << format_double(kde_at(vals, x));
                cdf_out << ',' << format_double(ecdf_at(vals, x));
            }
            kde_out << '\n';
            cdf_out << '\n';
        }
    }
}

} // namespace tabgen
