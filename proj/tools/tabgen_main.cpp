// tabgen command-line tool: ingest/preprocess tabular inventories, generate
// candidate rows by conditional sampling, select and mix them, run the
// baseline generators, and score synthetic tables against observations.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 method failure.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tabgen/baselines.hpp"
#include "tabgen/bench.hpp"
#include "tabgen/csv_io.hpp"
#include "tabgen/errors.hpp"
#include "tabgen/generator.hpp"
#include "tabgen/kernel_backend.hpp"
#include "tabgen/metrics.hpp"
#include "tabgen/preprocess.hpp"
#include "tabgen/scenario.hpp"
#include "tabgen/selection.hpp"

namespace {

using nlohmann::json;
using namespace tabgen;

struct GlobalFlags {
    std::uint64_t seed = 0;
    std::string schema_path;
    std::string config_path;
    bool quiet = false;
};

std::ostream& info(const GlobalFlags& g) {
    static std::ofstream devnull;
    if (g.quiet) {
        devnull.setstate(std::ios::badbit);
        return devnull;
    }
    return std::cerr;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

// Optional config file: a JSON object whose keys mirror long flag names,
// either at the top level or nested under the subcommand name. Values are
// applied only to options the user did not pass, so flags override the file.
class ConfigSource {
public:
    void load(const std::string& path) {
        if (!path.empty()) root_ = load_json_file(path);
    }

    void focus(std::string subcommand) { section_ = std::move(subcommand); }

    template <typename T>
    void merge(const CLI::Option* opt, const char* key, T& var) const {
        if (root_.is_null() || (opt && opt->count() > 0)) return;
        const json* node = nullptr;
        if (!section_.empty() && root_.contains(section_) && root_[section_].is_object() &&
            root_[section_].contains(key)) {
            node = &root_[section_][key];
        } else if (root_.contains(key) && !root_[key].is_object()) {
            node = &root_[key];
        }
        if (!node) return;
        try {
            var = node->get<T>();
        } catch (const json::exception&) {
            throw UsageError(std::string("config value for '") + key + "' has the wrong type");
        }
    }

private:
    json root_;
    std::string section_;
};

// Schema resolution order: explicit --schema, then the <csv>.schema.json
// sidecar, then inference from the CSV itself.
FeatureSchema resolve_schema(const std::string& schema_path, const std::string& csv_path,
                             const GlobalFlags& g) {
    if (!schema_path.empty()) return load_schema(schema_path);
    const std::string sidecar = csv_path + ".schema.json";
    if (std::filesystem::exists(sidecar)) {
        info(g) << "using schema sidecar " << sidecar << "\n";
        return load_schema(sidecar);
    }
    info(g) << "no schema given; inferring one from " << csv_path << "\n";
    return infer_schema(csv_path);
}

Cell parse_condition_value(const FeatureSchema& schema, const std::string& name,
                           const std::string& text) {
    const auto idx = schema.index_of(name);
    if (!idx) throw DataError("conditioning references unknown column '" + name + "'");
    const FeatureSpec& spec = schema.at(*idx);
    if (spec.is_numeric()) {
        const auto v = parse_double(text);
        if (!v) {
            throw DataError("conditioning value '" + text + "' for numeric column '" + name +
                            "' is not a number");
        }
        return Cell::number(*v);
    }
    if (spec.category_index(text) < 0) {
        throw DataError("conditioning value '" + text + "' is not a category of '" + name + "'");
    }
    return Cell::category(text);
}

void write_inventory_with_sidecar(const Inventory& inv, const std::string& out_path) {
    save_csv(inv, out_path);
    save_schema(inv.schema(), out_path + ".schema.json");
}

void require_path(const std::string& value, const char* flag) {
    if (value.empty()) throw UsageError(std::string("missing required option ") + flag);
}

// ---------------------------------------------------------------------------

struct IngestArgs {
    std::string in, out, report_path, schema_out;
    bool dedupe = false;
};

int run_ingest(const IngestArgs& a, const GlobalFlags& g) {
    require_path(a.in, "--in");
    const FeatureSchema schema = resolve_schema(g.schema_path, a.in, g);
    Inventory inv = load_csv(a.in, schema);
    const ValidationReport report = validate(inv);

    std::size_t missing_total = 0;
    for (std::size_t c : report.missing_counts) missing_total += c;
    info(g) << a.in << ": " << inv.row_count() << " rows, " << inv.feature_count()
            << " columns, " << report.duplicate_row_indices.size() << " duplicates, "
            << missing_total << " missing cells\n";

    if (!a.schema_out.empty()) save_schema(schema, a.schema_out);
    if (!a.report_path.empty()) {
        nlohmann::ordered_json jr;
        jr["duplicate_row_indices"] = report.duplicate_row_indices;
        nlohmann::ordered_json viol = nlohmann::ordered_json::array();
        for (const auto& v : report.type_violations) {
            viol.push_back({{"row", v.row}, {"column", v.column}, {"description", v.description}});
        }
        jr["type_violations"] = std::move(viol);
        nlohmann::ordered_json missing = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < schema.size(); ++c) {
            missing[schema.at(c).name] = report.missing_counts[c];
        }
        jr["missing_counts"] = std::move(missing);
        std::ofstream out(a.report_path, std::ios::binary);
        if (!out) throw DataError("cannot write file: " + a.report_path);
        out << jr.dump(2) << '\n';
    }

    if (a.dedupe && !report.duplicate_row_indices.empty()) {
        inv = drop_rows(inv, report.duplicate_row_indices);
        info(g) << "dropped " << report.duplicate_row_indices.size() << " duplicate rows\n";
    }
    if (!a.out.empty()) write_inventory_with_sidecar(inv, a.out);
    return 0;
}

// ---------------------------------------------------------------------------

struct PreprocessArgs {
    std::string in, out, steps_path, apply_path, pipeline_out;
};

int run_preprocess(const PreprocessArgs& a, const GlobalFlags& g) {
    require_path(a.in, "--in");
    require_path(a.out, "--out");
    // fit mode: --steps, with --pipeline as the output path for the fitted
    // pipeline; apply mode: --apply (or a bare --pipeline) names a fitted
    // pipeline JSON to reuse.
    const std::string reuse_path = !a.apply_path.empty() ? a.apply_path
                                   : a.steps_path.empty() ? a.pipeline_out
                                                          : std::string{};
    if (a.steps_path.empty() && reuse_path.empty()) {
        throw UsageError("preprocess needs --steps (fit) or --apply/--pipeline (reuse)");
    }
    if (!a.steps_path.empty() && !a.apply_path.empty()) {
        throw UsageError("--steps and --apply are mutually exclusive");
    }
    const FeatureSchema schema = resolve_schema(g.schema_path, a.in, g);
    const Inventory inv = load_csv(a.in, schema);

    if (!a.steps_path.empty()) {
        const auto requests = step_requests_from_json(load_json_file(a.steps_path));
        auto [out, pipeline] = fit_apply_pipeline(inv, requests);
        write_inventory_with_sidecar(out, a.out);
        if (!a.pipeline_out.empty()) {
            std::ofstream pout(a.pipeline_out, std::ios::binary);
            if (!pout) throw DataError("cannot write file: " + a.pipeline_out);
            pout << pipeline.to_json().dump(2) << '\n';
        }
        info(g) << "fitted " << pipeline.steps().size() << " steps on " << inv.row_count()
                << " rows\n";
    } else {
        const auto pipeline = TransformPipeline::from_json(load_json_file(reuse_path));
        write_inventory_with_sidecar(pipeline.apply(inv), a.out);
        info(g) << "applied " << pipeline.steps().size() << " fitted steps\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
    std::string train, out;
    std::size_t n = 100;
    double temperature = 1.0;
    std::size_t permutations = 4;
    double lambda_cat = 0.1;
    std::vector<std::string> conditions;
};

int run_generate(const GenerateArgs& a, const GlobalFlags& g) {
    require_path(a.train, "--train");
    require_path(a.out, "--out");
    const FeatureSchema schema = resolve_schema(g.schema_path, a.train, g);
    const Inventory train = load_csv(a.train, schema);

    KernelBackendOptions kopts;
    kopts.lambda_cat = a.lambda_cat;
    const KernelBackend model = KernelBackend::fit(train, kopts);

    GenerationConfig cfg;
    cfg.candidate_count = a.n;
    cfg.temperature = a.temperature;
    cfg.permutation_count = a.permutations;
    cfg.seed = g.seed;
    for (const auto& cond : a.conditions) {
        const auto eq = cond.find('=');
        if (eq == std::string::npos) {
            throw UsageError("--condition expects col=value, got '" + cond + "'");
        }
        const std::string name = cond.substr(0, eq);
        cfg.conditioning[name] = parse_condition_value(schema, name, cond.substr(eq + 1));
    }

    const auto pool = generate_pool(model, cfg);
    save_pool(pool, schema, a.out);
    info(g) << "generated " << pool.size() << " candidates (T=" << a.temperature
            << ", M=" << a.permutations << ", seed=" << g.seed << ") -> " << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct SelectArgs {
    std::string pool_path, out;
    double tau = 0.0;
    double top_q = 0.5;
};

int run_select(const SelectArgs& a, const GlobalFlags& g, const CLI::Option* tau_opt,
               const CLI::Option* topq_opt) {
    require_path(a.pool_path, "--pool");
    require_path(a.out, "--out");
    if (tau_opt->count() > 0 && topq_opt->count() > 0) {
        throw UsageError("--tau and --top-q are mutually exclusive");
    }
    FeatureSchema schema;
    const FeatureSchema* schema_ptr = nullptr;
    if (!g.schema_path.empty()) {
        schema = load_schema(g.schema_path);
        schema_ptr = &schema;
    }
    const auto pool = load_pool(a.pool_path, schema_ptr);
    if (pool.empty()) throw DataError("pool is empty");

    SelectionConfig cfg;
    if (tau_opt->count() > 0) {
        cfg.rule = SelectionRule::Threshold;
        cfg.tau = a.tau;
    } else {
        cfg.rule = SelectionRule::TopQuantile;
        cfg.top_q = a.top_q;
    }
    const auto accepted = apply_selection(pool, cfg);

    // The accepted file needs the schema; recover it the same way load_pool did.
    FeatureSchema out_schema;
    if (schema_ptr) {
        out_schema = schema;
    } else {
        out_schema = schema_from_json(
            load_json_file(a.pool_path + ".meta.json").at("schema"));
    }
    save_accepted(accepted, out_schema, a.out);
    info(g) << "accepted " << accepted.size() << " of " << pool.size() << " candidates -> "
            << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct MixArgs {
    std::string observed, accepted, out;
    double alpha = 0.0;
    std::string subsample = "score";
};

int run_mix(const MixArgs& a, const GlobalFlags& g) {
    require_path(a.observed, "--observed");
    require_path(a.accepted, "--accepted");
    require_path(a.out, "--out");
    const FeatureSchema schema = resolve_schema(g.schema_path, a.observed, g);
    const Inventory observed = load_csv(a.observed, schema);
    const auto accepted = load_pool(a.accepted, &schema);

    SubsampleMode mode;
    if (a.subsample == "score") mode = SubsampleMode::ScoreRank;
    else if (a.subsample == "random") mode = SubsampleMode::Random;
    else throw UsageError("--subsample must be 'score' or 'random'");

    const MixedCorpus corpus = mix(observed, accepted, a.alpha, g.seed, mode);
    write_inventory_with_sidecar(corpus.table, a.out);

    nlohmann::ordered_json meta;
    meta["observed_count"] = corpus.observed_count;
    meta["synthetic_count"] = corpus.synthetic_count;
    meta["alpha_requested"] = a.alpha;
    meta["alpha_realized"] =
        corpus.synthetic_count == 0
            ? 0.0
            : static_cast<double>(corpus.synthetic_count) /
                  static_cast<double>(corpus.observed_count + corpus.synthetic_count);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < corpus.synthetic_candidate_ids.size(); ++i) {
        rows.push_back({{"corpus_row", corpus.observed_count + i},
                        {"candidate_id", corpus.synthetic_candidate_ids[i]}});
    }
    meta["synthetic_rows"] = std::move(rows);
    std::ofstream mout(a.out + ".meta.json", std::ios::binary);
    if (!mout) throw DataError("cannot write file: " + a.out + ".meta.json");
    mout << meta.dump(2) << '\n';

    info(g) << "mixed " << corpus.observed_count << " observed + " << corpus.synthetic_count
            << " synthetic rows (alpha=" << a.alpha << ") -> " << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct BaselineArgs {
    std::string train, out;
    std::size_t n = 100;
    std::size_t k = 5;
};

int run_baseline_mc(const BaselineArgs& a, const GlobalFlags& g) {
    require_path(a.train, "--train");
    require_path(a.out, "--out");
    const FeatureSchema schema = resolve_schema(g.schema_path, a.train, g);
    const Inventory train = load_csv(a.train, schema);
    const Inventory gen = mc_generate(mc_fit(train), a.n, g.seed);
    write_inventory_with_sidecar(gen, a.out);
    info(g) << "monte carlo baseline: " << a.n << " rows -> " << a.out << "\n";
    return 0;
}

int run_baseline_smote(const BaselineArgs& a, const GlobalFlags& g) {
    require_path(a.train, "--train");
    require_path(a.out, "--out");
    const FeatureSchema schema = resolve_schema(g.schema_path, a.train, g);
    const Inventory train = load_csv(a.train, schema);
    SmoteConfig cfg;
    cfg.k = a.k;
    cfg.n_new = a.n;
    cfg.seed = g.seed;
    const Inventory gen = smote_generate(train, cfg);
    write_inventory_with_sidecar(gen, a.out);
    info(g) << "smote baseline: " << a.n << " rows (k=" << a.k << ") -> " << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
    std::string orig, gen, out, csv_out, method;
};

int run_evaluate(const EvaluateArgs& a, const GlobalFlags& g) {
    require_path(a.orig, "--orig");
    require_path(a.gen, "--gen");
    const FeatureSchema schema = resolve_schema(g.schema_path, a.orig, g);
    const Inventory orig = load_csv(a.orig, schema);
    const Inventory gen = load_csv(a.gen, schema);
    const MetricReport report = full_report(orig, gen, a.method);
    if (!a.out.empty()) save_report(report, a.out);
    if (!a.csv_out.empty()) save_report_csv(report, a.csv_out);
    if (a.out.empty() && a.csv_out.empty()) {
        std::cout << report_to_json(report).dump(2) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
    std::string scenario = "coupled_met";
    std::string scenario_file;
    std::string out_dir;
    std::string methods = "proposed,mc,smote";
    std::vector<std::string> external;
    std::size_t n = 2000;
    double temperature = 1.0;
    std::size_t permutations = 4;
    double top_q = 0.5;
    double tau = 0.0;
    std::size_t smote_k = 5;
    double lambda_cat = 0.1;
    std::size_t n_train = 0; // 0 = scenario default
    std::size_t n_truth = 0;
    std::uint64_t truth_seed = 0;
};

int run_bench(const BenchArgs& a, const GlobalFlags& g, const CLI::Option* tau_opt,
              const CLI::Option* truth_seed_opt) {
    require_path(a.out_dir, "--out");

    Scenario scenario = a.scenario_file.empty()
                            ? scenario_preset(a.scenario)
                            : scenario_from_json(load_json_file(a.scenario_file));
    if (a.n_train > 0) scenario.n_train = a.n_train;
    if (a.n_truth > 0) scenario.n_truth = a.n_truth;
    if (truth_seed_opt->count() > 0) scenario.truth_seed = a.truth_seed;

    auto [train, truth] = make_scenario(scenario);

    std::vector<std::string> methods;
    {
        std::stringstream ss(a.methods);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) methods.push_back(item);
        }
    }

    BenchOptions options;
    options.gen.candidate_count = a.n;
    options.gen.temperature = a.temperature;
    options.gen.permutation_count = a.permutations;
    if (tau_opt->count() > 0) {
        options.sel.rule = SelectionRule::Threshold;
        options.sel.tau = a.tau;
    } else {
        options.sel.rule = SelectionRule::TopQuantile;
        options.sel.top_q = a.top_q;
    }
    options.smote_k = a.smote_k;
    options.lambda_cat = a.lambda_cat;
    for (const auto& ext : a.external) {
        const auto eq = ext.find('=');
        if (eq == std::string::npos) {
            throw UsageError("--external expects label=path.csv, got '" + ext + "'");
        }
        const std::string label = ext.substr(0, eq);
        options.external[label] = ext.substr(eq + 1);
        methods.push_back(label);
    }

    BenchResult result = run_comparison(train, truth, methods, options, g.seed);
    result.scenario = scenario.name;

    std::filesystem::create_directories(a.out_dir);
    write_inventory_with_sidecar(train, (std::filesystem::path(a.out_dir) / "train.csv").string());
    write_inventory_with_sidecar(truth, (std::filesystem::path(a.out_dir) / "truth.csv").string());
    emit_report(result, truth, a.out_dir);

    bool any_failed = false;
    for (const auto& mr : result.methods) {
        if (mr.ok) {
            info(g) << "method " << mr.method << ": ok (" << mr.wall_seconds << "s)\n";
        } else {
            any_failed = true;
            info(g) << "method " << mr.method << ": FAILED: " << mr.error << "\n";
        }
    }
    info(g) << "reports written to " << a.out_dir << "\n";
    return any_failed ? 3 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tabgen: conditional synthesis and evaluation of tabular inventories"};
    app.require_subcommand(1);

    GlobalFlags g;
    const auto* seed_opt = app.add_option("--seed", g.seed, "rng seed (default 0)");
    const auto* schema_opt = app.add_option("--schema", g.schema_path, "schema sidecar JSON");
    app.add_flag("--quiet", g.quiet, "suppress progress output");
    app.add_option("--config", g.config_path,
                   "JSON config mirroring long flag names; explicit flags override");

    IngestArgs ingest;
    auto* cmd_ingest = app.add_subcommand("ingest", "load, validate and optionally dedupe a CSV");
    cmd_ingest->fallthrough();
    const auto* ing_in = cmd_ingest->add_option("--in", ingest.in, "input CSV");
    const auto* ing_out = cmd_ingest->add_option("--out", ingest.out, "cleaned CSV output");
    const auto* ing_rep = cmd_ingest->add_option("--report", ingest.report_path,
                                                 "validation report JSON");
    const auto* ing_inf = cmd_ingest->add_option("--infer-schema", ingest.schema_out,
                                                 "write the resolved schema JSON here");
    cmd_ingest->add_flag("--dedupe", ingest.dedupe, "drop duplicate rows");

    PreprocessArgs prep;
    auto* cmd_prep = app.add_subcommand("preprocess", "fit or apply a transform pipeline");
    cmd_prep->fallthrough();
    const auto* pre_in = cmd_prep->add_option("--in", prep.in, "input CSV");
    const auto* pre_out = cmd_prep->add_option("--out", prep.out, "transformed CSV output");
    const auto* pre_steps = cmd_prep->add_option("--steps", prep.steps_path,
                                                 "step request list JSON (fit mode)");
    const auto* pre_apply = cmd_prep->add_option("--apply", prep.apply_path,
                                                 "fitted pipeline JSON (apply mode)");
    const auto* pre_pipe = cmd_prep->add_option("--pipeline", prep.pipeline_out,
                                                "write the fitted pipeline JSON here");

    GenerateArgs gen;
    auto* cmd_gen = app.add_subcommand("generate", "generate a scored candidate pool");
    cmd_gen->fallthrough();
    const auto* gen_train = cmd_gen->add_option("--train", gen.train, "training CSV (no missing)");
    const auto* gen_out = cmd_gen->add_option("--out", gen.out, "pool CSV output");
    const auto* gen_n = cmd_gen->add_option("-N,--candidates", gen.n, "pool size");
    const auto* gen_t = cmd_gen->add_option("-T,--temperature", gen.temperature,
                                            "sampling temperature, > 0");
    const auto* gen_m = cmd_gen->add_option("-M,--permutations", gen.permutations,
                                            "orders averaged per plausibility score");
    const auto* gen_l = cmd_gen->add_option("--lambda-cat", gen.lambda_cat,
                                            "categorical mismatch weight in (0,1]");
    cmd_gen->add_option("--condition", gen.conditions, "fix a column, col=value (repeatable)");

    SelectArgs sel;
    auto* cmd_sel = app.add_subcommand("select", "filter a pool by plausibility");
    cmd_sel->fallthrough();
    const auto* sel_pool = cmd_sel->add_option("--pool", sel.pool_path, "pool CSV");
    const auto* sel_out = cmd_sel->add_option("--out", sel.out, "accepted CSV output");
    const auto* sel_tau = cmd_sel->add_option("--tau", sel.tau, "log-plausibility threshold");
    const auto* sel_topq = cmd_sel->add_option("--top-q", sel.top_q,
                                               "accept the top quantile (default 0.5)");

    MixArgs mixa;
    auto* cmd_mix = app.add_subcommand("mix", "merge observed and accepted synthetic rows");
    cmd_mix->fallthrough();
    const auto* mix_obs = cmd_mix->add_option("--observed", mixa.observed, "observed CSV");
    const auto* mix_acc = cmd_mix->add_option("--accepted", mixa.accepted, "accepted CSV");
    const auto* mix_out = cmd_mix->add_option("--out", mixa.out, "corpus CSV output");
    const auto* mix_alpha = cmd_mix->add_option("--alpha", mixa.alpha,
                                                "synthetic fraction of the final corpus, [0,1)");
    const auto* mix_sub = cmd_mix->add_option("--subsample", mixa.subsample,
                                              "oversupply rule: score (default) or random");

    BaselineArgs base;
    auto* cmd_base = app.add_subcommand("baseline", "comparison generators");
    cmd_base->require_subcommand(1);
    cmd_base->fallthrough();
    auto* cmd_mc = cmd_base->add_subcommand("mc", "independent marginal sampling");
    cmd_mc->fallthrough();
    const auto* mc_train = cmd_mc->add_option("--train", base.train, "training CSV");
    const auto* mc_out = cmd_mc->add_option("--out", base.out, "output CSV");
    const auto* mc_n = cmd_mc->add_option("-n,--rows", base.n, "rows to generate");
    auto* cmd_smote = cmd_base->add_subcommand("smote", "nearest-neighbor interpolation");
    cmd_smote->fallthrough();
    const auto* sm_train = cmd_smote->add_option("--train", base.train, "training CSV");
    const auto* sm_out = cmd_smote->add_option("--out", base.out, "output CSV");
    const auto* sm_n = cmd_smote->add_option("-n,--rows", base.n, "rows to generate");
    const auto* sm_k = cmd_smote->add_option("-k,--neighbors", base.k, "neighbor count");

    EvaluateArgs eval;
    auto* cmd_eval = app.add_subcommand("evaluate", "score a synthetic table against observations");
    cmd_eval->fallthrough();
    const auto* ev_orig = cmd_eval->add_option("--orig", eval.orig, "observed CSV");
    const auto* ev_gen = cmd_eval->add_option("--gen", eval.gen, "synthetic CSV");
    const auto* ev_out = cmd_eval->add_option("--out", eval.out, "report JSON output");
    const auto* ev_csv = cmd_eval->add_option("--csv", eval.csv_out, "flat per-feature CSV output");
    const auto* ev_method = cmd_eval->add_option("--method", eval.method, "method label for meta");

    BenchArgs bench;
    auto* cmd_bench = app.add_subcommand("bench", "run generators on a ground-truth scenario");
    cmd_bench->fallthrough();
    const auto* bn_scn = cmd_bench->add_option("--scenario", bench.scenario,
                                               "preset: zero_peak, heavy_tail, irregular, coupled_met");
    const auto* bn_scnf = cmd_bench->add_option("--scenario-file", bench.scenario_file,
                                                "scenario JSON (overrides --scenario)");
    const auto* bn_out = cmd_bench->add_option("--out", bench.out_dir, "output directory");
    const auto* bn_methods = cmd_bench->add_option("--methods", bench.methods,
                                                   "comma list of proposed,mc,smote");
    cmd_bench->add_option("--external", bench.external,
                          "extra method from CSV, label=path (repeatable)");
    const auto* bn_n = cmd_bench->add_option("-N,--candidates", bench.n, "pool size");
    const auto* bn_t = cmd_bench->add_option("-T,--temperature", bench.temperature,
                                             "sampling temperature");
    const auto* bn_m = cmd_bench->add_option("-M,--permutations", bench.permutations,
                                             "orders averaged per score");
    const auto* bn_topq = cmd_bench->add_option("--top-q", bench.top_q, "selection quantile");
    const auto* bn_tau = cmd_bench->add_option("--tau", bench.tau, "selection threshold");
    const auto* bn_k = cmd_bench->add_option("--smote-k", bench.smote_k, "smote neighbor count");
    const auto* bn_l = cmd_bench->add_option("--lambda-cat", bench.lambda_cat,
                                             "categorical mismatch weight");
    const auto* bn_ntr = cmd_bench->add_option("--n-train", bench.n_train,
                                               "override scenario train size");
    const auto* bn_ntu = cmd_bench->add_option("--n-truth", bench.n_truth,
                                               "override scenario truth size");
    const auto* bn_ts = cmd_bench->add_option("--truth-seed", bench.truth_seed,
                                              "override scenario truth seed");

    try {
        app.parse(argc, argv);

        ConfigSource cfg;
        cfg.load(g.config_path);
        cfg.merge(seed_opt, "seed", g.seed);
        cfg.merge(schema_opt, "schema", g.schema_path);

        if (cmd_ingest->parsed()) {
            cfg.focus("ingest");
            cfg.merge(ing_in, "in", ingest.in);
            cfg.merge(ing_out, "out", ingest.out);
            cfg.merge(ing_rep, "report", ingest.report_path);
            cfg.merge(ing_inf, "infer-schema", ingest.schema_out);
            return run_ingest(ingest, g);
        }
        if (cmd_prep->parsed()) {
            cfg.focus("preprocess");
            cfg.merge(pre_in, "in", prep.in);
            cfg.merge(pre_out, "out", prep.out);
            cfg.merge(pre_steps, "steps", prep.steps_path);
            cfg.merge(pre_apply, "apply", prep.apply_path);
            cfg.merge(pre_pipe, "pipeline", prep.pipeline_out);
            return run_preprocess(prep, g);
        }
        if (cmd_gen->parsed()) {
            cfg.focus("generate");
            cfg.merge(gen_train, "train", gen.train);
            cfg.merge(gen_out, "out", gen.out);
            cfg.merge(gen_n, "candidates", gen.n);
            cfg.merge(gen_t, "temperature", gen.temperature);
            cfg.merge(gen_m, "permutations", gen.permutations);
            cfg.merge(gen_l, "lambda-cat", gen.lambda_cat);
            return run_generate(gen, g);
        }
        if (cmd_sel->parsed()) {
            cfg.focus("select");
            cfg.merge(sel_pool, "pool", sel.pool_path);
            cfg.merge(sel_out, "out", sel.out);
            cfg.merge(sel_topq, "top-q", sel.top_q);
            return run_select(sel, g, sel_tau, sel_topq);
        }
        if (cmd_mix->parsed()) {
            cfg.focus("mix");
            cfg.merge(mix_obs, "observed", mixa.observed);
            cfg.merge(mix_acc, "accepted", mixa.accepted);
            cfg.merge(mix_out, "out", mixa.out);
            cfg.merge(mix_alpha, "alpha", mixa.alpha);
            cfg.merge(mix_sub, "subsample", mixa.subsample);
            return run_mix(mixa, g);
        }
        if (cmd_base->parsed()) {
            cfg.focus("baseline");
            if (cmd_mc->parsed()) {
                cfg.merge(mc_train, "train", base.train);
                cfg.merge(mc_out, "out", base.out);
                cfg.merge(mc_n, "rows", base.n);
                return run_baseline_mc(base, g);
            }
            cfg.merge(sm_train, "train", base.train);
            cfg.merge(sm_out, "out", base.out);
            cfg.merge(sm_n, "rows", base.n);
            cfg.merge(sm_k, "neighbors", base.k);
            return run_baseline_smote(base, g);
        }
        if (cmd_eval->parsed()) {
            cfg.focus("evaluate");
            cfg.merge(ev_orig, "orig", eval.orig);
            cfg.merge(ev_gen, "gen", eval.gen);
            cfg.merge(ev_out, "out", eval.out);
            cfg.merge(ev_csv, "csv", eval.csv_out);
            cfg.merge(ev_method, "method", eval.method);
            return run_evaluate(eval, g);
        }
        if (cmd_bench->parsed()) {
            cfg.focus("bench");
            cfg.merge(bn_scn, "scenario", bench.scenario);
            cfg.merge(bn_scnf, "scenario-file", bench.scenario_file);
            cfg.merge(bn_out, "out", bench.out_dir);
            cfg.merge(bn_methods, "methods", bench.methods);
            cfg.merge(bn_n, "candidates", bench.n);
            cfg.merge(bn_t, "temperature", bench.temperature);
            cfg.merge(bn_m, "permutations", bench.permutations);
            cfg.merge(bn_topq, "top-q", bench.top_q);
            cfg.merge(bn_k, "smote-k", bench.smote_k);
            cfg.merge(bn_l, "lambda-cat", bench.lambda_cat);
            cfg.merge(bn_ntr, "n-train", bench.n_train);
            cfg.merge(bn_ntu, "n-truth", bench.n_truth);
            return run_bench(bench, g, bn_tau, bn_ts);
        }
        throw UsageError("no subcommand given");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the message
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const MethodError& e) {
        std::cerr << "method failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "method failure: " << e.what() << "\n";
        return 3;
    }
}
