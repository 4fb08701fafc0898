#include "tabgen/generator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tabgen/csv_io.hpp"
#include "tabgen/errors.hpp"
#include "tabgen/stats.hpp"

namespace tabgen {

namespace {

void check_conditioning_cell(const FeatureSchema& schema, const std::string& name,
                             const Cell& cell) {
    const auto idx = schema.index_of(name);
    if (!idx) throw DataError("conditioning references unknown column '" + name + "'");
    const FeatureSpec& spec = schema.at(*idx);
    if (cell.is_missing()) {
        throw DataError("conditioning value for '" + name + "' must not be missing");
    }
    if (spec.is_numeric() && !cell.is_number()) {
        throw DataError("conditioning value for numeric column '" + name + "' must be a number");
    }
    if (spec.is_discrete()) {
        if (!cell.is_category() || spec.category_index(cell.category_label()) < 0) {
            throw DataError("conditioning value for column '" + name +
                            "' must be one of its categories");
        }
    }
}

// Chain-rule log-likelihood of a complete row under one feature order.
double chain_log_likelihood(const ConditionalModel& model, const Row& row,
                            const std::vector<std::size_t>& order) {
    PartialRow context(model.schema().size());
    double total = 0.0;
    for (std::size_t i : order) {
        const double lp = model.log_conditional(i, row[i], context);
        if (!std::isfinite(lp)) {
            throw MethodError("non-finite conditional log-probability for feature '" +
                              model.schema().at(i).name + "'");
        }
        total += lp;
        context[i] = row[i];
    }
    return total;
}

} // namespace

void GenerationConfig::validate(const FeatureSchema& schema) const {
    if (candidate_count < 1) throw DataError("candidate count N must be >= 1");
    if (!(temperature > 0.0)) throw DataError("temperature T must be > 0");
    if (permutation_count < 1) throw DataError("permutation count M must be >= 1");
    for (const auto& [name, cell] : conditioning) {
        check_conditioning_cell(schema, name, cell);
    }
}

RowDraw generate_row(const ConditionalModel& model, double temperature,
                     const std::map<std::string, Cell>& conditioning, RngStream& rng) {
    const FeatureSchema& schema = model.schema();
    const std::size_t d = schema.size();

    RowDraw draw;
    draw.row.assign(d, Cell::missing());
    draw.per_feature_logp.assign(d, 0.0);

    PartialRow context(d);
    std::vector<std::size_t> conditioned;
    for (const auto& [name, cell] : conditioning) {
        check_conditioning_cell(schema, name, cell);
        conditioned.push_back(*schema.index_of(name));
    }
    std::sort(conditioned.begin(), conditioned.end());

    // Conditioned cells enter the row and the chain first, in schema order.
    for (std::size_t i : conditioned) {
        draw.per_feature_logp[i] = model.log_conditional(i, conditioning.at(schema.at(i).name),
                                                         context);
        draw.row[i] = conditioning.at(schema.at(i).name);
        context[i] = draw.row[i];
    }

    std::vector<std::size_t> remaining;
    for (std::size_t i = 0; i < d; ++i) {
        if (!context[i]) remaining.push_back(i);
    }
    rng.shuffle(remaining);
    draw.order = remaining;

    for (std::size_t i : draw.order) {
        Cell value = model.sample_conditional(i, context, temperature, rng);
        draw.per_feature_logp[i] = model.log_conditional(i, value, context);
        draw.row[i] = std::move(value);
        context[i] = draw.row[i];
    }
    return draw;
}

double plausibility(const ConditionalModel& model, const Row& row, std::size_t permutations,
                    RngStream& rng) {
    if (permutations < 1) throw DataError("permutation count M must be >= 1");
    const std::size_t d = model.schema().size();
    if (row.size() != d) throw DataError("plausibility: row width does not match schema");
    for (const auto& cell : row) {
        if (cell.is_missing()) throw DataError("plausibility: row has missing cells");
    }

    // Overflow-safe d!; when it overflows, M can never reach it.
    std::uint64_t factorial = 1;
    bool factorial_overflow = false;
    for (std::size_t i = 2; i <= d; ++i) {
        if (factorial > std::numeric_limits<std::uint64_t>::max() / i) {
            factorial_overflow = true;
            break;
        }
        factorial *= i;
    }

    std::vector<double> terms;
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});

    if (!factorial_overflow && permutations >= factorial) {
        // Use every order exactly once.
        terms.reserve(factorial);
        do {
            terms.push_back(chain_log_likelihood(model, row, order));
        } while (std::next_permutation(order.begin(), order.end()));
    } else {
        terms.reserve(permutations);
        for (std::size_t m = 0; m < permutations; ++m) {
            rng.shuffle(order);
            terms.push_back(chain_log_likelihood(model, row, order));
        }
    }
    return stats::logsumexp(terms) - std::log(static_cast<double>(terms.size()));
}

std::vector<Candidate> generate_pool(const ConditionalModel& model,
                                     const GenerationConfig& config) {
    config.validate(model.schema());

    std::vector<Candidate> pool;
    pool.reserve(config.candidate_count);
    for (std::size_t c = 0; c < config.candidate_count; ++c) {
        RngStream row_rng = RngStream::derive(config.seed, c, 0);
        RngStream perm_rng = RngStream::derive(config.seed, c, 1);

        Candidate cand;
        RowDraw draw = generate_row(model, config.temperature, config.conditioning, row_rng);
        cand.row = std::move(draw.row);
        cand.order = std::move(draw.order);
        cand.per_feature_logp = std::move(draw.per_feature_logp);
        cand.log_plausibility =
            plausibility(model, cand.row, config.permutation_count, perm_rng);
        cand.seed = config.seed;
        cand.index = c;
        cand.config = config;
        pool.push_back(std::move(cand));
    }
    return pool;
}

// --- pool persistence --------------------------------------------------------

namespace {

nlohmann::json cell_to_json(const Cell& cell) {
    if (cell.is_missing()) return nullptr;
    if (cell.is_number()) return cell.number_value();
    return cell.category_label();
}

Cell cell_from_json(const nlohmann::json& j, const FeatureSpec& spec) {
    if (j.is_null()) return Cell::missing();
    if (spec.is_numeric()) return Cell::number(j.get<double>());
    return Cell::category(j.get<std::string>());
}

std::string order_to_string(const std::vector<std::size_t>& order) {
    std::string out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i) out += '|';
        out += std::to_string(order[i]);
    }
    return out;
}

std::vector<std::size_t> order_from_string(const std::string& text) {
    std::vector<std::size_t> order;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, '|')) {
        if (!part.empty()) order.push_back(std::stoul(part));
    }
    return order;
}

} // namespace

namespace {

void write_candidates_csv(const std::vector<Candidate>& pool, const FeatureSchema& schema,
                          const std::filesystem::path& csv_path, bool with_ids) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + csv_path.string());

    for (std::size_t c = 0; c < schema.size(); ++c) {
        out << csv_escape(schema.at(c).name) << ',';
    }
    out << "__log_plausibility,__order";
    if (with_ids) out << ",__candidate_id";
    out << '\n';
    for (const auto& cand : pool) {
        for (const auto& cell : cand.row) {
            if (cell.is_number()) out << format_double(cell.number_value());
            else if (cell.is_category()) out << csv_escape(cell.category_label());
            out << ',';
        }
        out << format_double(cand.log_plausibility) << ','
            << csv_escape(order_to_string(cand.order));
        if (with_ids) out << ',' << cand.index;
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + csv_path.string());
}

void write_candidates_meta(const std::vector<Candidate>& pool, const FeatureSchema& schema,
                           const std::filesystem::path& csv_path) {
    nlohmann::ordered_json meta;
    meta["schema"] = schema_to_json(schema);
    nlohmann::ordered_json cond = nlohmann::ordered_json::object();
    const GenerationConfig& cfg = pool.empty() ? GenerationConfig{} : pool.front().config;
    for (const auto& [name, cell] : cfg.conditioning) cond[name] = cell_to_json(cell);
    meta["config"] = {{"candidate_count", cfg.candidate_count},
                      {"temperature", cfg.temperature},
                      {"permutation_count", cfg.permutation_count},
                      {"seed", cfg.seed},
                      {"conditioning", cond}};
    nlohmann::ordered_json cands = nlohmann::ordered_json::array();
    for (const auto& cand : pool) {
        cands.push_back({{"index", cand.index},
                         {"log_plausibility", cand.log_plausibility},
                         {"order", cand.order},
                         {"per_feature_logp", cand.per_feature_logp},
                         {"rng_stream", {{"seed", cand.seed}, {"candidate", cand.index}}}});
    }
    meta["candidates"] = std::move(cands);

    const std::filesystem::path meta_path = csv_path.string() + ".meta.json";
    std::ofstream mout(meta_path, std::ios::binary);
    if (!mout) throw DataError("cannot write file: " + meta_path.string());
    mout << meta.dump(2) << '\n';
}

} // namespace

void save_pool(const std::vector<Candidate>& pool, const FeatureSchema& schema,
               const std::filesystem::path& csv_path) {
    write_candidates_csv(pool, schema, csv_path, /*with_ids=*/false);
    write_candidates_meta(pool, schema, csv_path);
}

void save_accepted(const std::vector<Candidate>& accepted, const FeatureSchema& schema,
                   const std::filesystem::path& csv_path) {
    write_candidates_csv(accepted, schema, csv_path, /*with_ids=*/true);
    write_candidates_meta(accepted, schema, csv_path);
}

std::vector<Candidate> load_pool(const std::filesystem::path& csv_path,
                                 const FeatureSchema* schema) {
    const std::filesystem::path meta_path = csv_path.string() + ".meta.json";
    nlohmann::json meta;
    FeatureSchema effective;
    if (std::filesystem::exists(meta_path)) {
        std::ifstream min(meta_path);
        if (!min) throw DataError("cannot open file: " + meta_path.string());
        try {
            min >> meta;
        } catch (const nlohmann::json::exception& e) {
            throw DataError("invalid pool metadata in " + meta_path.string() + ": " + e.what());
        }
        effective = schema_from_json(meta.at("schema"));
    } else if (schema) {
        effective = *schema;
    } else {
        throw DataError("pool " + csv_path.string() +
                        " has no metadata sidecar; a schema is required");
    }

    const auto records = read_csv_records(csv_path);
    if (records.empty()) throw DataError(csv_path.string() + ": empty pool file");
    const std::size_t d = effective.size();
    if (records[0].size() < d + 1) {
        throw DataError(csv_path.string() +
                        ": pool header must be the schema columns plus __log_plausibility");
    }
    for (std::size_t c = 0; c < d; ++c) {
        if (records[0][c].text != effective.at(c).name) {
            throw DataError(csv_path.string() + ": pool column " + std::to_string(c) + " is '" +
                            records[0][c].text + "', expected '" + effective.at(c).name + "'");
        }
    }
    std::size_t score_col = 0, order_col = 0, id_col = 0; // 0 = absent
    for (std::size_t c = d; c < records[0].size(); ++c) {
        const std::string& name = records[0][c].text;
        if (name == "__log_plausibility") score_col = c;
        else if (name == "__order") order_col = c;
        else if (name == "__candidate_id") id_col = c;
        else throw DataError(csv_path.string() + ": unexpected pool column '" + name + "'");
    }
    if (score_col == 0) {
        throw DataError(csv_path.string() + ": pool is missing the __log_plausibility column");
    }

    GenerationConfig cfg;
    if (!meta.is_null() && meta.contains("config")) {
        const auto& jc = meta["config"];
        cfg.candidate_count = jc.value("candidate_count", std::size_t{1});
        cfg.temperature = jc.value("temperature", 1.0);
        cfg.permutation_count = jc.value("permutation_count", std::size_t{1});
        cfg.seed = jc.value("seed", std::uint64_t{0});
        if (jc.contains("conditioning")) {
            for (const auto& [name, jv] : jc["conditioning"].items()) {
                const auto idx = effective.index_of(name);
                if (idx) cfg.conditioning[name] = cell_from_json(jv, effective.at(*idx));
            }
        }
    }

    std::vector<Candidate> pool;
    pool.reserve(records.size() - 1);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& record = records[r];
        if (record.size() != records[0].size()) {
            throw DataError(csv_path.string() + ": pool row " + std::to_string(r - 1) +
                            " has the wrong field count");
        }
        Candidate cand;
        cand.row.reserve(d);
        for (std::size_t c = 0; c < d; ++c) {
            const FeatureSpec& spec = effective.at(c);
            const auto& field = record[c];
            if (!field.quoted && (field.text.empty() || field.text == "NA")) {
                throw DataError(csv_path.string() + ": pool row " + std::to_string(r - 1) +
                                " has a missing cell; candidates must be complete");
            }
            if (spec.is_numeric()) {
                const auto v = parse_double(field.text);
                if (!v) {
                    throw DataError(csv_path.string() + ": cannot parse '" + field.text +
                                    "' as a number");
                }
                cand.row.push_back(Cell::number(*v));
            } else {
                if (spec.category_index(field.text) < 0) {
                    throw DataError(csv_path.string() + ": unknown category '" + field.text + "'");
                }
                cand.row.push_back(Cell::category(field.text));
            }
        }
        const auto score = parse_double(record[score_col].text);
        if (!score) {
            throw DataError(csv_path.string() + ": cannot parse __log_plausibility in row " +
                            std::to_string(r - 1));
        }
        cand.log_plausibility = *score;
        if (order_col) cand.order = order_from_string(record[order_col].text);
        cand.index = r - 1;
        if (id_col) {
            try {
                cand.index = std::stoul(record[id_col].text);
            } catch (const std::exception&) {
                throw DataError(csv_path.string() + ": cannot parse __candidate_id in row " +
                                std::to_string(r - 1));
            }
        }
        cand.config = cfg;
        cand.seed = cfg.seed;
        pool.push_back(std::move(cand));
    }

    if (!meta.is_null() && meta.contains("candidates")) {
        const auto& jcands = meta["candidates"];
        for (std::size_t i = 0; i < pool.size() && i < jcands.size(); ++i) {
            const auto& jc = jcands[i];
            if (!id_col) pool[i].index = jc.value("index", i);
            if (jc.contains("per_feature_logp")) {
                pool[i].per_feature_logp = jc["per_feature_logp"].get<std::vector<double>>();
            }
            if (jc.contains("rng_stream")) {
                pool[i].seed = jc["rng_stream"].value("seed", cfg.seed);
            }
        }
    }
    return pool;
}

} // namespace tabgen
