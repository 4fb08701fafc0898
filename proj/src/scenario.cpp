#include "tabgen/scenario.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "tabgen/errors.hpp"
#include "tabgen/rng.hpp"
#include "tabgen/stats.hpp"

namespace tabgen {

namespace {

MarginalKind marginal_kind_from_name(const std::string& name) {
    if (name == "identity") return MarginalKind::Identity;
    if (name == "lognormal") return MarginalKind::Lognormal;
    if (name == "heavy_tail") return MarginalKind::HeavyTail;
    if (name == "mixture3") return MarginalKind::Mixture3;
    throw DataError("unknown marginal kind: '" + name + "'");
}

double mixture3_cdf(const ScenarioNumeric& f, double x) {
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        s += f.mix_weights[i] * stats::norm_cdf((x - f.mix_means[i]) / f.mix_sds[i]);
    }
    return s;
}

double mixture3_quantile(const ScenarioNumeric& f, double u) {
    // The mixture CDF is strictly increasing; bisect.
    double lo = f.mix_means[0], hi = f.mix_means[0];
    for (std::size_t i = 0; i < 3; ++i) {
        lo = std::min(lo, f.mix_means[i] - 12.0 * f.mix_sds[i]);
        hi = std::max(hi, f.mix_means[i] + 12.0 * f.mix_sds[i]);
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mixture3_cdf(f, mid) < u) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Lower-triangular Cholesky factor; throws when R is not positive-definite.
std::vector<std::vector<double>> cholesky(const std::vector<std::vector<double>>& r) {
    const std::size_t d = r.size();
    std::vector<std::vector<double>> l(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = r[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            if (i == j) {
                if (s <= 0.0) {
                    throw DataError("scenario correlation matrix is not positive-definite");
                }
                l[i][j] = std::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    return l;
}

Inventory sample_rows(const Scenario& sc, const FeatureSchema& schema,
                      const std::vector<std::vector<double>>& chol, std::size_t count,
                      RngStream& rng) {
    const std::size_t dlat = sc.latent_dim();
    const std::size_t dnum = sc.numeric.size();
    std::vector<double> g(dlat), z(dlat);

    std::vector<Row> rows;
    rows.reserve(count);
    for (std::size_t r = 0; r < count; ++r) {
        for (auto& v : g) v = rng.normal();
        for (std::size_t i = 0; i < dlat; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k <= i; ++k) s += chol[i][k] * g[k];
            z[i] = s;
        }
        Row row;
        row.reserve(dlat);
        for (std::size_t j = 0; j < dnum; ++j) {
            const double u = stats::norm_cdf(z[j]);
            row.push_back(Cell::number(marginal_quantile(sc.numeric[j], u)));
        }
        for (std::size_t j = 0; j < sc.categorical.size(); ++j) {
            const auto& cat = sc.categorical[j];
            const double latent = z[dnum + j];
            std::size_t bucket = cat.thresholds.size();
            for (std::size_t t = 0; t < cat.thresholds.size(); ++t) {
                if (latent < cat.thresholds[t]) {
                    bucket = t;
                    break;
                }
            }
            row.push_back(Cell::category(cat.labels[bucket]));
        }
        rows.push_back(std::move(row));
    }
    return Inventory(schema, std::move(rows));
}

} // namespace

double marginal_quantile(const ScenarioNumeric& feature, double u) {
    switch (feature.marginal) {
    case MarginalKind::Identity: return stats::norm_quantile(u);
    case MarginalKind::Lognormal: return std::exp(stats::norm_quantile(u));
    case MarginalKind::HeavyTail: return stats::student_t4_quantile(u);
    case MarginalKind::Mixture3: return mixture3_quantile(feature, u);
    }
    throw DataError("unhandled marginal kind");
}

void Scenario::validate() const {
    if (numeric.empty()) throw DataError("scenario needs at least one numeric feature");
    const std::size_t d = latent_dim();
    if (correlation.size() != d) {
        throw DataError("scenario correlation matrix must be " + std::to_string(d) + "x" +
                        std::to_string(d));
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (correlation[i].size() != d) {
            throw DataError("scenario correlation matrix must be square");
        }
        if (correlation[i][i] != 1.0) {
            throw DataError("scenario correlation matrix needs a unit diagonal");
        }
        for (std::size_t j = 0; j < d; ++j) {
            if (correlation[i][j] != correlation[j][i]) {
                throw DataError("scenario correlation matrix must be symmetric");
            }
        }
    }
    for (const auto& cat : categorical) {
        if (cat.labels.size() != cat.thresholds.size() + 1) {
            throw DataError("categorical feature '" + cat.name +
                            "' needs labels = thresholds + 1");
        }
        if (!std::is_sorted(cat.thresholds.begin(), cat.thresholds.end())) {
            throw DataError("categorical feature '" + cat.name +
                            "' needs ascending thresholds");
        }
    }
    for (const auto& f : numeric) {
        if (f.marginal == MarginalKind::Mixture3) {
            double wsum = 0.0;
            for (double w : f.mix_weights) {
                if (w <= 0.0) throw DataError("mixture weights must be positive");
                wsum += w;
            }
            if (std::abs(wsum - 1.0) > 1e-9) {
                throw DataError("mixture weights must sum to 1");
            }
            for (double s : f.mix_sds) {
                if (s <= 0.0) throw DataError("mixture component SDs must be positive");
            }
        }
    }
    if (n_train < 10) throw DataError("scenario n_train must be >= 10");
    if (n_truth < 10 * n_train) throw DataError("scenario n_truth must be >= 10 * n_train");
    // positive definiteness is established by the Cholesky factorization
}

std::pair<Inventory, Inventory> make_scenario(const Scenario& scenario) {
    scenario.validate();
    const auto chol = cholesky(scenario.correlation);

    std::vector<FeatureSpec> specs;
    for (const auto& f : scenario.numeric) {
        FeatureSpec spec;
        spec.name = f.name;
        spec.kind = FeatureKind::Numeric;
        spec.allow_missing = false;
        specs.push_back(std::move(spec));
    }
    for (const auto& cat : scenario.categorical) {
        FeatureSpec spec;
        spec.name = cat.name;
        spec.kind = FeatureKind::Categorical;
        spec.allow_missing = false;
        spec.categories = cat.labels;
        specs.push_back(std::move(spec));
    }
    const FeatureSchema schema(std::move(specs));

    RngStream truth_rng = RngStream::derive(scenario.truth_seed, 0x7472757468ULL); // "truth"
    RngStream train_rng = RngStream::derive(scenario.truth_seed, 0x747261696eULL); // "train"
    Inventory truth = sample_rows(scenario, schema, chol, scenario.n_truth, truth_rng);
    Inventory train = sample_rows(scenario, schema, chol, scenario.n_train, train_rng);
    return {std::move(train), std::move(truth)};
}

Scenario scenario_preset(const std::string& name) {
    Scenario sc;
    sc.name = name;
    if (name == "zero_peak") {
        // Symmetric unimodal profiles peaked at zero, mild coupling.
        sc.numeric = {{.name = "curvature", .marginal = MarginalKind::Identity},
                      {.name = "relief", .marginal = MarginalKind::Identity}};
        sc.correlation = {{1.0, 0.3}, {0.3, 1.0}};
        sc.n_train = 150;
        sc.n_truth = 3000;
        sc.truth_seed = 11;
    } else if (name == "heavy_tail") {
        // Distance-like positive features with heavy right tails plus a
        // land-cover class tied to its own latent coordinate.
        sc.numeric = {{.name = "dist_roads", .marginal = MarginalKind::Lognormal},
                      {.name = "dist_streams", .marginal = MarginalKind::Lognormal}};
        sc.categorical = {{.name = "landuse",
                           .thresholds = {-0.4, 0.9},
                           .labels = {"forest", "crop", "urban"}}};
        sc.correlation = {{1.0, 0.4, 0.5}, {0.4, 1.0, 0.3}, {0.5, 0.3, 1.0}};
        sc.n_train = 150;
        sc.n_truth = 3000;
        sc.truth_seed = 12;
    } else if (name == "irregular") {
        // A multimodal wetness-like feature without a dominant mode.
        ScenarioNumeric wetness;
        wetness.name = "wetness";
        wetness.marginal = MarginalKind::Mixture3;
        sc.numeric = {wetness, {.name = "slope", .marginal = MarginalKind::Identity}};
        sc.correlation = {{1.0, 0.35}, {0.35, 1.0}};
        sc.n_train = 200;
        sc.n_truth = 5000;
        sc.truth_seed = 13;
    } else if (name == "coupled_met") {
        // Strongly coupled rainfall/humidity block.
        sc.numeric = {{.name = "rain_1d", .marginal = MarginalKind::Identity},
                      {.name = "rain_7d", .marginal = MarginalKind::Identity},
                      {.name = "humid_0h", .marginal = MarginalKind::Identity},
                      {.name = "humid_24h", .marginal = MarginalKind::Identity}};
        sc.correlation = {{1.0, 0.7, 0.6, 0.6},
                          {0.7, 1.0, 0.8, 0.6},
                          {0.6, 0.8, 1.0, 0.7},
                          {0.6, 0.6, 0.7, 1.0}};
        sc.n_train = 200;
        sc.n_truth = 10000;
        sc.truth_seed = 14;
    } else {
        throw DataError("unknown scenario preset '" + name + "'; available: zero_peak, " +
                        "heavy_tail, irregular, coupled_met");
    }
    return sc;
}

std::vector<std::string> scenario_preset_names() {
    return {"zero_peak", "heavy_tail", "irregular", "coupled_met"};
}

Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario sc;
    sc.name = j.value("name", std::string{"custom"});
    for (const auto& jf : j.at("numeric")) {
        ScenarioNumeric f;
        f.name = jf.at("name").get<std::string>();
        f.marginal = marginal_kind_from_name(jf.value("marginal", std::string{"identity"}));
        if (jf.contains("mix_means")) f.mix_means = jf["mix_means"].get<std::array<double, 3>>();
        if (jf.contains("mix_sds")) f.mix_sds = jf["mix_sds"].get<std::array<double, 3>>();
        if (jf.contains("mix_weights")) {
            f.mix_weights = jf["mix_weights"].get<std::array<double, 3>>();
        }
        sc.numeric.push_back(std::move(f));
    }
    if (j.contains("categorical")) {
        for (const auto& jc : j["categorical"]) {
            ScenarioCategorical cat;
            cat.name = jc.at("name").get<std::string>();
            cat.thresholds = jc.at("thresholds").get<std::vector<double>>();
            cat.labels = jc.at("labels").get<std::vector<std::string>>();
            sc.categorical.push_back(std::move(cat));
        }
    }
    sc.correlation = j.at("correlation").get<std::vector<std::vector<double>>>();
    sc.truth_seed = j.value("truth_seed", std::uint64_t{0});
    sc.n_train = j.value("n_train", std::size_t{10});
    sc.n_truth = j.value("n_truth", std::size_t{100});
    sc.validate();
    return sc;
}

} // namespace tabgen
