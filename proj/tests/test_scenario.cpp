#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "tabgen/baselines.hpp"
#include "tabgen/bench.hpp"
#include "tabgen/csv_io.hpp"
#include "tabgen/errors.hpp"
#include "tabgen/scenario.hpp"
#include "tabgen/stats.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

using namespace tabgen;
using namespace tabgen::test;

TEST_CASE("marginal quantile maps") {
    ScenarioNumeric f;
    SUBCASE("identity is the normal quantile") {
        f.marginal = MarginalKind::Identity;
        CHECK(marginal_quantile(f, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(marginal_quantile(f, 0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
        CHECK(marginal_quantile(f, 0.1) == doctest::Approx(-1.2815515655446004).epsilon(1e-9));
    }
    SUBCASE("lognormal is strictly positive") {
        f.marginal = MarginalKind::Lognormal;
        for (const double u : {0.001, 0.1, 0.5, 0.9, 0.999}) {
            CHECK(marginal_quantile(f, u) > 0.0);
        }
    }
    SUBCASE("heavy tail matches Student t(4) reference values") {
        f.marginal = MarginalKind::HeavyTail;
        CHECK(marginal_quantile(f, 0.5) == 0.0);
        CHECK(marginal_quantile(f, 0.9) == doctest::Approx(1.5332062740589432).epsilon(1e-9));
        CHECK(marginal_quantile(f, 0.99) == doctest::Approx(3.7469473879811366).epsilon(1e-9));
        CHECK(marginal_quantile(f, 0.01) == doctest::Approx(-3.7469473879811375).epsilon(1e-9));
        CHECK(marginal_quantile(f, 0.25) == doctest::Approx(-0.7406970841282597).epsilon(1e-9));
    }
    SUBCASE("mixture quantile inverts the mixture cdf") {
        f.marginal = MarginalKind::Mixture3;
        auto cdf = [&f](double x) {
            double s = 0;
            for (int i = 0; i < 3; ++i) {
                s += f.mix_weights[i] * stats::norm_cdf((x - f.mix_means[i]) / f.mix_sds[i]);
            }
            return s;
        };
        for (const double u : {0.05, 0.3, 0.5, 0.77, 0.95}) {
            CHECK(cdf(marginal_quantile(f, u)) == doctest::Approx(u).epsilon(1e-9));
        }
    }
}

TEST_CASE("scenario validation") {
    Scenario sc = scenario_preset("zero_peak");
    SUBCASE("presets validate") {
        for (const auto& name : scenario_preset_names()) {
            CHECK_NOTHROW(scenario_preset(name).validate());
        }
    }
    SUBCASE("asymmetric correlation is rejected") {
        sc.correlation[0][1] = 0.2;
        CHECK_THROWS_AS(sc.validate(), DataError);
    }
    SUBCASE("non-unit diagonal is rejected") {
        sc.correlation[0][0] = 0.9;
        CHECK_THROWS_AS(sc.validate(), DataError);
    }
    SUBCASE("non-positive-definite matrix fails at the factorization") {
        sc.correlation = {{1.0, 0.99}, {0.99, 1.0}};
        sc.correlation[0][1] = sc.correlation[1][0] = 1.2; // |rho| > 1
        CHECK_THROWS_AS(make_scenario(sc), DataError);
    }
    SUBCASE("size floors") {
        sc.n_train = 5;
        CHECK_THROWS_AS(sc.validate(), DataError);
        sc.n_train = 10;
        sc.n_truth = 50;
        CHECK_THROWS_AS(sc.validate(), DataError);
    }
    SUBCASE("unknown preset") { CHECK_THROWS_AS(scenario_preset("nope"), DataError); }
}

TEST_CASE("make_scenario sampling") {
    SUBCASE("identity correlation gives near-zero sample correlations") {
        Scenario sc;
        sc.name = "indep";
        sc.numeric = {{.name = "a"}, {.name = "b"}};
        sc.correlation = {{1.0, 0.0}, {0.0, 1.0}};
        sc.n_train = 100;
        sc.n_truth = 10000;
        sc.truth_seed = 3;
        const auto [train, truth] = make_scenario(sc);
        CHECK(std::abs(stats::pearson(truth.numeric_column(0), truth.numeric_column(1))) <=
              0.03);
    }
    SUBCASE("rho = 0.7 lands in [0.65, 0.75] at n = 10000") {
        Scenario sc;
        sc.name = "coupled";
        sc.numeric = {{.name = "a"}, {.name = "b"}};
        sc.correlation = {{1.0, 0.7}, {0.7, 1.0}};
        sc.n_train = 100;
        sc.n_truth = 10000;
        sc.truth_seed = 4;
        const auto [train, truth] = make_scenario(sc);
        const double r = stats::pearson(truth.numeric_column(0), truth.numeric_column(1));
        CHECK(r >= 0.65);
        CHECK(r <= 0.75);
    }
    SUBCASE("lognormal marginal keeps every value positive") {
        Scenario sc = scenario_preset("heavy_tail");
        const auto [train, truth] = make_scenario(sc);
        for (const double v : truth.numeric_column(0)) CHECK(v > 0.0);
        for (const double v : train.numeric_column(0)) CHECK(v > 0.0);
    }
    SUBCASE("categorical features are thresholded from their own latent") {
        const auto [train, truth] = make_scenario(scenario_preset("heavy_tail"));
        const auto labels = truth.category_column(2);
        std::size_t forest = 0;
        for (const auto& l : labels) {
            if (l == "forest") ++forest;
        }
        // P(z < -0.4) ~ 0.345
        const double frac = static_cast<double>(forest) / static_cast<double>(labels.size());
        CHECK(frac == doctest::Approx(stats::norm_cdf(-0.4)).epsilon(0.1));
    }
    SUBCASE("train and truth are disjoint draws") {
        const auto [train, truth] = make_scenario(scenario_preset("zero_peak"));
        CHECK(train.row_count() == 150);
        CHECK(truth.row_count() == 3000);
        CHECK_FALSE(train.rows()[0] == truth.rows()[0]);
    }
    SUBCASE("deterministic in the scenario spec") {
        const auto [t1, u1] = make_scenario(scenario_preset("irregular"));
        const auto [t2, u2] = make_scenario(scenario_preset("irregular"));
        CHECK(t1.rows() == t2.rows());
        CHECK(u1.rows() == u2.rows());
    }
}

TEST_CASE("scenario json parsing") {
    const auto j = nlohmann::json::parse(R"({
        "name": "custom",
        "numeric": [{"name": "a", "marginal": "identity"},
                    {"name": "b", "marginal": "heavy_tail"}],
        "categorical": [{"name": "c", "thresholds": [0.0], "labels": ["lo", "hi"]}],
        "correlation": [[1.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 1.0]],
        "truth_seed": 9,
        "n_train": 20,
        "n_truth": 200
    })");
    const Scenario sc = scenario_from_json(j);
    CHECK(sc.numeric.size() == 2);
    CHECK(sc.categorical.size() == 1);
    CHECK(sc.latent_dim() == 3);
    const auto [train, truth] = make_scenario(sc);
    CHECK(truth.row_count() == 200);
    CHECK(truth.schema().at(2).categories == std::vector<std::string>{"lo", "hi"});
}

TEST_CASE("run_comparison") {
    Scenario sc;
    sc.name = "mini";
    sc.numeric = {{.name = "a"}, {.name = "b"}};
    sc.correlation = {{1.0, 0.8}, {0.8, 1.0}};
    sc.n_train = 100;
    sc.n_truth = 1500;
    sc.truth_seed = 21;
    const auto [train, truth] = make_scenario(sc);

    BenchOptions options;
    options.gen.candidate_count = 400;
    options.gen.permutation_count = 2;
    options.sel.rule = SelectionRule::TopQuantile;
    options.sel.top_q = 0.5;
    options.smote_k = 5;

    SUBCASE("monte carlo wipes out dependence but keeps marginals") {
        const auto result = run_comparison(train, truth, {"mc"}, options, 5);
        REQUIRE(result.methods.size() == 1);
        REQUIRE(result.methods[0].ok);
        const auto& report = result.methods[0].report;
        REQUIRE(report.dependence.size() == 1);
        CHECK(report.dependence[0].pearson_delta >= 0.6); // true rho 0.8 destroyed
        for (const auto& fm : report.features) {
            CHECK(fm.numeric->ks_stat <= 0.1);
        }
    }
    SUBCASE("proposed method keeps dependence") {
        const auto result = run_comparison(train, truth, {"proposed"}, options, 6);
        REQUIRE(result.methods[0].ok);
        CHECK(result.methods[0].report.dependence[0].pearson_delta <= 0.25);
    }
    SUBCASE("failures are recorded per method, others still run") {
        const auto result = run_comparison(train, truth, {"bogus", "mc"}, options, 7);
        REQUIRE(result.methods.size() == 2);
        CHECK_FALSE(result.methods[0].ok);
        CHECK(result.methods[0].error.find("bogus") != std::string::npos);
        CHECK(result.methods[1].ok);
    }
    SUBCASE("truth is never visible to the generators") {
        // same train, two different truth samples: synthetic output identical
        Scenario sc2 = sc;
        sc2.truth_seed = 99;
        const auto pair2 = make_scenario(sc2);
        const Inventory& truth2 = pair2.second;
        const auto r1 = run_comparison(train, truth, {"proposed", "smote"}, options, 8);
        const auto r2 = run_comparison(train, truth2, {"proposed", "smote"}, options, 8);
        for (std::size_t m = 0; m < 2; ++m) {
            REQUIRE(r1.methods[m].ok);
            REQUIRE(r2.methods[m].ok);
            CHECK(r1.methods[m].synthetic->rows() == r2.methods[m].synthetic->rows());
        }
    }
    SUBCASE("external csv methods go through the same evaluation path") {
        const auto dir = std::filesystem::temp_directory_path() / "tabgen_ext_test";
        std::filesystem::create_directories(dir);
        const auto csv = dir / "external.csv";
        {
            const Inventory fake = mc_generate(mc_fit(train), 500, 77);
            save_csv(fake, csv);
        }
        BenchOptions opts = options;
        opts.external["ctgan_import"] = csv;
        const auto result = run_comparison(train, truth, {"ctgan_import"}, opts, 9);
        REQUIRE(result.methods[0].ok);
        CHECK(result.methods[0].report.method == "ctgan_import");
        std::filesystem::remove_all(dir);
    }
}

TEST_CASE("emit_report writes one json per method plus grids") {
    Scenario sc;
    sc.name = "mini";
    sc.numeric = {{.name = "a"}, {.name = "b"}};
    sc.correlation = {{1.0, 0.4}, {0.4, 1.0}};
    sc.n_train = 60;
    sc.n_truth = 600;
    sc.truth_seed = 31;
    const auto [train, truth] = make_scenario(sc);

    BenchOptions options;
    options.gen.candidate_count = 100;
    const auto result = run_comparison(train, truth, {"proposed", "mc"}, options, 10);

    const auto dir = std::filesystem::temp_directory_path() / "tabgen_emit_test";
    std::filesystem::remove_all(dir);
    emit_report(result, truth, dir);
    CHECK(std::filesystem::exists(dir / "report_proposed.json"));
    CHECK(std::filesystem::exists(dir / "report_mc.json"));
    CHECK(std::filesystem::exists(dir / "comparison.csv"));
    CHECK(std::filesystem::exists(dir / "kde_a.csv"));
    CHECK(std::filesystem::exists(dir / "cdf_b.csv"));

    // re-emitting reproduces identical bytes
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    const std::string before = slurp(dir / "comparison.csv") + slurp(dir / "report_mc.json");
    emit_report(result, truth, dir);
    const std::string after = slurp(dir / "comparison.csv") + slurp(dir / "report_mc.json");
    CHECK(before == after);
    std::filesystem::remove_all(dir);
}
