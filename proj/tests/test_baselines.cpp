#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "tabgen/baselines.hpp"
#include "tabgen/errors.hpp"
#include "tabgen/stats.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

using namespace tabgen;
using namespace tabgen::test;

namespace {

Inventory correlated_table(std::uint64_t seed, std::size_t n, double rho) {
    RngStream rng(seed);
    std::vector<Row> rows;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.normal();
        const double y = rho * x + std::sqrt(1.0 - rho * rho) * rng.normal();
        rows.push_back({num(x), num(y)});
    }
    return Inventory(numeric_schema({"x", "y"}), rows);
}

} // namespace

TEST_CASE("mc_fit") {
    SUBCASE("categorical frequencies are empirical") {
        const Inventory train(FeatureSchema({categorical_spec("c", {"A", "B"})}),
                              {{cat("A")}, {cat("A")}, {cat("B")}});
        const MarginalModel model = mc_fit(train);
        CHECK(model.frequencies[0][0] == doctest::Approx(2.0 / 3).epsilon(1e-12));
        CHECK(model.frequencies[0][1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(model.frequencies[0][0] + model.frequencies[0][1] ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("single-row table concentrates all mass at that row") {
        const Inventory train(
            FeatureSchema({numeric_spec("x"), categorical_spec("c", {"A", "B"})}),
            {{num(5.0), cat("B")}});
        const MarginalModel model = mc_fit(train);
        const Inventory gen = mc_generate(model, 50, 3);
        for (const auto& row : gen.rows()) {
            // bandwidth is floored, so numeric draws hug the single value
            CHECK(row[0].number_value() == doctest::Approx(5.0).epsilon(1e-6));
            CHECK(row[1] == cat("B"));
        }
    }
    SUBCASE("empty table is an error") {
        CHECK_THROWS_AS(mc_fit(Inventory(numeric_schema({"x"}), {})), DataError);
    }
    SUBCASE("kernel resampling preserves the mean in expectation") {
        RngStream rng(6);
        const Inventory train = column_inventory("x", random_sample(rng, 200, 3.0, 2.0));
        const MarginalModel model = mc_fit(train);
        const Inventory gen = mc_generate(model, 100000, 11);
        const auto train_col = train.numeric_column(0);
        const auto gen_col = gen.numeric_column(0);
        const double sigma_draw =
            std::sqrt(std::pow(oracle::sd_of(train_col), 2) + std::pow(model.bandwidths[0], 2));
        const double se = sigma_draw / std::sqrt(100000.0);
        CHECK(std::abs(oracle::mean_of(gen_col) - oracle::mean_of(train_col)) < 3 * se);
    }
}

TEST_CASE("mc_generate destroys cross-column dependence") {
    const Inventory train = correlated_table(7, 2000, 0.9);
    const Inventory gen = mc_generate(mc_fit(train), 20000, 13);
    const auto x = gen.numeric_column(0);
    const auto y = gen.numeric_column(1);
    CHECK(std::abs(stats::pearson(x, y)) <= 0.05);
}

TEST_CASE("mc_generate matches a fresh KDE oracle sample") {
    RngStream rng(14);
    const Inventory train = column_inventory("x", random_sample(rng, 300, -1.0, 1.7));
    const MarginalModel model = mc_fit(train);
    const Inventory gen = mc_generate(model, 20000, 5);

    // oracle: independent draws from the same mixture with a different rng
    RngStream orng(990);
    const auto& vals = model.values[0];
    std::vector<double> oracle_sample(20000);
    for (auto& v : oracle_sample) {
        v = vals[orng.uniform_index(vals.size())] + model.bandwidths[0] * orng.normal();
    }
    const auto gen_col = gen.numeric_column(0);
    CHECK(oracle::ks_brute(gen_col, oracle_sample) <= 0.02);
}

TEST_CASE("mc_generate categorical frequencies concentrate") {
    std::vector<Row> rows;
    for (int i = 0; i < 6; ++i) rows.push_back({cat("A")});
    for (int i = 0; i < 3; ++i) rows.push_back({cat("B")});
    rows.push_back({cat("C")});
    const Inventory train(FeatureSchema({categorical_spec("c", {"A", "B", "C"})}), rows);
    const Inventory gen = mc_generate(mc_fit(train), 20000, 21);
    std::vector<double> counts(3, 0.0);
    for (const auto& row : gen.rows()) {
        if (row[0] == cat("A")) counts[0] += 1;
        else if (row[0] == cat("B")) counts[1] += 1;
        else counts[2] += 1;
    }
    CHECK(std::abs(counts[0] / 20000 - 0.6) <= 0.02);
    CHECK(std::abs(counts[1] / 20000 - 0.3) <= 0.02);
    CHECK(std::abs(counts[2] / 20000 - 0.1) <= 0.02);
}

TEST_CASE("mc_generate is deterministic under a fixed seed") {
    const Inventory train = correlated_table(8, 50, 0.2);
    const Inventory a = mc_generate(mc_fit(train), 40, 17);
    const Inventory b = mc_generate(mc_fit(train), 40, 17);
    REQUIRE(a.row_count() == b.row_count());
    for (std::size_t r = 0; r < a.row_count(); ++r) CHECK(a.rows()[r] == b.rows()[r]);
}

TEST_CASE("smote_interpolate endpoints and midpoint") {
    CHECK(smote_interpolate(3.0, 8.0, 0.0) == 3.0);
    CHECK(smote_interpolate(3.0, 8.0, 1.0) == 8.0);
    // x_i = (0,0), x_nn = (2,4), lambda = 0.5 -> (1,2)
    CHECK(smote_interpolate(0.0, 2.0, 0.5) == 1.0);
    CHECK(smote_interpolate(0.0, 4.0, 0.5) == 2.0);
}

TEST_CASE("smote_generate") {
    const FeatureSchema schema({numeric_spec("x"), numeric_spec("y"),
                                categorical_spec("soil", {"clay", "sand", "loam"})});
    RngStream rng(15);
    std::vector<Row> rows;
    const char* labels[] = {"clay", "sand", "loam"};
    for (int i = 0; i < 40; ++i) {
        rows.push_back({num(rng.normal() * 4), num(rng.normal() + 10), cat(labels[i % 3])});
    }
    const Inventory source(schema, rows);

    SmoteConfig cfg;
    cfg.k = 5;
    cfg.n_new = 300;
    cfg.seed = 77;
    const Inventory synth = smote_generate(source, cfg);
    REQUIRE(synth.row_count() == 300);

    SUBCASE("each synthetic row is a convex combination of two source rows") {
        // recover lambda from column x against every (base, neighbor) pair
        // and require one shared lambda to explain all numeric columns
        const auto sx = source.numeric_column(0);
        const auto sy = source.numeric_column(1);
        for (const auto& row : synth.rows()) {
            const double gx = row[0].number_value();
            const double gy = row[1].number_value();
            bool explained = false;
            for (std::size_t i = 0; i < sx.size() && !explained; ++i) {
                for (std::size_t j = 0; j < sx.size() && !explained; ++j) {
                    if (i == j) continue;
                    const double dx = sx[j] - sx[i];
                    if (std::abs(dx) < 1e-12) continue;
                    const double lambda = (gx - sx[i]) / dx;
                    if (lambda < -1e-9 || lambda > 1.0 + 1e-9) continue;
                    if (std::abs(sy[i] + lambda * (sy[j] - sy[i]) - gy) <= 1e-9) {
                        explained = true;
                    }
                }
            }
            CHECK(explained);
        }
    }
    SUBCASE("synthetic cells never leave the per-column source range") {
        for (std::size_t c = 0; c < 2; ++c) {
            const auto col = source.numeric_column(c);
            const double lo = *std::min_element(col.begin(), col.end());
            const double hi = *std::max_element(col.begin(), col.end());
            for (const auto& row : synth.rows()) {
                CHECK(row[c].number_value() >= lo - 1e-12);
                CHECK(row[c].number_value() <= hi + 1e-12);
            }
        }
    }
    SUBCASE("categorical cells carry known labels") {
        for (const auto& row : synth.rows()) {
            CHECK(schema.at(2).category_index(row[2].category_label()) >= 0);
        }
    }
    SUBCASE("deterministic under a fixed seed") {
        const Inventory again = smote_generate(source, cfg);
        for (std::size_t r = 0; r < synth.row_count(); ++r) {
            CHECK(again.rows()[r] == synth.rows()[r]);
        }
    }
}

TEST_CASE("smote error paths") {
    const Inventory tiny = column_inventory("x", {1, 2, 3});
    SmoteConfig cfg;
    cfg.k = 3;
    cfg.n_new = 5;
    CHECK_THROWS_AS(smote_generate(tiny, cfg), DataError); // k >= row count

    const Inventory cats(FeatureSchema({categorical_spec("c", {"A", "B"})}),
                         {{cat("A")}, {cat("B")}, {cat("A")}, {cat("B")}});
    cfg.k = 2;
    CHECK_THROWS_AS(smote_generate(cats, cfg), DataError); // no numeric column
}

TEST_CASE("smote categorical majority vote with base-label tie break") {
    // neighbors of every row are label-balanced for k=2, forcing ties
    const FeatureSchema schema({numeric_spec("x"), categorical_spec("c", {"A", "B"})});
    const Inventory source(schema, {{num(0.0), cat("A")},
                                    {num(1.0), cat("B")},
                                    {num(2.0), cat("A")},
                                    {num(3.0), cat("B")}});
    SmoteConfig cfg;
    cfg.k = 2;
    cfg.n_new = 100;
    cfg.seed = 5;
    const Inventory synth = smote_generate(source, cfg);
    for (const auto& row : synth.rows()) {
        CHECK(schema.at(1).category_index(row[1].category_label()) >= 0);
    }
}
