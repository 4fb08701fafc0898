#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tabgen/conditional_model.hpp"
#include "tabgen/inventory.hpp"
#include "tabgen/metrics.hpp"
#include "tabgen/selection.hpp"

namespace tabgen {

struct BenchMethodResult {
    std::string method;
    bool ok = false;
    std::string error;          // set when !ok
    MetricReport report;        // vs the truth sample
    std::optional<Inventory> synthetic;
    double wall_seconds = 0.0;  // informational; never serialized
};

struct BenchResult {
    std::string scenario;
    std::uint64_t seed = 0;
    std::vector<BenchMethodResult> methods;
};

struct BenchOptions {
    GenerationConfig gen;        // proposed method: pool size, T, M
    SelectionConfig sel;         // proposed method: acceptance rule
    std::size_t smote_k = 5;
    double lambda_cat = 0.1;
    // label -> CSV path; evaluated through the identical path as built-ins
    std::map<std::string, std::filesystem::path> external;
};

// Runs each requested method ("proposed", "mc", "smote", or an external
// label) on the training table and scores its synthetic rows against the
// truth sample. Methods get independent seeds derived from (seed, method).
// A method failure is recorded in its slot; the others still run. The truth
// table is never shown to any generator.
BenchResult run_comparison(const Inventory& train, const Inventory& truth,
                           const std::vector<std::string>& methods, const BenchOptions& options,
                           std::uint64_t seed);

// Writes per-method report JSONs, a feature-x-metric comparison CSV, and
// per-numeric-feature KDE and empirical-CDF grids for external plotting.
// Every emitted byte is a function of the BenchResult and truth table.
void emit_report(const BenchResult& result, const Inventory& truth,
                 const std::filesystem::path& out_dir);

} // namespace tabgen
