#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tabgen/cell.hpp"
#include "tabgen/schema.hpp"

namespace tabgen {

// Immutable table of rows conforming to a schema. Construction validates
// every cell: width, kind, category membership, missing only where allowed.
class Inventory {
public:
    Inventory() = default;
    Inventory(FeatureSchema schema, std::vector<Row> rows);

    const FeatureSchema& schema() const { return schema_; }
    const std::vector<Row>& rows() const { return rows_; }
    std::size_t row_count() const { return rows_.size(); }
    std::size_t feature_count() const { return schema_.size(); }

    const Cell& at(std::size_t row, std::size_t col) const { return rows_.at(row).at(col); }

    bool has_missing() const;

    // Non-missing numeric values of one column, in row order.
    std::vector<double> numeric_column(std::size_t col) const;
    // Category labels of non-missing cells of one column, in row order.
    std::vector<std::string> category_column(std::size_t col) const;

private:
    FeatureSchema schema_;
    std::vector<Row> rows_;
};

struct TypeViolation {
    std::size_t row = 0;
    std::size_t column = 0;
    std::string description;
};

struct ValidationReport {
    std::vector<std::size_t> duplicate_row_indices;
    std::vector<TypeViolation> type_violations;
    std::vector<std::size_t> missing_counts; // per column
};

// Report-only check: duplicates (an index i is listed when some earlier row
// equals row i cell-for-cell), per-column missing counts, and a re-check of
// cell/type conformance. Pure; never mutates.
ValidationReport validate(const Inventory& inv);

// Copy without the given row indices (used by the CLI --dedupe flag).
Inventory drop_rows(const Inventory& inv, const std::vector<std::size_t>& rows);

// Canonical byte serialization of a row (type-tagged, numerics by bit
// pattern); equal rows and only equal rows share a key.
std::string row_key(const Row& row);

// FNV-1a fingerprint of an entire inventory, used to stamp fitted pipelines.
std::string inventory_fingerprint(const Inventory& inv);

} // namespace tabgen
