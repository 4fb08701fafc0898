#include "tabgen/inventory.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <unordered_set>

#include "tabgen/errors.hpp"

namespace tabgen {

namespace {

// Returns an empty string when the cell conforms to the spec, otherwise a
// description of the violation.
std::string check_cell(const Cell& cell, const FeatureSpec& spec) {
    if (cell.is_missing()) {
        if (!spec.allow_missing) {
            return "missing value in non-nullable column '" + spec.name + "'";
        }
        return {};
    }
    if (spec.is_numeric()) {
        if (!cell.is_number()) {
            return "non-numeric cell in numeric column '" + spec.name + "'";
        }
        return {};
    }
    if (!cell.is_category()) {
        return "non-categorical cell in " + std::string(feature_kind_name(spec.kind)) +
               " column '" + spec.name + "'";
    }
    if (spec.category_index(cell.category_label()) < 0) {
        return "unknown category '" + cell.category_label() + "' in column '" + spec.name + "'";
    }
    return {};
}

} // namespace

Inventory::Inventory(FeatureSchema schema, std::vector<Row> rows)
    : schema_(std::move(schema)), rows_(std::move(rows)) {
    const std::size_t d = schema_.size();
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (rows_[r].size() != d) {
            throw DataError("row " + std::to_string(r) + " has " +
                            std::to_string(rows_[r].size()) + " cells, schema expects " +
                            std::to_string(d));
        }
        for (std::size_t c = 0; c < d; ++c) {
            const std::string err = check_cell(rows_[r][c], schema_.at(c));
            if (!err.empty()) {
                throw DataError("row " + std::to_string(r) + ": " + err);
            }
        }
    }
}

bool Inventory::has_missing() const {
    for (const auto& row : rows_) {
        for (const auto& cell : row) {
            if (cell.is_missing()) return true;
        }
    }
    return false;
}

std::vector<double> Inventory::numeric_column(std::size_t col) const {
    if (!schema_.at(col).is_numeric()) {
        throw DataError("column '" + schema_.at(col).name + "' is not numeric");
    }
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) {
        if (!row[col].is_missing()) out.push_back(row[col].number_value());
    }
    return out;
}

std::vector<std::string> Inventory::category_column(std::size_t col) const {
    if (schema_.at(col).is_numeric()) {
        throw DataError("column '" + schema_.at(col).name + "' is not categorical");
    }
    std::vector<std::string> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) {
        if (!row[col].is_missing()) out.push_back(row[col].category_label());
    }
    return out;
}

std::string row_key(const Row& row) {
    std::string key;
    key.reserve(row.size() * 12);
    for (const auto& cell : row) {
        if (cell.is_missing()) {
            key += "\x01";
        } else if (cell.is_number()) {
            key += "\x02";
            const double v = cell.number_value();
            std::uint64_t bits;
            std::memcpy(&bits, &v, sizeof(bits));
            key.append(reinterpret_cast<const char*>(&bits), sizeof(bits));
        } else {
            key += "\x03";
            key += cell.category_label();
        }
        key += '\x00';
    }
    return key;
}

ValidationReport validate(const Inventory& inv) {
    ValidationReport report;
    report.missing_counts.assign(inv.feature_count(), 0);

    std::unordered_set<std::string> seen;
    for (std::size_t r = 0; r < inv.row_count(); ++r) {
        const Row& row = inv.rows()[r];
        if (!seen.insert(row_key(row)).second) {
            report.duplicate_row_indices.push_back(r);
        }
        for (std::size_t c = 0; c < inv.feature_count(); ++c) {
            if (row[c].is_missing()) ++report.missing_counts[c];
            const std::string err = check_cell(row[c], inv.schema().at(c));
            if (!err.empty()) report.type_violations.push_back({r, c, err});
        }
    }
    return report;
}

Inventory drop_rows(const Inventory& inv, const std::vector<std::size_t>& rows) {
    std::unordered_set<std::size_t> drop(rows.begin(), rows.end());
    std::vector<Row> kept;
    kept.reserve(inv.row_count());
    for (std::size_t r = 0; r < inv.row_count(); ++r) {
        if (!drop.count(r)) kept.push_back(inv.rows()[r]);
    }
    return Inventory(inv.schema(), std::move(kept));
}

std::string inventory_fingerprint(const Inventory& inv) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    auto feed = [&hash](const std::string& bytes) {
        for (unsigned char b : bytes) {
            hash ^= b;
            hash *= 0x100000001b3ULL;
        }
    };
    for (const auto& f : inv.schema().features()) {
        feed(f.name);
        feed(feature_kind_name(f.kind));
        for (const auto& c : f.categories) feed(c);
    }
    for (const auto& row : inv.rows()) feed(row_key(row));

    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string("fnv1a:") + buf;
}

} // namespace tabgen
