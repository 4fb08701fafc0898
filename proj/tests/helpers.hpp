#pragma once

#include <string>
#include <vector>

#include "tabgen/inventory.hpp"
#include "tabgen/rng.hpp"

namespace tabgen::test {

inline Cell num(double v) { return Cell::number(v); }
inline Cell cat(std::string s) { return Cell::category(std::move(s)); }
inline Cell miss() { return Cell::missing(); }

inline FeatureSpec numeric_spec(std::string name, bool allow_missing = true) {
    FeatureSpec spec;
    spec.name = std::move(name);
    spec.kind = FeatureKind::Numeric;
    spec.allow_missing = allow_missing;
    return spec;
}

inline FeatureSpec categorical_spec(std::string name, std::vector<std::string> categories,
                                    bool allow_missing = true) {
    FeatureSpec spec;
    spec.name = std::move(name);
    spec.kind = FeatureKind::Categorical;
    spec.allow_missing = allow_missing;
    spec.categories = std::move(categories);
    return spec;
}

inline FeatureSchema numeric_schema(const std::vector<std::string>& names) {
    std::vector<FeatureSpec> specs;
    for (const auto& n : names) specs.push_back(numeric_spec(n));
    return FeatureSchema(specs);
}

// Single numeric column inventory; NaN marks a missing cell.
inline Inventory column_inventory(const std::string& name, const std::vector<double>& values,
                                  const std::vector<bool>& missing = {}) {
    std::vector<Row> rows;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const bool m = i < missing.size() && missing[i];
        rows.push_back({m ? Cell::missing() : Cell::number(values[i])});
    }
    return Inventory(FeatureSchema({numeric_spec(name)}), rows);
}

inline std::vector<double> random_sample(RngStream& rng, std::size_t n, double mu = 0.0,
                                         double sd = 1.0) {
    std::vector<double> out(n);
    for (auto& v : out) v = mu + sd * rng.normal();
    return out;
}

} // namespace tabgen::test
