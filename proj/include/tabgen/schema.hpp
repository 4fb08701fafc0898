#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace tabgen {

enum class FeatureKind { Numeric, Categorical, Ordinal };

const char* feature_kind_name(FeatureKind kind);
FeatureKind feature_kind_from_name(const std::string& name);

// Typed description of one column. Categorical and ordinal specs carry an
// ordered category list; for ordinal columns the list order is the semantic
// order.
struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::Numeric;
    std::string unit;
    bool allow_missing = true;
    std::vector<std::string> categories;

    bool is_numeric() const { return kind == FeatureKind::Numeric; }
    bool is_discrete() const { return kind != FeatureKind::Numeric; }

    // Index into categories, or -1 when the label is unknown.
    int category_index(const std::string& label) const;
};

// Ordered column list; the contract every table obeys. Invariants (unique
// non-empty names, category lists consistent with kind) are enforced at
// construction.
class FeatureSchema {
public:
    FeatureSchema() = default;
    explicit FeatureSchema(std::vector<FeatureSpec> features);

    std::size_t size() const { return features_.size(); }
    bool empty() const { return features_.empty(); }
    const FeatureSpec& at(std::size_t i) const { return features_.at(i); }
    const std::vector<FeatureSpec>& features() const { return features_; }

    std::optional<std::size_t> index_of(const std::string& name) const;

    // Equality over names, kinds and category lists (units are metadata).
    bool compatible_with(const FeatureSchema& other) const;

    bool operator==(const FeatureSchema& other) const;

private:
    std::vector<FeatureSpec> features_;
    std::unordered_map<std::string, std::size_t> by_name_;
};

nlohmann::json schema_to_json(const FeatureSchema& schema);
FeatureSchema schema_from_json(const nlohmann::json& j);

FeatureSchema load_schema(const std::filesystem::path& path);
void save_schema(const FeatureSchema& schema, const std::filesystem::path& path);

} // namespace tabgen
