#include "tabgen/schema.hpp"

#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "tabgen/errors.hpp"

namespace tabgen {

const char* feature_kind_name(FeatureKind kind) {
    switch (kind) {
    case FeatureKind::Numeric: return "numeric";
    case FeatureKind::Categorical: return "categorical";
    case FeatureKind::Ordinal: return "ordinal";
    }
    return "numeric";
}

FeatureKind feature_kind_from_name(const std::string& name) {
    if (name == "numeric") return FeatureKind::Numeric;
    if (name == "categorical") return FeatureKind::Categorical;
    if (name == "ordinal") return FeatureKind::Ordinal;
    throw DataError("unknown feature kind: '" + name + "'");
}

int FeatureSpec::category_index(const std::string& label) const {
    for (std::size_t i = 0; i < categories.size(); ++i) {
        if (categories[i] == label) return static_cast<int>(i);
    }
    return -1;
}

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> features)
    : features_(std::move(features)) {
    for (std::size_t i = 0; i < features_.size(); ++i) {
        const FeatureSpec& f = features_[i];
        if (f.name.empty()) {
            throw DataError("schema: feature name must be non-empty");
        }
        if (!by_name_.emplace(f.name, i).second) {
            throw DataError("schema: duplicate feature name '" + f.name + "'");
        }
        if (f.is_numeric()) {
            if (!f.categories.empty()) {
                throw DataError("schema: numeric feature '" + f.name +
                                "' must have an empty category list");
            }
        } else {
            if (f.categories.empty()) {
                throw DataError("schema: " + std::string(feature_kind_name(f.kind)) +
                                " feature '" + f.name + "' needs at least one category");
            }
            std::unordered_set<std::string> seen;
            for (const auto& c : f.categories) {
                if (!seen.insert(c).second) {
                    throw DataError("schema: feature '" + f.name +
                                    "' has duplicate category '" + c + "'");
                }
            }
        }
    }
}

std::optional<std::size_t> FeatureSchema::index_of(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

bool FeatureSchema::compatible_with(const FeatureSchema& other) const {
    if (features_.size() != other.features_.size()) return false;
    for (std::size_t i = 0; i < features_.size(); ++i) {
        const auto& a = features_[i];
        const auto& b = other.features_[i];
        if (a.name != b.name || a.kind != b.kind || a.categories != b.categories) return false;
    }
    return true;
}

bool FeatureSchema::operator==(const FeatureSchema& other) const {
    if (features_.size() != other.features_.size()) return false;
    for (std::size_t i = 0; i < features_.size(); ++i) {
        const auto& a = features_[i];
        const auto& b = other.features_[i];
        if (a.name != b.name || a.kind != b.kind || a.unit != b.unit ||
            a.allow_missing != b.allow_missing || a.categories != b.categories) {
            return false;
        }
    }
    return true;
}

nlohmann::json schema_to_json(const FeatureSchema& schema) {
    nlohmann::json features = nlohmann::json::array();
    for (const auto& f : schema.features()) {
        features.push_back({{"name", f.name},
                            {"kind", feature_kind_name(f.kind)},
                            {"unit", f.unit},
                            {"allow_missing", f.allow_missing},
                            {"categories", f.categories}});
    }
    return nlohmann::json{{"features", features}};
}

FeatureSchema schema_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("features") || !j["features"].is_array()) {
        throw DataError("schema JSON must be an object with a 'features' array");
    }
    std::vector<FeatureSpec> specs;
    for (const auto& jf : j["features"]) {
        FeatureSpec spec;
        spec.name = jf.at("name").get<std::string>();
        spec.kind = feature_kind_from_name(jf.at("kind").get<std::string>());
        spec.unit = jf.value("unit", std::string{});
        spec.allow_missing = jf.value("allow_missing", true);
        spec.categories = jf.value("categories", std::vector<std::string>{});
        specs.push_back(std::move(spec));
    }
    return FeatureSchema(std::move(specs));
}

FeatureSchema load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open schema file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid schema JSON in " + path.string() + ": " + e.what());
    }
    return schema_from_json(j);
}

void save_schema(const FeatureSchema& schema, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write schema file: " + path.string());
    out << schema_to_json(schema).dump(2) << '\n';
}

} // namespace tabgen
