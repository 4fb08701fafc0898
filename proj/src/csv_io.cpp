#include "tabgen/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "tabgen/errors.hpp"

namespace tabgen {

std::vector<CsvRecord> read_csv_records(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    std::vector<CsvRecord> records;
    CsvRecord record;
    CsvField field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field = CsvField{};
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record = CsvRecord{};
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.text += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.text += ch;
            }
            continue;
        }
        switch (ch) {
        case '"':
            if (field_started && !field.text.empty()) {
                throw DataError(path.string() + ": stray quote inside unquoted field");
            }
            in_quotes = true;
            field.quoted = true;
            field_started = true;
            break;
        case ',':
            end_field();
            break;
        case '\r':
            break; // CRLF: the LF that follows ends the record
        case '\n':
            end_record();
            break;
        default:
            field.text += ch;
            field_started = true;
            break;
        }
    }
    if (in_quotes) throw DataError(path.string() + ": unterminated quoted field");
    // Final record without a trailing newline.
    if (field_started || field.quoted || !record.empty()) end_record();
    return records;
}

std::string csv_escape(const std::string& field) {
    const bool special = field.find_first_of(",\"\r\n") != std::string::npos;
    const bool reads_as_missing = field.empty() || field == "NA";
    if (!special && !reads_as_missing) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::optional<double> parse_double(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+') ++first; // from_chars rejects a leading plus
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

namespace {

bool is_missing_token(const CsvField& f) {
    return !f.quoted && (f.text.empty() || f.text == "NA");
}

void check_header(const CsvRecord& header, const FeatureSchema& schema,
                  const std::filesystem::path& path) {
    if (header.size() != schema.size()) {
        throw DataError(path.string() + ": header has " + std::to_string(header.size()) +
                        " columns, schema expects " + std::to_string(schema.size()));
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i].text != schema.at(i).name) {
            throw DataError(path.string() + ": header column " + std::to_string(i) + " is '" +
                            header[i].text + "', schema expects '" + schema.at(i).name + "'");
        }
    }
}

} // namespace

Inventory load_csv(const std::filesystem::path& path, const FeatureSchema& schema) {
    const auto records = read_csv_records(path);
    if (records.empty()) throw DataError(path.string() + ": empty file, header required");
    check_header(records[0], schema, path);

    std::vector<Row> rows;
    rows.reserve(records.size() - 1);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const CsvRecord& record = records[r];
        if (record.size() != schema.size()) {
            throw DataError(path.string() + ": data row " + std::to_string(r - 1) + " has " +
                            std::to_string(record.size()) + " fields, expected " +
                            std::to_string(schema.size()));
        }
        Row row;
        row.reserve(schema.size());
        for (std::size_t c = 0; c < schema.size(); ++c) {
            const FeatureSpec& spec = schema.at(c);
            const CsvField& field = record[c];
            if (is_missing_token(field)) {
                if (!spec.allow_missing) {
                    throw DataError(path.string() + ": row " + std::to_string(r - 1) +
                                    ": missing value in non-nullable column '" + spec.name + "'");
                }
                row.push_back(Cell::missing());
                continue;
            }
            if (spec.is_numeric()) {
                const auto value = parse_double(field.text);
                if (!value) {
                    throw DataError(path.string() + ": row " + std::to_string(r - 1) +
                                    ": cannot parse '" + field.text + "' as a number in column '" +
                                    spec.name + "'");
                }
                row.push_back(Cell::number(*value));
            } else {
                if (spec.category_index(field.text) < 0) {
                    throw DataError(path.string() + ": row " + std::to_string(r - 1) +
                                    ": unknown category '" + field.text + "' in column '" +
                                    spec.name + "'");
                }
                row.push_back(Cell::category(field.text));
            }
        }
        rows.push_back(std::move(row));
    }
    return Inventory(schema, std::move(rows));
}

void save_csv(const Inventory& inv, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());

    const auto& schema = inv.schema();
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (c) out << ',';
        out << csv_escape(schema.at(c).name);
    }
    out << '\n';
    for (const auto& row : inv.rows()) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            const Cell& cell = row[c];
            if (cell.is_missing()) {
                // empty unquoted field
            } else if (cell.is_number()) {
                out << format_double(cell.number_value());
            } else {
                out << csv_escape(cell.category_label());
            }
        }
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
}

FeatureSchema infer_schema(const std::filesystem::path& path) {
    const auto records = read_csv_records(path);
    if (records.empty()) throw DataError(path.string() + ": empty file, header required");

    const CsvRecord& header = records[0];
    std::unordered_set<std::string> names;
    for (const auto& h : header) {
        if (!names.insert(h.text).second) {
            throw DataError(path.string() + ": duplicate header name '" + h.text + "'");
        }
    }

    const std::size_t d = header.size();
    std::vector<bool> numeric(d, true);
    std::vector<std::vector<std::string>> labels(d);
    std::vector<std::unordered_set<std::string>> seen(d);

    for (std::size_t r = 1; r < records.size(); ++r) {
        const CsvRecord& record = records[r];
        if (record.size() != d) {
            throw DataError(path.string() + ": data row " + std::to_string(r - 1) + " has " +
                            std::to_string(record.size()) + " fields, expected " +
                            std::to_string(d));
        }
        for (std::size_t c = 0; c < d; ++c) {
            const CsvField& field = record[c];
            if (is_missing_token(field)) continue;
            if (numeric[c] && !parse_double(field.text)) numeric[c] = false;
            if (seen[c].insert(field.text).second) labels[c].push_back(field.text);
        }
    }

    std::vector<FeatureSpec> specs;
    specs.reserve(d);
    for (std::size_t c = 0; c < d; ++c) {
        FeatureSpec spec;
        spec.name = header[c].text;
        spec.allow_missing = true;
        if (numeric[c]) {
            spec.kind = FeatureKind::Numeric;
        } else {
            spec.kind = FeatureKind::Categorical;
            spec.categories = labels[c];
        }
        specs.push_back(std::move(spec));
    }
    return FeatureSchema(std::move(specs));
}

} // namespace tabgen
