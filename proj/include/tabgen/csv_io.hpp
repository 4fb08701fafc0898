#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tabgen/inventory.hpp"
#include "tabgen/schema.hpp"

namespace tabgen {

// One parsed CSV field. The quoted flag matters for missing-value handling:
// only UNQUOTED empty fields and the unquoted token "NA" denote a missing
// cell, so literal labels like "NA" survive a round trip when quoted.
struct CsvField {
    std::string text;
    bool quoted = false;
};

using CsvRecord = std::vector<CsvField>;

// RFC-4180-style reader: comma delimiter, double-quote escaping, quoted
// fields may contain commas and newlines. Accepts LF and CRLF line ends.
std::vector<CsvRecord> read_csv_records(const std::filesystem::path& path);

// Quotes a field when needed (delimiter, quote, newline, or text that would
// otherwise read back as missing).
std::string csv_escape(const std::string& field);

// Doubles with 17 significant digits; parse-exact round trip.
std::string format_double(double v);

// Strict full-string parse of a finite real; nullopt when it does not parse.
std::optional<double> parse_double(const std::string& text);

// Loads a CSV whose header matches the schema names in order. Missing cells
// are unquoted "" or "NA"; numeric cells must parse as finite reals;
// category labels must be in the schema's list.
Inventory load_csv(const std::filesystem::path& path, const FeatureSchema& schema);

// Writes header + rows; load_csv(save_csv(inv), inv.schema()) == inv.
void save_csv(const Inventory& inv, const std::filesystem::path& path);

// A column is numeric iff every non-missing cell parses as a finite real;
// otherwise categorical with categories in first-appearance order. Every
// column ends up with allow_missing = true.
FeatureSchema infer_schema(const std::filesystem::path& path);

} // namespace tabgen
