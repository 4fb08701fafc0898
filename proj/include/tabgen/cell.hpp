#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tabgen {

// One table cell: a finite real, a category label, or an explicit missing
// marker. Numbers are validated at construction so a Cell can never hold
// NaN or infinity.
class Cell {
public:
    Cell() = default; // missing

    static Cell number(double v) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("Cell::number requires a finite value");
        }
        Cell c;
        c.value_ = v;
        return c;
    }

    static Cell category(std::string label) {
        Cell c;
        c.value_ = std::move(label);
        return c;
    }

    static Cell missing() { return Cell{}; }

    bool is_missing() const { return std::holds_alternative<std::monostate>(value_); }
    bool is_number() const { return std::holds_alternative<double>(value_); }
    bool is_category() const { return std::holds_alternative<std::string>(value_); }

    double number_value() const {
        if (!is_number()) throw std::logic_error("Cell is not a number");
        return std::get<double>(value_);
    }

    const std::string& category_label() const {
        if (!is_category()) throw std::logic_error("Cell is not a category");
        return std::get<std::string>(value_);
    }

    bool operator==(const Cell& other) const { return value_ == other.value_; }

private:
    std::variant<std::monostate, double, std::string> value_;
};

using Row = std::vector<Cell>;

} // namespace tabgen
