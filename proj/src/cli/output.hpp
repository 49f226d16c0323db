#pragma once

#include "matchdist/high_precision.hpp"
#include "matchdist/rational.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace matchdist::cli {

enum class Format { Csv, Json };

/// The enclosure of a value straddles a rounding boundary at the requested
/// number of digits; the caller recomputes at higher precision.
class AmbiguousRounding : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Cell {
    enum class Kind { Null, Text, Integer, Decimal, Boolean };
    Kind kind = Kind::Null;
    std::string text;

    static Cell null() { return {}; }
    static Cell label(std::string s) { return {Kind::Text, std::move(s)}; }
    static Cell integer(std::uint64_t v) { return {Kind::Integer, std::to_string(v)}; }
    static Cell boolean(bool v) { return {Kind::Boolean, v ? "true" : "false"}; }
    /// "num/den" form of an exact rational.
    static Cell fraction(const Rational& q) { return {Kind::Text, to_fraction_string(q)}; }
    /// Correctly rounded to `digits` significant digits; throws
    /// AmbiguousRounding when the certified enclosure does not pin them down.
    static Cell decimal(const HighPrecision& x, int digits);
    static Cell decimal(const Rational& q, int digits);
    /// Statistic computed in double precision, 6 significant digits.
    static Cell statistic(double v);
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Document {
    std::vector<std::pair<std::string, std::string>> params;
    Table table;
    /// Key/value summary printed after the table (CSV) or as "summary" (JSON).
    std::optional<Table> summary;
    int working_precision = 0;
    int digits = 0;
    std::string command;
};

/// CSV: header, comma separated, LF endings; a summary follows after one
/// blank line. JSON: one object with params, rows, meta (and summary).
void write(const Document& doc, Format format, std::ostream& out);

extern const char* const kVersion;

}  // namespace matchdist::cli
