#include "cli/output.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>

namespace matchdist::cli {

const char* const kVersion = "1.0.0";

Cell Cell::decimal(const HighPrecision& x, int digits) {
    std::string mid = format_decimal(x.value(), digits);
    if (!x.is_exact() &&
        (format_decimal(x.lower(), digits) != mid || format_decimal(x.upper(), digits) != mid)) {
        throw AmbiguousRounding("value " + mid + " not certified to " + std::to_string(digits) + " digits");
    }
    return {Kind::Decimal, mid};
}

Cell Cell::decimal(const Rational& q, int digits) { return {Kind::Decimal, format_decimal(q, digits)}; }

Cell Cell::statistic(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return {Kind::Decimal, buf};
}

namespace {

void write_csv_table(const Table& t, std::ostream& out) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c].text;
        out << '\n';
    }
}

nlohmann::ordered_json to_json(const Cell& cell) {
    switch (cell.kind) {
        case Cell::Kind::Null: return nullptr;
        case Cell::Kind::Integer: return std::stoull(cell.text);
        case Cell::Kind::Boolean: return cell.text == "true";
        case Cell::Kind::Text:
        case Cell::Kind::Decimal: return cell.text;
    }
    return nullptr;
}

nlohmann::ordered_json rows_json(const Table& t) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) obj[t.columns[c]] = to_json(row[c]);
        rows.push_back(std::move(obj));
    }
    return rows;
}

}  // namespace

void write(const Document& doc, Format format, std::ostream& out) {
    if (format == Format::Csv) {
        write_csv_table(doc.table, out);
        if (doc.summary) {
            out << '\n';
            write_csv_table(*doc.summary, out);
        }
        return;
    }
    nlohmann::ordered_json j;
    j["params"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : doc.params) j["params"][k] = v;
    j["rows"] = rows_json(doc.table);
    if (doc.summary) {
        nlohmann::ordered_json s = nlohmann::ordered_json::object();
        for (const auto& row : doc.summary->rows) s[row.at(0).text] = to_json(row.at(1));
        j["summary"] = std::move(s);
    }
    j["meta"] = {{"command", doc.command},
                 {"working_precision", doc.working_precision},
                 {"digits", doc.digits},
                 {"version", kVersion}};
    out << j.dump(2) << '\n';
}

}  // namespace matchdist::cli
