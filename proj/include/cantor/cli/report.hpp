#pragma once

#include <algorithm>
#include <chrono>
#include <ctime>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cantor/bigfloat.hpp"
#include "cantor/rational.hpp"
#include "cantor/schedule.hpp"

namespace cantor::cli {

using Row = nlohmann::ordered_json;

/// Rows in output order plus the failure, if any, that cut the run short.
struct Report {
    std::vector<Row> rows;
    bool partial = false;
    std::string error;
};

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Field helpers. Exact values go out as "p/q" strings; each decimal rendering sits
// next to the exact value or enclosure it was derived from.

inline void put_rational(Row& row, const std::string& key, const Rational& q, int digits) {
    row[key] = to_fraction_string(q);
    row[key + "_decimal"] = rational_decimal(q, digits);
}

inline void put_integer(Row& row, const std::string& key, const Integer& v) { row[key] = v.get_str(); }

inline void put_enclosure(Row& row, const std::string& key, const Enclosure& e, int digits) {
    row[key + "_lo"] = to_fraction_string(e.lower_rational());
    row[key + "_hi"] = to_fraction_string(e.upper_rational());
    row[key + "_decimal"] = e.to_decimal(digits);
}

inline void put_enclosure(Row& row, const std::string& key, const RationalEnclosure& e, int digits) {
    row[key + "_lo"] = to_fraction_string(e.lower);
    row[key + "_hi"] = to_fraction_string(e.upper);
    row[key + "_decimal"] = rational_decimal(e.upper, digits);
}

/// Plain text of a scalar field, as it appears in a CSV cell.
inline std::string field_text(const Row& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

/// Header is the union of all row keys in first-seen order. CRLF line ends.
inline void write_csv(std::ostream& os, const std::vector<Row>& rows) {
    std::vector<std::string> header;
    for (const auto& r : rows) {
        for (const auto& [k, _] : r.items()) {
            if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
        }
    }
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_quote(header[i]);
    os << "\r\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) os << ',';
            auto it = r.find(header[i]);
            if (it != r.end()) os << csv_quote(field_text(*it));
        }
        os << "\r\n";
    }
}

inline void write_json(std::ostream& os, const std::vector<Row>& rows) {
    Row arr = Row::array();
    for (const auto& r : rows) arr.push_back(r);
    os << arr.dump(2) << '\n';
}

/// Parses RFC-4180 text back into rows of strings (empty cells dropped).
inline std::vector<Row> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> rec;
    std::string cell;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            rec.push_back(std::move(cell));
            cell.clear();
            any = true;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            rec.push_back(std::move(cell));
            cell.clear();
            records.push_back(std::move(rec));
            rec.clear();
            any = false;
        } else {
            cell += c;
            any = true;
        }
    }
    if (any) {
        rec.push_back(std::move(cell));
        records.push_back(std::move(rec));
    }
    std::vector<Row> rows;
    if (records.empty()) return rows;
    const auto& header = records.front();
    for (std::size_t r = 1; r < records.size(); ++r) {
        Row row = Row::object();
        for (std::size_t i = 0; i < header.size() && i < records[r].size(); ++i) {
            if (!records[r][i].empty()) row[header[i]] = records[r][i];
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace cantor::cli
