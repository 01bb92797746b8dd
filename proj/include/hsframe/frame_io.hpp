#pragma once

// Frame interchange format, one JSON document per line:
//
//   {"schema":"hsframe.frame/1","dim_h":n,"dim_k":m,"count":L}
//   {"element":0,"columns":[C_0, ..., C_{n-1}]}
//   ...
//
// C_j is the m x m image of the j-th canonical basis vector, written as a
// list of m rows of m [re, im] pairs. Doubles are printed in shortest
// round-trip form, so parse(serialize(frame)) is bit-exact.

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsframe/frame_analysis.hpp"

namespace hsframe {

inline constexpr const char* frame_schema = "hsframe.frame/1";

namespace detail {

using nlohmann::json;

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline std::size_t read_positive(const json& doc, const char* key, std::size_t line)
{
    if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'", line);
    const json& v = doc.at(key);
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0)
        throw ParseError(std::string("field '") + key + "' must be a positive integer", line);
    return v.get<std::size_t>();
}

inline Complex read_complex(const json& v, const std::string& where, std::size_t line)
{
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ParseError(where + ": expected [re, im] pair of numbers", line);
    const Complex z(v[0].get<double>(), v[1].get<double>());
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw ParseError(where + ": entry is not finite", line);
    return z;
}

}  // namespace detail

inline std::string serialize_frame(const HSFrame& frame)
{
    using nlohmann::json;
    std::ostringstream out;
    json header = {{"schema", frame_schema},
                   {"dim_h", frame.dim_h()},
                   {"dim_k", frame.dim_k()},
                   {"count", frame.size()}};
    out << header.dump() << '\n';
    const auto m = static_cast<Eigen::Index>(frame.dim_k());
    for (std::size_t i = 0; i < frame.size(); ++i) {
        json columns = json::array();
        for (std::size_t j = 0; j < frame.dim_h(); ++j) {
            const CMatrix c = frame[i].column(j);
            json rows = json::array();
            for (Eigen::Index r = 0; r < m; ++r) {
                json row = json::array();
                for (Eigen::Index k = 0; k < m; ++k) row.push_back(detail::complex_to_json(c(r, k)));
                rows.push_back(std::move(row));
            }
            columns.push_back(std::move(rows));
        }
        out << json{{"element", i}, {"columns", std::move(columns)}}.dump() << '\n';
    }
    return out.str();
}

inline HSFrame parse_frame(std::istream& in)
{
    using nlohmann::json;
    std::string text;
    std::size_t line_no = 0;
    auto next_line = [&](std::string& s) {
        while (std::getline(in, s)) {
            ++line_no;
            if (s.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };
    auto parse_json = [&](const std::string& s) {
        try {
            return json::parse(s);
        } catch (const json::exception& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
        }
    };

    if (!next_line(text)) throw ParseError("empty frame file");
    const json header = parse_json(text);
    if (!header.is_object()) throw ParseError("header must be a JSON object", line_no);
    if (!header.contains("schema") || !header["schema"].is_string())
        throw ParseError("missing field 'schema'", line_no);
    if (header["schema"].get<std::string>() != frame_schema)
        throw ParseError("unsupported schema '" + header["schema"].get<std::string>() + "', expected '" +
                             frame_schema + "'",
                         line_no);
    const std::size_t header_line = line_no;
    const std::size_t n = detail::read_positive(header, "dim_h", header_line);
    const std::size_t m = detail::read_positive(header, "dim_k", header_line);
    if (!header.contains("count") || !header["count"].is_number_unsigned())
        throw ParseError("missing field 'count'", header_line);
    const std::size_t count = header["count"].get<std::size_t>();
    if (count == 0) throw ParseError("frame has an empty element list", header_line);

    std::vector<HSMap> elements;
    elements.reserve(count);
    while (next_line(text)) {
        const json doc = parse_json(text);
        const std::size_t idx = elements.size();
        const std::string where = "element " + std::to_string(idx);
        if (!doc.is_object() || !doc.contains("element") || !doc["element"].is_number_unsigned())
            throw ParseError(where + ": missing field 'element'", line_no);
        if (doc["element"].get<std::size_t>() != idx)
            throw ParseError(where + ": field 'element' is " + doc["element"].dump() + ", expected " +
                                 std::to_string(idx),
                             line_no);
        if (idx >= count) throw ParseError("more element lines than count = " + std::to_string(count), line_no);
        if (!doc.contains("columns") || !doc["columns"].is_array() || doc["columns"].size() != n)
            throw ParseError(where + ": 'columns' must be an array of dim_h = " + std::to_string(n) + " matrices",
                             line_no);
        std::vector<CMatrix> columns;
        columns.reserve(n);
        for (std::size_t j = 0; j < n; ++j) {
            const json& rows = doc["columns"][j];
            const std::string cw = where + ": columns[" + std::to_string(j) + "]";
            if (!rows.is_array() || rows.size() != m)
                throw ParseError(cw + ": expected " + std::to_string(m) + " rows", line_no);
            CMatrix c(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
            for (std::size_t r = 0; r < m; ++r) {
                const json& row = rows[r];
                const std::string rw = cw + "[" + std::to_string(r) + "]";
                if (!row.is_array() || row.size() != m)
                    throw ParseError(rw + ": expected " + std::to_string(m) + " entries", line_no);
                for (std::size_t k = 0; k < m; ++k)
                    c(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
                        detail::read_complex(row[k], rw + "[" + std::to_string(k) + "]", line_no);
            }
            columns.push_back(std::move(c));
        }
        elements.push_back(HSMap::from_columns(columns));
    }
    if (elements.size() != count)
        throw ParseError("header declares count = " + std::to_string(count) + " but " +
                         std::to_string(elements.size()) + " element lines follow");
    return HSFrame(std::move(elements));
}

inline HSFrame parse_frame(const std::string& text)
{
    std::istringstream in(text);
    return parse_frame(in);
}

inline HSFrame read_frame_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open frame file '" + path + "'");
    try {
        return parse_frame(in);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline void write_frame_file(const std::string& path, const HSFrame& frame)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SpecError("cannot write frame file '" + path + "'");
    out << serialize_frame(frame);
}

}  // namespace hsframe
