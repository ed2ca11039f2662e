#pragma once

// Field access helpers that turn shape problems into located errors.

#include "ppk/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

namespace ppk::detail {

using json = nlohmann::json;

inline std::string field_locus(const std::string& parent, std::string_view key)
{
    return parent.empty() ? std::string(key) : parent + "." + std::string(key);
}

inline std::string index_locus(const std::string& parent, std::size_t i)
{
    return parent + "[" + std::to_string(i) + "]";
}

/// Parses JSON text; syntax errors carry a "line L, column C" locus.
template <typename E = SchemaError>
json parse_json(std::string_view text)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw E("line " + std::to_string(line) + ", column " + std::to_string(col),
                "syntax error");
    }
}

template <typename E = SchemaError>
const json& expect_object(const json& j, const std::string& locus)
{
    if (!j.is_object())
        throw E(locus, "expected an object");
    return j;
}

template <typename E = SchemaError>
const json& expect_array(const json& j, const std::string& locus)
{
    if (!j.is_array())
        throw E(locus, "expected an array");
    return j;
}

template <typename E = SchemaError>
const json& require(const json& obj, std::string_view key, const std::string& locus)
{
    const auto it = obj.find(key);
    if (it == obj.end())
        throw E(locus, "missing field '" + std::string(key) + "'");
    return *it;
}

template <typename E = SchemaError>
void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& locus)
{
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw E(field_locus(locus, key), "unknown field");
    }
}

template <typename E = SchemaError>
double get_number(const json& j, const std::string& locus)
{
    if (!j.is_number())
        throw E(locus, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        throw E(locus, "expected a finite number");
    return v;
}

template <typename E = SchemaError>
std::uint64_t get_uint(const json& j, const std::string& locus)
{
    if (!j.is_number_unsigned())
        throw E(locus, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

template <typename E = SchemaError>
std::string get_string(const json& j, const std::string& locus)
{
    if (!j.is_string())
        throw E(locus, "expected a string");
    return j.get<std::string>();
}

template <typename E = SchemaError>
bool get_bool(const json& j, const std::string& locus)
{
    if (!j.is_boolean())
        throw E(locus, "expected a boolean");
    return j.get<bool>();
}

/// Canonical text form shared by every document the toolkit writes.
inline std::string dump_canonical(const json& j)
{
    return j.dump(2) + "\n";
}

}  // namespace ppk::detail
