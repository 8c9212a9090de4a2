#pragma once

#include "core.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace bidegree {

struct LoadedSequence {
    BidegreeSequence sequence;
    bool undirected = false;
};

namespace detail {

inline std::string where(std::size_t line, std::size_t col) {
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline std::vector<long long> int_array(const nlohmann::json& j, const char* key) {
    if (!j.is_array()) throw Error(ErrorCode::ParseError, std::string("\"") + key + "\" must be an array");
    std::vector<long long> v;
    for (const auto& x : j) {
        if (!x.is_number_integer())
            throw Error(ErrorCode::ParseError, std::string("\"") + key + "\" must contain integers");
        v.push_back(x.get<long long>());
    }
    return v;
}

inline std::optional<long long> parse_int(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    if (a == b) return std::nullopt;
    std::size_t k = a;
    if (s[k] == '-' || s[k] == '+') ++k;
    if (k == b) return std::nullopt;
    for (std::size_t m = k; m < b; ++m)
        if (!std::isdigit(static_cast<unsigned char>(s[m]))) return std::nullopt;
    try {
        return std::stoll(s.substr(a, b - a));
    } catch (const std::out_of_range&) {
        return std::nullopt;
    }
}

}  // namespace detail

// {"in_degrees": [...], "out_degrees": [...]} or {"degrees": [...]}
inline LoadedSequence parse_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [l, c] = detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw Error(ErrorCode::ParseError, detail::where(l, c) + ": invalid JSON");
    }
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "top level must be an object");
    if (j.contains("degrees")) {
        auto d = detail::int_array(j["degrees"], "degrees");
        return {validate(d, d), true};
    }
    if (!j.contains("in_degrees") || !j.contains("out_degrees"))
        throw Error(ErrorCode::ParseError, "expected \"in_degrees\" and \"out_degrees\", or \"degrees\"");
    return {validate(detail::int_array(j["in_degrees"], "in_degrees"),
                     detail::int_array(j["out_degrees"], "out_degrees")),
            false};
}

// One "in,out" row per node. Blank lines and '#' comments are skipped; a
// non-numeric first row is taken as a header.
inline LoadedSequence parse_csv(const std::string& text) {
    std::vector<long long> in, out;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    bool seen_row = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw Error(ErrorCode::ParseError, detail::where(lineno, line.size() + 1) + ": expected two comma-separated fields");
        auto x = detail::parse_int(line.substr(0, comma));
        auto rest = line.substr(comma + 1);
        if (rest.find(',') != std::string::npos)
            throw Error(ErrorCode::ParseError,
                        detail::where(lineno, comma + 2 + rest.find(',')) + ": too many fields");
        auto y = detail::parse_int(rest);
        if (!seen_row && !x && !y) {
            seen_row = true;
            continue;
        }
        seen_row = true;
        if (!x) throw Error(ErrorCode::ParseError, detail::where(lineno, 1) + ": expected an integer");
        if (!y) throw Error(ErrorCode::ParseError, detail::where(lineno, comma + 2) + ": expected an integer");
        in.push_back(*x);
        out.push_back(*y);
    }
    return {validate(in, out), false};
}

inline LoadedSequence load_sequence(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();
    auto first = text.find_first_not_of(" \t\r\n");
    const bool json = (path.size() >= 5 && path.substr(path.size() - 5) == ".json") ||
                      (first != std::string::npos && text[first] == '{');
    return json ? parse_json(text) : parse_csv(text);
}

inline std::string to_json(const BidegreeSequence& seq) {
    nlohmann::json j;
    j["in_degrees"] = seq.in_degrees();
    j["out_degrees"] = seq.out_degrees();
    return j.dump();
}

}  // namespace bidegree
