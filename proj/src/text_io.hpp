#pragma once

// Whitespace-separated record files shared by the material, stack and atom loaders.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "smwss/errors.hpp"

namespace smwss::detail {

struct Record {
    std::string file;
    int line = 0;
    std::vector<std::string> tokens;
    std::vector<int> columns;  // 1-based column of each token

    [[noreturn]] void fail(const std::string& msg, std::size_t token = 0) const {
        const int col = token < columns.size() ? columns[token] : 1;
        throw ConfigError(file + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                          msg);
    }

    double number(std::size_t i) const {
        const auto& s = tokens.at(i);
        double v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) fail("expected a number, got '" + s + "'", i);
        return v;
    }
};

inline std::vector<Record> read_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::vector<Record> out;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        Record r{path.string(), lineno, {}, {}};
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
            if (i >= raw.size()) break;
            const std::size_t start = i;
            while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
            r.tokens.push_back(raw.substr(start, i - start));
            r.columns.push_back(static_cast<int>(start) + 1);
        }
        if (!r.tokens.empty()) out.push_back(std::move(r));
    }
    return out;
}

} // namespace smwss::detail
