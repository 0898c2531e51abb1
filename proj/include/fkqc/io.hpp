#pragma once

// Serialization helpers for the CLI: shortest round-trip decimal floats, CSV
// with LF endings, GoldenNumber as an exact {a, b} pair plus a decimal
// approximation, and the run manifest written next to every output.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fkqc/golden.hpp"

namespace fkqc::io {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("parse_double: bad literal '" + std::string(s) + "'");
    return v;
}

inline nlohmann::json golden_to_json(const GoldenNumber& g) {
    return nlohmann::json{{"a", g.a()}, {"b", g.b()}, {"approx", g.value()}};
}

inline nlohmann::json golden_to_json(const GoldenRational& g) {
    return nlohmann::json{
        {"a", g.num.a()}, {"b", g.num.b()}, {"den", g.den}, {"approx", g.value()}};
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
        columns_ = header.size();
    }

    void row(const std::vector<std::string>& fields) {
        if (fields.size() != columns_) throw std::invalid_argument("CsvWriter: column count mismatch");
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
    std::size_t columns_;
};

struct RunManifest {
    std::string command;
    nlohmann::json parameters;
    std::uint64_t seed = 0;
    std::string version;
    double timing_ms = 0.0;
    std::vector<std::string> outputs;
    nlohmann::json results;

    nlohmann::json to_json() const {
        return nlohmann::json{{"command", command}, {"parameters", parameters},
                              {"seed", seed},       {"version", version},
                              {"timing_ms", timing_ms}, {"outputs", outputs},
                              {"results", results}};
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("RunManifest: cannot open " + path);
        out << to_json().dump(2) << '\n';
    }
};

}  // namespace fkqc::io
