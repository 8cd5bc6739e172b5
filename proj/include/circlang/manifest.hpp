// Run manifests and table export.  Manifests serialize to key-sorted JSON
// (nlohmann::json's default object ordering) with 17-significant-digit
// floats; CSV output is RFC-4180-style, UTF-8, LF line endings.
#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace circlang::manifest {

inline constexpr const char* version = "0.1.0";

struct RunManifest {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    double wall_time_s = 0.0;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["command"] = command;
        j["parameters"] = parameters;
        j["seed"] = seed;
        j["versions"] = {{"circlang", version}};
        j["outputs"] = outputs;
        j["wall_time_s"] = wall_time_s;
        return j;
    }

    std::string to_string() const { return to_json().dump(2); }
};

// Seed precedence: explicit flag > CIRCLANG_SEED > 0.
inline std::uint64_t resolve_seed(bool flag_given, std::uint64_t flag_value) {
    if (flag_given) return flag_value;
    if (const char* env = std::getenv("CIRCLANG_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return static_cast<std::uint64_t>(v);
    }
    return 0;
}

// RFC-4180-style field quoting (always-quote keeps the writer trivial and valid).
inline std::string csv_field(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void write(std::ostream& os) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            os << (i ? "," : "") << csv_field(header[i]);
        os << "\n";
        char buf[64];
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g", row[i]);
                os << (i ? "," : "") << buf;
            }
            os << "\n";
        }
    }
};

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace circlang::manifest
