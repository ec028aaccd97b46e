#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ldps/errors.hpp"
#include "ldps/grid.hpp"
#include "ldps/presets.hpp"

namespace ldps {

/// Configuration errors carry the offending line for the CLI to print.
class ConfigError : public Error {
public:
    ConfigError(std::size_t line, const std::string& what)
        : Error("config line " + std::to_string(line) + ": " + what), line_no(line) {}
    explicit ConfigError(const std::string& what) : Error("config: " + what), line_no(0) {}
    std::size_t line_no;
};

/// Flat sectioned key-value experiment configuration:
///   [section]
///   key = value       # comment
/// Values are strings; typed accessors parse on demand.
class ExperimentConfig {
public:
    static ExperimentConfig parse(const std::string& text) {
        ExperimentConfig cfg;
        cfg.raw_ = text;
        std::istringstream in(text);
        std::string line, section;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError(line_no, "unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                if (section.empty()) throw ConfigError(line_no, "empty section name");
                continue;
            }
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(line_no, "expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError(line_no, "empty key");
            if (section.empty()) throw ConfigError(line_no, "key outside any section");
            auto& sec = cfg.values_[section];
            if (sec.count(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
            sec[key] = value;
        }
        return cfg;
    }

    const std::string& raw() const { return raw_; }

    bool has(const std::string& section, const std::string& key) const {
        auto s = values_.find(section);
        return s != values_.end() && s->second.count(key) > 0;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        auto s = values_.find(section);
        if (s == values_.end()) return fallback;
        auto k = s->second.find(key);
        return k == s->second.end() ? fallback : k->second;
    }

    std::string require_string(const std::string& section, const std::string& key) const {
        if (!has(section, key))
            throw ConfigError("missing required key [" + section + "] " + key);
        return get_string(section, key, "");
    }

    double get_double(const std::string& section, const std::string& key, double fallback) const {
        if (!has(section, key)) return fallback;
        return parse_double(section, key, get_string(section, key, ""));
    }

    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const {
        if (!has(section, key)) return fallback;
        const std::string v = get_string(section, key, "");
        try {
            std::size_t pos = 0;
            const std::int64_t out = std::stoll(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return out;
        } catch (const std::exception&) {
            throw ConfigError("[" + section + "] " + key + ": not an integer: '" + v + "'");
        }
    }

    std::vector<double> get_double_list(const std::string& section, const std::string& key,
                                        std::vector<double> fallback) const {
        if (!has(section, key)) return fallback;
        std::vector<double> out;
        std::istringstream in(get_string(section, key, ""));
        std::string item;
        while (std::getline(in, item, ',')) out.push_back(parse_double(section, key, trim(item)));
        if (out.empty()) throw ConfigError("[" + section + "] " + key + ": empty list");
        return out;
    }

    GridSpec grid(std::uint64_t seed) const {
        GridSpec g;
        g.T = get_double("grid", "T", 1.0);
        g.n_t = static_cast<std::size_t>(get_int("grid", "n_t", 50));
        g.n_x = static_cast<std::size_t>(get_int("grid", "n_x", 64));
        g.seed = seed;
        g.validate();
        return g;
    }

    std::string task_name() const { return require_string("task", "name"); }

    /// Seed resolution order: CLI flag, config [noise] seed, environment.
    /// Wall-clock seeding is not an option; absence is an error.
    std::uint64_t resolve_seed(std::optional<std::uint64_t> cli_seed,
                               std::optional<std::uint64_t> env_seed) const {
        if (cli_seed) return *cli_seed;
        if (has("noise", "seed"))
            return static_cast<std::uint64_t>(get_int("noise", "seed", 0));
        if (env_seed) return *env_seed;
        throw ConfigError("no seed given: set [noise] seed, --seed, or LDPS_SEED");
    }

    /// Structural validation shared by every task.
    void validate() const {
        const std::string task = task_name();
        static const std::vector<std::string> known = {
            "sample-noise",  "solve-spde",     "skeleton",
            "rate",          "verify-representation", "verify-laplace",
            "girsanov-check", "verify-kernel", "sweep-theorem12"};
        if (std::find(known.begin(), known.end(), task) == known.end())
            throw ConfigError("unknown task '" + task + "'");
        if (has("model", "preset")) {
            const std::string preset = get_string("model", "preset", "");
            const auto& cat = presets::catalog();
            if (std::find(cat.begin(), cat.end(), preset) == cat.end())
                throw ConfigError("unknown preset '" + preset + "'");
        }
    }

private:
    static std::string trim(const std::string& s) {
        std::size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return s.substr(b, e - b);
    }

    double parse_double(const std::string& section, const std::string& key,
                        const std::string& v) const {
        try {
            std::size_t pos = 0;
            const double out = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return out;
        } catch (const std::exception&) {
            throw ConfigError("[" + section + "] " + key + ": not a number: '" + v + "'");
        }
    }

    std::string raw_;
    std::map<std::string, std::map<std::string, std::string>> values_;
};

/// FNV-1a hash of the raw configuration text; part of the manifest so outputs
/// are traceable to the exact configuration bytes.
inline std::uint64_t config_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace ldps
