#pragma once

// Line-delimited Hilbert class polynomial cache:
//   {"delta": -15, "coeffs": ["-121287375", "191025"]}
// a_0 first, monic leading coefficient implied, integers as decimal strings.
// Writers replace the whole file through a temporary plus rename, so readers only
// ever observe complete records.

#include <gmpxx.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <unistd.h>

#include "smprod/error.hpp"
#include "smprod/hcp.hpp"
#include "smprod/qforms.hpp"

namespace smprod {

inline constexpr const char* cache_env_var = "SMPROD_CACHE";

inline nlohmann::ordered_json to_json(const HilbertClassPoly& p) {
    nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
    for (const auto& c : p.coeffs) coeffs.push_back(c.get_str());
    nlohmann::ordered_json j;
    j["delta"] = p.delta.value();
    j["coeffs"] = std::move(coeffs);
    return j;
}

/// Parses one record; any structural problem is a corrupt entry.
inline HilbertClassPoly hcp_from_json(const nlohmann::json& j) {
    try {
        const long delta = j.at("delta").get<long>();
        if (!Discriminant::is_valid(delta)) throw corrupt_cache_entry("invalid delta " + std::to_string(delta));
        HilbertClassPoly p{Discriminant(delta), {}};
        for (const auto& c : j.at("coeffs")) {
            const auto text = c.get<std::string>();
            mpz_class value;
            if (text.empty() || value.set_str(text, 10) != 0) {
                throw corrupt_cache_entry("coefficient is not a decimal integer: " + text);
            }
            p.coeffs.push_back(std::move(value));
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw corrupt_cache_entry(std::string("malformed cache record: ") + e.what());
    }
}

class HcpCache {
public:
    explicit HcpCache(std::filesystem::path path) : path_(std::move(path)) {}

    /// Cache at $SMPROD_CACHE, if set.
    static std::optional<HcpCache> from_environment() {
        if (const char* p = std::getenv(cache_env_var); p != nullptr && *p != '\0') return HcpCache(p);
        return std::nullopt;
    }

    const std::filesystem::path& path() const { return path_; }

    /// Returns the validated record for `d`; throws cache_miss or corrupt_cache_entry.
    HilbertClassPoly load(Discriminant d) const {
        const auto records = read_all();
        const auto it = records.find(d.value());
        if (it == records.end()) throw cache_miss("no cached polynomial for D=" + std::to_string(d.value()));
        HilbertClassPoly p = hcp_from_json(it->second);
        const HcpVerification v = verify_hilbert_poly(p);
        if (!v.ok()) {
            throw corrupt_cache_entry("cached polynomial for D=" + std::to_string(d.value()) +
                                      " fails verification (degree " + (v.degree_matches ? "ok" : "wrong") +
                                      ", roots " + (v.roots_vanish ? "ok" : "wrong") + ")");
        }
        return p;
    }

    void store(const HilbertClassPoly& p) const {
        auto records = read_all();
        records[p.delta.value()] = to_json(p);
        write_all(records);
    }

    HilbertClassPoly get_or_compute(Discriminant d) const {
        try {
            return load(d);
        } catch (const cache_miss&) {
            HilbertClassPoly p = hilbert_class_poly(d);
            store(p);
            return p;
        }
    }

private:
    // Keyed by delta; std::map keeps the file sorted by delta ascending.
    std::map<long, nlohmann::json> read_all() const {
        std::map<long, nlohmann::json> out;
        std::ifstream in(path_);
        if (!in) return out;
        std::string line;
        for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object() || !j.contains("delta") || !j["delta"].is_number_integer()) {
                throw corrupt_cache_entry(path_.string() + ":" + std::to_string(lineno) + ": unreadable record");
            }
            const long delta = j["delta"].get<long>();
            out[delta] = std::move(j);
        }
        return out;
    }

    void write_all(const std::map<long, nlohmann::json>& records) const {
        if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
        auto tmp = path_;
        tmp += ".tmp." + std::to_string(::getpid());
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out) throw error("cannot write cache file " + tmp.string());
            for (const auto& [delta, j] : records) {
                nlohmann::ordered_json rec;
                rec["delta"] = delta;
                rec["coeffs"] = j.at("coeffs");
                out << rec.dump() << '\n';
            }
            if (!out.flush()) throw error("cannot write cache file " + tmp.string());
        }
        std::filesystem::rename(tmp, path_);
    }

    std::filesystem::path path_;
};

}  // namespace smprod
