#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "potwell/evolution.hpp"
#include "potwell/grid.hpp"

namespace potwell {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ordered `key = value` store. Lines starting with '#' (and blank lines)
/// are comments. serialize() emits the canonical form, one entry per line;
/// parse(serialize(x)) == x, so canonical files round-trip byte-identically
/// modulo comment lines.
struct ConfigFile {
    std::vector<std::pair<std::string, std::string>> entries;

    static ConfigFile parse(const std::string& text);
    static ConfigFile load(const std::string& path);
    std::string serialize() const;
    void save(const std::string& path) const;

    const std::string* find(const std::string& key) const;
    void set(const std::string& key, const std::string& value);  // upsert, keeps order

    // Typed getters; throw ConfigError on malformed values.
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
};

/// Initial data selector, parsed from the `initial` key:
///   eigenmode:k1,k2,k3        sine mode, normalized to sup-norm 1
///   bubble:cx,cy,cz,width     radial profile (see bubble())
///   checkpoint:path           load a saved field (grid must match)
///   scaled:lambda:<inner>     lambda * (inner initial)
struct RunConfig {
    double L = 1.0;
    int M = 32;
    double mu = 2.0;
    SolverConfig solver;
    std::string initial = "eigenmode:1,1,1";
    unsigned long seed = 0;
    std::string output_dir = "out";

    // scan-lambda
    double lambda_min = 0.5;
    double lambda_max = 8.0;
    double bracket_tol = 0.05;
    int max_probes = 80;

    // ground-state
    int gs_max_iter = 400;
    double gs_tol = 1e-8;

    // picard-compare
    double picard_T = 0.01;
    int picard_nodes = 16;
    double picard_tol = 1e-10;
    int picard_max_iter = 60;

    static RunConfig from_config(const ConfigFile& cfg);  // rejects unknown keys
    ConfigFile to_config() const;
};

/// Builds the field selected by RunConfig::initial. Throws ConfigError on a
/// malformed spec, and propagates checkpoint errors.
Field build_initial_field(const RunConfig& rc);

}  // namespace potwell
