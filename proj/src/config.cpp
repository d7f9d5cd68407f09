#include "potwell/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "potwell/io.hpp"

namespace potwell {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& raw) {
    try {
        std::size_t pos = 0;
        double v = std::stod(raw, &pos);
        if (pos != raw.size()) throw ConfigError("config: trailing junk in `" + key + "`");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("config: `" + key + "` is not a number: " + raw);
    }
}

int parse_int(const std::string& key, const std::string& raw) {
    try {
        std::size_t pos = 0;
        long v = std::stol(raw, &pos);
        if (pos != raw.size()) throw ConfigError("config: trailing junk in `" + key + "`");
        return static_cast<int>(v);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("config: `" + key + "` is not an integer: " + raw);
    }
}

bool parse_bool(const std::string& key, const std::string& raw) {
    if (raw == "true" || raw == "1" || raw == "on" || raw == "yes") return true;
    if (raw == "false" || raw == "0" || raw == "off" || raw == "no") return false;
    throw ConfigError("config: `" + key + "` is not a boolean: " + raw);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not `key = value`: " + t);
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config: empty key on line " + std::to_string(lineno));
        cfg.set(key, value);
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string ConfigFile::serialize() const {
    std::string out;
    for (const auto& [k, v] : entries) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

void ConfigFile::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("config: cannot write " + path);
    out << serialize();
}

const std::string* ConfigFile::find(const std::string& key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return &v;
    return nullptr;
}

void ConfigFile::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries) {
        if (k == key) {
            v = value;
            return;
        }
    }
    entries.emplace_back(key, value);
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
    const std::string* raw = find(key);
    return raw ? parse_double(key, *raw) : fallback;
}

int ConfigFile::get_int(const std::string& key, int fallback) const {
    const std::string* raw = find(key);
    return raw ? parse_int(key, *raw) : fallback;
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
    const std::string* raw = find(key);
    return raw ? parse_bool(key, *raw) : fallback;
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
    const std::string* raw = find(key);
    return raw ? *raw : fallback;
}

RunConfig RunConfig::from_config(const ConfigFile& cfg) {
    static const std::set<std::string> known = {
        "L", "M", "mu", "dt_init", "dt_min", "dt_max", "safety", "t_end",
        "blowup_factor", "record_every", "nonlinearity_on", "tol_step", "initial",
        "seed", "output_dir", "lambda_min", "lambda_max", "bracket_tol", "max_probes",
        "gs_max_iter", "gs_tol", "picard_T", "picard_nodes", "picard_tol",
        "picard_max_iter"};
    for (const auto& [k, v] : cfg.entries)
        if (!known.count(k)) throw ConfigError("config: unknown key `" + k + "`");

    RunConfig rc;
    rc.L = cfg.get_double("L", rc.L);
    rc.M = cfg.get_int("M", rc.M);
    rc.mu = cfg.get_double("mu", rc.mu);
    rc.solver.dt_init = cfg.get_double("dt_init", rc.solver.dt_init);
    rc.solver.dt_min = cfg.get_double("dt_min", rc.solver.dt_min);
    rc.solver.dt_max = cfg.get_double("dt_max", rc.solver.dt_max);
    rc.solver.safety = cfg.get_double("safety", rc.solver.safety);
    rc.solver.t_end = cfg.get_double("t_end", rc.solver.t_end);
    rc.solver.blowup_factor = cfg.get_double("blowup_factor", rc.solver.blowup_factor);
    rc.solver.record_every = cfg.get_int("record_every", rc.solver.record_every);
    rc.solver.nonlinearity_on = cfg.get_bool("nonlinearity_on", rc.solver.nonlinearity_on);
    rc.solver.tol_step = cfg.get_double("tol_step", rc.solver.tol_step);
    rc.initial = cfg.get_string("initial", rc.initial);
    rc.seed = static_cast<unsigned long>(cfg.get_int("seed", static_cast<int>(rc.seed)));
    rc.output_dir = cfg.get_string("output_dir", rc.output_dir);
    rc.lambda_min = cfg.get_double("lambda_min", rc.lambda_min);
    rc.lambda_max = cfg.get_double("lambda_max", rc.lambda_max);
    rc.bracket_tol = cfg.get_double("bracket_tol", rc.bracket_tol);
    rc.max_probes = cfg.get_int("max_probes", rc.max_probes);
    rc.gs_max_iter = cfg.get_int("gs_max_iter", rc.gs_max_iter);
    rc.gs_tol = cfg.get_double("gs_tol", rc.gs_tol);
    rc.picard_T = cfg.get_double("picard_T", rc.picard_T);
    rc.picard_nodes = cfg.get_int("picard_nodes", rc.picard_nodes);
    rc.picard_tol = cfg.get_double("picard_tol", rc.picard_tol);
    rc.picard_max_iter = cfg.get_int("picard_max_iter", rc.picard_max_iter);

    if (!(rc.L > 0.0)) throw ConfigError("config: L must be positive");
    if (rc.M < 2) throw ConfigError("config: M must be at least 2");
    if (!(rc.mu > 0.0 && rc.mu < 3.0)) throw ConfigError("config: mu must lie in (0,3)");
    try {
        rc.solver.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return rc;
}

ConfigFile RunConfig::to_config() const {
    ConfigFile cfg;
    cfg.set("L", format_double(L));
    cfg.set("M", std::to_string(M));
    cfg.set("mu", format_double(mu));
    cfg.set("dt_init", format_double(solver.dt_init));
    cfg.set("dt_min", format_double(solver.dt_min));
    cfg.set("dt_max", format_double(solver.dt_max));
    cfg.set("safety", format_double(solver.safety));
    cfg.set("t_end", format_double(solver.t_end));
    cfg.set("blowup_factor", format_double(solver.blowup_factor));
    cfg.set("record_every", std::to_string(solver.record_every));
    cfg.set("nonlinearity_on", solver.nonlinearity_on ? "true" : "false");
    cfg.set("tol_step", format_double(solver.tol_step));
    cfg.set("initial", initial);
    cfg.set("seed", std::to_string(seed));
    cfg.set("output_dir", output_dir);
    cfg.set("lambda_min", format_double(lambda_min));
    cfg.set("lambda_max", format_double(lambda_max));
    cfg.set("bracket_tol", format_double(bracket_tol));
    cfg.set("max_probes", std::to_string(max_probes));
    cfg.set("gs_max_iter", std::to_string(gs_max_iter));
    cfg.set("gs_tol", format_double(gs_tol));
    cfg.set("picard_T", format_double(picard_T));
    cfg.set("picard_nodes", std::to_string(picard_nodes));
    cfg.set("picard_tol", format_double(picard_tol));
    cfg.set("picard_max_iter", std::to_string(picard_max_iter));
    return cfg;
}

namespace {

Field parse_initial_spec(const std::string& spec, const BoxDomain& domain, double mu);

Field initial_eigenmode(const std::string& args, const BoxDomain& domain) {
    const auto parts = split(args, ',');
    if (parts.size() != 3) throw ConfigError("config: eigenmode wants k1,k2,k3");
    const int k1 = parse_int("initial", trim(parts[0]));
    const int k2 = parse_int("initial", trim(parts[1]));
    const int k3 = parse_int("initial", trim(parts[2]));
    Field u = eigenmode(domain, k1, k2, k3);
    const double m = norm(u, std::numeric_limits<double>::infinity());
    return scaled(u, 1.0 / m);  // sup-norm 1
}

Field initial_bubble(const std::string& args, const BoxDomain& domain) {
    const auto parts = split(args, ',');
    if (parts.size() != 4) throw ConfigError("config: bubble wants cx,cy,cz,width");
    const std::array<double, 3> center{parse_double("initial", trim(parts[0])),
                                       parse_double("initial", trim(parts[1])),
                                       parse_double("initial", trim(parts[2]))};
    const double width = parse_double("initial", trim(parts[3]));
    return bubble(domain, center, width);
}

Field initial_checkpoint(const std::string& path, const BoxDomain& domain) {
    Checkpoint ck = read_checkpoint(path);
    if (ck.u.domain != domain)
        throw ConfigError("config: checkpoint grid does not match L/M");
    return ck.u;
}

Field parse_initial_spec(const std::string& spec, const BoxDomain& domain, double mu) {
    const std::size_t colon = spec.find(':');
    const std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (kind == "eigenmode") return initial_eigenmode(rest, domain);
    if (kind == "bubble") return initial_bubble(rest, domain);
    if (kind == "checkpoint") return initial_checkpoint(rest, domain);
    if (kind == "scaled") {
        const std::size_t c2 = rest.find(':');
        if (c2 == std::string::npos)
            throw ConfigError("config: scaled wants lambda:<inner initial>");
        const double lam = parse_double("initial", trim(rest.substr(0, c2)));
        Field inner = parse_initial_spec(rest.substr(c2 + 1), domain, mu);
        return scaled(inner, lam);
    }
    throw ConfigError("config: unknown initial kind `" + kind + "`");
}

}  // namespace

Field build_initial_field(const RunConfig& rc) {
    const BoxDomain domain(rc.L, rc.M);
    return parse_initial_spec(rc.initial, domain, rc.mu);
}

}  // namespace potwell
