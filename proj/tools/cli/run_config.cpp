#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace finsler::cli {

namespace {

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + " is missing or has the wrong type");
    }
}

template <class T>
void maybe(const json& j, const char* key, const std::string& where, T& out) {
    if (j.contains(key)) out = get<T>(j, key, where);
}

std::map<std::string, double> number_map(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object of numbers");
    std::map<std::string, double> m;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_number()) throw ConfigError(where + "." + k + " must be a number");
        m[k] = v.get<double>();
    }
    return m;
}

ChartConfig parse_chart(const json& j) {
    only_keys(j, "chart", {"kind", "n", "mu", "shift", "L"});
    ChartConfig c;
    c.given = true;
    maybe(j, "kind", "chart", c.kind);
    maybe(j, "n", "chart", c.n);
    maybe(j, "mu", "chart", c.mu);
    maybe(j, "shift", "chart", c.shift);
    maybe(j, "L", "chart", c.L);
    if (c.kind != "euclidean" && c.kind != "mu_family")
        throw ConfigError("chart.kind must be 'euclidean' or 'mu_family'");
    if (c.n < 2 || c.n > 8) throw ConfigError("chart.n must be in 2..8");
    if (!c.shift.empty() && static_cast<int>(c.shift.size()) != c.n) throw ConfigError("chart.shift needs n entries");
    if (!c.L.empty()) {
        if (static_cast<int>(c.L.size()) != c.n) throw ConfigError("chart.L must be n x n");
        for (const auto& row : c.L)
            if (static_cast<int>(row.size()) != c.n) throw ConfigError("chart.L must be n x n");
    }
    if (c.kind == "mu_family" && (!c.shift.empty() || !c.L.empty()))
        throw ConfigError("chart.shift and chart.L apply to the euclidean chart only");
    return c;
}

MetricConfig parse_metric(const json& j) {
    only_keys(j, "metric", {"catalog", "params", "htilde", "perturb_Phi", "phi", "f", "g", "constants", "b0",
                            "solution"});
    MetricConfig m;
    const int sources = int(j.contains("catalog")) + int(j.contains("phi")) + int(j.contains("solution"));
    if (sources != 1) throw ConfigError("metric needs exactly one of 'catalog', 'phi', 'solution'");
    if (j.contains("catalog")) {
        m.source = MetricConfig::Source::Catalog;
        m.catalog = get<std::string>(j, "catalog", "metric");
        if (j.contains("params")) m.params = number_map(j.at("params"), "metric.params");
        if (j.contains("htilde")) m.htilde = get<std::string>(j, "htilde", "metric");
        maybe(j, "perturb_Phi", "metric", m.perturb_Phi);
        for (const char* k : {"f", "g", "constants", "b0"})
            if (j.contains(k)) throw ConfigError(std::string("metric.") + k + " does not apply to a catalog metric");
    } else if (j.contains("phi")) {
        m.source = MetricConfig::Source::Expression;
        m.phi = get<std::string>(j, "phi", "metric");
        maybe(j, "f", "metric", m.f);
        maybe(j, "g", "metric", m.g);
        if (j.contains("constants")) m.constants = number_map(j.at("constants"), "metric.constants");
        if (j.contains("b0")) {
            m.b0 = get<double>(j, "b0", "metric");
            if (!(m.b0 > 0.0)) throw ConfigError("metric.b0 must be positive");
        }
        for (const char* k : {"params", "htilde", "perturb_Phi"})
            if (j.contains(k)) throw ConfigError(std::string("metric.") + k + " applies to catalog metrics only");
    } else {
        m.source = MetricConfig::Source::Solution;
        m.solution = j.at("solution");
        only_keys(m.solution, "metric.solution", {"f", "g", "h", "Phi", "antideriv", "quadrature", "constants", "b0"});
        for (const char* k : {"f", "g", "h", "Phi"}) get<std::string>(m.solution, k, "metric.solution");
        if (m.solution.contains("antideriv")) {
            const json& a = m.solution.at("antideriv");
            only_keys(a, "metric.solution.antideriv", {"F", "G"});
            get<std::string>(a, "F", "metric.solution.antideriv");
            get<std::string>(a, "G", "metric.solution.antideriv");
        }
        if (m.solution.contains("quadrature"))
            only_keys(m.solution.at("quadrature"), "metric.solution.quadrature",
                      {"nodes", "tol", "abs_tol", "max_depth", "max_panels"});
        if (m.solution.contains("constants")) number_map(m.solution.at("constants"), "metric.solution.constants");
        for (const char* k : {"params", "htilde", "perturb_Phi", "f", "g", "constants", "b0"})
            if (j.contains(k)) throw ConfigError(std::string("metric.") + k + " belongs inside metric.solution");
    }
    return m;
}

GridConfig parse_grid(const json& j) {
    only_keys(j, "grid", {"b_min", "b_max", "nb", "ns", "s_frac"});
    GridConfig g;
    if (j.contains("b_min")) g.b_min = get<double>(j, "b_min", "grid");
    if (j.contains("b_max")) g.b_max = get<double>(j, "b_max", "grid");
    maybe(j, "nb", "grid", g.nb);
    maybe(j, "ns", "grid", g.ns);
    maybe(j, "s_frac", "grid", g.s_frac);
    if (g.nb < 0 || g.ns < 0) throw ConfigError("grid.nb and grid.ns must be non-negative");
    if (!(g.s_frac > 0.0 && g.s_frac < 1.0)) throw ConfigError("grid.s_frac must be in (0, 1)");
    if (g.b_min && !(*g.b_min > 0.0)) throw ConfigError("grid.b_min must be positive");
    if (g.b_min && g.b_max && !(*g.b_max >= *g.b_min)) throw ConfigError("grid.b_max must be >= grid.b_min");
    return g;
}

}  // namespace

RunConfig parse_config(const json& j, const std::string& command, const Overrides& overrides) {
    only_keys(j, "config", {"schema", "chart", "metric", "grid", "samples", "seed", "tolerance", "threads"});
    if (j.contains("schema") && j.at("schema") != kSchema)
        throw ConfigError("unsupported schema " + j.at("schema").dump() + " (expected 1)");
    RunConfig c;
    c.command = command;
    if (j.contains("chart")) c.chart = parse_chart(j.at("chart"));
    if (!j.contains("metric")) throw ConfigError("config.metric is required");
    c.metric = parse_metric(j.at("metric"));
    if (j.contains("grid")) c.grid = parse_grid(j.at("grid"));
    maybe(j, "samples", "config", c.samples);
    if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed", "config");
    if (j.contains("tolerance")) c.tolerance = get<double>(j, "tolerance", "config");
    maybe(j, "threads", "config", c.threads);

    if (overrides.seed) c.seed = *overrides.seed;
    if (overrides.tol) c.tolerance = *overrides.tol;
    if (overrides.threads) c.threads = *overrides.threads;
    if (overrides.out) c.out = *overrides.out;
    if (overrides.csv) c.csv = *overrides.csv;

    if (c.samples < 1) throw ConfigError("samples must be >= 1");
    if (c.tolerance && !(*c.tolerance > 0.0 && std::isfinite(*c.tolerance)))
        throw ConfigError("tolerance must be positive");
    if (c.threads < 1) throw ConfigError("threads must be >= 1");
    return c;
}

RunConfig load_config(const std::string& path, const std::string& command, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j, command, overrides);
}

json to_json(const RunConfig& c) {
    json j;
    j["schema"] = kSchema;
    j["command"] = c.command;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    if (c.tolerance) j["tolerance"] = *c.tolerance;
    if (c.chart.given) {
        json ch{{"kind", c.chart.kind}, {"n", c.chart.n}};
        if (c.chart.kind == "mu_family") ch["mu"] = c.chart.mu;
        if (!c.chart.shift.empty()) ch["shift"] = c.chart.shift;
        if (!c.chart.L.empty()) ch["L"] = c.chart.L;
        j["chart"] = ch;
    }
    json m;
    switch (c.metric.source) {
        case MetricConfig::Source::Catalog:
            m["catalog"] = c.metric.catalog;
            m["params"] = c.metric.params;
            if (c.metric.htilde) m["htilde"] = *c.metric.htilde;
            if (c.metric.perturb_Phi != 0.0) m["perturb_Phi"] = c.metric.perturb_Phi;
            break;
        case MetricConfig::Source::Expression:
            m["phi"] = c.metric.phi;
            m["f"] = c.metric.f;
            m["g"] = c.metric.g;
            if (!c.metric.constants.empty()) m["constants"] = c.metric.constants;
            if (std::isfinite(c.metric.b0)) m["b0"] = c.metric.b0;
            break;
        case MetricConfig::Source::Solution:
            m["solution"] = c.metric.solution;
            break;
    }
    j["metric"] = m;
    json g{{"nb", c.grid.nb}, {"ns", c.grid.ns}, {"s_frac", c.grid.s_frac}};
    if (c.grid.b_min) g["b_min"] = *c.grid.b_min;
    if (c.grid.b_max) g["b_max"] = *c.grid.b_max;
    j["grid"] = g;
    return j;
}

}  // namespace finsler::cli
