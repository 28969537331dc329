#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace finsler::cli {

using json = nlohmann::json;

inline constexpr int kSchema = 1;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ChartConfig {
    std::string kind = "euclidean";  // euclidean | mu_family
    int n = 3;
    double mu = 0.0;
    std::vector<double> shift;
    std::vector<std::vector<double>> L;
    bool given = false;  // false: use the catalog hint
};

struct MetricConfig {
    enum class Source { Catalog, Expression, Solution };
    Source source = Source::Catalog;

    std::string catalog;
    std::map<std::string, double> params;
    std::optional<std::string> htilde;
    double perturb_Phi = 0.0;

    std::string phi;  // in b2, s
    std::string f = "0", g = "0";
    std::map<std::string, double> constants;
    double b0 = std::numeric_limits<double>::infinity();

    json solution;
};

struct GridConfig {
    std::optional<double> b_min, b_max;
    int nb = 10;
    int ns = 10;
    double s_frac = 0.9;
};

struct RunConfig {
    std::string command;
    ChartConfig chart;
    MetricConfig metric;
    GridConfig grid;
    int samples = 20;
    std::uint64_t seed = 1;
    std::optional<double> tolerance;
    int threads = 1;
    std::string out;
    std::string csv;
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<std::string> out;
    std::optional<std::string> csv;
    std::optional<int> threads;
};

/// Throws ConfigError on unknown keys, missing or ill-typed values, more than
/// one metric source, samples < 1, tolerance <= 0 or threads < 1.
RunConfig parse_config(const json& j, const std::string& command, const Overrides& overrides = {});
RunConfig load_config(const std::string& path, const std::string& command, const Overrides& overrides = {});

/// The effective configuration, as echoed in reports.
json to_json(const RunConfig& c);

}  // namespace finsler::cli
