#include <sstream>

#include "commands.hpp"
#include "doctest.h"

using namespace finsler::cli;

namespace {

RunConfig cfg(const char* text, const std::string& command = "verify") { return parse_config(json::parse(text), command); }

}  // namespace

TEST_CASE("run config validation") {
    CHECK_THROWS_AS(cfg(R"({"metric": {"catalog": "funk"}, "samples": 0})"), ConfigError);
    CHECK_THROWS_AS(cfg(R"({"metric": {"catalog": "funk"}, "tolerance": -1})"), ConfigError);
    CHECK_THROWS_AS(cfg(R"({"metric": {"catalog": "funk", "phi": "1"}})"), ConfigError);
    CHECK_THROWS_AS(cfg(R"({"metric": {}})"), ConfigError);
    CHECK_THROWS_AS(cfg(R"({"samples": 3})"), ConfigError);
    CHECK_THROWS_AS(cfg(R"({"metric": {"catalog": "funk"}, "colour": 1})"), ConfigError);
    CHECK_THROWS_AS(cfg(R"({"schema": 2, "metric": {"catalog": "funk"}})"), ConfigError);
    CHECK_THROWS_AS(cfg(R"({"metric": {"catalog": "funk"}, "chart": {"kind": "sphere"}})"), ConfigError);
    CHECK_THROWS_AS(cfg(R"({"metric": {"catalog": "funk"}, "chart": {"n": 3, "shift": [1]}})"), ConfigError);
    CHECK_THROWS_AS(cfg(R"({"metric": {"solution": {"f": "0", "g": "0", "h": "0"}}})"), ConfigError);
    CHECK_THROWS_AS(cfg(R"({"metric": {"phi": "1", "params": {"a": 1}}})"), ConfigError);

    const RunConfig c = parse_config(json::parse(R"({"metric": {"catalog": "funk"}, "seed": 4})"), "verify",
                                     Overrides{9, 1e-5, {}, {}, 2});
    CHECK(c.seed == 9);
    CHECK(*c.tolerance == 1e-5);
    CHECK(c.threads == 2);
}

TEST_CASE("config errors surface from the metric") {
    CHECK_THROWS_AS(cmd_verify(cfg(R"({"metric": {"catalog": "funky"}})")), ConfigError);
    CHECK_THROWS_AS(cmd_pde_check(cfg(R"({"metric": {"phi": "1 + q"}})", "pde-check")), ConfigError);
    CHECK_THROWS_AS(cmd_pde_check(cfg(R"({"metric": {"catalog": "funk"}, "grid": {"b_max": 1.5}})", "pde-check")),
                    ConfigError);
    std::ostringstream csv;
    CHECK_THROWS_AS(cmd_solve(cfg(R"({"metric": {"phi": "1 + s"}})", "solve"), csv), ConfigError);
}

TEST_CASE("reports are deterministic and thread independent") {
    const char* text = R"({"metric": {"catalog": "example2"}, "samples": 6, "seed": 11})";
    RunConfig one = cfg(text);
    RunConfig four = cfg(text);
    four.threads = 4;
    Outcome a = cmd_verify(one), b = cmd_verify(four), c = cmd_verify(one);
    CHECK(a.exit_code == 0);
    CHECK(a.report["checks"] == b.report["checks"]);
    a.report.erase("wall_time_s");
    c.report.erase("wall_time_s");
    CHECK(a.report.dump() == c.report.dump());
}

TEST_CASE("solve table") {
    std::ostringstream csv;
    const Outcome o = cmd_solve(
        cfg(R"j({"metric": {"solution": {"f": "0", "g": "0", "h": "0", "Phi": "(1 + t)*sqrt(t)"}},
                "grid": {"nb": 3, "ns": 2}})j",
            "solve"),
        csv);
    CHECK(o.exit_code == 0);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "b2,s,phi,phi_minus_s_phi2,eta,Phi_eta,margin1,margin2,error");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::istringstream fields(line);
        std::string b2, s, phi;
        std::getline(fields, b2, ',');
        std::getline(fields, s, ',');
        std::getline(fields, phi, ',');
        const double B = std::stod(b2), S = std::stod(s);
        CHECK(std::stod(phi) == doctest::Approx(1.0 + B + S * S).epsilon(1e-12));
    }
    CHECK(rows == 6);
}

TEST_CASE("catalog listing json") {
    const json all = cmd_catalog(std::nullopt);
    CHECK(all["schema"] == 1);
    CHECK(all["entries"].size() >= 11);
    const json one = cmd_catalog(std::string("berwald"));
    CHECK(one["entry"]["chart"] == "mu-family, mu = -1");
    CHECK_THROWS_AS(cmd_catalog(std::string("nope")), ConfigError);
}
