// finsler: verify | pde-check | solve | catalog
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 config or usage error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace finsler::cli;

namespace {

void emit(const json& j, const std::string& path, std::ostream& fallback) {
    const std::string text = j.dump(2) + "\n";
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Douglas curvature checks for general (alpha, beta)-metrics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version());

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<int> threads;
    std::string out, csv;
    std::optional<std::string> name;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--seed", seed, "sampler seed");
        sub->add_option("--tol", tol, "tolerance of the main check");
        sub->add_option("--out", out, "write the JSON report here instead of stdout");
        sub->add_option("--threads", threads, "worker threads");
    };
    CLI::App* verify = app.add_subcommand("verify", "Douglas tensor by the generic and closed-form routes");
    CLI::App* pde = app.add_subcommand("pde-check", "PDE and identity residuals on a (b, s) grid");
    CLI::App* solve = app.add_subcommand("solve", "sample table of the reconstructed phi");
    CLI::App* cat = app.add_subcommand("catalog", "list the built-in solutions");
    add_common(verify);
    add_common(pde);
    add_common(solve);
    solve->add_option("--csv", csv, "write the sample table here (default stdout)");
    cat->add_option("--name", name, "show one entry with its resolved parameters");
    cat->add_option("--out", out, "write the listing here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::ostream* report_stream = &std::cout;
    try {
        if (cat->parsed()) {
            emit(cmd_catalog(name), out, std::cout);
            return 0;
        }
        Overrides o{seed, tol, {}, {}, threads};
        CLI::App* sub = verify->parsed() ? verify : pde->parsed() ? pde : solve;
        const std::string command = sub->get_name();
        const RunConfig c = load_config(config_path, command, o);

        Outcome result;
        if (sub == solve) {
            if (csv.empty()) {
                report_stream = &std::cerr;
                result = cmd_solve(c, std::cout);
            } else {
                std::ofstream table(csv);
                if (!table) throw ConfigError("cannot write '" + csv + "'");
                result = cmd_solve(c, table);
            }
        } else {
            result = sub == verify ? cmd_verify(c) : cmd_pde_check(c);
        }
        emit(result.report, out, *report_stream);
        return result.exit_code;
    } catch (const ConfigError& e) {
        try {
            emit(error_body("config", e.what()), out, *report_stream);
        } catch (const std::exception&) {
            std::cerr << e.what() << "\n";
        }
        return 2;
    } catch (const std::exception& e) {
        try {
            emit(error_body("runtime", e.what()), out, *report_stream);
        } catch (const std::exception&) {
            std::cerr << e.what() << "\n";
        }
        return 1;
    }
}
