#include "qprospect_cli/result.hpp"
#include "qprospect_cli/runner.hpp"
#include "qprospect_cli/scenario.hpp"

#include <qprospect/numeric.hpp>
#include <qprospect/selfcheck.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct Options {
    std::string scenario;
    std::optional<std::string> format;
    std::optional<std::uint64_t> seed;
    std::string out;
};

void apply_env_tolerance() {
    const char* raw = std::getenv("QPROSPECT_TOL");
    if (raw == nullptr || *raw == '\0') return;
    char* end = nullptr;
    const double tol = std::strtod(raw, &end);
    if (end == raw || *end != '\0') {
        throw qprospect::ValidationError("tolerance", std::string("QPROSPECT_TOL is not a number: '") + raw + "'");
    }
    try {
        qprospect::tolerance::set_operator_tolerance(tol);
    } catch (const std::exception& e) {
        throw qprospect::ValidationError("tolerance", std::string("QPROSPECT_TOL: ") + e.what());
    }
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw qprospect::ValidationError("writable file", "cannot open output file '" + out + "'");
    f << text;
    if (!f.flush()) throw qprospect::ValidationError("writable file", "failed writing '" + out + "'");
}

int run_selftest(const Options& o) {
    using namespace qprospect;
    const auto results = selfcheck::run_all();
    bool all = true;
    for (const auto& r : results) all = all && r.passed;

    const cli::Format format = cli::parse_format(o.format.value_or("table"));
    if (format == cli::Format::Table) {
        std::ostringstream os;
        all = selfcheck::print_report(results, os);
        emit(os.str(), o.out);
    } else {
        cli::ResultTable t;
        t.command = "selftest";
        t.tolerance = tolerance::operator_tolerance();
        for (const auto& r : results) {
            t.add("criterion " + std::to_string(r.id) + " " + r.name, r.passed ? 1.0 : 0.0, "selftest");
        }
        emit(cli::render(t, format), o.out);
    }
    return all ? kExitOk : kExitNumeric;
}

int run_scenario_command(const std::string& command, const Options& o) {
    using namespace qprospect::cli;
    const Scenario s = load_scenario(o.scenario);
    const Format format = parse_format(o.format ? *o.format : s.settings.format.value_or("table"));
    const std::uint64_t seed = o.seed ? *o.seed : s.settings.seed.value_or(0);
    const ResultTable table = run(command, s, seed);
    emit(render(table, format), o.out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qprospect: quantum probabilities of separate, consecutive and composite events"};
    app.require_subcommand(1);
    app.set_version_flag("--version", QPROSPECT_VERSION);

    Options opts;
    auto common = [&](CLI::App* sub, bool needs_scenario) {
        auto* sc = sub->add_option("--scenario", opts.scenario, "scenario file (JSON)");
        if (needs_scenario) sc->required()->check(CLI::ExistingFile);
        sub->add_option("--format", opts.format, "table, csv or json")
            ->check(CLI::IsMember({"table", "csv", "json"}));
        sub->add_option("--seed", opts.seed, "seed for Monte Carlo draws");
        sub->add_option("--out", opts.out, "write output to this file instead of stdout");
    };
    for (const auto& name : qprospect::cli::scenario_commands()) {
        common(app.add_subcommand(name, "run the " + name + " scenario directive"), true);
    }
    common(app.add_subcommand("selftest", "run the acceptance criteria"), false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        apply_env_tolerance();
        const std::string command = app.get_subcommands().front()->get_name();
        if (command == "selftest") return run_selftest(opts);
        return run_scenario_command(command, opts);
    } catch (const qprospect::ValidationError& e) {
        std::cerr << "qprospect: validation error [" << e.constraint() << "]: " << e.what() << "\n";
        return kExitValidation;
    } catch (const qprospect::NumericError& e) {
        std::cerr << "qprospect: numeric contract violated: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "qprospect: " << e.what() << "\n";
        return 1;
    }
}
