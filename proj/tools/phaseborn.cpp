// phaseborn: reduce classical sphere distributions to density matrices and
// check the resulting expectation identities from a JSON problem spec.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "phaseborn/cli.hpp"

namespace {

using phaseborn::cli::Command;
using phaseborn::cli::Format;

struct Options {
    std::string spec_path;
    std::string output_path;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<double> hbar;
    std::optional<double> tolerance;
    bool compare = false;
    bool timing = false;
};

void add_common(CLI::App *sub, Options &opts) {
    sub->add_option("--spec", opts.spec_path, "Problem spec (JSON)")->required();
    sub->add_option("--seed", opts.seed, "RNG seed (overrides run.seed)");
    sub->add_option("--samples", opts.samples, "Monte Carlo sample count (overrides run.samples)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--hbar", opts.hbar, "Action unit (overrides config.hbar)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tolerance", opts.tolerance, "Verification tolerance")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--output", opts.output_path, "Write the report here instead of stdout");
    sub->add_option("--format", opts.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--timing", opts.timing, "Add wall-clock duration to JSON reports");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Classical-to-quantum state reduction engine"};
    app.require_subcommand(1);
    Options opts;

    struct Entry {
        Command command;
        const char *help;
    };
    const Entry entries[] = {
        {Command::reduce, "Reduce the classical state to a density matrix"},
        {Command::expect, "Classical and quantum expectations of each observable"},
        {Command::verify, "Check the same-sample Born identity for each observable"},
        {Command::evolve, "Flow and oscillator trajectories with conservation diagnostics"},
        {Command::moments, "Validate the uniform sphere sampler"},
    };
    std::vector<std::pair<CLI::App *, Command>> subs;
    for (const auto &e : entries) {
        CLI::App *sub = app.add_subcommand(phaseborn::cli::to_string(e.command), e.help);
        add_common(sub, opts);
        if (e.command == Command::reduce) {
            sub->add_flag("--compare", opts.compare,
                          "Run the Monte Carlo reduction next to the closed form");
        }
        subs.emplace_back(sub, e.command);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? phaseborn::cli::kExitOk : phaseborn::cli::kExitOperational;
    }

    Command command = Command::reduce;
    for (const auto &[sub, cmd] : subs) {
        if (sub->parsed()) {
            command = cmd;
        }
    }

    try {
        phaseborn::cli::Overrides overrides;
        overrides.seed = opts.seed;
        overrides.samples = opts.samples;
        overrides.hbar = opts.hbar;
        overrides.tolerance = opts.tolerance;
        overrides.compare = opts.compare;

        const auto start = std::chrono::steady_clock::now();
        const auto spec = phaseborn::cli::load_spec(opts.spec_path, overrides);
        auto report = phaseborn::cli::run(command, spec);
        if (opts.timing) {
            report.document["wall_clock_seconds"] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
        const Format format = opts.format == "csv" ? Format::csv : Format::json;
        const std::string text = phaseborn::cli::render(report, format);

        if (opts.output_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(opts.output_path, std::ios::binary);
            if (!out || !(out << text)) {
                std::cerr << "error: cannot write " << opts.output_path << "\n";
                return phaseborn::cli::kExitOperational;
            }
        }
        if (report.exit_code == phaseborn::cli::kExitVerificationFailed) {
            std::cerr << "verification failed\n";
        }
        return report.exit_code;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return phaseborn::cli::kExitOperational;
    }
}
