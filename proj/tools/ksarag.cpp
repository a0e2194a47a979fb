// Command-line entry point for the two-stage occupational AI-impact
// pipeline. Subcommands mirror the run phases:
//
//   build-kb   load both knowledge bases, chunk, embed, and persist indexes
//   assess     stage-1 extraction + stage-2 scoring over the series roster
//   report     aggregate persisted assessments into CSV/JSON reports
//   run-all    build-kb + assess + report
//
// Exit codes: 0 success, 1 partial failures, 2 configuration error.

#include "ksarag/orchestrator.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonArgs {
    std::string config_path = "config.json";
    std::string backend;
    std::string fixtures;
    std::string out_dir;
    std::string series;
    bool force = false;
};

void add_common_flags(CLI::App& cmd, CommonArgs& args, bool run_flags) {
    cmd.add_option("--config", args.config_path, "Run configuration JSON file")
        ->capture_default_str();
    cmd.add_option("--out", args.out_dir, "Output directory (overrides config)");
    if (run_flags) {
        cmd.add_option("--backend", args.backend, "Generation backend: live or scripted")
            ->check(CLI::IsMember({"live", "scripted"}));
        cmd.add_option("--fixtures", args.fixtures,
                       "Fixture directory for the scripted backend (overrides config)");
        cmd.add_option("--series", args.series, "Run a single series code from the roster");
        cmd.add_flag("--force", args.force, "Re-run series whose outputs already exist");
    }
}

ksarag::orchestrator::RunConfig make_config(const CommonArgs& args) {
    ksarag::orchestrator::RunConfig cfg = ksarag::orchestrator::load_config(args.config_path);
    ksarag::orchestrator::Overrides overrides;
    if (!args.backend.empty()) {
        overrides.backend = args.backend == "live"
                                ? ksarag::orchestrator::BackendKind::Live
                                : ksarag::orchestrator::BackendKind::Scripted;
    }
    if (!args.fixtures.empty()) overrides.fixture_dir = args.fixtures;
    if (!args.out_dir.empty()) overrides.output_dir = args.out_dir;
    ksarag::orchestrator::apply_overrides(cfg, overrides);
    return cfg;
}

std::optional<std::string> series_filter(const CommonArgs& args) {
    if (args.series.empty()) return std::nullopt;
    return args.series;
}

int print_outcomes(const ksarag::orchestrator::AssessResult& result) {
    std::size_t ok = 0;
    std::size_t skipped = 0;
    std::size_t failed = 0;
    for (const auto& o : result.outcomes) {
        std::cout << o.series_code << ": "
                  << ksarag::orchestrator::status_name(o.status);
        if (!o.error.empty()) std::cout << " (" << o.error << ")";
        std::cout << "\n";
        switch (o.status) {
            case ksarag::orchestrator::SeriesStatus::Ok: ++ok; break;
            case ksarag::orchestrator::SeriesStatus::Skipped: ++skipped; break;
            default: ++failed; break;
        }
    }
    std::cout << result.outcomes.size() << " series: " << ok << " ok, " << skipped
              << " skipped, " << failed << " failed\n";
    return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-stage retrieval-augmented occupational AI-impact scoring"};
    app.require_subcommand(1);

    CommonArgs build_args;
    CommonArgs assess_args;
    CommonArgs report_args;
    CommonArgs all_args;

    CLI::App* cmd_build = app.add_subcommand("build-kb", "Build knowledge-base indexes");
    add_common_flags(*cmd_build, build_args, false);
    CLI::App* cmd_assess =
        app.add_subcommand("assess", "Run extraction and impact scoring over the roster");
    add_common_flags(*cmd_assess, assess_args, true);
    CLI::App* cmd_report = app.add_subcommand("report", "Emit statistics and rankings");
    add_common_flags(*cmd_report, report_args, false);
    CLI::App* cmd_all = app.add_subcommand("run-all", "build-kb, assess, report");
    add_common_flags(*cmd_all, all_args, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_build->parsed()) {
            ksarag::orchestrator::Runner runner(make_config(build_args));
            runner.build_kb();
            std::cout << "knowledge bases built under "
                      << runner.config().output_dir.string() << "/kb\n";
            return 0;
        }
        if (cmd_assess->parsed()) {
            ksarag::orchestrator::Runner runner(make_config(assess_args));
            auto result = runner.assess(assess_args.force, series_filter(assess_args));
            return print_outcomes(result);
        }
        if (cmd_report->parsed()) {
            ksarag::orchestrator::Runner runner(make_config(report_args));
            runner.report();
            std::cout << "report written under "
                      << runner.config().output_dir.string() << "/report\n";
            return 0;
        }
        if (cmd_all->parsed()) {
            ksarag::orchestrator::Runner runner(make_config(all_args));
            auto result = runner.run_all(all_args.force, series_filter(all_args));
            int code = print_outcomes(result);
            std::cout << "report written under "
                      << runner.config().output_dir.string() << "/report\n";
            return code;
        }
    } catch (const ksarag::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const ksarag::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
