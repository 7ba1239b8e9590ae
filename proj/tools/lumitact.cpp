// lumitact command line: simulate, analyze, serve.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "lumitact/analysis.hpp"
#include "lumitact/batch.hpp"
#include "lumitact/config.hpp"
#include "lumitact/server.hpp"

namespace fs = std::filesystem;
using namespace lumitact;

namespace {

int simulate(const fs::path& config_path, const fs::path& out, std::optional<std::uint64_t> seed,
             std::optional<int> workers)
{
    ExperimentConfig config = load_config(config_path);
    config.output_dir = out;
    if (seed)
        config.base_seed = *seed;
    if (workers)
        config.workers = *workers;
    config.validate();
    const Manifest manifest = run_batch(config);
    std::size_t timeouts = 0;
    for (const auto& t : manifest.trials)
        timeouts += t.timed_out ? 1 : 0;
    std::cout << "wrote " << manifest.trials.size() << " trial logs to " << out.string();
    if (timeouts)
        std::cout << " (" << timeouts << " timed out)";
    std::cout << "\n";
    return 0;
}

int analyze_cmd(const fs::path& logs, const fs::path& out, std::optional<int> smooth,
                std::optional<double> quantile, std::optional<std::string> center, bool strict)
{
    AnalyzeOptions options;
    options.strict = strict;
    // Defaults recorded by simulate, then command-line overrides.
    if (fs::exists(logs / kManifestFile))
        options.analysis = load_manifest(logs / kManifestFile).analysis;
    if (smooth)
        options.analysis.smoothing_window = *smooth;
    if (quantile)
        options.analysis.quantile = *quantile;
    if (center)
        options.analysis.center = parse_center_mode(*center);
    if (options.analysis.smoothing_window && (*options.analysis.smoothing_window < 1
                                              || *options.analysis.smoothing_window % 2 == 0))
        throw DomainError("--smooth must be a positive odd window");
    if (!(options.analysis.quantile > 0 && options.analysis.quantile <= 1))
        throw DomainError("--quantile must lie in (0, 1]");

    const AnalysisReport report = analyze(logs, out, options);
    for (const auto& w : report.warnings)
        std::cerr << "warning: " << w << "\n";
    std::cout << "analyzed " << report.trials << " trials; reports in " << out.string() << "\n";
    return 0;
}

int serve(std::uint16_t port, const fs::path& config_path, const std::string& address)
{
    const ExperimentConfig config = load_config(config_path);
    ServerSettings settings;
    settings.address = address;
    settings.port = port;
    settings.session.scenario = config.scenario;
    settings.session.options = config.session;
    settings.session.log_dir = config.output_dir / "sessions";
    SessionServer server(settings);
    server.start();
    std::cout << "serving on ws://" << address << ":" << server.port() << "/ (logs in "
              << settings.session.log_dir->string() << ")" << std::endl;
    server.run_until_signal();
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"lumitact: light-guided tactile landing simulator and analysis"};
    app.require_subcommand(1);

    fs::path sim_config;
    fs::path sim_out;
    std::optional<std::uint64_t> sim_seed;
    std::optional<int> sim_workers;
    auto* sim = app.add_subcommand("simulate", "run a batch of synthetic trials");
    sim->add_option("--config", sim_config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sim->add_option("--out", sim_out, "output directory for logs and manifest")->required();
    sim->add_option("--seed", sim_seed, "base seed (overrides config)");
    sim->add_option("--workers", sim_workers, "worker threads (overrides config)")->check(CLI::PositiveNumber);

    fs::path an_logs;
    fs::path an_out;
    std::optional<int> an_smooth;
    std::optional<double> an_quantile;
    std::optional<std::string> an_center;
    bool an_strict = false;
    auto* an = app.add_subcommand("analyze", "compute report tables from trial logs");
    an->add_option("--logs", an_logs, "directory of trial logs")->required()->check(CLI::ExistingDirectory);
    an->add_option("--out", an_out, "report directory")->required();
    an->add_option("--smooth", an_smooth, "odd moving-average window before differentiation");
    an->add_option("--quantile", an_quantile, "containment quantile in (0, 1]");
    an->add_option("--center", an_center, "containment center")->check(CLI::IsMember({"plate", "mean"}));
    an->add_flag("--strict", an_strict, "fail on any corrupt log line");

    std::uint16_t sv_port = 8765;
    fs::path sv_config;
    std::string sv_address = "127.0.0.1";
    auto* sv = app.add_subcommand("serve", "interactive session server");
    sv->add_option("--port", sv_port, "TCP port")->required();
    sv->add_option("--config", sv_config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sv->add_option("--address", sv_address, "bind address");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim)
            return simulate(sim_config, sim_out, sim_seed, sim_workers);
        if (*an)
            return analyze_cmd(an_logs, an_out, an_smooth, an_quantile, an_center, an_strict);
        if (*sv)
            return serve(sv_port, sv_config, sv_address);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
