#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>

#include "henon/cli.hpp"
#include "henon/continuation.hpp"
#include "henon/solver.hpp"

namespace {

struct Flags {
    std::optional<int> N, M;
    std::optional<double> s, alpha, p, L, tol, s_end, ds_max;
    std::optional<std::string> out, config;
};

void add_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--N", f.N, "dimension");
    cmd->add_option("--s", f.s, "fractional order (branch: starting s)");
    cmd->add_option("--alpha", f.alpha, "Henon weight exponent");
    cmd->add_option("--p", f.p, "nonlinearity exponent (default critical; branch default 3)");
    cmd->add_option("--L", f.L, "half-width of the log grid");
    cmd->add_option("--M", f.M, "node count (odd)");
    cmd->add_option("--tol", f.tol, "solver residual tolerance");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--config", f.config, "JSON config file (flags override)");
}

void add_branch_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--s-end", f.s_end, "final s of the branch");
    cmd->add_option("--ds-max", f.ds_max, "largest continuation step");
}

henon::RunConfig build(const std::string& experiment, const Flags& f) {
    henon::RunConfig c = f.config ? henon::load_config(*f.config) : henon::RunConfig{};
    c.experiment = experiment;
    if (f.N) c.N = *f.N;
    if (f.M) c.M = *f.M;
    if (f.s) c.s = *f.s;
    if (f.alpha) c.alpha = *f.alpha;
    if (f.p) c.p = *f.p;
    if (f.L) c.L = *f.L;
    if (f.tol) c.solve_tol = *f.tol;
    if (f.s_end) c.s_end = *f.s_end;
    if (f.ds_max) c.ds_max = *f.ds_max;
    if (f.out) c.out = *f.out;
    if (const char* cache = std::getenv("HENON_LAB_CACHE"); cache && *cache) c.cache_dir = cache;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical lab for the transformed critical fractional Henon problem"};
    app.set_version_flag("--version", henon::kVersion);
    app.require_subcommand(1);
    Flags flags;
    const std::pair<const char*, const char*> commands[] = {
        {"constants", "critical exponent, Hardy constant and its integral check"},
        {"kernel", "kernel table, singular fit and cache"},
        {"solve", "ground state on the log grid"},
        {"spectrum", "ground state plus parity-resolved linearized spectrum"},
        {"branch", "continuation in s at fixed p"},
        {"report", "summarize *_checks.csv in --out"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* cmd = app.add_subcommand(name, help);
        add_flags(cmd, flags);
        if (std::string(name) == "branch") add_branch_flags(cmd, flags);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::printf("%s\n", henon::error_json("usage", e.what()).c_str());
        return 2;
    }
    const std::string experiment = app.get_subcommands().front()->get_name();
    try {
        const henon::RunConfig config = build(experiment, flags);
        return henon::run_experiment(config);
    } catch (const henon::ConfigError& e) {
        std::printf("%s\n", henon::error_json("config", e.what()).c_str());
        return 2;
    } catch (const henon::ParamsError& e) {
        std::printf("%s\n", henon::error_json("params", e.what()).c_str());
        return 2;
    } catch (const henon::MonitorViolation& e) {
        std::printf("%s\n", henon::error_json("monitor", e.what()).c_str());
        return 3;
    } catch (const henon::SolveError& e) {
        std::printf("%s\n", henon::error_json("solver", std::string(e.what()) + ": " + e.diagnostics).c_str());
        return 3;
    } catch (const std::exception& e) {
        std::printf("%s\n", henon::error_json("runtime", e.what()).c_str());
        return 1;
    }
}
