#include "henon/cli.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "henon/continuation.hpp"
#include "henon/kernel.hpp"
#include "henon/solver.hpp"
#include "henon/spectrum.hpp"
#include "henon/transform.hpp"

namespace henon {

using json = nlohmann::ordered_json;

namespace {

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string short_num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

const std::vector<std::string> kExperiments = {"constants", "kernel", "solve", "spectrum", "branch", "report"};

}  // namespace

Params RunConfig::params() const {
    return p ? Params::make(N, s, alpha, *p) : Params::make(N, s, alpha);
}

void RunConfig::validate() const {
    if (std::find(kExperiments.begin(), kExperiments.end(), experiment) == kExperiments.end())
        throw ConfigError("unknown experiment '" + experiment + "'");
    if (experiment == "report") return;
    if (experiment == "branch") {
        Params::make(N, s, 0.5 * (p.value_or(3.0) * (N - 2.0 * s) - N - 2.0 * s), p.value_or(3.0));
        if (!(s_end >= s && s_end < 1.0)) throw ConfigError("s_end must lie in [s, 1)");
    } else {
        params();
    }
    if (M < 3 || M % 2 == 0) throw ConfigError("M must be odd and at least 3");
    if (!(L >= 10.0)) throw ConfigError("L must be at least 10");
    if (!(quad_tol > 0.0) || !(solve_tol > 0.0) || !(eig_tol > 0.0)) throw ConfigError("tolerances must be positive");
}

RunConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read config " + file.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config " + file.string() + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig c;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "experiment") c.experiment = value.get<std::string>();
            else if (key == "N") c.N = value.get<int>();
            else if (key == "s") c.s = value.get<double>();
            else if (key == "alpha") c.alpha = value.get<double>();
            else if (key == "p") c.p = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
            else if (key == "L") c.L = value.get<double>();
            else if (key == "M") c.M = value.get<int>();
            else if (key == "quad_tol") c.quad_tol = value.get<double>();
            else if (key == "solve_tol") c.solve_tol = value.get<double>();
            else if (key == "eig_tol") c.eig_tol = value.get<double>();
            else if (key == "s_end") c.s_end = value.get<double>();
            else if (key == "ds_max") c.ds_max = value.get<double>();
            else if (key == "dp") c.dp = value.get<double>();
            else if (key == "kappa_star") c.kappa_star = value.get<double>();
            else if (key == "out") c.out = value.get<std::string>();
            else throw ConfigError("unknown config key '" + key + "'");
        } catch (const json::exception& e) {
            throw ConfigError("config key '" + key + "': " + e.what());
        }
    }
    return c;
}

std::string config_json(const RunConfig& c) {
    json j;
    j["experiment"] = c.experiment;
    j["N"] = c.N;
    j["s"] = c.s;
    j["alpha"] = c.alpha;
    j["p"] = c.p ? json(*c.p) : json(nullptr);
    j["L"] = c.L;
    j["M"] = c.M;
    j["quad_tol"] = c.quad_tol;
    j["solve_tol"] = c.solve_tol;
    j["eig_tol"] = c.eig_tol;
    j["s_end"] = c.s_end;
    j["ds_max"] = c.ds_max;
    j["dp"] = c.dp;
    j["kappa_star"] = c.kappa_star;
    j["out"] = c.out.string();
    return j.dump(2);
}

Check make_check(std::string name, double value, std::string relation, double threshold) {
    bool pass = false;
    if (relation == "<") pass = value < threshold;
    else if (relation == "<=") pass = value <= threshold;
    else if (relation == ">") pass = value > threshold;
    else if (relation == ">=") pass = value >= threshold;
    else if (relation == "==") pass = value == threshold;
    else throw std::invalid_argument("unknown relation " + relation);
    return {std::move(name), value, threshold, std::move(relation), pass};
}

void write_checks(const std::vector<Check>& checks, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << "name,value,relation,threshold,pass\n";
    for (const auto& c : checks)
        out << c.name << ',' << num(c.value) << ',' << c.relation << ',' << short_num(c.threshold) << ',' << (c.pass ? 1 : 0)
            << '\n';
}

std::vector<Check> read_checks(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read " + file.string());
    std::vector<Check> out;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream row(line);
        std::string name, value, relation, threshold, pass;
        if (!std::getline(row, name, ',') || !std::getline(row, value, ',') || !std::getline(row, relation, ',') ||
            !std::getline(row, threshold, ',') || !std::getline(row, pass, ','))
            throw std::runtime_error(file.string() + ": malformed row '" + line + "'");
        out.push_back({name, std::stod(value), std::stod(threshold), relation, pass == "1"});
    }
    return out;
}

std::string error_json(const std::string& type, const std::string& message) {
    json j;
    j["error"] = {{"type", type}, {"message", message}};
    return j.dump();
}

namespace {

struct Artifacts {
    std::filesystem::path dir;
    std::vector<std::string> files;
    json results = json::object();

    std::filesystem::path path(const std::string& name) {
        files.push_back(name);
        return dir / name;
    }
};

void write_json(const json& j, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << j.dump(2) << '\n';
}

LogGrid grid_of(const RunConfig& c) { return LogGrid(c.L, static_cast<std::size_t>(c.M)); }

OperatorMatrix operator_of(const RunConfig& c, const Params& params) {
    const LogGrid grid = grid_of(c);
    return assemble_T(params, grid, cached_kernel_table(params, grid, c.quad_tol, c.cache_dir));
}

std::vector<Check> run_constants(const RunConfig& c, Artifacts& art) {
    const Params params = c.params();
    const double gamma = hardy_constant(params.N, params.s);
    const double integral = A_via_integral(params);
    const double rel = std::abs(integral - gamma) / gamma;
    json j;
    j["N"] = params.N;
    j["s"] = params.s;
    j["alpha"] = params.alpha;
    j["p_star"] = critical_exponent(params);
    j["p"] = params.p;
    j["A_gamma"] = gamma;
    j["A_integral"] = integral;
    j["A_relative_difference"] = rel;
    j["normalization_constant"] = normalization_constant(params.N, params.s);
    j["kernel_singular_coefficient"] = kernel_singular_coefficient(params.N, params.s);
    j["sphere_measure"] = sphere_measure(params.N - 1);
    j["decay_rate"] = params.decay_rate();
    write_json(j, art.path("constants.json"));
    art.results = j;
    return {make_check("A_integral_vs_gamma", rel, "<", 1e-6)};
}

std::vector<Check> run_kernel(const RunConfig& c, Artifacts& art) {
    const Params params = c.params();
    const LogGrid grid = grid_of(c);
    const KernelTable table = cached_kernel_table(params, grid, c.quad_tol, c.cache_dir);
    const SingularFit fit = fit_singular_coefficient(params, grid.spacing(), c.quad_tol);
    {
        std::ofstream out(art.path("kernel.csv"));
        out << "# henon-lab kernel table\n# " << params.describe() << "\n# h=" << num(table.h) << "\n";
        out << "j,t,K\n";
        for (std::size_t j = 1; j <= table.length(); ++j)
            out << j << ',' << num(j * table.h) << ',' << num(table.at(j)) << '\n';
    }
    bool positive = true, decreasing = true;
    for (std::size_t j = 1; j <= table.length(); ++j) {
        positive = positive && table.at(j) > 0.0;
        if (j > 1) decreasing = decreasing && table.at(j) < table.at(j - 1);
    }
    const double expected = -(1.0 + 2.0 * params.s);
    json j;
    j["h"] = table.h;
    j["length"] = table.length();
    j["sing_coeff"] = table.sing_coeff;
    j["sing_coeff_closed_form"] = kernel_singular_coefficient(params.N, params.s);
    j["fit_residual"] = table.fit_residual;
    j["loglog_slope"] = fit.loglog_slope;
    j["tail_coeff"] = table.tail_coeff;
    write_json(j, art.path("kernel.json"));
    art.results = j;
    return {make_check("kernel_positive", positive ? 1 : 0, "==", 1),
            make_check("kernel_decreasing", decreasing ? 1 : 0, "==", 1),
            make_check("singularity_slope_rel_error", std::abs(fit.loglog_slope / expected - 1.0), "<", 1e-2),
            make_check("fit_residual", table.fit_residual, "<", kFitResidualThreshold)};
}

struct Solved {
    OperatorMatrix op;
    GroundState state;
};

Solved solve_and_write(const RunConfig& c, Artifacts& art, std::vector<Check>& checks) {
    const Params params = c.params();
    OperatorMatrix op = operator_of(c, params);
    SolveOptions opts;
    opts.tol = c.solve_tol;
    opts.quad_tol = c.quad_tol;
    GroundState gs = solve_ground_state(op, opts);
    const Profile& Q = gs.profile;
    write_profile_csv(Q, art.path("profile.csv"));
    write_profile_csv(from_log_profile(Q), art.path("profile_radial.csv"));

    const auto [left, right] = decay_rate_fit(Q);
    const double m = params.decay_rate();
    const double p = params.p;
    const double rayleigh = rayleigh_form(op, -p * positive_power(Q.values, p - 1.0), Q.values);
    const double nonlinear = (1.0 - p) * op.spacing() * positive_power(Q.values, p + 1.0).sum();
    json j;
    j["params"] = params.describe();
    j["residual"] = gs.residual;
    j["energy"] = gs.energy;
    j["flow_iterations"] = gs.flow_iterations;
    j["newton_iterations"] = gs.newton_iterations;
    j["max_value"] = Q.values.maxCoeff();
    j["decay_left"] = left;
    j["decay_right"] = right;
    j["rayleigh"] = rayleigh;
    j["rayleigh_expected"] = nonlinear;
    checks.push_back(make_check("residual", gs.residual, "<", 1e-6));
    checks.push_back(make_check("decay_left_rel_error", std::abs(left / m - 1.0), "<", 0.05));
    checks.push_back(make_check("decay_right_rel_error", std::abs(right / m - 1.0), "<", 0.05));
    checks.push_back(make_check("rayleigh_identity_rel_error", std::abs(rayleigh / nonlinear - 1.0), "<", 1e-6));
    if (params.N == 3 && params.s == 0.5 && p == 2.0) {
        double err = 0.0;
        for (std::size_t i = 0; i < Q.size(); ++i) err = std::max(err, std::abs(Q.values[i] - 1.0 / std::cosh(Q.grid.node(i))));
        j["sech_linf_error"] = err;
        checks.push_back(make_check("sech_linf_error", err, "<", 1e-3));
        checks.push_back(make_check("rayleigh_minus_half_pi", std::abs(rayleigh + M_PI / 2.0), "<", 1e-3));
    }
    write_json(j, art.path("solve.json"));
    art.results["solve"] = j;
    return {std::move(op), std::move(gs)};
}

std::vector<Check> run_solve(const RunConfig& c, Artifacts& art) {
    std::vector<Check> checks;
    solve_and_write(c, art, checks);
    return checks;
}

std::vector<Check> run_spectrum(const RunConfig& c, Artifacts& art) {
    std::vector<Check> checks;
    const Solved solved = solve_and_write(c, art, checks);
    const Params& params = solved.op.params;
    const Profile& Q = solved.state.profile;
    SpectrumOptions opts;
    opts.zero_mode_constant = c.eig_tol;
    const SpectrumReport report = parity_spectrum(assemble_linearized(solved.op, Q.values, params.p), opts);
    write_spectrum_csv(report, art.path("spectrum.csv"));
    write_spectrum_json(report, art.path("spectrum.json"));

    const Eigenpair& zero = report.odd_zero_mode();
    const double lambda1 = report.lambda1();
    const Eigen::VectorXd dU = derivative(Q.grid, Q.values);
    const double cos_translation = std::abs(cosine_similarity(zero.vector, dU));
    const Profile z = generator_z(from_log_profile(Q));
    const Profile mode = from_log_profile(Profile{Q.grid, params, zero.vector, Variable::Log, Parity::Odd});
    const double cos_scaling = std::abs(cosine_similarity(mode.values, z.values));
    double nearest_even = INFINITY;
    for (const auto& e : report.even) nearest_even = std::min(nearest_even, std::abs(e.value));
    const SingularReport singular = singular_map(report, params);

    json j;
    j["lambda1"] = lambda1;
    j["odd_zero_mode"] = zero.value;
    j["zero_tol"] = report.zero_tol;
    j["cos_translation_mode"] = cos_translation;
    j["cos_generator_z"] = cos_scaling;
    j["second_even_sign_changes_half_line"] = report.even[1].sign_changes;
    j["second_even_sign_changes_radial"] = report.even[1].radial_sign_changes;
    j["singular_lambda2"] = singular.lambda2;
    j["lambda2_below_hardy"] = singular.lambda2_below_hardy;
    j["hardy_margin"] = singular.margin;
    write_json(j, art.path("spectrum_diagnostics.json"));
    art.results["spectrum"] = j;

    checks.push_back(make_check("morse_index", report.morse_index_full, "==", 1));
    checks.push_back(make_check("morse_indeterminate", report.morse_indeterminate ? 1 : 0, "==", 0));
    checks.push_back(make_check("lambda1", lambda1, "<", 0.0));
    checks.push_back(make_check("odd_zero_mode_over_lambda1", std::abs(zero.value) / std::abs(lambda1), "<=", 1e-3));
    checks.push_back(make_check("cos_translation_mode", cos_translation, ">", 0.999));
    checks.push_back(make_check("nearest_even_over_zero_tol", nearest_even / report.zero_tol, ">", 10.0));
    checks.push_back(make_check("second_even_sign_changes", report.even[1].radial_sign_changes, "<=", 2));
    checks.push_back(make_check("cos_generator_z", cos_scaling, ">", 0.999));
    return checks;
}

std::vector<Check> run_branch(const RunConfig& c, Artifacts& art) {
    const double p = c.p.value_or(3.0);
    ContinuationOptions opts;
    opts.tol = c.solve_tol;
    opts.quad_tol = c.quad_tol;
    opts.ds_max = c.ds_max;
    opts.cache_dir = c.cache_dir;
    const LogGrid grid = grid_of(c);
    const Branch branch = continue_branch(c.N, p, c.s, c.s_end, grid, opts);
    write_branch_csv(branch, art.path("branch.csv"));
    write_profile_csv(branch.points.back().Q, art.path("branch_endpoint.csv"));

    const double A1 = 0.25 * (c.N - 2.0) * (c.N - 2.0);
    std::vector<Check> checks;
    json j;
    j["reached_end"] = branch.reached_end;
    j["s_star"] = branch.s_star;
    j["points"] = branch.points.size();
    j["sup_bound"] = branch.sup_bound;
    j["continuity_constant"] = branch.continuity_constant;
    double worst_probe = 0.0;
    json probes = json::array();
    for (const auto& probe : branch.probes) {
        probes.push_back({{"s", probe.s}, {"distance", probe.distance}, {"newton_iters", probe.newton_iters}});
        worst_probe = std::max(worst_probe, probe.distance);
    }
    j["probes"] = probes;
    int min_morse = 1, max_morse = 1;
    double min_value = INFINITY, max_sup = 0.0;
    for (const auto& pt : branch.points) {
        min_morse = std::min(min_morse, pt.morse_index_even);
        max_morse = std::max(max_morse, pt.morse_index_even);
        min_value = std::min(min_value, pt.min_value);
        max_sup = std::max(max_sup, pt.sup_norm);
    }
    checks.push_back(make_check("reached_end", branch.reached_end ? 1 : 0, "==", 1));
    checks.push_back(make_check("min_value", min_value, ">", 0.0));
    checks.push_back(make_check("morse_index_even_min", min_morse, "==", 1));
    checks.push_back(make_check("morse_index_even_max", max_morse, "==", 1));
    checks.push_back(make_check("max_sup_norm", max_sup, "<=", branch.sup_bound));
    checks.push_back(make_check("restart_probe_distance", worst_probe, "<", 1e-6));
    if (A1 > 0.0 && c.s_end >= 0.999) {
        const Profile soliton = endpoint_soliton(p, A1, grid, c.N);
        const double dist = std::sqrt(grid.spacing() * (soliton.values - branch.points.back().Q.values).squaredNorm());
        j["endpoint_soliton_distance"] = dist;
        checks.push_back(make_check("endpoint_soliton_distance", dist, "<", 1e-2));
    }
    write_json(j, art.path("branch.json"));
    art.results = j;
    return checks;
}

}  // namespace

int run_experiment(const RunConfig& config) {
    config.validate();
    if (config.experiment == "report") {
        const ReportSummary summary = write_report(config.out);
        return summary.failed > 0 ? 1 : 0;
    }
    const auto start = std::chrono::steady_clock::now();
    std::filesystem::create_directories(config.out);
    Artifacts art;
    art.dir = config.out;
    std::vector<Check> checks;
    if (config.experiment == "constants") checks = run_constants(config, art);
    else if (config.experiment == "kernel") checks = run_kernel(config, art);
    else if (config.experiment == "solve") checks = run_solve(config, art);
    else if (config.experiment == "spectrum") checks = run_spectrum(config, art);
    else checks = run_branch(config, art);
    write_checks(checks, art.path(config.experiment + "_checks.csv"));

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json manifest;
    manifest["tool"] = "henon-lab";
    manifest["version"] = kVersion;
    manifest["compiler"] = __VERSION__;
    manifest["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION);
    manifest["config"] = json::parse(config_json(config));
    manifest["kernel_cache"] = config.cache_dir ? json(config.cache_dir->string()) : json(nullptr);
    manifest["artifacts"] = art.files;
    manifest["wall_time_seconds"] = wall;
    write_json(manifest, config.out / (config.experiment + "_manifest.json"));

    const bool ok = std::all_of(checks.begin(), checks.end(), [](const Check& ch) { return ch.pass; });
    json summary;
    summary["experiment"] = config.experiment;
    summary["results"] = art.results;
    summary["checks_passed"] = ok;
    std::printf("%s\n", summary.dump(2).c_str());
    return ok ? 0 : 1;
}

ReportSummary write_report(const std::filesystem::path& dir) {
    ReportSummary summary;
    std::vector<std::pair<std::string, Check>> rows;
    if (!std::filesystem::is_directory(dir)) {
        summary.missing.push_back(dir.string());
    } else {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            const std::string name = entry.path().filename().string();
            if (name.size() > 11 && name.ends_with("_checks.csv")) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            const std::string experiment = file.filename().string().substr(0, file.filename().string().size() - 11);
            try {
                for (auto& check : read_checks(file)) rows.emplace_back(experiment, std::move(check));
            } catch (const std::exception& e) {
                summary.missing.push_back(file.filename().string() + " (" + e.what() + ")");
            }
            const auto manifest = dir / (experiment + "_manifest.json");
            if (!std::filesystem::exists(manifest)) summary.missing.push_back(manifest.filename().string());
        }
    }
    summary.total = static_cast<int>(rows.size());
    for (const auto& [experiment, check] : rows) summary.failed += check.pass ? 0 : 1;
    if (rows.empty()) summary.warnings.push_back("no checks found in " + dir.string());

    if (std::filesystem::is_directory(dir)) {
        std::ofstream csv(dir / "summary.csv");
        csv << "experiment,name,value,relation,threshold,pass\n";
        for (const auto& [experiment, ch] : rows)
            csv << experiment << ',' << ch.name << ',' << num(ch.value) << ',' << ch.relation << ',' << short_num(ch.threshold)
                << ',' << (ch.pass ? 1 : 0) << '\n';
        std::ofstream md(dir / "summary.md");
        md << "# henon-lab run summary\n\n";
        md << summary.total - summary.failed << " of " << summary.total << " checks passed.\n\n";
        for (const auto& w : summary.warnings) md << "Warning: " << w << "\n\n";
        for (const auto& m : summary.missing) md << "Missing: " << m << "\n\n";
        if (!rows.empty()) {
            md << "| experiment | check | value | threshold | result |\n|---|---|---|---|---|\n";
            for (const auto& [experiment, ch] : rows)
                md << "| " << experiment << " | " << ch.name << " | " << num(ch.value) << " | " << ch.relation << ' '
                   << short_num(ch.threshold) << " | " << (ch.pass ? "pass" : "FAIL") << " |\n";
        }
    }
    for (const auto& w : summary.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    std::printf("%d of %d checks passed\n", summary.total - summary.failed, summary.total);
    return summary;
}

}  // namespace henon
