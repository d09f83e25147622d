#include "henon/transform.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace henon {

std::string to_string(Variable v) { return v == Variable::Log ? "log" : "radial"; }

std::string to_string(Parity p) {
    switch (p) {
        case Parity::Even: return "even";
        case Parity::Odd: return "odd";
        default: return "none";
    }
}

double Profile::coordinate(std::size_t i) const {
    const double kappa = grid.node(i);
    return variable == Variable::Log ? kappa : std::exp(kappa);
}

Eigen::VectorXd Profile::coordinates() const {
    Eigen::VectorXd out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = coordinate(i);
    return out;
}

Profile sample_profile(const Params& params, const LogGrid& grid, Variable variable,
                       const std::function<double(double)>& f) {
    Profile out{grid, params, Eigen::VectorXd(grid.size()), variable, Parity::None};
    for (std::size_t i = 0; i < grid.size(); ++i) out.values[i] = f(out.coordinate(i));
    return out;
}

double parity_defect(const Eigen::VectorXd& values, Parity parity) {
    if (parity == Parity::None) return 0.0;
    const double scale = values.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    const double sign = parity == Parity::Even ? 1.0 : -1.0;
    const auto n = values.size();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, std::abs(values[i] - sign * values[n - 1 - i]));
    return worst / scale;
}

void set_parity(Profile& profile, Parity parity, double tol) {
    // A radial profile is even when its log image is.
    const Eigen::VectorXd& v = profile.variable == Variable::Log ? profile.values : to_log_profile(profile).values;
    const double defect = parity_defect(v, parity);
    if (defect > tol) {
        std::ostringstream msg;
        msg << "profile is not " << to_string(parity) << ": reflection defect " << defect;
        throw std::invalid_argument(msg.str());
    }
    profile.parity = parity;
}

Profile to_log_profile(const Profile& radial) {
    if (radial.variable != Variable::Radial) throw std::invalid_argument("to_log_profile expects a radial profile");
    const double m = radial.params.decay_rate();
    Profile out = radial;
    out.variable = Variable::Log;
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = std::exp(m * radial.grid.node(i)) * radial.values[i];
    return out;
}

Profile from_log_profile(const Profile& log) {
    if (log.variable != Variable::Log) throw std::invalid_argument("from_log_profile expects a log profile");
    const double m = log.params.decay_rate();
    Profile out = log;
    out.variable = Variable::Radial;
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = std::exp(-m * log.grid.node(i)) * log.values[i];
    return out;
}

Eigen::VectorXd derivative(const LogGrid& grid, const Eigen::VectorXd& v) {
    const Eigen::Index n = v.size();
    if (n < 5) throw std::invalid_argument("derivative needs at least 5 nodes");
    const double h = grid.spacing();
    Eigen::VectorXd d(n);
    for (Eigen::Index i = 2; i + 2 < n; ++i) d[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
    auto forward = [&](Eigen::Index i, double sign) {
        // Fourth-order one-sided stencil; sign = -1 walks backwards.
        auto at = [&](int k) { return v[i + static_cast<Eigen::Index>(sign) * k]; };
        return sign * (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / (12.0 * h);
    };
    d[0] = forward(0, 1.0);
    d[1] = forward(1, 1.0);
    d[n - 1] = forward(n - 1, -1.0);
    d[n - 2] = forward(n - 2, -1.0);
    return d;
}

namespace {

void require_fine(const LogGrid& grid) {
    if (grid.spacing() > kMaxDifferentiationSpacing) {
        std::ostringstream msg;
        msg << "grid spacing " << grid.spacing() << " too coarse for differentiation (max " << kMaxDifferentiationSpacing
            << ")";
        throw std::invalid_argument(msg.str());
    }
}

Parity flipped(Parity p) {
    if (p == Parity::Even) return Parity::Odd;
    if (p == Parity::Odd) return Parity::Even;
    return Parity::None;
}

}  // namespace

Profile generator_z(const Profile& radial) {
    require_fine(radial.grid);
    Profile log = to_log_profile(radial);
    log.values = derivative(log.grid, log.values);
    log.parity = flipped(radial.parity);
    return from_log_profile(log);
}

Profile generator_z_direct(const Profile& radial) {
    if (radial.variable != Variable::Radial) throw std::invalid_argument("generator_z expects a radial profile");
    require_fine(radial.grid);
    Profile out = radial;
    out.values = radial.params.decay_rate() * radial.values + derivative(radial.grid, radial.values);
    out.parity = flipped(radial.parity);
    return out;
}

std::pair<double, double> decay_rate_fit(const Profile& log, double width, double offset) {
    if (log.variable != Variable::Log) throw std::invalid_argument("decay_rate_fit expects a log profile");
    const double L = log.grid.half_width();
    const double hi = L - offset;
    const double lo = hi - width;
    if (!(width > 0.0) || lo < 0.0) throw std::invalid_argument("decay fit window does not fit in the grid");
    auto fit = [&](bool right) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (std::size_t i = 0; i < log.size(); ++i) {
            const double kappa = log.grid.node(i);
            if ((right ? kappa : -kappa) < lo - 1e-12 || (right ? kappa : -kappa) > hi + 1e-12) continue;
            const double v = log.values[i];
            if (!(v > 0.0)) throw std::invalid_argument("decay_rate_fit: nonpositive value in fit window");
            const double x = std::abs(kappa);
            const double y = -std::log(v);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
        if (n < 2) throw std::invalid_argument("decay fit window contains fewer than two nodes");
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    return {fit(false), fit(true)};
}

void write_profile_csv(const Profile& profile, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    char buf[64];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    out << "# henon-lab profile\n";
    out << "# N=" << profile.params.N << "\n";
    out << "# s=" << num(profile.params.s) << "\n";
    out << "# alpha=" << num(profile.params.alpha) << "\n";
    out << "# p=" << num(profile.params.p) << "\n";
    out << "# L=" << num(profile.grid.half_width()) << "\n";
    out << "# M=" << profile.grid.size() << "\n";
    out << "# variable=" << to_string(profile.variable) << "\n";
    out << "# parity=" << to_string(profile.parity) << "\n";
    out << (profile.variable == Variable::Log ? "kappa" : "r") << ",value\n";
    for (std::size_t i = 0; i < profile.size(); ++i) out << num(profile.coordinate(i)) << ',' << num(profile.values[i]) << '\n';
}

Profile read_profile_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read " + file.string());
    std::map<std::string, std::string> header;
    std::vector<double> values;
    std::string line;
    int lineno = 0;
    bool seen_columns = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) header[line.substr(2, eq - 2)] = line.substr(eq + 1);
            continue;
        }
        if (!seen_columns) {
            seen_columns = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error(file.string() + ":" + std::to_string(lineno) + ": bad row");
        values.push_back(std::stod(line.substr(comma + 1)));
    }
    for (const char* key : {"N", "s", "alpha", "p", "L", "M", "variable", "parity"}) {
        if (!header.count(key)) throw std::runtime_error(file.string() + ": missing header field " + key);
    }
    Params params{std::stoi(header["N"]), std::stod(header["s"]), std::stod(header["alpha"]), std::stod(header["p"])};
    LogGrid grid(std::stod(header["L"]), std::stoul(header["M"]));
    if (values.size() != grid.size()) throw std::runtime_error(file.string() + ": row count does not match M");
    Profile out{grid, params, Eigen::Map<Eigen::VectorXd>(values.data(), values.size()),
                header["variable"] == "radial" ? Variable::Radial : Variable::Log, Parity::None};
    const std::string parity = header["parity"];
    out.parity = parity == "even" ? Parity::Even : parity == "odd" ? Parity::Odd : Parity::None;
    return out;
}

}  // namespace henon
