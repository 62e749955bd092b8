#include "threelevel/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "threelevel/lindblad.hpp"
#include "threelevel/oracle.hpp"

namespace threelevel {

namespace {

double rounded(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(format_number(x).c_str(), nullptr);
}

nlohmann::json json_number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return rounded(x);
}

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

struct Resolved {
    std::string name;
    Scenario scenario;
    int initial_level;
    double t_start, t_end, dt_out;
};

Resolved resolve(const RunConfig& c) {
    c.validate();
    Resolved r;
    if (c.preset) {
        const Preset& p = preset(*c.preset);
        r = {p.name, p.scenario, p.initial_level, p.t_start, p.t_end, p.dt_out};
    } else {
        r = {"inline", *c.scenario, c.initial_level, 0.0, 0.0, 0.0};
    }
    if (c.t_start) r.t_start = *c.t_start;
    if (c.t_end) r.t_end = *c.t_end;
    if (c.dt_out) r.dt_out = *c.dt_out;
    if (!(r.t_end > r.t_start)) throw ConfigError("t_end must be greater than t_start");
    if (!(r.dt_out > 0)) throw ConfigError("dt_out must be > 0");
    const int levels = level_count(r.scenario);
    if (r.initial_level < 1 || r.initial_level > levels)
        throw ConfigError("initial_level must be in 1.." + std::to_string(levels));
    return r;
}

}  // namespace

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig c;
    try {
        if (j.contains("preset")) c.preset = j.at("preset").get<std::string>();
        if (j.contains("scenario")) c.scenario = scenario_from_json(j.at("scenario"));
        if (j.contains("initial_level")) c.initial_level = j.at("initial_level").get<int>();
        if (j.contains("t_start")) c.t_start = j.at("t_start").get<double>();
        if (j.contains("t_end")) c.t_end = j.at("t_end").get<double>();
        if (j.contains("dt_out")) c.dt_out = j.at("dt_out").get<double>();
        if (j.contains("tol")) c.tol = j.at("tol").get<double>();
        if (j.contains("oracle")) c.oracle = j.at("oracle").get<bool>();
        if (j.contains("out")) c.out = j.at("out").get<std::string>();
        if (j.contains("format")) {
            const auto f = j.at("format").get<std::string>();
            if (f == "csv") c.format = OutputFormat::csv;
            else if (f == "json") c.format = OutputFormat::json;
            else throw ConfigError("format must be csv or json, got '" + f + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("malformed scenario: ") + e.what());
    }
    return c;
}

void RunConfig::validate() const {
    if (preset.has_value() == scenario.has_value())
        throw ConfigError("exactly one of a preset name or an inline scenario is required");
    if (!(tol > 0)) throw ConfigError("tol must be > 0");
    if (!preset && (!t_end || !dt_out))
        throw ConfigError("inline scenarios require t_end and dt_out");
}

std::vector<double> uniform_grid(double t_start, double t_end, double dt) {
    const auto n = static_cast<std::size_t>(std::floor((t_end - t_start) / dt + 1e-9));
    std::vector<double> grid;
    grid.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) grid.push_back(t_start + static_cast<double>(k) * dt);
    if (grid.back() > t_end) grid.back() = t_end;
    return grid;
}

DensityMatrix density_from_propagator(const Matrix3& u, int levels, int initial_level) {
    const auto k = initial_level - 1;
    if (levels == 3) {
        const Eigen::Vector3cd psi = u.col(k);
        return psi * psi.adjoint();
    }
    Matrix2 rho0 = Matrix2::Zero();
    rho0(k, k) = 1.0;
    return rho_from_eta(u * eta_from_rho(rho0));
}

RunResult simulate(const RunConfig& config) {
    const Resolved r = resolve(config);
    const int levels = level_count(r.scenario);
    const std::vector<double> grid = uniform_grid(r.t_start, r.t_end, r.dt_out);

    const WeiNormanSolution sol = integrate(generator_fn(r.scenario), {r.t_start, grid.back()},
                                            config.tol, MuState::origin(r.t_start), grid);

    RunResult result;
    result.name = r.name;
    result.levels = levels;
    result.singular = sol.singular;

    std::vector<Eigen::MatrixXcd> oracle_rho;
    std::vector<Eigen::MatrixXcd> oracle_u;
    if (config.oracle) {
        const auto* two = std::get_if<TwoLevelScenario>(&r.scenario);
        if (two && !two->simplified) {
            const TwoLevelLindbladParams params = two->params;
            DensityMatrix rho0 = DensityMatrix::Zero(2, 2);
            rho0(r.initial_level - 1, r.initial_level - 1) = 1.0;
            const auto res = propagate_lindblad_direct(
                [params](double t) { return DensityMatrix(two_level_hamiltonian(params, t)); },
                {DensityMatrix(dephasing_operator(params))}, rho0, r.t_start, config.tol, grid);
            for (const auto& [t, rho] : res.samples) oracle_rho.push_back(rho);
        } else {
            const Scenario s = r.scenario;
            const auto res = propagate_direct(
                [s](double t) { return generator_matrix(s, t); }, r.t_start, config.tol, grid);
            for (const auto& [t, u] : res.samples) {
                oracle_u.push_back(u);
                oracle_rho.push_back(density_from_propagator(u, levels, r.initial_level));
            }
        }
    }

    double max_dev = 0.0, max_udev = 0.0;
    for (std::size_t k = 0; k < sol.samples.size(); ++k) {
        const MuState& s = sol.samples[k];
        const Matrix3 u = propagator(s);
        const DensityMatrix rho = density_from_propagator(u, levels, r.initial_level);
        OutputRecord rec;
        rec.t = s.t;
        for (int i = 0; i < levels; ++i) rec.population[i] = rho(i, i).real();
        rec.abs_rho12 = std::abs(rho(0, 1));
        if (levels == 3) {
            rec.abs_rho23 = std::abs(rho(1, 2));
            rec.abs_rho13 = std::abs(rho(0, 2));
        }
        const Complex tr = rho.trace();
        if (std::abs(tr) > 1e-300) {
            try {
                rec.entropy = entropy(DensityMatrix(rho / tr.real()));
            } catch (const NonPhysicalState&) {
                rec.entropy = std::numeric_limits<double>::quiet_NaN();
            }
        }
        rec.mu = s.mu;
        rec.delta = s.delta;
        if (config.oracle) {
            rec.oracle_dev = max_abs_diff(rho, oracle_rho[k]);
            max_dev = std::max(max_dev, *rec.oracle_dev);
            if (!oracle_u.empty()) max_udev = std::max(max_udev, (u - oracle_u[k]).norm());
        }
        result.records.push_back(rec);
    }
    if (config.oracle) {
        result.max_oracle_dev = max_dev;
        if (!oracle_u.empty()) result.max_propagator_dev = max_udev;
    }
    return result;
}

std::vector<std::string> csv_columns(bool with_oracle) {
    std::vector<std::string> cols = {"t",         "rho11",     "rho22",     "rho33",
                                     "abs_rho12", "abs_rho23", "abs_rho13", "entropy"};
    for (int k = 1; k <= 8; ++k) {
        cols.push_back("mu" + std::to_string(k) + "_re");
        cols.push_back("mu" + std::to_string(k) + "_im");
    }
    cols.push_back("delta_re");
    cols.push_back("delta_im");
    if (with_oracle) cols.push_back("oracle_dev");
    return cols;
}

namespace {

std::vector<double> record_values(const OutputRecord& r, bool with_oracle) {
    std::vector<double> v = {r.t,         r.population[0], r.population[1], r.population[2],
                             r.abs_rho12, r.abs_rho23,     r.abs_rho13,     r.entropy};
    for (const auto& m : r.mu) {
        v.push_back(m.real());
        v.push_back(m.imag());
    }
    v.push_back(r.delta.real());
    v.push_back(r.delta.imag());
    if (with_oracle) v.push_back(r.oracle_dev.value_or(std::numeric_limits<double>::quiet_NaN()));
    return v;
}

}  // namespace

void write_csv(std::ostream& os, const RunResult& result, bool with_oracle) {
    const auto cols = csv_columns(with_oracle);
    for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
    os << '\n';
    for (const auto& rec : result.records) {
        const auto vals = record_values(rec, with_oracle);
        for (std::size_t k = 0; k < vals.size(); ++k) os << (k ? "," : "") << format_number(vals[k]);
        os << '\n';
    }
    if (result.singular)
        os << "# singular_at=" << format_number(result.singular->time)
           << " condition=" << format_number(result.singular->condition) << '\n';
    if (with_oracle && result.max_oracle_dev)
        os << "# max_oracle_dev=" << format_number(*result.max_oracle_dev) << '\n';
}

nlohmann::json to_json(const RunResult& result, bool with_oracle) {
    const auto cols = csv_columns(with_oracle);
    nlohmann::json records = nlohmann::json::array();
    for (const auto& rec : result.records) {
        const auto vals = record_values(rec, with_oracle);
        nlohmann::json o = nlohmann::json::object();
        for (std::size_t k = 0; k < cols.size(); ++k) o[cols[k]] = json_number(vals[k]);
        records.push_back(std::move(o));
    }
    nlohmann::json summary = nlohmann::json::object();
    summary["max_oracle_dev"] =
        result.max_oracle_dev ? json_number(*result.max_oracle_dev) : nlohmann::json(nullptr);
    summary["singular"] =
        result.singular ? nlohmann::json{{"time", json_number(result.singular->time)},
                                         {"condition", json_number(result.singular->condition)}}
                        : nlohmann::json(nullptr);
    return nlohmann::json{{"scenario", result.name},
                          {"levels", result.levels},
                          {"columns", cols},
                          {"records", std::move(records)},
                          {"summary", std::move(summary)}};
}

int run(const RunConfig& config, std::ostream& err) {
    RunResult result;
    try {
        result = simulate(config);
    } catch (const UnknownPreset& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const ConfigError& e) {
        err << "error: invalid configuration: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: invalid configuration: " << e.what() << '\n';
        return 1;
    } catch (const IntegrationError& e) {
        err << "error: integration failed: " << e.what() << '\n';
        return 1;
    } catch (const OracleError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!config.out.empty()) {
        file.open(config.out, std::ios::out | std::ios::trunc);
        if (!file) {
            err << "error: cannot write output file '" << config.out << "'\n";
            return 1;
        }
        os = &file;
    }
    if (config.format == OutputFormat::csv) {
        write_csv(*os, result, config.oracle);
    } else {
        *os << to_json(result, config.oracle).dump(1) << '\n';
    }
    os->flush();
    if (!*os) {
        err << "error: failed writing output '" << config.out << "'\n";
        return 1;
    }
    if (result.singular) {
        err << "warning: Wei-Norman factorization singular at t = "
            << format_number(result.singular->time) << "; output truncated\n";
        return 2;
    }
    if (config.oracle && result.max_oracle_dev)
        err << "max oracle deviation: " << format_number(*result.max_oracle_dev) << '\n';
    return 0;
}

std::string list_presets() {
    std::ostringstream os;
    for (const auto& p : preset_registry()) os << p.name << "\t" << p.provenance << '\n';
    return os.str();
}

}  // namespace threelevel
