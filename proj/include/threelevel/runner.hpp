#pragma once

// Scenario runs: Wei-Norman evolution on a uniform grid, optional comparison
// against the direct-integration oracle, and CSV / JSON time-series output.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "threelevel/scenarios.hpp"
#include "threelevel/weinorman.hpp"

namespace threelevel {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { csv, json };

struct RunConfig {
    std::optional<std::string> preset;
    std::optional<Scenario> scenario;
    int initial_level = 1;
    std::optional<double> t_start;
    std::optional<double> t_end;
    std::optional<double> dt_out;
    double tol = 1e-10;
    bool oracle = false;
    std::string out;  // empty: standard output
    OutputFormat format = OutputFormat::csv;

    // Fields absent from the document keep their defaults.
    static RunConfig from_json(const nlohmann::json& j);
    // Throws ConfigError.
    void validate() const;
};

struct OutputRecord {
    double t = 0.0;
    std::array<double, 3> population{};  // rho11, rho22, rho33 (rho33 = 0 for two levels)
    double abs_rho12 = 0.0, abs_rho23 = 0.0, abs_rho13 = 0.0;
    double entropy = 0.0;
    std::array<Complex, 8> mu{};
    Complex delta{};
    std::optional<double> oracle_dev;
};

struct RunResult {
    std::string name;
    int levels = 3;
    std::vector<OutputRecord> records;
    std::optional<Singularity> singular;
    std::optional<double> max_oracle_dev;
    // Deviation of the propagator itself (three-level and simplified models).
    std::optional<double> max_propagator_dev;
};

// Grid t_start, t_start + dt, ... up to t_end inclusive (within rounding).
std::vector<double> uniform_grid(double t_start, double t_end, double dt);

// Density matrix from a propagator sample: U rho0 U^+ for three levels,
// rho_from_eta(U eta0) for the vectorized two-level problem.
DensityMatrix density_from_propagator(const Matrix3& u, int levels, int initial_level);

RunResult simulate(const RunConfig& config);

std::vector<std::string> csv_columns(bool with_oracle);
void write_csv(std::ostream& os, const RunResult& result, bool with_oracle);
nlohmann::json to_json(const RunResult& result, bool with_oracle);

// Runs and writes the output file. Returns 0 on success, 2 on a
// factorization singularity (partial output written), 1 on configuration or
// I/O errors (message on err).
int run(const RunConfig& config, std::ostream& err);

std::string list_presets();

// %.15g formatting used by all writers.
std::string format_number(double x);

}  // namespace threelevel
