#pragma once

// Time-dependent three-level Hamiltonians, the vectorized two-level Lindblad
// generator, and the named presets.

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "threelevel/algebra.hpp"
#include "threelevel/lindblad.hpp"
#include "threelevel/waveform.hpp"
#include "threelevel/weinorman.hpp"

namespace threelevel {

// H = [[0, G1*, 0], [G1, D1, G2*], [0, G2, D1 + D2]]. Decay is carried by
// negative imaginary parts of the detunings.
struct ScenarioEq2 {
    Waveform G1, G2;
    Complex delta1{}, delta2{};
    bool operator==(const ScenarioEq2&) const = default;
};

// H = [[-E1, W12*, 0], [W12, 0, W23*], [0, W23, delta]].
struct ScenarioEq3 {
    double E1 = 0.0;
    double delta_level = 0.0;
    Waveform omega12, omega23;
    bool operator==(const ScenarioEq3&) const = default;
};

// H = [[0, W12*, 0], [W12, Delta - i gamma, W23*], [0, W23, 0]].
struct ScenarioEq4 {
    Waveform omega12, omega23;
    Complex delta{};
    double gamma = 0.0;
    bool operator==(const ScenarioEq4&) const = default;
};

// Vectorized two-level master equation; `simplified` replaces the dephasing
// block by -i gamma times the unit matrix.
struct TwoLevelScenario {
    TwoLevelLindbladParams params;
    bool simplified = false;
    bool operator==(const TwoLevelScenario& o) const {
        return params.eps == o.params.eps && params.J == o.params.J &&
               params.gamma == o.params.gamma && simplified == o.simplified;
    }
};

using Scenario = std::variant<ScenarioEq2, ScenarioEq3, ScenarioEq4, TwoLevelScenario>;

// Number of physical levels: 3, or 2 for the vectorized Lindblad problem.
int level_count(const Scenario& s);

// The 3x3 generator G(t) of i dX/dt = G X (a Hamiltonian, or the eta-space
// Liouvillian for two-level scenarios), including configured decay.
Matrix3 generator_matrix(const Scenario& s, double t);

LadderCoefficients build_generator(const Scenario& s, double t);
GeneratorFn generator_fn(const Scenario& s);

// Same as generator_matrix with every decay parameter forced to zero (used to
// check Hermiticity of the coherent part).
Matrix3 coherent_matrix(const Scenario& s, double t);

struct Preset {
    std::string name;
    std::string provenance;
    Scenario scenario;
    int initial_level = 1;  // 1-based
    double t_start = 0.0;
    double t_end = 0.0;
    double dt_out = 0.0;
};

struct UnknownPreset : std::out_of_range {
    explicit UnknownPreset(const std::string& name);
};

const std::vector<Preset>& preset_registry();
const Preset& preset(const std::string& name);

// Sech pulses of unit width parameterized by the dimensionless groups
// (alpha, delta, gamma): amplitudes alpha / sqrt(2) each, Delta = 2 delta,
// Gamma = 2 gamma.
ScenarioEq4 sech_pulse_scenario(double alpha, double delta, double gamma);

// Gaussian pulse pair with A1 = A2 = amplitude, t2 = t1 - sigma.
ScenarioEq4 gaussian_pulse_scenario(double amplitude, double t1, double sigma, double Delta,
                                    double gamma);

nlohmann::json to_json(const Waveform& w);
Waveform waveform_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Preset& p);

}  // namespace threelevel
