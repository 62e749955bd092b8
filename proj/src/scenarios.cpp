#include "threelevel/scenarios.hpp"

#include <cmath>
#include <sstream>

namespace threelevel {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Matrix3 eq2_matrix(const ScenarioEq2& s, double t) {
    const Complex g1 = s.G1(t), g2 = s.G2(t);
    Matrix3 h;
    h << 0.0, std::conj(g1), 0.0,
         g1, s.delta1, std::conj(g2),
         0.0, g2, s.delta1 + s.delta2;
    return h;
}

Matrix3 eq3_matrix(const ScenarioEq3& s, double t) {
    const Complex w12 = s.omega12(t), w23 = s.omega23(t);
    Matrix3 h;
    h << -s.E1, std::conj(w12), 0.0,
         w12, 0.0, std::conj(w23),
         0.0, w23, s.delta_level;
    return h;
}

Matrix3 eq4_matrix(const ScenarioEq4& s, double t) {
    const Complex w12 = s.omega12(t), w23 = s.omega23(t);
    Matrix3 h;
    h << 0.0, std::conj(w12), 0.0,
         w12, s.delta, std::conj(w23),
         0.0, w23, 0.0;
    return h;
}

Matrix3 two_level_matrix(const TwoLevelScenario& s, double t) {
    return s.simplified ? liouvillian_two_level_simplified(s.params, t)
                        : liouvillian_two_level(s.params, t);
}

nlohmann::json complex_to_json(Complex z) {
    if (z.imag() == 0.0) return z.real();
    return nlohmann::json::array({z.real(), z.imag()});
}

Complex complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw std::invalid_argument("expected a number or [re, im], got " + j.dump());
}

Complex complex_field(const nlohmann::json& j, const char* key, Complex fallback = {}) {
    return j.contains(key) ? complex_from_json(j.at(key)) : fallback;
}

double real_field(const nlohmann::json& j, const char* key, double fallback = 0.0) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw std::invalid_argument(std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

std::vector<Preset> make_registry() {
    std::vector<Preset> out;

    // Two-level Lindblad: eps = A cos(w t), 2J = B cos(W t + phase).
    TwoLevelLindbladParams fig1;
    fig1.eps = Waveform::cosine(45.0, 1.0);
    fig1.J = Waveform::cosine(3.0, 0.0, 0.0);
    fig1.gamma = 0.3;
    out.push_back({"fig1", "Fig. 1 left: vectorized two-level Lindblad, A=45 B=6 w=1 W=0 Gamma=0.3",
                   TwoLevelScenario{fig1, false}, 1, 0.0, 40.0, 0.02});
    out.push_back({"fig1_simplified",
                   "Fig. 1 right: simplified -i Gamma decoherence, A=45 B=6 w=1 W=0 Gamma=0.3",
                   TwoLevelScenario{fig1, true}, 1, 0.0, 40.0, 0.02});

    const Waveform g = Waveform::constant(0.5);
    out.push_back({"fig2a", "Fig. 2(a): |G1|=|G2|=0.5, D1=0.5-0.01i, D2=0.5+0.01i",
                   ScenarioEq2{g, g, {0.5, -0.01}, {0.5, 0.01}}, 1, 0.0, 50.0, 0.05});
    out.push_back({"fig2b", "Fig. 2(b): |G1|=|G2|=0.5, D1=-D2=5-i",
                   ScenarioEq2{g, g, {5.0, -1.0}, {-5.0, 1.0}}, 1, 0.0, 50.0, 0.05});

    struct SechRow {
        const char* name;
        double alpha, gamma, delta;
    };
    for (const SechRow& f : {SechRow{"fig3a", 2, 0, 0}, SechRow{"fig3b", 2, 0, 0.866},
                          SechRow{"fig3c", 5, 0, 0}, SechRow{"fig3d", 5, 0.5, 0}}) {
        std::ostringstream d;
        d << "Fig. 3(" << (f.name + 4) << "): sech pulses, alpha=" << f.alpha
          << " gamma=" << f.gamma << " delta=" << f.delta;
        out.push_back({f.name, d.str(), sech_pulse_scenario(f.alpha, f.delta, f.gamma), 1, -15.0,
                       15.0, 0.02});
    }

    struct GaussRow {
        const char* name;
        double sigma, gamma, Delta;
    };
    for (const GaussRow& f : {GaussRow{"fig4a", 8, 0, 0}, GaussRow{"fig4b", 3, 0, 0}, GaussRow{"fig4c", 1.5, 0, 0},
                          GaussRow{"fig4d", 0.9, 0, 0}, GaussRow{"fig4e", 3, 0.15, 0},
                          GaussRow{"fig4f", 3, 0, 1.5}}) {
        std::ostringstream d;
        d << "Fig. 4(" << (f.name + 4) << "): Gaussian pulses A1=A2=2.5 t1=12 t2=t1-sigma, sigma="
          << f.sigma << " gamma=" << f.gamma << " Delta=" << f.Delta;
        out.push_back({f.name, d.str(), gaussian_pulse_scenario(2.5, 12.0, f.sigma, f.Delta, f.gamma),
                       1, 0.0, 30.0, 0.02});
    }
    return out;
}

}  // namespace

int level_count(const Scenario& s) {
    return std::holds_alternative<TwoLevelScenario>(s) ? 2 : 3;
}

Matrix3 generator_matrix(const Scenario& s, double t) {
    return std::visit(
        overloaded{
            [t](const ScenarioEq2& e) { return eq2_matrix(e, t); },
            [t](const ScenarioEq3& e) { return eq3_matrix(e, t); },
            [t](const ScenarioEq4& e) {
                Matrix3 h = eq4_matrix(e, t);
                h(1, 1) -= kI * e.gamma;
                return h;
            },
            [t](const TwoLevelScenario& e) { return two_level_matrix(e, t); },
        },
        s);
}

Matrix3 coherent_matrix(const Scenario& s, double t) {
    return std::visit(
        overloaded{
            [t](ScenarioEq2 e) {
                e.delta1 = e.delta1.real();
                e.delta2 = e.delta2.real();
                return eq2_matrix(e, t);
            },
            [t](const ScenarioEq3& e) { return eq3_matrix(e, t); },
            [t](ScenarioEq4 e) {
                e.delta = e.delta.real();
                return eq4_matrix(e, t);
            },
            [t](TwoLevelScenario e) {
                e.params.gamma = 0.0;
                return two_level_matrix(e, t);
            },
        },
        s);
}

LadderCoefficients build_generator(const Scenario& s, double t) {
    return decompose(generator_matrix(s, t));
}

GeneratorFn generator_fn(const Scenario& s) {
    if (const auto* e = std::get_if<ScenarioEq4>(&s)) {
        ScenarioEq4 coherent = *e;
        coherent.gamma = 0.0;
        return effective_three_level([coherent](double t) { return eq4_matrix(coherent, t); },
                                     e->gamma, DecayPlacement::middle_level);
    }
    return [s](double t) { return build_generator(s, t); };
}

UnknownPreset::UnknownPreset(const std::string& name)
    : std::out_of_range([&] {
          std::string msg = "unknown preset '" + name + "'; available presets:";
          for (const auto& p : preset_registry()) msg += " " + p.name;
          return msg;
      }()) {}

const std::vector<Preset>& preset_registry() {
    static const std::vector<Preset> registry = make_registry();
    return registry;
}

const Preset& preset(const std::string& name) {
    for (const auto& p : preset_registry())
        if (p.name == name) return p;
    throw UnknownPreset(name);
}

ScenarioEq4 sech_pulse_scenario(double alpha, double delta, double gamma) {
    const double width = 1.0;
    const double amp = alpha / width / std::sqrt(2.0);
    ScenarioEq4 s;
    s.omega12 = Waveform::sech(amp, width);
    s.omega23 = Waveform::sech(amp, width);
    s.delta = 2.0 * delta / width;
    s.gamma = 2.0 * gamma / width;
    return s;
}

ScenarioEq4 gaussian_pulse_scenario(double amplitude, double t1, double sigma, double Delta,
                                    double gamma) {
    ScenarioEq4 s;
    s.omega12 = Waveform::gaussian(amplitude, sigma, t1);
    s.omega23 = Waveform::gaussian(amplitude, sigma, t1 - sigma);
    s.delta = Delta;
    s.gamma = gamma;
    return s;
}

nlohmann::json to_json(const Waveform& w) {
    nlohmann::json j;
    j["amplitude"] = complex_to_json(w.amplitude);
    switch (w.kind) {
        case Waveform::Kind::constant: j["kind"] = "constant"; break;
        case Waveform::Kind::cosine:
            j["kind"] = "cosine";
            j["frequency"] = w.frequency;
            j["phase"] = w.phase;
            break;
        case Waveform::Kind::sech:
            j["kind"] = "sech";
            j["width"] = w.width;
            j["center"] = w.center;
            break;
        case Waveform::Kind::gaussian:
            j["kind"] = "gaussian";
            j["width"] = w.width;
            j["center"] = w.center;
            break;
    }
    return j;
}

Waveform waveform_from_json(const nlohmann::json& j) {
    if (j.is_number() || j.is_array()) return Waveform::constant(complex_from_json(j));
    if (!j.is_object()) throw std::invalid_argument("waveform must be an object: " + j.dump());
    const std::string kind = j.value("kind", "constant");
    const Complex a = complex_field(j, "amplitude");
    if (kind == "constant") return Waveform::constant(a);
    if (kind == "cosine")
        return Waveform::cosine(a, real_field(j, "frequency"), real_field(j, "phase"));
    const double width = real_field(j, "width", 1.0);
    if (!(width > 0)) throw std::invalid_argument("waveform width must be > 0");
    if (kind == "sech") return Waveform::sech(a, width, real_field(j, "center"));
    if (kind == "gaussian") return Waveform::gaussian(a, width, real_field(j, "center"));
    throw std::invalid_argument("unknown waveform kind '" + kind + "'");
}

nlohmann::json to_json(const Scenario& s) {
    return std::visit(
        overloaded{
            [](const ScenarioEq2& e) {
                return nlohmann::json{{"type", "detuned_chain"},
                                      {"G1", to_json(e.G1)},
                                      {"G2", to_json(e.G2)},
                                      {"delta1", complex_to_json(e.delta1)},
                                      {"delta2", complex_to_json(e.delta2)}};
            },
            [](const ScenarioEq3& e) {
                return nlohmann::json{{"type", "offset_levels"},
                                      {"E1", e.E1},
                                      {"delta", e.delta_level},
                                      {"omega12", to_json(e.omega12)},
                                      {"omega23", to_json(e.omega23)}};
            },
            [](const ScenarioEq4& e) {
                return nlohmann::json{{"type", "middle_detuned"},
                                      {"omega12", to_json(e.omega12)},
                                      {"omega23", to_json(e.omega23)},
                                      {"Delta", complex_to_json(e.delta)},
                                      {"gamma", e.gamma}};
            },
            [](const TwoLevelScenario& e) {
                return nlohmann::json{{"type", e.simplified ? "two_level_simplified" : "two_level"},
                                      {"eps", to_json(e.params.eps)},
                                      {"J", to_json(e.params.J)},
                                      {"gamma", e.params.gamma}};
            },
        },
        s);
}

Scenario scenario_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw std::invalid_argument("scenario must be an object with a 'type' field");
    const std::string type = j.at("type").get<std::string>();
    auto wave = [&](const char* key) {
        if (!j.contains(key))
            throw std::invalid_argument("scenario '" + type + "' requires field '" + key + "'");
        return waveform_from_json(j.at(key));
    };
    if (type == "detuned_chain")
        return ScenarioEq2{wave("G1"), wave("G2"), complex_field(j, "delta1"),
                           complex_field(j, "delta2")};
    if (type == "offset_levels")
        return ScenarioEq3{real_field(j, "E1"), real_field(j, "delta"), wave("omega12"),
                           wave("omega23")};
    if (type == "middle_detuned") {
        ScenarioEq4 s{wave("omega12"), wave("omega23"), complex_field(j, "Delta"),
                      real_field(j, "gamma")};
        if (!(s.gamma >= 0)) throw std::invalid_argument("middle_detuned: gamma must be >= 0");
        return s;
    }
    if (type == "two_level" || type == "two_level_simplified") {
        TwoLevelScenario s;
        s.params.eps = wave("eps");
        s.params.J = wave("J");
        s.params.gamma = real_field(j, "gamma");
        s.params.validate();
        s.simplified = type == "two_level_simplified";
        return s;
    }
    throw std::invalid_argument("unknown scenario type '" + type + "'");
}

nlohmann::json to_json(const Preset& p) {
    return nlohmann::json{{"scenario", to_json(p.scenario)},
                          {"initial_level", p.initial_level},
                          {"t_start", p.t_start},
                          {"t_end", p.t_end},
                          {"dt_out", p.dt_out}};
}

}  // namespace threelevel
