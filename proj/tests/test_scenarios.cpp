#include <cmath>
#include <random>
#include <set>

#include "doctest.h"

#include "threelevel/scenarios.hpp"

using namespace threelevel;

TEST_CASE("waveforms") {
    CHECK(Waveform::constant(2.0)(7.0) == Complex(2.0));
    CHECK(std::abs(Waveform::cosine(3.0, 2.0, 0.5)(1.0) - 3.0 * std::cos(2.5)) < 1e-15);
    CHECK(std::abs(Waveform::sech(2.0, 0.5, 1.0)(2.0) - 2.0 / std::cosh(2.0)) < 1e-15);
    CHECK(std::abs(Waveform::gaussian(2.5, 3.0, 12.0)(12.0) - 1.25) < 1e-15);
    CHECK(std::abs(Waveform::gaussian(2.5, 3.0, 12.0)(15.0) - 1.25 * std::exp(-1.0)) < 1e-15);
}

TEST_CASE("chain hamiltonian layout") {
    ScenarioEq2 zero{Waveform::constant(0.0), Waveform::constant(0.0), 0.0, 0.0};
    const LadderCoefficients c = build_generator(zero, 1.0);
    for (const auto& h : c.h) CHECK(h == Complex{});

    const Preset& a = preset("fig2a");
    const Matrix3 h = generator_matrix(a.scenario, 3.0);
    CHECK(h(1, 1) == Complex(0.5, -0.01));
    CHECK(std::abs(h(2, 2) - Complex(1.0, 0.0)) < 1e-15);
    CHECK(h(0, 0) == Complex{});
    CHECK(h(0, 1) == Complex(0.5));
    CHECK(h(1, 2) == Complex(0.5));

    ScenarioEq2 phased{Waveform::constant(Complex(0.0, 1.0)), Waveform::constant(2.0), 0.0, 0.0};
    const Matrix3 p = generator_matrix(phased, 0.0);
    CHECK(p(0, 1) == Complex(0.0, -1.0));
    CHECK(p(1, 0) == Complex(0.0, 1.0));
}

TEST_CASE("offset-level hamiltonian layout") {
    ScenarioEq3 s{0.7, -0.3, Waveform::constant(0.2), Waveform::constant(0.4)};
    const Matrix3 h = generator_matrix(s, 0.0);
    CHECK(h(0, 0) == Complex(-0.7));
    CHECK(h(1, 1) == Complex{});
    CHECK(h(2, 2) == Complex(-0.3));
    CHECK(h(0, 1) == Complex(0.2));
    CHECK(h(2, 1) == Complex(0.4));
    CHECK(h(0, 2) == Complex{});
}

TEST_CASE("middle-detuned hamiltonian with decay") {
    ScenarioEq4 s{Waveform::constant(1.0), Waveform::constant(1.0), 0.0, 0.5};
    const Matrix3 h = reconstruct(generator_fn(s)(0.0));
    CHECK(std::abs(h(1, 1) - Complex(0.0, -0.5)) < 1e-15);
    CHECK((generator_matrix(s, 0.0) - h).norm() < 1e-15);

    const Preset& b = preset("fig4b");
    const auto& e = std::get<ScenarioEq4>(b.scenario);
    CHECK(std::abs(e.omega12(12.0) - 1.25) < 1e-15);
    CHECK(e.omega12.width == 3.0);
    CHECK(e.omega23.center == 9.0);
    CHECK(e.gamma == 0.0);
    CHECK(e.delta == Complex{});
}

TEST_CASE("sech-pulse parameterization") {
    const ScenarioEq4 s = sech_pulse_scenario(5.0, 0.25, 0.5);
    const double a12 = s.omega12(0.0).real(), a23 = s.omega23(0.0).real();
    CHECK(std::sqrt(a12 * a12 + a23 * a23) == doctest::Approx(5.0));
    CHECK(s.delta == Complex(0.5));
    CHECK(s.gamma == 1.0);
}

TEST_CASE("preset registry") {
    std::set<std::string> names;
    for (const auto& p : preset_registry()) {
        names.insert(p.name);
        CHECK(p.initial_level == 1);
        CHECK(p.t_end > p.t_start);
        CHECK(p.dt_out > 0.0);
        CHECK_FALSE(p.provenance.empty());
    }
    for (const char* n : {"fig1", "fig1_simplified", "fig2a", "fig2b", "fig3a", "fig3b", "fig3c",
                          "fig3d", "fig4a", "fig4b", "fig4c", "fig4d", "fig4e", "fig4f"})
        CHECK(names.count(n) == 1);

    const auto& f2b = std::get<ScenarioEq2>(preset("fig2b").scenario);
    CHECK(f2b.delta1 == Complex(5.0, -1.0));
    CHECK(f2b.delta2 == -f2b.delta1);
    CHECK(std::abs(f2b.G1(0.0)) == 0.5);
    CHECK(std::abs(f2b.G2(0.0)) == 0.5);

    const ScenarioEq4 f3d = std::get<ScenarioEq4>(preset("fig3d").scenario);
    CHECK(f3d == sech_pulse_scenario(5.0, 0.0, 0.5));

    const auto& f1 = std::get<TwoLevelScenario>(preset("fig1").scenario);
    CHECK_FALSE(f1.simplified);
    CHECK(f1.params.gamma == 0.3);
    Matrix3 expect;
    expect << Complex(0, -0.3), -45.0, 0.0, -45.0, Complex(0, -0.3), 6.0, 0.0, 6.0, 0.0;
    CHECK((generator_matrix(f1, 0.0) - expect).norm() < 1e-14);
    CHECK(std::get<TwoLevelScenario>(preset("fig1_simplified").scenario).simplified);
    CHECK(level_count(f1) == 2);
    CHECK(level_count(preset("fig4a").scenario) == 3);
}

TEST_CASE("unknown preset lists the registry") {
    try {
        (void)preset("nosuch");
        FAIL("expected UnknownPreset");
    } catch (const UnknownPreset& e) {
        const std::string msg = e.what();
        CHECK(msg.find("nosuch") != std::string::npos);
        for (const auto& p : preset_registry()) CHECK(msg.find(p.name) != std::string::npos);
    }
}

TEST_CASE("coherent parts are hermitian") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (const auto& p : preset_registry()) {
        if (level_count(p.scenario) == 2) continue;  // Liouvillians are not Hermitian
        for (int k = 0; k < 20; ++k) CHECK(is_hermitian(coherent_matrix(p.scenario, u(rng))));
    }
}

TEST_CASE("preset json round trip gives identical generators") {
    std::mt19937_64 rng(67);
    for (const auto& p : preset_registry()) {
        const nlohmann::json j = to_json(p);
        const Scenario back = scenario_from_json(nlohmann::json::parse(j.dump()).at("scenario"));
        CHECK(level_count(back) == level_count(p.scenario));
        std::uniform_real_distribution<double> u(p.t_start, p.t_end);
        for (int k = 0; k < 100; ++k) {
            const double t = u(rng);
            CHECK(build_generator(back, t) == build_generator(p.scenario, t));
            CHECK(generator_fn(back)(t) == generator_fn(p.scenario)(t));
        }
    }
}

TEST_CASE("scenario json parsing") {
    const auto s = scenario_from_json(nlohmann::json::parse(R"({
        "type": "middle_detuned",
        "omega12": {"kind": "gaussian", "amplitude": 2.5, "width": 3, "center": 12},
        "omega23": {"kind": "sech", "amplitude": [1, 0.5]},
        "Delta": [1.5, 0],
        "gamma": 0.1
    })"));
    const auto& e = std::get<ScenarioEq4>(s);
    CHECK(e.omega12 == Waveform::gaussian(2.5, 3.0, 12.0));
    CHECK(e.omega23 == Waveform::sech(Complex(1.0, 0.5), 1.0, 0.0));
    CHECK(e.delta == Complex(1.5));
    CHECK(e.gamma == 0.1);

    const auto c = scenario_from_json(
        nlohmann::json::parse(R"({"type": "detuned_chain", "G1": 0.5, "G2": [0, 0.5]})"));
    CHECK(std::get<ScenarioEq2>(c).G2 == Waveform::constant(Complex(0.0, 0.5)));

    for (const char* bad : {R"({"type": "nosuch"})", R"({"G1": 1})", R"([1, 2])",
                            R"({"type": "detuned_chain", "G1": 1})",
                            R"({"type": "middle_detuned", "omega12": 1, "omega23": 1, "gamma": -1})",
                            R"({"type": "two_level", "eps": 1, "J": 1, "gamma": -0.5})",
                            R"({"type": "detuned_chain", "G1": {"kind": "square"}, "G2": 1})",
                            R"({"type": "detuned_chain", "G1": {"kind": "sech", "width": 0}, "G2": 1})",
                            R"({"type": "detuned_chain", "G1": 1, "G2": 1, "delta1": "x"})"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(bad)), std::invalid_argument);
    }
}
