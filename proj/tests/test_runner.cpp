#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

#include "threelevel/runner.hpp"

using namespace threelevel;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("threelevel_test_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct CliResult {
    int status;
    std::string err;
};

CliResult cli(const std::string& args, const TempDir& dir, const std::string& stdout_name = "") {
    const fs::path err = dir.path / "stderr.txt";
    std::string cmd = std::string(THREELEVEL_CLI) + " " + args;
    cmd += stdout_name.empty() ? " > /dev/null" : " > " + (dir.path / stdout_name).string();
    cmd += " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(err)};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("uniform grid") {
    const auto g = uniform_grid(0.0, 1.0, 0.1);
    REQUIRE(g.size() == 11);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == doctest::Approx(1.0));
    const auto h = uniform_grid(-15.0, 15.0, 0.02);
    CHECK(h.size() == 1501);
    CHECK(h.back() <= 15.0);
    const auto odd = uniform_grid(0.0, 1.05, 0.1);
    CHECK(odd.size() == 11);
}

TEST_CASE("format_number uses 15 significant digits") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333333");
    CHECK(format_number(-2.5e-12) == "-2.5e-12");
}

TEST_CASE("config parsing and validation") {
    const auto c = RunConfig::from_json(nlohmann::json::parse(
        R"({"preset": "fig4a", "t_end": 3, "tol": 1e-9, "oracle": true, "format": "json"})"));
    CHECK(*c.preset == "fig4a");
    CHECK(*c.t_end == 3.0);
    CHECK(c.tol == 1e-9);
    CHECK(c.oracle);
    CHECK(c.format == OutputFormat::json);
    CHECK_NOTHROW(c.validate());

    CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::parse("[1]")), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::parse(R"({"format": "xml"})")),
                    ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::parse(R"({"tol": "small"})")),
                    ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::parse(R"({"scenario": {"type": "x"}})")),
                    ConfigError);

    RunConfig none;
    CHECK_THROWS_AS(none.validate(), ConfigError);
    RunConfig both = c;
    both.scenario = preset("fig4a").scenario;
    CHECK_THROWS_AS(both.validate(), ConfigError);
    RunConfig inline_no_span;
    inline_no_span.scenario = preset("fig4a").scenario;
    CHECK_THROWS_AS(inline_no_span.validate(), ConfigError);
    RunConfig bad_tol = c;
    bad_tol.tol = 0.0;
    CHECK_THROWS_AS(bad_tol.validate(), ConfigError);
}

TEST_CASE("density from propagator") {
    Matrix3 u = Matrix3::Zero();
    u(2, 0) = 1.0;
    u(0, 1) = 1.0;
    u(1, 2) = 1.0;
    const DensityMatrix rho = density_from_propagator(u, 3, 1);
    CHECK(rho(2, 2) == Complex(1.0));
    CHECK(rho.trace() == Complex(1.0));

    const DensityMatrix two = density_from_propagator(Matrix3::Identity(), 2, 1);
    CHECK(two.rows() == 2);
    CHECK(two(0, 0) == Complex(1.0));
    CHECK(two(1, 1) == Complex(0.0));
}

TEST_CASE("simulate an inline scenario against the oracle") {
    RunConfig c;
    ScenarioEq4 s{Waveform::gaussian(2.5, 3.0, 2.0), Waveform::gaussian(2.5, 3.0, 1.0), 1.5, 0.1};
    c.scenario = s;
    c.t_end = 3.0;
    c.dt_out = 0.1;
    c.oracle = true;
    const RunResult r = simulate(c);
    CHECK_FALSE(r.singular);
    CHECK(r.levels == 3);
    REQUIRE(r.records.size() == 31);
    CHECK(*r.max_oracle_dev < 1e-7);
    CHECK(*r.max_propagator_dev < 1e-7);
    for (const auto& rec : r.records) {
        const double tr = rec.population[0] + rec.population[1] + rec.population[2];
        CHECK(tr <= 1.0 + 1e-12);
        REQUIRE(rec.oracle_dev);
    }
    for (std::size_t k = 1; k < r.records.size(); ++k) {
        const auto& a = r.records[k - 1].population;
        const auto& b = r.records[k].population;
        CHECK(b[0] + b[1] + b[2] < a[0] + a[1] + a[2]);
    }
}

TEST_CASE("two-level runs use the full master equation as oracle") {
    RunConfig c;
    TwoLevelLindbladParams p;
    p.eps = Waveform::cosine(0.6, 1.0);
    p.J = Waveform::constant(0.3);
    p.gamma = 0.2;
    c.scenario = TwoLevelScenario{p, false};
    c.t_end = 1.0;
    c.dt_out = 0.05;
    c.oracle = true;
    const RunResult r = simulate(c);
    CHECK(r.levels == 2);
    CHECK_FALSE(r.singular);
    CHECK(*r.max_oracle_dev < 1e-8);
    CHECK_FALSE(r.max_propagator_dev);
    for (const auto& rec : r.records) {
        CHECK(rec.population[0] + rec.population[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rec.population[2] == 0.0);
        CHECK(rec.abs_rho13 == 0.0);
        CHECK(rec.entropy >= 0.0);
    }
}

TEST_CASE("csv and json writers") {
    RunConfig c;
    c.preset = "fig2a";
    c.t_end = 1.0;
    c.dt_out = 0.5;
    c.oracle = true;
    const RunResult r = simulate(c);
    std::ostringstream csv;
    write_csv(csv, r, true);
    const auto rows = csv_rows(csv.str());
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == csv_columns(true));
    CHECK(rows[0].size() == 27);
    CHECK(rows[1][0] == "0");
    CHECK(rows[3][0] == "1");
    CHECK(csv.str().find("# max_oracle_dev=") != std::string::npos);

    const nlohmann::json j = to_json(r, false);
    CHECK(j.at("scenario") == "fig2a");
    CHECK(j.at("levels") == 3);
    CHECK(j.at("columns").size() == 26);
    CHECK(j.at("records").size() == 3);
    CHECK(j.at("summary").at("singular").is_null());
    CHECK(j.at("records")[2].at("t") == 1.0);
    CHECK_FALSE(j.at("records")[0].contains("oracle_dev"));
}

TEST_CASE("run reports configuration errors with exit 1") {
    std::ostringstream err;
    RunConfig c;
    c.preset = "nosuch";
    CHECK(run(c, err) == 1);
    for (const auto& p : preset_registry()) CHECK(err.str().find(p.name) != std::string::npos);

    TempDir dir;
    RunConfig unwritable;
    unwritable.preset = "fig4f";
    unwritable.t_end = 0.1;
    unwritable.out = (dir.path / "no" / "such" / "dir.csv").string();
    std::ostringstream err2;
    CHECK(run(unwritable, err2) == 1);
    CHECK(err2.str().find("cannot write output file") != std::string::npos);

    RunConfig span;
    span.preset = "fig4f";
    span.t_end = -1.0;
    std::ostringstream err3;
    CHECK(run(span, err3) == 1);
    CHECK(err3.str().find("t_end") != std::string::npos);
}

TEST_CASE("list presets") {
    const std::string text = list_presets();
    for (const char* n : {"fig1", "fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig3d", "fig4a",
                          "fig4b", "fig4c", "fig4d", "fig4e", "fig4f"})
        CHECK(text.find(std::string(n) + "\t") != std::string::npos);
    for (const char* sigma : {"sigma=8 ", "sigma=3 ", "sigma=1.5 ", "sigma=0.9 "})
        CHECK(text.find(sigma) != std::string::npos);
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> alphas;
    while (std::getline(in, line))
        if (line.rfind("fig3", 0) == 0) {
            const auto pos = line.find("alpha=");
            alphas.push_back(line.substr(pos + 6, line.find(' ', pos) - pos - 6));
        }
    CHECK(alphas == std::vector<std::string>{"2", "2", "5", "5"});
}

TEST_CASE("command line") {
    TempDir dir;

    SUBCASE("list") {
        CHECK(cli("--list", dir, "list.txt").status == 0);
        CHECK(slurp(dir.path / "list.txt") == list_presets());
        CHECK(cli("run --list", dir, "list2.txt").status == 0);
        CHECK(slurp(dir.path / "list2.txt") == list_presets());
    }
    SUBCASE("unknown preset") {
        const auto r = cli("run --preset nosuch", dir);
        CHECK(r.status == 1);
        CHECK(r.err.find("fig4f") != std::string::npos);
    }
    SUBCASE("usage errors") {
        CHECK(cli("run --preset fig1 --config x.json", dir).status == 1);
        CHECK(cli("run --preset fig1 --format xml", dir).status == 1);
        CHECK(cli("run --bogus", dir).status == 1);
        CHECK(cli("run", dir).status == 1);
        const auto missing = cli("run --config " + (dir.path / "none.json").string(), dir);
        CHECK(missing.status == 1);
        CHECK(missing.err.find("cannot read config") != std::string::npos);
        std::ofstream(dir.path / "bad.json") << "{ not json";
        const auto bad = cli("run --config " + (dir.path / "bad.json").string(), dir);
        CHECK(bad.status == 1);
        CHECK(bad.err.find("malformed") != std::string::npos);
    }
    SUBCASE("successful run writes the requested file") {
        const fs::path out = dir.path / "fig4f.csv";
        const auto r = cli("run --preset fig4f --t-end 2 --oracle --out " + out.string(), dir);
        CHECK(r.status == 0);
        const auto rows = csv_rows(slurp(out));
        CHECK(rows.size() == 102);
        CHECK(rows[0].back() == "oracle_dev");
        CHECK(r.err.find("max oracle deviation") != std::string::npos);
    }
    SUBCASE("singularity gives exit 2 and keeps the partial output") {
        const fs::path out = dir.path / "fig1.csv";
        const auto r = cli("run --preset fig1 --oracle --tol 1e-10 --out " + out.string(), dir);
        CHECK(r.status == 2);
        const std::string text = slurp(out);
        CHECK(text.find("# singular_at=") != std::string::npos);
        const auto pos = text.find("# max_oracle_dev=");
        REQUIRE(pos != std::string::npos);
        CHECK(std::stod(text.substr(pos + 17)) <= 1e-6);
        CHECK(csv_rows(text).size() >= 2);
    }
    SUBCASE("config file with flag overrides") {
        const fs::path cfg = dir.path / "run.json";
        std::ofstream(cfg) << R"({"preset": "fig2a", "t_end": 20, "dt_out": 1, "format": "json"})";
        const fs::path out = dir.path / "o.json";
        const auto r = cli("run --config " + cfg.string() + " --t-end 2 --out " + out.string(), dir);
        CHECK(r.status == 0);
        const auto j = nlohmann::json::parse(slurp(out));
        CHECK(j.at("records").size() == 3);
        CHECK(j.at("scenario") == "fig2a");
    }
    SUBCASE("identical configs give byte-identical output") {
        const fs::path a = dir.path / "a.csv", b = dir.path / "b.csv";
        CHECK(cli("run --preset fig3b --t-end -10 --oracle --out " + a.string(), dir).status == 0);
        CHECK(cli("run --preset fig3b --t-end -10 --oracle --out " + b.string(), dir).status == 0);
        CHECK(slurp(a) == slurp(b));
        CHECK(slurp(a).size() > 1000);
    }
}
