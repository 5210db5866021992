#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "invdes/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const fs::path dir = fs::temp_directory_path() / "invdes_cli_out";
    fs::create_directories(dir);
    const std::string out_file = (dir / "stdout.txt").string();
    const std::string cmd =
        std::string(INVDES_CLI_PATH) + " " + args + " > " + out_file + " 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(raw);
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

fs::path sandbox() {
    const fs::path dir = fs::temp_directory_path() / "invdes_cli_data";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("reach verdicts and exit codes") {
    const fs::path dir = sandbox();
    const auto shock = testing::make_profile_on(
        {-2.0, 2.0}, 1e-2, [](double x) { return x <= 0.0 ? 1.0 : 0.0; });
    invdes::io::write_profile_csv_file((dir / "shock.csv").string(), shock);
    const RunResult ok =
        run_cli("reach --flux burgers --T 1 -i " + (dir / "shock.csv").string() +
                " -o " + (dir / "ok").string());
    CHECK(ok.exit_code == 0);
    CHECK(json::parse(ok.out)["reachable"] == true);

    const auto up = testing::make_profile_on(
        {-2.0, 2.0}, 1e-2, [](double x) { return x <= 0.0 ? 0.0 : 1.0; });
    invdes::io::write_profile_csv_file((dir / "up.csv").string(), up);
    const RunResult bad =
        run_cli("reach --flux burgers --T 1 -i " + (dir / "up.csv").string() +
                " -o " + (dir / "bad").string());
    CHECK(bad.exit_code == 2);
    const json jb = json::parse(bad.out);
    CHECK(jb["reachable"] == false);
    CHECK(jb.contains("worst_pair"));

    // Malformed CSV exits 1.
    invdes::io::write_text_file((dir / "junk.csv").string(), "x,value\n1,2\nbroken\n");
    CHECK(run_cli("reach --flux burgers --T 1 -i " + (dir / "junk.csv").string())
              .exit_code == 1);
}

TEST_CASE("design emits envelope artifacts and samples") {
    const fs::path dir = sandbox();
    const auto shock = testing::make_profile_on(
        {-2.0, 2.0}, 1e-2, [](double x) { return x <= 0.0 ? 1.0 : 0.0; });
    invdes::io::write_profile_csv_file((dir / "shock.csv").string(), shock);
    const fs::path out = dir / "design";
    const RunResult r = run_cli("design --flux burgers --T 1 --J 0,1 --x-check 0 -i " +
                                (dir / "shock.csv").string() + " -o " + out.string() +
                                " --sample 0.5 --seed 7 --svg");
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(out / "envelope.csv"));
    CHECK(fs::exists(out / "envelope.json"));
    CHECK(fs::exists(out / "sample.csv"));
    CHECK(fs::exists(out / "sample_random.csv"));
    CHECK(fs::exists(out / "envelope.svg"));
    const json sidecar = json::parse(invdes::io::read_text_file((out / "envelope.json").string()));
    CHECK(sidecar["gaps"].size() == 1);

    // Constraint violation surfaces as exit 2.
    const RunResult infeasible =
        run_cli("design --flux burgers --T 1 --J 0.25,1 -i " +
                (dir / "shock.csv").string() + " -o " + out.string());
    CHECK(infeasible.exit_code == 2);
}

TEST_CASE("evolve then reach round-trips deterministically") {
    const fs::path dir = sandbox();
    const auto fan = testing::make_profile_on(
        {-2.0, 2.0}, 1e-2, [](double x) { return x <= 0.0 ? 0.0 : 1.0; });
    invdes::io::write_profile_csv_file((dir / "fan.csv").string(), fan);
    const fs::path out = dir / "evolve";
    CHECK(run_cli("evolve --flux burgers --t 1 --scheme hopflax -i " +
                  (dir / "fan.csv").string() + " -o " + out.string())
              .exit_code == 0);
    REQUIRE(fs::exists(out / "evolved.csv"));

    // Re-write the emitted profile through the parser and compare verdicts.
    const auto evolved =
        invdes::io::read_profile_csv_file((out / "evolved.csv").string());
    invdes::io::write_profile_csv_file((dir / "evolved2.csv").string(), evolved);
    const RunResult v1 = run_cli("reach --flux burgers --T 1 -i " +
                                 (out / "evolved.csv").string());
    const RunResult v2 = run_cli("reach --flux burgers --T 1 -i " +
                                 (dir / "evolved2.csv").string());
    CHECK(v1.exit_code == 0);
    CHECK(v1.out == v2.out);
}

TEST_CASE("traffic scenario outputs") {
    const fs::path dir = sandbox();
    const auto q = testing::make_profile_on(
        {0.0, 1.0}, 1e-2, [](double t) { return t <= 0.5 ? 0.20 : 0.10; });
    invdes::io::write_profile_csv_file((dir / "q.csv").string(), q);
    invdes::io::write_text_file(
        (dir / "scenario.json").string(),
        json{{"speed", {{"kind", "greenshields"}, {"v_max", 1.0}, {"R", 1.0}}},
             {"rho_bar", 0.4},
             {"L", 0.3}}
            .dump());
    const fs::path out = dir / "traffic";
    const RunResult r = run_cli("traffic --scenario " + (dir / "scenario.json").string() +
                                " -i " + (dir / "q.csv").string() + " -o " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(out / "inflow.csv"));
    CHECK(fs::exists(out / "events.json"));
    CHECK(fs::exists(out / "feasibility.json"));
    const json feas = json::parse(r.out);
    CHECK(feas["feasible_at_L"] == true);
    const json events =
        json::parse(invdes::io::read_text_file((out / "events.json").string()));
    CHECK(events.size() == 1);
}

TEST_CASE("localize command") {
    const fs::path dir = sandbox();
    const auto shock = testing::make_profile_on(
        {-2.0, 2.0}, 1e-2, [](double x) { return x <= 0.0 ? 1.0 : 0.0; });
    invdes::io::write_profile_csv_file((dir / "shock.csv").string(), shock);
    const fs::path out = dir / "localize";
    const RunResult r = run_cli("localize --flux burgers --T 1 --J 0,1 -i " +
                                (dir / "shock.csv").string() + " -o " + out.string());
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["K_o"][0].get<double>() == doctest::Approx(-3.0));
    CHECK(j["K_o"][1].get<double>() == doctest::Approx(2.0));
}
