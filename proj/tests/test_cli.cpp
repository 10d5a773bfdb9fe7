#include "doctest.h"

#include "qstep/cli.hpp"
#include "support.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <sys/wait.h>

using namespace qstep;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        rows.push_back(fields);
    }
    return rows;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

fs::path scratch_dir() {
    auto d = fs::temp_directory_path() / "qstep_cli_test";
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("sweep at pi/4 for d=2") {
    const auto r = cli({"sweep", "--depth", "2", "--theta-min", "0.7853981633974483", "--theta-max", "1", "--points", "2"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(r.out.rfind("theta,omega,analytic,success,ci_halfwidth\n", 0) == 0);
    CHECK(std::stod(rows[1][1]) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::stod(rows[1][2]) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rows[1].size() == 5);
    CHECK(rows[1][4].empty());
    CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("sweep in degrees") {
    const auto a = cli({"sweep", "--theta-min", "0", "--theta-max", "90", "--points", "3", "--degrees"});
    const auto b = cli({"sweep", "--theta-min", "0", "--theta-max", "1.5707963267948966", "--points", "3"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("exact sweep d=3, 1000 points") {
    const auto r = cli({"sweep", "--depth", "3", "--points", "1000"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 1001);
    double worst = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) worst = std::max(worst, std::abs(std::stod(rows[i][1]) - std::stod(rows[i][2])));
    CHECK(worst < 1e-10);
}

TEST_CASE("shot sweep d=1 stays within 5 sigma and is reproducible") {
    const std::vector<std::string> args{"sweep", "--depth", "1", "--mode", "shots", "--shots", "100000",
                                        "--seed", "99", "--points", "10", "--theta-min", "0.1", "--theta-max", "1.4"};
    const auto r = cli(args);
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 11);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double omega = std::stod(rows[i][1]);
        const double analytic = std::stod(rows[i][2]);
        const double success = std::stod(rows[i][3]);
        const double kept = std::round(success * 100000);
        CHECK(std::abs(omega - analytic) <= 5 * std::sqrt(analytic * (1 - analytic) / kept));
        CHECK(std::stod(rows[i][4]) == doctest::Approx(5 * std::sqrt(omega * (1 - omega) / kept)));
    }
    CHECK(cli(args).out == r.out);
}

TEST_CASE("sweep writes byte-identical files") {
    const auto dir = scratch_dir();
    const auto a = dir / "a.csv", b = dir / "b.csv";
    for (const auto& p : {a, b}) {
        REQUIRE(cli({"sweep", "--builder", "composition", "--mode", "shots", "--shots", "2000", "--seed", "5",
                     "--points", "7", "--out", p.string()})
                    .code == 0);
    }
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
}

TEST_CASE("every builder sweeps") {
    for (const char* b : {"gearbox", "rescaled-plateau", "relu", "subtraction", "composition", "fourier"}) {
        const auto r = cli({"sweep", "--builder", b, "--points", "5"});
        CHECK_MESSAGE(r.code == 0, b);
        const auto rows = csv_rows(r.out);
        REQUIRE(rows.size() == 6);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            CHECK(std::abs(std::stod(rows[i][1]) - std::stod(rows[i][2])) < 1e-10);
        }
    }
}

TEST_CASE("sweep usage errors exit 2") {
    CHECK(cli({"sweep", "--points", "1"}).code == 2);
    CHECK(cli({"sweep", "--theta-min", "1", "--theta-max", "0.5"}).code == 2);
    CHECK(cli({"sweep", "--builder", "nope"}).code == 2);
    CHECK(cli({"sweep", "--mode", "fast"}).code == 2);
    CHECK(cli({"sweep", "--mode", "shots", "--shots", "0"}).code == 2);
    CHECK(cli({"sweep", "--depth", "9"}).code == 2);
    CHECK(cli({"sweep", "--bogus"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("fourier command") {
    const auto r = cli({"fourier", "--depth", "2", "--order", "4"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["normalization"].get<double>() == 0.125);
    const auto& cs = j["cos_squared"];
    CHECK(std::abs(cs["a0_prime"].get<double>() - 0.598) <= 0.005);
    const double expected[4] = {-0.7, 0.314, -0.14, 0.062};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(cs["a_prime"][i].get<double>() - expected[i]) <= 0.005);
    CHECK(j["fourier"]["a"].size() == 4);

    const auto mean = nlohmann::json::parse(cli({"fourier", "--depth", "1", "--order", "0"}).out);
    CHECK(mean["cos_squared"]["a0_prime"].get<double>() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("fourier to an unwritable path exits 2 and leaves nothing behind") {
    const auto dir = scratch_dir() / "missing_dir";
    fs::remove_all(dir);
    const auto target = dir / "series.json";
    const auto r = cli({"fourier", "--out", target.string()});
    CHECK(r.code == 2);
    CHECK(!r.err.empty());
    CHECK(!fs::exists(target));
    CHECK(!fs::exists(dir));

    const auto ok = scratch_dir() / "series.json";
    REQUIRE(cli({"fourier", "--out", ok.string()}).code == 0);
    CHECK(nlohmann::json::parse(slurp(ok))["depth"].get<int>() == 2);
    CHECK(!fs::exists(ok.string() + ".tmp"));
}

TEST_CASE("export") {
    SUBCASE("subtraction census") {
        const auto r = cli({"export", "--builder", "subtraction", "--theta", "0.8"});
        REQUIRE(r.code == 0);
        const auto p = qstep::test::parse_qasm(r.out);
        std::map<std::string, int> census;
        for (const auto& o : p.ops) ++census[o.name];
        CHECK(census == std::map<std::string, int>{{"h", 1}, {"c_ry", 2}, {"cx", 2}, {"x", 2}});
        CHECK(r.out.find("gate c_ry(theta) a,b { ry(theta/2) b; cx a,b; ry(-theta/2) b; cx a,b; }") != std::string::npos);
    }
    SUBCASE("gearbox d=1 is three gates on two qubits") {
        const auto r = cli({"export", "--builder", "gearbox", "--depth", "1", "--theta", "0.3"});
        REQUIRE(r.code == 0);
        const auto p = qstep::test::parse_qasm(r.out);
        CHECK(p.ops.size() == 3);
        std::size_t width = 0;
        for (const auto& [n, s] : p.qregs) width += s;
        CHECK(width == 2);
    }
    SUBCASE("empty params") {
        const auto r = cli({"export"});
        CHECK(r.code == 2);
        CHECK(!r.err.empty());
    }
    SUBCASE("unknown builder") {
        CHECK(cli({"export", "--builder", "nope", "--theta", "0.2"}).code == 2);
    }
}

TEST_CASE("validate passes, reports at least 20 checks, and catches a doubled angle") {
    const auto r = cli({"validate", "--shots", "20000"});
    CHECK(r.code == 0);
    std::size_t checks = 0;
    std::istringstream in(r.out);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("PASS ", 0) == 0 || line.rfind("FAIL ", 0) == 0) ++checks;
    }
    CHECK(checks >= 20);
    CHECK(r.out.find("FAIL") == std::string::npos);

    const auto bad = cli({"validate", "--shots", "20000", "--perturb-angle"});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("FAIL single-step gearbox matrix") != std::string::npos);
}

TEST_CASE("installed binary honours the exit-code contract") {
    const std::string bin = QSTEP_CLI_PATH;
    const auto null = std::string(" >/dev/null 2>&1");
    auto status = [&](const std::string& args) {
        const int raw = std::system((bin + " " + args + null).c_str());
        return WEXITSTATUS(raw);
    };
    CHECK(status("sweep --points 3") == 0);
    CHECK(status("export") == 2);
    CHECK(status("sweep --points 1") == 2);
}
