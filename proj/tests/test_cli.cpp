#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "knmatch/kinematics.hpp"

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args)
{
    static int counter = 0;
    const auto dir = std::filesystem::temp_directory_path();
    const std::string tag = "knmatch_cli_test_" + std::to_string(::getpid()) + "_" +
                            std::to_string(++counter);
    const auto out_path = dir / (tag + ".out");
    const auto err_path = dir / (tag + ".err");
    const std::string cmd = std::string(KNMATCH_CLI_PATH) + " " + args + " > " +
                            out_path.string() + " 2> " + err_path.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::filesystem::remove(out_path);
    std::filesystem::remove(err_path);
    return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::vector<std::string> cells;
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

double cell_value(const std::vector<std::string>& row, std::size_t i)
{
    return std::strtod(row.at(i).c_str(), nullptr);
}

}  // namespace

TEST_CASE("kinematics record round-trips at full precision")
{
    const RunResult r = run_cli("kinematics --energy 1 --angle pi");
    REQUIRE(r.exit_code == 0);
    CHECK(r.err.empty());
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    REQUIRE(rows[1].size() == 10);
    // full-precision column parses back to the identical double
    const double expected = knmatch::scattered_photon_energy(1.0, knmatch::kPi);
    CHECK(cell_value(rows[1], 2) == expected);
    CHECK(std::abs(cell_value(rows[1], 6) - 0.7965) < 1e-4);
    CHECK(rows[1][7] == "0.7965");
}

TEST_CASE("kinematics zero angle transfers nothing")
{
    const RunResult r = run_cli("kinematics --energy 1 --angle 0");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    CHECK(cell_value(rows[1], 4) == 0.0);
    CHECK(cell_value(rows[1], 6) == 0.0);
}

TEST_CASE("kinematics rejects a bad energy naming the flag")
{
    const RunResult r = run_cli("kinematics --energy -1 --angle 0");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("--energy") != std::string::npos);
    CHECK(r.out.empty());
}

TEST_CASE("angle tokens and degrees")
{
    const RunResult as_pi = run_cli("kinematics --energy 1 --angle pi/2");
    const RunResult as_deg = run_cli("kinematics --energy 1 --angle 90 --degrees");
    REQUIRE(as_pi.exit_code == 0);
    REQUIRE(as_deg.exit_code == 0);
    CHECK(as_pi.out == as_deg.out);

    const RunResult bad = run_cli("kinematics --energy 1 --angle nonsense");
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("--angle") != std::string::npos);
}

TEST_CASE("kn command evaluates the differential cross section")
{
    const RunResult r = run_cli("kn --energy 1 --angle pi");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    CHECK(std::abs(cell_value(rows[1], 3) - 0.10597) < 1e-5);

    // forward value in millibarn per steradian is r_e^2
    const RunResult fwd = run_cli("kn --energy 1 --angle 0");
    CHECK(std::abs(cell_value(parse_csv(fwd.out)[1], 4) - 79.40788) < 1e-4);

    const RunResult m = run_cli("kn --energy 1000");
    REQUIRE(m.exit_code == 0);
    const auto mrows = parse_csv(m.out);
    CHECK(cell_value(mrows[1], 2) == knmatch::kPi);
}

TEST_CASE("precision flag widens the display columns")
{
    const RunResult r = run_cli("kinematics --energy 1 --angle pi --precision 6");
    REQUIRE(r.exit_code == 0);
    CHECK(parse_csv(r.out)[1][7] == "0.796496");
}

TEST_CASE("fig3 minimum rule reshapes the sub-MeV curves")
{
    const std::string base = "curves --figure 3 --energies 0.01 --grid-points 64";
    const RunResult own = run_cli(base);
    const RunResult full = run_cli(base + " --fig3-min-rule full");
    REQUIRE(own.exit_code == 0);
    REQUIRE(full.exit_code == 0);
    CHECK(own.out != full.out);
    const RunResult high_own = run_cli("curves --figure 3 --energies 10 --grid-points 64");
    const RunResult high_full =
        run_cli("curves --figure 3 --energies 10 --grid-points 64 --fig3-min-rule full");
    CHECK(high_own.out == high_full.out);
}

TEST_CASE("unknown table and figure ids exit 2")
{
    CHECK(run_cli("table nope").exit_code == 2);
    CHECK(run_cli("curves --figure 9z").exit_code == 2);
}

TEST_CASE("table s1 carries computed, reference and delta columns")
{
    const RunResult r = run_cli("table s1");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 15);
    REQUIRE(rows[0].size() == 17);
    // 1 MeV row
    const auto& mev = rows[7];
    CHECK(cell_value(mev, 0) == 1.0);
    CHECK(std::abs(cell_value(mev, 1) - 0.8941) < 1e-4);
    CHECK(cell_value(mev, 2) == 0.8941);
    CHECK(std::abs(cell_value(mev, 3)) < 1e-4);
    CHECK(std::abs(cell_value(mev, 9) - 0.8309) < 1e-4);
    CHECK(std::abs(cell_value(mev, 13) - 0.7965) < 1e-4);
}

TEST_CASE("table s2 reports the monotone trend")
{
    const RunResult r = run_cli("table s2");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("decreasing: yes") != std::string::npos);
    const auto rows = parse_csv(r.out);
    const auto& row_1000 = rows[14];
    CHECK(std::abs(cell_value(row_1000, 1) - 0.9681) < 1e-3);
    CHECK(std::abs(cell_value(row_1000, 3) - 1.0) < 0.01);  // computed/reference ratio
}

TEST_CASE("table s3 reproduces the near-perfect low-energy match")
{
    const RunResult r = run_cli("table s3");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    const double lowest = cell_value(rows[1], 1);
    CHECK(lowest > 1e-8);
    CHECK(lowest < 1e-7);
    CHECK(std::abs(lowest / 4.0388e-8 - 1.0) < 0.1);
}

TEST_CASE("amplitude chi-square table shows both evaluations and the published values")
{
    const RunResult r = run_cli("table amplitude-chi2");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == "transfer_vs_kn_amplitude");
    CHECK(std::abs(cell_value(rows[1], 1) - 0.01144) < 1e-4);
    CHECK(cell_value(rows[1], 3) == 0.01025);
    CHECK(rows[1][6] == "yes");
    CHECK(std::abs(cell_value(rows[2], 1) - 0.00513) < 1e-4);
    CHECK(cell_value(rows[2], 3) == 0.02286);
}

TEST_CASE("curve bundles evaluate the documented anchors")
{
    const RunResult c1 = run_cli("curves --figure 1c --energies 1 --grid-points 9");
    REQUIRE(c1.exit_code == 0);
    const auto rows = parse_csv(c1.out);
    CHECK(std::abs(cell_value(rows.back(), 1) - 0.2035) < 1e-4);

    const RunResult a1 = run_cli("curves --figure 1a --energies 0.1 --grid-points 9");
    REQUIRE(a1.exit_code == 0);
    CHECK(std::abs(cell_value(parse_csv(a1.out)[1], 1) - 0.6457) < 1e-4);

    const RunResult f1 = run_cli("curves --figure 1f");
    REQUIRE(f1.exit_code == 0);
    const auto frows = parse_csv(f1.out);
    REQUIRE(frows.size() == 15);  // one row per reference energy
    CHECK(std::abs(cell_value(frows[7], 1) - 0.8309) < 1e-4);
}

TEST_CASE("total cross-section table carries barns and the doubling ratio")
{
    const RunResult r = run_cli("total-xs --energies 1e-6,100");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(std::abs(cell_value(rows[1], 2) - 0.66525) < 1e-4);   // Thomson, in barns
    CHECK(std::abs(cell_value(rows[2], 3) - 0.5551) < 1e-3);    // sigma(200)/sigma(100)
    CHECK(cell_value(rows[1], 1) > cell_value(rows[2], 1));
}

TEST_CASE("repeated runs are byte-identical")
{
    const std::string args = "curves --figure 2 --energies 0.001,0.1,1,1000 --grid-points 200";
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
}

TEST_CASE("out file and stdout carry the same artifact")
{
    const auto path = std::filesystem::temp_directory_path() / "knmatch_cli_out_artifact.csv";
    const RunResult to_file = run_cli("table s1 --out " + path.string());
    REQUIRE(to_file.exit_code == 0);
    CHECK(to_file.out.empty());
    const RunResult to_stdout = run_cli("table s1");
    CHECK(slurp(path) == to_stdout.out);
    std::filesystem::remove(path);
}

TEST_CASE("json output carries config, columns and rows")
{
    const RunResult r = run_cli("table s1 --format json");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["config"]["command"] == "table");
    CHECK(doc["config"]["grid_points"] == 2000);
    CHECK(doc["columns"].size() == 17);
    CHECK(doc["rows"].size() == 14);
    CHECK(doc["rows"][13][1] == 1.0);
}

TEST_CASE("config file values apply and flags override them")
{
    const auto cfg = std::filesystem::temp_directory_path() / "knmatch_cli_test.cfg";
    {
        std::ofstream out(cfg);
        out << "grid-points = 7\n";
    }
    const RunResult from_cfg =
        run_cli("curves --figure 1c --energies 1 --config " + cfg.string());
    REQUIRE(from_cfg.exit_code == 0);
    CHECK(parse_csv(from_cfg.out).size() == 8);  // header + 7 grid rows

    const RunResult overridden =
        run_cli("curves --figure 1c --energies 1 --grid-points 3 --config " + cfg.string());
    REQUIRE(overridden.exit_code == 0);
    CHECK(parse_csv(overridden.out).size() == 4);
    std::filesystem::remove(cfg);
}

TEST_CASE("verify passes on the default build")
{
    const RunResult r = run_cli("verify");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("[FAIL]") == std::string::npos);
    CHECK(r.out.find("known deviation") != std::string::npos);
}

TEST_CASE("verify invariants are grid-size independent")
{
    const RunResult r = run_cli("verify --grid-points 10");
    CHECK(r.exit_code == 0);
}

TEST_CASE("verify flags a corrupted rest energy through the table deltas")
{
    const RunResult r = run_cli("verify --electron-rest-energy 0.52");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("[FAIL] s1-reference") != std::string::npos);
}
