#include "lesys/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lesys;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    fs::path p = fs::temp_directory_path() / ("lesys_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("missing seed is a configuration error")
{
    std::ostringstream log;
    auto cfg = nlohmann::json::parse(R"({"task":"bubble","N":8,"p":1.1})");
    RunOverrides ov;
    ov.out_dir = scratch("noseed").string();
    CHECK(run_config(cfg, ov, log) == 2);
    CHECK(log.str().find("seed") != std::string::npos);
    CHECK_FALSE(fs::exists(*ov.out_dir));
}

TEST_CASE("exit codes")
{
    std::ostringstream log;
    RunOverrides ov;
    ov.out_dir = scratch("codes").string();
    CHECK(run_config(nlohmann::json::parse(R"({"task":"nope","N":8,"p":1.1,"mc":{"seed":1}})"), ov, log) == 2);
    CHECK(run_config(nlohmann::json::parse(R"({"task":"bubble","N":"eight","p":1.1,"mc":{"seed":1}})"), ov, log) == 2);
    CHECK(run_config(nlohmann::json::parse(R"([1,2])"), ov, log) == 2);
    CHECK(run_config(nlohmann::json::parse(R"({"task":"continuation","N":8,"p":1.1,"mc":{"seed":1},
        "scenario":{"kind":"case-ii","alpha":1,"beta1":1}})"),
                     ov, log) == 2);
    CHECK(run_config(nlohmann::json::parse(R"({"task":"tau-map","N":8,"p":1.1,"mc":{"seed":1},"grid":{"nx":0}})"), ov, log) == 2);
    CHECK(run_config_file("/nonexistent/config.json", ov, log) == 2);
}

TEST_CASE("config hash ignores the output directory and thread count")
{
    auto a = nlohmann::json::parse(R"({"task":"bubble","N":8,"p":1.1,"mc":{"seed":1}})");
    CHECK(config_hash(a).size() == 16);
    CHECK(config_hash(a) != config_hash(nlohmann::json::parse(R"({"task":"bubble","N":8,"p":1.1,"mc":{"seed":2}})")));
}

TEST_CASE("reruns with the same seed are byte-identical")
{
    auto cfg = nlohmann::json::parse(R"({"task":"green-probe","N":6,"p":1.2,"mc":{"seed":17,"samples":2000,"walks":2000},
        "probes":[[0,0,0,0],[0.2,0.1,-0.3,0]]})");
    std::ostringstream log;
    RunOverrides a, b;
    a.out_dir = scratch("rerun_a").string();
    b.out_dir = scratch("rerun_b").string();
    REQUIRE(run_config(cfg, a, log) <= 1);
    REQUIRE(run_config(cfg, b, log) <= 1);
    auto ca = slurp(fs::path(*a.out_dir) / "green_probe.csv");
    CHECK(ca.size() > 100);
    CHECK(ca == slurp(fs::path(*b.out_dir) / "green_probe.csv"));
    CHECK(slurp(fs::path(*a.out_dir) / "summary.json") == slurp(fs::path(*b.out_dir) / "summary.json"));
    auto s = nlohmann::json::parse(slurp(fs::path(*a.out_dir) / "summary.json"));
    CHECK(s["seed"] == 17);
    CHECK(s["outputs"][0] == "green_probe.csv");
}

TEST_CASE("seed override on the command line")
{
    auto cfg = nlohmann::json::parse(R"({"task":"bubble","N":6,"p":2})");
    std::ostringstream log;
    RunOverrides ov;
    ov.seed = 4;
    ov.out_dir = scratch("override").string();
    CHECK(run_config(cfg, ov, log) == 0);
    auto s = nlohmann::json::parse(slurp(fs::path(*ov.out_dir) / "summary.json"));
    CHECK(s["pass"] == true);
    CHECK(s["checks"].size() == 2);
}
