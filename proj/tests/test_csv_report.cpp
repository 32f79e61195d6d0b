#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bsvi/config.hpp"
#include "bsvi/csv_io.hpp"
#include "bsvi/report.hpp"

using namespace bsvi;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("bsvilab_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("fnv1a matches frozen vectors") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("cloud round-trips through csv exactly") {
    const fs::path dir = scratch_dir("cloud");
    const auto model = make_coefficient_model("brownian", {});
    const BaselineLaw law = simulate_baseline(model, 0.25, TimeGrid(1.0, 6), 40, 99);
    save_cloud(law, "brownian", dir / "cloud.csv");
    CHECK(fs::exists(dir / "cloud.meta.json"));
    const BaselineLaw back = load_cloud(dir / "cloud.csv");
    CHECK(back.cloud().X == law.cloud().X);
    CHECK(back.cloud().dW == law.cloud().dW);
    CHECK(back.grid().M == law.grid().M);
    CHECK(back.grid().T == law.grid().T);
}

TEST_CASE("writers are deterministic byte for byte") {
    const fs::path dir = scratch_dir("writers");
    const auto model = make_coefficient_model("brownian", {});
    const BaselineLaw law = simulate_baseline(model, 0.0, TimeGrid(1.0, 4), 25, 3);
    save_cloud(law, "brownian", dir / "a.csv");
    save_cloud(law, "brownian", dir / "b.csv");
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    const std::string head = slurp(dir / "a.csv").substr(0, 9);
    CHECK(head == "m,i,X,dW\n");
}

TEST_CASE("fmt17 round-trips doubles") {
    for (const double v : {0.1, -3.0, 1e-300, 12345.678901234567, 0.0}) {
        CHECK(std::stod(fmt17(v)) == v);
    }
}

TEST_CASE("manifest refuses to clobber without force") {
    const fs::path dir = scratch_dir("manifest");
    {
        std::ofstream(dir / "out.csv") << "x\n1\n";
    }
    ReportManifest m;
    m.run_id = "t1";
    m.config_hash = "deadbeef";
    m.seed = 5;
    m.artifacts.push_back({"out.csv", ""});
    m.checks.push_back({"dummy", true});
    const ReportManifest filled = emit_report(m, dir);
    CHECK(filled.artifacts[0].hash == file_hash(dir / "out.csv"));
    CHECK(filled.all_pass());
    CHECK_THROWS_AS(emit_report(m, dir), Error);
    CHECK_NOTHROW(emit_report(m, dir, /*force=*/true));
}

TEST_CASE("manifest with no checks or timings is rejected") {
    const fs::path dir = scratch_dir("manifest_empty");
    ReportManifest m;
    m.run_id = "t2";
    CHECK_THROWS_AS(emit_report(m, dir), Error);
}

TEST_CASE("manifest json carries every section") {
    ReportManifest m;
    m.run_id = "r";
    m.config_hash = "h";
    m.seed = 9;
    m.artifacts.push_back({"a.csv", "00"});
    m.checks.push_back({"c", false});
    m.timings.push_back({"solve", 1.5});
    const nlohmann::json j = m.to_json();
    CHECK(j.at("seed") == 9);
    CHECK(j.at("artifacts").size() == 1);
    CHECK(j.at("checks")[0].at("pass") == false);
    CHECK(j.at("timings")[0].at("seconds") == 1.5);
    CHECK_FALSE(m.all_pass());
}
