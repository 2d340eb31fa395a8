#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "specstab/io/csv.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch() {
  static int counter = 0;
  fs::path p = fs::temp_directory_path() / ("specstab_cli_" + std::to_string(counter++));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

CliResult run_cli(const std::string& args) {
  fs::path dir = scratch();
  fs::path outf = dir / "out.txt", errf = dir / "err.txt";
  std::string cmd = std::string(SPECSTAB_BIN) + " " + args + " >" + outf.string() + " 2>" +
                    errf.string();
  int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(outf);
  r.err = slurp(errf);
  fs::remove_all(dir);
  return r;
}

fs::path write_config(const std::string& text) {
  fs::path p = scratch() / "config.json";
  std::ofstream(p) << text;
  return p;
}

const char* kMetricsConfig = R"({
  "schema": 1,
  "command": "metrics",
  "grid": {"n": 20},
  "shape": {"kind": "rectangle", "lo": [0.25, 0.25], "hi": [0.6, 0.75]},
  "shape2": {"kind": "rectangle", "lo": [0.35, 0.25], "hi": [0.7, 0.75]}
})";

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("version flag reports the tool version") {
  CliResult r = run_cli("--version");
  CHECK(r.code == 0);
  CHECK(r.out.find("0.1.0") != std::string::npos);
}

TEST_CASE("missing subcommand or config file is a usage error") {
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("run --config /nonexistent/config.json --out /tmp/x").code == 2);
}

TEST_CASE("config syntax and schema violations exit with status two") {
  fs::path bad = write_config("{ this is not json");
  fs::path out = scratch();
  CliResult r = run_cli("run --config " + bad.string() + " --out " + out.string());
  CHECK(r.code == 2);
  CHECK(r.err.find("ConfigError") != std::string::npos);

  fs::path incomplete = write_config(R"({"schema": 1, "command": "metrics",
                                         "grid": {"n": 16}, "shape": {"kind": "box"}})");
  r = run_cli("run --config " + incomplete.string() + " --out " + out.string());
  CHECK(r.code == 2);
  CHECK(r.err.find("shape2") != std::string::npos);
  fs::remove_all(out);
  fs::remove_all(bad.parent_path());
  fs::remove_all(incomplete.parent_path());
}

TEST_CASE("a run without any output directory is refused") {
  fs::path cfg = write_config(kMetricsConfig);
  CliResult r = run_cli("run --config " + cfg.string());
  CHECK(r.code == 2);
  fs::remove_all(cfg.parent_path());
}

TEST_CASE("a metrics run writes its artifacts and reports the location") {
  fs::path cfg = write_config(kMetricsConfig);
  fs::path out = scratch() / "results";
  CliResult r = run_cli("run --config " + cfg.string() + " --out " + out.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("wrote") != std::string::npos);
  CHECK(fs::exists(out / "results.csv"));
  CHECK(fs::exists(out / "summary.json"));
  CHECK(fs::exists(out / "manifest.json"));
  fs::remove_all(cfg.parent_path());
  fs::remove_all(out.parent_path());
}

TEST_CASE("seed overrides flow into the manifest") {
  fs::path cfg = write_config(kMetricsConfig);
  fs::path out = scratch() / "seeded";
  CliResult r = run_cli("run --config " + cfg.string() + " --out " + out.string() + " --seed 9");
  CHECK(r.code == 0);
  nlohmann::json manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["seed"] == 9);
  CHECK(manifest["config"]["seed"] == 9);
  fs::remove_all(cfg.parent_path());
  fs::remove_all(out.parent_path());
}

TEST_CASE("runtime numerical failures exit with status three") {
  fs::path cfg = write_config(R"({
    "schema": 1, "command": "eig", "grid": {"n": 16},
    "shape": {"kind": "disk", "center": [0.5, 0.5], "radius": 1e-09}
  })");
  fs::path out = scratch();
  CliResult r = run_cli("run --config " + cfg.string() + " --out " + out.string());
  CHECK(r.code == 3);
  CHECK(r.err.find("EmptyDomain") != std::string::npos);
  fs::remove_all(cfg.parent_path());
  fs::remove_all(out);
}

TEST_CASE("report joins run directories into one table") {
  fs::path cfg = write_config(kMetricsConfig);
  fs::path a = scratch() / "a", b = scratch() / "b";
  CHECK(run_cli("run --config " + cfg.string() + " --out " + a.string()).code == 0);
  CHECK(run_cli("run --config " + cfg.string() + " --out " + b.string()).code == 0);
  fs::path merged = scratch() / "report.csv";
  CliResult r = run_cli("report " + a.string() + " " + b.string() + " --out " + merged.string());
  CHECK(r.code == 0);
  specstab::io::CsvTable t = specstab::io::parse_csv(slurp(merged));
  CHECK(t.rows.size() == 2);
  CHECK(run_cli("report /nonexistent/run --out " + merged.string()).code == 2);
  fs::remove_all(cfg.parent_path());
  fs::remove_all(a.parent_path());
  fs::remove_all(b.parent_path());
  fs::remove_all(merged.parent_path());
}

TEST_SUITE_END();
