#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"
#include "superres/cli.hpp"

using namespace superres;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) cells.push_back(cell);
  return cells;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("superres_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string tool() {
  const char* path = std::getenv("SUPERRES_TOOL");
  return path ? path : "";
}

int shell(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("scan CSV layout") {
  const auto r = run_cli({"scan", "--steps", "9"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 10);
  CHECK(lines[0] == "phi,response,variance,sensitivity");
  CHECK(r.out.back() == '\n');
  // phi = -pi is a fringe peak: the sensitivity diverges.
  CHECK(split(lines[1])[3] == "inf");
  const auto row = split(lines[2]);
  REQUIRE(row.size() == 4);
  CHECK(std::stod(row[0]) == Approx(-3 * std::numbers::pi / 4));
  CHECK(row[3] != "inf");
}

TEST_CASE("numbers keep 17 significant digits") {
  CHECK(cli::format_number(0.1) == "0.10000000000000001");
  CHECK(cli::format_number(1.0) == "1");
  CHECK(cli::format_number(std::numeric_limits<double>::infinity()) == "inf");
  const double x = 0.123456789012345678;
  CHECK(std::stod(cli::format_number(x)) == x);
}

TEST_CASE("each mode writes its columns") {
  const std::vector<std::pair<std::vector<std::string>, std::string>> cases = {
      {{"mc", "--steps", "8", "--samples", "100"}, "phi,n_samples,hits,response_hat,std_err"},
      {{"fwhm", "--n-photons", "132"}, "n_photons,a,fwhm,narrowing,fwhm_a0,fwhm_a0_closed_form,fwhm_intensity"},
      {{"fringes", "--n-photons", "139", "--b", "3.17", "--bins", "5"},
       "phi_peak,peak,trough,visibility,peak_contrast"},
  };
  for (const auto& [args, header] : cases) {
    const auto r = run_cli(args);
    REQUIRE(r.code == 0);
    CHECK(lines_of(r.out)[0] == header);
  }
  const auto fringes = run_cli({"fringes", "--n-photons", "139", "--b", "3.17", "--bins", "5"});
  CHECK(lines_of(fringes.out).size() == 9);

  const auto fw = run_cli({"fwhm", "--n-photons", "132"});
  const auto row = split(lines_of(fw.out)[1]);
  CHECK(std::stod(row[3]) >= 12.0);
}

TEST_CASE("sens reports the numeric and closed-form minima") {
  const auto r = run_cli({"sens", "--n-photons", "10000"});
  REQUIRE(r.code == 0);
  const auto row = split(lines_of(r.out)[1]);
  REQUIRE(row.size() == 9);
  CHECK(std::stod(row[4]) == Approx(1.37).margin(0.02));
  CHECK(std::stod(row[8]) == Approx(1.033).margin(0.002));
}

TEST_CASE("JSON output has config, records and summary") {
  const auto r = run_cli({"scan", "--steps", "5", "--format", "json", "--n-photons", "132"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.contains("config"));
  CHECK(doc["records"].size() == 5);
  CHECK(doc["records"][0].contains("sensitivity"));
  CHECK(doc["summary"]["narrowing"].get<double>() >= 12.0);
  CHECK(doc["config"]["n_photons"].get<double>() == 132.0);
}

TEST_CASE("JSON output re-ingested as config reproduces the dataset") {
  const fs::path first = scratch_dir() / "first.json";
  const fs::path second = scratch_dir() / "second.json";
  REQUIRE(run_cli({"mc", "--n-photons", "42", "--a", "0.3", "--steps", "16", "--samples", "500", "--seed", "77",
                   "--format", "json", "--out", first.string()})
              .code == 0);
  REQUIRE(run_cli({"mc", "--config", first.string(), "--out", second.string()}).code == 0);
  CHECK(read_file(first) == read_file(second));
}

TEST_CASE("config file values are overridden by flags") {
  const fs::path config = scratch_dir() / "run.toml";
  {
    std::ofstream out(config);
    out << "# scan settings\nn_photons = 50\nphi_steps = 4\nformat = \"json\"\n";
  }
  const auto from_file = run_cli({"scan", "--config", config.string()});
  REQUIRE(from_file.code == 0);
  auto doc = nlohmann::json::parse(from_file.out);
  CHECK(doc["config"]["n_photons"].get<double>() == 50.0);
  CHECK(doc["records"].size() == 4);

  const auto overridden = run_cli({"scan", "--config", config.string(), "--n-photons", "7"});
  REQUIRE(overridden.code == 0);
  doc = nlohmann::json::parse(overridden.out);
  CHECK(doc["config"]["n_photons"].get<double>() == 7.0);
}

TEST_CASE("degrees are converted to radians") {
  const auto rad = run_cli({"scan", "--steps", "7"});
  const auto deg = run_cli({"scan", "--steps", "7", "--degrees", "--phi-start", "-180", "--phi-end", "180"});
  REQUIRE(deg.code == 0);
  CHECK(rad.out == deg.out);
}

TEST_CASE("configuration errors exit with code 2") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {},
           {"scan", "--bogus"},
           {"scan", "--b", "3"},
           {"scan", "--b", "0.5", "--bins", "3"},
           {"scan", "--b", "3", "--bins", "4"},
           {"scan", "--n-photons", "-1"},
           {"scan", "--steps", "1"},
           {"scan", "--phi-start", "1", "--phi-end", "0"},
           {"mc", "--samples", "0"},
           {"mc", "--phi-start", "0", "--phi-end", "10"},
           {"scan", "--efficiency", "0"},
           {"reproduce", "fig9"},
           {"scan", "--format", "xml"},
           {"scan", "--config", "/nonexistent/file.toml"}}) {
    const auto r = run_cli(args);
    CHECK(r.code == cli::kExitConfig);
    CHECK(r.err.rfind("error: kind=config message=\"", 0) == 0);
    CHECK(lines_of(r.err).size() == 1);
  }
}

TEST_CASE("unwritable output exits with code 4") {
  const auto r = run_cli({"scan", "--steps", "3", "--out", "/nonexistent/dir/out.csv"});
  CHECK(r.code == cli::kExitIo);
  CHECK(r.err.rfind("error: kind=io", 0) == 0);
}

TEST_CASE("help exits cleanly") {
  const auto r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("--n-photons") != std::string::npos);
}

TEST_CASE("reproduce datasets") {
  const auto c = run_cli({"reproduce", "fig2c"});
  REQUIRE(c.code == 0);
  const auto lines = lines_of(c.out);
  CHECK(lines[0] == "n_photons,fwhm,fwhm_a0_theory,rayleigh");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = split(lines[i]);
    const double n = std::stod(row[0]);
    CHECK(std::stod(row[2]) == Approx(2 * std::asin(std::sqrt(2 * std::numbers::ln2 / n))).epsilon(1e-15));
    CHECK(std::stod(row[3]) == Approx(std::numbers::pi));
  }

  const auto d = run_cli({"reproduce", "fig2d"});
  REQUIRE(d.code == 0);
  const auto d_lines = lines_of(d.out);
  for (std::size_t i = 1; i < d_lines.size(); ++i) {
    const auto row = split(d_lines[i]);
    const double n = std::stod(row[0]);
    CHECK(std::stod(row[2]) == Approx(1.37 / std::sqrt(n)).epsilon(1e-15));
    CHECK(std::stod(row[3]) == Approx(1 / std::sqrt(n)).epsilon(1e-15));
  }

  for (const char* id : {"fig2a", "fig2b", "fig3a", "fig3b"}) {
    const auto r = run_cli({"reproduce", id, "--steps", "64", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["records"].size() == 64);
    CHECK(doc["config"]["figure_id"] == id);
  }
  const auto a = nlohmann::json::parse(run_cli({"reproduce", "fig3a", "--format", "json"}).out);
  CHECK(a["summary"]["fringe_count"] == 8);
  for (const auto& rec : a["records"]) {
    CHECK(rec["band_lo"].get<double>() <= rec["response"].get<double>());
    CHECK(rec["band_hi"].get<double>() >= rec["response"].get<double>());
  }
}

TEST_CASE("tool binary: seed from environment and worker-independent output") {
  const std::string exe = tool();
  if (exe.empty()) SKIP("SUPERRES_TOOL not set");
  const fs::path dir = scratch_dir();
  const std::string base = "'" + exe + "' mc --steps 32 --samples 2000 ";
  REQUIRE(shell(base + "--seed 99 --workers 1 --out " + (dir / "w1.csv").string()) == 0);
  REQUIRE(shell(base + "--seed 99 --workers 3 --out " + (dir / "w3.csv").string()) == 0);
  REQUIRE(shell("SUPERRES_SEED=99 " + base + "--out " + (dir / "env.csv").string()) == 0);
  REQUIRE(shell("SUPERRES_SEED=5 " + base + "--seed 99 --out " + (dir / "flag.csv").string()) == 0);
  REQUIRE(shell(base + "--seed 100 --out " + (dir / "other.csv").string()) == 0);
  const std::string reference = read_file(dir / "w1.csv");
  CHECK(!reference.empty());
  CHECK(read_file(dir / "w3.csv") == reference);
  CHECK(read_file(dir / "env.csv") == reference);
  CHECK(read_file(dir / "flag.csv") == reference);
  CHECK(read_file(dir / "other.csv") != reference);
  CHECK(shell("'" + exe + "' scan --bins 3 2>/dev/null") == 2);
}
