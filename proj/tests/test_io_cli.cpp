#include "catch2/catch_amalgamated.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "qig/qig.hpp"

using namespace qig;
namespace fs = std::filesystem;

namespace {

const fs::path& scratch_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "qig_cli_scratch";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

int run_cli(const std::string& args, const fs::path& stdout_path) {
  const std::string cmd = "cd " + scratch_dir().string() + " && " + QIG_CLI_PATH + " " + args +
                          " > " + stdout_path.string() + " 2> /dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_state(const std::string& name, const DensityMatrix& rho) {
  const fs::path path = scratch_dir() / name;
  write_json_file(path.string(), matrix_to_json(rho.matrix()));
  return path;
}

}  // namespace

TEST_CASE("matrix json round trips") {
  Rng rng(31);
  ComplexMatrix square = ginibre(3, 3, rng);
  ComplexMatrix back = matrix_from_json(matrix_to_json(square));
  CHECK((back - square).frobenius_norm() == 0.0);
  CHECK(matrix_to_json(square).contains("dim"));

  ComplexMatrix rect = ginibre(2, 4, rng);
  nlohmann::json rj = matrix_to_json(rect);
  CHECK(rj.contains("rows"));
  CHECK((matrix_from_json(rj) - rect).frobenius_norm() == 0.0);

  KrausChannel ch = random_cptp(3, 2, 2, 77);
  KrausChannel ch_back = channel_from_json(channel_to_json(ch));
  CHECK(ch_back.in_dim() == 3);
  CHECK(ch_back.out_dim() == 2);
  Rng probe(5);
  DensityMatrix rho = random_density_rng(3, probe);
  CHECK((apply_channel(ch, rho.matrix()) - apply_channel(ch_back, rho.matrix())).frobenius_norm() <
        1e-14);
}

TEST_CASE("matrix json rejections") {
  nlohmann::json good = matrix_to_json(ComplexMatrix::identity(2));

  nlohmann::json short_entries = good;
  short_entries["entries"].erase(3);
  CHECK_THROWS_AS(matrix_from_json(short_entries), std::invalid_argument);

  nlohmann::json bad_pair = good;
  bad_pair["entries"][0] = {1.0};
  CHECK_THROWS_AS(matrix_from_json(bad_pair), std::invalid_argument);

  nlohmann::json not_finite = good;
  not_finite["entries"][0][0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(matrix_from_json(not_finite), std::invalid_argument);

  nlohmann::json zero_dim;
  zero_dim["dim"] = 0;
  zero_dim["entries"] = nlohmann::json::array();
  CHECK_THROWS_AS(matrix_from_json(zero_dim), std::invalid_argument);

  nlohmann::json oversized;
  oversized["dim"] = 65;
  oversized["entries"] = nlohmann::json::array();
  for (int i = 0; i < 65 * 65; ++i) oversized["entries"].push_back({0.0, 0.0});
  CHECK_THROWS_AS(matrix_from_json(oversized), std::invalid_argument);

  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::array()), std::invalid_argument);
}

TEST_CASE("json file io") {
  CHECK_THROWS_AS(read_json_file((scratch_dir() / "missing.json").string()), std::runtime_error);

  Rng rng(32);
  DensityMatrix rho = random_density_rng(3, rng);
  const fs::path path = write_state("state_io.json", rho);
  DensityMatrix back = read_density_file(path.string());
  CHECK((back.matrix() - rho.matrix()).frobenius_norm() < 1e-15);

  const fs::path bad = scratch_dir() / "not_density.json";
  write_json_file(bad.string(), matrix_to_json(2.0 * ComplexMatrix::identity(2)));
  CHECK_THROWS_AS(read_density_file(bad.string()), std::invalid_argument);
}

TEST_CASE("cli version and catalog listing") {
  const fs::path out = scratch_dir() / "version.txt";
  CHECK(run_cli("--version", out) == 0);
  const std::string version = slurp(out);
  CHECK(version.find(kVersion) != std::string::npos);
  CHECK(version.find("catalog") != std::string::npos);

  const fs::path cat = scratch_dir() / "catalog.txt";
  CHECK(run_cli("catalog", cat) == 0);
  const std::string listing = slurp(cat);
  for (const char* name : {"xlogx", "bures", "bkm", "k_alpha_inv", "wyd_gp"})
    CHECK(listing.find(name) != std::string::npos);
  CHECK(listing.find("xlogx") < listing.find("beta_log"));
  CHECK(listing.find("bures") < listing.find("power_t"));

  const fs::path cat2 = scratch_dir() / "catalog2.txt";
  CHECK(run_cli("catalog", cat2) == 0);
  CHECK(slurp(cat) == slurp(cat2));

  for (const CatalogEntryDoc& entry : catalog_entries()) {
    std::istringstream lines(listing);
    std::string line;
    bool found = false;
    while (std::getline(lines, line)) {
      if (line.rfind(entry.name + " ", 0) == 0) {
        found = true;
        CHECK((line.find("standard") != std::string::npos) == check_standard(entry.representative));
      }
    }
    CHECK(found);
  }
}

TEST_CASE("cli compute matches the library") {
  Rng rng(33);
  DensityMatrix r1 = random_density_rng(3, rng);
  DensityMatrix r2 = random_density_rng(3, rng);
  const fs::path p1 = write_state("rho1.json", r1);
  const fs::path p2 = write_state("rho2.json", r2);

  const fs::path out = scratch_dir() / "div.json";
  CHECK(run_cli("compute divergence --f xlogx --rho1 " + p1.string() + " --rho2 " + p2.string(),
                out) == 0);
  nlohmann::json div = nlohmann::json::parse(slurp(out));
  CHECK(div["f"] == "xlogx");
  CHECK(div["dim"] == 3);
  CHECK(div["value"].get<double>() ==
        Catch::Approx(f_divergence(catalog_get("xlogx"), r1, r2)).margin(1e-15));

  HermitianMatrix a = random_hermitian(3, rng);
  const fs::path pa = scratch_dir() / "contrast.json";
  write_json_file(pa.string(), matrix_to_json(a.matrix()));
  const fs::path out2 = scratch_dir() / "div2.json";
  CHECK(run_cli("compute divergence --f bures --rho1 " + p1.string() + " --rho2 " + p2.string() +
                    " --contrast " + pa.string(),
                out2) == 0);
  nlohmann::json div2 = nlohmann::json::parse(slurp(out2));
  CHECK(div2["value"].get<double>() ==
        Catch::Approx(quasi_entropy(catalog_get("bures"), a.matrix(), r1, r2)).margin(1e-15));

  const fs::path out3 = scratch_dir() / "metric.json";
  CHECK(run_cli("compute metric --f bures --rho " + p1.string() + " --a " + pa.string(), out3) ==
        0);
  nlohmann::json met = nlohmann::json::parse(slurp(out3));
  CHECK(met["value"].get<double>() ==
        Catch::Approx(monotone_metric(catalog_get("bures"), r1, a, a)).margin(1e-15));
  CHECK(met["paths"]["delta"].get<double>() < 1e-9);

  const fs::path out4 = scratch_dir() / "chi2.json";
  CHECK(run_cli("compute chi2 --alpha 0.3 --rho " + p1.string() + " --sigma " + p2.string(),
                out4) == 0);
  nlohmann::json chi = nlohmann::json::parse(slurp(out4));
  CHECK(chi["value"].get<double>() == Catch::Approx(chi2_alpha(0.3, r1, r2)).margin(1e-15));
  CHECK(chi["paths"]["delta"].get<double>() < 1e-9);
}

TEST_CASE("cli verify is deterministic and reports cleanly") {
  const fs::path out1 = scratch_dir() / "verify1.txt";
  const fs::path out2 = scratch_dir() / "verify2.txt";
  const std::string args = "verify --suite pinsker --dims 2,3 --trials 10 --seed 3 --out ";

  CHECK(run_cli(args + "rep1.json", out1) == 0);
  CHECK(run_cli(args + "rep2.json", out2) == 0);
  CHECK(slurp(out1) == slurp(out2));
  CHECK(slurp(scratch_dir() / "rep1.json") == slurp(scratch_dir() / "rep2.json"));

  nlohmann::json rep = nlohmann::json::parse(slurp(scratch_dir() / "rep1.json"));
  CHECK(rep["version"] == version_string());
  CHECK(rep["config"]["suite"] == "pinsker");
  CHECK(rep["config"]["dims"] == nlohmann::json({2, 3}));
  REQUIRE(rep["reports"].size() == 1);
  PropertyReport parsed = property_report_from_json(rep["reports"][0]);
  CHECK(parsed.property_id == "pinsker");
  CHECK(parsed.trials == 20);
  CHECK(parsed.violations == 0);

  const fs::path csv_out = scratch_dir() / "verify_csv.txt";
  CHECK(run_cli("verify --suite metric_convexity --f bures --dims 2 --trials 5 --seed 3"
                " --format csv --out rep.csv",
                csv_out) == 0);
  const std::string csv = slurp(scratch_dir() / "rep.csv");
  std::istringstream lines(csv);
  std::string header, row, extra;
  REQUIRE(std::getline(lines, header));
  REQUIRE(std::getline(lines, row));
  CHECK_FALSE(std::getline(lines, extra));
  CHECK(header == "property_id,functions,dims,seed,trials,tolerance,violations,worst_margin");
  CHECK(row.rfind("metric_convexity,bures,2,3,5,", 0) == 0);
}

TEST_CASE("cli verify surfaces violations and writes counterexamples") {
  fs::remove_all(scratch_dir() / "counterexamples");
  const fs::path out = scratch_dir() / "violations.txt";
  const int code = run_cli(
      "verify --suite block_doubling --f bures --dims 2 --trials 5 --seed 1 --tol 1e-16", out);
  CHECK(code == 2);

  const fs::path dir = scratch_dir() / "counterexamples";
  REQUIRE(fs::exists(dir));
  bool replayed = false;
  for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    CHECK(name.rfind("block_doubling-1-", 0) == 0);
    Counterexample ce = counterexample_from_json(read_json_file(entry.path().string()));
    CHECK(replay_slack(ce) == ce.slack);
    replayed = true;
  }
  CHECK(replayed);
}

TEST_CASE("cli rejects bad invocations") {
  const fs::path out = scratch_dir() / "reject.txt";
  CHECK(run_cli("compute divergence --f xlogx --rho1 missing_a.json --rho2 missing_b.json", out) ==
        1);
  CHECK(run_cli("compute divergence --rho1 x.json --rho2 y.json", out) == 1);

  Rng rng(34);
  const fs::path p1 = write_state("reject_rho.json", random_density_rng(2, rng));
  CHECK(run_cli("compute divergence --f k_alpha_inv:alpha=1.5 --rho1 " + p1.string() + " --rho2 " +
                    p1.string(),
                out) == 1);

  const fs::path bad = scratch_dir() / "reject_bad.json";
  write_json_file(bad.string(), matrix_to_json(2.0 * ComplexMatrix::identity(2)));
  CHECK(run_cli("compute divergence --f xlogx --rho1 " + bad.string() + " --rho2 " + p1.string(),
                out) == 1);

  CHECK(run_cli("verify --f k_alpha_inv:alpha=1.5 --trials 1 --dims 2", out) == 1);
  CHECK(run_cli("verify --suite bogus --trials 1 --dims 2", out) == 1);
  CHECK(run_cli("verify --dims 1..3 --trials 1", out) == 1);
  CHECK(run_cli("verify --dims nonsense --trials 1", out) == 1);
  CHECK(run_cli("--no-such-flag", out) == 1);
  CHECK(run_cli("", out) == 1);
}
