#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qig/qig.hpp"

namespace {

using qig::ComplexMatrix;
using qig::DensityMatrix;
using qig::HermitianMatrix;
using qig::MonotoneFunction;

std::vector<std::size_t> parse_dims(const std::string& spec) {
  std::vector<std::size_t> dims;
  const auto dots = spec.find("..");
  if (dots != std::string::npos) {
    const std::size_t lo = std::stoul(spec.substr(0, dots));
    const std::size_t hi = std::stoul(spec.substr(dots + 2));
    if (lo > hi) throw std::invalid_argument("dims: empty range '" + spec + "'");
    for (std::size_t d = lo; d <= hi; ++d) dims.push_back(d);
  } else {
    std::istringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) throw std::invalid_argument("dims: empty entry in '" + spec + "'");
      dims.push_back(std::stoul(tok));
    }
  }
  if (dims.empty()) throw std::invalid_argument("dims: nothing parsed from '" + spec + "'");
  for (std::size_t d : dims)
    if (d < 2 || d > 16)
      throw std::invalid_argument("dims: " + std::to_string(d) + " outside [2, 16]");
  return dims;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string join_dims(const std::vector<std::size_t>& dims, const std::string& sep) {
  std::vector<std::string> parts;
  for (std::size_t d : dims) parts.push_back(std::to_string(d));
  return join(parts, sep);
}

std::string number_repr(double x) { return nlohmann::json(x).dump(); }

int run_compute(const std::string& mode, const std::string& selector, const std::string& rho1_path,
                const std::string& rho2_path, const std::string& contrast_path, double alpha,
                double floor) {
  nlohmann::json out;
  if (mode == "divergence") {
    const MonotoneFunction f = qig::parse_selector(selector);
    const DensityMatrix r1 = qig::read_density_file(rho1_path, floor);
    const DensityMatrix r2 = qig::read_density_file(rho2_path, floor);
    double value;
    if (contrast_path.empty()) {
      value = qig::f_divergence(f, r1, r2);
    } else {
      value = qig::quasi_entropy(f, qig::read_matrix_file(contrast_path), r1, r2);
    }
    out["mode"] = mode;
    out["f"] = f.selector();
    out["dim"] = r1.dim();
    out["value"] = value;
  } else if (mode == "metric") {
    const MonotoneFunction f = qig::parse_selector(selector);
    const DensityMatrix rho = qig::read_density_file(rho1_path, floor);
    const HermitianMatrix a = qig::read_hermitian_file(rho2_path);
    const HermitianMatrix b = contrast_path.empty() ? a : qig::read_hermitian_file(contrast_path);
    const double primary = qig::monotone_metric(f, rho, a, b);
    const qig::JOperator j = qig::make_j_operator(f, rho, rho);
    const double crosscheck =
        qig::real_checked(qig::hs_inner(a.matrix(), j.apply_inverse(b.matrix())), "metric crosscheck");
    out["mode"] = mode;
    out["f"] = f.selector();
    out["dim"] = rho.dim();
    out["value"] = primary;
    out["paths"] = {{"primary", primary},
                    {"crosscheck", crosscheck},
                    {"delta", std::abs(primary - crosscheck)}};
  } else {
    const DensityMatrix rho = qig::read_density_file(rho1_path, floor);
    const DensityMatrix sigma = qig::read_density_file(rho2_path, floor);
    const double primary = qig::chi2_alpha(alpha, rho, sigma);
    const double crosscheck =
        qig::chi2_k(qig::catalog_get("k_alpha_inv", {{"alpha", alpha}}), rho, sigma);
    out["mode"] = mode;
    out["alpha"] = alpha;
    out["dim"] = rho.dim();
    out["value"] = primary;
    out["paths"] = {{"primary", primary},
                    {"crosscheck", crosscheck},
                    {"delta", std::abs(primary - crosscheck)}};
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

void emit_report(const std::vector<qig::PropertyReport>& reports, const nlohmann::json& config,
                 const std::string& format, const std::string& path) {
  if (format == "json") {
    nlohmann::json doc;
    doc["version"] = qig::version_string();
    doc["config"] = config;
    doc["reports"] = nlohmann::json::array();
    for (const qig::PropertyReport& r : reports)
      doc["reports"].push_back(qig::property_report_to_json(r));
    qig::write_json_file(path, doc);
    return;
  }
  std::ostringstream csv;
  csv << "property_id,functions,dims,seed,trials,tolerance,violations,worst_margin\n";
  for (const qig::PropertyReport& r : reports) {
    csv << r.property_id << "," << join(r.config.functions, ";") << ","
        << join_dims(r.config.dims, ";") << "," << r.seed << "," << r.trials << ","
        << number_repr(r.config.tolerance) << "," << r.violations << ","
        << number_repr(r.worst_margin) << "\n";
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file '" + path + "' for writing");
  out << csv.str();
}

int run_verify(const std::string& suite, const std::string& selector, const std::string& dims_spec,
               std::uint64_t trials, std::uint64_t seed, double tolerance,
               const std::string& out_path, const std::string& format) {
  qig::SuiteConfig cfg;
  cfg.suite = suite;
  cfg.function_filter = selector;
  cfg.dims = parse_dims(dims_spec);
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.tolerance = tolerance;
  if (selector != "all") qig::resolve_function(selector);

  cfg.on_counterexample = [](const qig::Counterexample& ce) {
    std::filesystem::create_directories("counterexamples");
    const std::string path = "counterexamples/" + qig::counterexample_filename(ce);
    qig::write_json_file(path, qig::counterexample_to_json(ce));
  };

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<qig::PropertyReport> reports = qig::run_suite(cfg);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::uint64_t total_violations = 0;
  for (const qig::PropertyReport& r : reports) {
    total_violations += r.violations;
    const std::string fn = r.config.functions.empty() ? "-" : join(r.config.functions, ",");
    std::cout << r.property_id << " f=" << fn << " dims=" << join_dims(r.config.dims, ",")
              << " trials=" << r.trials << " violations=" << r.violations
              << " worst_margin=" << number_repr(r.worst_margin) << "\n";
  }
  std::cout << "total: " << reports.size() << " checks, " << total_violations << " violations\n";
  std::cerr << "elapsed: " << elapsed << "s\n";

  if (!out_path.empty()) {
    nlohmann::json config;
    config["suite"] = suite;
    config["f"] = selector;
    config["dims"] = cfg.dims;
    config["trials"] = trials;
    config["seed"] = seed;
    config["tol"] = tolerance;
    emit_report(reports, config, format, out_path);
    std::cerr << "report written to " << out_path << "\n";
  }
  return total_violations > 0 ? 2 : 0;
}

int run_catalog() {
  std::cout << "name          flags                                 parameters\n";
  for (const qig::CatalogEntryDoc& entry : qig::catalog_entries()) {
    std::vector<std::string> flags;
    if (entry.representative.operator_monotone) flags.push_back("monotone");
    if (entry.representative.operator_convex) flags.push_back("convex");
    if (qig::check_standard(entry.representative)) flags.push_back("standard");
    if (qig::check_symmetric(entry.representative)) flags.push_back("symmetric");
    const std::string flag_text = flags.empty() ? "-" : join(flags, ",");
    std::cout << entry.name << std::string(entry.name.size() < 14 ? 14 - entry.name.size() : 1, ' ')
              << flag_text
              << std::string(flag_text.size() < 38 ? 38 - flag_text.size() : 1, ' ')
              << (entry.parameter_doc.empty() ? "-" : entry.parameter_doc) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi-entropy and monotone-metric toolkit"};
  app.set_version_flag("--version", qig::version_string());
  app.require_subcommand(1);

  std::string mode;
  std::string selector = "all";
  std::string rho1_path, rho2_path, contrast_path;
  double alpha = 0.5;
  double floor = qig::kDefaultFloor;

  CLI::App* compute = app.add_subcommand("compute", "evaluate a divergence, metric, or chi-square");
  compute->add_option("mode", mode, "one of: divergence, metric, chi2")
      ->required()
      ->check(CLI::IsMember({"divergence", "metric", "chi2"}));
  compute->add_option("--f", selector, "function selector, e.g. k_alpha_inv:alpha=0.5");
  compute->add_option("--rho1,--rho", rho1_path, "first state file (JSON)")->required();
  compute->add_option("--rho2,--a,--sigma", rho2_path,
                      "second input file: a state for divergence/chi2, a direction for metric");
  compute->add_option("--contrast,--b", contrast_path,
                      "optional contrast matrix (divergence) or second direction (metric)");
  compute->add_option("--alpha", alpha, "chi-square exponent in [0, 1]");
  compute->add_option("--floor", floor, "eigenvalue floor for state files");

  std::string suite = "all";
  std::string dims_spec = "2..4";
  std::uint64_t trials = 200;
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  std::string out_path;
  std::string format = "json";

  CLI::App* verify = app.add_subcommand("verify", "run randomized checks");
  verify->add_option("--suite", suite, "'all' or a property id");
  verify->add_option("--f", selector, "'all' or a single function selector");
  verify->add_option("--dims", dims_spec, "dimension list: '2..4' or '2,3,4'");
  verify->add_option("--trials", trials, "trials per (property, function, dim) cell");
  verify->add_option("--seed", seed, "base seed");
  verify->add_option("--tol", tolerance, "slack tolerance");
  verify->add_option("--out", out_path, "write the report to this path");
  verify->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* catalog = app.add_subcommand("catalog", "list the function catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (compute->parsed()) {
      if (mode != "chi2" && selector == "all")
        throw std::invalid_argument("compute " + mode + " requires --f <selector>");
      if (rho2_path.empty())
        throw std::invalid_argument("compute " + mode + " requires a second input file");
      return run_compute(mode, selector, rho1_path, rho2_path, contrast_path, alpha, floor);
    }
    if (verify->parsed())
      return run_verify(suite, selector, dims_spec, trials, seed, tolerance, out_path, format);
    if (catalog->parsed()) return run_catalog();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
