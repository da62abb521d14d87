#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qig/functions.hpp"
#include "qig/io.hpp"
#include "qig/matrix.hpp"
#include "qig/metrics.hpp"
#include "qig/quasi_entropy.hpp"
#include "qig/rng.hpp"
#include "qig/states.hpp"

namespace qig {

struct PropertyConfig {
  std::vector<std::size_t> dims;
  std::vector<std::string> functions;
  double tolerance = 1e-8;
};

struct PropertyReport {
  std::string property_id;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  PropertyConfig config;
  double elapsed_seconds = 0.0;
};

struct Counterexample {
  std::string property_id;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  double slack = 0.0;
  bool flipped = false;
  nlohmann::json inputs;
};

struct CheckOptions {
  std::uint64_t trials = 200;
  std::vector<std::size_t> dims{2, 3, 4};
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  bool flipped = false;
  std::uint64_t trial_offset = 0;
  std::function<void(const Counterexample&)> on_counterexample;
};

inline nlohmann::json counterexample_to_json(const Counterexample& ce) {
  nlohmann::json j;
  j["property_id"] = ce.property_id;
  j["seed"] = ce.seed;
  j["trial"] = ce.trial;
  j["slack"] = ce.slack;
  j["flipped"] = ce.flipped;
  j["inputs"] = ce.inputs;
  return j;
}

inline Counterexample counterexample_from_json(const nlohmann::json& j) {
  for (const char* key : {"property_id", "seed", "trial", "slack", "flipped", "inputs"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("counterexample json: missing field ") + key);
  Counterexample ce;
  ce.property_id = j["property_id"].get<std::string>();
  ce.seed = j["seed"].get<std::uint64_t>();
  ce.trial = j["trial"].get<std::uint64_t>();
  ce.slack = j["slack"].get<double>();
  ce.flipped = j["flipped"].get<bool>();
  ce.inputs = j["inputs"];
  return ce;
}

inline std::string counterexample_filename(const Counterexample& ce) {
  return ce.property_id + "-" + std::to_string(ce.seed) + "-" + std::to_string(ce.trial) + ".json";
}

// Timing is deliberately left out of the serialized form so that repeated
// runs with one seed produce byte-identical reports.
inline nlohmann::json property_report_to_json(const PropertyReport& r,
                                              bool include_timing = false) {
  nlohmann::json j;
  j["property_id"] = r.property_id;
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["violations"] = r.violations;
  if (std::isfinite(r.worst_margin))
    j["worst_margin"] = r.worst_margin;
  else
    j["worst_margin"] = nullptr;
  nlohmann::json cfg;
  cfg["dims"] = r.config.dims;
  cfg["functions"] = r.config.functions;
  cfg["tolerance"] = r.config.tolerance;
  j["config"] = std::move(cfg);
  if (include_timing) j["elapsed_seconds"] = r.elapsed_seconds;
  return j;
}

inline PropertyReport property_report_from_json(const nlohmann::json& j) {
  PropertyReport r;
  r.property_id = j.at("property_id").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.trials = j.at("trials").get<std::uint64_t>();
  r.violations = j.at("violations").get<std::uint64_t>();
  if (j.at("worst_margin").is_null())
    r.worst_margin = std::numeric_limits<double>::infinity();
  else
    r.worst_margin = j.at("worst_margin").get<double>();
  r.config.dims = j.at("config").at("dims").get<std::vector<std::size_t>>();
  r.config.functions = j.at("config").at("functions").get<std::vector<std::string>>();
  r.config.tolerance = j.at("config").at("tolerance").get<double>();
  if (j.contains("elapsed_seconds")) r.elapsed_seconds = j["elapsed_seconds"].get<double>();
  return r;
}

// "power2" is a deliberately non-monotone control for the lemma equivalence
// check; everything else resolves through the catalog.
inline MonotoneFunction resolve_function(const std::string& selector) {
  if (selector == "power2") {
    MonotoneFunction f;
    f.name = "power2";
    f.eval = [](double x) { return x * x; };
    f.at_zero = 0.0;
    return f;
  }
  return parse_selector(selector);
}

namespace detail {

inline DensityMatrix density_from_json(const nlohmann::json& j) {
  return DensityMatrix(HermitianMatrix(matrix_from_json(j)));
}

inline HermitianMatrix hermitian_from_json(const nlohmann::json& j) {
  return HermitianMatrix(matrix_from_json(j));
}

inline ComplexMatrix diag_conjugate(const ComplexMatrix& u, const std::vector<double>& d) {
  const std::size_t n = u.rows();
  ComplexMatrix scaled(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scaled(i, j) = u(i, j) * d[j];
  return scaled * u.adjoint();
}

inline std::vector<double> guarded_probability(std::size_t dim, Rng& rng, double floor_gap) {
  std::vector<double> p = random_probability(dim, rng);
  const double c = std::min(0.5, floor_gap * static_cast<double>(dim));
  for (double& x : p) x = (1.0 - c) * x + c / static_cast<double>(dim);
  return p;
}

// The stencil around (D, A, B) evaluates means of eigenvalue pairs drawn from
// the two perturbed spectra. A pair that lands inside the exact-equality
// window of eval_mean flips a branch whose jump, divided by 4h^2, dwarfs the
// agreement band, so draws are rejected until every pair is well separated.
inline bool hessian_stencil_separated(const HermitianMatrix& d, const HermitianMatrix& a,
                                      const HermitianMatrix& b, double h) {
  const std::size_t n = d.dim();
  for (double step : {h, 0.5 * h}) {
    SpectralDecomposition ea[2] = {
        hermitian_eig(HermitianMatrix(d.matrix() + step * a.matrix())),
        hermitian_eig(HermitianMatrix(d.matrix() + (-step) * a.matrix()))};
    SpectralDecomposition eb[2] = {
        hermitian_eig(HermitianMatrix(d.matrix() + step * b.matrix())),
        hermitian_eig(HermitianMatrix(d.matrix() + (-step) * b.matrix()))};
    for (const SpectralDecomposition& x : ea)
      for (const SpectralDecomposition& y : eb)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            const double lo = x.eigenvalues[i], hi = y.eigenvalues[j];
            if (std::abs(lo - hi) < 1e-6 * std::max(lo, hi)) return false;
          }
  }
  return true;
}

// Draws a channel together with two states whose images stay above the
// positivity floor; the bound on attempts keeps a bad cell from spinning.
inline void draw_channel_pair(nlohmann::json& in, Rng& rng, std::size_t dim) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    KrausChannel ch = random_cptp_rng(dim, dim, 2, rng);
    DensityMatrix r1 = random_density_rng(dim, rng);
    DensityMatrix r2 = random_density_rng(dim, rng);
    try {
      density_from_channel_output(apply_channel(ch, r1.matrix()));
      density_from_channel_output(apply_channel(ch, r2.matrix()));
    } catch (const std::exception&) {
      continue;
    }
    in["channel"] = channel_to_json(ch);
    in["rho1"] = matrix_to_json(r1.matrix());
    in["rho2"] = matrix_to_json(r2.matrix());
    return;
  }
  throw std::runtime_error("propcheck: could not draw channel inputs above the positivity floor");
}

inline nlohmann::json draw_inputs(const std::string& id, Rng& rng, std::size_t dim,
                                  const MonotoneFunction* f, double tol_eff) {
  nlohmann::json in;
  in["dim"] = dim;
  if (f != nullptr) in["f"] = f->selector();

  if (id == "monotonicity_quasi") {
    draw_channel_pair(in, rng, dim);
    in["a"] = matrix_to_json(ginibre(dim, dim, rng));
  } else if (id == "monotonicity_metric") {
    draw_channel_pair(in, rng, dim);
    in["a"] = matrix_to_json(random_hermitian(dim, rng).matrix());
  } else if (id == "lemma_equivalence") {
    draw_channel_pair(in, rng, dim);
    in["tolerance"] = tol_eff;
  } else if (id == "joint_convexity") {
    in["lambda"] = rng.uniform();
    in["rho1"] = matrix_to_json(random_density_rng(dim, rng).matrix());
    in["rho2"] = matrix_to_json(random_density_rng(dim, rng).matrix());
    in["sigma1"] = matrix_to_json(random_density_rng(dim, rng).matrix());
    in["sigma2"] = matrix_to_json(random_density_rng(dim, rng).matrix());
    in["a"] = matrix_to_json(ginibre(dim, dim, rng));
  } else if (id == "metric_convexity" || id == "covariance_concavity") {
    in["lambda"] = rng.uniform();
    in["rho"] = matrix_to_json(random_density_rng(dim, rng).matrix());
    in["sigma"] = matrix_to_json(random_density_rng(dim, rng).matrix());
    if (id == "metric_convexity")
      in["a"] = matrix_to_json(random_hermitian(dim, rng).matrix());
    else
      in["a"] = matrix_to_json(ginibre(dim, dim, rng));
  } else if (id == "pinsker") {
    in["rho1"] = matrix_to_json(random_density_rng(dim, rng).matrix());
    in["rho2"] = matrix_to_json(random_density_rng(dim, rng).matrix());
    in["p"] = guarded_probability(dim, rng, 1e-6);
    in["q"] = guarded_probability(dim, rng, 1e-6);
  } else if (id == "chi2_family") {
    in["rho"] = matrix_to_json(random_density_rng(dim, rng).matrix());
    in["sigma"] = matrix_to_json(random_density_rng(dim, rng).matrix());
    const ComplexMatrix u = random_unitary(dim, rng);
    const std::vector<double> p = guarded_probability(dim, rng, 2.0 * kDefaultFloor);
    const std::vector<double> q = guarded_probability(dim, rng, 2.0 * kDefaultFloor);
    in["rho_c"] = matrix_to_json(diag_conjugate(u, p));
    in["sigma_c"] = matrix_to_json(diag_conjugate(u, q));
  } else if (id == "block_doubling") {
    in["rho1"] = matrix_to_json(random_density_rng(dim, rng).matrix());
    in["rho2"] = matrix_to_json(random_density_rng(dim, rng).matrix());
    in["b"] = matrix_to_json(random_hermitian(dim, rng).matrix());
  } else if (id == "hessian_relation") {
    const double h = 1e-4;
    in["h"] = h;
    for (int attempt = 0; attempt < 50; ++attempt) {
      DensityMatrix d = random_density_rng(dim, rng);
      // Divided differences of the divergence lose accuracy when the spectrum
      // approaches the step size, so the state is pushed 50 steps away from it.
      const double c = std::min(0.5, 50.0 * h * static_cast<double>(dim));
      const HermitianMatrix mixed(
          (1.0 - c) * d.matrix() + (c / static_cast<double>(dim)) * ComplexMatrix::identity(dim));
      HermitianMatrix dirs[2] = {HermitianMatrix::identity(dim), HermitianMatrix::identity(dim)};
      for (HermitianMatrix& dir : dirs) {
        TangentVector t = random_tangent(dim, rng);
        double norm = t.matrix.matrix().frobenius_norm();
        while (norm < 1e-8) {
          t = random_tangent(dim, rng);
          norm = t.matrix.matrix().frobenius_norm();
        }
        ComplexMatrix m = (1.0 / norm) * t.matrix.matrix();
        const cx tr = m.trace();
        m = m - (tr / static_cast<double>(dim)) * ComplexMatrix::identity(dim);
        dir = HermitianMatrix(m);
      }
      if (!hessian_stencil_separated(mixed, dirs[0], dirs[1], h)) continue;
      in["rho"] = matrix_to_json(mixed.matrix());
      in["a"] = matrix_to_json(dirs[0].matrix());
      in["b"] = matrix_to_json(dirs[1].matrix());
      return in;
    }
    throw std::runtime_error(
        "propcheck: could not draw a separated stencil for hessian_relation");
  } else {
    throw std::invalid_argument("propcheck: unknown property id '" + id + "'");
  }
  return in;
}

inline double slack_monotonicity_quasi(const nlohmann::json& in, bool flipped) {
  const MonotoneFunction f = resolve_function(in.at("f").get<std::string>());
  const KrausChannel ch = channel_from_json(in.at("channel"));
  const DensityMatrix r1 = density_from_json(in.at("rho1"));
  const DensityMatrix r2 = density_from_json(in.at("rho2"));
  const ComplexMatrix a = matrix_from_json(in.at("a"));
  const DensityMatrix b1 = density_from_channel_output(apply_channel(ch, r1.matrix()));
  const DensityMatrix b2 = density_from_channel_output(apply_channel(ch, r2.matrix()));
  const double lhs = quasi_entropy(f, a, b1, b2);
  const double rhs = quasi_entropy(f, adjoint_channel(ch).apply(a), r1, r2);
  const double s = lhs - rhs;
  return flipped ? -s : s;
}

inline double slack_monotonicity_metric(const nlohmann::json& in, bool flipped) {
  const MonotoneFunction f = resolve_function(in.at("f").get<std::string>());
  const KrausChannel ch = channel_from_json(in.at("channel"));
  const DensityMatrix r1 = density_from_json(in.at("rho1"));
  const DensityMatrix r2 = density_from_json(in.at("rho2"));
  const HermitianMatrix a = hermitian_from_json(in.at("a"));
  const DensityMatrix b1 = density_from_channel_output(apply_channel(ch, r1.matrix()));
  const DensityMatrix b2 = density_from_channel_output(apply_channel(ch, r2.matrix()));
  const HermitianMatrix ba(apply_channel(ch, a.matrix()));

  const double scalar = two_param_metric(f, r1, r2, a.matrix(), a.matrix()) -
                        two_param_metric(f, b1, b2, ba.matrix(), ba.matrix());

  const JOperator j = make_j_operator(f, r1, r2);
  const JOperator jb = make_j_operator(f, b1, b2);
  const KrausMap adj = adjoint_channel(ch);
  auto gap = [&](const ComplexMatrix& x) {
    return j.apply_inverse(x) - adj.apply(jb.apply_inverse(apply_channel(ch, x)));
  };
  const double psd = symmetrized_min_eigenvalue(superop_matrix(gap, r1.dim()));
  return flipped ? -std::max(scalar, psd) : std::min(scalar, psd);
}

inline double slack_lemma_equivalence(const nlohmann::json& in, bool) {
  const MonotoneFunction f = resolve_function(in.at("f").get<std::string>());
  const KrausChannel ch = channel_from_json(in.at("channel"));
  const DensityMatrix r1 = density_from_json(in.at("rho1"));
  const DensityMatrix r2 = density_from_json(in.at("rho2"));
  const double tol = in.at("tolerance").get<double>();
  const DensityMatrix b1 = density_from_channel_output(apply_channel(ch, r1.matrix()));
  const DensityMatrix b2 = density_from_channel_output(apply_channel(ch, r2.matrix()));

  const JOperator j = make_j_operator(f, r1, r2);
  const JOperator jb = make_j_operator(f, b1, b2);
  const KrausMap adj = adjoint_channel(ch);
  auto first = [&](const ComplexMatrix& x) {
    return j.apply_inverse(x) - adj.apply(jb.apply_inverse(apply_channel(ch, x)));
  };
  auto second = [&](const ComplexMatrix& y) {
    return jb.apply(y) - apply_channel(ch, j.apply(adj.apply(y)));
  };
  const double e1 = symmetrized_min_eigenvalue(superop_matrix(first, r1.dim()));
  const double e2 = symmetrized_min_eigenvalue(superop_matrix(second, b1.dim()));
  const bool h1 = e1 >= -tol;
  const bool h2 = e2 >= -tol;
  return h1 == h2 ? 0.0 : -1.0;
}

inline double slack_joint_convexity(const nlohmann::json& in, bool flipped) {
  const MonotoneFunction f = resolve_function(in.at("f").get<std::string>());
  const double lambda = in.at("lambda").get<double>();
  const DensityMatrix r1 = density_from_json(in.at("rho1"));
  const DensityMatrix r2 = density_from_json(in.at("rho2"));
  const DensityMatrix s1 = density_from_json(in.at("sigma1"));
  const DensityMatrix s2 = density_from_json(in.at("sigma2"));
  const ComplexMatrix a = matrix_from_json(in.at("a"));
  const DensityMatrix m1 = mix_density(lambda, r1, s1);
  const DensityMatrix m2 = mix_density(lambda, r2, s2);

  std::vector<double> comps;
  if (f.operator_convex) {
    const double lhs = lambda * quasi_entropy(f, a, r1, r2) +
                       (1.0 - lambda) * quasi_entropy(f, a, s1, s2);
    comps.push_back(lhs - quasi_entropy(f, a, m1, m2));
  }
  if (f.operator_monotone) {
    const double lhs = lambda * two_param_metric(f, r1, r2, a, a) +
                       (1.0 - lambda) * two_param_metric(f, s1, s2, a, a);
    comps.push_back(lhs - two_param_metric(f, m1, m2, a, a));
  }
  if (comps.empty())
    throw std::invalid_argument(
        "joint_convexity: f must be operator convex or operator monotone");
  const double lo = *std::min_element(comps.begin(), comps.end());
  const double hi = *std::max_element(comps.begin(), comps.end());
  return flipped ? -hi : lo;
}

inline double slack_metric_convexity(const nlohmann::json& in, bool flipped) {
  const MonotoneFunction f = resolve_function(in.at("f").get<std::string>());
  const double lambda = in.at("lambda").get<double>();
  const DensityMatrix rho = density_from_json(in.at("rho"));
  const DensityMatrix sigma = density_from_json(in.at("sigma"));
  const HermitianMatrix a = hermitian_from_json(in.at("a"));
  const DensityMatrix mix = mix_density(lambda, rho, sigma);
  const double s = lambda * monotone_metric(f, rho, a, a) +
                   (1.0 - lambda) * monotone_metric(f, sigma, a, a) -
                   monotone_metric(f, mix, a, a);
  return flipped ? -s : s;
}

inline double slack_covariance_concavity(const nlohmann::json& in, bool flipped) {
  const MonotoneFunction f = resolve_function(in.at("f").get<std::string>());
  const double lambda = in.at("lambda").get<double>();
  const DensityMatrix rho = density_from_json(in.at("rho"));
  const DensityMatrix sigma = density_from_json(in.at("sigma"));
  const ComplexMatrix a = matrix_from_json(in.at("a"));
  const DensityMatrix mix = mix_density(lambda, rho, sigma);
  auto cov = [&](const DensityMatrix& d) {
    return real_checked(generalized_covariance(f, d, a, a), "covariance_concavity");
  };
  const double s = cov(mix) - lambda * cov(rho) - (1.0 - lambda) * cov(sigma);
  return flipped ? -s : s;
}

inline double slack_pinsker(const nlohmann::json& in, bool flipped) {
  const DensityMatrix r1 = density_from_json(in.at("rho1"));
  const DensityMatrix r2 = density_from_json(in.at("rho2"));
  const std::vector<double> p = in.at("p").get<std::vector<double>>();
  const std::vector<double> q = in.at("q").get<std::vector<double>>();

  const double tn = trace_norm(HermitianMatrix(r1.matrix() - r2.matrix()));
  const double quantum = 2.0 * umegaki(r1, r2) - tn * tn;

  const MonotoneFunction xlogx = catalog_get("xlogx");
  const double kl =
      classical_f_divergence(xlogx, ProbabilityVector(p), ProbabilityVector(q));
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  const double classical = 2.0 * kl - tv * tv;

  return flipped ? -std::max(quantum, classical) : std::min(quantum, classical);
}

inline double slack_chi2_family(const nlohmann::json& in, bool flipped) {
  const DensityMatrix rho = density_from_json(in.at("rho"));
  const DensityMatrix sigma = density_from_json(in.at("sigma"));
  const DensityMatrix rho_c = density_from_json(in.at("rho_c"));
  const DensityMatrix sigma_c = density_from_json(in.at("sigma_c"));

  constexpr std::size_t kGrid = 21;
  std::vector<double> v(kGrid);
  for (std::size_t k = 0; k < kGrid; ++k)
    v[k] = chi2_alpha(static_cast<double>(k) / 20.0, rho, sigma);

  std::size_t argmin = 0;
  for (std::size_t k = 1; k < kGrid; ++k)
    if (v[k] < v[argmin]) argmin = k;
  const double alpha_min = static_cast<double>(argmin) / 20.0;
  const double position = std::abs(alpha_min - 0.5) <= 0.05 + 1e-12 ? 0.0 : -1.0;

  double convexity = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k + 1 < kGrid; ++k)
    convexity = std::min(convexity, 0.5 * (v[k - 1] + v[k + 1]) - v[k]);

  const double tn = trace_norm(HermitianMatrix(rho.matrix() - sigma.matrix()));
  const double bound = v.front() - tn * tn;

  const double grid_min = *std::min_element(v.begin(), v.end());
  const double bures_gap = grid_min - chi2_bures(rho, sigma);

  std::vector<double> vc(kGrid);
  for (std::size_t k = 0; k < kGrid; ++k)
    vc[k] = chi2_alpha(static_cast<double>(k) / 20.0, rho_c, sigma_c);
  const auto [lo, hi] = std::minmax_element(vc.begin(), vc.end());
  const double flat = 1e-10 - (*hi - *lo);

  if (flipped) return -std::max({convexity, bound, bures_gap});
  return std::min({position, convexity, bound, bures_gap, flat});
}

inline double slack_block_doubling(const nlohmann::json& in, bool) {
  const MonotoneFunction f = resolve_function(in.at("f").get<std::string>());
  const DensityMatrix r1 = density_from_json(in.at("rho1"));
  const DensityMatrix r2 = density_from_json(in.at("rho2"));
  const HermitianMatrix b = hermitian_from_json(in.at("b"));

  const auto [bigd, biga] = block_embed(r1, r2, b.matrix());
  const JOperator jd = make_j_operator(f, bigd, bigd, std::min(r1.floor(), r2.floor()));
  const JOperator j12 = make_j_operator(f, r1, r2);

  const double lhs1 = real_checked(jd.form(biga.matrix(), biga.matrix()), "block_doubling");
  const double rhs1 = 2.0 * real_checked(j12.form(b.matrix(), b.matrix()), "block_doubling");
  const double lhs2 =
      real_checked(jd.inverse_form(biga.matrix(), biga.matrix()), "block_doubling");
  const double rhs2 =
      2.0 * real_checked(j12.inverse_form(b.matrix(), b.matrix()), "block_doubling");

  const double rel1 = std::abs(lhs1 - rhs1) / std::max(1.0, std::abs(lhs1));
  const double rel2 = std::abs(lhs2 - rhs2) / std::max(1.0, std::abs(lhs2));
  return -std::max(rel1, rel2);
}

inline double slack_hessian_relation(const nlohmann::json& in, bool) {
  const MonotoneFunction big_f = resolve_function(in.at("f").get<std::string>());
  const double h = in.at("h").get<double>();
  const DensityMatrix rho = density_from_json(in.at("rho"));
  const HermitianMatrix a = hermitian_from_json(in.at("a"));
  const HermitianMatrix b = hermitian_from_json(in.at("b"));

  const double hess = metric_from_divergence_hessian(big_f, rho, a, b, h);
  const MonotoneFunction fr = ruskai_f_from_F(big_f);
  const double metric = monotone_metric(fr, rho, a, b);
  const double rel = std::abs(hess - metric) / std::max(1.0, std::abs(metric));
  return std::max(1e-4, 10.0 * h * h) - rel;
}

inline double slack_from_inputs(const std::string& id, const nlohmann::json& in, bool flipped) {
  if (id == "monotonicity_quasi") return slack_monotonicity_quasi(in, flipped);
  if (id == "monotonicity_metric") return slack_monotonicity_metric(in, flipped);
  if (id == "lemma_equivalence") return slack_lemma_equivalence(in, flipped);
  if (id == "joint_convexity") return slack_joint_convexity(in, flipped);
  if (id == "metric_convexity") return slack_metric_convexity(in, flipped);
  if (id == "covariance_concavity") return slack_covariance_concavity(in, flipped);
  if (id == "pinsker") return slack_pinsker(in, flipped);
  if (id == "chi2_family") return slack_chi2_family(in, flipped);
  if (id == "block_doubling") return slack_block_doubling(in, flipped);
  if (id == "hessian_relation") return slack_hessian_relation(in, flipped);
  throw std::invalid_argument("propcheck: unknown property id '" + id + "'");
}

}  // namespace detail

inline double effective_tolerance(const std::string& id, double base, std::size_t dim) {
  double t = dim <= 6 ? base : base * static_cast<double>(dim);
  if (id == "block_doubling") t = std::min(t, 1e-9);
  return t;
}

inline double replay_slack(const Counterexample& ce) {
  return detail::slack_from_inputs(ce.property_id, ce.inputs, ce.flipped);
}

struct PropertyInfo {
  std::string id;
  bool flippable = false;
  bool f_independent = false;
  std::vector<std::string> default_functions;
};

inline const std::vector<PropertyInfo>& property_registry() {
  static const std::vector<PropertyInfo> registry = {
      {"monotonicity_quasi", true, false,
       {"bures", "bkm", "k_alpha_inv:alpha=0.25", "k_alpha_inv:alpha=0.5", "affine:s=1",
        "power_t:t=0.25", "power_t:t=0.5"}},
      {"monotonicity_metric", true, false,
       {"bures", "bkm", "k_alpha_inv:alpha=0.25", "k_alpha_inv:alpha=0.5", "affine:s=1",
        "power_t:t=0.5"}},
      {"lemma_equivalence", false, false, {"bures", "affine:s=1", "power_t:t=0.5", "power2"}},
      {"joint_convexity", true, false,
       {"xlogx", "beta_log:beta=0.5", "chi2", "degree_alpha:alpha=0.5", "bures", "bkm",
        "k_alpha_inv:alpha=0.5", "affine:s=1"}},
      {"metric_convexity", true, false, {"bures", "bkm", "k_alpha_inv:alpha=0.3", "power_t:t=0.5"}},
      {"covariance_concavity", true, false,
       {"bures", "bkm", "k_alpha_inv:alpha=0.3", "power_t:t=0.5"}},
      {"pinsker", true, true, {}},
      {"chi2_family", true, true, {}},
      {"block_doubling", false, false,
       {"bures", "bkm", "k_alpha_inv:alpha=0.3", "k_alpha_inv:alpha=0.7", "power_t:t=0.5"}},
      {"hessian_relation", false, false, {"xlogx", "chi2"}},
  };
  return registry;
}

inline const PropertyInfo& property_info(const std::string& id) {
  for (const PropertyInfo& p : property_registry())
    if (p.id == id) return p;
  throw std::invalid_argument("propcheck: unknown property id '" + id + "'");
}

inline PropertyReport run_check(const std::string& id, const MonotoneFunction* f,
                                const CheckOptions& opts) {
  const PropertyInfo& info = property_info(id);
  if (info.f_independent && f != nullptr)
    throw std::invalid_argument("run_check: " + id + " does not take a function");
  if (!info.f_independent && f == nullptr)
    throw std::invalid_argument("run_check: " + id + " requires a function");
  if (opts.dims.empty()) throw std::invalid_argument("run_check: dims must be non-empty");
  for (std::size_t d : opts.dims)
    if (d < 2 || d > 16)
      throw std::invalid_argument("run_check: dimensions must lie in [2, 16]");
  if (opts.trials < 1) throw std::invalid_argument("run_check: trials must be >= 1");
  if (!(opts.tolerance > 0.0)) throw std::invalid_argument("run_check: tolerance must be positive");

  PropertyReport rep;
  rep.property_id = id;
  rep.seed = opts.seed;
  rep.config.dims = opts.dims;
  rep.config.tolerance = opts.tolerance;
  if (f != nullptr) rep.config.functions.push_back(f->selector());

  const auto t0 = std::chrono::steady_clock::now();
  const std::string fsel = f != nullptr ? f->selector() : std::string{};
  std::uint64_t name_counter = opts.trial_offset;
  for (std::size_t dim : opts.dims) {
    const std::uint64_t cell =
        substream_seed(substream_seed(opts.seed, fnv1a64(id + "|" + fsel)), dim);
    const double tol_eff = effective_tolerance(id, opts.tolerance, dim);
    for (std::uint64_t t = 0; t < opts.trials; ++t, ++name_counter) {
      Rng rng(substream_seed(cell, t));
      const nlohmann::json inputs = detail::draw_inputs(id, rng, dim, f, tol_eff);
      const double slack = detail::slack_from_inputs(id, inputs, opts.flipped);
      ++rep.trials;
      rep.worst_margin = std::min(rep.worst_margin, slack);
      if (slack < -tol_eff) {
        ++rep.violations;
        if (opts.on_counterexample)
          opts.on_counterexample(
              Counterexample{id, opts.seed, name_counter, slack, opts.flipped, inputs});
      }
    }
  }
  rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

namespace detail {

inline bool positive_on_grid(const MonotoneFunction& f) {
  for (int k = 0; k <= 16; ++k) {
    const double x = std::pow(10.0, -4.0 + 0.5 * k);
    if (!(f.eval(x) > 0.0)) return false;
  }
  return true;
}

}  // namespace detail

inline bool property_admits(const std::string& id, const MonotoneFunction& f) {
  if (id == "monotonicity_quasi") return f.operator_monotone && f.at_zero >= 0.0;
  if (id == "monotonicity_metric") return f.operator_monotone && detail::positive_on_grid(f);
  if (id == "lemma_equivalence") return detail::positive_on_grid(f);
  if (id == "joint_convexity") return f.operator_convex || f.operator_monotone;
  if (id == "metric_convexity") return f.operator_monotone && check_symmetric(f);
  if (id == "covariance_concavity") return f.operator_monotone && check_standard(f);
  if (id == "block_doubling") return f.operator_monotone && check_standard(f);
  if (id == "hessian_relation") return f.operator_convex && std::abs(f.eval(1.0)) <= 1e-12;
  return false;
}

inline PropertyReport check_monotonicity_quasi(const MonotoneFunction& f,
                                               const CheckOptions& opts) {
  if (!property_admits("monotonicity_quasi", f))
    throw std::invalid_argument(
        "check_monotonicity_quasi: f must be operator monotone with f(0) >= 0");
  return run_check("monotonicity_quasi", &f, opts);
}

inline PropertyReport check_monotonicity_metric(const MonotoneFunction& f,
                                                const CheckOptions& opts) {
  if (!property_admits("monotonicity_metric", f))
    throw std::invalid_argument(
        "check_monotonicity_metric: f must be operator monotone and positive");
  return run_check("monotonicity_metric", &f, opts);
}

inline PropertyReport check_lemma_equivalence(const MonotoneFunction& f,
                                              const CheckOptions& opts) {
  if (!property_admits("lemma_equivalence", f))
    throw std::invalid_argument("check_lemma_equivalence: f must be positive on (0, inf)");
  return run_check("lemma_equivalence", &f, opts);
}

inline PropertyReport check_joint_convexity(const MonotoneFunction& f, const CheckOptions& opts) {
  if (!property_admits("joint_convexity", f))
    throw std::invalid_argument(
        "check_joint_convexity: f must be operator convex or operator monotone");
  return run_check("joint_convexity", &f, opts);
}

inline PropertyReport check_metric_convexity(const MonotoneFunction& f, const CheckOptions& opts) {
  if (!property_admits("metric_convexity", f))
    throw std::invalid_argument(
        "check_metric_convexity: f must be operator monotone and symmetric");
  return run_check("metric_convexity", &f, opts);
}

inline PropertyReport check_covariance_concavity(const MonotoneFunction& f,
                                                 const CheckOptions& opts) {
  if (!property_admits("covariance_concavity", f))
    throw std::invalid_argument("check_covariance_concavity: f must be standard");
  return run_check("covariance_concavity", &f, opts);
}

inline PropertyReport check_pinsker(const CheckOptions& opts) {
  return run_check("pinsker", nullptr, opts);
}

inline PropertyReport check_chi2_family(const CheckOptions& opts) {
  return run_check("chi2_family", nullptr, opts);
}

inline PropertyReport check_block_doubling(const MonotoneFunction& f, const CheckOptions& opts) {
  if (!property_admits("block_doubling", f))
    throw std::invalid_argument(
        "check_block_doubling: f must be operator monotone and standard");
  return run_check("block_doubling", &f, opts);
}

inline PropertyReport check_hessian_relation(const MonotoneFunction& f,
                                             const CheckOptions& opts) {
  if (!property_admits("hessian_relation", f))
    throw std::invalid_argument("check_hessian_relation: F must be operator convex");
  return run_check("hessian_relation", &f, opts);
}

struct SuiteConfig {
  std::string suite = "all";
  std::string function_filter = "all";
  std::vector<std::size_t> dims{2, 3, 4};
  std::uint64_t trials = 200;
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  bool flipped = false;
  std::function<void(const Counterexample&)> on_counterexample;
};

inline std::vector<PropertyReport> run_suite(const SuiteConfig& cfg) {
  std::vector<const PropertyInfo*> selected;
  for (const PropertyInfo& p : property_registry())
    if (cfg.suite == "all" || cfg.suite == p.id) selected.push_back(&p);
  if (selected.empty()) {
    std::string ids;
    for (const PropertyInfo& p : property_registry()) ids += " " + p.id;
    throw std::invalid_argument("run_suite: unknown suite '" + cfg.suite + "'; valid:" + ids);
  }

  std::vector<PropertyReport> reports;
  for (const PropertyInfo* prop : selected) {
    if (cfg.flipped && !prop->flippable) continue;
    CheckOptions opts;
    opts.trials = cfg.trials;
    opts.dims = cfg.dims;
    opts.seed = cfg.seed;
    opts.tolerance = cfg.tolerance;
    opts.flipped = cfg.flipped;
    opts.on_counterexample = cfg.on_counterexample;

    if (prop->f_independent) {
      reports.push_back(run_check(prop->id, nullptr, opts));
      continue;
    }
    const bool explicit_filter = cfg.function_filter != "all";
    const std::vector<std::string> selectors =
        explicit_filter ? std::vector<std::string>{cfg.function_filter} : prop->default_functions;
    std::uint64_t offset = 0;
    for (const std::string& sel : selectors) {
      const MonotoneFunction f = resolve_function(sel);
      if (!property_admits(prop->id, f)) {
        if (explicit_filter && cfg.suite != "all")
          throw std::invalid_argument("run_suite: function '" + sel +
                                      "' is not admissible for property '" + prop->id + "'");
        continue;
      }
      opts.trial_offset = offset;
      offset += cfg.trials * cfg.dims.size();
      reports.push_back(run_check(prop->id, &f, opts));
    }
  }
  return reports;
}

inline std::vector<PropertyReport> run_negation_controls(SuiteConfig cfg) {
  cfg.flipped = true;
  return run_suite(cfg);
}

}  // namespace qig
