#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qig {

// Scalar function on (0, inf) together with the structural flags the
// information-geometric constructions care about. at_zero stores the limit
// at 0+ (may be +-inf) and is consulted only where an argument can be 0.
struct MonotoneFunction {
  std::string name;
  std::map<std::string, double> params;
  std::function<double(double)> eval;
  double at_zero = 0.0;
  bool operator_monotone = false;
  bool operator_convex = false;
  bool standard = false;

  std::string selector() const {
    std::ostringstream os;
    os << name;
    char sep = ':';
    for (const auto& [k, v] : params) {
      os << sep << k << '=' << v;
      sep = ',';
    }
    return os.str();
  }
};

namespace detail {

inline double xlogx_eval(double x) { return x * std::log(x); }

// (x-1)/log(x); series in t = x-1 near 1 avoids 0/0 cancellation.
inline double bkm_eval(double x) {
  const double t = x - 1.0;
  if (std::abs(t) < 1e-4) return 1.0 + t * (0.5 + t * (-1.0 / 12.0 + t * (1.0 / 24.0)));
  return t / std::log(x);
}

inline double require_param(const std::map<std::string, double>& params, const std::string& key,
                            const std::string& fname) {
  const auto it = params.find(key);
  if (it == params.end())
    throw std::invalid_argument("catalog_get: " + fname + " requires parameter '" + key + "'");
  return it->second;
}

inline void require_param_count(const std::map<std::string, double>& params, std::size_t n,
                                const std::string& fname) {
  if (params.size() != n)
    throw std::invalid_argument("catalog_get: wrong parameter count for " + fname);
}

}  // namespace detail

// Named function catalog. Parameterized entries validate their ranges here;
// the stored flags are cross-checked numerically by the test suite.
inline MonotoneFunction catalog_get(const std::string& name,
                                    const std::map<std::string, double>& params = {}) {
  MonotoneFunction f;
  f.name = name;
  f.params = params;

  if (name == "xlogx") {
    detail::require_param_count(params, 0, name);
    f.eval = detail::xlogx_eval;
    f.at_zero = 0.0;
    f.operator_convex = true;
  } else if (name == "log") {
    detail::require_param_count(params, 0, name);
    f.eval = [](double x) { return std::log(x); };
    f.at_zero = -std::numeric_limits<double>::infinity();
    f.operator_monotone = true;
  } else if (name == "beta_log") {
    detail::require_param_count(params, 1, name);
    const double beta = detail::require_param(params, "beta", name);
    if (!(beta >= 0.0 && beta < 1.0))
      throw std::invalid_argument("catalog_get: beta_log requires beta in [0, 1)");
    if (beta == 0.0) {
      f.eval = detail::xlogx_eval;
    } else {
      f.eval = [beta](double x) { return x * (std::pow(x, beta) - 1.0) / beta; };
    }
    f.at_zero = 0.0;
    f.operator_convex = true;
  } else if (name == "degree_alpha") {
    detail::require_param_count(params, 1, name);
    const double alpha = detail::require_param(params, "alpha", name);
    if (!(alpha > 0.0 && alpha < 1.0))
      throw std::invalid_argument("catalog_get: degree_alpha requires alpha in (0, 1)");
    const double norm = 1.0 / (alpha * (1.0 - alpha));
    f.eval = [alpha, norm](double x) { return norm * (1.0 - std::pow(x, alpha)); };
    f.at_zero = norm;
    f.operator_convex = true;
  } else if (name == "wyd_gp") {
    detail::require_param_count(params, 1, name);
    const double p = detail::require_param(params, "p", name);
    if (!(p >= 0.5 && p <= 2.0))
      throw std::invalid_argument("catalog_get: wyd_gp requires p in [1/2, 2]");
    if (p == 1.0) {
      f.eval = detail::xlogx_eval;
    } else {
      const double norm = 1.0 / (p * (1.0 - p));
      f.eval = [p, norm](double x) { return norm * (x - std::pow(x, p)); };
    }
    f.at_zero = 0.0;
  } else if (name == "bures") {
    detail::require_param_count(params, 0, name);
    f.eval = [](double x) { return 0.5 * (1.0 + x); };
    f.at_zero = 0.5;
    f.operator_monotone = true;
    f.operator_convex = true;
    f.standard = true;
  } else if (name == "bkm") {
    detail::require_param_count(params, 0, name);
    f.eval = detail::bkm_eval;
    f.at_zero = 0.0;
    f.operator_monotone = true;
    f.standard = true;
  } else if (name == "chi2") {
    detail::require_param_count(params, 0, name);
    f.eval = [](double x) { const double t = x - 1.0; return t * t; };
    f.at_zero = 1.0;
    f.operator_convex = true;
  } else if (name == "k_alpha_inv") {
    detail::require_param_count(params, 1, name);
    const double alpha = detail::require_param(params, "alpha", name);
    if (!(alpha >= 0.0 && alpha <= 1.0))
      throw std::invalid_argument("catalog_get: k_alpha_inv requires alpha in [0, 1]");
    f.eval = [alpha](double x) {
      return 2.0 / (std::pow(x, -alpha) + std::pow(x, alpha - 1.0));
    };
    f.at_zero = 0.0;
    f.operator_monotone = true;
    f.standard = true;
  } else if (name == "affine") {
    detail::require_param_count(params, 1, name);
    const double s = detail::require_param(params, "s", name);
    if (!(s > 0.0)) throw std::invalid_argument("catalog_get: affine requires s > 0");
    f.eval = [s](double x) { return s * x + 1.0; };
    f.at_zero = 1.0;
    f.operator_monotone = true;
    f.operator_convex = true;
  } else if (name == "power_t") {
    detail::require_param_count(params, 1, name);
    const double t = detail::require_param(params, "t", name);
    if (!(t >= 0.0 && t <= 1.0))
      throw std::invalid_argument("catalog_get: power_t requires t in [0, 1]");
    f.eval = [t](double x) { return std::pow(x, t); };
    f.at_zero = (t == 0.0) ? 1.0 : 0.0;
    f.operator_monotone = true;
    f.standard = (std::abs(t - 0.5) <= 1e-12);
  } else {
    throw std::invalid_argument(
        "catalog_get: unknown function '" + name +
        "'; valid names: xlogx, log, beta_log, degree_alpha, wyd_gp, bures, bkm, chi2, "
        "k_alpha_inv, affine, power_t");
  }
  return f;
}

// "name" or "name:key=value,key=value".
inline MonotoneFunction parse_selector(const std::string& selector) {
  const std::size_t colon = selector.find(':');
  const std::string name = selector.substr(0, colon);
  if (name.empty()) throw std::invalid_argument("parse_selector: empty function name");
  std::map<std::string, double> params;
  if (colon != std::string::npos) {
    const std::string rest = selector.substr(colon + 1);
    if (rest.empty()) throw std::invalid_argument("parse_selector: empty parameter list");
    std::size_t pos = 0;
    while (pos < rest.size()) {
      std::size_t comma = rest.find(',', pos);
      if (comma == std::string::npos) comma = rest.size();
      const std::string item = rest.substr(pos, comma - pos);
      const std::size_t eq = item.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
        throw std::invalid_argument("parse_selector: malformed parameter '" + item + "'");
      const std::string key = item.substr(0, eq);
      const std::string val = item.substr(eq + 1);
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(val, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("parse_selector: bad numeric value '" + val + "'");
      }
      if (used != val.size())
        throw std::invalid_argument("parse_selector: bad numeric value '" + val + "'");
      if (params.count(key))
        throw std::invalid_argument("parse_selector: duplicate parameter '" + key + "'");
      params[key] = value;
      pos = comma + 1;
    }
  }
  return catalog_get(name, params);
}

// Perspective mean m_f(x, y) = y f(x/y), with the diagonal handled as the
// limit x f(1) to keep x ~ y numerically stable.
inline double eval_mean(const MonotoneFunction& f, double x, double y) {
  if (!(x > 0.0) || !(y > 0.0))
    throw std::invalid_argument("eval_mean: arguments must be positive");
  if (std::abs(x - y) <= 1e-9 * std::max(x, y)) return x * f.eval(1.0);
  return y * f.eval(x / y);
}

struct MeanTable {
  std::vector<double> left;    // spectrum indexing rows
  std::vector<double> right;   // spectrum indexing columns
  std::vector<double> values;  // row-major, left.size() x right.size()

  double operator()(std::size_t i, std::size_t j) const { return values[i * right.size() + j]; }
};

inline MeanTable mean_table(const MonotoneFunction& f, const std::vector<double>& left,
                            const std::vector<double>& right) {
  if (left.empty() || right.empty()) throw std::invalid_argument("mean_table: empty spectrum");
  MeanTable t{left, right, std::vector<double>(left.size() * right.size())};
  for (std::size_t i = 0; i < left.size(); ++i)
    for (std::size_t j = 0; j < right.size(); ++j) {
      const double m = eval_mean(f, left[i], right[j]);
      if (!std::isfinite(m))
        throw std::domain_error("mean_table: non-finite mean at (" + std::to_string(left[i]) +
                                ", " + std::to_string(right[j]) + ")");
      t.values[i * right.size() + j] = m;
    }
  return t;
}

// f(1) = 1 and x f(1/x) = f(x) on a log-spaced grid over [1e-4, 1e4].
inline bool check_standard(const MonotoneFunction& f, std::size_t grid_size = 40) {
  if (grid_size < 10) throw std::invalid_argument("check_standard: grid too small");
  if (std::abs(f.eval(1.0) - 1.0) > 1e-12) return false;
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double e = -4.0 + 8.0 * static_cast<double>(k) / static_cast<double>(grid_size - 1);
    const double x = std::pow(10.0, e);
    if (std::abs(x * f.eval(1.0 / x) - f.eval(x)) > 1e-10) return false;
  }
  return true;
}

// Symmetry identity alone (no normalization): the gate used by metric code.
inline bool check_symmetric(const MonotoneFunction& f, std::size_t grid_size = 17) {
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double e = -3.0 + 6.0 * static_cast<double>(k) / static_cast<double>(grid_size - 1);
    const double x = std::pow(10.0, e);
    const double fx = f.eval(x);
    if (std::abs(x * f.eval(1.0 / x) - fx) > 1e-8 * std::max(1.0, std::abs(fx))) return false;
  }
  return true;
}

struct CatalogEntryDoc {
  std::string name;
  std::string parameter_doc;
  MonotoneFunction representative;
};

// Stable-order catalog listing with a representative instance per entry.
inline std::vector<CatalogEntryDoc> catalog_entries() {
  std::vector<CatalogEntryDoc> v;
  v.push_back({"xlogx", "", catalog_get("xlogx")});
  v.push_back({"log", "", catalog_get("log")});
  v.push_back({"beta_log", "beta in [0,1); beta=0 is the xlogx limit",
               catalog_get("beta_log", {{"beta", 0.5}})});
  v.push_back({"degree_alpha", "alpha in (0,1)", catalog_get("degree_alpha", {{"alpha", 0.5}})});
  v.push_back({"wyd_gp", "p in [1/2,2]; p=1 is the xlogx limit",
               catalog_get("wyd_gp", {{"p", 1.5}})});
  v.push_back({"bures", "", catalog_get("bures")});
  v.push_back({"bkm", "", catalog_get("bkm")});
  v.push_back({"chi2", "", catalog_get("chi2")});
  v.push_back({"k_alpha_inv", "alpha in [0,1]", catalog_get("k_alpha_inv", {{"alpha", 0.5}})});
  v.push_back({"affine", "s > 0", catalog_get("affine", {{"s", 1.0}})});
  v.push_back({"power_t", "t in [0,1]; standard exactly at t=1/2",
               catalog_get("power_t", {{"t", 0.5}})});
  return v;
}

}  // namespace qig
