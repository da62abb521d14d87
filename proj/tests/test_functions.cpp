#include "catch2/catch_amalgamated.hpp"

#include <cmath>

#include "qig/functions.hpp"

using namespace qig;

TEST_CASE("catalog hand values") {
  const double e = std::exp(1.0);
  CHECK(catalog_get("xlogx").eval(e) == Catch::Approx(e));
  CHECK(catalog_get("log").eval(e) == Catch::Approx(1.0));
  CHECK(catalog_get("beta_log", {{"beta", 0.5}}).eval(4.0) == Catch::Approx(8.0));
  CHECK(catalog_get("degree_alpha", {{"alpha", 0.5}}).eval(4.0) == Catch::Approx(-4.0));
  CHECK(catalog_get("degree_alpha", {{"alpha", 0.5}}).at_zero == Catch::Approx(4.0));
  CHECK(catalog_get("wyd_gp", {{"p", 1.5}}).eval(4.0) == Catch::Approx(16.0 / 3.0));
  CHECK(catalog_get("bures").eval(3.0) == Catch::Approx(2.0));
  CHECK(catalog_get("bkm").eval(e) == Catch::Approx(e - 1.0));
  CHECK(catalog_get("bkm").eval(1.0) == Catch::Approx(1.0));
  CHECK(catalog_get("chi2").eval(3.0) == Catch::Approx(4.0));
  CHECK(catalog_get("k_alpha_inv", {{"alpha", 0.5}}).eval(9.0) == Catch::Approx(3.0));
  CHECK(catalog_get("affine", {{"s", 2.0}}).eval(3.0) == Catch::Approx(7.0));
  CHECK(catalog_get("power_t", {{"t", 0.5}}).eval(16.0) == Catch::Approx(4.0));
  CHECK(catalog_get("power_t", {{"t", 0.0}}).eval(5.0) == Catch::Approx(1.0));
}

TEST_CASE("limit aliases agree with their base entries") {
  MonotoneFunction b0 = catalog_get("beta_log", {{"beta", 0.0}});
  MonotoneFunction w1 = catalog_get("wyd_gp", {{"p", 1.0}});
  MonotoneFunction x = catalog_get("xlogx");
  for (double t : {0.3, 1.0, 2.7}) {
    CHECK(b0.eval(t) == Catch::Approx(x.eval(t)));
    CHECK(w1.eval(t) == Catch::Approx(x.eval(t)));
  }
}

TEST_CASE("bkm series joins the direct formula smoothly") {
  MonotoneFunction f = catalog_get("bkm");
  CHECK(f.eval(1.0 + 5e-5) - f.eval(1.0 - 5e-5) == Catch::Approx(5e-5).margin(1e-12));
  CHECK(f.eval(1.0 + 0.99e-4) < f.eval(1.0 + 1.01e-4));
  CHECK(f.eval(1.0 - 1.01e-4) < f.eval(1.0 - 0.99e-4));
  const double direct = (2e-4) / std::log(1.0 + 2e-4);
  CHECK(f.eval(1.0 + 2e-4) == Catch::Approx(direct).epsilon(1e-12));
}

TEST_CASE("parameter ranges are enforced") {
  CHECK_THROWS_AS(catalog_get("beta_log", {{"beta", 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(catalog_get("degree_alpha", {{"alpha", 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(catalog_get("degree_alpha", {{"alpha", 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(catalog_get("wyd_gp", {{"p", 0.4}}), std::invalid_argument);
  CHECK_THROWS_AS(catalog_get("wyd_gp", {{"p", 2.1}}), std::invalid_argument);
  CHECK_THROWS_AS(catalog_get("k_alpha_inv", {{"alpha", 1.5}}), std::invalid_argument);
  CHECK_THROWS_AS(catalog_get("affine", {{"s", 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(catalog_get("power_t", {{"t", 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(catalog_get("xlogx", {{"stray", 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(catalog_get("nope"), std::invalid_argument);
}

TEST_CASE("catalog flags") {
  CHECK(catalog_get("xlogx").operator_convex);
  CHECK_FALSE(catalog_get("xlogx").operator_monotone);
  CHECK(catalog_get("log").operator_monotone);
  CHECK_FALSE(catalog_get("log").standard);
  MonotoneFunction bures = catalog_get("bures");
  CHECK((bures.operator_monotone && bures.operator_convex && bures.standard));
  MonotoneFunction bkm = catalog_get("bkm");
  CHECK((bkm.operator_monotone && bkm.standard));
  CHECK_FALSE(bkm.operator_convex);
  MonotoneFunction wyd = catalog_get("wyd_gp", {{"p", 1.5}});
  CHECK_FALSE((wyd.operator_monotone || wyd.operator_convex || wyd.standard));
  CHECK(catalog_get("power_t", {{"t", 0.5}}).standard);
  CHECK_FALSE(catalog_get("power_t", {{"t", 0.3}}).standard);
}

TEST_CASE("selector format and parsing") {
  CHECK(catalog_get("bures").selector() == "bures");
  CHECK(catalog_get("k_alpha_inv", {{"alpha", 0.25}}).selector() == "k_alpha_inv:alpha=0.25");

  MonotoneFunction f = parse_selector("k_alpha_inv:alpha=0.5");
  CHECK(f.eval(9.0) == Catch::Approx(3.0));
  CHECK(parse_selector("bures").name == "bures");

  CHECK_THROWS_AS(parse_selector(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_selector("power_t:"), std::invalid_argument);
  CHECK_THROWS_AS(parse_selector("power_t:t"), std::invalid_argument);
  CHECK_THROWS_AS(parse_selector("power_t:t=abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_selector("beta_log:beta=0.5,beta=0.6"), std::invalid_argument);
  CHECK_THROWS_AS(parse_selector("k_alpha_inv:alpha=1.5"), std::invalid_argument);
}

TEST_CASE("eval_mean and mean tables") {
  MonotoneFunction bures = catalog_get("bures");
  CHECK(eval_mean(bures, 1.0, 3.0) == Catch::Approx(2.0));
  CHECK(eval_mean(catalog_get("bkm"), std::exp(1.0), 1.0) == Catch::Approx(std::exp(1.0) - 1.0));
  CHECK(eval_mean(bures, 2.0, 2.0 + 1e-12) == Catch::Approx(2.0));
  CHECK_THROWS_AS(eval_mean(bures, -1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(eval_mean(bures, 1.0, 0.0), std::invalid_argument);

  MeanTable t = mean_table(bures, {1.0, 2.0}, {2.0, 3.0});
  CHECK(t(0, 0) == Catch::Approx(1.5));
  CHECK(t(0, 1) == Catch::Approx(2.0));
  CHECK(t(1, 0) == Catch::Approx(2.0));
  CHECK(t(1, 1) == Catch::Approx(2.5));
}

TEST_CASE("standardness and symmetry probes") {
  CHECK(check_standard(catalog_get("bures")));
  CHECK(check_standard(catalog_get("bkm")));
  CHECK(check_standard(catalog_get("k_alpha_inv", {{"alpha", 0.3}})));
  CHECK(check_standard(catalog_get("power_t", {{"t", 0.5}})));
  CHECK_FALSE(check_standard(catalog_get("chi2")));
  CHECK_FALSE(check_standard(catalog_get("xlogx")));
  CHECK_FALSE(check_standard(catalog_get("affine", {{"s", 1.0}})));

  CHECK(check_symmetric(catalog_get("affine", {{"s", 1.0}})));
  CHECK_FALSE(check_symmetric(catalog_get("affine", {{"s", 2.0}})));
  CHECK(check_symmetric(catalog_get("bkm")));
  CHECK_FALSE(check_symmetric(catalog_get("power_t", {{"t", 0.3}})));
}

TEST_CASE("stored standard flag matches the numeric probe") {
  for (const CatalogEntryDoc& e : catalog_entries())
    CHECK(e.representative.standard == check_standard(e.representative));
}

TEST_CASE("catalog listing is stable and complete") {
  const std::vector<std::string> expected = {"xlogx", "log",  "beta_log", "degree_alpha",
                                             "wyd_gp", "bures", "bkm",     "chi2",
                                             "k_alpha_inv", "affine", "power_t"};
  const auto entries = catalog_entries();
  REQUIRE(entries.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(entries[i].name == expected[i]);
}
