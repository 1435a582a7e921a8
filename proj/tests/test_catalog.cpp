#include <doctest.h>

#include <cmath>

#include "confgeo/catalog.hpp"
#include "confgeo/classifier.hpp"
#include "confgeo/errors.hpp"
#include "confgeo/invariants.hpp"
#include "oracles.hpp"

using namespace confgeo;

namespace {

Eigen::VectorXd eig(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::string message_of(const std::string& fam, int m, const Params& p) {
  try {
    default_spec(fam, m, p);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parameter validation names the violated bound") {
  CHECK(message_of("hxh", 3, {{"a", 1.0}}).find("0 < a < 1") != std::string::npos);
  CHECK(message_of("sxh", 3, {{"a", 0.9}}).find("a > 1") != std::string::npos);
  CHECK(message_of("hxr", 3, {{"k", 3}}).find("k <= m-1") != std::string::npos);
  CHECK(message_of("wp", 3, {{"p", 1}, {"q", 2}}).find("p + q < m") != std::string::npos);
  CHECK(message_of("wp", 4, {{"a", 1.0}}).find("a > 1") != std::string::npos);
  CHECK(message_of("sxh", 3, {{"zeta", 1.0}}).find("zeta") != std::string::npos);
  CHECK(message_of("hxr", 3, {{"k", 1.5}}) != "");
  CHECK_THROWS_AS(default_spec("nosuch", 3), ValidationError);
  CHECK_NOTHROW(default_spec("hxh", 3, {{"a", 0.3}}));
}

TEST_CASE("products: A and B are the same at every grid point") {
  for (const std::string fam : {"hxr", "sxh", "hxh"})
    for (int m : {3, 4}) {
      const ImmersionChart c = build_chart(default_spec(fam, m));
      const Grid g = default_grid(c, 3);
      const ConformalData first = analyze_point(c, g.point(0));
      for (std::size_t i = 1; i < g.size(); i += 4) {
        const ConformalData d = analyze_point(c, g.point(i));
        CAPTURE(fam);
        CHECK((eig(d.inv.A) - eig(first.inv.A)).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((eig(d.inv.B) - eig(first.inv.B)).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(d.inv.Phi.norm() < 1e-8);
        CHECK(d.der.normA() < 1e-8);
        CHECK(d.der.normB() < 1e-8);
      }
    }
}

TEST_CASE("WP(1,1,2), m=4: three A-clusters, parallel A and B, Phi = 0") {
  const ImmersionChart c = build_chart(default_spec("wp", 4, {{"p", 1}, {"q", 1}, {"a", 2}}));
  const Grid g = default_grid(c, 3);
  const ResidualSummary s = identity_residuals(c, g);
  REQUIRE(s.failed_points == 0);
  double dA = 0, dB = 0, phi = 0;
  for (const auto& p : s.points) {
    dA = std::max(dA, p.der.normA());
    dB = std::max(dB, p.der.normB());
    phi = std::max(phi, p.inv.Phi.norm());
  }
  CHECK(dA <= 1e-5);
  CHECK(dB <= 1e-5);
  CHECK(phi <= 1e-6);
  const EigenStructure e = eigen_structure(s.points);
  CHECK(e.t == 3);
}

TEST_CASE("ex33, m=4, K=2: A spectrum -+1/(2r^2) and rho = y0") {
  const int m = 4, K = 2;
  const double r2 = double(m) * K / (m - 1);
  CHECK(example_radius(m, K) * example_radius(m, K) == doctest::Approx(r2));
  const ImmersionChart c = build_chart(default_spec("ex33", m));
  const double c1sq = r2 / K;  // split = 1
  for (const std::vector<double>& u :
       {std::vector<double>{0, 0, 0, 0}, std::vector<double>{0.3, -0.2, 0.1, 0.25}}) {
    const ConformalData d = analyze_point(c, u);
    const Eigen::VectorXd a = eig(d.inv.A);
    const double l = 1.0 / (2 * r2);
    CHECK(a(0) == doctest::Approx(-l).epsilon(1e-5));
    CHECK(a(1) == doctest::Approx(-l).epsilon(1e-5));
    CHECK(a(2) == doctest::Approx(l).epsilon(1e-5));
    CHECK(a(3) == doctest::Approx(l).epsilon(1e-5));
    CHECK(d.rho == doctest::Approx(std::sqrt(c1sq + u[0] * u[0])).epsilon(1e-10));
    CHECK(d.inv.Phi.norm() <= 1e-6);
  }
}

TEST_CASE("ex32 has no maximal product core; the obstruction matches a scan") {
  // S^1(c1) x H^1(c2) in unit de Sitter, c1^2 - c2^2 = 1, scanned over c2
  double best = 1e300;
  for (double c2 = 0.2; c2 <= 4.0; c2 += 0.01) {
    const double c1 = std::sqrt(1 + c2 * c2);
    oracle::Map f = [c1, c2](const std::vector<double>& u) {
      return std::vector<double>{std::sqrt(c2 * c2 + u[1] * u[1]), u[1], u[0],
                                 std::sqrt(c1 * c1 - u[0] * u[0])};
    };
    const oracle::Shape o = oracle::shape(f, {0.0, 0.0}, 1, false);
    best = std::min(best, std::abs(o.H));
  }
  try {
    make_core("ex32", 4, 2, 1);
    FAIL("expected ConstructionError");
  } catch (const ConstructionError& e) {
    CHECK(e.residual() == doctest::Approx(best).epsilon(1e-3));
  }
  CHECK_THROWS_AS(build_chart(default_spec("ex32", 4)), ConstructionError);
}

TEST_CASE("core verification accepts the ex33 core and rejects a geodesic slice") {
  for (int m : {3, 4}) {
    const CoreHypersurface core = make_core("ex33", m, 2, 1);
    const CoreReport ok = verify_core(core);
    CAPTURE(m);
    CHECK(ok.accepted);
    CHECK(ok.H_residual < 1e-10);
    CHECK(ok.norm_h2_deviation < 1e-10);
    CHECK(ok.scalar_deviation < 1e-6);
    const CoreReport bad = verify_core(totally_geodesic_core(m, 2, core.r));
    CHECK_FALSE(bad.accepted);
    CHECK(bad.norm_h2_deviation == doctest::Approx((m - 1.0) / m));
  }
}

TEST_CASE("chart definition round trip is lossless") {
  for (const auto& name : catalog_names()) {
    if (name == "ex32") continue;
    ChartSpec s = default_spec(name, 4);
    const ChartSpec back = spec_from_json(nlohmann::json::parse(spec_to_json(s).dump()));
    CHECK(back == s);
  }
  ChartSpec fd = default_spec("graph", 3);
  fd.jet = JetSource::FiniteDifference;
  fd.fd.order = 6;
  fd.fd.step = 0.01;
  CHECK(spec_from_json(spec_to_json(fd)) == fd);
  CHECK_THROWS_AS(spec_from_json(nlohmann::json{{"name", "sxh"}}), ValidationError);
  CHECK_THROWS_AS(spec_from_json(nlohmann::json::array()), ValidationError);
}

TEST_CASE("Phi vanishes on every buildable catalog chart") {
  for (const auto& name : catalog_names())
    for (int m : {3, 4}) {
      if (name == "ex32") continue;
      const ImmersionChart c = build_chart(default_spec(name, m));
      const ResidualSummary s = identity_residuals(c, default_grid(c, 3));
      double phi = 0;
      for (const auto& p : s.points) phi = std::max(phi, p.inv.Phi.norm());
      CAPTURE(name);
      CHECK(phi <= 1e-6);
    }
}

TEST_CASE("FD and analytic jets agree on WP") {
  const ChartSpec s = default_spec("wp", 4);
  const ImmersionChart an = build_chart(s);
  FdOptions o;
  o.order = 6;
  const ImmersionChart fd = an.with_fd(o);
  const auto u = an.domain().center();
  const ConformalData a = analyze_point(an, u), b = analyze_point(fd, u);
  CHECK((a.inv.A - b.inv.A).cwiseAbs().maxCoeff() < 1e-7);
  CHECK((a.inv.B - b.inv.B).cwiseAbs().maxCoeff() < 1e-7);
}
