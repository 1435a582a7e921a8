#include <doctest.h>

#include <cmath>

#include "confgeo/catalog.hpp"
#include "confgeo/chart.hpp"
#include "confgeo/errors.hpp"
#include "oracles.hpp"

using namespace confgeo;

namespace {

oracle::Map as_map(const ImmersionChart& c) {
  return [c](const std::vector<double>& u) { return c.eval(u); };
}

}  // namespace

TEST_CASE("product chart points lie on the unit de Sitter quadric") {
  const ImmersionChart c = make_product("sxh", 3, {{"k", 1}, {"a", std::sqrt(2.0)}});
  const Grid g = Grid::uniform(c.domain(), 4);
  for (const auto& u : g.points()) {
    const auto x = c.eval(u);
    CHECK(std::abs(c.ambient().quadric_residual(x)) <= 1e-12);
  }
}

TEST_CASE("shape data agrees with a finite-difference oracle") {
  for (const std::string fam : {"sxh", "hxh", "ex33", "wp"}) {
    const ImmersionChart c = build_native(default_spec(fam, 4));
    const auto u = c.domain().center();
    const ShapeData sd = shape_data(c, u);
    const oracle::Shape o = oracle::shape(as_map(c), u, c.ambient().time_slots(),
                                          c.ambient().kind == AmbientKind::LorentzFlat);
    CAPTURE(fam);
    CHECK(sd.rho2 == doctest::Approx(o.rho2).epsilon(1e-6));
    CHECK(std::abs(sd.H) == doctest::Approx(std::abs(o.H)).epsilon(1e-6));
    CHECK(sd.norm_h2 == doctest::Approx(o.norm_h2).epsilon(1e-6));
    // principal curvatures agree up to the orientation of the normal
    const double sign = (sd.H * o.H >= 0) ? 1.0 : -1.0;
    Eigen::VectorXd ko = sign * o.k;
    std::sort(ko.data(), ko.data() + ko.size());
    for (int i = 0; i < 4; ++i)
      CHECK(sd.principal_curvatures(i) == doctest::Approx(ko(i)).epsilon(1e-6));
  }
}

TEST_CASE("normal orientation rule and flipping") {
  const ImmersionChart c = build_native(default_spec("sxh", 3));
  const std::vector<double> u{0.1, -0.2, 0.15};
  const ShapeData a = shape_data(c, u);
  const ShapeData b = shape_data_flipped(c, u);
  double big = 0;
  for (double v : a.normal) big = std::max(big, std::abs(v));
  for (double v : a.normal)
    if (std::abs(v) > 1e-9 * big) {
      CHECK(v < 0);
      break;
    }
  CHECK(b.H == doctest::Approx(-a.H));
  CHECK((a.h + b.h).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(b.rho == doctest::Approx(a.rho));
  const auto& n = a.normal;
  const int s = c.ambient().time_slots();
  double nn = 0;
  for (std::size_t i = 0; i < n.size(); ++i) nn += (static_cast<int>(i) < s ? -1 : 1) * n[i] * n[i];
  CHECK(nn == doctest::Approx(-1.0));
}

TEST_CASE("totally umbilic slice is not regular") {
  const ImmersionChart c = build_native(default_spec("umbilic", 3));
  CHECK_THROWS_AS(shape_data(c, c.domain().center()), RegularityError);
  const RegularityReport r = validate_regularity(c, Grid::uniform(c.domain(), 3));
  CHECK_FALSE(r.regular);
  CHECK(r.min_rho2 < 1e-20);
}

TEST_CASE("rank-deficient chart is reported as degenerate") {
  auto f = [](const auto& u) {
    using T = std::decay_t<decltype(u[0])>;
    return std::vector<T>{u[0] + u[1], u[0] + u[1], u[0] * 0.5 + u[1] * 0.5};
  };
  const ImmersionChart c = ImmersionChart::from_formula(
      "degenerate", 2, AmbientForm::lorentz_flat(2), Box{{-1, -1}, {1, 1}}, f);
  const RegularityReport r = validate_regularity(c, Grid::uniform(c.domain(), 3));
  CHECK_FALSE(r.regular);
  CHECK_THROWS_AS(shape_data(c, {0.0, 0.0}), RegularityError);
}

TEST_CASE("jets outside the domain raise a domain error") {
  const ImmersionChart c = build_native(default_spec("sxh", 3));
  CHECK_THROWS_AS(c.jet({2.0, 0.0, 0.0}, 2), DomainError);
  CHECK_NOTHROW(c.jet(c.domain().hi, 2));
  const ImmersionChart fd = c.with_fd();
  CHECK_THROWS_AS(fd.jet(c.domain().hi, 2), DomainError);
  CHECK_THROWS_AS(c.with_fd(FdOptions{3, 0.0, true}), ValidationError);
}

TEST_CASE("grid ordering and the FD-shrunk default grid") {
  const Box b{{0, 0}, {1, 2}};
  const Grid g = Grid::uniform(b, 3);
  CHECK(g.size() == 9);
  CHECK(g.point(1) == std::vector<double>{0.0, 1.0});
  CHECK(g.point(3) == std::vector<double>{0.5, 0.0});
  const Grid one{{1, 1}, b};
  CHECK(one.point(0) == std::vector<double>{0.5, 1.0});

  const ImmersionChart c = build_native(default_spec("sxh", 3));
  const Grid ga = default_grid(c, 3);
  const Grid gf = default_grid(c.with_fd(), 3);
  CHECK(ga.box.lo == c.domain().lo);
  for (int i = 0; i < 3; ++i) {
    const auto I = static_cast<std::size_t>(i);
    CHECK(gf.box.lo[I] > c.domain().lo[I]);
    CHECK(gf.box.hi[I] < c.domain().hi[I]);
  }
  for (const auto& u : gf.points()) CHECK_NOTHROW(c.with_fd().jet(u, 5));
}

TEST_CASE("affine reparametrization keeps the image and the conformal factor") {
  const ImmersionChart c = build_native(default_spec("wp", 4));
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(4, 4);
  const double t = 0.4;
  M(0, 0) = std::cos(t);
  M(0, 1) = -std::sin(t);
  M(1, 0) = std::sin(t);
  M(1, 1) = std::cos(t);
  const Eigen::VectorXd off = Eigen::Map<const Eigen::VectorXd>(c.domain().center().data(), 4);
  const ImmersionChart r = c.reparametrized(M, off);
  const auto v = r.domain().center();
  const Eigen::VectorXd u = M * Eigen::Map<const Eigen::VectorXd>(v.data(), 4) + off;
  const std::vector<double> uu(u.data(), u.data() + 4);
  const auto xa = c.eval(uu), xb = r.eval(v);
  for (std::size_t i = 0; i < xa.size(); ++i) CHECK(xa[i] == doctest::Approx(xb[i]));
  CHECK(shape_data(r, v).rho == doctest::Approx(shape_data(c, uu).rho).epsilon(1e-12));
  for (const auto& p : Grid::uniform(r.domain(), 3).points()) {
    const Eigen::VectorXd q = M * Eigen::Map<const Eigen::VectorXd>(p.data(), 4) + off;
    CHECK(c.domain().contains(std::vector<double>(q.data(), q.data() + 4), -1e-12));
  }
  CHECK_THROWS_AS(c.reparametrized(Eigen::MatrixXd::Zero(4, 4), off), ValidationError);
}
