#include <doctest.h>

#include <cmath>
#include <random>

#include "confgeo/atlas.hpp"
#include "confgeo/catalog.hpp"
#include "confgeo/errors.hpp"
#include "confgeo/invariants.hpp"

using namespace confgeo;

namespace {

double q2(const std::vector<double>& w, int s) {
  double acc = 0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += (int(i) < s ? -1.0 : 1.0) * w[i] * w[i];
  return acc;
}

std::vector<double> random_de_sitter(std::mt19937& rng, int n) {
  // x = (sinh t, cosh t * unit vector)
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(n - 1));
  double norm = 0;
  for (double& c : v) norm += (c = N(rng)) * c;
  const double t = 0.8 * N(rng);
  std::vector<double> x{std::sinh(t)};
  for (double c : v) x.push_back(std::cosh(t) * c / std::sqrt(norm));
  return x;
}

std::vector<double> random_anti_de_sitter(std::mt19937& rng, int n) {
  // two time slots: (cosh t cos s, cosh t sin s, sinh t * unit)
  std::normal_distribution<double> N(0.0, 1.0);
  std::uniform_real_distribution<double> S(0.2, 1.3);
  std::vector<double> v(static_cast<std::size_t>(n - 2));
  double norm = 0;
  for (double& c : v) norm += (c = N(rng)) * c;
  const double t = 0.7 * N(rng), s = S(rng);
  std::vector<double> y{std::cosh(t) * std::cos(s), std::cosh(t) * std::sin(s)};
  for (double c : v) y.push_back(std::sinh(t) * c / std::sqrt(norm));
  return y;
}

}  // namespace

TEST_CASE("embedding examples") {
  const std::vector<double> u{2, std::sqrt(5.0), 0, 0};
  const ProjectivePoint p = embed(u, MapKind::Sigma1);
  CHECK(p.equals(ProjectivePoint({1, 2, std::sqrt(5.0), 0, 0})));
  CHECK(std::abs(q2(p.w, 2)) < 1e-12);
  const auto y = psi(2, p);
  REQUIRE(y.size() == 4);
  CHECK(y[0] == doctest::Approx(0.5));
  CHECK(y[1] == doctest::Approx(std::sqrt(5.0) / 2));
  CHECK(q2(y, 1) == doctest::Approx(1.0));
  CHECK(in_hyperplane(embed({0, 0, 0}, MapKind::Sigma0), Hyperplane::Pi) == false);
}

TEST_CASE("psi1 inverts sigma1; embeddings are light-like and avoid their hyperplanes") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_de_sitter(rng, 5);
    const ProjectivePoint p = embed(x, MapKind::Sigma1);
    CHECK(std::abs(q2(p.w, 2)) < 1e-12);
    CHECK_FALSE(in_hyperplane(p, Hyperplane::PiPlus));
    const auto back = psi(1, p);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));

    const auto y = random_anti_de_sitter(rng, 5);
    const ProjectivePoint py = embed(y, MapKind::SigmaMinus1);
    CHECK(std::abs(q2(py.w, 2)) < 1e-12);
    CHECK_FALSE(in_hyperplane(py, Hyperplane::PiMinus));

    std::uniform_real_distribution<double> U(-2, 2);
    std::vector<double> f{U(rng), U(rng), U(rng), U(rng)};
    const ProjectivePoint pf = embed(f, MapKind::Sigma0);
    CHECK(std::abs(q2(pf.w, 2)) < 1e-12 * std::max(1.0, q2(pf.w, 0)));
    CHECK_FALSE(in_hyperplane(pf, Hyperplane::Pi));
  }
}

TEST_CASE("psi on the excluded hyperplane names it") {
  // (0, 1, 1, 0, 0) is light-like with w_0 = 0
  const ProjectivePoint p({0, 1, 1, 0, 0});
  try {
    psi(1, p);
    FAIL("expected ChartDomainError");
  } catch (const ChartDomainError& e) {
    CHECK(e.excluded() == "pi_plus");
  }
  CHECK_NOTHROW(psi(2, p));
  CHECK_THROWS_AS(psi(1, ProjectivePoint({1, 0, 0.5, 0, 0})), ValidationError);
}

TEST_CASE("sigma^1 matches its closed form and equals psi1 o sigma0") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-0.7, 0.7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> u{U(rng), U(rng), U(rng), U(rng)};
    const double q = q2(u, 1);
    const auto s = compose_maps(MapKind::SigmaUp1, u);
    REQUIRE(s.size() == 5);
    for (std::size_t i = 0; i < 4; ++i) CHECK(s[i] == doctest::Approx(2 * u[i] / (1 + q)).epsilon(1e-13));
    CHECK(s[4] == doctest::Approx((1 - q) / (1 + q)).epsilon(1e-13));
    CHECK(q2(s, 1) == doctest::Approx(1.0).epsilon(1e-12));
    const auto t = psi(1, embed(u, MapKind::Sigma0));
    for (std::size_t i = 0; i < 5; ++i) CHECK(t[i] == doctest::Approx(s[i]).epsilon(1e-12));
    if (std::abs(u[0]) > 0.05) {
      const auto s2 = compose_maps(MapKind::SigmaUp2, u);
      const auto t2 = psi(2, embed(u, MapKind::Sigma0));
      for (std::size_t i = 0; i < 5; ++i) CHECK(t2[i] == doctest::Approx(s2[i]).epsilon(1e-12));
    }
  }
  const auto zero = compose_maps(MapKind::SigmaUp1, {0, 0, 0});
  CHECK(zero == std::vector<double>{0, 0, 0, 1});
}

TEST_CASE("tau^1 example and psi2 = psi1 o t_swap") {
  const auto t = compose_maps(MapKind::TauUp1, {std::sqrt(2.0), 0, 0, 1});
  REQUIRE(t.size() == 4);
  CHECK(t[0] == doctest::Approx(0.0));
  CHECK(t[1] == doctest::Approx(0.0));
  CHECK(t[2] == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(t[3] == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(q2(t, 1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(compose_maps(MapKind::TauUp1, {1, 1, 1, 1}), ValidationError);

  std::mt19937 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const ProjectivePoint p = embed(random_de_sitter(rng, 4), MapKind::Sigma1);
    const auto a = psi(2, p), b = psi(1, ProjectivePoint(t_swap(p.w)));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-13));
    CHECK(t_swap(t_swap(p.w)) == p.w);
  }
}

TEST_CASE("every map is conformal at random points") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> U(-0.6, 0.6);
  for (MapKind k : all_maps()) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> p;
      switch (map_source(k)) {
        case SourceForm::LorentzFlat:
          p = {0.3 + std::abs(U(rng)), U(rng), U(rng), U(rng)};  // u_0 away from 0 for sigma^2
          break;
        case SourceForm::DeSitter: {
          do p = random_de_sitter(rng, 5);
          while (std::abs(p[0]) < 0.1);
          break;
        }
        case SourceForm::AntiDeSitter: p = random_anti_de_sitter(rng, 5); break;
        case SourceForm::Conformal: {
          do p = random_de_sitter(rng, 5);
          while (std::abs(p[0]) < 0.1);
          break;
        }
      }
      const ConformalityWitness w = conformality_witness(k, p);
      CAPTURE(map_name(k));
      CHECK(w.factor > 0);
      CHECK(w.residual <= 1e-8);
    }
  }
}

TEST_CASE("map names round-trip") {
  for (MapKind k : all_maps()) CHECK(map_from_name(map_name(k)) == k);
  CHECK(map_name(MapKind::SigmaUp1) == "sigma^1");
  CHECK(map_name(MapKind::SigmaMinus1) == "sigma-1");
  CHECK(map_name(MapKind::TSwap) == "tswap");
  CHECK_THROWS_AS(map_from_name("sigma3"), ValidationError);
}

TEST_CASE("embedding a point off its form is an input error") {
  CHECK_THROWS_AS(embed({0.5, 0.5, 0.5}, MapKind::Sigma1), ValidationError);
  CHECK_THROWS_AS(embed({0.5, 0, 0}, MapKind::SigmaMinus1), ValidationError);
  CHECK_THROWS_AS(embed({1, 0, 0}, MapKind::Psi1), ValidationError);
}

TEST_CASE("lifting reports the offending parameter") {
  // the graph crosses u_0 = 0, where sigma^2 is undefined
  const ImmersionChart g = build_native(default_spec("graph", 3));
  try {
    lift_chart(g, MapKind::SigmaUp2);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("u =") != std::string::npos);
  }
  CHECK_THROWS_AS(lift_chart(g, MapKind::TauUp1), ValidationError);
}

TEST_CASE("conformal position after psi2 is the swapped position") {
  const ImmersionChart c = build_native(default_spec("sxh", 3));
  const ImmersionChart c2 = lift_chart(c, MapKind::Psi2);
  for (const std::vector<double>& u : {std::vector<double>{0.1, 0.2, -0.1}, std::vector<double>{-0.3, 0.0, 0.2}}) {
    const auto Y = conformal_position(shape_data(c, u), c.ambient());
    const auto Y2 = conformal_position(shape_data(c2, u), c2.ambient());
    CHECK(ProjectivePoint(Y2).equals(ProjectivePoint(t_swap(Y)), 1e-8));
  }
}

TEST_CASE("lifted charts: A and B spectra agree between psi1 and psi2 pictures") {
  for (const std::string fam : {"sxh", "ex33"}) {
    const ImmersionChart c = build_native(default_spec(fam, 4));
    const ImmersionChart c2 = lift_chart(c, MapKind::Psi2);
    const auto u = c.domain().center();
    const ConformalData a = analyze_point(c, u), b = analyze_point(c2, u);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(a.inv.A), eb(b.inv.A);
    CAPTURE(fam);
    CHECK((ea.eigenvalues() - eb.eigenvalues()).cwiseAbs().maxCoeff() < 1e-6);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ba(a.inv.B), bb(b.inv.B);
    // B flips with the orientation of the normal
    const double d1 = (ba.eigenvalues() - bb.eigenvalues()).cwiseAbs().maxCoeff();
    const double d2 = (ba.eigenvalues() + Eigen::VectorXd(bb.eigenvalues().reverse())).cwiseAbs().maxCoeff();
    CHECK(std::min(d1, d2) < 1e-6);
  }
}
