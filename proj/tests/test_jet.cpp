#include <doctest.h>

#include <cmath>
#include <vector>

#include "confgeo/fd_jet.hpp"
#include "confgeo/jet.hpp"
#include "jet_geometry.hpp"

using namespace confgeo;

namespace {

double d(const Jet& j, std::vector<int> e) { return j.partial(std::span<const int>(e)); }

}  // namespace

TEST_CASE("jet arithmetic reproduces mixed partials of exp(x) sin(y)") {
  const double x0 = 0.3, y0 = -0.7;
  const std::vector<double> p{x0, y0};
  const auto v = Jet::variables(JetLayout::get(2, 5), p);
  const Jet f = exp(v[0]) * sin(v[1]);
  // d^a_x d^b_y f = e^x sin^(b)(y)
  auto sin_deriv = [&](int b) {
    switch (b % 4) {
      case 0: return std::sin(y0);
      case 1: return std::cos(y0);
      case 2: return -std::sin(y0);
      default: return -std::cos(y0);
    }
  };
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; a + b <= 5; ++b)
      CHECK(d(f, {a, b}) == doctest::Approx(std::exp(x0) * sin_deriv(b)).epsilon(1e-13));
}

TEST_CASE("univariate elementary functions to fifth order") {
  const double x0 = 0.8;
  const std::vector<double> p{x0};
  const Jet x = Jet::variables(JetLayout::get(1, 5), p)[0];
  // derivatives of sqrt, 1/x and log at x0, by hand
  const double s[6] = {std::sqrt(x0), 0.5 * std::pow(x0, -0.5), -0.25 * std::pow(x0, -1.5),
                       0.375 * std::pow(x0, -2.5), -0.9375 * std::pow(x0, -3.5),
                       3.28125 * std::pow(x0, -4.5)};
  const double r[6] = {1 / x0, -1 / (x0 * x0), 2 / std::pow(x0, 3), -6 / std::pow(x0, 4),
                       24 / std::pow(x0, 5), -120 / std::pow(x0, 6)};
  const double l[6] = {std::log(x0), 1 / x0, -1 / (x0 * x0), 2 / std::pow(x0, 3),
                       -6 / std::pow(x0, 4), 24 / std::pow(x0, 5)};
  const Jet js = sqrt(x), jr = inv(x), jl = log(x);
  for (int k = 0; k <= 5; ++k) {
    CHECK(d(js, {k}) == doctest::Approx(s[k]).epsilon(1e-12));
    CHECK(d(jr, {k}) == doctest::Approx(r[k]).epsilon(1e-12));
    CHECK(d(jl, {k}) == doctest::Approx(l[k]).epsilon(1e-12));
  }
  const Jet q = x / (x * x + 1.0);
  const Jet back = q * (x * x + 1.0);
  for (int k = 0; k <= 5; ++k) CHECK(d(back, {k}) == doctest::Approx(d(x, {k})).epsilon(1e-12));
}

TEST_CASE("derivative lowers the order and shifts coefficients") {
  const std::vector<double> p{0.5, 0.2};
  const auto v = Jet::variables(JetLayout::get(2, 4), p);
  const Jet f = v[0] * v[0] * v[1];
  const Jet fx = f.derivative(0);
  CHECK(fx.order() == 3);
  CHECK(fx.value() == doctest::Approx(2 * 0.5 * 0.2));
  CHECK(d(fx, {0, 1}) == doctest::Approx(1.0));
  CHECK(Jet(2.0).derivative(0).value() == 0.0);
}

TEST_CASE("determinant keeps derivatives when the base value is singular") {
  // det [[v, 1], [0, 1]] = v, whose value vanishes at v = 0
  const std::vector<double> p{0.0};
  const Jet v = Jet::variables(JetLayout::get(1, 3), p)[0];
  detail::JMat a{{v, Jet(1.0)}, {Jet(0.0), Jet(1.0)}};
  const Jet det = detail::determinant(a);
  CHECK(det.value() == 0.0);
  CHECK(d(det, {1}) == doctest::Approx(1.0));
  // 3x3 with a vanishing leading column
  detail::JMat b{{v, Jet(0.0), Jet(2.0)}, {v * v, Jet(1.0), Jet(0.0)}, {Jet(0.0), Jet(0.0), Jet(1.0)}};
  const Jet db = detail::determinant(b);  // = v
  CHECK(d(db, {1}) == doctest::Approx(1.0));
  CHECK(d(db, {2}) == doctest::Approx(0.0));
}

TEST_CASE("central FD weights") {
  const auto w = central_weights(1, 2);
  const std::vector<double> want{1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
  REQUIRE(w.size() == want.size());
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(w[i] == doctest::Approx(want[i]).epsilon(1e-14));
  const auto w2 = central_weights(2, 1);
  CHECK(w2[0] == doctest::Approx(1.0));
  CHECK(w2[1] == doctest::Approx(-2.0));
}

TEST_CASE("FD jets converge at the declared order") {
  // halving h divides the first-derivative error by about 2^order
  VectorField f = [](const std::vector<double>& u) {
    return std::vector<double>{std::sin(u[0]) * std::exp(u[1])};
  };
  const std::vector<double> u{0.4, -0.3};
  const double exact = std::cos(0.4) * std::exp(-0.3);
  for (int order : {2, 4}) {
    FdOptions o;
    o.order = order;
    o.richardson = false;
    o.step = 0.05;
    const double e1 = std::abs(d(fd_jet(f, u, 1, o)[0], {1, 0}) - exact);
    o.step = 0.025;
    const double e2 = std::abs(d(fd_jet(f, u, 1, o)[0], {1, 0}) - exact);
    const double ratio = e1 / e2;
    CHECK(ratio > 0.8 * std::pow(2.0, order));
    CHECK(ratio < 1.2 * std::pow(2.0, order));
  }
}

TEST_CASE("FD jet matches analytic jet on a polynomial-exponential map") {
  auto g = [](const auto& u) {
    using std::exp;
    return std::vector<std::decay_t<decltype(u[0])>>{u[0] * u[1] + exp(u[0]) * 0.5,
                                                     u[1] * u[1] * u[1]};
  };
  const std::vector<double> u{0.2, 0.7};
  const auto exact = g(Jet::variables(JetLayout::get(2, 3), u));
  VectorField f = [&](const std::vector<double>& p) { return g(p); };
  const auto approx = fd_jet(f, u, 3, FdOptions{});
  const JetLayout& L = JetLayout::get(2, 3);
  for (std::size_t c = 0; c < 2; ++c)
    for (int i = 0; i < L.size(3); ++i)
      CHECK(approx[c].partial(i) == doctest::Approx(exact[c].partial(i)).epsilon(1e-5));
}
