#include "confgeo/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "confgeo/atlas.hpp"
#include "confgeo/errors.hpp"
#include "confgeo/invariants.hpp"
#include "confgeo/parallel.hpp"
#include "jet_geometry.hpp"

namespace confgeo {

namespace {

template <class T>
T sum_sq(const std::vector<T>& u, std::size_t from, std::size_t to) {
  T acc(0.0);
  for (std::size_t i = from; i < to; ++i) acc += u[i] * u[i];
  return acc;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

[[noreturn]] void bad(const std::string& family, const std::string& what) {
  throw ValidationError(family + ": " + what);
}

int as_int(const std::string& family, const Params& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) bad(family, "missing parameter '" + key + "'");
  const double v = it->second;
  if (!std::isfinite(v) || v != std::round(v))
    bad(family, "parameter " + key + " must be an integer, got " + num(v));
  return static_cast<int>(v);
}

double as_real(const std::string& family, const Params& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) bad(family, "missing parameter '" + key + "'");
  if (!std::isfinite(it->second)) bad(family, "parameter " + key + " is not finite");
  return it->second;
}

Box cube(int m, double half) {
  return {std::vector<double>(static_cast<std::size_t>(m), -half),
          std::vector<double>(static_cast<std::size_t>(m), half)};
}

bool is_catalog(const std::string& n) {
  const auto& c = catalog_names();
  return std::find(c.begin(), c.end(), n) != c.end();
}

AmbientForm native_ambient(const std::string& name, int m) {
  if (name == "hxr" || name == "wp" || name == "graph") return AmbientForm::lorentz_flat(m);
  if (name == "hxh") return AmbientForm::anti_de_sitter(m);
  return AmbientForm::de_sitter(m);
}

void check_m(const std::string& family, int m, int lo) {
  if (m < lo) bad(family, "requires m >= " + std::to_string(lo) + ", got m = " + std::to_string(m));
}

// ex32 / ex33 share the (K, split, r) parameters
void check_example(const std::string& family, int m, int K, int split, double r) {
  check_m(family, m, 3);
  if (K < 2 || K > m - 1)
    bad(family, "requires 2 <= K <= m-1, got K = " + std::to_string(K));
  if (split < 1 || split > K - 1)
    bad(family, "requires 1 <= split <= K-1, got split = " + std::to_string(split));
  if (!(r > 0.0)) bad(family, "requires r > 0, got r = " + num(r));
}

// Graph template: a generic space-like graph over R^m.
template <class T>
T graph_height(const std::vector<T>& v, double scale) {
  const std::size_t m = v.size();
  T acc(0.0);
  for (std::size_t i = 0; i < m; ++i) {
    acc += v[i] * v[i] * (0.3 - 0.15 * static_cast<double>(i));
    acc += v[i] * v[(i + 1) % m] * 0.2;
  }
  acc += v[m - 1] * v[m - 1] * v[m - 1] * 0.25;
  if (m >= 3) acc += v[0] * v[1] * v[2] * 0.1;
  return acc * scale;
}

}  // namespace

bool operator==(const ChartSpec& a, const ChartSpec& b) {
  return a.name == b.name && a.m == b.m && a.ambient.kind == b.ambient.kind &&
         a.ambient.a == b.ambient.a && a.ambient.m == b.ambient.m && a.params == b.params &&
         a.domain.lo == b.domain.lo && a.domain.hi == b.domain.hi && a.jet == b.jet &&
         a.fd.order == b.fd.order && a.fd.step == b.fd.step &&
         a.fd.richardson == b.fd.richardson && a.lift == b.lift;
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> n{"hxr", "sxh", "hxh", "wp", "ex32", "ex33"};
  return n;
}

const std::vector<std::string>& template_names() {
  static const std::vector<std::string> n{"graph", "umbilic"};
  return n;
}

double example_radius(int m, int K) {
  // |h|^2 = K / r^2 for the witness core must equal (m-1)/m
  return std::sqrt(static_cast<double>(m) * K / (m - 1));
}

ChartSpec default_spec(const std::string& name, int m, const Params& overrides) {
  const auto& t = template_names();
  if (!is_catalog(name) && std::find(t.begin(), t.end(), name) == t.end())
    throw ValidationError("unknown chart family '" + name + "'");
  ChartSpec s;
  s.name = name;
  s.m = m;
  s.ambient = native_ambient(name, m);
  if (name == "hxr") {
    s.params = {{"k", 1}};
    s.lift = "sigma^1";
  } else if (name == "sxh") {
    s.params = {{"k", 1}, {"a", std::sqrt(2.0)}};
  } else if (name == "hxh") {
    s.params = {{"k", 1}, {"a", 0.6}};
    s.lift = "tau^1";
  } else if (name == "wp") {
    s.params = {{"p", 1}, {"q", 1}, {"a", 2}};
    s.lift = "sigma^1";
  } else if (name == "ex32" || name == "ex33") {
    s.params = {{"K", 2}, {"split", 1}, {"r", 0}};
  } else if (name == "graph") {
    s.params = {{"scale", 1}};
    s.lift = "sigma^1";
  } else if (name == "umbilic") {
    s.params = {{"s", 0.5}};
  }
  for (const auto& [k, v] : overrides) {
    if (!s.params.count(k)) bad(name, "unknown parameter '" + k + "'");
    s.params[k] = v;
  }
  if (name == "ex32" || name == "ex33") {
    if (s.params["r"] <= 0.0 && m >= 3) {
      const double K = s.params["K"];
      if (K >= 2 && K <= m - 1) s.params["r"] = example_radius(m, static_cast<int>(K));
    }
  }

  // domain from (validated) parameters
  check_m(name, m, name == "ex32" || name == "ex33" ? 3 : 2);
  validate_spec(ChartSpec{name, m, s.ambient, s.params, cube(m, 0.5), s.jet, s.fd, s.lift});
  Box d = cube(m, 0.5);
  const auto M = static_cast<std::size_t>(m);
  if (name == "hxr") {
    const auto k = static_cast<std::size_t>(s.params["k"]);
    for (std::size_t i = k; i < M; ++i) d.lo[i] = 0.5, d.hi[i] = 1.0;
  } else if (name == "sxh") {
    const auto k = static_cast<std::size_t>(s.params["k"]);
    const double half = std::min(0.5, 0.5 * s.params["a"] / std::sqrt(static_cast<double>(M - k)));
    for (std::size_t i = k; i < M; ++i) d.lo[i] = -half, d.hi[i] = half;
  } else if (name == "wp") {
    d = cube(m, 0.45);
    const auto t = static_cast<std::size_t>(s.params["p"] + s.params["q"]);
    d.lo[t] = 1.0;
    d.hi[t] = 2.0;
  } else if (name == "graph") {
    d = cube(m, 0.4);
  }
  s.domain = d;
  validate_spec(s);
  return s;
}

void validate_spec(const ChartSpec& s) {
  const std::string& f = s.name;
  const int m = s.m;
  if (!is_catalog(f) && f != "graph" && f != "umbilic")
    throw ValidationError("unknown chart family '" + f + "'");
  check_m(f, m, 2);
  const AmbientForm want = native_ambient(f, m);
  if (s.ambient.kind != want.kind || s.ambient.a != want.a || s.ambient.m != m)
    bad(f, "native ambient must be " + to_string(want.kind) + " with a = 1 and m = " +
               std::to_string(m));
  if (s.domain.dim() != m || static_cast<int>(s.domain.hi.size()) != m)
    bad(f, "domain must have " + std::to_string(m) + " coordinates");
  for (int i = 0; i < m; ++i) {
    const auto I = static_cast<std::size_t>(i);
    if (!(s.domain.lo[I] < s.domain.hi[I]))
      bad(f, "domain axis " + std::to_string(i) + " needs lo < hi");
  }
  if (s.jet == JetSource::FiniteDifference && (s.fd.order < 2 || s.fd.order % 2 != 0))
    bad(f, "fd order must be even and >= 2, got " + std::to_string(s.fd.order));
  if (!(s.fd.step >= 0.0)) bad(f, "fd step must be >= 0");
  if (!s.lift.empty()) map_from_name(s.lift);

  const Params& p = s.params;
  if (f == "hxr" || f == "sxh" || f == "hxh") {
    const int k = as_int(f, p, "k");
    if (k < 1 || k > m - 1)
      bad(f, "requires 1 <= k <= m-1, got k = " + std::to_string(k));
  }
  if (f == "sxh") {
    const double a = as_real(f, p, "a");
    if (!(a > 1.0)) bad(f, "requires a > 1, got a = " + num(a));
  } else if (f == "hxh") {
    const double a = as_real(f, p, "a");
    if (!(a > 0.0 && a < 1.0)) bad(f, "requires 0 < a < 1, got a = " + num(a));
  } else if (f == "wp") {
    const int pp = as_int(f, p, "p");
    const int q = as_int(f, p, "q");
    const double a = as_real(f, p, "a");
    if (pp < 1) bad(f, "requires p >= 1, got p = " + std::to_string(pp));
    if (q < 1) bad(f, "requires q >= 1, got q = " + std::to_string(q));
    if (pp + q >= m)
      bad(f, "requires p + q < m, got p + q = " + std::to_string(pp + q));
    if (!(a > 1.0)) bad(f, "requires a > 1, got a = " + num(a));
  } else if (f == "ex32" || f == "ex33") {
    check_example(f, m, as_int(f, p, "K"), as_int(f, p, "split"), as_real(f, p, "r"));
  } else if (f == "graph") {
    const double sc = as_real(f, p, "scale");
    if (!(std::abs(sc) <= 1.0)) bad(f, "requires |scale| <= 1, got scale = " + num(sc));
  } else if (f == "umbilic") {
    as_real(f, p, "s");
  }
}

ImmersionChart make_product(const std::string& family, int m, const Params& params) {
  ChartSpec s = default_spec(family, m, params);
  if (family != "hxr" && family != "sxh" && family != "hxh")
    throw ValidationError("make_product: '" + family + "' is not a product family");
  return build_native(s);
}

ImmersionChart make_wp(int p, int q, double a, int m) {
  return build_native(default_spec("wp", m, {{"p", p}, {"q", q}, {"a", a}}));
}

ImmersionChart make_example(const std::string& family, int m, int K, int split, double r) {
  return build_native(default_spec(family, m, {{"K", K}, {"split", split}, {"r", r}}));
}

static double ex32_obstruction(int K, int split) {
  return 2.0 * std::sqrt(static_cast<double>(split) * (K - split)) / K;
}

CoreHypersurface make_core(const std::string& family, int m, int K, int split, double r) {
  if (family != "ex32" && family != "ex33")
    throw ValidationError("make_core: '" + family + "' has no core hypersurface");
  if (r <= 0.0 && m >= 3 && K >= 2 && K <= m - 1) r = example_radius(m, K);
  check_example(family, m, K, split, r);
  if (family == "ex32") {
    // S^j(c1) x H^{K-j}(c2) in S^{K+1}_1(r), c1^2 - c2^2 = r^2: principal
    // curvatures c2/(c1 r) and c1/(c2 r) share a sign, so r|H| is bounded
    // below by 2 sqrt(j(K-j))/K and the core is never maximal.
    const double res = ex32_obstruction(K, split);
    throw ConstructionError("ex32: no maximal product core in S^" + std::to_string(K + 1) +
                                "_1(r); smallest r|H| is " + num(res),
                            res);
  }
  const double c1 = std::sqrt(split * r * r / K);
  const double c2 = std::sqrt((K - split) * r * r / K);
  const auto j = static_cast<std::size_t>(split);
  const auto KK = static_cast<std::size_t>(K);
  auto f = [c1, c2, j, KK](const auto& v) {
    using T = std::decay_t<decltype(v[0])>;
    using std::sqrt;
    std::vector<T> y;
    y.push_back(sqrt(T(c1 * c1) + sum_sq(v, 0, j)));
    y.push_back(sqrt(T(c2 * c2) + sum_sq(v, j, KK)));
    y.insert(y.end(), v.begin(), v.end());
    return y;
  };
  CoreHypersurface core{
      ImmersionChart::from_formula("ex33-core", K, AmbientForm::anti_de_sitter(K, r),
                                   cube(K, 0.5), f),
      m, K, r, true, "H^" + std::to_string(split) + " x H^" + std::to_string(K - split)};
  return core;
}

CoreHypersurface totally_geodesic_core(int m, int K, double r) {
  auto f = [r](const auto& v) {
    using T = std::decay_t<decltype(v[0])>;
    using std::sqrt;
    std::vector<T> y;
    y.push_back(sqrt(T(r * r) + sum_sq(v, 0, v.size())));
    y.push_back(T(0.0));
    y.insert(y.end(), v.begin(), v.end());
    return y;
  };
  return {ImmersionChart::from_formula("geodesic-core", K, AmbientForm::anti_de_sitter(K, r),
                                       cube(K, 0.5), f),
          m, K, r, true, "totally geodesic H^" + std::to_string(K)};
}

CoreReport verify_core(const CoreHypersurface& core, int per_axis, const Tolerances& tol) {
  const ImmersionChart& c = core.chart;
  const int K = core.K;
  const double target = (core.m - 1.0) / core.m;
  const double curv = c.ambient().curvature();
  const double scalar_target = K * (K - 1) * curv + target;
  // the intrinsic route samples the metric around each grid point
  Box box = c.domain();
  const double reach = 1.0001 * fd_reach(2, FdOptions{}, box.hi);
  for (int i = 0; i < K; ++i) {
    box.lo[static_cast<std::size_t>(i)] += reach;
    box.hi[static_cast<std::size_t>(i)] -= reach;
  }
  const Grid grid = Grid::uniform(box, per_axis);
  const auto pts = grid.points();
  std::vector<double> H(pts.size()), h2(pts.size()), sc(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const auto xj = c.jet(pts[i], 2);
    const detail::ShapeJets sj = detail::shape_jets(c.ambient(), xj);
    H[i] = sj.H.value();
    h2[i] = sj.norm_h2.value();
    // intrinsic route: curvature of the sampled induced metric
    const ImmersionChart chart = c;
    MetricField metric = [chart](const std::vector<double>& u) {
      const auto xs = chart.jet(u, 1);
      const int k = chart.dim();
      Eigen::MatrixXd G(k, k);
      const int s = chart.ambient().time_slots();
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          G(a, b) = detail::pinner(detail::partial(xs, a), detail::partial(xs, b), s).value();
      return G;
    };
    const Curvature cv = curvature_of_g(metric, pts[i], FdOptions{});
    sc[i] = cv.Ricci.trace();
  });
  CoreReport rep;
  rep.label = core.label;
  double lo = h2.empty() ? 0.0 : h2[0], hi = lo;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    rep.H_residual = std::max(rep.H_residual, std::abs(H[i]));
    rep.norm_h2_deviation = std::max(rep.norm_h2_deviation, std::abs(h2[i] - target));
    rep.scalar_deviation = std::max(rep.scalar_deviation, std::abs(sc[i] - scalar_target));
    lo = std::min(lo, h2[i]);
    hi = std::max(hi, h2[i]);
  }
  rep.norm_h2_spread = hi - lo;
  const double t = tol.analytic * 100.0;
  rep.accepted = rep.H_residual <= t && rep.norm_h2_deviation <= t && rep.norm_h2_spread <= t &&
                 rep.scalar_deviation <= 1e-6;
  return rep;
}

ImmersionChart build_native(const ChartSpec& s) {
  validate_spec(s);
  const std::string& f = s.name;
  const int m = s.m;
  const auto M = static_cast<std::size_t>(m);
  const Params& p = s.params;
  std::string label = f;
  std::optional<ImmersionChart> out;

  if (f == "hxr") {
    const auto k = static_cast<std::size_t>(p.at("k"));
    out = ImmersionChart::from_formula(label, m, s.ambient, s.domain, [k, M](const auto& u) {
      using T = std::decay_t<decltype(u[0])>;
      using std::sqrt;
      std::vector<T> x;
      x.push_back(sqrt(T(1.0) + sum_sq(u, 0, k)));
      x.insert(x.end(), u.begin(), u.end());
      (void)M;
      return x;
    });
  } else if (f == "sxh") {
    const auto k = static_cast<std::size_t>(p.at("k"));
    const double a = p.at("a");
    const double b2 = a * a - 1.0;
    out = ImmersionChart::from_formula(label, m, s.ambient, s.domain, [k, M, a, b2](const auto& u) {
      using T = std::decay_t<decltype(u[0])>;
      using std::sqrt;
      std::vector<T> x;
      x.push_back(sqrt(T(b2) + sum_sq(u, 0, k)));
      x.insert(x.end(), u.begin(), u.end());
      x.push_back(sqrt(T(a * a) - sum_sq(u, k, M)));
      return x;
    });
  } else if (f == "hxh") {
    const auto k = static_cast<std::size_t>(p.at("k"));
    const double a = p.at("a");
    out = ImmersionChart::from_formula(label, m, s.ambient, s.domain, [k, M, a](const auto& u) {
      using T = std::decay_t<decltype(u[0])>;
      using std::sqrt;
      std::vector<T> x;
      x.push_back(sqrt(T(a * a) + sum_sq(u, 0, k)));
      x.push_back(sqrt(T(1.0 - a * a) + sum_sq(u, k, M)));
      x.insert(x.end(), u.begin(), u.end());
      return x;
    });
  } else if (f == "wp") {
    const auto q = static_cast<std::size_t>(p.at("q"));
    const auto pp = static_cast<std::size_t>(p.at("p"));
    const double a = p.at("a");
    const double b2 = a * a - 1.0;
    out = ImmersionChart::from_formula(
        label, m, s.ambient, s.domain, [q, pp, M, a, b2](const auto& u) {
          using T = std::decay_t<decltype(u[0])>;
          using std::sqrt;
          // u = (v (q), w (p), t, rest)
          const T& t = u[q + pp];
          std::vector<T> x;
          x.push_back(t * sqrt(T(b2) + sum_sq(u, 0, q)));
          for (std::size_t i = 0; i < q + pp; ++i) x.push_back(t * u[i]);
          x.push_back(t * sqrt(T(a * a) - sum_sq(u, q, q + pp)));
          for (std::size_t i = q + pp + 1; i < M; ++i) x.push_back(u[i]);
          return x;
        });
  } else if (f == "ex32" || f == "ex33") {
    const int K = static_cast<int>(p.at("K"));
    const int split = static_cast<int>(p.at("split"));
    const double r = p.at("r");
    make_core(f, m, K, split, r);  // ex32 throws here
    const double c1 = std::sqrt(split * r * r / K);
    const double c2 = std::sqrt((K - split) * r * r / K);
    const auto j = static_cast<std::size_t>(split);
    const auto KK = static_cast<std::size_t>(K);
    // core y in H^{K+1}_1(-1/r^2), sphere point in S^{m-K}(r);
    // x = (y_1, y_2..., z) / y_0 with y_0 > 0
    out = ImmersionChart::from_formula(
        label, m, s.ambient, s.domain, [c1, c2, j, KK, M, r](const auto& u) {
          using T = std::decay_t<decltype(u[0])>;
          using std::sqrt;
          const T y0 = sqrt(T(c1 * c1) + sum_sq(u, 0, j));
          const T y1 = sqrt(T(c2 * c2) + sum_sq(u, j, KK));
          const T inv0 = inv(y0);
          std::vector<T> x;
          x.push_back(y1 * inv0);
          for (std::size_t i = 0; i < M; ++i) x.push_back(u[i] * inv0);
          x.push_back(sqrt(T(r * r) - sum_sq(u, KK, M)) * inv0);
          return x;
        });
  } else if (f == "graph") {
    const double sc = p.at("scale");
    out = ImmersionChart::from_formula(label, m, s.ambient, s.domain, [sc](const auto& u) {
      using T = std::decay_t<decltype(u[0])>;
      std::vector<T> x;
      x.push_back(graph_height(u, sc));
      x.insert(x.end(), u.begin(), u.end());
      return x;
    });
  } else if (f == "umbilic") {
    // round sphere slice x_0 = s of S^{m+1}_1
    const double sl = p.at("s");
    const double R2 = 1.0 + sl * sl;
    out = ImmersionChart::from_formula(label, m, s.ambient, s.domain, [sl, R2](const auto& u) {
      using T = std::decay_t<decltype(u[0])>;
      using std::sqrt;
      std::vector<T> x;
      x.push_back(T(sl));
      x.insert(x.end(), u.begin(), u.end());
      x.push_back(sqrt(T(R2) - sum_sq(u, 0, u.size())));
      return x;
    });
  }
  if (s.jet == JetSource::FiniteDifference) return out->with_fd(s.fd);
  return *out;
}

ImmersionChart build_chart(const ChartSpec& s) {
  ImmersionChart native = build_native(s);
  if (s.lift.empty()) return native;
  return lift_chart(native, map_from_name(s.lift));
}

nlohmann::json spec_to_json(const ChartSpec& s) {
  nlohmann::json j;
  j["name"] = s.name;
  j["m"] = s.m;
  j["ambient"] = {{"kind", to_string(s.ambient.kind)}, {"a", s.ambient.a}};
  j["params"] = nlohmann::json::object();
  for (const auto& [k, v] : s.params) j["params"][k] = v;
  j["domain"] = {{"lo", s.domain.lo}, {"hi", s.domain.hi}};
  j["jet"] = s.jet == JetSource::Analytic ? "analytic" : "fd";
  j["fd"] = {{"order", s.fd.order}, {"step", s.fd.step}, {"richardson", s.fd.richardson}};
  j["lift"] = s.lift.empty() ? nlohmann::json(nullptr) : nlohmann::json(s.lift);
  return j;
}

ChartSpec spec_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ValidationError("chart definition must be a JSON object");
    for (const char* key : {"name", "m", "ambient", "domain"})
      if (!j.contains(key)) throw ValidationError(std::string("chart definition lacks '") + key + "'");
    ChartSpec s;
    s.name = j.at("name").get<std::string>();
    s.m = j.at("m").get<int>();
    s.ambient.kind = ambient_kind_from_string(j.at("ambient").at("kind").get<std::string>());
    s.ambient.a = j.at("ambient").value("a", 1.0);
    s.ambient.m = s.m;
    if (j.contains("params"))
      for (const auto& [k, v] : j.at("params").items()) s.params[k] = v.get<double>();
    s.domain.lo = j.at("domain").at("lo").get<std::vector<double>>();
    s.domain.hi = j.at("domain").at("hi").get<std::vector<double>>();
    const std::string jet = j.value("jet", std::string("analytic"));
    if (jet == "analytic")
      s.jet = JetSource::Analytic;
    else if (jet == "fd")
      s.jet = JetSource::FiniteDifference;
    else
      throw ValidationError("jet must be \"analytic\" or \"fd\", got \"" + jet + "\"");
    if (j.contains("fd")) {
      const auto& fd = j.at("fd");
      s.fd.order = fd.value("order", s.fd.order);
      s.fd.step = fd.value("step", s.fd.step);
      s.fd.richardson = fd.value("richardson", s.fd.richardson);
    }
    if (j.contains("lift") && !j.at("lift").is_null()) s.lift = j.at("lift").get<std::string>();
    // params absent from the file take their defaults
    const ChartSpec def = default_spec(s.name, s.m);
    for (const auto& [k, v] : def.params)
      if (!s.params.count(k)) s.params[k] = v;
    for (const auto& [k, v] : s.params)
      if (!def.params.count(k)) bad(s.name, "unknown parameter '" + k + "'");
    validate_spec(s);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed chart definition: ") + e.what());
  }
}

}  // namespace confgeo
