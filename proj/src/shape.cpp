#include <algorithm>
#include <cmath>
#include <sstream>

#include "confgeo/chart.hpp"
#include "confgeo/errors.hpp"
#include "confgeo/parallel.hpp"
#include "jet_geometry.hpp"

namespace confgeo::detail {

JVec partial(const JVec& v, int var) {
  JVec out;
  out.reserve(v.size());
  for (const Jet& c : v) out.push_back(c.derivative(var));
  return out;
}

Jet pinner(const JVec& a, const JVec& b, int time_slots) {
  return inner<Jet>(std::span<const Jet>(a), std::span<const Jet>(b), time_slots);
}

JVec scaled(const JVec& v, const Jet& c) {
  JVec out;
  out.reserve(v.size());
  for (const Jet& x : v) out.push_back(x * c);
  return out;
}

JVec added(const JVec& a, const JVec& b, double cb) {
  JVec out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + cb * b[i]);
  return out;
}

JMat jmat(int rows, int cols) {
  return JMat(static_cast<std::size_t>(rows), JVec(static_cast<std::size_t>(cols), Jet(0.0)));
}

JMat mat_mul(const JMat& a, const JMat& b) {
  const std::size_t r = a.size(), k = b.size(), c = b.empty() ? 0 : b[0].size();
  JMat out(r, JVec(c, Jet(0.0)));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      Jet acc(0.0);
      for (std::size_t l = 0; l < k; ++l) acc += a[i][l] * b[l][j];
      out[i][j] = acc;
    }
  return out;
}

JMat mat_inverse(JMat a) {
  const std::size_t n = a.size();
  JMat out = jmat(static_cast<int>(n), static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = Jet(1.0);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col].value()) > std::abs(a[piv][col].value())) piv = r;
    if (a[piv][col].value() == 0.0) throw RegularityError("matrix inverse: singular matrix", 0.0);
    std::swap(a[piv], a[col]);
    std::swap(out[piv], out[col]);
    const Jet p = inv(a[col][col]);
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] = a[col][j] * p;
      out[col][j] = out[col][j] * p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet f = a[r][col];
      if (f.is_constant() && f.value() == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] = a[r][j] - f * a[col][j];
        out[r][j] = out[r][j] - f * out[col][j];
      }
    }
  }
  return out;
}

Jet determinant(JMat a) {
  const std::size_t n = a.size();
  if (n == 0) return Jet(1.0);
  double scale = 0.0;
  for (const auto& row : a)
    for (const Jet& c : row) scale = std::max(scale, std::abs(c.value()));
  Jet det(1.0);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col].value()) > std::abs(a[piv][col].value())) piv = r;
    if (std::abs(a[piv][col].value()) <= 1e-8 * scale) {
      // the column vanishes at the base point but its jet need not: expand
      // the remaining block along this column instead of dividing
      Jet acc = a[col][col] * 0.0;
      for (std::size_t r = col; r < n; ++r) {
        JMat minor;
        for (std::size_t i = col; i < n; ++i) {
          if (i == r) continue;
          minor.emplace_back(a[i].begin() + static_cast<std::ptrdiff_t>(col + 1), a[i].end());
        }
        const Jet term = a[r][col] * determinant(std::move(minor));
        acc = (r - col) % 2 == 0 ? acc + term : acc - term;
      }
      return det * acc;
    }
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det = det * a[col][col];
    const Jet p = inv(a[col][col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Jet f = a[r][col] * p;
      for (std::size_t j = col + 1; j < n; ++j) a[r][j] = a[r][j] - f * a[col][j];
    }
  }
  return det;
}

Jet trace(const JMat& a) {
  Jet acc(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i][i];
  return acc;
}

JVec cross(const std::vector<JVec>& rows) {
  const std::size_t n = rows.empty() ? 0 : rows[0].size();
  JVec out(n);
  for (std::size_t k = 0; k < n; ++k) {
    JMat minor(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) minor[r].push_back(rows[r][j]);
    const Jet d = determinant(std::move(minor));
    out[k] = k % 2 == 0 ? d : -d;
  }
  return out;
}

std::vector<double> values(const JVec& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const Jet& x : v) out.push_back(x.value());
  return out;
}

Eigen::MatrixXd values(const JMat& a) {
  const auto r = static_cast<Eigen::Index>(a.size());
  const auto c = static_cast<Eigen::Index>(a.empty() ? 0 : a[0].size());
  Eigen::MatrixXd out(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j)
      out(i, j) = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].value();
  return out;
}

ShapeJets shape_jets(const AmbientForm& ambient, const JVec& x, bool flip) {
  ShapeJets sj;
  sj.m = ambient.m;
  sj.s = ambient.time_slots();
  const int m = sj.m;
  if (m < 2) throw DimensionError("shape: hypersurface dimension must be at least 2");
  if (static_cast<int>(x.size()) != ambient.coord_dim())
    throw DimensionError("shape: chart image has the wrong number of coordinates");
  const auto M = static_cast<std::size_t>(m);
  sj.x = x;
  for (int a = 0; a < m; ++a) sj.xa.push_back(partial(x, a));
  sj.xab.assign(M, std::vector<JVec>(M));
  for (std::size_t a = 0; a < M; ++a)
    for (std::size_t b = a; b < M; ++b) {
      sj.xab[a][b] = partial(sj.xa[a], static_cast<int>(b));
      sj.xab[b][a] = sj.xab[a][b];
    }

  sj.G = jmat(m, m);
  for (std::size_t a = 0; a < M; ++a)
    for (std::size_t b = a; b < M; ++b) sj.G[a][b] = sj.G[b][a] = pinner(sj.xa[a], sj.xa[b], sj.s);

  // normal: Euclidean cross product of the constraint rows, lowered by J
  std::vector<JVec> rows;
  if (ambient.kind != AmbientKind::LorentzFlat) rows.push_back(x);
  for (const auto& v : sj.xa) rows.push_back(v);
  JVec nu = cross(rows);
  for (int i = 0; i < sj.s; ++i) nu[static_cast<std::size_t>(i)] = -nu[static_cast<std::size_t>(i)];
  const Jet q = pinner(nu, nu, sj.s);
  if (!(q.value() < 0.0)) {
    std::ostringstream msg;
    msg << "shape: normal is not time-like (<nu,nu> = " << q.value()
        << "); the tangent plane is not space-like";
    throw RegularityError(msg.str(), q.value());
  }
  Jet scale = inv(sqrt(-q));
  double big = 0.0;
  for (const Jet& c : nu) big = std::max(big, std::abs(c.value()));
  for (const Jet& c : nu)
    if (std::abs(c.value()) > 1e-9 * big) {
      if ((c.value() > 0.0) != flip) scale = -scale;
      break;
    }
  sj.n = scaled(nu, scale);

  sj.h = jmat(m, m);
  for (std::size_t a = 0; a < M; ++a)
    for (std::size_t b = a; b < M; ++b) sj.h[a][b] = sj.h[b][a] = -pinner(sj.n, sj.xab[a][b], sj.s);

  sj.Ginv = mat_inverse(sj.G);
  sj.S = mat_mul(sj.Ginv, sj.h);
  sj.H = trace(sj.S) * (1.0 / m);
  JMat tf = sj.S;
  for (std::size_t a = 0; a < M; ++a) tf[a][a] = tf[a][a] - sj.H;
  const Jet tf2 = trace(mat_mul(tf, tf));
  sj.norm_h2 = trace(mat_mul(sj.S, sj.S));
  sj.rho2 = tf2 * (static_cast<double>(m) / (m - 1));
  return sj;
}

}  // namespace confgeo::detail

namespace confgeo {

namespace {

// smallest and largest eigenvalue of the induced metric at u
std::pair<double, double> metric_range(const ImmersionChart& chart, const std::vector<Jet>& x) {
  const int m = chart.dim();
  const int s = chart.ambient().time_slots();
  Eigen::MatrixXd G(m, m);
  std::vector<std::vector<double>> xa;
  for (int a = 0; a < m; ++a) {
    std::vector<double> v;
    for (const Jet& c : x) v.push_back(c.derivative(a).value());
    xa.push_back(std::move(v));
  }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      G(a, b) = inner<double>(xa[static_cast<std::size_t>(a)], xa[static_cast<std::size_t>(b)], s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(0), es.eigenvalues()(m - 1)};
}

ShapeData shape_data_impl(const ImmersionChart& chart, const std::vector<double>& u,
                          const Tolerances& tol, bool flip) {
  const int m = chart.dim();
  const std::vector<Jet> x = chart.jet(u, 2);
  const auto [lo, hi] = metric_range(chart, x);
  if (!(lo > tol.metric_min * std::max(1.0, hi))) {
    std::ostringstream msg;
    msg << "shape: induced metric is degenerate or not positive definite (min eigenvalue " << lo
        << ")";
    throw RegularityError(msg.str(), lo);
  }
  const detail::ShapeJets sj = detail::shape_jets(chart.ambient(), x, flip);

  ShapeData sd;
  sd.u = u;
  sd.x = detail::values(sj.x);
  sd.induced_metric = detail::values(sj.G);
  sd.normal = detail::values(sj.n);
  sd.h_coord = detail::values(sj.h);
  sd.H = sj.H.value();
  sd.norm_h2 = sj.norm_h2.value();
  sd.rho2 = sj.rho2.value();
  if (!(sd.rho2 > tol.rho2_min)) {
    std::ostringstream msg;
    msg << "shape: rho^2 = " << sd.rho2 << " at a totally umbilic locus";
    throw RegularityError(msg.str(), sd.rho2);
  }
  sd.rho = std::sqrt(sd.rho2);

  const Signature sig = chart.ambient().signature();
  std::vector<PseudoVector> tangents;
  for (const auto& v : sj.xa) tangents.emplace_back(detail::values(v), sig);
  const auto ortho = gram_schmidt_spacelike(tangents, tol.metric_min);
  for (const auto& e : ortho) sd.frame_ambient.push_back(e.coords());

  // the same triangular frame expressed in coordinates: G = L L^T, P = L^-T
  Eigen::LLT<Eigen::MatrixXd> llt(sd.induced_metric);
  const Eigen::MatrixXd Lm = llt.matrixL();
  sd.frame = Lm.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(m, m));
  sd.coframe = Lm.transpose();
  sd.h = sd.frame.transpose() * sd.h_coord * sd.frame;
  sd.h = 0.5 * (sd.h + sd.h.transpose()).eval();
  sd.principal_curvatures = sym_eigen(SymMatrix::from_dense(sd.h)).values;
  return sd;
}

}  // namespace

ShapeData shape_data(const ImmersionChart& chart, const std::vector<double>& u,
                     const Tolerances& tol) {
  return shape_data_impl(chart, u, tol, false);
}

ShapeData shape_data_flipped(const ImmersionChart& chart, const std::vector<double>& u,
                             const Tolerances& tol) {
  return shape_data_impl(chart, u, tol, true);
}

RegularityReport validate_regularity(const ImmersionChart& chart, const Grid& grid,
                                     const Tolerances& tol) {
  RegularityReport rep;
  rep.points.resize(grid.size());
  const double ambient_tol =
      chart.jet_source() == JetSource::Analytic ? tol.ambient_analytic : tol.ambient_fd;
  parallel_for(grid.size(), [&](std::size_t i) {
    RegularityPoint& p = rep.points[i];
    p.u = grid.point(i);
    try {
      const std::vector<Jet> x = chart.jet(p.u, 2);
      const auto [lo, hi] = metric_range(chart, x);
      p.min_metric_eigenvalue = lo;
      std::vector<double> xv;
      for (const Jet& c : x) xv.push_back(c.value());
      p.ambient_residual = std::abs(chart.ambient().quadric_residual(xv));
      if (!(lo > tol.metric_min * std::max(1.0, hi))) {
        p.error = "induced metric degenerate";
        p.rho2 = 0.0;
        return;
      }
      p.rho2 = detail::shape_jets(chart.ambient(), x).rho2.value();
      if (!(p.rho2 > tol.rho2_min))
        p.error = "totally umbilic (rho^2 ~ 0)";
      else if (p.ambient_residual > ambient_tol)
        p.error = "point off the ambient quadric";
      else
        p.regular = true;
    } catch (const Error& e) {
      p.error = e.what();
    }
  });
  rep.regular = !rep.points.empty();
  bool first = true;
  for (const auto& p : rep.points) {
    rep.regular = rep.regular && p.regular;
    if (first) {
      rep.min_rho2 = p.rho2;
      rep.min_metric_eigenvalue = p.min_metric_eigenvalue;
      first = false;
    }
    rep.min_rho2 = std::min(rep.min_rho2, p.rho2);
    rep.min_metric_eigenvalue = std::min(rep.min_metric_eigenvalue, p.min_metric_eigenvalue);
    rep.max_ambient_residual = std::max(rep.max_ambient_residual, p.ambient_residual);
  }
  return rep;
}

}  // namespace confgeo
