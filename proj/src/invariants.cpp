#include "confgeo/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "confgeo/errors.hpp"
#include "confgeo/parallel.hpp"
#include "jet_geometry.hpp"

namespace confgeo {

using detail::JMat;
using detail::JVec;

double FrameResiduals::max() const {
  return std::max({std::abs(YY), std::abs(NN), std::abs(YN), std::abs(xixi), std::abs(YiYj),
                   std::abs(lapYY), std::abs(orth)});
}

double TensorDerivatives::normA() const {
  double acc = 0.0;
  for (double v : dA) acc += v * v;
  return std::sqrt(acc);
}

double TensorDerivatives::normB() const {
  double acc = 0.0;
  for (double v : dB) acc += v * v;
  return std::sqrt(acc);
}

const std::vector<std::string>& IdentityResiduals::names() {
  static const std::vector<std::string> n = {
      "trace_b", "norm_b", "trace_a", "phi_antisym", "blaschke_codazzi", "b_codazzi",
      "gauss",   "ricci",  "frame",   "route_a",     "route_b",          "route_phi"};
  return n;
}

std::vector<double> IdentityResiduals::values() const {
  return {trace_b, norm_b, trace_a, phi_antisym, blaschke_codazzi, b_codazzi,
          gauss,   ricci,  frame,   route_a,     route_b,          route_phi};
}

void IdentityResiduals::max_with(const IdentityResiduals& o) {
  trace_b = std::max(trace_b, o.trace_b);
  norm_b = std::max(norm_b, o.norm_b);
  trace_a = std::max(trace_a, o.trace_a);
  phi_antisym = std::max(phi_antisym, o.phi_antisym);
  blaschke_codazzi = std::max(blaschke_codazzi, o.blaschke_codazzi);
  b_codazzi = std::max(b_codazzi, o.b_codazzi);
  gauss = std::max(gauss, o.gauss);
  ricci = std::max(ricci, o.ricci);
  frame = std::max(frame, o.frame);
  route_a = std::max(route_a, o.route_a);
  route_b = std::max(route_b, o.route_b);
  route_phi = std::max(route_phi, o.route_phi);
}

IdentityResiduals identity_thresholds(JetSource source) {
  const bool fd = source == JetSource::FiniteDifference;
  IdentityResiduals t;
  t.trace_b = 1e-8;
  t.norm_b = 1e-8;
  t.trace_a = fd ? 1e-3 : 1e-6;
  const double integ = fd ? 1e-3 : 1e-5;
  t.phi_antisym = t.blaschke_codazzi = t.b_codazzi = t.gauss = t.ricci = integ;
  t.frame = fd ? 1e-6 : 1e-8;
  t.route_a = t.route_b = t.route_phi = 1e-6;
  return t;
}

double residual_tier(const ImmersionChart& chart, const Tolerances& tol) {
  return chart.jet_source() == JetSource::Analytic ? tol.analytic : tol.fd;
}

namespace {

std::size_t idx3(int m, int a, int b, int c) {
  return static_cast<std::size_t>((a * m + b) * m + c);
}
std::size_t idx4(int m, int a, int b, int c, int d) {
  return static_cast<std::size_t>(((a * m + b) * m + c) * m + d);
}

// Light-cone lift Z of a point of the ambient form and the unit time-like
// vector xi' orthogonal to Z and to the lift of every tangent vector.
//   de Sitter(a):  Z = (a, x)                 xi' = (0, n)
//   anti-de Sitter: Z = (x, a)                xi' = (n, 0)
//   Lorentz flat:  Z = ((1+q)/2, x, (1-q)/2)  xi' = (<x,n>, n, -<x,n>),  q = <x,x>
template <class T>
std::pair<std::vector<T>, std::vector<T>> light_cone_lift(const AmbientForm& amb,
                                                          const std::vector<T>& x,
                                                          const std::vector<T>& n) {
  std::vector<T> Z, xi;
  const T zero(0.0);
  switch (amb.kind) {
    case AmbientKind::DeSitter:
      Z.push_back(T(amb.a));
      xi.push_back(zero);
      Z.insert(Z.end(), x.begin(), x.end());
      xi.insert(xi.end(), n.begin(), n.end());
      break;
    case AmbientKind::AntiDeSitter:
      Z = x;
      xi = n;
      Z.push_back(T(amb.a));
      xi.push_back(zero);
      break;
    case AmbientKind::LorentzFlat: {
      const T q = inner<T>(std::span<const T>(x), std::span<const T>(x), 1);
      const T un = inner<T>(std::span<const T>(x), std::span<const T>(n), 1);
      Z.push_back((T(1.0) + q) * 0.5);
      xi.push_back(un);
      Z.insert(Z.end(), x.begin(), x.end());
      xi.insert(xi.end(), n.begin(), n.end());
      Z.push_back((T(1.0) - q) * 0.5);
      xi.push_back(-un);
      break;
    }
  }
  return {Z, xi};
}

constexpr int kConformalTimeSlots = 2;

// Gamma^c_ab stored at (c, a, b)
std::vector<Jet> christoffel(const JMat& g, const JMat& ginv) {
  const int m = static_cast<int>(g.size());
  const auto M = static_cast<std::size_t>(m);
  // dg[d][a][b] = d_d g_ab
  std::vector<Jet> dg(M * M * M);
  for (int d = 0; d < m; ++d)
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b)
        dg[idx3(m, d, a, b)] = dg[idx3(m, d, b, a)] =
            g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].derivative(d);
  std::vector<Jet> gamma(M * M * M);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      std::vector<Jet> first(M);  // Gamma_{d,ab}
      for (int d = 0; d < m; ++d)
        first[static_cast<std::size_t>(d)] =
            (dg[idx3(m, a, d, b)] + dg[idx3(m, b, d, a)] - dg[idx3(m, d, a, b)]) * 0.5;
      for (int c = 0; c < m; ++c) {
        Jet acc(0.0);
        for (int d = 0; d < m; ++d)
          acc += ginv[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)] *
                 first[static_cast<std::size_t>(d)];
        gamma[idx3(m, c, a, b)] = gamma[idx3(m, c, b, a)] = acc;
      }
    }
  return gamma;
}

// Contracts every index of a rank-r coordinate tensor with E (columns are
// frame vectors): out_{i..} = sum E^a_i ... T_{a..}.
std::vector<double> to_frame(const std::vector<double>& t, int m, int rank,
                             const Eigen::MatrixXd& E) {
  std::vector<double> cur = t;
  // contract index `pos` (0 = slowest)
  for (int pos = 0; pos < rank; ++pos) {
    std::size_t s = 1;
    for (int r = pos + 1; r < rank; ++r) s *= static_cast<std::size_t>(m);
    std::vector<double> next(cur.size(), 0.0);
    for (std::size_t flat = 0; flat < cur.size(); ++flat) {
      const auto i = static_cast<int>((flat / s) % static_cast<std::size_t>(m));
      const std::size_t base = flat - static_cast<std::size_t>(i) * s;
      double acc = 0.0;
      for (int a = 0; a < m; ++a) acc += E(a, i) * cur[base + static_cast<std::size_t>(a) * s];
      next[flat] = acc;
    }
    cur.swap(next);
  }
  return cur;
}

Curvature curvature_from(const std::vector<Jet>& gamma, const Eigen::MatrixXd& gv,
                         const Eigen::MatrixXd& E) {
  const int m = static_cast<int>(gv.rows());
  const auto M = static_cast<std::size_t>(m);
  std::vector<double> G(M * M * M);
  for (std::size_t i = 0; i < G.size(); ++i) G[i] = gamma[i].value();
  // R^d_{cab}: R(d_a, d_b) d_c = R^d_{cab} d_d
  std::vector<double> Rup(M * M * M * M, 0.0);
  for (int d = 0; d < m; ++d)
    for (int c = 0; c < m; ++c)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          double v = gamma[idx3(m, d, b, c)].derivative(a).value() -
                     gamma[idx3(m, d, a, c)].derivative(b).value();
          for (int e = 0; e < m; ++e)
            v += G[idx3(m, d, a, e)] * G[idx3(m, e, b, c)] -
                 G[idx3(m, d, b, e)] * G[idx3(m, e, a, c)];
          Rup[idx4(m, d, c, a, b)] = v;
        }
  // lower and reorder to (i=c, j=d, k=a, l=b): R_cdab = <R(d_a,d_b) d_c, d_d>
  std::vector<double> Rl(M * M * M * M, 0.0);
  for (int c = 0; c < m; ++c)
    for (int d = 0; d < m; ++d)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          double v = 0.0;
          for (int f = 0; f < m; ++f) v += gv(d, f) * Rup[idx4(m, f, c, a, b)];
          Rl[idx4(m, c, d, a, b)] = v;
        }
  Curvature cv;
  cv.m = m;
  cv.R = to_frame(Rl, m, 4, E);
  cv.Ricci = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) cv.Ricci(i, j) += cv.Rm(i, k, k, j);
  cv.kappa = cv.Ricci.trace() / (m * (m - 1));
  return cv;
}

// g-orthonormal frame from the metric values: g = L L^T, E = L^-T
Eigen::MatrixXd orthonormal_frame(const Eigen::MatrixXd& gv) {
  Eigen::LLT<Eigen::MatrixXd> llt(gv);
  if (llt.info() != Eigen::Success)
    throw RegularityError("conformal metric is not positive definite", gv.minCoeff());
  const Eigen::MatrixXd L = llt.matrixL();
  const auto m = gv.rows();
  return L.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(m, m));
}

Eigen::MatrixXd mat_values(const JMat& a) { return detail::values(a); }

double max_abs(const Eigen::MatrixXd& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

double gauss_residual(const std::vector<double>& R, const Eigen::MatrixXd& A,
                      const Eigen::MatrixXd& B) {
  const int m = static_cast<int>(A.rows());
  auto d = [](int i, int j) { return i == j ? 1.0 : 0.0; };
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          const double rhs = B(i, k) * B(j, l) - B(i, l) * B(j, k) + A(i, l) * d(j, k) -
                             A(i, k) * d(j, l) + A(j, k) * d(i, l) - A(j, l) * d(i, k);
          worst = std::max(worst, std::abs(R[idx4(m, i, j, k, l)] - rhs));
        }
  return worst;
}

ConformalData analyze_point(const ImmersionChart& chart, const std::vector<double>& u,
                            const Tolerances& tol) {
  const int m = chart.dim();
  const auto M = static_cast<std::size_t>(m);
  const AmbientForm& amb = chart.ambient();
  const JVec x = chart.jet(u, kInvariantJetOrder);
  const detail::ShapeJets sj = detail::shape_jets(amb, x);
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat_values(sj.G), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(m - 1);
    if (!(lo > tol.metric_min * std::max(1.0, hi)))
      throw RegularityError("induced metric is degenerate", lo);
  }
  if (!(sj.rho2.value() > tol.rho2_min)) {
    std::ostringstream msg;
    msg << "rho^2 = " << sj.rho2.value() << ": point lies on the totally umbilic locus";
    throw RegularityError(msg.str(), sj.rho2.value());
  }

  ConformalData cd;
  cd.u = u;
  cd.x = detail::values(sj.x);

  // closed formulas in coordinates
  const double c = amb.curvature();
  const Jet rho2 = sj.rho2;
  const Jet rho = sqrt(rho2);
  const Jet rinv = inv(rho);
  const Jet L = log(rho2) * 0.5;
  JVec dL(M);
  for (int a = 0; a < m; ++a) dL[static_cast<std::size_t>(a)] = L.derivative(a);
  const std::vector<Jet> gbar = christoffel(sj.G, sj.Ginv);

  Jet grad2(0.0);
  for (std::size_t a = 0; a < M; ++a)
    for (std::size_t b = 0; b < M; ++b) grad2 += sj.Ginv[a][b] * dL[a] * dL[b];
  const Jet trace_part = (grad2 - sj.H * sj.H - c) * 0.5;

  JMat A = detail::jmat(m, m), B = detail::jmat(m, m), hH = detail::jmat(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
      Jet hess = dL[ua].derivative(b);
      for (int k = 0; k < m; ++k) hess -= gbar[idx3(m, k, a, b)] * dL[static_cast<std::size_t>(k)];
      const Jet Aab = -(hess - dL[ua] * dL[ub] + sj.H * sj.h[ua][ub]) - trace_part * sj.G[ua][ub];
      A[ua][ub] = A[ub][ua] = Aab;
      hH[ua][ub] = hH[ub][ua] = sj.h[ua][ub] - sj.H * sj.G[ua][ub];
      B[ua][ub] = B[ub][ua] = rho * hH[ua][ub];
    }
  JVec Phi(M);
  for (std::size_t a = 0; a < M; ++a) {
    Jet acc = sj.H.derivative(static_cast<int>(a));
    for (std::size_t b = 0; b < M; ++b)
      for (std::size_t k = 0; k < M; ++k) acc += hH[a][b] * sj.Ginv[b][k] * dL[k];
    Phi[a] = -rinv * acc;
  }

  JMat g = detail::jmat(m, m), ginv = detail::jmat(m, m);
  const Jet r2inv = inv(rho2);
  for (std::size_t a = 0; a < M; ++a)
    for (std::size_t b = 0; b < M; ++b) {
      g[a][b] = rho2 * sj.G[a][b];
      ginv[a][b] = r2inv * sj.Ginv[a][b];
    }
  const std::vector<Jet> gamma = christoffel(g, ginv);

  cd.rho = rho.value();
  cd.H = sj.H.value();
  cd.g = mat_values(g);
  cd.A_coord = mat_values(A);
  cd.B_coord = mat_values(B);
  cd.Phi_coord = Eigen::VectorXd(m);
  for (int a = 0; a < m; ++a) cd.Phi_coord(a) = Phi[static_cast<std::size_t>(a)].value();

  const Eigen::MatrixXd E = orthonormal_frame(cd.g);
  InvariantTensors& it = cd.inv;
  it.u = u;
  it.m = m;
  it.E = E;
  it.A = E.transpose() * cd.A_coord * E;
  it.B = E.transpose() * cd.B_coord * E;
  it.Phi = E.transpose() * cd.Phi_coord;
  const Curvature cv = curvature_from(gamma, cd.g, E);
  it.R = cv.R;
  it.Ricci = cv.Ricci;
  it.kappa = cv.kappa;

  // covariant derivatives
  std::vector<double> G(M * M * M);
  for (std::size_t i = 0; i < G.size(); ++i) G[i] = gamma[i].value();
  std::vector<double> dA(M * M * M), dB(M * M * M);
  Eigen::MatrixXd dPhi(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int k = 0; k < m; ++k) {
        const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
        double va = A[ua][ub].derivative(k).value();
        double vb = B[ua][ub].derivative(k).value();
        for (int d = 0; d < m; ++d) {
          va -= G[idx3(m, d, k, a)] * cd.A_coord(d, b) + G[idx3(m, d, k, b)] * cd.A_coord(a, d);
          vb -= G[idx3(m, d, k, a)] * cd.B_coord(d, b) + G[idx3(m, d, k, b)] * cd.B_coord(a, d);
        }
        dA[idx3(m, a, b, k)] = va;
        dB[idx3(m, a, b, k)] = vb;
      }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double v = Phi[static_cast<std::size_t>(a)].derivative(b).value();
      for (int d = 0; d < m; ++d) v -= G[idx3(m, d, b, a)] * cd.Phi_coord(d);
      dPhi(a, b) = v;
    }
  cd.der.m = m;
  cd.der.dA = to_frame(dA, m, 3, E);
  cd.der.dB = to_frame(dB, m, 3, E);
  cd.der.dPhi = E.transpose() * dPhi * E;

  // structure-equation route
  {
    const auto [Z, xip] = light_cone_lift<Jet>(amb, sj.x, sj.n);
    const int s = kConformalTimeSlots;
    std::vector<JVec> Za(M);
    for (int a = 0; a < m; ++a) Za[static_cast<std::size_t>(a)] = detail::partial(Z, a);
    JMat I = detail::jmat(m, m), bp = detail::jmat(m, m);
    for (std::size_t a = 0; a < M; ++a)
      for (std::size_t b = a; b < M; ++b) {
        I[a][b] = I[b][a] = detail::pinner(Za[a], Za[b], s);
        bp[a][b] = bp[b][a] = -detail::pinner(detail::partial(Za[a], static_cast<int>(b)), xip, s);
      }
    JMat S = detail::mat_mul(detail::mat_inverse(I), bp);
    const Jet Hz = detail::trace(S) * (1.0 / m);
    for (std::size_t a = 0; a < M; ++a) S[a][a] = S[a][a] - Hz;
    const Jet rhoz = sqrt(detail::trace(detail::mat_mul(S, S)) * (static_cast<double>(m) / (m - 1)));
    const JVec Y = detail::scaled(Z, rhoz);
    std::vector<JVec> Ya(M);
    for (int a = 0; a < m; ++a) Ya[static_cast<std::size_t>(a)] = detail::partial(Y, a);
    std::vector<std::vector<JVec>> Yab(M, std::vector<JVec>(M));
    JMat gy = detail::jmat(m, m);
    for (std::size_t a = 0; a < M; ++a)
      for (std::size_t b = a; b < M; ++b) {
        Yab[a][b] = detail::partial(Ya[a], static_cast<int>(b));
        Yab[b][a] = Yab[a][b];
        gy[a][b] = gy[b][a] = detail::pinner(Ya[a], Ya[b], s);
      }
    const JMat gyinv = detail::mat_inverse(gy);
    const std::vector<Jet> gam = christoffel(gy, gyinv);
    JVec lap(Y.size(), Jet(0.0));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
        JVec hess = Yab[ua][ub];
        for (int k = 0; k < m; ++k)
          hess = detail::added(hess, detail::scaled(Ya[static_cast<std::size_t>(k)], gam[idx3(m, k, a, b)]), -1.0);
        lap = detail::added(lap, detail::scaled(hess, gyinv[ua][ub]));
      }
    const Jet lap2 = detail::pinner(lap, lap, s);
    JVec N = detail::added(detail::scaled(lap, Jet(-1.0 / m)),
                           detail::scaled(Y, lap2 * (-1.0 / (2.0 * m * m))));
    const Jet xin = detail::pinner(xip, N, s);
    const JVec xi = detail::added(xip, detail::scaled(Y, xin), -1.0);

    cd.A_struct = Eigen::MatrixXd(m, m);
    cd.B_struct = Eigen::MatrixXd(m, m);
    cd.Phi_struct = Eigen::VectorXd(m);
    const std::vector<double> Nv = detail::values(N), xiv = detail::values(xi);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const std::vector<double> yab =
            detail::values(Yab[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
        cd.A_struct(a, b) = -inner<double>(yab, Nv, s);
        cd.B_struct(a, b) = -inner<double>(yab, xiv, s);
      }
    for (int a = 0; a < m; ++a)
      cd.Phi_struct(a) = -inner<double>(xiv, detail::values(detail::partial(N, a)), s);
    cd.A_struct = E.transpose() * cd.A_struct * E;
    cd.B_struct = E.transpose() * cd.B_struct * E;
    cd.Phi_struct = E.transpose() * cd.Phi_struct;

    ConformalFrame& fr = cd.frame;
    fr.Y = detail::values(Y);
    fr.N = Nv;
    fr.xi = xiv;
    fr.omega = E.inverse();
    for (int i = 0; i < m; ++i) {
      std::vector<double> yi(Y.size(), 0.0);
      for (int a = 0; a < m; ++a) {
        const std::vector<double> ya = detail::values(Ya[static_cast<std::size_t>(a)]);
        for (std::size_t k = 0; k < yi.size(); ++k) yi[k] += E(a, i) * ya[k];
      }
      fr.Yi.push_back(std::move(yi));
    }
    FrameResiduals& rr = cd.frame_residuals;
    auto ip = [s](const std::vector<double>& p, const std::vector<double>& q) {
      return inner<double>(p, q, s);
    };
    rr.YY = ip(fr.Y, fr.Y);
    rr.NN = ip(fr.N, fr.N);
    rr.YN = ip(fr.Y, fr.N) - 1.0;
    rr.xixi = ip(fr.xi, fr.xi) + 1.0;
    rr.lapYY = ip(detail::values(lap), fr.Y) + m;
    rr.orth = std::max(std::abs(ip(fr.xi, fr.Y)), std::abs(ip(fr.xi, fr.N)));
    for (int i = 0; i < m; ++i) {
      const auto& yi = fr.Yi[static_cast<std::size_t>(i)];
      rr.orth = std::max({rr.orth, std::abs(ip(fr.xi, yi)), std::abs(ip(fr.N, yi)),
                          std::abs(ip(fr.Y, yi))});
      for (int j = 0; j < m; ++j)
        rr.YiYj = std::max(rr.YiYj, std::abs(ip(yi, fr.Yi[static_cast<std::size_t>(j)]) -
                                             (i == j ? 1.0 : 0.0)));
    }
  }

  // identity residuals
  IdentityResiduals& res = cd.res;
  const Eigen::MatrixXd& Af = it.A;
  const Eigen::MatrixXd& Bf = it.B;
  const Eigen::VectorXd& Pf = it.Phi;
  auto delta = [](int i, int j) { return i == j ? 1.0 : 0.0; };
  res.trace_b = std::abs(Bf.trace());
  res.norm_b = std::abs(Bf.squaredNorm() - static_cast<double>(m - 1) / m);
  res.trace_a = std::abs(Af.trace() - (m * m * it.kappa - 1.0) / (2.0 * m));
  const Eigen::MatrixXd BA = Bf * Af;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      // sum_k (B_ik A_kj - B_kj A_ki) = (BA - (BA)^T)_ij
      const double comm = BA(i, j) - BA(j, i);
      res.phi_antisym =
          std::max(res.phi_antisym, std::abs(cd.der.dPhi(i, j) - cd.der.dPhi(j, i) - comm));
      for (int k = 0; k < m; ++k) {
        res.blaschke_codazzi = std::max(
            res.blaschke_codazzi, std::abs(cd.der.A(i, j, k) - cd.der.A(i, k, j) -
                                           (Bf(i, j) * Pf(k) - Bf(i, k) * Pf(j))));
        res.b_codazzi = std::max(
            res.b_codazzi, std::abs(cd.der.B(i, j, k) - cd.der.B(i, k, j) -
                                    (delta(i, j) * Pf(k) - delta(i, k) * Pf(j))));
      }
    }
  res.gauss = gauss_residual(it.R, Af, Bf);
  const Eigen::MatrixXd ric =
      Bf * Bf + Af.trace() * Eigen::MatrixXd::Identity(m, m) + (m - 2) * Af;
  res.ricci = max_abs(it.Ricci - ric);
  res.frame = cd.frame_residuals.max();
  res.route_a = max_abs(Af - cd.A_struct) / std::max(1.0, max_abs(Af));
  res.route_b = max_abs(Bf - cd.B_struct) / std::max(1.0, max_abs(Bf));
  res.route_phi = (Pf - cd.Phi_struct).cwiseAbs().maxCoeff() /
                  std::max(1.0, Pf.cwiseAbs().maxCoeff());
  return cd;
}

std::vector<double> conformal_position(const ShapeData& shape, const AmbientForm& amb) {
  if (!(shape.rho > 0.0)) throw RegularityError("conformal position needs rho > 0", shape.rho);
  auto lift = light_cone_lift<double>(amb, shape.x, shape.normal).first;
  for (double& v : lift) v *= shape.rho;
  return lift;
}

ConformalMetric conformal_metric(const ShapeData& shape) {
  if (!(shape.rho > 0.0)) throw RegularityError("conformal metric needs rho > 0", shape.rho);
  ConformalMetric cm;
  cm.g = shape.rho2 * shape.induced_metric;
  cm.E = shape.frame / shape.rho;
  cm.omega = shape.rho * shape.coframe;
  return cm;
}

InvariantTensors blaschke_and_b(const ImmersionChart& chart, const std::vector<double>& u,
                                const Tolerances& tol) {
  ConformalData cd = analyze_point(chart, u, tol);
  const double limit = tol.consistency_factor * residual_tier(chart, tol);
  if (cd.res.route_a > limit || cd.res.route_b > limit) {
    std::ostringstream msg;
    msg << "the two routes for A and B disagree (A: " << cd.res.route_a
        << ", B: " << cd.res.route_b << ", limit " << limit << ")";
    throw InconsistencyError(msg.str());
  }
  return cd.inv;
}

Curvature curvature_of_g(const ImmersionChart& chart, const std::vector<double>& u,
                         const Tolerances& tol) {
  const ConformalData cd = analyze_point(chart, u, tol);
  Curvature cv;
  cv.m = cd.inv.m;
  cv.R = cd.inv.R;
  cv.Ricci = cd.inv.Ricci;
  cv.kappa = cd.inv.kappa;
  return cv;
}

Curvature curvature_of_g(const MetricField& metric, const std::vector<double>& u,
                         const FdOptions& opts) {
  const int m = static_cast<int>(u.size());
  const auto M = static_cast<std::size_t>(m);
  VectorField flat = [&metric, m](const std::vector<double>& p) {
    const Eigen::MatrixXd gm = metric(p);
    if (gm.rows() != m || gm.cols() != m) throw DimensionError("metric field must be m x m");
    std::vector<double> out;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) out.push_back(gm(a, b));
    return out;
  };
  const std::vector<Jet> gj = fd_jet(flat, u, 2, opts);
  JMat g = detail::jmat(m, m);
  for (std::size_t a = 0; a < M; ++a)
    for (std::size_t b = 0; b < M; ++b) g[a][b] = gj[a * M + b];
  const JMat ginv = detail::mat_inverse(g);
  const Eigen::MatrixXd gv = detail::values(g);
  return curvature_from(christoffel(g, ginv), gv, orthonormal_frame(gv));
}

TensorDerivatives covariant_derivatives(const ImmersionChart& chart, const std::vector<double>& u,
                                        const Tolerances& tol) {
  return analyze_point(chart, u, tol).der;
}

ResidualSummary identity_residuals(const ImmersionChart& chart, const Grid& grid,
                                   const Tolerances& tol) {
  ResidualSummary out;
  const std::size_t n = grid.size();
  std::vector<ConformalData> pts(n);
  std::vector<std::string> errs(n);
  parallel_for(n, [&](std::size_t i) {
    try {
      pts[i] = analyze_point(chart, grid.point(i), tol);
    } catch (const Error& e) {
      errs[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (!errs[i].empty()) {
      ++out.failed_points;
      out.errors.push_back(errs[i]);
      continue;
    }
    out.max.max_with(pts[i].res);
    out.points.push_back(std::move(pts[i]));
  }
  return out;
}

}  // namespace confgeo
