#include "confgeo/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "confgeo/errors.hpp"
#include "confgeo/pseudo_linalg.hpp"

namespace confgeo {

std::string to_string(Branch b) {
  switch (b) {
    case Branch::Isotropic: return "Isotropic";
    case Branch::ParallelB: return "ParallelB";
    case Branch::ParallelANonParallelBPositive: return "ParallelA-NonParallelB-Positive";
    case Branch::ParallelANonParallelBNegative: return "ParallelA-NonParallelB-Negative";
    case Branch::NotParallelA: return "NotParallelA";
    case Branch::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::string branch_anchor(Branch b) {
  switch (b) {
    case Branch::Isotropic:
      return "parallel Blaschke tensor, one eigenvalue: conformally isotropic case";
    case Branch::ParallelB:
      return "parallel Blaschke tensor and parallel conformal second fundamental form";
    case Branch::ParallelANonParallelBPositive:
      return "parallel Blaschke tensor, non-parallel B, lambda > 0: zero block is hyperbolic space "
             "(assembled de Sitter example)";
    case Branch::ParallelANonParallelBNegative:
      return "parallel Blaschke tensor, non-parallel B, lambda < 0: zero block is a round sphere "
             "(assembled anti-de Sitter example)";
    case Branch::NotParallelA:
      return "Blaschke tensor not parallel: outside the classification";
    case Branch::Inconclusive:
      return "gates contradict each other or could not be evaluated";
  }
  return "";
}

namespace {

double frob(const Eigen::MatrixXd& a) { return a.norm(); }

Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXd& a) {
  return sym_eigen(SymMatrix::from_dense(a)).values;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

GateResult gate_phi(const std::vector<ConformalData>& pts, const Tolerances& tol) {
  GateResult g{"phi", true, 0.0, tol.classify};
  for (const auto& p : pts) g.value = std::max(g.value, p.inv.Phi.norm());
  g.pass = g.value <= g.threshold;
  return g;
}

GateResult gate_parallel(const std::vector<ConformalData>& pts, TensorKind which,
                         const Tolerances& tol) {
  GateResult g{which == TensorKind::A ? "parallel_A" : "parallel_B", true, 0.0, tol.classify};
  for (const auto& p : pts) {
    const double grad = which == TensorKind::A ? p.der.normA() : p.der.normB();
    const double size = frob(which == TensorKind::A ? p.inv.A : p.inv.B);
    g.value = std::max(g.value, grad / (1.0 + size));
  }
  g.pass = g.value <= g.threshold;
  return g;
}

EigenStructure eigen_structure(const std::vector<ConformalData>& pts, const Tolerances& tol) {
  if (pts.empty()) throw ValidationError("eigen_structure: no samples");
  EigenStructure e;
  const ConformalData& ref = pts.front();
  const int m = ref.inv.m;
  e.m = m;

  const SymEigen ea = sym_eigen(SymMatrix::from_dense(ref.inv.A));
  const Eigen::VectorXd lam0 = ea.values;
  for (const auto& p : pts) {
    const Eigen::VectorXd lam = sorted_eigenvalues(p.inv.A);
    for (int i = 0; i < m; ++i)
      e.grid_variation =
          std::max(e.grid_variation, std::abs(lam(i) - lam0(i)) / (1.0 + std::abs(lam0(i))));
    const Eigen::MatrixXd comm = p.inv.A * p.inv.B - p.inv.B * p.inv.A;
    e.commutator = std::max(e.commutator, comm.cwiseAbs().maxCoeff());
  }
  if (e.grid_variation > tol.classify)
    throw InconsistencyError("eigen_structure: A eigenvalues vary over the grid by " +
                             fmt(e.grid_variation) + " (relative)");

  std::vector<double> vals(lam0.data(), lam0.data() + m);
  const std::vector<Cluster> clusters = cluster_eigenvalues(vals, tol.classify);
  e.t = static_cast<int>(clusters.size());
  e.basis = Eigen::MatrixXd::Zero(m, m);
  e.a_diag.assign(static_cast<std::size_t>(m), 0.0);
  e.b_diag.assign(static_cast<std::size_t>(m), 0.0);
  e.block_of.assign(static_cast<std::size_t>(m), 0);
  int start = 0;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const int k = clusters[c].multiplicity;
    EigenBlock blk;
    blk.lambda = clusters[c].value;
    blk.multiplicity = k;
    blk.spread = lam0(start + k - 1) - lam0(start);
    const Eigen::MatrixXd V = ea.vectors.middleCols(start, k);
    const Eigen::MatrixXd Bb = V.transpose() * ref.inv.B * V;
    const SymEigen eb = sym_eigen(SymMatrix::from_dense(Bb));
    const Eigen::MatrixXd W = V * eb.vectors;
    double mu_max = 0.0;
    for (int i = 0; i < k; ++i) {
      blk.mu.push_back(eb.values(i));
      mu_max = std::max(mu_max, std::abs(eb.values(i)));
      const auto idx = static_cast<std::size_t>(start + i);
      e.basis.col(start + i) = W.col(i);
      e.a_diag[idx] = lam0(start + i);
      e.b_diag[idx] = eb.values(i);
      e.block_of[idx] = static_cast<int>(c);
    }
    blk.b_zero = mu_max <= tol.classify;
    if (k > 0 && clusters.size() >= 3)
      e.block_b_spread = std::max(e.block_b_spread, eb.values(k - 1) - eb.values(0));
    e.blocks.push_back(std::move(blk));
    start += k;
  }
  return e;
}

double check_bibj(const EigenStructure& e, const Tolerances& tol) {
  bool applies = e.t >= 3;
  if (e.t == 2) {
    const int zeros = static_cast<int>(e.blocks[0].b_zero) + static_cast<int>(e.blocks[1].b_zero);
    applies = zeros == 1;
  }
  (void)tol;
  if (!applies) return 0.0;
  double worst = 0.0;
  for (int i = 0; i < e.m; ++i)
    for (int j = 0; j < e.m; ++j) {
      const auto I = static_cast<std::size_t>(i), J = static_cast<std::size_t>(j);
      if (e.block_of[I] == e.block_of[J]) continue;
      worst = std::max(worst, std::abs(-e.b_diag[I] * e.b_diag[J] + e.a_diag[I] + e.a_diag[J]));
    }
  return worst;
}

double zero_block_sectional_residual(const ConformalData& pt, const EigenStructure& e,
                                     const Tolerances& tol) {
  (void)tol;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (e.t != 2) return nan;
  int zero = -1;
  for (int c = 0; c < 2; ++c)
    if (e.blocks[static_cast<std::size_t>(c)].b_zero) zero = zero < 0 ? c : -2;
  if (zero < 0) return nan;
  const EigenBlock& zb = e.blocks[static_cast<std::size_t>(zero)];
  if (zb.multiplicity < 2) return nan;
  const double target = -2.0 * e.blocks[static_cast<std::size_t>(1 - zero)].lambda;
  const int m = e.m;
  std::vector<int> idx;
  for (int i = 0; i < m; ++i)
    if (e.block_of[static_cast<std::size_t>(i)] == zero) idx.push_back(i);
  const Eigen::MatrixXd& V = e.basis;
  double worst = 0.0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const int p = idx[a], q = idx[b];
      // K(v_p, v_q) = <R(v_p, v_q) v_q, v_p> = R(q, p, p, q)
      double k = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int s = 0; s < m; ++s)
            for (int l = 0; l < m; ++l)
              k += V(i, q) * V(j, p) * V(s, p) * V(l, q) * pt.inv.Rm(i, j, s, l);
      worst = std::max(worst, std::abs(k - target));
    }
  return worst;
}

ClassificationReport classify_samples(const std::string& chart_name,
                                      const std::vector<ConformalData>& pts,
                                      const Tolerances& tol) {
  ClassificationReport r;
  r.chart = chart_name;
  r.tol = tol;
  r.sectional_residual = std::numeric_limits<double>::quiet_NaN();
  auto finish = [&r](Branch b, const std::string& gate = "") {
    r.branch = b;
    r.anchor = branch_anchor(b);
    r.failed_gate = gate;
    return r;
  };
  if (pts.empty()) {
    r.errors.push_back("no regular samples");
    return finish(Branch::Inconclusive, "regularity");
  }

  const GateResult ga = gate_parallel(pts, TensorKind::A, tol);
  const GateResult gp = gate_phi(pts, tol);
  const GateResult gb = gate_parallel(pts, TensorKind::B, tol);
  r.gradA_norm = ga.value;
  r.phi_norm = gp.value;
  r.gradB_norm = gb.value;
  r.gates.push_back(ga);
  if (!ga.pass) return finish(Branch::NotParallelA);
  r.gates.push_back(gp);
  if (!gp.pass) {
    r.notes.push_back("parallel A with nonzero Phi cannot occur; numerical inconsistency");
    return finish(Branch::Inconclusive, "phi");
  }

  try {
    r.eigen = eigen_structure(pts, tol);
    r.has_eigen = true;
  } catch (const Error& e) {
    r.errors.push_back(e.what());
    return finish(Branch::Inconclusive, "eigen_structure");
  }
  const EigenStructure& e = r.eigen;
  double scale = 1.0;
  for (const auto& b : e.blocks) scale = std::max(scale, std::abs(b.lambda));
  GateResult gc{"commutator", e.commutator <= tol.classify * scale, e.commutator,
                tol.classify * scale};
  r.gates.push_back(gc);
  if (!gc.pass) return finish(Branch::Inconclusive, "commutator");

  if (e.t == 1) return finish(Branch::Isotropic);

  r.bibj_residual = check_bibj(e, tol);
  r.gates.push_back(gb);
  if (gb.pass) {
    if (e.t >= 3) {
      GateResult gl{"block_b_equal", e.block_b_spread <= tol.classify, e.block_b_spread,
                    tol.classify};
      r.gates.push_back(gl);
      if (!gl.pass) return finish(Branch::Inconclusive, "block_b_equal");
    }
    return finish(Branch::ParallelB);
  }

  if (e.t >= 3) {
    r.notes.push_back("t >= 3 with parallel A forces parallel B");
    return finish(Branch::Inconclusive, "parallel_B");
  }
  // t == 2
  const bool z0 = e.blocks[0].b_zero, z1 = e.blocks[1].b_zero;
  GateResult gz{"zero_b_block", z0 != z1, static_cast<double>(z0) + static_cast<double>(z1), 1.0};
  r.gates.push_back(gz);
  if (!gz.pass) return finish(Branch::Inconclusive, "zero_b_block");
  r.zero_block = z0 ? 0 : 1;
  const double lam_sum = e.blocks[0].lambda + e.blocks[1].lambda;
  const double rel = tol.classify * scale;
  GateResult gs{"lambda_sum", std::abs(lam_sum) <= rel, std::abs(lam_sum), rel};
  r.gates.push_back(gs);
  GateResult gr{"bibj", r.bibj_residual <= rel, r.bibj_residual, rel};
  r.gates.push_back(gr);
  if (!gs.pass) return finish(Branch::Inconclusive, "lambda_sum");
  if (!gr.pass) return finish(Branch::Inconclusive, "bibj");

  const double lam = e.blocks[static_cast<std::size_t>(1 - r.zero_block)].lambda;
  if (!(std::abs(lam) > rel)) return finish(Branch::Inconclusive, "lambda_sign");
  r.sectional_residual = zero_block_sectional_residual(pts.front(), e, tol);
  if (!std::isnan(r.sectional_residual)) {
    GateResult gk{"zero_block_sectional", r.sectional_residual <= rel, r.sectional_residual, rel};
    r.gates.push_back(gk);
    if (!gk.pass) return finish(Branch::Inconclusive, "zero_block_sectional");
  }
  return finish(lam > 0 ? Branch::ParallelANonParallelBPositive
                        : Branch::ParallelANonParallelBNegative);
}

ClassificationReport classify(const ImmersionChart& chart, const Grid& grid, const Tolerances& tol) {
  ClassificationReport r;
  try {
    const RegularityReport reg = validate_regularity(chart, grid, tol);
    if (!reg.regular) {
      r.chart = chart.name();
      r.tol = tol;
      r.grid = grid;
      r.sectional_residual = std::numeric_limits<double>::quiet_NaN();
      for (const auto& p : reg.points)
        if (!p.regular)
          r.errors.push_back(p.error.empty() ? "non-regular point, rho^2 = " + fmt(p.rho2)
                                             : p.error);
      r.branch = Branch::Inconclusive;
      r.anchor = branch_anchor(r.branch);
      r.failed_gate = "regularity";
      return r;
    }
    const ResidualSummary sum = identity_residuals(chart, grid, tol);
    if (sum.failed_points > 0) {
      r = classify_samples(chart.name(), {}, tol);
      r.errors = sum.errors;
      r.failed_gate = "invariants";
    } else {
      r = classify_samples(chart.name(), sum.points, tol);
    }
  } catch (const Error& e) {
    r = classify_samples(chart.name(), {}, tol);
    r.errors.push_back(e.what());
    r.failed_gate = "invariants";
  }
  r.grid = grid;
  return r;
}

}  // namespace confgeo
