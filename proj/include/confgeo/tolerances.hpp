#pragma once

namespace confgeo {

// Every threshold used by the library. Call sites take a Tolerances value
// instead of hard-coding numbers.
struct Tolerances {
  // identity checks with exact (Taylor-mode) jets
  double analytic = 1e-8;
  // identity checks with finite-difference jets
  double fd = 1e-5;
  // classification gates, relative
  double classify = 1e-4;
  // relative gap used when merging eigenvalues into clusters
  double cluster_rel = 1e-6;
  // |<v,v>| <= lightlike * |v|^2
  double lightlike = 1e-12;
  // minimum rho^2 for a point to count as regular
  double rho2_min = 1e-10;
  // minimum eigenvalue of the induced metric, relative to its largest
  double metric_min = 1e-12;
  // distance from the ambient quadric
  double ambient_analytic = 1e-9;
  double ambient_fd = 1e-6;
  // points supplied by users to the conformal maps
  double on_space_form = 1e-9;
  // denominators of the coordinate maps
  double denominator = 1e-12;
  // the two routes for A and B may differ by this factor times the
  // active tier before an InconsistencyError is raised
  double consistency_factor = 100.0;
};

}  // namespace confgeo
