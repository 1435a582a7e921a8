#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "confgeo/chart.hpp"
#include "confgeo/tolerances.hpp"

namespace confgeo {

// Jet order used for a full point analysis: covariant derivatives of A
// need fifth derivatives of x.
inline constexpr int kInvariantJetOrder = 5;

// Moving frame {Y, N, Y_i, xi} in R^{m+3}_2 (two time slots first).
struct ConformalFrame {
  std::vector<double> Y, N, xi;
  std::vector<std::vector<double>> Yi;  // Y_i = E_i(Y)
  Eigen::MatrixXd omega;                // rows: coframe omega^i in coordinates
};

// Deviations of the frame from its defining relations.
struct FrameResiduals {
  double YY = 0.0;      // <Y,Y>
  double NN = 0.0;      // <N,N>
  double YN = 0.0;      // <Y,N> - 1
  double xixi = 0.0;    // <xi,xi> + 1
  double YiYj = 0.0;    // max |<Y_i,Y_j> - delta_ij|
  double lapYY = 0.0;   // <Delta Y, Y> + m
  double orth = 0.0;    // max |<xi,Y>|, |<xi,N>|, |<xi,Y_i>|, |<N,Y_i>|, |<Y,Y_i>|
  double max() const;
};

// Invariant components in a g-orthonormal frame E_i.
struct InvariantTensors {
  std::vector<double> u;
  int m = 0;
  Eigen::MatrixXd E;  // columns: coordinate components of E_i
  Eigen::MatrixXd A, B;
  Eigen::VectorXd Phi;
  std::vector<double> R;  // R_ijkl = <R(E_k,E_l)E_i, E_j>, row-major
  Eigen::MatrixXd Ricci;  // R_ij = sum_k R_ikkj
  double kappa = 0.0;     // normalized scalar curvature

  double Rm(int i, int j, int k, int l) const {
    return R[static_cast<std::size_t>(((i * m + j) * m + k) * m + l)];
  }
};

// Covariant derivative components in the same frame:
// A_ijk = (nabla_{E_k} A)(E_i,E_j), Phi_ij = (nabla_{E_j} Phi)(E_i).
struct TensorDerivatives {
  int m = 0;
  std::vector<double> dA, dB;
  Eigen::MatrixXd dPhi;

  double A(int i, int j, int k) const { return dA[static_cast<std::size_t>((i * m + j) * m + k)]; }
  double B(int i, int j, int k) const { return dB[static_cast<std::size_t>((i * m + j) * m + k)]; }
  double normA() const;  // Euclidean norm over all components
  double normB() const;
};

// Maximal absolute deviation of each structural identity at a point.
struct IdentityResiduals {
  double trace_b = 0.0;           // tr B
  double norm_b = 0.0;            // |B|^2 - (m-1)/m
  double trace_a = 0.0;           // tr A - (m^2 kappa - 1)/(2m)
  double phi_antisym = 0.0;       // Phi_ij - Phi_ji vs [B, A]
  double blaschke_codazzi = 0.0;  // A_ijk - A_ikj vs B_ij Phi_k - B_ik Phi_j
  double b_codazzi = 0.0;         // B_ijk - B_ikj vs delta_ij Phi_k - delta_ik Phi_j
  double gauss = 0.0;             // R_ijkl vs B B + A delta terms
  double ricci = 0.0;             // R_ij vs B^2 + tr A delta + (m-2) A
  double frame = 0.0;             // FrameResiduals::max
  double route_a = 0.0;           // closed formula vs -<Y_ij, N>, relative
  double route_b = 0.0;           // closed formula vs -<Y_ij, xi>, relative
  double route_phi = 0.0;         // closed formula vs -<xi, dN>, relative

  static const std::vector<std::string>& names();
  std::vector<double> values() const;
  void max_with(const IdentityResiduals& o);
};

// Pass thresholds per identity: exact jets get the tight tier, sampled
// (FD) jets the loose one for anything involving derivatives of A, B or g.
IdentityResiduals identity_thresholds(JetSource source);

// Everything computed at one point.
struct ConformalData {
  std::vector<double> u;
  std::vector<double> x;
  double rho = 0.0;
  double H = 0.0;
  Eigen::MatrixXd g;        // conformal metric in coordinates
  Eigen::MatrixXd A_coord;  // A as a covariant 2-tensor in coordinates
  Eigen::MatrixXd B_coord;
  Eigen::VectorXd Phi_coord;
  ConformalFrame frame;
  FrameResiduals frame_residuals;
  InvariantTensors inv;
  TensorDerivatives der;
  // second route
  Eigen::MatrixXd A_struct, B_struct;
  Eigen::VectorXd Phi_struct;
  IdentityResiduals res;
};

// Full analysis at u: closed formulas, structure-equation route, curvature,
// covariant derivatives and all identity residuals.
ConformalData analyze_point(const ImmersionChart& chart, const std::vector<double>& u,
                            const Tolerances& tol = {});

// Conformal position: rho times the light-cone lift of x. In the unit de
// Sitter picture this is Y = (rho, rho x).
std::vector<double> conformal_position(const ShapeData& shape, const AmbientForm& ambient);

struct ConformalMetric {
  Eigen::MatrixXd g;      // rho^2 times the induced metric
  Eigen::MatrixXd E;      // columns: E_i = rho^-1 e_i
  Eigen::MatrixXd omega;  // rows: omega^i = rho theta^i
};
ConformalMetric conformal_metric(const ShapeData& shape);

// A, B, Phi from the closed formulas, cross-checked against the structure
// route. Throws InconsistencyError when the routes differ by more than
// consistency_factor times the active tolerance tier.
InvariantTensors blaschke_and_b(const ImmersionChart& chart, const std::vector<double>& u,
                                const Tolerances& tol = {});

struct Curvature {
  int m = 0;
  std::vector<double> R;  // same layout as InvariantTensors::R
  Eigen::MatrixXd Ricci;
  double kappa = 0.0;
  double Rm(int i, int j, int k, int l) const {
    return R[static_cast<std::size_t>(((i * m + j) * m + k) * m + l)];
  }
};

// Curvature of the conformal metric of a chart at u.
Curvature curvature_of_g(const ImmersionChart& chart, const std::vector<double>& u,
                         const Tolerances& tol = {});

// Curvature of a sampled metric field: Christoffel symbols and their
// derivatives from central differences of the field, expressed in the
// frame obtained by Gram-Schmidt of the coordinate basis.
using MetricField = std::function<Eigen::MatrixXd(const std::vector<double>&)>;
Curvature curvature_of_g(const MetricField& metric, const std::vector<double>& u,
                         const FdOptions& opts = {});

TensorDerivatives covariant_derivatives(const ImmersionChart& chart, const std::vector<double>& u,
                                        const Tolerances& tol = {});

// Gauss-type identity residual for given A, B and curvature; exposed so
// perturbation probes can reuse it.
double gauss_residual(const std::vector<double>& R, const Eigen::MatrixXd& A,
                      const Eigen::MatrixXd& B);

struct ResidualSummary {
  IdentityResiduals max;
  std::vector<ConformalData> points;
  std::size_t failed_points = 0;
  std::vector<std::string> errors;
};

// Per-identity maxima over a grid.
ResidualSummary identity_residuals(const ImmersionChart& chart, const Grid& grid,
                                   const Tolerances& tol = {});

// Residual tier for a chart's jet source.
double residual_tier(const ImmersionChart& chart, const Tolerances& tol);

}  // namespace confgeo
