#pragma once

// Jet-level building blocks shared by the shape and invariant code. Every
// quantity here is a Taylor jet around the evaluation point, so partial
// derivatives of derived fields come for free.

#include <vector>

#include "confgeo/chart.hpp"
#include "confgeo/jet.hpp"

namespace confgeo::detail {

using JVec = std::vector<Jet>;
using JMat = std::vector<JVec>;

JVec partial(const JVec& v, int var);
Jet pinner(const JVec& a, const JVec& b, int time_slots);
JVec scaled(const JVec& v, const Jet& c);
JVec added(const JVec& a, const JVec& b, double cb = 1.0);

JMat jmat(int rows, int cols);
JMat mat_mul(const JMat& a, const JMat& b);
JMat mat_inverse(JMat a);
Jet determinant(JMat a);
Jet trace(const JMat& a);

// Vector e with sum_k e_k r_k = 0 for every row r (n-1 rows in R^n),
// the generalized Euclidean cross product.
JVec cross(const std::vector<JVec>& rows);

// Values at the base point.
std::vector<double> values(const JVec& v);
Eigen::MatrixXd values(const JMat& a);

struct ShapeJets {
  int m = 0;
  int s = 0;  // time slots of the ambient coordinates
  JVec x;
  std::vector<JVec> xa;                // x_a
  std::vector<std::vector<JVec>> xab;  // x_ab
  JVec n;                              // <n,n> = -1, orthogonal to x_a (and x)
  JMat G, Ginv;                        // induced metric and inverse
  JMat h;                              // -<n, x_ab>
  JMat S;                              // G^{-1} h, the shape operator
  Jet H, norm_h2, rho2;
};

// Builds the first and second fundamental data from a jet of x. The normal
// obeys the orientation rule (first non-negligible slot negative), reversed
// when `flip` is set. Throws RegularityError when the tangent vectors do
// not span a space-like m-plane.
ShapeJets shape_jets(const AmbientForm& ambient, const JVec& x, bool flip = false);

}  // namespace confgeo::detail
