#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace confgeo {

// Quadratic form diag(-1 x s, +1 x (n - s)); the time-like slots come first.
struct Signature {
  int s = 0;
  int n = 0;

  Signature() = default;
  Signature(int time_slots, int dim);

  bool is_time(int slot) const { return slot < s; }
  double sign(int slot) const { return slot < s ? -1.0 : 1.0; }
  friend bool operator==(const Signature&, const Signature&) = default;
};

class PseudoVector {
 public:
  PseudoVector() = default;
  PseudoVector(std::vector<double> coords, Signature sig);

  const std::vector<double>& coords() const { return coords_; }
  const Signature& sig() const { return sig_; }
  std::size_t size() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }

  double euclidean_norm2() const;
  PseudoVector scaled(double c) const;

 private:
  std::vector<double> coords_;
  Signature sig_;
};

// Generic form used everywhere a raw coordinate array must be paired
// with a signature.
template <class T>
T inner(std::span<const T> u, std::span<const T> v, int time_slots) {
  T acc = T(0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (static_cast<int>(i) < time_slots)
      acc = acc - u[i] * v[i];
    else
      acc = acc + u[i] * v[i];
  }
  return acc;
}

double inner(const PseudoVector& u, const PseudoVector& v);
bool is_lightlike(const PseudoVector& v, double tol);

// Orthonormalizes `vectors` in order. Throws RegularityError carrying the
// offending pivot when a pivot is not strictly space-like.
std::vector<PseudoVector> gram_schmidt_spacelike(const std::vector<PseudoVector>& vectors,
                                                 double tol = 1e-12);

// Symmetric matrix stored as its lower triangle; entry(i,j) == entry(j,i)
// by construction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int dim);
  static SymMatrix from_dense(const Eigen::MatrixXd& m);  // symmetrizes

  int dim() const { return dim_; }
  double operator()(int i, int j) const;
  void set(int i, int j, double v);
  Eigen::MatrixXd dense() const;

 private:
  int index(int i, int j) const;
  int dim_ = 0;
  std::vector<double> data_;
};

struct SymEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, orthonormal
};

SymEigen sym_eigen(const SymMatrix& m);

struct Cluster {
  double value = 0.0;
  int multiplicity = 0;
  friend bool operator==(const Cluster&, const Cluster&) = default;
};

// Greedy gap clustering of sorted values: neighbours closer than
// rel_tol * max(1, max|v|) share a cluster. Returns cluster means.
std::vector<Cluster> cluster_eigenvalues(std::span<const double> sorted_values, double rel_tol);

}  // namespace confgeo
