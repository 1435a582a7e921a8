#include "confgeo/pseudo_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "confgeo/errors.hpp"

namespace confgeo {

Signature::Signature(int time_slots, int dim) : s(time_slots), n(dim) {
  if (time_slots < 0 || time_slots > dim)
    throw DimensionError("signature: time slots must lie in [0, n]");
}

PseudoVector::PseudoVector(std::vector<double> coords, Signature sig)
    : coords_(std::move(coords)), sig_(sig) {
  if (static_cast<int>(coords_.size()) != sig_.n)
    throw DimensionError("pseudo vector: coordinate count does not match signature");
}

double PseudoVector::euclidean_norm2() const {
  double acc = 0.0;
  for (double c : coords_) acc += c * c;
  return acc;
}

PseudoVector PseudoVector::scaled(double c) const {
  std::vector<double> out = coords_;
  for (double& x : out) x *= c;
  return {std::move(out), sig_};
}

double inner(const PseudoVector& u, const PseudoVector& v) {
  if (!(u.sig() == v.sig())) throw DimensionError("inner: signature mismatch");
  return inner<double>(u.coords(), v.coords(), u.sig().s);
}

bool is_lightlike(const PseudoVector& v, double tol) {
  const double e2 = v.euclidean_norm2();
  if (e2 == 0.0) return false;
  return std::abs(inner(v, v)) <= tol * e2;
}

std::vector<PseudoVector> gram_schmidt_spacelike(const std::vector<PseudoVector>& vectors,
                                                 double tol) {
  std::vector<PseudoVector> out;
  out.reserve(vectors.size());
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    std::vector<double> w = vectors[k].coords();
    const Signature sig = vectors[k].sig();
    for (const auto& e : out) {
      const double c = inner<double>(e.coords(), w, sig.s);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * e[i];
    }
    PseudoVector wv(w, sig);
    const double pivot = inner(wv, wv);
    if (!(pivot > tol * std::max(1.0, vectors[k].euclidean_norm2()))) {
      std::ostringstream msg;
      msg << "gram_schmidt_spacelike: pivot " << k << " is not space-like (<w,w> = " << pivot
          << ")";
      throw RegularityError(msg.str(), pivot);
    }
    out.push_back(wv.scaled(1.0 / std::sqrt(pivot)));
  }
  return out;
}

SymMatrix::SymMatrix(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim * (dim + 1) / 2)) {}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DimensionError("SymMatrix: matrix is not square");
  SymMatrix out(static_cast<int>(m.rows()));
  for (int i = 0; i < out.dim_; ++i)
    for (int j = 0; j <= i; ++j) out.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  return out;
}

int SymMatrix::index(int i, int j) const {
  if (i < j) std::swap(i, j);
  return i * (i + 1) / 2 + j;
}

double SymMatrix::operator()(int i, int j) const { return data_[index(i, j)]; }

void SymMatrix::set(int i, int j, double v) { data_[index(i, j)] = v; }

Eigen::MatrixXd SymMatrix::dense() const {
  Eigen::MatrixXd m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

SymEigen sym_eigen(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.dense());
  return {solver.eigenvalues(), solver.eigenvectors()};
}

std::vector<Cluster> cluster_eigenvalues(std::span<const double> sorted_values, double rel_tol) {
  std::vector<Cluster> out;
  if (sorted_values.empty()) return out;
  double scale = 1.0;
  for (double v : sorted_values) scale = std::max(scale, std::abs(v));
  const double gap = rel_tol * scale;

  double sum = sorted_values[0];
  int count = 1;
  for (std::size_t i = 1; i < sorted_values.size(); ++i) {
    if (sorted_values[i] - sorted_values[i - 1] <= gap) {
      sum += sorted_values[i];
      ++count;
    } else {
      out.push_back({sum / count, count});
      sum = sorted_values[i];
      count = 1;
    }
  }
  out.push_back({sum / count, count});
  return out;
}

}  // namespace confgeo
