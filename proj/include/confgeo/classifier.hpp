#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "confgeo/chart.hpp"
#include "confgeo/invariants.hpp"
#include "confgeo/tolerances.hpp"

namespace confgeo {

enum class Branch {
  Isotropic,
  ParallelB,
  ParallelANonParallelBPositive,
  ParallelANonParallelBNegative,
  NotParallelA,
  Inconclusive
};

std::string to_string(Branch b);
// Descriptive anchor naming the case of the classification the branch
// corresponds to.
std::string branch_anchor(Branch b);

struct GateResult {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured quantity (max over the grid)
  double threshold = 0.0;  // what it was compared against
};

// max |Phi| over the samples against tol.classify
GateResult gate_phi(const std::vector<ConformalData>& pts, const Tolerances& tol = {});

enum class TensorKind { A, B };
// max over samples of |nabla T| / (1 + |T|) against tol.classify
GateResult gate_parallel(const std::vector<ConformalData>& pts, TensorKind which,
                         const Tolerances& tol = {});

struct EigenBlock {
  double lambda = 0.0;          // A eigenvalue of the block
  int multiplicity = 0;
  std::vector<double> mu;       // eigenvalues of B restricted to the block
  double spread = 0.0;          // spread of A eigenvalues inside the block
  bool b_zero = false;          // every |mu| <= tol
};

struct EigenStructure {
  int m = 0;
  int t = 0;
  std::vector<EigenBlock> blocks;  // ascending lambda
  double commutator = 0.0;         // max |[A,B]| over the samples
  double grid_variation = 0.0;     // max change of A eigenvalues over the samples
  double block_b_spread = 0.0;     // max within-block spread of mu (t >= 3)
  Eigen::MatrixXd basis;           // columns: joint eigenvectors at the first sample
  // per index in `basis` order
  std::vector<double> a_diag, b_diag;
  std::vector<int> block_of;
};

// Clusters the spectrum of A with tol.classify (relative) and reads off B
// in a joint eigenbasis. Throws InconsistencyError when the A spectrum is
// not constant over the samples.
EigenStructure eigen_structure(const std::vector<ConformalData>& pts, const Tolerances& tol = {});

// max over cross-block index pairs of |-B_i B_j + A_i + A_j|; pairs are
// taken across every pair of blocks when t >= 3 and across the two blocks
// when t = 2 with one B-block zero. Returns 0 when no pair applies.
double check_bibj(const EigenStructure& e, const Tolerances& tol = {});

// Sectional curvatures inside the block with zero B compared with -2
// lambda of the other block (t = 2). Returns the max deviation, or NaN
// when the zero block has dimension 1 or no zero block exists.
double zero_block_sectional_residual(const ConformalData& pt, const EigenStructure& e,
                                     const Tolerances& tol = {});

struct ClassificationReport {
  std::string chart;
  Branch branch = Branch::Inconclusive;
  std::string anchor;
  std::string failed_gate;  // set for Inconclusive
  std::vector<GateResult> gates;
  double phi_norm = 0.0;
  double gradA_norm = 0.0;
  double gradB_norm = 0.0;
  double bibj_residual = 0.0;
  double sectional_residual = 0.0;  // NaN when not applicable
  bool has_eigen = false;
  EigenStructure eigen;
  int zero_block = -1;  // index into eigen.blocks of the zero B-block
  Tolerances tol;
  Grid grid;
  std::vector<std::string> errors;
  std::vector<std::string> notes;
};

// regularity -> invariants -> A parallel -> Phi -> t -> B parallel ->
// zero block and sign. Computation errors end in Inconclusive and are
// recorded in `errors`.
ClassificationReport classify(const ImmersionChart& chart, const Grid& grid,
                              const Tolerances& tol = {});

// Same decision on precomputed samples (used by the synthetic tests).
ClassificationReport classify_samples(const std::string& chart_name,
                                      const std::vector<ConformalData>& pts,
                                      const Tolerances& tol = {});

}  // namespace confgeo
