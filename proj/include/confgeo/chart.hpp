#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "confgeo/fd_jet.hpp"
#include "confgeo/jet.hpp"
#include "confgeo/pseudo_linalg.hpp"
#include "confgeo/tolerances.hpp"

namespace confgeo {

enum class AmbientKind { DeSitter, AntiDeSitter, LorentzFlat };

std::string to_string(AmbientKind kind);
AmbientKind ambient_kind_from_string(const std::string& name);

// Lorentzian space form of dimension m+1 that carries a hypersurface of
// dimension m.
//   DeSitter(a):     <x,x>_1 =  a^2 in R^{m+2}_1
//   AntiDeSitter(a): <x,x>_2 = -a^2 in R^{m+2}_2
//   LorentzFlat:     R^{m+1}_1
struct AmbientForm {
  AmbientKind kind = AmbientKind::DeSitter;
  double a = 1.0;
  int m = 0;

  static AmbientForm de_sitter(int m, double a = 1.0) { return {AmbientKind::DeSitter, a, m}; }
  static AmbientForm anti_de_sitter(int m, double a = 1.0) {
    return {AmbientKind::AntiDeSitter, a, m};
  }
  static AmbientForm lorentz_flat(int m) { return {AmbientKind::LorentzFlat, 1.0, m}; }

  int coord_dim() const { return kind == AmbientKind::LorentzFlat ? m + 1 : m + 2; }
  int time_slots() const { return kind == AmbientKind::AntiDeSitter ? 2 : 1; }
  Signature signature() const { return {time_slots(), coord_dim()}; }
  // sectional curvature of the space form
  double curvature() const;
  // <x,x> minus the defining constant (0 for the flat model)
  double quadric_residual(std::span<const double> x) const;
  bool is_unit_de_sitter() const { return kind == AmbientKind::DeSitter && a == 1.0; }
};

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(std::span<const double> u, double margin = 0.0) const;
  std::vector<double> center() const;
};

enum class JetSource { Analytic, FiniteDifference };

// Parametrized hypersurface patch u -> x(u). The formula is kept twice,
// once over doubles and once over Taylor jets, so every chart can hand
// out exact derivative jets; FD charts build their jets from the double
// evaluation instead.
class ImmersionChart {
 public:
  using DoubleEval = std::function<std::vector<double>(const std::vector<double>&)>;
  using JetEval = std::function<std::vector<Jet>(const std::vector<Jet>&)>;

  ImmersionChart(std::string name, int m, AmbientForm ambient, Box domain, DoubleEval eval_d,
                 JetEval eval_j);

  template <class F>
  static ImmersionChart from_formula(std::string name, int m, AmbientForm ambient, Box domain,
                                     F formula) {
    return ImmersionChart(
        std::move(name), m, ambient, std::move(domain),
        [formula](const std::vector<double>& u) { return formula(u); },
        [formula](const std::vector<Jet>& u) { return formula(u); });
  }

  // Chart whose image is `map` applied to this chart's image.
  template <class F>
  ImmersionChart mapped(std::string name, AmbientForm target, F map) const {
    DoubleEval ed = eval_d_;
    JetEval ej = eval_j_;
    ImmersionChart out(
        std::move(name), m_, target, domain_,
        [ed, map](const std::vector<double>& u) { return map(ed(u)); },
        [ej, map](const std::vector<Jet>& u) { return map(ej(u)); });
    out.source_ = source_;
    out.fd_ = fd_;
    return out;
  }

  const std::string& name() const { return name_; }
  int dim() const { return m_; }
  const AmbientForm& ambient() const { return ambient_; }
  const Box& domain() const { return domain_; }
  JetSource jet_source() const { return source_; }
  const FdOptions& fd_options() const { return fd_; }

  std::vector<double> eval(const std::vector<double>& u) const { return eval_d_(u); }
  std::vector<Jet> eval_jet(const std::vector<Jet>& u) const { return eval_j_(u); }

  // Taylor jet of x at u up to `order`; DomainError when u (plus the FD
  // stencil reach) leaves the domain.
  std::vector<Jet> jet(const std::vector<double>& u, int order) const;
  // Distance from the domain boundary that jet() needs at this order.
  double margin(int order, std::span<const double> u) const;

  ImmersionChart with_fd(FdOptions opts = {}) const;
  ImmersionChart with_analytic() const;
  ImmersionChart with_domain(Box domain) const;
  // u = matrix * v + offset; the new domain is the largest cube around the
  // preimage of the old centre whose image stays inside the old box.
  ImmersionChart reparametrized(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& offset) const;

 private:
  std::string name_;
  int m_;
  AmbientForm ambient_;
  Box domain_;
  DoubleEval eval_d_;
  JetEval eval_j_;
  JetSource source_ = JetSource::Analytic;
  FdOptions fd_;
};

// First and second fundamental data at one point.
struct ShapeData {
  std::vector<double> u;
  std::vector<double> x;
  Eigen::MatrixXd induced_metric;      // <x_a, x_b> in coordinates
  std::vector<double> normal;          // time-like, <n,n> = -1
  Eigen::MatrixXd h_coord;             // h = <dn, dx> in coordinates
  Eigen::MatrixXd h;                   // in the orthonormal frame e_i
  double H = 0.0;                      // tr(h) / m
  double norm_h2 = 0.0;                // |h|^2
  double rho2 = 0.0;
  double rho = 0.0;
  Eigen::MatrixXd frame;               // columns: coordinate components of e_i
  Eigen::MatrixXd coframe;             // rows: theta^i in coordinates (frame^-1)
  std::vector<std::vector<double>> frame_ambient;  // e_i as ambient vectors
  Eigen::VectorXd principal_curvatures;             // eigenvalues of h, ascending
};

ShapeData shape_data(const ImmersionChart& chart, const std::vector<double>& u,
                     const Tolerances& tol = {});

// Same as shape_data but with the normal orientation reversed; used to
// check that h and H flip while rho does not.
ShapeData shape_data_flipped(const ImmersionChart& chart, const std::vector<double>& u,
                             const Tolerances& tol = {});

struct Grid {
  std::vector<int> counts;  // per axis, each >= 1
  Box box;

  static Grid uniform(const Box& box, int per_axis);
  std::size_t size() const;
  std::vector<double> point(std::size_t index) const;
  std::vector<std::vector<double>> points() const;
};

// Sampling grid for a chart: the domain shrunk by the FD stencil reach.
Grid default_grid(const ImmersionChart& chart, int per_axis, int jet_order = 5);

struct RegularityPoint {
  std::vector<double> u;
  double rho2 = 0.0;
  double min_metric_eigenvalue = 0.0;
  double ambient_residual = 0.0;
  bool regular = false;
  std::string error;
};

struct RegularityReport {
  std::vector<RegularityPoint> points;
  double min_rho2 = 0.0;
  double min_metric_eigenvalue = 0.0;
  double max_ambient_residual = 0.0;
  bool regular = false;
};

RegularityReport validate_regularity(const ImmersionChart& chart, const Grid& grid,
                                     const Tolerances& tol = {});

}  // namespace confgeo
