#include "confgeo/chart.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "confgeo/errors.hpp"

namespace confgeo {

std::string to_string(AmbientKind kind) {
  switch (kind) {
    case AmbientKind::DeSitter: return "de_sitter";
    case AmbientKind::AntiDeSitter: return "anti_de_sitter";
    case AmbientKind::LorentzFlat: return "lorentz_flat";
  }
  return "unknown";
}

AmbientKind ambient_kind_from_string(const std::string& name) {
  if (name == "de_sitter") return AmbientKind::DeSitter;
  if (name == "anti_de_sitter") return AmbientKind::AntiDeSitter;
  if (name == "lorentz_flat") return AmbientKind::LorentzFlat;
  throw ValidationError("unknown ambient kind '" + name + "'");
}

double AmbientForm::curvature() const {
  switch (kind) {
    case AmbientKind::DeSitter: return 1.0 / (a * a);
    case AmbientKind::AntiDeSitter: return -1.0 / (a * a);
    case AmbientKind::LorentzFlat: return 0.0;
  }
  return 0.0;
}

double AmbientForm::quadric_residual(std::span<const double> x) const {
  if (kind == AmbientKind::LorentzFlat) return 0.0;
  const double q = inner<double>(x, x, time_slots());
  return kind == AmbientKind::DeSitter ? q - a * a : q + a * a;
}

bool Box::contains(std::span<const double> u, double margin) const {
  if (static_cast<int>(u.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (u[k] < lo[k] + margin || u[k] > hi[k] - margin) return false;
  }
  return true;
}

std::vector<double> Box::center() const {
  std::vector<double> c(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

ImmersionChart::ImmersionChart(std::string name, int m, AmbientForm ambient, Box domain,
                               DoubleEval eval_d, JetEval eval_j)
    : name_(std::move(name)),
      m_(m),
      ambient_(ambient),
      domain_(std::move(domain)),
      eval_d_(std::move(eval_d)),
      eval_j_(std::move(eval_j)) {
  if (m_ < 1) throw DimensionError("chart: dimension must be positive");
  if (ambient_.m != m_) throw DimensionError("chart: ambient dimension does not match m + 1");
  if (domain_.dim() != m_ || domain_.hi.size() != domain_.lo.size())
    throw DimensionError("chart: domain box must have m axes");
  for (int i = 0; i < m_; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (!(domain_.lo[k] <= domain_.hi[k])) throw ValidationError("chart: empty domain box");
  }
  if (!(ambient_.a > 0.0)) throw ValidationError("chart: ambient radius must be positive");
}

double ImmersionChart::margin(int order, std::span<const double> u) const {
  return source_ == JetSource::FiniteDifference ? fd_reach(order, fd_, u) : 0.0;
}

std::vector<Jet> ImmersionChart::jet(const std::vector<double>& u, int order) const {
  if (static_cast<int>(u.size()) != m_) throw DimensionError("jet: point has wrong dimension");
  if (order < 0) throw ValidationError("jet: negative order");
  const double reach = margin(order, u);
  if (!domain_.contains(u, reach)) {
    std::ostringstream msg;
    msg << "jet: point (";
    for (std::size_t i = 0; i < u.size(); ++i) msg << (i ? ", " : "") << u[i];
    msg << ") is outside the domain of '" << name_ << "'";
    if (reach > 0.0) msg << " with stencil margin " << reach;
    throw DomainError(msg.str());
  }
  if (source_ == JetSource::FiniteDifference) return fd_jet(eval_d_, u, order, fd_);
  const JetLayout& layout = JetLayout::get(m_, order);
  return eval_j_(Jet::variables(layout, u));
}

ImmersionChart ImmersionChart::with_fd(FdOptions opts) const {
  if (opts.order < 2 || opts.order % 2 != 0) throw ValidationError("fd: order must be even and >= 2");
  if (opts.step < 0.0) throw ValidationError("fd: step must be non-negative");
  ImmersionChart out = *this;
  out.source_ = JetSource::FiniteDifference;
  out.fd_ = opts;
  return out;
}

ImmersionChart ImmersionChart::with_analytic() const {
  ImmersionChart out = *this;
  out.source_ = JetSource::Analytic;
  return out;
}

ImmersionChart ImmersionChart::with_domain(Box domain) const {
  ImmersionChart out = *this;
  if (domain.dim() != m_) throw DimensionError("chart: domain box must have m axes");
  out.domain_ = std::move(domain);
  return out;
}

ImmersionChart ImmersionChart::reparametrized(const Eigen::MatrixXd& matrix,
                                              const Eigen::VectorXd& offset) const {
  if (matrix.rows() != m_ || matrix.cols() != m_ || offset.size() != m_)
    throw DimensionError("reparametrize: matrix must be m x m");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(matrix);
  if (!lu.isInvertible()) throw ValidationError("reparametrize: matrix is singular");

  // largest cube around the preimage of the centre whose image stays in the box
  const std::vector<double> c = domain_.center();
  Eigen::VectorXd cu(m_);
  for (int i = 0; i < m_; ++i) cu(i) = c[static_cast<std::size_t>(i)];
  const Eigen::VectorXd v0 = lu.solve(cu - offset);
  double r = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m_; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double half = 0.5 * (domain_.hi[k] - domain_.lo[k]);
    const double row = matrix.row(i).cwiseAbs().sum();
    if (row > 0.0) r = std::min(r, half / row);
  }
  Box box;
  for (int i = 0; i < m_; ++i) {
    box.lo.push_back(v0(i) - r);
    box.hi.push_back(v0(i) + r);
  }

  const Eigen::MatrixXd M = matrix;
  const Eigen::VectorXd b = offset;
  const int m = m_;
  auto affine = [M, b, m](const auto& v) {
    using T = typename std::decay_t<decltype(v)>::value_type;
    std::vector<T> u;
    u.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      T acc = T(b(i));
      for (int j = 0; j < m; ++j)
        if (M(i, j) != 0.0) acc = acc + M(i, j) * v[static_cast<std::size_t>(j)];
      u.push_back(acc);
    }
    return u;
  };
  DoubleEval ed = eval_d_;
  JetEval ej = eval_j_;
  ImmersionChart out(
      name_ + "~affine", m_, ambient_, box,
      [ed, affine](const std::vector<double>& v) { return ed(affine(v)); },
      [ej, affine](const std::vector<Jet>& v) { return ej(affine(v)); });
  out.source_ = source_;
  out.fd_ = fd_;
  return out;
}

Grid Grid::uniform(const Box& box, int per_axis) {
  if (per_axis < 1) throw ValidationError("grid: need at least one point per axis");
  Grid g;
  g.box = box;
  g.counts.assign(static_cast<std::size_t>(box.dim()), per_axis);
  return g;
}

std::size_t Grid::size() const {
  std::size_t n = 1;
  for (int c : counts) n *= static_cast<std::size_t>(c);
  return n;
}

std::vector<double> Grid::point(std::size_t index) const {
  // last axis varies fastest
  std::vector<double> p(counts.size());
  for (std::size_t k = counts.size(); k-- > 0;) {
    const auto c = static_cast<std::size_t>(counts[k]);
    const std::size_t i = index % c;
    index /= c;
    p[k] = c == 1 ? 0.5 * (box.lo[k] + box.hi[k])
                  : box.lo[k] + (box.hi[k] - box.lo[k]) * static_cast<double>(i) /
                                    static_cast<double>(c - 1);
  }
  return p;
}

std::vector<std::vector<double>> Grid::points() const {
  std::vector<std::vector<double>> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(point(i));
  return out;
}

Grid default_grid(const ImmersionChart& chart, int per_axis, int jet_order) {
  Box box = chart.domain();
  if (chart.jet_source() == JetSource::FiniteDifference) {
    std::vector<double> far(box.lo.size());
    for (std::size_t i = 0; i < far.size(); ++i)
      far[i] = std::max(std::abs(box.lo[i]), std::abs(box.hi[i]));
    // a little more than the reach so boundary points survive rounding
    const double reach = 1.0001 * fd_reach(jet_order, chart.fd_options(), far);
    for (std::size_t i = 0; i < far.size(); ++i) {
      if (box.hi[i] - box.lo[i] <= 2.0 * reach)
        throw DomainError("grid: domain of '" + chart.name() + "' is thinner than the FD stencil");
      box.lo[i] += reach;
      box.hi[i] -= reach;
    }
  }
  return Grid::uniform(box, per_axis);
}

}  // namespace confgeo
