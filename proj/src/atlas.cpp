#include "confgeo/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace confgeo {

namespace {

const std::vector<std::pair<MapKind, std::string>>& map_table() {
  static const std::vector<std::pair<MapKind, std::string>> t = {
      {MapKind::Sigma0, "sigma0"},     {MapKind::Sigma1, "sigma1"},
      {MapKind::SigmaMinus1, "sigma-1"}, {MapKind::Psi1, "psi1"},
      {MapKind::Psi2, "psi2"},         {MapKind::SigmaUp1, "sigma^1"},
      {MapKind::SigmaUp2, "sigma^2"},  {MapKind::TauUp1, "tau^1"},
      {MapKind::TauUp2, "tau^2"},      {MapKind::TSwap, "tswap"}};
  return t;
}

std::string format_point(const std::vector<double>& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

double max_abs(const std::vector<double>& p) {
  double s = 0.0;
  for (double v : p) s = std::max(s, std::abs(v));
  return s;
}

void require_on_form(const std::vector<double>& p, int time_slots, double target, double tol,
                     const char* what) {
  const double q = inner<double>(p, p, time_slots);
  const double scale = std::max(1.0, max_abs(p) * max_abs(p));
  if (std::abs(q - target) > tol * scale) {
    std::ostringstream msg;
    msg << what << ": point " << format_point(p) << " is off its space form (<p,p> = " << q
        << ", expected " << target << ")";
    throw ValidationError(msg.str());
  }
}

}  // namespace

namespace atlas_detail {

void denominator_error(const std::string& map, const std::string& denominator, double value) {
  std::ostringstream msg;
  msg << map << ": denominator " << denominator << " vanishes (" << value << ")";
  // "w_0 (pi_plus)" names the excluded hyperplane in parentheses
  const auto open = denominator.find('('), close = denominator.rfind(')');
  std::string excluded = denominator;
  if (open != std::string::npos && close != std::string::npos && close > open)
    excluded = denominator.substr(open + 1, close - open - 1);
  throw ChartDomainError(msg.str(), excluded);
}

}  // namespace atlas_detail

std::string map_name(MapKind which) {
  for (const auto& [k, n] : map_table())
    if (k == which) return n;
  return "unknown";
}

MapKind map_from_name(const std::string& name) {
  for (const auto& [k, n] : map_table())
    if (n == name) return k;
  throw ValidationError("unknown map '" + name + "'");
}

const std::vector<MapKind>& all_maps() {
  static const std::vector<MapKind> v = [] {
    std::vector<MapKind> out;
    for (const auto& e : map_table()) out.push_back(e.first);
    return out;
  }();
  return v;
}

std::string to_string(Hyperplane h) {
  switch (h) {
    case Hyperplane::Pi: return "pi";
    case Hyperplane::PiPlus: return "pi_plus";
    case Hyperplane::PiMinus: return "pi_minus";
  }
  return "unknown";
}

SourceForm map_source(MapKind which) {
  switch (which) {
    case MapKind::Sigma0:
    case MapKind::SigmaUp1:
    case MapKind::SigmaUp2: return SourceForm::LorentzFlat;
    case MapKind::Sigma1: return SourceForm::DeSitter;
    case MapKind::SigmaMinus1:
    case MapKind::TauUp1:
    case MapKind::TauUp2: return SourceForm::AntiDeSitter;
    case MapKind::Psi1:
    case MapKind::Psi2:
    case MapKind::TSwap: return SourceForm::Conformal;
  }
  return SourceForm::Conformal;
}

ProjectivePoint::ProjectivePoint(std::vector<double> rep) : w(std::move(rep)) {
  if (w.size() < 3) throw DimensionError("projective point: need at least 3 coordinates");
  if (max_abs(w) == 0.0) throw ValidationError("projective point: zero representative");
}

bool ProjectivePoint::on_quadric(double tol) const {
  return is_lightlike(PseudoVector(w, Signature(2, ambient_dim())), tol);
}

bool ProjectivePoint::equals(const ProjectivePoint& o, double tol) const {
  if (o.w.size() != w.size()) return false;
  double dot = 0.0, a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    dot += w[i] * o.w[i];
    a += w[i] * w[i];
    b += o.w[i] * o.w[i];
  }
  return std::abs(dot) / std::sqrt(a * b) > 1.0 - tol;
}

bool in_hyperplane(const ProjectivePoint& p, Hyperplane h, double tol) {
  const double scale = tol * max_abs(p.w);
  switch (h) {
    case Hyperplane::Pi: return std::abs(p.w.front() + p.w.back()) <= scale;
    case Hyperplane::PiPlus: return std::abs(p.w.front()) <= scale;
    case Hyperplane::PiMinus: return std::abs(p.w.back()) <= scale;
  }
  return false;
}

std::vector<double> t_swap(std::vector<double> w) {
  if (w.size() < 2) throw DimensionError("tswap: need at least two coordinates");
  std::swap(w[0], w[1]);
  return w;
}

ProjectivePoint embed(const std::vector<double>& point, MapKind which, const Tolerances& tol) {
  switch (which) {
    case MapKind::Sigma0:
      if (point.size() < 2) throw DimensionError("sigma0: point needs at least 2 coordinates");
      break;
    case MapKind::Sigma1:
      require_on_form(point, 1, 1.0, tol.on_space_form, "sigma1");
      break;
    case MapKind::SigmaMinus1:
      require_on_form(point, 2, -1.0, tol.on_space_form, "sigma-1");
      break;
    default: throw ValidationError("embed: '" + map_name(which) + "' is not an embedding");
  }
  return ProjectivePoint(apply_map<double>(which, point));
}

std::vector<double> psi(int alpha, const ProjectivePoint& p, const Tolerances& tol) {
  if (alpha != 1 && alpha != 2) throw ValidationError("psi: alpha must be 1 or 2");
  if (!p.on_quadric(std::max(tol.lightlike, tol.on_space_form)))
    throw ValidationError("psi: representative " + format_point(p.w) + " is not light-like");
  const MapKind k = alpha == 1 ? MapKind::Psi1 : MapKind::Psi2;
  const double den = tol.denominator * max_abs(p.w);
  return apply_map<double>(k, p.w, den);
}

std::vector<double> compose_maps(MapKind which, const std::vector<double>& point,
                                 const Tolerances& tol) {
  switch (which) {
    case MapKind::SigmaUp1:
    case MapKind::SigmaUp2:
      if (point.size() < 2) throw DimensionError("compose: point needs at least 2 coordinates");
      break;
    case MapKind::TauUp1:
    case MapKind::TauUp2:
      require_on_form(point, 2, -1.0, tol.on_space_form, map_name(which).c_str());
      break;
    default:
      throw ValidationError("compose: '" + map_name(which) + "' is not a composed map");
  }
  return apply_map<double>(which, point, tol.denominator);
}

std::vector<double> apply_named_map(MapKind which, const std::vector<double>& point,
                                    const Tolerances& tol) {
  switch (which) {
    case MapKind::Sigma0:
    case MapKind::Sigma1:
    case MapKind::SigmaMinus1: return embed(point, which, tol).w;
    case MapKind::Psi1: return psi(1, ProjectivePoint(point), tol);
    case MapKind::Psi2: return psi(2, ProjectivePoint(point), tol);
    case MapKind::TSwap: return t_swap(point);
    default: return compose_maps(which, point, tol);
  }
}

ImmersionChart lift_chart(const ImmersionChart& chart, MapKind which, const Tolerances& tol) {
  const AmbientForm& amb = chart.ambient();
  const double den = tol.denominator;
  std::function<std::vector<double>(const std::vector<double>&)> fd;
  std::function<std::vector<Jet>(const std::vector<Jet>&)> fj;
  auto bind = [&](auto map) {
    fd = [map](const std::vector<double>& x) { return map(x); };
    fj = [map](const std::vector<Jet>& x) { return map(x); };
  };
  const bool flat_map = which == MapKind::SigmaUp1 || which == MapKind::SigmaUp2;
  const bool ads_map = which == MapKind::TauUp1 || which == MapKind::TauUp2;
  if (amb.kind == AmbientKind::LorentzFlat && flat_map) {
    bind([which, den](const auto& x) { return apply_map(which, x, den); });
  } else if (amb.kind == AmbientKind::AntiDeSitter && ads_map) {
    const double a = amb.a;
    bind([which, den, a](const auto& x) {
      auto y = x;
      for (auto& c : y) c = c * (1.0 / a);
      return apply_map(which, y, den);
    });
  } else if (amb.is_unit_de_sitter() && which == MapKind::Psi1) {
    bind([](const auto& x) { return x; });
  } else if (amb.is_unit_de_sitter() && which == MapKind::Psi2) {
    bind([den](const auto& x) {
      return apply_map(MapKind::Psi2, apply_map(MapKind::Sigma1, x), den);
    });
  } else {
    throw ValidationError("lift: map '" + map_name(which) + "' does not apply to a chart in " +
                          to_string(amb.kind));
  }

  auto base_d = [chart](const std::vector<double>& u) { return chart.eval(u); };
  auto base_j = [chart](const std::vector<Jet>& u) { return chart.eval_jet(u); };
  auto rethrow = [](const ChartDomainError& e, const std::string& where) -> void {
    throw ChartDomainError(std::string(e.what()) + " at u = " + where, e.excluded());
  };
  ImmersionChart out(
      chart.name() + "@" + map_name(which), chart.dim(), AmbientForm::de_sitter(chart.dim()),
      chart.domain(),
      [fd, base_d, rethrow](const std::vector<double>& u) {
        try {
          return fd(base_d(u));
        } catch (const ChartDomainError& e) {
          rethrow(e, format_point(u));
          throw;
        }
      },
      [fj, base_j, rethrow](const std::vector<Jet>& u) {
        try {
          return fj(base_j(u));
        } catch (const ChartDomainError& e) {
          std::vector<double> uv;
          for (const Jet& c : u) uv.push_back(c.value());
          rethrow(e, format_point(uv));
          throw;
        }
      });
  if (chart.jet_source() == JetSource::FiniteDifference) out = out.with_fd(chart.fd_options());

  // the image of the sampled domain must stay inside the map's domain
  const Grid grid = Grid::uniform(chart.domain(), 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      out.eval(grid.point(i));
    } catch (const ChartDomainError& e) {
      throw DomainError(std::string("lift: ") + e.what());
    }
  }
  return out;
}

ConformalityWitness conformality_witness(MapKind which, const std::vector<double>& point) {
  const SourceForm src = map_source(which);
  int s_src = 1;
  bool curved = true;
  switch (src) {
    case SourceForm::LorentzFlat: curved = false; break;
    case SourceForm::AntiDeSitter: s_src = 2; break;
    default: break;
  }
  const bool into_q = which == MapKind::Sigma0 || which == MapKind::Sigma1 ||
                      which == MapKind::SigmaMinus1 || which == MapKind::TSwap;
  const int s_dst = into_q ? 2 : 1;
  auto F = [which](const std::vector<Jet>& p) {
    switch (which) {
      case MapKind::Psi1:
      case MapKind::Psi2:
      case MapKind::TSwap: return apply_map(which, apply_map(MapKind::Sigma1, p));
      default: return apply_map(which, p);
    }
  };

  // orthonormal basis of the tangent space at the point
  const std::size_t n = point.size();
  const std::size_t dim = curved ? n - 1 : n;
  const double pp = inner<double>(point, point, s_src);
  std::vector<std::vector<double>> basis;
  std::vector<double> signs;
  for (std::size_t k = 0; k < n && basis.size() < dim; ++k) {
    std::vector<double> v(n, 0.0);
    v[k] = 1.0;
    if (curved) {
      const double c = inner<double>(v, point, s_src) / pp;
      for (std::size_t i = 0; i < n; ++i) v[i] -= c * point[i];
    }
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const double c = signs[j] * inner<double>(v, basis[j], s_src);
      for (std::size_t i = 0; i < n; ++i) v[i] -= c * basis[j][i];
    }
    const double vv = inner<double>(v, v, s_src);
    if (std::abs(vv) < 1e-6) continue;
    for (double& c : v) c /= std::sqrt(std::abs(vv));
    basis.push_back(v);
    signs.push_back(vv > 0.0 ? 1.0 : -1.0);
  }
  if (basis.size() != dim) throw ComputationError("conformality witness: no tangent basis");

  const JetLayout& layout = JetLayout::get(1, 1);
  const Jet t = Jet::variable(layout, 0, 0.0);
  std::vector<std::vector<double>> images;
  for (const auto& v : basis) {
    std::vector<Jet> curve;
    for (std::size_t i = 0; i < n; ++i) curve.push_back(point[i] + v[i] * t);
    std::vector<double> d;
    for (const Jet& c : F(curve)) d.push_back(c.derivative(0).value());
    images.push_back(std::move(d));
  }
  ConformalityWitness w;
  for (std::size_t i = 0; i < dim; ++i)
    w.factor += signs[i] * inner<double>(images[i], images[i], s_dst);
  w.factor /= static_cast<double>(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const double P = inner<double>(images[i], images[j], s_dst) / w.factor;
      const double S = i == j ? signs[i] : 0.0;
      w.residual = std::max(w.residual, std::abs(P - S));
    }
  return w;
}

}  // namespace confgeo
