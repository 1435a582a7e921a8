#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "confgeo/chart.hpp"
#include "confgeo/errors.hpp"
#include "confgeo/jet.hpp"
#include "confgeo/tolerances.hpp"

namespace confgeo {

// Conformal maps between the Lorentzian space forms, the conformal space
// Q^{m+1}_1 (projectivized light cone of R^{m+3}_2, two time slots first)
// and the two coordinate maps back to the unit de Sitter space.
//
// Representatives in this slot order:
//   sigma0(u)  = [(1+q, 2u_0, 2u', 1-q)],  u in R^{m+1}_1, q = <u,u>_1
//   sigma1(x)  = [(1, x)],                 x in S^{m+1}_1
//   sigma-1(y) = [(y_0, y_1, y', 1)],      y in H^{m+1}_1 (two time slots)
//   psi1([w])  = (w_1, w_2, ...) / w_0
//   psi2([w])  = (w_0, w_2, ...) / w_1
// Excluded hyperplanes: pi = {w_0 + w_last = 0}, pi_plus = {w_0 = 0},
// pi_minus = {w_last = 0}.
enum class MapKind {
  Sigma0,
  Sigma1,
  SigmaMinus1,
  Psi1,
  Psi2,
  SigmaUp1,  // psi1 o sigma0
  SigmaUp2,  // psi2 o sigma0
  TauUp1,    // psi1 o sigma-1
  TauUp2,    // psi2 o sigma-1
  TSwap
};

std::string map_name(MapKind which);
MapKind map_from_name(const std::string& name);  // ValidationError on unknown names
const std::vector<MapKind>& all_maps();

enum class Hyperplane { Pi, PiPlus, PiMinus };
std::string to_string(Hyperplane h);

struct ProjectivePoint {
  std::vector<double> w;

  explicit ProjectivePoint(std::vector<double> rep);
  int ambient_dim() const { return static_cast<int>(w.size()); }
  bool on_quadric(double tol = 1e-12) const;
  // proportional representatives: |cos angle| > 1 - tol
  bool equals(const ProjectivePoint& o, double tol = 1e-12) const;
};

bool in_hyperplane(const ProjectivePoint& p, Hyperplane h, double tol = 1e-12);

std::vector<double> t_swap(std::vector<double> w);

namespace atlas_detail {

[[noreturn]] void denominator_error(const std::string& map, const std::string& denominator,
                                    double value);

template <class T>
void check_denominator(const T& d, double tol, const char* map, const char* name) {
  if (!(std::abs(value_of(d)) > tol)) denominator_error(map, name, value_of(d));
}

}  // namespace atlas_detail

// Formula form of every map, shared by plain evaluation and chart lifting.
// Input/output coordinates follow the conventions above; embeddings return
// the representative listed there.
template <class T>
std::vector<T> apply_map(MapKind which, const std::vector<T>& p, double denominator_tol = 1e-12) {
  using atlas_detail::check_denominator;
  const std::size_t n = p.size();
  std::vector<T> out;
  auto q_of = [&]() { return inner<T>(std::span<const T>(p), std::span<const T>(p), 1); };
  switch (which) {
    case MapKind::Sigma0: {
      const T q = q_of();
      out.push_back(T(1.0) + q);
      for (const T& c : p) out.push_back(c * 2.0);
      out.push_back(T(1.0) - q);
      return out;
    }
    case MapKind::Sigma1:
      out.push_back(T(1.0));
      out.insert(out.end(), p.begin(), p.end());
      return out;
    case MapKind::SigmaMinus1:
      out = p;
      out.push_back(T(1.0));
      return out;
    case MapKind::Psi1: {
      check_denominator(p[0], denominator_tol, "psi1", "w_0 (pi_plus)");
      const T r = inv(T(p[0]));
      for (std::size_t i = 1; i < n; ++i) out.push_back(p[i] * r);
      return out;
    }
    case MapKind::Psi2: {
      check_denominator(p[1], denominator_tol, "psi2", "w_1");
      const T r = inv(T(p[1]));
      out.push_back(p[0] * r);
      for (std::size_t i = 2; i < n; ++i) out.push_back(p[i] * r);
      return out;
    }
    case MapKind::SigmaUp1: {
      const T q = q_of();
      const T den = T(1.0) + q;
      check_denominator(den, denominator_tol, "sigma^1", "1+<u,u>");
      const T r = inv(den);
      for (const T& c : p) out.push_back(c * 2.0 * r);
      out.push_back((T(1.0) - q) * r);
      return out;
    }
    case MapKind::SigmaUp2: {
      check_denominator(p[0], denominator_tol, "sigma^2", "u_0");
      const T q = q_of();
      const T r = inv(p[0] * 2.0);
      out.push_back((T(1.0) + q) * r);
      for (std::size_t i = 1; i < n; ++i) out.push_back(p[i] * 2.0 * r);
      out.push_back((T(1.0) - q) * r);
      return out;
    }
    case MapKind::TauUp1: {
      check_denominator(p[0], denominator_tol, "tau^1", "y_0");
      const T r = inv(T(p[0]));
      for (std::size_t i = 1; i < n; ++i) out.push_back(p[i] * r);
      out.push_back(r);
      return out;
    }
    case MapKind::TauUp2: {
      check_denominator(p[1], denominator_tol, "tau^2", "y_1");
      const T r = inv(T(p[1]));
      out.push_back(p[0] * r);
      for (std::size_t i = 2; i < n; ++i) out.push_back(p[i] * r);
      out.push_back(r);
      return out;
    }
    case MapKind::TSwap:
      out = p;
      if (n >= 2) std::swap(out[0], out[1]);
      return out;
  }
  return out;
}

// sigma0, sigma1 or sigma-1 of a point of its space form. Throws
// ValidationError when the point is off the form.
ProjectivePoint embed(const std::vector<double>& point, MapKind which, const Tolerances& tol = {});

// psi1 or psi2 (alpha = 1, 2). Throws ChartDomainError naming the excluded
// hyperplane when the dividing coordinate vanishes.
std::vector<double> psi(int alpha, const ProjectivePoint& p, const Tolerances& tol = {});

// sigma^1, sigma^2, tau^1 or tau^2 from their closed forms.
std::vector<double> compose_maps(MapKind which, const std::vector<double>& point,
                                 const Tolerances& tol = {});

// Any map by name on a plain point (embeddings validate the source form).
std::vector<double> apply_named_map(MapKind which, const std::vector<double>& point,
                                    const Tolerances& tol = {});

// Moves a chart into the unit de Sitter space:
//   Lorentz-flat charts with sigma^1 / sigma^2,
//   anti-de Sitter charts with tau^1 / tau^2 (after rescaling to a = 1),
//   unit de Sitter charts with psi1 (identity) / psi2 (psi2 o sigma1).
// Samples the domain and throws DomainError reporting the offending u when
// the image leaves the map's domain.
ImmersionChart lift_chart(const ImmersionChart& chart, MapKind which, const Tolerances& tol = {});

struct ConformalityWitness {
  double factor = 0.0;    // pulled-back metric / source metric
  double residual = 0.0;  // max |P/factor - S| over an orthonormal source basis
};

// Pull-back of the target metric (the light-cone form for maps into Q)
// against the source metric at a point of the map's source space form.
ConformalityWitness conformality_witness(MapKind which, const std::vector<double>& point);

enum class SourceForm { LorentzFlat, DeSitter, AntiDeSitter, Conformal };
SourceForm map_source(MapKind which);

}  // namespace confgeo
