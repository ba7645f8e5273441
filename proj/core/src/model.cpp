#include "wkot/model.hpp"

#include <cmath>
#include <numbers>

namespace wkot {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

double LagrangianModel::V(double x, double y) const {
  switch (kind) {
    case PotentialKind::zero:
      return 0.0;
    case PotentialKind::cosine:
    case PotentialKind::shifted_cosine: {
      double v = amplitude * std::cos(two_pi * x);
      if (dim == 2) v += amplitude * std::cos(two_pi * y);
      return v + (kind == PotentialKind::shifted_cosine ? shift : 0.0);
    }
  }
  return 0.0;
}

double LagrangianModel::dVdx(double x, double) const {
  if (kind == PotentialKind::zero) return 0.0;
  return -amplitude * two_pi * std::sin(two_pi * x);
}

double LagrangianModel::dVdy(double, double y) const {
  if (kind == PotentialKind::zero || dim != 2) return 0.0;
  return -amplitude * two_pi * std::sin(two_pi * y);
}

double LagrangianModel::max_V() const {
  if (kind == PotentialKind::zero) return 0.0;
  double m = std::abs(amplitude) * dim;
  return m + (kind == PotentialKind::shifted_cosine ? shift : 0.0);
}

double LagrangianModel::min_V() const {
  if (kind == PotentialKind::zero) return 0.0;
  double m = -std::abs(amplitude) * dim;
  return m + (kind == PotentialKind::shifted_cosine ? shift : 0.0);
}

double LagrangianModel::curvature_bound() const {
  if (kind == PotentialKind::zero) return 0.0;
  return std::abs(amplitude) * two_pi * two_pi;
}

double LagrangianModel::shoot_horizon() const {
  const double w = std::sqrt(curvature_bound());
  if (w <= 0.0) return 8.0;
  // Keep the endpoint-map amplification e^{w t} below ~1e3.
  return std::min(8.0, std::log(1e3) / w);
}

std::string LagrangianModel::kind_name() const {
  switch (kind) {
    case PotentialKind::zero: return "zero";
    case PotentialKind::cosine: return "cosine";
    case PotentialKind::shifted_cosine: return "shifted_cosine";
  }
  return "zero";
}

LagrangianModel LagrangianModel::free_model() { return LagrangianModel{}; }

LagrangianModel LagrangianModel::pendulum(double amplitude) {
  LagrangianModel m;
  m.kind = PotentialKind::cosine;
  m.amplitude = amplitude;
  return m;
}

LagrangianModel LagrangianModel::make(const std::string& kind_name, double amplitude,
                                      double shift) {
  LagrangianModel m;
  m.amplitude = amplitude;
  m.shift = shift;
  if (kind_name == "zero") {
    m.kind = PotentialKind::zero;
  } else if (kind_name == "cosine") {
    m.kind = PotentialKind::cosine;
  } else if (kind_name == "shifted_cosine") {
    m.kind = PotentialKind::shifted_cosine;
  } else {
    throw DomainError("unknown potential kind: " + kind_name);
  }
  return m;
}

}  // namespace wkot
