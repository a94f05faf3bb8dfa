#include "corner_euler/conformal.hpp"

#include <cmath>
#include <iterator>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace corner_euler {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

// Argument in [0, pi] for points of the closed upper half plane; a signed
// zero imaginary part on the negative axis still yields pi.
double upper_arg(Complex z) {
  const double im = z.imag() > 0.0 ? z.imag() : 0.0;
  return std::atan2(im, z.real());
}

Complex principal_power(Complex z, double p) {
  const double r = std::abs(z);
  if (r == 0.0) return {0.0, 0.0};
  return std::polar(std::pow(r, p), p * std::atan2(z.imag(), z.real()));
}

constexpr int kNewtonIterations = 5;
constexpr double kNewtonTolerance = 1e-12;
constexpr double kDiskTolerance = 1e-9;

}  // namespace

std::array<double, 4> MapEval::jacobian() const {
  const double a = first_derivative.real();
  const double b = first_derivative.imag();
  return {a, -b, b, a};
}

Stage::Eval Stage::apply(Complex z) const {
  switch (kind) {
    case Kind::power: {
      const Complex f = principal_power(z, exponent);
      return {f, exponent * f / z, exponent * (exponent - 1.0) * f / (z * z)};
    }
    case Kind::joukowski: {
      const Complex inv = 1.0 / z;
      return {-0.5 * (z + inv), -0.5 * (1.0 - inv * inv), -(inv * inv * inv)};
    }
    case Kind::cayley: {
      const Complex s = 1.0 / (z + kI);
      return {(z - kI) * s, 2.0 * kI * s * s, -4.0 * kI * s * s * s};
    }
  }
  return {};
}

Complex Stage::invert(Complex w) const {
  switch (kind) {
    case Kind::power: {
      const double r = std::abs(w);
      if (r == 0.0) return {0.0, 0.0};
      return std::polar(std::pow(r, 1.0 / exponent), upper_arg(w) / exponent);
    }
    case Kind::joukowski: {
      if (!std::isfinite(std::abs(w))) return {0.0, 0.0};
      // Roots of z^2 + 2wz + 1 = 0 multiply to one; take the reciprocal of
      // the larger root to avoid cancellation.
      const Complex s = std::sqrt(w * w - 1.0);
      const Complex a = -w + s;
      const Complex b = -w - s;
      const Complex big = std::abs(a) >= std::abs(b) ? a : b;
      const Complex small = 1.0 / big;
      // The half-disk root is the small one. Only when both are unimodular
      // (w in [-1, 1]) does the sign of the imaginary part decide; elsewhere
      // it is roundoff and must not flip the choice.
      if (std::abs(big) > 1.0 + 1e-12) return small;
      return small.imag() < 0.0 ? big : small;
    }
    case Kind::cayley: {
      const Complex den = 1.0 - w;
      if (den == Complex{0.0, 0.0}) {
        return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
      }
      return kI * (1.0 + w) / den;
    }
  }
  return {};
}

ConformalMap::ConformalMap(DomainSpec domain) : domain_(std::move(domain)) {
  validate(domain_);
  switch (domain_.kind) {
    case DomainKind::unit_disk:
      break;
    case DomainKind::sector:
      stages_.push_back({Stage::Kind::power, kPi / domain_.theta0});
      [[fallthrough]];
    case DomainKind::half_disk:
      stages_.push_back({Stage::Kind::joukowski, 1.0});
      stages_.push_back({Stage::Kind::cayley, 1.0});
      break;
  }
}

std::optional<std::size_t> ConformalMap::corner_at_vertex(Vec2 x, double tol) const {
  for (std::size_t k = 0; k < domain_.corners.size(); ++k) {
    if (norm(x - domain_.corners[k].vertex) <= tol) return k;
  }
  return std::nullopt;
}

std::optional<std::size_t> ConformalMap::corner_at_image(Vec2 y, double tol) const {
  for (std::size_t k = 0; k < domain_.corners.size(); ++k) {
    if (norm(y - domain_.corners[k].disk_image) <= tol) return k;
  }
  return std::nullopt;
}

MapEval ConformalMap::compose(Complex z) const {
  MapEval e{z, {1.0, 0.0}, {0.0, 0.0}, DerivativeStatus::finite, std::nullopt};
  for (const auto& stage : stages_) {
    const auto s = stage.apply(e.value);
    e.second_derivative = s.d2 * e.first_derivative * e.first_derivative + s.d1 * e.second_derivative;
    e.first_derivative = s.d1 * e.first_derivative;
    e.value = s.value;
  }
  return e;
}

MapEval ConformalMap::forward(Vec2 x) const {
  if (const auto k = corner_at_vertex(x)) {
    const Corner& c = domain_.corners[*k];
    MapEval e;
    e.value = c.disk_image.complex();
    e.first_derivative = {0.0, 0.0};
    e.second_derivative = {std::numeric_limits<double>::quiet_NaN(), 0.0};
    e.status = (kPi / c.theta > 1.0) ? DerivativeStatus::vanishes : DerivativeStatus::diverges;
    if (e.status == DerivativeStatus::diverges) {
      e.first_derivative = {std::numeric_limits<double>::infinity(), 0.0};
    }
    e.corner = *k;
    return e;
  }
  return compose(x.complex());
}

Vec2 ConformalMap::inverse(Vec2 y) const {
  const double r = norm(y);
  if (!(r <= 1.0 + kDiskTolerance)) {
    throw std::domain_error("inverse: point outside the closed unit disk");
  }
  if (r > 1.0) y = y / r;
  if (stages_.empty()) return y;
  if (const auto k = corner_at_image(y)) return domain_.corners[*k].vertex;

  Complex x = y.complex();
  for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) x = it->invert(x);

  // Newton polish; a step is kept only if it lowers the residual.
  const Complex target = y.complex();
  MapEval e = compose(x);
  double residual = std::abs(e.value - target);
  for (int it = 0; it < kNewtonIterations && residual > kNewtonTolerance; ++it) {
    if (e.first_derivative == Complex{0.0, 0.0}) break;
    const Complex candidate = x - (e.value - target) / e.first_derivative;
    const MapEval ce = compose(candidate);
    const double cr = std::abs(ce.value - target);
    if (!(cr < residual)) break;
    x = candidate;
    e = ce;
    residual = cr;
  }
  return Vec2(x);
}

Complex ConformalMap::offset_from_corner(std::size_t k, Vec2 x) const {
  if (k >= domain_.corners.size()) throw std::invalid_argument("offset_from_corner: corner index out of range");
  Complex z = x.complex();
  Complex zk = domain_.corners[k].vertex.complex();
  Complex d = z - zk;
  bool at_infinity = false;  // zk stands for the point at infinity
  for (const auto& stage : stages_) {
    const Complex f = stage.apply(z).value;
    Complex fk{0.0, 0.0};
    switch (stage.kind) {
      case Stage::Kind::power:
        if (zk == Complex{0.0, 0.0}) {
          d = f;
        } else {
          fk = stage.apply(zk).value;
          d = f - fk;
        }
        break;
      case Stage::Kind::joukowski:
        if (zk == Complex{0.0, 0.0}) {
          at_infinity = true;
        } else {
          fk = stage.apply(zk).value;
          d = -0.5 * d * (z * zk - 1.0) / (z * zk);
        }
        break;
      case Stage::Kind::cayley:
        if (at_infinity) {
          fk = {1.0, 0.0};
          d = -2.0 * kI / (z + kI);
          at_infinity = false;
        } else {
          fk = stage.apply(zk).value;
          d = 2.0 * kI * d / ((z + kI) * (zk + kI));
        }
        break;
    }
    z = f;
    zk = fk;
  }
  return d;
}

Vec2 ConformalMap::inverse_from_corner(std::size_t k, Complex delta) const {
  if (k >= domain_.corners.size()) throw std::invalid_argument("inverse_from_corner: corner index out of range");
  const Complex image = domain_.corners[k].disk_image.complex();
  // Only an image at 1 sends the Cayley inverse to infinity; elsewhere the
  // plain inverse loses nothing.
  if (stages_.empty() || image != Complex{1.0, 0.0} || stages_.back().kind != Stage::Kind::cayley) {
    return inverse(Vec2(image + delta));
  }
  if (delta == Complex{0.0, 0.0}) return domain_.corners[k].vertex;
  Complex w = kI * (2.0 + delta) / (-delta);
  for (auto it = std::next(stages_.rbegin()); it != stages_.rend(); ++it) w = it->invert(w);
  return Vec2(w);
}

double ConformalMap::det_jacobian_inverse(Vec2 z) const {
  if (stages_.empty()) return 1.0;
  if (corner_at_image(z)) return std::numeric_limits<double>::infinity();
  const MapEval e = forward(inverse(z));
  if (!e.regular()) return std::numeric_limits<double>::infinity();
  return 1.0 / e.jacobian_det();
}

double ConformalMap::pushforward_factor(Vec2 y) const {
  if (stages_.empty()) return 1.0;
  if (corner_at_image(y)) return 0.0;
  const MapEval e = forward(inverse(y));
  if (!e.regular()) return 0.0;
  return e.jacobian_det();
}

}  // namespace corner_euler
