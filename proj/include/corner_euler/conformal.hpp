#pragma once

#include <array>
#include <optional>
#include <vector>

#include "corner_euler/domain.hpp"
#include "corner_euler/vec2.hpp"

namespace corner_euler {

/// Behaviour of the derivatives reported by a map evaluation.
enum class DerivativeStatus {
  finite,    // regular point
  vanishes,  // corner vertex with pi/theta > 1: T' -> 0
  diverges,  // corner vertex with pi/theta < 1: T' -> infinity (obtuse, not built)
};

/// Value and complex derivatives of T at a point. At a corner vertex the
/// value is the corner's disk image and the derivatives carry no numbers:
/// callers must branch on `status`.
struct MapEval {
  Complex value;
  Complex first_derivative;
  Complex second_derivative;
  DerivativeStatus status = DerivativeStatus::finite;
  std::optional<std::size_t> corner;  // set when evaluated exactly at a vertex

  bool regular() const { return status == DerivativeStatus::finite; }

  /// Conformal Jacobian [[a, -b], [b, a]] of T' = a + ib, row-major.
  std::array<double, 4> jacobian() const;

  /// |T'|^2, equal to det of the Jacobian.
  double jacobian_det() const { return std::norm(first_derivative); }
};

/// One closed-form biholomorphic stage of a Riemann map.
struct Stage {
  enum class Kind {
    power,       // z -> z^p, principal branch, closed upper half plane input
    joukowski,   // upper half disk -> upper half plane, z -> -(z + 1/z)/2
    cayley,      // upper half plane -> unit disk, w -> (w - i)/(w + i)
  };
  Kind kind = Kind::power;
  double exponent = 1.0;  // power stages only

  struct Eval {
    Complex value;
    Complex d1;
    Complex d2;
  };

  Eval apply(Complex z) const;
  Complex invert(Complex w) const;
};

/// Riemann map T: Omega -> D for a closed-form model domain, built as a
/// composition of stages. Immutable after construction.
class ConformalMap {
 public:
  explicit ConformalMap(DomainSpec domain);

  const DomainSpec& domain() const { return domain_; }
  const std::vector<Stage>& stages() const { return stages_; }
  bool is_identity() const { return stages_.empty(); }

  /// T, T', T'' by composing stages with the chain rule.
  MapEval forward(Vec2 x) const;

  /// Stage composition without the corner-vertex guard.
  MapEval compose(Complex z) const;

  /// T^{-1}(y) for |y| <= 1: closed-form stage inversion followed by Newton
  /// polish on T. Throws std::domain_error when |y| > 1 + 1e-9.
  Vec2 inverse(Vec2 y) const;

  /// T(x) - T(x_k) for corner k, formed stage by stage from differences so
  /// it keeps full relative precision when x is close to the vertex.
  Complex offset_from_corner(std::size_t k, Vec2 x) const;

  /// T^{-1}(T(x_k) + delta). Accurate for tiny delta even when T(x_k) + delta
  /// is not representable; may throw like inverse().
  Vec2 inverse_from_corner(std::size_t k, Complex delta) const;

  /// |(T^{-1})'(z)|^2. Infinite at corner images.
  double det_jacobian_inverse(Vec2 z) const;

  /// |T'(T^{-1}(y))|^2. Zero at corner images.
  double pushforward_factor(Vec2 y) const;

  /// Index of the corner whose disk image is within `tol` of y.
  std::optional<std::size_t> corner_at_image(Vec2 y, double tol = 1e-15) const;
  std::optional<std::size_t> corner_at_vertex(Vec2 x, double tol = 1e-15) const;

 private:
  DomainSpec domain_;
  std::vector<Stage> stages_;
};

}  // namespace corner_euler
