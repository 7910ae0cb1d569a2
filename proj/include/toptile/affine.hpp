#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace toptile {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

using Point2d = Point2<double>;

/// Planar affine map (x, y) -> (a x + b y + e, c x + d y + f).
template <typename Scalar>
struct AffineMap {
  using Linear = Eigen::Matrix<Scalar, 2, 2>;
  using Vector = Point2<Scalar>;

  Linear linear = Linear::Identity();
  Vector translation = Vector::Zero();

  AffineMap() = default;
  AffineMap(const Linear& l, const Vector& t) : linear(l), translation(t) {}

  static AffineMap from_coefficients(Scalar a, Scalar b, Scalar c, Scalar d,
                                     Scalar e, Scalar f) {
    Linear l;
    l << a, b, c, d;
    return {l, Vector(e, f)};
  }

  static AffineMap identity() { return {}; }

  Vector operator()(const Vector& p) const { return linear * p + translation; }

  Scalar determinant() const { return linear.determinant(); }

  /// Largest singular value of the linear part, closed form for 2x2.
  Scalar operator_norm() const {
    const Scalar a = linear(0, 0), b = linear(0, 1);
    const Scalar c = linear(1, 0), d = linear(1, 1);
    const Scalar s = a * a + b * b + c * c + d * d;
    const Scalar det = a * d - b * c;
    const Scalar disc = std::sqrt(std::max(Scalar(0), s * s - 4 * det * det));
    return std::sqrt((s + disc) / 2);
  }
};

using AffineMap2d = AffineMap<double>;

/// (f * g)(x) = f(g(x)).
template <typename Scalar>
AffineMap<Scalar> operator*(const AffineMap<Scalar>& f,
                            const AffineMap<Scalar>& g) {
  return {f.linear * g.linear, f.linear * g.translation + f.translation};
}

template <typename Scalar>
Point2<Scalar> apply(const AffineMap<Scalar>& m, const Point2<Scalar>& p) {
  return m(p);
}

inline constexpr double kSingularThreshold = 1e-12;

template <typename Scalar>
AffineMap<Scalar> inverse(const AffineMap<Scalar>& m) {
  const Scalar det = m.determinant();
  if (!(std::abs(det) > Scalar(kSingularThreshold)))
    throw std::domain_error("affine map is singular (|det| below threshold)");
  const typename AffineMap<Scalar>::Linear inv = m.linear.inverse();
  return {inv, -(inv * m.translation)};
}

/// Solves p = m(p).
template <typename Scalar>
Point2<Scalar> fixed_point(const AffineMap<Scalar>& m) {
  using Linear = typename AffineMap<Scalar>::Linear;
  const Linear system = Linear::Identity() - m.linear;
  if (!(std::abs(system.determinant()) > Scalar(kSingularThreshold)))
    throw std::domain_error("I - L is singular; map has no unique fixed point");
  return system.partialPivLu().solve(m.translation);
}

}  // namespace toptile
