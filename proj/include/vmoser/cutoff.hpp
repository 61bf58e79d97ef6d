#pragma once

#include <cmath>
#include <stdexcept>

#include "vmoser/geometry.hpp"

namespace vmoser {

namespace detail {

/// Quintic smoothstep: C^2, s(0)=0, s(1)=1, max slope 15/8 at u=1/2.
inline double smoothstep5(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

inline double smoothstep5_deriv(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return 30.0 * u * u * (1.0 - u) * (1.0 - u);
}

}  // namespace detail

// ======================================================================
// Space-time cutoff: 1 on the inner cylinder, 0 outside the lateral and
// initial faces of the outer one (no decay at the top time face), built
// from quintic smoothstep profiles. Derivative bounds are measured by
// sampling the analytic profile derivative, not assumed.
// ======================================================================
class CutoffSpec {
  public:
    CutoffSpec(Cylinder inner, Cylinder outer) : inner_(inner), outer_(outer) {
        inner_.validate();
        outer_.validate();
        double scale = std::max(1.0, outer_.radius);
        if (std::abs(inner_.center.x - outer_.center.x) > 1e-12 * scale ||
            std::abs(inner_.center.y - outer_.center.y) > 1e-12 * scale)
            throw std::invalid_argument("cutoff cylinders must be concentric");
        if (!(inner_.radius < outer_.radius))
            throw std::invalid_argument("cutoff needs a spatial transition band (inner.r < outer.r)");
        if (!(inner_.t0 > outer_.t0))
            throw std::invalid_argument("cutoff needs a time transition band (inner.t0 > outer.t0)");
        if (inner_.t1 > outer_.t1 + 1e-12)
            throw std::invalid_argument("inner cylinder must not outlive the outer one");
        measure_bounds();
    }

    const Cylinder& inner() const { return inner_; }
    const Cylinder& outer() const { return outer_; }

    /// Measured sup of |∇ζ| (resp. |∂_t ζ|) over a dense profile sample.
    double grad_bound() const { return grad_bound_; }
    double dt_bound() const { return dt_bound_; }

    double radial_factor(double rho) const {
        double a = inner_.radius, b = outer_.radius;
        if (rho <= a) return 1.0;
        if (rho >= b) return 0.0;
        return detail::smoothstep5((b - rho) / (b - a));
    }

    double time_factor(double t) const {
        double c = outer_.t0, d = inner_.t0;
        if (t >= d) return 1.0;
        if (t <= c) return 0.0;
        return detail::smoothstep5((t - c) / (d - c));
    }

    double operator()(Vec2 x, double t) const {
        return radial_factor(norm(x - outer_.center)) * time_factor(t);
    }

    /// |∇ζ|(x, t): the radial profile slope times the time factor.
    double grad_magnitude(Vec2 x, double t) const {
        double a = inner_.radius, b = outer_.radius;
        double rho = norm(x - outer_.center);
        if (rho <= a || rho >= b) return 0.0;
        double slope = detail::smoothstep5_deriv((b - rho) / (b - a)) / (b - a);
        return slope * time_factor(t);
    }

    /// ∂_t ζ(x, t); nonnegative (the cutoff only ramps up in time).
    double dt_value(Vec2 x, double t) const {
        double c = outer_.t0, d = inner_.t0;
        if (t <= c || t >= d) return 0.0;
        double slope = detail::smoothstep5_deriv((t - c) / (d - c)) / (d - c);
        return slope * radial_factor(norm(x - outer_.center));
    }

  private:
    void measure_bounds() {
        constexpr int samples = 4096;  // even count puts u = 1/2 on the lattice
        double smax = 0.0;
        for (int k = 0; k <= samples; ++k)
            smax = std::max(smax, detail::smoothstep5_deriv(static_cast<double>(k) / samples));
        grad_bound_ = smax / (outer_.radius - inner_.radius);
        dt_bound_ = smax / (inner_.t0 - outer_.t0);
    }

    Cylinder inner_;
    Cylinder outer_;
    double grad_bound_ = 0.0;
    double dt_bound_ = 0.0;
};

inline CutoffSpec make_cutoff(const Cylinder& inner, const Cylinder& outer) {
    return CutoffSpec(inner, outer);
}

}  // namespace vmoser
