#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vmoser/fd.hpp"
#include "vmoser/green_disk.hpp"
#include "vmoser/grid_field.hpp"
#include "vmoser/parallel.hpp"

namespace vmoser {

// ----------------------------------------------------------------------
// Radial stationary flows: a vorticity profile omega(s) induces the
// rotation u(x) = (-x2, x1) m(|x|)/|x|^2 with m(s) = ∫_0^s sigma
// omega(sigma) d sigma, which solves the stationary vorticity transport
// equation exactly. Plus a small semi-Lagrangian stepper for generating
// time-dependent test data.
// ----------------------------------------------------------------------

struct RadialVorticity {
    enum class Kind { rankine, lamb_oseen, log_example, custom };

    Kind kind = Kind::rankine;
    double omega0 = 0.0, core = 0.0;              // rankine: omega0 on s <= core
    double circulation = 0.0, nu = 0.0, t = 0.0;  // lamb_oseen parameters
    std::vector<double> knot_s, knot_w;           // custom: tabulated omega(s)

    static RadialVorticity rankine(double omega0, double core) {
        RadialVorticity v;
        v.kind = Kind::rankine;
        v.omega0 = omega0;
        v.core = core;
        v.validate();
        return v;
    }

    static RadialVorticity lamb_oseen(double circulation, double nu, double t) {
        RadialVorticity v;
        v.kind = Kind::lamb_oseen;
        v.circulation = circulation;
        v.nu = nu;
        v.t = t;
        v.validate();
        return v;
    }

    /// omega(s) = 1/(s ln(1/s)) on 0 < s <= 1/2, zero beyond: unbounded
    /// vorticity with bounded velocity.
    static RadialVorticity log_example() {
        RadialVorticity v;
        v.kind = Kind::log_example;
        return v;
    }

    /// Piecewise-linear profile through (s_i, w_i); below the first knot a
    /// power law fitted to the first two knots (constant if their values
    /// straddle zero), zero above the last knot.
    static RadialVorticity custom(std::vector<double> s, std::vector<double> w) {
        RadialVorticity v;
        v.kind = Kind::custom;
        v.knot_s = std::move(s);
        v.knot_w = std::move(w);
        v.validate();
        return v;
    }

    void validate() const {
        switch (kind) {
            case Kind::rankine:
                if (!(core > 0.0)) throw std::invalid_argument("rankine core must be positive");
                if (!std::isfinite(omega0)) throw std::invalid_argument("rankine strength must be finite");
                break;
            case Kind::lamb_oseen:
                if (!(nu > 0.0) || !(t > 0.0))
                    throw std::invalid_argument("lamb_oseen needs nu > 0 and t > 0");
                if (!std::isfinite(circulation))
                    throw std::invalid_argument("lamb_oseen circulation must be finite");
                break;
            case Kind::log_example:
                break;
            case Kind::custom: {
                if (knot_s.empty() || knot_s.size() != knot_w.size())
                    throw std::invalid_argument("custom profile needs matching nonempty knot arrays");
                double prev = 0.0;
                for (std::size_t i = 0; i < knot_s.size(); ++i) {
                    if (!(knot_s[i] > prev))
                        throw std::invalid_argument("custom profile knots must be positive and increasing");
                    if (!std::isfinite(knot_w[i]))
                        throw std::invalid_argument("custom profile values must be finite");
                    prev = knot_s[i];
                }
                if (low_exponent() <= -2.0)
                    throw std::invalid_argument(
                        "custom profile non-integrable near the origin (extrapolation exponent <= -2)");
                break;
            }
        }
    }

    /// Power-law exponent used below the first knot.
    double low_exponent() const {
        if (knot_s.size() < 2) return 0.0;
        double w0 = knot_w[0], w1 = knot_w[1];
        if (!(w0 * w1 > 0.0)) return 0.0;  // sign change or zero: constant extension
        return std::log(w1 / w0) / std::log(knot_s[1] / knot_s[0]);
    }

    double omega(double s) const {
        switch (kind) {
            case Kind::rankine:
                return s <= core ? omega0 : 0.0;
            case Kind::lamb_oseen: {
                double k = 4.0 * nu * t;
                return circulation / (pi * k) * std::exp(-s * s / k);
            }
            case Kind::log_example:
                if (s <= 0.0 || s > 0.5) return s == 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
                return 1.0 / (s * std::log(1.0 / s));
            case Kind::custom: {
                if (s > knot_s.back()) return 0.0;
                if (s < knot_s.front()) {
                    double p = low_exponent();
                    return knot_w.front() * std::pow(s / knot_s.front(), p);
                }
                auto it = std::upper_bound(knot_s.begin(), knot_s.end(), s);
                std::size_t hi = static_cast<std::size_t>(it - knot_s.begin());
                if (hi == 0) return knot_w.front();
                if (hi == knot_s.size()) return knot_w.back();
                double a = knot_s[hi - 1], b = knot_s[hi];
                double u = (s - a) / (b - a);
                return knot_w[hi - 1] + u * (knot_w[hi] - knot_w[hi - 1]);
            }
        }
        return 0.0;
    }

    /// Integrand s*omega(s) of the angular-momentum mass m; continuous at
    /// s = 0 for every admissible profile (1/ln(1/s) -> 0 for log_example).
    double mass_integrand(double s) const {
        if (kind == Kind::log_example) {
            if (s <= 0.0 || s > 0.5) return 0.0;
            return 1.0 / std::log(1.0 / s);
        }
        if (s == 0.0) return 0.0;
        return s * omega(s);
    }
};

namespace detail {

template <class F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol, int depth = 48) {
    if (!(b > a)) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

inline std::uint64_t double_bits(double x) {
    std::uint64_t b;
    std::memcpy(&b, &x, sizeof(b));
    return b;
}

}  // namespace detail

inline constexpr double radial_quadrature_tol = 1e-10;

struct RadialFlowPair {
    GridField2D velocity;   // 2 components
    GridField2D vorticity;  // scalar
};

/// Sample the radial pair on a grid. The mass integral m(|x|) is computed
/// by adaptive Simpson quadrature and cached per unique squared radius
/// (bit-exact key), so every lattice point of a given radius receives the
/// identical speed and the angular deviation of |u| vanishes exactly.
/// `mask_radius` > 0 attaches the usual disk mask to both outputs.
inline RadialFlowPair radial_velocity(const RadialVorticity& profile, const GridSpec& grid,
                                      double mask_radius = 0.0) {
    profile.validate();
    grid.validate();
    GridField2D u(grid, 2, mask_radius);
    GridField2D w(grid, 1, mask_radius);
    std::vector<double>& ud = u.mutable_data();
    std::vector<double>& wd = w.mutable_data();

    // Unique radii first (sequential fill of the cache), then a parallel
    // sweep that only reads it.
    std::unordered_map<std::uint64_t, double> mass;
    mass.reserve(static_cast<std::size_t>(grid.nx) * grid.ny / 4);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            Vec2 p = grid.cell_center(i, j) - grid.origin;
            double s2 = p.x * p.x + p.y * p.y;
            auto [it, fresh] = mass.try_emplace(detail::double_bits(s2), 0.0);
            if (!fresh) continue;
            double s = std::sqrt(s2);
            if (s2 == 0.0) {
                if (!std::isfinite(profile.omega(0.0)))
                    throw std::invalid_argument(
                        "radial_velocity: grid samples the origin where the profile is singular");
                it->second = 0.0;
                continue;
            }
            it->second = detail::adaptive_simpson(
                [&](double sig) { return profile.mass_integrand(sig); }, 0.0, s,
                radial_quadrature_tol);
        }

    const int nx = grid.nx;
    parallel_for(grid.cell_count(), [&](std::size_t idx) {
        int i = static_cast<int>(idx % nx);
        int j = static_cast<int>(idx / nx);
        Vec2 p = grid.cell_center(i, j) - grid.origin;
        double s2 = p.x * p.x + p.y * p.y;
        double m = mass.at(detail::double_bits(s2));
        double f = s2 == 0.0 ? 0.0 : m / s2;
        ud[u.index(i, j, 0)] = -p.y * f;
        ud[u.index(i, j, 1)] = p.x * f;
        wd[w.index(i, j, 0)] = s2 == 0.0 ? profile.omega(0.0) : profile.omega(std::sqrt(s2));
    });
    return {std::move(u), std::move(w)};
}

/// Raw L^2 norm of the discrete transport term (u . grad) omega over the
/// cells whose full central stencils stay inside the mask, so rim stencil
/// switches do not pollute the convergence order. Zero for exactly
/// stationary pairs up to discretization.
inline double stationarity_residual(const GridField2D& u, const GridField2D& omega) {
    if (u.components() != 2 || omega.components() != 1)
        throw std::invalid_argument("stationarity_residual: needs a velocity/vorticity pair");
    if (!u.same_geometry(omega))
        throw std::invalid_argument("stationarity_residual: fields must share one grid");
    std::vector<double> terms;
    terms.reserve(omega.spec().cell_count());
    for (int j = 0; j < omega.ny(); ++j)
        for (int i = 0; i < omega.nx(); ++i) {
            if (!central_stencil_ok(omega, i, j)) continue;
            double gx = deriv_x(omega, i, j);
            double gy = deriv_y(omega, i, j);
            double r = u.value(i, j, 0) * gx + u.value(i, j, 1) * gy;
            terms.push_back(u.h() * u.h() * r * r);
        }
    return std::sqrt(pairwise_sum(terms));
}

struct AdvectionResult {
    SpaceTimeField omega;     // steps+1 slices at times 0, dt, ..., steps*dt
    SpaceTimeField velocity;  // reconstructed velocity at the same times
};

/// Semi-Lagrangian vorticity transport: per step, reconstruct the velocity
/// from the current vorticity (disk Green function, zero boundary stream),
/// trace characteristics backward with one RK2 stage and resample omega
/// bilinearly. Generates plausible time-dependent data; it is not a
/// long-time Euler solver.
inline AdvectionResult advect(const GridField2D& omega0, double dt, int steps) {
    if (omega0.components() != 1)
        throw std::invalid_argument("advect: vorticity must be scalar");
    if (!omega0.masked())
        throw std::invalid_argument("advect: vorticity must carry a disk mask");
    if (!(dt > 0.0)) throw std::invalid_argument("advect: dt must be positive");
    if (steps < 1) throw std::invalid_argument("advect: needs at least one step");

    const GridSpec& grid = omega0.spec();
    DiskGreen disk{grid.origin, omega0.mask_radius()};
    const std::vector<double> no_boundary(64, 0.0);
    const double h = grid.h;
    const int nx = grid.nx;

    std::vector<GridField2D> omega_slices{omega0};
    std::vector<GridField2D> u_slices;
    std::vector<double> times{0.0};
    omega_slices.reserve(static_cast<std::size_t>(steps) + 1);
    u_slices.reserve(static_cast<std::size_t>(steps) + 1);

    for (int step = 0; step < steps; ++step) {
        const GridField2D& w = omega_slices.back();
        StreamDecomposition rec = reconstruct_velocity(disk, w, no_boundary);
        GridField2D u = std::move(rec.velocity);

        double umax = 0.0;
        for (int j = 0; j < u.ny(); ++j)
            for (int i = 0; i < u.nx(); ++i) umax = std::max(umax, u.magnitude(i, j));
        if (dt * umax > h * (1.0 + 1e-12))
            throw std::invalid_argument("advect: CFL violation, dt*max|u| exceeds the cell size");

        // Samples evolve at in-disk centers; rim-sliver cells (quadrature
        // weight but no sample point) keep their previous values so the
        // resampling stencil never reads artificial zeros at the rim.
        GridField2D wn = w;
        std::vector<double>& wd = wn.mutable_data();
        parallel_for(grid.cell_count(), [&](std::size_t idx) {
            int i = static_cast<int>(idx % nx);
            int j = static_cast<int>(idx / nx);
            if (!wn.inside_mask(i, j)) return;
            Vec2 x = grid.cell_center(i, j);
            Vec2 mid = x - (0.5 * dt) * Vec2{u.value(i, j, 0), u.value(i, j, 1)};
            Vec2 back = x - dt * Vec2{u.interpolate(mid, 0), u.interpolate(mid, 1)};
            wd[wn.index(i, j, 0)] = w.interpolate(back, 0);
        });

        u_slices.push_back(std::move(u));
        omega_slices.push_back(std::move(wn));
        times.push_back(dt * (step + 1));
    }

    // Velocity for the final slice so both bundles share the time axis.
    {
        StreamDecomposition rec = reconstruct_velocity(disk, omega_slices.back(), no_boundary);
        u_slices.push_back(std::move(rec.velocity));
    }

    Cylinder cyl{grid.origin, omega0.mask_radius(), 0.0, dt * steps, Cylinder::Scaling::euler};
    return {SpaceTimeField(cyl, times, std::move(omega_slices)),
            SpaceTimeField(cyl, times, std::move(u_slices))};
}

}  // namespace vmoser
