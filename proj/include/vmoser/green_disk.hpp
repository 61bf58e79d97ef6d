#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vmoser/fd.hpp"
#include "vmoser/grid_field.hpp"
#include "vmoser/parallel.hpp"

namespace vmoser {

/// Dirichlet Green function of the Laplacian on a disk.
///
/// G(x, y) = (1/4π) · ln(A / (R² |x-y|²)),  A = |x|²|y|² - 2R² x·y + R⁴
/// (offsets taken from the center). The symmetric numerator A equals
/// |y|² · |x - R²y/|y|²|², so the form needs no special case at y = center,
/// is symmetric in (x, y), and vanishes identically for |x| = R or |y| = R.
struct DiskGreen {
    Vec2 center{0.0, 0.0};
    double radius = 1.0;

    void validate() const {
        if (!(radius > 0.0) || !std::isfinite(radius) || !std::isfinite(center.x) || !std::isfinite(center.y))
            throw std::invalid_argument("DiskGreen: radius must be positive and finite");
    }
};

namespace detail {

inline void require_in_disk(const DiskGreen& g, const Vec2& p, const char* who) {
    double rr = norm2(p - g.center);
    if (rr > g.radius * g.radius * (1.0 + 1e-12))
        throw std::domain_error(std::string(who) + ": point outside the disk");
}

}  // namespace detail

inline double green_eval(const DiskGreen& g, const Vec2& x, const Vec2& y) {
    g.validate();
    detail::require_in_disk(g, x, "green_eval");
    detail::require_in_disk(g, y, "green_eval");
    Vec2 a = x - g.center, b = y - g.center;
    double B = norm2(a - b);
    if (B == 0.0) throw std::domain_error("green_eval: diagonal singularity");
    double R2 = g.radius * g.radius;
    double A = norm2(a) * norm2(b) - 2.0 * R2 * dot(a, b) + R2 * R2;
    return std::log(A / (R2 * B)) / (4.0 * pi);
}

/// Gradient of G in its first argument.
inline Vec2 green_grad_x(const DiskGreen& g, const Vec2& x, const Vec2& y) {
    g.validate();
    detail::require_in_disk(g, x, "green_grad_x");
    detail::require_in_disk(g, y, "green_grad_x");
    Vec2 a = x - g.center, b = y - g.center;
    double B = norm2(a - b);
    if (B == 0.0) throw std::domain_error("green_grad_x: diagonal singularity");
    double R2 = g.radius * g.radius;
    double A = norm2(a) * norm2(b) - 2.0 * R2 * dot(a, b) + R2 * R2;
    double cA = 1.0 / (4.0 * pi * A), cB = 1.0 / (2.0 * pi * B);
    double byy = norm2(b);
    return Vec2{cA * (2.0 * a.x * byy - 2.0 * R2 * b.x) - cB * (a.x - b.x),
                cA * (2.0 * a.y * byy - 2.0 * R2 * b.y) - cB * (a.y - b.y)};
}

/// Pointwise bound (1/2π)(1/|x-y| + 1/(R - |x|)) for |∇ₓG|.
inline double green_grad_bound(const DiskGreen& g, const Vec2& x, const Vec2& y) {
    g.validate();
    Vec2 a = x - g.center;
    double d = norm(x - y), gap = g.radius - norm(a);
    if (d <= 0.0 || gap <= 0.0)
        throw std::domain_error("green_grad_bound: undefined on the diagonal or boundary");
    return (1.0 / d + 1.0 / gap) / two_pi;
}

/// P(x) = ∫_disk G(x, y) ω(y) dy on the cells whose centers lie inside the
/// disk (0 elsewhere; result masked at the disk radius). The output solves
/// Δ_h P = -ω in the interior, so -P is the zero-boundary solution of
/// Δv = ω.
///
/// Quadrature: midpoint with exact rim-overlap weights; the diagonal cell is
/// replaced by an equal-area disk, over which the logarithmic factor
/// integrates in closed form (∫_{|z|<ρ} ln|z| dz = πρ²(ln ρ - 1/2)).
/// Source cells with zero values are skipped; each target accumulates its
/// sources in a fixed order, so results are identical for every thread count.
inline GridField2D poisson_solve_disk(const DiskGreen& g, const GridField2D& omega) {
    g.validate();
    if (omega.components() != 1)
        throw std::invalid_argument("poisson_solve_disk: vorticity must be scalar");
    if (!omega.masked())
        throw std::invalid_argument(
            "poisson_solve_disk: vorticity must carry a disk mask matching its support");
    const GridSpec& spec = omega.spec();
    Vec2 wc{spec.origin.x, spec.origin.y};
    if (std::abs(wc.x - g.center.x) > 1e-12 * g.radius ||
        std::abs(wc.y - g.center.y) > 1e-12 * g.radius)
        throw std::invalid_argument("poisson_solve_disk: disk center must match the grid window center");
    if (spec.half_width_x() < g.radius * (1.0 - 1e-12) ||
        spec.half_width_y() < g.radius * (1.0 - 1e-12))
        throw std::invalid_argument("poisson_solve_disk: grid window does not cover the disk");

    const double R = g.radius, R2 = R * R, R4 = R2 * R2, twoR2 = 2.0 * R2;
    const int nx = spec.nx, ny = spec.ny;

    // Compact the nonzero sources once. Cell centers are taken relative to
    // the disk center so the kernel works with plain coordinates.
    std::vector<double> sx, sy, syy, q;
    std::vector<int> self_of(static_cast<std::size_t>(nx) * ny, -1);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double w = omega.weight(i, j);
            if (w <= 0.0) continue;
            double val = omega.value(i, j);
            if (val == 0.0) continue;
            Vec2 p = spec.cell_center(i, j) - g.center;
            double rr = norm2(p);
            if (rr >= R2) {
                // A rim-straddling cell may carry its center just outside the
                // disk (up to h/√2 for a corner overlap); drop the sliver.
                // Anything further out is a misuse.
                double excess = std::sqrt(rr) - R;
                if (excess >= spec.h)
                    throw std::invalid_argument(
                        "poisson_solve_disk: vorticity source outside the disk");
                continue;
            }
            self_of[static_cast<std::size_t>(j) * nx + i] = static_cast<int>(sx.size());
            sx.push_back(p.x);
            sy.push_back(p.y);
            syy.push_back(rr);
            q.push_back(val * w);
        }
    const std::size_t ns = sx.size();

    GridField2D out(spec, 1, R);
    std::vector<double>& P = out.mutable_data();

    parallel_for(static_cast<std::size_t>(nx) * ny, [&](std::size_t cell) {
        int i = static_cast<int>(cell % nx), j = static_cast<int>(cell / nx);
        Vec2 t = spec.cell_center(i, j) - g.center;
        double txx = norm2(t);
        if (txx >= R2) return;  // leave 0 outside
        const double tx = t.x, ty = t.y;
        int self = self_of[cell];

        auto range_sum = [&](std::size_t a, std::size_t b) {
            double acc = 0.0;
            for (std::size_t m = a; m < b; ++m) {
                double dx = tx - sx[m], dy = ty - sy[m];
                double B = dx * dx + dy * dy;
                double A = txx * syy[m] - twoR2 * (tx * sx[m] + ty * sy[m]) + R4;
                acc += q[m] * std::log(A / (R2 * B));
            }
            return acc;
        };

        double sum;
        if (self < 0) {
            sum = range_sum(0, ns);
        } else {
            std::size_t s = static_cast<std::size_t>(self);
            sum = range_sum(0, s) + range_sum(s + 1, ns);
        }
        sum /= 4.0 * pi;

        if (self >= 0) {
            // Equal-area disk replacing the diagonal cell: the smooth factor
            // ln(A/R²) is evaluated at y = x, the log factor analytically.
            double w = omega.weight(i, j);
            double val = omega.value(i, j);
            double rho = std::sqrt(w / pi);
            sum += val * w / two_pi * (std::log((R2 - txx) / R) - std::log(rho) + 0.5);
        }
        P[out.index(i, j)] = sum;
    });
    return out;
}

/// Harmonic extension of boundary samples by the trapezoid Poisson kernel:
/// J1(x) = (1/M) Σ_m (R² - |x|²)/|x - y_m|² φ_m with y_m equally spaced on
/// the circle starting at angle 0. Needs at least 16 samples; accuracy
/// improves like ρ^M for data with bounded harmonics, so callers wanting rim
/// accuracy should pass generous sample counts.
inline GridField2D boundary_term(const DiskGreen& g, const std::vector<double>& boundary_values,
                                 const GridSpec& spec) {
    g.validate();
    spec.validate();
    const std::size_t M = boundary_values.size();
    if (M < 16)
        throw std::invalid_argument("boundary_term: needs at least 16 boundary samples");
    for (double v : boundary_values)
        if (!std::isfinite(v))
            throw std::invalid_argument("boundary_term: boundary samples must be finite");

    const double R = g.radius, R2 = R * R;
    std::vector<double> bx(M), by(M);
    for (std::size_t m = 0; m < M; ++m) {
        double th = two_pi * static_cast<double>(m) / static_cast<double>(M);
        bx[m] = R * std::cos(th);
        by[m] = R * std::sin(th);
    }

    GridField2D out(spec, 1, R);
    std::vector<double>& J = out.mutable_data();
    const int nx = spec.nx, ny = spec.ny;
    parallel_for(static_cast<std::size_t>(nx) * ny, [&](std::size_t cell) {
        int i = static_cast<int>(cell % nx), j = static_cast<int>(cell / nx);
        Vec2 t = spec.cell_center(i, j) - g.center;
        double txx = norm2(t);
        if (txx >= R2) return;
        double acc = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            double dx = t.x - bx[m], dy = t.y - by[m];
            acc += boundary_values[m] / (dx * dx + dy * dy);
        }
        J[out.index(i, j)] = (R2 - txx) * acc / static_cast<double>(M);
    });
    return out;
}

/// Perpendicular gradient u = (-∂y φ, ∂x φ), mask-aware (stencils never
/// reach across the mask rim).
inline GridField2D stream_to_velocity(const GridField2D& phi) {
    if (phi.components() != 1)
        throw std::invalid_argument("stream_to_velocity: stream function must be scalar");
    if (phi.nx() < 3 || phi.ny() < 3)
        throw std::invalid_argument("stream_to_velocity: grid too small for derivatives");
    GridField2D u(phi.spec(), 2, phi.mask_radius());
    std::vector<double>& d = u.mutable_data();
    for (int j = 0; j < phi.ny(); ++j)
        for (int i = 0; i < phi.nx(); ++i)
            if (phi.inside_mask(i, j)) {
                d[u.index(i, j, 0)] = -deriv_y(phi, i, j);
                d[u.index(i, j, 1)] = deriv_x(phi, i, j);
            }
    return u;
}

/// Velocity reconstruction u = ∇⊥φ with φ = J1 + J2: J1 is the harmonic
/// extension of the boundary stream samples (Δ_h J1 ≈ 0) and J2 = -P
/// vanishes on the rim with Δ_h J2 = ω, so Δ_h φ = ω = curl u as the stream
/// function of an incompressible field must.
struct StreamDecomposition {
    GridField2D harmonic_part;   ///< J1, boundary-driven
    GridField2D potential_part;  ///< J2 = -P, vanishes on the rim
    GridField2D stream;          ///< φ = J1 + J2
    GridField2D velocity;        ///< u = ∇⊥φ (2 components)
};

inline StreamDecomposition reconstruct_velocity(const DiskGreen& g, const GridField2D& omega,
                                                const std::vector<double>& boundary_stream) {
    GridField2D P = poisson_solve_disk(g, omega);
    GridField2D J1 = boundary_term(g, boundary_stream, omega.spec());
    GridField2D J2(P.spec(), 1, P.mask_radius());
    GridField2D phi(P.spec(), 1, P.mask_radius());
    for (int j = 0; j < P.ny(); ++j)
        for (int i = 0; i < P.nx(); ++i) {
            std::size_t k = P.index(i, j);
            J2.mutable_data()[k] = -P.data()[k];
            phi.mutable_data()[k] = J1.data()[k] - P.data()[k];
        }
    GridField2D u = stream_to_velocity(phi);
    return StreamDecomposition{std::move(J1), std::move(J2), std::move(phi), std::move(u)};
}

}  // namespace vmoser
