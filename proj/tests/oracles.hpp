#pragma once

// Independent oracles for the test suite: closed forms and high-resolution
// reference quadrature implemented separately from the library under test.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "vmoser/geometry.hpp"
#include "vmoser/grid_field.hpp"

namespace oracle {

inline constexpr double pi = 3.14159265358979323846;

// ---------------------------------------------------------------- vortices

/// Rankine patch omega0 * 1_{s<=a}: speed s*omega0/2 inside, a^2*omega0/(2s)
/// outside, for the mass convention u = (-x2, x1)/s^2 * \int_0^s t w(t) dt.
inline double rankine_speed(double omega0, double a, double s) {
    double m = s <= a ? 0.5 * omega0 * s * s : 0.5 * omega0 * a * a;
    return s == 0.0 ? 0.0 : m / s;
}

inline double lamb_oseen_omega(double gamma, double nu, double t, double s) {
    double k = 4.0 * nu * t;
    return gamma / (pi * k) * std::exp(-s * s / k);
}

inline double lamb_oseen_speed(double gamma, double nu, double t, double s) {
    if (s == 0.0) return 0.0;
    double k = 4.0 * nu * t;
    return gamma / (2.0 * pi * s) * (1.0 - std::exp(-s * s / k));
}

/// Reference values computed with 30-digit arithmetic (mpmath):
/// the mass integral m(r) = \int_0^r ds/ln(1/s) of the log-vorticity profile
/// equals -li(r) for r < 1.
inline constexpr double log_mass_half = 0.37867104306108797673;
inline constexpr double log_mass_quarter = 0.11866205644712310531;
inline constexpr double log_omega_quarter = 2.8853900817779268147;  // 4/ln 4
/// L2 norm of the log-example vorticity over the ball of radius 1/2:
/// closed form sqrt(2 pi / ln 2) via t = ln(1/s).
inline constexpr double log_l2_b_half = 3.0107673911570099273;
/// sup |u| of the log example: the speed m(r)/r increases on (0, 1/2], so
/// the sup is 2 m(1/2).
inline constexpr double log_speed_max = 0.75734208612217595346;

// ------------------------------------------------------------------- Riesz

/// Riesz potential of the disk indicator at its center, kernel |x-y|^{beta-2}
/// with unit front constant: 2 pi R^beta / beta.
inline double riesz_indicator_center(double beta, double R) {
    return 2.0 * pi * std::pow(R, beta) / beta;
}

// ------------------------------------------------------------- certificate

/// Tail sums of x^k k^k / k! from k = ceil(gamma^2), including the geometric
/// closure term; independently recomputed with the same summation rule.
inline constexpr double tail_g2_x01 = 1.4138243719729040e-3;
inline constexpr double tail_g3_x01 = 1.4398838776640320e-6;
inline constexpr double tail_g1_x036 = 4.1568804504204380;
inline constexpr double tail_g2_x02 = 3.3839352184367210e-2;

// ------------------------------------------------------------ field makers

/// Scalar field sampling fn at cell centers, with an optional disk mask.
inline vmoser::GridField2D scalar_field(const vmoser::GridSpec& g,
                                        const std::function<double(double, double)>& fn,
                                        double mask = 0.0) {
    std::vector<double> data(g.cell_count());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            vmoser::Vec2 c = g.cell_center(i, j);
            data[static_cast<std::size_t>(j) * g.nx + i] = fn(c.x, c.y);
        }
    return vmoser::GridField2D(g, 1, std::move(data), mask);
}

/// Two-component field sampling (fx, fy) at cell centers.
inline vmoser::GridField2D vector_field(const vmoser::GridSpec& g,
                                        const std::function<double(double, double)>& fx,
                                        const std::function<double(double, double)>& fy,
                                        double mask = 0.0) {
    std::vector<double> data(2 * g.cell_count());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            vmoser::Vec2 c = g.cell_center(i, j);
            std::size_t base = 2 * (static_cast<std::size_t>(j) * g.nx + i);
            data[base] = fx(c.x, c.y);
            data[base + 1] = fy(c.x, c.y);
        }
    return vmoser::GridField2D(g, 2, std::move(data), mask);
}

/// Constant-in-time space-time field from one slice.
inline vmoser::SpaceTimeField static_space_time(const vmoser::Cylinder& cyl,
                                                const vmoser::GridField2D& slice, int n_slices) {
    std::vector<double> times;
    std::vector<vmoser::GridField2D> slices;
    for (int k = 0; k < n_slices; ++k) {
        double s = n_slices == 1 ? 0.0 : static_cast<double>(k) / (n_slices - 1);
        times.push_back(cyl.t0 + s * (cyl.t1 - cyl.t0));
        slices.push_back(slice);
    }
    return vmoser::SpaceTimeField(cyl, std::move(times), std::move(slices));
}

}  // namespace oracle
