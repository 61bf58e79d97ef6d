#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "vmoser/grid_field.hpp"
#include "vmoser/norms.hpp"
#include "vmoser/parallel.hpp"

namespace vmoser {

// ----------------------------------------------------------------------
// Planar Riesz potential I_beta f(x) = ∫ f(y) |x-y|^{beta-2} dy with unit
// front constant (d = 2, 0 < beta < 2), plus the sharp-exponent bookkeeping
// for the corresponding L^q -> L^s bound.
// ----------------------------------------------------------------------

namespace detail {

/// Compacted nonzero sources of a scalar field paired with the
/// desingularized |x-y|^{beta-2} kernel.
///
/// Every target accumulates the sources in one fixed order (the two ranges
/// around its own cell), so results do not depend on how targets are split
/// across threads. A target that is itself a source replaces the singular
/// self pairing by the exact average of |z|^{beta-2} over the equal-area
/// disk rho = sqrt(w/pi), which is (2/beta) rho^{beta-2}; rim cells use
/// their clipped overlap weight for w, keeping the rule exact there too.
struct RieszKernel {
    double beta;
    double expo;                 // (beta-2)/2, exponent on the squared distance
    std::vector<double> sx, sy;  // source cell centers
    std::vector<double> qw;      // value * quadrature weight
    std::vector<double> diag;    // analytic self contribution
    std::vector<int> self_of;    // cell -> source index, -1 if the cell is silent

    RieszKernel(const GridField2D& f, double beta_)
        : beta(beta_), expo(0.5 * (beta_ - 2.0)) {
        const GridSpec& g = f.spec();
        self_of.assign(g.cell_count(), -1);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double w = f.weight(i, j);
                if (w <= 0.0) continue;
                double val = f.value(i, j);
                if (val == 0.0) continue;
                Vec2 c = g.cell_center(i, j);
                self_of[static_cast<std::size_t>(j) * g.nx + i] =
                    static_cast<int>(sx.size());
                sx.push_back(c.x);
                sy.push_back(c.y);
                qw.push_back(val * w);
                double rho = std::sqrt(w / pi);
                diag.push_back(val * w * (2.0 / beta) * std::pow(rho, beta - 2.0));
            }
    }

    std::size_t size() const { return sx.size(); }

    double eval(double tx, double ty, int self) const {
        auto run = [&](std::size_t lo, std::size_t hi) {
            double a = 0.0;
            if (beta == 1.0) {
                for (std::size_t m = lo; m < hi; ++m) {
                    double dx = tx - sx[m], dy = ty - sy[m];
                    a += qw[m] / std::sqrt(dx * dx + dy * dy);
                }
            } else {
                for (std::size_t m = lo; m < hi; ++m) {
                    double dx = tx - sx[m], dy = ty - sy[m];
                    a += qw[m] * std::pow(dx * dx + dy * dy, expo);
                }
            }
            return a;
        };
        if (self < 0) return run(0, sx.size());
        std::size_t s = static_cast<std::size_t>(self);
        return run(0, s) + run(s + 1, sx.size()) + diag[s];
    }
};

}  // namespace detail

/// Target integrability exponent s = d q / (d - beta q) of the potential of
/// an L^q source. Requires 1 < q < d/beta; at or above d/beta the bound has
/// no finite target exponent.
inline double hls_exponent(int d, double beta, double q) {
    if (d < 1) throw std::invalid_argument("hls_exponent: dimension must be at least 1");
    double dd = static_cast<double>(d);
    if (!(beta > 0.0) || !(beta < dd))
        throw std::invalid_argument("hls_exponent: order must lie in (0, d)");
    if (!(q > 1.0))
        throw std::invalid_argument("hls_exponent: source exponent must exceed 1");
    if (!(q < dd / beta))
        throw std::invalid_argument("hls_exponent: supercritical source exponent (q >= d/beta)");
    return dd * q / (dd - beta * q);
}

/// I_beta f on the whole window. The input must be scalar and carry a
/// compact-support mask; the output is unmasked (the potential of a
/// compactly supported density lives everywhere).
inline GridField2D riesz_potential(const GridField2D& f, double beta) {
    if (f.components() != 1)
        throw std::invalid_argument("riesz_potential: field must be scalar");
    if (!(beta > 0.0) || !(beta < 2.0))
        throw std::invalid_argument("riesz_potential: order must lie in (0, 2)");
    if (!f.masked())
        throw std::invalid_argument("riesz_potential: field must carry a compact-support mask");
    const GridSpec& g = f.spec();
    detail::RieszKernel K(f, beta);
    GridField2D out(g, 1);
    std::vector<double>& P = out.mutable_data();
    const int nx = g.nx;
    parallel_for(g.cell_count(), [&](std::size_t idx) {
        int i = static_cast<int>(idx % nx);
        int j = static_cast<int>(idx / nx);
        Vec2 c = g.cell_center(i, j);
        P[idx] = K.eval(c.x, c.y, K.self_of[idx]);
    });
    return out;
}

/// Calibrated front constant for `constant_bound` below: the measured
/// worst ratio/growth quotient over the indicator family (beta in
/// {1/2, 1, 3/2}, q swept across the admissible range with s capped at
/// 120, 192^2 window at three mask radii — the quotient is exactly
/// dilation-invariant) plus 5% headroom. The peak is 4.6224 at beta = 1/2,
/// q = 1.45. Frozen; tests assert the growth shape against it, not the
/// other way around.
inline constexpr double hls_calibration_constant = 4.86;

struct HlsReport {
    double beta = 0.0;
    double q = 0.0;
    double s = 0.0;              // hls_exponent(2, beta, q)
    double lhs = 0.0;            // ||I_beta f||_{L^s}, whole window
    double rhs = 0.0;            // ||f||_{L^q}
    double ratio = 0.0;          // lhs / rhs
    double constant_bound = 0.0; // calibrated C(beta, q)
    bool within_bound = false;
};

/// Measured ||I_beta f||_s / ||f||_q against the calibrated constant
/// C_cal * max{ (q-1)^{-(1-beta/2)}, s^{1-beta/2} }, which carries the
/// sharp blow-up rates at both endpoints of the admissible q range.
/// The window must leave at least a 3x margin around the support so the
/// truncated far tail of the L^s integral is negligible.
inline HlsReport hls_ratio(const GridField2D& f, double beta, double q) {
    if (f.components() != 1)
        throw std::invalid_argument("hls_ratio: field must be scalar");
    if (!f.masked())
        throw std::invalid_argument("hls_ratio: field must carry a compact-support mask");
    double need = 3.0 * f.mask_radius() * (1.0 - 1e-12);
    if (f.spec().half_width_x() < need || f.spec().half_width_y() < need)
        throw std::invalid_argument(
            "hls_ratio: window too small; need half-width at least three times the mask radius");

    HlsReport rep;
    rep.beta = beta;
    rep.q = q;
    rep.s = hls_exponent(2, beta, q);
    rep.rhs = lq_norm(f, q).value;
    if (rep.rhs == 0.0) throw std::invalid_argument("hls_ratio: field is identically zero");
    GridField2D I = riesz_potential(f, beta);
    rep.lhs = lq_norm(I, rep.s).value;
    rep.ratio = rep.lhs / rep.rhs;
    double e = 1.0 - 0.5 * beta;
    rep.constant_bound =
        hls_calibration_constant * std::max(std::pow(q - 1.0, -e), std::pow(rep.s, e));
    rep.within_bound = rep.ratio <= rep.constant_bound;
    return rep;
}

}  // namespace vmoser
