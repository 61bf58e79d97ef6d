#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vmoser/biot_savart.hpp"
#include "vmoser/cutoff.hpp"
#include "vmoser/fd.hpp"
#include "vmoser/grid_field.hpp"
#include "vmoser/norms.hpp"
#include "vmoser/vmf_io.hpp"

namespace vmoser {

// ----------------------------------------------------------------------
// The iteration machinery: vorticity-estimate (VE) checking, the paired
// step-1/step-2 reverse estimates, the exponent ledger q_k = 2^k eps + 2
// on shrinking cylinders, and the exponential-integrability certificate
// exp(|u|^{1/gamma}) with gamma = C1 * c0 * Lambda0.
// ----------------------------------------------------------------------

// ======================================================================
// VE inequality:  ess sup_t ∫ |w|^{1+a} zeta dx
//                   <= V0 ∫∫ |w|^{1+a} [ |u| |grad zeta| + |dt zeta| ] dmu.
// The Navier-Stokes variant (nsve) uses zeta^2 weights on the left, adds
// the dissipation term ∫∫ |grad |w|^{(1+a)/2}|^2 zeta^2 dmu there, and
// takes the positive part of dt zeta on the right.
// ======================================================================
struct VeReport {
    double alpha = 0.0;
    bool nsve = false;
    double lhs = 0.0;           // esssup term (+ gradient term when nsve)
    double lhs_esssup = 0.0;
    double lhs_gradient = 0.0;  // 0 unless nsve
    double rhs_transport = 0.0; // ∫∫ |w|^{1+a} |u| |grad zeta|
    double rhs_time = 0.0;      // ∫∫ |w|^{1+a} |dt zeta|  (positive part when nsve)
    double fitted_V0 = 0.0;     // lhs / rhs; +inf when rhs = 0 < lhs
};

inline VeReport ve_check(const SpaceTimeField& u, const SpaceTimeField& omega,
                         const CutoffSpec& cutoff, double alpha, bool nsve = false) {
    if (!(alpha >= 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("ve_check: alpha must lie in [0, 1)");
    if (u.first().components() != 2 || omega.first().components() != 1)
        throw std::invalid_argument("ve_check: needs a velocity/vorticity pair");
    if (u.slice_count() != omega.slice_count())
        throw std::invalid_argument("ve_check: velocity and vorticity must share the time axis");
    for (std::size_t s = 0; s < u.slice_count(); ++s)
        if (u.time(s) != omega.time(s))
            throw std::invalid_argument("ve_check: velocity and vorticity must share the time axis");
    if (!u.first().same_geometry(omega.first()))
        throw std::invalid_argument("ve_check: velocity and vorticity must share one grid");
    const Cylinder& outer = cutoff.outer();
    detail::require_cylinder_coverage(u, outer, "ve_check");
    detail::require_cylinder_coverage(omega, outer, "ve_check");

    auto sel = omega.slices_in(outer.t0, outer.t1);
    if (sel.empty())
        throw std::invalid_argument("ve_check: data coverage insufficient (no slices in the interval)");
    auto tw = omega.time_weights(sel, outer.t0, outer.t1);
    detail::RegionWeights rw(omega.first(), outer.radius);

    VeReport rep;
    rep.alpha = alpha;
    rep.nsve = nsve;
    const double p = 1.0 + alpha;

    std::vector<double> transport(sel.size()), timeterm(sel.size()), gradterm(sel.size());
    for (std::size_t m = 0; m < sel.size(); ++m) {
        const GridField2D& ws = omega.slice(sel[m]);
        const GridField2D& us = u.slice(sel[m]);
        double t = omega.time(sel[m]);

        double sup_term = detail::integrate_cells(ws, rw, [&](int i, int j) {
            double z = cutoff(ws.cell_center(i, j), t);
            double zw = nsve ? z * z : z;
            return std::pow(ws.magnitude(i, j), p) * zw;
        });
        rep.lhs_esssup = std::max(rep.lhs_esssup, sup_term);

        transport[m] = tw[m] * detail::integrate_cells(ws, rw, [&](int i, int j) {
            Vec2 x = ws.cell_center(i, j);
            return std::pow(ws.magnitude(i, j), p) * us.magnitude(i, j) * cutoff.grad_magnitude(x, t);
        });
        timeterm[m] = tw[m] * detail::integrate_cells(ws, rw, [&](int i, int j) {
            // dt zeta >= 0 by construction, so |dt zeta| and its positive
            // part coincide; both variants read the same number.
            return std::pow(ws.magnitude(i, j), p) * cutoff.dt_value(ws.cell_center(i, j), t);
        });

        if (nsve) {
            GridField2D W(ws.spec(), 1, ws.mask_radius());
            std::vector<double>& wd = W.mutable_data();
            for (int j = 0; j < ws.ny(); ++j)
                for (int i = 0; i < ws.nx(); ++i)
                    if (ws.inside_mask(i, j))
                        wd[W.index(i, j)] = std::pow(ws.magnitude(i, j), 0.5 * p);
            gradterm[m] = tw[m] * detail::integrate_cells(ws, rw, [&](int i, int j) {
                double gx = deriv_x(W, i, j), gy = deriv_y(W, i, j);
                double z = cutoff(ws.cell_center(i, j), t);
                return (gx * gx + gy * gy) * z * z;
            });
        }
    }
    rep.rhs_transport = pairwise_sum(transport);
    rep.rhs_time = pairwise_sum(timeterm);
    rep.lhs_gradient = nsve ? pairwise_sum(gradterm) : 0.0;
    rep.lhs = rep.lhs_esssup + rep.lhs_gradient;

    double rhs = rep.rhs_transport + rep.rhs_time;
    if (rep.lhs == 0.0)
        rep.fitted_V0 = 0.0;
    else if (rhs == 0.0)
        rep.fitted_V0 = std::numeric_limits<double>::infinity();
    else
        rep.fitted_V0 = rep.lhs / rhs;
    return rep;
}

// ======================================================================
// Step 1 (vorticity reverse estimate): both sides of
//   ess sup_{I_{k+1}} avg∫_{B_{k+1}} |w|^{2(1-1/q)} dx
//     <= 2^{j-k} C [ (avg∫∫_{Q_k}|w|^2)^{1-1/q}
//                    + (avg∫∫_{Q_k}|u|^q)^{1/q} (avg∫∫_{Q_k}|w|^2)^{1-1/q} ],
// with the C-slot fixed at 1 so callers can fit it.
// ======================================================================
struct Step1Report {
    double lhs = 0.0;
    double rhs = 0.0;
    double exponent = 0.0;  // 2(1 - 1/q)
};

inline Step1Report step1_omega_bound(const SpaceTimeField& u, const SpaceTimeField& omega,
                                     const Cylinder& Qk, const Cylinder& Qk1, double q,
                                     int j_minus_k) {
    if (!(q > 2.0)) throw std::invalid_argument("step1_omega_bound: q must exceed 2");
    if (u.first().components() != 2 || omega.first().components() != 1)
        throw std::invalid_argument("step1_omega_bound: needs a velocity/vorticity pair");
    detail::require_cylinder_coverage(u, Qk, "step1_omega_bound");
    detail::require_cylinder_coverage(omega, Qk, "step1_omega_bound");
    detail::require_cylinder_coverage(omega, Qk1, "step1_omega_bound");

    Step1Report rep;
    rep.exponent = 2.0 * (1.0 - 1.0 / q);
    double w2 = std::pow(lq_norm(omega, 2.0, true, Qk).value, 2.0);
    double uq = lq_norm(u, q, true, Qk).value;  // (avg∫∫|u|^q)^{1/q}
    double wpow = std::pow(w2, 1.0 - 1.0 / q);
    rep.rhs = std::pow(2.0, j_minus_k) * (wpow + uq * wpow);
    rep.lhs = esssup_time_norm(omega, rep.exponent, nullptr, Qk1, true).value;
    return rep;
}

// ======================================================================
// Step 2 (velocity reverse estimate), rhs only, C-slot = 1:
//   ||u||_{L^{2(q-1)}(Q_{next}),avg}
//     <= 8^{j-k} sqrt(q) [ r ||w||_{L^2(Q_0),avg} (1 + ||u||_{L^q(Q_k),avg})^{q/(2(q-1))}
//                          + Lambda_0 ].
// ======================================================================
inline double step2_next_exponent(double q) { return 2.0 * (q - 1.0); }

inline double step2_u_bound(double omega_l2_avg_Q0, double u_lq_avg_Qk, double lambda0, double q,
                            double r, int j_minus_k) {
    if (!(q > 2.0)) throw std::invalid_argument("step2_u_bound: q must exceed 2");
    double grow = std::pow(1.0 + u_lq_avg_Qk, q / (2.0 * (q - 1.0)));
    return std::pow(8.0, j_minus_k) * std::sqrt(q) *
           (r * omega_l2_avg_Q0 * grow + lambda0);
}

// ======================================================================
// The iteration ledger. Row k lives on the even-indexed cylinder of the
// depth-2j radius family rho_m = (2 - 2^{m-2j}) r_base, m = 0..2j (the
// iteration consumes two nested cylinders per step, so the recorded rows
// jump m = 2k); the step-1 vorticity norm between rows k and k+1 is
// measured on the odd cylinder m = 2k+1. All cylinders are anchored at
// Q0's top time face and inherit its scaling kind. r_base = Q0.radius/2.
// ======================================================================
struct LedgerRow {
    int k = 0;
    double r_k = 0.0;             // radius of the row cylinder (m = 2k)
    double q_k = 0.0;             // 2^k eps + 2
    double u_norm = 0.0;          // ||u||_{L^{q_k}(Q_k),avg}
    double omega_norm = 0.0;      // ess sup avg∫ |w|^{2(1-1/q_k)} on m = 2k+1 (0 for k = j)
    double fitted_constant = 0.0; // u_norm / step-2 prediction from row k-1 (0 for k = 0)
};

struct IterationLedger {
    double epsilon = 0.0;
    int j = 0;
    std::vector<LedgerRow> rows;  // k = 0..j
    double q_star = 0.0;          // sum_{k=1}^{j} q_k / q_j
    double c_hat = 0.0;           // sum_{k=1}^{j} k q_{j-k} / q_j
    double c0 = 0.0;              // 2 q* + 1
    double lambda0 = 0.0;         // Lambda_0(Q0), step2 variant
    double gamma = 0.0;           // c0 * lambda0  (C1 = 1 baseline)
    double fitted_final = 0.0;    // u_norm_j / (q_j^{q*/2} lambda0^{2 q*})
    double omega_l2_q0 = 0.0;     // ||w||_{L^2(Q0),avg}
    double r_base = 0.0;          // Q0.radius / 2
    Cylinder Q0{};
};

inline IterationLedger build_ledger(const SpaceTimeField& u, const SpaceTimeField& omega,
                                    const Cylinder& Q0, double epsilon, int j) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("build_ledger: epsilon must be positive");
    if (j < 1) throw std::invalid_argument("build_ledger: needs at least one step");
    if (u.first().components() != 2 || omega.first().components() != 1)
        throw std::invalid_argument("build_ledger: needs a velocity/vorticity pair");
    detail::require_cylinder_coverage(u, Q0, "build_ledger");
    detail::require_cylinder_coverage(omega, Q0, "build_ledger");

    IterationLedger led;
    led.epsilon = epsilon;
    led.j = j;
    led.Q0 = Q0;
    led.r_base = 0.5 * Q0.radius;
    led.lambda0 = lambda_quantity(u, omega, Q0, epsilon, LambdaVariant::step2).value;
    led.omega_l2_q0 = lq_norm(omega, 2.0, true, Q0).value;

    auto family = [&](int m) {
        double rho = (2.0 - std::exp2(static_cast<double>(m - 2 * j))) * led.r_base;
        Cylinder c{Q0.center, rho, Q0.t1 - Cylinder::interval_length(Q0.scaling, rho), Q0.t1,
                   Q0.scaling};
        c.validate();
        return c;
    };

    auto q_of = [&](int k) { return std::exp2(static_cast<double>(k)) * epsilon + 2.0; };

    for (int k = 0; k <= j; ++k) {
        LedgerRow row;
        row.k = k;
        row.q_k = q_of(k);
        Cylinder Qk = family(2 * k);
        row.r_k = Qk.radius;
        detail::require_cylinder_coverage(u, Qk, "build_ledger");
        row.u_norm = lq_norm(u, row.q_k, true, Qk).value;
        if (k < j) {
            Cylinder Bmid = family(2 * k + 1);
            detail::require_cylinder_coverage(omega, Bmid, "build_ledger");
            row.omega_norm =
                esssup_time_norm(omega, 2.0 * (1.0 - 1.0 / row.q_k), nullptr, Bmid, true).value;
        }
        if (k >= 1) {
            const LedgerRow& prev = led.rows.back();
            double pred = step2_u_bound(led.omega_l2_q0, prev.u_norm, led.lambda0, prev.q_k,
                                        led.r_base, j - (k - 1));
            row.fitted_constant = row.u_norm / pred;
        }
        led.rows.push_back(row);
    }

    double qj = q_of(j);
    double qsum = 0.0, csum = 0.0;
    for (int k = 1; k <= j; ++k) {
        qsum += q_of(k);
        csum += static_cast<double>(k) * q_of(j - k);
    }
    led.q_star = qsum / qj;
    led.c_hat = csum / qj;
    led.c0 = 2.0 * led.q_star + 1.0;
    led.gamma = led.c0 * led.lambda0;
    led.fitted_final = led.rows.back().u_norm /
                       (std::pow(qj, 0.5 * led.q_star) * std::pow(led.lambda0, 2.0 * led.q_star));
    return led;
}

inline std::string ledger_csv(const IterationLedger& led) {
    std::ostringstream out;
    out << "k,r_k,q_k,u_norm,omega_norm,fitted_constant\n";
    for (const auto& r : led.rows)
        out << r.k << ',' << fmt17(r.r_k) << ',' << fmt17(r.q_k) << ',' << fmt17(r.u_norm) << ','
            << fmt17(r.omega_norm) << ',' << fmt17(r.fitted_constant) << '\n';
    return out.str();
}

// ======================================================================
// Exponential-integrability certificate: gamma = C1 * c0 * Lambda_0 and
// per-slice averaged ∫ e^{|u|^{1/gamma}} over the ball B_{r_base/2},
// cross-checked against a 2x2-coarsened recomputation (one resolution
// halving) for stability.
// ======================================================================
enum class CertVerdict { certified, failed_at_resolution };

struct ExpCertificate {
    double gamma = 0.0;
    double lambda0 = 0.0;
    double c0 = 0.0;
    double C1 = 0.0;
    double region_radius = 0.0;
    std::vector<double> times;
    std::vector<double> slice_values;   // averaged exp-integrals per slice
    std::vector<double> coarse_values;  // same at halved resolution
    double slice_max = 0.0;
    double coarse_max = 0.0;
    bool saturated = false;
    bool stable = false;                // |slice_max - coarse_max| <= 5% slice_max
    CertVerdict verdict = CertVerdict::failed_at_resolution;
};

namespace detail {

/// 2x2 block average onto a grid with doubled spacing; exact cell-center
/// alignment requires even extents.
inline GridField2D coarsen_half(const GridField2D& f) {
    const GridSpec& g = f.spec();
    if (g.nx % 2 != 0 || g.ny % 2 != 0)
        throw std::invalid_argument("coarsen_half: grid extents must be even");
    GridSpec cg{g.origin, 2.0 * g.h, g.nx / 2, g.ny / 2};
    GridField2D out(cg, f.components(), f.mask_radius());
    std::vector<double>& d = out.mutable_data();
    for (int j = 0; j < cg.ny; ++j)
        for (int i = 0; i < cg.nx; ++i)
            for (int c = 0; c < f.components(); ++c) {
                double v = f.value(2 * i, 2 * j, c) + f.value(2 * i + 1, 2 * j, c) +
                           f.value(2 * i, 2 * j + 1, c) + f.value(2 * i + 1, 2 * j + 1, c);
                d[out.index(i, j, c)] = 0.25 * v;
            }
    return out;
}

}  // namespace detail

inline ExpCertificate certify_exp(const SpaceTimeField& u, const IterationLedger& ledger,
                                  double C1 = 1.0) {
    if (!(C1 > 0.0)) throw std::invalid_argument("certify_exp: C1 must be positive");
    if (u.first().components() != 2)
        throw std::invalid_argument("certify_exp: needs a velocity field");

    ExpCertificate cert;
    cert.C1 = C1;
    cert.lambda0 = ledger.lambda0;
    cert.c0 = ledger.c0;
    cert.gamma = C1 * ledger.c0 * ledger.lambda0;
    cert.region_radius = 0.5 * ledger.r_base;

    const Cylinder& Q0 = ledger.Q0;
    Cylinder half{Q0.center, cert.region_radius,
                  Q0.t1 - Cylinder::interval_length(Q0.scaling, cert.region_radius), Q0.t1,
                  Q0.scaling};
    detail::require_cylinder_coverage(u, half, "certify_exp");
    auto sel = u.slices_in(half.t0, half.t1);
    if (sel.empty())
        throw std::invalid_argument("certify_exp: data coverage insufficient (no slices in the interval)");

    for (std::size_t s : sel) {
        const GridField2D& us = u.slice(s);
        ExpIntegralResult fine = exp_integral(us, cert.gamma, true, cert.region_radius);
        ExpIntegralResult coarse =
            exp_integral(detail::coarsen_half(us), cert.gamma, true, cert.region_radius);
        cert.times.push_back(u.time(s));
        cert.slice_values.push_back(fine.value);
        cert.coarse_values.push_back(coarse.value);
        cert.saturated = cert.saturated || fine.saturated || coarse.saturated;
        cert.slice_max = std::max(cert.slice_max, fine.value);
        cert.coarse_max = std::max(cert.coarse_max, coarse.value);
    }
    cert.stable = std::abs(cert.slice_max - cert.coarse_max) <= 0.05 * cert.slice_max;
    cert.verdict = (!cert.saturated && cert.stable) ? CertVerdict::certified
                                                    : CertVerdict::failed_at_resolution;
    return cert;
}

inline std::string certificate_report(const ExpCertificate& cert) {
    std::ostringstream out;
    out << "exponential integrability certificate\n";
    out << "gamma = " << fmt17(cert.gamma) << "  (C1 = " << fmt17(cert.C1)
        << ", c0 = " << fmt17(cert.c0) << ", lambda0 = " << fmt17(cert.lambda0) << ")\n";
    out << "region: ball r = " << fmt17(cert.region_radius) << "\n";
    for (std::size_t i = 0; i < cert.times.size(); ++i)
        out << "t = " << fmt17(cert.times[i]) << "  exp_integral = " << fmt17(cert.slice_values[i])
            << "  halved = " << fmt17(cert.coarse_values[i]) << "\n";
    out << "slice max = " << fmt17(cert.slice_max) << "  halved max = " << fmt17(cert.coarse_max)
        << "\n";
    out << "verdict: "
        << (cert.verdict == CertVerdict::certified ? "certified" : "failed-at-resolution");
    if (cert.saturated) out << " (saturated)";
    out << "\n";
    return out.str();
}

// ======================================================================
// Tail of the certificate series: sum_{k = ceil(gamma^2)}^{K} x^k k^k / k!
// with x = C/C1, summed in log space until the next term drops below
// 1e-15, then closed with the exact geometric majorant (the term ratio is
// x (1+1/k)^k <= x e < 1). The sum is NOT always <= 1 on x < 1/e (small
// gamma near the boundary exceeds it), so the flag reports it instead of
// asserting.
// ======================================================================
struct TailBound {
    double value = 0.0;
    bool le_one = false;
};

inline TailBound series_tail_bound(double gamma, double c_over_c1) {
    if (!(gamma >= 1.0)) throw std::invalid_argument("series_tail_bound: gamma must be at least 1");
    constexpr double inv_e = 1.0 / std::numbers::e;
    if (!(c_over_c1 > 0.0) || c_over_c1 >= inv_e)
        throw std::invalid_argument("series_tail_bound: tail not summable (C/C1 must lie in (0, 1/e))");

    const double lx = std::log(c_over_c1);
    const double ratio_cap = c_over_c1 * std::numbers::e;  // term ratio x(1+1/k)^k <= xe
    if (!(ratio_cap < 1.0))
        throw std::invalid_argument("series_tail_bound: tail not summable (C/C1 must lie in (0, 1/e))");

    double k = std::ceil(gamma * gamma);
    const double k_cap = k + 500000.0;
    double sum = 0.0;
    double term = 0.0;
    for (;;) {
        term = std::exp(k * lx + k * std::log(k) - std::lgamma(k + 1.0));
        if (term < 1e-15 || k >= k_cap) break;
        sum += term;
        k += 1.0;
    }
    // All discarded terms are dominated by the geometric series starting at
    // the current one, so this closes the sum from above.
    sum += term / (1.0 - ratio_cap);
    return {sum, sum <= 1.0};
}

}  // namespace vmoser
