#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vmoser/cutoff.hpp"
#include "vmoser/grid_field.hpp"
#include "vmoser/parallel.hpp"

namespace vmoser {

enum class TimeMode { instant, integrated, ess_sup };

struct NormReport {
    double q = 0.0;               // +inf for the sup norm
    double value = 0.0;
    bool averaged = false;
    TimeMode time_mode = TimeMode::instant;
    std::string region;
};

struct ExpIntegralResult {
    double value = 0.0;
    bool saturated = false;
};

inline constexpr double exp_integral_cap = 1e300;

namespace detail {

/// Per-cell quadrature weights over a concentric disk region; f is zero
/// outside its mask, so the effective radius is min(region, mask).
/// Throws if the region pokes out of the window or hits no cells.
struct RegionWeights {
    std::vector<double> w;   // one entry per cell, 0 outside the region
    double measure = 0.0;    // analytic measure used for averaging

    RegionWeights(const GridField2D& f, std::optional<double> region_radius) {
        const GridSpec& g = f.spec();
        double half = std::min(g.half_width_x(), g.half_width_y());
        double region = 0.0;
        if (region_radius) {
            if (!(*region_radius > 0.0)) throw std::invalid_argument("degenerate region");
            region = *region_radius;
        } else if (f.masked()) {
            region = f.mask_radius();
        }
        if (region > 0.0 && region > half + 1e-12)
            throw std::invalid_argument("data coverage insufficient for the requested region");

        w.resize(g.cell_count());
        double total = 0.0;
        if (region == 0.0) {
            double cw = g.h * g.h;
            for (auto& v : w) v = cw;
            total = cw * static_cast<double>(g.cell_count());
            measure = total;
        } else {
            double eff = f.masked() ? std::min(region, f.mask_radius()) : region;
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    Vec2 c = g.cell_center(i, j);
                    double a = disk_rect_overlap(c.x - 0.5 * g.h, c.x + 0.5 * g.h,
                                                 c.y - 0.5 * g.h, c.y + 0.5 * g.h, g.origin, eff);
                    w[static_cast<std::size_t>(j) * g.nx + i] = a;
                    total += a;
                }
            measure = pi * region * region;
        }
        if (!(total > 0.0)) throw std::invalid_argument("degenerate region");
    }
};

/// Collects w * |f|^q for every region cell into a buffer and reduces with a
/// fixed pairwise tree; skips zero-weight cells so enlarging the window
/// around a fixed mask does not change the addend sequence.
template <class PerCell>
double integrate_cells(const GridField2D& f, const RegionWeights& rw, PerCell&& term) {
    std::vector<double> buf;
    buf.reserve(rw.w.size());
    for (int j = 0; j < f.ny(); ++j)
        for (int i = 0; i < f.nx(); ++i) {
            double w = rw.w[static_cast<std::size_t>(j) * f.nx() + i];
            if (w == 0.0) continue;
            buf.push_back(w * term(i, j));
        }
    return pairwise_sum(buf);
}

inline void check_exponent(double q) {
    if (!(q > 0.0)) throw std::invalid_argument("norm exponent must be positive");
}

inline std::string region_label(const GridField2D& f, std::optional<double> region_radius) {
    if (region_radius) return "disk r=" + std::to_string(*region_radius);
    if (f.masked()) return "disk r=" + std::to_string(f.mask_radius());
    return "window";
}

}  // namespace detail

// ----------------------------------------------------------------------
// Spatial L^q norm over a concentric disk region (default: the mask disk,
// else the whole window). `averaged` divides the integral by the analytic
// region measure before taking the q-th root. q = +inf gives the sample
// sup over the region.
// ----------------------------------------------------------------------
inline NormReport lq_norm(const GridField2D& f, double q, bool averaged = false,
                          std::optional<double> region_radius = std::nullopt) {
    detail::RegionWeights rw(f, region_radius);
    NormReport rep{q, 0.0, averaged, TimeMode::instant, detail::region_label(f, region_radius)};
    if (std::isinf(q)) {
        if (averaged) throw std::invalid_argument("sup norm cannot be averaged");
        double m = 0.0;
        for (int j = 0; j < f.ny(); ++j)
            for (int i = 0; i < f.nx(); ++i)
                if (rw.w[static_cast<std::size_t>(j) * f.nx() + i] > 0.0)
                    m = std::max(m, f.magnitude(i, j));
        rep.value = m;
        return rep;
    }
    detail::check_exponent(q);
    double integral = detail::integrate_cells(f, rw, [&](int i, int j) {
        return std::pow(f.magnitude(i, j), q);
    });
    if (averaged) integral /= rw.measure;
    rep.value = std::pow(integral, 1.0 / q);
    return rep;
}

// ----------------------------------------------------------------------
// Space-time L^q norm over a cylinder (default: the field's own). Slice
// integrals are combined with nearest-slice time weights clamped to the
// cylinder interval.
// ----------------------------------------------------------------------
inline NormReport lq_norm(const SpaceTimeField& F, double q, bool averaged = false,
                          std::optional<Cylinder> region = std::nullopt) {
    const Cylinder& cyl = region ? *region : F.cylinder();
    const GridField2D& proto = F.first();
    double scale = std::max(1.0, cyl.radius);
    if (std::abs(cyl.center.x - proto.spec().origin.x) > 1e-12 * scale ||
        std::abs(cyl.center.y - proto.spec().origin.y) > 1e-12 * scale)
        throw std::invalid_argument("region cylinder must be concentric with the data");
    auto sel = F.slices_in(cyl.t0, cyl.t1);
    if (sel.empty()) throw std::invalid_argument("data coverage insufficient: no slices in the interval");

    NormReport rep{q, 0.0, averaged, TimeMode::integrated,
                   "cylinder r=" + std::to_string(cyl.radius)};
    detail::RegionWeights rw(proto, cyl.radius);
    if (std::isinf(q)) {
        if (averaged) throw std::invalid_argument("sup norm cannot be averaged");
        double m = 0.0;
        for (std::size_t s : sel) {
            const GridField2D& f = F.slice(s);
            for (int j = 0; j < f.ny(); ++j)
                for (int i = 0; i < f.nx(); ++i)
                    if (rw.w[static_cast<std::size_t>(j) * f.nx() + i] > 0.0)
                        m = std::max(m, f.magnitude(i, j));
        }
        rep.value = m;
        return rep;
    }
    detail::check_exponent(q);
    auto tw = F.time_weights(sel, cyl.t0, cyl.t1);
    std::vector<double> per_slice(sel.size());
    for (std::size_t m = 0; m < sel.size(); ++m) {
        const GridField2D& f = F.slice(sel[m]);
        per_slice[m] = tw[m] * detail::integrate_cells(f, rw, [&](int i, int j) {
            return std::pow(f.magnitude(i, j), q);
        });
    }
    double integral = pairwise_sum(per_slice);
    if (averaged) integral /= rw.measure * cyl.duration();
    rep.value = std::pow(integral, 1.0 / q);
    return rep;
}

// ----------------------------------------------------------------------
// ess sup over time of the spatial integral ∫ |f|^q ζ dx (the integral,
// not its q-th root). The sup runs over stored slices inside the region
// interval; ζ defaults to 1.
// ----------------------------------------------------------------------
inline NormReport esssup_time_norm(const SpaceTimeField& F, double q,
                                   const CutoffSpec* weight = nullptr,
                                   std::optional<Cylinder> region = std::nullopt,
                                   bool averaged = false) {
    detail::check_exponent(q);
    if (std::isinf(q)) throw std::invalid_argument("ess-sup integrand needs a finite exponent");
    double t_lo = region ? region->t0 : F.cylinder().t0;
    double t_hi = region ? region->t1 : F.cylinder().t1;
    auto sel = F.slices_in(t_lo, t_hi);
    if (sel.empty()) throw std::invalid_argument("data coverage insufficient: no slices in the interval");
    std::optional<double> rr;
    if (region) rr = region->radius;
    detail::RegionWeights rw(F.first(), rr);

    double best = 0.0;
    for (std::size_t s : sel) {
        const GridField2D& f = F.slice(s);
        double t = F.time(s);
        double v = detail::integrate_cells(f, rw, [&](int i, int j) {
            double term = std::pow(f.magnitude(i, j), q);
            if (weight) term *= (*weight)(f.cell_center(i, j), t);
            return term;
        });
        if (averaged) v /= rw.measure;
        best = std::max(best, v);
    }
    return NormReport{q, best, averaged, TimeMode::ess_sup,
                      rr ? "disk r=" + std::to_string(*rr) : detail::region_label(F.first(), std::nullopt)};
}

// ----------------------------------------------------------------------
// ∫ exp(|f|^{1/gamma}) over a concentric disk region, saturating at 1e300.
// ----------------------------------------------------------------------
inline ExpIntegralResult exp_integral(const GridField2D& f, double gamma, bool averaged = false,
                                      std::optional<double> region_radius = std::nullopt) {
    if (!(gamma > 0.0)) throw std::invalid_argument("exp integral needs gamma > 0");
    detail::RegionWeights rw(f, region_radius);
    ExpIntegralResult out;
    double integral = detail::integrate_cells(f, rw, [&](int i, int j) {
        double arg = std::pow(f.magnitude(i, j), 1.0 / gamma);
        if (arg > 690.0) {
            out.saturated = true;
            return exp_integral_cap;
        }
        return std::exp(arg);
    });
    if (averaged) integral /= rw.measure;
    if (!(integral < exp_integral_cap)) {
        out.saturated = true;
        integral = exp_integral_cap;
    }
    out.value = integral;
    return out;
}

}  // namespace vmoser
