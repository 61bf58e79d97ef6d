#pragma once

#include "vmoser/grid_field.hpp"

namespace vmoser {

// Central differences on the cell-center lattice. A cell participates only
// if it lies inside the mask; stencils degrade to one-sided (2nd order, then
// 1st) instead of reaching across the mask rim or the window edge.

namespace detail {

struct StencilField {
    const GridField2D& f;
    int c;

    bool ok(int i, int j) const {
        return i >= 0 && j >= 0 && i < f.nx() && j < f.ny() && f.inside_mask(i, j);
    }
    double at(int i, int j) const { return f.value(i, j, c); }

    /// d/dx along (di, dj) with automatic stencil degradation.
    double deriv(int i, int j, int di, int dj) const {
        bool fwd = ok(i + di, j + dj), bwd = ok(i - di, j - dj);
        double inv_h = 1.0 / f.h();
        if (fwd && bwd) return 0.5 * inv_h * (at(i + di, j + dj) - at(i - di, j - dj));
        if (fwd) {
            if (ok(i + 2 * di, j + 2 * dj))
                return 0.5 * inv_h *
                       (-3.0 * at(i, j) + 4.0 * at(i + di, j + dj) - at(i + 2 * di, j + 2 * dj));
            return inv_h * (at(i + di, j + dj) - at(i, j));
        }
        if (bwd) {
            if (ok(i - 2 * di, j - 2 * dj))
                return 0.5 * inv_h *
                       (3.0 * at(i, j) - 4.0 * at(i - di, j - dj) + at(i - 2 * di, j - 2 * dj));
            return inv_h * (at(i, j) - at(i - di, j - dj));
        }
        return 0.0;
    }
};

}  // namespace detail

inline double deriv_x(const GridField2D& f, int i, int j, int c = 0) {
    return detail::StencilField{f, c}.deriv(i, j, 1, 0);
}

inline double deriv_y(const GridField2D& f, int i, int j, int c = 0) {
    return detail::StencilField{f, c}.deriv(i, j, 0, 1);
}

/// True when the full central 5-point stencil of (i, j) is usable.
inline bool central_stencil_ok(const GridField2D& f, int i, int j) {
    detail::StencilField s{f, 0};
    return s.ok(i, j) && s.ok(i - 1, j) && s.ok(i + 1, j) && s.ok(i, j - 1) && s.ok(i, j + 1);
}

/// Discrete divergence of a 2-vector field (0 outside the mask).
inline GridField2D divergence(const GridField2D& u) {
    GridField2D out(u.spec(), 1, u.mask_radius());
    for (int j = 0; j < u.ny(); ++j)
        for (int i = 0; i < u.nx(); ++i)
            if (u.inside_mask(i, j))
                out.mutable_data()[out.index(i, j)] = deriv_x(u, i, j, 0) + deriv_y(u, i, j, 1);
    return out;
}

/// Discrete curl ∂x u2 - ∂y u1.
inline GridField2D curl(const GridField2D& u) {
    GridField2D out(u.spec(), 1, u.mask_radius());
    for (int j = 0; j < u.ny(); ++j)
        for (int i = 0; i < u.nx(); ++i)
            if (u.inside_mask(i, j))
                out.mutable_data()[out.index(i, j)] = deriv_x(u, i, j, 1) - deriv_y(u, i, j, 0);
    return out;
}

/// 5-point Laplacian; defined where the full stencil is inside, else 0.
inline GridField2D apply_laplacian(const GridField2D& phi) {
    GridField2D out(phi.spec(), 1, phi.mask_radius());
    double inv_h2 = 1.0 / (phi.h() * phi.h());
    for (int j = 0; j < phi.ny(); ++j)
        for (int i = 0; i < phi.nx(); ++i)
            if (central_stencil_ok(phi, i, j))
                out.mutable_data()[out.index(i, j)] =
                    inv_h2 * (phi.value(i + 1, j) + phi.value(i - 1, j) + phi.value(i, j + 1) +
                              phi.value(i, j - 1) - 4.0 * phi.value(i, j));
    return out;
}

}  // namespace vmoser
