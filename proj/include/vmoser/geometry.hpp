#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vmoser {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double c, Vec2 a) { return {c * a.x, c * a.y}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }

// ======================================================================
// Cell-centered grid geometry. The window is centered at `origin`:
// cell (i, j) has center origin + ((i + 0.5)h - nx*h/2, (j + 0.5)h - ny*h/2).
// With even nx, ny the origin itself is never a sample point.
// ======================================================================
struct GridSpec {
    Vec2 origin{};
    double h = 0.0;
    int nx = 0;
    int ny = 0;

    void validate() const {
        if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("grid spacing must be positive");
        if (nx < 2 || ny < 2) throw std::invalid_argument("grid needs at least 2 cells per axis");
        if (!std::isfinite(origin.x) || !std::isfinite(origin.y))
            throw std::invalid_argument("grid origin must be finite");
    }

    Vec2 cell_center(int i, int j) const {
        return {origin.x + (i + 0.5) * h - 0.5 * nx * h,
                origin.y + (j + 0.5) * h - 0.5 * ny * h};
    }

    double half_width_x() const { return 0.5 * nx * h; }
    double half_width_y() const { return 0.5 * ny * h; }
    std::size_t cell_count() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }

    bool same_layout(const GridSpec& o) const {
        return nx == o.nx && ny == o.ny && h == o.h && origin.x == o.origin.x && origin.y == o.origin.y;
    }
};

/// Square grid covering [-half_width, half_width]^2 around `center`.
inline GridSpec make_square_grid(Vec2 center, double half_width, int n) {
    GridSpec g{center, 2.0 * half_width / n, n, n};
    g.validate();
    return g;
}

// ======================================================================
// Exact area of the intersection of an axis-aligned rectangle with a disk.
// Decomposed into four signed quadrant terms around the disk center.
// ======================================================================

namespace detail {

/// Integral of sqrt(R^2 - u^2) du over [0, min(t, R)], t >= 0.
inline double arc_area_integral(double t, double R) {
    t = std::min(t, R);
    return 0.5 * (t * std::sqrt(std::max(R * R - t * t, 0.0)) + R * R * std::asin(t / R));
}

/// Area of {0 <= u <= x, 0 <= v <= y, u^2 + v^2 <= R^2} for x, y >= 0.
inline double quadrant_area(double x, double y, double R) {
    x = std::min(x, R);
    y = std::min(y, R);
    if (x <= 0.0 || y <= 0.0) return 0.0;
    if (x * x + y * y <= R * R) return x * y;
    double ustar = std::sqrt(std::max(R * R - y * y, 0.0));  // arc drops below y beyond here
    return y * ustar + arc_area_integral(x, R) - arc_area_integral(ustar, R);
}

inline double signed_quadrant(double x, double y, double R) {
    double s = 1.0;
    if (x < 0.0) { s = -s; x = -x; }
    if (y < 0.0) { s = -s; y = -y; }
    return s * quadrant_area(x, y, R);
}

}  // namespace detail

/// area([x0,x1] x [y0,y1] ∩ disk(center, R)); exact up to roundoff.
inline double disk_rect_overlap(double x0, double x1, double y0, double y1, Vec2 center, double R) {
    if (R <= 0.0) return 0.0;
    x0 -= center.x; x1 -= center.x;
    y0 -= center.y; y1 -= center.y;
    return detail::signed_quadrant(x1, y1, R) - detail::signed_quadrant(x0, y1, R)
         - detail::signed_quadrant(x1, y0, R) + detail::signed_quadrant(x0, y0, R);
}

// ======================================================================
// Space-time cylinders B_r(center) x (t0, t1].
// ======================================================================
struct Cylinder {
    enum class Scaling { euler, parabolic };

    Vec2 center{};
    double radius = 0.0;
    double t0 = 0.0;
    double t1 = 0.0;
    Scaling scaling = Scaling::euler;

    static double interval_length(Scaling s, double r) {
        return s == Scaling::euler ? r : r * r;
    }

    /// B_r x (t1 - r, t1].
    static Cylinder euler(Vec2 center, double r, double t1 = 0.0) {
        Cylinder c{center, r, t1 - r, t1, Scaling::euler};
        c.validate();
        return c;
    }

    /// B_r x (t1 - r^2, t1].
    static Cylinder parabolic(Vec2 center, double r, double t1 = 0.0) {
        Cylinder c{center, r, t1 - r * r, t1, Scaling::parabolic};
        c.validate();
        return c;
    }

    void validate() const {
        if (!(radius > 0.0)) throw std::invalid_argument("cylinder radius must be positive");
        if (!(t0 < t1)) throw std::invalid_argument("cylinder needs t0 < t1");
    }

    /// Scaled copy anchored at the top time face: radius sigma*r, interval length
    /// per the scaling kind.
    Cylinder scaled(double sigma) const {
        if (!(sigma > 0.0)) throw std::invalid_argument("scale factor must be positive");
        Cylinder c = *this;
        c.radius = sigma * radius;
        c.t0 = t1 - interval_length(scaling, c.radius);
        c.validate();
        return c;
    }

    double duration() const { return t1 - t0; }

    bool contains_time(double t, double tol = 1e-12) const {
        return t >= t0 - tol && t <= t1 + tol;
    }
};

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace vmoser
