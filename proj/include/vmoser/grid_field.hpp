#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vmoser/geometry.hpp"

namespace vmoser {

// ======================================================================
// GridField2D: uniform cell-centered scalar or 2-vector samples, with an
// optional concentric disk mask. Samples outside the mask are treated as
// zero by every consumer; masked cells carry exact square∩disk overlap
// areas as quadrature weights.
// ======================================================================
class GridField2D {
  public:
    GridField2D(GridSpec spec, int components, std::vector<double> data, double mask_radius = 0.0)
        : spec_(spec), components_(components), mask_radius_(mask_radius), data_(std::move(data)) {
        spec_.validate();
        if (components_ != 1 && components_ != 2)
            throw std::invalid_argument("field must have 1 or 2 components");
        if (data_.size() != spec_.cell_count() * static_cast<std::size_t>(components_))
            throw std::invalid_argument("field data size does not match grid");
        for (double v : data_)
            if (!std::isfinite(v)) throw std::invalid_argument("field samples must be finite");
        if (mask_radius_ < 0.0 || !std::isfinite(mask_radius_))
            throw std::invalid_argument("mask radius must be finite and nonnegative");
        if (mask_radius_ > 0.0) build_weights();
    }

    /// Zero field.
    GridField2D(GridSpec spec, int components, double mask_radius = 0.0)
        : GridField2D(spec, components,
                      std::vector<double>(spec.cell_count() * static_cast<std::size_t>(components), 0.0),
                      mask_radius) {}

    const GridSpec& spec() const { return spec_; }
    int components() const { return components_; }
    bool masked() const { return mask_radius_ > 0.0; }
    double mask_radius() const { return mask_radius_; }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& mutable_data() { return data_; }

    int nx() const { return spec_.nx; }
    int ny() const { return spec_.ny; }
    double h() const { return spec_.h; }
    Vec2 cell_center(int i, int j) const { return spec_.cell_center(i, j); }

    std::size_t index(int i, int j, int c = 0) const {
        return (static_cast<std::size_t>(j) * spec_.nx + i) * components_ + c;
    }

    double raw(int i, int j, int c = 0) const { return data_[index(i, j, c)]; }

    /// Zero-extended sample: 0 outside the mask disk.
    double value(int i, int j, int c = 0) const {
        if (masked() && weights_[static_cast<std::size_t>(j) * spec_.nx + i] == 0.0) return 0.0;
        return data_[index(i, j, c)];
    }

    /// |f| at a cell (abs for scalars, Euclidean for vectors), zero-extended.
    double magnitude(int i, int j) const {
        if (components_ == 1) return std::abs(value(i, j, 0));
        double a = value(i, j, 0), b = value(i, j, 1);
        return std::sqrt(a * a + b * b);
    }

    /// Quadrature weight of the cell: overlap area with the mask disk, or h^2.
    double weight(int i, int j) const {
        if (!masked()) return spec_.h * spec_.h;
        return weights_[static_cast<std::size_t>(j) * spec_.nx + i];
    }

    /// The cell center is a lattice point of the mask disk. Rim-straddling
    /// cells whose centers fall outside carry quadrature weight but are not
    /// sample points: pointwise consumers (stencils, resampling targets)
    /// must not read values there, since producers only define samples at
    /// in-disk centers.
    bool inside_mask(int i, int j) const {
        if (!masked()) return true;
        if (weight(i, j) <= 0.0) return false;
        return norm2(spec_.cell_center(i, j) - spec_.origin) < mask_radius_ * mask_radius_;
    }

    bool same_layout(const GridField2D& o) const {
        return spec_.same_layout(o.spec_) && components_ == o.components_ && mask_radius_ == o.mask_radius_;
    }

    /// Same grid and mask, irrespective of the component count — the right
    /// compatibility notion between a velocity and a vorticity field.
    bool same_geometry(const GridField2D& o) const {
        return spec_.same_layout(o.spec_) && mask_radius_ == o.mask_radius_;
    }

    /// Bilinear interpolation on the cell-center lattice, zero outside the
    /// window and outside the mask.
    double interpolate(Vec2 p, int c = 0) const {
        double fx = (p.x - spec_.origin.x) / spec_.h + 0.5 * spec_.nx - 0.5;
        double fy = (p.y - spec_.origin.y) / spec_.h + 0.5 * spec_.ny - 0.5;
        int i0 = static_cast<int>(std::floor(fx));
        int j0 = static_cast<int>(std::floor(fy));
        double ax = fx - i0, ay = fy - j0;
        double v = 0.0;
        for (int dj = 0; dj <= 1; ++dj) {
            for (int di = 0; di <= 1; ++di) {
                int i = i0 + di, j = j0 + dj;
                if (i < 0 || j < 0 || i >= spec_.nx || j >= spec_.ny) continue;
                double w = (di ? ax : 1.0 - ax) * (dj ? ay : 1.0 - ay);
                v += w * value(i, j, c);
            }
        }
        return v;
    }

  private:
    void build_weights() {
        weights_.resize(spec_.cell_count());
        double h = spec_.h;
        double full = h * h;
        // A cell with positive overlap has its center within R + h/√2 of the
        // disk center; beyond that, residues of the signed-quadrant
        // cancellation (up to ~√eps·R² near tangency) are snapped to 0.
        double reach = mask_radius_ + h * std::numbers::sqrt2 / 2.0;
        for (int j = 0; j < spec_.ny; ++j) {
            for (int i = 0; i < spec_.nx; ++i) {
                Vec2 c = spec_.cell_center(i, j);
                double w = disk_rect_overlap(c.x - 0.5 * h, c.x + 0.5 * h, c.y - 0.5 * h,
                                             c.y + 0.5 * h, spec_.origin, mask_radius_);
                if (w < 1e-12 * full || norm2(c - spec_.origin) > reach * reach) w = 0.0;
                if (w > full) w = full;
                weights_[static_cast<std::size_t>(j) * spec_.nx + i] = w;
            }
        }
    }

    GridSpec spec_;
    int components_;
    double mask_radius_;
    std::vector<double> data_;
    std::vector<double> weights_;
};

// ======================================================================
// SpaceTimeField: time slices of one field over a cylinder. Slice times
// are strictly increasing and stay inside the cylinder interval; slices
// share one layout. Time integration uses nearest-slice (midpoint
// Voronoi) weights clamped to the requested interval.
// ======================================================================
class SpaceTimeField {
  public:
    SpaceTimeField(Cylinder cyl, std::vector<double> times, std::vector<GridField2D> slices)
        : cyl_(cyl), times_(std::move(times)), slices_(std::move(slices)) {
        cyl_.validate();
        if (times_.empty() || times_.size() != slices_.size())
            throw std::invalid_argument("slice/time count mismatch");
        for (std::size_t k = 0; k < times_.size(); ++k) {
            if (k > 0 && !(times_[k] > times_[k - 1]))
                throw std::invalid_argument("slice times must be strictly increasing");
            if (!cyl_.contains_time(times_[k]))
                throw std::invalid_argument("slice time outside the cylinder interval");
            if (!slices_[k].same_layout(slices_[0]))
                throw std::invalid_argument("slices must share one grid layout");
        }
    }

    const Cylinder& cylinder() const { return cyl_; }
    std::size_t slice_count() const { return times_.size(); }
    double time(std::size_t k) const { return times_[k]; }
    const std::vector<double>& times() const { return times_; }
    const GridField2D& slice(std::size_t k) const { return slices_[k]; }
    const GridField2D& first() const { return slices_.front(); }

    /// Indices of slices with t in [a, b] (tolerance 1e-12).
    std::vector<std::size_t> slices_in(double a, double b) const {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < times_.size(); ++k)
            if (times_[k] >= a - 1e-12 && times_[k] <= b + 1e-12) out.push_back(k);
        return out;
    }

    /// Voronoi time weights of the selected slices inside [a, b]; weights sum
    /// to the length of the covered part of [a, b].
    std::vector<double> time_weights(const std::vector<std::size_t>& sel, double a, double b) const {
        std::vector<double> w(sel.size(), 0.0);
        for (std::size_t m = 0; m < sel.size(); ++m) {
            std::size_t k = sel[m];
            double lo = k == 0 ? a : std::max(a, 0.5 * (times_[k - 1] + times_[k]));
            double hi = k + 1 == times_.size() ? b : std::min(b, 0.5 * (times_[k] + times_[k + 1]));
            w[m] = std::max(hi - lo, 0.0);
        }
        return w;
    }

  private:
    Cylinder cyl_;
    std::vector<double> times_;
    std::vector<GridField2D> slices_;
};

}  // namespace vmoser
