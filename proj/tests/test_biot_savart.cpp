#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "vmoser/biot_savart.hpp"

using namespace vmoser;
using Catch::Approx;

namespace {

SpaceTimeField static_with_times(const Cylinder& cyl, const GridField2D& slice,
                                 std::vector<double> times) {
    std::vector<GridField2D> slices(times.size(), slice);
    return SpaceTimeField(cyl, std::move(times), std::move(slices));
}

/// Rigid rotation velocity (divergence-free) and a gaussian vorticity bump
/// on a unit window, constant in time, sampled where the test cylinders
/// will look for slices.
struct StaticPair {
    GridSpec grid = make_square_grid({0.0, 0.0}, 1.0, 48);
    Cylinder data_cyl = Cylinder::euler({0.0, 0.0}, 1.0, 1.0);
    std::vector<double> times{0.86, 0.93, 1.0};
    SpaceTimeField u, omega;

    StaticPair(double spin = 0.2, double amp = 1.0)
        : u(static_with_times(
              data_cyl,
              oracle::vector_field(
                  grid, [spin](double, double y) { return -spin * y; },
                  [spin](double x, double) { return spin * x; }),
              times)),
          omega(static_with_times(
              data_cyl,
              oracle::scalar_field(
                  grid,
                  [amp](double x, double y) { return amp * std::exp(-(x * x + y * y) / 0.1); }),
              times)) {}
};

GridField2D constant_vector(const GridSpec& g, Vec2 k) {
    return oracle::vector_field(
        g, [k](double, double) { return k.x; }, [k](double, double) { return k.y; });
}

}  // namespace

TEST_CASE("data quantities reduce to closed forms on constant fields") {
    GridSpec grid = make_square_grid({0.0, 0.0}, 1.0, 40);
    // Data sampled exactly over the query interval so the time quadrature
    // covers all of it (slices own Voronoi cells clamped to the interval).
    Cylinder data_cyl{{0.0, 0.0}, 1.0, 1.75, 2.0, Cylinder::Scaling::euler};
    const Vec2 k{0.6, -0.8};  // |k| = 1
    const double w0 = 0.7, eps = 1.0;
    SpaceTimeField u = oracle::static_space_time(data_cyl, constant_vector(grid, k), 4);
    SpaceTimeField w = oracle::static_space_time(
        data_cyl, oracle::scalar_field(grid, [w0](double, double) { return w0; }), 4);

    Cylinder Q2 = Cylinder::parabolic({0.0, 0.0}, 0.5, 2.0);  // interval [1.75, 2]
    double gamma = gamma_quantity(u, w, Q2, eps);
    // Gamma = r * ||w||_2,avg * (|k|^{2+eps} + 1)^{1/(2+eps)}.
    CHECK(gamma == Approx(0.5 * w0 * std::pow(2.0, 1.0 / 3.0)).epsilon(1e-12));

    LambdaQuantity L = lambda_quantity(u, w, Q2, eps, LambdaVariant::step2);
    CHECK(L.sup_l1 == Approx(1.0).epsilon(1e-12));
    CHECK(L.vorticity_factor == Approx(std::sqrt(0.25 * w0 * w0 + 1.0)).epsilon(1e-12));
    CHECK(L.velocity_factor == Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-12));
    CHECK(L.value == Approx(L.sup_l1 + L.vorticity_factor * L.velocity_factor).epsilon(1e-15));

    // The theorem variant quarters the coefficient on ||w||^2.
    LambdaQuantity Lt = lambda_quantity(u, w, Q2, eps, LambdaVariant::theorem);
    CHECK(Lt.vorticity_factor == Approx(std::sqrt(0.0625 * w0 * w0 + 1.0)).epsilon(1e-12));
    CHECK(lambda_step2(u, w, Q2, eps) == Approx(L.value).epsilon(1e-15));
    CHECK(lambda_theorem(u, w, Q2, eps) == Approx(Lt.value).epsilon(1e-15));

    CHECK_THROWS_AS(gamma_quantity(u, w, Q2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lambda_quantity(u, w, Q2, -1.0), std::invalid_argument);
}

TEST_CASE("potential side of the bound equals the singular integral of |omega|") {
    StaticPair d;
    Cylinder Q = Cylinder::parabolic({0.0, 0.0}, 0.4, 1.0);  // interval [0.84, 1]
    BiotSavartBound rep = verify_local_bound(d.u, d.omega, Q, 0.5, BoundMode::fixed_k);

    GridField2D absw = oracle::scalar_field(
        d.grid, [](double x, double y) { return std::exp(-(x * x + y * y) / 0.1); }, Q.radius);
    GridField2D I = riesz_potential(absw, 1.0);

    int checked = 0;
    for (int j = 0; j < d.grid.ny; ++j)
        for (int i = 0; i < d.grid.nx; ++i) {
            Vec2 c = d.grid.cell_center(i, j);
            if (norm2(c) >= 0.04) continue;  // sigma * r = 0.2
            CHECK(rep.rhs_potential.value(i, j) ==
                  Approx(I.value(i, j) / (2.0 * oracle::pi)).epsilon(1e-13));
            ++checked;
        }
    CHECK(checked > 50);

    // Static data: all three slices land in the cylinder and agree exactly.
    CHECK(rep.rows.size() == 3);
    CHECK(rep.uniform_in_time);
    CHECK(rep.slice_spread == 0.0);
}

TEST_CASE("wrong fixed shift on a drift field fits the shrink-factor cube") {
    GridSpec grid = make_square_grid({0.0, 0.0}, 1.0, 40);
    Cylinder data_cyl = Cylinder::euler({0.0, 0.0}, 1.0, 1.0);
    std::vector<double> times{0.92, 0.96, 1.0};
    const Vec2 c{0.8, 0.3};
    SpaceTimeField u = static_with_times(data_cyl, constant_vector(grid, c), times);
    SpaceTimeField zero_w = static_with_times(
        data_cyl, oracle::scalar_field(grid, [](double, double) { return 0.0; }), times);

    Cylinder Q = Cylinder::parabolic({0.0, 0.0}, 0.3, 1.0);  // interval [0.91, 1]
    for (double sigma : {0.3, 0.5, 0.7}) {
        BiotSavartBound rep =
            verify_local_bound(u, zero_w, Q, sigma, BoundMode::fixed_k, {0.0, 0.0});
        // lhs = |c| everywhere, potential = 0, Gamma = 0, L1 average = |c|:
        // the fitted constant is exactly (1 - sigma)^3.
        CHECK(rep.fitted_C == Approx(std::pow(1.0 - sigma, 3.0)).epsilon(1e-12));
        CHECK(rep.gamma_q == 0.0);
        CHECK(rep.uniform_in_time);
        CHECK(rep.rows.size() == 3);
    }
}

TEST_CASE("per-slice mean shift removes a pure drift") {
    GridSpec grid = make_square_grid({0.0, 0.0}, 1.0, 40);
    Cylinder data_cyl = Cylinder::euler({0.0, 0.0}, 1.0, 1.0);
    std::vector<double> times{0.92, 0.96, 1.0};
    const Vec2 c{0.8, 0.3};
    SpaceTimeField u = static_with_times(data_cyl, constant_vector(grid, c), times);
    // Nonzero vorticity keeps the additive term away from 0/0, so the fit
    // is exactly zero once the mean removes the drift.
    SpaceTimeField w = static_with_times(
        data_cyl, oracle::scalar_field(grid, [](double, double) { return 0.5; }), times);

    Cylinder Q = Cylinder::parabolic({0.0, 0.0}, 0.3, 1.0);
    BiotSavartBound rep = verify_local_bound(u, w, Q, 0.5, BoundMode::mean_shift);
    CHECK(rep.gamma_q > 0.0);
    CHECK(rep.fitted_C == 0.0);
    CHECK(rep.k_shift.x == Approx(c.x).margin(1e-12));
    CHECK(rep.k_shift.y == Approx(c.y).margin(1e-12));
    CHECK(rep.rows[rep.binding_slice].sup_lhs <= 1e-12);

    // The same data against a wrong fixed shift does leave a deficit.
    BiotSavartBound fixed = verify_local_bound(u, w, Q, 0.5, BoundMode::fixed_k, {0.0, 0.0});
    CHECK(fixed.fitted_C > 0.0);
}

TEST_CASE("time-dependent drift against a fixed shift breaks uniformity") {
    GridSpec grid = make_square_grid({0.0, 0.0}, 1.0, 40);
    Cylinder data_cyl = Cylinder::euler({0.0, 0.0}, 1.0, 1.0);

    std::vector<double> times{0.92, 0.96, 1.0};
    std::vector<GridField2D> uslices, wslices;
    for (double t : times) {
        double scale = 1.0 + t;
        uslices.push_back(constant_vector(grid, {scale, 0.0}));
        wslices.push_back(oracle::scalar_field(grid, [](double x, double y) {
            return 0.01 * std::exp(-(x * x + y * y) / 0.05);
        }));
    }
    SpaceTimeField u(data_cyl, times, uslices);
    SpaceTimeField w(data_cyl, std::vector<double>(times), wslices);

    Cylinder Q = Cylinder::parabolic({0.0, 0.0}, 0.3, 1.0);
    BiotSavartBound rep = verify_local_bound(u, w, Q, 0.5, BoundMode::fixed_k);
    CHECK(rep.rows.size() == 3);
    CHECK_FALSE(rep.uniform_in_time);
    CHECK(rep.slice_spread > 1e-6);
    CHECK(rep.fitted_C == rep.rows[rep.binding_slice].fitted_C);

    // CSV export mirrors the rows.
    std::string csv = bound_csv(rep);
    CHECK(csv.rfind("t,sup_lhs,sup_rhs_potential,additive_term,fitted_C\n", 0) == 0);
    std::size_t lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 1 + rep.rows.size());
}

TEST_CASE("bound verification rejects bad geometry, time axes and data") {
    StaticPair d;
    Cylinder Q = Cylinder::parabolic({0.0, 0.0}, 0.4, 1.0);

    CHECK_THROWS_AS(verify_local_bound(d.u, d.omega, Q, 0.0, BoundMode::fixed_k),
                    std::invalid_argument);
    CHECK_THROWS_AS(verify_local_bound(d.u, d.omega, Q, 1.0, BoundMode::fixed_k),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        verify_local_bound(d.u, d.omega, Q, 0.5, BoundMode::fixed_k, {0, 0}, 0.0),
        std::invalid_argument);

    // The doubled cylinder must fit the data in space...
    Cylinder wide = Cylinder::parabolic({0.0, 0.0}, 0.6, 1.0);
    CHECK_THROWS_WITH(verify_local_bound(d.u, d.omega, wide, 0.5, BoundMode::fixed_k),
                      Catch::Matchers::ContainsSubstring("coverage insufficient"));
    // ... and concentric with the window.
    Cylinder off = Cylinder::parabolic({0.3, 0.0}, 0.2, 1.0);
    CHECK_THROWS_WITH(verify_local_bound(d.u, d.omega, off, 0.5, BoundMode::fixed_k),
                      Catch::Matchers::ContainsSubstring("not concentric"));

    // Time coverage: data over [0.7, 1] cannot serve a doubled cylinder
    // reaching back to 0.36.
    Cylinder short_cyl{{0.0, 0.0}, 1.0, 0.7, 1.0, Cylinder::Scaling::euler};
    SpaceTimeField su = static_with_times(short_cyl, d.u.first(), {0.86, 0.93, 1.0});
    SpaceTimeField sw = static_with_times(short_cyl, d.omega.first(), {0.86, 0.93, 1.0});
    CHECK_THROWS_WITH(verify_local_bound(su, sw, Q, 0.5, BoundMode::fixed_k),
                      Catch::Matchers::ContainsSubstring("time interval"));

    // sigma*B so small it contains no cell centers.
    Cylinder tiny = Cylinder::parabolic({0.0, 0.0}, 0.05, 1.0);
    CHECK_THROWS_WITH(verify_local_bound(d.u, d.omega, tiny, 0.2, BoundMode::fixed_k),
                      Catch::Matchers::ContainsSubstring("no cell centers"));

    // Compressible data is rejected by the divergence gate.
    SpaceTimeField bad = static_with_times(
        d.data_cyl,
        oracle::vector_field(
            d.grid, [](double x, double) { return x; }, [](double, double y) { return y; }),
        d.times);
    CHECK_THROWS_WITH(verify_local_bound(bad, d.omega, Q, 0.5, BoundMode::fixed_k),
                      Catch::Matchers::ContainsSubstring("stream-function"));

    // Mismatched time axes and grids.
    SpaceTimeField shifted = static_with_times(d.data_cyl, d.u.first(), {0.85, 0.93, 1.0});
    CHECK_THROWS_WITH(verify_local_bound(shifted, d.omega, Q, 0.5, BoundMode::fixed_k),
                      Catch::Matchers::ContainsSubstring("time axis"));

    GridSpec other = make_square_grid({0.0, 0.0}, 1.0, 32);
    SpaceTimeField coarse_w = static_with_times(
        d.data_cyl, oracle::scalar_field(other, [](double, double) { return 1.0; }), d.times);
    CHECK_THROWS_WITH(verify_local_bound(d.u, coarse_w, Q, 0.5, BoundMode::fixed_k),
                      Catch::Matchers::ContainsSubstring("one grid"));
}

TEST_CASE("velocity reconstruction with a drift adds the constant inside the disk") {
    GridSpec grid = make_square_grid({0.0, 0.0}, 1.0, 96);
    GridField2D one = oracle::scalar_field(grid, [](double, double) { return 1.0; }, 1.0);
    const Vec2 k{0.4, -0.1};

    GridField2D u = reconstruct_velocity(one, std::vector<double>(64, 0.0), k);
    double worst = 0.0;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            Vec2 c = grid.cell_center(i, j);
            if (!u.inside_mask(i, j)) {
                CHECK(u.data()[u.index(i, j, 0)] == 0.0);
                CHECK(u.data()[u.index(i, j, 1)] == 0.0);
                continue;
            }
            if (norm2(c) >= 0.64) continue;
            worst = std::max(worst, std::abs(u.value(i, j, 0) - (-0.5 * c.y + k.x)));
            worst = std::max(worst, std::abs(u.value(i, j, 1) - (0.5 * c.x + k.y)));
        }
    CHECK(worst <= 1e-4);

    GridField2D unmasked = oracle::scalar_field(grid, [](double, double) { return 1.0; });
    CHECK_THROWS_WITH(reconstruct_velocity(unmasked, std::vector<double>(64, 0.0), k),
                      Catch::Matchers::ContainsSubstring("masked"));
}
