#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "support/test_util.hpp"
#include "unshade/grid.hpp"

using namespace unshade;
using testutil::bitwise_equal;
using testutil::max_abs_diff;
using testutil::random_field;

namespace {

// Independent brute-force stencils, written directly from the definitions.
GridField oracle_laplacian_interior(const GridField& f) {
    GridField out(f.rows(), f.cols(), f.h());
    const double h2 = f.h() * f.h();
    for (int i = 1; i < f.rows() - 1; ++i) {
        for (int j = 1; j < f.cols() - 1; ++j) {
            out(i, j) = (f(i + 1, j) + f(i - 1, j) + f(i, j + 1) + f(i, j - 1) - 4.0 * f(i, j)) / h2;
        }
    }
    return out;
}

GridField transpose(const GridField& f) {
    GridField out(f.cols(), f.rows(), f.h());
    for (int i = 0; i < f.rows(); ++i) {
        for (int j = 0; j < f.cols(); ++j) out(j, i) = f(i, j);
    }
    return out;
}

GridField from_fn(int rows, int cols, double h, double (*fn)(double, double)) {
    GridField f(rows, cols, h);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) f(i, j) = fn(j * h, i * h);  // x = column, y = row
    }
    return f;
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("GridField construction enforces the invariants") {
    CHECK_THROWS_AS(GridField(2, 3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(GridField(3, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(GridField(3, 3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(GridField(3, 3, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(GridField(3, 3, 1.0, std::vector<double>(8, 0.0)), std::invalid_argument);
    std::vector<double> with_nan(9, 0.0);
    with_nan[4] = std::nan("");
    CHECK_THROWS_AS(GridField(3, 3, 1.0, std::move(with_nan)), std::domain_error);

    const GridField ok(3, 4, 2.0, 0.25);
    CHECK(ok.rows() == 3);
    CHECK(ok.cols() == 4);
    CHECK(ok.h() == 2.0);
    CHECK(mean_value(ok) == 0.25);
}

TEST_CASE("operators annihilate constants under both rules") {
    for (BoundaryRule rule : {BoundaryRule::InteriorZero, BoundaryRule::Reflect}) {
        const GridField c(5, 6, 0.7, 3.25);
        CHECK(max_value(laplacian(c, rule)) == 0.0);
        CHECK(min_value(laplacian(c, rule)) == 0.0);
        auto [gx, gy] = gradient(c, rule);
        CHECK(max_abs_diff(gx, GridField(5, 6, 0.7)) == 0.0);
        CHECK(max_abs_diff(gy, GridField(5, 6, 0.7)) == 0.0);
        const GridField c1(5, 6, 0.7, -2.0);
        const GridField c2(5, 6, 0.7, 5.5);
        CHECK(max_abs_diff(divergence(c1, c2, rule), GridField(5, 6, 0.7)) == 0.0);
    }
}

TEST_CASE("laplacian of a centered unit impulse") {
    GridField f(3, 3, 1.0);
    f(1, 1) = 1.0;
    const GridField lap = laplacian(f, BoundaryRule::InteriorZero);
    CHECK(lap(1, 1) == -4.0);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i != 1 || j != 1) CHECK(lap(i, j) == 0.0);
        }
    }
    // and against the brute-force interior stencil on a random field
    // (the oracle associates the neighbour sum differently, hence the ulp slack)
    const GridField g = random_field(7, 9, 1.0, -1.0, 1.0, 11);
    CHECK(max_abs_diff(laplacian(g, BoundaryRule::InteriorZero), oracle_laplacian_interior(g)) <
          1e-15);
}

TEST_CASE("laplacian is exact on quadratics") {
    // a x^2 + b x y + c y^2 + d x + e y + g has Laplacian 2a + 2c.
    const double a = 0.37, b = -1.21, c = 2.06, d = 0.4, e = -0.9, g = 5.0;
    for (double h : {0.5, 1.0, 2.0}) {
        GridField f(9, 9, h);
        for (int i = 0; i < 9; ++i) {
            for (int j = 0; j < 9; ++j) {
                const double x = j * h;
                const double y = i * h;
                f(i, j) = a * x * x + b * x * y + c * y * y + d * x + e * y + g;
            }
        }
        const GridField lap = laplacian(f, BoundaryRule::InteriorZero);
        for (int i = 1; i < 8; ++i) {
            for (int j = 1; j < 8; ++j) {
                CHECK(std::abs(lap(i, j) - (2.0 * a + 2.0 * c)) < 1e-12);
            }
        }
        // x^2 + y^2 with h = 1 gives exactly 4 (the worked example)
        if (h == 1.0) {
            const GridField q = from_fn(9, 9, 1.0, [](double x, double y) { return x * x + y * y; });
            const GridField lq = laplacian(q, BoundaryRule::InteriorZero);
            for (int i = 1; i < 8; ++i) {
                for (int j = 1; j < 8; ++j) CHECK(lq(i, j) == 4.0);
            }
        }
    }
}

TEST_CASE("gradient central differences and linear exactness") {
    GridField f(3, 3, 1.0);
    f(1, 0) = 1.0;
    f(1, 1) = 2.0;
    f(1, 2) = 3.0;
    auto [gx, gy] = gradient(f, BoundaryRule::InteriorZero);
    CHECK(gx(1, 1) == 1.0);

    const double h = 0.7;
    const GridField lin = from_fn(6, 7, h, [](double x, double y) { return 3.0 * x + 5.0 * y; });
    auto [lx, ly] = gradient(lin, BoundaryRule::Reflect);
    for (int i = 1; i < 5; ++i) {
        for (int j = 1; j < 6; ++j) {
            CHECK(std::abs(lx(i, j) - 3.0) < 1e-12);
            CHECK(std::abs(ly(i, j) - 5.0) < 1e-12);
        }
    }
}

TEST_CASE("divergence of a linear vector field and input validation") {
    const GridField px = from_fn(5, 5, 1.0, [](double x, double) { return x; });
    const GridField py = from_fn(5, 5, 1.0, [](double, double y) { return y; });
    const GridField div = divergence(px, py, BoundaryRule::InteriorZero);
    for (int i = 1; i < 4; ++i) {
        for (int j = 1; j < 4; ++j) CHECK(div(i, j) == 2.0);
    }

    CHECK_THROWS_AS(divergence(GridField(5, 5, 1.0), GridField(5, 6, 1.0),
                               BoundaryRule::InteriorZero),
                    std::invalid_argument);
    CHECK_THROWS_AS(divergence(GridField(5, 5, 1.0), GridField(5, 5, 2.0),
                               BoundaryRule::InteriorZero),
                    std::invalid_argument);
}

TEST_CASE("divergence of gradient equals the wide Laplacian stencil") {
    for (double h : {0.5, 1.0}) {
        const GridField f = random_field(9, 9, h, 0.0, 1.0, 21);
        auto [gx, gy] = gradient(f, BoundaryRule::InteriorZero);
        const GridField dg = divergence(gx, gy, BoundaryRule::InteriorZero);
        // Brute-force (2h)-spacing Laplacian, defined where the stencil fits.
        const double four_h2 = 4.0 * h * h;
        for (int i = 2; i < 7; ++i) {
            for (int j = 2; j < 7; ++j) {
                const double wide = (f(i, j + 2) - 2.0 * f(i, j) + f(i, j - 2)) / four_h2 +
                                    (f(i + 2, j) - 2.0 * f(i, j) + f(i - 2, j)) / four_h2;
                CHECK(std::abs(dg(i, j) - wide) < 1e-12);
            }
        }
    }
}

TEST_CASE("linearity, exact on dyadic data") {
    // Integer-valued fields, dyadic coefficients and h = 1 keep every
    // operation exact, so linearity holds bitwise.
    testutil::SplitMix64 rng(31);
    GridField f(6, 6, 1.0);
    GridField g(6, 6, 1.0);
    for (double& v : f.values()) v = static_cast<double>(rng.next() % 17) - 8.0;
    for (double& v : g.values()) v = static_cast<double>(rng.next() % 17) - 8.0;
    const double a = 2.0, b = -0.5;
    GridField combo(6, 6, 1.0);
    for (std::size_t k = 0; k < combo.size(); ++k) {
        combo.values()[k] = a * f.values()[k] + b * g.values()[k];
    }
    for (BoundaryRule rule : {BoundaryRule::InteriorZero, BoundaryRule::Reflect}) {
        const GridField left = laplacian(combo, rule);
        const GridField lf = laplacian(f, rule);
        const GridField lg = laplacian(g, rule);
        for (std::size_t k = 0; k < left.size(); ++k) {
            CHECK(left.values()[k] == a * lf.values()[k] + b * lg.values()[k]);
        }
        auto [cx, cy] = gradient(combo, rule);
        auto [fx, fy] = gradient(f, rule);
        auto [gxx, gyy] = gradient(g, rule);
        for (std::size_t k = 0; k < cx.size(); ++k) {
            CHECK(cx.values()[k] == a * fx.values()[k] + b * gxx.values()[k]);
            CHECK(cy.values()[k] == a * fy.values()[k] + b * gyy.values()[k]);
        }
    }
    // and within 1e-12 on continuous data
    const GridField u = random_field(8, 7, 0.5, -1.0, 1.0, 32);
    const GridField v = random_field(8, 7, 0.5, -1.0, 1.0, 33);
    const double au = 1.7, bv = -2.3;
    GridField mix(8, 7, 0.5);
    for (std::size_t k = 0; k < mix.size(); ++k) {
        mix.values()[k] = au * u.values()[k] + bv * v.values()[k];
    }
    const GridField lm = laplacian(mix, BoundaryRule::Reflect);
    const GridField lu = laplacian(u, BoundaryRule::Reflect);
    const GridField lv = laplacian(v, BoundaryRule::Reflect);
    for (std::size_t k = 0; k < lm.size(); ++k) {
        CHECK(lm.values()[k] ==
              doctest::Approx(au * lu.values()[k] + bv * lv.values()[k]).epsilon(1e-12));
    }
}

TEST_CASE("Reflect laplacian has zero total flux") {
    for (std::uint64_t seed : {41ULL, 42ULL, 43ULL}) {
        const GridField f = random_field(10, 13, 0.7, 0.0, 1.0, seed);
        const GridField lap = laplacian(f, BoundaryRule::Reflect);
        double sum = 0.0;
        for (double v : lap.values()) sum += v;
        CHECK(std::abs(sum) < 1e-12 * f.rows() * f.cols());
    }
}

TEST_CASE("transposition commutes with the operators") {
    for (BoundaryRule rule : {BoundaryRule::InteriorZero, BoundaryRule::Reflect}) {
        const GridField f = random_field(6, 9, 1.25, -2.0, 2.0, 51);
        CHECK(bitwise_equal(laplacian(transpose(f), rule), transpose(laplacian(f, rule))));
        auto [gx, gy] = gradient(f, rule);
        auto [tx, ty] = gradient(transpose(f), rule);
        CHECK(bitwise_equal(tx, transpose(gy)));
        CHECK(bitwise_equal(ty, transpose(gx)));
        const GridField px = random_field(6, 9, 1.25, -1.0, 1.0, 52);
        const GridField py = random_field(6, 9, 1.25, -1.0, 1.0, 53);
        CHECK(bitwise_equal(divergence(transpose(py), transpose(px), rule),
                            transpose(divergence(px, py, rule))));
    }
}

TEST_CASE("boundary rule names round-trip") {
    CHECK(parse_boundary_rule("interior-zero") == BoundaryRule::InteriorZero);
    CHECK(parse_boundary_rule("reflect") == BoundaryRule::Reflect);
    CHECK(name(BoundaryRule::Reflect) == std::string("reflect"));
    CHECK_THROWS_AS(parse_boundary_rule("mirror"), std::invalid_argument);
}

}  // TEST_SUITE
