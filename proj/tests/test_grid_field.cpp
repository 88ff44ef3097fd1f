#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qps/field.hpp"
#include "qps/grid.hpp"

using namespace qps;

TEST_CASE("grid validation rejects bad shapes") {
    CHECK_THROWS_AS(Grid::cube(1, 7, 1.0), Error);  // odd
    CHECK_THROWS_AS(Grid::cube(1, 6, 1.0), Error);  // too small
    CHECK_THROWS_AS(Grid::make(1, {8, 1, 1}, {1.0, 0, 0}, {0.0, 0, 0}, true),
                    Error); // inverted bounds
    CHECK_NOTHROW(Grid::cube(3, 8, 1.0));
}

TEST_CASE("spacing conventions") {
    const Grid gp = Grid::make(1, {10, 1, 1}, {0.0, 0, 0}, {1.0, 0, 0}, true);
    CHECK(gp.spacing(0) == doctest::Approx(0.1)); // upper endpoint excluded
    const Grid gb = Grid::make(1, {10, 1, 1}, {0.0, 0, 0}, {1.0, 0, 0}, false);
    CHECK(gb.spacing(0) == doctest::Approx(1.0 / 9.0)); // both endpoints
    CHECK(gb.coord(0, 9) == doctest::Approx(1.0));
}

TEST_CASE("index round trip, axis 0 slowest") {
    const Grid g = Grid::make(3, {8, 10, 12}, {0, 0, 0}, {1, 1, 1}, true);
    CHECK(g.size() == 8 * 10 * 12);
    CHECK(g.index(0, 0, 1) == 1); // last axis fastest
    for (std::size_t i : {std::size_t(0), std::size_t(517), g.size() - 1}) {
        const auto c = g.unindex(i);
        CHECK(g.index(c[0], c[1], c[2]) == i);
    }
}

TEST_CASE("cell volume") {
    const Grid g = Grid::cube(3, 8, 2.0);
    CHECK(g.cell_volume() == doctest::Approx(0.125)); // (4/8)^3
}

TEST_CASE("WaveField norm and normalization") {
    const Grid g = Grid::cube(1, 16, 1.0);
    WaveField wf(g);
    for (auto& z : wf.psi) z = cdouble(2.0, 0.0);
    CHECK(wf.norm_squared() == doctest::Approx(8.0)); // 4 * length 2
    const WaveField n = wf.normalized();
    CHECK(n.norm_squared() == doctest::Approx(1.0));
    WaveField zero(g);
    CHECK_THROWS_AS(zero.normalized(), DegenerateStateError);
}

TEST_CASE("covariance matrix validation") {
    CovarianceMatrix cm;
    cm.n = 1;
    cm.sigma = Eigen::MatrixXd::Identity(2, 2);
    CHECK_NOTHROW(cm.validate());
    cm.sigma(0, 1) = 0.5; // asymmetric
    CHECK_THROWS_AS(cm.validate(), Error);
}

TEST_CASE("mask semantics: empty mask means all valid") {
    const Grid g = Grid::cube(1, 8, 1.0);
    ScalarField f(g);
    CHECK_FALSE(f.masked(3));
    f.mask.assign(g.size(), 0);
    f.mask[3] = 1;
    CHECK(f.masked(3));
    CHECK_FALSE(f.masked(2));
}
