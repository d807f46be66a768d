#include <doctest.h>

#include <cmath>

#include "hdx/buildings.hpp"
#include "hdx/spectra.hpp"
#include "hdx/standard_complexes.hpp"

using namespace hdx;

TEST_CASE("complete graphs and bipartite graphs") {
    for (int n : {5, 7, 12}) {
        Complex kn = skeleton(Complex::complete(n), 1);
        auto rep = lambda2(kn);
        CHECK(rep.lambda2_abs == doctest::Approx(1.0 / (n - 1)).epsilon(1e-12));
    }
    // complete bipartite 3+3
    std::vector<Face> edges;
    for (VIdx a = 0; a < 3; ++a)
        for (VIdx b = 3; b < 6; ++b) edges.push_back({a, b});
    Complex k33 = Complex::uniform({0, 1, 2, 3, 4, 5}, {}, std::move(edges));
    auto rep = lambda2(k33);
    CHECK(rep.lambda2 == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("torus links are cycles with cosine spectra") {
    Complex t = torus7();
    auto reports = local_spectra(t);
    for (const auto& [face, rep] : reports) {
        if (face.size() == 1) {
            // vertex links are 6-cycles
            CHECK(rep.lambda2 == doctest::Approx(std::cos(2 * M_PI / 6)).epsilon(1e-9));
        }
    }
}

TEST_CASE("swap walks") {
    Complex d5 = Complex::complete(6);
    auto s00 = swap_walk(d5, 0, 0);
    auto rep = lambda2(s00);
    CHECK(rep.lambda2 == doctest::Approx(1.0 / 5).epsilon(1e-9));

    // S_{0,1} of the torus: measured, no bound asserted (not an HDX)
    Complex t = torus7();
    auto s01 = swap_walk(t, 0, 1);
    auto rep01 = lambda2(s01);
    CHECK(rep01.lambda2 < 1.0);
    CHECK(rep01.lambda2 > 0.0);

    // colored swap walk on C_2(F_3) equals the containment graph
    auto c23 = build(BuildingSpec{BuildingKind::TypeC, 2, 3, {}});
    auto walk = swap_walk_colored(c23.cx, {1}, {2});
    CHECK(walk.rows.size() == 40);
    CHECK(walk.cols.size() == 40);
    auto wrep = lambda2(walk);
    CHECK(wrep.lambda2 <= 4.0 / std::sqrt(3.0));
    // swap bound for the uncolored S_{0,0} walk of a two-sided expander
    auto s00b = swap_walk(c23.cx, 0, 0);
    auto grep = lambda2(c23.cx);
    CHECK(lambda2(s00b).lambda2 <= grep.lambda2_abs + 1e-9);
}

TEST_CASE("trickle-down") {
    Complex d6 = Complex::complete(7);
    auto rep = trickle_check(d6);
    CHECK(rep.pass);

    // join of three 3-point complexes: complete tripartite K_{3,3,3}
    Complex p3 = Complex::uniform({0, 1, 2}, {}, {{0}, {1}, {2}});
    Complex j = join({p3, p3, p3});
    auto repj = trickle_check(j);
    CHECK(repj.pass);
    CHECK(repj.tau == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(repj.global_min >= -0.5 - 1e-9);

    auto c32 = build(BuildingSpec{BuildingKind::TypeC, 3, 2, {}});
    auto repc = trickle_check(c32.cx);
    CHECK(repc.pass);
}

TEST_CASE("grassmann poset: adjointness and the lazy-walk identity") {
    SubspacePoset gr = full_grassmann(4, 2, 2);
    CHECK(gr.levels[0].size() == 1);
    CHECK(gr.levels[1].size() == 15);
    CHECK(gr.levels[2].size() == 35);

    // adjointness of up and down under the stationary inner products
    WalkMatrix c = containment_graph(gr, 1, 2);
    Eigen::MatrixXd up = c.stochastic();                  // functions P(1) <- ...
    Eigen::MatrixXd down = c.weight.transpose();
    for (Eigen::Index r = 0; r < down.rows(); ++r)
        if (c.col_measure(r) > 0) down.row(r) /= c.col_measure(r);
    // <U f, g>_pi2 = <f, D g>_pi1 for random f, g
    Eigen::VectorXd f = Eigen::VectorXd::Random(15), g = Eigen::VectorXd::Random(35);
    const double lhs = (c.col_measure.asDiagonal() * (down * f)).dot(g);
    const double rhs = (c.row_measure.asDiagonal() * f).dot(up * g);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

    // D_{i+1} U_i = (p-1)/(p^{i+1}-1) I + (1 - ...) M_i as matrices
    Eigen::MatrixXd du = upper_walk(gr, 1);
    Eigen::MatrixXd m = nonlazy_upper_walk(gr, 1);
    const double lazy = (2.0 - 1) / (std::pow(2.0, 2) - 1);
    Eigen::MatrixXd rebuilt =
        lazy * Eigen::MatrixXd::Identity(15, 15) + (1 - lazy) * m;
    CHECK((du - rebuilt).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eposet bound on the Grassmann and the isotropic poset") {
    SubspacePoset gr = full_grassmann(4, 2, 2);
    auto rep = eposet_check(gr);
    CHECK(rep.pass);
    REQUIRE(rep.gammas.size() == 2);
    CHECK(rep.lambda_upper[1] <= 0.5 + rep.gammas[0] + rep.gammas[1] + 1e-9);

    auto form = gf::SymplecticForm::standard(2, 3);
    SubspacePoset iso = isotropic_poset(form, 2);
    CHECK(iso.levels[1].size() == 40);
    CHECK(iso.levels[2].size() == 40);
    auto repi = eposet_check(iso);
    CHECK(repi.pass);

    // trivial poset: d = 0
    SubspacePoset trivial = full_grassmann(4, 2, 0);
    auto rept = eposet_check(trivial);
    CHECK(rept.pass);
}

TEST_CASE("containment graph product law") {
    // nontrivial three-level instance
    SubspacePoset gr = full_grassmann(4, 3, 3);
    double prod = 1;
    for (int t = 0; t < 3; ++t) prod *= lambda2(containment_graph(gr, t, t + 1)).lambda2;
    // the interesting slice avoids the singleton bottom level
    const double l13 = lambda2(containment_graph(gr, 1, 3)).lambda2;
    const double l12 = lambda2(containment_graph(gr, 1, 2)).lambda2;
    const double l23 = lambda2(containment_graph(gr, 2, 3)).lambda2;
    CHECK(l13 <= l12 * l23 + 1e-9);

    auto form = gf::SymplecticForm::standard(2, 3);
    SubspacePoset iso = isotropic_poset(form, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = i + 1; j <= 2; ++j) {
            double bound = 1;
            for (int t = i; t < j; ++t)
                bound *= lambda2(containment_graph(iso, t, t + 1)).lambda2;
            CHECK(lambda2(containment_graph(iso, i, j)).lambda2 <= bound + 1e-9);
        }
}

TEST_CASE("partite expansion from color pairs") {
    // all color-pair graphs of C_2(F_3) are lambda-expanders, so the
    // underlying graph is too
    auto c23 = build(BuildingSpec{BuildingKind::TypeC, 2, 3, {}});
    auto pair_rep = lambda2(swap_walk_colored(c23.cx, {1}, {2}));
    auto global = lambda2(c23.cx);
    CHECK(global.lambda2 <= pair_rep.lambda2 + 1e-9);
}

TEST_CASE("disconnected and budget errors") {
    Complex two = Complex::uniform({0, 1, 2, 3}, {}, {{0, 1}, {2, 3}});
    CHECK_THROWS_AS(lambda2(two), Disconnected);
}
