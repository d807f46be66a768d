#include <doctest.h>

#include "hdx/buildings.hpp"
#include "hdx/faces.hpp"
#include "hdx/standard_complexes.hpp"

using namespace hdx;

TEST_CASE("F^0 X is X itself") {
    Complex t = torus7();
    Complex f0 = faces_complex(t, 0);
    CHECK(weighted_equal(f0, Complex::create(t.vertex_ids(), {}, t.top_faces())));
}

TEST_CASE("F^1 of complete complexes: matchings") {
    Complex d5 = Complex::complete(6);
    Complex f1 = faces_complex(d5, 1);
    CHECK(f1.num_vertices() == 15);
    CHECK(f1.dim() == 2);
    CHECK(f1.top_faces().size() == 15);  // perfect matchings of K_6
    for (const auto& tf : f1.top_faces()) CHECK(tf.weight == Rat(1, 15));

    Complex d7 = Complex::complete(8);
    Complex f17 = faces_complex(d7, 1);
    CHECK(f17.num_vertices() == 28);
    CHECK(f17.top_faces().size() == 105);  // perfect matchings of K_8
}

TEST_CASE("faces complex dimension formula") {
    for (int n = 4; n <= 8; ++n)
        for (int r = 0; r <= 2; ++r) {
            Complex x = Complex::complete(n);
            if (r > x.dim()) continue;
            Complex fx = faces_complex(x, r);
            CHECK(fx.dim() == (x.dim() + 1) / (r + 1) - 1);
        }
}

TEST_CASE("faces_link equality") {
    Complex d7 = Complex::complete(8);
    SUBCASE("empty collection") { CHECK(faces_link_matches(d7, 1, {})); }
    SUBCASE("one edge of Delta_7") {
        CHECK(faces_link_matches(d7, 1, {face_of_ids(d7, {0, 1})}));
        // and the link is F^1(Delta_5)
        Complex lk = faces_link(d7, 1, {face_of_ids(d7, {0, 1})});
        CHECK(lk.num_vertices() == 15);
        CHECK(lk.top_faces().size() == 15);
    }
    SUBCASE("two disjoint edges") {
        CHECK(faces_link_matches(d7, 1, {face_of_ids(d7, {0, 1}), face_of_ids(d7, {2, 3})}));
    }
    SUBCASE("building skeleton") {
        auto c22 = build(BuildingSpec{BuildingKind::TypeC, 2, 2, {}});
        Complex sk = skeleton(c22.cx, 1);
        // F^1 over a graph: r = d, single-block collections = the edges
        Complex f = faces_complex(sk, 1);
        CHECK(f.num_vertices() == 45);
        CHECK(f.dim() == 0);
    }
}

TEST_CASE("F^1 of the torus is connected") {
    Complex t = torus7();
    Complex f = faces_complex(t, 0);
    CHECK(connected_components(f) == 1);
}

TEST_CASE("well-spread checks") {
    SUBCASE("overlapping blocks fail the first clause") {
        ColorSet j;
        for (int b = 0; b < 6; ++b) j.blocks.push_back({b, b + 1});
        auto rep = well_spread_check(j, 1000, 1, 6);
        CHECK_FALSE(rep.pass);
        CHECK(rep.first_failure.find("disjoint") != std::string::npos);
    }
    SUBCASE("evenly spread blocks pass") {
        const int n = 100000;
        ColorSet j;
        for (int b = 0; b < 6; ++b)
            j.blocks.push_back({(2 * b + 1) * n / 13, (2 * b + 2) * n / 13});
        auto rep = well_spread_check(j, n, 1, 6);
        INFO(rep.first_failure);
        CHECK(rep.pass);
    }
    SUBCASE("a clustered family fails a bin clause") {
        // six segregated runs of 100 consecutive colors: whole blocks land
        // inside single bins of the complement anchors
        const int n = 1000000, d1 = 99;
        ColorSet j;
        for (int b = 0; b < 6; ++b) {
            std::set<int> block;
            for (int i = 0; i <= d1; ++i) block.insert(b * 2000 + 1 + i);
            j.blocks.push_back(block);
        }
        auto rep = well_spread_check(j, n, d1, 6);
        CHECK_FALSE(rep.pass);
        CHECK(rep.first_failure.find("bin") != std::string::npos);
    }
}

TEST_CASE("well-spread probability is monotone on an n-grid") {
    const int d1 = 2, m = 6;
    std::vector<int> grid{200, 2000, 20000};
    std::vector<double> p;
    for (int n : grid) p.push_back(well_spread_probability(n, d1, m, 300, 99).p_hat);
    CHECK(p[0] <= p[1] + 0.05);
    CHECK(p[1] <= p[2] + 0.05);
    CHECK(p[2] > p[0]);
}

TEST_CASE("colored faces complex and the tensor law") {
    // join of three 3-point buildings: colors 0, 1, 2
    Complex p3a = Complex::uniform({0, 1, 2}, {0, 0, 0}, {{0}, {1}, {2}});
    Complex p3b = Complex::uniform({0, 1, 2}, {0, 0, 0}, {{0}, {1}, {2}});
    Complex p3c = Complex::uniform({0, 1, 2}, {0, 0, 0}, {{0}, {1}, {2}});

    SUBCASE("single color block: the restriction itself") {
        Complex z = join({p3a, p3b, p3c});
        ColorSet j;
        j.blocks.push_back({0, 2});
        auto fc = faces_restrict(z, j);
        // vertices: faces of colors {0,2} = 9 cross pairs
        CHECK(fc.cx.num_vertices() == 9);
        CHECK(fc.cx.dim() == 0);
    }

    SUBCASE("tensor decomposition at a vertex of a 3-part join") {
        ColorSet j;
        j.blocks.push_back({1});
        j.blocks.push_back({2});
        auto dec = tensor_decompose_link({p3a, p3b, p3c}, {0}, j);
        INFO("bins: ", dec.bins.size());
        CHECK(dec.product_law_verified);
        // col(w) = {0}: bins are (below 0) and {1, 2}: that bin is crowded
        REQUIRE(dec.bins.size() == 2);
        CHECK(dec.bins[0] == BinClass::Empty);
        CHECK(dec.bins[1] == BinClass::Crowded);
    }

    SUBCASE("lonely bins make complete-partite factors") {
        // w of color 1 in the middle: bins {0} and {2} are lonely for
        // J = {{0}, {2}}
        ColorSet j;
        j.blocks.push_back({0});
        j.blocks.push_back({2});
        auto dec = tensor_decompose_link({p3a, p3b, p3c}, {3}, j);  // vertex of part b
        CHECK(dec.product_law_verified);
        REQUIRE(dec.bins.size() == 2);
        CHECK(dec.bins[0] == BinClass::Lonely);
        CHECK(dec.bins[1] == BinClass::Lonely);
    }

    SUBCASE("building join instance") {
        // building colors start at 1, so the join occupies {1, 3, 5}
        auto a1 = build(BuildingSpec{BuildingKind::TypeA, 2, 2, {}});
        auto c1 = build(BuildingSpec{BuildingKind::TypeC, 1, 2, {}});
        ColorSet j;
        j.blocks.push_back({1});
        j.blocks.push_back({5});
        auto dec = tensor_decompose_link({a1.cx, a1.cx, c1.cx}, {}, j);
        CHECK(dec.product_law_verified);
    }
}
