#include <doctest.h>

#include "hdx/complex.hpp"
#include "hdx/standard_complexes.hpp"

using namespace hdx;

TEST_CASE("links") {
    Complex d4 = Complex::complete(5);
    Complex lk = link(d4, {0});
    CHECK(lk.dim() == 3);
    CHECK(lk.num_vertices() == 4);
    CHECK(lk.top_faces().size() == 1);

    Complex t = torus7();
    // link of an edge is a pair of vertices or longer cycle boundary
    Complex le = link(t, face_of_ids(t, {0, 1}));
    CHECK(le.dim() == 0);
    CHECK(le.num_vertices() == 2);
    // link of a vertex in the torus is a 6-cycle
    Complex lv = link(t, {0});
    CHECK(lv.dim() == 1);
    CHECK(lv.num_vertices() == 6);
    CHECK(lv.level(1).faces.size() == 6);
    CHECK(diameter(lv) == 3);
}

TEST_CASE("join counts and weights") {
    Complex d2a = Complex::complete(3);
    Complex d2b = Complex::complete(3);
    Complex j = join({d2a, d2b});
    CHECK(j.dim() == 5);
    CHECK(j.top_faces().size() == 1);

    // K3 as graphs: top faces multiply
    Complex k3a = Complex::uniform({0, 1, 2}, {}, {{0, 1}, {0, 2}, {1, 2}});
    Complex k3b = Complex::uniform({0, 1, 2}, {}, {{0, 1}, {0, 2}, {1, 2}});
    Complex jj = join({k3a, k3b});
    CHECK(jj.top_faces().size() == 9);
    for (const auto& t : jj.top_faces()) CHECK(t.weight == Rat(1, 9));

    // link(join(A,B), a) = link(A,a) v B
    Complex lk = link(jj, {0});
    Complex expect = join({link(k3a, {0}), k3b});
    CHECK(weighted_equal(Complex::create(lk.vertex_ids(), {}, lk.top_faces()),
                         Complex::create(expect.vertex_ids(), {}, expect.top_faces())));
}

TEST_CASE("partite law and color restriction") {
    // 2-partite path square: vertices 0,1 color 0; 2,3 color 1
    Complex x = Complex::uniform({0, 1, 2, 3}, {0, 1, 0, 1}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    CHECK(x.is_partite());
    Complex r0 = color_restrict(x, {0});
    CHECK(r0.dim() == 0);
    CHECK(r0.num_vertices() == 2);

    // restriction composes
    Complex tri = Complex::uniform({0, 1, 2}, {0, 1, 2}, {{0, 1, 2}});
    Complex r01 = color_restrict(tri, {0, 1});
    Complex r1a = color_restrict(r01, {1});
    Complex r1b = color_restrict(tri, {1});
    CHECK(weighted_equal(r1a, r1b));

    // partite violation: two vertices of the same color in one face
    CHECK_THROWS_AS(Complex::uniform({0, 1, 2}, {0, 0, 1}, {{0, 1, 2}}), NotPartite);
}

TEST_CASE("skeleton and face distributions") {
    Complex t = torus7();
    Complex sk = skeleton(t, 1);
    CHECK(sk.dim() == 1);
    CHECK(sk.top_faces().size() == 21);

    Complex d3 = Complex::complete(4);
    auto lvl0 = face_distribution(d3, 0);
    for (const auto& p : lvl0.prob) CHECK(p == Rat(1, 4));

    // marginal consistency: level i equals level i+1 pushed down
    for (int i = 0; i + 1 <= t.dim(); ++i) {
        auto lo = face_distribution(t, i);
        auto hi = face_distribution(t, i + 1);
        std::map<Face, Rat> push;
        for (std::size_t f = 0; f < hi.faces.size(); ++f) {
            const auto& face = hi.faces[f];
            for (std::size_t drop = 0; drop < face.size(); ++drop) {
                Face sub;
                for (std::size_t j = 0; j < face.size(); ++j)
                    if (j != drop) sub.push_back(face[j]);
                push[sub] += hi.prob[f] / Rat(static_cast<long long>(face.size()));
            }
        }
        for (std::size_t f = 0; f < lo.faces.size(); ++f)
            CHECK(push.at(lo.faces[f]) == lo.prob[f]);
    }

    // weighted 2-complex marginal by hand: faces {0,1,2} w 3/4, {1,2,3} w 1/4
    Complex w = Complex::create({0, 1, 2, 3}, {},
                                {{{0, 1, 2}, Rat(3, 4)}, {{1, 2, 3}, Rat(1, 4)}});
    auto edges = face_distribution(w, 1);
    CHECK(edges.prob[edges.index_of(face_of_ids(w, {1, 2}))] == Rat(3, 12) + Rat(1, 12));
    CHECK(edges.prob[edges.index_of(face_of_ids(w, {0, 1}))] == Rat(3, 12));
}

TEST_CASE("clique complexes") {
    Complex tri_graph = Complex::uniform({0, 1, 2}, {}, {{0, 1}, {0, 2}, {1, 2}});
    Complex cc = clique_complex(tri_graph, 2);
    CHECK(cc.top_faces().size() == 1);

    Complex c4 = Complex::uniform({0, 1, 2, 3}, {}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    CHECK_THROWS_AS(clique_complex(c4, 2), NoCliquesAtLevel);

    CHECK(is_clique_complex(moebius9()));
    CHECK_FALSE(is_clique_complex(torus7()));  // K7 skeleton, 14 of 35 triangles
}

TEST_CASE("diameter and connectivity") {
    Complex k5 = skeleton(Complex::complete(5), 1);
    CHECK(diameter(k5) == 1);
    std::vector<Face> hexagon;
    for (VIdx i = 0; i < 6; ++i) hexagon.push_back({i, static_cast<VIdx>((i + 1) % 6)});
    Complex c6 = Complex::uniform({0, 1, 2, 3, 4, 5}, {}, std::move(hexagon));
    CHECK(diameter(c6) == 3);

    Complex two = Complex::uniform({0, 1, 2, 3}, {}, {{0, 1}, {2, 3}});
    CHECK(connected_components(two) == 2);
    CHECK_THROWS_AS(diameter(two), Disconnected);
}

TEST_CASE("json round trip is byte exact") {
    Complex t = torus7();
    t.field_p = 2;
    const std::string a = t.to_json();
    Complex back = Complex::from_json(a);
    CHECK(back.to_json() == a);
    CHECK(weighted_equal(back, t));

    // partite complexes keep their colors
    Complex tri = Complex::uniform({5, 9, 11}, {0, 1, 2}, {{0, 1, 2}});
    Complex again = Complex::from_json(tri.to_json());
    CHECK(again.is_partite());
    CHECK(again.vertex_ids() == std::vector<VertexId>{5, 9, 11});
}

TEST_CASE("clique complex reproduces itself from its skeleton") {
    Complex m = moebius9();
    Complex rebuilt = clique_complex(skeleton(m, 1), 2);
    CHECK(weighted_equal(rebuilt, m));
}
