#include <doctest.h>

#include <numeric>

#include "hdx/covers.hpp"
#include "hdx/standard_complexes.hpp"

using namespace hdx;

TEST_CASE("coboundaries give disconnected covers, cocycles connected ones") {
    Complex t = torus7();
    auto cs = cocycle_space(t, 3);
    REQUIRE(cs.witness.has_value());

    // phi in B^1: delta of a potential
    FiniteGroup z3 = FiniteGroup::cyclic(3);
    Cochain h = identity_cochain(t, 0, z3);
    h.values = {0, 1, 2, 0, 1, 2, 0};
    Cochain cob = delta(t, h);
    auto cover_cob = cover_from_cocycle(t, cob);
    CHECK_FALSE(cover_cob.connected);
    CHECK(connected_components(cover_cob.total) == 3);
    CHECK(verify_cover(cover_cob).pass);

    // the identity cochain: ell disjoint copies
    auto cover_id = cover_from_cocycle(t, identity_cochain(t, 1, z3));
    CHECK(connected_components(cover_id.total) == 3);

    // a cocycle outside B^1: connected 3-cover of 21 vertices
    Cochain phi = cochain_from_coeffs(t, 3, *cs.witness);
    auto cover = cover_from_cocycle(t, phi);
    CHECK(cover.connected);
    CHECK(cover.total.num_vertices() == 21);
    CHECK(verify_cover(cover).pass);

    // non-cocycles are rejected
    Cochain bad = identity_cochain(t, 1, z3);
    bad.values[0] = 1;
    CHECK_THROWS_AS(cover_from_cocycle(t, bad), NotCocycle);
}

TEST_CASE("connectivity criterion over a sample spanning Z^1") {
    Complex t = torus7();
    auto cs = cocycle_space(t, 3);
    gf::FieldPrime f3(3);
    SplitMix64 rng(17);
    int connected_seen = 0, disconnected_seen = 0;
    for (int trial = 0; trial < 20; ++trial) {
        // random combination of the Z^1 basis
        std::vector<std::uint32_t> coeffs(cs.z_basis.cols(), 0);
        for (std::size_t r = 0; r < cs.z_basis.rows(); ++r) {
            const std::uint32_t c = static_cast<std::uint32_t>(rng.below(3));
            if (c == 0) continue;
            for (std::size_t e = 0; e < cs.z_basis.cols(); ++e)
                coeffs[e] = f3.add(coeffs[e], f3.mul(c, cs.z_basis.at(r, e)));
        }
        // in B^1 iff stacking onto the B basis keeps the rank
        gf::Mat stacked = cs.b_basis;
        stacked.append_row(coeffs);
        const bool in_b = gf::rank(stacked, f3) == cs.b_basis.rows();
        Cochain phi = cochain_from_coeffs(t, 3, coeffs);
        auto cover = cover_from_cocycle(t, phi);
        CHECK(cover.connected == !in_b);
        CHECK(verify_cover(cover).pass);
        ++(cover.connected ? connected_seen : disconnected_seen);
    }
    CHECK(connected_seen > 0);
    CHECK(disconnected_seen > 0);
}

TEST_CASE("fiber regularity: every face has exactly ell disjoint lifts") {
    Complex t = torus7();
    auto cs = cocycle_space(t, 3);
    Cochain phi = cochain_from_coeffs(t, 3, *cs.witness);
    auto cover = cover_from_cocycle(t, phi);
    for (int lvl = 0; lvl <= t.dim(); ++lvl) {
        const auto& base_faces = t.level(lvl);
        const auto& lift_faces = cover.total.level(lvl);
        std::map<Face, int> counts;
        for (const auto& f : lift_faces.faces) {
            Face img;
            for (VIdx v : f) img.push_back(cover.rho[v]);
            std::sort(img.begin(), img.end());
            img.erase(std::unique(img.begin(), img.end()), img.end());
            if (img.size() == f.size()) ++counts[img];
        }
        for (const auto& f : base_faces.faces) CHECK(counts[f] == 3);
    }
}

TEST_CASE("tower on the torus: 7 -> 21 -> 63 -> 189") {
    Complex t = torus7();
    auto res = tower(t, 3, 180);
    REQUIRE_FALSE(res.fail);
    REQUIRE(res.log.size() == 3);
    CHECK(res.log[0].vertices == 7);
    CHECK(res.log[1].vertices == 21);
    CHECK(res.log[2].vertices == 63);
    CHECK(res.complexes.back().num_vertices() == 189);
    for (const auto& step : res.log) {
        CHECK(step.connected);
        CHECK(step.dim_z1 - step.dim_b1 == 2);  // surface covers stay tori
    }
}

TEST_CASE("tower fails on simply connected complexes") {
    auto res = tower(Complex::complete(6), 3, 100);
    CHECK(res.fail);
    CHECK(res.fail_reason.find("FAIL") != std::string::npos);

    auto res_tri = tower(Complex::complete(3), 2, 100);
    CHECK(res_tri.fail);
}

TEST_CASE("deck quotient round trip") {
    Complex t = torus7();
    auto cs = cocycle_space(t, 3);
    Cochain phi = cochain_from_coeffs(t, 3, *cs.witness);
    auto cover = cover_from_cocycle(t, phi);
    auto elems = cyclic_deck_elements(cover);
    REQUIRE(elems.size() == 2);

    auto res = deck_quotient_check(cover.total, elems);
    CHECK(res.cover_check.pass);
    CHECK(res.min_orbit_distance == 3);  // a non-face triangle has holonomy
    CHECK_FALSE(res.strict_properness);
    // the quotient is the torus again (vertex ids divided by the sheet count)
    std::vector<VertexId> relabeled;
    for (auto id : res.quotient.vertex_ids()) relabeled.push_back(id / 3);
    Complex q = Complex::create(relabeled, {}, res.quotient.top_faces());
    CHECK(weighted_equal(q, t));
}

TEST_CASE("non-free actions are rejected") {
    Complex t = torus7();
    std::vector<VIdx> ident(7);
    std::iota(ident.begin(), ident.end(), 0);
    CHECK_THROWS_AS(deck_quotient_check(t, {ident}), NotProper);
}

TEST_CASE("verify_cover catches a collapsing map") {
    Complex t = torus7();
    CoverMap bogus;
    bogus.total = t;
    bogus.base = t;
    bogus.sheets = 1;
    bogus.rho.assign(7, 0);
    bogus.rho[1] = 1;  // everything else collapses to vertex 0
    auto rep = verify_cover(bogus);
    CHECK_FALSE(rep.pass);
}

TEST_CASE("strict clique mode") {
    Complex t = torus7();
    auto cs = cocycle_space(t, 2);
    Cochain phi = cochain_from_coeffs(t, 2, *cs.witness);
    CHECK_THROWS_AS(cover_from_cocycle(t, phi, /*strict_clique=*/true),
                    NotCliqueComplex);
    // the moebius band is a clique complex and passes strict mode
    Complex m = moebius9();
    auto csm = cocycle_space(m, 2);
    REQUIRE(csm.witness.has_value());
    Cochain phim = cochain_from_coeffs(m, 2, *csm.witness);
    auto cover = cover_from_cocycle(m, phim, /*strict_clique=*/true);
    CHECK(cover.connected);
    CHECK(verify_cover(cover).pass);
}
