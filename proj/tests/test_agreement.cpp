#include <doctest.h>

#include <cmath>

#include "hdx/agreement.hpp"
#include "hdx/standard_complexes.hpp"

using namespace hdx;

TEST_CASE("test distribution shapes") {
    auto v = TestDistribution::v_test(15);
    CHECK(v.overlap == 4);
    CHECK(v.d() == 27);
    auto z = TestDistribution::z_test(15);
    CHECK(z.d() == 39);
    CHECK_THROWS_AS(TestDistribution::v_test(13), ParameterError);

    Complex d60 = Complex::complete(61);
    SplitMix64 rng(1);
    for (int t = 0; t < 50; ++t) {
        auto tup = v.sample(d60, rng);
        REQUIRE(tup.size() == 2);
        CHECK(tup[0].size() == 16);
        CHECK(tup[1].size() == 16);
        Face inter;
        std::set_intersection(tup[0].begin(), tup[0].end(), tup[1].begin(),
                              tup[1].end(), std::back_inserter(inter));
        CHECK(inter.size() == 4);
    }
    for (int t = 0; t < 50; ++t) {
        auto tup = z.sample(d60, rng);
        REQUIRE(tup.size() == 3);
        Face i12, i23, i13;
        std::set_intersection(tup[0].begin(), tup[0].end(), tup[1].begin(),
                              tup[1].end(), std::back_inserter(i12));
        std::set_intersection(tup[1].begin(), tup[1].end(), tup[2].begin(),
                              tup[2].end(), std::back_inserter(i23));
        std::set_intersection(tup[0].begin(), tup[0].end(), tup[2].begin(),
                              tup[2].end(), std::back_inserter(i13));
        CHECK(i12.size() == 4);
        CHECK(i23.size() == 4);
        CHECK(i13.empty());
    }
}

TEST_CASE("planted ensembles agree exactly") {
    Complex d7 = Complex::complete(8);
    auto v = TestDistribution::v_test(3);  // d = 5 <= 7
    std::vector<int> g(d7.num_vertices());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<int>(i % 3);
    auto f = plant(d7, g, 3, 0.0, 42);
    auto est = agree(d7, *f, v, 0, 0);
    CHECK(est.exact);
    CHECK(est.agree == doctest::Approx(1.0));

    // on Delta_60 the space is huge; Monte Carlo with a planted ensemble
    Complex d60 = Complex::complete(61);
    std::vector<int> g2(61, 1);
    auto f2 = plant(d60, g2, 2, 0.0, 7);
    auto big = agree(d60, *f2, TestDistribution::v_test(15), 2000, 3);
    CHECK_FALSE(big.exact);
    CHECK(big.agree == doctest::Approx(1.0));
}

TEST_CASE("iid ensembles agree at chance rate") {
    Complex d60 = Complex::complete(61);
    auto v = TestDistribution::v_test(15);
    auto f = iid_ensemble(d60, 2, 99);
    auto est = agree(d60, *f, v, 20000, 5);
    // overlap of 4 binary coordinates: 2^-4
    CHECK(std::abs(est.agree - 1.0 / 16) < 3 * std::sqrt((1.0 / 16) * (15.0 / 16) / 20000));
}

TEST_CASE("noise rate shows up in per-face disagreement") {
    Complex d7 = Complex::complete(8);
    std::vector<int> g(8, 0);
    auto f = plant(d7, g, 2, 0.05, 11);
    // measure empirical disagreement against g over many faces
    SplitMix64 rng(2);
    double diff = 0;
    int total = 0;
    const auto& lvl = d7.level(3);
    for (std::size_t i = 0; i < lvl.faces.size(); ++i) {
        auto vals = f->eval(lvl.faces[i]);
        for (std::size_t j = 0; j < vals.size(); ++j) {
            diff += vals[j] != 0;
            ++total;
        }
    }
    CHECK(diff / total == doctest::Approx(0.05).epsilon(0.5));
}

TEST_CASE("decoding a planted ensemble recovers the global function") {
    Complex d7 = Complex::complete(8);
    auto v = TestDistribution::v_test(3);
    std::vector<int> g{0, 1, 2, 0, 1, 2, 0, 1};
    auto f = plant(d7, g, 3, 0.0, 21);
    auto dec = decode_global(d7, *f, v, 0.0, 0, 0);
    CHECK(dec.exact);
    CHECK(dec.global == g);
    CHECK(dec.coord_agreement == doctest::Approx(1.0));
    CHECK(dec.face_explained == doctest::Approx(1.0));
    CHECK(dec.tuple_event == doctest::Approx(1.0));
}

TEST_CASE("iid ensembles decode to chance") {
    Complex d7 = Complex::complete(8);
    auto v = TestDistribution::v_test(3);
    auto f = iid_ensemble(d7, 2, 13);
    auto dec = decode_global(d7, *f, v, 0.0, 0, 0);
    CHECK(dec.coord_agreement < 0.75);
    CHECK(dec.coord_agreement > 0.4);  // plurality beats 1/2 slightly on ties
}

TEST_CASE("cover counterexample on the moebius band") {
    Complex m = moebius9();
    auto cs = cocycle_space(m, 2);
    REQUIRE(cs.witness.has_value());
    Cochain phi = cochain_from_coeffs(m, 2, *cs.witness);
    auto cover = cover_from_cocycle(m, phi);
    REQUIRE(cover.connected);  // the annulus double cover
    REQUIRE(verify_cover(cover).pass);

    // G distinguishes the cover sheets: its value is the cover vertex id
    std::vector<int> g(cover.total.num_vertices());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<int>(i);
    const int q = static_cast<int>(g.size());

    auto d = TestDistribution::custom(1, 1);  // edges overlapping in a vertex
    REQUIRE(d.d() == 2);
    auto f = plant_cover(m, phi, 2, g, q, 12345);
    auto est = agree(m, *f, d, 0, 0);
    CHECK(est.exact);
    CHECK(est.agree >= 0.4);
    CHECK(est.agree <= 0.65);

    // baseline: a plant explains everything
    std::vector<int> base_g(m.num_vertices(), 3);
    auto planted = plant(m, base_g, q, 0.0, 7);
    auto dec_plant = decode_global(m, *planted, d, 0.0, 0, 0);
    CHECK(dec_plant.coord_agreement == doctest::Approx(1.0));

    // the cover ensemble explains far less than the planted one
    auto dec_cover = decode_global(m, *f, d, 0.0, 0, 0);
    CHECK(dec_cover.coord_agreement <= 0.75 * dec_plant.coord_agreement);

    // a disconnected (coboundary) cover behaves like a mixture of plants:
    // agreement 1 with the sheet-respecting lift rule marginalized out is
    // not guaranteed pointwise, but every face is G-consistent on one copy
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    Cochain h = identity_cochain(m, 0, z2);
    for (std::size_t i = 0; i < h.values.size(); ++i) h.values[i] = i % 2;
    Cochain cob = delta(m, h);
    auto cover2 = cover_from_cocycle(m, cob);
    CHECK_FALSE(cover2.connected);
}

TEST_CASE("soundness sweep produces a monotone-ish curve") {
    Complex d7 = Complex::complete(8);
    auto v = TestDistribution::v_test(3);
    std::vector<int> g(8, 1);
    std::vector<double> params{0.0, 0.5, 1.0};
    auto e0 = mixture_ensemble(d7, g, 2, 0.0, 3);
    auto e1 = mixture_ensemble(d7, g, 2, 0.5, 3);
    auto e2 = mixture_ensemble(d7, g, 2, 1.0, 3);
    std::vector<std::pair<std::string, const Ensemble*>> fam{
        {"mixture", e0.get()}, {"mixture", e1.get()}, {"mixture", e2.get()}};
    auto rows = soundness_sweep(d7, v, fam, params, 0.0, 2000, 77);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].agree <= rows[1].agree + 0.05);
    CHECK(rows[1].agree <= rows[2].agree + 0.05);
    CHECK(rows[2].agree == doctest::Approx(1.0));
    auto csv = sweep_to_csv(rows);
    CHECK(csv.find("family,param,agree") != std::string::npos);
}
