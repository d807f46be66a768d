#include <doctest.h>

#include "hdx/buildings.hpp"
#include "hdx/cohomology.hpp"
#include "hdx/standard_complexes.hpp"

using namespace hdx;

namespace {

bool is_identity_cochain(const Cochain& f) {
    for (int v : f.values)
        if (v != f.group.id()) return false;
    return true;
}

}  // namespace

TEST_CASE("delta of a constant vanishes; delta composes to the identity") {
    Complex d6 = Complex::complete(7);
    Complex t = torus7();
    Complex c22 = build(BuildingSpec{BuildingKind::TypeC, 2, 2, {}}).cx;

    for (const Complex* x : {&d6, &t, &c22}) {
        for (const FiniteGroup& g :
             {FiniteGroup::cyclic(2), FiniteGroup::cyclic(5), FiniteGroup::symmetric(3)}) {
            Cochain constant = identity_cochain(*x, 0, g);
            std::fill(constant.values.begin(), constant.values.end(), g.order() - 1);
            CHECK(is_identity_cochain(delta(*x, constant)));

            SplitMix64 rng(2024);
            for (int trial = 0; trial < 100; ++trial) {
                Cochain h = random_cochain(*x, 0, g, rng);
                CHECK(is_identity_cochain(delta(*x, delta(*x, h))));
                Cochain c = random_cochain(*x, -1, g, rng);
                CHECK(is_identity_cochain(delta(*x, delta(*x, c))));
            }
        }
    }
}

TEST_CASE("hand-computed delta over Z/3 on four vertices") {
    Complex d3 = Complex::complete(4);
    FiniteGroup z3 = FiniteGroup::cyclic(3);
    Cochain h = identity_cochain(d3, 0, z3);
    h.values = {1, 2, 0, 1};  // h(0)=1, h(1)=2, h(2)=0, h(3)=1
    Cochain dh = delta(d3, h);
    const auto& edges = d3.level(1);
    // delta h (a,b) = h(a) - h(b) mod 3 on the sorted orientation
    auto val = [&](VIdx a, VIdx b) { return dh.values[edges.index_of({a, b})]; };
    CHECK(val(0, 1) == (1 - 2 + 3) % 3);
    CHECK(val(0, 2) == (1 - 0) % 3);
    CHECK(val(1, 3) == (2 - 1) % 3);
    CHECK(val(2, 3) == (0 - 1 + 3) % 3);
}

TEST_CASE("weights") {
    Complex d3 = Complex::complete(4);
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    Cochain f = identity_cochain(d3, 1, z2);
    CHECK(weight(d3, f) == Rat(0));
    f.values[0] = 1;  // a single edge of the six
    CHECK(weight(d3, f) == Rat(1, 6));

    Cochain ind = identity_cochain(d3, 0, z2);
    ind.values[0] = 1;  // indicator of vertex 0
    CHECK(weight(d3, delta(d3, ind)) == Rat(3, 6));
}

TEST_CASE("cocycle space dimensions") {
    FiniteGroup z3 = FiniteGroup::cyclic(3);
    (void)z3;
    Complex d5 = Complex::complete(6);
    auto cs = cocycle_space(d5, 3);
    CHECK(cs.dim_z1 == 5);
    CHECK(cs.dim_b1 == 5);
    CHECK_FALSE(cs.witness.has_value());

    Complex t = torus7();
    for (int ell : {2, 3, 5}) {
        auto ct = cocycle_space(t, ell);
        CHECK(ct.dim_b1 == 6);
        CHECK(ct.dim_z1 == 8);
        CHECK(ct.witness.has_value());
    }

    Complex tri = Complex::complete(3);
    auto c3 = cocycle_space(tri, 2);
    CHECK(c3.dim_z1 == c3.dim_b1);

    // B^1 is contained in Z^1: stacking does not increase the rank
    auto ct = cocycle_space(t, 3);
    gf::FieldPrime f3(3);
    gf::Mat stacked = ct.z_basis;
    for (std::size_t r = 0; r < ct.b_basis.rows(); ++r)
        stacked.append_row(ct.b_basis.row(r));
    CHECK(gf::rank(stacked, f3) == static_cast<std::size_t>(ct.dim_z1));
}

TEST_CASE("exact expansion of the triangle over Z/2") {
    Complex tri = Complex::complete(3);
    auto rep = expansion_exact(tri, FiniteGroup::cyclic(2));
    CHECK(rep.cocycles == 4);
    CHECK(rep.h1 == Rat(3));
    CHECK(rep.z_equals_b);
}

TEST_CASE("exact expansion of Delta_4 over Z/2 and sampled consistency") {
    Complex d4 = Complex::complete(5);
    auto rep = expansion_exact(d4, FiniteGroup::cyclic(2));
    CHECK(rep.h1 > Rat(0));
    CHECK(rep.z_equals_b);
    auto sam = expansion_sample(d4, FiniteGroup::cyclic(2), 300, 11);
    CHECK(sam.informative > 0);
    CHECK(sam.min_ratio >= boost::rational_cast<double>(rep.h1) - 1e-12);

    CHECK_THROWS_AS(expansion_exact(d4, FiniteGroup::symmetric(3)), BudgetExceeded);
}

TEST_CASE("exhaustive nonabelian expansion on the triangle") {
    Complex tri = Complex::complete(3);
    auto rep = expansion_exact(tri, FiniteGroup::symmetric(3));
    CHECK(rep.cocycles == 36);  // f(02) determined by f(01), f(12)
    CHECK(rep.h1 > Rat(0));
    CHECK(rep.z_equals_b);
}

TEST_CASE("torus: small ratios near cocycle directions") {
    Complex t = torus7();
    auto sam = expansion_sample(t, FiniteGroup::cyclic(3), 200, 5);
    CHECK(sam.informative > 0);
    CHECK(sam.min_ratio < 10.0);
}

TEST_CASE("cochain json round trip") {
    Complex t = torus7();
    SplitMix64 rng(8);
    Cochain f = random_cochain(t, 1, FiniteGroup::cyclic(5), rng);
    Cochain back = cochain_from_json(t, cochain_to_json(t, f));
    CHECK(back.values == f.values);
    CHECK(back.level == 1);
}
