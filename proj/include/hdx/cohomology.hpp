#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "hdx/complex.hpp"
#include "hdx/gf.hpp"
#include "hdx/group.hpp"
#include "hdx/rng.hpp"

namespace hdx {

/// A group-valued cochain on oriented i-faces, i in {-1,0,1,2}. Values are
/// stored once per unordered face (on the sorted orientation); other
/// orientations follow from the antisymmetry laws.
struct Cochain {
    int level = 0;
    FiniteGroup group;
    std::vector<int> values;  // aligned with Complex::level(level).faces
};

Cochain identity_cochain(const Complex& x, int level, const FiniteGroup& g);
Cochain random_cochain(const Complex& x, int level, const FiniteGroup& g,
                       SplitMix64& rng);

/// Value on an oriented tuple (size level+1) via the antisymmetry laws.
int eval_oriented(const Complex& x, const Cochain& f, std::span<const VIdx> tuple);

/// Checks the storage invariants (value sizes, level range); for abelian
/// level-2 cochains this is all there is, the alternation law is implicit
/// in the oriented evaluation.
void validate_cochain(const Complex& x, const Cochain& f);

/// Coboundary operator, level <= 1.
Cochain delta(const Complex& x, const Cochain& f);

Rat weight(const Complex& x, const Cochain& f);
Rat cochain_dist(const Complex& x, const Cochain& f, const Cochain& g);

/// Z^1 / B^1 over F_ell (prime) via incidence ranks. The witness is a
/// cocycle outside B^1 (first Z^1 basis vector independent of B^1 under
/// lexicographic pivoting), if one exists.
struct CocycleSpace {
    int dim_z1 = 0;
    int dim_b1 = 0;
    gf::Mat z_basis;  // rows = cocycles, columns = edges
    gf::Mat b_basis;
    std::optional<std::vector<std::uint32_t>> witness;
};

CocycleSpace cocycle_space(const Complex& x, int ell);

/// Level-1 cochain over Z/ell from an edge-coefficient vector.
Cochain cochain_from_coeffs(const Complex& x, int ell,
                            std::span<const std::uint32_t> coeffs);

/// Exhaustive cocycle-expansion constant: min over f not in Z^1 of
/// wt(delta f) / dist(f, Z^1), exact rationals.
struct ExpansionReport {
    Rat h1{0};
    bool z_equals_b = true;
    std::uint64_t cochains_scanned = 0;
    std::uint64_t cocycles = 0;
};

ExpansionReport expansion_exact(const Complex& x, const FiniteGroup& g,
                                std::uint64_t budget = 10'000'000);

/// Monte-Carlo surrogate; the reported ratio is an upper-bound estimate of
/// h^1, never a certificate. dist(f, Z^1) is approximated from above by
/// randomized vertex-potential descent against the coboundary coset.
struct SampleReport {
    double min_ratio = std::numeric_limits<double>::infinity();
    std::uint64_t trials = 0;
    std::uint64_t informative = 0;  // trials with delta f != 1
};

SampleReport expansion_sample(const Complex& x, const FiniteGroup& g,
                              std::uint64_t trials, std::uint64_t seed);

std::string cochain_to_json(const Complex& x, const Cochain& f);
Cochain cochain_from_json(const Complex& x, const std::string& text);

}  // namespace hdx
