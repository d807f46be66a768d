#pragma once

#include <map>
#include <set>

#include "hdx/complex.hpp"
#include "hdx/gf.hpp"
#include "hdx/rng.hpp"

namespace hdx {

enum class BuildingKind { TypeA, TypeC };

/// TypeA rank n: flags of proper nontrivial subspaces of F_p^n, vertex
/// colors are the dimensions 1..n-1. TypeC rank g: flags of nontrivial
/// isotropic subspaces of the standard symplectic F_p^{2g}, colors 1..g.
/// `colors` restricts to a subset of dimensions (empty = all).
struct BuildingSpec {
    BuildingKind kind = BuildingKind::TypeC;
    std::uint32_t rank = 2;
    std::uint32_t p = 2;
    std::set<int> colors;

    std::set<int> effective_colors() const;
    std::uint32_t ambient() const {
        return kind == BuildingKind::TypeA ? rank : 2 * rank;
    }
    std::string to_string() const;
};

struct BuildingComplex {
    Complex cx;
    std::vector<gf::Subspace> vertex_subspace;  // by internal index
    std::map<gf::Subspace, VIdx> index;
    BuildingSpec spec;
};

/// Materializes the (color-restricted) building with the uniform measure
/// on maximal flags. Throws BudgetExceeded before allocating too much.
BuildingComplex build(const BuildingSpec& spec, std::uint64_t budget = 10'000'000);

/// Join of buildings; at most one TypeC part, placed last.
struct SymplecticLikeSpec {
    std::vector<BuildingSpec> parts;
};

Complex build_symplectic_like(const SymplecticLikeSpec& spec,
                              std::uint64_t budget = 10'000'000);

/// Explicit isomorphism between the link of a dim-t vertex of C_g and the
/// join of a type-A building of rank t and C_{g-t}, built from subspace
/// containment below v and the quotient form above v.
struct LinkIsoReport {
    bool pass = false;
    std::string detail;
    Complex model;                                // the join it should match
    std::map<VertexId, VertexId> vertex_map;      // link ids -> model ids
};

LinkIsoReport building_link_iso(std::uint32_t g, std::uint32_t p,
                                const gf::Subspace& v);

/// Path between equal-dimensional isotropic subspaces in the bipartite
/// containment graph on dimensions {i, j}; every hop is a containment edge
/// between isotropic subspaces. Empty when v1 == v2.
std::vector<gf::Subspace> isotropic_path(const gf::SymplecticForm& form,
                                         const gf::Subspace& v1,
                                         const gf::Subspace& v2, int j);

/// Seeded random isotropic subspace of the given dimension.
gf::Subspace random_isotropic(const gf::SymplecticForm& form, int dim,
                              SplitMix64& rng);

/// Number of isotropic k-subspaces of the standard symplectic F_p^{2g}.
std::uint64_t count_isotropic(std::uint32_t g, std::uint32_t p, std::uint32_t k);

/// CLI spec strings: "C:g=2,p=3,I=1,2", "A:n=3,p=2"; joins with '+'.
BuildingSpec parse_building_spec(const std::string& text);
SymplecticLikeSpec parse_join_spec(const std::string& text);

}  // namespace hdx
