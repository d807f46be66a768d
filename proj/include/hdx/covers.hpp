#pragma once

#include "hdx/cohomology.hpp"
#include "hdx/complex.hpp"

namespace hdx {

struct CoverMap {
    Complex total;             // Y
    Complex base;              // X
    std::vector<VIdx> rho;     // Y vertex index -> X vertex index
    int sheets = 1;            // ell
    bool connected = false;
    std::vector<VIdx> deck;    // sheet-shift permutation (cyclic covers)
};

/// The cover X^phi: vertices X(0) x [ell], edges (v,i) ~ (u, phi(uv).i),
/// faces the lifts of the base faces (for clique complexes these are
/// exactly the cliques of the cover graph). phi must be a cocycle.
/// strict_clique additionally insists that X reconstructs as the clique
/// complex of its 1-skeleton.
CoverMap cover_from_cocycle(const Complex& x, const Cochain& phi,
                            bool strict_clique = false);

struct CoverReport {
    bool pass = true;
    std::string detail;
};

/// Checks surjectivity, the face homomorphism property, fiber sizes, and
/// the link-isomorphism clause at every vertex of the total space.
CoverReport verify_cover(const CoverMap& cover);

struct TowerStep {
    std::size_t vertices = 0;
    int dim_z1 = 0, dim_b1 = 0;
    bool connected = false;
    std::string cocycle;  // edge coefficients of the cocycle used
};

/// FAIL is a result value so the log is always well formed.
struct TowerResult {
    bool fail = false;
    std::string fail_reason;
    std::vector<TowerStep> log;
    std::vector<Complex> complexes;  // X_0, X_1, ..., final
};

/// Iterates the cover construction with a deterministic cocycle choice
/// until the vertex target is reached or no cocycle outside B^1 exists.
TowerResult tower(const Complex& x0, int ell, std::size_t n_target,
                  std::size_t max_steps = 64);

struct DeckQuotientResult {
    Complex quotient;
    int min_orbit_distance = 0;   // min over group elements and vertices
    bool strict_properness = false;  // distance >= 4 everywhere
    std::pair<VertexId, VertexId> properness_witness{0, 0};
    CoverReport cover_check;
};

/// Quotient of Y by a free simplicial action, given as the list of all
/// non-identity permutations of Y's vertex indices. Orbits of distance
/// < 3 make the quotient degenerate and raise NotProper; distances in
/// [3, 4) are allowed but flagged (strict_properness = false).
DeckQuotientResult deck_quotient_check(const Complex& y,
                                       const std::vector<std::vector<VIdx>>& elements);

/// The non-identity deck permutations of a cyclic cover.
std::vector<std::vector<VIdx>> cyclic_deck_elements(const CoverMap& cover);

}  // namespace hdx
