#pragma once

#include "hdx/complex.hpp"
#include "hdx/rng.hpp"

namespace hdx {

/// Faces complex F^r X: vertices are the r-faces of X, top faces are the
/// maximal disjoint collections whose union is a face. Vertex ids are the
/// positions of the r-faces in X.level(r) (coloring is dropped).
Complex faces_complex(const Complex& x, int r, std::uint64_t budget = 10'000'000);

/// F^r(X_{union s}) for a collection s of pairwise-disjoint r-faces of X.
Complex faces_link(const Complex& x, int r, const std::vector<Face>& s,
                   std::uint64_t budget = 10'000'000);

/// Equality of faces_link with the direct link of the faces complex,
/// compared through the underlying vertex-id tuples (exact weights).
bool faces_link_matches(const Complex& x, int r, const std::vector<Face>& s);

/// A set J = {c_1, ..., c_m} of mutually disjoint base-color sets; empty
/// blocks are allowed and participate in every top face.
struct ColorSet {
    std::vector<std::set<int>> blocks;

    bool mutually_disjoint() const;
    std::set<int> flat() const;
    std::string to_string() const;
};

struct WellSpreadReport {
    bool pass = true;
    std::string first_failure;
};

/// The pseudo-random spacing/interlacing conditions on color blocks:
/// disjointness, minimum gaps against {0, n}, bin-size and crowding
/// bounds over every 5-subset of J.
WellSpreadReport well_spread_check(const ColorSet& j, int n, int d1, int m);

struct WellSpreadEstimate {
    double p_hat = 0, lo = 0, hi = 0;
    int trials = 0, successes = 0;
};

/// Monte-Carlo frequency of well-spread color sets with a Wilson interval.
WellSpreadEstimate well_spread_probability(int n, int d1, int m, int trials,
                                           std::uint64_t seed);

/// The colored faces complex F^J X on a partite complex: one vertex per
/// face of color c_j (plus a placeholder per empty block); top faces are
/// partitions of X[union J] faces. Vertex ids index the side table.
struct ColoredFacesComplex {
    Complex cx;
    std::vector<std::pair<int, Face>> vertex_info;  // (block, face of x)
};

ColoredFacesComplex faces_restrict(const Complex& x, const ColorSet& j);

enum class BinClass { Crowded, Lonely, Empty };

struct TensorDecomposition {
    std::vector<Complex> factors;              // the link pieces S_w^{B_t}
    std::vector<ColorSet> factor_colors;       // J_t per bin
    std::vector<BinClass> bins;
    std::vector<std::vector<int>> bin_colors;  // B_t as global color lists
    bool product_law_verified = false;
};

/// Splits the link of w in a join along the color bins of col(w) and
/// verifies that the colored faces complex of the link is the tensor
/// product of the per-bin pieces (counts and exact distributions).
TensorDecomposition tensor_decompose_link(const std::vector<Complex>& join_parts,
                                          const std::vector<VertexId>& w_ids,
                                          const ColorSet& j);

}  // namespace hdx
