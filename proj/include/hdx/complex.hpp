#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hdx/errors.hpp"

namespace hdx {

using Rat = boost::rational<long long>;

std::string rat_to_string(const Rat& r);
Rat rat_from_string(const std::string& s);

using VIdx = std::uint32_t;           // internal vertex index
using VertexId = std::uint64_t;       // external id (JSON)
using Face = std::vector<VIdx>;       // sorted internal indices

constexpr int kNoColor = -1;

struct TopFace {
    Face verts;  // sorted, size dim+1
    Rat weight;  // positive, all top-face weights sum to 1
};

struct FaceDistribution {
    int level = 0;
    std::vector<Face> faces;  // sorted lexicographically
    std::vector<Rat> prob;    // aligned with faces, sums to 1
    std::size_t index_of(const Face& f) const;  // throws FaceNotInComplex
};

/// A pure weighted simplicial complex with optional partite coloring.
/// Immutable after construction; faces beyond the cached low levels are
/// enumerated on demand from the top faces.
class Complex {
public:
    Complex() = default;

    /// `colors[i] == kNoColor` for uncolored vertices; either all or none
    /// of the vertices may be colored. Weights must sum to 1; pass
    /// normalize=true to scale arbitrary positive weights.
    static Complex create(std::vector<VertexId> ids, std::vector<int> colors,
                          std::vector<TopFace> top_faces, bool normalize = false);

    /// Uniform weight on the given top faces.
    static Complex uniform(std::vector<VertexId> ids, std::vector<int> colors,
                           std::vector<Face> top_faces);

    /// Complete complex on n vertices (dimension n-1); Delta_d in the usual
    /// indexing is complete_complex(d+1).
    static Complex complete(std::size_t n);

    int dim() const { return dim_; }
    std::size_t num_vertices() const { return ids_.size(); }
    const std::vector<VertexId>& vertex_ids() const { return ids_; }
    const std::vector<int>& colors() const { return colors_; }
    bool is_partite() const { return partite_; }
    std::set<int> color_set() const;
    const std::vector<TopFace>& top_faces() const { return tops_; }

    VIdx index_of_id(VertexId id) const;

    /// All i-faces with their marginal probabilities. Cached for i <= 2.
    const FaceDistribution& level(int i) const;

    bool has_face(const Face& f) const;

    /// Neighbors in the underlying graph (cached adjacency).
    const std::vector<std::vector<VIdx>>& adjacency() const;

    std::string to_json() const;
    static Complex from_json(const std::string& text);

    std::optional<std::uint32_t> field_p;  // metadata for building-derived complexes

private:
    void validate();

    int dim_ = -1;
    bool partite_ = false;
    std::vector<VertexId> ids_;
    std::vector<int> colors_;
    std::vector<TopFace> tops_;
    mutable std::map<int, FaceDistribution> level_cache_;
    mutable std::vector<std::vector<VIdx>> adj_;
};

// --- operations ---------------------------------------------------------

/// Link of s: vertices are neighbors of s, top faces are t \\ s for top
/// faces t containing s, weights renormalized.
Complex link(const Complex& x, const Face& s);

/// Join: disjoint vertex union, faces are unions of one face per factor,
/// weights multiply. Colors are offset so parts occupy disjoint ranges.
Complex join(const std::vector<Complex>& parts);

/// Color restriction X^I for partite X.
Complex color_restrict(const Complex& x, const std::set<int>& I);

/// k-skeleton: top faces are the k-faces with marginal weights (coloring
/// is dropped; a proper skeleton is no longer partite).
Complex skeleton(const Complex& x, int k);

/// Clique complex of a graph: faces are cliques of size <= d+1, uniform
/// weight on the (d+1)-cliques. Throws NoCliquesAtLevel if none exist.
Complex clique_complex(const Complex& graph, int d);

/// True when x equals the clique complex of its own 1-skeleton.
bool is_clique_complex(const Complex& x);

FaceDistribution face_distribution(const Complex& x, int i);

/// Max BFS eccentricity of the underlying graph; throws Disconnected.
int diameter(const Complex& x);

int connected_components(const Complex& x);

/// Face of given external ids (sorted internally).
Face face_of_ids(const Complex& x, const std::vector<VertexId>& ids);

bool complexes_isomorphic_by_id(const Complex& a, const Complex& b);

/// Weighted equality: same vertex ids, same top faces and weights.
bool weighted_equal(const Complex& a, const Complex& b);

}  // namespace hdx
