#pragma once

#include <functional>
#include <optional>
#include <sstream>

#include "hdx/complex.hpp"
#include "hdx/gf.hpp"
#include "hdx/rng.hpp"

namespace hdx {

enum class MoveKind { BTInsert, BTDelete, TRInsert, TRDelete };

inline const char* move_kind_name(MoveKind k) {
    switch (k) {
        case MoveKind::BTInsert: return "BTInsert";
        case MoveKind::BTDelete: return "BTDelete";
        case MoveKind::TRInsert: return "TRInsert";
        case MoveKind::TRDelete: return "TRDelete";
    }
    return "?";
}

/// One rewrite of a based loop:
///   BTInsert(pos, w): (..u..)        -> (..u, w, u..)   at position pos
///   BTDelete(pos):    (..u, w, u..)  -> (..u..)         pattern starts at pos
///   TRInsert(pos, w): (..u, v..)     -> (..u, w, v..)   edge at pos, uwv a triangle
///   TRDelete(pos):    (..u, w, v..)  -> (..u, v..)      pattern starts at pos
template <typename V>
struct Move {
    MoveKind kind;
    std::size_t pos = 0;
    std::optional<V> vertex;  // payload for the insert moves
};

/// A based closed walk: seq.front() == seq.back() == base; the trivial
/// loop is a single-entry sequence.
template <typename V>
using Loop = std::vector<V>;

template <typename V>
struct Contraction {
    Loop<V> start;
    std::vector<Move<V>> moves;

    std::size_t tr_count() const {
        std::size_t n = 0;
        for (const auto& m : moves)
            if (m.kind == MoveKind::TRInsert || m.kind == MoveKind::TRDelete) ++n;
        return n;
    }
};

/// Adjacency/triangle oracle; lets the same replay checker run against
/// materialized complexes and against predicate-backed buildings.
template <typename V>
struct TriangleOracle {
    virtual ~TriangleOracle() = default;
    virtual bool is_vertex(const V& v) const = 0;
    virtual bool is_edge(const V& a, const V& b) const = 0;
    virtual bool is_triangle(const V& a, const V& b, const V& c) const = 0;
};

template <typename V>
struct ReplayResult {
    bool ok = true;
    std::string error;
    std::size_t failed_move = 0;
    Loop<V> final_loop;
};

template <typename V>
bool is_closed_walk(const TriangleOracle<V>& x, const Loop<V>& loop) {
    if (loop.empty()) return false;
    if (!(loop.front() == loop.back())) return false;
    for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
        if (loop[i] == loop[i + 1]) return false;
        if (!x.is_edge(loop[i], loop[i + 1])) return false;
    }
    return true;
}

/// Applies the move list from the start loop, verifying every side
/// condition against the oracle; sound iff the final loop is trivial.
template <typename V>
ReplayResult<V> replay(const TriangleOracle<V>& x, const Contraction<V>& c) {
    ReplayResult<V> out;
    Loop<V> seq = c.start;
    if (!is_closed_walk(x, seq) && seq.size() != 1) {
        out.ok = false;
        out.error = "start is not a closed walk";
        return out;
    }
    for (std::size_t mi = 0; mi < c.moves.size(); ++mi) {
        const auto& m = c.moves[mi];
        auto fail = [&](const std::string& why) {
            out.ok = false;
            out.failed_move = mi;
            out.error = std::string(move_kind_name(m.kind)) + "@" +
                        std::to_string(m.pos) + ": " + why;
        };
        switch (m.kind) {
            case MoveKind::BTInsert: {
                if (m.pos >= seq.size() || !m.vertex) return fail("bad position"), out;
                const V& u = seq[m.pos];
                if (!x.is_edge(u, *m.vertex)) return fail("not an edge"), out;
                seq.insert(seq.begin() + m.pos + 1, {*m.vertex, u});
                break;
            }
            case MoveKind::BTDelete: {
                if (m.pos + 2 >= seq.size()) return fail("bad position"), out;
                if (!(seq[m.pos] == seq[m.pos + 2]))
                    return fail("not a backtrack"), out;
                seq.erase(seq.begin() + m.pos + 1, seq.begin() + m.pos + 3);
                break;
            }
            case MoveKind::TRInsert: {
                if (m.pos + 1 >= seq.size() || !m.vertex) return fail("bad position"), out;
                if (!x.is_triangle(seq[m.pos], *m.vertex, seq[m.pos + 1]))
                    return fail("apex does not form a triangle"), out;
                seq.insert(seq.begin() + m.pos + 1, *m.vertex);
                break;
            }
            case MoveKind::TRDelete: {
                if (m.pos + 2 >= seq.size()) return fail("bad position"), out;
                if (!x.is_triangle(seq[m.pos], seq[m.pos + 1], seq[m.pos + 2]))
                    return fail("pattern is not a triangle"), out;
                seq.erase(seq.begin() + m.pos + 1);
                break;
            }
        }
        if (!out.ok) return out;
    }
    out.final_loop = seq;
    if (seq.size() != 1) {
        out.ok = false;
        out.error = "final loop is not trivial";
    }
    return out;
}

/// Records moves while applying them; generators build contractions
/// through this so the emitted move list always matches the rewrite.
template <typename V>
class LoopEditor {
public:
    explicit LoopEditor(Loop<V> start) : start_(start), seq_(std::move(start)) {}

    const Loop<V>& seq() const { return seq_; }
    std::size_t size() const { return seq_.size(); }

    void bt_insert(std::size_t pos, const V& w) {
        moves_.push_back({MoveKind::BTInsert, pos, w});
        seq_.insert(seq_.begin() + pos + 1, {w, seq_[pos]});
    }
    void bt_delete(std::size_t pos) {
        moves_.push_back({MoveKind::BTDelete, pos, std::nullopt});
        seq_.erase(seq_.begin() + pos + 1, seq_.begin() + pos + 3);
    }
    void tr_insert(std::size_t pos, const V& w) {
        moves_.push_back({MoveKind::TRInsert, pos, w});
        seq_.insert(seq_.begin() + pos + 1, w);
    }
    void tr_delete(std::size_t pos) {
        moves_.push_back({MoveKind::TRDelete, pos, std::nullopt});
        seq_.erase(seq_.begin() + pos + 1);
    }

    /// Removes all (u,w,u) backtracks.
    void normalize() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i + 2 < seq_.size(); ++i) {
                if (seq_[i] == seq_[i + 2]) {
                    bt_delete(i);
                    changed = true;
                    break;
                }
            }
        }
    }

    Contraction<V> finish() const { return {start_, moves_}; }

private:
    Loop<V> start_;
    Loop<V> seq_;
    std::vector<Move<V>> moves_;
};

// --- cones over materialized complexes ------------------------------------

/// Decoding cone: base vertex, a walk to every vertex, and a contraction
/// for every oriented edge. Contractions are produced on demand so cones
/// over predicate-backed complexes stay lazy.
struct Cone {
    VIdx base = 0;
    std::vector<Loop<VIdx>> paths;  // per vertex index
    std::function<Contraction<VIdx>(VIdx, VIdx)> contract;
};

struct ConeValidation {
    bool pass = true;
    int diameter = 0;  // max TR moves over the checked contractions
    std::size_t edges_checked = 0;
    std::string first_failure;
};

struct ComplexTriangleOracle final : TriangleOracle<VIdx> {
    const Complex* x;
    explicit ComplexTriangleOracle(const Complex& c) : x(&c) {}
    bool is_vertex(const VIdx& v) const override { return v < x->num_vertices(); }
    bool is_edge(const VIdx& a, const VIdx& b) const override;
    bool is_triangle(const VIdx& a, const VIdx& b, const VIdx& c) const override;
};

/// Checks clause by clause: paths are walks from the base, every edge's
/// contraction starts at P_u (u,w) P_w^{-1} and replays to the trivial loop.
ConeValidation validate_cone(const Complex& x, const Cone& cone);

/// 1 / (binom(k+1,3) * diameter); the caller asserts Aut-transitivity on
/// k-faces (recorded, not verified).
Rat cone_bound(int diameter, int k);

/// Cone on a complex with a dominating base vertex: direct paths.
Cone star_cone(const Complex& x, VIdx base);

/// The explicit join cone: base in the first factor, two-step paths, same
/// side edges contract with one triangle, cross edges ladder along a
/// shortest path in the first factor.
struct JoinConeResult {
    Complex z;
    Cone cone;
    int diam_a1 = 0;
};

JoinConeResult join_cone(const Complex& a1, const Complex& a2);

// --- the symplectic engine -------------------------------------------------

/// Color set {i0 < i1 < i2} admissible for the contraction pipeline:
/// i1 >= 2 i0, i2 >= 3 i1, 17 i1 <= 2g.
bool admissible_colors(std::uint32_t g, const std::array<int, 3>& dims);

/// Predicate-backed tripartite building C_g^I: vertices are isotropic
/// subspaces with dim in I, edges are containments, triangles are flags.
struct SymplecticOracle final : TriangleOracle<gf::Subspace> {
    gf::SymplecticForm form;
    std::array<int, 3> dims;
    SymplecticOracle(gf::SymplecticForm f, std::array<int, 3> d)
        : form(std::move(f)), dims(d) {}
    bool is_vertex(const gf::Subspace& v) const override;
    bool is_edge(const gf::Subspace& a, const gf::Subspace& b) const override;
    bool is_triangle(const gf::Subspace& a, const gf::Subspace& b,
                     const gf::Subspace& c) const override;
};

class SymplecticConeEngine {
public:
    SymplecticConeEngine(std::uint32_t g, std::uint32_t p, std::array<int, 3> dims);

    const SymplecticOracle& oracle() const { return oracle_; }
    const gf::Subspace& base() const { return base_; }

    /// Walk from the base whose interior avoids the top color.
    Loop<gf::Subspace> path_to(const gf::Subspace& u) const;

    /// Contraction of an arbitrary closed walk of length <= 11.
    Contraction<gf::Subspace> contract_loop(const Loop<gf::Subspace>& loop) const;

    /// Contraction of the canonical edge loop P_u (u,w) P_w^{-1}.
    Contraction<gf::Subspace> contract_edge(const gf::Subspace& u,
                                            const gf::Subspace& w) const;

    std::pair<gf::Subspace, gf::Subspace> random_edge(SplitMix64& rng) const;

private:
    void splice_and_tile(LoopEditor<gf::Subspace>& ed, std::size_t lo,
                         std::size_t hi) const;
    void eliminate_top_color(LoopEditor<gf::Subspace>& ed) const;

    gf::SymplecticForm form_;
    std::array<int, 3> dims_;
    SymplecticOracle oracle_;
    gf::Subspace base_;
};

struct SymplecticConeReport {
    int sampled_edges = 0;
    int diameter = 0;  // max tr_count over samples; sampled, not global
    bool sampled = true;
    bool all_valid = true;
    Rat bound{0};
    std::vector<int> tr_counts;
    std::string first_failure;
};

/// Samples edges, contracts their canonical loops, validates every move
/// by replay, and reports the sampled diameter with the k=2 cone bound.
SymplecticConeReport build_symplectic_cone(std::uint32_t g, std::uint32_t p,
                                           std::array<int, 3> dims,
                                           int sample_edges, std::uint64_t seed);

/// JSON trace of a contraction (moves mandatory, loop states optional).
std::string contraction_to_json(const Contraction<gf::Subspace>& c,
                                bool with_states = false);

}  // namespace hdx
