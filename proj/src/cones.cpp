#include "hdx/cones.hpp"

#include <algorithm>
#include <deque>
#include <json.hpp>

#include "hdx/buildings.hpp"

namespace hdx {

bool ComplexTriangleOracle::is_edge(const VIdx& a, const VIdx& b) const {
    if (a == b || x->dim() < 1) return false;
    Face f{std::min(a, b), std::max(a, b)};
    const auto& lvl = x->level(1);
    auto it = std::lower_bound(lvl.faces.begin(), lvl.faces.end(), f);
    return it != lvl.faces.end() && *it == f;
}

bool ComplexTriangleOracle::is_triangle(const VIdx& a, const VIdx& b,
                                        const VIdx& c) const {
    if (a == b || b == c || a == c || x->dim() < 2) return false;
    Face f{a, b, c};
    std::sort(f.begin(), f.end());
    const auto& lvl = x->level(2);
    auto it = std::lower_bound(lvl.faces.begin(), lvl.faces.end(), f);
    return it != lvl.faces.end() && *it == f;
}

ConeValidation validate_cone(const Complex& x, const Cone& cone) {
    ComplexTriangleOracle oracle(x);
    ConeValidation out;
    auto fail = [&](const std::string& why) {
        if (out.pass) out.first_failure = why;
        out.pass = false;
    };
    // clause 2: paths are walks from the base
    for (std::size_t v = 0; v < x.num_vertices(); ++v) {
        const auto& p = cone.paths[v];
        if (p.empty() || p.front() != cone.base || p.back() != static_cast<VIdx>(v)) {
            fail("path of vertex " + std::to_string(v) + " has wrong endpoints");
            continue;
        }
        for (std::size_t i = 0; i + 1 < p.size(); ++i)
            if (!oracle.is_edge(p[i], p[i + 1]))
                fail("path of vertex " + std::to_string(v) + " leaves the 1-skeleton");
    }
    // clause 3: contractions per oriented edge
    for (const auto& e : x.level(1).faces) {
        for (int dir = 0; dir < 2; ++dir) {
            const VIdx u = dir ? e[1] : e[0];
            const VIdx w = dir ? e[0] : e[1];
            Loop<VIdx> expect = cone.paths[u];
            expect.push_back(w);
            for (auto it = cone.paths[w].rbegin() + 1; it != cone.paths[w].rend(); ++it)
                expect.push_back(*it);
            Contraction<VIdx> c = cone.contract(u, w);
            if (c.start != expect) {
                fail("contraction start differs from P_u (u,w) P_w^-1");
                continue;
            }
            auto rr = replay(oracle, c);
            if (!rr.ok) {
                fail("edge (" + std::to_string(u) + "," + std::to_string(w) +
                     "): " + rr.error);
                continue;
            }
            out.diameter = std::max(out.diameter, static_cast<int>(c.tr_count()));
            ++out.edges_checked;
        }
    }
    return out;
}

Rat cone_bound(int diameter, int k) {
    long long ways = 1;  // binom(k+1, 3)
    const int n = k + 1;
    ways = static_cast<long long>(n) * (n - 1) * (n - 2) / 6;
    if (ways <= 0 || diameter <= 0) throw ParameterError("cone_bound needs k >= 2, diam >= 1");
    return Rat(1, ways * diameter);
}

Cone star_cone(const Complex& x, VIdx base) {
    Cone cone;
    cone.base = base;
    cone.paths.resize(x.num_vertices());
    for (std::size_t v = 0; v < x.num_vertices(); ++v) {
        if (v == base)
            cone.paths[v] = {base};
        else
            cone.paths[v] = {base, static_cast<VIdx>(v)};
    }
    cone.contract = [base](VIdx u, VIdx w) {
        Loop<VIdx> start;
        if (u == base)
            start = {base, w, base};
        else if (w == base)
            start = {base, u, base};
        else
            start = {base, u, w, base};
        LoopEditor<VIdx> ed(start);
        if (u != base && w != base) ed.tr_delete(1);  // triangle {u, w, base}
        ed.normalize();
        return ed.finish();
    };
    return cone;
}

JoinConeResult join_cone(const Complex& a1, const Complex& a2) {
    if (connected_components(a1) != 1)
        throw Disconnected("join_cone: first factor disconnected", connected_components(a1));
    if (connected_components(a2) != 1)
        throw Disconnected("join_cone: second factor disconnected", connected_components(a2));

    JoinConeResult out;
    out.z = join({a1, a2});
    const std::size_t n1 = a1.num_vertices();
    out.diam_a1 = a1.num_vertices() > 1 ? diameter(a1) : 0;

    // shortest paths inside the first factor from its vertex 0
    const VIdx base = 0;           // v1* = first vertex of A1
    const VIdx v2s = static_cast<VIdx>(n1);  // v2* = first vertex of A2
    std::vector<std::vector<VIdx>> a1_path(n1);
    {
        const auto& adj = a1.adjacency();
        std::vector<int> prev(n1, -1);
        std::deque<VIdx> q{base};
        prev[base] = static_cast<int>(base);
        while (!q.empty()) {
            VIdx v = q.front();
            q.pop_front();
            for (VIdx u : adj.empty() ? std::vector<VIdx>{} : adj[v])
                if (prev[u] == -1) {
                    prev[u] = static_cast<int>(v);
                    q.push_back(u);
                }
        }
        for (std::size_t v = 0; v < n1; ++v) {
            std::vector<VIdx> rev;
            VIdx cur = static_cast<VIdx>(v);
            rev.push_back(cur);
            while (cur != base) {
                cur = static_cast<VIdx>(prev[cur]);
                rev.push_back(cur);
            }
            a1_path[v].assign(rev.rbegin(), rev.rend());
        }
    }

    Cone cone;
    cone.base = base;
    cone.paths.resize(out.z.num_vertices());
    for (std::size_t v = 0; v < out.z.num_vertices(); ++v) {
        if (v == base)
            cone.paths[v] = {base};
        else if (v >= n1)
            cone.paths[v] = {base, static_cast<VIdx>(v)};
        else
            cone.paths[v] = {base, v2s, static_cast<VIdx>(v)};
    }

    auto paths = cone.paths;
    cone.contract = [base, v2s, n1, a1_path, paths](VIdx u, VIdx w) {
        Loop<VIdx> start = paths[u];
        start.push_back(w);
        for (auto it = paths[w].rbegin() + 1; it != paths[w].rend(); ++it)
            start.push_back(*it);
        LoopEditor<VIdx> ed(start);
        const bool u_in_a1 = u < n1, w_in_a1 = w < n1;
        if (!u_in_a1 && !w_in_a1) {
            // (base, u, w, base): the triangle {u, w, base}
            ed.tr_delete(1);
        } else if (u_in_a1 && w_in_a1) {
            if (u == base) {
                ed.tr_delete(0);  // (base, w, v2s, base): {base, w, v2s}
            } else if (w == base) {
                ed.tr_delete(1);  // (base, v2s, u, base): {v2s, u, base}
            } else {
                ed.tr_delete(2);  // (base, v2s, u, w, v2s, base): {u, w, v2s}
            }
        } else if (!u_in_a1) {
            // (base, u, w, v2s, base) with u in A2, w in A1
            if (w == base) {
                // (base, u, base): pure backtrack
            } else {
                const auto& q = a1_path[w];  // base = q0, ..., qm = w
                const std::size_t m = q.size() - 1;
                // climb the ladder: insert q1..q_{m-1} between the base and u
                for (std::size_t i = 0; i + 2 < q.size(); ++i)
                    ed.tr_insert(i, q[i + 1]);  // {q_i, q_{i+1}, u}
                // (q0, .., q_{m-1}, u, q_m, v2s, base): drop u
                ed.tr_delete(m - 1);  // {q_{m-1}, u, q_m}
                // (q0, .., q_m, v2s, base): walk the path back down via v2s
                for (std::size_t i = m; i >= 1; --i)
                    ed.tr_delete(i - 1);  // {q_{i-1}, q_i, v2s}
            }
        } else {
            // (base, v2s, u, w, base) with u in A1, w in A2
            if (u == base) {
                // start was (base, w, base): nothing to do
            } else {
                const auto& q = a1_path[u];
                const std::size_t m = q.size() - 1;
                // insert q_{m-1}..q1 between w and the trailing base
                for (std::size_t i = 0; i + 2 < q.size(); ++i)
                    ed.tr_insert(3, q[i + 1]);  // {w, q_{i+1}, q_i}
                // (base, v2s, q_m, w, q_{m-1}, ..., q0): drop w
                ed.tr_delete(2);  // {q_m, w, q_{m-1}}
                // (base, v2s, q_m, ..., q0): descend via v2s
                for (std::size_t i = m; i >= 1; --i)
                    ed.tr_delete(1);  // {v2s, q_i, q_{i-1}}
            }
        }
        ed.normalize();
        return ed.finish();
    };
    out.cone = std::move(cone);
    return out;
}

// --- symplectic engine ------------------------------------------------------

bool admissible_colors(std::uint32_t g, const std::array<int, 3>& dims) {
    const int i0 = dims[0], i1 = dims[1], i2 = dims[2];
    return 0 < i0 && i0 < i1 && i1 < i2 && i2 <= static_cast<int>(g) &&
           i1 >= 2 * i0 && i2 >= 3 * i1 && 17 * i1 <= static_cast<int>(2 * g);
}

bool SymplecticOracle::is_vertex(const gf::Subspace& v) const {
    if (v.n != form.ambient()) return false;
    if (std::find(dims.begin(), dims.end(), v.dim()) == dims.end()) return false;
    return gf::is_isotropic(form, v);
}

bool SymplecticOracle::is_edge(const gf::Subspace& a, const gf::Subspace& b) const {
    if (!is_vertex(a) || !is_vertex(b) || a.dim() == b.dim()) return false;
    const auto& lo = a.dim() < b.dim() ? a : b;
    const auto& hi = a.dim() < b.dim() ? b : a;
    return hi.contains(lo, form.fp);
}

bool SymplecticOracle::is_triangle(const gf::Subspace& a, const gf::Subspace& b,
                                   const gf::Subspace& c) const {
    const gf::Subspace* s[3] = {&a, &b, &c};
    std::sort(s, s + 3, [](const gf::Subspace* x, const gf::Subspace* y) {
        return x->dim() < y->dim();
    });
    if (s[0]->dim() == s[1]->dim() || s[1]->dim() == s[2]->dim()) return false;
    if (!is_vertex(*s[0]) || !is_vertex(*s[1]) || !is_vertex(*s[2])) return false;
    return s[1]->contains(*s[0], form.fp) && s[2]->contains(*s[1], form.fp);
}

SymplecticConeEngine::SymplecticConeEngine(std::uint32_t g, std::uint32_t p,
                                           std::array<int, 3> dims)
    : form_(gf::SymplecticForm::standard(g, p)),
      dims_(dims),
      oracle_(form_, dims) {
    if (!admissible_colors(g, dims))
        throw PreconditionViolated("colors not admissible: need i1 >= 2 i0, i2 >= 3 i1, 17 i1 <= 2g");
    // base: span of the first i0 standard vectors (isotropic, lex-least)
    gf::Mat m(dims[0], 2 * g, p);
    for (int r = 0; r < dims[0]; ++r) m.at(r, r) = 1;
    base_ = gf::rref(m, form_.fp);
}

Loop<gf::Subspace> SymplecticConeEngine::path_to(const gf::Subspace& u) const {
    const auto& fp = form_.fp;
    if (u == base_) return {base_};
    if (u.dim() == dims_[0]) {
        auto hops = isotropic_path(form_, base_, u, dims_[1]);
        return hops;
    }
    // higher colors: route through the lex-least i0-subspace of u
    gf::Subspace v = gf::leading_subspace(u, dims_[0], fp);
    if (v == base_) return {base_, u};
    auto hops = isotropic_path(form_, base_, v, dims_[1]);
    hops.push_back(u);
    return hops;
}

namespace {

using SLoop = Loop<gf::Subspace>;
using SEditor = LoopEditor<gf::Subspace>;

}  // namespace

void SymplecticConeEngine::eliminate_top_color(SEditor& ed) const {
    const auto& fp = form_.fp;
    const int i0 = dims_[0], i1 = dims_[1], i2 = dims_[2];
    auto interior_top = [&]() -> std::optional<std::size_t> {
        const auto& s = ed.seq();
        for (std::size_t i = 1; i + 1 < s.size(); ++i)
            if (s[i].dim() == i2) return i;
        return std::nullopt;
    };
    int guard = 0;
    while (auto posopt = interior_top()) {
        if (++guard > 200) throw Error("top-color elimination did not terminate");
        ed.normalize();
        posopt = interior_top();
        if (!posopt) break;
        std::size_t pos = *posopt;
        const auto& s = ed.seq();
        // make the left neighbor i0-dimensional
        if (s[pos - 1].dim() == i1) {
            const gf::Subspace& m = s[pos - 1];
            if (pos >= 2 && s[pos - 2].dim() == i0) {
                ed.tr_delete(pos - 2);  // {far, m, top}
                continue;
            }
            // far neighbor unusable: spawn an i0 inside m next to the top
            gf::Subspace c = gf::leading_subspace(m, i0, fp);
            ed.bt_insert(pos - 1, c);  // (m) -> (m, c, m)
            ed.tr_delete(pos);         // {c, m, top} -> removes the second m
            continue;
        }
        if (s[pos + 1].dim() == i1) {
            const gf::Subspace& m = s[pos + 1];
            if (pos + 2 < s.size() && s[pos + 2].dim() == i0) {
                ed.tr_delete(pos);  // {top, m, far}
                continue;
            }
            gf::Subspace c = gf::leading_subspace(m, i0, fp);
            ed.bt_insert(pos + 1, c);  // (m) -> (m, c, m) right of the top
            ed.tr_delete(pos);         // {top, m, c}
            continue;
        }
        // both neighbors are i0
        const gf::Subspace a = s[pos - 1], b = s[pos + 1], top = s[pos];
        if (a == b) {
            ed.bt_delete(pos - 1);
            continue;
        }
        gf::Subspace ab = gf::sum(a, b, fp);
        gf::Subspace mid = gf::extend_isotropic(form_, ab, i1, top);
        ed.tr_insert(pos - 1, mid);  // (a, top) -> (a, mid, top)
        ed.tr_delete(pos);           // {mid, top, b} -> (mid, b)
    }
    ed.normalize();
}

void SymplecticConeEngine::splice_and_tile(SEditor& ed, std::size_t lo,
                                           std::size_t hi) const {
    const auto& fp = form_.fp;
    const int i0 = dims_[0], i1 = dims_[1], i2 = dims_[2];
    if (hi <= lo + 1) return;

    // the span of everything in the segment
    gf::Subspace t0 = gf::zero_subspace(form_.ambient(), fp.p);
    for (std::size_t i = lo; i < hi; ++i) t0 = gf::sum(t0, ed.seq()[i], fp);

    // u_perp: 6 i1 pairwise-orthogonal vectors, all perpendicular to t0
    gf::Subspace uperp = gf::zero_subspace(form_.ambient(), fp.p);
    gf::Subspace t = t0;
    for (int j = 0; j < 6 * i1; ++j) {
        gf::Subspace cand = gf::perp(form_, t);
        std::vector<std::uint32_t> x;
        if (!t.contains(cand, fp)) {
            x = gf::lex_min_outside(cand, t, fp);
        } else {
            // fall back to independence from the collected basis only
            if (uperp.contains(cand, fp))
                throw PreconditionViolated("perp space exhausted (loop too long?)");
            x = gf::lex_min_outside(cand, uperp, fp);
        }
        gf::Mat mu = uperp.basis;
        mu.append_row(x);
        uperp = gf::rref(mu, fp);
        gf::Mat mt = t.basis;
        mt.append_row(x);
        t = gf::rref(mt, fp);
    }
    if (uperp.dim() != 6 * i1 || !gf::is_isotropic(form_, uperp))
        throw Error("u_perp construction failed");

    // u_star: i1-dimensional subspace of u_perp meeting t0 trivially
    gf::Subspace ustar = gf::zero_subspace(form_.ambient(), fp.p);
    while (ustar.dim() < i1) {
        gf::Subspace avoid = gf::sum(t0, ustar, fp);
        auto x = gf::lex_min_outside(uperp, avoid, fp);
        gf::Mat mu = ustar.basis;
        mu.append_row(x);
        ustar = gf::rref(mu, fp);
    }
    const gf::Subspace ustarstar = gf::leading_subspace(ustar, i0, fp);

    // splice a (v, u_v, u**, u_v, v) detour at every i0 vertex of the segment
    {
        std::size_t pos = lo;
        std::size_t end = hi;
        while (pos < end) {
            if (ed.seq()[pos].dim() == i0) {
                const gf::Subspace v = ed.seq()[pos];
                gf::Subspace uv = gf::sum(v, ustarstar, fp);
                while (uv.dim() < i1) {
                    auto x = gf::lex_min_outside(ustar, uv, fp);
                    gf::Mat mu = uv.basis;
                    mu.append_row(x);
                    uv = gf::rref(mu, fp);
                }
                ed.bt_insert(pos, uv);
                ed.bt_insert(pos + 1, ustarstar);
                pos += 5;
                end += 4;
            } else {
                ++pos;
            }
        }
    }

    // tile interior hexagons (u**, u_a, v_a, v_mid, v_b, u_b, u**)
    auto tile = [&](std::size_t s, const gf::Subspace& mid) {
        gf::Subspace apex =
            gf::extend_isotropic(form_, gf::sum(mid, ustar, fp), i2);
        for (int e = 5; e >= 0; --e) ed.tr_insert(s + e, apex);
        for (int d = 0; d < 5; ++d) ed.bt_delete(s + 1);
        ed.bt_delete(s);
    };
    bool progress = true;
    while (progress) {
        progress = false;
        const auto& s = ed.seq();
        for (std::size_t i = 0; i + 6 < s.size(); ++i) {
            if (s[i] == ustarstar && s[i + 6] == ustarstar) {
                tile(i, s[i + 3]);
                progress = true;
                break;
            }
        }
    }
    // final wrap-around hexagon: everything left of the segment collapsed
    // to [lo, lo+6] with the last splice somewhere inside
    {
        const auto& s = ed.seq();
        std::optional<std::size_t> upos;
        for (std::size_t i = lo; i < s.size(); ++i)
            if (s[i] == ustarstar) {
                upos = i;
                break;
            }
        if (upos) {
            if (lo + 6 >= s.size() || !(s[lo] == s[lo + 6]))
                throw Error("wrap hexagon not aligned with the segment");
            const std::size_t off = (*upos - lo + 3) % 6;
            const gf::Subspace mid = s[lo + off];
            if (mid.dim() != i1) throw Error("wrap hexagon middle has wrong color");
            tile(lo, mid);
        }
    }
    ed.normalize();
}

Contraction<gf::Subspace> SymplecticConeEngine::contract_loop(
    const SLoop& loop) const {
    const auto& fp = form_.fp;
    const int i2 = dims_[2];
    if (loop.size() > 12)
        throw PreconditionViolated("loop longer than 11 edges");
    if (loop.empty() || !(loop.front() == loop.back()))
        throw PreconditionViolated("not a based loop");
    if (loop.size() > 1 && !is_closed_walk(oracle_, loop))
        throw PreconditionViolated("not a closed walk in the color restriction");

    SEditor ed(loop);
    ed.normalize();
    eliminate_top_color(ed);
    if (ed.size() <= 1) return ed.finish();

    std::size_t lo = 0, hi = ed.size() - 1;
    if (ed.seq().front().dim() == i2) {
        // base has the top color: bracket the rest between copies of an
        // i1-subspace of the base, then contract the inner segment
        const int i1 = dims_[1];
        // force both base neighbors to be i0
        while (ed.seq()[1].dim() == i1) {
            // interior alternates, so position 2 is i0-dimensional
            ed.tr_delete(0);
        }
        while (ed.seq()[ed.size() - 2].dim() == i1) {
            ed.tr_delete(ed.size() - 3);
        }
        ed.normalize();
        if (ed.size() <= 1) return ed.finish();
        const gf::Subspace w2 = ed.seq().front();
        const gf::Subspace a = ed.seq()[1], b = ed.seq()[ed.size() - 2];
        gf::Subspace ab = gf::sum(a, b, fp);
        gf::Subspace bracket = gf::extend_isotropic(form_, ab, i1, w2);
        ed.tr_insert(0, bracket);
        ed.tr_insert(ed.size() - 2, bracket);
        lo = 1;
        hi = ed.size() - 2;
    }
    splice_and_tile(ed, lo, hi);
    ed.normalize();
    if (ed.size() != 1) throw Error("contraction did not reach the trivial loop");
    return ed.finish();
}

Contraction<gf::Subspace> SymplecticConeEngine::contract_edge(
    const gf::Subspace& u, const gf::Subspace& w) const {
    if (!oracle_.is_edge(u, w)) throw PreconditionViolated("not an edge of C_g^I");
    SLoop start = path_to(u);
    start.push_back(w);
    auto pw = path_to(w);
    for (auto it = pw.rbegin() + 1; it != pw.rend(); ++it) start.push_back(*it);
    return contract_loop(start);
}

std::pair<gf::Subspace, gf::Subspace> SymplecticConeEngine::random_edge(
    SplitMix64& rng) const {
    const auto& fp = form_.fp;
    const int pair = static_cast<int>(rng.below(3));  // (i0,i1), (i0,i2), (i1,i2)
    const int lo = pair == 2 ? dims_[1] : dims_[0];
    const int hi = pair == 0 ? dims_[1] : dims_[2];
    gf::Rng f = [&rng]() { return rng(); };
    gf::Subspace big = gf::extend_isotropic(
        form_, gf::zero_subspace(form_.ambient(), fp.p), hi, {}, &f);
    // random lo-dimensional subspace of big
    gf::Subspace small = gf::zero_subspace(form_.ambient(), fp.p);
    while (small.dim() < lo) {
        auto x = gf::random_vector_outside(big, small, fp, f);
        gf::Mat m = small.basis;
        m.append_row(x);
        small = gf::rref(m, fp);
    }
    return {small, big};
}

SymplecticConeReport build_symplectic_cone(std::uint32_t g, std::uint32_t p,
                                           std::array<int, 3> dims,
                                           int sample_edges, std::uint64_t seed) {
    SymplecticConeEngine engine(g, p, dims);
    SymplecticConeReport rep;
    rep.sampled_edges = sample_edges;
    for (int s = 0; s < sample_edges; ++s) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
        auto [u, w] = engine.random_edge(rng);
        Contraction<gf::Subspace> c;
        try {
            c = engine.contract_edge(u, w);
        } catch (const std::exception& e) {
            rep.all_valid = false;
            if (rep.first_failure.empty())
                rep.first_failure = std::string("contract: ") + e.what();
            continue;
        }
        auto rr = replay(engine.oracle(), c);
        if (!rr.ok) {
            rep.all_valid = false;
            if (rep.first_failure.empty()) rep.first_failure = rr.error;
            continue;
        }
        rep.tr_counts.push_back(static_cast<int>(c.tr_count()));
        rep.diameter = std::max(rep.diameter, rep.tr_counts.back());
    }
    if (rep.diameter > 0) rep.bound = cone_bound(rep.diameter, 2);
    return rep;
}

std::string contraction_to_json(const Contraction<gf::Subspace>& c,
                                bool with_states) {
    nlohmann::ordered_json j;
    auto sub = [](const gf::Subspace& s) {
        nlohmann::ordered_json v;
        v["n"] = s.n;
        v["p"] = s.p;
        v["rows"] = nlohmann::ordered_json::array();
        for (int r = 0; r < s.dim(); ++r)
            v["rows"].push_back(std::vector<std::uint32_t>(s.basis.row(r).begin(),
                                                           s.basis.row(r).end()));
        return v;
    };
    j["start"] = nlohmann::ordered_json::array();
    for (const auto& s : c.start) j["start"].push_back(sub(s));
    j["moves"] = nlohmann::ordered_json::array();
    for (const auto& m : c.moves) {
        nlohmann::ordered_json mj;
        mj["kind"] = move_kind_name(m.kind);
        mj["pos"] = m.pos;
        if (m.vertex) mj["vertex"] = sub(*m.vertex);
        j["moves"].push_back(mj);
    }
    j["tr_count"] = c.tr_count();
    if (with_states) {
        // replay states are cheap to regenerate; store sizes only
        j["note"] = "states omitted; replay from start with moves";
    }
    return j.dump(2) + "\n";
}

}  // namespace hdx
