#include "hdx/covers.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace hdx {

CoverMap cover_from_cocycle(const Complex& x, const Cochain& phi,
                            bool strict_clique) {
    if (phi.level != 1) throw ParameterError("cover needs a level-1 cochain");
    validate_cochain(x, phi);
    {
        Cochain dphi = delta(x, phi);
        for (int v : dphi.values)
            if (v != phi.group.id())
                throw NotCocycle("phi has a nonvanishing coboundary on a triangle");
    }
    if (strict_clique && !is_clique_complex(x))
        throw NotCliqueComplex("base does not reconstruct from its 1-skeleton");

    const int ell = phi.group.is_cyclic() ? phi.group.order()
                                          : phi.group.act(0, 0) >= 0 ? phi.group.order() : 0;
    // sheet count: size of the set the group acts on
    int sheets = phi.group.is_cyclic() ? phi.group.order() : 0;
    if (!phi.group.is_cyclic()) {
        // permutation groups act on their degree; recover it by probing
        // act() until it throws is not an option, so restrict to cyclic
        // and symmetric groups where the degree is known
        const std::string& nm = phi.group.name();
        if (nm.size() >= 2 && nm[0] == 'S') sheets = std::stoi(nm.substr(1));
        else throw ParameterError("cover construction needs a group with a standard action");
    }
    (void)ell;

    const std::size_t nv = x.num_vertices();
    std::vector<VertexId> ids;
    std::vector<int> colors;
    ids.reserve(nv * sheets);
    const bool colored = x.is_partite();
    for (std::size_t v = 0; v < nv; ++v)
        for (int i = 0; i < sheets; ++i) {
            ids.push_back(static_cast<VertexId>(v) * sheets + i);
            if (colored) colors.push_back(x.colors()[v]);
        }

    std::vector<TopFace> tops;
    const Rat frac(1, sheets);
    for (const auto& t : x.top_faces()) {
        const VIdx v0 = t.verts[0];
        for (int i = 0; i < sheets; ++i) {
            Face lift;
            lift.push_back(static_cast<VIdx>(v0 * sheets + i));
            for (std::size_t k = 1; k < t.verts.size(); ++k) {
                const VIdx vk = t.verts[k];
                const std::array<VIdx, 2> oriented{vk, v0};
                const int g = eval_oriented(x, phi, oriented);
                const int j = phi.group.act(g, i);
                lift.push_back(static_cast<VIdx>(vk * sheets + j));
            }
            std::sort(lift.begin(), lift.end());
            tops.push_back({lift, t.weight * frac});
        }
    }

    CoverMap out;
    out.total = Complex::create(std::move(ids), colored ? colors : std::vector<int>{},
                                std::move(tops));
    out.total.field_p = x.field_p;
    out.base = x;
    out.sheets = sheets;
    out.rho.resize(nv * sheets);
    for (std::size_t v = 0; v < nv; ++v)
        for (int i = 0; i < sheets; ++i) out.rho[v * sheets + i] = static_cast<VIdx>(v);
    out.connected = connected_components(out.total) == 1;
    if (phi.group.is_cyclic() && sheets > 1) {
        out.deck.resize(nv * sheets);
        for (std::size_t v = 0; v < nv; ++v)
            for (int i = 0; i < sheets; ++i)
                out.deck[v * sheets + i] = static_cast<VIdx>(v * sheets + (i + 1) % sheets);
    }
    return out;
}

CoverReport verify_cover(const CoverMap& cover) {
    CoverReport rep;
    auto fail = [&](const std::string& why) {
        if (rep.pass) rep.detail = why;
        rep.pass = false;
    };
    const Complex& y = cover.total;
    const Complex& x = cover.base;
    if (cover.rho.size() != y.num_vertices()) {
        fail("rho size mismatch");
        return rep;
    }
    // surjectivity and fiber sizes
    std::vector<int> fiber(x.num_vertices(), 0);
    for (VIdx img : cover.rho) {
        if (img >= x.num_vertices()) {
            fail("rho maps outside the base");
            return rep;
        }
        ++fiber[img];
    }
    for (std::size_t v = 0; v < x.num_vertices(); ++v)
        if (fiber[v] != cover.sheets)
            fail("fiber of vertex " + std::to_string(v) + " has size " +
                 std::to_string(fiber[v]));

    // homomorphism: images of top faces are top faces
    for (const auto& t : y.top_faces()) {
        Face img;
        for (VIdx v : t.verts) img.push_back(cover.rho[v]);
        std::sort(img.begin(), img.end());
        if (std::adjacent_find(img.begin(), img.end()) != img.end()) {
            fail("a face collapses under rho");
            continue;
        }
        if (!x.has_face(img)) fail("face image is not a face of the base");
    }

    // link isomorphism at every vertex of Y
    for (std::size_t yv = 0; yv < y.num_vertices() && rep.pass; ++yv) {
        Complex ylink = link(y, {static_cast<VIdx>(yv)});
        Complex xlink = link(x, {cover.rho[yv]});
        if (ylink.num_vertices() != xlink.num_vertices()) {
            fail("link sizes differ at vertex " + std::to_string(yv));
            break;
        }
        // vertex bijection via rho
        std::map<VertexId, VertexId> to_x;
        std::set<VertexId> hit;
        bool ok = true;
        for (std::size_t i = 0; i < ylink.num_vertices(); ++i) {
            const VIdx y_orig = y.index_of_id(ylink.vertex_ids()[i]);
            const VIdx x_img = cover.rho[y_orig];
            const VertexId xid = x.vertex_ids()[x_img];
            to_x[ylink.vertex_ids()[i]] = xid;
            if (!hit.insert(xid).second) ok = false;
        }
        if (!ok) {
            fail("rho is not injective on the link of " + std::to_string(yv));
            break;
        }
        std::vector<VertexId> relabeled;
        for (std::size_t i = 0; i < ylink.num_vertices(); ++i)
            relabeled.push_back(to_x.at(ylink.vertex_ids()[i]));
        Complex mapped = Complex::create(relabeled, {}, ylink.top_faces());
        Complex xplain = Complex::create(xlink.vertex_ids(), {}, xlink.top_faces());
        if (!weighted_equal(mapped, xplain))
            fail("link of " + std::to_string(yv) + " is not isomorphic to its image");
    }
    return rep;
}

TowerResult tower(const Complex& x0, int ell, std::size_t n_target,
                  std::size_t max_steps) {
    TowerResult out;
    out.complexes.push_back(x0);
    Complex cur = x0;
    if (connected_components(cur) != 1) {
        out.fail = true;
        out.fail_reason = "starting complex is disconnected";
        return out;
    }
    std::size_t steps = 0;
    while (cur.num_vertices() < n_target) {
        if (++steps > max_steps) {
            out.fail = true;
            out.fail_reason = "step budget exhausted";
            return out;
        }
        auto space = cocycle_space(cur, ell);
        TowerStep step;
        step.vertices = cur.num_vertices();
        step.dim_z1 = space.dim_z1;
        step.dim_b1 = space.dim_b1;
        if (!space.witness) {
            out.fail = true;
            out.fail_reason = "FAIL: every cocycle is a coboundary";
            out.log.push_back(step);
            return out;
        }
        {
            std::ostringstream os;
            for (auto c : *space.witness) os << c;
            step.cocycle = os.str();
        }
        Cochain phi = cochain_from_coeffs(cur, ell, *space.witness);
        CoverMap cover = cover_from_cocycle(cur, phi);
        auto check = verify_cover(cover);
        if (!check.pass) {
            out.fail = true;
            out.fail_reason = "cover verification failed: " + check.detail;
            out.log.push_back(step);
            return out;
        }
        step.connected = cover.connected;
        if (!cover.connected) {
            out.fail = true;
            out.fail_reason = "cover from a non-coboundary cocycle is disconnected";
            out.log.push_back(step);
            return out;
        }
        out.log.push_back(step);
        cur = cover.total;
        out.complexes.push_back(cur);
    }
    return out;
}

DeckQuotientResult deck_quotient_check(const Complex& y,
                                       const std::vector<std::vector<VIdx>>& elements) {
    const std::size_t n = y.num_vertices();
    // validate: permutations, free, simplicial
    for (const auto& g : elements) {
        if (g.size() != n) throw ParameterError("deck element has wrong size");
        std::vector<bool> seen(n, false);
        for (std::size_t v = 0; v < n; ++v) {
            if (g[v] >= n || seen[g[v]]) throw ParameterError("deck element not a permutation");
            seen[g[v]] = true;
            if (g[v] == v)
                throw NotProper("action is not free", y.vertex_ids()[v], y.vertex_ids()[v]);
        }
        for (const auto& t : y.top_faces()) {
            Face img;
            for (VIdx v : t.verts) img.push_back(g[v]);
            std::sort(img.begin(), img.end());
            if (!y.has_face(img))
                throw ParameterError("deck element is not simplicial");
        }
    }

    // BFS distances to each translate
    DeckQuotientResult out;
    out.min_orbit_distance = static_cast<int>(n);
    const auto& adj = y.adjacency();
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<int> dist(n, -1);
        std::deque<VIdx> q{static_cast<VIdx>(v)};
        dist[v] = 0;
        while (!q.empty()) {
            VIdx a = q.front();
            q.pop_front();
            for (VIdx b : adj[a])
                if (dist[b] == -1) {
                    dist[b] = dist[a] + 1;
                    q.push_back(b);
                }
        }
        for (const auto& g : elements) {
            const int d = dist[g[v]];
            const int val = d < 0 ? static_cast<int>(n) : d;
            if (val < out.min_orbit_distance) {
                out.min_orbit_distance = val;
                out.properness_witness = {y.vertex_ids()[v], y.vertex_ids()[g[v]]};
            }
        }
    }
    out.strict_properness = out.min_orbit_distance >= 4;
    if (out.min_orbit_distance < 3)
        throw NotProper("orbit at distance " + std::to_string(out.min_orbit_distance) +
                            " (< 3): quotient would identify link vertices",
                        out.properness_witness.first, out.properness_witness.second);

    // orbits
    std::vector<VIdx> orbit(n);
    std::iota(orbit.begin(), orbit.end(), 0);
    for (const auto& g : elements)
        for (std::size_t v = 0; v < n; ++v) {
            VIdx a = orbit[v], b = orbit[g[v]];
            if (a != b) {
                const VIdx lead = std::min(a, b);
                for (auto& o : orbit)
                    if (o == a || o == b) o = lead;
            }
        }
    std::map<VIdx, VIdx> compact;
    std::vector<VertexId> qids;
    for (std::size_t v = 0; v < n; ++v) {
        if (!compact.count(orbit[v])) {
            compact[orbit[v]] = static_cast<VIdx>(qids.size());
            qids.push_back(y.vertex_ids()[orbit[v]]);
        }
    }
    std::map<Face, Rat> faces;
    for (const auto& t : y.top_faces()) {
        Face img;
        for (VIdx v : t.verts) img.push_back(compact.at(orbit[v]));
        std::sort(img.begin(), img.end());
        if (std::adjacent_find(img.begin(), img.end()) != img.end())
            throw NotProper("a face collapses in the quotient", 0, 0);
        faces[img] += t.weight;
    }
    std::vector<TopFace> tops;
    for (auto& [f, w] : faces) tops.push_back({f, w});
    out.quotient = Complex::create(qids, {}, std::move(tops));
    out.quotient.field_p = y.field_p;

    CoverMap cm;
    cm.total = y;
    cm.base = out.quotient;
    cm.sheets = static_cast<int>(elements.size()) + 1;
    cm.rho.resize(n);
    for (std::size_t v = 0; v < n; ++v) cm.rho[v] = compact.at(orbit[v]);
    cm.connected = connected_components(y) == 1;
    out.cover_check = verify_cover(cm);
    return out;
}

std::vector<std::vector<VIdx>> cyclic_deck_elements(const CoverMap& cover) {
    std::vector<std::vector<VIdx>> out;
    if (cover.deck.empty()) return out;
    std::vector<VIdx> cur = cover.deck;
    for (int k = 1; k < cover.sheets; ++k) {
        out.push_back(cur);
        std::vector<VIdx> next(cur.size());
        for (std::size_t v = 0; v < cur.size(); ++v) next[v] = cover.deck[cur[v]];
        cur = next;
    }
    return out;
}

}  // namespace hdx
