#include "hdx/complex.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <json.hpp>
#include <numeric>
#include <sstream>

namespace hdx {

std::string rat_to_string(const Rat& r) {
    std::ostringstream os;
    os << r.numerator() << "/" << r.denominator();
    return os.str();
}

Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(std::stoll(s), 1);
    return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

std::size_t FaceDistribution::index_of(const Face& f) const {
    auto it = std::lower_bound(faces.begin(), faces.end(), f);
    if (it == faces.end() || *it != f) throw FaceNotInComplex("face not at this level");
    return static_cast<std::size_t>(it - faces.begin());
}

namespace {

long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

void subsets_of(const Face& f, int size, const std::function<void(const Face&)>& cb) {
    Face cur;
    cur.reserve(size);
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (static_cast<int>(cur.size()) == size) {
            cb(cur);
            return;
        }
        const std::size_t need = static_cast<std::size_t>(size) - cur.size();
        for (std::size_t i = start; i + need <= f.size(); ++i) {
            cur.push_back(f[i]);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

}  // namespace

Complex Complex::create(std::vector<VertexId> ids, std::vector<int> colors,
                        std::vector<TopFace> top_faces, bool normalize) {
    Complex x;
    x.ids_ = std::move(ids);
    if (colors.empty()) colors.assign(x.ids_.size(), kNoColor);
    x.colors_ = std::move(colors);
    x.tops_ = std::move(top_faces);
    if (x.tops_.empty()) throw Error("complex needs at least one top face");
    x.dim_ = static_cast<int>(x.tops_[0].verts.size()) - 1;
    for (auto& t : x.tops_) std::sort(t.verts.begin(), t.verts.end());
    std::sort(x.tops_.begin(), x.tops_.end(),
              [](const TopFace& a, const TopFace& b) { return a.verts < b.verts; });
    if (normalize) {
        Rat total(0);
        for (auto& t : x.tops_) total += t.weight;
        if (total == Rat(0)) throw Error("zero total weight");
        for (auto& t : x.tops_) t.weight /= total;
    }
    x.validate();
    return x;
}

Complex Complex::uniform(std::vector<VertexId> ids, std::vector<int> colors,
                         std::vector<Face> top_faces) {
    std::vector<TopFace> tf;
    tf.reserve(top_faces.size());
    const Rat w(1, static_cast<long long>(top_faces.size()));
    for (auto& f : top_faces) tf.push_back({std::move(f), w});
    return create(std::move(ids), std::move(colors), std::move(tf));
}

Complex Complex::complete(std::size_t n) {
    std::vector<VertexId> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    Face all(n);
    std::iota(all.begin(), all.end(), 0);
    return uniform(std::move(ids), {}, {all});
}

void Complex::validate() {
    const std::size_t nv = ids_.size();
    if (colors_.size() != nv) throw Error("colors/ids size mismatch");
    {
        auto sorted = ids_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw Error("duplicate vertex ids");
    }
    Rat total(0);
    std::vector<bool> covered(nv, false);
    for (std::size_t ti = 0; ti < tops_.size(); ++ti) {
        const auto& t = tops_[ti];
        if (static_cast<int>(t.verts.size()) != dim_ + 1)
            throw Error("top face size differs from dim+1");
        if (std::adjacent_find(t.verts.begin(), t.verts.end()) != t.verts.end())
            throw Error("repeated vertex in top face");
        if (ti > 0 && tops_[ti - 1].verts == t.verts) throw Error("duplicate top face");
        for (VIdx v : t.verts) {
            if (v >= nv) throw Error("face references unknown vertex");
            covered[v] = true;
        }
        if (t.weight <= Rat(0)) throw Error("non-positive face weight");
        total += t.weight;
    }
    if (total != Rat(1)) throw Error("top face weights must sum to 1");
    for (std::size_t v = 0; v < nv; ++v)
        if (!covered[v]) throw Error("vertex " + std::to_string(ids_[v]) +
                                     " lies in no top face (complex must be pure)");

    const bool any_colored =
        std::any_of(colors_.begin(), colors_.end(), [](int c) { return c != kNoColor; });
    const bool all_colored =
        std::all_of(colors_.begin(), colors_.end(), [](int c) { return c != kNoColor; });
    if (any_colored && !all_colored)
        throw NotPartite("either all vertices are colored or none");
    partite_ = all_colored && nv > 0;
    if (partite_) {
        std::set<int> cs(colors_.begin(), colors_.end());
        if (static_cast<int>(cs.size()) != dim_ + 1)
            throw NotPartite("partite complex needs dim+1 colors");
        for (const auto& t : tops_) {
            std::set<int> seen;
            for (VIdx v : t.verts) seen.insert(colors_[v]);
            if (seen != cs)
                throw NotPartite("top face misses a color (partite law violated)");
        }
    }
}

std::set<int> Complex::color_set() const {
    std::set<int> out;
    if (partite_) out.insert(colors_.begin(), colors_.end());
    return out;
}

VIdx Complex::index_of_id(VertexId id) const {
    for (std::size_t i = 0; i < ids_.size(); ++i)
        if (ids_[i] == id) return static_cast<VIdx>(i);
    throw Error("unknown vertex id " + std::to_string(id));
}

const FaceDistribution& Complex::level(int i) const {
    auto it = level_cache_.find(i);
    if (it != level_cache_.end()) return it->second;
    if (i < 0 || i > dim_) throw Error("level out of range");
    std::map<Face, Rat> acc;
    const Rat denom(binom(dim_ + 1, i + 1), 1);
    for (const auto& t : tops_) {
        subsets_of(t.verts, i + 1,
                   [&](const Face& s) { acc[s] += t.weight / denom; });
    }
    FaceDistribution d;
    d.level = i;
    d.faces.reserve(acc.size());
    d.prob.reserve(acc.size());
    for (auto& [f, p] : acc) {
        d.faces.push_back(f);
        d.prob.push_back(p);
    }
    return level_cache_.emplace(i, std::move(d)).first->second;
}

bool Complex::has_face(const Face& f) const {
    if (f.empty()) return true;
    if (static_cast<int>(f.size()) > dim_ + 1) return false;
    for (const auto& t : tops_)
        if (std::includes(t.verts.begin(), t.verts.end(), f.begin(), f.end()))
            return true;
    return false;
}

const std::vector<std::vector<VIdx>>& Complex::adjacency() const {
    if (!adj_.empty() || ids_.empty()) return adj_;
    adj_.assign(ids_.size(), {});
    const auto& edges = level(std::min(1, dim_));
    if (dim_ >= 1) {
        for (const auto& e : edges.faces) {
            adj_[e[0]].push_back(e[1]);
            adj_[e[1]].push_back(e[0]);
        }
        for (auto& row : adj_) std::sort(row.begin(), row.end());
    }
    return adj_;
}

FaceDistribution face_distribution(const Complex& x, int i) { return x.level(i); }

Complex link(const Complex& x, const Face& s) {
    if (s.empty()) return x;
    Face key = s;
    std::sort(key.begin(), key.end());
    std::vector<TopFace> tops;
    Rat mass(0);
    for (const auto& t : x.top_faces()) {
        if (!std::includes(t.verts.begin(), t.verts.end(), key.begin(), key.end()))
            continue;
        Face rest;
        std::set_difference(t.verts.begin(), t.verts.end(), key.begin(), key.end(),
                            std::back_inserter(rest));
        tops.push_back({std::move(rest), t.weight});
        mass += t.weight;
    }
    if (tops.empty()) throw FaceNotInComplex("link of a non-face");
    for (auto& t : tops) t.weight /= mass;

    // compact rename of surviving vertices
    std::set<VIdx> used;
    for (const auto& t : tops)
        for (VIdx v : t.verts) used.insert(v);
    std::map<VIdx, VIdx> remap;
    std::vector<VertexId> ids;
    std::vector<int> colors;
    const bool colored = x.is_partite();
    for (VIdx v : used) {
        remap[v] = static_cast<VIdx>(ids.size());
        ids.push_back(x.vertex_ids()[v]);
        colors.push_back(colored ? x.colors()[v] : kNoColor);
    }
    for (auto& t : tops)
        for (auto& v : t.verts) v = remap[v];
    Complex out = Complex::create(std::move(ids), colored ? colors : std::vector<int>{},
                                  std::move(tops));
    out.field_p = x.field_p;
    return out;
}

Complex join(const std::vector<Complex>& parts) {
    if (parts.empty()) throw Error("empty join");
    const bool colored =
        std::all_of(parts.begin(), parts.end(), [](const Complex& c) { return c.is_partite(); });
    std::vector<VertexId> ids;
    std::vector<int> colors;
    std::vector<VIdx> offset(parts.size(), 0);
    int color_offset = 0;
    VertexId id_offset = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        offset[i] = static_cast<VIdx>(ids.size());
        int max_color = -1;
        for (std::size_t v = 0; v < parts[i].num_vertices(); ++v) {
            ids.push_back(id_offset + parts[i].vertex_ids()[v]);
            const int c = colored ? parts[i].colors()[v] + color_offset : kNoColor;
            colors.push_back(c);
            if (colored) max_color = std::max(max_color, parts[i].colors()[v]);
        }
        VertexId max_id = 0;
        for (auto id : parts[i].vertex_ids()) max_id = std::max(max_id, id);
        id_offset += max_id + 1;
        if (colored) color_offset += max_color + 1;
    }

    std::vector<TopFace> tops;
    std::function<void(std::size_t, Face, Rat)> rec = [&](std::size_t i, Face cur, Rat w) {
        if (i == parts.size()) {
            std::sort(cur.begin(), cur.end());
            tops.push_back({std::move(cur), w});
            return;
        }
        for (const auto& t : parts[i].top_faces()) {
            Face next = cur;
            for (VIdx v : t.verts) next.push_back(offset[i] + v);
            rec(i + 1, std::move(next), w * t.weight);
        }
    };
    rec(0, {}, Rat(1));
    return Complex::create(std::move(ids), colored ? colors : std::vector<int>{},
                           std::move(tops));
}

Complex color_restrict(const Complex& x, const std::set<int>& I) {
    if (!x.is_partite()) throw NotPartite("color_restrict needs a partite complex");
    for (int c : I)
        if (!x.color_set().count(c)) throw ParameterError("unknown color in restriction");
    std::map<Face, Rat> acc;
    for (const auto& t : x.top_faces()) {
        Face sub;
        for (VIdx v : t.verts)
            if (I.count(x.colors()[v])) sub.push_back(v);
        acc[sub] += t.weight;
    }
    std::set<VIdx> used;
    for (auto& [f, w] : acc)
        for (VIdx v : f) used.insert(v);
    std::map<VIdx, VIdx> remap;
    std::vector<VertexId> ids;
    std::vector<int> colors;
    for (VIdx v : used) {
        remap[v] = static_cast<VIdx>(ids.size());
        ids.push_back(x.vertex_ids()[v]);
        colors.push_back(x.colors()[v]);
    }
    std::vector<TopFace> tops;
    for (auto& [f, w] : acc) {
        Face g;
        for (VIdx v : f) g.push_back(remap[v]);
        tops.push_back({std::move(g), w});
    }
    Complex out = Complex::create(std::move(ids), std::move(colors), std::move(tops));
    out.field_p = x.field_p;
    return out;
}

Complex skeleton(const Complex& x, int k) {
    if (k > x.dim()) throw ParameterError("skeleton level above dimension");
    if (k == x.dim()) {
        Complex out = Complex::create(x.vertex_ids(), {}, x.top_faces());
        out.field_p = x.field_p;
        return out;
    }
    const auto& lvl = x.level(k);
    std::vector<TopFace> tops;
    tops.reserve(lvl.faces.size());
    for (std::size_t i = 0; i < lvl.faces.size(); ++i)
        tops.push_back({lvl.faces[i], lvl.prob[i]});
    Complex out = Complex::create(x.vertex_ids(), {}, std::move(tops));
    out.field_p = x.field_p;
    return out;
}

namespace {

void cliques_rec(const std::vector<std::vector<VIdx>>& adj, Face& cur,
                 std::vector<VIdx>& cands, std::size_t limit,
                 std::vector<Face>& out) {
    if (cur.size() == limit) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = 0; i < cands.size(); ++i) {
        VIdx v = cands[i];
        std::vector<VIdx> next;
        for (std::size_t j = i + 1; j < cands.size(); ++j) {
            VIdx u = cands[j];
            if (std::binary_search(adj[v].begin(), adj[v].end(), u)) next.push_back(u);
        }
        cur.push_back(v);
        cliques_rec(adj, cur, next, limit, out);
        cur.pop_back();
    }
}

}  // namespace

Complex clique_complex(const Complex& graph, int d) {
    if (graph.dim() != 1) throw ParameterError("clique_complex expects a graph");
    const auto& adj = graph.adjacency();
    std::vector<Face> tops;
    Face cur;
    std::vector<VIdx> all(graph.num_vertices());
    std::iota(all.begin(), all.end(), 0);
    cliques_rec(adj, cur, all, static_cast<std::size_t>(d + 1), tops);
    if (tops.empty())
        throw NoCliquesAtLevel("no cliques of size " + std::to_string(d + 1));
    Complex out = Complex::uniform(graph.vertex_ids(), {}, std::move(tops));
    out.field_p = graph.field_p;
    return out;
}

bool is_clique_complex(const Complex& x) {
    if (x.dim() < 1) return true;
    try {
        Complex rebuilt = clique_complex(skeleton(x, 1), x.dim());
        auto lhs = x.top_faces();
        auto rhs = rebuilt.top_faces();
        if (lhs.size() != rhs.size()) return false;
        for (std::size_t i = 0; i < lhs.size(); ++i)
            if (lhs[i].verts != rhs[i].verts) return false;
        return true;
    } catch (const NoCliquesAtLevel&) {
        return false;
    }
}

int connected_components(const Complex& x) {
    const auto& adj = x.adjacency();
    std::vector<int> comp(x.num_vertices(), -1);
    int n = 0;
    for (std::size_t s = 0; s < x.num_vertices(); ++s) {
        if (comp[s] != -1) continue;
        std::deque<VIdx> q{static_cast<VIdx>(s)};
        comp[s] = n;
        while (!q.empty()) {
            VIdx v = q.front();
            q.pop_front();
            for (VIdx u : adj[v])
                if (comp[u] == -1) {
                    comp[u] = n;
                    q.push_back(u);
                }
        }
        ++n;
    }
    return n;
}

int diameter(const Complex& x) {
    const int comps = connected_components(x);
    if (comps != 1) throw Disconnected("diameter of a disconnected complex", comps);
    const auto& adj = x.adjacency();
    int best = 0;
    for (std::size_t s = 0; s < x.num_vertices(); ++s) {
        std::vector<int> dist(x.num_vertices(), -1);
        std::deque<VIdx> q{static_cast<VIdx>(s)};
        dist[s] = 0;
        while (!q.empty()) {
            VIdx v = q.front();
            q.pop_front();
            for (VIdx u : adj[v])
                if (dist[u] == -1) {
                    dist[u] = dist[v] + 1;
                    best = std::max(best, dist[u]);
                    q.push_back(u);
                }
        }
    }
    return best;
}

Face face_of_ids(const Complex& x, const std::vector<VertexId>& ids) {
    Face f;
    for (auto id : ids) f.push_back(x.index_of_id(id));
    std::sort(f.begin(), f.end());
    return f;
}

bool complexes_isomorphic_by_id(const Complex& a, const Complex& b) {
    if (a.num_vertices() != b.num_vertices()) return false;
    std::map<VertexId, VertexId> ident;
    for (std::size_t i = 0; i < a.num_vertices(); ++i) {
        // identity map on external ids
        if (a.vertex_ids()[i] != b.vertex_ids()[i]) return false;
    }
    return weighted_equal(a, b);
}

bool weighted_equal(const Complex& a, const Complex& b) {
    if (a.num_vertices() != b.num_vertices() || a.dim() != b.dim()) return false;
    // compare top faces as external-id sets with weights
    auto canon = [](const Complex& c) {
        std::map<std::vector<VertexId>, Rat> m;
        for (const auto& t : c.top_faces()) {
            std::vector<VertexId> ext;
            for (VIdx v : t.verts) ext.push_back(c.vertex_ids()[v]);
            std::sort(ext.begin(), ext.end());
            m[ext] += t.weight;
        }
        return m;
    };
    return canon(a) == canon(b);
}

std::string Complex::to_json() const {
    nlohmann::ordered_json j;
    if (field_p) j["p"] = *field_p;
    j["vertices"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        nlohmann::ordered_json v;
        v["id"] = ids_[i];
        if (partite_) v["color"] = colors_[i];
        j["vertices"].push_back(v);
    }
    j["top_faces"] = nlohmann::ordered_json::array();
    for (const auto& t : tops_) {
        nlohmann::ordered_json f;
        f["verts"] = nlohmann::ordered_json::array();
        for (VIdx v : t.verts) f["verts"].push_back(ids_[v]);
        f["weight"] = rat_to_string(t.weight);
        j["top_faces"].push_back(f);
    }
    return j.dump(2) + "\n";
}

Complex Complex::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::vector<VertexId> ids;
    std::vector<int> colors;
    bool any_color = false;
    for (const auto& v : j.at("vertices")) {
        ids.push_back(v.at("id").get<VertexId>());
        if (v.contains("color")) {
            colors.push_back(v.at("color").get<int>());
            any_color = true;
        } else {
            colors.push_back(kNoColor);
        }
    }
    std::map<VertexId, VIdx> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = static_cast<VIdx>(i);
    std::vector<TopFace> tops;
    for (const auto& f : j.at("top_faces")) {
        Face face;
        for (const auto& v : f.at("verts")) face.push_back(index.at(v.get<VertexId>()));
        tops.push_back({std::move(face), rat_from_string(f.at("weight").get<std::string>())});
    }
    Complex x = create(std::move(ids), any_color ? colors : std::vector<int>{},
                       std::move(tops));
    if (j.contains("p")) x.field_p = j.at("p").get<std::uint32_t>();
    return x;
}

}  // namespace hdx
