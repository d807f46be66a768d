#include "hdx/cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>

namespace hdx {

namespace {

const FaceDistribution& faces_at(const Complex& x, int level) {
    return x.level(level);
}

int sign_sort3(std::array<VIdx, 3>& t) {
    int sign = 1;
    if (t[0] > t[1]) {
        std::swap(t[0], t[1]);
        sign = -sign;
    }
    if (t[1] > t[2]) {
        std::swap(t[1], t[2]);
        sign = -sign;
    }
    if (t[0] > t[1]) {
        std::swap(t[0], t[1]);
        sign = -sign;
    }
    return sign;
}

}  // namespace

Cochain identity_cochain(const Complex& x, int level, const FiniteGroup& g) {
    Cochain f{level, g, {}};
    const std::size_t count =
        level < 0 ? 1 : (level > x.dim() ? 0 : faces_at(x, level).faces.size());
    f.values.assign(count, g.id());
    return f;
}

Cochain random_cochain(const Complex& x, int level, const FiniteGroup& g,
                       SplitMix64& rng) {
    Cochain f = identity_cochain(x, level, g);
    for (auto& v : f.values) v = static_cast<int>(rng.below(g.order()));
    return f;
}

void validate_cochain(const Complex& x, const Cochain& f) {
    if (f.level < -1 || f.level > 2) throw ParameterError("cochain level out of range");
    const std::size_t want =
        f.level < 0 ? 1
                    : (f.level > x.dim() ? 0 : faces_at(x, f.level).faces.size());
    if (f.values.size() != want) throw ParameterError("cochain value count mismatch");
    for (int v : f.values)
        if (v < 0 || v >= f.group.order()) throw ParameterError("cochain value out of range");
}

int eval_oriented(const Complex& x, const Cochain& f, std::span<const VIdx> tuple) {
    const auto& g = f.group;
    switch (f.level) {
        case -1:
            return f.values[0];
        case 0: {
            Face key{tuple[0]};
            return f.values[faces_at(x, 0).index_of(key)];
        }
        case 1: {
            const bool fwd = tuple[0] < tuple[1];
            Face key{std::min(tuple[0], tuple[1]), std::max(tuple[0], tuple[1])};
            const int v = f.values[faces_at(x, 1).index_of(key)];
            return fwd ? v : g.inv(v);
        }
        case 2: {
            std::array<VIdx, 3> t{tuple[0], tuple[1], tuple[2]};
            const int sign = sign_sort3(t);
            Face key{t[0], t[1], t[2]};
            const int v = f.values[faces_at(x, 2).index_of(key)];
            return sign > 0 ? v : g.inv(v);
        }
        default:
            throw ParameterError("bad cochain level");
    }
}

Cochain delta(const Complex& x, const Cochain& f) {
    const auto& g = f.group;
    if (f.level > 1) throw ParameterError("delta undefined on level-2 cochains");
    Cochain out{f.level + 1, g, {}};
    if (out.level > x.dim()) return out;  // no faces there: trivially identity
    switch (f.level) {
        case -1: {
            out.values.assign(faces_at(x, 0).faces.size(), f.values[0]);
            break;
        }
        case 0: {
            const auto& edges = faces_at(x, 1);
            out.values.resize(edges.faces.size());
            for (std::size_t i = 0; i < edges.faces.size(); ++i) {
                const VIdx a = edges.faces[i][0], b = edges.faces[i][1];
                const int ha = f.values[faces_at(x, 0).index_of({a})];
                const int hb = f.values[faces_at(x, 0).index_of({b})];
                out.values[i] = g.mul(ha, g.inv(hb));
            }
            break;
        }
        case 1: {
            const auto& tris = faces_at(x, 2);
            out.values.resize(tris.faces.size());
            for (std::size_t i = 0; i < tris.faces.size(); ++i) {
                const VIdx a = tris.faces[i][0], b = tris.faces[i][1], c = tris.faces[i][2];
                const std::array<VIdx, 2> ab{a, b}, bc{b, c}, ca{c, a};
                const int v = g.mul(g.mul(eval_oriented(x, f, ab), eval_oriented(x, f, bc)),
                                    eval_oriented(x, f, ca));
                out.values[i] = v;
            }
            break;
        }
    }
    return out;
}

Rat weight(const Complex& x, const Cochain& f) {
    if (f.level < 0) return f.values[0] == f.group.id() ? Rat(0) : Rat(1);
    if (f.values.empty()) return Rat(0);
    const auto& lvl = faces_at(x, f.level);
    Rat w(0);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        if (f.values[i] != f.group.id()) w += lvl.prob[i];
    return w;
}

Rat cochain_dist(const Complex& x, const Cochain& f, const Cochain& g) {
    if (f.level != g.level || f.group.order() != g.group.order())
        throw ParameterError("cochain mismatch in dist");
    if (f.level < 0) return f.values[0] == g.values[0] ? Rat(0) : Rat(1);
    const auto& lvl = faces_at(x, f.level);
    Rat w(0);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        if (f.values[i] != g.values[i]) w += lvl.prob[i];
    return w;
}

CocycleSpace cocycle_space(const Complex& x, int ell) {
    gf::FieldPrime fp(static_cast<std::uint32_t>(ell));
    const auto& verts = faces_at(x, 0).faces;
    const auto& edges = faces_at(x, 1).faces;
    const std::size_t V = verts.size(), E = edges.size();

    // delta_0 as an E x V matrix: row(a,b) = e_a - e_b
    gf::Mat d0(E, V, fp.p);
    for (std::size_t i = 0; i < E; ++i) {
        d0.at(i, edges[i][0]) = 1;
        d0.at(i, edges[i][1]) = fp.neg(1);
    }
    // delta_1 as a T x E matrix: row(a,b,c) = e_ab + e_bc - e_ac
    const auto& edge_lvl = faces_at(x, 1);
    std::size_t T = x.dim() >= 2 ? faces_at(x, 2).faces.size() : 0;
    gf::Mat d1(T, E, fp.p);
    if (x.dim() >= 2) {
        const auto& tris = faces_at(x, 2).faces;
        for (std::size_t i = 0; i < T; ++i) {
            const VIdx a = tris[i][0], b = tris[i][1], c = tris[i][2];
            d1.at(i, edge_lvl.index_of({a, b})) = 1;
            d1.at(i, edge_lvl.index_of({b, c})) = 1;
            d1.at(i, edge_lvl.index_of({a, c})) = fp.neg(1);
        }
    }

    CocycleSpace out;
    out.z_basis = gf::nullspace(d1, fp);
    out.b_basis = gf::row_space(d0.transposed(), fp);
    out.dim_z1 = static_cast<int>(out.z_basis.rows());
    out.dim_b1 = static_cast<int>(out.b_basis.rows());

    if (out.dim_z1 > out.dim_b1) {
        // first Z^1 basis vector independent of B^1 under lex pivoting
        for (std::size_t r = 0; r < out.z_basis.rows(); ++r) {
            gf::Mat stacked = out.b_basis;
            stacked.append_row(out.z_basis.row(r));
            if (gf::rank(stacked, fp) > static_cast<std::size_t>(out.dim_b1)) {
                out.witness = std::vector<std::uint32_t>(out.z_basis.row(r).begin(),
                                                         out.z_basis.row(r).end());
                break;
            }
        }
    }
    return out;
}

Cochain cochain_from_coeffs(const Complex& x, int ell,
                            std::span<const std::uint32_t> coeffs) {
    Cochain f = identity_cochain(x, 1, FiniteGroup::cyclic(ell));
    if (coeffs.size() != f.values.size())
        throw ParameterError("coefficient count does not match edge count");
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        f.values[i] = static_cast<int>(coeffs[i] % ell);
    return f;
}

namespace {

bool is_identity(const Cochain& f) {
    return std::all_of(f.values.begin(), f.values.end(),
                       [&](int v) { return v == f.group.id(); });
}

}  // namespace

ExpansionReport expansion_exact(const Complex& x, const FiniteGroup& g,
                                std::uint64_t budget) {
    const auto& edges = faces_at(x, 1);
    const std::size_t E = edges.faces.size();
    double total = std::pow(double(g.order()), double(E));
    if (total > double(budget))
        throw BudgetExceeded("expansion_exact", static_cast<std::uint64_t>(total));

    // enumerate all cochains; collect cocycles first
    std::vector<std::vector<int>> cocycles;
    Cochain f = identity_cochain(x, 1, g);
    ExpansionReport rep;
    auto for_all = [&](auto&& body) {
        std::fill(f.values.begin(), f.values.end(), 0);
        while (true) {
            body();
            std::size_t i = 0;
            while (i < E && ++f.values[i] == g.order()) f.values[i++] = 0;
            if (i == E) break;
            if (E == 0) break;
        }
    };

    for_all([&]() {
        if (is_identity(delta(x, f))) cocycles.push_back(f.values);
    });
    rep.cocycles = cocycles.size();

    Rat best_ratio(0);
    bool have = false;
    Cochain gco = identity_cochain(x, 1, g);
    for_all([&]() {
        ++rep.cochains_scanned;
        Cochain df = delta(x, f);
        if (is_identity(df)) return;  // f is a cocycle
        const Rat wt = weight(x, df);
        Rat d_min(0);
        bool dfirst = true;
        for (const auto& z : cocycles) {
            gco.values = z;
            const Rat d = cochain_dist(x, f, gco);
            if (dfirst || d < d_min) {
                d_min = d;
                dfirst = false;
            }
        }
        const Rat ratio = wt / d_min;
        if (!have || ratio < best_ratio) {
            best_ratio = ratio;
            have = true;
        }
    });
    rep.h1 = have ? best_ratio : Rat(0);

    // Z^1 == B^1 check: every cocycle is a coboundary iff the counts match
    // (coboundaries = |G|^V / |G|^{components}).
    const std::size_t V = faces_at(x, 0).faces.size();
    const int comps = connected_components(x);
    const double n_cob = std::pow(double(g.order()), double(V) - comps);
    rep.z_equals_b = (double(rep.cocycles) == n_cob);
    return rep;
}

SampleReport expansion_sample(const Complex& x, const FiniteGroup& g,
                              std::uint64_t trials, std::uint64_t seed) {
    const auto& verts = faces_at(x, 0);
    const auto& edges = faces_at(x, 1);
    const std::size_t V = verts.faces.size(), E = edges.faces.size();
    SampleReport rep;
    rep.trials = trials;

    // upper bound on dist(f, B^1-coset): exact potential enumeration when
    // the group is small, otherwise coordinate descent with restarts
    const double n_potentials = std::pow(double(g.order()), double(V));
    auto coset_dist_exact = [&](const Cochain& f) -> Rat {
        std::vector<int> h(V, 0);
        Rat best(1);
        while (true) {
            Rat d(0);
            for (std::size_t i = 0; i < E; ++i) {
                const VIdx a = edges.faces[i][0], b = edges.faces[i][1];
                if (f.values[i] != g.mul(h[a], g.inv(h[b]))) d += edges.prob[i];
            }
            best = std::min(best, d);
            std::size_t i = 0;
            while (i < V && ++h[i] == g.order()) h[i++] = 0;
            if (i == V) break;
        }
        return best;
    };
    auto coset_dist_ub = [&](const Cochain& f, SplitMix64& rng) -> Rat {
        if (n_potentials <= 300000.0) return coset_dist_exact(f);
        Rat best(1);
        for (int restart = 0; restart < 4; ++restart) {
            std::vector<int> h(V, 0);
            if (restart > 0)
                for (auto& v : h) v = static_cast<int>(rng.below(g.order()));
            auto dist_with = [&](const std::vector<int>& pot) {
                Rat d(0);
                for (std::size_t i = 0; i < E; ++i) {
                    const VIdx a = edges.faces[i][0], b = edges.faces[i][1];
                    const int dv = g.mul(pot[a], g.inv(pot[b]));
                    if (f.values[i] != dv) d += edges.prob[i];
                }
                return d;
            };
            std::vector<int> pot = h;
            Rat cur = dist_with(pot);
            bool improved = true;
            int sweeps = 0;
            while (improved && sweeps++ < 50) {
                improved = false;
                for (std::size_t v = 0; v < V; ++v) {
                    const int keep = pot[v];
                    int best_val = keep;
                    Rat best_d = cur;
                    for (int cand = 0; cand < g.order(); ++cand) {
                        if (cand == keep) continue;
                        pot[v] = cand;
                        const Rat d = dist_with(pot);
                        if (d < best_d) {
                            best_d = d;
                            best_val = cand;
                        }
                    }
                    pot[v] = best_val;
                    if (best_d < cur) {
                        cur = best_d;
                        improved = true;
                    }
                }
            }
            best = std::min(best, cur);
        }
        return best;
    };

    for (std::uint64_t t = 0; t < trials; ++t) {
        SplitMix64 rng(derive_seed(seed, t));
        Cochain f = identity_cochain(x, 1, g);
        const int mode = static_cast<int>(t % 3);
        if (mode == 0) {
            // uniform random
            for (auto& v : f.values) v = static_cast<int>(rng.below(g.order()));
        } else if (mode == 1) {
            // near-coboundary: random potential plus a few edge flips
            std::vector<int> h(V);
            for (auto& v : h) v = static_cast<int>(rng.below(g.order()));
            for (std::size_t i = 0; i < E; ++i) {
                const VIdx a = edges.faces[i][0], b = edges.faces[i][1];
                f.values[i] = g.mul(h[a], g.inv(h[b]));
            }
            const std::size_t flips = 1 + rng.below(std::max<std::size_t>(E / 8, 1));
            for (std::size_t k = 0; k < flips; ++k)
                f.values[rng.below(E)] = static_cast<int>(rng.below(g.order()));
        } else {
            // adversarial local: perturb every edge at one vertex
            const VIdx v0 = static_cast<VIdx>(rng.below(V));
            for (std::size_t i = 0; i < E; ++i) {
                if (edges.faces[i][0] == v0 || edges.faces[i][1] == v0)
                    f.values[i] = static_cast<int>(rng.below(g.order()));
            }
        }
        Cochain df = delta(x, f);
        if (is_identity(df)) continue;  // ratio would be infinite; filtered
        ++rep.informative;
        const Rat wt = weight(x, df);
        const Rat d = coset_dist_ub(f, rng);
        if (d == Rat(0)) continue;
        const double ratio = boost::rational_cast<double>(wt / d);
        rep.min_ratio = std::min(rep.min_ratio, ratio);
    }
    return rep;
}

std::string cochain_to_json(const Complex& x, const Cochain& f) {
    nlohmann::ordered_json j;
    j["level"] = f.level;
    j["group"] = f.group.name();
    j["entries"] = nlohmann::ordered_json::array();
    if (f.level >= 0) {
        const auto& lvl = faces_at(x, f.level);
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            nlohmann::ordered_json e;
            e["face"] = nlohmann::ordered_json::array();
            for (VIdx v : lvl.faces[i]) e["face"].push_back(x.vertex_ids()[v]);
            e["value"] = f.values[i];
            j["entries"].push_back(e);
        }
    } else {
        j["entries"].push_back({{"face", nlohmann::ordered_json::array()},
                                {"value", f.values[0]}});
    }
    return j.dump(2) + "\n";
}

Cochain cochain_from_json(const Complex& x, const std::string& text) {
    auto j = nlohmann::json::parse(text);
    const int level = j.at("level").get<int>();
    const std::string gname = j.at("group").get<std::string>();
    FiniteGroup g = gname.starts_with("S")
                        ? FiniteGroup::symmetric(std::stoi(gname.substr(1)))
                        : FiniteGroup::cyclic(std::stoi(gname.substr(1)));
    Cochain f = identity_cochain(x, level, g);
    for (const auto& e : j.at("entries")) {
        std::vector<VertexId> ids = e.at("face").get<std::vector<VertexId>>();
        if (level < 0) {
            f.values[0] = e.at("value").get<int>();
            continue;
        }
        Face face = face_of_ids(x, ids);
        f.values[x.level(level).index_of(face)] = e.at("value").get<int>();
    }
    validate_cochain(x, f);
    return f;
}

}  // namespace hdx
