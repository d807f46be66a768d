#include "hdx/buildings.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>

namespace hdx {

std::set<int> BuildingSpec::effective_colors() const {
    if (!colors.empty()) return colors;
    std::set<int> out;
    const int top = kind == BuildingKind::TypeA ? static_cast<int>(rank) - 1
                                                : static_cast<int>(rank);
    for (int i = 1; i <= top; ++i) out.insert(i);
    return out;
}

std::string BuildingSpec::to_string() const {
    std::ostringstream os;
    if (kind == BuildingKind::TypeA)
        os << "A:n=" << rank;
    else
        os << "C:g=" << rank;
    os << ",p=" << p;
    if (!colors.empty()) {
        os << ",I=";
        bool first = true;
        for (int c : colors) {
            os << (first ? "" : ",") << c;
            first = false;
        }
    }
    return os.str();
}

namespace {

std::uint64_t checked_mul_div(std::uint64_t acc, std::uint64_t top, std::uint64_t bot) {
    using u128 = unsigned __int128;
    u128 r = (u128)acc * top;
    return static_cast<std::uint64_t>(r / bot);
}

}  // namespace

std::uint64_t count_isotropic(std::uint32_t g, std::uint32_t p, std::uint32_t k) {
    if (k > g) return 0;
    // [g choose k]_p * prod_{i=0}^{k-1} (p^{g-i} + 1)
    long double approx = 1.0L;
    for (std::uint32_t i = 0; i < k; ++i) {
        approx *= (std::pow((long double)p, g - i) - 1) /
                  (std::pow((long double)p, i + 1) - 1);
        approx *= std::pow((long double)p, g - i) + 1;
    }
    if (approx > 9e18L) throw BudgetExceeded("isotropic count overflows", ~0ULL);
    std::uint64_t acc = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        std::uint64_t top = 1, bot = 1;
        for (std::uint32_t e = 0; e < g - i; ++e) top *= p;
        for (std::uint32_t e = 0; e < i + 1; ++e) bot *= p;
        acc = checked_mul_div(acc, top - 1, bot - 1);
        std::uint64_t plus = 1;
        for (std::uint32_t e = 0; e < g - i; ++e) plus *= p;
        acc = checked_mul_div(acc, plus + 1, 1);
    }
    return acc;
}

BuildingComplex build(const BuildingSpec& spec, std::uint64_t budget) {
    gf::FieldPrime fp(spec.p);
    const auto colors = spec.effective_colors();
    const std::uint32_t ambient = spec.ambient();
    for (int c : colors) {
        const int top = spec.kind == BuildingKind::TypeA ? static_cast<int>(spec.rank) - 1
                                                         : static_cast<int>(spec.rank);
        if (c < 1 || c > top)
            throw ParameterError("building color " + std::to_string(c) + " out of range");
    }

    // budget projection from closed-form level counts
    std::uint64_t projected = 0;
    for (int c : colors) {
        const std::uint64_t n =
            spec.kind == BuildingKind::TypeA
                ? gf::count_subspaces(ambient, spec.p, static_cast<std::uint32_t>(c))
                : count_isotropic(spec.rank, spec.p, static_cast<std::uint32_t>(c));
        projected += n;
        if (projected > budget) throw BudgetExceeded("building vertex set", projected);
    }

    std::optional<gf::SymplecticForm> form;
    if (spec.kind == BuildingKind::TypeC)
        form = gf::SymplecticForm::standard(spec.rank, spec.p);

    BuildingComplex out;
    out.spec = spec;
    std::vector<int> vertex_colors;
    std::vector<std::vector<VIdx>> by_color;
    for (int c : colors) {
        auto level = spec.kind == BuildingKind::TypeA
                         ? gf::enumerate_subspaces(ambient, fp, c)
                         : gf::enumerate_isotropic(*form, c);
        by_color.emplace_back();
        for (auto& s : level) {
            const VIdx id = static_cast<VIdx>(out.vertex_subspace.size());
            out.index.emplace(s, id);
            out.vertex_subspace.push_back(std::move(s));
            vertex_colors.push_back(c);
            by_color.back().push_back(id);
        }
    }

    // flags: DFS through consecutive color levels by containment
    std::vector<Face> tops;
    std::uint64_t flag_budget = budget;
    Face cur;
    std::function<void(std::size_t)> rec = [&](std::size_t lvl) {
        if (lvl == by_color.size()) {
            tops.push_back(cur);
            if (tops.size() > flag_budget)
                throw BudgetExceeded("building flag count", tops.size());
            return;
        }
        for (VIdx cand : by_color[lvl]) {
            if (!cur.empty()) {
                const auto& prev = out.vertex_subspace[cur.back()];
                if (!out.vertex_subspace[cand].contains(prev, fp)) continue;
            }
            cur.push_back(cand);
            rec(lvl + 1);
            cur.pop_back();
        }
    };
    rec(0);
    if (tops.empty()) throw Error("building has no maximal flags");

    std::vector<VertexId> ids(out.vertex_subspace.size());
    std::iota(ids.begin(), ids.end(), 0);
    out.cx = Complex::uniform(std::move(ids), std::move(vertex_colors), std::move(tops));
    out.cx.field_p = spec.p;
    return out;
}

Complex build_symplectic_like(const SymplecticLikeSpec& spec, std::uint64_t budget) {
    if (spec.parts.empty()) throw ParameterError("empty join spec");
    int type_c_seen = 0;
    for (std::size_t i = 0; i < spec.parts.size(); ++i) {
        if (spec.parts[i].kind == BuildingKind::TypeC) {
            ++type_c_seen;
            if (i + 1 != spec.parts.size())
                throw ParameterError("TypeC part must be last in a symplectic-like join");
        }
    }
    if (type_c_seen > 1) throw ParameterError("at most one TypeC part in a join");
    std::vector<Complex> parts;
    for (const auto& ps : spec.parts) parts.push_back(build(ps, budget).cx);
    Complex j = join(parts);
    std::uint64_t total = j.top_faces().size();
    if (total > budget) throw BudgetExceeded("join top faces", total);
    return j;
}

LinkIsoReport building_link_iso(std::uint32_t g, std::uint32_t p,
                                const gf::Subspace& v) {
    const auto form = gf::SymplecticForm::standard(g, p);
    const gf::FieldPrime& fp = form.fp;
    if (!gf::is_isotropic(form, v)) throw NonIsotropic("link vertex must be isotropic");
    const int t = v.dim();
    if (t < 1 || t > static_cast<int>(g)) throw ParameterError("vertex dimension out of range");

    BuildingSpec full{BuildingKind::TypeC, g, p, {}};
    BuildingComplex bc = build(full);
    const VIdx vid = bc.index.at(v);
    Complex lk = link(bc.cx, {vid});

    // model: A-part on subspaces of v, C-part on the quotient by v
    std::vector<Complex> parts;
    std::optional<BuildingComplex> a_part, c_part;
    if (t >= 2) {
        a_part = build(BuildingSpec{BuildingKind::TypeA, static_cast<std::uint32_t>(t), p, {}});
        parts.push_back(a_part->cx);
    }
    if (static_cast<int>(g) - t >= 1) {
        c_part = build(BuildingSpec{BuildingKind::TypeC, g - t, p, {}});
        parts.push_back(c_part->cx);
    }
    LinkIsoReport rep;
    if (parts.empty()) {
        rep.detail = "degenerate link (g = t = 1)";
        rep.pass = lk.num_vertices() == 0;
        return rep;
    }
    Complex model = parts.size() == 1 ? parts[0] : join(parts);

    // explicit bijection
    const auto qf = gf::quotient_form(form, v);
    const gf::Mat darboux = gf::darboux_basis(qf.induced);
    // subspace coordinates transform by the inverse of the darboux rows;
    // compute S^{-1} once
    const std::size_t m = darboux.rows();
    gf::Mat aug(m, 2 * m, fp.p);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) aug.at(i, j) = darboux.at(i, j);
        aug.at(i, m + i) = 1;
    }
    gf::rref_in_place(aug, fp);
    gf::Mat dinv(m, m, fp.p);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) dinv.at(i, j) = aug.at(i, m + j);

    const VertexId a_offset = 0;
    VertexId c_offset = 0;
    if (a_part) {
        VertexId max_id = 0;
        for (auto id : a_part->cx.vertex_ids()) max_id = std::max(max_id, id);
        c_offset = max_id + 1;  // mirrors join()'s id offsets
    }

    std::map<VertexId, VertexId> vmap;
    bool ok = true;
    std::string why;
    for (std::size_t i = 0; i < lk.num_vertices() && ok; ++i) {
        const VertexId link_id = lk.vertex_ids()[i];
        const auto& u = bc.vertex_subspace[static_cast<VIdx>(link_id)];
        if (u.dim() < t) {
            // below v: coordinates of u inside v
            gf::Mat coords(0, t, p);
            for (int r = 0; r < u.dim(); ++r) {
                // solve x * basis(v) = row
                gf::Mat sys(t + 1, v.n, p);
                for (int rr = 0; rr < t; ++rr)
                    for (std::uint32_t cc = 0; cc < v.n; ++cc)
                        sys.at(rr, cc) = v.basis.at(rr, cc);
                for (std::uint32_t cc = 0; cc < v.n; ++cc)
                    sys.at(t, cc) = u.basis.at(r, cc);
                // x * basis = row  <=>  basis^T x^T = row^T
                gf::Mat tr(v.n, t + 1, p);
                for (std::uint32_t cc = 0; cc < v.n; ++cc) {
                    for (int rr = 0; rr < t; ++rr) tr.at(cc, rr) = v.basis.at(rr, cc);
                    tr.at(cc, t) = u.basis.at(r, cc);
                }
                auto piv = gf::rref_in_place(tr, fp);
                std::vector<std::uint32_t> x(t, 0);
                for (std::size_t pi = 0; pi < piv.size(); ++pi) {
                    if (piv[pi] == static_cast<std::size_t>(t)) {
                        ok = false;
                        why = "link vertex below v is not inside v";
                        break;
                    }
                    x[piv[pi]] = tr.at(pi, t);
                }
                coords.append_row(x);
            }
            if (!ok) break;
            gf::Subspace img = gf::rref(coords, fp);
            if (!a_part) {
                ok = false;
                why = "unexpected below-v vertex";
                break;
            }
            auto it = a_part->index.find(img);
            if (it == a_part->index.end()) {
                ok = false;
                why = "below-v image not a model vertex";
                break;
            }
            vmap[link_id] = a_offset + it->second;
        } else {
            // above v: quotient coordinates, then to the standard form
            gf::Subspace q = qf.project(u);
            gf::Mat newc(0, m, p);
            for (int r = 0; r < q.dim(); ++r) {
                std::vector<std::uint32_t> y(m, 0);
                for (std::size_t cc = 0; cc < m; ++cc) {
                    std::uint64_t acc = 0;
                    for (std::size_t kk = 0; kk < m; ++kk)
                        acc += std::uint64_t(q.basis.at(r, kk)) * dinv.at(kk, cc) % p;
                    y[cc] = static_cast<std::uint32_t>(acc % p);
                }
                newc.append_row(y);
            }
            gf::Subspace img = gf::rref(newc, fp);
            if (!c_part) {
                ok = false;
                why = "unexpected above-v vertex";
                break;
            }
            auto it = c_part->index.find(img);
            if (it == c_part->index.end()) {
                ok = false;
                why = "above-v image not isotropic in the model";
                break;
            }
            vmap[link_id] = c_offset + it->second;
        }
    }

    LinkIsoReport out;
    out.model = model;
    out.vertex_map = vmap;
    if (!ok) {
        out.pass = false;
        out.detail = why;
        return out;
    }
    if (vmap.size() != lk.num_vertices() || vmap.size() != model.num_vertices()) {
        out.pass = false;
        out.detail = "vertex map is not a bijection";
        return out;
    }
    {
        std::set<VertexId> image;
        for (auto& [a, b] : vmap) image.insert(b);
        if (image.size() != vmap.size()) {
            out.pass = false;
            out.detail = "vertex map is not injective";
            return out;
        }
    }
    // relabel the link through the map and compare as weighted complexes
    std::vector<VertexId> new_ids;
    for (std::size_t i = 0; i < lk.num_vertices(); ++i)
        new_ids.push_back(vmap.at(lk.vertex_ids()[i]));
    Complex relabeled = Complex::create(new_ids, {}, lk.top_faces());
    Complex model_plain = Complex::create(model.vertex_ids(), {}, model.top_faces());
    out.pass = weighted_equal(relabeled, model_plain);
    out.detail = out.pass ? "simplicial isomorphism verified (faces and weights)"
                          : "face structure or weights differ";
    return out;
}

namespace {

// drop immediate backtracks (a,b,a) and repeated vertices (a,a)
std::vector<gf::Subspace> normalize_walk(std::vector<gf::Subspace> w) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < w.size();) {
            if (w[i] == w[i + 1]) {
                w.erase(w.begin() + i + 1);
                changed = true;
                continue;
            }
            ++i;
        }
        for (std::size_t i = 0; i + 2 < w.size();) {
            if (w[i] == w[i + 2]) {
                w.erase(w.begin() + i + 1, w.begin() + i + 3);
                changed = true;
                continue;
            }
            ++i;
        }
    }
    return w;
}

}  // namespace

std::vector<gf::Subspace> isotropic_path(const gf::SymplecticForm& form,
                                         const gf::Subspace& v1,
                                         const gf::Subspace& v2, int j) {
    const gf::FieldPrime& fp = form.fp;
    const int i = v1.dim();
    if (v2.dim() != i) throw ParameterError("isotropic_path endpoints must have equal dim");
    if (j <= i || j > static_cast<int>(form.g))
        throw ParameterError("isotropic_path needs i < j <= g");
    if (!gf::is_isotropic(form, v1) || !gf::is_isotropic(form, v2))
        throw NonIsotropic("isotropic_path endpoints must be isotropic");
    if (v1 == v2) return {};

    std::vector<gf::Subspace> path{v1};
    gf::Subspace cur = v1;
    int guard = 0;
    while (cur != v2) {
        if (++guard > 4 * static_cast<int>(form.g)) throw Error("isotropic_path stalled");
        const gf::Subspace uni = gf::sum(cur, v2, fp);
        if (uni.dim() <= j && gf::is_isotropic(form, uni)) {
            // single hop through a common superspace
            const gf::Subspace mid = gf::extend_isotropic(form, uni, j);
            path.push_back(mid);
            path.push_back(v2);
            cur = v2;
            continue;
        }
        if (uni.dim() <= j) {
            // the four-step route: up from cur, across, down to v2
            const gf::Subspace u1 = gf::extend_isotropic(form, cur, j);
            const gf::Subspace w = gf::sum(u1, v2, fp);
            const gf::Subspace u2 = gf::extend_isotropic(form, v2, j, w);
            const gf::Subspace meet = gf::intersect(u1, u2, fp);
            if (meet.dim() < i) throw Error("isotropic_path: meet too small");
            const gf::Subspace mid = gf::leading_subspace(meet, i, fp);
            path.push_back(u1);
            path.push_back(mid);
            path.push_back(u2);
            path.push_back(v2);
            cur = v2;
            continue;
        }
        // far apart: step to an intermediate subspace sharing more with v2
        const gf::Subspace keep = gf::intersect(cur, v2, fp);
        // base: extend keep inside cur to dimension 2i - j
        gf::Subspace base = keep;
        for (int r = 0; r < cur.dim() && base.dim() < 2 * i - j; ++r) {
            if (base.contains_vector(cur.basis.row(r), fp)) continue;
            gf::Mat mb = base.basis;
            mb.append_row(cur.basis.row(r));
            base = gf::rref(mb, fp);
        }
        // fresh directions from v2, perpendicular to base
        gf::Subspace cand = gf::intersect(gf::perp(form, base), v2, fp);
        gf::Subspace next = base;
        while (next.dim() < i) {
            if (next.contains(cand, fp)) break;
            auto x = gf::lex_min_outside(cand, next, fp);
            gf::Mat mb = next.basis;
            mb.append_row(x);
            next = gf::rref(mb, fp);
        }
        // top up from cur if fresh directions ran out
        for (int r = 0; r < cur.dim() && next.dim() < i; ++r) {
            if (next.contains_vector(cur.basis.row(r), fp)) continue;
            std::vector<std::uint32_t> row(cur.basis.row(r).begin(),
                                           cur.basis.row(r).end());
            // must stay isotropic and perpendicular to what we added
            gf::Subspace test = next;
            gf::Mat mb = test.basis;
            mb.append_row(row);
            test = gf::rref(mb, fp);
            if (!gf::is_isotropic(form, test)) continue;
            next = test;
        }
        if (next.dim() != i || next == cur)
            throw Error("isotropic_path: no progress toward target");
        // connect cur -> next with a 4-hop (they satisfy dim(cur+next) <= j)
        const gf::Subspace u1 = gf::extend_isotropic(form, cur, j);
        const gf::Subspace w = gf::sum(u1, next, fp);
        const gf::Subspace u2 = gf::extend_isotropic(form, next, j, w);
        const gf::Subspace meet = gf::intersect(u1, u2, fp);
        if (meet.dim() < i) throw Error("isotropic_path: meet too small (step)");
        const gf::Subspace mid = gf::leading_subspace(meet, i, fp);
        path.push_back(u1);
        path.push_back(mid);
        path.push_back(u2);
        path.push_back(next);
        cur = next;
    }
    auto norm = normalize_walk(path);
    return std::vector<gf::Subspace>(norm.begin(), norm.end());
}

gf::Subspace random_isotropic(const gf::SymplecticForm& form, int dim,
                              SplitMix64& rng) {
    gf::Rng f = [&rng]() { return rng(); };
    return gf::extend_isotropic(form, gf::zero_subspace(form.ambient(), form.fp.p),
                                dim, {}, &f);
}

BuildingSpec parse_building_spec(const std::string& text) {
    BuildingSpec spec;
    if (text.size() < 2 || text[1] != ':')
        throw ParameterError("building spec must look like C:g=2,p=3[,I=1,2]");
    if (text[0] == 'A')
        spec.kind = BuildingKind::TypeA;
    else if (text[0] == 'C')
        spec.kind = BuildingKind::TypeC;
    else
        throw ParameterError("building kind must be A or C");
    std::string rest = text.substr(2);
    std::istringstream ss(rest);
    std::string tok;
    bool in_colors = false;
    while (std::getline(ss, tok, ',')) {
        if (in_colors) {
            spec.colors.insert(std::stoi(tok));
            continue;
        }
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParameterError("bad spec token: " + tok);
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "g" || key == "n")
            spec.rank = static_cast<std::uint32_t>(std::stoul(val));
        else if (key == "p")
            spec.p = static_cast<std::uint32_t>(std::stoul(val));
        else if (key == "I") {
            spec.colors.insert(std::stoi(val));
            in_colors = true;
        } else
            throw ParameterError("unknown spec key: " + key);
    }
    return spec;
}

SymplecticLikeSpec parse_join_spec(const std::string& text) {
    SymplecticLikeSpec spec;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto plus = text.find('+', start);
        if (plus == std::string::npos) {
            spec.parts.push_back(parse_building_spec(text.substr(start)));
            break;
        }
        spec.parts.push_back(parse_building_spec(text.substr(start, plus - start)));
        start = plus + 1;
    }
    return spec;
}

}  // namespace hdx
