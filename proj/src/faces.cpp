#include "hdx/faces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <functional>
#include <sstream>

namespace hdx {

namespace {

/// Unordered collections of `blocks` pairwise-disjoint (r+1)-subsets of a
/// top face, canonical ordering by least element.
void disjoint_blocks(const Face& t, int r, int blocks,
                     const std::function<void(const std::vector<Face>&)>& cb) {
    std::vector<Face> cur;
    std::vector<bool> used(t.size(), false);
    std::function<void(int)> rec = [&](int placed) {
        if (placed == blocks) {
            cb(cur);
            return;
        }
        // the least unused vertex anchors the next block (canonical order)
        std::size_t anchor = 0;
        while (anchor < t.size() && used[anchor]) ++anchor;
        if (anchor == t.size()) return;
        used[anchor] = true;
        std::vector<std::size_t> rest;
        for (std::size_t i = anchor + 1; i < t.size(); ++i)
            if (!used[i]) rest.push_back(i);
        // choose r more from rest
        std::vector<std::size_t> pick;
        std::function<void(std::size_t)> choose = [&](std::size_t start) {
            if (static_cast<int>(pick.size()) == r) {
                Face block{t[anchor]};
                for (auto i : pick) {
                    block.push_back(t[i]);
                    used[i] = true;
                }
                std::sort(block.begin(), block.end());
                cur.push_back(block);
                rec(placed + 1);
                cur.pop_back();
                for (auto i : pick) used[i] = false;
                return;
            }
            for (std::size_t s = start; s < rest.size(); ++s) {
                pick.push_back(rest[s]);
                choose(s + 1);
                pick.pop_back();
            }
        };
        choose(0);
        used[anchor] = false;
    };
    rec(0);
}

Face face_to_tuple_key(const Complex& x, const Face& f) {
    Face ids;
    for (VIdx v : f) ids.push_back(static_cast<VIdx>(x.vertex_ids()[v]));
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace

Complex faces_complex(const Complex& x, int r, std::uint64_t budget) {
    if (r > x.dim()) throw ParameterError("faces_complex needs r <= dim");
    const int m1 = (x.dim() + 1) / (r + 1);  // number of blocks m+1
    const auto& lvl = x.level(r);
    if (lvl.faces.size() > budget) throw BudgetExceeded("faces_complex vertices", lvl.faces.size());

    std::map<std::vector<Face>, Rat> tops_acc;
    for (std::size_t ti = 0; ti < x.top_faces().size(); ++ti) {
        const auto& t = x.top_faces()[ti];
        std::vector<std::vector<Face>> collections;
        disjoint_blocks(t.verts, r, m1, [&](const std::vector<Face>& blocks) {
            auto sorted = blocks;
            std::sort(sorted.begin(), sorted.end());
            collections.push_back(sorted);
        });
        if (collections.empty()) continue;
        const Rat per = t.weight / Rat(static_cast<long long>(collections.size()));
        for (auto& c : collections) tops_acc[c] += per;
        if (tops_acc.size() > budget) throw BudgetExceeded("faces_complex tops", tops_acc.size());
    }
    // vertices = r-faces, id = index in level(r)
    std::vector<VertexId> ids(lvl.faces.size());
    std::iota(ids.begin(), ids.end(), 0);
    std::vector<TopFace> tops;
    for (auto& [blocks, w] : tops_acc) {
        Face f;
        for (const auto& b : blocks) f.push_back(static_cast<VIdx>(lvl.index_of(b)));
        std::sort(f.begin(), f.end());
        tops.push_back({f, w});
    }
    // drop r-faces that appear in no collection (non-divisible leftovers
    // never drop vertices here: every r-face extends to a top face and a
    // collection through it exists whenever m1 >= 1)
    std::set<VIdx> used;
    for (const auto& t : tops)
        for (VIdx v : t.verts) used.insert(v);
    if (used.size() != ids.size()) {
        std::map<VIdx, VIdx> remap;
        std::vector<VertexId> keep;
        for (VIdx v : used) {
            remap[v] = static_cast<VIdx>(keep.size());
            keep.push_back(ids[v]);
        }
        for (auto& t : tops)
            for (auto& v : t.verts) v = remap[v];
        ids = keep;
    }
    return Complex::create(std::move(ids), {}, std::move(tops));
}

Complex faces_link(const Complex& x, int r, const std::vector<Face>& s,
                   std::uint64_t budget) {
    Face uni;
    for (const auto& f : s) {
        for (VIdx v : f) uni.push_back(v);
    }
    std::sort(uni.begin(), uni.end());
    if (std::adjacent_find(uni.begin(), uni.end()) != uni.end())
        throw ParameterError("faces_link blocks must be disjoint");
    Complex lk = s.empty() ? x : link(x, uni);
    return faces_complex(lk, r, budget);
}

bool faces_link_matches(const Complex& x, int r, const std::vector<Face>& s) {
    // side A: F^r(X_{union s})
    Complex a = faces_link(x, r, s);
    Complex xl = [&]() {
        if (s.empty()) return x;
        Face uni;
        for (const auto& f : s)
            for (VIdx v : f) uni.push_back(v);
        std::sort(uni.begin(), uni.end());
        return link(x, uni);
    }();
    // side B: link of F^r X at the collection
    Complex frx = faces_complex(x, r);
    const auto& lvl = x.level(r);
    Face s_face;
    for (const auto& f : s) {
        const std::size_t pos = lvl.index_of(f);
        // frx vertex ids are level indices, possibly remapped; find it
        bool found = false;
        for (std::size_t i = 0; i < frx.num_vertices(); ++i)
            if (frx.vertex_ids()[i] == pos) {
                s_face.push_back(static_cast<VIdx>(i));
                found = true;
                break;
            }
        if (!found) return false;
    }
    std::sort(s_face.begin(), s_face.end());
    Complex b = s.empty() ? frx : link(frx, s_face);

    // compare through the underlying X vertex-id tuples
    auto relabel = [&](const Complex& fc, const Complex& amb) {
        std::map<Face, VIdx> dict;
        std::vector<VertexId> new_ids(fc.num_vertices());
        std::vector<Face> tuples(fc.num_vertices());
        for (std::size_t i = 0; i < fc.num_vertices(); ++i) {
            // fc vertex id = index into amb.level(r)
            const Face& rf = amb.level(r).faces[fc.vertex_ids()[i]];
            tuples[i] = face_to_tuple_key(amb, rf);
        }
        // dense ids by sorted tuple
        std::vector<Face> sorted = tuples;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) dict[sorted[i]] = static_cast<VIdx>(i);
        for (std::size_t i = 0; i < fc.num_vertices(); ++i) new_ids[i] = dict.at(tuples[i]);
        return Complex::create(new_ids, {}, fc.top_faces());
    };
    Complex ra = relabel(a, xl);
    Complex rb = relabel(b, x);
    return weighted_equal(ra, rb);
}

bool ColorSet::mutually_disjoint() const {
    std::set<int> seen;
    for (const auto& c : blocks)
        for (int i : c)
            if (!seen.insert(i).second) return false;
    return true;
}

std::set<int> ColorSet::flat() const {
    std::set<int> out;
    for (const auto& c : blocks) out.insert(c.begin(), c.end());
    return out;
}

std::string ColorSet::to_string() const {
    std::ostringstream os;
    os << "{";
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        os << (j ? "," : "") << "{";
        bool first = true;
        for (int i : blocks[j]) {
            os << (first ? "" : ",") << i;
            first = false;
        }
        os << "}";
    }
    os << "}";
    return os.str();
}

namespace {

/// Bins of a sorted anchor set c over {0..n-1}: B_0 below, gaps between
/// consecutive anchors, B_T above.
std::vector<std::vector<int>> bins_of(const std::vector<int>& anchors, int n) {
    std::vector<std::vector<int>> bins;
    std::vector<int> cur;
    std::size_t next = 0;
    for (int i = 0; i < n; ++i) {
        if (next < anchors.size() && i == anchors[next]) {
            bins.push_back(cur);
            cur.clear();
            ++next;
            continue;
        }
        cur.push_back(i);
    }
    bins.push_back(cur);
    return bins;
}

}  // namespace

WellSpreadReport well_spread_check(const ColorSet& j, int n, int d1, int m) {
    WellSpreadReport rep;
    auto fail = [&](const std::string& why) {
        if (rep.pass) rep.first_failure = why;
        rep.pass = false;
    };
    if (static_cast<int>(j.blocks.size()) != m) {
        fail("expected " + std::to_string(m) + " blocks");
        return rep;
    }
    if (m <= 5) {
        fail("well-spread needs m > 5");
        return rep;
    }
    for (const auto& c : j.blocks)
        if (static_cast<int>(c.size()) != d1 + 1) {
            fail("every block must have size d1+1");
            return rep;
        }
    // clause 1: pairwise disjoint
    if (!j.mutually_disjoint()) {
        fail("blocks are not pairwise disjoint");
        return rep;
    }
    // clause 2: minimum gaps against the endpoints
    {
        const std::set<int> flat = j.flat();
        std::vector<int> pts(flat.begin(), flat.end());
        pts.push_back(0);
        pts.push_back(n);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        const double need = double(n) / std::pow(double(m) * (d1 + 1), 3.0);
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (pts[i] - pts[i - 1] < need) {
                fail("gap " + std::to_string(pts[i] - pts[i - 1]) + " below " +
                     std::to_string(need));
                return rep;
            }
    }
    // clause 3 over every 5-subset J' of J
    std::vector<int> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<int> pick;
    const double bin_cap = 100.0 * n * std::log(double(d1 + 1)) / (double(d1 + 1) * m);
    const double crowd_cap =
        100.0 * (d1 + 1) * std::log(double(d1 + 1)) / (m * std::log(double(m)));
    const double per_bin_cap = 20.0 * std::log(double(d1 + 1)) / std::log(double(m));
    std::function<bool(std::size_t)> subsets = [&](std::size_t start) -> bool {
        if (pick.size() == 5) {
            std::vector<int> cstar;
            std::set<int> inpick(pick.begin(), pick.end());
            for (int b = 0; b < m; ++b)
                if (!inpick.count(b))
                    for (int i : j.blocks[b]) cstar.push_back(i);
            std::sort(cstar.begin(), cstar.end());
            auto bins = bins_of(cstar, n);
            // (a) bin sizes
            for (const auto& b : bins)
                if (double(b.size()) > bin_cap) {
                    fail("a c*-bin has size " + std::to_string(b.size()) +
                         " above " + std::to_string(bin_cap));
                    return false;
                }
            // crowded bins for J'
            std::vector<bool> crowded(bins.size(), false);
            for (std::size_t bi = 0; bi < bins.size(); ++bi) {
                int hit = 0;
                for (int pb : pick) {
                    bool touches = false;
                    for (int i : j.blocks[pb])
                        if (std::binary_search(bins[bi].begin(), bins[bi].end(), i)) {
                            touches = true;
                            break;
                        }
                    hit += touches;
                }
                crowded[bi] = hit >= 2;
            }
            for (int pb : pick) {
                int in_crowded = 0;
                for (int i : j.blocks[pb]) {
                    for (std::size_t bi = 0; bi < bins.size(); ++bi)
                        if (crowded[bi] &&
                            std::binary_search(bins[bi].begin(), bins[bi].end(), i)) {
                            ++in_crowded;
                            break;
                        }
                }
                if (double(in_crowded) > crowd_cap) {
                    fail("block has " + std::to_string(in_crowded) +
                         " colors in crowded bins, above " + std::to_string(crowd_cap));
                    return false;
                }
                for (std::size_t bi = 0; bi < bins.size(); ++bi) {
                    int cnt = 0;
                    for (int i : j.blocks[pb])
                        if (std::binary_search(bins[bi].begin(), bins[bi].end(), i)) ++cnt;
                    if (double(cnt) > per_bin_cap) {
                        fail("a block meets one bin " + std::to_string(cnt) +
                             " times, above " + std::to_string(per_bin_cap));
                        return false;
                    }
                }
            }
            return true;
        }
        for (std::size_t s = start; s < idx.size(); ++s) {
            pick.push_back(idx[s]);
            const bool go_on = subsets(s + 1);
            pick.pop_back();
            if (!go_on) return false;
        }
        return true;
    };
    subsets(0);
    return rep;
}

WellSpreadEstimate well_spread_probability(int n, int d1, int m, int trials,
                                           std::uint64_t seed) {
    WellSpreadEstimate est;
    est.trials = trials;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        ColorSet j;
        for (int b = 0; b < m; ++b) {
            std::set<int> block;
            while (static_cast<int>(block.size()) < d1 + 1)
                block.insert(static_cast<int>(rng.below(n)));
            j.blocks.push_back(block);
        }
        if (well_spread_check(j, n, d1, m).pass) ++est.successes;
    }
    est.p_hat = trials ? double(est.successes) / trials : 0.0;
    // Wilson interval at z = 1.96
    const double z = 1.96, nn = trials;
    if (trials) {
        const double center = (est.p_hat + z * z / (2 * nn)) / (1 + z * z / nn);
        const double half =
            z * std::sqrt(est.p_hat * (1 - est.p_hat) / nn + z * z / (4 * nn * nn)) /
            (1 + z * z / nn);
        est.lo = std::max(0.0, center - half);
        est.hi = std::min(1.0, center + half);
    }
    return est;
}

ColoredFacesComplex faces_restrict(const Complex& x, const ColorSet& j) {
    if (!x.is_partite()) throw NotPartite("faces_restrict needs a partite complex");
    if (!j.mutually_disjoint()) throw ParameterError("color blocks must be disjoint");
    ColoredFacesComplex out;
    const std::set<int> flat = j.flat();
    for (int c : flat)
        if (!x.color_set().count(c))
            throw ParameterError("color " + std::to_string(c) + " not in the complex");

    Complex xu = flat.empty() ? x : color_restrict(x, flat);

    std::map<std::pair<int, Face>, VIdx> vid;  // (block, face) -> id
    auto get_vid = [&](int block, const Face& f) {
        auto key = std::make_pair(block, f);
        auto it = vid.find(key);
        if (it != vid.end()) return it->second;
        const VIdx id = static_cast<VIdx>(out.vertex_info.size());
        vid.emplace(key, id);
        out.vertex_info.emplace_back(block, f);
        return id;
    };

    std::map<Face, Rat> tops_acc;
    for (const auto& t : xu.top_faces()) {
        Face top;
        for (std::size_t b = 0; b < j.blocks.size(); ++b) {
            Face piece;
            for (VIdx v : t.verts)
                if (j.blocks[b].count(xu.colors()[v])) piece.push_back(v);
            // keep pieces in terms of the original x vertex ids
            Face orig;
            for (VIdx v : piece) orig.push_back(static_cast<VIdx>(xu.vertex_ids()[v]));
            std::sort(orig.begin(), orig.end());
            top.push_back(get_vid(static_cast<int>(b), orig));
        }
        std::sort(top.begin(), top.end());
        tops_acc[top] += t.weight;
    }
    std::vector<TopFace> tops;
    for (auto& [f, w] : tops_acc) tops.push_back({f, w});
    std::vector<VertexId> ids(out.vertex_info.size());
    std::iota(ids.begin(), ids.end(), 0);
    out.cx = Complex::create(std::move(ids), {}, std::move(tops));
    return out;
}

TensorDecomposition tensor_decompose_link(const std::vector<Complex>& join_parts,
                                          const std::vector<VertexId>& w_ids,
                                          const ColorSet& j) {
    Complex z = join(join_parts);
    if (!z.is_partite()) throw NotPartite("tensor decomposition needs a partite join");
    Face w = w_ids.empty() ? Face{} : face_of_ids(z, w_ids);
    Complex zw = w.empty() ? z : link(z, w);

    // color bins of col(w) inside the global color order
    std::vector<int> anchors;
    for (VIdx v : w) anchors.push_back(z.colors()[v]);
    std::sort(anchors.begin(), anchors.end());
    int total_colors = 0;
    for (int c : z.color_set()) total_colors = std::max(total_colors, c + 1);
    auto raw_bins = bins_of(anchors, total_colors);

    TensorDecomposition out;
    const auto link_colors = zw.color_set();
    for (const auto& bin : raw_bins) {
        std::vector<int> present;
        for (int c : bin)
            if (link_colors.count(c)) present.push_back(c);
        out.bin_colors.push_back(present);
        // classification against J
        int touching = 0;
        for (const auto& block : j.blocks) {
            bool touches = false;
            for (int c : block)
                if (std::find(bin.begin(), bin.end(), c) != bin.end()) touches = true;
            touching += touches;
        }
        out.bins.push_back(touching >= 2 ? BinClass::Crowded
                                         : (touching == 1 ? BinClass::Lonely
                                                          : BinClass::Empty));
        ColorSet jt;
        for (const auto& block : j.blocks) {
            std::set<int> piece;
            for (int c : block)
                if (std::find(bin.begin(), bin.end(), c) != bin.end()) piece.insert(c);
            jt.blocks.push_back(piece);
        }
        out.factor_colors.push_back(jt);
        if (!present.empty())
            out.factors.push_back(color_restrict(zw, std::set<int>(present.begin(),
                                                                   present.end())));
        else
            out.factors.push_back(Complex::uniform({0}, {}, {{0}}));  // empty bin stub
    }

    // verify the product law: the colored faces complex of the link equals
    // the blockwise product of the per-bin colored faces complexes
    ColoredFacesComplex direct = faces_restrict(zw, j);
    std::vector<std::optional<ColoredFacesComplex>> factors_fc(raw_bins.size());
    for (std::size_t t = 0; t < raw_bins.size(); ++t) {
        bool has_colors = false;
        for (const auto& piece : out.factor_colors[t].blocks)
            if (!piece.empty()) has_colors = true;
        if (!has_colors) continue;
        // restrict the link to this bin's colors, then block it
        std::set<int> bin_set(out.bin_colors[t].begin(), out.bin_colors[t].end());
        Complex piece_cx = color_restrict(zw, bin_set);
        factors_fc[t] = faces_restrict(piece_cx, out.factor_colors[t]);
    }

    // check: |tops(direct)| = prod |tops(factor)| and the distribution
    // multiplies: for every direct top face, Pr = prod over bins of the
    // probability of its per-bin shadow
    bool ok = true;
    std::size_t prod_count = 1;
    for (auto& f : factors_fc)
        if (f) prod_count *= f->cx.top_faces().size();
    if (direct.cx.top_faces().size() != prod_count) ok = false;

    if (ok) {
        for (const auto& t : direct.cx.top_faces()) {
            Rat prod(1);
            for (std::size_t bt = 0; bt < raw_bins.size(); ++bt) {
                if (!factors_fc[bt]) continue;
                // shadow: per block, the part of the face within this bin
                Face shadow_key;
                const auto& fc = *factors_fc[bt];
                std::map<std::pair<int, Face>, VIdx> lookup;
                for (std::size_t i = 0; i < fc.vertex_info.size(); ++i)
                    lookup[fc.vertex_info[i]] = static_cast<VIdx>(i);
                bool found_all = true;
                for (VIdx v : t.verts) {
                    const auto& [block, face] = direct.vertex_info[v];
                    // restrict the face to vertices whose color is in bin bt
                    Face piece;
                    for (VIdx xv_id : face) {
                        const VIdx xv = zw.index_of_id(xv_id);
                        const int c = zw.colors()[xv];
                        if (std::find(raw_bins[bt].begin(), raw_bins[bt].end(), c) !=
                            raw_bins[bt].end())
                            piece.push_back(xv_id);
                    }
                    auto it = lookup.find({block, piece});
                    if (it == lookup.end()) {
                        found_all = false;
                        break;
                    }
                    shadow_key.push_back(it->second);
                }
                if (!found_all) {
                    ok = false;
                    break;
                }
                std::sort(shadow_key.begin(), shadow_key.end());
                shadow_key.erase(std::unique(shadow_key.begin(), shadow_key.end()),
                                 shadow_key.end());
                // find this top face in the factor
                bool matched = false;
                for (const auto& ft : fc.cx.top_faces())
                    if (ft.verts == shadow_key) {
                        prod *= ft.weight;
                        matched = true;
                        break;
                    }
                if (!matched) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
            if (prod != t.weight) {
                ok = false;
                break;
            }
        }
    }
    out.product_law_verified = ok;
    return out;
}

}  // namespace hdx
