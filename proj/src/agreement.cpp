#include "hdx/agreement.hpp"

#include <algorithm>
#include <boost/rational.hpp>
#include <cmath>
#include <functional>
#include <sstream>

namespace hdx {

namespace {

double rat_d(const Rat& r) { return boost::rational_cast<double>(r); }

std::uint64_t face_fingerprint(const Face& s, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    for (VIdx v : s) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0x100000001b3ULL;
    }
    return h;
}

int isqrt_exact(int n) {
    const int r = static_cast<int>(std::lround(std::sqrt(double(n))));
    return r * r == n ? r : -1;
}

struct PlantedEnsemble final : Ensemble {
    std::vector<int> g;
    int q;
    double eta;
    std::uint64_t seed;
    int alphabet() const override { return q; }
    std::vector<int> eval(const Face& s) const override {
        std::vector<int> out(s.size());
        SplitMix64 rng(face_fingerprint(s, seed));
        for (std::size_t i = 0; i < s.size(); ++i) {
            out[i] = g[s[i]];
            if (eta > 0 && rng.uniform01() < eta) {
                // flip to a uniformly random different symbol
                const int shift = 1 + static_cast<int>(rng.below(q - 1));
                out[i] = (out[i] + shift) % q;
            }
        }
        return out;
    }
};

struct IIDEnsemble final : Ensemble {
    int q;
    std::uint64_t seed;
    int alphabet() const override { return q; }
    std::vector<int> eval(const Face& s) const override {
        std::vector<int> out(s.size());
        SplitMix64 rng(face_fingerprint(s, seed));
        for (auto& v : out) v = static_cast<int>(rng.below(q));
        return out;
    }
};

struct CoverEnsemble final : Ensemble {
    const Complex* x;
    Cochain phi;
    int sheets;
    std::vector<int> g;  // indexed by v * sheets + sheet
    int q;
    std::uint64_t seed;
    int alphabet() const override { return q; }
    std::vector<int> eval(const Face& s) const override {
        // pick a lift: the sheet of the least vertex, seeded per face
        SplitMix64 rng(face_fingerprint(s, seed));
        const int i0 = static_cast<int>(rng.below(sheets));
        std::vector<int> out(s.size());
        const VIdx v0 = s[0];
        for (std::size_t i = 0; i < s.size(); ++i) {
            int sheet = i0;
            if (s[i] != v0) {
                const std::array<VIdx, 2> oriented{s[i], v0};
                sheet = phi.group.act(eval_oriented(*x, phi, oriented), i0);
            }
            out[i] = g[s[i] * sheets + sheet];
        }
        return out;
    }
};

struct MixtureEnsemble final : Ensemble {
    PlantedEnsemble planted;
    IIDEnsemble iid;
    double lambda;
    std::uint64_t seed;
    int alphabet() const override { return planted.q; }
    std::vector<int> eval(const Face& s) const override {
        SplitMix64 rng(face_fingerprint(s, seed ^ 0x5bf03635ULL));
        return rng.uniform01() < lambda ? planted.eval(s) : iid.eval(s);
    }
};

}  // namespace

std::unique_ptr<Ensemble> plant(const Complex& x, std::vector<int> global,
                                int alphabet, double eta, std::uint64_t seed) {
    if (eta < 0 || eta >= 1) throw ParameterError("plant needs eta in [0,1)");
    if (global.size() != x.num_vertices())
        throw ParameterError("global function size mismatch");
    auto e = std::make_unique<PlantedEnsemble>();
    e->g = std::move(global);
    e->q = alphabet;
    e->eta = eta;
    e->seed = seed;
    return e;
}

std::unique_ptr<Ensemble> iid_ensemble(const Complex& x, int alphabet,
                                       std::uint64_t seed) {
    (void)x;
    auto e = std::make_unique<IIDEnsemble>();
    e->q = alphabet;
    e->seed = seed;
    return e;
}

std::unique_ptr<Ensemble> plant_cover(const Complex& x, const Cochain& phi,
                                      int sheets, std::vector<int> global_on_cover,
                                      int alphabet, std::uint64_t seed) {
    if (global_on_cover.size() != x.num_vertices() * sheets)
        throw ParameterError("cover global function size mismatch");
    auto e = std::make_unique<CoverEnsemble>();
    e->x = &x;
    e->phi = phi;
    e->sheets = sheets;
    e->g = std::move(global_on_cover);
    e->q = alphabet;
    e->seed = seed;
    return e;
}

std::unique_ptr<Ensemble> mixture_ensemble(const Complex& x, std::vector<int> global,
                                           int alphabet, double lambda,
                                           std::uint64_t seed) {
    auto e = std::make_unique<MixtureEnsemble>();
    e->planted.g = std::move(global);
    e->planted.q = alphabet;
    e->planted.eta = 0;
    e->planted.seed = seed;
    e->iid.q = alphabet;
    e->iid.seed = seed ^ 0x1234567ULL;
    e->lambda = lambda;
    e->seed = seed;
    (void)x;
    return e;
}

TestDistribution TestDistribution::v_test(int k) {
    const int m = isqrt_exact(k + 1);
    if (m < 1) throw ParameterError("V-test needs k+1 to be a perfect square");
    return {TestKind::VTest, k, m};
}

TestDistribution TestDistribution::z_test(int k) {
    const int m = isqrt_exact(k + 1);
    if (m < 1) throw ParameterError("Z-test needs k+1 to be a perfect square");
    return {TestKind::ZTest, k, m};
}

TestDistribution TestDistribution::custom(int k, int overlap) {
    if (overlap < 1 || overlap > k) throw ParameterError("custom test overlap out of range");
    return {TestKind::Custom, k, overlap};
}

int TestDistribution::d() const {
    if (kind == TestKind::ZTest) return 3 * (k + 1) - 2 * overlap - 1;
    return 2 * (k + 1) - overlap - 1;
}

namespace {

Face sample_d_face(const Complex& x, int d, SplitMix64& rng) {
    // sample a top face by weight, then a uniform (d+1)-subset
    double r = rng.uniform01();
    const auto& tops = x.top_faces();
    std::size_t ti = 0;
    for (; ti + 1 < tops.size(); ++ti) {
        const double w = rat_d(tops[ti].weight);
        if (r < w) break;
        r -= w;
    }
    Face t = tops[ti].verts;
    if (d + 1 < static_cast<int>(t.size())) {
        rng.shuffle(t);
        t.resize(d + 1);
        std::sort(t.begin(), t.end());
    }
    return t;
}

}  // namespace

std::vector<Face> TestDistribution::sample(const Complex& x, SplitMix64& rng) const {
    if (d() > x.dim()) throw ParameterError("test dimension exceeds the complex");
    Face t = sample_d_face(x, d(), rng);
    rng.shuffle(t);
    const int m = overlap, kk = k + 1;
    std::vector<Face> out;
    if (kind == TestKind::ZTest) {
        Face i12(t.begin(), t.begin() + m);
        Face i23(t.begin() + m, t.begin() + 2 * m);
        Face a(t.begin() + 2 * m, t.begin() + 2 * m + (kk - m));
        Face b(t.begin() + 2 * m + (kk - m), t.begin() + 2 * m + (kk - m) + (kk - 2 * m));
        Face c(t.begin() + 2 * m + (kk - m) + (kk - 2 * m), t.end());
        Face s1 = i12, s2 = i12, s3 = i23;
        s1.insert(s1.end(), a.begin(), a.end());
        s2.insert(s2.end(), i23.begin(), i23.end());
        s2.insert(s2.end(), b.begin(), b.end());
        s3.insert(s3.end(), c.begin(), c.end());
        for (auto* f : {&s1, &s2, &s3}) std::sort(f->begin(), f->end());
        out = {s1, s2, s3};
    } else {
        Face i(t.begin(), t.begin() + m);
        Face s1 = i, s2 = i;
        s1.insert(s1.end(), t.begin() + m, t.begin() + m + (kk - m));
        s2.insert(s2.end(), t.begin() + m + (kk - m), t.end());
        std::sort(s1.begin(), s1.end());
        std::sort(s2.begin(), s2.end());
        out = {s1, s2};
    }
    return out;
}

namespace {

long long binom_ll(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

void enumerate_splits(
    const Face& t, const TestDistribution& td,
    const std::function<void(const std::vector<Face>&)>& cb) {
    const int m = td.overlap, kk = td.k + 1;
    const int n = static_cast<int>(t.size());
    // choose the intersection set(s) and the remaining parts by iterating
    // over assignments of each element of t to its role
    if (td.kind == TestKind::ZTest) {
        // roles: 0 = s1 only, 1 = s1&s2, 2 = s2 only, 3 = s2&s3, 4 = s3 only
        std::vector<int> role(n, -1);
        std::function<void(int, std::array<int, 5>)> rec =
            [&](int i, std::array<int, 5> left) {
                if (i == n) {
                    std::vector<Face> s(3);
                    for (int j = 0; j < n; ++j) {
                        if (role[j] <= 1) s[0].push_back(t[j]);
                        if (role[j] >= 1 && role[j] <= 3) s[1].push_back(t[j]);
                        if (role[j] >= 3) s[2].push_back(t[j]);
                    }
                    cb(s);
                    return;
                }
                for (int r = 0; r < 5; ++r) {
                    if (!left[r]) continue;
                    --left[r];
                    role[i] = r;
                    rec(i + 1, left);
                    ++left[r];
                }
            };
        rec(0, {kk - m, m, kk - 2 * m, m, kk - m});
    } else {
        // roles: 0 = s1 only, 1 = both, 2 = s2 only
        std::vector<int> role(n, -1);
        std::function<void(int, std::array<int, 3>)> rec =
            [&](int i, std::array<int, 3> left) {
                if (i == n) {
                    std::vector<Face> s(2);
                    for (int j = 0; j < n; ++j) {
                        if (role[j] <= 1) s[0].push_back(t[j]);
                        if (role[j] >= 1) s[1].push_back(t[j]);
                    }
                    cb(s);
                    return;
                }
                for (int r = 0; r < 3; ++r) {
                    if (!left[r]) continue;
                    --left[r];
                    role[i] = r;
                    rec(i + 1, left);
                    ++left[r];
                }
            };
        rec(0, {kk - m, m, kk - m});
    }
}

std::uint64_t splits_count(const TestDistribution& td) {
    const int m = td.overlap, kk = td.k + 1;
    const int n = td.d() + 1;
    if (td.kind == TestKind::ZTest) {
        return std::uint64_t(binom_ll(n, m)) * binom_ll(n - m, m) *
               binom_ll(n - 2 * m, kk - m) * binom_ll(n - 2 * m - (kk - m), kk - 2 * m);
    }
    return std::uint64_t(binom_ll(n, m)) * binom_ll(n - m, kk - m);
}

bool tuples_agree(const std::vector<Face>& tuple,
                  const std::vector<std::vector<int>>& vals) {
    for (std::size_t a = 0; a < tuple.size(); ++a)
        for (std::size_t b = a + 1; b < tuple.size(); ++b) {
            std::size_t ia = 0, ib = 0;
            while (ia < tuple[a].size() && ib < tuple[b].size()) {
                if (tuple[a][ia] < tuple[b][ib])
                    ++ia;
                else if (tuple[a][ia] > tuple[b][ib])
                    ++ib;
                else {
                    if (vals[a][ia] != vals[b][ib]) return false;
                    ++ia;
                    ++ib;
                }
            }
        }
    return true;
}

void wilson(AgreeEstimate& est, std::uint64_t hits, std::uint64_t n) {
    est.agree = n ? double(hits) / n : 0;
    const double z = 1.96, nn = double(n);
    if (n) {
        const double p = est.agree;
        const double center = (p + z * z / (2 * nn)) / (1 + z * z / nn);
        const double half =
            z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / (1 + z * z / nn);
        est.ci_lo = std::max(0.0, center - half);
        est.ci_hi = std::min(1.0, center + half);
    }
}

}  // namespace

void TestDistribution::enumerate(
    const Complex& x,
    const std::function<void(const std::vector<Face>&, const Rat&)>& cb) const {
    const int dd = d();
    const auto& lvl = x.level(dd);
    const Rat per(1, static_cast<long long>(splits_count(*this)));
    for (std::size_t i = 0; i < lvl.faces.size(); ++i) {
        const Rat base = lvl.prob[i] * per;
        enumerate_splits(lvl.faces[i], *this,
                         [&](const std::vector<Face>& tuple) { cb(tuple, base); });
    }
}

std::uint64_t TestDistribution::support_size(const Complex& x) const {
    const int dd = d();
    if (dd > x.dim()) throw ParameterError("test dimension exceeds the complex");
    // rough: number of d-faces times splits; overflow-safe via doubles
    double nfaces = 0;
    const auto& tops = x.top_faces();
    const double per_top = double(binom_ll(x.dim() + 1, dd + 1));
    nfaces = double(tops.size()) * per_top;  // overcount (duplicates) is fine
    const double total = nfaces * double(splits_count(*this));
    return total > 9e18 ? ~0ULL : static_cast<std::uint64_t>(total);
}

AgreeEstimate agree(const Complex& x, const Ensemble& f, const TestDistribution& d,
                    std::uint64_t trials, std::uint64_t seed,
                    std::uint64_t exact_budget) {
    AgreeEstimate est;
    if (d.support_size(x) <= exact_budget) {
        Rat hit(0);
        d.enumerate(x, [&](const std::vector<Face>& tuple, const Rat& pr) {
            std::vector<std::vector<int>> vals;
            for (const auto& s : tuple) vals.push_back(f.eval(s));
            if (tuples_agree(tuple, vals)) hit += pr;
        });
        est.exact = true;
        est.agree = rat_d(hit);
        est.ci_lo = est.ci_hi = est.agree;
        return est;
    }
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        SplitMix64 rng(derive_seed(seed, t));
        auto tuple = d.sample(x, rng);
        std::vector<std::vector<int>> vals;
        for (const auto& s : tuple) vals.push_back(f.eval(s));
        hits += tuples_agree(tuple, vals);
    }
    est.trials = trials;
    wilson(est, hits, trials);
    return est;
}

DecodeResult decode_global(const Complex& x, const Ensemble& f,
                           const TestDistribution& d, double eta,
                           std::uint64_t trials, std::uint64_t seed,
                           std::uint64_t exact_budget) {
    DecodeResult out;
    const int q = f.alphabet();
    const int k = d.k;
    std::vector<std::vector<double>> votes(x.num_vertices(),
                                           std::vector<double>(q, 0.0));
    // exact mode: enumerate all k-faces with their marginal measure
    const double kfaces =
        double(x.top_faces().size()) * double(binom_ll(x.dim() + 1, k + 1));
    const bool exact = kfaces <= double(exact_budget);
    out.exact = exact;
    if (exact) {
        const auto& lvl = x.level(k);
        for (std::size_t i = 0; i < lvl.faces.size(); ++i) {
            const auto vals = f.eval(lvl.faces[i]);
            const double w = rat_d(lvl.prob[i]);
            for (std::size_t j = 0; j < lvl.faces[i].size(); ++j)
                votes[lvl.faces[i][j]][vals[j]] += w;
        }
    } else {
        for (std::uint64_t t = 0; t < trials; ++t) {
            SplitMix64 rng(derive_seed(seed ^ 0xdec0deULL, t));
            Face s = sample_d_face(x, k, rng);
            const auto vals = f.eval(s);
            for (std::size_t j = 0; j < s.size(); ++j) votes[s[j]][vals[j]] += 1.0;
        }
    }
    out.global.resize(x.num_vertices(), 0);
    for (std::size_t v = 0; v < x.num_vertices(); ++v) {
        int best = 0;
        for (int a = 1; a < q; ++a)
            if (votes[v][a] > votes[v][best]) best = a;
        out.global[v] = best;
    }

    // statistics of the decoded function
    auto face_stats = [&](const Face& s) {
        const auto vals = f.eval(s);
        int agree_coords = 0;
        for (std::size_t j = 0; j < s.size(); ++j)
            agree_coords += vals[j] == out.global[s[j]];
        return std::pair<int, int>(agree_coords, static_cast<int>(s.size()));
    };
    if (exact) {
        const auto& lvl = x.level(k);
        double coord = 0, face_ok = 0;
        for (std::size_t i = 0; i < lvl.faces.size(); ++i) {
            auto [ac, n] = face_stats(lvl.faces[i]);
            const double w = rat_d(lvl.prob[i]);
            coord += w * double(ac) / n;
            face_ok += w * ((n - ac) <= eta * n ? 1.0 : 0.0);
        }
        out.coord_agreement = coord;
        out.face_explained = face_ok;
    } else {
        double coord = 0, face_ok = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            SplitMix64 rng(derive_seed(seed ^ 0xface5ULL, t));
            Face s = sample_d_face(x, k, rng);
            auto [ac, n] = face_stats(s);
            coord += double(ac) / n;
            face_ok += (n - ac) <= eta * n ? 1.0 : 0.0;
        }
        out.coord_agreement = trials ? coord / trials : 0;
        out.face_explained = trials ? face_ok / trials : 0;
    }

    // the tuple event: all queries eta-close to G and mutually agreeing
    auto tuple_ok = [&](const std::vector<Face>& tuple) {
        std::vector<std::vector<int>> vals;
        for (const auto& s : tuple) vals.push_back(f.eval(s));
        if (!tuples_agree(tuple, vals)) return false;
        for (std::size_t a = 0; a < tuple.size(); ++a) {
            int diff = 0;
            for (std::size_t j = 0; j < tuple[a].size(); ++j)
                diff += vals[a][j] != out.global[tuple[a][j]];
            if (diff > eta * double(tuple[a].size())) return false;
        }
        return true;
    };
    if (d.support_size(x) <= exact_budget) {
        Rat hit(0);
        d.enumerate(x, [&](const std::vector<Face>& tuple, const Rat& pr) {
            if (tuple_ok(tuple)) hit += pr;
        });
        out.tuple_event = rat_d(hit);
    } else {
        std::uint64_t hits = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            SplitMix64 rng(derive_seed(seed ^ 0x79b1e5ULL, t));
            hits += tuple_ok(d.sample(x, rng));
        }
        out.tuple_event = trials ? double(hits) / trials : 0;
    }
    return out;
}

std::vector<SweepRow> soundness_sweep(
    const Complex& x, const TestDistribution& d,
    const std::vector<std::pair<std::string, const Ensemble*>>& family,
    const std::vector<double>& params, double eta, std::uint64_t trials,
    std::uint64_t seed) {
    if (family.size() != params.size())
        throw ParameterError("sweep family and parameter grids differ in size");
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < family.size(); ++i) {
        SweepRow row;
        row.family = family[i].first;
        row.param = params[i];
        auto est = agree(x, *family[i].second, d, trials, derive_seed(seed, i));
        row.agree = est.agree;
        row.ci_lo = est.ci_lo;
        row.ci_hi = est.ci_hi;
        auto dec = decode_global(x, *family[i].second, d, eta, trials,
                                 derive_seed(seed, i + 1000));
        row.explained = dec.coord_agreement;
        rows.push_back(row);
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "family,param,agree,ci_lo,ci_hi,explained\n";
    os.setf(std::ios::fixed);
    os.precision(9);
    for (const auto& r : rows)
        os << r.family << "," << r.param << "," << r.agree << "," << r.ci_lo << ","
           << r.ci_hi << "," << r.explained << "\n";
    return os.str();
}

}  // namespace hdx
