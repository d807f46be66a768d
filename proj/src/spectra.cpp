#include "hdx/spectra.hpp"

#include <algorithm>
#include <boost/rational.hpp>
#include <cmath>
#include <functional>

namespace hdx {

namespace {

double rat_d(const Rat& r) { return boost::rational_cast<double>(r); }

long long binom_ll(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace

Eigen::MatrixXd WalkMatrix::stochastic() const {
    Eigen::MatrixXd p = weight;
    for (Eigen::Index i = 0; i < p.rows(); ++i)
        if (row_measure(i) > 0) p.row(i) /= row_measure(i);
    return p;
}

SpectralReport lambda2(const Complex& graph) {
    if (graph.dim() < 1) throw ParameterError("lambda2 needs dimension >= 1");
    const int comps = connected_components(graph);
    if (comps != 1) throw Disconnected("lambda2 of a disconnected graph", comps);
    const std::size_t n = graph.num_vertices();
    if (n > 20000) throw BudgetExceeded("lambda2 dense solve", n);

    const auto& edges = graph.level(1);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < edges.faces.size(); ++i) {
        const double we = rat_d(edges.prob[i]);
        w(edges.faces[i][0], edges.faces[i][1]) += we;
        w(edges.faces[i][1], edges.faces[i][0]) += we;
    }
    Eigen::VectorXd deg = w.rowwise().sum();
    Eigen::MatrixXd s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            s(i, j) = w(i, j) / std::sqrt(deg(i) * deg(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    const auto& ev = es.eigenvalues();  // ascending
    SpectralReport rep;
    rep.n = n;
    rep.lambda2 = ev(n - 2);
    rep.lambda2_abs = std::max(std::abs(ev(0)), std::abs(ev(n - 2)));
    return rep;
}

SpectralReport lambda2(const WalkMatrix& walk) {
    const Eigen::Index nr = walk.weight.rows(), nc = walk.weight.cols();
    Eigen::MatrixXd b(nr, nc);
    for (Eigen::Index i = 0; i < nr; ++i)
        for (Eigen::Index j = 0; j < nc; ++j) {
            const double d = std::sqrt(walk.row_measure(i) * walk.col_measure(j));
            b(i, j) = d > 0 ? walk.weight(i, j) / d : 0.0;
        }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
    SpectralReport rep;
    rep.n = static_cast<std::size_t>(nr + nc);
    const auto& sv = svd.singularValues();
    rep.lambda2 = sv.size() > 1 ? sv(1) : 0.0;
    rep.lambda2_abs = rep.lambda2;
    return rep;
}

namespace {

WalkMatrix walk_from_pairs(std::vector<Face> rows, std::vector<Face> cols,
                           const std::map<std::pair<std::size_t, std::size_t>, Rat>& w) {
    WalkMatrix out;
    out.rows = std::move(rows);
    out.cols = std::move(cols);
    out.weight = Eigen::MatrixXd::Zero(out.rows.size(), out.cols.size());
    for (const auto& [ij, wt] : w) out.weight(ij.first, ij.second) += rat_d(wt);
    out.row_measure = out.weight.rowwise().sum();
    out.col_measure = out.weight.colwise().sum();
    return out;
}

}  // namespace

WalkMatrix swap_walk(const Complex& x, int k, int l) {
    if (k + l + 1 > x.dim())
        throw ParameterError("swap walk S_{k,l} needs k+l+1 <= dim");
    const auto& rows_lvl = x.level(k);
    const auto& cols_lvl = x.level(l);
    const auto& unions = x.level(k + l + 1);
    std::map<std::pair<std::size_t, std::size_t>, Rat> w;
    const long long splits = binom_ll(k + l + 2, k + 1);
    for (std::size_t ui = 0; ui < unions.faces.size(); ++ui) {
        const Face& u = unions.faces[ui];
        const Rat per_split = unions.prob[ui] / Rat(splits);
        // enumerate (k+1)-subsets s of u; t = u \ s
        std::vector<int> pick(k + 1);
        std::function<void(int, int)> rec = [&](int start, int depth) {
            if (depth == k + 1) {
                Face s, t;
                std::vector<bool> in(u.size(), false);
                for (int ix : pick) in[ix] = true;
                for (std::size_t ix = 0; ix < u.size(); ++ix)
                    (in[ix] ? s : t).push_back(u[ix]);
                w[{rows_lvl.index_of(s), cols_lvl.index_of(t)}] += per_split;
                return;
            }
            for (int i = start; i <= static_cast<int>(u.size()) - (k + 1 - depth); ++i) {
                pick[depth] = i;
                rec(i + 1, depth + 1);
            }
        };
        rec(0, 0);
    }
    return walk_from_pairs(rows_lvl.faces, cols_lvl.faces, w);
}

WalkMatrix swap_walk_colored(const Complex& x, const std::set<int>& j1,
                             const std::set<int>& j2) {
    if (!x.is_partite()) throw NotPartite("colored swap walk needs a partite complex");
    for (int c : j1)
        if (j2.count(c)) throw ParameterError("color sets must be disjoint");
    std::set<int> both = j1;
    both.insert(j2.begin(), j2.end());
    Complex xu = color_restrict(x, both);
    // faces of color exactly j1 / j2 inside the restriction's top faces
    const auto& tops = xu.top_faces();
    std::map<Face, std::size_t> row_ix, col_ix;
    std::vector<Face> rows, cols;
    std::map<std::pair<std::size_t, std::size_t>, Rat> w;
    for (const auto& t : tops) {
        Face s, u;
        for (VIdx v : t.verts)
            (j1.count(xu.colors()[v]) ? s : u).push_back(v);
        auto [it1, new1] = row_ix.try_emplace(s, rows.size());
        if (new1) rows.push_back(s);
        auto [it2, new2] = col_ix.try_emplace(u, cols.size());
        if (new2) cols.push_back(u);
        w[{it1->second, it2->second}] += t.weight;
    }
    WalkMatrix out;
    out.rows = rows;
    out.cols = cols;
    out.weight = Eigen::MatrixXd::Zero(rows.size(), cols.size());
    for (const auto& [ij, wt] : w) out.weight(ij.first, ij.second) += rat_d(wt);
    out.row_measure = out.weight.rowwise().sum();
    out.col_measure = out.weight.colwise().sum();
    return out;
}

std::map<Face, SpectralReport> local_spectra(const Complex& x, std::size_t budget) {
    std::map<Face, SpectralReport> out;
    std::size_t count = 1;
    for (int i = 0; i <= x.dim() - 2; ++i) count += x.level(i).faces.size();
    if (count > budget) throw BudgetExceeded("local_spectra", count);
    out[{}] = lambda2(x);
    for (int i = 0; i <= x.dim() - 2; ++i)
        for (const auto& s : x.level(i).faces) out[s] = lambda2(link(x, s));
    return out;
}

TrickleReport trickle_check(const Complex& x) {
    if (x.dim() < 2) throw ParameterError("trickle_check needs dimension >= 2");
    TrickleReport rep;
    double tau = 0, lam = 0;
    const std::size_t n = x.num_vertices();
    Eigen::VectorXd dummy;
    for (std::size_t v = 0; v < n; ++v) {
        Complex lk = link(x, {static_cast<VIdx>(v)});
        // per-link normalized adjacency eigenvalues
        const auto& edges = lk.level(1);
        const std::size_t m = lk.num_vertices();
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
        for (std::size_t i = 0; i < edges.faces.size(); ++i) {
            const double we = rat_d(edges.prob[i]);
            w(edges.faces[i][0], edges.faces[i][1]) += we;
            w(edges.faces[i][1], edges.faces[i][0]) += we;
        }
        Eigen::VectorXd deg = w.rowwise().sum();
        Eigen::MatrixXd s(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                s(i, j) = w(i, j) / std::sqrt(deg(i) * deg(j));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
        tau = std::max(tau, -es.eigenvalues()(0));
        if (m >= 2) lam = std::max(lam, es.eigenvalues()(m - 2));
    }
    rep.tau = tau;
    rep.lambda = lam;
    rep.lower_bound = -tau / (1 + tau);
    rep.upper_bound = lam < 1 ? lam / (1 - lam) : std::numeric_limits<double>::infinity();

    SpectralReport g = lambda2(x);
    // need the raw extreme eigenvalues of the global graph
    const auto& edges = x.level(1);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < edges.faces.size(); ++i) {
        const double we = rat_d(edges.prob[i]);
        w(edges.faces[i][0], edges.faces[i][1]) += we;
        w(edges.faces[i][1], edges.faces[i][0]) += we;
    }
    Eigen::VectorXd deg = w.rowwise().sum();
    Eigen::MatrixXd s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            s(i, j) = w(i, j) / std::sqrt(deg(i) * deg(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    rep.global_min = es.eigenvalues()(0);
    rep.global_lambda2 = g.lambda2;
    rep.pass = rep.global_min >= rep.lower_bound - kSpectralTol &&
               rep.global_lambda2 <= rep.upper_bound + kSpectralTol;
    return rep;
}

// --- posets ---------------------------------------------------------------

SubspacePoset full_grassmann(std::uint32_t n, std::uint32_t p, int d) {
    SubspacePoset poset;
    poset.n = n;
    poset.fp = gf::FieldPrime(p);
    for (int i = 0; i <= d; ++i)
        poset.levels.push_back(gf::enumerate_subspaces(n, poset.fp, i));
    return poset;
}

SubspacePoset isotropic_poset(const gf::SymplecticForm& form, int d) {
    SubspacePoset poset;
    poset.n = form.ambient();
    poset.fp = form.fp;
    for (int i = 0; i <= d; ++i)
        poset.levels.push_back(gf::enumerate_isotropic(form, i));
    return poset;
}

namespace {

struct FlagCounts {
    // down[i][a] = chains from levels[i][a] down to level 0
    // up[i][a]   = chains up to level d
    std::vector<std::vector<double>> down, up;
    std::vector<std::vector<std::vector<std::size_t>>> covers;  // covers[i][a] = indices in level i+1 containing a
};

FlagCounts flag_counts(const SubspacePoset& poset) {
    const int d = static_cast<int>(poset.levels.size()) - 1;
    FlagCounts fc;
    fc.down.resize(d + 1);
    fc.up.resize(d + 1);
    fc.covers.resize(d);
    for (int i = 0; i < d; ++i) {
        fc.covers[i].assign(poset.levels[i].size(), {});
        for (std::size_t a = 0; a < poset.levels[i].size(); ++a)
            for (std::size_t b = 0; b < poset.levels[i + 1].size(); ++b)
                if (poset.levels[i + 1][b].contains(poset.levels[i][a], poset.fp))
                    fc.covers[i][a].push_back(b);
    }
    fc.down[0].assign(poset.levels[0].size(), 1.0);
    for (int i = 1; i <= d; ++i) {
        fc.down[i].assign(poset.levels[i].size(), 0.0);
        for (std::size_t a = 0; a < poset.levels[i - 1].size(); ++a)
            for (std::size_t b : fc.covers[i - 1][a]) fc.down[i][b] += fc.down[i - 1][a];
    }
    fc.up[d].assign(poset.levels[d].size(), 1.0);
    for (int i = d - 1; i >= 0; --i) {
        fc.up[i].assign(poset.levels[i].size(), 0.0);
        for (std::size_t a = 0; a < poset.levels[i].size(); ++a)
            for (std::size_t b : fc.covers[i][a]) fc.up[i][a] += fc.up[i + 1][b];
    }
    return fc;
}

}  // namespace

WalkMatrix containment_graph(const SubspacePoset& poset, int i, int j) {
    if (i >= j) throw ParameterError("containment graph needs i < j");
    FlagCounts fc = flag_counts(poset);
    const auto& li = poset.levels[i];
    const auto& lj = poset.levels[j];
    WalkMatrix out;
    out.rows.resize(li.size());
    out.cols.resize(lj.size());
    out.weight = Eigen::MatrixXd::Zero(li.size(), lj.size());
    // chains through (a in P(i), b in P(j)): down(a) * mid(a,b) * up(b)
    double total = 0;
    for (std::size_t a = 0; a < li.size(); ++a)
        for (std::size_t b = 0; b < lj.size(); ++b) {
            if (!lj[b].contains(li[a], poset.fp)) continue;
            // chains from a up to b
            std::vector<double> cur(li.size(), 0.0);
            // dynamic count: restrict to subspaces between a and b
            // (cheap because levels are small at desk scale)
            std::map<std::pair<int, std::size_t>, double> memo;
            std::function<double(int, std::size_t)> mid = [&](int lvl, std::size_t idx) -> double {
                if (lvl == j) return idx == b ? 1.0 : 0.0;
                auto key = std::make_pair(lvl, idx);
                auto it = memo.find(key);
                if (it != memo.end()) return it->second;
                double acc = 0;
                for (std::size_t nb : fc.covers[lvl][idx])
                    if (lj[b].contains(poset.levels[lvl + 1][nb], poset.fp))
                        acc += mid(lvl + 1, nb);
                memo[key] = acc;
                return acc;
            };
            const double chains = fc.down[i][a] * mid(i, a) * fc.up[j][b];
            out.weight(a, b) = chains;
            total += chains;
        }
    out.weight /= total;
    out.row_measure = out.weight.rowwise().sum();
    out.col_measure = out.weight.colwise().sum();
    return out;
}

Eigen::VectorXd level_measure(const SubspacePoset& poset, int i) {
    FlagCounts fc = flag_counts(poset);
    const std::size_t n = poset.levels[i].size();
    Eigen::VectorXd pi(n);
    double total = 0;
    for (std::size_t a = 0; a < n; ++a) {
        pi(a) = fc.down[i][a] * fc.up[i][a];
        total += pi(a);
    }
    return pi / total;
}

Eigen::MatrixXd upper_walk(const SubspacePoset& poset, int i) {
    WalkMatrix c = containment_graph(poset, i, i + 1);
    Eigen::MatrixXd up = c.stochastic();  // P(i) -> P(i+1)
    // back down: transitions conditioned on the (i+1)-face
    Eigen::MatrixXd down = c.weight.transpose();
    for (Eigen::Index r = 0; r < down.rows(); ++r) {
        const double m = c.col_measure(r);
        if (m > 0) down.row(r) /= m;
    }
    return up * down;
}

Eigen::MatrixXd lower_walk(const SubspacePoset& poset, int i) {
    WalkMatrix c = containment_graph(poset, i - 1, i);
    Eigen::MatrixXd down = c.weight.transpose();  // P(i) -> P(i-1)
    for (Eigen::Index r = 0; r < down.rows(); ++r) {
        const double m = c.col_measure(r);
        if (m > 0) down.row(r) /= m;
    }
    Eigen::MatrixXd up = c.stochastic();
    return down * up;
}

Eigen::MatrixXd nonlazy_upper_walk(const SubspacePoset& poset, int i) {
    Eigen::MatrixXd du = upper_walk(poset, i);
    Eigen::MatrixXd m = du;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const double lazy = du(r, r);
        if (lazy >= 1.0) throw Error("nonlazy walk undefined on an isolated level");
        m(r, r) = 0;
        m.row(r) /= (1.0 - lazy);
    }
    return m;
}

double lambda2_reversible(const Eigen::MatrixXd& walk, const Eigen::VectorXd& pi) {
    const Eigen::Index n = walk.rows();
    if (n < 2) return 0.0;
    Eigen::MatrixXd s(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            s(i, j) = std::sqrt(pi(i) / pi(j)) * walk(i, j);
    // symmetrize against round-off
    s = 0.5 * (s + s.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    return es.eigenvalues()(n - 2);
}

double min_eig_reversible(const Eigen::MatrixXd& walk, const Eigen::VectorXd& pi) {
    const Eigen::Index n = walk.rows();
    Eigen::MatrixXd s(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            s(i, j) = std::sqrt(pi(i) / pi(j)) * walk(i, j);
    s = 0.5 * (s + s.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    return es.eigenvalues()(0);
}

double op_norm_weighted(const Eigen::MatrixXd& m, const Eigen::VectorXd& pi) {
    const Eigen::Index n = m.rows();
    Eigen::MatrixXd s(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            s(i, j) = std::sqrt(pi(i) / pi(j)) * m(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(s);
    return svd.singularValues()(0);
}

EposetReport eposet_check(const SubspacePoset& poset) {
    const int d = static_cast<int>(poset.levels.size()) - 1;
    EposetReport rep;
    const double p = poset.fp.p;
    for (int i = 0; i <= d - 1; ++i) {
        double gamma = 0;
        if (i >= 1 && poset.levels[i].size() > 1) {
            Eigen::MatrixXd m = nonlazy_upper_walk(poset, i);
            Eigen::MatrixXd low = lower_walk(poset, i);
            gamma = op_norm_weighted(m - low, level_measure(poset, i));
        }
        rep.gammas.push_back(gamma);
    }
    rep.pass = true;
    for (int i = 0; i <= d - 1; ++i) {
        double lam = 0;
        if (poset.levels[i].size() > 1)
            lam = lambda2_reversible(upper_walk(poset, i), level_measure(poset, i));
        rep.lambda_upper.push_back(lam);
        double bound = 0;
        for (int t = 1; t <= i; ++t) bound += std::pow(p, -t);
        for (int t = 0; t <= i; ++t) bound += rep.gammas[t];
        rep.bounds.push_back(bound);
        if (lam > bound + rep.tolerance) rep.pass = false;
    }
    return rep;
}

}  // namespace hdx
