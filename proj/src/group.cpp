#include "hdx/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace hdx {

FiniteGroup FiniteGroup::cyclic(int ell) {
    if (ell < 1) throw ParameterError("cyclic group needs order >= 1");
    FiniteGroup g;
    g.order_ = ell;
    g.cyclic_ = true;
    g.table_.assign(ell, std::vector<int>(ell));
    for (int a = 0; a < ell; ++a)
        for (int b = 0; b < ell; ++b) g.table_[a][b] = (a + b) % ell;
    g.finish("Z" + std::to_string(ell));
    return g;
}

FiniteGroup FiniteGroup::symmetric(int m) {
    if (m < 1 || m > 7) throw ParameterError("symmetric group supported for 1 <= m <= 7");
    std::vector<int> base(m);
    std::iota(base.begin(), base.end(), 0);
    std::vector<std::vector<int>> perms;
    std::vector<int> p = base;
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    // identity must be element 0: next_permutation starts from sorted = id
    FiniteGroup g;
    g.order_ = static_cast<int>(perms.size());
    g.perms_ = perms;
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < g.order_; ++i) index[perms[i]] = i;
    g.table_.assign(g.order_, std::vector<int>(g.order_));
    for (int a = 0; a < g.order_; ++a)
        for (int b = 0; b < g.order_; ++b) {
            std::vector<int> ab(m);
            for (int i = 0; i < m; ++i) ab[i] = perms[a][perms[b][i]];
            g.table_[a][b] = index.at(ab);
        }
    g.finish("S" + std::to_string(m));
    return g;
}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<int>> table,
                                    std::string name) {
    FiniteGroup g;
    g.order_ = static_cast<int>(table.size());
    g.table_ = std::move(table);
    const int n = g.order_;
    for (const auto& row : g.table_)
        if (static_cast<int>(row.size()) != n)
            throw ParameterError("group table must be square");
    // identity = 0
    for (int a = 0; a < n; ++a)
        if (g.table_[0][a] != a || g.table_[a][0] != a)
            throw ParameterError("element 0 must be the identity");
    // closure and Latin-square property
    for (int a = 0; a < n; ++a) {
        std::vector<bool> seen_row(n, false), seen_col(n, false);
        for (int b = 0; b < n; ++b) {
            const int ab = g.table_[a][b], ba = g.table_[b][a];
            if (ab < 0 || ab >= n || ba < 0 || ba >= n)
                throw ParameterError("group table entry out of range");
            seen_row[ab] = true;
            seen_col[ba] = true;
        }
        if (std::count(seen_row.begin(), seen_row.end(), true) != n ||
            std::count(seen_col.begin(), seen_col.end(), true) != n)
            throw ParameterError("group table rows/columns must be permutations");
    }
    // associativity
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (g.table_[g.table_[a][b]][c] != g.table_[a][g.table_[b][c]])
                    throw ParameterError("group table is not associative");
    g.finish(std::move(name));
    return g;
}

void FiniteGroup::finish(std::string name) {
    name_ = std::move(name);
    inv_.assign(order_, -1);
    for (int a = 0; a < order_; ++a)
        for (int b = 0; b < order_; ++b)
            if (table_[a][b] == 0) inv_[a] = b;
    for (int a = 0; a < order_; ++a)
        if (inv_[a] < 0) throw ParameterError("group element without inverse");
    abelian_ = true;
    for (int a = 0; a < order_ && abelian_; ++a)
        for (int b = 0; b < order_ && abelian_; ++b)
            if (table_[a][b] != table_[b][a]) abelian_ = false;
}

int FiniteGroup::act(int a, int point) const {
    if (cyclic_) return (point + a) % order_;
    if (!perms_.empty()) return perms_[a][point];
    throw ParameterError("group has no distinguished action");
}

}  // namespace hdx
