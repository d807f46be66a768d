#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdx/errors.hpp"

namespace hdx {

/// A finite group with elements 0..order-1 and a multiplication table.
/// Identity is element 0. Table groups get the axioms verified on
/// construction; cyclic and symmetric groups are built directly.
class FiniteGroup {
public:
    /// Default-constructs the trivial group.
    FiniteGroup() : table_{{0}}, inv_{0} {}

    static FiniteGroup cyclic(int ell);
    static FiniteGroup symmetric(int m);
    static FiniteGroup from_table(std::vector<std::vector<int>> table,
                                  std::string name = "table");

    int order() const { return order_; }
    int id() const { return 0; }
    int mul(int a, int b) const { return table_[a][b]; }
    int inv(int a) const { return inv_[a]; }
    bool abelian() const { return abelian_; }
    const std::string& name() const { return name_; }

    /// For cyclic groups: the residue of an element. For permutation
    /// groups: image of point i under element a.
    bool is_cyclic() const { return cyclic_; }
    int cyclic_modulus() const { return cyclic_ ? order_ : 0; }
    int act(int a, int point) const;  // permutation action for symmetric groups

private:
    void finish(std::string name);

    int order_ = 1;
    bool abelian_ = true;
    bool cyclic_ = false;
    std::string name_;
    std::vector<std::vector<int>> table_;
    std::vector<int> inv_;
    std::vector<std::vector<int>> perms_;  // nonempty for symmetric groups
};

}  // namespace hdx
