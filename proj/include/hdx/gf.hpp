#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hdx/errors.hpp"

namespace hdx::gf {

/// A prime field modulus, 2 <= p <= 2^16. Construction runs a
/// deterministic primality check and builds the inverse table once.
struct FieldPrime {
    std::uint32_t p = 2;
    explicit FieldPrime(std::uint32_t prime);
    FieldPrime() = default;

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return (a + b) % p; }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return (a + p - b) % p; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        return static_cast<std::uint32_t>((std::uint64_t(a) * b) % p);
    }
    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p - a; }
    std::uint32_t inv(std::uint32_t a) const;

private:
    std::shared_ptr<std::vector<std::uint32_t>> inv_table_;
};

/// Dense row-major matrix over F_p. Entries are reduced residues.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, std::uint32_t p)
        : rows_(rows), cols_(cols), p_(p), a_(rows * cols, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::uint32_t p() const { return p_; }

    std::uint32_t& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    std::uint32_t at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    std::span<const std::uint32_t> row(std::size_t r) const {
        return {a_.data() + r * cols_, cols_};
    }
    std::span<std::uint32_t> row(std::size_t r) {
        return {a_.data() + r * cols_, cols_};
    }

    void append_row(std::span<const std::uint32_t> v);
    Mat transposed() const;

    bool operator==(const Mat&) const = default;
    auto operator<=>(const Mat&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::uint32_t p_ = 2;
    std::vector<std::uint32_t> a_;
};

/// In-place reduced row echelon form; returns the pivot columns.
std::vector<std::size_t> rref_in_place(Mat& m, const FieldPrime& fp);

/// Row space of `m` in canonical form (RREF with zero rows dropped).
Mat row_space(const Mat& m, const FieldPrime& fp);

std::size_t rank(const Mat& m, const FieldPrime& fp);

/// Basis of {x : m x^T = 0}, one row per basis vector, canonicalized.
Mat nullspace(const Mat& m, const FieldPrime& fp);

/// Matrix product over F_p.
Mat mul(const Mat& a, const Mat& b, const FieldPrime& fp);

/// A linear subspace of F_p^n in canonical (RREF) form. Two subspaces are
/// equal iff their canonical matrices are identical.
struct Subspace {
    std::uint32_t n = 0;
    std::uint32_t p = 2;
    Mat basis;  // RREF, rows == dim, no zero rows

    int dim() const { return static_cast<int>(basis.rows()); }

    bool operator==(const Subspace&) const = default;
    auto operator<=>(const Subspace&) const = default;

    bool contains_vector(std::span<const std::uint32_t> v, const FieldPrime& fp) const;
    bool contains(const Subspace& other, const FieldPrime& fp) const;

    std::string to_string() const;
};

/// Canonicalize the row space of an arbitrary generating matrix.
Subspace rref(const Mat& rows, const FieldPrime& fp);

Subspace zero_subspace(std::uint32_t n, std::uint32_t p);
Subspace full_space(std::uint32_t n, const FieldPrime& fp);

Subspace sum(const Subspace& a, const Subspace& b, const FieldPrime& fp);
Subspace intersect(const Subspace& a, const Subspace& b, const FieldPrime& fp);

/// Span of the first k canonical basis rows of `s` (a deterministic choice
/// of a k-dimensional subspace of s).
Subspace leading_subspace(const Subspace& s, int k, const FieldPrime& fp);

/// Lexicographically least vector of `w` outside `u` (coordinates compared
/// left to right, 0 < 1 < ... < p-1). Requires w not contained in u.
std::vector<std::uint32_t> lex_min_outside(const Subspace& w, const Subspace& u,
                                           const FieldPrime& fp);

/// A non-degenerate alternating bilinear form on F_p^{2g}. `standard`
/// realizes <(x,y),(z,w)> = x.w - y.z.
struct SymplecticForm {
    std::uint32_t g = 1;
    FieldPrime fp;
    Mat gram;  // 2g x 2g, skew-symmetric with zero diagonal, invertible

    static SymplecticForm standard(std::uint32_t g, std::uint32_t p);
    static SymplecticForm from_gram(Mat gram, const FieldPrime& fp);

    std::uint32_t ambient() const { return 2 * g; }
    std::uint32_t eval(std::span<const std::uint32_t> x,
                       std::span<const std::uint32_t> y) const;
};

Subspace perp(const SymplecticForm& form, const Subspace& v);
bool is_isotropic(const SymplecticForm& form, const Subspace& v);

/// The induced form on v_perp / v for isotropic v. `rep_basis` lifts the
/// quotient coordinates back into v_perp.
struct QuotientForm {
    SymplecticForm base;
    Subspace v;
    Mat rep_basis;           // (2g - 2 dim v) x 2g, rows complete v to v_perp
    SymplecticForm induced;  // form on the quotient coordinates

    /// Image of u (isotropic, v <= u <= v_perp) in quotient coordinates.
    Subspace project(const Subspace& u) const;
    /// Preimage of a quotient subspace under the projection (contains v).
    Subspace lift(const Subspace& q) const;
};

QuotientForm quotient_form(const SymplecticForm& form, const Subspace& v);

/// Number of k-dimensional subspaces of F_p^n (Gaussian binomial).
/// Throws BudgetExceeded if the count does not fit in 64 bits.
std::uint64_t count_subspaces(std::uint32_t n, std::uint32_t p, std::uint32_t k);

/// All k-subspaces of F_p^n in lexicographic order on canonical matrices.
std::vector<Subspace> enumerate_subspaces(std::uint32_t n, const FieldPrime& fp,
                                          std::uint32_t k);

/// All isotropic k-subspaces, canonically ordered. k > g yields empty.
std::vector<Subspace> enumerate_isotropic(const SymplecticForm& form, std::uint32_t k);

/// Streaming variant; stops early if the callback returns false.
void for_each_isotropic(const SymplecticForm& form, std::uint32_t k,
                        const std::function<bool(const Subspace&)>& cb);

using Rng = std::function<std::uint64_t()>;

/// Greedy isotropic extension of v to target_dim, optionally inside
/// `within`. Deterministic: picks the lexicographically least admissible
/// vector at each step, or a seeded-random one when `rng` is given.
/// Throws NoExtension when the search exhausts candidates.
Subspace extend_isotropic(const SymplecticForm& form, const Subspace& v,
                          int target_dim, const std::optional<Subspace>& within = {},
                          Rng* rng = nullptr);

/// Uniformly seeded random vector of w outside u (rejection sampling).
std::vector<std::uint32_t> random_vector_outside(const Subspace& w, const Subspace& u,
                                                 const FieldPrime& fp, Rng& rng);

/// Random k-dimensional subspace of the ambient space (span of random
/// vectors, deterministic given the generator state).
Subspace random_subspace(std::uint32_t n, const FieldPrime& fp, int k, Rng& rng);

/// Change of basis S with S G S^T equal to the standard gram matrix.
Mat darboux_basis(const SymplecticForm& form);

}  // namespace hdx::gf
