#pragma once

// Brute-force reference implementations used to pin expected values.
// Everything here is independent of the library code paths it checks:
// spans are enumerated vector by vector, perps by scanning the whole
// ambient space.

#include <cstdint>
#include <set>
#include <vector>

#include "hdx/gf.hpp"

namespace oracle {

using Vec = std::vector<std::uint32_t>;

inline std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

inline Vec nth_vector(std::uint64_t idx, std::uint32_t n, std::uint32_t p) {
    Vec v(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        v[i] = static_cast<std::uint32_t>(idx % p);
        idx /= p;
    }
    return v;
}

/// All vectors of the row space, by walking every coefficient combination.
inline std::set<Vec> span_vectors(const std::vector<Vec>& rows, std::uint32_t p) {
    std::set<Vec> out;
    const std::size_t k = rows.size();
    const std::uint32_t n = rows.empty() ? 0 : static_cast<std::uint32_t>(rows[0].size());
    const std::uint64_t combos = ipow(p, static_cast<std::uint32_t>(k));
    for (std::uint64_t c = 0; c < combos; ++c) {
        Vec x(n, 0);
        std::uint64_t rest = c;
        for (std::size_t r = 0; r < k; ++r) {
            const std::uint32_t coef = static_cast<std::uint32_t>(rest % p);
            rest /= p;
            for (std::uint32_t j = 0; j < n; ++j)
                x[j] = (x[j] + std::uint64_t(coef) * rows[r][j]) % p;
        }
        out.insert(x);
    }
    return out;
}

inline std::set<Vec> subspace_vectors(const hdx::gf::Subspace& s) {
    std::vector<Vec> rows;
    for (int r = 0; r < s.dim(); ++r)
        rows.emplace_back(s.basis.row(r).begin(), s.basis.row(r).end());
    return span_vectors(rows, s.p);
}

/// Every distinct k-dimensional subspace as a set of vector sets, found by
/// spanning all k-tuples of ambient vectors.
inline std::set<std::set<Vec>> all_k_subspaces(std::uint32_t n, std::uint32_t p,
                                               std::uint32_t k) {
    std::set<std::set<Vec>> out;
    const std::uint64_t total = ipow(p, n);
    std::vector<std::uint64_t> pick(k, 0);
    while (true) {
        std::vector<Vec> rows;
        for (auto idx : pick) rows.push_back(nth_vector(idx, n, p));
        auto span = span_vectors(rows, p);
        if (span.size() == ipow(p, k)) out.insert(std::move(span));
        std::size_t i = 0;
        while (i < k && ++pick[i] == total) pick[i++] = 0;
        if (i == k || k == 0) break;
    }
    return out;
}

/// Symplectic product against the standard form on F_p^{2g}.
inline std::uint32_t std_symp(const Vec& x, const Vec& y, std::uint32_t g,
                              std::uint32_t p) {
    std::uint64_t acc = 0;
    for (std::uint32_t i = 0; i < g; ++i) {
        acc += std::uint64_t(x[i]) * y[g + i] % p;
        acc += std::uint64_t(p - 1) * (std::uint64_t(x[g + i]) * y[i] % p) % p;
    }
    return static_cast<std::uint32_t>(acc % p);
}

inline bool span_isotropic(const std::set<Vec>& vs, std::uint32_t g, std::uint32_t p) {
    for (const auto& x : vs)
        for (const auto& y : vs)
            if (std_symp(x, y, g, p) != 0) return false;
    return true;
}

/// Brute-force perp: every ambient vector orthogonal to all of vs.
inline std::set<Vec> brute_perp(const std::set<Vec>& vs, std::uint32_t g,
                                std::uint32_t p) {
    std::set<Vec> out;
    const std::uint32_t n = 2 * g;
    for (std::uint64_t i = 0; i < ipow(p, n); ++i) {
        Vec x = nth_vector(i, n, p);
        bool ok = true;
        for (const auto& y : vs)
            if (std_symp(x, y, g, p) != 0) {
                ok = false;
                break;
            }
        if (ok) out.insert(x);
    }
    return out;
}

}  // namespace oracle
