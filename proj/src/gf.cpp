#include "hdx/gf.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hdx::gf {

namespace {

bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

FieldPrime::FieldPrime(std::uint32_t prime) : p(prime) {
    if (prime < 2 || prime > 65536 || !is_prime_u32(prime))
        throw ParameterError("field modulus must be a prime in [2, 2^16], got " +
                             std::to_string(prime));
    auto table = std::make_shared<std::vector<std::uint32_t>>(p, 0);
    (*table)[1] = 1;
    for (std::uint32_t a = 2; a < p; ++a) {
        // p - (p/a) * inv(p mod a): standard linear-time inverse table
        (*table)[a] = static_cast<std::uint32_t>(
            (std::uint64_t(p - p / a) * (*table)[p % a]) % p);
    }
    inv_table_ = std::move(table);
}

std::uint32_t FieldPrime::inv(std::uint32_t a) const {
    if (a == 0) throw ParameterError("inverse of zero");
    return (*inv_table_)[a % p];
}

void Mat::append_row(std::span<const std::uint32_t> v) {
    assert(v.size() == cols_ || rows_ == 0);
    if (rows_ == 0 && cols_ == 0) cols_ = v.size();
    a_.insert(a_.end(), v.begin(), v.end());
    ++rows_;
}

Mat Mat::transposed() const {
    Mat t(cols_, rows_, p_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

std::vector<std::size_t> rref_in_place(Mat& m, const FieldPrime& fp) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t sel = r;
        while (sel < m.rows() && m.at(sel, c) == 0) ++sel;
        if (sel == m.rows()) continue;
        if (sel != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(r, j));
        const std::uint32_t iv = fp.inv(m.at(r, c));
        for (std::size_t j = c; j < m.cols(); ++j) m.at(r, j) = fp.mul(m.at(r, j), iv);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m.at(i, c) == 0) continue;
            const std::uint32_t f = m.at(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                m.at(i, j) = fp.sub(m.at(i, j), fp.mul(f, m.at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

Mat row_space(const Mat& m, const FieldPrime& fp) {
    Mat w = m;
    auto pivots = rref_in_place(w, fp);
    Mat out(pivots.size(), m.cols(), fp.p);
    for (std::size_t r = 0; r < pivots.size(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out.at(r, c) = w.at(r, c);
    return out;
}

std::size_t rank(const Mat& m, const FieldPrime& fp) {
    Mat w = m;
    return rref_in_place(w, fp).size();
}

Mat nullspace(const Mat& m, const FieldPrime& fp) {
    Mat w = m;
    auto pivots = rref_in_place(w, fp);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;

    Mat out(0, m.cols(), fp.p);
    for (std::size_t free_c = 0; free_c < m.cols(); ++free_c) {
        if (is_pivot[free_c]) continue;
        std::vector<std::uint32_t> v(m.cols(), 0);
        v[free_c] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = fp.neg(w.at(r, free_c));
        out.append_row(v);
    }
    return row_space(out, fp);  // canonical order
}

Mat mul(const Mat& a, const Mat& b, const FieldPrime& fp) {
    assert(a.cols() == b.rows());
    Mat out(a.rows(), b.cols(), fp.p);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const std::uint64_t aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out.at(i, j) =
                    static_cast<std::uint32_t>((out.at(i, j) + aik * b.at(k, j)) % fp.p);
        }
    return out;
}

bool Subspace::contains_vector(std::span<const std::uint32_t> v,
                               const FieldPrime& fp) const {
    // reduce v against the RREF basis
    std::vector<std::uint32_t> w(v.begin(), v.end());
    for (int r = 0; r < dim(); ++r) {
        std::size_t piv = 0;
        while (piv < n && basis.at(r, piv) == 0) ++piv;
        if (piv == n) continue;
        const std::uint32_t f = w[piv];
        if (f == 0) continue;
        for (std::size_t j = piv; j < n; ++j)
            w[j] = fp.sub(w[j], fp.mul(f, basis.at(r, j)));
    }
    return std::all_of(w.begin(), w.end(), [](std::uint32_t x) { return x == 0; });
}

bool Subspace::contains(const Subspace& other, const FieldPrime& fp) const {
    if (other.n != n || other.p != p) throw DimensionMismatch("ambient mismatch");
    for (int r = 0; r < other.dim(); ++r)
        if (!contains_vector(other.basis.row(r), fp)) return false;
    return true;
}

std::string Subspace::to_string() const {
    std::ostringstream os;
    os << "<" << dim() << " in F" << p << "^" << n << ":";
    for (int r = 0; r < dim(); ++r) {
        os << (r ? ";" : "");
        for (std::uint32_t c = 0; c < n; ++c) os << basis.at(r, c);
    }
    os << ">";
    return os.str();
}

Subspace rref(const Mat& rows, const FieldPrime& fp) {
    Subspace s;
    s.n = static_cast<std::uint32_t>(rows.cols());
    s.p = fp.p;
    s.basis = row_space(rows, fp);
    return s;
}

Subspace zero_subspace(std::uint32_t n, std::uint32_t p) {
    Subspace s;
    s.n = n;
    s.p = p;
    s.basis = Mat(0, n, p);
    return s;
}

Subspace full_space(std::uint32_t n, const FieldPrime& fp) {
    Mat id(n, n, fp.p);
    for (std::uint32_t i = 0; i < n; ++i) id.at(i, i) = 1;
    return rref(id, fp);
}

Subspace sum(const Subspace& a, const Subspace& b, const FieldPrime& fp) {
    if (a.n != b.n || a.p != b.p) throw DimensionMismatch("ambient mismatch in sum");
    Mat stacked(0, a.n, a.p);
    for (int r = 0; r < a.dim(); ++r) stacked.append_row(a.basis.row(r));
    for (int r = 0; r < b.dim(); ++r) stacked.append_row(b.basis.row(r));
    return rref(stacked, fp);
}

Subspace intersect(const Subspace& a, const Subspace& b, const FieldPrime& fp) {
    if (a.n != b.n || a.p != b.p) throw DimensionMismatch("ambient mismatch in intersect");
    // Zassenhaus: row-reduce [A|A; B|0], intersection basis appears in the
    // right block of rows whose left block is zero.
    const std::size_t n = a.n;
    Mat z(0, 2 * n, a.p);
    for (int r = 0; r < a.dim(); ++r) {
        std::vector<std::uint32_t> row(2 * n, 0);
        for (std::size_t c = 0; c < n; ++c) row[c] = row[n + c] = a.basis.at(r, c);
        z.append_row(row);
    }
    for (int r = 0; r < b.dim(); ++r) {
        std::vector<std::uint32_t> row(2 * n, 0);
        for (std::size_t c = 0; c < n; ++c) row[c] = b.basis.at(r, c);
        z.append_row(row);
    }
    rref_in_place(z, fp);
    Mat inter(0, n, a.p);
    for (std::size_t r = 0; r < z.rows(); ++r) {
        bool left_zero = true;
        for (std::size_t c = 0; c < n && left_zero; ++c) left_zero = z.at(r, c) == 0;
        bool right_nonzero = false;
        for (std::size_t c = 0; c < n && !right_nonzero; ++c)
            right_nonzero = z.at(r, n + c) != 0;
        if (left_zero && right_nonzero) {
            std::vector<std::uint32_t> row(n);
            for (std::size_t c = 0; c < n; ++c) row[c] = z.at(r, n + c);
            inter.append_row(row);
        }
    }
    return rref(inter, fp);
}

Subspace leading_subspace(const Subspace& s, int k, const FieldPrime& fp) {
    if (k > s.dim()) throw DimensionMismatch("leading_subspace: k exceeds dim");
    Mat m(0, s.n, s.p);
    for (int r = 0; r < k; ++r) m.append_row(s.basis.row(r));
    return rref(m, fp);
}

std::vector<std::uint32_t> lex_min_outside(const Subspace& w, const Subspace& u,
                                           const FieldPrime& fp) {
    if (w.n != u.n) throw DimensionMismatch("ambient mismatch in lex_min_outside");
    const std::size_t n = w.n;
    const int k = w.dim();
    if (k == 0 || u.contains(w, fp))
        throw NoExtension("lex_min_outside: w is contained in u");

    // Fix coordinates left to right; a prefix is feasible if the affine set
    // {x in w : x matches prefix} is nonempty and not contained in u.
    // Coefficient view: x = lambda * basis(w); prefix constraints are linear
    // in lambda.
    Mat constraints(0, k, w.p);  // rows: coefficient constraints
    std::vector<std::uint32_t> rhs;

    auto feasible = [&](const Mat& cons, const std::vector<std::uint32_t>& target)
        -> std::optional<std::vector<std::uint32_t>> {
        // Solve cons * lambda = target; if solvable, check the affine
        // solution set is not fully inside u. Returns a witness lambda.
        Mat aug(0, k + 1, w.p);
        for (std::size_t r = 0; r < cons.rows(); ++r) {
            std::vector<std::uint32_t> row(k + 1);
            for (int c = 0; c < k; ++c) row[c] = cons.at(r, c);
            row[k] = target[r];
            aug.append_row(row);
        }
        Mat red = aug;
        auto pivots = rref_in_place(red, fp);
        for (auto c : pivots)
            if (c == static_cast<std::size_t>(k)) return std::nullopt;  // inconsistent
        // particular solution
        std::vector<std::uint32_t> part(k, 0);
        for (std::size_t r = 0; r < pivots.size(); ++r) part[pivots[r]] = red.at(r, k);
        // kernel directions of cons
        Mat cons_only(0, k, w.p);
        for (std::size_t r = 0; r < cons.rows(); ++r) cons_only.append_row(cons.row(r));
        Mat ker = nullspace(cons_only, fp);
        // map lambda -> vector
        auto to_vec = [&](std::span<const std::uint32_t> lambda) {
            std::vector<std::uint32_t> x(n, 0);
            for (int r = 0; r < k; ++r) {
                if (lambda[r] == 0) continue;
                for (std::size_t c = 0; c < n; ++c)
                    x[c] = fp.add(x[c], fp.mul(lambda[r], w.basis.at(r, c)));
            }
            return x;
        };
        auto xpart = to_vec(part);
        if (!u.contains_vector(xpart, fp)) return part;
        for (std::size_t kr = 0; kr < ker.rows(); ++kr) {
            auto xdir = to_vec(ker.row(kr));
            if (!u.contains_vector(xdir, fp)) {
                std::vector<std::uint32_t> lam(k);
                for (int c = 0; c < k; ++c) lam[c] = fp.add(part[c], ker.at(kr, c));
                return lam;
            }
        }
        return std::nullopt;  // affine set fully inside u
    };

    std::vector<std::uint32_t> chosen;  // fixed coordinates so far
    for (std::size_t coord = 0; coord < n; ++coord) {
        std::vector<std::uint32_t> col(k);
        for (int r = 0; r < k; ++r) col[r] = w.basis.at(r, coord);
        bool fixed = false;
        for (std::uint32_t c = 0; c < w.p && !fixed; ++c) {
            Mat cons = constraints;
            cons.append_row(col);
            auto target = rhs;
            target.push_back(c);
            if (feasible(cons, target)) {
                constraints = std::move(cons);
                rhs = std::move(target);
                chosen.push_back(c);
                fixed = true;
            }
        }
        if (!fixed) throw NoExtension("lex_min_outside: no feasible coordinate");
    }
    return chosen;
}

SymplecticForm SymplecticForm::standard(std::uint32_t g, std::uint32_t p) {
    FieldPrime fp(p);
    Mat gram(2 * g, 2 * g, p);
    for (std::uint32_t i = 0; i < g; ++i) {
        gram.at(i, g + i) = 1;
        gram.at(g + i, i) = fp.neg(1);
    }
    SymplecticForm f;
    f.g = g;
    f.fp = fp;
    f.gram = std::move(gram);
    return f;
}

SymplecticForm SymplecticForm::from_gram(Mat gram, const FieldPrime& fp) {
    if (gram.rows() != gram.cols() || gram.rows() % 2 != 0)
        throw ParameterError("gram matrix must be 2g x 2g");
    const std::size_t n = gram.rows();
    for (std::size_t i = 0; i < n; ++i) {
        if (gram.at(i, i) != 0) throw ParameterError("gram diagonal must vanish");
        for (std::size_t j = 0; j < n; ++j)
            if (gram.at(i, j) != fp.neg(gram.at(j, i)))
                throw ParameterError("gram must be skew-symmetric");
    }
    if (rank(gram, fp) != n) throw ParameterError("gram must be non-degenerate");
    SymplecticForm f;
    f.g = static_cast<std::uint32_t>(n / 2);
    f.fp = fp;
    f.gram = std::move(gram);
    return f;
}

std::uint32_t SymplecticForm::eval(std::span<const std::uint32_t> x,
                                   std::span<const std::uint32_t> y) const {
    const std::size_t n = gram.rows();
    assert(x.size() == n && y.size() == n);
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        std::uint64_t row_acc = 0;
        for (std::size_t j = 0; j < n; ++j)
            row_acc += std::uint64_t(gram.at(i, j)) * y[j] % fp.p;
        acc += x[i] * (row_acc % fp.p) % fp.p;
    }
    return static_cast<std::uint32_t>(acc % fp.p);
}

Subspace perp(const SymplecticForm& form, const Subspace& v) {
    if (v.n != form.ambient() || v.p != form.fp.p)
        throw DimensionMismatch("subspace does not live in the form's ambient space");
    // x in perp(v) iff basis(v) * gram * x^T = 0
    Mat sys = mul(v.basis, form.gram, form.fp);
    Subspace out;
    out.n = v.n;
    out.p = v.p;
    out.basis = nullspace(sys, form.fp);
    return out;
}

bool is_isotropic(const SymplecticForm& form, const Subspace& v) {
    if (v.n != form.ambient() || v.p != form.fp.p)
        throw DimensionMismatch("subspace does not live in the form's ambient space");
    for (int i = 0; i < v.dim(); ++i)
        for (int j = i + 1; j < v.dim(); ++j)
            if (form.eval(v.basis.row(i), v.basis.row(j)) != 0) return false;
    return true;
}

QuotientForm quotient_form(const SymplecticForm& form, const Subspace& v) {
    if (!is_isotropic(form, v)) throw NonIsotropic("quotient_form requires isotropic v");
    Subspace vp = perp(form, v);
    // complete v's basis to a basis of v_perp with rows of vp not in span
    Mat reps(0, v.n, v.p);
    Subspace span = v;
    for (int r = 0; r < vp.dim(); ++r) {
        if (span.contains_vector(vp.basis.row(r), form.fp)) continue;
        reps.append_row(vp.basis.row(r));
        Mat m = span.basis;
        m.append_row(vp.basis.row(r));
        span = rref(m, form.fp);
    }
    const std::size_t q = reps.rows();  // 2g - 2 dim v
    Mat gram(q, q, v.p);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j)
            gram.at(i, j) = form.eval(reps.row(i), reps.row(j));
    QuotientForm out;
    out.base = form;
    out.v = v;
    out.rep_basis = std::move(reps);
    out.induced = SymplecticForm::from_gram(std::move(gram), form.fp);
    return out;
}

Subspace QuotientForm::project(const Subspace& u) const {
    const FieldPrime& fp = base.fp;
    if (!u.contains(v, fp)) throw PreconditionViolated("project: u does not contain v");
    // write each basis vector of u as (component in v) + rep_basis * lambda;
    // solve [v_basis^T | rep_basis^T] * coeffs = u_row, keep the lambda part.
    const std::size_t n = u.n;
    const std::size_t kv = v.basis.rows(), kq = rep_basis.rows();
    Mat out(0, kq, u.p);
    for (int r = 0; r < u.dim(); ++r) {
        Mat aug(n, kv + kq + 1, u.p);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < kv; ++c) aug.at(i, c) = v.basis.at(c, i);
            for (std::size_t c = 0; c < kq; ++c) aug.at(i, kv + c) = rep_basis.at(c, i);
            aug.at(i, kv + kq) = u.basis.at(r, i);
        }
        auto pivots = rref_in_place(aug, fp);
        std::vector<std::uint32_t> sol(kv + kq, 0);
        for (std::size_t pr = 0; pr < pivots.size(); ++pr) {
            if (pivots[pr] == kv + kq)
                throw PreconditionViolated("project: u not inside v_perp");
            sol[pivots[pr]] = aug.at(pr, kv + kq);
        }
        std::vector<std::uint32_t> lambda(sol.begin() + kv, sol.end());
        out.append_row(lambda);
    }
    Subspace s;
    s.n = static_cast<std::uint32_t>(kq);
    s.p = u.p;
    s.basis = row_space(out, fp);
    return s;
}

Subspace QuotientForm::lift(const Subspace& q) const {
    const FieldPrime& fp = base.fp;
    Mat m = v.basis;
    for (int r = 0; r < q.dim(); ++r) {
        std::vector<std::uint32_t> x(v.n, 0);
        for (std::size_t c = 0; c < rep_basis.rows(); ++c) {
            if (q.basis.at(r, c) == 0) continue;
            for (std::size_t j = 0; j < v.n; ++j)
                x[j] = fp.add(x[j], fp.mul(q.basis.at(r, c), rep_basis.at(c, j)));
        }
        m.append_row(x);
    }
    return rref(m, fp);
}

std::uint64_t count_subspaces(std::uint32_t n, std::uint32_t p, std::uint32_t k) {
    if (k > n) return 0;
    // Gaussian binomial [n choose k]_p with overflow checks
    long double approx = 1.0L;
    for (std::uint32_t i = 0; i < k; ++i) {
        approx *= (std::pow((long double)p, n - i) - 1) /
                  (std::pow((long double)p, i + 1) - 1);
    }
    if (approx > 9e18L) throw BudgetExceeded("subspace count overflows", ~0ULL);
    // exact integer evaluation, factor by factor
    using u128 = unsigned __int128;
    u128 num = 1, den = 1;
    auto gcd_reduce = [&]() {
        u128 g = std::gcd((unsigned long long)(num % ~0ULL), (unsigned long long)1);
        (void)g;
    };
    (void)gcd_reduce;
    std::uint64_t result = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        u128 top = 1, bot = 1;
        for (std::uint32_t e = 0; e < n - i; ++e) top *= p;
        for (std::uint32_t e = 0; e < i + 1; ++e) bot *= p;
        top -= 1;
        bot -= 1;
        u128 r = (u128)result * top;
        result = static_cast<std::uint64_t>(r / bot);
        num = den = 1;
    }
    return result;
}

std::vector<Subspace> enumerate_subspaces(std::uint32_t n, const FieldPrime& fp,
                                          std::uint32_t k) {
    std::vector<Subspace> out;
    if (k > n) return out;
    if (k == 0) {
        out.push_back(zero_subspace(n, fp.p));
        return out;
    }
    // iterate pivot column sets, then odometer over free entries
    std::vector<std::uint32_t> pivots(k);
    for (std::uint32_t i = 0; i < k; ++i) pivots[i] = i;
    auto next_combo = [&]() -> bool {
        int i = static_cast<int>(k) - 1;
        while (i >= 0 && pivots[i] == n - k + i) --i;
        if (i < 0) return false;
        ++pivots[i];
        for (std::uint32_t j = i + 1; j < k; ++j) pivots[j] = pivots[j - 1] + 1;
        return true;
    };
    do {
        // free positions: (r, c) with c > pivots[r], c not a pivot column
        std::vector<std::pair<std::uint32_t, std::uint32_t>> free_pos;
        std::vector<bool> is_piv(n, false);
        for (auto c : pivots) is_piv[c] = true;
        for (std::uint32_t r = 0; r < k; ++r)
            for (std::uint32_t c = pivots[r] + 1; c < n; ++c)
                if (!is_piv[c]) free_pos.emplace_back(r, c);
        std::vector<std::uint32_t> vals(free_pos.size(), 0);
        while (true) {
            Mat m(k, n, fp.p);
            for (std::uint32_t r = 0; r < k; ++r) m.at(r, pivots[r]) = 1;
            for (std::size_t i = 0; i < free_pos.size(); ++i)
                m.at(free_pos[i].first, free_pos[i].second) = vals[i];
            Subspace s;
            s.n = n;
            s.p = fp.p;
            s.basis = std::move(m);
            out.push_back(std::move(s));
            // odometer
            std::size_t i = 0;
            while (i < vals.size() && ++vals[i] == fp.p) vals[i++] = 0;
            if (i == vals.size() && !vals.empty()) break;
            if (vals.empty()) break;
        }
    } while (next_combo());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Subspace> enumerate_isotropic(const SymplecticForm& form, std::uint32_t k) {
    std::vector<Subspace> out;
    if (k > form.g) return out;  // Witt: maximal isotropic dimension is g
    for (auto& s : enumerate_subspaces(form.ambient(), form.fp, k))
        if (is_isotropic(form, s)) out.push_back(std::move(s));
    return out;
}

void for_each_isotropic(const SymplecticForm& form, std::uint32_t k,
                        const std::function<bool(const Subspace&)>& cb) {
    for (auto& s : enumerate_isotropic(form, k))
        if (!cb(s)) return;
}

Subspace extend_isotropic(const SymplecticForm& form, const Subspace& v,
                          int target_dim, const std::optional<Subspace>& within,
                          Rng* rng) {
    if (!is_isotropic(form, v)) throw NonIsotropic("extend_isotropic: v not isotropic");
    if (target_dim < v.dim() || target_dim > static_cast<int>(form.g))
        throw PreconditionViolated("extend_isotropic: bad target dimension");
    Subspace cur = v;
    while (cur.dim() < target_dim) {
        Subspace candidates = perp(form, cur);
        if (within) candidates = intersect(candidates, *within, form.fp);
        if (cur.contains(candidates, form.fp))
            throw NoExtension("extend_isotropic: no candidate vectors left at dim " +
                              std::to_string(cur.dim()));
        std::vector<std::uint32_t> x;
        if (rng) {
            x = random_vector_outside(candidates, cur, form.fp, *rng);
        } else {
            x = lex_min_outside(candidates, cur, form.fp);
        }
        Mat m = cur.basis;
        m.append_row(x);
        cur = rref(m, form.fp);
    }
    return cur;
}

std::vector<std::uint32_t> random_vector_outside(const Subspace& w, const Subspace& u,
                                                 const FieldPrime& fp, Rng& rng) {
    if (u.contains(w, fp)) throw NoExtension("random_vector_outside: w inside u");
    const int k = w.dim();
    for (int tries = 0; tries < 10000; ++tries) {
        std::vector<std::uint32_t> x(w.n, 0);
        for (int r = 0; r < k; ++r) {
            const std::uint32_t c = static_cast<std::uint32_t>(rng() % fp.p);
            if (c == 0) continue;
            for (std::size_t j = 0; j < w.n; ++j)
                x[j] = fp.add(x[j], fp.mul(c, w.basis.at(r, j)));
        }
        if (!u.contains_vector(x, fp)) return x;
    }
    throw NoExtension("random_vector_outside: rejection sampling exhausted");
}

Subspace random_subspace(std::uint32_t n, const FieldPrime& fp, int k, Rng& rng) {
    Subspace cur = zero_subspace(n, fp.p);
    Subspace full = full_space(n, fp);
    while (cur.dim() < k) {
        auto x = random_vector_outside(full, cur, fp, rng);
        Mat m = cur.basis;
        m.append_row(x);
        cur = rref(m, fp);
    }
    return cur;
}

Mat darboux_basis(const SymplecticForm& form) {
    const FieldPrime& fp = form.fp;
    const std::size_t n = form.gram.rows();
    // Greedy hyperbolic-pair extraction: collect e_i, f_i with <e_i,f_j> =
    // delta_ij and all other pairings zero.
    std::vector<std::vector<std::uint32_t>> es, fs;
    Subspace found = zero_subspace(static_cast<std::uint32_t>(n), fp.p);

    auto pair_with = [&](const std::vector<std::uint32_t>& x) {
        // returns y (not in span of found) with <x,y> = 1, reduced against
        // the pairs found so far
        Subspace cand = perp(form, found);
        for (int r = 0; r < cand.dim(); ++r) {
            auto y = cand.basis.row(r);
            const std::uint32_t val = form.eval(x, y);
            if (val != 0) {
                std::vector<std::uint32_t> out(y.begin(), y.end());
                const std::uint32_t s = fp.inv(val);
                for (auto& c : out) c = fp.mul(c, s);
                return out;
            }
        }
        throw Error("darboux_basis: degenerate form");
    };

    while (es.size() < n / 2) {
        // next e: any vector perpendicular to all found pairs, outside span
        Subspace cand = perp(form, found);
        auto e = lex_min_outside(cand, found, fp);
        auto f = pair_with(e);
        // normalize f against e-perp components is unnecessary: both are in
        // perp(found), and the pair (e, f) spans a hyperbolic plane; make f
        // perpendicular to e's plane partner automatically by construction.
        es.push_back(e);
        fs.push_back(f);
        Mat m = found.basis;
        m.append_row(e);
        m.append_row(f);
        found = rref(m, fp);
    }
    Mat s(n, n, fp.p);
    for (std::size_t i = 0; i < n / 2; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            s.at(i, j) = es[i][j];
            s.at(n / 2 + i, j) = fs[i][j];
        }
    }
    return s;
}

}  // namespace hdx::gf
