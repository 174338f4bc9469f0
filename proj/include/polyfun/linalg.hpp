#pragma once

#include <optional>
#include <tuple>

#include "polyfun/matrix.hpp"

namespace polyfun {

/* floor division; b must be nonzero */
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if (q * b != a && ((a < 0) != (b < 0))) q -= 1;
    return q;
}

/* quotient with least absolute remainder; exact ties keep the truncated
 * quotient so results stay deterministic */
inline Int balanced_div(const Int& a, const Int& b) {
    Int q = a / b;
    Int r = a - q * b;
    if (2 * abs(r) > abs(b)) q += (r < 0) == (b < 0) ? 1 : -1;
    return q;
}

/* U * A * V = D with U, V unimodular, D diagonal, d1 | d2 | ..., zeros last.
 * Pivot choice: smallest nonzero absolute value, ties by lowest row then
 * lowest column. Fully deterministic. */
struct SnfDecomposition {
    IntMatrix u;  // rows x rows
    IntMatrix d;  // rows x cols, diagonal
    IntMatrix v;  // cols x cols
    int rank = 0;
};

namespace detail {

inline void swap_rows(IntMatrix& m, int i, int j) {
    if (i == j) return;
    for (int c = 0; c < m.cols; ++c) std::swap(m.at(i, c), m.at(j, c));
}
inline void swap_cols(IntMatrix& m, int i, int j) {
    if (i == j) return;
    for (int r = 0; r < m.rows; ++r) std::swap(m.at(r, i), m.at(r, j));
}
inline void add_row_multiple(IntMatrix& m, int dst, int src, const Int& q) {
    if (q == 0) return;
    for (int c = 0; c < m.cols; ++c) m.at(dst, c) += q * m.at(src, c);
}
inline void add_col_multiple(IntMatrix& m, int dst, int src, const Int& q) {
    if (q == 0) return;
    for (int r = 0; r < m.rows; ++r) m.at(r, dst) += q * m.at(r, src);
}
inline void negate_row(IntMatrix& m, int i) {
    for (int c = 0; c < m.cols; ++c) m.at(i, c) = -m.at(i, c);
}

}  // namespace detail

inline SnfDecomposition smith_normal_form(const IntMatrix& in) {
    using namespace detail;
    SnfDecomposition s;
    s.u = identity_matrix(in.rows);
    s.v = identity_matrix(in.cols);
    s.d = in;
    IntMatrix& d = s.d;
    IntMatrix& u = s.u;
    IntMatrix& v = s.v;

    int t = 0;
    while (t < d.rows && t < d.cols) {
        bool trailing_zero = false;
        for (;;) {
            // pick pivot in the trailing submatrix, re-selected every round so
            // quotients stay near 1 and entries cannot compound
            int pi = -1, pj = -1;
            Int best;
            for (int i = t; i < d.rows; ++i)
                for (int j = t; j < d.cols; ++j) {
                    if (d.at(i, j) == 0) continue;
                    Int av = abs(d.at(i, j));
                    if (pi < 0 || av < best) {
                        best = av;
                        pi = i;
                        pj = j;
                    }
                }
            if (pi < 0) {
                trailing_zero = true;
                break;
            }
            if (pi != t) {
                swap_rows(d, t, pi);
                swap_rows(u, t, pi);
            }
            if (pj != t) {
                swap_cols(d, t, pj);
                swap_cols(v, t, pj);
            }

            // one balanced-remainder pass over row t and column t; leftover
            // remainders are strictly smaller than the pivot, so the next
            // round picks a smaller one and the loop converges like gcd
            bool dirty = false;
            for (int j = t + 1; j < d.cols; ++j) {
                if (d.at(t, j) == 0) continue;
                Int q = balanced_div(d.at(t, j), d.at(t, t));
                if (q != 0) {
                    add_col_multiple(d, j, t, -q);
                    add_col_multiple(v, j, t, -q);
                }
                if (d.at(t, j) != 0) dirty = true;
            }
            for (int i = t + 1; i < d.rows; ++i) {
                if (d.at(i, t) == 0) continue;
                Int q = balanced_div(d.at(i, t), d.at(t, t));
                if (q != 0) {
                    add_row_multiple(d, i, t, -q);
                    add_row_multiple(u, i, t, -q);
                }
                if (d.at(i, t) != 0) dirty = true;
            }
            if (dirty) continue;

            // divisibility sweep: pivot must divide the rest of the block;
            // pulling the offending column into column t keeps row t clean,
            // and the next rounds shrink the pivot to the common gcd
            int bad = -1;
            for (int j = t + 1; j < d.cols && bad < 0; ++j)
                for (int i = t + 1; i < d.rows; ++i)
                    if (d.at(i, j) % d.at(t, t) != 0) {
                        bad = j;
                        break;
                    }
            if (bad < 0) break;
            add_col_multiple(d, t, bad, 1);
            add_col_multiple(v, t, bad, 1);
        }
        if (trailing_zero) break;
        if (d.at(t, t) < 0) {
            negate_row(d, t);
            negate_row(u, t);
        }
        ++t;
    }
    s.rank = 0;
    for (int i = 0; i < std::min(d.rows, d.cols); ++i)
        if (d.at(i, i) != 0) ++s.rank;
    return s;
}

/* Canonical row-style Hermite normal form of the row lattice: pivots
 * positive, strictly increasing pivot columns, zeros below, entries above a
 * pivot reduced into [0, pivot). Zero rows dropped. */
inline IntMatrix row_hnf(const IntMatrix& in) {
    using namespace detail;
    IntMatrix h = in;
    int r = 0;
    for (int j = 0; j < h.cols && r < h.rows; ++j) {
        for (;;) {
            int pi = -1;
            Int best;
            for (int i = r; i < h.rows; ++i) {
                if (h.at(i, j) == 0) continue;
                Int av = abs(h.at(i, j));
                if (pi < 0 || av < best) {
                    best = av;
                    pi = i;
                }
            }
            if (pi < 0) break;
            swap_rows(h, r, pi);
            bool clean = true;
            for (int i = r + 1; i < h.rows; ++i) {
                if (h.at(i, j) == 0) continue;
                Int q = h.at(i, j) / h.at(r, j);
                add_row_multiple(h, i, r, -q);
                if (h.at(i, j) != 0) clean = false;
            }
            if (clean) break;
        }
        if (h.at(r, j) != 0) {
            if (h.at(r, j) < 0) negate_row(h, r);
            for (int i = 0; i < r; ++i) {
                Int q = floor_div(h.at(i, j), h.at(r, j));
                add_row_multiple(h, i, r, -q);
            }
            ++r;
        }
    }
    IntMatrix out(r, h.cols);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < h.cols; ++j) out.at(i, j) = h.at(i, j);
    return out;
}

/* Canonical basis of the column lattice of `in`, one column per basis vector. */
inline IntMatrix column_hnf(const IntMatrix& in) { return transpose(row_hnf(transpose(in))); }

inline int rank(const IntMatrix& m) { return row_hnf(m).rows; }

/* Canonical basis of the saturated kernel lattice {x : A x = 0}; saturation
 * means the columns extend to a basis of Z^cols. */
inline IntMatrix kernel_basis(const IntMatrix& a) {
    SnfDecomposition s = smith_normal_form(a);
    std::vector<int> ids;
    for (int j = s.rank; j < a.cols; ++j) ids.push_back(j);
    return column_hnf(select_columns(s.v, ids));
}

/* Invariant factors (each > 1, in divisibility order) and free rank of
 * coker(A : Z^cols -> Z^rows). */
inline std::pair<int, std::vector<Int>> cokernel_invariants(const IntMatrix& a) {
    SnfDecomposition s = smith_normal_form(a);
    std::vector<Int> factors;
    for (int i = 0; i < s.rank; ++i)
        if (s.d.at(i, i) > 1) factors.push_back(s.d.at(i, i));
    return {a.rows - s.rank, factors};
}

/* All integer solutions X of A X = B, or nullopt when none exists. */
inline std::optional<IntMatrix> solve_exact(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows != b.rows) throw std::invalid_argument("solve_exact: row mismatch");
    SnfDecomposition s = smith_normal_form(a);
    IntMatrix y = mul(s.u, b);
    IntMatrix w(a.cols, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        Int di = (i < std::min(a.rows, a.cols)) ? s.d.at(i, i) : Int(0);
        for (int j = 0; j < b.cols; ++j) {
            if (di == 0) {
                if (y.at(i, j) != 0) return std::nullopt;
            } else {
                if (y.at(i, j) % di != 0) return std::nullopt;
                if (i < a.cols) w.at(i, j) = y.at(i, j) / di;
            }
        }
    }
    return mul(s.v, w);
}

inline bool in_column_lattice(const IntMatrix& basis, const IntMatrix& vecs) {
    return solve_exact(basis, vecs).has_value();
}

inline bool same_column_lattice(const IntMatrix& x, const IntMatrix& y) {
    return column_hnf(x) == column_hnf(y);
}

/* Exact determinant by fraction-free (Bareiss) elimination. */
inline Int determinant(const IntMatrix& in) {
    if (in.rows != in.cols) throw std::invalid_argument("determinant: not square");
    int n = in.rows;
    if (n == 0) return 1;
    IntMatrix m = in;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (m.at(i, k) != 0) {
                    p = i;
                    break;
                }
            if (p < 0) return 0;
            detail::swap_rows(m, k, p);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

inline bool is_unimodular(const IntMatrix& m) {
    if (m.rows != m.cols) return false;
    Int d = determinant(m);
    return d == 1 || d == -1;
}

/* Splitting of an idempotent e = e^2 acting on Z^n: the image lattice equals
 * ker(1-e), hence is saturated, a direct summand. inclusion holds its
 * canonical basis (column HNF of the image lattice); projection expresses e
 * in that basis. projection * inclusion = I, inclusion * projection = e. */
struct SplitIdempotent {
    IntMatrix inclusion;   // n x r
    IntMatrix projection;  // r x n
};

inline SplitIdempotent idempotent_split(const IntMatrix& e) {
    if (e.rows != e.cols) throw std::invalid_argument("idempotent_split: not square");
    if (mul(e, e) != e) throw std::invalid_argument("idempotent_split: not idempotent");
    if (e.is_diagonal01()) {
        std::vector<int> ids;
        for (int i = 0; i < e.rows; ++i)
            if (e.at(i, i) == 1) ids.push_back(i);
        SplitIdempotent s;
        s.inclusion = IntMatrix(e.rows, (int)ids.size());
        s.projection = IntMatrix((int)ids.size(), e.rows);
        for (size_t k = 0; k < ids.size(); ++k) {
            s.inclusion.at(ids[k], (int)k) = 1;
            s.projection.at((int)k, ids[k]) = 1;
        }
        return s;
    }
    SplitIdempotent s;
    s.inclusion = column_hnf(e);
    auto proj = solve_exact(s.inclusion, e);
    if (!proj) throw std::logic_error("idempotent_split: image basis does not span image");
    s.projection = *proj;
    if (mul(s.projection, s.inclusion) != identity_matrix(s.inclusion.cols))
        throw std::logic_error("idempotent_split: splitting identity failed");
    return s;
}

}  // namespace polyfun
