#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyfun {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/* Dense row-major matrix over Z. Zero-dimensional shapes (0 x n, n x 0) are
 * legal and show up constantly as empty complexes and empty relation sets. */
struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Int> a;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {
        if (r < 0 || c < 0) throw std::invalid_argument("IntMatrix: negative shape");
    }
    IntMatrix(int r, int c, std::initializer_list<Int> vals) : IntMatrix(r, c) {
        if (static_cast<size_t>(r) * c != vals.size())
            throw std::invalid_argument("IntMatrix: initializer size mismatch");
        size_t i = 0;
        for (const Int& v : vals) a[i++] = v;
    }

    Int& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Int& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool operator==(const IntMatrix& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const Int& v : a)
            if (v != 0) return false;
        return true;
    }
    bool is_identity() const {
        if (rows != cols) return false;
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (at(i, j) != (i == j ? 1 : 0)) return false;
        return true;
    }
    /* diagonal with entries in {0,1}; such matrices get fast paths in splitting */
    bool is_diagonal01() const {
        if (rows != cols) return false;
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                const Int& v = at(i, j);
                if (i != j && v != 0) return false;
                if (i == j && v != 0 && v != 1) return false;
            }
        return true;
    }
};

inline IntMatrix identity_matrix(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

inline IntMatrix zero_matrix(int r, int c) { return IntMatrix(r, c); }

inline IntMatrix transpose(const IntMatrix& m) {
    IntMatrix t(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
    return t;
}

inline IntMatrix mul(const IntMatrix& x, const IntMatrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("mul: shape mismatch");
    IntMatrix z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const Int& v = x.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < y.cols; ++j) {
                const Int& w = y.at(k, j);
                if (w != 0) z.at(i, j) += v * w;
            }
        }
    return z;
}

inline IntMatrix add(const IntMatrix& x, const IntMatrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("add: shape mismatch");
    IntMatrix z = x;
    for (size_t i = 0; i < z.a.size(); ++i) z.a[i] += y.a[i];
    return z;
}

inline IntMatrix sub(const IntMatrix& x, const IntMatrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("sub: shape mismatch");
    IntMatrix z = x;
    for (size_t i = 0; i < z.a.size(); ++i) z.a[i] -= y.a[i];
    return z;
}

inline IntMatrix neg(const IntMatrix& x) {
    IntMatrix z = x;
    for (Int& v : z.a) v = -v;
    return z;
}

inline IntMatrix scale(const IntMatrix& x, const Int& c) {
    IntMatrix z = x;
    for (Int& v : z.a) v *= c;
    return z;
}

inline IntMatrix hstack(const IntMatrix& x, const IntMatrix& y) {
    if (x.rows != y.rows) throw std::invalid_argument("hstack: row mismatch");
    IntMatrix z(x.rows, x.cols + y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < x.cols; ++j) z.at(i, j) = x.at(i, j);
        for (int j = 0; j < y.cols; ++j) z.at(i, x.cols + j) = y.at(i, j);
    }
    return z;
}

inline IntMatrix vstack(const IntMatrix& x, const IntMatrix& y) {
    if (x.cols != y.cols) throw std::invalid_argument("vstack: col mismatch");
    IntMatrix z(x.rows + y.rows, x.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) z.at(i, j) = x.at(i, j);
    for (int i = 0; i < y.rows; ++i)
        for (int j = 0; j < x.cols; ++j) z.at(x.rows + i, j) = y.at(i, j);
    return z;
}

/* copy src into dst with top-left corner at (r0, c0) */
inline void place_block(IntMatrix& dst, const IntMatrix& src, int r0, int c0) {
    if (r0 + src.rows > dst.rows || c0 + src.cols > dst.cols)
        throw std::invalid_argument("place_block: out of range");
    for (int i = 0; i < src.rows; ++i)
        for (int j = 0; j < src.cols; ++j) dst.at(r0 + i, c0 + j) = src.at(i, j);
}

inline IntMatrix block_diag(const std::vector<IntMatrix>& blocks) {
    int r = 0, c = 0;
    for (const auto& b : blocks) r += b.rows, c += b.cols;
    IntMatrix z(r, c);
    int i0 = 0, j0 = 0;
    for (const auto& b : blocks) {
        place_block(z, b, i0, j0);
        i0 += b.rows;
        j0 += b.cols;
    }
    return z;
}

inline IntMatrix block_diag(const IntMatrix& a, const IntMatrix& b) {
    return block_diag(std::vector<IntMatrix>{a, b});
}

/* contiguous block: nrows x ncols with top-left corner at (r0, c0) */
inline IntMatrix submatrix(const IntMatrix& m, int r0, int c0, int nrows, int ncols) {
    if (r0 < 0 || c0 < 0 || r0 + nrows > m.rows || c0 + ncols > m.cols || nrows < 0 || ncols < 0)
        throw std::invalid_argument("submatrix: out of range");
    IntMatrix z(nrows, ncols);
    for (int i = 0; i < nrows; ++i)
        for (int j = 0; j < ncols; ++j) z.at(i, j) = m.at(r0 + i, c0 + j);
    return z;
}

inline IntMatrix submatrix(const IntMatrix& m, const std::vector<int>& row_ids,
                           const std::vector<int>& col_ids) {
    IntMatrix z(static_cast<int>(row_ids.size()), static_cast<int>(col_ids.size()));
    for (size_t i = 0; i < row_ids.size(); ++i)
        for (size_t j = 0; j < col_ids.size(); ++j) z.at((int)i, (int)j) = m.at(row_ids[i], col_ids[j]);
    return z;
}

inline IntMatrix select_columns(const IntMatrix& m, const std::vector<int>& col_ids) {
    IntMatrix z(m.rows, static_cast<int>(col_ids.size()));
    for (int i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < col_ids.size(); ++j) z.at(i, (int)j) = m.at(i, col_ids[j]);
    return z;
}

inline IntMatrix select_rows(const IntMatrix& m, const std::vector<int>& row_ids) {
    IntMatrix z(static_cast<int>(row_ids.size()), m.cols);
    for (size_t i = 0; i < row_ids.size(); ++i)
        for (int j = 0; j < m.cols; ++j) z.at((int)i, j) = m.at(row_ids[i], j);
    return z;
}

inline IntMatrix kronecker(const IntMatrix& x, const IntMatrix& y) {
    IntMatrix z(x.rows * y.rows, x.cols * y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) {
            const Int& v = x.at(i, j);
            if (v == 0) continue;
            for (int p = 0; p < y.rows; ++p)
                for (int q = 0; q < y.cols; ++q) {
                    const Int& w = y.at(p, q);
                    if (w != 0) z.at(i * y.rows + p, j * y.cols + q) = v * w;
                }
        }
    return z;
}

inline std::string to_string(const IntMatrix& m) {
    std::string s = "[";
    for (int i = 0; i < m.rows; ++i) {
        s += i ? "; " : "";
        for (int j = 0; j < m.cols; ++j) {
            if (j) s += ", ";
            s += m.at(i, j).str();
        }
    }
    s += "] (" + std::to_string(m.rows) + "x" + std::to_string(m.cols) + ")";
    return s;
}

}  // namespace polyfun
