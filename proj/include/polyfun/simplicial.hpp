#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "polyfun/complexes.hpp"
#include "polyfun/functors.hpp"
#include "polyfun/matrix.hpp"

namespace polyfun {

/* Simplicial module truncated at level cap: faces[n-1][i] is d_i from level n
 * (1 <= n <= cap, 0 <= i <= n), degens[n][i] is s_i from level n
 * (0 <= n < cap, 0 <= i <= n). */
struct SimplicialModule {
    int cap = 0;
    std::vector<int> ranks{0};
    std::vector<std::vector<IntMatrix>> faces;
    std::vector<std::vector<IntMatrix>> degens;

    int rank_at(int n) const { return (n >= 0 && n <= cap) ? ranks[n] : 0; }
    const IntMatrix& face(int n, int i) const { return faces[n - 1][i]; }
    const IntMatrix& degen(int n, int i) const { return degens[n][i]; }
};

inline void validate_simplicial(const SimplicialModule& x) {
    if (x.cap < 0 || static_cast<int>(x.ranks.size()) != x.cap + 1)
        throw std::invalid_argument("simplicial: ranks must cover levels 0..cap");
    if (static_cast<int>(x.faces.size()) != x.cap)
        throw std::invalid_argument("simplicial: need faces for levels 1..cap");
    if (static_cast<int>(x.degens.size()) != x.cap)
        throw std::invalid_argument("simplicial: need degeneracies for levels 0..cap-1");
    for (int n = 1; n <= x.cap; ++n) {
        if (static_cast<int>(x.faces[n - 1].size()) != n + 1)
            throw std::invalid_argument("simplicial: level n needs n+1 faces");
        for (const auto& d : x.faces[n - 1])
            if (d.rows != x.ranks[n - 1] || d.cols != x.ranks[n])
                throw std::invalid_argument("simplicial: face shape mismatch");
    }
    for (int n = 0; n < x.cap; ++n) {
        if (static_cast<int>(x.degens[n].size()) != n + 1)
            throw std::invalid_argument("simplicial: level n needs n+1 degeneracies");
        for (const auto& s : x.degens[n])
            if (s.rows != x.ranks[n + 1] || s.cols != x.ranks[n])
                throw std::invalid_argument("simplicial: degeneracy shape mismatch");
    }

    /* d_i d_j = d_{j-1} d_i for i < j */
    for (int n = 2; n <= x.cap; ++n)
        for (int j = 1; j <= n; ++j)
            for (int i = 0; i < j; ++i)
                if (mul(x.face(n - 1, i), x.face(n, j)) != mul(x.face(n - 1, j - 1), x.face(n, i)))
                    throw std::invalid_argument("simplicial: face-face identity fails");
    /* s_i s_j = s_{j+1} s_i for i <= j */
    for (int n = 0; n + 1 < x.cap; ++n)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= j; ++i)
                if (mul(x.degen(n + 1, i), x.degen(n, j)) !=
                    mul(x.degen(n + 1, j + 1), x.degen(n, i)))
                    throw std::invalid_argument("simplicial: degeneracy-degeneracy identity fails");
    /* d_i s_j families */
    for (int n = 0; n < x.cap; ++n) {
        for (int j = 0; j <= n; ++j) {
            for (int i = 0; i <= n + 1; ++i) {
                IntMatrix lhs = mul(x.face(n + 1, i), x.degen(n, j));
                if (i == j || i == j + 1) {
                    if (!lhs.is_identity())
                        throw std::invalid_argument("simplicial: d_j s_j != id");
                } else if (i < j) {
                    if (lhs != mul(x.degen(n - 1, j - 1), x.face(n, i)))
                        throw std::invalid_argument("simplicial: d_i s_j (i<j) identity fails");
                } else {
                    if (lhs != mul(x.degen(n - 1, j), x.face(n, i - 1)))
                        throw std::invalid_argument("simplicial: d_i s_j (i>j+1) identity fails");
                }
            }
        }
    }
}

/* alternating face sum */
inline FreeChainComplex associated_complex(const SimplicialModule& x) {
    FreeChainComplex c;
    c.top = x.cap;
    c.ranks = x.ranks;
    for (int n = 1; n <= x.cap; ++n) {
        IntMatrix d = x.face(n, 0);
        for (int i = 1; i <= n; ++i)
            d = (i % 2) ? sub(d, x.face(n, i)) : add(d, x.face(n, i));
        c.diffs.push_back(std::move(d));
    }
    validate_complex(c);
    return c;
}

/* intersection of the kernels of d_1..d_n in each level, with differential d_0;
 * trustworthy in degrees <= cap-1 */
inline FreeChainComplex normalized_complex(const SimplicialModule& x) {
    std::vector<IntMatrix> bases(x.cap + 1);
    bases[0] = identity_matrix(x.rank_at(0));
    for (int n = 1; n <= x.cap; ++n) {
        IntMatrix stacked(0, x.ranks[n]);
        for (int i = 1; i <= n; ++i) stacked = vstack(stacked, x.face(n, i));
        bases[n] = column_hnf(kernel_basis(stacked));
    }
    FreeChainComplex c;
    c.top = x.cap;
    c.ranks.assign(x.cap + 1, 0);
    for (int n = 0; n <= x.cap; ++n) c.ranks[n] = bases[n].cols;
    for (int n = 1; n <= x.cap; ++n) {
        auto d = solve_exact(bases[n - 1], mul(x.face(n, 0), bases[n]));
        if (!d) throw std::logic_error("normalized_complex: d_0 leaves the normalized part");
        c.diffs.push_back(std::move(*d));
    }
    validate_complex(c);
    return c;
}

/* surjection [n] ->> [k], stored by its value sequence and the set of
 * positions where the value steps up (bit p-1 for position p) */
struct GammaSummand {
    int k = 0;
    std::vector<int> values;
    unsigned ascent_mask = 0;
};

/* summand bookkeeping for one level of the Dold-Kan construction */
struct GammaLevel {
    std::vector<GammaSummand> summands;
    std::vector<int> offsets; /* size summands+1, block starts in the level */
    int rank = 0;
};

inline std::vector<GammaSummand> gamma_summands(int n, int top) {
    std::vector<GammaSummand> out;
    for (int k = 0; k <= std::min(n, top); ++k) {
        std::vector<int> pick(k);
        for (int i = 0; i < k; ++i) pick[i] = i + 1;
        while (true) {
            GammaSummand s;
            s.k = k;
            s.values.assign(n + 1, 0);
            for (int p : pick) s.ascent_mask |= 1u << (p - 1);
            for (int p = 1, v = 0; p <= n; ++p) {
                if (s.ascent_mask & (1u << (p - 1))) ++v;
                s.values[p] = v;
            }
            out.push_back(std::move(s));
            if (k == 0) break;
            int p = k - 1;
            while (p >= 0 && pick[p] == n - k + 1 + p) --p;
            if (p < 0) break;
            ++pick[p];
            for (int q = p + 1; q < k; ++q) pick[q] = pick[q - 1] + 1;
        }
    }
    return out;
}

inline GammaLevel gamma_level(const FreeChainComplex& c, int n) {
    GammaLevel l;
    l.summands = gamma_summands(n, c.top);
    l.offsets.assign(l.summands.size() + 1, 0);
    for (size_t s = 0; s < l.summands.size(); ++s)
        l.offsets[s + 1] = l.offsets[s] + c.rank_at(l.summands[s].k);
    l.rank = l.offsets.back();
    return l;
}

namespace detail {

/* component of the structure map for psi = sigma . alpha, landing in the
 * summand of the epi part of psi: identity if psi is onto [k], the complex
 * differential if the image is {1..k}, zero otherwise */
struct RouteResult {
    enum class Kind { Zero, Identity, Differential } kind = Kind::Zero;
    std::vector<int> target_values;
};

inline RouteResult route_structure_map(const std::vector<int>& psi, int k) {
    RouteResult r;
    std::vector<int> distinct;
    for (int v : psi)
        if (distinct.empty() || distinct.back() != v) distinct.push_back(v);
    int j = static_cast<int>(distinct.size()) - 1;
    r.target_values.reserve(psi.size());
    for (int v : psi)
        r.target_values.push_back(
            static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), v) -
                             distinct.begin()));
    if (j == k)
        r.kind = RouteResult::Kind::Identity;
    else if (j == k - 1 && distinct.front() == 1)
        r.kind = RouteResult::Kind::Differential;
    else
        r.kind = RouteResult::Kind::Zero;
    return r;
}

}  // namespace detail

/* inverse Dold-Kan construction: level n is the sum of C_k over surjections
 * [n] ->> [k]; all simplicial identities are checked on the result */
inline SimplicialModule dk_gamma(const FreeChainComplex& c, int cap) {
    if (cap < 0) throw std::invalid_argument("dk_gamma: negative level cap");
    validate_complex(c);
    SimplicialModule x;
    x.cap = cap;
    std::vector<GammaLevel> levels;
    for (int n = 0; n <= cap; ++n) levels.push_back(gamma_level(c, n));
    x.ranks.clear();
    for (int n = 0; n <= cap; ++n) x.ranks.push_back(levels[n].rank);

    std::vector<std::map<std::vector<int>, int>> index(cap + 1);
    for (int n = 0; n <= cap; ++n)
        for (size_t s = 0; s < levels[n].summands.size(); ++s)
            index[n][levels[n].summands[s].values] = static_cast<int>(s);

    for (int n = 1; n <= cap; ++n) {
        std::vector<IntMatrix> fs;
        for (int i = 0; i <= n; ++i) {
            IntMatrix d(levels[n - 1].rank, levels[n].rank);
            for (size_t s = 0; s < levels[n].summands.size(); ++s) {
                const GammaSummand& sig = levels[n].summands[s];
                std::vector<int> psi;
                for (int p = 0; p <= n; ++p)
                    if (p != i) psi.push_back(sig.values[p]);
                auto r = detail::route_structure_map(psi, sig.k);
                if (r.kind == detail::RouteResult::Kind::Zero) continue;
                int t = index[n - 1].at(r.target_values);
                if (r.kind == detail::RouteResult::Kind::Identity)
                    place_block(d, identity_matrix(c.rank_at(sig.k)), levels[n - 1].offsets[t],
                                levels[n].offsets[s]);
                else
                    place_block(d, c.diff_at(sig.k - 1), levels[n - 1].offsets[t],
                                levels[n].offsets[s]);
            }
            fs.push_back(std::move(d));
        }
        x.faces.push_back(std::move(fs));
    }
    for (int n = 0; n < cap; ++n) {
        std::vector<IntMatrix> ss;
        for (int i = 0; i <= n; ++i) {
            IntMatrix s(levels[n + 1].rank, levels[n].rank);
            for (size_t j = 0; j < levels[n].summands.size(); ++j) {
                const GammaSummand& sig = levels[n].summands[j];
                std::vector<int> psi;
                for (int p = 0; p <= i; ++p) psi.push_back(sig.values[p]);
                for (int p = i; p <= n; ++p) psi.push_back(sig.values[p]);
                int t = index[n + 1].at(psi);
                place_block(s, identity_matrix(c.rank_at(sig.k)), levels[n + 1].offsets[t],
                            levels[n].offsets[j]);
            }
            ss.push_back(std::move(s));
        }
        x.degens.push_back(std::move(ss));
    }
    validate_simplicial(x);
    return x;
}

/* levelwise application of a polynomial functor */
inline SimplicialModule apply_functor(const FunctorDescriptor& f, const SimplicialModule& x) {
    SimplicialModule y;
    y.cap = x.cap;
    y.ranks.clear();
    for (int n = 0; n <= x.cap; ++n) y.ranks.push_back(functor_rank(f, x.ranks[n]));
    for (int n = 1; n <= x.cap; ++n) {
        std::vector<IntMatrix> fs;
        for (int i = 0; i <= n; ++i) fs.push_back(functor_on_map(f, x.face(n, i)));
        y.faces.push_back(std::move(fs));
    }
    for (int n = 0; n < x.cap; ++n) {
        std::vector<IntMatrix> ss;
        for (int i = 0; i <= n; ++i) ss.push_back(functor_on_map(f, x.degen(n, i)));
        y.degens.push_back(std::move(ss));
    }
    validate_simplicial(y);
    return y;
}

}  // namespace polyfun
