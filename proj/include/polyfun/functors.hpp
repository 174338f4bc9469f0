#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyfun/linalg.hpp"
#include "polyfun/matrix.hpp"
#include "polyfun/report.hpp"
#include "polyfun/rng.hpp"

namespace polyfun {

enum class FunctorKind { Sym, Ext, Div, Tensor };

struct FunctorDescriptor {
    FunctorKind kind = FunctorKind::Sym;
    int degree = 1;

    bool operator==(const FunctorDescriptor& o) const {
        return kind == o.kind && degree == o.degree;
    }
};

inline std::string to_string(FunctorKind k) {
    switch (k) {
        case FunctorKind::Sym: return "sym";
        case FunctorKind::Ext: return "ext";
        case FunctorKind::Div: return "div";
        default: return "tensor";
    }
}

inline std::string to_string(const FunctorDescriptor& f) {
    return to_string(f.kind) + ":" + std::to_string(f.degree);
}

/* accepts "sym:d", "ext:d", "div:d", "tensor:d" and the alias "id" */
inline FunctorDescriptor parse_functor(const std::string& s) {
    if (s == "id") return FunctorDescriptor{FunctorKind::Sym, 1};
    auto p = s.find(':');
    if (p == std::string::npos) throw std::invalid_argument("functor: expected kind:degree");
    std::string kind = s.substr(0, p);
    int d;
    try {
        size_t used = 0;
        d = std::stoi(s.substr(p + 1), &used);
        if (used != s.size() - p - 1) throw std::invalid_argument("");
    } catch (...) {
        throw std::invalid_argument("functor: bad degree in '" + s + "'");
    }
    if (d < 1) throw std::invalid_argument("functor: degree must be >= 1");
    FunctorDescriptor f;
    f.degree = d;
    if (kind == "sym") f.kind = FunctorKind::Sym;
    else if (kind == "ext") f.kind = FunctorKind::Ext;
    else if (kind == "div") f.kind = FunctorKind::Div;
    else if (kind == "tensor") f.kind = FunctorKind::Tensor;
    else throw std::invalid_argument("functor: unknown kind '" + kind + "'");
    return f;
}

inline Int binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    Int v = 1;
    for (long long i = 0; i < k; ++i) {
        v *= n - i;
        v /= i + 1;
    }
    return v;
}

inline Int functor_rank_big(const FunctorDescriptor& f, int r) {
    switch (f.kind) {
        case FunctorKind::Sym:
        case FunctorKind::Div: return binomial(r + f.degree - 1, f.degree);
        case FunctorKind::Ext: return binomial(r, f.degree);
        default: {
            Int v = 1;
            for (int i = 0; i < f.degree; ++i) v *= r;
            return v;
        }
    }
}

inline int functor_rank(const FunctorDescriptor& f, int r) {
    Int v = functor_rank_big(f, r);
    if (v > std::numeric_limits<int>::max()) throw std::overflow_error("functor_rank overflow");
    return static_cast<int>(v);
}

namespace detail {

/* start and advance for the lexicographic tuple enumeration behind
 * functor_basis; lets big bases stream without materializing */
inline bool first_basis_tuple(const FunctorDescriptor& f, int r, std::vector<int>& t) {
    if (r <= 0) return false;
    if (f.kind == FunctorKind::Ext && r < f.degree) return false;
    t.assign(f.degree, 0);
    if (f.kind == FunctorKind::Ext)
        for (int i = 0; i < f.degree; ++i) t[i] = i;
    return true;
}

inline bool next_basis_tuple(const FunctorDescriptor& f, int r, std::vector<int>& t) {
    int d = f.degree;
    int p = d - 1;
    if (f.kind == FunctorKind::Tensor) {
        while (p >= 0 && t[p] == r - 1) --p;
        if (p < 0) return false;
        ++t[p];
        for (int q = p + 1; q < d; ++q) t[q] = 0;
    } else if (f.kind == FunctorKind::Ext) {
        while (p >= 0 && t[p] == r - d + p) --p;
        if (p < 0) return false;
        ++t[p];
        for (int q = p + 1; q < d; ++q) t[q] = t[q - 1] + 1;
    } else {
        while (p >= 0 && t[p] == r - 1) --p;
        if (p < 0) return false;
        ++t[p];
        for (int q = p + 1; q < d; ++q) t[q] = t[p];
    }
    return true;
}

}  // namespace detail

/* canonical monomial basis of F(Z^r), each element an index tuple of length
 * degree, in lexicographic order. sym and div use non-decreasing tuples, ext
 * strictly increasing, tensor all tuples. */
inline std::vector<std::vector<int>> functor_basis(const FunctorDescriptor& f, int r) {
    std::vector<std::vector<int>> out;
    std::vector<int> t;
    if (!detail::first_basis_tuple(f, r, t)) return out;
    do out.push_back(t);
    while (detail::next_basis_tuple(f, r, t));
    return out;
}

namespace detail {

/* raw tensor expansion of (x)_k a(e_{cols[k]}) into the full tuple basis */
inline void expand_tensor_column(const IntMatrix& a, const std::vector<int>& cols,
                                 std::map<std::vector<int>, Int>& out) {
    int d = static_cast<int>(cols.size());
    std::vector<int> t(d);
    std::function<void(int, const Int&)> rec = [&](int k, const Int& c) {
        if (k == d) {
            out[t] += c;
            return;
        }
        for (int i = 0; i < a.rows; ++i) {
            const Int& w = a.at(i, cols[k]);
            if (w == 0) continue;
            t[k] = i;
            rec(k + 1, c * w);
        }
    };
    rec(0, 1);
}

inline void prune_zeros(std::map<std::vector<int>, Int>& m) {
    for (auto it = m.begin(); it != m.end();)
        it = (it->second == 0) ? m.erase(it) : std::next(it);
}

}  // namespace detail

/* column of F(a) over the source basis element src, as a sparse map from
 * target basis tuples to coefficients. div is computed as the restriction of
 * the degree-th tensor power to the multiset indicator vectors, so everything
 * stays integral. */
inline std::map<std::vector<int>, Int> functor_column(const FunctorDescriptor& f,
                                                      const IntMatrix& a,
                                                      const std::vector<int>& src) {
    std::map<std::vector<int>, Int> acc;
    int d = f.degree;
    if (f.kind == FunctorKind::Sym || f.kind == FunctorKind::Ext) {
        acc[{}] = 1;
        for (int k = 0; k < d; ++k) {
            std::map<std::vector<int>, Int> next;
            for (const auto& [t, c] : acc) {
                for (int i = 0; i < a.rows; ++i) {
                    const Int& w = a.at(i, src[k]);
                    if (w == 0) continue;
                    if (f.kind == FunctorKind::Sym) {
                        std::vector<int> t2 = t;
                        t2.insert(std::upper_bound(t2.begin(), t2.end(), i), i);
                        next[t2] += c * w;
                    } else {
                        if (std::binary_search(t.begin(), t.end(), i)) continue;
                        int greater = static_cast<int>(
                            t.end() - std::upper_bound(t.begin(), t.end(), i));
                        std::vector<int> t2 = t;
                        t2.insert(std::upper_bound(t2.begin(), t2.end(), i), i);
                        Int v = c * w;
                        if (greater % 2) v = -v;
                        next[t2] += v;
                    }
                }
            }
            acc = std::move(next);
        }
    } else if (f.kind == FunctorKind::Tensor) {
        detail::expand_tensor_column(a, src, acc);
    } else {
        /* image of the indicator vector of the multiset src under a^(x)d */
        std::map<std::vector<int>, Int> raw;
        std::vector<int> perm = src;
        do {
            detail::expand_tensor_column(a, perm, raw);
        } while (std::next_permutation(perm.begin(), perm.end()));
        /* read coefficients off the non-decreasing representatives */
        for (auto& [t, c] : raw)
            if (std::is_sorted(t.begin(), t.end())) acc[t] = c;
    }
    detail::prune_zeros(acc);
    return acc;
}

inline IntMatrix functor_on_map(const FunctorDescriptor& f, const IntMatrix& a) {
    std::vector<std::vector<int>> src = functor_basis(f, a.cols);
    std::vector<std::vector<int>> dst = functor_basis(f, a.rows);
    std::map<std::vector<int>, int> dst_index;
    for (int i = 0; i < static_cast<int>(dst.size()); ++i) dst_index[dst[i]] = i;
    IntMatrix m(static_cast<int>(dst.size()), static_cast<int>(src.size()));
    for (int j = 0; j < m.cols; ++j)
        for (const auto& [t, c] : functor_column(f, a, src[j])) m.at(dst_index.at(t), j) = c;
    return m;
}

namespace detail {

/* block index of an ambient coordinate, given block sizes */
inline std::vector<int> block_starts(const std::vector<int>& ranks) {
    std::vector<int> s(ranks.size() + 1, 0);
    for (size_t i = 0; i < ranks.size(); ++i) s[i + 1] = s[i] + ranks[i];
    return s;
}

inline int block_of(const std::vector<int>& starts, int coord) {
    int b = 0;
    while (coord >= starts[b + 1]) ++b;
    return b;
}

/* bitmask of blocks touched by a tuple */
inline unsigned coverage_mask(const std::vector<int>& starts, const std::vector<int>& t) {
    unsigned m = 0;
    for (int x : t) m |= 1u << block_of(starts, x);
    return m;
}

}  // namespace detail

/* the idempotent sum_{S subset of blocks} (-1)^{n-|S|} F(e_S) on F(Z^{sum r_i});
 * coordinate idempotents make every summand diagonal, so the sum is assembled
 * entrywise and idempotency reduces to each diagonal entry being 0 or 1 */
inline IntMatrix cross_idempotent(const FunctorDescriptor& f, const std::vector<int>& ranks) {
    int n = static_cast<int>(ranks.size());
    if (n < 1) throw std::invalid_argument("cross_idempotent: need at least one block");
    auto starts = detail::block_starts(ranks);
    int total = starts[n];
    auto basis = functor_basis(f, total);
    int amb = static_cast<int>(basis.size());
    IntMatrix e(amb, amb);
    for (int i = 0; i < amb; ++i) {
        unsigned cov = detail::coverage_mask(starts, basis[i]);
        Int v = 0;
        for (unsigned s = 0; s < (1u << n); ++s) {
            /* F(e_S) has diagonal entry 1 iff every index lies in an S-block */
            if ((cov & ~s) != 0) continue;
            int sign = (n - __builtin_popcount(s)) % 2 ? -1 : 1;
            v += sign;
        }
        if (v != 0 && v != 1) throw std::logic_error("cross_idempotent: not idempotent");
        e.at(i, i) = v;
    }
    return e;
}

/* image of the cross-effect idempotent with a canonical coordinate basis */
struct CrossEffectSpace {
    std::vector<int> argument_ranks;
    int ambient_rank = 0;
    IntMatrix inclusion{0, 0};
    IntMatrix projection{0, 0};

    int rank() const { return inclusion.cols; }
};

inline CrossEffectSpace cross_effect_space(const FunctorDescriptor& f,
                                           const std::vector<int>& ranks) {
    IntMatrix e = cross_idempotent(f, ranks);
    SplitIdempotent s = idempotent_split(e);
    CrossEffectSpace c;
    c.argument_ranks = ranks;
    c.ambient_rank = e.rows;
    c.inclusion = std::move(s.inclusion);
    c.projection = std::move(s.projection);
    return c;
}

/* projection . F(blockdiag maps) . inclusion, computed columnwise on the kept
 * monomials only. Block-diagonal maps preserve coverage, so entries outside
 * the target cross effect must vanish; that compatibility is asserted. */
/* restriction of F(big) to the cross effects of the two block structures;
 * big must carry covering monomials to covering monomials */
inline IntMatrix cross_effect_on_ambient(const FunctorDescriptor& f,
                                         const std::vector<int>& sources,
                                         const std::vector<int>& targets,
                                         const IntMatrix& big) {
    auto src_starts = detail::block_starts(sources);
    auto dst_starts = detail::block_starts(targets);
    if (big.cols != src_starts.back() || big.rows != dst_starts.back())
        throw std::invalid_argument("cross_effect_on_ambient: ambient shape mismatch");
    unsigned src_full = (sources.size() >= 32) ? ~0u : ((1u << sources.size()) - 1);
    unsigned dst_full = (targets.size() >= 32) ? ~0u : ((1u << targets.size()) - 1);

    std::vector<std::vector<int>> kept_src;
    for (const auto& t : functor_basis(f, big.cols))
        if (detail::coverage_mask(src_starts, t) == src_full) kept_src.push_back(t);
    std::map<std::vector<int>, int> kept_dst;
    for (const auto& t : functor_basis(f, big.rows))
        if (detail::coverage_mask(dst_starts, t) == dst_full) {
            int id = static_cast<int>(kept_dst.size());
            kept_dst[t] = id;
        }

    IntMatrix m(static_cast<int>(kept_dst.size()), static_cast<int>(kept_src.size()));
    for (int j = 0; j < m.cols; ++j) {
        for (const auto& [t, c] : functor_column(f, big, kept_src[j])) {
            auto it = kept_dst.find(t);
            if (it == kept_dst.end())
                throw std::logic_error("cross effect is not preserved by the map");
            m.at(it->second, j) = c;
        }
    }
    return m;
}

inline IntMatrix cross_effect_on_maps(const FunctorDescriptor& f, const std::vector<int>& sources,
                                      const std::vector<int>& targets,
                                      const std::vector<IntMatrix>& maps) {
    int n = static_cast<int>(sources.size());
    if (static_cast<int>(targets.size()) != n || static_cast<int>(maps.size()) != n)
        throw std::invalid_argument("cross_effect_on_maps: block count mismatch");
    for (int i = 0; i < n; ++i)
        if (maps[i].rows != targets[i] || maps[i].cols != sources[i])
            throw std::invalid_argument("cross_effect_on_maps: map shape mismatch");
    return cross_effect_on_ambient(f, sources, targets, block_diag(maps));
}

/* F(X1 + X2) splits into F(X1), F(X2) and the second cross effect; the three
 * inclusions must assemble to an isomorphism onto the ambient space */
inline CheckReport verify_decomposition(const FunctorDescriptor& f, int r1, int r2) {
    CheckReport rep;
    rep.check = "decomposition " + to_string(f) + " (" + std::to_string(r1) + "," +
                std::to_string(r2) + ")";
    IntMatrix i1(r1 + r2, r1), i2(r1 + r2, r2);
    place_block(i1, identity_matrix(r1), 0, 0);
    place_block(i2, identity_matrix(r2), r1, 0);
    IntMatrix f1 = functor_on_map(f, i1);
    IntMatrix f2 = functor_on_map(f, i2);
    CrossEffectSpace cr = cross_effect_space(f, {r1, r2});
    IntMatrix stacked = hstack(hstack(f1, f2), cr.inclusion);
    bool square = stacked.rows == stacked.cols;
    bool uni = square && (stacked.rows == 0 || is_unimodular(stacked));
    rep.pass = uni;
    rep.note("ambient", std::to_string(functor_rank(f, r1 + r2)));
    rep.note("part_1", std::to_string(f1.cols));
    rep.note("part_2", std::to_string(f2.cols));
    rep.note("cross", std::to_string(cr.rank()));
    rep.note("isomorphism", uni ? "yes" : "no");
    return rep;
}

namespace detail {

/* cross idempotent of the partially applied functor G(Y) = F_{n+1}(X..., Y)
 * with respect to a splitting of Y, realized inside the lumped cross effect */
inline IntMatrix partial_cross_idempotent(const FunctorDescriptor& f,
                                          const std::vector<int>& fixed,
                                          const std::vector<int>& var) {
    int n = static_cast<int>(fixed.size());
    int m = static_cast<int>(var.size());
    auto var_starts = block_starts(var);
    int v = var_starts[m];
    std::vector<int> lumped = fixed;
    lumped.push_back(v);
    IntMatrix acc;
    bool first = true;
    for (unsigned s = 0; s < (1u << m); ++s) {
        IntMatrix es(v, v);
        for (int b = 0; b < m; ++b)
            if (s & (1u << b))
                for (int k = var_starts[b]; k < var_starts[b + 1]; ++k) es.at(k, k) = 1;
        std::vector<IntMatrix> maps;
        for (int i = 0; i < n; ++i) maps.push_back(identity_matrix(fixed[i]));
        maps.push_back(es);
        IntMatrix ges = cross_effect_on_maps(f, lumped, lumped, maps);
        int sign = (m - __builtin_popcount(s)) % 2 ? -1 : 1;
        if (sign < 0) ges = neg(ges);
        if (first) {
            acc = std::move(ges);
            first = false;
        } else {
            acc = add(acc, ges);
        }
    }
    if (mul(acc, acc) != acc) throw std::logic_error("partial cross idempotent: not idempotent");
    return acc;
}

}  // namespace detail

/* The cross effects of the partially applied functor agree with the higher
 * cross effects of F itself, as subspaces and on maps. fixed_ranks are the
 * frozen arguments, var_ranks the ones being split. */
inline CheckReport verify_associativity(const FunctorDescriptor& f,
                                        const std::vector<int>& fixed_ranks,
                                        const std::vector<int>& var_ranks, Rng& rng) {
    CheckReport rep;
    rep.check = "associativity " + to_string(f);
    int n = static_cast<int>(fixed_ranks.size());
    int m = static_cast<int>(var_ranks.size());
    int v = 0;
    for (int r : var_ranks) v += r;

    std::vector<int> all = fixed_ranks;
    all.insert(all.end(), var_ranks.begin(), var_ranks.end());
    CrossEffectSpace direct = cross_effect_space(f, all);

    std::vector<int> lumped = fixed_ranks;
    lumped.push_back(v);
    CrossEffectSpace lump = cross_effect_space(f, lumped);
    IntMatrix gcr = detail::partial_cross_idempotent(f, fixed_ranks, var_ranks);
    SplitIdempotent gsplit = idempotent_split(gcr);

    bool rank_ok = gsplit.inclusion.cols == direct.rank();
    bool coords_ok = mul(lump.inclusion, gsplit.inclusion) == direct.inclusion;

    bool maps_ok = true;
    for (int trial = 0; trial < 5 && maps_ok; ++trial) {
        std::vector<IntMatrix> maps;
        for (int i = 0; i < n; ++i) maps.push_back(identity_matrix(fixed_ranks[i]));
        std::vector<IntMatrix> var_maps;
        for (int i = 0; i < m; ++i) {
            IntMatrix b(var_ranks[i], var_ranks[i]);
            for (auto& x : b.a) x = rng.range(-3, 3);
            var_maps.push_back(b);
        }
        std::vector<IntMatrix> lump_maps = maps;
        lump_maps.push_back(block_diag(var_maps));
        std::vector<IntMatrix> all_maps = maps;
        for (auto& b : var_maps) all_maps.push_back(b);

        IntMatrix on_lump = cross_effect_on_maps(f, lumped, lumped, lump_maps);
        IntMatrix lhs = mul(gsplit.projection, mul(on_lump, gsplit.inclusion));
        IntMatrix rhs = cross_effect_on_maps(f, all, all, all_maps);
        if (lhs != rhs) maps_ok = false;
    }

    rep.pass = rank_ok && coords_ok && maps_ok;
    rep.note("nested_rank", std::to_string(gsplit.inclusion.cols));
    rep.note("direct_rank", std::to_string(direct.rank()));
    rep.note("same_subspace", coords_ok ? "yes" : "no");
    rep.note("same_action", maps_ok ? "yes" : "no");
    return rep;
}

/* a functor of degree d has vanishing (d+1)-st cross effect */
inline CheckReport verify_degree(const FunctorDescriptor& f, const std::vector<int>& probe_ranks) {
    CheckReport rep;
    rep.check = "degree bound " + to_string(f);
    if (static_cast<int>(probe_ranks.size()) != f.degree + 1)
        throw std::invalid_argument("verify_degree: need degree+1 probe ranks");
    IntMatrix e = cross_idempotent(f, probe_ranks);
    rep.pass = e.is_zero();
    rep.note("probe_blocks", std::to_string(probe_ranks.size()));
    rep.note("idempotent_rank", std::to_string(rank(e)));
    return rep;
}

}  // namespace polyfun
