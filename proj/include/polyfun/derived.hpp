#pragma once

#include <map>
#include <utility>
#include <vector>

#include "polyfun/errors.hpp"
#include "polyfun/report.hpp"
#include "polyfun/simplicial.hpp"

namespace polyfun {

struct DerivedRequest {
    FunctorDescriptor functor;
    GenChainComplex input;
    int max_degree = 0;
    Setting setting = Setting::FG;
};

namespace detail {

constexpr long long kMonomialBudget = 3000000;

/* monomials of one level whose summand coverage hits every position; these
 * span the quotient by degenerate monomials, which has the homology of the
 * full associated complex */
struct KeptLevel {
    std::vector<std::vector<int>> monos;
    std::map<std::vector<int>, int> index;
};

inline KeptLevel kept_level(const FunctorDescriptor& f, const GammaLevel& l, int n) {
    KeptLevel out;
    unsigned full = (n >= 1) ? ((1u << n) - 1) : 0u;
    std::vector<unsigned> vmask(l.rank, 0u);
    for (size_t s = 0; s < l.summands.size(); ++s)
        for (int v = l.offsets[s]; v < l.offsets[s + 1]; ++v)
            vmask[v] = l.summands[s].ascent_mask;
    std::vector<int> t;
    if (!first_basis_tuple(f, l.rank, t)) return out;
    do {
        unsigned cover = 0;
        for (int v : t) cover |= vmask[v];
        if (cover == full) {
            out.index.emplace(t, static_cast<int>(out.monos.size()));
            out.monos.push_back(t);
        }
    } while (next_basis_tuple(f, l.rank, t));
    return out;
}

}  // namespace detail

/* chain complex computing LF of a free complex p: F is applied to the
 * Dold-Kan levels of p and degenerate monomials are quotiented away, leaving
 * the alternating face sum on covering monomials; homology is trusted in
 * degrees < cap */
inline FreeChainComplex functor_gamma_complex(const FunctorDescriptor& f,
                                              const FreeChainComplex& p, int cap) {
    using namespace detail;
    SimplicialModule g = dk_gamma(p, cap);
    std::vector<KeptLevel> kept(cap + 1);
    for (int n = 0; n <= cap; ++n) {
        GammaLevel l = gamma_level(p, n);
        if (functor_rank_big(f, l.rank) > kMonomialBudget)
            throw ResourceError("functor level exceeds the monomial budget");
        kept[n] = kept_level(f, l, n);
    }
    FreeChainComplex c;
    c.top = cap;
    c.ranks.assign(cap + 1, 0);
    for (int n = 0; n <= cap; ++n) c.ranks[n] = static_cast<int>(kept[n].monos.size());
    c.diffs.assign(cap, IntMatrix(0, 0));
    for (int n = 1; n <= cap; ++n) {
        IntMatrix m(c.ranks[n - 1], c.ranks[n]);
        for (int col = 0; col < c.ranks[n]; ++col) {
            std::map<std::vector<int>, Int> acc;
            for (int i = 0; i <= n; ++i) {
                auto part = functor_column(f, g.face(n, i), kept[n].monos[col]);
                for (auto& [t, v] : part) {
                    if (i % 2) acc[t] -= v;
                    else acc[t] += v;
                }
            }
            for (auto& [t, v] : acc) {
                if (v == 0) continue;
                auto it = kept[n - 1].index.find(t);
                if (it != kept[n - 1].index.end()) m.at(it->second, col) = v;
            }
        }
        c.diffs[n - 1] = std::move(m);
    }
    validate_complex(c);
    return c;
}

/* L_iF(input) for 0 <= i <= max_degree via a free resolution and the
 * Dold-Kan levels above; in FIN the input must have finite homology */
inline std::vector<FgAbGroup> derived_functor(const DerivedRequest& req) {
    if (req.max_degree < 0)
        throw std::invalid_argument("derived_functor: max_degree must be >= 0");
    if (req.setting == Setting::FIN)
        for (const FgAbGroup& h : homology_all(req.input))
            if (!h.is_finite())
                throw SettingError("derived_functor: infinite homology in FIN");
    FreeResolution res = free_resolution(req.input);
    FreeChainComplex k = functor_gamma_complex(req.functor, res.complex, req.max_degree + 1);
    std::vector<FgAbGroup> out;
    for (int i = 0; i <= req.max_degree; ++i) out.push_back(homology(k, i));
    int bound = req.functor.degree * res.complex.top;
    for (int i = bound + 1; i <= req.max_degree; ++i)
        if (!out[i].is_trivial())
            throw std::logic_error("derived_functor: homology beyond the degree bound");
    return out;
}

namespace detail {

/* functor_basis with the degree-0 case made explicit: a single empty tuple */
inline std::vector<std::vector<int>> graded_basis(FunctorKind k, int deg, int r) {
    if (deg == 0) return {{}};
    return functor_basis(FunctorDescriptor{k, deg}, r);
}

using PairKey = std::pair<std::vector<int>, std::vector<int>>;

inline std::map<PairKey, int> pair_index(const std::vector<std::vector<int>>& left,
                                         const std::vector<std::vector<int>>& right) {
    std::map<PairKey, int> out;
    int n = 0;
    for (const auto& a : left)
        for (const auto& b : right) out.emplace(PairKey{a, b}, n++);
    return out;
}

}  // namespace detail

/* Koszul-style complex with degree-i term Sym^{d-i}(P) (x) Ext^i(Q) and the
 * contraction differential along u: Q -> P */
inline FreeChainComplex koszul_sym(const IntMatrix& u, int d) {
    using namespace detail;
    int p = u.rows, q = u.cols;
    FreeChainComplex c;
    c.top = d;
    c.ranks.assign(d + 1, 0);
    std::vector<std::vector<std::vector<int>>> symb(d + 1), extb(d + 1);
    for (int i = 0; i <= d; ++i) {
        symb[i] = graded_basis(FunctorKind::Sym, d - i, p);
        extb[i] = graded_basis(FunctorKind::Ext, i, q);
        c.ranks[i] = static_cast<int>(symb[i].size() * extb[i].size());
    }
    c.diffs.assign(d, IntMatrix(0, 0));
    for (int i = 1; i <= d; ++i) {
        IntMatrix m(c.ranks[i - 1], c.ranks[i]);
        auto dst = pair_index(symb[i - 1], extb[i - 1]);
        int col = 0;
        for (const auto& x : symb[i])
            for (const auto& s : extb[i]) {
                for (size_t j = 0; j < s.size(); ++j) {
                    std::vector<int> s2 = s;
                    s2.erase(s2.begin() + j);
                    for (int b = 0; b < p; ++b) {
                        const Int& w = u.at(b, s[j]);
                        if (w == 0) continue;
                        std::vector<int> x2 = x;
                        x2.insert(std::upper_bound(x2.begin(), x2.end(), b), b);
                        Int v = (j % 2) ? -w : w;
                        m.at(dst.at({x2, s2}), col) += v;
                    }
                }
                ++col;
            }
        c.diffs[i - 1] = std::move(m);
    }
    validate_complex(c);
    return c;
}

/* Koszul-style complex with degree-i term Ext^{d-i}(P) (x) Div^i(Q); the
 * differential splits one divided power off and wedges its image under u */
inline FreeChainComplex koszul_ext(const IntMatrix& u, int d) {
    using namespace detail;
    int p = u.rows, q = u.cols;
    FreeChainComplex c;
    c.top = d;
    c.ranks.assign(d + 1, 0);
    std::vector<std::vector<std::vector<int>>> extb(d + 1), divb(d + 1);
    for (int i = 0; i <= d; ++i) {
        extb[i] = graded_basis(FunctorKind::Ext, d - i, p);
        divb[i] = graded_basis(FunctorKind::Div, i, q);
        c.ranks[i] = static_cast<int>(extb[i].size() * divb[i].size());
    }
    c.diffs.assign(d, IntMatrix(0, 0));
    for (int i = 1; i <= d; ++i) {
        IntMatrix m(c.ranks[i - 1], c.ranks[i]);
        auto dst = pair_index(extb[i - 1], divb[i - 1]);
        int col = 0;
        for (const auto& t : extb[i])
            for (const auto& e : divb[i]) {
                for (size_t j = 0; j < e.size(); ++j) {
                    if (j > 0 && e[j] == e[j - 1]) continue;
                    std::vector<int> e2 = e;
                    e2.erase(e2.begin() + j);
                    for (int b = 0; b < p; ++b) {
                        const Int& w = u.at(b, e[j]);
                        if (w == 0) continue;
                        if (std::binary_search(t.begin(), t.end(), b)) continue;
                        auto pos = std::lower_bound(t.begin(), t.end(), b);
                        std::vector<int> t2 = t;
                        t2.insert(std::upper_bound(t2.begin(), t2.end(), b), b);
                        Int v = ((pos - t.begin()) % 2) ? -w : w;
                        m.at(dst.at({t2, e2}), col) += v;
                    }
                }
                ++col;
            }
        c.diffs[i - 1] = std::move(m);
    }
    validate_complex(c);
    return c;
}

/* degreewise comparison of the derived pipeline against the matching Koszul
 * complex on the two-term input [Q --u--> P] */
inline CheckReport oracle_compare(FunctorKind kind, int d, const IntMatrix& u, int k) {
    if (kind != FunctorKind::Sym && kind != FunctorKind::Ext)
        throw std::invalid_argument("oracle_compare: kind must be sym or ext");
    FreeChainComplex two;
    two.top = 1;
    two.ranks = {u.rows, u.cols};
    two.diffs = {u};
    DerivedRequest req{FunctorDescriptor{kind, d}, free_to_gen(two), k, Setting::FG};
    std::vector<FgAbGroup> lhs = derived_functor(req);
    FreeChainComplex kz = (kind == FunctorKind::Sym) ? koszul_sym(u, d) : koszul_ext(u, d);
    CheckReport rep;
    rep.check = "oracle_compare " + to_string(FunctorDescriptor{kind, d});
    rep.pass = true;
    for (int i = 0; i <= k; ++i) {
        FgAbGroup rhs = homology(kz, i);
        rep.note("degree " + std::to_string(i),
                 to_string(lhs[i]) + " vs " + to_string(rhs));
        if (lhs[i] != rhs) rep.pass = false;
    }
    return rep;
}

}  // namespace polyfun
