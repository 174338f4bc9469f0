#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polyfun/abelian.hpp"
#include "polyfun/complexes.hpp"
#include "polyfun/derived.hpp"
#include "polyfun/errors.hpp"
#include "polyfun/functors.hpp"
#include "polyfun/generators.hpp"
#include "polyfun/linalg.hpp"
#include "polyfun/matrix.hpp"
#include "polyfun/report.hpp"
#include "polyfun/rng.hpp"
#include "polyfun/simplicial.hpp"

namespace polyfun {

/* fold of coordinates i, i+1 (1-based slots): X^(n+1) -> X^n,
 * (x_1, ..., x_{n+1}) -> (x_1, ..., x_i + x_{i+1}, ..., x_{n+1}) */
inline IntMatrix delta_map(int n, int i, int rank_of_x) {
    if (n < 1 || i < 1 || i > n) throw std::invalid_argument("delta_map: need 1 <= i <= n");
    int r = rank_of_x;
    IntMatrix m(n * r, (n + 1) * r);
    for (int s = 1; s <= n + 1; ++s) {
        int t = (s <= i) ? s : s - 1;
        for (int k = 0; k < r; ++k) m.at((t - 1) * r + k, (s - 1) * r + k) = 1;
    }
    return m;
}

namespace detail {

/* ambient fold on X^n + Y: slots i, i+1 merge for i < n; the last fold sends
 * (x_1, ..., x_n, y) to (x_1, ..., x_{n-1}, u(x_n) + y) */
inline IntMatrix top_fold(int n, int i, const IntMatrix& u) {
    int rx = u.cols, ry = u.rows;
    if (i < n) return block_diag(delta_map(n - 1, i, rx), identity_matrix(ry));
    IntMatrix m((n - 1) * rx + ry, n * rx + ry);
    for (int k = 0; k < (n - 1) * rx; ++k) m.at(k, k) = 1;
    place_block(m, u, (n - 1) * rx, (n - 1) * rx);
    for (int k = 0; k < ry; ++k) m.at((n - 1) * rx + k, n * rx + k) = 1;
    return m;
}

inline int snf_free_rank(const SnfDecomposition& s) {
    int r = 0;
    int lim = std::min(s.d.rows, s.d.cols);
    for (int i = 0; i < lim; ++i)
        if (s.d.at(i, i) != 0) ++r;
    return r;
}

/* cokernel projection of a split injection with free cokernel; throws when
 * the map is not injective or the cokernel has torsion */
inline IntMatrix split_cokernel(const IntMatrix& u, const char* who) {
    SnfDecomposition s = smith_normal_form(u);
    int rank = snf_free_rank(s);
    bool split = rank == u.cols;
    for (int i = 0; i < rank && split; ++i)
        if (s.d.at(i, i) != 1) split = false;
    if (!split) throw std::invalid_argument(std::string(who) + ": injection must be split with free cokernel");
    return submatrix(s.u, u.cols, 0, u.rows - u.cols, u.rows);
}

}  // namespace detail

/* two-row grid for F of degree d and a split injection u : X -> Y with free
 * cokernel Z. Column n = 0..d-1 holds bottom[n] = F_{n+1}(X,..,X) and
 * top[n] = F_{n+1}(X,..,X,Y); top_h/bottom_h send column n to n-1 (index 0
 * unused), vertical[n] goes bottom[n] -> top[n], and the augmentation
 * F(Y) -> F(Z) hangs off top[0]. */
struct KoeckGrid {
    FunctorDescriptor functor;
    IntMatrix injection{0, 0};
    IntMatrix quotient{0, 0};
    std::vector<CrossEffectSpace> top;
    std::vector<CrossEffectSpace> bottom;
    std::vector<IntMatrix> top_h;
    std::vector<IntMatrix> bottom_h;
    std::vector<IntMatrix> vertical;
    IntMatrix augmentation{0, 0};
};

inline KoeckGrid build_koeck(const FunctorDescriptor& f, const IntMatrix& u) {
    int rx = u.cols, ry = u.rows;
    IntMatrix proj = detail::split_cokernel(u, "build_koeck");

    KoeckGrid g;
    g.functor = f;
    g.injection = u;
    g.quotient = proj;
    int d = f.degree;
    for (int n = 0; n < d; ++n) {
        std::vector<int> top_args(n, rx);
        top_args.push_back(ry);
        g.top.push_back(cross_effect_space(f, top_args));
        g.bottom.push_back(cross_effect_space(f, std::vector<int>(n + 1, rx)));
    }
    g.top_h.resize(d, IntMatrix(0, 0));
    g.bottom_h.resize(d, IntMatrix(0, 0));
    for (int n = 1; n < d; ++n) {
        std::vector<int> tsrc(n, rx), tdst(n - 1, rx);
        tsrc.push_back(ry);
        tdst.push_back(ry);
        IntMatrix th(g.top[n - 1].rank(), g.top[n].rank());
        for (int i = 1; i <= n; ++i) {
            IntMatrix part = cross_effect_on_ambient(f, tsrc, tdst, detail::top_fold(n, i, u));
            th = (i % 2 == 1) ? sub(th, part) : add(th, part);
        }
        g.top_h[n] = std::move(th);

        std::vector<int> bsrc(n + 1, rx), bdst(n, rx);
        IntMatrix bh(g.bottom[n - 1].rank(), g.bottom[n].rank());
        for (int i = 1; i <= n; ++i) {
            IntMatrix part = cross_effect_on_ambient(f, bsrc, bdst, delta_map(n, i, rx));
            bh = (i % 2 == 1) ? sub(bh, part) : add(bh, part);
        }
        g.bottom_h[n] = std::move(bh);
    }
    for (int n = 0; n < d; ++n) {
        std::vector<int> srcs(n + 1, rx);
        std::vector<int> dsts(n, rx);
        dsts.push_back(ry);
        std::vector<IntMatrix> maps(n, identity_matrix(rx));
        maps.push_back(u);
        g.vertical.push_back(cross_effect_on_maps(f, srcs, dsts, maps));
    }
    g.augmentation = functor_on_map(f, proj);

    for (int n = 2; n < d; ++n) {
        if (!mul(g.top_h[n - 1], g.top_h[n]).is_zero())
            throw std::logic_error("build_koeck: top row is not a complex");
        if (!mul(g.bottom_h[n - 1], g.bottom_h[n]).is_zero())
            throw std::logic_error("build_koeck: bottom row is not a complex");
    }
    for (int n = 1; n < d; ++n)
        if (!(mul(g.top_h[n], g.vertical[n]) == mul(g.vertical[n - 1], g.bottom_h[n])))
            throw std::logic_error("build_koeck: squares do not commute");
    if (d >= 2 && !mul(g.augmentation, g.top_h[1]).is_zero())
        throw std::logic_error("build_koeck: augmentation does not kill the first fold");
    if (!mul(g.augmentation, g.vertical[0]).is_zero())
        throw std::logic_error("build_koeck: augmentation does not kill F(X)");
    return g;
}

/* collapse the grid to a single complex: top[n] lands in degree n, bottom[n]
 * one above it, the vertical maps pick up a sign on odd columns. With
 * augmented set, everything shifts up by one and F(Z) sits in degree 0. */
inline FreeChainComplex total_complex(const KoeckGrid& g, bool augmented) {
    int d = g.functor.degree;
    int shift = augmented ? 1 : 0;
    int fz = functor_rank(g.functor, g.quotient.rows);
    auto top_rank = [&](int n) { return (n >= 0 && n < d) ? g.top[n].rank() : 0; };
    auto bot_rank = [&](int n) { return (n >= 0 && n < d) ? g.bottom[n].rank() : 0; };

    FreeChainComplex c;
    c.top = d + shift;
    c.ranks.assign(c.top + 1, 0);
    for (int t = 0; t <= c.top; ++t) {
        c.ranks[t] = top_rank(t - shift) + bot_rank(t - 1 - shift);
        if (augmented && t == 0) c.ranks[t] += fz;
    }
    c.diffs.clear();
    for (int t = 1; t <= c.top; ++t) {
        IntMatrix m(c.ranks[t - 1], c.ranks[t]);
        int row0 = (augmented && t == 1) ? fz : 0;
        int nt = t - shift;
        int nb = t - 1 - shift;
        int col_top = top_rank(nt);
        if (nt >= 1 && nt < d) place_block(m, g.top_h[nt], row0, 0);
        if (nb >= 0 && nb < d) {
            IntMatrix v = (nb % 2 == 1) ? neg(g.vertical[nb]) : g.vertical[nb];
            place_block(m, v, row0, col_top);
        }
        if (nb >= 1 && nb < d)
            place_block(m, g.bottom_h[nb], row0 + top_rank(nt - 1), col_top);
        if (augmented && t == 1) place_block(m, g.augmentation, 0, 0);
        c.diffs.push_back(std::move(m));
    }
    validate_complex(c);
    return c;
}

/* the augmented total complex resolves F(Z); reports any surviving homology */
inline CheckReport check_koeck_resolution(const FunctorDescriptor& f, const IntMatrix& u) {
    CheckReport rep;
    rep.check = "koeck_resolution";
    KoeckGrid g = build_koeck(f, u);
    FreeChainComplex c = total_complex(g, true);
    rep.pass = true;
    for (int i = 0; i <= c.top; ++i) {
        FgAbGroup h = homology(c, i);
        if (!h.is_trivial()) {
            rep.pass = false;
            rep.note("H_" + std::to_string(i), to_string(h));
        }
    }
    return rep;
}

/* levelwise split injection of truncated simplicial free modules */
struct SimplicialInjection {
    SimplicialModule sub;
    SimplicialModule total;
    std::vector<IntMatrix> inclusion;
};

/* levelwise cokernel with its induced faces and degeneracies; the inclusion
 * must commute with both and be levelwise split with free cokernel */
inline SimplicialModule quotient_simplicial(const SimplicialInjection& inj,
                                            std::vector<IntMatrix>* projections = nullptr) {
    const SimplicialModule& x = inj.sub;
    const SimplicialModule& y = inj.total;
    if (x.cap != y.cap || static_cast<int>(inj.inclusion.size()) != x.cap + 1)
        throw std::invalid_argument("quotient_simplicial: level mismatch");
    int cap = x.cap;
    std::vector<IntMatrix> proj(cap + 1), sect(cap + 1);
    SimplicialModule p;
    p.cap = cap;
    p.ranks.assign(cap + 1, 0);
    for (int n = 0; n <= cap; ++n) {
        const IntMatrix& inc = inj.inclusion[n];
        if (inc.rows != y.ranks[n] || inc.cols != x.ranks[n])
            throw std::invalid_argument("quotient_simplicial: inclusion shape mismatch");
        proj[n] = detail::split_cokernel(inc, "quotient_simplicial");
        auto sec = solve_exact(proj[n], identity_matrix(proj[n].rows));
        if (!sec) throw std::logic_error("quotient_simplicial: projection has no section");
        sect[n] = std::move(*sec);
        p.ranks[n] = proj[n].rows;
    }
    p.faces.resize(cap);
    p.degens.resize(cap);
    for (int n = 1; n <= cap; ++n)
        for (int i = 0; i <= n; ++i) {
            if (!(mul(y.face(n, i), inj.inclusion[n]) == mul(inj.inclusion[n - 1], x.face(n, i))))
                throw std::invalid_argument("quotient_simplicial: inclusion does not commute with faces");
            p.faces[n - 1].push_back(mul(proj[n - 1], mul(y.face(n, i), sect[n])));
        }
    for (int n = 0; n < cap; ++n)
        for (int i = 0; i <= n; ++i) {
            if (!(mul(y.degen(n, i), inj.inclusion[n]) == mul(inj.inclusion[n + 1], x.degen(n, i))))
                throw std::invalid_argument("quotient_simplicial: inclusion does not commute with degeneracies");
            p.degens[n].push_back(mul(proj[n + 1], mul(y.degen(n, i), sect[n])));
        }
    validate_simplicial(p);
    if (projections) *projections = std::move(proj);
    return p;
}

namespace detail {

inline int kept_rank(const FunctorDescriptor& f, const std::vector<int>& ranks) {
    auto starts = block_starts(ranks);
    unsigned full = (ranks.size() >= 32) ? ~0u : ((1u << ranks.size()) - 1);
    int c = 0;
    for (const auto& t : functor_basis(f, starts.back()))
        if (coverage_mask(starts, t) == full) ++c;
    return c;
}

/* F_n applied levelwise, the first n-1 slots carrying xs and the last one
 * carrying `last` */
inline SimplicialModule cross_effect_simplicial(const FunctorDescriptor& f, int n,
                                                const SimplicialModule& xs,
                                                const SimplicialModule& last) {
    int cap = xs.cap;
    auto args = [&](int m) {
        std::vector<int> v(n - 1, xs.ranks[m]);
        v.push_back(last.ranks[m]);
        return v;
    };
    auto maps = [&](const IntMatrix& on_x, const IntMatrix& on_last) {
        std::vector<IntMatrix> v(n - 1, on_x);
        v.push_back(on_last);
        return v;
    };
    SimplicialModule s;
    s.cap = cap;
    s.ranks.assign(cap + 1, 0);
    for (int m = 0; m <= cap; ++m) s.ranks[m] = kept_rank(f, args(m));
    s.faces.resize(cap);
    s.degens.resize(cap);
    for (int m = 1; m <= cap; ++m)
        for (int i = 0; i <= m; ++i)
            s.faces[m - 1].push_back(cross_effect_on_maps(
                f, args(m), args(m - 1), maps(xs.face(m, i), last.face(m, i))));
    for (int m = 0; m < cap; ++m)
        for (int i = 0; i <= m; ++i)
            s.degens[m].push_back(cross_effect_on_maps(
                f, args(m), args(m + 1), maps(xs.degen(m, i), last.degen(m, i))));
    validate_simplicial(s);
    return s;
}

inline Rat chi_value(const std::vector<FgAbGroup>& hs, Setting setting) {
    if (setting == Setting::FIN)
        for (const auto& h : hs)
            if (!h.is_finite()) throw SettingError("chi: infinite homology in FIN");
    return k0_value(euler_class(hs), setting);
}

/* Euler characteristic of a truncated simplicial module, trusted only when
 * homology has already died below the truncation level */
inline Rat chi_truncated(const SimplicialModule& s, Setting setting) {
    FreeChainComplex c = associated_complex(s);
    std::vector<FgAbGroup> hs;
    for (int i = 0; i < s.cap; ++i) hs.push_back(homology(c, i));
    if (!hs.empty() && !hs.back().is_trivial())
        throw std::invalid_argument("chi_truncated: homology still alive at the truncation level");
    return chi_value(hs, setting);
}

inline std::string rat_str(const Rat& r) { return r.str(); }

}  // namespace detail

/* chi(F(P)) against the alternating cross-effect sum over the levelwise
 * split exact sequence X -> Y -> P; multiplicative in FIN, additive in FG */
inline CheckReport chi_formula_check(const FunctorDescriptor& f, const SimplicialInjection& inj,
                                     Setting setting) {
    CheckReport rep;
    rep.check = "chi_formula";
    SimplicialModule p = quotient_simplicial(inj);
    Rat lhs = detail::chi_truncated(apply_functor(f, p), setting);
    Rat rhs = (setting == Setting::FIN) ? Rat(1) : Rat(0);
    for (int n = 1; n <= f.degree; ++n) {
        Rat ax = detail::chi_truncated(detail::cross_effect_simplicial(f, n, inj.sub, inj.sub), setting);
        Rat ay = detail::chi_truncated(detail::cross_effect_simplicial(f, n, inj.sub, inj.total), setting);
        if (setting == Setting::FIN) {
            Rat term = ax / ay;
            rhs = (n % 2 == 1) ? Rat(rhs / term) : Rat(rhs * term);
        } else {
            Rat term = ax - ay;
            rhs = (n % 2 == 1) ? Rat(rhs - term) : Rat(rhs + term);
        }
        rep.note("term_" + std::to_string(n),
                 detail::rat_str(ax) + " vs " + detail::rat_str(ay));
    }
    rep.pass = (lhs == rhs);
    rep.note("lhs", detail::rat_str(lhs));
    rep.note("rhs", detail::rat_str(rhs));
    return rep;
}

struct EulerMapRequest {
    FunctorDescriptor functor;
    Setting setting = Setting::FG;
    Rat k0_input = 1;
};

namespace detail {

inline PresentedGroup cyclic_group(const Int& m) {
    if (m == 1) return trivial_group();
    IntMatrix rels(1, 1);
    rels.at(0, 0) = m;
    return PresentedGroup{1, rels};
}

inline PresentedGroup free_group(int n) { return PresentedGroup{n, IntMatrix(n, 0)}; }

/* canonical representative of a class: a/b becomes Z/a in degree 0 plus Z/b
 * in degree 1, an integer n becomes Z^|n| in degree 0 or 1 by sign */
inline GenChainComplex k0_representative(const Rat& x, Setting setting) {
    GenChainComplex c;
    if (setting == Setting::FIN) {
        if (x <= 0) throw SettingError("euler_map: FIN class must be positive");
        Int a = numerator(x), b = denominator(x);
        if (b > 1) {
            c.top = 1;
            c.groups = {cyclic_group(a), cyclic_group(b)};
            c.maps = {IntMatrix(c.groups[0].gens, c.groups[1].gens)};
        } else if (a > 1) {
            c.top = 0;
            c.groups = {cyclic_group(a)};
        }
        return c;
    }
    if (denominator(x) != 1) throw SettingError("euler_map: FG class must be an integer");
    Int n = numerator(x);
    if (n > 0) {
        c.top = 0;
        c.groups = {free_group(static_cast<int>(n))};
    } else if (n < 0) {
        c.top = 1;
        c.groups = {trivial_group(), free_group(static_cast<int>(-n))};
        c.maps = {IntMatrix(0, static_cast<int>(-n))};
    }
    return c;
}

}  // namespace detail

/* image of a K0 class under x -> chi(LF of a representative) */
inline Rat euler_map(const EulerMapRequest& req) {
    GenChainComplex rep = detail::k0_representative(req.k0_input, req.setting);
    DerivedRequest dr;
    dr.functor = req.functor;
    dr.input = rep;
    dr.max_degree = req.functor.degree * (rep.top + 1) + 1;
    dr.setting = req.setting;
    return detail::chi_value(derived_functor(dr), req.setting);
}

namespace detail {

inline Int random_divisor(Rng& rng, const Int& a) {
    std::vector<Int> divs;
    for (Int i = 1; i * i <= a; ++i)
        if (a % i == 0) {
            divs.push_back(i);
            divs.push_back(a / i);
        }
    return divs[rng.range(0, static_cast<int>(divs.size()) - 1)];
}

inline GenChainComplex gen_direct_sum(const GenChainComplex& x, const GenChainComplex& y) {
    GenChainComplex s;
    s.top = std::max(x.top, y.top);
    s.groups.clear();
    for (int i = 0; i <= s.top; ++i) {
        PresentedGroup g;
        g.gens = x.gens_at(i) + y.gens_at(i);
        g.rels = block_diag(x.rels_at(i), y.rels_at(i));
        s.groups.push_back(std::move(g));
    }
    for (int i = 0; i < s.top; ++i) s.maps.push_back(block_diag(x.map_at(i), y.map_at(i)));
    return s;
}

/* acyclic two-term piece Z/m --id--> Z/m at degrees j+1, j */
inline GenChainComplex cyclic_cone(const Int& m, int j) {
    GenChainComplex c;
    c.top = j + 1;
    c.groups.assign(j + 2, trivial_group());
    c.groups[j] = cyclic_group(m);
    c.groups[j + 1] = cyclic_group(m);
    c.maps.assign(j + 1, IntMatrix(0, 0));
    for (int i = 0; i < c.top; ++i) c.maps[i] = IntMatrix(c.groups[i].gens, c.groups[i + 1].gens);
    c.maps[j] = identity_matrix(1);
    return c;
}

/* same quotients in scrambled coordinates: unimodular generator changes plus
 * a redundant generator on each nontrivial cyclic summand */
inline GenChainComplex scramble_presentation(Rng& rng, const GenChainComplex& c) {
    GenChainComplex out = c;
    for (int i = 0; i <= out.top; ++i) {
        PresentedGroup& g = out.groups[i];
        if (g.gens == 0) continue;
        auto [w, winv] = rand_unimodular(rng, g.gens);
        g.rels = mul(w, g.rels);
        if (i < out.top) out.maps[i] = mul(w, out.maps[i]);
        if (i > 0) out.maps[i - 1] = mul(out.maps[i - 1], winv);
    }
    return out;
}

}  // namespace detail

/* two structurally different representatives of the same class must land on
 * the same value under the Euler map */
inline CheckReport well_definedness_trial(const FunctorDescriptor& f, Setting setting,
                                          const Rat& cls, uint64_t seed) {
    CheckReport rep;
    rep.check = "well_definedness";
    Rng rng(seed);
    GenChainComplex alt;
    if (setting == Setting::FIN) {
        if (cls <= 0) throw SettingError("well_definedness_trial: FIN class must be positive");
        Int a = numerator(cls), b = denominator(cls);
        Int a1 = detail::random_divisor(rng, a);
        Int b1 = detail::random_divisor(rng, b);
        alt.top = 1;
        alt.groups = {detail::cyclic_group(a1), detail::cyclic_group(b1)};
        alt.maps = {IntMatrix(alt.groups[0].gens, alt.groups[1].gens)};
        alt = detail::gen_direct_sum(alt, [&] {
            GenChainComplex rest;
            rest.top = 1;
            rest.groups = {detail::cyclic_group(a / a1), detail::cyclic_group(b / b1)};
            rest.maps = {IntMatrix(rest.groups[0].gens, rest.groups[1].gens)};
            return rest;
        }());
        int j = (f.degree >= 3) ? 0 : rng.range(0, 1);
        alt = detail::gen_direct_sum(alt, detail::cyclic_cone(rng.range(2, 6), j));
    } else {
        if (denominator(cls) != 1)
            throw SettingError("well_definedness_trial: FG class must be an integer");
        int n = static_cast<int>(numerator(cls));
        int j = std::max(0, -n) + rng.range(1, 2);
        alt.top = 1;
        alt.groups = {detail::free_group(n + j), detail::free_group(j)};
        alt.maps = {IntMatrix(n + j, j)};
    }
    alt = detail::scramble_presentation(rng, alt);

    Rat canonical = euler_map(EulerMapRequest{f, setting, cls});
    DerivedRequest dr;
    dr.functor = f;
    dr.input = alt;
    dr.max_degree = f.degree * (alt.top + 1) + 1;
    dr.setting = setting;
    Rat other = detail::chi_value(derived_functor(dr), setting);

    rep.pass = (canonical == other);
    rep.note("class", detail::rat_str(cls));
    rep.note("canonical", detail::rat_str(canonical));
    rep.note("alternative", detail::rat_str(other));
    return rep;
}

/* the (d+1)-st cross difference of the Euler map vanishes: additively over
 * subset sums in FG, multiplicatively over subset products in FIN */
inline CheckReport degree_of_f_check(const FunctorDescriptor& f, Setting setting,
                                     const std::vector<Rat>& points, uint64_t seed) {
    CheckReport rep;
    rep.check = "degree_bound";
    int n = f.degree + 1;
    if (static_cast<int>(points.size()) < n)
        throw std::invalid_argument("degree_of_f_check: need at least degree+1 points");
    Rng rng(seed);
    std::vector<Rat> pts = points;
    for (int i = static_cast<int>(pts.size()) - 1; i > 0; --i)
        std::swap(pts[i], pts[rng.range(0, i)]);
    pts.resize(n);

    bool fin = setting == Setting::FIN;
    Rat acc = fin ? Rat(1) : Rat(0);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        Rat x = fin ? Rat(1) : Rat(0);
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) x = fin ? Rat(x * pts[i]) : Rat(x + pts[i]);
        Rat val = euler_map(EulerMapRequest{f, setting, x});
        bool plus = (n - std::popcount(mask)) % 2 == 0;
        if (fin)
            acc = plus ? Rat(acc * val) : Rat(acc / val);
        else
            acc = plus ? Rat(acc + val) : Rat(acc - val);
        rep.note("f(" + detail::rat_str(x) + ")", detail::rat_str(val));
    }
    rep.pass = fin ? (acc == 1) : (acc == 0);
    rep.note("cross_difference", detail::rat_str(acc));
    return rep;
}

}  // namespace polyfun
