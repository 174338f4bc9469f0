#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polyfun/abelian.hpp"
#include "polyfun/linalg.hpp"
#include "polyfun/matrix.hpp"

namespace polyfun {

/* Bounded complex of free groups in non-negative degrees.
 * ranks[i] is the rank in degree i (0 <= i <= top).
 * diffs[i] maps degree i+1 to degree i, shape ranks[i] x ranks[i+1]. */
struct FreeChainComplex {
    int top = 0;
    std::vector<int> ranks{0};
    std::vector<IntMatrix> diffs;

    int rank_at(int i) const {
        return (i >= 0 && i <= top) ? ranks[i] : 0;
    }
    IntMatrix diff_at(int i) const {
        if (i >= 0 && i < top) return diffs[i];
        return IntMatrix(rank_at(i), rank_at(i + 1));
    }
};

inline void validate_complex(const FreeChainComplex& c) {
    if (c.top < 0 || static_cast<int>(c.ranks.size()) != c.top + 1)
        throw std::invalid_argument("complex: ranks must cover degrees 0..top");
    if (static_cast<int>(c.diffs.size()) != c.top)
        throw std::invalid_argument("complex: need top differentials");
    for (int i = 0; i < c.top; ++i)
        if (c.diffs[i].rows != c.ranks[i] || c.diffs[i].cols != c.ranks[i + 1])
            throw std::invalid_argument("complex: differential shape mismatch");
    for (int i = 0; i + 1 < c.top; ++i)
        if (!mul(c.diffs[i], c.diffs[i + 1]).is_zero())
            throw std::invalid_argument("complex: d o d != 0");
}

inline FreeChainComplex zero_complex() { return FreeChainComplex{}; }

/* chain map between free complexes; comps[i]: source degree i -> target degree i */
struct ComplexMap {
    std::vector<IntMatrix> comps;

    IntMatrix comp_at(int i, const FreeChainComplex& src, const FreeChainComplex& dst) const {
        if (i >= 0 && i < static_cast<int>(comps.size())) return comps[i];
        return IntMatrix(dst.rank_at(i), src.rank_at(i));
    }
};

inline void validate_chain_map(const ComplexMap& f, const FreeChainComplex& x,
                               const FreeChainComplex& y) {
    int t = std::max(x.top, y.top);
    for (int i = 0; i <= t; ++i) {
        IntMatrix fi = f.comp_at(i, x, y);
        if (fi.rows != y.rank_at(i) || fi.cols != x.rank_at(i))
            throw std::invalid_argument("chain map: component shape mismatch");
    }
    for (int i = 0; i < t; ++i) {
        IntMatrix lhs = mul(y.diff_at(i), f.comp_at(i + 1, x, y));
        IntMatrix rhs = mul(f.comp_at(i, x, y), x.diff_at(i));
        if (lhs != rhs) throw std::invalid_argument("chain map: squares do not commute");
    }
}

/* group presented as coker(rels: Z^k -> Z^gens); relation vectors are columns */
struct PresentedGroup {
    int gens = 0;
    IntMatrix rels{0, 0};
};

inline PresentedGroup trivial_group() { return PresentedGroup{0, IntMatrix(0, 0)}; }

/* Bounded complex of presented groups. maps[i] sends degree i+1 to degree i
 * and is given on generators, shape gens_i x gens_{i+1}. */
struct GenChainComplex {
    int top = 0;
    std::vector<PresentedGroup> groups{trivial_group()};
    std::vector<IntMatrix> maps;

    int gens_at(int i) const {
        return (i >= 0 && i <= top) ? groups[i].gens : 0;
    }
    IntMatrix rels_at(int i) const {
        if (i >= 0 && i <= top) return groups[i].rels;
        return IntMatrix(0, 0);
    }
    IntMatrix map_at(int i) const {
        if (i >= 0 && i < top) return maps[i];
        return IntMatrix(gens_at(i), gens_at(i + 1));
    }
};

inline void validate_complex(const GenChainComplex& c) {
    if (c.top < 0 || static_cast<int>(c.groups.size()) != c.top + 1)
        throw std::invalid_argument("gen complex: groups must cover degrees 0..top");
    if (static_cast<int>(c.maps.size()) != c.top)
        throw std::invalid_argument("gen complex: need top maps");
    for (int i = 0; i <= c.top; ++i) {
        const auto& g = c.groups[i];
        if (g.gens < 0 || g.rels.rows != g.gens)
            throw std::invalid_argument("gen complex: relation matrix shape mismatch");
    }
    for (int i = 0; i < c.top; ++i) {
        if (c.maps[i].rows != c.groups[i].gens || c.maps[i].cols != c.groups[i + 1].gens)
            throw std::invalid_argument("gen complex: map shape mismatch");
        /* maps must send relations into relations */
        IntMatrix moved = mul(c.maps[i], c.groups[i + 1].rels);
        if (!solve_exact(c.groups[i].rels, moved))
            throw std::invalid_argument("gen complex: map does not respect relations");
    }
    for (int i = 0; i + 1 < c.top; ++i) {
        IntMatrix comp = mul(c.maps[i], c.maps[i + 1]);
        if (!solve_exact(c.groups[i].rels, comp))
            throw std::invalid_argument("gen complex: d o d != 0 modulo relations");
    }
}

inline GenChainComplex free_to_gen(const FreeChainComplex& c) {
    GenChainComplex g;
    g.top = c.top;
    g.groups.assign(c.top + 1, trivial_group());
    for (int i = 0; i <= c.top; ++i) g.groups[i] = PresentedGroup{c.ranks[i], IntMatrix(c.ranks[i], 0)};
    g.maps = c.diffs;
    return g;
}

/* --- operations on free complexes --- */

/* C[-1]: everything moved up one degree, differentials negated */
inline FreeChainComplex shift_up(const FreeChainComplex& c) {
    FreeChainComplex s;
    s.top = c.top + 1;
    s.ranks.assign(s.top + 1, 0);
    for (int i = 0; i <= c.top; ++i) s.ranks[i + 1] = c.ranks[i];
    s.diffs.assign(s.top, IntMatrix(0, 0));
    s.diffs[0] = IntMatrix(0, s.ranks[1]);
    for (int i = 1; i < s.top; ++i) s.diffs[i] = neg(c.diffs[i - 1]);
    return s;
}

inline FreeChainComplex direct_sum(const FreeChainComplex& x, const FreeChainComplex& y) {
    FreeChainComplex s;
    s.top = std::max(x.top, y.top);
    s.ranks.assign(s.top + 1, 0);
    for (int i = 0; i <= s.top; ++i) s.ranks[i] = x.rank_at(i) + y.rank_at(i);
    for (int i = 0; i < s.top; ++i) s.diffs.push_back(block_diag(x.diff_at(i), y.diff_at(i)));
    return s;
}

/* mapping cone of f: X -> Y, with the natural maps Y -> cone -> X[-1] */
struct ConeResult {
    FreeChainComplex cone;
    ComplexMap from_target;  /* Y -> cone */
    ComplexMap to_shift;     /* cone -> X[-1] */
};

inline ConeResult cone(const ComplexMap& f, const FreeChainComplex& x, const FreeChainComplex& y) {
    validate_chain_map(f, x, y);
    ConeResult r;
    r.cone.top = std::max(y.top, x.top + 1);
    r.cone.ranks.assign(r.cone.top + 1, 0);
    for (int n = 0; n <= r.cone.top; ++n) r.cone.ranks[n] = y.rank_at(n) + x.rank_at(n - 1);
    for (int n = 0; n < r.cone.top; ++n) {
        IntMatrix d(r.cone.ranks[n], r.cone.ranks[n + 1]);
        place_block(d, y.diff_at(n), 0, 0);
        place_block(d, f.comp_at(n, x, y), 0, y.rank_at(n + 1));
        place_block(d, neg(x.diff_at(n - 1)), y.rank_at(n), y.rank_at(n + 1));
        r.cone.diffs.push_back(std::move(d));
    }
    validate_complex(r.cone);
    for (int n = 0; n <= r.cone.top; ++n) {
        IntMatrix a(r.cone.ranks[n], y.rank_at(n));
        place_block(a, identity_matrix(y.rank_at(n)), 0, 0);
        r.from_target.comps.push_back(std::move(a));
        IntMatrix b(x.rank_at(n - 1), r.cone.ranks[n]);
        place_block(b, identity_matrix(x.rank_at(n - 1)), 0, y.rank_at(n));
        r.to_shift.comps.push_back(std::move(b));
    }
    validate_chain_map(r.from_target, y, r.cone);
    validate_chain_map(r.to_shift, r.cone, shift_up(x));
    return r;
}

/* --- homology --- */

/* basis of the lattice of i-cycles of a presented complex: the preimage of the
 * relation lattice one degree down; columns form a canonical (HNF) basis */
inline IntMatrix cycle_lattice(const GenChainComplex& c, int i) {
    int g = c.gens_at(i);
    if (i <= 0) return identity_matrix(g);
    IntMatrix f = c.map_at(i - 1);
    IntMatrix combined = hstack(f, c.rels_at(i - 1));
    IntMatrix k = kernel_basis(combined);
    IntMatrix proj = submatrix(k, 0, 0, g, k.cols);
    return column_hnf(proj);
}

inline FgAbGroup homology(const GenChainComplex& c, int i) {
    if (i < 0 || i > c.top) return FgAbGroup{};
    IntMatrix z = cycle_lattice(c, i);
    IntMatrix bound = hstack(c.map_at(i), c.rels_at(i));
    auto coords = solve_exact(z, bound);
    if (!coords) throw std::logic_error("homology: boundaries are not cycles");
    return group_from_presentation(*coords);
}

inline std::vector<FgAbGroup> homology_all(const GenChainComplex& c) {
    std::vector<FgAbGroup> h;
    for (int i = 0; i <= c.top; ++i) h.push_back(homology(c, i));
    return h;
}

inline FgAbGroup homology(const FreeChainComplex& c, int i) {
    if (i < 0 || i > c.top) return FgAbGroup{};
    IntMatrix z = (i == 0) ? identity_matrix(c.rank_at(0)) : kernel_basis(c.diff_at(i - 1));
    auto coords = solve_exact(z, c.diff_at(i));
    if (!coords) throw std::logic_error("homology: boundaries are not cycles");
    return group_from_presentation(*coords);
}

inline std::vector<FgAbGroup> homology_all(const FreeChainComplex& c) {
    std::vector<FgAbGroup> h;
    for (int i = 0; i <= c.top; ++i) h.push_back(homology(c, i));
    return h;
}

/* --- good truncation --- */

/* Splits C at degree m into (below, above): H_i(below) = H_i(C) for i < m and
 * vanishes above, H_i(above) = H_i(C) for i >= m and vanishes below. "above"
 * carries the cycle subgroup of degree m, "below" the complementary quotient. */
inline std::pair<GenChainComplex, GenChainComplex> good_truncate(const GenChainComplex& c, int m) {
    if (m < 0 || m > c.top + 1) throw std::invalid_argument("good_truncate: degree out of range");
    if (m == c.top + 1) {
        GenChainComplex above;  /* zero complex */
        return {c, above};
    }

    IntMatrix z = cycle_lattice(c, m);

    GenChainComplex above;
    above.top = c.top;
    above.groups.assign(c.top + 1, trivial_group());
    above.maps.assign(c.top, IntMatrix(0, 0));
    for (int i = m + 1; i <= c.top; ++i) above.groups[i] = c.groups[i];
    /* degree m becomes the cycle subgroup, relations rewritten in its basis */
    auto rels_in_z = solve_exact(z, c.rels_at(m));
    if (!rels_in_z) throw std::logic_error("good_truncate: relations are not cycles");
    above.groups[m] = PresentedGroup{z.cols, *rels_in_z};
    for (int i = 0; i < c.top; ++i) {
        if (i == m) {
            auto lifted = solve_exact(z, c.map_at(m));
            if (!lifted) throw std::logic_error("good_truncate: boundaries are not cycles");
            above.maps[i] = *lifted;
        } else if (i > m) {
            above.maps[i] = c.maps[i];
        } else {
            above.maps[i] = IntMatrix(above.groups[i].gens, above.groups[i + 1].gens);
        }
    }
    validate_complex(above);

    GenChainComplex below;
    below.top = m;
    below.groups.assign(m + 1, trivial_group());
    below.maps.assign(m, IntMatrix(0, 0));
    for (int i = 0; i < m; ++i) below.groups[i] = c.groups[i];
    /* degree m is divided by its cycle subgroup */
    below.groups[m] = PresentedGroup{c.gens_at(m), z};
    for (int i = 0; i < m; ++i) below.maps[i] = c.maps[i];
    validate_complex(below);

    return {below, above};
}

/* --- free resolution --- */

struct FreeResolution {
    FreeChainComplex complex;
    std::vector<IntMatrix> to_target;  /* quasi-isomorphism, degree i: gens_at(i) x rank_at(i) */
};

namespace detail {

/* checks that q: P -> C is a chain map inducing isomorphisms on homology */
inline void verify_quasi_iso(const FreeChainComplex& p, const std::vector<IntMatrix>& q,
                             const GenChainComplex& c) {
    int t = std::max(p.top, c.top);
    for (int i = 0; i <= t; ++i) {
        IntMatrix qi = (i < static_cast<int>(q.size())) ? q[i] : IntMatrix(c.gens_at(i), p.rank_at(i));
        if (qi.rows != c.gens_at(i) || qi.cols != p.rank_at(i))
            throw std::logic_error("resolution: comparison map shape mismatch");
    }
    auto q_at = [&](int i) {
        return (i >= 0 && i < static_cast<int>(q.size())) ? q[i]
                                                          : IntMatrix(c.gens_at(i), p.rank_at(i));
    };
    for (int i = 0; i < t; ++i) {
        IntMatrix delta = sub(mul(q_at(i), p.diff_at(i)), mul(c.map_at(i), q_at(i + 1)));
        if (!solve_exact(c.rels_at(i), delta))
            throw std::logic_error("resolution: comparison map is not a chain map");
    }
    for (int i = 0; i <= t; ++i) {
        IntMatrix zp = (i == 0) ? identity_matrix(p.rank_at(0)) : kernel_basis(p.diff_at(i - 1));
        IntMatrix zc = cycle_lattice(c, i);
        if (i > c.top) {
            /* nothing on the target side; source homology must vanish */
            if (!homology(p, i).is_trivial())
                throw std::logic_error("resolution: extra homology above target top");
            continue;
        }
        auto img = solve_exact(zc, mul(q_at(i), zp));
        if (!img) throw std::logic_error("resolution: cycles do not map to cycles");
        IntMatrix bnd = hstack(c.map_at(i), c.rels_at(i));
        auto bnd_coords = solve_exact(zc, bnd);
        if (!bnd_coords) throw std::logic_error("resolution: target boundaries are not cycles");
        /* surjective on homology */
        auto [fr, inv] = cokernel_invariants(hstack(*img, *bnd_coords));
        if (fr != 0 || !inv.empty())
            throw std::logic_error("resolution: map not surjective on homology");
        /* injective on homology: preimage of boundaries is contained in boundaries */
        IntMatrix k = kernel_basis(hstack(*img, *bnd_coords));
        IntMatrix pre = column_hnf(submatrix(k, 0, 0, zp.cols, k.cols));
        auto bp = solve_exact(zp, p.diff_at(i));
        if (!bp) throw std::logic_error("resolution: source boundaries are not cycles");
        if (!solve_exact(column_hnf(*bp), pre))
            throw std::logic_error("resolution: map not injective on homology");
    }
}

}  // namespace detail

/* Free complex P with a quasi-isomorphism q: P -> C. Built degreewise from the
 * cycle lattices: degree i carries a free block on the i-cycles plus a block
 * one degree up killing the boundary-and-relation sublattice. The result is
 * verified to be a chain map inducing isomorphisms on all homology. */
inline FreeResolution free_resolution(const GenChainComplex& c) {
    validate_complex(c);

    bool already_free = true;
    for (int i = 0; i <= c.top; ++i)
        if (!c.groups[i].rels.is_zero()) already_free = false;
    if (already_free) {
        FreeResolution r;
        r.complex.top = c.top;
        r.complex.ranks.clear();
        for (int i = 0; i <= c.top; ++i) r.complex.ranks.push_back(c.groups[i].gens);
        r.complex.diffs = c.maps;
        validate_complex(r.complex);
        for (int i = 0; i <= c.top; ++i) r.to_target.push_back(identity_matrix(c.gens_at(i)));
        detail::verify_quasi_iso(r.complex, r.to_target, c);
        return r;
    }

    int t = c.top;
    std::vector<IntMatrix> zb(t + 1);        /* cycle basis per degree */
    std::vector<IntMatrix> kill(t + 1);      /* kernel lattice in cycle coordinates */
    std::vector<IntMatrix> kill_lift(t + 1); /* lift of kill through [f | rels] */
    for (int i = 0; i <= t; ++i) {
        zb[i] = cycle_lattice(c, i);
        IntMatrix s = hstack(c.map_at(i), c.rels_at(i));
        auto w = solve_exact(zb[i], s);
        if (!w) throw std::logic_error("free_resolution: boundaries are not cycles");
        kill[i] = column_hnf(*w);
        auto lift = solve_exact(s, mul(zb[i], kill[i]));
        if (!lift) throw std::logic_error("free_resolution: cannot lift kernel lattice");
        kill_lift[i] = *lift;
    }

    FreeResolution r;
    int ptop = (kill[t].cols > 0) ? t + 1 : t;
    r.complex.top = ptop;
    r.complex.ranks.assign(ptop + 1, 0);
    auto z_cols = [&](int i) { return (i >= 0 && i <= t) ? zb[i].cols : 0; };
    auto k_cols = [&](int i) { return (i >= 0 && i <= t) ? kill[i].cols : 0; };
    for (int i = 0; i <= ptop; ++i) r.complex.ranks[i] = z_cols(i) + k_cols(i - 1);
    for (int i = 0; i < ptop; ++i) {
        IntMatrix d(r.complex.ranks[i], r.complex.ranks[i + 1]);
        /* the kill block in degree i+1 maps onto its lattice inside the cycle block */
        place_block(d, kill[i], 0, z_cols(i + 1));
        r.complex.diffs.push_back(std::move(d));
    }
    validate_complex(r.complex);

    for (int i = 0; i <= std::min(ptop, t); ++i) {
        IntMatrix qi(c.gens_at(i), r.complex.ranks[i]);
        place_block(qi, zb[i], 0, 0);
        if (k_cols(i - 1) > 0) {
            /* kill generators map to chosen preimages under f */
            IntMatrix w = submatrix(kill_lift[i - 1], 0, 0, c.gens_at(i), kill[i - 1].cols);
            place_block(qi, w, 0, z_cols(i));
        }
        r.to_target.push_back(std::move(qi));
    }
    detail::verify_quasi_iso(r.complex, r.to_target, c);
    return r;
}

}  // namespace polyfun
