#pragma once

#include <utility>
#include <vector>

#include "polyfun/complexes.hpp"
#include "polyfun/linalg.hpp"
#include "polyfun/matrix.hpp"
#include "polyfun/rng.hpp"

namespace polyfun {

inline IntMatrix rand_matrix(Rng& rng, int rows, int cols, int lo = -9, int hi = 9) {
    IntMatrix m(rows, cols);
    for (auto& x : m.a) x = rng.range(lo, hi);
    return m;
}

/* unimodular U with its inverse, built from elementary row operations */
inline std::pair<IntMatrix, IntMatrix> rand_unimodular(Rng& rng, int n, int steps = 0) {
    if (steps <= 0) steps = 3 * n + 2;
    IntMatrix u = identity_matrix(n);
    IntMatrix uinv = identity_matrix(n);
    if (n < 1) return {u, uinv};
    for (int s = 0; s < steps; ++s) {
        int kind = rng.range(0, 2);
        int i = rng.range(0, n - 1);
        int j = rng.range(0, n - 1);
        if (kind == 0 && n >= 2) {
            if (i == j) j = (j + 1) % n;
            Int c = rng.range(-2, 2);
            if (c == 0) c = 1;
            for (int k = 0; k < n; ++k) u.at(i, k) += c * u.at(j, k);
            for (int k = 0; k < n; ++k) uinv.at(k, j) -= c * uinv.at(k, i);
        } else if (kind == 1 && n >= 2) {
            if (i == j) continue;
            for (int k = 0; k < n; ++k) std::swap(u.at(i, k), u.at(j, k));
            for (int k = 0; k < n; ++k) std::swap(uinv.at(k, i), uinv.at(k, j));
        } else {
            for (int k = 0; k < n; ++k) u.at(i, k) = -u.at(i, k);
            for (int k = 0; k < n; ++k) uinv.at(k, i) = -uinv.at(k, i);
        }
    }
    return {u, uinv};
}

/* split injection Z^rx -> Z^(rx+extra) with free cokernel */
inline IntMatrix rand_split_injection(Rng& rng, int rx, int extra) {
    auto [w, winv] = rand_unimodular(rng, rx + extra);
    return submatrix(w, 0, 0, rx + extra, rx);
}

/* idempotent of rank r on Z^n with a known splitting hidden inside */
inline IntMatrix rand_idempotent(Rng& rng, int n, int r) {
    auto [w, winv] = rand_unimodular(rng, n);
    IntMatrix b = submatrix(w, 0, 0, n, r);
    IntMatrix p = submatrix(winv, 0, 0, r, n);
    return mul(b, p);
}

/* Free complex assembled from elementary pieces with known homology, then
 * disguised by a unimodular change of basis in every degree. */
struct RandomFreeComplex {
    FreeChainComplex complex;
    std::vector<FgAbGroup> homology;
};

namespace detail {

/* one elementary building block of a random complex */
struct ComplexPiece {
    std::vector<int> ranks;      /* degrees 0..top */
    std::vector<IntMatrix> diffs;
};

inline ComplexPiece cyclic_piece(int top, int deg, const Int& m) {
    ComplexPiece p;
    p.ranks.assign(top + 1, 0);
    p.ranks[deg] = 1;
    p.ranks[deg + 1] = 1;
    for (int i = 0; i < top; ++i) {
        IntMatrix d(p.ranks[i], p.ranks[i + 1]);
        if (i == deg) d.at(0, 0) = m;
        p.diffs.push_back(std::move(d));
    }
    return p;
}

inline ComplexPiece free_piece(int top, int deg) {
    ComplexPiece p;
    p.ranks.assign(top + 1, 0);
    p.ranks[deg] = 1;
    for (int i = 0; i < top; ++i) p.diffs.push_back(IntMatrix(p.ranks[i], p.ranks[i + 1]));
    return p;
}

}  // namespace detail

inline RandomFreeComplex rand_free_complex(Rng& rng, int max_top, int max_pieces,
                                           bool finite_homology) {
    int top = rng.range(finite_homology ? 1 : 0, max_top);
    std::vector<detail::ComplexPiece> pieces;
    std::vector<FgAbGroup> hom(top + 1, FgAbGroup{});

    int budget = rng.range(1, max_pieces);
    for (int b = 0; b < budget; ++b) {
        bool torsion = top > 0 && (finite_homology || rng.coin());
        if (torsion) {
            int deg = rng.range(0, top - 1);
            Int m = rng.range(1, 6);
            pieces.push_back(detail::cyclic_piece(top, deg, m));
            if (m > 1)
                hom[deg] = group_from_presentation(
                    block_diag(presentation_of(hom[deg]), IntMatrix(1, 1, {m})));
        } else {
            int deg = rng.range(0, top);
            pieces.push_back(detail::free_piece(top, deg));
            hom[deg].free_rank += 1;
        }
    }

    FreeChainComplex c;
    c.top = top;
    c.ranks.assign(top + 1, 0);
    for (const auto& p : pieces)
        for (int i = 0; i <= top; ++i) c.ranks[i] += p.ranks[i];
    for (int i = 0; i < top; ++i) {
        std::vector<IntMatrix> blocks;
        for (const auto& p : pieces) blocks.push_back(p.diffs[i]);
        c.diffs.push_back(block_diag(blocks));
    }
    validate_complex(c);

    /* conjugate by unimodular automorphisms degreewise */
    std::vector<IntMatrix> u(top + 1), uinv(top + 1);
    for (int i = 0; i <= top; ++i) {
        auto [a, ai] = rand_unimodular(rng, c.ranks[i]);
        u[i] = a;
        uinv[i] = ai;
    }
    for (int i = 0; i < top; ++i) c.diffs[i] = mul(u[i], mul(c.diffs[i], uinv[i + 1]));
    validate_complex(c);

    for (auto& g : hom) validate_group(g);
    return RandomFreeComplex{std::move(c), std::move(hom)};
}

/* Presented complex with known homology: free skeleton plus explicit cyclic
 * summands, redundant generators, and basis changes. */
struct RandomGenComplex {
    GenChainComplex complex;
    std::vector<FgAbGroup> homology;
};

inline RandomGenComplex rand_gen_complex(Rng& rng, int max_top, int max_pieces,
                                         bool finite_homology) {
    RandomFreeComplex base = rand_free_complex(rng, max_top, max_pieces, finite_homology);
    GenChainComplex c = free_to_gen(base.complex);
    std::vector<FgAbGroup> hom = base.homology;

    /* direct cyclic summands presented by a relation, not by a resolution */
    int extra = rng.range(0, 2);
    for (int e = 0; e < extra; ++e) {
        int deg = rng.range(0, c.top);
        Int m = rng.range(2, 6);
        auto& g = c.groups[deg];
        IntMatrix rels(g.gens + 1, g.rels.cols + 1);
        place_block(rels, g.rels, 0, 0);
        rels.at(g.gens, g.rels.cols) = m;
        g = PresentedGroup{g.gens + 1, rels};
        if (deg > 0) {
            IntMatrix& below = c.maps[deg - 1];
            below = hstack(below, IntMatrix(below.rows, 1));
        }
        if (deg < c.top) {
            IntMatrix& above = c.maps[deg];
            above = vstack(above, IntMatrix(1, above.cols));
        }
        hom[deg] = group_from_presentation(
            block_diag(presentation_of(hom[deg]), IntMatrix(1, 1, {m})));
    }

    /* redundant generators: new gens equal to combinations of old ones */
    for (int deg = 0; deg <= c.top; ++deg) {
        if (!rng.coin()) continue;
        auto& g = c.groups[deg];
        int k = rng.range(1, 2);
        IntMatrix cmb = rand_matrix(rng, g.gens, k, -2, 2);
        IntMatrix rels(g.gens + k, g.rels.cols + k);
        place_block(rels, g.rels, 0, 0);
        place_block(rels, neg(cmb), 0, g.rels.cols);
        place_block(rels, identity_matrix(k), g.gens, g.rels.cols);
        g = PresentedGroup{g.gens + k, rels};
        if (deg > 0) {
            IntMatrix& below = c.maps[deg - 1];
            below = hstack(below, mul(below, cmb));
        }
        if (deg < c.top) {
            IntMatrix& above = c.maps[deg];
            above = vstack(above, IntMatrix(k, above.cols));
        }
    }

    /* generator basis changes and relation-column mixing */
    for (int deg = 0; deg <= c.top; ++deg) {
        auto [u, uinv] = rand_unimodular(rng, c.groups[deg].gens);
        c.groups[deg].rels = mul(u, c.groups[deg].rels);
        if (c.groups[deg].rels.cols > 1) {
            auto [v, vinv] = rand_unimodular(rng, c.groups[deg].rels.cols);
            c.groups[deg].rels = mul(c.groups[deg].rels, v);
        }
        if (deg > 0) c.maps[deg - 1] = mul(c.maps[deg - 1], uinv);
        if (deg < c.top) c.maps[deg] = mul(u, c.maps[deg]);
    }
    validate_complex(c);
    return RandomGenComplex{std::move(c), std::move(hom)};
}

}  // namespace polyfun
