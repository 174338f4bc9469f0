#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "polyfun/errors.hpp"
#include "polyfun/linalg.hpp"
#include "polyfun/matrix.hpp"

namespace polyfun {

enum class Setting { FIN, FG };

inline std::string to_string(Setting s) { return s == Setting::FIN ? "FIN" : "FG"; }

/* finitely generated abelian group in canonical form:
 * Z^free_rank + Z/d_1 + ... + Z/d_k with 2 <= d_1 | d_2 | ... | d_k */
struct FgAbGroup {
    int free_rank = 0;
    std::vector<Int> invariant_factors;

    bool is_trivial() const { return free_rank == 0 && invariant_factors.empty(); }
    bool is_finite() const { return free_rank == 0; }

    bool operator==(const FgAbGroup& o) const {
        return free_rank == o.free_rank && invariant_factors == o.invariant_factors;
    }
    bool operator!=(const FgAbGroup& o) const { return !(*this == o); }
};

inline void validate_group(const FgAbGroup& g) {
    if (g.free_rank < 0) throw std::invalid_argument("negative free rank");
    for (size_t i = 0; i < g.invariant_factors.size(); ++i) {
        if (g.invariant_factors[i] < 2) throw std::invalid_argument("invariant factor < 2");
        if (i + 1 < g.invariant_factors.size() &&
            g.invariant_factors[i + 1] % g.invariant_factors[i] != 0)
            throw std::invalid_argument("invariant factors must form a divisibility chain");
    }
}

inline std::string to_string(const FgAbGroup& g) {
    if (g.is_trivial()) return "0";
    std::string s;
    if (g.free_rank == 1) s = "Z";
    else if (g.free_rank > 1) s = "Z^" + std::to_string(g.free_rank);
    for (const auto& d : g.invariant_factors) {
        if (!s.empty()) s += " + ";
        s += "Z/" + d.str();
    }
    return s;
}

/* cokernel of a: Z^cols -> Z^rows, in canonical form */
inline FgAbGroup group_from_presentation(const IntMatrix& a) {
    auto [free_rank, factors] = cokernel_invariants(a);
    FgAbGroup g{free_rank, std::move(factors)};
    validate_group(g);
    return g;
}

inline Int group_order(const FgAbGroup& g) {
    if (!g.is_finite()) throw SettingError("group_order: group is infinite");
    Int n = 1;
    for (const auto& d : g.invariant_factors) n *= d;
    return n;
}

/* canonical presentation matrix: gens x rels, torsion generators first */
inline IntMatrix presentation_of(const FgAbGroup& g) {
    int t = static_cast<int>(g.invariant_factors.size());
    IntMatrix p(t + g.free_rank, t);
    for (int i = 0; i < t; ++i) p.at(i, i) = g.invariant_factors[i];
    return p;
}

/* tensor product via presentations: if G = coker A (A: Z^ka -> Z^ra) and
 * H = coker B, then G (x) H = coker [A (x) I_rb | I_ra (x) B] */
inline FgAbGroup group_tensor(const FgAbGroup& g, const FgAbGroup& h) {
    IntMatrix a = presentation_of(g);
    IntMatrix b = presentation_of(h);
    IntMatrix rel = hstack(kronecker(a, identity_matrix(b.rows)),
                           kronecker(identity_matrix(a.rows), b));
    return group_from_presentation(rel);
}

/* Euler class of a bounded family of f.g. groups: the alternating sum of
 * ranks together with the alternating product of torsion orders */
struct EulerClass {
    long long rank_part = 0;
    Rat torsion_order = 1;

    bool operator==(const EulerClass& o) const {
        return rank_part == o.rank_part && torsion_order == o.torsion_order;
    }
    bool operator!=(const EulerClass& o) const { return !(*this == o); }
};

inline EulerClass euler_class(const std::vector<FgAbGroup>& homology) {
    EulerClass c;
    for (size_t i = 0; i < homology.size(); ++i) {
        const auto& g = homology[i];
        Int t = 1;
        for (const auto& d : g.invariant_factors) t *= d;
        if (i % 2 == 0) {
            c.rank_part += g.free_rank;
            c.torsion_order *= Rat(t);
        } else {
            c.rank_part -= g.free_rank;
            c.torsion_order /= Rat(t);
        }
    }
    return c;
}

/* class in K_0 of the setting: FIN lands in Q^x_{>0} (the torsion order,
 * rank part must vanish), FG lands in Z (the rank part) */
inline Rat k0_value(const EulerClass& c, Setting s) {
    if (s == Setting::FIN) {
        if (c.rank_part != 0)
            throw SettingError("k0_value: nonzero rank part in FIN");
        return c.torsion_order;
    }
    return Rat(c.rank_part);
}

}  // namespace polyfun
