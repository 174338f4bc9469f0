#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polyfun/complexes.hpp"
#include "polyfun/derived.hpp"
#include "polyfun/functors.hpp"
#include "polyfun/generators.hpp"
#include "polyfun/koeck.hpp"
#include "polyfun/matrix.hpp"
#include "polyfun/report.hpp"
#include "polyfun/rng.hpp"
#include "polyfun/simplicial.hpp"

namespace polyfun {

/* outcome of a batch of seeded trials; reports holds one entry per trial */
struct SuiteResult {
    std::string suite;
    int trials = 0;
    int passed = 0;
    std::vector<CheckReport> reports;

    bool all_pass() const { return passed == trials; }
    const CheckReport* first_failure() const {
        for (const auto& r : reports)
            if (!r.pass) return &r;
        return nullptr;
    }
};

namespace detail {

inline void merge_sub(CheckReport& rep, const CheckReport& sub) {
    if (sub.pass) return;
    rep.pass = false;
    rep.note("failed_check", sub.check);
    for (const auto& kv : sub.witness) rep.witness.push_back(kv);
}

/* ---- koeck: the augmented total complex resolves F(Y/X) ---- */

inline CheckReport koeck_suite_trial(Rng& rng, int) {
    static const std::array<FunctorDescriptor, 6> fs{{{FunctorKind::Sym, 2},
                                                      {FunctorKind::Sym, 3},
                                                      {FunctorKind::Ext, 2},
                                                      {FunctorKind::Ext, 3},
                                                      {FunctorKind::Div, 2},
                                                      {FunctorKind::Tensor, 2}}};
    int rx = rng.range(1, 3);
    int extra = rng.range(1, 3);
    IntMatrix u = rand_split_injection(rng, rx, extra);
    CheckReport rep;
    rep.check = "koeck suite";
    rep.pass = true;
    rep.note("rank_x", std::to_string(rx));
    rep.note("rank_y", std::to_string(rx + extra));
    for (const auto& f : fs) {
        CheckReport sub = check_koeck_resolution(f, u);
        if (!sub.pass) {
            rep.note("functor", to_string(f));
            merge_sub(rep, sub);
            break;
        }
    }
    return rep;
}

/* ---- dk: normalization undoes the level construction, homology survives ---- */

inline CheckReport dk_suite_trial(Rng& rng, int) {
    RandomFreeComplex rc = rand_free_complex(rng, 3, 3, false);
    const FreeChainComplex& c = rc.complex;
    int cap = c.top + 2;
    SimplicialModule g = dk_gamma(c, cap);
    CheckReport rep;
    rep.check = "dold-kan suite";
    rep.pass = true;
    rep.note("top", std::to_string(c.top));
    FreeChainComplex n = normalized_complex(g);
    for (int i = 0; i <= cap && rep.pass; ++i)
        if (n.rank_at(i) != c.rank_at(i)) {
            rep.pass = false;
            rep.note("normalized_rank_" + std::to_string(i), std::to_string(n.rank_at(i)));
        }
    for (int i = 0; i < cap && rep.pass; ++i)
        if (!(n.diff_at(i) == c.diff_at(i))) {
            rep.pass = false;
            rep.note("normalized_diff", std::to_string(i));
        }
    FreeChainComplex a = associated_complex(g);
    for (int i = 0; i < cap && rep.pass; ++i) {
        FgAbGroup want = (i <= c.top) ? rc.homology[i] : FgAbGroup{};
        FgAbGroup got = homology(a, i);
        if (got != want) {
            rep.pass = false;
            rep.note("H_" + std::to_string(i), to_string(got) + " expected " + to_string(want));
        }
    }
    return rep;
}

/* ---- cross: idempotency, decomposition, associativity, degree bound ---- */

inline CheckReport cross_suite_trial(Rng& rng, int t) {
    static const std::array<FunctorKind, 4> kinds{
        {FunctorKind::Sym, FunctorKind::Ext, FunctorKind::Div, FunctorKind::Tensor}};
    FunctorDescriptor f{kinds[t % 4], rng.range(2, 3)};
    CheckReport rep;
    rep.check = "cross effect suite";
    rep.pass = true;
    rep.note("functor", to_string(f));
    int r1 = rng.range(1, 3);
    int r2 = rng.range(1, 3);
    IntMatrix e = cross_idempotent(f, {r1, r2});
    if (!(mul(e, e) == e)) {
        rep.pass = false;
        rep.note("idempotent", "no");
        return rep;
    }
    merge_sub(rep, verify_decomposition(f, r1, r2));
    if (!rep.pass) return rep;
    merge_sub(rep, verify_associativity(f, {rng.range(1, 2)}, {rng.range(1, 2), rng.range(1, 2)},
                                        rng));
    if (!rep.pass) return rep;
    std::vector<int> probe;
    for (int i = 0; i <= f.degree; ++i) probe.push_back(rng.range(1, 2));
    merge_sub(rep, verify_degree(f, probe));
    return rep;
}

/* ---- theorem1: representative independence and the degree-d bound ---- */

inline CheckReport theorem1_suite_trial(Rng& rng, int t) {
    static const std::array<FunctorDescriptor, 5> fs{{{FunctorKind::Sym, 2},
                                                      {FunctorKind::Ext, 2},
                                                      {FunctorKind::Div, 2},
                                                      {FunctorKind::Tensor, 2},
                                                      {FunctorKind::Sym, 3}}};
    FunctorDescriptor f = fs[t % 5];
    CheckReport rep;
    rep.check = "theorem one suite";
    rep.pass = true;
    rep.note("functor", to_string(f));
    Rat fin_class = Rat(rng.range(2, 12)) / rng.range(1, 4);
    merge_sub(rep, well_definedness_trial(f, Setting::FIN, fin_class, rng.next()));
    if (!rep.pass) return rep;
    Rat fg_class = rng.range(-4, 4);
    merge_sub(rep, well_definedness_trial(f, Setting::FG, fg_class, rng.next()));
    if (!rep.pass) return rep;
    std::vector<Rat> fin_points{2, 3, 5, 7};
    merge_sub(rep, degree_of_f_check(f, Setting::FIN, fin_points, rng.next()));
    if (!rep.pass) return rep;
    std::vector<Rat> fg_points{-2, -1, 1, 2, 3};
    merge_sub(rep, degree_of_f_check(f, Setting::FG, fg_points, rng.next()));
    return rep;
}

/* ---- oracle: derived functors of two-term complexes vs koszul homology ---- */

inline CheckReport oracle_suite_trial(Rng& rng, int t) {
    FunctorKind kind = (t % 2 == 0) ? FunctorKind::Sym : FunctorKind::Ext;
    int d = rng.range(1, 3);
    IntMatrix u = rand_matrix(rng, rng.range(1, 2), rng.range(1, 2), -4, 4);
    CheckReport rep = oracle_compare(kind, d, u, d);
    rep.note("shape", std::to_string(u.rows) + "x" + std::to_string(u.cols));
    return rep;
}

/* ---- chi: the cross-effect formula for chi(F(P)) on random injections ---- */

inline SimplicialModule sim_direct_sum(const SimplicialModule& a, const SimplicialModule& b) {
    if (a.cap != b.cap) throw std::invalid_argument("sim_direct_sum: cap mismatch");
    SimplicialModule s;
    s.cap = a.cap;
    s.ranks.clear();
    for (int n = 0; n <= s.cap; ++n) s.ranks.push_back(a.ranks[n] + b.ranks[n]);
    s.faces.resize(s.cap);
    s.degens.resize(s.cap);
    for (int n = 1; n <= s.cap; ++n)
        for (int i = 0; i <= n; ++i) s.faces[n - 1].push_back(block_diag(a.face(n, i), b.face(n, i)));
    for (int n = 0; n < s.cap; ++n)
        for (int i = 0; i <= n; ++i)
            s.degens[n].push_back(block_diag(a.degen(n, i), b.degen(n, i)));
    validate_simplicial(s);
    return s;
}

/* x sits inside x + w along the first block, disguised by a levelwise change
 * of basis on the total module */
inline SimplicialInjection rand_sim_injection(Rng& rng, const SimplicialModule& x,
                                              const SimplicialModule& w) {
    SimplicialInjection inj;
    inj.sub = x;
    inj.total = sim_direct_sum(x, w);
    std::vector<IntMatrix> us, uinvs;
    for (int n = 0; n <= inj.total.cap; ++n) {
        int r = inj.total.ranks[n];
        if (r == 0) {
            us.push_back(IntMatrix(0, 0));
            uinvs.push_back(IntMatrix(0, 0));
            continue;
        }
        auto [u, uinv] = rand_unimodular(rng, r);
        us.push_back(u);
        uinvs.push_back(uinv);
    }
    for (int n = 0; n <= inj.total.cap; ++n) {
        IntMatrix inc = vstack(identity_matrix(x.ranks[n]), IntMatrix(w.ranks[n], x.ranks[n]));
        inj.inclusion.push_back(mul(us[n], inc));
    }
    for (int n = 1; n <= inj.total.cap; ++n)
        for (auto& d : inj.total.faces[n - 1]) d = mul(us[n - 1], mul(d, uinvs[n]));
    for (int n = 0; n < inj.total.cap; ++n)
        for (auto& s : inj.total.degens[n]) s = mul(us[n + 1], mul(s, uinvs[n]));
    return inj;
}

inline FreeChainComplex cyclic_two_term(int m) {
    FreeChainComplex c;
    c.top = 1;
    c.ranks = {1, 1};
    c.diffs = {IntMatrix(1, 1, {m})};
    return c;
}

inline FreeChainComplex free_two_term(int r0, int r1) {
    FreeChainComplex c;
    c.top = 1;
    c.ranks = {r0, r1};
    c.diffs = {IntMatrix(r0, r1)};
    return c;
}

inline CheckReport chi_suite_trial(Rng& rng, int t) {
    static const std::array<FunctorKind, 4> kinds{
        {FunctorKind::Sym, FunctorKind::Ext, FunctorKind::Div, FunctorKind::Tensor}};
    FunctorDescriptor f{kinds[(t / 2) % 4], 2};
    Setting setting = (t % 2 == 0) ? Setting::FIN : Setting::FG;
    int cap = 2 * 1 + 2;
    FreeChainComplex cx, cw;
    if (setting == Setting::FIN) {
        cx = cyclic_two_term(rng.range(2, 4));
        cw = cyclic_two_term(rng.range(1, 4));
    } else {
        int r0x = rng.range(0, 2);
        int r1x = rng.range(0, 1);
        if (r0x + r1x == 0) r0x = 1;
        cx = free_two_term(r0x, r1x);
        cw = free_two_term(rng.range(1, 2), rng.range(0, 1));
    }
    SimplicialModule x = dk_gamma(cx, cap);
    SimplicialModule w = dk_gamma(cw, cap);
    SimplicialInjection inj = rand_sim_injection(rng, x, w);
    CheckReport rep = chi_formula_check(f, inj, setting);
    rep.note("functor", to_string(f));
    rep.note("setting", to_string(setting));
    return rep;
}

}  // namespace detail

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"koeck", "dk",     "cross",
                                                "theorem1", "oracle", "chi"};
    return names;
}

/* runs `trials` independent seeded trials of the named suite; trial t draws
 * its randomness from split_stream(seed, suite_id, t) so runs reproduce */
inline SuiteResult run_suite(const std::string& name, int trials, unsigned long long seed) {
    int id = 0;
    const auto& names = suite_names();
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) id = static_cast<int>(i) + 1;
    if (id == 0) throw std::invalid_argument("unknown suite: " + name);
    if (trials < 1) throw std::invalid_argument("suite needs at least one trial");
    SuiteResult res;
    res.suite = name;
    res.trials = trials;
    for (int t = 0; t < trials; ++t) {
        Rng rng(split_stream(seed, id, t));
        CheckReport rep;
        switch (id) {
            case 1: rep = detail::koeck_suite_trial(rng, t); break;
            case 2: rep = detail::dk_suite_trial(rng, t); break;
            case 3: rep = detail::cross_suite_trial(rng, t); break;
            case 4: rep = detail::theorem1_suite_trial(rng, t); break;
            case 5: rep = detail::oracle_suite_trial(rng, t); break;
            default: rep = detail::chi_suite_trial(rng, t); break;
        }
        rep.note("trial", std::to_string(t));
        if (rep.pass) ++res.passed;
        res.reports.push_back(std::move(rep));
    }
    return res;
}

}  // namespace polyfun
