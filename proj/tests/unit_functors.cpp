#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "polyfun/functors.hpp"
#include "polyfun/generators.hpp"

using namespace polyfun;

static const std::vector<FunctorDescriptor> kAllKinds = {
    {FunctorKind::Sym, 2},    {FunctorKind::Sym, 3},  {FunctorKind::Ext, 2},
    {FunctorKind::Ext, 3},    {FunctorKind::Div, 2},  {FunctorKind::Div, 3},
    {FunctorKind::Tensor, 2}, {FunctorKind::Tensor, 3}};

TEST_CASE("descriptor parsing") {
    CHECK(parse_functor("sym:2") == FunctorDescriptor{FunctorKind::Sym, 2});
    CHECK(parse_functor("ext:3") == FunctorDescriptor{FunctorKind::Ext, 3});
    CHECK(parse_functor("div:2") == FunctorDescriptor{FunctorKind::Div, 2});
    CHECK(parse_functor("tensor:4") == FunctorDescriptor{FunctorKind::Tensor, 4});
    CHECK(parse_functor("id") == FunctorDescriptor{FunctorKind::Sym, 1});
    CHECK(to_string(parse_functor("div:2")) == "div:2");
    CHECK_THROWS(parse_functor("sym"));
    CHECK_THROWS(parse_functor("sym:0"));
    CHECK_THROWS(parse_functor("sym:x"));
    CHECK_THROWS(parse_functor("weird:2"));
}

TEST_CASE("ranks and basis sizes") {
    CHECK(functor_rank({FunctorKind::Sym, 2}, 3) == 6);
    CHECK(functor_rank({FunctorKind::Ext, 3}, 2) == 0);
    CHECK(functor_rank({FunctorKind::Div, 3}, 2) == 4);
    CHECK(functor_rank({FunctorKind::Tensor, 3}, 2) == 8);
    for (const auto& f : kAllKinds)
        for (int r = 0; r <= 5; ++r)
            CHECK(static_cast<int>(functor_basis(f, r).size()) == functor_rank(f, r));
    CHECK(functor_rank({FunctorKind::Sym, 3}, 0) == 0);
    CHECK(functor_rank({FunctorKind::Tensor, 2}, 0) == 0);
}

TEST_CASE("pinned functor matrices") {
    CHECK(functor_on_map({FunctorKind::Sym, 2}, IntMatrix(1, 1, {5})) == IntMatrix(1, 1, {25}));
    CHECK(functor_on_map({FunctorKind::Div, 2}, IntMatrix(1, 1, {2})) == IntMatrix(1, 1, {4}));

    IntMatrix a(2, 2, {3, 1, 4, 2});
    CHECK(functor_on_map({FunctorKind::Ext, 2}, a) == IntMatrix(1, 1, {2}));

    /* sym:2 of the diagonal inclusion: (x+y)^2 expands with coefficient 2 */
    IntMatrix diag_incl(2, 1, {1, 1});
    CHECK(functor_on_map({FunctorKind::Sym, 2}, diag_incl) == IntMatrix(3, 1, {1, 2, 1}));
    /* div:2 keeps the mixed coefficient at 1 */
    CHECK(functor_on_map({FunctorKind::Div, 2}, diag_incl) == IntMatrix(3, 1, {1, 1, 1}));
}

TEST_CASE("exterior entries are minors") {
    Rng rng(split_stream(44, 1, 0));
    for (int t = 0; t < 20; ++t) {
        int rows = rng.range(2, 4), cols = rng.range(2, 4), d = rng.range(2, 3);
        IntMatrix a = rand_matrix(rng, rows, cols, -4, 4);
        FunctorDescriptor f{FunctorKind::Ext, d};
        IntMatrix m = functor_on_map(f, a);
        auto rb = functor_basis(f, rows);
        auto cb = functor_basis(f, cols);
        for (size_t i = 0; i < rb.size(); ++i)
            for (size_t j = 0; j < cb.size(); ++j)
                CHECK(m.at(static_cast<int>(i), static_cast<int>(j)) ==
                      determinant(submatrix(a, rb[i], cb[j])));
    }
}

TEST_CASE("divided powers are dual to symmetric powers") {
    Rng rng(split_stream(44, 2, 0));
    for (int t = 0; t < 25; ++t) {
        int rows = rng.range(1, 4), cols = rng.range(1, 4), d = rng.range(2, 3);
        IntMatrix a = rand_matrix(rng, rows, cols, -4, 4);
        IntMatrix lhs = functor_on_map({FunctorKind::Div, d}, a);
        IntMatrix rhs = transpose(functor_on_map({FunctorKind::Sym, d}, transpose(a)));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("functor laws") {
    Rng rng(split_stream(44, 3, 0));
    for (const auto& f : kAllKinds) {
        for (int t = 0; t < 8; ++t) {
            int n = rng.range(1, 3), k = rng.range(1, 3), m = rng.range(1, 3);
            IntMatrix a = rand_matrix(rng, n, k, -3, 3);
            IntMatrix b = rand_matrix(rng, k, m, -3, 3);
            CHECK(functor_on_map(f, mul(a, b)) == mul(functor_on_map(f, a), functor_on_map(f, b)));
            CHECK(functor_on_map(f, identity_matrix(n)).is_identity());
            CHECK(functor_on_map(f, IntMatrix(n, k)).is_zero());
        }
    }
}

TEST_CASE("cross idempotent pinned instances") {
    CHECK(cross_idempotent({FunctorKind::Sym, 2}, {3}).is_identity());
    CHECK(cross_idempotent({FunctorKind::Tensor, 2}, {2}).is_identity());

    IntMatrix e = cross_idempotent({FunctorKind::Sym, 2}, {1, 1});
    CHECK(e == IntMatrix(3, 3, {0, 0, 0, 0, 1, 0, 0, 0, 0}));

    CHECK(cross_idempotent({FunctorKind::Ext, 2}, {1, 1, 1}).is_zero());
}

TEST_CASE("cross idempotents square to themselves") {
    Rng rng(split_stream(44, 4, 0));
    for (const auto& f : kAllKinds)
        for (int t = 0; t < 5; ++t) {
            int n = rng.range(1, 3);
            std::vector<int> ranks;
            for (int i = 0; i < n; ++i) ranks.push_back(rng.range(0, 2));
            IntMatrix e = cross_idempotent(f, ranks);
            CHECK(mul(e, e) == e);
        }
}

TEST_CASE("cross effect ranks") {
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b)
            CHECK(cross_effect_space({FunctorKind::Sym, 2}, {a, b}).rank() == a * b);
    CHECK(cross_effect_space({FunctorKind::Tensor, 2}, {1, 1}).rank() == 2);
    CHECK(cross_effect_space({FunctorKind::Ext, 2}, {1, 1, 1}).rank() == 0);
    CHECK(cross_effect_space({FunctorKind::Sym, 3}, {1, 1}).rank() == 2);

    CrossEffectSpace s = cross_effect_space({FunctorKind::Div, 2}, {2, 2});
    CHECK(mul(s.projection, s.inclusion).is_identity());
    CHECK(mul(s.inclusion, s.projection) == cross_idempotent({FunctorKind::Div, 2}, {2, 2}));
}

TEST_CASE("cross effect action on maps") {
    for (const auto& f : kAllKinds) {
        std::vector<IntMatrix> ids = {identity_matrix(2), identity_matrix(1)};
        CHECK(cross_effect_on_maps(f, {2, 1}, {2, 1}, ids).is_identity());
    }
    IntMatrix got = cross_effect_on_maps({FunctorKind::Sym, 2}, {1, 1}, {1, 1},
                                         {IntMatrix(1, 1, {3}), IntMatrix(1, 1, {5})});
    CHECK(got == IntMatrix(1, 1, {15}));
    IntMatrix zeroed = cross_effect_on_maps({FunctorKind::Sym, 2}, {1, 1}, {1, 1},
                                            {IntMatrix(1, 1, {0}), IntMatrix(1, 1, {5})});
    CHECK(zeroed.is_zero());
    CHECK_THROWS(cross_effect_on_maps({FunctorKind::Sym, 2}, {1, 1}, {1, 1},
                                      {IntMatrix(2, 1), IntMatrix(1, 1)}));
}

TEST_CASE("cross effects compose functorially") {
    Rng rng(split_stream(44, 5, 0));
    for (const auto& f : kAllKinds) {
        for (int t = 0; t < 4; ++t) {
            int n = rng.range(1, 2) + 1;
            std::vector<int> src, mid, dst;
            std::vector<IntMatrix> first, second;
            for (int i = 0; i < n; ++i) {
                src.push_back(rng.range(1, 2));
                mid.push_back(rng.range(1, 2));
                dst.push_back(rng.range(1, 2));
                first.push_back(rand_matrix(rng, mid.back(), src.back(), -2, 2));
                second.push_back(rand_matrix(rng, dst.back(), mid.back(), -2, 2));
            }
            std::vector<IntMatrix> composed;
            for (int i = 0; i < n; ++i) composed.push_back(mul(second[i], first[i]));
            CHECK(cross_effect_on_maps(f, src, dst, composed) ==
                  mul(cross_effect_on_maps(f, mid, dst, second),
                      cross_effect_on_maps(f, src, mid, first)));
        }
    }
}

TEST_CASE("binary decomposition is an isomorphism") {
    CheckReport r1 = verify_decomposition({FunctorKind::Sym, 2}, 1, 1);
    CHECK(r1.pass);
    CheckReport r2 = verify_decomposition({FunctorKind::Ext, 2}, 1, 1);
    CHECK(r2.pass);
    CheckReport r3 = verify_decomposition({FunctorKind::Sym, 1}, 2, 3);
    CHECK(r3.pass);
    CHECK(cross_effect_space({FunctorKind::Sym, 1}, {2, 3}).rank() == 0);

    Rng rng(split_stream(44, 6, 0));
    for (const auto& f : kAllKinds)
        for (int t = 0; t < 3; ++t)
            CHECK(verify_decomposition(f, rng.range(0, 3), rng.range(0, 3)).pass);
}

TEST_CASE("full decomposition accounts for the whole ambient rank") {
    Rng rng(split_stream(44, 7, 0));
    for (const auto& f : kAllKinds) {
        for (int t = 0; t < 3; ++t) {
            int n = rng.range(1, 3);
            std::vector<int> ranks;
            int total = 0;
            for (int i = 0; i < n; ++i) {
                ranks.push_back(rng.range(1, 2));
                total += ranks.back();
            }
            long long sum = 0;
            for (unsigned s = 1; s < (1u << n); ++s) {
                std::vector<int> sub;
                for (int i = 0; i < n; ++i)
                    if (s & (1u << i)) sub.push_back(ranks[i]);
                sum += cross_effect_space(f, sub).rank();
            }
            CHECK(sum == functor_rank(f, total));
        }
    }
}

TEST_CASE("degree bounds") {
    CHECK(verify_degree({FunctorKind::Sym, 2}, {1, 1, 1}).pass);
    CHECK(verify_degree({FunctorKind::Tensor, 3}, {1, 1, 1, 1}).pass);
    for (const auto& f : kAllKinds) {
        std::vector<int> probe(f.degree + 1, 2);
        CHECK(verify_degree(f, probe).pass);
        std::vector<int> at_degree(f.degree, 1);
        CHECK(cross_effect_space(f, at_degree).rank() > 0);
    }
    CHECK_THROWS(verify_degree({FunctorKind::Sym, 2}, {1, 1}));
}

TEST_CASE("cross effects of the partial application match the direct ones") {
    Rng rng(split_stream(44, 8, 0));
    CHECK(verify_associativity({FunctorKind::Sym, 3}, {1}, {1, 1}, rng).pass);
    CHECK(verify_associativity({FunctorKind::Tensor, 2}, {1}, {1, 1}, rng).pass);
    CHECK(verify_associativity({FunctorKind::Ext, 2}, {1}, {1}, rng).pass);
    CHECK(verify_associativity({FunctorKind::Ext, 3}, {1, 2}, {1, 1}, rng).pass);
    CHECK(verify_associativity({FunctorKind::Div, 2}, {2}, {1, 1}, rng).pass);
    CHECK(verify_associativity({FunctorKind::Sym, 2}, {1}, {2, 1}, rng).pass);
    CHECK(verify_associativity({FunctorKind::Tensor, 3}, {1, 1}, {1, 1}, rng).pass);
}
