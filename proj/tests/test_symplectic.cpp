#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace altmod;
using testutil::elem;
using testutil::ints;
using testutil::make_module;
using testutil::reference_module;
using testutil::trivial_module;

namespace {

Int product(const std::vector<Int>& xs) {
    Int p = 1;
    for (const auto& x : xs) p *= x;
    return p;
}

/// Invariant factors of the group with the given cyclic orders, computed
/// independently of the classifier.
std::vector<Int> invariant_factors_of(const std::vector<Int>& orders) {
    return subgroup_invariant_factors(Subgroup::whole(FinAbGroup(orders)));
}

}  // namespace

TEST_CASE("max_pairing_pair on documented modules") {
    AlternateModule s4 = standard_symplectic(ints({4}));
    auto [x, y] = max_pairing_pair(s4);
    CHECK(x == elem({1, 0}));
    CHECK(y == elem({0, 1}));
    CHECK(evaluate(s4, x, y).order() == 4);

    AlternateModule k = make_module({2, 2}, {{0, 1, 1, 2}});
    auto [a, b] = max_pairing_pair(k);
    CHECK(a == elem({1, 0}));
    CHECK(b == elem({0, 1}));

    AlternateModule q = quotient_by_kernel(reference_module()).quotient;
    auto [u, v] = max_pairing_pair(q);
    CHECK(evaluate(q, u, v).order() == q.group().exponent());
    CHECK(q.group().order_of(u) == q.group().exponent());
    CHECK(q.group().order_of(v) == q.group().exponent());
}

TEST_CASE("max_pairing_pair rejects bad inputs") {
    CHECK_THROWS_AS(max_pairing_pair(trivial_module({})), std::domain_error);
    CHECK_THROWS_AS(max_pairing_pair(standard_symplectic(ints({6}))), std::domain_error);
    CHECK_THROWS_AS(max_pairing_pair(reference_module()), std::domain_error);
}

TEST_CASE("split along the second block of a standard module") {
    AlternateModule m = standard_symplectic(ints({2, 4}));
    Subgroup b = subgroup_generated(m.group(), {elem({0, 1, 0, 0}), elem({0, 0, 0, 1})});
    SymplecticSplit sp = split_symplectic_submodule(m, b);
    CHECK(sp.inner == standard_symplectic(ints({4})));
    CHECK(sp.outer.cardinality() * sp.inner.cardinality() == m.cardinality());
    CHECK(classify(sp.outer).b_orders == ints({2}));
    CHECK(is_isometry(m, ortho_sum(sp.inner, sp.outer), sp.isometry));
    CHECK(is_form_preserving(sp.inner, m, sp.inner_inclusion));
    CHECK(is_form_preserving(sp.outer, m, sp.outer_inclusion));
}

TEST_CASE("split with a trivial block is the identity split") {
    AlternateModule m = standard_symplectic(ints({2}));
    SymplecticSplit sp = split_symplectic_submodule(m, Subgroup::trivial(m.group()));
    CHECK(sp.inner.group().is_trivial());
    CHECK(sp.outer == m);
}

TEST_CASE("split rejects a degenerate block") {
    AlternateModule m = standard_symplectic(ints({2}));
    Subgroup b = subgroup_generated(m.group(), {elem({1, 0})});
    CHECK_THROWS_AS(split_symplectic_submodule(m, b), std::domain_error);
}

TEST_CASE("split keeps the kernel inside the outer factor") {
    // hyperbolic block plus a trivially paired Z/2: the kernel survives
    // unchanged in the orthogonal complement of the block
    AlternateModule m = ortho_sum(standard_symplectic(ints({4})), trivial_module({2}));
    Subgroup b = subgroup_generated(m.group(), {elem({1, 0, 0}), elem({0, 1, 0})});
    SymplecticSplit sp = split_symplectic_submodule(m, b);
    CHECK(kernel(sp.inner).is_trivial());
    CHECK(kernel(sp.outer).cardinality() == kernel(m).cardinality());
    Subgroup k_in_m = kernel(m);
    Subgroup k_outer = kernel(sp.outer);
    for (const auto& g : k_outer.gens())
        CHECK(k_in_m.contains(sp.outer_inclusion.apply(g)));
}

TEST_CASE("split after normalizing a maximal pair") {
    std::mt19937 rng(71);
    for (int t = 0; t < 25; ++t) {
        AlternateModule m = testutil::random_symplectic(rng, {2, 3}, 256, 3);
        auto parts = sylow_decompose(m);
        const AlternateModule& part = std::get<1>(parts[0]);
        if (part.cardinality() == 1) continue;
        auto [x, y] = max_pairing_pair(part);
        const Int d = part.group().exponent();
        QZ q = evaluate(part, x, y);
        GroupElement y2 = part.group().scale(inv_mod(q.num(), d), y);
        SymplecticSplit sp = split_symplectic_on_basis(part, {x, y2}, {d, d});
        REQUIRE(sp.inner == standard_symplectic({d}));
        REQUIRE(sp.inner.cardinality() * sp.outer.cardinality() == part.cardinality());
        REQUIRE(is_isometry(part, ortho_sum(sp.inner, sp.outer), sp.isometry));
    }
}

TEST_CASE("classify on documented modules") {
    Classification t = classify(trivial_module({}));
    CHECK(t.b_orders.empty());

    Classification k = classify(make_module({2, 2}, {{0, 1, 1, 2}}));
    CHECK(k.b_orders == ints({2}));

    AlternateModule q = quotient_by_kernel(reference_module()).quotient;
    Classification c = classify(q);
    CHECK(product(c.b_orders) == 4);
    CHECK(is_isometry(q, standard_symplectic(c.b_orders), c.isometry));
    CHECK(brute_isometric(q, standard_symplectic(c.b_orders)));
}

TEST_CASE("classify rejects degenerate modules") {
    CHECK_THROWS_AS(classify(reference_module()), std::domain_error);
    CHECK_THROWS_AS(classify(trivial_module({2})), std::domain_error);
}

TEST_CASE("classification roundtrip on standard modules") {
    std::vector<std::vector<Int>> shapes = {
        ints({2}),    ints({3}),       ints({4}),    ints({2, 2}), ints({2, 4}),
        ints({4, 2}), ints({2, 2, 2}), ints({6}),    ints({2, 6}), ints({12}),
        ints({3, 9}), ints({8}),       ints({2, 8}), ints({10}),   ints({15})};
    for (const auto& L : shapes) {
        Classification c = classify(standard_symplectic(L));
        REQUIRE(c.b_orders == invariant_factors_of(L));
        REQUIRE(is_isometry(standard_symplectic(L), standard_symplectic(c.b_orders), c.isometry));
    }
}

TEST_CASE("same group forces the same classification") {
    // two different symplectic fillings of Z/4 x Z/4
    AlternateModule a = make_module({4, 4}, {{0, 1, 1, 4}});
    AlternateModule b = make_module({4, 4}, {{0, 1, 3, 4}});
    CHECK(classify(a).b_orders == classify(b).b_orders);
    CHECK(classify(a).b_orders == ints({4}));

    std::mt19937 rng(73);
    int seen = 0;
    for (int rounds = 0; rounds < 100 && seen < 10; ++rounds) {
        AlternateModule m1 = testutil::random_symplectic(rng, {2, 3}, 144, 3);
        std::vector<Int> b1 = classify(m1).b_orders;
        // random symplectic refilling of the same group when one exists
        for (int tries = 0; tries < 50; ++tries) {
            std::mt19937 rng2(rng());
            AlternateModule cand = [&] {
                const std::size_t r = m1.rank();
                Mat<QZ> gram(r, r);
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = i + 1; j < r; ++j) {
                        const long g = gcd(m1.group().orders[i], m1.group().orders[j])
                                           .convert_to<long>();
                        gram(i, j) = QZ(static_cast<long>(rng2() % g), g);
                        gram(j, i) = -gram(i, j);
                    }
                return AlternateModule(m1.group(), std::move(gram));
            }();
            if (!is_symplectic(cand)) continue;
            REQUIRE(classify(cand).b_orders == b1);
            ++seen;
            break;
        }
    }
    REQUIRE(seen == 10);
}

TEST_CASE("classify random symplectic modules, including mixed primes") {
    std::mt19937 rng(79);
    for (int t = 0; t < 60; ++t) {
        AlternateModule m = testutil::random_symplectic(rng, {2, 3, 5}, 1024, 4);
        Classification c = classify(m);
        REQUIRE(product(c.b_orders) * product(c.b_orders) == m.cardinality());
        REQUIRE(is_isometry(m, standard_symplectic(c.b_orders), c.isometry));
        // b_orders is divisibility-ordered
        for (std::size_t i = 0; i + 1 < c.b_orders.size(); ++i)
            REQUIRE(c.b_orders[i + 1] % c.b_orders[i] == 0);
    }
}

TEST_CASE("ortho_sum of standard modules classifies like their product group") {
    AlternateModule s = ortho_sum(standard_symplectic(ints({2})), standard_symplectic(ints({3})));
    Classification c = classify(s);
    CHECK(c.b_orders == ints({6}));
    CHECK(brute_isometric(s, standard_symplectic(ints({6}))));
}
