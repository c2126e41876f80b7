#pragma once

#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "altmod/altmodule.hpp"

namespace altmod {

/// Result of classifying a symplectic module: the divisibility-ordered
/// invariant factors b_1 | ... | b_s of a Lagrangian B, together with an
/// isometry onto standard_symplectic(b_orders).
struct Classification {
    std::vector<Int> b_orders;
    Morphism isometry;
};

/// A generator pair (e_i, e_j), i < j, whose pairing attains the maximal
/// order among all generator pairs. For a symplectic p-group module that
/// order equals the group exponent, which makes the pair hyperbolic after
/// normalization. Scans row-major and keeps the first pair attaining the
/// maximum.
inline std::pair<GroupElement, GroupElement> max_pairing_pair(const AlternateModule& m) {
    if (m.rank() == 0) throw std::domain_error("max_pairing_pair: module is trivial");
    if (prime_divisors(m.cardinality()).size() != 1)
        throw std::domain_error("max_pairing_pair: module is not primary");
    if (!is_symplectic(m)) throw std::domain_error("max_pairing_pair: kernel is nontrivial");
    Int best(1);
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < m.rank(); ++i)
        for (std::size_t j = i + 1; j < m.rank(); ++j) {
            const Int o = m.gram()(i, j).order();
            if (o > best) {
                best = o;
                bi = i;
                bj = j;
            }
        }
    // for symplectic primary modules the maximum is always the exponent
    if (best != m.group().exponent())
        throw std::logic_error("max_pairing_pair: maximal pairing order below the exponent");
    return {m.group().generator(bi), m.group().generator(bj)};
}

/// Orthogonal splitting along a symplectic submodule B: A = B + B-perp with
/// the witnessing isometry onto ortho_sum(inner, outer). The inclusions of
/// both halves back into A are kept as well.
struct SymplecticSplit {
    AlternateModule inner;
    AlternateModule outer;
    Morphism isometry;         // A -> ortho_sum(inner, outer)
    Morphism inner_inclusion;  // inner -> A
    Morphism outer_inclusion;  // outer -> A
};

/// Split along an explicit independent generating set of B with known
/// orders. Each ambient generator e_j is decomposed as b + c: the B-part
/// coefficients solve the inner Gram system against phi(e_j, -), and the
/// remainder lands in B-perp by construction.
inline SymplecticSplit split_symplectic_on_basis(const AlternateModule& m,
                                                 const std::vector<GroupElement>& basis,
                                                 const std::vector<Int>& orders) {
    auto [inner, inner_incl] = induced_on_basis(m, basis, orders);
    if (!is_symplectic(inner))
        throw std::domain_error("split_symplectic_submodule: induced form on B is degenerate");
    Subgroup b_sub = subgroup_generated(m.group(), basis);
    if (b_sub.cardinality() != inner.cardinality())
        throw std::invalid_argument("split_symplectic_submodule: basis is not independent");
    Subgroup bperp = orthogonal(m, b_sub);
    auto [outer, outer_incl] = induced_submodule(m, bperp);
    if (inner.cardinality() * outer.cardinality() != m.cardinality())
        throw std::logic_error("split_symplectic_submodule: |B| |B-perp| != |A|");
    AlternateModule target = ortho_sum(inner, outer);

    const std::size_t k = basis.size(), r = m.rank();
    const Int eb = inner.group().exponent();
    // rows: constraints against each basis element, columns: unknowns
    IntMat sys(k, k);
    for (std::size_t l = 0; l < k; ++l)
        for (std::size_t c = 0; c < k; ++c) {
            const QZ q = inner.gram()(c, l);
            sys(l, c) = pos_mod((eb / q.den()) * q.num(), eb);
        }
    std::vector<Int> row_moduli(k, eb);
    IntMat images(target.rank(), r);
    for (std::size_t j = 0; j < r; ++j) {
        IntVec rhs(k);
        for (std::size_t l = 0; l < k; ++l) {
            const QZ q = evaluate(m, m.group().generator(j), basis[l]);
            rhs[l] = pos_mod((eb / q.den()) * q.num(), eb);
        }
        auto beta = Subgroup::solve_congruence(sys, row_moduli, rhs);
        if (!beta)
            throw std::logic_error("split_symplectic_submodule: B-part decomposition failed");
        GroupElement c_part = m.group().generator(j);
        for (std::size_t l = 0; l < k; ++l)
            c_part = m.group().add(c_part,
                                   m.group().scale(-(*beta)[l], basis[l]));
        auto gamma = bperp.coordinates(c_part);
        if (!gamma)
            throw std::logic_error("split_symplectic_submodule: remainder left B-perp");
        for (std::size_t l = 0; l < k; ++l) images(l, j) = pos_mod((*beta)[l], orders[l]);
        for (std::size_t l = 0; l < gamma->size(); ++l) images(k + l, j) = (*gamma)[l];
    }
    Morphism iso(m.group(), target.group(), std::move(images));
    if (!is_isometry(m, target, iso))
        throw std::logic_error("split_symplectic_submodule: assembled map is not an isometry");
    return {std::move(inner), std::move(outer), std::move(iso),
            std::move(inner_incl), std::move(outer_incl)};
}

/// Split along a symplectic subgroup, over its canonical basis.
inline SymplecticSplit split_symplectic_submodule(const AlternateModule& m, const Subgroup& b) {
    if (b.ambient() != m.group())
        throw std::invalid_argument("split_symplectic_submodule: subgroup has a different ambient");
    return split_symplectic_on_basis(m, b.gens(), b.canonical_orders());
}

namespace detail {

/// Isometry from the orthogonal sum of per-prime standard modules onto the
/// standard module of the merged invariant factors. Lists are aligned at
/// their largest entries; slot t of the merge receives, from each prime,
/// multiples of the slot generators glued by CRT coefficients.
inline std::pair<std::vector<Int>, Morphism> crt_merge_standard(
    const std::vector<std::vector<Int>>& per_prime) {
    std::size_t depth = 0;
    for (const auto& l : per_prime) depth = std::max(depth, l.size());
    std::vector<Int> merged(depth, Int(1));
    for (const auto& l : per_prime) {
        const std::size_t off = depth - l.size();
        for (std::size_t i = 0; i < l.size(); ++i) merged[off + i] *= l[i];
    }
    std::vector<Int> src_orders;
    for (const auto& l : per_prime)
        for (int half = 0; half < 2; ++half)
            src_orders.insert(src_orders.end(), l.begin(), l.end());
    FinAbGroup src(src_orders);
    std::vector<Int> tgt_orders = merged;
    tgt_orders.insert(tgt_orders.end(), merged.begin(), merged.end());
    FinAbGroup tgt(tgt_orders);
    IntMat images(tgt.rank(), src.rank());
    std::size_t base = 0;
    for (const auto& l : per_prime) {
        const std::size_t off = depth - l.size(), s = l.size();
        for (std::size_t i = 0; i < s; ++i) {
            const std::size_t t = off + i;
            const Int mult = merged[t] / l[i];
            images(t, base + i) = mult;
            images(depth + t, base + s + i) = pos_mod(mult * inv_mod(mult, l[i]), merged[t]);
        }
        base += 2 * s;
    }
    return {std::move(merged), Morphism(std::move(src), std::move(tgt), std::move(images))};
}

/// Classification of a symplectic primary module by hyperbolic reduction:
/// normalize a maximal pair into an exact hyperbolic plane, split it off,
/// recurse on the complement and append the plane's order (the exponent, so
/// divisibility order is preserved).
inline Classification classify_p_group(const AlternateModule& m) {
    if (m.rank() == 0) return {{}, Morphism::identity(m.group())};
    auto [x, y] = max_pairing_pair(m);
    const QZ q = evaluate(m, x, y);
    const Int d = q.den();
    const GroupElement y2 = m.group().scale(inv_mod(q.num(), d), y);
    SymplecticSplit split = split_symplectic_on_basis(m, {x, y2}, {d, d});
    if (split.inner != standard_symplectic({d}))
        throw std::logic_error("classify: normalized pair is not an exact hyperbolic plane");
    Classification rec = classify_p_group(split.outer);
    const std::size_t k = rec.b_orders.size();
    Morphism middle =
        direct_sum_morphism(Morphism::identity(split.inner.group()), rec.isometry);

    std::vector<Int> b_orders = rec.b_orders;
    b_orders.push_back(d);
    // permute [f_d, f_d*, F, F*] into the standard layout [F, f_d, F*, f_d*]
    IntMat perm(2 * (k + 1), 2 * (k + 1));
    perm(k, 0) = 1;
    perm(2 * k + 1, 1) = 1;
    for (std::size_t j = 0; j < k; ++j) {
        perm(j, 2 + j) = 1;
        perm(k + 1 + j, 2 + k + j) = 1;
    }
    Morphism shuffle(middle.target(), standard_symplectic(b_orders).group(), std::move(perm));
    Morphism total = morphism_compose(shuffle, morphism_compose(middle, split.isometry));
    return {std::move(b_orders), std::move(total)};
}

/// Glue per-prime maps part_p -> standard_symplectic(L_p) into one map from
/// m to the standard module of the CRT-merged invariant factors, through the
/// inverse of the primary-decomposition inclusion. The result preserves the
/// form; it is injective whenever every part map is, and bijective whenever
/// every part map is.
inline std::pair<std::vector<Int>, Morphism> merge_primary_parts(
    const AlternateModule& m,
    const std::vector<std::tuple<Int, AlternateModule, Morphism>>& parts,
    const std::vector<std::vector<Int>>& part_orders, const std::vector<Morphism>& part_maps) {
    std::vector<Int> sum_orders;
    for (const auto& [p, part, incl] : parts) {
        (void)p;
        (void)incl;
        sum_orders.insert(sum_orders.end(), part.group().orders.begin(),
                          part.group().orders.end());
    }
    FinAbGroup sum_group(sum_orders);
    IntMat incl_images(m.rank(), sum_group.rank());
    std::size_t col = 0;
    for (const auto& [p, part, incl] : parts) {
        (void)p;
        for (std::size_t j = 0; j < part.rank(); ++j, ++col) {
            const GroupElement img = incl.image_of_generator(j);
            for (std::size_t i = 0; i < m.rank(); ++i) incl_images(i, col) = img[i];
        }
    }
    Morphism h = morphism_inverse(Morphism(sum_group, m.group(), std::move(incl_images)));
    Morphism block(FinAbGroup(std::vector<Int>{}), FinAbGroup(std::vector<Int>{}), IntMat(0, 0));
    for (const Morphism& f : part_maps) block = direct_sum_morphism(block, f);
    auto [merged, crt] = crt_merge_standard(part_orders);
    Morphism total = morphism_compose(crt, morphism_compose(block, h));
    return {std::move(merged), std::move(total)};
}

}  // namespace detail

/// Classification of a symplectic module into standard form: per-prime
/// hyperbolic reduction on the primary parts, then a CRT merge of the
/// per-prime invariant factors. The returned isometry is verified before it
/// is handed out.
inline Classification classify(const AlternateModule& m) {
    if (!is_symplectic(m)) throw std::domain_error("classify: kernel is nontrivial");
    if (m.rank() == 0) return {{}, Morphism::identity(m.group())};
    auto parts = sylow_decompose(m);
    std::vector<std::vector<Int>> part_orders;
    std::vector<Morphism> part_maps;
    for (const auto& [p, part, incl] : parts) {
        (void)p;
        (void)incl;
        Classification c = detail::classify_p_group(part);
        part_orders.push_back(std::move(c.b_orders));
        part_maps.push_back(std::move(c.isometry));
    }
    auto [b_orders, iso] = detail::merge_primary_parts(m, parts, part_orders, part_maps);
    if (!is_isometry(m, standard_symplectic(b_orders), iso))
        throw std::logic_error("classify: assembled map is not an isometry");
    return {std::move(b_orders), std::move(iso)};
}

}  // namespace altmod
