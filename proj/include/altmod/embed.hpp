#pragma once

#include <algorithm>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "altmod/symplectic.hpp"

namespace altmod {

/// The three extension shapes of the fundamental step.
enum class StepKind { case1_adjoin_zp, case2_split_symplectic, case2_stretch_generator };

inline const char* step_kind_name(StepKind k) {
    switch (k) {
        case StepKind::case1_adjoin_zp: return "case1_adjoin_zp";
        case StepKind::case2_split_symplectic: return "case2_split_symplectic";
        case StepKind::case2_stretch_generator: return "case2_stretch_generator";
    }
    return "unknown";
}

/// One kernel-shrinking extension: an inclusion of the input module into an
/// output module of index p whose kernel is smaller by index p, together
/// with the witnesses that make the step checkable after the fact.
struct ExtensionStep {
    StepKind kind;
    Int prime;
    AlternateModule input;
    AlternateModule output;
    Morphism inclusion;  // input -> output, injective and form-preserving

    /// Generator order used internally: slot k of the divisibility-sorted
    /// view held input generator sort_perm[k]. Identity for the standalone
    /// constructors, which work in the coordinates they are given.
    std::vector<std::size_t> sort_perm;

    /// An element of the input kernel whose image leaves the output kernel,
    /// in input coordinates; for case 1 this is the chosen k_0 itself.
    GroupElement kernel_drop_witness;

    /// case 1: k_0 pairs with the adjoined generator through slot i_0 (a
    /// sorted-view index), where k_0 has a coordinate prime to p.
    std::size_t case1_i0 = 0;

    /// stretch: which sorted-view generator was stretched, the p-th roots
    /// chosen for its pairings (index-aligned with the generators, zero at
    /// the stretched slot), and the Lagrangian-constancy data a_0, p^k with
    /// p^k a_0 = kernel_drop_witness.
    std::size_t stretch_index = 0;
    std::vector<QZ> stretch_roots;
    GroupElement stretch_a0;
    Int stretch_pk{0};

    /// split: the hyperbolic pair (e, e_i) in input coordinates, and the
    /// recursive step taken on its orthogonal complement.
    std::vector<GroupElement> split_pair;
    std::shared_ptr<const ExtensionStep> split_inner;

    ExtensionStep(StepKind k, Int p, AlternateModule in, AlternateModule out, Morphism incl)
        : kind(k),
          prime(std::move(p)),
          input(std::move(in)),
          output(std::move(out)),
          inclusion(std::move(incl)) {
        sort_perm.resize(input.rank());
        for (std::size_t i = 0; i < input.rank(); ++i) sort_perm[i] = i;
    }
};

namespace detail {

inline void require_prime_primary(const AlternateModule& m, const Int& p) {
    if (!is_prime(p)) throw std::invalid_argument("expected a prime number");
    if (!m.group().is_p_group(p))
        throw std::domain_error("module is not primary for the given prime");
}

/// Construction-independent checks every step must pass: exact pullback,
/// injectivity, growth by index exactly p.
inline void check_step_inclusion(const ExtensionStep& s) {
    if (!is_form_preserving(s.input, s.output, s.inclusion))
        throw std::logic_error("extension step: inclusion does not pull the form back");
    if (!morphism_is_injective(s.inclusion))
        throw std::logic_error("extension step: inclusion is not injective");
    if (s.output.cardinality() != s.prime * s.input.cardinality())
        throw std::logic_error("extension step: output does not have index p");
}

/// Lagrangian-constancy bookkeeping: the witness lies in the input kernel
/// but leaves the output kernel, the output kernel sits inside the old one
/// with index exactly p, and n is unchanged.
inline void check_step_kernel_drop(const ExtensionStep& s) {
    if (lagrangian_cardinal(s.input) != lagrangian_cardinal(s.output))
        throw std::logic_error("extension step: Lagrangian cardinal changed");
    Subgroup kin = kernel(s.input), kout = kernel(s.output);
    if (kin.cardinality() != s.prime * kout.cardinality())
        throw std::logic_error("extension step: kernel index is not p");
    if (!kin.contains(s.kernel_drop_witness))
        throw std::logic_error("extension step: witness is outside the input kernel");
    if (kout.contains(s.inclusion.apply(s.kernel_drop_witness)))
        throw std::logic_error("extension step: witness did not leave the kernel");
    std::vector<GroupElement> img;
    img.reserve(kin.gens().size());
    for (const auto& g : kin.gens()) img.push_back(s.inclusion.apply(g));
    if (!subgroup_generated(s.output.group(), img).contains(kout))
        throw std::logic_error("extension step: output kernel left the embedded input kernel");
}

/// Stable ascending reordering of the generators; for a primary group this
/// is a divisibility-ordered decomposition. Slot k of the view holds input
/// generator perm[k].
struct SortedView {
    std::vector<std::size_t> perm;
    AlternateModule module;
    Morphism to_sorted;  // coordinate permutation, input group -> sorted group
};

inline SortedView sorted_view(const AlternateModule& m) {
    const std::size_t r = m.rank();
    std::vector<std::size_t> perm(r);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        return m.group().orders[a] < m.group().orders[b];
    });
    std::vector<Int> orders(r);
    Mat<QZ> gram(r, r);
    for (std::size_t k = 0; k < r; ++k) {
        orders[k] = m.group().orders[perm[k]];
        for (std::size_t l = 0; l < r; ++l) gram(k, l) = m.gram()(perm[k], perm[l]);
    }
    AlternateModule sorted(FinAbGroup(std::move(orders)), std::move(gram));
    IntMat images(r, r);
    for (std::size_t k = 0; k < r; ++k) images(k, perm[k]) = 1;
    Morphism sigma(m.group(), sorted.group(), std::move(images));
    return {std::move(perm), std::move(sorted), std::move(sigma)};
}

/// Pull a sorted-view element back to input coordinates.
inline GroupElement unsort(const std::vector<std::size_t>& perm, const GroupElement& xs) {
    GroupElement x(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) x[perm[k]] = xs[k];
    return x;
}

}  // namespace detail

/// Case 1 extension: when the kernel reaches outside pA, adjoin a Z/p
/// generator gamma pairing 1/p with generator e_{i_0}, where i_0 is the
/// first coordinate of the first canonical kernel generator k_0 outside pA
/// that is prime to p. Then gamma pairs with k_0 to alpha_{i_0}/p, which is
/// nonzero, so k_0 leaves the kernel while nothing else changes.
inline ExtensionStep extend_case1(const AlternateModule& m, const Int& p) {
    detail::require_prime_primary(m, p);
    Subgroup k = kernel(m);
    const std::size_t r = m.rank();
    std::size_t gi = k.gens().size(), i0 = r;
    for (std::size_t g = 0; g < k.gens().size() && gi == k.gens().size(); ++g)
        for (std::size_t i = 0; i < r; ++i)
            if (k.gens()[g][i] % p != 0) {
                gi = g;
                i0 = i;
                break;
            }
    if (gi == k.gens().size())
        throw std::domain_error("extend_case1: kernel is contained in p A");
    const GroupElement k0 = k.gens()[gi];

    std::vector<Int> orders;
    orders.reserve(r + 1);
    orders.push_back(p);
    orders.insert(orders.end(), m.group().orders.begin(), m.group().orders.end());
    Mat<QZ> gram(r + 1, r + 1);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) gram(1 + i, 1 + j) = m.gram()(i, j);
    gram(0, 1 + i0) = QZ(1, p);
    gram(1 + i0, 0) = QZ(-1, p);
    AlternateModule out(FinAbGroup(std::move(orders)), std::move(gram));

    IntMat images(r + 1, r);
    for (std::size_t j = 0; j < r; ++j) images(1 + j, j) = 1;
    Morphism incl(m.group(), out.group(), std::move(images));

    ExtensionStep step(StepKind::case1_adjoin_zp, p, m, out, std::move(incl));
    step.case1_i0 = i0;
    step.kernel_drop_witness = k0;
    detail::check_step_inclusion(step);
    detail::check_step_kernel_drop(step);
    return step;
}

/// Stretch extension: replace the designated generator e by a generator
/// e-hat of order p times larger with p e-hat = e, choosing the canonical
/// p-th root a/(p m) for each pairing a/m of e. Requires every pairing of e
/// to have order strictly below the order of its partner, which makes the
/// stretched Gram order-compatible.
inline ExtensionStep extend_stretch(const AlternateModule& m, const Int& p, std::size_t e_index) {
    detail::require_prime_primary(m, p);
    const std::size_t r = m.rank();
    if (e_index >= r) throw std::out_of_range("extend_stretch: generator index out of range");
    for (std::size_t i = 0; i < r; ++i) {
        if (i == e_index) continue;
        if (m.gram()(e_index, i).order() == m.group().orders[i])
            throw std::domain_error("extend_stretch: pairing with generator " +
                                    std::to_string(i) + " has full order");
    }

    std::vector<Int> orders = m.group().orders;
    orders[e_index] *= p;
    Mat<QZ> gram = m.gram();
    std::vector<QZ> roots(r);
    for (std::size_t i = 0; i < r; ++i) {
        if (i == e_index) continue;
        roots[i] = pth_root(m.gram()(e_index, i), p);
        gram(e_index, i) = roots[i];
        gram(i, e_index) = -roots[i];
    }
    AlternateModule out(FinAbGroup(std::move(orders)), std::move(gram));

    IntMat images = IntMat::identity(r);
    images(e_index, e_index) = p;
    Morphism incl(m.group(), out.group(), std::move(images));

    ExtensionStep step(StepKind::case2_stretch_generator, p, m, out, std::move(incl));
    step.stretch_index = e_index;
    step.stretch_roots = std::move(roots);
    detail::check_step_inclusion(step);
    return step;
}

/// One step of the Fundamental Lemma on a non-symplectic primary module:
///   (a) the kernel reaches outside pA: adjoin Z/p (case 1);
/// otherwise, over the divisibility-sorted view with e the smallest-order
/// generator,
///   (b) some pairing of e has the full order of its partner: split off the
///       hyperbolic plane they span and recurse on its complement;
///   (c) all pairings of e are strict: stretch e, with the constancy
///       witness p^k a_0 located through the classification of A/K.
/// Every produced step is checked to embed with index p at constant
/// Lagrangian cardinal, its kernel dropping by exactly index p.
inline ExtensionStep fundamental_step(const AlternateModule& m, const Int& p) {
    detail::require_prime_primary(m, p);
    Subgroup ker = kernel(m);
    if (ker.is_trivial())
        throw std::domain_error("fundamental_step: module is symplectic, no step needed");

    for (const auto& g : ker.gens())
        for (const auto& c : g)
            if (c % p != 0) return extend_case1(m, p);

    // case 2: K <= pA
    detail::SortedView view = detail::sorted_view(m);
    const AlternateModule& ms = view.module;
    const std::vector<Int>& sor = ms.group().orders;
    const std::size_t r = ms.rank();

    std::size_t hi = r;
    for (std::size_t i = 1; i < r && hi == r; ++i)
        if (ms.gram()(0, i).order() == sor[i]) hi = i;

    if (hi < r) {
        // (b): e and e_hi span Z/d x (Z/d)*; both orders collapse to d
        const QZ q = ms.gram()(0, hi);
        const Int d = q.den();
        if (d != sor[0] || d != sor[hi])
            throw std::logic_error("fundamental_step: hyperbolic pair orders are inconsistent");
        const GroupElement x = ms.group().generator(0);
        const GroupElement y =
            ms.group().scale(inv_mod(q.num(), d), ms.group().generator(hi));
        SymplecticSplit split = split_symplectic_on_basis(ms, {x, y}, {d, d});
        if (split.inner != standard_symplectic({d}))
            throw std::logic_error("fundamental_step: normalized pair is not hyperbolic");
        auto inner = std::make_shared<const ExtensionStep>(fundamental_step(split.outer, p));

        AlternateModule out = ortho_sum(split.inner, inner->output);
        Morphism up =
            direct_sum_morphism(Morphism::identity(split.inner.group()), inner->inclusion);
        Morphism incl =
            morphism_compose(up, morphism_compose(split.isometry, view.to_sorted));

        ExtensionStep step(StepKind::case2_split_symplectic, p, m, std::move(out),
                           std::move(incl));
        step.sort_perm = view.perm;
        step.split_pair = {m.group().generator(view.perm[0]),
                           m.group().generator(view.perm[hi])};
        step.kernel_drop_witness = detail::unsort(
            view.perm, split.outer_inclusion.apply(inner->kernel_drop_witness));
        step.split_inner = std::move(inner);
        detail::check_step_inclusion(step);
        detail::check_step_kernel_drop(step);
        return step;
    }

    // (c): stretch the smallest-order generator
    ExtensionStep raw = extend_stretch(ms, p, 0);
    QuotientResult qr = quotient_by_kernel(ms);
    Classification cls = classify(qr.quotient);
    Morphism to_std = morphism_compose(cls.isometry, qr.projection);
    const GroupElement z = to_std.apply(ms.group().generator(0));
    const std::size_t s = cls.b_orders.size();

    // pi(e) is outside p(A/K), so some coefficient is prime to p; prefer a
    // dual-block one, otherwise exchange the roles of the slot's generators
    std::size_t i0 = s;
    bool dual_partner = false;
    for (std::size_t i = 0; i < s && i0 == s; ++i)
        if (z[s + i] % p != 0) i0 = i;
    if (i0 == s) {
        for (std::size_t i = 0; i < s && !dual_partner; ++i)
            if (z[i] % p != 0) {
                i0 = i;
                dual_partner = true;
            }
    }
    if (i0 == s)
        throw std::logic_error("fundamental_step: projected generator is divisible by p");

    const Int pk = cls.b_orders[i0];
    const GroupElement target = to_std.target().generator(dual_partner ? s + i0 : i0);
    auto a0 = Subgroup::solve_congruence(to_std.images(), to_std.target().orders, target);
    if (!a0) throw std::logic_error("fundamental_step: no preimage for the slot generator");
    const GroupElement a0r = ms.group().reduce(*a0);
    if (evaluate(ms, ms.group().generator(0), ms.group().scale(pk / p, a0r)).is_zero())
        throw std::logic_error("fundamental_step: stretch witness pairing vanishes");

    ExtensionStep step(StepKind::case2_stretch_generator, p, m, raw.output,
                       morphism_compose(raw.inclusion, view.to_sorted));
    step.sort_perm = view.perm;
    step.stretch_index = 0;
    step.stretch_roots = raw.stretch_roots;
    step.stretch_a0 = detail::unsort(view.perm, a0r);
    step.stretch_pk = pk;
    step.kernel_drop_witness = detail::unsort(view.perm, ms.group().scale(pk, a0r));
    detail::check_step_inclusion(step);
    detail::check_step_kernel_drop(step);
    return step;
}

/// A verified embedding of a module into a standard symplectic module of
/// Lagrangian size, with the extension trace that produced it.
struct EmbeddingCertificate {
    AlternateModule source;
    std::vector<Int> b_orders;
    Morphism embedding;  // source.group -> standard_symplectic(b_orders).group
    std::vector<ExtensionStep> trace;
};

/// Verdict of certificate verification; violations are data, not
/// exceptions, and an empty list means the certificate is valid.
struct VerifyResult {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Check an embedding claim from raw parts, without trusting how it was
/// produced: b_orders must multiply to the Lagrangian cardinal of the
/// source, and the matrix must define an injective morphism into
/// standard_symplectic(b_orders) pulling the standard form back to the
/// source form.
inline VerifyResult verify_embedding(const AlternateModule& source,
                                     const std::vector<Int>& b_orders, const IntMat& map) {
    VerifyResult res;
    bool b_ok = true;
    for (const auto& b : b_orders)
        if (b < 2) b_ok = false;
    if (!b_ok) {
        res.violations.push_back("b_orders: every entry must be at least 2");
        return res;
    }
    Int prod(1);
    for (const auto& b : b_orders) prod *= b;
    if (prod != lagrangian_cardinal(source))
        res.violations.push_back(
            "cardinality: product of b_orders differs from the Lagrangian cardinal");

    AlternateModule std_mod = standard_symplectic(b_orders);
    const std::size_t r = source.rank(), t = std_mod.rank();
    if (map.rows() != t || map.cols() != r) {
        res.violations.push_back("shape: embedding matrix is not (2 s) x rank");
        return res;
    }
    bool well = true;
    for (std::size_t j = 0; j < r; ++j) {
        GroupElement img(t);
        for (std::size_t i = 0; i < t; ++i) img[i] = map(i, j);
        img = std_mod.group().reduce(img);
        if (!std_mod.group().is_zero(
                std_mod.group().scale(source.group().orders[j], img))) {
            res.violations.push_back("well-definedness: generator " + std::to_string(j) +
                                     " maps to an element not killed by its order");
            well = false;
        }
    }
    if (!well) return res;

    Morphism f(source.group(), std_mod.group(), map);
    if (!morphism_is_injective(f))
        res.violations.push_back("injectivity: the embedding has a nontrivial kernel");
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j)
            if (evaluate(std_mod, f.image_of_generator(i), f.image_of_generator(j)) !=
                source.gram()(i, j))
                res.violations.push_back("form: pairing of generators (" + std::to_string(i) +
                                         ", " + std::to_string(j) + ") is not preserved");
    return res;
}

inline VerifyResult verify_certificate(const EmbeddingCertificate& c) {
    if (c.embedding.source() != c.source.group())
        return {{"endpoints: embedding does not start at the source group"}};
    std::vector<Int> expect = c.b_orders;
    expect.insert(expect.end(), c.b_orders.begin(), c.b_orders.end());
    if (c.embedding.target().orders != expect)
        return {{"endpoints: embedding does not land in the claimed standard module"}};
    return verify_embedding(c.source, c.b_orders, c.embedding.images());
}

/// Embed a primary module: apply fundamental steps until the kernel is
/// trivial (each divides it by p, so this ends after log_p |K| steps), then
/// classify the symplectic result and compose the whole chain.
inline EmbeddingCertificate embed_p(const AlternateModule& m, const Int& p) {
    detail::require_prime_primary(m, p);
    std::vector<ExtensionStep> trace;
    AlternateModule cur = m;
    Morphism chain = Morphism::identity(m.group());
    while (!is_symplectic(cur)) {
        ExtensionStep step = fundamental_step(cur, p);
        chain = morphism_compose(step.inclusion, chain);
        cur = step.output;
        trace.push_back(std::move(step));
    }
    Classification cls = classify(cur);
    Morphism embedding = morphism_compose(cls.isometry, chain);
    EmbeddingCertificate cert{m, std::move(cls.b_orders), std::move(embedding),
                              std::move(trace)};
    Int prod(1);
    for (const auto& b : cert.b_orders) prod *= b;
    if (prod != lagrangian_cardinal(m))
        throw std::logic_error("embed: B does not have the Lagrangian cardinal");
    return cert;
}

/// Embed an arbitrary module: embed each primary part and glue the targets
/// into the standard module of the CRT-merged b_orders. The final
/// certificate is verified before it is returned.
inline EmbeddingCertificate embed(const AlternateModule& m) {
    auto parts = sylow_decompose(m);
    std::vector<std::vector<Int>> part_orders;
    std::vector<Morphism> part_maps;
    std::vector<ExtensionStep> trace;
    for (const auto& [p, part, incl] : parts) {
        (void)incl;
        EmbeddingCertificate c = embed_p(part, p);
        part_orders.push_back(std::move(c.b_orders));
        part_maps.push_back(std::move(c.embedding));
        for (auto& s : c.trace) trace.push_back(std::move(s));
    }
    auto [b_orders, embedding] = detail::merge_primary_parts(m, parts, part_orders, part_maps);
    EmbeddingCertificate cert{m, std::move(b_orders), std::move(embedding), std::move(trace)};
    VerifyResult v = verify_certificate(cert);
    if (!v.ok()) throw std::logic_error("embed: certificate rejected: " + v.violations.front());
    return cert;
}

}  // namespace altmod
