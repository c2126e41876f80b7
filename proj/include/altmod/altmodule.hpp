#pragma once

#include "altmod/group.hpp"
#include "altmod/integers.hpp"
#include "altmod/matrix.hpp"
#include "altmod/morphism.hpp"
#include "altmod/qz.hpp"
#include "altmod/snf.hpp"
#include "altmod/subgroup.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace altmod {

/// A finite abelian group together with an alternating bilinear form into
/// Q/Z, stored as the Gram matrix of a fixed cyclic decomposition:
/// gram(i, j) = phi(e_i, e_j).
///
/// Construction enforces the three structural invariants:
///   - alternate: the diagonal is zero,
///   - antisymmetry: gram(i, j) = -gram(j, i) in Q/Z,
///   - order-compatibility: d_i * gram(i, j) = d_j * gram(i, j) = 0, i.e.
///     the order of gram(i, j) divides gcd(d_i, d_j).
class AlternateModule {
  public:
    AlternateModule(FinAbGroup group, Mat<QZ> gram)
        : group_(std::move(group)), gram_(std::move(gram)) {
        const std::size_t r = group_.rank();
        if (gram_.rows() != r || gram_.cols() != r)
            throw std::invalid_argument("AlternateModule: gram shape mismatch");
        for (std::size_t i = 0; i < r; ++i) {
            if (!gram_(i, i).is_zero())
                throw std::invalid_argument(gram_violation("alternate", i, i));
            for (std::size_t j = 0; j < r; ++j) {
                if (gram_(i, j) != -gram_(j, i))
                    throw std::invalid_argument(gram_violation("antisymmetry", i, j));
                if (gcd(group_.orders[i], group_.orders[j]) % gram_(i, j).order() != 0)
                    throw std::invalid_argument(gram_violation("order-compatibility", i, j));
            }
        }
    }

    /// The module with the zero form on the given group.
    static AlternateModule trivial_form(const FinAbGroup& g) {
        return AlternateModule(g, Mat<QZ>(g.rank(), g.rank()));
    }

    const FinAbGroup& group() const { return group_; }
    const Mat<QZ>& gram() const { return gram_; }
    std::size_t rank() const { return group_.rank(); }
    Int cardinality() const { return group_.cardinality(); }

    friend bool operator==(const AlternateModule& a, const AlternateModule& b) {
        return a.group_ == b.group_ && a.gram_ == b.gram_;
    }
    friend bool operator!=(const AlternateModule& a, const AlternateModule& b) {
        return !(a == b);
    }

  private:
    static std::string gram_violation(const char* which, std::size_t i, std::size_t j) {
        return std::string("AlternateModule: ") + which + " invariant violated at gram[" +
               std::to_string(i) + "][" + std::to_string(j) + "]";
    }

    FinAbGroup group_;
    Mat<QZ> gram_;
};

/// phi(a, b) by bilinear expansion; accepts arbitrary integer coordinates.
inline QZ evaluate(const AlternateModule& m, const IntVec& a, const IntVec& b) {
    const std::size_t r = m.rank();
    if (a.size() != r || b.size() != r)
        throw std::invalid_argument("evaluate: coordinate length mismatch");
    GroupElement x = m.group().reduce(a), y = m.group().reduce(b);
    QZ acc;
    for (std::size_t i = 0; i < r; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < r; ++j) {
            if (y[j] == 0) continue;
            acc = acc + (x[i] * y[j]) * m.gram()(i, j);
        }
    }
    return acc;
}

/// Integer matrix E * gram with E the group exponent; the engine behind the
/// kernel and orthogonal computations (entries are exact integers by
/// order-compatibility).
inline IntMat scaled_gram(const AlternateModule& m) {
    const std::size_t r = m.rank();
    const Int e = m.group().exponent();
    IntMat n(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            n(i, j) = (e / m.gram()(i, j).den()) * m.gram()(i, j).num();
    return n;
}

/// The kernel K = {a : phi(a, b) = 0 for all b}, i.e. the radical of the
/// form, in canonical form.
inline Subgroup kernel(const AlternateModule& m) {
    const Int e = m.group().exponent();
    std::vector<Int> row_moduli(m.rank(), e);
    return solve_congruence_kernel(scaled_gram(m).transposed(), row_moduli, m.group().orders);
}

inline bool is_symplectic(const AlternateModule& m) { return kernel(m).is_trivial(); }

/// Orthogonal of a subgroup: {a : phi(a, s) = 0 for every s in S}, computed
/// from the canonical generators of S.
inline Subgroup orthogonal(const AlternateModule& m, const Subgroup& s) {
    if (s.ambient() != m.group())
        throw std::invalid_argument("orthogonal: subgroup has a different ambient group");
    const std::size_t r = m.rank();
    const Int e = m.group().exponent();
    const IntMat n = scaled_gram(m);
    const auto& gens = s.gens();
    IntMat sys(gens.size(), r);
    for (std::size_t k = 0; k < gens.size(); ++k)
        for (std::size_t i = 0; i < r; ++i) {
            Int acc = 0;
            for (std::size_t j = 0; j < r; ++j) acc += gens[k][j] * n(i, j);
            sys(k, i) = pos_mod(acc, e);
        }
    std::vector<Int> row_moduli(gens.size(), e);
    return solve_congruence_kernel(sys, row_moduli, m.group().orders);
}

/// Isotropy is decided on the generator pairs of S (enough, by bilinearity).
inline bool is_isotropic(const AlternateModule& m, const Subgroup& s) {
    const auto& gens = s.gens();
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i; j < gens.size(); ++j)
            if (!evaluate(m, gens[i], gens[j]).is_zero()) return false;
    return true;
}

inline bool is_lagrangian(const AlternateModule& m, const Subgroup& s) {
    return s == orthogonal(m, s);
}

/// The common cardinality of all Lagrangians, sqrt(|A| |K|). The product is
/// always a perfect square; the exactness check guards implementation bugs.
inline Int lagrangian_cardinal(const AlternateModule& m) {
    return exact_sqrt(m.cardinality() * kernel(m).cardinality());
}

/// A Lagrangian, by greedy saturation: starting from the kernel, adjoin the
/// first element of orthogonal(current) outside current (elements scanned by
/// lexicographic coefficients over the orthogonal's canonical basis) until
/// current equals its own orthogonal.
inline Subgroup find_lagrangian(const AlternateModule& m) {
    Subgroup current = kernel(m);
    for (;;) {
        Subgroup orth = orthogonal(m, current);
        if (current == orth) return current;
        const auto& gens = orth.gens();
        const auto& ords = orth.canonical_orders();
        IntVec coeff(gens.size());
        bool grown = false;
        for (;;) {
            // next tuple, last coordinate fastest
            std::size_t k = gens.size();
            while (k > 0) {
                --k;
                if (++coeff[k] < ords[k]) break;
                coeff[k] = 0;
                if (k == 0) { k = gens.size(); break; }
            }
            if (k == gens.size()) break;  // wrapped around: exhausted
            GroupElement x = m.group().zero();
            for (std::size_t i = 0; i < gens.size(); ++i)
                x = m.group().add(x, m.group().scale(coeff[i], gens[i]));
            if (!current.contains(x)) {
                auto new_gens = current.gens();
                new_gens.push_back(x);
                current = Subgroup(m.group(), new_gens);
                grown = true;
                break;
            }
        }
        if (!grown)
            throw std::logic_error("find_lagrangian: saturation stalled");  // unreachable
    }
}

/// Orthogonal sum: concatenated orders, block-diagonal Gram.
inline AlternateModule ortho_sum(const AlternateModule& m1, const AlternateModule& m2) {
    const std::size_t r1 = m1.rank(), r2 = m2.rank();
    std::vector<Int> orders = m1.group().orders;
    orders.insert(orders.end(), m2.group().orders.begin(), m2.group().orders.end());
    Mat<QZ> gram(r1 + r2, r1 + r2);
    for (std::size_t i = 0; i < r1; ++i)
        for (std::size_t j = 0; j < r1; ++j) gram(i, j) = m1.gram()(i, j);
    for (std::size_t i = 0; i < r2; ++i)
        for (std::size_t j = 0; j < r2; ++j) gram(r1 + i, r1 + j) = m2.gram()(i, j);
    return AlternateModule(FinAbGroup(std::move(orders)), std::move(gram));
}

/// The submodule induced on independent elements with known orders: the
/// module on prod Z/orders[k] with gram(k, l) = phi(basis[k], basis[l]),
/// together with the inclusion sending generator k to basis[k].
inline std::pair<AlternateModule, Morphism> induced_on_basis(
    const AlternateModule& m, const std::vector<GroupElement>& basis,
    const std::vector<Int>& orders) {
    const std::size_t k = basis.size();
    if (orders.size() != k) throw std::invalid_argument("induced_on_basis: length mismatch");
    Mat<QZ> gram(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) gram(i, j) = evaluate(m, basis[i], basis[j]);
    FinAbGroup sub(orders);
    AlternateModule inner(sub, std::move(gram));
    IntMat images(m.rank(), k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < m.rank(); ++i) images(i, j) = basis[j][i];
    Morphism incl(sub, m.group(), std::move(images));
    return {std::move(inner), std::move(incl)};
}

/// The submodule induced on a subgroup, over its canonical basis.
inline std::pair<AlternateModule, Morphism> induced_submodule(const AlternateModule& m,
                                                             const Subgroup& s) {
    if (s.ambient() != m.group())
        throw std::invalid_argument("induced_submodule: ambient mismatch");
    return induced_on_basis(m, s.gens(), s.canonical_orders());
}

/// The symplectic module A/K with its projection.
struct QuotientResult {
    AlternateModule quotient;
    Morphism projection;  // A -> A/K
};

/// Quotient by the kernel, in canonical invariant-factor basis. The induced
/// form phibar(pi a, pi b) = phi(a, b) is well defined and non-degenerate.
inline QuotientResult quotient_by_kernel(const AlternateModule& m) {
    const std::size_t r = m.rank();
    const Subgroup k = kernel(m);
    // Z^r / L(K): the Smith form of K's lattice basis exposes the quotient.
    SNFResult s = smith_normal_form(k.hermite());
    IntMat w = unimodular_inverse(s.v);  // rows: adapted basis of Z^r
    std::vector<Int> qorders;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < r; ++i)
        if (s.d(i, i) > 1) {
            qorders.push_back(s.d(i, i));
            kept.push_back(i);
        }
    FinAbGroup qgroup(qorders);
    const std::size_t qr = kept.size();
    Mat<QZ> qgram(qr, qr);
    for (std::size_t a = 0; a < qr; ++a)
        for (std::size_t b = 0; b < qr; ++b)
            qgram(a, b) = evaluate(m, w.row(kept[a]), w.row(kept[b]));
    AlternateModule q(qgroup, std::move(qgram));
    // projection: coordinates of x in the adapted basis are x V (row form)
    IntMat proj(qr, r);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t a = 0; a < qr; ++a)
            proj(a, j) = pos_mod(s.v(j, kept[a]), qorders[a]);
    Morphism pi(m.group(), qgroup, std::move(proj));
    return {std::move(q), std::move(pi)};
}

/// Primary decomposition: one orthogonal part per prime dividing |A|, with
/// the inclusion of each part. Parts for distinct primes are mutually
/// orthogonal, and their orthogonal sum is isometric to the module.
inline std::vector<std::tuple<Int, AlternateModule, Morphism>> sylow_decompose(
    const AlternateModule& m) {
    std::vector<std::tuple<Int, AlternateModule, Morphism>> parts;
    for (const Int& p : prime_divisors(m.cardinality())) {
        std::vector<GroupElement> gens;
        for (std::size_t i = 0; i < m.rank(); ++i) {
            const Int& d = m.group().orders[i];
            Int q = d;  // largest divisor of d coprime to p
            while (q % p == 0) q /= p;
            if (q != d) gens.push_back(m.group().scale(q, m.group().generator(i)));
        }
        auto [part, incl] = induced_submodule(m, Subgroup(m.group(), gens));
        parts.emplace_back(p, std::move(part), std::move(incl));
    }
    return parts;
}

/// The standard symplectic module B x B* for B = prod Z/b_i: generators
/// f_1..f_s, f_1*..f_s* with phi(f_i, f_i*) = 1/b_i and all other generator
/// pairs orthogonal. Its kernel is trivial; the f-block spans a Lagrangian
/// isomorphic to B and the dual block one isomorphic to B*.
inline AlternateModule standard_symplectic(const std::vector<Int>& b_orders) {
    const std::size_t s = b_orders.size();
    std::vector<Int> orders = b_orders;
    orders.insert(orders.end(), b_orders.begin(), b_orders.end());
    Mat<QZ> gram(2 * s, 2 * s);
    for (std::size_t i = 0; i < s; ++i) {
        gram(i, s + i) = QZ(1, b_orders[i]);
        gram(s + i, i) = QZ(-1, b_orders[i]);
    }
    return AlternateModule(FinAbGroup(std::move(orders)), std::move(gram));
}

/// Whether f pulls the target form back to the source form; by bilinearity
/// it is enough to compare on generator pairs.
inline bool is_form_preserving(const AlternateModule& src, const AlternateModule& tgt,
                               const Morphism& f) {
    if (f.source() != src.group() || f.target() != tgt.group())
        throw std::invalid_argument("is_form_preserving: morphism endpoints mismatch");
    const std::size_t r = src.rank();
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j)
            if (evaluate(tgt, f.image_of_generator(i), f.image_of_generator(j)) !=
                src.gram()(i, j))
                return false;
    return true;
}

/// A bijective form-preserving morphism.
inline bool is_isometry(const AlternateModule& src, const AlternateModule& tgt,
                        const Morphism& f) {
    return is_form_preserving(src, tgt, f) && morphism_is_bijective(f);
}

}  // namespace altmod
