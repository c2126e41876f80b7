#pragma once

#include "altmod/group.hpp"
#include "altmod/integers.hpp"
#include "altmod/matrix.hpp"
#include "altmod/snf.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace altmod {

/// A subgroup of an ambient finite abelian group, in canonical form.
///
/// Internally a subgroup S <= G = Z^r / diag(d) Z^r is the image of the
/// integer lattice L with diag(d) Z^r <= L <= Z^r; subgroups correspond
/// bijectively to such lattices, and the unique Hermite basis of L is the
/// canonical representation. Two subgroups of the same ambient group are
/// equal iff their Hermite bases coincide, which decides membership-equality
/// algebraically.
///
/// `gens` is an independence basis adapted to the invariant factors: S is the
/// internal direct sum of the cyclic groups generated by gens[k], where
/// gens[k] has order canonical_orders[k] and the orders are
/// divisibility-ordered.
class Subgroup {
  public:
    /// The subgroup generated by `generators` (arbitrary elements of the
    /// ambient group, given as integer coordinate vectors).
    Subgroup(FinAbGroup ambient, const std::vector<GroupElement>& generators)
        : ambient_(std::move(ambient)) {
        const std::size_t r = ambient_.rank();
        std::vector<IntVec> rows;
        rows.reserve(generators.size() + r);
        for (const auto& g : generators) rows.push_back(ambient_.reduce(g));
        for (std::size_t i = 0; i < r; ++i) {
            IntVec row(r);
            row[i] = ambient_.orders[i];
            rows.push_back(row);
        }
        hnf_ = hermite_basis(std::move(rows), r);

        // C with C * H = diag(d); its Smith form is the isomorphism type of
        // the quotient L / diag(d) Z^r = S.
        IntMat c(r, r);
        for (std::size_t i = 0; i < r; ++i) {
            IntVec row(r);
            row[i] = ambient_.orders[i];
            auto y = solve_upper_triangular_left(hnf_, row);
            if (!y) throw std::logic_error("Subgroup: lattice misses an order vector");
            for (std::size_t j = 0; j < r; ++j) c(i, j) = (*y)[j];
        }
        SNFResult s = smith_normal_form(c);
        IntMat basis_rows = unimodular_inverse(s.v) * hnf_;
        cardinality_ = 1;
        for (std::size_t i = 0; i < r; ++i) {
            const Int& o = s.d(i, i);
            cardinality_ *= o;
            if (o > 1) {
                canonical_orders_.push_back(o);
                gens_.push_back(ambient_.reduce(basis_rows.row(i)));
            }
        }
    }

    static Subgroup trivial(FinAbGroup ambient) { return Subgroup(std::move(ambient), {}); }

    static Subgroup whole(FinAbGroup ambient) {
        std::vector<GroupElement> gens;
        for (std::size_t i = 0; i < ambient.rank(); ++i) gens.push_back(ambient.generator(i));
        return Subgroup(std::move(ambient), gens);
    }

    const FinAbGroup& ambient() const { return ambient_; }
    const std::vector<GroupElement>& gens() const { return gens_; }
    const std::vector<Int>& canonical_orders() const { return canonical_orders_; }
    const Int& cardinality() const { return cardinality_; }
    const IntMat& hermite() const { return hnf_; }

    bool is_trivial() const { return cardinality_ == 1; }
    bool is_whole() const { return cardinality_ == ambient_.cardinality(); }

    bool contains(const GroupElement& x) const {
        ambient_.check_element(x);
        return solve_upper_triangular_left(hnf_, x).has_value();
    }

    bool contains(const Subgroup& other) const {
        check_same_ambient(other);
        for (std::size_t i = 0; i < hnf_.rows(); ++i)
            if (!solve_upper_triangular_left(hnf_, other.hnf_.row(i)).has_value()) return false;
        return true;
    }

    /// Coefficients c with x = sum c_k gens[k], 0 <= c_k < canonical_orders[k];
    /// nullopt when x is not a member. Unique by independence of the basis.
    std::optional<IntVec> coordinates(const GroupElement& x) const {
        ambient_.check_element(x);
        const std::size_t r = ambient_.rank(), m = gens_.size();
        // solve sum_k c_k gens[k] = x in the ambient group
        IntMat sys(r, m);
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t i = 0; i < r; ++i) sys(i, k) = gens_[k][i];
        auto c = solve_congruence(sys, ambient_.orders, x);
        if (!c) return std::nullopt;
        for (std::size_t k = 0; k < m; ++k) (*c)[k] = pos_mod((*c)[k], canonical_orders_[k]);
        return c;
    }

    friend bool operator==(const Subgroup& a, const Subgroup& b) {
        return a.ambient_ == b.ambient_ && a.hnf_ == b.hnf_;
    }
    friend bool operator!=(const Subgroup& a, const Subgroup& b) { return !(a == b); }

    /// One solution x of M x = v (mod row_moduli), x over Z; nullopt when the
    /// system is unsolvable. Columns of M index unknowns.
    static std::optional<IntVec> solve_congruence(const IntMat& m,
                                                  const std::vector<Int>& row_moduli,
                                                  const IntVec& rhs) {
        if (m.rows() != row_moduli.size() || rhs.size() != m.rows())
            throw std::invalid_argument("solve_congruence: dimension mismatch");
        const std::size_t r = m.rows(), c = m.cols();
        IntMat stacked(r, c + r);
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < c; ++j) stacked(i, j) = m(i, j);
            stacked(i, c + i) = row_moduli[i];
        }
        auto w = integer_solve(stacked, rhs);
        if (!w) return std::nullopt;
        return IntVec(w->begin(), w->begin() + c);
    }

  private:
    void check_same_ambient(const Subgroup& other) const {
        if (ambient_ != other.ambient_)
            throw std::invalid_argument("Subgroup: ambient groups differ");
    }

    FinAbGroup ambient_;
    IntMat hnf_;
    std::vector<GroupElement> gens_;
    std::vector<Int> canonical_orders_;
    Int cardinality_;
};

/// Full solution subgroup of M x = 0 (mod row_moduli) inside the group
/// prod Z/col_moduli. Exact, via the Smith form of the stacked relation
/// matrix [M | diag(row_moduli)]; no enumeration.
inline Subgroup solve_congruence_kernel(const IntMat& m, const std::vector<Int>& row_moduli,
                                        const std::vector<Int>& col_moduli) {
    if (m.rows() != row_moduli.size() || m.cols() != col_moduli.size())
        throw std::invalid_argument("solve_congruence_kernel: dimension mismatch");
    const std::size_t r = m.rows(), c = m.cols();
    IntMat stacked(r, c + r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) stacked(i, j) = m(i, j);
        stacked(i, c + i) = row_moduli[i];
    }
    FinAbGroup target(col_moduli);
    std::vector<GroupElement> gens;
    for (const IntVec& k : integer_kernel(stacked))
        gens.push_back(target.reduce(IntVec(k.begin(), k.begin() + c)));
    return Subgroup(std::move(target), gens);
}

inline Subgroup subgroup_generated(const FinAbGroup& ambient,
                                   const std::vector<GroupElement>& gens) {
    return Subgroup(ambient, gens);
}

inline bool subgroup_membership(const Subgroup& s, const GroupElement& x) {
    return s.contains(x);
}

/// Canonical isomorphism type, divisibility-ordered (no trivial factors).
inline std::vector<Int> subgroup_invariant_factors(const Subgroup& s) {
    return s.canonical_orders();
}

}  // namespace altmod
