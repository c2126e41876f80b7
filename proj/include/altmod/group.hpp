#pragma once

#include "altmod/integers.hpp"
#include "altmod/matrix.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace altmod {

/// Element of a finite abelian group, as coordinates relative to a fixed
/// cyclic decomposition.
using GroupElement = IntVec;

/// A finite abelian group presented as Z/d_1 x ... x Z/d_r with every
/// d_i >= 2. The trivial group is the empty list. No ordering of the d_i is
/// imposed; canonical invariant factors are computed on demand elsewhere.
struct FinAbGroup {
    std::vector<Int> orders;

    FinAbGroup() = default;
    explicit FinAbGroup(std::vector<Int> ds) : orders(std::move(ds)) {
        for (const Int& d : orders)
            if (d < 2) throw std::invalid_argument("FinAbGroup: orders must be >= 2");
    }

    std::size_t rank() const { return orders.size(); }

    Int cardinality() const {
        Int c = 1;
        for (const Int& d : orders) c *= d;
        return c;
    }

    Int exponent() const {
        Int e = 1;
        for (const Int& d : orders) e = lcm(e, d);
        return e;
    }

    bool is_trivial() const { return orders.empty(); }

    /// True when every order is a power of the prime p.
    bool is_p_group(const Int& p) const {
        for (Int d : orders) {
            while (d % p == 0) d /= p;
            if (d != 1) return false;
        }
        return true;
    }

    friend bool operator==(const FinAbGroup& a, const FinAbGroup& b) {
        return a.orders == b.orders;
    }
    friend bool operator!=(const FinAbGroup& a, const FinAbGroup& b) { return !(a == b); }

    /// Coordinate-wise reduction of an arbitrary integer vector into range.
    GroupElement reduce(const IntVec& x) const {
        check_length(x);
        GroupElement y(rank());
        for (std::size_t i = 0; i < rank(); ++i) y[i] = pos_mod(x[i], orders[i]);
        return y;
    }

    /// Rejects coordinates outside [0, d_i).
    void check_element(const GroupElement& x) const {
        check_length(x);
        for (std::size_t i = 0; i < rank(); ++i)
            if (x[i] < 0 || x[i] >= orders[i])
                throw std::out_of_range("FinAbGroup: coordinate out of range");
    }

    GroupElement zero() const { return GroupElement(rank()); }

    GroupElement add(const GroupElement& a, const GroupElement& b) const {
        check_length(a); check_length(b);
        GroupElement c(rank());
        for (std::size_t i = 0; i < rank(); ++i) c[i] = pos_mod(a[i] + b[i], orders[i]);
        return c;
    }

    GroupElement negate(const GroupElement& a) const {
        check_length(a);
        GroupElement c(rank());
        for (std::size_t i = 0; i < rank(); ++i) c[i] = pos_mod(-a[i], orders[i]);
        return c;
    }

    GroupElement scale(const Int& n, const GroupElement& a) const {
        check_length(a);
        GroupElement c(rank());
        for (std::size_t i = 0; i < rank(); ++i) c[i] = pos_mod(n * a[i], orders[i]);
        return c;
    }

    bool is_zero(const GroupElement& a) const {
        check_length(a);
        for (std::size_t i = 0; i < rank(); ++i)
            if (pos_mod(a[i], orders[i]) != 0) return false;
        return true;
    }

    /// Additive order: lcm over i of d_i / gcd(x_i, d_i).
    Int order_of(const GroupElement& x) const {
        check_length(x);
        Int o = 1;
        for (std::size_t i = 0; i < rank(); ++i)
            o = lcm(o, orders[i] / gcd(pos_mod(x[i], orders[i]), orders[i]));
        return o;
    }

    /// The i-th standard generator e_i.
    GroupElement generator(std::size_t i) const {
        GroupElement e(rank());
        e.at(i) = 1;
        return e;
    }

  private:
    void check_length(const IntVec& x) const {
        if (x.size() != rank())
            throw std::invalid_argument("FinAbGroup: coordinate length mismatch");
    }
};

}  // namespace altmod
