#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "altmod/altmodule.hpp"

namespace altmod {

/// Size limits for the brute-force oracles. Bounds are configuration; the
/// hard ceiling below is not.
struct OracleLimits {
    Int bound{512};           // census and kernel enumeration
    Int isometry_bound{256};  // isometry search
};

inline constexpr long oracle_hard_ceiling = 4096;

namespace detail {

inline void oracle_check_bound(const AlternateModule& m, const Int& bound, const char* what) {
    if (m.cardinality() > Int(oracle_hard_ceiling))
        throw std::domain_error(std::string(what) +
                                ": module exceeds the hard ceiling of 4096 elements");
    if (m.cardinality() > bound)
        throw std::domain_error(std::string(what) + ": module exceeds the configured bound");
}

/// Mixed-radix index arithmetic over the element space of a finite abelian
/// group, last generator fastest. Everything runs on machine integers; the
/// oracle deliberately shares no code with the lattice machinery it audits.
class ElementTable {
public:
    explicit ElementTable(const FinAbGroup& g) {
        n_ = g.cardinality().template convert_to<std::size_t>();
        radix_.reserve(g.rank());
        for (const auto& d : g.orders)
            radix_.push_back(d.template convert_to<std::size_t>());
    }

    std::size_t size() const { return n_; }
    std::size_t rank() const { return radix_.size(); }
    const std::vector<std::size_t>& radix() const { return radix_; }

    std::vector<std::size_t> digits(std::size_t idx) const {
        std::vector<std::size_t> x(radix_.size());
        for (std::size_t i = radix_.size(); i-- > 0;) {
            x[i] = idx % radix_[i];
            idx /= radix_[i];
        }
        return x;
    }

    std::size_t index(const std::vector<std::size_t>& x) const {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < radix_.size(); ++i) idx = idx * radix_[i] + x[i];
        return idx;
    }

    GroupElement coords(std::size_t idx) const {
        const auto x = digits(idx);
        GroupElement e(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) e[i] = Int(x[i]);
        return e;
    }

    std::size_t add(std::size_t a, std::size_t b) const {
        auto xa = digits(a), xb = digits(b);
        for (std::size_t i = 0; i < radix_.size(); ++i) xa[i] = (xa[i] + xb[i]) % radix_[i];
        return index(xa);
    }

    std::size_t order_of(std::size_t a) const {
        const auto x = digits(a);
        std::size_t o = 1;
        for (std::size_t i = 0; i < radix_.size(); ++i)
            o = std::lcm(o, radix_[i] / std::gcd(x[i], radix_[i]));
        return o;
    }

private:
    std::size_t n_ = 1;
    std::vector<std::size_t> radix_;
};

/// E * phi(a, b) mod E on element indices, with a full table when the
/// module is small enough to afford one.
class PairingEngine {
public:
    PairingEngine(const AlternateModule& m, const ElementTable& t) : t_(&t) {
        e_ = m.group().exponent().template convert_to<long long>();
        const std::size_t r = m.rank();
        scaled_.assign(r * r, 0);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                const QZ& q = m.gram()(i, j);
                scaled_[i * r + j] =
                    ((e_ / q.den().template convert_to<long long>()) *
                     q.num().template convert_to<long long>()) %
                    e_;
            }
        if (t.size() <= 1024) {
            table_.assign(t.size() * t.size(), 0);
            for (std::size_t a = 0; a < t.size(); ++a)
                for (std::size_t b = 0; b < t.size(); ++b)
                    table_[a * t.size() + b] = direct(a, b);
            have_table_ = true;
        }
    }

    long long exponent() const { return e_; }

    long long pair(std::size_t a, std::size_t b) const {
        return have_table_ ? table_[a * t_->size() + b] : direct(a, b);
    }

private:
    long long direct(std::size_t a, std::size_t b) const {
        const auto xa = t_->digits(a), xb = t_->digits(b);
        const std::size_t r = t_->rank();
        long long acc = 0;
        for (std::size_t i = 0; i < r; ++i) {
            if (xa[i] == 0) continue;
            for (std::size_t j = 0; j < r; ++j) {
                if (xb[j] == 0) continue;
                acc = (acc + static_cast<long long>(xa[i]) * static_cast<long long>(xb[j]) %
                                 e_ * scaled_[i * r + j]) %
                      e_;
            }
        }
        return acc;
    }

    const ElementTable* t_;
    long long e_ = 1;
    std::vector<long long> scaled_;
    std::vector<long long> table_;
    bool have_table_ = false;
};

/// Dense bitset over element indices; word order gives a canonical total
/// order on subgroups of a fixed group.
class ElementSet {
public:
    explicit ElementSet(std::size_t n) : words_((n + 63) / 64, 0) {}

    void insert(std::size_t i) { words_[i >> 6] |= std::uint64_t(1) << (i & 63); }
    bool contains(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & std::uint64_t(1);
    }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }
    bool is_subset_of(const ElementSet& o) const {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & ~o.words_[k]) return false;
        return true;
    }
    const std::vector<std::uint64_t>& words() const { return words_; }

    friend bool operator==(const ElementSet& a, const ElementSet& b) {
        return a.words_ == b.words_;
    }

private:
    std::vector<std::uint64_t> words_;
};

/// The subgroup generated by S and one extra element: the union of the
/// cosets S + k a. Assumes S is a subgroup.
inline ElementSet closure_with(const ElementTable& t, const ElementSet& s, std::size_t a) {
    ElementSet out = s;
    for (std::size_t ka = a; ka != 0; ka = t.add(ka, a))
        for (std::size_t i = 0; i < t.size(); ++i)
            if (s.contains(i)) out.insert(t.add(i, ka));
    return out;
}

}  // namespace detail

/// The complete lattice of subgroups of a small module, with the maximal
/// isotropic members singled out.
struct SubgroupCensus {
    AlternateModule ambient;
    std::vector<Subgroup> subgroups;
    std::vector<Subgroup> maximal_isotropic;
};

/// Exhaustive census by closure search: grow every known subgroup by every
/// outside element until nothing new appears. Results come out sorted by
/// (cardinality, element-set order), so runs are reproducible.
inline SubgroupCensus enumerate_subgroups(const AlternateModule& m,
                                          const OracleLimits& limits = {}) {
    detail::oracle_check_bound(m, limits.bound, "enumerate_subgroups");
    const detail::ElementTable t(m.group());
    const detail::PairingEngine pe(m, t);
    const std::size_t n = t.size();

    detail::ElementSet base(n);
    base.insert(0);
    std::vector<detail::ElementSet> found{base};
    std::set<std::vector<std::uint64_t>> seen{base.words()};
    for (std::size_t head = 0; head < found.size(); ++head) {
        const detail::ElementSet cur = found[head];
        for (std::size_t a = 1; a < n; ++a) {
            if (cur.contains(a)) continue;
            detail::ElementSet grown = detail::closure_with(t, cur, a);
            if (seen.insert(grown.words()).second) found.push_back(std::move(grown));
        }
    }
    std::sort(found.begin(), found.end(),
              [](const detail::ElementSet& a, const detail::ElementSet& b) {
                  const std::size_t ca = a.count(), cb = b.count();
                  if (ca != cb) return ca < cb;
                  return a.words() < b.words();
              });

    auto members = [&](const detail::ElementSet& s) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            if (s.contains(i)) idx.push_back(i);
        return idx;
    };
    auto isotropic = [&](const std::vector<std::size_t>& idx) {
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = a; b < idx.size(); ++b)
                if (pe.pair(idx[a], idx[b]) != 0) return false;
        return true;
    };

    std::vector<Subgroup> subgroups;
    subgroups.reserve(found.size());
    std::vector<bool> iso(found.size());
    for (std::size_t k = 0; k < found.size(); ++k) {
        const auto idx = members(found[k]);
        iso[k] = isotropic(idx);
        std::vector<GroupElement> gens;
        gens.reserve(idx.size());
        for (auto i : idx) gens.push_back(t.coords(i));
        subgroups.push_back(Subgroup(m.group(), gens));
    }
    std::vector<Subgroup> maximal;
    for (std::size_t k = 0; k < found.size(); ++k) {
        if (!iso[k]) continue;
        bool dominated = false;
        for (std::size_t l = 0; l < found.size() && !dominated; ++l)
            if (l != k && iso[l] && found[k].is_subset_of(found[l])) dominated = true;
        if (!dominated) maximal.push_back(subgroups[k]);
    }
    return {m, std::move(subgroups), std::move(maximal)};
}

/// Kernel by the definition: the elements orthogonal to every element,
/// found by a direct double loop over the whole group.
inline Subgroup brute_kernel(const AlternateModule& m, const OracleLimits& limits = {}) {
    detail::oracle_check_bound(m, limits.bound, "brute_kernel");
    const detail::ElementTable t(m.group());
    const detail::PairingEngine pe(m, t);
    std::vector<GroupElement> gens;
    for (std::size_t a = 0; a < t.size(); ++a) {
        bool central = true;
        for (std::size_t b = 0; b < t.size() && central; ++b)
            if (pe.pair(a, b) != 0) central = false;
        if (central) gens.push_back(t.coords(a));
    }
    return Subgroup(m.group(), gens);
}

/// Exact isometry decision by backtracking: generator images are searched
/// among elements of equal order, pruned by pullback equality against the
/// already placed images, and a full assignment must generate the target.
inline bool brute_isometric(const AlternateModule& m1, const AlternateModule& m2,
                            const OracleLimits& limits = {}) {
    detail::oracle_check_bound(m1, limits.isometry_bound, "brute_isometric");
    detail::oracle_check_bound(m2, limits.isometry_bound, "brute_isometric");
    if (m1.cardinality() != m2.cardinality()) return false;

    const detail::ElementTable t2(m2.group());
    const detail::PairingEngine pe2(m2, t2);
    const std::size_t n = t2.size(), r = m1.rank();

    // order statistics must agree for a group isomorphism to exist
    {
        const detail::ElementTable t1(m1.group());
        std::vector<std::size_t> h1, h2;
        for (std::size_t a = 0; a < n; ++a) {
            h1.push_back(t1.order_of(a));
            h2.push_back(t2.order_of(a));
        }
        std::sort(h1.begin(), h1.end());
        std::sort(h2.begin(), h2.end());
        if (h1 != h2) return false;
    }

    std::vector<std::vector<std::size_t>> candidates(r);
    for (std::size_t i = 0; i < r; ++i) {
        const std::size_t oi =
            m1.group().orders[i].template convert_to<std::size_t>();
        for (std::size_t a = 0; a < n; ++a)
            if (t2.order_of(a) == oi) candidates[i].push_back(a);
    }

    std::vector<std::size_t> img(r, 0);
    const long long e2 = pe2.exponent();
    auto matches = [&](std::size_t level, std::size_t y) {
        for (std::size_t j = 0; j < level; ++j)
            if (QZ(Int(pe2.pair(img[j], y)), Int(e2)) != m1.gram()(j, level)) return false;
        return true;
    };
    auto spans = [&]() {
        detail::ElementSet span(n);
        span.insert(0);
        for (std::size_t i = 0; i < r; ++i) span = detail::closure_with(t2, span, img[i]);
        return span.count() == n;
    };
    auto search = [&](auto&& self, std::size_t level) -> bool {
        if (level == r) return spans();
        for (std::size_t y : candidates[level]) {
            if (!matches(level, y)) continue;
            img[level] = y;
            if (self(self, level + 1)) return true;
        }
        return false;
    };
    return search(search, 0);
}

}  // namespace altmod
