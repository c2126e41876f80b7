#pragma once

#include "altmod/group.hpp"
#include "altmod/integers.hpp"
#include "altmod/matrix.hpp"
#include "altmod/subgroup.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace altmod {

/// Group homomorphism between finite abelian groups, given by generator
/// images: column i of `images` holds the target coordinates of the image of
/// source generator e_i. Construction checks well-definedness, i.e.
/// d_i * images(e_i) = 0 in the target for every source order d_i.
class Morphism {
  public:
    Morphism(FinAbGroup source, FinAbGroup target, IntMat images)
        : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
        if (images_.rows() != target_.rank() || images_.cols() != source_.rank())
            throw std::invalid_argument("Morphism: image matrix shape mismatch");
        for (std::size_t j = 0; j < images_.cols(); ++j)
            for (std::size_t i = 0; i < images_.rows(); ++i) {
                images_(i, j) = pos_mod(images_(i, j), target_.orders[i]);
                if (pos_mod(source_.orders[j] * images_(i, j), target_.orders[i]) != 0)
                    throw std::invalid_argument("Morphism: images do not define a homomorphism");
            }
    }

    static Morphism identity(const FinAbGroup& g) {
        return Morphism(g, g, IntMat::identity(g.rank()));
    }

    /// The zero morphism between any two groups.
    static Morphism zero(FinAbGroup source, FinAbGroup target) {
        IntMat m(target.rank(), source.rank());
        return Morphism(std::move(source), std::move(target), std::move(m));
    }

    const FinAbGroup& source() const { return source_; }
    const FinAbGroup& target() const { return target_; }
    const IntMat& images() const { return images_; }

    GroupElement apply(const GroupElement& x) const {
        source_.check_element(x);
        return target_.reduce(images_ * x);
    }

    GroupElement image_of_generator(std::size_t i) const { return target_.reduce(images_.col(i)); }

    friend bool operator==(const Morphism& a, const Morphism& b) {
        return a.source_ == b.source_ && a.target_ == b.target_ && a.images_ == b.images_;
    }

  private:
    FinAbGroup source_;
    FinAbGroup target_;
    IntMat images_;
};

/// g after f; requires target(f) = source(g).
inline Morphism morphism_compose(const Morphism& g, const Morphism& f) {
    if (f.target() != g.source())
        throw std::invalid_argument("morphism_compose: domain mismatch");
    return Morphism(f.source(), g.target(), g.images() * f.images());
}

/// Kernel subgroup, via the congruence solver on the image matrix with the
/// target moduli.
inline Subgroup morphism_kernel(const Morphism& f) {
    return solve_congruence_kernel(f.images(), f.target().orders, f.source().orders);
}

inline bool morphism_is_injective(const Morphism& f) {
    return morphism_kernel(f).is_trivial();
}

inline Subgroup morphism_image(const Morphism& f) {
    std::vector<GroupElement> gens;
    for (std::size_t j = 0; j < f.source().rank(); ++j) gens.push_back(f.image_of_generator(j));
    return Subgroup(f.target(), gens);
}

inline bool morphism_is_bijective(const Morphism& f) {
    return f.source().cardinality() == f.target().cardinality() && morphism_is_injective(f);
}

/// Direct sum f1 + f2 between the concatenated groups, with block-diagonal
/// images.
inline Morphism direct_sum_morphism(const Morphism& f1, const Morphism& f2) {
    std::vector<Int> src = f1.source().orders;
    src.insert(src.end(), f2.source().orders.begin(), f2.source().orders.end());
    std::vector<Int> tgt = f1.target().orders;
    tgt.insert(tgt.end(), f2.target().orders.begin(), f2.target().orders.end());
    const std::size_t tr1 = f1.target().rank(), sr1 = f1.source().rank();
    IntMat images(tgt.size(), src.size());
    for (std::size_t i = 0; i < tr1; ++i)
        for (std::size_t j = 0; j < sr1; ++j) images(i, j) = f1.images()(i, j);
    for (std::size_t i = 0; i < f2.target().rank(); ++i)
        for (std::size_t j = 0; j < f2.source().rank(); ++j)
            images(tr1 + i, sr1 + j) = f2.images()(i, j);
    return Morphism(FinAbGroup(std::move(src)), FinAbGroup(std::move(tgt)), std::move(images));
}

/// Inverse of a bijective morphism: each target generator is sent to its
/// unique preimage.
inline Morphism morphism_inverse(const Morphism& f) {
    if (!morphism_is_bijective(f)) throw std::invalid_argument("morphism_inverse: not bijective");
    const std::size_t sr = f.source().rank(), tr = f.target().rank();
    IntMat inv(sr, tr);
    for (std::size_t j = 0; j < tr; ++j) {
        auto x = Subgroup::solve_congruence(f.images(), f.target().orders,
                                            f.target().generator(j));
        if (!x) throw std::logic_error("morphism_inverse: generator has no preimage");
        for (std::size_t i = 0; i < sr; ++i) inv(i, j) = pos_mod((*x)[i], f.source().orders[i]);
    }
    return Morphism(f.target(), f.source(), std::move(inv));
}

}  // namespace altmod
