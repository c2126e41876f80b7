#pragma once

#include "altmod/integers.hpp"

#include <stdexcept>
#include <string>

namespace altmod {

/// An element of Q/Z stored as a reduced fraction num/den with
/// 0 <= num < den and gcd(num, den) = 1. The zero element is 0/1.
/// The additive order of num/den is den.
class QZ {
  public:
    QZ() : num_(0), den_(1) {}

    /// num/den taken modulo 1; any integers accepted, den != 0.
    QZ(Int num, Int den) {
        if (den == 0) throw std::invalid_argument("QZ: zero denominator");
        if (den < 0) { den = -den; num = -num; }
        num = pos_mod(num, den);
        Int g = gcd(num, den);
        num_ = num / g;
        den_ = den / g;
    }

    const Int& num() const { return num_; }
    const Int& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }

    /// Additive order in Q/Z.
    const Int& order() const { return den_; }

    friend QZ operator+(const QZ& a, const QZ& b) {
        return QZ(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend QZ operator-(const QZ& a, const QZ& b) {
        return QZ(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    QZ operator-() const { return QZ(-num_, den_); }

    /// Integer scaling n * (num/den) mod 1.
    friend QZ operator*(const Int& n, const QZ& q) { return QZ(n * q.num_, q.den_); }

    friend bool operator==(const QZ& a, const QZ& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const QZ& a, const QZ& b) { return !(a == b); }

    /// "num/den", always with the denominator ("0/1", "3/4").
    std::string str() const { return num_.str() + "/" + den_.str(); }

    /// Parses "a/b" (optionally signed) or a bare integer; reduces mod 1.
    static QZ parse(const std::string& s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return QZ(Int(s), 1);
            return QZ(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
        } catch (const std::runtime_error&) {
            throw std::invalid_argument("QZ: malformed fraction \"" + s + "\"");
        }
    }

  private:
    Int num_;
    Int den_;
};

/// The canonical fraction with p * root = q in Q/Z: for q = a/m this is
/// a/(pm) reduced. One of the p distinct roots; fixed for reproducibility.
inline QZ pth_root(const QZ& q, const Int& p) { return QZ(q.num(), p * q.den()); }

}  // namespace altmod
