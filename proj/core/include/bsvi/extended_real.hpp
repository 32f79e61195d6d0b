#pragma once

#include <cmath>
#include <limits>
#include <ostream>

#include "bsvi/errors.hpp"

namespace bsvi {

// Extended real number: a finite double, +inf or -inf, carried as an explicit
// tag rather than a large float. inf - inf (and inf + (-inf)) is an error.
class ExtReal {
  public:
    constexpr ExtReal() : v_(0.0), tag_(Tag::Finite) {}
    constexpr ExtReal(double v) : v_(v), tag_(Tag::Finite) {}  // NOLINT(runtime/explicit)

    static constexpr ExtReal pos_inf() { return ExtReal(Tag::PosInf); }
    static constexpr ExtReal neg_inf() { return ExtReal(Tag::NegInf); }

    constexpr bool is_finite() const { return tag_ == Tag::Finite; }
    constexpr bool is_pos_inf() const { return tag_ == Tag::PosInf; }
    constexpr bool is_neg_inf() const { return tag_ == Tag::NegInf; }

    // Finite value; throws on infinities.
    double value() const {
        if (!is_finite()) throw Error("ExtReal: value() on infinite");
        return v_;
    }
    // Value as a plain double, mapping the tags to IEEE infinities.
    constexpr double as_double() const {
        if (tag_ == Tag::PosInf) return std::numeric_limits<double>::infinity();
        if (tag_ == Tag::NegInf) return -std::numeric_limits<double>::infinity();
        return v_;
    }

    friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) {
        if (a.tag_ != b.tag_) return false;
        return a.tag_ != Tag::Finite || a.v_ == b.v_;
    }
    friend constexpr bool operator<(const ExtReal& a, const ExtReal& b) {
        if (a.tag_ == Tag::NegInf) return b.tag_ != Tag::NegInf;
        if (a.tag_ == Tag::PosInf) return false;
        if (b.tag_ == Tag::PosInf) return true;
        if (b.tag_ == Tag::NegInf) return false;
        return a.v_ < b.v_;
    }
    friend constexpr bool operator<=(const ExtReal& a, const ExtReal& b) { return a < b || a == b; }
    friend constexpr bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
    friend constexpr bool operator>=(const ExtReal& a, const ExtReal& b) { return b <= a; }

    friend ExtReal operator+(const ExtReal& a, const ExtReal& b) {
        if (a.is_finite() && b.is_finite()) return ExtReal(a.v_ + b.v_);
        if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
            throw Error("ExtReal: inf - inf is undefined");
        return a.is_finite() ? b : a;
    }
    friend ExtReal operator-(const ExtReal& a, const ExtReal& b) { return a + (-b); }
    friend constexpr ExtReal operator-(const ExtReal& a) {
        if (a.is_pos_inf()) return neg_inf();
        if (a.is_neg_inf()) return pos_inf();
        return ExtReal(-a.v_);
    }

    friend std::ostream& operator<<(std::ostream& os, const ExtReal& x) {
        if (x.is_pos_inf()) return os << "+inf";
        if (x.is_neg_inf()) return os << "-inf";
        return os << x.v_;
    }

  private:
    enum class Tag : unsigned char { Finite, PosInf, NegInf };
    constexpr explicit ExtReal(Tag t) : v_(0.0), tag_(t) {}
    double v_;
    Tag tag_;
};

}  // namespace bsvi
