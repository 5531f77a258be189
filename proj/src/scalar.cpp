#include "susykern/scalar.hpp"

#include <sstream>

namespace susyk {

std::optional<Rational> rational_sqrt(const Rational& r) {
    if (r < 0) return std::nullopt;
    if (r == 0) return Rational(0);
    BigInt num = numerator(r), den = denominator(r);
    BigInt sn = sqrt(num), sd = sqrt(den);
    if (sn * sn != num || sd * sd != den) return std::nullopt;
    return Rational(sn, sd);
}

std::optional<Scalar> Scalar::exact_sqrt() const {
    if (is_zero()) return Scalar(0);
    if (im_ == 0) {
        if (auto s = rational_sqrt(re_)) return Scalar(*s);
        if (auto s = rational_sqrt(-re_)) return Scalar(0, *s);
        return std::nullopt;
    }
    // (p+qi)^2 = re + im*i needs |re+im*i| to be a rational square.
    auto n = rational_sqrt(re_ * re_ + im_ * im_);
    if (!n) return std::nullopt;
    Rational p2 = (*n + re_) / 2, q2 = (*n - re_) / 2;
    auto p = rational_sqrt(p2), q = rational_sqrt(q2);
    if (!p || !q) return std::nullopt;
    // sign of q fixed by 2pq = im
    Scalar s(*p, im_ > 0 ? *q : -*q);
    return s;
}

static std::string rat_str(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << "/" << denominator(r);
    return os.str();
}

std::string Scalar::str() const {
    if (im_ == 0) return rat_str(re_);
    std::string im_part;
    if (im_ == 1)
        im_part = "i";
    else if (im_ == -1)
        im_part = "-i";
    else
        im_part = rat_str(im_) + "*i";
    if (re_ == 0) return im_part;
    if (im_ > 0) return rat_str(re_) + "+" + im_part;
    return rat_str(re_) + "-" + (im_ == -1 ? std::string("i") : rat_str(-im_) + "*i");
}

}  // namespace susyk
