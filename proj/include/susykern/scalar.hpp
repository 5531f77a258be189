#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace susyk {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct SymError : std::runtime_error {
    explicit SymError(const std::string& what) : std::runtime_error(what) {}
};

/// Exact Gaussian rational a + b*i, the coefficient field for all symbolic work.
class Scalar {
public:
    Scalar() = default;
    Scalar(long n) : re_(n) {}  // NOLINT: implicit by design
    Scalar(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}

    static Scalar i() { return Scalar(0, 1); }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_one() const { return re_ == 1 && im_ == 0; }
    bool is_real() const { return im_ == 0; }

    Scalar operator-() const { return Scalar(-re_, -im_); }
    Scalar operator+(const Scalar& o) const { return Scalar(re_ + o.re_, im_ + o.im_); }
    Scalar operator-(const Scalar& o) const { return Scalar(re_ - o.re_, im_ - o.im_); }
    Scalar operator*(const Scalar& o) const {
        return Scalar(re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_);
    }
    Scalar operator/(const Scalar& o) const {
        Rational n = o.re_ * o.re_ + o.im_ * o.im_;
        if (n == 0) throw SymError("Scalar: division by zero");
        return Scalar((re_ * o.re_ + im_ * o.im_) / n, (im_ * o.re_ - re_ * o.im_) / n);
    }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    bool operator==(const Scalar& o) const { return re_ == o.re_ && im_ == o.im_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }
    bool operator<(const Scalar& o) const {
        if (re_ != o.re_) return re_ < o.re_;
        return im_ < o.im_;
    }

    std::complex<double> to_complex() const {
        return {static_cast<double>(re_), static_cast<double>(im_)};
    }

    /// Exact square root in Q(i), when one exists.
    std::optional<Scalar> exact_sqrt() const;

    /// Canonical text, parseable by the expression grammar.
    std::string str() const;

private:
    Rational re_ = 0;
    Rational im_ = 0;
};

std::optional<Rational> rational_sqrt(const Rational& r);

}  // namespace susyk
