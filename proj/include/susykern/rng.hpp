#pragma once

#include "susykern/grassmann.hpp"
#include "susykern/scalar.hpp"

#include <random>

namespace susyk {

/// Deterministic source of random exact values for property suites; identical
/// seeds give identical streams on every platform (std::mt19937_64 output is
/// specified, and only its raw draws are used).
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    long integer(long lo, long hi) {  // inclusive
        return lo + static_cast<long>(raw() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    /// Small nonzero Gaussian rational.
    Scalar scalar(bool allow_zero = true) {
        while (true) {
            Scalar s(Rational(integer(-4, 4), integer(1, 3)),
                     (raw() & 1) ? Rational(integer(-2, 2)) : Rational(0));
            if (allow_zero || !s.is_zero()) return s;
        }
    }

    grass::GrassmannElement grassmann(int n, int parity, bool unit_body = false) {
        grass::GrassmannElement r(n);
        for (unsigned m = 0; m < (1u << n); ++m) {
            if ((__builtin_popcount(m) & 1) != parity) continue;
            if (raw() % 3 == 0 && !(m == 0 && unit_body)) continue;  // keep it sparse
            r.set(m, scalar());
        }
        if (parity == 0 && unit_body && r.body().is_zero())
            r.set(0, scalar(false));
        return r;
    }

    grass::DNumber dnumber(int n, bool invertible = true) {
        return {grassmann(n, 0, invertible), grassmann(n, 1)};
    }

    double real(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(raw() >> 11) * 0x1.0p-53);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace susyk
