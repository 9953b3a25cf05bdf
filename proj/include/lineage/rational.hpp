#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <gmpxx.h>

#include "lineage/errors.hpp"
#include "lineage/random.hpp"

namespace lineage {

/// Arbitrary-precision rational in canonical form: lowest terms, positive
/// denominator.  GMP keeps results of arithmetic canonical as long as the
/// operands are, so canonicalization happens only at construction.
class Rational {
public:
    Rational() : q_(0) {}

    Rational(std::int64_t num, std::int64_t den = 1) {
        if (den == 0) throw DivisionByZero();
        q_ = mpq_class(static_cast<long>(num), static_cast<long>(den));
        q_.canonicalize();
    }

    explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    static Rational from_string(const std::string& text) {
        mpq_class q;
        if (text.empty() || mpq_set_str(q.get_mpq_t(), text.c_str(), 10) != 0) {
            throw ParseError("bad rational literal: " + text);
        }
        if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0) throw ParseError("zero denominator: " + text);
        q.canonicalize();
        return Rational(raw_tag{}, std::move(q));
    }

    const mpq_class& value() const { return q_; }
    const mpz_class numerator() const { return q_.get_num(); }
    const mpz_class denominator() const { return q_.get_den(); }

    Rational one() const { return Rational(1); }
    bool is_zero() const { return mpq_sgn(q_.get_mpq_t()) == 0; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(raw_tag{}, mpq_class(a.q_ + b.q_));
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(raw_tag{}, mpq_class(a.q_ - b.q_));
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(raw_tag{}, mpq_class(a.q_ * b.q_));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw DivisionByZero();
        return Rational(raw_tag{}, mpq_class(a.q_ / b.q_));
    }

    Rational operator-() const { return Rational(raw_tag{}, mpq_class(-q_)); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return mpq_equal(a.q_.get_mpq_t(), b.q_.get_mpq_t()) != 0;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

private:
    struct raw_tag {};
    Rational(raw_tag, mpq_class q) : q_(std::move(q)) {}

    mpq_class q_;
};

inline std::size_t hash_value(const Rational& x) {
    const auto mix_mpz = [](std::size_t h, const mpz_srcptr z) {
        h = splitmix64(h ^ static_cast<std::uint64_t>(mpz_sgn(z) + 2));
        const std::size_t n = mpz_size(z);
        for (std::size_t i = 0; i < n; ++i) {
            h = splitmix64(h ^ static_cast<std::uint64_t>(mpz_getlimbn(z, static_cast<mp_size_t>(i))));
        }
        return h;
    };
    std::size_t h = 0x243f6a8885a308d3ULL;
    h = mix_mpz(h, mpq_numref(x.value().get_mpq_t()));
    h = mix_mpz(h, mpq_denref(x.value().get_mpq_t()));
    return h;
}

inline std::string to_string(const Rational& x) {
    return x.value().get_str();  // "n" or "n/d", denominator positive
}

} // namespace lineage
