#pragma once

#include <cassert>
#include <cstdint>
#include <string>

#include "lineage/errors.hpp"
#include "lineage/random.hpp"

namespace lineage {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

/// Modular inverse by extended Euclid.  a must be nonzero mod p, p prime.
inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
    __int128 t = 0, nt = 1;
    std::uint64_t r = p, nr = a % p;
    while (nr != 0) {
        const std::uint64_t q = r / nr;
        const __int128 t2 = t - static_cast<__int128>(q) * nt;
        t = nt;
        nt = t2;
        const std::uint64_t r2 = r - q * nr;
        r = nr;
        nr = r2;
    }
    assert(r == 1 && "invmod of a non-unit");
    if (t < 0) t += p;
    return static_cast<std::uint64_t>(t);
}

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This witness set decides primality for all n < 3.3 * 10^24.
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Uniform random prime in [2^60, 2^62).
inline std::uint64_t sample_prime(RandomStream& stream) {
    constexpr std::uint64_t lo = 1ULL << 60;
    constexpr std::uint64_t hi = 1ULL << 62;
    for (;;) {
        const std::uint64_t n = lo + stream.below(hi - lo);
        if (is_prime_u64(n | 1)) return n | 1;
    }
}

/// Element of Z/pZ in canonical least-nonnegative form.  The modulus travels
/// with the value; mixing moduli is a programming error.
class Fp {
public:
    Fp() = default;
    Fp(std::uint64_t v, std::uint64_t p) : v_(v % p), p_(p) {}

    static Fp from_int(std::int64_t n, std::uint64_t p) {
        const std::uint64_t m = static_cast<std::uint64_t>(n < 0 ? -n : n) % p;
        return Fp(n < 0 && m != 0 ? p - m : m, p);
    }

    std::uint64_t value() const { return v_; }
    std::uint64_t modulus() const { return p_; }

    Fp one() const { return Fp(1, p_); }
    bool is_zero() const { return v_ == 0; }

    friend Fp operator+(const Fp& a, const Fp& b) {
        assert(a.p_ == b.p_);
        std::uint64_t s = a.v_ + b.v_;
        if (s >= a.p_) s -= a.p_;
        return Fp(s, a.p_, raw_tag{});
    }
    friend Fp operator-(const Fp& a, const Fp& b) {
        assert(a.p_ == b.p_);
        return Fp(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + a.p_ - b.v_, a.p_, raw_tag{});
    }
    friend Fp operator*(const Fp& a, const Fp& b) {
        assert(a.p_ == b.p_);
        return Fp(mulmod(a.v_, b.v_, a.p_), a.p_, raw_tag{});
    }
    friend Fp operator/(const Fp& a, const Fp& b) {
        assert(a.p_ == b.p_);
        if (b.v_ == 0) throw DivisionByZero();
        return Fp(mulmod(a.v_, invmod(b.v_, a.p_), a.p_), a.p_, raw_tag{});
    }

    Fp operator-() const { return Fp(v_ == 0 ? 0 : p_ - v_, p_, raw_tag{}); }

    friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_ && a.p_ == b.p_; }
    friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

private:
    struct raw_tag {};
    Fp(std::uint64_t v, std::uint64_t p, raw_tag) : v_(v), p_(p) {}

    std::uint64_t v_ = 0;
    std::uint64_t p_ = 0;
};

inline std::size_t hash_value(const Fp& x) {
    return static_cast<std::size_t>(splitmix64(x.value() ^ splitmix64(x.modulus())));
}

inline std::string to_string(const Fp& x) { return std::to_string(x.value()); }

} // namespace lineage
