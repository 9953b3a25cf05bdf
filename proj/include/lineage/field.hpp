#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "lineage/errors.hpp"
#include "lineage/prime_field.hpp"
#include "lineage/random.hpp"
#include "lineage/rational.hpp"

namespace lineage {

enum class FieldKind : std::uint8_t { Rationals, PrimeField };

inline const char* field_kind_name(FieldKind k) {
    return k == FieldKind::Rationals ? "rational" : "prime";
}

/// Which exact field a run computes over.  prime == 0 in PrimeField mode
/// means "sample one"; resolve() pins it.
struct FieldSpec {
    FieldKind kind = FieldKind::PrimeField;
    std::uint64_t prime = 0;
    std::uint64_t rng_seed = 0;
    std::uint64_t sample_bound = 1'000'000;

    void validate() const {
        if (kind == FieldKind::PrimeField) {
            if (prime != 0) {
                if (prime < (1ULL << 60)) throw ConfigError("prime must be at least 2^60");
                if ((prime & 1) == 0 || !is_prime_u64(prime)) throw ConfigError("prime must be an odd prime");
            }
        } else {
            if (sample_bound < 1000) throw ConfigError("sample bound must be at least 1000");
        }
    }

    /// Returns a copy with the prime pinned (sampled from the stream when absent).
    FieldSpec resolved(RandomStream& stream) const {
        FieldSpec s = *this;
        if (s.kind == FieldKind::PrimeField && s.prime == 0) s.prime = sample_prime(stream);
        return s;
    }
};

template <class S>
struct FieldTraits;

template <>
struct FieldTraits<Fp> {
    static constexpr FieldKind kind = FieldKind::PrimeField;
};

template <>
struct FieldTraits<Rational> {
    static constexpr FieldKind kind = FieldKind::Rationals;
};

/// Uniform canonical scalar.  PrimeField: residue in [0, p).  Rationals:
/// numerator in [-B, B], denominator in [1, B], reduced.
template <class S>
S sample_scalar(const FieldSpec& spec, RandomStream& stream);

template <>
inline Fp sample_scalar<Fp>(const FieldSpec& spec, RandomStream& stream) {
    return Fp(stream.below(spec.prime), spec.prime);
}

template <>
inline Rational sample_scalar<Rational>(const FieldSpec& spec, RandomStream& stream) {
    const std::int64_t b = static_cast<std::int64_t>(spec.sample_bound);
    const std::int64_t num = stream.in_range(-b, b);
    const std::int64_t den = stream.in_range(1, b);
    return Rational(num, den);
}

template <class S>
S scalar_from_string(const std::string& text, const FieldSpec& spec);

template <>
inline Fp scalar_from_string<Fp>(const std::string& text, const FieldSpec& spec) {
    if (text.empty()) throw ParseError("empty residue literal");
    std::uint64_t v = 0;
    for (char c : text) {
        if (c < '0' || c > '9') throw ParseError("bad residue literal: " + text);
        if (v > (std::numeric_limits<std::uint64_t>::max() - 9) / 10) {
            throw ParseError("residue literal overflows: " + text);
        }
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    if (v >= spec.prime) throw ParseError("residue out of range: " + text);
    return Fp(v, spec.prime);
}

template <>
inline Rational scalar_from_string<Rational>(const std::string& text, const FieldSpec&) {
    return Rational::from_string(text);
}

} // namespace lineage
