#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "lineage/field.hpp"

using namespace lineage;

TEST_CASE("rational arithmetic in canonical form", "[field]") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-1, -2) == Rational(1, 2));
    CHECK(Rational(1, -2) == Rational(-1, 2));
    CHECK(to_string(Rational(1, 2)) == "1/2");
    CHECK(to_string(Rational(-3)) == "-3");
    CHECK(to_string(Rational(6, -4)) == "-3/2");
    CHECK(Rational(7).denominator() == 1);
    CHECK(Rational(3, 4) * Rational(4, 3) == Rational(1));
    CHECK(Rational(1, 3) - Rational(1, 3) == Rational(0));
    CHECK((-Rational(2, 5)) == Rational(-2, 5));
    CHECK(Rational(5, 7) / Rational(5, 7) == Rational(1));
    CHECK(Rational(0).is_zero());
    CHECK_FALSE(Rational(1, 1000000).is_zero());
}

TEST_CASE("rational failure modes", "[field]") {
    CHECK_THROWS_AS(Rational(1, 0), DivisionByZero);
    CHECK_THROWS_AS(Rational(1) / Rational(0), DivisionByZero);
    CHECK_THROWS_AS(Rational::from_string("abc"), ParseError);
    CHECK_THROWS_AS(Rational::from_string(""), ParseError);
    CHECK_THROWS_AS(Rational::from_string("1/0"), ParseError);
}

TEST_CASE("rational string round trip", "[field]") {
    RandomStream rs(42);
    FieldSpec spec;
    spec.kind = FieldKind::Rationals;
    spec.sample_bound = 1'000'000;
    for (int i = 0; i < 200; ++i) {
        const Rational x = sample_scalar<Rational>(spec, rs);
        CHECK(Rational::from_string(to_string(x)) == x);
    }
    CHECK(Rational::from_string("10/4") == Rational(5, 2));
}

TEST_CASE("prime field small-modulus semantics", "[field]") {
    const std::uint64_t p = 7;
    CHECK(Fp(3, p) * Fp(5, p) == Fp(1, p));
    CHECK(Fp(3, p) + Fp(5, p) == Fp(1, p));
    CHECK(Fp(3, p) - Fp(5, p) == Fp(5, p));
    CHECK(Fp(1, p) / Fp(3, p) == Fp(5, p));
    CHECK(Fp::from_int(-1, p) == Fp(6, p));
    CHECK(Fp::from_int(-14, p) == Fp(0, p));
    CHECK(Fp(10, p) == Fp(3, p));
    CHECK((-Fp(0, p)) == Fp(0, p));
    CHECK_THROWS_AS(Fp(1, p) / Fp(0, p), DivisionByZero);
}

TEST_CASE("primality test against known values", "[field]") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(3));
    CHECK_FALSE(is_prime_u64(1));
    CHECK_FALSE(is_prime_u64(25));
    CHECK_FALSE(is_prime_u64(561));    // Carmichael
    CHECK_FALSE(is_prime_u64(1729));   // Carmichael
    CHECK(is_prime_u64((1ULL << 61) - 1));  // Mersenne prime
    CHECK_FALSE(is_prime_u64((1ULL << 61) + 1));
    CHECK(is_prime_u64(1'000'000'007ULL));
    CHECK_FALSE(is_prime_u64(3'215'031'751ULL));  // strong pseudoprime to bases 2,3,5,7
}

TEST_CASE("prime sampling range and determinism", "[field]") {
    RandomStream a(9), b(9), c(10);
    const std::uint64_t p1 = sample_prime(a);
    CHECK(p1 >= (1ULL << 60));
    CHECK(p1 < (1ULL << 62));
    CHECK(is_prime_u64(p1));
    CHECK(sample_prime(b) == p1);      // same seed, same prime
    CHECK(sample_prime(c) != p1);      // (overwhelmingly) different stream
}

TEMPLATE_TEST_CASE("field axioms on random triples", "[field]", Rational, Fp) {
    RandomStream seed_stream(7);
    FieldSpec spec;
    spec.kind = FieldTraits<TestType>::kind;
    spec.sample_bound = 1000;
    spec = spec.resolved(seed_stream);
    RandomStream rs(21);

    for (int i = 0; i < 1000; ++i) {
        const TestType x = sample_scalar<TestType>(spec, rs);
        const TestType y = sample_scalar<TestType>(spec, rs);
        const TestType z = sample_scalar<TestType>(spec, rs);
        const TestType one = x.one();
        const TestType zero = x - x;

        REQUIRE((x + y) + z == x + (y + z));
        REQUIRE((x * y) * z == x * (y * z));
        REQUIRE(x + y == y + x);
        REQUIRE(x * y == y * x);
        REQUIRE(x * (y + z) == x * y + x * z);
        REQUIRE(x + zero == x);
        REQUIRE(x * one == x);
        REQUIRE(x + (-x) == zero);
        if (!x.is_zero()) {
            REQUIRE(x / x == one);
            REQUIRE((y / x) * x == y);
        }
    }
}

TEST_CASE("prime field agrees with rational arithmetic reduced mod p", "[field]") {
    RandomStream seed_stream(3);
    FieldSpec pspec;
    pspec = pspec.resolved(seed_stream);
    const std::uint64_t p = pspec.prime;

    const auto embed = [&](const Rational& q) {
        const std::uint64_t num =
            mpz_class(q.numerator() % p + (mpz_sgn(q.numerator().get_mpz_t()) < 0 ? p : 0)).get_ui() % p;
        const std::uint64_t den = mpz_class(q.denominator() % p).get_ui();
        return Fp(num, p) / Fp(den, p);
    };

    RandomStream rs(5);
    FieldSpec rspec;
    rspec.kind = FieldKind::Rationals;
    rspec.sample_bound = 1'000'000;
    for (int i = 0; i < 500; ++i) {
        const Rational x = sample_scalar<Rational>(rspec, rs);
        const Rational y = sample_scalar<Rational>(rspec, rs);
        const Fp fx = embed(x), fy = embed(y);
        CHECK(embed(x + y) == fx + fy);
        CHECK(embed(x - y) == fx - fy);
        CHECK(embed(x * y) == fx * fy);
        if (!y.is_zero()) CHECK(embed(x / y) == fx / fy);
    }
}

TEMPLATE_TEST_CASE("hashing is stable under canonical equality", "[field]", Rational, Fp) {
    if constexpr (std::is_same_v<TestType, Rational>) {
        CHECK(hash_value(Rational(2, 4)) == hash_value(Rational(1, 2)));
        CHECK(hash_value(Rational(-3, 6)) == hash_value(Rational(1, -2)));
        CHECK(hash_value(Rational(1, 2)) != hash_value(Rational(1, 3)));
    } else {
        CHECK(hash_value(Fp(10, 7)) == hash_value(Fp(3, 7)));
        CHECK(hash_value(Fp(3, 7)) != hash_value(Fp(4, 7)));
    }
}

TEST_CASE("random streams are deterministic and tag-separated", "[field]") {
    RandomStream a(1), b(1);
    for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));

    RandomStream r(77);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t v = r.below(5);
        REQUIRE(v < 5);
        seen.insert(v);
    }
    CHECK(seen.size() == 5);  // every residue reachable
    RandomStream q(78);
    for (int i = 0; i < 200; ++i) {
        const std::int64_t v = q.in_range(-3, 3);
        REQUIRE(v >= -3);
        REQUIRE(v <= 3);
    }
}

TEST_CASE("field specification validation", "[field]") {
    FieldSpec bad;
    bad.prime = 97;  // too small
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    FieldSpec composite;
    composite.prime = (1ULL << 61) + 1;
    CHECK_THROWS_AS(composite.validate(), ConfigError);

    FieldSpec good;
    good.prime = (1ULL << 61) - 1;
    CHECK_NOTHROW(good.validate());

    FieldSpec rational;
    rational.kind = FieldKind::Rationals;
    rational.sample_bound = 10;
    CHECK_THROWS_AS(rational.validate(), ConfigError);
    rational.sample_bound = 1000;
    CHECK_NOTHROW(rational.validate());

    RandomStream rs(1);
    FieldSpec unresolved;
    CHECK(unresolved.prime == 0);
    const FieldSpec resolved = unresolved.resolved(rs);
    CHECK(resolved.prime != 0);
    CHECK_NOTHROW(resolved.validate());
}

TEST_CASE("scalar parsing respects the field", "[field]") {
    FieldSpec spec;
    spec.prime = (1ULL << 61) - 1;
    const Fp x = scalar_from_string<Fp>("12345", spec);
    CHECK(x == Fp(12345, spec.prime));
    CHECK_THROWS_AS(scalar_from_string<Fp>("99999999999999999999999999", spec), ParseError);
    CHECK_THROWS_AS(scalar_from_string<Fp>("12x", spec), ParseError);
    CHECK_THROWS_AS(scalar_from_string<Fp>("2305843009213693951", spec), ParseError);  // == p

    FieldSpec rspec;
    rspec.kind = FieldKind::Rationals;
    CHECK(scalar_from_string<Rational>("-7/3", rspec) == Rational(-7, 3));
}
