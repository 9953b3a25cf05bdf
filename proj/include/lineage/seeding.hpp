#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lineage/field.hpp"
#include "lineage/geometry.hpp"
#include "lineage/random.hpp"

namespace lineage {

enum class SeedMode : std::uint8_t { GenericPlane, GenericConic };

inline const char* seed_mode_name(SeedMode m) {
    return m == SeedMode::GenericPlane ? "generic" : "conic";
}

struct SeedConfig {
    int adams = 4;
    SeedMode mode = SeedMode::GenericPlane;
    FieldSpec field;

    void validate() const {
        if (adams < 2) throw ConfigError("at least 2 seed points are required");
        field.validate();
    }
};

namespace detail {

/// Every pair must be distinct and fruitful: the shared child formula needs
/// c1*c2' - c1'*c2 != 0.  The same test covers point and line seeds.
template <class S>
bool pairwise_generic(const std::vector<GeomObject<S>>& objs) {
    for (std::size_t i = 0; i < objs.size(); ++i) {
        for (std::size_t j = i + 1; j < objs.size(); ++j) {
            if (objs[i] == objs[j]) return false;
            if ((objs[i].c1 * objs[j].c2 - objs[j].c1 * objs[i].c2).is_zero()) return false;
        }
    }
    return true;
}

template <class S>
std::vector<GeomObject<S>> try_plane_seeds(const SeedConfig& cfg, RandomStream& stream, Gender gender) {
    std::vector<GeomObject<S>> objs;
    objs.reserve(static_cast<std::size_t>(cfg.adams));
    for (int i = 0; i < cfg.adams; ++i) {
        S c1 = sample_scalar<S>(cfg.field, stream);
        S c2 = sample_scalar<S>(cfg.field, stream);
        objs.push_back(GeomObject<S>{gender, std::move(c1), std::move(c2)});
    }
    return objs;
}

/// Seeds on a random nondegenerate conic: the rational circle parametrization
/// u -> ((1-u^2)/(1+u^2), 2u/(1+u^2)) pushed through a random invertible
/// projective map.  Exact by construction: all points satisfy one quadratic.
template <class S>
std::vector<GeomObject<S>> try_conic_seeds(const SeedConfig& cfg, RandomStream& stream, Gender gender) {
    std::array<S, 9> m;
    for (auto& e : m) e = sample_scalar<S>(cfg.field, stream);
    const S det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
                  m[2] * (m[3] * m[7] - m[4] * m[6]);
    if (det.is_zero()) return {};

    std::vector<GeomObject<S>> objs;
    std::vector<S> params;
    objs.reserve(static_cast<std::size_t>(cfg.adams));
    int guard = 0;
    while (static_cast<int>(objs.size()) < cfg.adams) {
        if (++guard > cfg.adams * 16) return {};
        S u = sample_scalar<S>(cfg.field, stream);
        bool dup = false;
        for (const S& v : params) dup = dup || v == u;
        if (dup) continue;

        const S one = u.one();
        const S uu = u * u;
        const S w = one + uu;              // 1 + u^2, can vanish mod p
        if (w.is_zero()) continue;
        const S cx = one - uu;             // homogeneous circle point (1-u^2, 2u, 1+u^2)
        const S cy = u + u;
        const S x = m[0] * cx + m[1] * cy + m[2] * w;
        const S y = m[3] * cx + m[4] * cy + m[5] * w;
        const S z = m[6] * cx + m[7] * cy + m[8] * w;
        if (z.is_zero()) continue;
        params.push_back(u);
        objs.push_back(GeomObject<S>{gender, x / z, y / z});
    }
    return objs;
}

} // namespace detail

/// Samples k generic seed objects, retrying whole sets until the pairwise
/// genericity contract holds.  Throws SeedFailure after max_attempts.
template <class S>
std::vector<GeomObject<S>> seed_objects(const SeedConfig& cfg, RandomStream& stream, Gender gender,
                                        int max_attempts = 32) {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        auto objs = cfg.mode == SeedMode::GenericPlane
                        ? detail::try_plane_seeds<S>(cfg, stream, gender)
                        : detail::try_conic_seeds<S>(cfg, stream, gender);
        if (objs.size() == static_cast<std::size_t>(cfg.adams) && detail::pairwise_generic(objs)) {
            return objs;
        }
    }
    throw SeedFailure("no generic seed set after " + std::to_string(max_attempts) + " attempts");
}

template <class S>
std::vector<GeomObject<S>> seed_points(const SeedConfig& cfg, RandomStream& stream, int max_attempts = 32) {
    return seed_objects<S>(cfg, stream, Gender::Point, max_attempts);
}

} // namespace lineage
