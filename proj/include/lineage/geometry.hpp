#pragma once

#include <cstdint>
#include <utility>

#include "lineage/errors.hpp"

namespace lineage {

enum class Gender : std::uint8_t { Point, Line };

inline Gender opposite(Gender g) { return g == Gender::Point ? Gender::Line : Gender::Point; }

inline const char* gender_name(Gender g) { return g == Gender::Point ? "point" : "line"; }

/// A point (s,t) or a line [a,b] meaning ax + by + 1 = 0, over an exact
/// scalar type.  Coordinates are canonical, so equality is componentwise.
template <class S>
struct GeomObject {
    Gender gender;
    S c1;
    S c2;

    friend bool operator==(const GeomObject& a, const GeomObject& b) {
        return a.gender == b.gender && a.c1 == b.c1 && a.c2 == b.c2;
    }
    friend bool operator!=(const GeomObject& a, const GeomObject& b) { return !(a == b); }
};

/// The coordinate formula shared by join and meet (the operation is self-dual).
/// Solving a*x1 + b*y1 = -1, a*x2 + b*y2 = -1 by Cramer's rule gives
/// a = (y1-y2)/D, b = (x2-x1)/D with D = x1*y2 - x2*y1.
template <class S>
std::pair<S, S> child_coords(const S& x1, const S& y1, const S& x2, const S& y2) {
    const S det = x1 * y2 - x2 * y1;
    if (det.is_zero()) throw DegenerateConfiguration();
    return {(y1 - y2) / det, (x2 - x1) / det};
}

/// Line through two distinct points, in [a,b] form.
template <class S>
GeomObject<S> join(const GeomObject<S>& p, const GeomObject<S>& q) {
    if (p.gender != Gender::Point || q.gender != Gender::Point) {
        throw DegenerateConfiguration("join requires two points");
    }
    if (p == q) throw DegenerateConfiguration("join of equal points");
    auto [a, b] = child_coords(p.c1, p.c2, q.c1, q.c2);
    return GeomObject<S>{Gender::Line, std::move(a), std::move(b)};
}

/// Common point of two distinct non-parallel lines.
template <class S>
GeomObject<S> meet(const GeomObject<S>& l, const GeomObject<S>& m) {
    if (l.gender != Gender::Line || m.gender != Gender::Line) {
        throw DegenerateConfiguration("meet requires two lines");
    }
    if (l == m) throw DegenerateConfiguration("meet of equal lines");
    auto [x, y] = child_coords(l.c1, l.c2, m.c1, m.c2);
    return GeomObject<S>{Gender::Point, std::move(x), std::move(y)};
}

/// Child of two same-gender objects: join for points, meet for lines.
template <class S>
GeomObject<S> child(const GeomObject<S>& a, const GeomObject<S>& b) {
    if (a.gender != b.gender) throw DegenerateConfiguration("parents must share a gender");
    return a.gender == Gender::Point ? join(a, b) : meet(a, b);
}

/// Exact incidence test: a*s + b*t + 1 = 0.
template <class S>
bool incident(const GeomObject<S>& p, const GeomObject<S>& l) {
    const S lhs = l.c1 * p.c1 + l.c2 * p.c2 + p.c1.one();
    return lhs.is_zero();
}

template <class S>
std::size_t hash_value(const GeomObject<S>& o) {
    const std::size_t h1 = hash_value(o.c1);
    const std::size_t h2 = hash_value(o.c2);
    const std::size_t tag = o.gender == Gender::Point ? 0x1f83d9abfb41bd6bULL : 0x5be0cd19137e2179ULL;
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2)) ^ tag;
}

} // namespace lineage
