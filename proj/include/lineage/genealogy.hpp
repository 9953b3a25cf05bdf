#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <unordered_map>
#include <vector>

#include "lineage/geometry.hpp"

namespace lineage {

using ObjectId = std::uint32_t;

/// Unordered parent pair, stored with a < b.
struct ParentPair {
    ObjectId a = 0;
    ObjectId b = 0;

    static ParentPair of(ObjectId x, ObjectId y) { return x < y ? ParentPair{x, y} : ParentPair{y, x}; }

    friend bool operator==(const ParentPair& l, const ParentPair& r) { return l.a == r.a && l.b == r.b; }
};

/// A parent pair together with the generation at which it was first recorded.
struct RecordedPair {
    ObjectId a = 0;
    ObjectId b = 0;
    std::uint32_t generation = 0;
};

/// First pedigree of an object: a seed leaf (1-based Adam index) or a birth.
struct Origin {
    std::uint32_t adam = 0;  // > 0 means leaf
    ParentPair parents{};

    static Origin leaf(std::uint32_t adam_index) { return Origin{adam_index, {}}; }
    static Origin birth(ObjectId a, ObjectId b) { return Origin{0, ParentPair::of(a, b)}; }
    bool is_leaf() const { return adam > 0; }
};

enum class MatingPolicy : std::uint8_t { AllPairs, SameGenerationOnly };

inline const char* policy_name(MatingPolicy p) {
    return p == MatingPolicy::AllPairs ? "all-pairs" : "same-generation";
}

struct GenerationInfo {
    std::uint32_t index = 0;
    Gender gender = Gender::Point;
    std::vector<ObjectId> new_ids;
};

/// Registry of every object ever born: canonical coordinates to id per
/// gender, plus per-object birth data.  Entries never change after creation
/// except that parent-pair sets grow.
template <class S>
class Ledger {
public:
    struct Record {
        Gender gender;
        S c1;
        S c2;
        std::uint32_t birth_generation = 0;
        Origin origin;
        std::vector<RecordedPair> parent_pairs;
    };

    Ledger() = default;

    explicit Ledger(const std::vector<GeomObject<S>>& seeds) {
        assert(!seeds.empty());
        seed_gender_ = seeds.front().gender;
        GenerationInfo gen0{0, seed_gender_, {}};
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            const ObjectId id = insert(seeds[i], 0, Origin::leaf(static_cast<std::uint32_t>(i + 1)));
            gen0.new_ids.push_back(id);
        }
        generations_.push_back(std::move(gen0));
    }

    std::size_t size() const { return objects_.size(); }

    const Record& record(ObjectId id) const {
        if (id >= objects_.size()) throw UnknownId("no object with id " + std::to_string(id));
        return objects_[id];
    }

    GeomObject<S> object(ObjectId id) const {
        const Record& r = record(id);
        return GeomObject<S>{r.gender, r.c1, r.c2};
    }

    std::optional<ObjectId> find(Gender g, const S& c1, const S& c2) const {
        const auto& reg = registry_[static_cast<int>(g)];
        const auto it = reg.find(Key{c1, c2});
        if (it == reg.end()) return std::nullopt;
        return it->second;
    }

    /// Ids of all objects of one gender, ascending (= discovery order).
    const std::vector<ObjectId>& ids_of(Gender g) const { return by_gender_[static_cast<int>(g)]; }

    const std::vector<GenerationInfo>& generations() const { return generations_; }

    std::uint32_t last_generation() const {
        return static_cast<std::uint32_t>(generations_.size()) - 1;
    }

    Gender seed_gender() const { return seed_gender_; }

    Gender gender_of_generation(std::uint32_t g) const {
        return g % 2 == 0 ? seed_gender_ : opposite(seed_gender_);
    }

    // Mutators below are used by the generation step and by snapshot restore.

    ObjectId insert(const GeomObject<S>& obj, std::uint32_t birth_generation, Origin origin) {
        const ObjectId id = static_cast<ObjectId>(objects_.size());
        objects_.push_back(Record{obj.gender, obj.c1, obj.c2, birth_generation, origin, {}});
        registry_[static_cast<int>(obj.gender)].emplace(Key{obj.c1, obj.c2}, id);
        by_gender_[static_cast<int>(obj.gender)].push_back(id);
        return id;
    }

    ObjectId insert(GeomObject<S>&& obj, std::uint32_t birth_generation, Origin origin) {
        const ObjectId id = static_cast<ObjectId>(objects_.size());
        registry_[static_cast<int>(obj.gender)].emplace(Key{obj.c1, obj.c2}, id);
        by_gender_[static_cast<int>(obj.gender)].push_back(id);
        objects_.push_back(
            Record{obj.gender, std::move(obj.c1), std::move(obj.c2), birth_generation, origin, {}});
        return id;
    }

    /// Records (a,b) as a parent pair of id.  Returns false if already known.
    bool record_parent_pair(ObjectId id, ObjectId a, ObjectId b, std::uint32_t generation) {
        const ParentPair p = ParentPair::of(a, b);
        auto& pairs = objects_[id].parent_pairs;
        for (const RecordedPair& rp : pairs) {
            if (rp.a == p.a && rp.b == p.b) return false;
        }
        pairs.push_back(RecordedPair{p.a, p.b, generation});
        return true;
    }

    void push_generation(GenerationInfo info) {
        assert(info.index == generations_.size());
        generations_.push_back(std::move(info));
    }

    void set_seed_gender(Gender g) { seed_gender_ = g; }

private:
    struct Key {
        S c1;
        S c2;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            const std::size_t h1 = hash_value(k.c1);
            const std::size_t h2 = hash_value(k.c2);
            return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
        }
    };
    struct KeyEq {
        bool operator()(const Key& l, const Key& r) const { return l.c1 == r.c1 && l.c2 == r.c2; }
    };

    std::vector<Record> objects_;
    std::array<std::unordered_map<Key, ObjectId, KeyHash, KeyEq>, 2> registry_;
    std::array<std::vector<ObjectId>, 2> by_gender_;
    std::vector<GenerationInfo> generations_;
    Gender seed_gender_ = Gender::Point;
};

struct CoincidenceEvent {
    ObjectId child = 0;
    ParentPair pair{};
    bool child_preexisted = false;  // false: multi-birth within this batch
};

struct GenerationResult {
    std::vector<ObjectId> new_ids;
    std::vector<CoincidenceEvent> coincidences;
    std::uint64_t candidate_pairs = 0;
};

namespace detail {

/// Number of pairs (i', j) with i' < i over n parents, lexicographic order.
inline std::uint64_t pair_row_start(std::uint64_t i, std::uint64_t n) {
    return i * (2 * n - i - 1) / 2;
}

/// Inverse of the triangular indexing: global pair index -> (i, j).
inline std::pair<std::size_t, std::size_t> pair_at(std::uint64_t t, std::size_t n) {
    std::uint64_t lo = 0, hi = n;  // invariant: row_start(lo) <= t < row_start(hi)
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (pair_row_start(mid, n) <= t) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const std::size_t i = static_cast<std::size_t>(lo);
    const std::size_t j = i + 1 + static_cast<std::size_t>(t - pair_row_start(lo, n));
    return {i, j};
}

template <class S>
struct ChildSlot {
    S c1;
    S c2;
    bool ok = false;
};

} // namespace detail

/// Runs one generation of matings.
///
/// Candidate pairs are enumerated in lexicographic (smaller id, larger id)
/// order; workers evaluate disjoint contiguous ranges of that order and the
/// commit step walks it sequentially, so new ids are independent of the
/// worker count.
template <class S>
GenerationResult next_generation(Ledger<S>& ledger, std::uint32_t gen_index, MatingPolicy policy,
                                 unsigned workers = 1) {
    assert(gen_index >= 1);
    assert(gen_index == ledger.generations().size() && "previous generations must be complete");

    const Gender parent_gender = ledger.gender_of_generation(gen_index - 1);
    const Gender child_gender = opposite(parent_gender);

    const std::vector<ObjectId>& parents = policy == MatingPolicy::AllPairs
                                               ? ledger.ids_of(parent_gender)
                                               : ledger.generations()[gen_index - 1].new_ids;
    const std::size_t n = parents.size();
    const std::uint64_t total = n < 2 ? 0 : detail::pair_row_start(n, n);

    std::vector<detail::ChildSlot<S>> slots(static_cast<std::size_t>(total));

    const auto evaluate_range = [&](std::uint64_t t0, std::uint64_t t1) {
        if (t0 >= t1) return;
        auto [i, j] = detail::pair_at(t0, n);
        for (std::uint64_t t = t0; t < t1; ++t) {
            const auto& pa = ledger.record(parents[i]);
            const auto& pb = ledger.record(parents[j]);
            auto& slot = slots[static_cast<std::size_t>(t)];
            try {
                auto [c1, c2] = child_coords(pa.c1, pa.c2, pb.c1, pb.c2);
                slot.c1 = std::move(c1);
                slot.c2 = std::move(c2);
                slot.ok = true;
            } catch (const DegenerateConfiguration&) {
                slot.ok = false;
            }
            if (++j == n) {
                ++i;
                j = i + 1;
            }
        }
    };

    if (workers <= 1 || total < 2) {
        evaluate_range(0, total);
    } else {
        const unsigned nw = static_cast<unsigned>(std::min<std::uint64_t>(workers, total));
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(nw);
        pool.reserve(nw);
        for (unsigned w = 0; w < nw; ++w) {
            const std::uint64_t t0 = total * w / nw;
            const std::uint64_t t1 = total * (w + 1) / nw;
            pool.emplace_back([&, w, t0, t1] {
                try {
                    evaluate_range(t0, t1);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    for (const auto& slot : slots) {
        if (!slot.ok) {
            throw DegenerateConfiguration("degenerate mating at generation " + std::to_string(gen_index));
        }
    }

    // Deterministic commit: walk pairs in lexicographic order, assign fresh
    // ids in order of first appearance of a new canonical value.
    GenerationResult result;
    result.candidate_pairs = total;
    std::size_t i = 0, j = 1;
    for (std::uint64_t t = 0; t < total; ++t) {
        auto& slot = slots[static_cast<std::size_t>(t)];
        const ObjectId pa = parents[i];
        const ObjectId pb = parents[j];
        if (const auto existing = ledger.find(child_gender, slot.c1, slot.c2)) {
            const ObjectId id = *existing;
            if (ledger.record_parent_pair(id, pa, pb, gen_index)) {
                const bool preexisted = ledger.record(id).birth_generation < gen_index;
                result.coincidences.push_back(CoincidenceEvent{id, ParentPair::of(pa, pb), preexisted});
            }
        } else {
            const ObjectId id =
                ledger.insert(GeomObject<S>{child_gender, std::move(slot.c1), std::move(slot.c2)},
                              gen_index, Origin::birth(pa, pb));
            ledger.record_parent_pair(id, pa, pb, gen_index);
            result.new_ids.push_back(id);
        }
        if (++j == n) {
            ++i;
            j = i + 1;
        }
    }

    ledger.push_generation(GenerationInfo{gen_index, child_gender, result.new_ids});
    return result;
}

/// Per-generation count of newly born objects; index 0 is the seed count.
template <class S>
std::vector<std::uint64_t> new_counts(const Ledger<S>& ledger) {
    std::vector<std::uint64_t> counts;
    counts.reserve(ledger.generations().size());
    for (const auto& g : ledger.generations()) counts.push_back(g.new_ids.size());
    return counts;
}

/// Cumulative count of distinct same-gender objects born up to each
/// generation: parity-wise partial sums of the new counts.
inline std::vector<std::uint64_t> cumulative_by_gender(const std::vector<std::uint64_t>& counts) {
    std::vector<std::uint64_t> out(counts.size());
    for (std::size_t g = 0; g < counts.size(); ++g) {
        out[g] = counts[g] + (g >= 2 ? out[g - 2] : 0);
    }
    return out;
}

} // namespace lineage
