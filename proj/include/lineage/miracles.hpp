#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "lineage/pedigree.hpp"
#include "lineage/schedule.hpp"

namespace lineage {

/// A verified coincidence: every pair from `members` produces the same
/// child.  Members all share a gender; the child has the opposite one.
/// Lines as members means concurrency, points means collinearity.
struct CogenyClass {
    Gender member_gender = Gender::Point;
    std::vector<ObjectId> members;  // ascending, size >= 3
    ObjectId child = 0;
    std::uint32_t child_birth_generation = 0;
    std::uint32_t last_edge_generation = 0;
    bool trivial = false;  // follows from earlier structure (child predates some pairing)
    std::uint32_t witness_instances = 1;
};

namespace detail {

struct MiniUnionFind {
    std::vector<std::uint32_t> parent;

    explicit MiniUnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0u);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void merge(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

} // namespace detail

/// Extracts every coincidence class recorded in a ledger.
///
/// For each object, the recorded parent pairs form a graph on its parents.
/// Exact arithmetic forces each connected component to be a clique (two
/// pairs sharing a parent pin both other parents onto the same dual
/// object); any component of three or more parents is a class.  Clique
/// edges the mating schedule never enumerated (possible across generations
/// under the same-generation policy) are verified here by direct
/// computation, and a failure of cliqueness throws CogenyViolation.
template <class S>
std::vector<CogenyClass> extract_cogeny_classes(const Ledger<S>& ledger) {
    std::vector<CogenyClass> classes;
    std::vector<ObjectId> verts;
    std::map<ObjectId, std::uint32_t> index;
    for (ObjectId id = 0; id < ledger.size(); ++id) {
        const auto& rec = ledger.record(id);
        if (rec.parent_pairs.size() < 2) continue;

        verts.clear();
        index.clear();
        for (const auto& rp : rec.parent_pairs) {
            for (ObjectId v : {rp.a, rp.b}) {
                if (index.emplace(v, static_cast<std::uint32_t>(verts.size())).second) {
                    verts.push_back(v);
                }
            }
        }
        detail::MiniUnionFind uf(verts.size());
        for (const auto& rp : rec.parent_pairs) uf.merge(index[rp.a], index[rp.b]);

        std::map<std::uint32_t, std::vector<ObjectId>> components;  // keyed by root
        for (std::uint32_t v = 0; v < verts.size(); ++v) components[uf.find(v)].push_back(verts[v]);

        for (auto& [root, members] : components) {
            if (members.size() < 3) continue;
            std::sort(members.begin(), members.end());

            std::uint32_t last_edge = 0;
            for (std::size_t x = 0; x < members.size(); ++x) {
                for (std::size_t y = x + 1; y < members.size(); ++y) {
                    const ParentPair want = ParentPair::of(members[x], members[y]);
                    const RecordedPair* found = nullptr;
                    for (const auto& rp : rec.parent_pairs) {
                        if (rp.a == want.a && rp.b == want.b) {
                            found = &rp;
                            break;
                        }
                    }
                    if (found) {
                        last_edge = std::max(last_edge, found->generation);
                        continue;
                    }
                    // Close the clique by direct computation.
                    const auto& ra = ledger.record(want.a);
                    const auto& rb = ledger.record(want.b);
                    try {
                        const auto [c1, c2] = child_coords(ra.c1, ra.c2, rb.c1, rb.c2);
                        if (!(c1 == rec.c1 && c2 == rec.c2)) {
                            throw CogenyViolation("parents " + std::to_string(want.a) + "," +
                                                  std::to_string(want.b) +
                                                  " fail to reproduce object " + std::to_string(id));
                        }
                    } catch (const DegenerateConfiguration&) {
                        throw CogenyViolation("parents " + std::to_string(want.a) + "," +
                                              std::to_string(want.b) + " of object " +
                                              std::to_string(id) + " coincide");
                    }
                }
            }

            CogenyClass c;
            c.member_gender = opposite(rec.gender);
            c.members = members;
            c.child = id;
            c.child_birth_generation = rec.birth_generation;
            c.last_edge_generation = last_edge;
            // A class whose latest pairing postdates the child's birth only
            // rediscovers an object that was already forced to exist.
            c.trivial = last_edge > rec.birth_generation;
            classes.push_back(std::move(c));
        }
    }
    return classes;
}

/// Recomputes the values of every ledger object from fresh seed points,
/// following each object's first-recorded construction.
template <class S>
std::vector<GeomObject<S>> evaluate_ledger(const Ledger<S>& ledger,
                                           const std::vector<GeomObject<S>>& adams) {
    std::vector<GeomObject<S>> values;
    values.reserve(ledger.size());
    for (ObjectId id = 0; id < ledger.size(); ++id) {
        const auto& rec = ledger.record(id);
        if (rec.origin.is_leaf()) {
            if (rec.origin.adam > adams.size()) {
                throw UnknownId("ledger references seed " + std::to_string(rec.origin.adam) +
                                " but only " + std::to_string(adams.size()) + " were drawn");
            }
            values.push_back(adams[rec.origin.adam - 1]);
        } else {
            const auto& va = values[rec.origin.parents.a];
            const auto& vb = values[rec.origin.parents.b];
            auto [c1, c2] = child_coords(va.c1, va.c2, vb.c1, vb.c2);
            values.push_back(GeomObject<S>{rec.gender, std::move(c1), std::move(c2)});
        }
    }
    return values;
}

/// Checks every class against the values of another arithmetic instance.
/// Ids are positionally aligned because both instances committed identical
/// pair orders; a semantic mismatch here means the instances disagree.
template <class S>
void confirm_classes_on_values(const std::vector<GeomObject<S>>& values,
                               std::vector<CogenyClass>& classes) {
    for (const CogenyClass& c : classes) {
        const GeomObject<S>& expected = values[c.child];
        for (std::size_t x = 0; x < c.members.size(); ++x) {
            for (std::size_t y = x + 1; y < c.members.size(); ++y) {
                const GeomObject<S>& a = values[c.members[x]];
                const GeomObject<S>& b = values[c.members[y]];
                bool ok = false;
                try {
                    const auto [c1, c2] = child_coords(a.c1, a.c2, b.c1, b.c2);
                    ok = c1 == expected.c1 && c2 == expected.c2;
                } catch (const DegenerateConfiguration&) {
                    ok = false;
                }
                if (!ok) {
                    throw VerificationMismatch(
                        "coincidence class with child " + std::to_string(c.child) +
                        " is refuted on an independent instance (members " +
                        std::to_string(c.members[x]) + "," + std::to_string(c.members[y]) + ")");
                }
            }
        }
    }
    for (CogenyClass& c : classes) c.witness_instances += 1;
}

/// Human- and machine-checkable witness of one coincidence class: the
/// pairwise construction recipes that must all yield the same object.
struct Certificate {
    ObjectId child = 0;
    std::vector<ExprPtr> expressions;
    std::vector<std::string> rendered;
};

inline std::vector<Certificate> build_certificates(const std::vector<ExprPtr>& memo,
                                                   const std::vector<CogenyClass>& classes,
                                                   std::size_t limit) {
    std::vector<Certificate> certs;
    for (const CogenyClass& c : classes) {
        if (certs.size() >= limit) break;
        Certificate cert;
        cert.child = c.child;
        for (std::size_t x = 0; x < c.members.size(); ++x) {
            for (std::size_t y = x + 1; y < c.members.size(); ++y) {
                cert.expressions.push_back(child_expr(memo[c.members[x]], memo[c.members[y]]));
            }
        }
        for (const auto& e : cert.expressions) cert.rendered.push_back(render(e));
        certs.push_back(std::move(cert));
    }
    return certs;
}

template <class S>
std::vector<Certificate> build_certificates(const Ledger<S>& ledger,
                                            const std::vector<CogenyClass>& classes,
                                            std::size_t limit) {
    return build_certificates(build_pedigree_memo(ledger), classes, limit);
}

namespace detail {

inline constexpr std::uint64_t kTagVerify = 0x76657269667932ULL;  // "verify2"

/// Draws a fresh arithmetic instance (fresh prime in prime mode unless the
/// configuration pins one, fresh seed points always).
template <class S>
std::vector<GeomObject<S>> draw_fresh_adams(const SeedConfig& cfg, std::uint64_t eff_seed) {
    FieldSpec field = cfg.field;
    field.rng_seed = eff_seed;
    RandomStream prime_stream(derive_seed(eff_seed, kTagPrime));
    field = field.resolved(prime_stream);
    SeedConfig seed_cfg = cfg;
    seed_cfg.field = field;
    RandomStream coord_stream(derive_seed(eff_seed, kTagCoords));
    return seed_objects<S>(seed_cfg, coord_stream, Gender::Point);
}

} // namespace detail

/// Replays every class on `trials` freshly drawn instances.  Degenerate
/// draws are redrawn (bounded); a genuine disagreement throws.
template <class S>
void verify_classes_fresh(const Ledger<S>& ledger, std::vector<CogenyClass>& classes,
                          const SeedConfig& cfg, std::uint32_t trials,
                          std::uint32_t resample_limit, std::uint64_t salt = 0) {
    const std::uint64_t base = derive_seed(cfg.field.rng_seed, detail::kTagVerify ^ salt);
    for (std::uint32_t trial = 0; trial < trials; ++trial) {
        const std::uint64_t trial_seed = derive_seed(base, trial);
        std::vector<GeomObject<S>> values;
        std::uint32_t attempt = 0;
        for (;;) {
            try {
                const std::uint64_t eff = derive_seed(trial_seed, detail::kTagAttempt + attempt);
                values = evaluate_ledger(ledger, detail::draw_fresh_adams<S>(cfg, eff));
                break;
            } catch (const DegenerateConfiguration&) {
                if (++attempt > resample_limit) {
                    throw SeedFailure("exceeded resample limit drawing verification instances");
                }
            }
        }
        confirm_classes_on_values(values, classes);
    }
}

/// Outcome of checking a list of candidate construction recipes.
struct CandidateOutcome {
    bool confirmed = false;
    std::uint32_t witness_instances = 0;  // instances on which all recipes agreed
};

/// Evaluates candidate recipes on `trials` independent instances; confirmed
/// means every recipe produced the same object on every instance.
template <class S>
CandidateOutcome verify_candidate(const std::vector<ExprPtr>& expressions, const SeedConfig& cfg,
                                  std::uint32_t trials, std::uint32_t resample_limit = 32,
                                  std::uint64_t salt = 1) {
    if (expressions.empty()) throw ConfigError("no candidate recipes to verify");
    const std::uint64_t base = derive_seed(cfg.field.rng_seed, detail::kTagVerify ^ salt);
    CandidateOutcome outcome;
    for (std::uint32_t trial = 0; trial < trials; ++trial) {
        const std::uint64_t trial_seed = derive_seed(base, trial);
        std::uint32_t attempt = 0;
        for (;;) {
            const std::uint64_t eff = derive_seed(trial_seed, detail::kTagAttempt + attempt);
            try {
                const auto adams = detail::draw_fresh_adams<S>(cfg, eff);
                const GeomObject<S> first = evaluate(expressions.front(), adams);
                for (std::size_t i = 1; i < expressions.size(); ++i) {
                    if (!(evaluate(expressions[i], adams) == first)) return outcome;
                }
                break;
            } catch (const DegenerateConfiguration&) {
                if (++attempt > resample_limit) {
                    throw SeedFailure("exceeded resample limit drawing candidate instances");
                }
            }
        }
        outcome.witness_instances += 1;
    }
    outcome.confirmed = true;
    return outcome;
}

/// The C(m,2) pairwise children of a member list: the recipes a cogeny
/// claim has to reconcile.
inline std::vector<ExprPtr> pairwise_child_expressions(const std::vector<ExprPtr>& members) {
    if (members.size() < 2) throw ConfigError("a cogeny candidate needs at least two members");
    std::vector<ExprPtr> out;
    for (std::size_t x = 0; x < members.size(); ++x) {
        for (std::size_t y = x + 1; y < members.size(); ++y) {
            out.push_back(child_expr(members[x], members[y]));
        }
    }
    return out;
}

/// Full post-run analysis: extract classes from the primary instance,
/// confirm them on the other run instances, then on freshly drawn ones.
struct MiracleSummary {
    std::vector<CogenyClass> classes;
    std::uint64_t trivial_count = 0;
    std::uint64_t nontrivial_count = 0;
};

template <class S>
MiracleSummary analyze_miracles(const RunState<S>& state, std::uint32_t fresh_trials) {
    MiracleSummary summary;
    summary.classes = extract_cogeny_classes(state.primary());
    for (std::size_t i = 1; i < state.instances.size(); ++i) {
        const auto& lg = state.instances[i].ledger;
        std::vector<GeomObject<S>> values;
        values.reserve(lg.size());
        for (ObjectId id = 0; id < lg.size(); ++id) values.push_back(lg.object(id));
        confirm_classes_on_values(values, summary.classes);
    }
    if (fresh_trials > 0) {
        verify_classes_fresh(state.primary(), summary.classes, state.config.seed, fresh_trials,
                             state.config.resample_limit);
    }
    for (const auto& c : summary.classes) {
        (c.trivial ? summary.trivial_count : summary.nontrivial_count) += 1;
    }
    return summary;
}

} // namespace lineage
