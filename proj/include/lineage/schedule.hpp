#pragma once

#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lineage/genealogy.hpp"
#include "lineage/seeding.hpp"

namespace lineage {

/// Full description of a run.  Everything downstream (seeds, primes,
/// resampling) derives deterministically from this plus the generation count.
struct RunConfig {
    SeedConfig seed;
    MatingPolicy policy = MatingPolicy::AllPairs;
    std::uint32_t max_generation = 5;
    std::uint32_t verify_runs = 2;   // independent instances in prime mode
    std::uint32_t resample_limit = 32;
    unsigned workers = 1;

    void validate() const {
        seed.validate();
        if (verify_runs == 0) throw ConfigError("verify_runs must be at least 1");
        if (resample_limit == 0) throw ConfigError("resample_limit must be at least 1");
        if (workers == 0) throw ConfigError("workers must be at least 1");
    }

    std::uint32_t instance_count() const {
        return seed.field.kind == FieldKind::PrimeField ? verify_runs : 1;
    }
};

/// One independent arithmetic instance of a run: a concrete field (with
/// prime, in prime mode), the seed objects it drew, and its ledger.
template <class S>
struct Instance {
    FieldSpec field;              // resolved; field.prime is the actual modulus
    std::uint64_t base_seed = 0;  // slot seed; attempt folds in on resample
    std::uint32_t attempt = 0;    // resamples consumed for this slot
    Ledger<S> ledger;
};

template <class S>
struct RunState {
    RunConfig config;
    std::uint32_t ensemble_attempt = 0;  // whole-ensemble resamples consumed
    std::vector<Instance<S>> instances;

    std::uint32_t generations_done() const { return instances.front().ledger.last_generation(); }
    const Ledger<S>& primary() const { return instances.front().ledger; }
};

namespace detail {

// Domain-separation tags for seed derivation.
inline constexpr std::uint64_t kTagEnsemble = 0x656e73656d626c65ULL;  // "ensemble"
inline constexpr std::uint64_t kTagAttempt = 0x617474656d7074ULL;     // "attempt"
inline constexpr std::uint64_t kTagPrime = 0x7072696d65ULL;           // "prime"
inline constexpr std::uint64_t kTagCoords = 0x636f6f726473ULL;        // "coords"

inline std::uint64_t instance_slot_seed(const RunConfig& config, std::uint32_t ensemble_attempt,
                                        std::uint32_t slot) {
    const std::uint64_t base = derive_seed(config.seed.field.rng_seed, kTagEnsemble + ensemble_attempt);
    return derive_seed(base, slot);
}

/// Seeds one instance afresh for the given attempt number.
template <class S>
Instance<S> make_instance(const RunConfig& config, std::uint64_t slot_seed, std::uint32_t attempt) {
    const std::uint64_t eff = derive_seed(slot_seed, kTagAttempt + attempt);
    FieldSpec field = config.seed.field;
    field.rng_seed = eff;
    RandomStream prime_stream(derive_seed(eff, kTagPrime));
    field = field.resolved(prime_stream);

    SeedConfig seed_cfg = config.seed;
    seed_cfg.field = field;
    RandomStream coord_stream(derive_seed(eff, kTagCoords));
    Ledger<S> ledger(seed_objects<S>(seed_cfg, coord_stream, Gender::Point));
    return Instance<S>{field, slot_seed, attempt, std::move(ledger)};
}

/// Rebuilds an instance from scratch (next attempt) and replays it through
/// `target` generations.  Degenerate matings keep consuming attempts.
template <class S>
void resample_instance(const RunConfig& config, Instance<S>& inst, std::uint32_t target) {
    for (;;) {
        if (inst.attempt + 1 > config.resample_limit) {
            throw SeedFailure("exceeded resample limit rebuilding an instance");
        }
        Instance<S> fresh = make_instance<S>(config, inst.base_seed, inst.attempt + 1);
        try {
            for (std::uint32_t g = 1; g <= target; ++g) {
                next_generation(fresh.ledger, g, config.policy, config.workers);
            }
            inst = std::move(fresh);
            return;
        } catch (const DegenerateConfiguration&) {
            inst.attempt = fresh.attempt;  // burn the attempt, try again
        }
    }
}

} // namespace detail

/// Called after each completed generation (all instances advanced + agreed).
template <class S>
using GenerationCallback = std::function<void(const RunState<S>&, std::uint32_t)>;

/// Seeds all instances of a fresh run (generation 0 only).
template <class S>
RunState<S> start_run(const RunConfig& config) {
    config.validate();
    RunState<S> state;
    state.config = config;
    state.ensemble_attempt = 0;
    const std::uint32_t n = config.instance_count();
    for (std::uint32_t slot = 0; slot < n; ++slot) {
        const std::uint64_t slot_seed = detail::instance_slot_seed(config, 0, slot);
        Instance<S> inst = detail::make_instance<S>(config, slot_seed, 0);
        state.instances.push_back(std::move(inst));
    }
    return state;
}

/// Advances all instances in lockstep to `target` generations.
///
/// After each generation the per-instance new-object counts must agree; a
/// disagreement means some instance hit an unlucky modulus, so the whole
/// ensemble is redrawn (bounded by resample_limit) and replayed.  A
/// degenerate mating redraws just the affected instance.
template <class S>
void advance_to(RunState<S>& state, std::uint32_t target,
                const GenerationCallback<S>& on_generation = {}) {
    while (state.generations_done() < target) {
        const std::uint32_t g = state.generations_done() + 1;
        for (auto& inst : state.instances) {
            try {
                next_generation(inst.ledger, g, state.config.policy, state.config.workers);
            } catch (const DegenerateConfiguration&) {
                detail::resample_instance(state.config, inst, g);
            }
        }

        bool agreed = true;
        const std::size_t count0 = state.instances.front().ledger.generations()[g].new_ids.size();
        for (const auto& inst : state.instances) {
            if (inst.ledger.generations()[g].new_ids.size() != count0) {
                agreed = false;
                break;
            }
        }
        if (!agreed) {
            if (state.ensemble_attempt + 1 > state.config.resample_limit) {
                std::ostringstream msg;
                msg << "instances disagree at generation " << g << " after "
                    << state.ensemble_attempt << " ensemble resamples:";
                for (const auto& inst : state.instances) {
                    msg << ' ' << inst.ledger.generations()[g].new_ids.size();
                }
                throw VerificationMismatch(msg.str());
            }
            // Redraw every instance under a new ensemble attempt and replay.
            const std::uint32_t attempt = ++state.ensemble_attempt;
            for (std::uint32_t slot = 0; slot < state.instances.size(); ++slot) {
                Instance<S> inst;
                inst.base_seed = detail::instance_slot_seed(state.config, attempt, slot);
                inst.attempt = 0;
                try {
                    inst = detail::make_instance<S>(state.config, inst.base_seed, 0);
                    for (std::uint32_t gg = 1; gg < g; ++gg) {
                        next_generation(inst.ledger, gg, state.config.policy, state.config.workers);
                    }
                } catch (const DegenerateConfiguration&) {
                    detail::resample_instance(state.config, inst, g - 1);
                }
                state.instances[static_cast<std::size_t>(slot)] = std::move(inst);
            }
            continue;  // retry generation g with the fresh ensemble
        }

        if (on_generation) on_generation(state, g);
    }
}

/// Seeds and runs a full schedule to config.max_generation.
template <class S>
RunState<S> run_schedule(const RunConfig& config, const GenerationCallback<S>& on_generation = {}) {
    RunState<S> state = start_run<S>(config);
    advance_to(state, config.max_generation, on_generation);
    return state;
}

/// Per-generation statistics, derived from the ledger so they survive
/// snapshot round trips.
struct GenerationStats {
    std::uint32_t generation = 0;
    std::uint64_t candidate_pairs = 0;
    std::uint64_t new_objects = 0;
    std::uint64_t rediscoveries = 0;  // pairs landing on an older object
    std::uint64_t multi_births = 0;   // extra pairs landing on a same-batch child
};

template <class S>
std::vector<GenerationStats> generation_stats(const Ledger<S>& ledger, MatingPolicy policy) {
    const auto counts = new_counts(ledger);
    std::vector<GenerationStats> stats(counts.size());
    for (std::uint32_t g = 0; g < counts.size(); ++g) {
        stats[g].generation = g;
        stats[g].new_objects = counts[g];
        if (g == 0) continue;
        std::uint64_t parents = 0;
        if (policy == MatingPolicy::AllPairs) {
            for (std::uint32_t h = (g - 1) % 2; h < g; h += 2) parents += counts[h];
        } else {
            parents = counts[g - 1];
        }
        stats[g].candidate_pairs = parents * (parents - 1) / 2;
    }
    for (ObjectId id = 0; id < ledger.size(); ++id) {
        const auto& rec = ledger.record(id);
        for (std::size_t k = 0; k < rec.parent_pairs.size(); ++k) {
            const auto& rp = rec.parent_pairs[k];
            if (rec.origin.is_leaf()) {
                stats[rp.generation].rediscoveries += 1;
            } else if (rp.generation > rec.birth_generation) {
                stats[rp.generation].rediscoveries += 1;
            } else if (k > 0) {
                stats[rp.generation].multi_births += 1;  // first pair is the birth itself
            }
        }
    }
    return stats;
}

} // namespace lineage
