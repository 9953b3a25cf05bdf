#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lineage/miracles.hpp"
#include "lineage/snapshot.hpp"
#include "lineage/version.hpp"

namespace lineage {

/// OEIS-style rendering: comma-space separated terms.
inline std::string emit_sequence(const std::vector<std::uint64_t>& terms) {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(terms[i]);
    }
    return out;
}

struct ReportOptions {
    std::uint32_t fresh_trials = 3;   // echoed; verification already ran
    std::size_t class_limit = 64;     // listed in full detail
    std::size_t certificate_limit = 64;
};

struct Timings {
    double total_ms = 0.0;
    std::vector<double> per_generation_ms;  // index 0 = seeding
};

/// Assembles the machine-readable run report.  Everything except the
/// "timings" subtree is a pure function of the configuration, so reports
/// from identical configurations are identical after deleting that key.
template <class S>
nlohmann::ordered_json build_report(const RunState<S>& state, const MiracleSummary& miracles,
                                    const Timings& timings, const ReportOptions& options = {}) {
    using json = nlohmann::ordered_json;
    const RunConfig& cfg = state.config;
    const Ledger<S>& ledger = state.primary();

    json config{{"adams", cfg.seed.adams},
                {"seed_mode", seed_mode_name(cfg.seed.mode)},
                {"policy", policy_name(cfg.policy)},
                {"field", field_kind_name(cfg.seed.field.kind)},
                {"prime", detail::u64_str(cfg.seed.field.prime)},
                {"rng_seed", detail::u64_str(cfg.seed.field.rng_seed)},
                {"sample_bound", detail::u64_str(cfg.seed.field.sample_bound)},
                {"generations", cfg.max_generation},
                {"verify_runs", cfg.verify_runs},
                {"resample_limit", cfg.resample_limit},
                {"digest", config_digest(cfg)}};

    json instances = json::array();
    for (const auto& inst : state.instances) {
        instances.push_back(json{{"kind", field_kind_name(inst.field.kind)},
                                 {"prime", detail::u64_str(inst.field.prime)},
                                 {"rng_seed", detail::u64_str(inst.field.rng_seed)},
                                 {"attempt", inst.attempt}});
    }

    const auto counts = new_counts(ledger);
    const auto cumulative = cumulative_by_gender(counts);

    std::uint32_t min_witness = 0;
    for (const auto& c : miracles.classes) {
        min_witness = min_witness == 0 ? c.witness_instances : std::min(min_witness, c.witness_instances);
    }

    json verification{{"instances", state.instances.size()},
                      {"ensemble_resamples", state.ensemble_attempt},
                      {"fresh_trials", options.fresh_trials},
                      {"counts_agreed", true},
                      {"min_class_witnesses", min_witness}};

    // Recipes are only rendered for the listed prefix of classes; build the
    // memo just up to the largest id any of them mentions.
    std::size_t memo_count = 0;
    const std::size_t listed = std::max(options.class_limit, options.certificate_limit);
    for (std::size_t i = 0; i < miracles.classes.size() && i < listed; ++i) {
        const auto& c = miracles.classes[i];
        memo_count = std::max<std::size_t>(memo_count, c.child + 1);
        for (ObjectId m : c.members) memo_count = std::max<std::size_t>(memo_count, m + 1);
    }
    const auto memo = build_pedigree_memo(ledger, memo_count);
    json entries = json::array();
    for (const auto& c : miracles.classes) {
        if (entries.size() >= options.class_limit) break;
        json members = json::array();
        for (ObjectId m : c.members) members.push_back(m);
        entries.push_back(json{{"child", c.child},
                               {"child_pedigree", render(memo[c.child])},
                               {"member_gender", gender_name(c.member_gender)},
                               {"members", std::move(members)},
                               {"born", c.child_birth_generation},
                               {"last_edge_generation", c.last_edge_generation},
                               {"trivial", c.trivial},
                               {"witnesses", c.witness_instances}});
    }
    json certificates = json::array();
    for (const auto& cert : build_certificates(memo, miracles.classes, options.certificate_limit)) {
        json recipes = json::array();
        for (const auto& r : cert.rendered) recipes.push_back(r);
        certificates.push_back(json{{"child", cert.child}, {"recipes", std::move(recipes)}});
    }

    json stats = json::array();
    for (const auto& s : generation_stats(ledger, cfg.policy)) {
        stats.push_back(json{{"generation", s.generation},
                             {"candidate_pairs", s.candidate_pairs},
                             {"new_objects", s.new_objects},
                             {"rediscoveries", s.rediscoveries},
                             {"multi_births", s.multi_births}});
    }

    json timing{{"total_ms", timings.total_ms}, {"per_generation_ms", timings.per_generation_ms}};

    return json{{"schema_version", 1},
                {"tool", json{{"name", kToolName}, {"version", kToolVersion}}},
                {"config", std::move(config)},
                {"instances", std::move(instances)},
                {"generations_done", state.generations_done()},
                {"new_counts", counts},
                {"cumulative_by_gender", cumulative},
                {"sequence_new", emit_sequence(counts)},
                {"sequence_cumulative", emit_sequence(cumulative)},
                {"verification", std::move(verification)},
                {"miracles",
                 json{{"classes", miracles.classes.size()},
                      {"trivial", miracles.trivial_count},
                      {"nontrivial", miracles.nontrivial_count},
                      {"entries", std::move(entries)},
                      {"entries_truncated", miracles.classes.size() > options.class_limit},
                      {"certificates", std::move(certificates)},
                      {"certificates_truncated", miracles.classes.size() > options.certificate_limit}}},
                {"stats", std::move(stats)},
                {"timings", std::move(timing)}};
}

} // namespace lineage
