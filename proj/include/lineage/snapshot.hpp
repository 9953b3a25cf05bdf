#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lineage/schedule.hpp"

namespace lineage {

inline constexpr int kSnapshotFormatVersion = 1;
inline constexpr const char* kSnapshotFormatName = "lineage-snapshot";

namespace detail {

inline std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string u64_str(std::uint64_t v) { return std::to_string(v); }

inline std::uint64_t parse_u64(const nlohmann::json& j, const char* what) {
    if (!j.is_string()) throw FormatMismatch(std::string("expected string-encoded integer for ") + what);
    const std::string& s = j.get_ref<const std::string&>();
    if (s.empty()) throw FormatMismatch(std::string("empty integer for ") + what);
    std::uint64_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw FormatMismatch(std::string("bad integer for ") + what);
        if (v > (std::numeric_limits<std::uint64_t>::max() - 9) / 10) {
            throw FormatMismatch(std::string("integer overflow for ") + what);
        }
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
}

inline Gender parse_gender(const nlohmann::json& j) {
    const std::string s = j.get<std::string>();
    if (s == "point") return Gender::Point;
    if (s == "line") return Gender::Line;
    throw FormatMismatch("unknown gender '" + s + "'");
}

} // namespace detail

/// Hash of everything that determines a run's results except how far it was
/// taken (generation target) and how it was parallelized.  Resuming is only
/// legal when this matches.
inline std::string config_digest(const RunConfig& config) {
    std::ostringstream canon;
    canon << "adams=" << config.seed.adams << ";mode=" << seed_mode_name(config.seed.mode)
          << ";field=" << field_kind_name(config.seed.field.kind)
          << ";prime=" << config.seed.field.prime << ";rng_seed=" << config.seed.field.rng_seed
          << ";bound=" << config.seed.field.sample_bound << ";policy=" << policy_name(config.policy)
          << ";verify=" << config.verify_runs << ";resample=" << config.resample_limit;
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << detail::fnv1a(canon.str());
    return hex.str();
}

inline nlohmann::json field_spec_to_json(const FieldSpec& f) {
    return nlohmann::json{{"kind", field_kind_name(f.kind)},
                          {"prime", detail::u64_str(f.prime)},
                          {"rng_seed", detail::u64_str(f.rng_seed)},
                          {"sample_bound", detail::u64_str(f.sample_bound)}};
}

inline FieldSpec field_spec_from_json(const nlohmann::json& j) {
    FieldSpec f;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "rational") {
        f.kind = FieldKind::Rationals;
    } else if (kind == "prime") {
        f.kind = FieldKind::PrimeField;
    } else {
        throw FormatMismatch("unknown field kind '" + kind + "'");
    }
    f.prime = detail::parse_u64(j.at("prime"), "prime");
    f.rng_seed = detail::parse_u64(j.at("rng_seed"), "rng_seed");
    f.sample_bound = detail::parse_u64(j.at("sample_bound"), "sample_bound");
    return f;
}

template <class S>
nlohmann::json ledger_to_json(const Ledger<S>& ledger) {
    nlohmann::json objects = nlohmann::json::array();
    for (ObjectId id = 0; id < ledger.size(); ++id) {
        const auto& rec = ledger.record(id);
        nlohmann::json o{{"gender", gender_name(rec.gender)},
                         {"c1", to_string(rec.c1)},
                         {"c2", to_string(rec.c2)},
                         {"born", rec.birth_generation}};
        if (rec.origin.is_leaf()) {
            o["adam"] = rec.origin.adam;
        } else {
            o["parents"] = {rec.origin.parents.a, rec.origin.parents.b};
        }
        nlohmann::json pairs = nlohmann::json::array();
        for (const auto& rp : rec.parent_pairs) pairs.push_back({rp.a, rp.b, rp.generation});
        o["pairs"] = std::move(pairs);
        objects.push_back(std::move(o));
    }
    return nlohmann::json{{"seed_gender", gender_name(ledger.seed_gender())},
                          {"generations_done", ledger.last_generation()},
                          {"objects", std::move(objects)}};
}

template <class S>
Ledger<S> ledger_from_json(const nlohmann::json& j, const FieldSpec& field) {
    Ledger<S> ledger;
    ledger.set_seed_gender(detail::parse_gender(j.at("seed_gender")));
    const std::uint32_t generations_done = j.at("generations_done").get<std::uint32_t>();
    const auto& objects = j.at("objects");
    if (!objects.is_array() || objects.empty()) throw FormatMismatch("snapshot has no objects");

    for (std::size_t id = 0; id < objects.size(); ++id) {
        const auto& o = objects[id];
        const Gender gender = detail::parse_gender(o.at("gender"));
        const S c1 = scalar_from_string<S>(o.at("c1").get<std::string>(), field);
        const S c2 = scalar_from_string<S>(o.at("c2").get<std::string>(), field);
        const std::uint32_t born = o.at("born").get<std::uint32_t>();
        Origin origin;
        if (o.contains("adam")) {
            if (born != 0) throw FormatMismatch("seed objects must be born at generation 0");
            origin = Origin::leaf(o.at("adam").get<std::uint32_t>());
        } else {
            if (born == 0) throw FormatMismatch("generation 0 must hold only seed objects");
            const auto& p = o.at("parents");
            const auto a = p.at(0).get<ObjectId>();
            const auto b = p.at(1).get<ObjectId>();
            if (a >= id || b >= id) throw FormatMismatch("object parents must precede it");
            origin = Origin::birth(a, b);
        }
        if (born > generations_done) throw FormatMismatch("object born after last generation");
        const ObjectId got = ledger.insert(GeomObject<S>{gender, c1, c2}, born, origin);
        if (got != id) throw FormatMismatch("object ids must be dense");
        for (const auto& pj : o.at("pairs")) {
            const auto a = pj.at(0).get<ObjectId>();
            const auto b = pj.at(1).get<ObjectId>();
            const auto gen = pj.at(2).get<std::uint32_t>();
            if (a >= objects.size() || b >= objects.size() || a == b) {
                throw FormatMismatch("bad parent pair in snapshot");
            }
            ledger.record_parent_pair(got, a, b, gen);
        }
    }

    // Generation lists are derivable: ids are dense in birth order.
    std::vector<GenerationInfo> gens(generations_done + 1);
    for (std::uint32_t g = 0; g <= generations_done; ++g) {
        gens[g].index = g;
        gens[g].gender = ledger.gender_of_generation(g);
    }
    for (ObjectId id = 0; id < ledger.size(); ++id) {
        gens[ledger.record(id).birth_generation].new_ids.push_back(id);
    }
    if (gens.front().new_ids.empty()) throw FormatMismatch("snapshot has no seed objects");
    for (std::uint32_t g = 0; g <= generations_done; ++g) ledger.push_generation(std::move(gens[g]));
    return ledger;
}

template <class S>
nlohmann::json run_state_to_json(const RunState<S>& state) {
    nlohmann::json instances = nlohmann::json::array();
    for (const auto& inst : state.instances) {
        instances.push_back(nlohmann::json{{"field", field_spec_to_json(inst.field)},
                                           {"base_seed", detail::u64_str(inst.base_seed)},
                                           {"attempt", inst.attempt},
                                           {"ledger", ledger_to_json(inst.ledger)}});
    }
    return nlohmann::json{{"format", kSnapshotFormatName},
                          {"format_version", kSnapshotFormatVersion},
                          {"config_digest", config_digest(state.config)},
                          {"ensemble_attempt", state.ensemble_attempt},
                          {"instances", std::move(instances)}};
}

template <class S>
RunState<S> run_state_from_json(const nlohmann::json& j, const RunConfig& config) {
    if (!j.is_object() || j.value("format", "") != kSnapshotFormatName) {
        throw FormatMismatch("not a snapshot file");
    }
    if (j.value("format_version", -1) != kSnapshotFormatVersion) {
        throw FormatMismatch("unsupported snapshot format version");
    }
    if (j.value("config_digest", "") != config_digest(config)) {
        throw ConfigDigestMismatch("snapshot was produced by a different configuration");
    }
    RunState<S> state;
    state.config = config;
    state.ensemble_attempt = j.at("ensemble_attempt").get<std::uint32_t>();
    const auto& instances = j.at("instances");
    if (!instances.is_array() || instances.size() != config.instance_count()) {
        throw FormatMismatch("snapshot instance count does not match configuration");
    }
    for (const auto& ij : instances) {
        Instance<S> inst;
        inst.field = field_spec_from_json(ij.at("field"));
        if (inst.field.kind != config.seed.field.kind) {
            throw FormatMismatch("snapshot field kind does not match configuration");
        }
        inst.base_seed = detail::parse_u64(ij.at("base_seed"), "base_seed");
        inst.attempt = ij.at("attempt").get<std::uint32_t>();
        inst.ledger = ledger_from_json<S>(ij.at("ledger"), inst.field);
        state.instances.push_back(std::move(inst));
    }
    for (std::size_t i = 1; i < state.instances.size(); ++i) {
        if (state.instances[i].ledger.last_generation() != state.generations_done()) {
            throw FormatMismatch("snapshot instances stopped at different generations");
        }
    }
    return state;
}

template <class S>
void save_snapshot(const std::filesystem::path& path, const RunState<S>& state) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write snapshot to " + path.string());
    out << run_state_to_json(state).dump();
    out << '\n';
    if (!out.good()) throw Error("short write saving snapshot to " + path.string());
}

template <class S>
RunState<S> load_snapshot(const std::filesystem::path& path, const RunConfig& config) {
    config.validate();
    std::ifstream in(path);
    if (!in) throw Error("cannot read snapshot from " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatMismatch(std::string("snapshot is not valid JSON: ") + e.what());
    }
    return run_state_from_json<S>(j, config);
}

} // namespace lineage
