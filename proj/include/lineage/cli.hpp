#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lineage/report.hpp"

namespace lineage {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitSeedFailure = 2,
    kExitVerificationMismatch = 3,
    kExitCogenyViolation = 4,
    kExitFormatMismatch = 5,
    kExitDigestMismatch = 6,
    kExitDegenerate = 7,
    kExitIo = 8,
    kExitInternal = 9,
};

struct CliOptions {
    RunConfig config;
    std::string out_path;
    std::string snapshot_dir;
    std::string resume_path;
    std::string emit = "new";
    std::uint32_t verify_trials = 3;
    std::size_t certificate_limit = 64;
};

namespace detail {

template <class S>
int run_with(const CliOptions& opts, std::ostream& out) {
    const RunConfig& cfg = opts.config;
    const auto t_start = std::chrono::steady_clock::now();
    auto t_last = t_start;
    Timings timings;

    RunState<S> state;
    if (!opts.resume_path.empty()) {
        state = load_snapshot<S>(opts.resume_path, cfg);
        out << "resumed " << state.instances.size() << " instance(s) at generation "
            << state.generations_done() << "\n";
        timings.per_generation_ms.assign(state.generations_done() + 1, 0.0);
    } else {
        state = start_run<S>(cfg);
        out << "seeded " << cfg.seed.adams << " points (" << seed_mode_name(cfg.seed.mode) << ", "
            << field_kind_name(cfg.seed.field.kind) << " x" << state.instances.size() << ")\n";
        if (cfg.seed.field.kind == FieldKind::PrimeField) {
            for (const auto& inst : state.instances) out << "  modulus " << inst.field.prime << "\n";
        }
        timings.per_generation_ms.assign(1, 0.0);
    }

    const GenerationCallback<S> on_generation = [&](const RunState<S>& st, std::uint32_t g) {
        const auto now = std::chrono::steady_clock::now();
        timings.per_generation_ms.push_back(
            std::chrono::duration<double, std::milli>(now - t_last).count());
        t_last = now;
        const auto& info = st.primary().generations()[g];
        out << "generation " << g << " [" << gender_name(info.gender) << "]: " << info.new_ids.size()
            << " new\n";
        if (!opts.snapshot_dir.empty()) {
            const std::filesystem::path dir(opts.snapshot_dir);
            std::filesystem::create_directories(dir);
            save_snapshot(dir / ("snapshot-gen-" + std::to_string(g) + ".json"), st);
        }
    };

    advance_to(state, cfg.max_generation, on_generation);

    MiracleSummary miracles = analyze_miracles(state, opts.verify_trials);
    timings.total_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count();

    const auto counts = new_counts(state.primary());
    const auto cumulative = cumulative_by_gender(counts);
    out << "objects: " << state.primary().size() << " across " << counts.size() << " generations\n";
    out << "coincidence classes: " << miracles.classes.size() << " (" << miracles.nontrivial_count
        << " beyond rediscovery)\n";
    if (state.instances.size() > 1 || opts.verify_trials > 0) {
        out << "verified on " << state.instances.size() << " run instance(s) + " << opts.verify_trials
            << " fresh instance(s)\n";
    }
    out << "sequence (" << opts.emit
        << "): " << emit_sequence(opts.emit == "cumulative" ? cumulative : counts) << "\n";

    if (!opts.out_path.empty()) {
        ReportOptions ropts;
        ropts.fresh_trials = opts.verify_trials;
        ropts.certificate_limit = opts.certificate_limit;
        ropts.class_limit = std::max<std::size_t>(ropts.class_limit, opts.certificate_limit);
        const auto report = build_report(state, miracles, timings, ropts);
        std::ofstream f(opts.out_path);
        if (!f) throw Error("cannot write report to " + opts.out_path);
        f << report.dump(2) << '\n';
        if (!f.good()) throw Error("short write saving report to " + opts.out_path);
        out << "report written to " << opts.out_path << "\n";
    }
    return kExitOk;
}

} // namespace detail

/// Parses arguments (excluding the program name) and runs.  All human
/// output goes to `out`; errors are reported on `err`.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CliOptions opts;
    RunConfig& cfg = opts.config;
    std::string policy = "all-pairs";
    std::string seed_mode = "generic";
    std::string field = "prime";

    CLI::App app{"iterated join/meet genealogy over an exact field"};
    app.add_option("--adams", cfg.seed.adams, "number of seed points")
        ->default_val(4)
        ->check(CLI::Range(2, 64));
    app.add_option("--generations", cfg.max_generation, "generations to compute")->default_val(5);
    app.add_option("--policy", policy, "mating policy")
        ->default_val("all-pairs")
        ->check(CLI::IsMember({"all-pairs", "same-generation"}));
    app.add_option("--seed-mode", seed_mode, "seed point position")
        ->default_val("generic")
        ->check(CLI::IsMember({"generic", "conic"}));
    app.add_option("--field", field, "arithmetic backend")
        ->default_val("prime")
        ->check(CLI::IsMember({"rational", "prime"}));
    auto* prime_opt =
        app.add_option("--prime", cfg.seed.field.prime, "fixed modulus (default: sampled per instance)");
    app.add_option("--rng-seed", cfg.seed.field.rng_seed, "base seed for all randomness")
        ->default_val(1);
    app.add_option("--verify-runs", cfg.verify_runs, "independent instances in prime mode")
        ->default_val(2);
    app.add_option("--sample-bound", cfg.seed.field.sample_bound,
                   "coordinate magnitude bound in rational mode")
        ->default_val(1'000'000);
    app.add_option("--resample-limit", cfg.resample_limit, "redraw budget for bad samples")
        ->default_val(32);
    app.add_option("--workers", cfg.workers, "threads per generation")->default_val(1);
    app.add_option("--verify-trials", opts.verify_trials,
                   "freshly seeded instances for coincidence verification")
        ->default_val(3);
    app.add_option("--certificates", opts.certificate_limit,
                   "coincidence classes rendered in full in the report")
        ->default_val(64);
    app.add_option("--out", opts.out_path, "write a JSON report here");
    app.add_option("--snapshot", opts.snapshot_dir, "write per-generation snapshots here");
    app.add_option("--resume", opts.resume_path, "continue from a snapshot file");
    app.add_option("--emit-sequence", opts.emit, "which sequence the final line prints")
        ->default_val("new")
        ->check(CLI::IsMember({"new", "cumulative"}));

    std::vector<const char*> argv;
    argv.push_back("lineage");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        cfg.policy = policy == "all-pairs" ? MatingPolicy::AllPairs : MatingPolicy::SameGenerationOnly;
        cfg.seed.mode = seed_mode == "generic" ? SeedMode::GenericPlane : SeedMode::GenericConic;
        cfg.seed.field.kind = field == "rational" ? FieldKind::Rationals : FieldKind::PrimeField;
        if (prime_opt->count() > 0 && cfg.seed.field.kind != FieldKind::PrimeField) {
            throw ConfigError("--prime requires --field prime");
        }
        cfg.validate();
        return cfg.seed.field.kind == FieldKind::PrimeField ? detail::run_with<Fp>(opts, out)
                                                            : detail::run_with<Rational>(opts, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SeedFailure& e) {
        err << "error: " << e.what() << "\n";
        return kExitSeedFailure;
    } catch (const VerificationMismatch& e) {
        err << "error: " << e.what() << "\n";
        return kExitVerificationMismatch;
    } catch (const CogenyViolation& e) {
        err << "error: " << e.what() << "\n";
        return kExitCogenyViolation;
    } catch (const FormatMismatch& e) {
        err << "error: " << e.what() << "\n";
        return kExitFormatMismatch;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitFormatMismatch;
    } catch (const ConfigDigestMismatch& e) {
        err << "error: " << e.what() << "\n";
        return kExitDigestMismatch;
    } catch (const DegenerateConfiguration& e) {
        err << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

} // namespace lineage
