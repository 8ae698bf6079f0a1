// Batch experiment front-end: every subcommand reads a config (file plus
// flag overrides), runs one deterministic pipeline from the core library,
// and emits machine-readable reports that embed the config hash.
//
// Exit codes: 0 success, 2 invalid config, 3 precondition violation,
// 4 cap-limited result (partial outputs already written).

#include <CLI11.hpp>
#include <json.hpp>

#include "coarse/adversary.hpp"
#include "coarse/bitseq.hpp"
#include "coarse/codings.hpp"
#include "coarse/decoders.hpp"
#include "coarse/density.hpp"
#include "coarse/rng.hpp"
#include "coarse/serialize.hpp"
#include "coarse/stagecraft.hpp"
#include "coarse/trust.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace coarse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitCapLimited = 4;

// Descriptor and config parsing failures exit with kExitConfig; anything
// the core rejects later is a precondition violation.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename F>
auto as_config(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const std::exception& e) {
        throw config_error(e.what());
    }
}

struct CommonOpts {
    std::string out_dir;
    std::string config_path;
};

// "@file" means "read the file"; anything else is inline JSON.
std::string resolve_descriptor(const std::string& value) {
    if (!value.empty() && value[0] == '@') return read_text_file(value.substr(1));
    return value;
}

std::string default_out_dir() {
    if (const char* env = std::getenv("COARSE_OUT")) return env;
    return ".";
}

fs::path ensure_out_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

std::string hash_hex(const json& config) {
    std::ostringstream out;
    out << std::hex << fnv1a(config.dump());
    return out.str();
}

// Flag value if the user passed it, else the config-file value, else the
// built-in default already stored in `value`.
template <typename T>
void merge(const CLI::Option* opt, const json& config, const char* key, T& value) {
    if (opt->count() > 0) return;
    if (config.contains(key)) value = config.at(key).get<T>();
}

// Descriptor-valued keys may be inline JSON objects in the config file or
// strings ("@file" or inline JSON text) anywhere.
void merge_descriptor(const CLI::Option* opt, const json& config, const char* key,
                      std::string& value) {
    if (opt->count() > 0) return;
    if (!config.contains(key)) return;
    const json& v = config.at(key);
    value = v.is_string() ? v.get<std::string>() : v.dump();
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    const json j = json::parse(read_text_file(path), nullptr, false);
    if (j.is_discarded()) throw std::invalid_argument("config file is not valid JSON");
    return j;
}

void emit(const fs::path& dir, const std::string& name, const std::string& content) {
    write_text_file((dir / name).string(), content);
}

std::vector<std::uint64_t> parse_denoms(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
    return out;
}

json estimate_json_obj(const DensityEstimate& est) {
    return json::parse(estimate_to_json(est));
}

int run_density(const CommonOpts& common, std::string gen_text, std::uint64_t horizon,
                std::uint64_t tail_start, std::uint64_t dyadic_k, const json& config) {
    const Generator g = as_config([&] { return parse_generator(resolve_descriptor(gen_text)); });
    if (tail_start == 0) tail_start = std::max<std::uint64_t>(1, horizon / 2);
    const fs::path dir = ensure_out_dir(common.out_dir);

    const BitPrefix prefix = evaluate_prefix(g, horizon);
    const DensityProfile profile = density_profile(prefix);
    emit(dir, "profile.csv", profile_to_csv(profile));

    unsigned k_max = 0;
    while (prefix.size() >= dyadic_block_hi(k_max + 1)) ++k_max;
    if (dyadic_k > 0) k_max = std::min<unsigned>(k_max, static_cast<unsigned>(dyadic_k));
    emit(dir, "dyadic.csv", dyadic_to_csv(dyadic_densities(prefix, k_max)));

    const DensityEstimate est = estimate_liminf_limsup(profile, tail_start);
    json report = estimate_json_obj(est);
    if (const auto exact = exact_density(g)) report["exact_density"] = to_string(*exact);
    report["config_hash"] = hash_hex(config);
    report["config"] = config;
    emit(dir, "estimate.json", report.dump(2));
    return kExitOk;
}

int run_code_decode(const CommonOpts& common, std::string set_text, unsigned n_max,
                    std::uint64_t horizon, const std::string& corrupt, std::uint64_t seed,
                    const json& config) {
    const Generator a = as_config([&] { return parse_generator(resolve_descriptor(set_text)); });
    const std::uint64_t needed = factorial(n_max + 1);
    if (horizon < needed)
        throw std::invalid_argument("horizon " + std::to_string(horizon) +
                                    " is below the required length " + std::to_string(needed) +
                                    " = (n_max+1)!");
    const fs::path dir = ensure_out_dir(common.out_dir);

    BitPrefix code = interval_code(a, horizon);
    const Rat corrupt_density = corrupt.empty() ? Rat(0) : parse_rat(corrupt);
    if (corrupt_density < Rat(0) || corrupt_density >= Rat(1))
        throw std::invalid_argument("corruption density must lie in [0, 1)");
    Rng rng(seed);
    for (unsigned n = 1; n <= n_max; ++n) {
        const std::uint64_t lo = factorial(n);
        const std::uint64_t hi = std::min<std::uint64_t>(factorial(n + 1), horizon);
        const auto block = static_cast<std::int64_t>(hi - lo);
        const auto flips =
            static_cast<std::uint64_t>((corrupt_density * block).numerator() /
                                       (corrupt_density * block).denominator());
        std::set<std::uint64_t> seen;
        while (seen.size() < flips) {
            const std::uint64_t pos = lo + rng.below(hi - lo);
            if (seen.insert(pos).second) code.flip(pos);
        }
    }
    write_bits((dir / "code.bits").string(), code);

    const BitPrefix decoded = decode_prefix(code, n_max);
    write_bits((dir / "decoded.bits").string(), decoded);

    std::ostringstream blocks;
    blocks << "n,expected,decoded,correct\n";
    std::uint64_t wrong = 0;
    for (unsigned n = 1; n <= n_max; ++n) {
        const int expected = a.bit(n);
        const int got = decoded.bit(n);
        wrong += expected != got;
        blocks << n << "," << expected << "," << got << "," << (expected == got ? 1 : 0) << "\n";
    }
    emit(dir, "blocks.csv", blocks.str());

    json report{{"n_max", n_max},
                {"horizon", horizon},
                {"incorrect_blocks", wrong},
                {"config_hash", hash_hex(config)},
                {"config", config}};
    emit(dir, "report.json", report.dump(2));
    return kExitOk;
}

int run_trust_merge(const CommonOpts& common, std::string family_text, unsigned k_max,
                    std::string truth_text, const json& config) {
    const WitnessFamily family = as_config([&] { return parse_family(resolve_descriptor(family_text)); });
    if (family.size() == 0) throw std::invalid_argument("family has no members");
    const fs::path dir = ensure_out_dir(common.out_dir);

    const MergeResult res = miller_merge(family, k_max);
    write_bits((dir / "merged.bits").string(), res.merged);

    json report{{"k_max", k_max},
                {"chosen", res.chosen},
                {"config_hash", hash_hex(config)},
                {"config", config}};
    if (!truth_text.empty()) {
        const Generator truth = parse_generator(resolve_descriptor(truth_text));
        const BitPrefix a = evaluate_prefix(truth, res.merged.size());
        json diffs = json::array();
        for (unsigned k = 0; k <= k_max; ++k)
            diffs.push_back(to_string(dyadic_diff_density(a, res.merged, k)));
        report["d_k_truth_diff"] = diffs;
    }
    emit(dir, "report.json", report.dump(2));
    return kExitOk;
}

int run_adversary(const CommonOpts& common, std::string opponents_text,
                  const std::string& thresholds, std::uint64_t horizon, const json& config) {
    const GeneratorLibrary lib = as_config([&] { return parse_library(resolve_descriptor(opponents_text)); });
    const std::vector<std::uint64_t> denoms = as_config([&] { return parse_denoms(thresholds); });
    const fs::path dir = ensure_out_dir(common.out_dir);

    const DefeatResult res = weak_generic_defeat(lib, denoms, horizon);
    write_bits((dir / "z.bits").string(), res.z);
    emit(dir, "schedule.json", defeat_schedule_to_json(res.schedule));

    const bool ok = verify_defeat_schedule(res.z, lib, res.schedule);
    json estimates = json::array();
    for (const auto& cert : res.schedule.targets) {
        const std::uint64_t tail = std::max<std::uint64_t>(1, cert.length / 2);
        const auto ests = gamma_hat_estimates(res.z.first(cert.length), lib, tail);
        estimates.push_back(json{{"opponent", cert.opponent},
                                 {"threshold", to_string(cert.threshold)},
                                 {"length", cert.length},
                                 {"agreement_liminf",
                                  to_string(ests[cert.opponent].liminf_est)}});
    }
    json report{{"reverified", ok},
                {"certificates", estimates},
                {"uncovered", res.schedule.uncovered.size()},
                {"config_hash", hash_hex(config)},
                {"config", config}};
    emit(dir, "verify.json", report.dump(2));
    return res.schedule.uncovered.empty() ? kExitOk : kExitCapLimited;
}

int run_stage_sim(const CommonOpts& common, const std::string& kind, std::string enum_text,
                  std::string lib_text, std::string probes_text, const std::string& r_text,
                  std::uint64_t stages, std::size_t e_max, std::size_t i_max,
                  std::uint64_t scan_cap, std::uint64_t prefix_len, const json& config) {
    const Enumeration permitter =
        as_config([&] { return parse_enumeration(resolve_descriptor(enum_text)); });
    const GeneratorLibrary lib = as_config([&] { return parse_library(resolve_descriptor(lib_text)); });
    const fs::path dir = ensure_out_dir(common.out_dir);

    StageState state;
    json checks;
    if (kind == "permit") {
        PermitOptions opts;
        opts.i_max = i_max;
        opts.scan_cap = scan_cap;
        state = run_permitting_construction(permitter, lib, parse_rat(r_text), stages, opts);
        const CheckReport permitting = verify_permitting(state, permitter);
        const CheckReport intervals = verify_interval_conditions(state);
        const CheckReport disagreement = verify_success_disagreement(state, lib);
        checks = json{{"permitting", permitting.ok},
                      {"interval_conditions", intervals.ok},
                      {"success_disagreement", disagreement.ok}};
    } else if (kind == "nonlow") {
        std::vector<JumpProbe> probes;
        const json plist = as_config([&] { return json::parse(resolve_descriptor(probes_text)); });
        for (const auto& p : plist)
            probes.push_back(as_config([&] { return parse_jump_probe(p.dump()); }));
        NonlowOptions opts;
        opts.e_max = e_max;
        opts.i_max = i_max;
        opts.element_cap = scan_cap;
        state = run_nonlow_construction(permitter, probes, lib, stages, opts);
        const CheckReport permitting = verify_permitting(state, permitter);
        const CheckReport bounds = verify_nonlow_success_bounds(state, lib);
        const CheckReport g_check = verify_g_semantics(state);
        json half = json::array();
        for (std::size_t e = 0; e < e_max; ++e)
            for (std::size_t i = 0; i < i_max; ++i) {
                const HalfDensityReport rep = verify_half_density(state, e, i);
                half.push_back(json{{"e", e},
                                    {"i", i},
                                    {"pairs", rep.pairs_checked},
                                    {"exactly_one", rep.exactly_one},
                                    {"exceptions", rep.exception_pairs}});
            }
        checks = json{{"permitting", permitting.ok},
                      {"success_bounds", bounds.ok},
                      {"g_semantics", g_check.ok},
                      {"half_density", half}};
    } else {
        throw std::invalid_argument("kind must be 'permit' or 'nonlow'");
    }

    emit(dir, "trace.jsonl", trace_to_jsonl(state.trace));
    if (prefix_len == 0) prefix_len = stages + 1;
    write_bits((dir / "a.bits").string(), state.a.final_prefix(prefix_len));

    json successes = json::array();
    for (const auto& rec : state.intervals)
        if (rec.status == IntervalStatus::Successful)
            successes.push_back(json{{"e", rec.e},
                                     {"i", rec.i},
                                     {"min", rec.min()},
                                     {"max", rec.max()},
                                     {"declared_at", *rec.declared_at}});
    json report{{"kind", kind},
                {"stages", stages},
                {"successes", successes},
                {"checks", checks},
                {"config_hash", hash_hex(config)},
                {"config", config}};
    emit(dir, "verify.json", report.dump(2));
    return kExitOk;
}

int run_spectrum(const CommonOpts& common, std::string set_text, std::string lib_text,
                 const std::string& s_text, std::uint64_t horizon, std::uint64_t tail_start,
                 const json& config) {
    const Generator a_gen = as_config([&] { return parse_generator(resolve_descriptor(set_text)); });
    const GeneratorLibrary lib = as_config([&] { return parse_library(resolve_descriptor(lib_text)); });
    const Rat s = as_config([&] { return parse_rat(s_text); });
    if (s <= Rat(0) || s > Rat(1)) throw std::invalid_argument("s must lie in (0, 1]");
    if (tail_start == 0) tail_start = std::max<std::uint64_t>(2, horizon / 2);
    const fs::path dir = ensure_out_dir(common.out_dir);

    // R = {k : k mod q < p} has density p/q; h enumerates it in order.
    const auto p = static_cast<std::uint64_t>(s.numerator());
    const auto q = static_cast<std::uint64_t>(s.denominator());
    BitPrefix period = BitPrefix::zeros(q);
    for (std::uint64_t k = 0; k < p; ++k) period.set(k, 1);
    const Generator r_gen = Generator::eventually_periodic(BitPrefix(), period);
    std::vector<std::uint64_t> values;
    for (std::uint64_t k = 0; values.empty() || values.back() < horizon; ++k)
        if (k % q < p) values.push_back(k);
    const IncreasingMap h = IncreasingMap::table(values);

    const std::uint64_t a_len = std::max<std::uint64_t>(h.g(horizon), 2);
    const std::uint64_t a_tail = std::max<std::uint64_t>(1, h.g(tail_start));
    const BitPrefix a = evaluate_prefix(a_gen, a_len);
    const BitPrefix b = spectrum_transform(a, h, r_gen, horizon);
    write_bits((dir / "b.bits").string(), b);

    GeneratorLibrary lib_b;
    for (std::size_t e = 0; e < lib.size(); ++e)
        lib_b.add(Generator::table_backed(
            spectrum_transform(evaluate_prefix(lib.total(e), a_len), h, r_gen, horizon)));

    const GammaHatResult gamma_a = gamma_hat(a, lib, a_tail);
    const GammaHatResult gamma_b = gamma_hat(b, lib_b, tail_start);
    const Rat expected = s * gamma_a.value + (Rat(1) - s);

    json report{{"s", to_string(s)},
                {"gamma_hat_a", to_string(gamma_a.value)},
                {"gamma_hat_a_witness", gamma_a.witness},
                {"gamma_hat_b", to_string(gamma_b.value)},
                {"gamma_hat_b_witness", gamma_b.witness},
                {"s_gamma_a_plus_1_minus_s", to_string(expected)},
                {"difference", to_string(gamma_b.value - expected)},
                {"horizon", horizon},
                {"tail_start", tail_start},
                {"a_horizon", a_len},
                {"a_tail_start", a_tail},
                {"config_hash", hash_hex(config)},
                {"config", config}};
    emit(dir, "report.json", report.dump(2));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"asymptotic-density and coarse-computability experiments"};
    app.require_subcommand(1);

    CommonOpts common;
    common.out_dir = default_out_dir();
    app.add_option("--out-dir", common.out_dir, "output directory (env COARSE_OUT)")
        ->envname("COARSE_OUT");
    app.add_option("--config", common.config_path, "JSON config file; flags override");

    // density
    auto* density_cmd = app.add_subcommand("density", "density curves of one generator");
    std::string gen_text = R"({"kind":"zeros"})";
    std::uint64_t horizon = 1 << 16, tail_start = 0, dyadic_k = 0;
    auto* o_gen = density_cmd->add_option("--gen", gen_text, "generator descriptor or @file");
    auto* o_hor = density_cmd->add_option("--horizon", horizon);
    auto* o_tail = density_cmd->add_option("--tail-start", tail_start);
    auto* o_dk = density_cmd->add_option("--dyadic-k", dyadic_k);

    // code-decode
    auto* code_cmd = app.add_subcommand("code-decode", "factorial coding and majority decoding");
    std::string set_text = R"({"kind":"seeded-random","seed":1})";
    unsigned n_max = 5;
    std::uint64_t cd_horizon = 720, cd_seed = 1;
    std::string corrupt;
    auto* o_set = code_cmd->add_option("--set", set_text, "set descriptor or @file");
    auto* o_nmax = code_cmd->add_option("--nmax", n_max);
    auto* o_chor = code_cmd->add_option("--horizon", cd_horizon);
    auto* o_corr = code_cmd->add_option("--corrupt", corrupt, "per-block flip density, e.g. 1/5");
    auto* o_cseed = code_cmd->add_option("--seed", cd_seed);

    // trust-merge
    auto* trust_cmd = app.add_subcommand("trust-merge", "merge a witness family blockwise");
    std::string family_text, truth_text;
    unsigned k_max = 10;
    auto* o_family =
        trust_cmd->add_option("--family", family_text, "family descriptor or @file")->required();
    auto* o_k = trust_cmd->add_option("--k", k_max, "largest dyadic block index");
    auto* o_truth = trust_cmd->add_option("--truth", truth_text, "reference set descriptor");

    // adversary
    auto* adv_cmd = app.add_subcommand("adversary", "build a defeat prefix against a library");
    std::string opponents_text, thresholds = "2,4";
    std::uint64_t adv_horizon = 1 << 14;
    auto* o_opp = adv_cmd->add_option("--opponents", opponents_text, "library descriptor or @file")
                      ->required();
    auto* o_thr = adv_cmd->add_option("--thresholds", thresholds, "denominators, e.g. 2,4");
    auto* o_ahor = adv_cmd->add_option("--horizon", adv_horizon);

    // stage-sim
    auto* stage_cmd = app.add_subcommand("stage-sim", "replay a permitting construction");
    std::string kind = "permit", enum_text, lib_text, probes_text = "[]", r_text = "1/2";
    std::uint64_t stages = 100, scan_cap = kPrefixCap, prefix_len = 0;
    std::size_t e_max = 2, i_max = 2;
    auto* o_kind = stage_cmd->add_option("--kind", kind, "permit or nonlow");
    auto* o_enum =
        stage_cmd->add_option("--enum", enum_text, "enumeration JSON or @file")->required();
    auto* o_lib = stage_cmd->add_option("--lib", lib_text, "library descriptor or @file")
                      ->required();
    auto* o_probes = stage_cmd->add_option("--probes", probes_text, "probe list (nonlow)");
    auto* o_r = stage_cmd->add_option("--r", r_text, "slice parameter (permit)");
    auto* o_stages = stage_cmd->add_option("--stages", stages);
    auto* o_emax = stage_cmd->add_option("--e-max", e_max);
    auto* o_imax = stage_cmd->add_option("--i-max", i_max);
    auto* o_cap = stage_cmd->add_option("--scan-cap", scan_cap);
    auto* o_plen = stage_cmd->add_option("--prefix-len", prefix_len);

    // spectrum
    auto* spec_cmd = app.add_subcommand("spectrum", "push a set through the density-s transform");
    std::string sp_set = R"({"kind":"seeded-random","seed":1})", sp_lib, s_text = "1/2";
    std::uint64_t sp_horizon = 1 << 16, sp_tail = 0;
    auto* o_sset = spec_cmd->add_option("--set", sp_set, "set descriptor or @file");
    auto* o_slib =
        spec_cmd->add_option("--lib", sp_lib, "library descriptor or @file")->required();
    auto* o_s = spec_cmd->add_option("--s", s_text, "rational density parameter in (0,1]");
    auto* o_shor = spec_cmd->add_option("--horizon", sp_horizon);
    auto* o_stail = spec_cmd->add_option("--tail-start", sp_tail);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        const json file_config = load_config(common.config_path);

        if (density_cmd->parsed()) {
            merge_descriptor(o_gen, file_config, "gen", gen_text);
            merge(o_hor, file_config, "horizon", horizon);
            merge(o_tail, file_config, "tail_start", tail_start);
            merge(o_dk, file_config, "dyadic_k", dyadic_k);
            const json config{{"command", "density"},
                              {"gen", json::parse(resolve_descriptor(gen_text))},
                              {"horizon", horizon},
                              {"tail_start", tail_start},
                              {"dyadic_k", dyadic_k}};
            return run_density(common, gen_text, horizon, tail_start, dyadic_k, config);
        }
        if (code_cmd->parsed()) {
            merge_descriptor(o_set, file_config, "set", set_text);
            merge(o_nmax, file_config, "n_max", n_max);
            merge(o_chor, file_config, "horizon", cd_horizon);
            merge(o_corr, file_config, "corrupt", corrupt);
            merge(o_cseed, file_config, "seed", cd_seed);
            const json config{{"command", "code-decode"},
                              {"set", json::parse(resolve_descriptor(set_text))},
                              {"n_max", n_max},
                              {"horizon", cd_horizon},
                              {"corrupt", corrupt},
                              {"seed", cd_seed}};
            return run_code_decode(common, set_text, n_max, cd_horizon, corrupt, cd_seed, config);
        }
        if (trust_cmd->parsed()) {
            merge_descriptor(o_family, file_config, "family", family_text);
            merge(o_k, file_config, "k", k_max);
            merge_descriptor(o_truth, file_config, "truth", truth_text);
            json config{{"command", "trust-merge"},
                        {"family", json::parse(resolve_descriptor(family_text))},
                        {"k", k_max}};
            if (!truth_text.empty())
                config["truth"] = json::parse(resolve_descriptor(truth_text));
            return run_trust_merge(common, family_text, k_max, truth_text, config);
        }
        if (adv_cmd->parsed()) {
            merge_descriptor(o_opp, file_config, "opponents", opponents_text);
            merge(o_thr, file_config, "thresholds", thresholds);
            merge(o_ahor, file_config, "horizon", adv_horizon);
            const json config{{"command", "adversary"},
                              {"opponents", json::parse(resolve_descriptor(opponents_text))},
                              {"thresholds", thresholds},
                              {"horizon", adv_horizon}};
            return run_adversary(common, opponents_text, thresholds, adv_horizon, config);
        }
        if (stage_cmd->parsed()) {
            merge(o_kind, file_config, "kind", kind);
            merge_descriptor(o_enum, file_config, "enum", enum_text);
            merge_descriptor(o_lib, file_config, "lib", lib_text);
            merge_descriptor(o_probes, file_config, "probes", probes_text);
            merge(o_r, file_config, "r", r_text);
            merge(o_stages, file_config, "stages", stages);
            merge(o_emax, file_config, "e_max", e_max);
            merge(o_imax, file_config, "i_max", i_max);
            merge(o_cap, file_config, "scan_cap", scan_cap);
            merge(o_plen, file_config, "prefix_len", prefix_len);
            const json config{{"command", "stage-sim"},
                              {"kind", kind},
                              {"enum", json::parse(resolve_descriptor(enum_text))},
                              {"lib", json::parse(resolve_descriptor(lib_text))},
                              {"probes", json::parse(resolve_descriptor(probes_text))},
                              {"r", r_text},
                              {"stages", stages},
                              {"e_max", e_max},
                              {"i_max", i_max},
                              {"scan_cap", scan_cap},
                              {"prefix_len", prefix_len}};
            return run_stage_sim(common, kind, enum_text, lib_text, probes_text, r_text, stages,
                                 e_max, i_max, scan_cap, prefix_len, config);
        }
        if (spec_cmd->parsed()) {
            merge_descriptor(o_sset, file_config, "set", sp_set);
            merge_descriptor(o_slib, file_config, "lib", sp_lib);
            merge(o_s, file_config, "s", s_text);
            merge(o_shor, file_config, "horizon", sp_horizon);
            merge(o_stail, file_config, "tail_start", sp_tail);
            const json config{{"command", "spectrum"},
                              {"set", json::parse(resolve_descriptor(sp_set))},
                              {"lib", json::parse(resolve_descriptor(sp_lib))},
                              {"s", s_text},
                              {"horizon", sp_horizon},
                              {"tail_start", sp_tail}};
            return run_spectrum(common, sp_set, sp_lib, s_text, sp_horizon, sp_tail, config);
        }
    } catch (const cap_limited& e) {
        std::cerr << "cap-limited: " << e.what() << "\n";
        return kExitCapLimited;
    } catch (const config_error& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "precondition violation: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const json::exception& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
