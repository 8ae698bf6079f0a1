#include "coarse/serialize.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coarse {

using nlohmann::json;

std::string profile_to_csv(const DensityProfile& p) {
    std::ostringstream out;
    out << "n,rho_n\n";
    for (std::uint64_t n = 1; n <= p.horizon(); ++n)
        out << n << "," << to_string(p.at(n)) << "\n";
    return out.str();
}

std::string dyadic_to_csv(const DyadicProfile& d) {
    std::ostringstream out;
    out << "k,d_k\n";
    for (unsigned k = 0; k <= d.max_k(); ++k) out << k << "," << to_string(d.at(k)) << "\n";
    return out.str();
}

namespace {

json estimate_json(const DensityEstimate& est) {
    return json{{"liminf", to_string(est.liminf_est)},
                {"limsup", to_string(est.limsup_est)},
                {"tail_start", est.tail_start},
                {"horizon", est.horizon}};
}

}  // namespace

std::string estimate_to_json(const DensityEstimate& est) { return estimate_json(est).dump(2); }

std::string description_report_to_json(const DescriptionReport& report) {
    json j{{"estimate", estimate_json(report.estimate)},
           {"queried_r", to_string(report.queried_r)},
           {"verdict_at_r", report.verdict_at_r}};
    return j.dump(2);
}

std::string defeat_schedule_to_json(const DefeatSchedule& schedule) {
    json targets = json::array();
    for (const auto& t : schedule.targets)
        targets.push_back(json{{"opponent", t.opponent},
                               {"threshold", to_string(t.threshold)},
                               {"length", t.length}});
    json segments = json::array();
    for (const auto& s : schedule.segments)
        segments.push_back(json{{"start", s.start}, {"end", s.end}, {"opponent", s.opponent}});
    json uncovered = json::array();
    for (const auto& [e, d] : schedule.uncovered)
        uncovered.push_back(json{{"opponent", e}, {"threshold_denominator", d}});
    return json{{"targets", targets}, {"segments", segments}, {"uncovered", uncovered}}.dump(2);
}

std::string trace_to_jsonl(const std::vector<TraceEvent>& trace) {
    std::ostringstream out;
    for (const auto& ev : trace) {
        json j{{"stage", ev.stage}, {"action", ev.action}};
        if (ev.e >= 0) j["e"] = ev.e;
        if (ev.i >= 0) j["i"] = ev.i;
        if (!ev.data.empty()) j["data"] = ev.data;
        out << j.dump() << "\n";
    }
    return out.str();
}

std::string generator_to_json(const Generator& g) {
    json j;
    switch (g.kind()) {
        case GeneratorKind::EventuallyPeriodic:
            j = json{{"kind", "periodic"},
                     {"preamble", g.preamble().to_string()},
                     {"period", g.period().to_string()}};
            break;
        case GeneratorKind::SeededRandom:
            j = json{{"kind", "seeded-random"},
                     {"seed", g.seed()},
                     {"bias", std::to_string(g.bias_num()) + "/" + std::to_string(g.bias_den())}};
            break;
        case GeneratorKind::TableBacked:
            j = json{{"kind", "table"}, {"bits", g.table().to_string()}};
            break;
        case GeneratorKind::Formula:
            j = json{{"kind", "formula"}, {"name", g.name()}};
            break;
    }
    return j.dump(2);
}

void write_bits(const std::string& path, const BitPrefix& bits) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_bits: cannot open " + path);
    std::uint8_t byte = 0;
    for (std::uint64_t i = 0; i < bits.size(); ++i) {
        byte |= static_cast<std::uint8_t>(bits.bit(i) << (i % 8));
        if (i % 8 == 7) {
            out.put(static_cast<char>(byte));
            byte = 0;
        }
    }
    if (bits.size() % 8 != 0) out.put(static_cast<char>(byte));
}

BitPrefix read_bits(const std::string& path, std::uint64_t bit_length) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_bits: cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::uint64_t max_bits = 8 * bytes.size();
    if (bit_length == 0) bit_length = max_bits;
    if (bit_length > max_bits) throw std::invalid_argument("read_bits: file shorter than length");
    BitPrefix out = BitPrefix::zeros(bit_length);
    for (std::uint64_t i = 0; i < bit_length; ++i)
        out.set(i, (static_cast<std::uint8_t>(bytes[i / 8]) >> (i % 8)) & 1);
    return out;
}

namespace {

json parse_json(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw std::invalid_argument(std::string(what) + ": malformed JSON");
    return j;
}

Rat rat_field(const json& j, const char* key, Rat fallback) {
    if (!j.contains(key)) return fallback;
    return parse_rat(j.at(key).get<std::string>());
}

Generator generator_from(const json& j);

PartialGenerator partial_from(const json& j) {
    if (j.value("kind", "") != "partial") return PartialGenerator::total(generator_from(j));
    Generator values = generator_from(j.at("values"));
    const json& c = j.at("converge");
    const std::string kind = c.at("kind").get<std::string>();
    if (kind == "never") return PartialGenerator::never();
    if (kind == "const") {
        const std::uint64_t stage = c.at("stage").get<std::uint64_t>();
        return PartialGenerator::with_stages(
            std::move(values),
            [stage](std::uint64_t) { return std::optional<std::uint64_t>{stage}; });
    }
    if (kind == "modular") {
        const std::uint64_t divisor = c.at("divisor").get<std::uint64_t>();
        const std::uint64_t stage = c.value("stage", std::uint64_t{0});
        if (divisor == 0) throw std::invalid_argument("partial: zero divisor");
        std::vector<std::uint64_t> residues = c.at("residues").get<std::vector<std::uint64_t>>();
        return PartialGenerator::with_stages(
            std::move(values), [divisor, stage, residues](std::uint64_t i) {
                for (auto r : residues)
                    if (i % divisor == r) return std::optional<std::uint64_t>{stage};
                return std::optional<std::uint64_t>{};
            });
    }
    if (kind == "seeded") {
        const Rat div = rat_field(c, "diverge", Rat(0));
        return PartialGenerator::seeded(c.at("seed").get<std::uint64_t>(),
                                        c.at("max_stage").get<std::uint64_t>(),
                                        static_cast<std::uint64_t>(div.numerator()),
                                        static_cast<std::uint64_t>(div.denominator()));
    }
    throw std::invalid_argument("partial: unknown convergence kind '" + kind + "'");
}

Generator generator_from(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "zeros") return Generator::all_zeros();
    if (kind == "ones") return Generator::all_ones();
    if (kind == "evens") return Generator::evens();
    if (kind == "odds") return Generator::odds();
    if (kind == "rn") return Generator::rn(j.at("n").get<unsigned>());
    if (kind == "periodic")
        return Generator::eventually_periodic(
            BitPrefix::from_string(j.value("preamble", "")),
            BitPrefix::from_string(j.at("period").get<std::string>()));
    if (kind == "seeded-random") {
        const Rat bias = rat_field(j, "bias", Rat(1, 2));
        return Generator::seeded_random(j.at("seed").get<std::uint64_t>(),
                                        static_cast<std::uint64_t>(bias.numerator()),
                                        static_cast<std::uint64_t>(bias.denominator()));
    }
    if (kind == "table") {
        if (j.contains("bits"))
            return Generator::table_backed(BitPrefix::from_string(j.at("bits").get<std::string>()));
        return Generator::table_backed(
            read_bits(j.at("path").get<std::string>(), j.value("length", std::uint64_t{0})));
    }
    if (kind == "complement") return Generator::complement_of(generator_from(j.at("of")));
    throw std::invalid_argument("generator: unknown kind '" + kind + "'");
}

}  // namespace

Generator parse_generator(const std::string& json_text) {
    return generator_from(parse_json(json_text, "generator"));
}

PartialGenerator parse_partial_generator(const std::string& json_text) {
    return partial_from(parse_json(json_text, "partial generator"));
}

GeneratorLibrary parse_library(const std::string& json_text) {
    const json j = parse_json(json_text, "library");
    GeneratorLibrary lib;
    for (const auto& entry : j.at("entries")) {
        if (entry.value("kind", "") == "partial")
            lib.add(partial_from(entry));
        else
            lib.add(generator_from(entry));
    }
    return lib;
}

WitnessFamily parse_family(const std::string& json_text) {
    const json j = parse_json(json_text, "family");
    WitnessFamily family;
    for (const auto& entry : j.at("members")) family.members.push_back(generator_from(entry));
    return family;
}

IncreasingMap parse_increasing_map(const std::string& json_text) {
    const json j = parse_json(json_text, "increasing map");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "affine")
        return IncreasingMap::affine(j.at("a").get<std::uint64_t>(),
                                     j.value("b", std::uint64_t{0}));
    if (kind == "table")
        return IncreasingMap::table(j.at("values").get<std::vector<std::uint64_t>>());
    throw std::invalid_argument("increasing map: unknown kind '" + kind + "'");
}

Enumeration parse_enumeration(const std::string& json_text) {
    const json j = parse_json(json_text, "enumeration");
    std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>> adds;
    for (const auto& row : j.at("added"))
        adds.push_back({row.at(0).get<std::uint64_t>(), row.at(1).get<std::vector<std::uint64_t>>()});
    return Enumeration::from_stage_adds(j.at("horizon").get<std::uint64_t>(), adds);
}

JumpProbe parse_jump_probe(const std::string& json_text) {
    const json j = parse_json(json_text, "jump probe");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "never") return JumpProbe::never();
    if (kind == "at-stage")
        return JumpProbe::at_stage(j.at("stage").get<std::uint64_t>(),
                                   j.at("use").get<std::uint64_t>());
    if (kind == "seeded") {
        const Rat div = rat_field(j, "diverge", Rat(0));
        return JumpProbe::seeded(j.at("seed").get<std::uint64_t>(),
                                 j.at("max_stage").get<std::uint64_t>(),
                                 j.at("max_use").get<std::uint64_t>(),
                                 static_cast<std::uint64_t>(div.numerator()),
                                 static_cast<std::uint64_t>(div.denominator()));
    }
    throw std::invalid_argument("jump probe: unknown kind '" + kind + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << content;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace coarse
