#pragma once

#include "coarse/adversary.hpp"
#include "coarse/bitseq.hpp"
#include "coarse/codings.hpp"
#include "coarse/decoders.hpp"
#include "coarse/density.hpp"
#include "coarse/stagecraft.hpp"
#include "coarse/trust.hpp"

#include <cstdint>
#include <string>

namespace coarse {

// CSV emission. Profiles carry a header row; all rationals print as "p/q".
std::string profile_to_csv(const DensityProfile& p);
std::string dyadic_to_csv(const DyadicProfile& d);

// JSON emission (two-space indent, keys sorted; byte-stable for a given
// value).
std::string estimate_to_json(const DensityEstimate& est);
std::string description_report_to_json(const DescriptionReport& report);
std::string defeat_schedule_to_json(const DefeatSchedule& schedule);
std::string trace_to_jsonl(const std::vector<TraceEvent>& trace);
std::string generator_to_json(const Generator& g);

// Raw little-endian bit files: bit i lives at byte i/8, bit i%8; the tail
// of the last byte is zero padding. Lengths are tracked by the caller.
void write_bits(const std::string& path, const BitPrefix& bits);
BitPrefix read_bits(const std::string& path, std::uint64_t bit_length = 0);

// Descriptor parsing. Generator descriptors:
//   {"kind":"zeros"} | {"kind":"ones"} | {"kind":"evens"} | {"kind":"odds"}
//   {"kind":"rn","n":2}
//   {"kind":"periodic","preamble":"1","period":"0"}
//   {"kind":"seeded-random","seed":42,"bias":"1/2"}
//   {"kind":"table","bits":"0101"} | {"kind":"table","path":"f.bits","length":64}
//   {"kind":"complement","of":{...}}
// Partial descriptors wrap a generator with a convergence rule:
//   {"kind":"partial","values":{...},"converge":
//       {"kind":"const","stage":3} | {"kind":"never"}
//     | {"kind":"modular","divisor":2,"residues":[0],"stage":3}
//     | {"kind":"seeded","seed":7,"max_stage":64,"diverge":"1/4"}}
Generator parse_generator(const std::string& json_text);
PartialGenerator parse_partial_generator(const std::string& json_text);
/// {"entries":[ <generator or partial descriptor>, ... ]}
GeneratorLibrary parse_library(const std::string& json_text);
/// {"members":[ <generator descriptor>, ... ]}
WitnessFamily parse_family(const std::string& json_text);
/// {"kind":"affine","a":2,"b":0} | {"kind":"table","values":[0,2,5]}
IncreasingMap parse_increasing_map(const std::string& json_text);
/// {"horizon":100,"added":[[3,[0,5]],[7,[1]]]}
Enumeration parse_enumeration(const std::string& json_text);
/// {"kind":"never"} | {"kind":"at-stage","stage":3,"use":2}
/// | {"kind":"seeded","seed":9,"max_stage":50,"max_use":20}
JumpProbe parse_jump_probe(const std::string& json_text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// FNV-1a over the canonical text; reports embed it as the config hash.
std::uint64_t fnv1a(const std::string& text);

}  // namespace coarse
