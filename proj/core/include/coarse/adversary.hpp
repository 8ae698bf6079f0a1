#pragma once

#include "coarse/bitseq.hpp"
#include "coarse/codings.hpp"
#include "coarse/rational.hpp"

#include <cstdint>
#include <vector>

namespace coarse {

/// One certified defeat: at prefix length `length`, the agreement density
/// of Z with opponent `opponent` is strictly below `threshold`.
struct DefeatCertificate {
    std::size_t opponent = 0;
    Rat threshold;
    std::uint64_t length = 0;  // witness length
};

/// Consecutive run of positions copied from the complement of an opponent.
struct DefeatSegment {
    std::uint64_t start = 0;
    std::uint64_t end = 0;  // exclusive
    std::size_t opponent = 0;
};

struct DefeatSchedule {
    std::vector<DefeatCertificate> targets;
    std::vector<DefeatSegment> segments;  // consecutive, covering [0, N)
    /// (opponent, threshold denominator) pairs never certified before N ran out.
    std::vector<std::pair<std::size_t, std::uint64_t>> uncovered;
};

struct DefeatResult {
    BitPrefix z;
    DefeatSchedule schedule;
};

/// Build Z against a finite opponent library: round-robin over
/// (opponent, threshold 1/n) pairs ordered by increasing n + e, extending Z
/// by the bitwise complement of the current opponent until the whole-prefix
/// agreement density drops below 1/n, then certifying that length. Rounds
/// repeat at growing lengths until no further certificate fits below N.
/// Already-emitted bits are never modified.
DefeatResult weak_generic_defeat(const GeneratorLibrary& opponents,
                                 const std::vector<std::uint64_t>& threshold_denoms,
                                 std::uint64_t n);

/// Recompute every certificate and segment of a schedule against Z and the
/// library; returns false if any recorded value fails to reproduce.
bool verify_defeat_schedule(const BitPrefix& z, const GeneratorLibrary& opponents,
                            const DefeatSchedule& schedule);

/// A = A_1 ∪ Z, pointwise. The caller supplies a1 from a rule of known
/// exact density; the union can only raise every prefix density.
BitPrefix extremal_compose(const BitPrefix& a1, const BitPrefix& z);

/// The slice decomposition used by the non-extremal construction at
/// horizon n: expansion of r materialized far enough to cover every
/// R-layer meeting [0, n).
SliceDecomposition non_extremal_decomposition(const Rat& r, std::uint64_t n);

/// A = (S̄ ∩ Z) ∪ ∪_e (S_e ∩ C̄_e) on [0, n), with S sliced from the
/// expansion of r and C_e drawn from the library. Slices beyond the
/// library contribute nothing.
BitPrefix non_extremal_build(const Rat& r, const GeneratorLibrary& lib, const BitPrefix& z,
                             std::uint64_t n);

/// The witness C = ∪_{e<n} (S_e ∩ C̄_e) as a total rule. Its agreement
/// with the non-extremal set contains ∪_{e<n} S_e, of exact density
/// Σ_{e<n} 2^{-(c_e+1)}.
Generator witness_q_description(const Rat& r, const GeneratorLibrary& lib, std::size_t n,
                                std::uint64_t horizon);

}  // namespace coarse
