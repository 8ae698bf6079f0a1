#pragma once

#include "coarse/bitseq.hpp"
#include "coarse/density.hpp"
#include "coarse/rational.hpp"

namespace coarse {

/// Outcome of checking whether b is an r-description of a: the agreement
/// profile of a ▽ b, its windowed estimate, and the verdict
/// liminf_est >= r.
struct DescriptionReport {
    DensityProfile agreement_profile;
    DensityEstimate estimate;
    Rat queried_r;
    bool verdict_at_r = false;
};

/// Majority vote over the factorial block I_n = [n!, (n+1)!): 1 iff
/// strictly more than half the positions carry 1 in c. Exact ties decode
/// to 0. Needs (n+1)! <= c.size() and n >= 1.
int majority_vote_decode(const BitPrefix& c, unsigned n);

/// Bit n = majority_vote_decode(c, n) for 1 <= n <= n_max; bit 0 = 0.
BitPrefix decode_prefix(const BitPrefix& c, unsigned n_max);

/// Totalize a budgeted rule: 1 exactly where phi converges within the
/// budget to 1, 0 elsewhere (divergence maps to 0). The agreement of the
/// result with any set consistent with phi contains phi's budgeted domain.
/// `n` is a materialization horizon: the first n bits are precomputed.
Generator partial_to_coarse(const PartialGenerator& phi, std::uint64_t domain_budget,
                            std::uint64_t n = 0);

/// Indicator prefix of phi's budgeted domain on [0, n).
BitPrefix budgeted_domain_prefix(const PartialGenerator& phi, std::uint64_t budget,
                                 std::uint64_t n);

/// Does b describe a at density r? Equal lengths, window within them.
DescriptionReport check_r_description(const BitPrefix& a, const BitPrefix& b, const Rat& r,
                                      std::uint64_t tail_start);

}  // namespace coarse
