#pragma once

#include "coarse/bitseq.hpp"
#include "coarse/density.hpp"
#include "coarse/rational.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace coarse {

/// A finite family C_0 .. C_M claimed to satisfy
/// upper-density(A △ C_n) < 2^{-n}. The merge runs whether or not the
/// claims hold; verification is the caller's business.
struct WitnessFamily {
    std::vector<Generator> members;

    std::size_t size() const { return members.size(); }
    /// The claimed bound for member n.
    static Rat claimed_bound(std::size_t n) { return pow2(-static_cast<int>(n)); }
};

/// C_m trusts C_n on I_k iff d_k(C_n △ C_m) < 2^{-m+2}, exactly.
/// Requires m < n; both member prefixes must cover block I_k.
bool trusts(const WitnessFamily& family, std::size_t m, std::size_t n, unsigned k);

/// C_n is trusted on I_k iff C_m trusts it for every m < n (vacuous at
/// n = 0, so C_0 is trusted on every block).
bool trusted(const WitnessFamily& family, std::size_t n, unsigned k);

/// Trust verdicts for all m < n <= M, k <= K.
class TrustMatrix {
  public:
    TrustMatrix(std::size_t member_count, unsigned k_max);

    bool at(std::size_t m, std::size_t n, unsigned k) const;
    void set(std::size_t m, std::size_t n, unsigned k, bool v);
    bool trusted(std::size_t n, unsigned k) const;

    std::size_t member_count() const { return members_; }
    unsigned k_max() const { return k_max_; }

  private:
    std::size_t index(std::size_t m, std::size_t n, unsigned k) const;
    std::size_t members_;
    unsigned k_max_;
    std::vector<std::uint8_t> cells_;
};

TrustMatrix compute_trust_matrix(const WitnessFamily& family, unsigned k_max);

struct MergeResult {
    BitPrefix merged;                 // length 2^{K+1} - 1
    std::vector<std::size_t> chosen;  // member copied on each block I_k
};

/// Miller's merge: per block I_k copy the maximal N <= min(M, k) such
/// that C_N is trusted on I_k. C_0 is always a candidate, so the fold
/// never gets stuck.
MergeResult miller_merge(const WitnessFamily& family, unsigned k_max);

/// A computable index table g(e, s) whose limit in s exists for each e,
/// with the stabilization stage declared (desk-scale stand-in for a
/// 0'-computable index function given by a computable approximation).
class StabilizingIndexTable {
  public:
    StabilizingIndexTable(std::function<std::size_t(std::size_t, std::uint64_t)> g,
                          std::vector<std::uint64_t> stabilization_stages);

    /// From per-e switch schedules: entry (stage, index) means g(e, s)
    /// equals `index` from `stage` on.
    static StabilizingIndexTable from_schedules(
        std::vector<std::vector<std::pair<std::uint64_t, std::size_t>>> schedules);

    std::size_t at(std::size_t e, std::uint64_t s) const { return g_(e, s); }
    std::uint64_t stabilization_stage(std::size_t e) const { return stages_.at(e); }
    std::size_t rows() const { return stages_.size(); }

  private:
    std::function<std::size_t(std::size_t, std::uint64_t)> g_;
    std::vector<std::uint64_t> stages_;
};

inline constexpr std::uint64_t kSmoothingCap = std::uint64_t{1} << 16;

/// Limit smoothing: h_e(n) follows the first s >= n whose indexed member
/// converges on n within budget s. Differs from the limit member on at
/// most finitely many arguments. A search passing the cap throws
/// cap_limited (reported, never treated as a real divergence).
Generator limit_smoothing(const StabilizingIndexTable& table,
                          const std::vector<PartialGenerator>& members, std::size_t e,
                          std::uint64_t search_cap = kSmoothingCap);

}  // namespace coarse
