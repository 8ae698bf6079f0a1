#include "coarse/trust.hpp"

#include <stdexcept>
#include <utility>

namespace coarse {

namespace {

Rat block_diff_density(const Generator& a, const Generator& b, unsigned k) {
    const std::uint64_t lo = dyadic_block_lo(k), hi = dyadic_block_hi(k);
    std::int64_t diff = 0;
    for (std::uint64_t i = lo; i < hi; ++i) diff += a.bit(i) ^ b.bit(i);
    return Rat(diff, std::int64_t{1} << k);
}

}  // namespace

bool trusts(const WitnessFamily& family, std::size_t m, std::size_t n, unsigned k) {
    if (m >= n) throw std::invalid_argument("trusts: need m < n");
    if (n >= family.size()) throw std::invalid_argument("trusts: member index out of range");
    // d_k(C_n △ C_m) < 2^{-m+2}, strict, in exact rationals.
    return block_diff_density(family.members[n], family.members[m], k) <
           pow2(2 - static_cast<int>(m));
}

bool trusted(const WitnessFamily& family, std::size_t n, unsigned k) {
    for (std::size_t m = 0; m < n; ++m)
        if (!trusts(family, m, n, k)) return false;
    return true;
}

TrustMatrix::TrustMatrix(std::size_t member_count, unsigned k_max)
    : members_(member_count),
      k_max_(k_max),
      cells_(member_count * member_count * (k_max + 1), 0) {}

std::size_t TrustMatrix::index(std::size_t m, std::size_t n, unsigned k) const {
    return (m * members_ + n) * (k_max_ + 1) + k;
}

bool TrustMatrix::at(std::size_t m, std::size_t n, unsigned k) const {
    if (m >= n || n >= members_ || k > k_max_)
        throw std::invalid_argument("TrustMatrix::at: out of range");
    return cells_[index(m, n, k)] != 0;
}

void TrustMatrix::set(std::size_t m, std::size_t n, unsigned k, bool v) {
    cells_[index(m, n, k)] = v ? 1 : 0;
}

bool TrustMatrix::trusted(std::size_t n, unsigned k) const {
    for (std::size_t m = 0; m < n; ++m)
        if (!at(m, n, k)) return false;
    return true;
}

TrustMatrix compute_trust_matrix(const WitnessFamily& family, unsigned k_max) {
    if (family.size() == 0) throw std::invalid_argument("compute_trust_matrix: empty family");
    TrustMatrix mat(family.size(), k_max);
    // Evaluate each member once over [0, 2^{K+1}-1) instead of per pair.
    const std::uint64_t len = dyadic_block_hi(k_max);
    std::vector<BitPrefix> prefixes;
    prefixes.reserve(family.size());
    for (const auto& g : family.members) prefixes.push_back(evaluate_prefix(g, len));
    for (std::size_t n = 1; n < family.size(); ++n)
        for (std::size_t m = 0; m < n; ++m)
            for (unsigned k = 0; k <= k_max; ++k)
                mat.set(m, n, k,
                        dyadic_diff_density(prefixes[n], prefixes[m], k) <
                            pow2(2 - static_cast<int>(m)));
    return mat;
}

MergeResult miller_merge(const WitnessFamily& family, unsigned k_max) {
    if (family.size() == 0) throw std::invalid_argument("miller_merge: empty family");
    const TrustMatrix mat = compute_trust_matrix(family, k_max);
    const std::uint64_t len = dyadic_block_hi(k_max);
    if (len > kPrefixCap) throw std::invalid_argument("miller_merge: K exceeds the prefix cap");

    MergeResult result;
    result.merged = BitPrefix::zeros(len);
    result.chosen.reserve(k_max + 1);
    for (unsigned k = 0; k <= k_max; ++k) {
        // The proof only ever consults indices <= k.
        std::size_t pick = 0;
        const std::size_t top = std::min<std::size_t>(family.size() - 1, k);
        for (std::size_t n = top; n > 0; --n) {
            if (mat.trusted(n, k)) {
                pick = n;
                break;
            }
        }
        result.chosen.push_back(pick);
        const Generator& member = family.members[pick];
        for (std::uint64_t i = dyadic_block_lo(k); i < dyadic_block_hi(k); ++i)
            result.merged.set(i, member.bit(i));
    }
    return result;
}

StabilizingIndexTable::StabilizingIndexTable(
    std::function<std::size_t(std::size_t, std::uint64_t)> g,
    std::vector<std::uint64_t> stabilization_stages)
    : g_(std::move(g)), stages_(std::move(stabilization_stages)) {}

StabilizingIndexTable StabilizingIndexTable::from_schedules(
    std::vector<std::vector<std::pair<std::uint64_t, std::size_t>>> schedules) {
    for (auto& sched : schedules) {
        if (sched.empty() || sched.front().first != 0)
            throw std::invalid_argument("from_schedules: each row must start at stage 0");
        for (std::size_t j = 1; j < sched.size(); ++j)
            if (sched[j].first <= sched[j - 1].first)
                throw std::invalid_argument("from_schedules: switch stages must increase");
    }
    std::vector<std::uint64_t> stages;
    stages.reserve(schedules.size());
    for (const auto& sched : schedules) stages.push_back(sched.back().first);
    auto g = [schedules](std::size_t e, std::uint64_t s) {
        const auto& sched = schedules.at(e);
        std::size_t idx = sched.front().second;
        for (const auto& [stage, index] : sched) {
            if (stage > s) break;
            idx = index;
        }
        return idx;
    };
    return StabilizingIndexTable(std::move(g), std::move(stages));
}

Generator limit_smoothing(const StabilizingIndexTable& table,
                          const std::vector<PartialGenerator>& members, std::size_t e,
                          std::uint64_t search_cap) {
    if (e >= table.rows()) throw std::invalid_argument("limit_smoothing: e out of range");
    auto pool = std::make_shared<std::vector<PartialGenerator>>(members);
    auto lookup = [&table, e](std::uint64_t s) { return table.at(e, s); };
    return Generator::formula(
        "smoothed(" + std::to_string(e) + ")",
        [pool, lookup, e, search_cap](std::uint64_t n_arg) {
            for (std::uint64_t s = n_arg; s <= search_cap; ++s) {
                const std::size_t idx = lookup(s);
                const auto v = pool->at(idx).evaluate(n_arg, s);
                if (v) return *v;
            }
            throw cap_limited("limit_smoothing: no converging member for argument " +
                                  std::to_string(n_arg) + " (requirement " + std::to_string(e) +
                                  ")",
                              search_cap);
        });
}

}  // namespace coarse
