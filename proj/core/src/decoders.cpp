#include "coarse/decoders.hpp"

#include "coarse/codings.hpp"

#include <memory>
#include <stdexcept>

namespace coarse {

int majority_vote_decode(const BitPrefix& c, unsigned n) {
    if (n < 1) throw std::invalid_argument("majority_vote_decode: need n >= 1");
    const std::uint64_t lo = factorial(n), hi = factorial(n + 1);
    if (c.size() < hi)
        throw std::invalid_argument("majority_vote_decode: prefix shorter than (n+1)!");
    const std::uint64_t ones = c.ones_in(lo, hi);
    return 2 * ones > (hi - lo) ? 1 : 0;
}

BitPrefix decode_prefix(const BitPrefix& c, unsigned n_max) {
    if (c.size() < factorial(n_max + 1))
        throw std::invalid_argument("decode_prefix: prefix shorter than (n_max+1)!");
    BitPrefix out = BitPrefix::zeros(n_max + 1);
    for (unsigned n = 1; n <= n_max; ++n) out.set(n, majority_vote_decode(c, n));
    return out;
}

Generator partial_to_coarse(const PartialGenerator& phi, std::uint64_t domain_budget,
                            std::uint64_t n) {
    auto head = std::make_shared<BitPrefix>(BitPrefix::zeros(n));
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto v = phi.evaluate(i, domain_budget);
        head->set(i, v.value_or(0));
    }
    return Generator::formula(
        "coarse(" + phi.name() + ")", [phi, domain_budget, head](std::uint64_t i) {
            if (i < head->size()) return head->bit(i);
            return phi.evaluate(i, domain_budget).value_or(0);
        });
}

BitPrefix budgeted_domain_prefix(const PartialGenerator& phi, std::uint64_t budget,
                                 std::uint64_t n) {
    BitPrefix out = BitPrefix::zeros(n);
    for (std::uint64_t i = 0; i < n; ++i)
        out.set(i, phi.evaluate(i, budget).has_value() ? 1 : 0);
    return out;
}

DescriptionReport check_r_description(const BitPrefix& a, const BitPrefix& b, const Rat& r,
                                      std::uint64_t tail_start) {
    if (a.size() != b.size())
        throw std::invalid_argument("check_r_description: length mismatch");
    DescriptionReport report;
    report.agreement_profile = density_profile(symagree(a, b));
    report.estimate = estimate_liminf_limsup(report.agreement_profile, tail_start);
    report.queried_r = r;
    report.verdict_at_r = report.estimate.liminf_est >= r;
    return report;
}

}  // namespace coarse
