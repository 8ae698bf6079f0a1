#include "coarse/density.hpp"

#include <algorithm>
#include <stdexcept>

namespace coarse {

const Rat& DensityProfile::at(std::uint64_t n) const {
    if (n < 1 || n > values_.size())
        throw std::invalid_argument("DensityProfile::at: n out of [1, horizon]");
    return values_[n - 1];
}

Rat prefix_density(const BitPrefix& a, std::uint64_t n) {
    if (n < 1 || n > a.size())
        throw std::invalid_argument("prefix_density: need 1 <= n <= prefix length");
    return Rat(static_cast<std::int64_t>(a.ones_below(n)), static_cast<std::int64_t>(n));
}

DensityProfile density_profile(const BitPrefix& a) {
    if (a.empty()) throw std::invalid_argument("density_profile: empty prefix");
    std::vector<Rat> values;
    values.reserve(a.size());
    std::int64_t count = 0;
    for (std::uint64_t n = 1; n <= a.size(); ++n) {
        count += a.bit(n - 1);
        values.emplace_back(count, static_cast<std::int64_t>(n));
    }
    return DensityProfile(std::move(values));
}

DensityEstimate estimate_liminf_limsup(const DensityProfile& p, std::uint64_t tail_start) {
    if (tail_start < 1 || tail_start > p.horizon())
        throw std::invalid_argument("estimate_liminf_limsup: tail_start out of range");
    DensityEstimate est;
    est.tail_start = tail_start;
    est.horizon = p.horizon();
    est.liminf_est = est.limsup_est = p.at(tail_start);
    for (std::uint64_t j = tail_start + 1; j <= p.horizon(); ++j) {
        const Rat& v = p.at(j);
        est.liminf_est = std::min(est.liminf_est, v);
        est.limsup_est = std::max(est.limsup_est, v);
    }
    return est;
}

std::optional<Rat> exact_density(const Generator& g) {
    if (g.kind() != GeneratorKind::EventuallyPeriodic) return std::nullopt;
    const BitPrefix& per = g.period();
    return Rat(static_cast<std::int64_t>(per.ones_below(per.size())),
               static_cast<std::int64_t>(per.size()));
}

Rat dyadic_density(const BitPrefix& a, unsigned k) {
    const std::uint64_t hi = dyadic_block_hi(k);
    if (a.size() < hi) throw std::invalid_argument("dyadic_density: prefix too short for block");
    return Rat(static_cast<std::int64_t>(a.ones_in(dyadic_block_lo(k), hi)),
               std::int64_t{1} << k);
}

Rat dyadic_diff_density(const BitPrefix& a, const BitPrefix& b, unsigned k) {
    const std::uint64_t lo = dyadic_block_lo(k), hi = dyadic_block_hi(k);
    if (a.size() < hi || b.size() < hi)
        throw std::invalid_argument("dyadic_diff_density: prefix too short for block");
    std::int64_t diff = 0;
    for (std::uint64_t i = lo; i < hi; ++i) diff += a.bit(i) ^ b.bit(i);
    return Rat(diff, std::int64_t{1} << k);
}

DyadicProfile dyadic_densities(const BitPrefix& a, unsigned k_max) {
    if (a.size() < dyadic_block_hi(k_max))
        throw std::invalid_argument("dyadic_densities: prefix too short for requested K");
    std::vector<Rat> d;
    d.reserve(k_max + 1);
    for (unsigned k = 0; k <= k_max; ++k) d.push_back(dyadic_density(a, k));
    return DyadicProfile(std::move(d));
}

DyadicProfile dyadic_densities(const BitPrefix& a) {
    if (a.size() < 1) throw std::invalid_argument("dyadic_densities: prefix too short");
    unsigned k_max = 0;
    while (a.size() >= dyadic_block_hi(k_max + 1)) ++k_max;
    return dyadic_densities(a, k_max);
}

DensityProfile metric_profile(const BitPrefix& a, const BitPrefix& b) {
    if (a.size() != b.size()) throw std::invalid_argument("metric_profile: length mismatch");
    return density_profile(symdiff(a, b));
}

std::vector<DensityEstimate> gamma_hat_estimates(const BitPrefix& a, const GeneratorLibrary& lib,
                                                 std::uint64_t tail_start) {
    if (lib.empty()) throw std::invalid_argument("gamma_hat: empty library");
    if (tail_start < 1 || tail_start > a.size())
        throw std::invalid_argument("gamma_hat: prefix shorter than tail_start");
    std::vector<DensityEstimate> out;
    out.reserve(lib.size());
    for (std::size_t e = 0; e < lib.size(); ++e) {
        const BitPrefix ce = evaluate_prefix(lib.total(e), a.size());
        out.push_back(estimate_liminf_limsup(density_profile(symagree(a, ce)), tail_start));
    }
    return out;
}

GammaHatResult gamma_hat(const BitPrefix& a, const GeneratorLibrary& lib,
                         std::uint64_t tail_start) {
    const auto ests = gamma_hat_estimates(a, lib, tail_start);
    GammaHatResult best{ests[0].liminf_est, 0};
    for (std::size_t e = 1; e < ests.size(); ++e) {
        if (ests[e].liminf_est > best.value) {  // ties stay at the least index
            best.value = ests[e].liminf_est;
            best.witness = e;
        }
    }
    return best;
}

}  // namespace coarse
