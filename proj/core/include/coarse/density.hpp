#pragma once

#include "coarse/bitseq.hpp"
#include "coarse/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace coarse {

/// The sequence rho_1 .. rho_N of prefix densities, exact.
class DensityProfile {
  public:
    DensityProfile() = default;
    explicit DensityProfile(std::vector<Rat> values) : values_(std::move(values)) {}

    std::uint64_t horizon() const { return values_.size(); }
    /// rho_n for 1 <= n <= horizon.
    const Rat& at(std::uint64_t n) const;
    const std::vector<Rat>& values() const { return values_; }

  private:
    std::vector<Rat> values_;
};

/// Densities d_0 .. d_K on the dyadic blocks I_k = [2^k - 1, 2^{k+1} - 1).
class DyadicProfile {
  public:
    DyadicProfile() = default;
    explicit DyadicProfile(std::vector<Rat> d) : d_(std::move(d)) {}

    unsigned max_k() const { return static_cast<unsigned>(d_.size()) - 1; }
    const Rat& at(unsigned k) const { return d_.at(k); }
    const std::vector<Rat>& values() const { return d_; }

  private:
    std::vector<Rat> d_;
};

/// Finite-horizon surrogate for liminf/limsup of a density profile:
/// min/max over the declared tail window [tail_start, horizon]. Always
/// reported with its window, never as the true limit.
struct DensityEstimate {
    Rat liminf_est;
    Rat limsup_est;
    std::uint64_t tail_start = 0;
    std::uint64_t horizon = 0;
};

/// rho_n(a) = |a ∩ [0,n)| / n, exact. Requires 1 <= n <= a.size().
Rat prefix_density(const BitPrefix& a, std::uint64_t n);

/// All of rho_1 .. rho_N for N = a.size() >= 1.
DensityProfile density_profile(const BitPrefix& a);

/// min/max of rho_j over tail_start <= j <= horizon.
DensityEstimate estimate_liminf_limsup(const DensityProfile& p, std::uint64_t tail_start);

/// Limiting density of an eventually periodic generator: ones-per-period /
/// period-length. nullopt for every other kind (their densities are
/// estimates only).
std::optional<Rat> exact_density(const Generator& g);

/// Block densities d_0 .. d_K. Requires a.size() >= 2^{K+1} - 1; with K
/// omitted, uses the largest K the prefix covers.
DyadicProfile dyadic_densities(const BitPrefix& a);
DyadicProfile dyadic_densities(const BitPrefix& a, unsigned k_max);

/// Interval I_k as [lo, hi).
inline std::uint64_t dyadic_block_lo(unsigned k) { return (std::uint64_t{1} << k) - 1; }
inline std::uint64_t dyadic_block_hi(unsigned k) { return (std::uint64_t{1} << (k + 1)) - 1; }

/// d_k of a single prefix over block I_k (prefix must cover the block).
Rat dyadic_density(const BitPrefix& a, unsigned k);
/// d_k of the symmetric difference of two prefixes over block I_k.
Rat dyadic_diff_density(const BitPrefix& a, const BitPrefix& b, unsigned k);

/// Profile of a △ b; its limsup estimate approximates D(A,B).
DensityProfile metric_profile(const BitPrefix& a, const BitPrefix& b);

struct GammaHatResult {
    Rat value;            // best liminf-estimate of agreement over the library
    std::size_t witness;  // least index attaining it
};

/// Library-relative windowed surrogate for the coarse computability bound:
/// max over members of the liminf-estimate of symagree(a, C_e), ties to the
/// least index. Library entries must be total.
GammaHatResult gamma_hat(const BitPrefix& a, const GeneratorLibrary& lib,
                         std::uint64_t tail_start);

/// The per-member estimates gamma_hat maximizes over.
std::vector<DensityEstimate> gamma_hat_estimates(const BitPrefix& a, const GeneratorLibrary& lib,
                                                 std::uint64_t tail_start);

}  // namespace coarse
