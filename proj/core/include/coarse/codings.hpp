#pragma once

#include "coarse/bitseq.hpp"
#include "coarse/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace coarse {

/// 1 iff 2^n | k and 2^{n+1} ∤ k. Zero lies in no R_n.
int rn_membership(unsigned n, std::uint64_t k);

/// For k >= 1, the unique n with k ∈ R_n (the 2-adic valuation of k).
unsigned rn_index(std::uint64_t k);

/// Prefix of R(A) = ∪_{n∈A} R_n. Position 0 is always 0. The prefix form
/// needs A decided for every n with R_n ∩ [0,N) nonempty, i.e. n <= log2 N.
BitPrefix r_code(const BitPrefix& a, std::uint64_t n);
BitPrefix r_code(const Generator& a, std::uint64_t n);

/// Total approximant C_k = ∪ {R_n : n ∈ A, n < k}; agrees with R(A) on
/// ∪_{n<k} R_n (density 1 - 2^{-k}) and is 0 elsewhere. Needs a.size() >= k.
Generator ck_approximant(const BitPrefix& a, unsigned k);

/// Factorial intervals I_n = [n!, (n+1)!). I_0 is empty; blocks n >= 1
/// partition [1, ∞).
std::uint64_t factorial(unsigned n);
/// For position p >= 1, the unique n >= 1 with p ∈ [n!, (n+1)!).
unsigned factorial_block_of(std::uint64_t p);

/// Prefix of I(A) = ∪_{n∈A} [n!, (n+1)!). Position 0 is 0. The prefix form
/// needs A decided up to the largest n with n! < N.
BitPrefix interval_code(const BitPrefix& a, std::uint64_t n);
BitPrefix interval_code(const Generator& a, std::uint64_t n);

/// First `bits` digits of the non-terminating binary expansion of
/// r ∈ (0,1]; dyadic rationals take the tail-of-ones form.
BitPrefix binary_expansion_set(const Rat& r, std::uint64_t bits);

/// S = R(B) sliced as S_e = R_{c_e} along the increasing enumeration
/// c_0 < c_1 < ... of B. Only slices meeting the working horizon matter;
/// ones of B beyond the materialized prefix give empty desk-scale slices.
class SliceDecomposition {
  public:
    explicit SliceDecomposition(const BitPrefix& b);

    std::size_t slice_count() const { return c_.size(); }
    /// c_e: which R-layer slice e is.
    unsigned layer(std::size_t e) const { return c_.at(e); }
    const std::vector<unsigned>& layers() const { return c_; }

    /// Slice index of position k, if k lies in S (i.e. ν₂(k) ∈ B).
    std::optional<std::size_t> slice_of(std::uint64_t k) const;
    bool in_s(std::uint64_t k) const { return slice_of(k).has_value(); }

    Generator slice_generator(std::size_t e) const;
    /// Exact density of ∪_{e<n} S_e = Σ_{e<n} 2^{-(c_e+1)}.
    Rat union_density(std::size_t n) const;
    /// Exact density of the whole materialized S.
    Rat s_density() const { return union_density(c_.size()); }

  private:
    std::vector<unsigned> c_;
};

/// A strictly increasing map ω → ω (an enumeration of a computable range).
class IncreasingMap {
  public:
    /// h(k) = a*k + b with a >= 1.
    static IncreasingMap affine(std::uint64_t a, std::uint64_t b);
    /// Finite strictly increasing table; evaluation beyond it is rejected.
    static IncreasingMap table(std::vector<std::uint64_t> values);

    std::uint64_t operator()(std::uint64_t k) const;
    /// g(u): least k with h(k) >= u. Finite-one, g(h(x)) = x,
    /// g(u+1) <= g(u) + 1.
    std::uint64_t g(std::uint64_t u) const;
    /// Indicator prefix of range(h) on [0, n).
    BitPrefix range_prefix(std::uint64_t n) const;

    bool is_affine() const { return table_.empty(); }
    std::uint64_t affine_a() const { return a_; }
    std::uint64_t affine_b() const { return b_; }
    const std::vector<std::uint64_t>& table_values() const { return table_; }

  private:
    IncreasingMap() = default;
    std::uint64_t a_ = 1, b_ = 0;
    std::vector<std::uint64_t> table_;
};

/// Expansion length that decides every R-layer meeting [0, horizon) and
/// reaches the first 1 of r's expansion (so a decomposition exists).
std::uint64_t expansion_bits_for(const Rat& r, std::uint64_t horizon);

/// Prefix of h(X) on [0, n): bit u = 1 iff u = h(k) for some k with
/// x(k) = 1. x must cover every k with h(k) < n.
BitPrefix monotone_image(const IncreasingMap& h, const BitPrefix& x, std::uint64_t n);

/// Prefix of h(C) ∪ complement(R) on [0, n). The ones of R on [0, n) must
/// equal range(h) there; a mismatch is rejected.
BitPrefix spectrum_transform(const BitPrefix& c, const IncreasingMap& h, const Generator& r,
                             std::uint64_t n);

}  // namespace coarse
