#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace coarse {

/// Default bound on materialized prefix lengths. Dyadic blocks through
/// I_21 fit below it, which is as far as the merge experiments go.
inline constexpr std::uint64_t kPrefixCap = std::uint64_t{1} << 22;

/// Raised when a bounded search gives up. Callers report this as a
/// cap-limited outcome, never as a real divergence.
class cap_limited : public std::runtime_error {
  public:
    cap_limited(std::string what, std::uint64_t cap)
        : std::runtime_error(std::move(what)), cap_(cap) {}
    std::uint64_t cap() const { return cap_; }

  private:
    std::uint64_t cap_;
};

/// A finite binary word: the initial segment of a subset of omega.
/// Indexing is 0-based and total on [0, size()).
class BitPrefix {
  public:
    BitPrefix() = default;
    explicit BitPrefix(std::vector<std::uint8_t> bits);

    static BitPrefix zeros(std::uint64_t n);
    static BitPrefix ones(std::uint64_t n);
    /// From a string of '0'/'1' characters.
    static BitPrefix from_string(const std::string& s);

    std::uint64_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    int bit(std::uint64_t i) const { return bits_[i]; }

    void set(std::uint64_t i, int b) { bits_[i] = static_cast<std::uint8_t>(b & 1); }
    void push_back(int b) { bits_.push_back(static_cast<std::uint8_t>(b & 1)); }
    void flip(std::uint64_t i) { bits_[i] ^= 1u; }

    /// Ones in [0, n); n <= size().
    std::uint64_t ones_below(std::uint64_t n) const;
    /// Ones in [lo, hi) ∩ [0, size()).
    std::uint64_t ones_in(std::uint64_t lo, std::uint64_t hi) const;

    BitPrefix first(std::uint64_t n) const;
    std::string to_string() const;

    bool operator==(const BitPrefix&) const = default;

    const std::vector<std::uint8_t>& raw() const { return bits_; }

  private:
    std::vector<std::uint8_t> bits_;
};

enum class GeneratorKind { Formula, EventuallyPeriodic, SeededRandom, TableBacked };

/// A declared deterministic total rule index -> bit, standing in for a
/// computable set. Kinds are explicit so that eventually periodic rules can
/// serve as exact-density oracles.
class Generator {
  public:
    static Generator formula(std::string name, std::function<int(std::uint64_t)> rule);
    /// Bits follow `preamble` then repeat `period` forever. Period nonempty.
    static Generator eventually_periodic(BitPrefix preamble, BitPrefix period);
    /// Bit i true with probability bias_num/bias_den, fixed by the seed.
    static Generator seeded_random(std::uint64_t seed, std::uint64_t bias_num = 1,
                                   std::uint64_t bias_den = 2);
    /// Bits from a finite table; 0 beyond the table.
    static Generator table_backed(BitPrefix table);

    static Generator all_zeros();
    static Generator all_ones();
    /// Indicator of the even numbers (eventually periodic, period "10").
    static Generator evens();
    static Generator odds();
    /// Indicator of R_n = {k : 2^n | k, 2^{n+1} ∤ k}, built as a periodic
    /// rule with period 2^{n+1} so its exact density is available.
    static Generator rn(unsigned n);
    static Generator complement_of(const Generator& g);

    int bit(std::uint64_t i) const { return rule_(i); }
    GeneratorKind kind() const { return kind_; }
    const std::string& name() const { return name_; }

    /// Only meaningful for EventuallyPeriodic.
    const BitPrefix& preamble() const { return preamble_; }
    const BitPrefix& period() const { return period_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t bias_num() const { return bias_num_; }
    std::uint64_t bias_den() const { return bias_den_; }
    const BitPrefix& table() const { return *table_; }

  private:
    Generator() = default;

    GeneratorKind kind_ = GeneratorKind::Formula;
    std::function<int(std::uint64_t)> rule_;
    std::string name_;
    BitPrefix preamble_, period_;
    std::uint64_t seed_ = 0, bias_num_ = 1, bias_den_ = 2;
    std::shared_ptr<const BitPrefix> table_;
};

/// Budgeted partial rule: evaluate(i, s) is the stage-s approximation
/// Φ_{e,s}(i). Monotone in the budget by construction: each index carries a
/// least convergence budget (or none) and a value independent of the budget.
class PartialGenerator {
  public:
    using StageRule = std::function<std::optional<std::uint64_t>(std::uint64_t)>;

    /// A total generator, converging at budget 0 everywhere.
    static PartialGenerator total(Generator values);
    static PartialGenerator never(std::string name = "never");
    /// Converges at index i once the budget reaches stage_rule(i).
    static PartialGenerator with_stages(Generator values, StageRule stage_rule,
                                        std::string name = "");
    /// Convergence stages hashed from the seed in [0, max_stage]; each index
    /// diverges outright with probability div_num/div_den.
    static PartialGenerator seeded(std::uint64_t seed, std::uint64_t max_stage,
                                   std::uint64_t div_num = 0, std::uint64_t div_den = 1);

    /// nullopt means "diverged within this budget" -- a value, not an error.
    std::optional<int> evaluate(std::uint64_t i, std::uint64_t budget) const;
    /// Least budget at which index i converges, if any.
    std::optional<std::uint64_t> convergence_stage(std::uint64_t i) const { return stage_(i); }
    const Generator& values() const { return values_; }
    const std::string& name() const { return name_; }

  private:
    PartialGenerator(Generator values, StageRule stage, std::string name)
        : values_(std::move(values)), stage_(std::move(stage)), name_(std::move(name)) {}

    Generator values_;
    StageRule stage_;
    std::string name_;
};

/// Finite indexed family of rules: the desk-scale stand-in for an
/// enumeration of the computable sets (or of the partial ones).
class GeneratorLibrary {
  public:
    GeneratorLibrary() = default;
    explicit GeneratorLibrary(std::vector<Generator> totals);

    void add(Generator g) { entries_.emplace_back(std::move(g)); }
    void add(PartialGenerator g) { entries_.emplace_back(std::move(g)); }

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    bool is_total(std::size_t e) const;

    /// Entry e as a total generator; throws if the entry is partial.
    const Generator& total(std::size_t e) const;
    /// Entry e under budgeted semantics (totals converge at budget 0).
    PartialGenerator partial(std::size_t e) const;

  private:
    std::vector<std::variant<Generator, PartialGenerator>> entries_;
};

/// First N bits of a total generator. N bounded by `cap`.
BitPrefix evaluate_prefix(const Generator& g, std::uint64_t n, std::uint64_t cap = kPrefixCap);

enum class PointwiseOp { Complement, Union, Intersect, Symdiff, Symagree };

/// Bitwise set algebra; a and b must have equal length (complement ignores b).
/// symagree(a,b)(i) = 1 iff a(i) = b(i); symdiff is its complement.
BitPrefix pointwise(PointwiseOp op, const BitPrefix& a, const BitPrefix& b);
BitPrefix complement(const BitPrefix& a);
BitPrefix set_union(const BitPrefix& a, const BitPrefix& b);
BitPrefix set_intersect(const BitPrefix& a, const BitPrefix& b);
BitPrefix symdiff(const BitPrefix& a, const BitPrefix& b);
BitPrefix symagree(const BitPrefix& a, const BitPrefix& b);

/// Φ_{e,s}(i) for a budgeted rule; nullopt = diverged at this budget.
inline std::optional<int> evaluate_budgeted(const PartialGenerator& g, std::uint64_t i,
                                            std::uint64_t budget) {
    return g.evaluate(i, budget);
}

}  // namespace coarse
