#pragma once

#include "coarse/bitseq.hpp"
#include "coarse/codings.hpp"
#include "coarse/rational.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace coarse {

/// Cantor pairing; the constructions index R_{e,i} = R_{<e,i>} with it.
inline std::uint64_t cantor_pair(std::uint64_t e, std::uint64_t i) {
    return (e + i) * (e + i + 1) / 2 + i;
}

/// A monotone stage-indexed finite-set sequence standing for a c.e. set's
/// enumeration. Stages run 0..horizon; E_s only ever grows.
class Enumeration {
  public:
    explicit Enumeration(std::uint64_t horizon);

    /// From stage -> newly added elements. An element appearing twice is
    /// rejected as malformed.
    static Enumeration from_stage_adds(
        std::uint64_t horizon,
        const std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>>& adds);

    /// Random monotone enumeration: at each stage >= 1, with probability
    /// add_num/add_den draw one fresh element below element_max.
    static Enumeration seeded(std::uint64_t seed, std::uint64_t horizon,
                              std::uint64_t element_max, std::uint64_t add_num = 1,
                              std::uint64_t add_den = 2);

    std::uint64_t horizon() const { return horizon_; }
    const std::vector<std::uint64_t>& added_at(std::uint64_t s) const;
    /// Membership in E_s.
    bool contains_at(std::uint64_t element, std::uint64_t stage) const;
    std::optional<std::uint64_t> entry_stage(std::uint64_t element) const;
    /// Add `element` at `stage`; rejected if already present.
    void add(std::uint64_t stage, std::uint64_t element);
    /// All elements of the final set, sorted.
    std::vector<std::uint64_t> final_elements() const;
    /// Indicator prefix of the final set on [0, n).
    BitPrefix final_prefix(std::uint64_t n) const;

  private:
    std::uint64_t horizon_;
    std::vector<std::vector<std::uint64_t>> added_;        // per stage
    std::map<std::uint64_t, std::uint64_t> entry_stage_;   // element -> stage
};

enum class IntervalStatus { Pending, Successful, Cancelled };

/// One finite "interval" of a permitting construction, with its full
/// bookkeeping. Elements are sorted.
struct IntervalRecord {
    std::size_t e = 0;
    std::size_t i = 0;
    std::vector<std::uint64_t> elements;
    IntervalStatus status = IntervalStatus::Pending;
    std::optional<std::uint64_t> declared_at;  // success stage
    std::uint64_t chosen_at = 0;
    std::optional<std::uint64_t> use;          // restraint-cycle use (second construction)

    std::uint64_t min() const { return elements.front(); }
    std::uint64_t max() const { return elements.back(); }
    bool contains(std::uint64_t x) const;
};

/// g(e, i, s): 1 exactly in the await-permission phase (the module has
/// verified the opponent on its interval and waits for a permitting change
/// below the use).
class GTable {
  public:
    void ensure_row(std::size_t e, std::size_t i, std::uint64_t stages);
    void set(std::size_t e, std::size_t i, std::uint64_t s, int v);
    int at(std::size_t e, std::size_t i, std::uint64_t s) const;
    const std::map<std::pair<std::size_t, std::size_t>, std::vector<std::uint8_t>>& rows() const {
        return rows_;
    }

  private:
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::uint8_t>> rows_;
};

struct TraceEvent {
    std::uint64_t stage = 0;
    std::string action;
    std::int64_t e = -1;
    std::int64_t i = -1;
    std::vector<std::uint64_t> data;
};

enum class ConstructionKind { Permitting, Nonlow };

/// Full replayable record of one construction run.
struct StageState {
    ConstructionKind kind = ConstructionKind::Permitting;
    std::uint64_t stages = 0;
    Rat r;                           // slice parameter (permitting run only)
    std::uint64_t expansion_bits = 0;
    Enumeration a{0};                // the set under construction
    std::vector<IntervalRecord> intervals;
    std::set<std::uint64_t> restraints;  // positions restrained at the end
    GTable g;
    std::vector<TraceEvent> trace;
};

/// Greedy interval chooser for the first construction. Intervals for all
/// requirements are drawn from disjoint position ranges off a single
/// frontier, which gives the ordering and disjointness conditions for free;
/// each interval closes as soon as its share of S_e ∪ S̄ below max+1
/// reaches i/(i+1).
class IntervalPlanner {
  public:
    IntervalPlanner(SliceDecomposition decomp, std::uint64_t scan_cap = kPrefixCap);

    /// k ∈ S_e ∪ S̄.
    bool eligible(std::size_t e, std::uint64_t k) const;
    /// Choose `count` further intervals for requirement e (the i index
    /// continues from earlier calls). Throws cap_limited if the scan cap is
    /// hit before the density condition is met.
    std::vector<IntervalRecord> choose_intervals(std::size_t e, std::size_t count);

    const SliceDecomposition& decomposition() const { return decomp_; }

  private:
    SliceDecomposition decomp_;
    std::uint64_t scan_cap_;
    std::uint64_t frontier_ = 0;
    std::map<std::size_t, std::size_t> next_i_;
    // Lazily advanced count of S_e ∪ S̄ elements below the frontier.
    std::map<std::size_t, std::pair<std::uint64_t, std::uint64_t>> prior_;  // e -> (count, upto)
};

struct PermitOptions {
    std::size_t i_max = 3;                  // intervals pre-chosen per requirement
    std::uint64_t scan_cap = kPrefixCap;
};

/// First construction: pre-chosen intervals I_{e,i} ⊆ S_e ∪ S̄; at stage
/// s+1 an interval succeeds when the opponent is defined on it within
/// budget s, its min clears A_s ∩ S_e, and B permits below its min; the
/// opponent's zeros are then enumerated so A totally disagrees with it
/// there.
StageState run_permitting_construction(const Enumeration& b, const GeneratorLibrary& lib,
                                        const Rat& r, std::uint64_t stages,
                                        PermitOptions opts = {});

/// Stand-in for the jump query Φ_i(C; i): at a given stage it either
/// diverges or converges with a recorded use (largest queried position +
/// 1, always < the stage).
class JumpProbe {
  public:
    using Fn = std::function<std::optional<std::uint64_t>(std::uint64_t stage)>;

    static JumpProbe never();
    /// Converges at every stage >= converge_stage with the given use;
    /// requires use < converge_stage.
    static JumpProbe at_stage(std::uint64_t converge_stage, std::uint64_t use);
    /// Hash-drawn convergence stage and use (use < stage); diverges
    /// outright with probability div_num/div_den.
    static JumpProbe seeded(std::uint64_t seed, std::uint64_t max_stage, std::uint64_t max_use,
                            std::uint64_t div_num = 0, std::uint64_t div_den = 1);

    /// The use of the stage-s computation, or nullopt if it diverges.
    std::optional<std::uint64_t> query(std::uint64_t stage) const;

  private:
    explicit JumpProbe(Fn fn) : fn_(std::move(fn)) {}
    Fn fn_;
};

struct NonlowOptions {
    std::size_t e_max = 2;
    std::size_t i_max = 2;
    std::uint64_t element_cap = kPrefixCap;  // intervals must fit below this
};

/// Second construction: per requirement (e, i) on R_{<e,i>}, alternate
/// elements fill in until the jump probe converges; then the
/// restrain / verify-opponent / await-permission cycle runs, declaring an
/// interval successful when a permitting change below the use arrives and
/// enumerating one element per pair so at least half the interval lands in
/// A △ Φ_e. g(e,i,s) is maintained alongside.
StageState run_nonlow_construction(const Enumeration& c, const std::vector<JumpProbe>& probes,
                                   const GeneratorLibrary& lib, std::uint64_t stages,
                                   NonlowOptions opts = {});

struct CheckReport {
    bool ok = true;
    std::vector<std::string> failures;

    void fail(std::string what);
    void merge(const CheckReport& other);
};

/// Every element entering A was permitted at its entry stage: some y <= x
/// enters the permitter then, or (second construction) x equals the stage.
CheckReport verify_permitting(const StageState& state, const Enumeration& permitter);

/// Conditions (i)-(iv) for the first construction's intervals, exact.
CheckReport verify_interval_conditions(const StageState& state);

/// First construction: A and the opponent totally disagree on every
/// successful interval.
CheckReport verify_success_disagreement(const StageState& state, const GeneratorLibrary& lib);

/// Second construction: rho_m(A △ Φ_e) > rho_m(R_{e,i})/4 at m = max+1
/// for every successful interval (disagreement counted where the opponent
/// converges within the final budget).
CheckReport verify_nonlow_success_bounds(const StageState& state, const GeneratorLibrary& lib);

/// Replays await-permission spans from the trace and checks the g-table
/// matches them exactly.
CheckReport verify_g_semantics(const StageState& state);

struct HalfDensityReport {
    std::uint64_t pairs_checked = 0;
    std::uint64_t exactly_one = 0;
    /// Even-indexed element of each pair violating exactly-one-in-A.
    std::vector<std::uint64_t> exception_pairs;

    Rat fraction() const;
};

/// Counts A-membership among the pairs (r_{2k}, r_{2k+1}) of R_{<e,i>}
/// that the run processed; the finitely many exceptions should be exactly
/// the pairs of a final, still-restrained interval.
HalfDensityReport verify_half_density(const StageState& state, std::size_t e, std::size_t i);

}  // namespace coarse
