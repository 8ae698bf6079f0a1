#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coarse/stagecraft.hpp"
#include "coarse/rng.hpp"

#include <algorithm>

using namespace coarse;

namespace {

GeneratorLibrary seeded_partial_library(std::size_t count, std::uint64_t seed,
                                        std::uint64_t max_stage) {
    GeneratorLibrary lib;
    for (std::size_t e = 0; e < count; ++e)
        lib.add(PartialGenerator::seeded(splitmix64(seed + e), max_stage));
    return lib;
}

std::uint64_t count_action(const StageState& state, const std::string& action) {
    std::uint64_t n = 0;
    for (const auto& ev : state.trace) n += ev.action == action;
    return n;
}

}  // namespace

TEST_CASE("enumerations are monotone bookkeeping") {
    Enumeration e = Enumeration::from_stage_adds(10, {{3, {0, 5}}, {7, {1}}});
    CHECK(e.contains_at(0, 3));
    CHECK(!e.contains_at(0, 2));
    CHECK(e.entry_stage(1) == 7);
    CHECK(!e.entry_stage(2));
    CHECK(e.final_prefix(6).to_string() == "110001");
    CHECK_THROWS_AS(Enumeration::from_stage_adds(10, {{3, {0}}, {7, {0}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Enumeration::from_stage_adds(2, {{5, {0}}}), std::invalid_argument);

    const Enumeration s1 = Enumeration::seeded(9, 50, 200);
    const Enumeration s2 = Enumeration::seeded(9, 50, 200);
    for (std::uint64_t s = 0; s <= 50; ++s) CHECK(s1.added_at(s) == s2.added_at(s));
}

TEST_CASE("interval planner: the first interval closes immediately") {
    const SliceDecomposition decomp(binary_expansion_set(Rat(1, 2), 24));
    IntervalPlanner planner(decomp);
    const auto recs = planner.choose_intervals(0, 1);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].i == 0);
    CHECK(recs[0].elements.size() == 1);  // i = 0 asks for a 0/1 share
    CHECK(recs[0].elements.front() == 0);  // 0 lies in no R_n, so it is in S-bar
}

TEST_CASE("interval planner satisfies the share condition by construction") {
    const SliceDecomposition decomp(binary_expansion_set(Rat(1, 3), 24));
    IntervalPlanner planner(decomp);
    for (std::size_t e = 0; e < 2; ++e) {
        const auto recs = planner.choose_intervals(e, 3);
        for (const auto& rec : recs) {
            const std::uint64_t m = rec.max() + 1;
            std::uint64_t t_count = 0;
            for (std::uint64_t k = 0; k < m; ++k) t_count += planner.eligible(e, k) ? 1 : 0;
            // (i+1) |I| >= i |T restricted to m|, exactly.
            CHECK((rec.i + 1) * rec.elements.size() >= rec.i * t_count);
            for (auto x : rec.elements) CHECK(planner.eligible(e, x));
        }
        for (std::size_t j = 1; j < recs.size(); ++j)
            CHECK(recs[j].min() > recs[j - 1].max());
    }
}

TEST_CASE("interval planner reports hopeless scans as cap-limited") {
    const SliceDecomposition decomp(binary_expansion_set(Rat(1, 2), 24));
    IntervalPlanner planner(decomp, 2048);
    CHECK_THROWS_AS(
        [&] {
            for (int j = 0; j < 12; ++j) planner.choose_intervals(0, 1);
        }(),
        cap_limited);
}

TEST_CASE("permitting run: a never-changing B yields no successes") {
    const Enumeration b(40);  // empty at every stage
    GeneratorLibrary lib;
    lib.add(PartialGenerator::total(Generator::all_zeros()));
    const StageState state = run_permitting_construction(b, lib, Rat(1, 2), 40);
    CHECK(count_action(state, "success") == 0);
    CHECK(state.a.final_elements().empty());
    CHECK(verify_permitting(state, b).ok);
    CHECK(verify_interval_conditions(state).ok);
}

TEST_CASE("permitting run: a hand-traced success") {
    // The first interval is {0}; element 0 enters B at stage 3, which
    // permits it, and the everywhere-zero opponent gets total disagreement.
    const Enumeration b = Enumeration::from_stage_adds(10, {{3, {0}}});
    GeneratorLibrary lib;
    lib.add(PartialGenerator::total(Generator::all_zeros()));
    const StageState state = run_permitting_construction(b, lib, Rat(1, 2), 10);

    REQUIRE(count_action(state, "success") >= 1);
    const IntervalRecord& first = state.intervals[0];
    CHECK(first.status == IntervalStatus::Successful);
    CHECK(first.declared_at == 3);
    for (auto x : first.elements) CHECK(state.a.entry_stage(x).has_value());

    CHECK(verify_permitting(state, b).ok);
    CHECK(verify_interval_conditions(state).ok);
    CHECK(verify_success_disagreement(state, lib).ok);
}

TEST_CASE("permitting run: randomized instances pass every post-hoc check") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const std::uint64_t stages = 120;
        const Enumeration b = Enumeration::seeded(seed, stages, 400, 2, 3);
        const GeneratorLibrary lib = seeded_partial_library(3, seed * 17, 24);
        PermitOptions opts;
        opts.i_max = 3;
        opts.scan_cap = 1 << 16;
        const StageState state = run_permitting_construction(b, lib, Rat(1, 2), stages, opts);
        CHECK(verify_permitting(state, b).ok);
        CHECK(verify_interval_conditions(state).ok);
        CHECK(verify_success_disagreement(state, lib).ok);
    }
}

TEST_CASE("nonlow run: a never-converging probe leaves pure alternate filling") {
    const Enumeration c(30);
    GeneratorLibrary lib;
    lib.add(Generator::all_zeros());
    NonlowOptions opts;
    opts.e_max = 1;
    opts.i_max = 1;
    const StageState state =
        run_nonlow_construction(c, {JumpProbe::never()}, lib, 30, opts);

    CHECK(state.intervals.empty());
    // g(0,0,s) = 0 throughout, and A holds exactly the even-indexed
    // elements of R_0 = odds: 1, 5, 9, ...
    for (std::uint64_t s = 0; s <= 30; ++s) CHECK(state.g.at(0, 0, s) == 0);
    for (std::uint64_t x = 0; x <= 30; ++x) {
        const bool expected = x % 4 == 1;
        CHECK(state.a.entry_stage(x).has_value() == expected);
    }
    const HalfDensityReport half = verify_half_density(state, 0, 0);
    CHECK(half.exception_pairs.empty());
    CHECK(half.fraction() == Rat(1));
}

TEST_CASE("nonlow run: one full cycle to a successful interval") {
    // Probe converges at stage 3 with use 2; C gets element 1 at stage 7;
    // the opponent is total with unit budgets.
    const Enumeration c = Enumeration::from_stage_adds(12, {{7, {1}}});
    GeneratorLibrary lib;
    lib.add(PartialGenerator::with_stages(
        Generator::all_zeros(), [](std::uint64_t) { return std::optional<std::uint64_t>{1}; }));
    NonlowOptions opts;
    opts.e_max = 1;
    opts.i_max = 1;
    const StageState state =
        run_nonlow_construction(c, {JumpProbe::at_stage(3, 2)}, lib, 12, opts);

    REQUIRE(state.intervals.size() == 2);
    const IntervalRecord& first = state.intervals[0];
    CHECK(first.status == IntervalStatus::Successful);
    CHECK(first.declared_at == 7);
    CHECK(first.elements == std::vector<std::uint64_t>{5, 7, 9, 11});
    CHECK(first.use == 2);

    // The zero opponent makes every even-indexed element enter.
    CHECK(state.a.entry_stage(5) == 7);
    CHECK(state.a.entry_stage(9) == 7);
    CHECK(!state.a.entry_stage(7));
    CHECK(!state.a.entry_stage(11));
    CHECK(state.a.entry_stage(1) == 1);  // filled before the cycle began

    // The replacement interval stays restrained to the end.
    const IntervalRecord& second = state.intervals[1];
    CHECK(second.status == IntervalStatus::Pending);
    for (auto x : second.elements) CHECK(state.restraints.contains(x));

    // g: await-permission spans are [4, 7) and [8, horizon].
    for (std::uint64_t s = 0; s <= 3; ++s) CHECK(state.g.at(0, 0, s) == 0);
    for (std::uint64_t s = 4; s <= 6; ++s) CHECK(state.g.at(0, 0, s) == 1);
    CHECK(state.g.at(0, 0, 7) == 0);
    for (std::uint64_t s = 8; s <= 12; ++s) CHECK(state.g.at(0, 0, s) == 1);

    CHECK(verify_permitting(state, c).ok);
    CHECK(verify_nonlow_success_bounds(state, lib).ok);
    CHECK(verify_g_semantics(state).ok);
    const HalfDensityReport half = verify_half_density(state, 0, 0);
    std::vector<std::uint64_t> expected_exceptions;
    for (std::size_t j = 0; j < second.elements.size(); j += 2)
        expected_exceptions.push_back(second.elements[j]);
    CHECK(half.exception_pairs == expected_exceptions);
}

TEST_CASE("nonlow run: a change below the use cancels the interval") {
    const Enumeration c = Enumeration::from_stage_adds(14, {{5, {1}}});
    GeneratorLibrary lib;
    lib.add(PartialGenerator::with_stages(
        Generator::all_zeros(),
        [](std::uint64_t) { return std::optional<std::uint64_t>{100}; }));  // too slow
    NonlowOptions opts;
    opts.e_max = 1;
    opts.i_max = 1;
    const StageState state =
        run_nonlow_construction(c, {JumpProbe::at_stage(3, 2)}, lib, 14, opts);

    REQUIRE(state.intervals.size() == 2);
    CHECK(state.intervals[0].status == IntervalStatus::Cancelled);
    // The cancel keeps one element per pair: the even-indexed ones.
    CHECK(state.a.entry_stage(5) == 5);
    CHECK(state.a.entry_stage(9) == 5);
    CHECK(!state.a.entry_stage(7));
    CHECK(!state.a.entry_stage(11));
    // No await phase was ever entered.
    for (std::uint64_t s = 0; s <= 14; ++s) CHECK(state.g.at(0, 0, s) == 0);

    CHECK(verify_permitting(state, c).ok);
    CHECK(verify_g_semantics(state).ok);
    const HalfDensityReport half = verify_half_density(state, 0, 0);
    CHECK(half.exception_pairs ==
          std::vector<std::uint64_t>{state.intervals[1].elements[0],
                                     state.intervals[1].elements[2],
                                     state.intervals[1].elements[4],
                                     state.intervals[1].elements[6]});
}

TEST_CASE("nonlow run: randomized instances pass every post-hoc check") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const std::uint64_t stages = 160;
        const Enumeration c = Enumeration::seeded(seed ^ 0xc0ffee, stages, 300, 1, 2);
        const GeneratorLibrary lib = seeded_partial_library(2, seed * 41, 8);
        std::vector<JumpProbe> probes;
        for (std::size_t i = 0; i < 2; ++i)
            probes.push_back(JumpProbe::seeded(splitmix64(seed + 100 * i), 40, 20, 1, 4));
        NonlowOptions opts;
        opts.e_max = 2;
        opts.i_max = 2;
        const StageState state = run_nonlow_construction(c, probes, lib, stages, opts);

        CHECK(verify_permitting(state, c).ok);
        CHECK(verify_nonlow_success_bounds(state, lib).ok);
        CHECK(verify_g_semantics(state).ok);
        for (std::size_t e = 0; e < 2; ++e)
            for (std::size_t i = 0; i < 2; ++i) {
                const HalfDensityReport half = verify_half_density(state, e, i);
                // Exceptions only in a final, still-restrained interval.
                for (auto even : half.exception_pairs) {
                    bool in_pending = false;
                    for (const auto& rec : state.intervals)
                        if (rec.e == e && rec.i == i &&
                            rec.status == IntervalStatus::Pending && rec.contains(even))
                            in_pending = true;
                    CHECK(in_pending);
                }
            }
    }
}

TEST_CASE("runs reject malformed inputs") {
    GeneratorLibrary lib;
    lib.add(Generator::all_zeros());
    CHECK_THROWS_AS(run_permitting_construction(Enumeration(5), lib, Rat(1, 2), 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_nonlow_construction(Enumeration(20), {}, lib, 20), std::invalid_argument);
}
