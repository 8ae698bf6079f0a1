#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coarse/adversary.hpp"
#include "coarse/density.hpp"
#include "coarse/rng.hpp"

using namespace coarse;

namespace {

GeneratorLibrary seeded_library(std::size_t count, std::uint64_t seed) {
    GeneratorLibrary lib;
    for (std::size_t e = 0; e < count; ++e)
        lib.add(Generator::seeded_random(splitmix64(seed + e)));
    return lib;
}

}  // namespace

TEST_CASE("defeating the all-zeros opponent") {
    GeneratorLibrary lib;
    lib.add(Generator::all_zeros());
    const DefeatResult res = weak_generic_defeat(lib, {4}, 64);
    CHECK(res.z == BitPrefix::ones(64));
    REQUIRE(!res.schedule.targets.empty());
    CHECK(res.schedule.targets.front().opponent == 0);
    CHECK(res.schedule.targets.front().threshold == Rat(1, 4));
    CHECK(res.schedule.targets.front().length == 1);  // agreement 0 < 1/4 already
    CHECK(res.schedule.uncovered.empty());
    CHECK(verify_defeat_schedule(res.z, lib, res.schedule));
}

TEST_CASE("two opponents alternate segments and every certificate re-verifies") {
    GeneratorLibrary lib;
    lib.add(Generator::all_zeros());
    lib.add(Generator::all_ones());
    const DefeatResult res = weak_generic_defeat(lib, {2, 4}, 4096);
    CHECK(res.z.size() == 4096);
    CHECK(res.schedule.uncovered.empty());
    CHECK(verify_defeat_schedule(res.z, lib, res.schedule));

    // Both opponents and both thresholds appear among the certificates.
    for (std::size_t e = 0; e < 2; ++e)
        for (std::int64_t denom : {2, 4}) {
            bool found = false;
            for (const auto& cert : res.schedule.targets)
                found = found || (cert.opponent == e && cert.threshold == Rat(1, denom));
            CHECK(found);
        }

    // Segments tile [0, N).
    std::uint64_t covered = 0;
    for (const auto& seg : res.schedule.segments) {
        CHECK(seg.start == covered);
        covered = seg.end;
    }
    CHECK(covered == 4096);
}

TEST_CASE("tampering breaks schedule verification") {
    GeneratorLibrary lib;
    lib.add(Generator::seeded_random(3));
    DefeatResult res = weak_generic_defeat(lib, {3}, 512);
    REQUIRE(verify_defeat_schedule(res.z, lib, res.schedule));
    res.schedule.targets.front().length += 1;
    const bool still_ok = verify_defeat_schedule(res.z, lib, res.schedule);
    res.schedule.targets.front().length -= 1;
    res.z.flip(0);
    CHECK((!still_ok || !verify_defeat_schedule(res.z, lib, res.schedule)));
}

TEST_CASE("the defeat construction never rewrites emitted bits") {
    const GeneratorLibrary lib = seeded_library(3, 99);
    const DefeatResult small = weak_generic_defeat(lib, {2, 8}, 1024);
    const DefeatResult large = weak_generic_defeat(lib, {2, 8}, 4096);
    CHECK(large.z.first(512) == small.z.first(512));
}

TEST_CASE("per-member agreement estimates dip below the certified thresholds") {
    const GeneratorLibrary lib = seeded_library(4, 12345);
    const DefeatResult res = weak_generic_defeat(lib, {4, 8}, 1 << 14);
    CHECK(res.schedule.uncovered.empty());
    for (const auto& cert : res.schedule.targets) {
        const std::uint64_t tail = std::max<std::uint64_t>(1, cert.length / 2);
        const auto ests = gamma_hat_estimates(res.z.first(cert.length), lib, tail);
        CHECK(ests[cert.opponent].liminf_est < cert.threshold);
    }
}

TEST_CASE("an impossible horizon reports uncovered targets") {
    GeneratorLibrary lib;
    lib.add(Generator::all_zeros());
    lib.add(Generator::all_ones());
    // N = 2 cannot certify four (opponent, threshold) pairs at 1/64.
    const DefeatResult res = weak_generic_defeat(lib, {64}, 2);
    CHECK(!res.schedule.uncovered.empty());
    CHECK(res.z.size() == 2);
    CHECK(verify_defeat_schedule(res.z, lib, res.schedule));
}

TEST_CASE("extremal composition") {
    const BitPrefix a1 = evaluate_prefix(Generator::evens(), 2048);
    CHECK(extremal_compose(a1, BitPrefix::zeros(2048)) == a1);

    GeneratorLibrary lib = seeded_library(3, 321);
    const DefeatResult defeat = weak_generic_defeat(lib, {4}, 2048);
    const BitPrefix a = extremal_compose(a1, defeat.z);

    // Against omega the agreement is A itself, and the union keeps every
    // prefix density at or above A_1's.
    const BitPrefix omega = BitPrefix::ones(2048);
    const BitPrefix agreement = symagree(a, omega);
    for (std::uint64_t n2 = 1; n2 <= 2048; n2 += 17) {
        CHECK(prefix_density(agreement, n2) == prefix_density(a, n2));
        CHECK(prefix_density(a, n2) >= prefix_density(a1, n2));
    }

    GeneratorLibrary omega_lib;
    omega_lib.add(Generator::all_ones());
    const Rat a1_est = estimate_liminf_limsup(density_profile(a1), 1024).liminf_est;
    CHECK(gamma_hat(a, omega_lib, 1024).value >= a1_est);
}

TEST_CASE("non-extremal build on small libraries") {
    const std::uint64_t n = 1 << 10;

    // Library of all-ones: the S_0 part of A comes out empty.
    GeneratorLibrary ones;
    ones.add(Generator::all_ones());
    const BitPrefix a_ones = non_extremal_build(Rat(1, 2), ones, BitPrefix::zeros(n), n);
    const SliceDecomposition decomp = non_extremal_decomposition(Rat(1, 2), n);
    for (std::uint64_t k = 0; k < n; ++k)
        if (decomp.slice_of(k) == std::optional<std::size_t>{0}) CHECK(a_ones.bit(k) == 0);

    // Library of all-zeros with empty Z: A is exactly the first slice R_1.
    GeneratorLibrary zeros;
    zeros.add(Generator::all_zeros());
    const BitPrefix a_zeros = non_extremal_build(Rat(1, 2), zeros, BitPrefix::zeros(n), n);
    CHECK(a_zeros == evaluate_prefix(Generator::rn(1), n));
}

TEST_CASE("the build agrees with each library member's complement on its slice") {
    const std::uint64_t n = 1 << 12;
    const GeneratorLibrary lib = seeded_library(5, 777);
    Rng rng(778);
    BitPrefix z = BitPrefix::zeros(n);
    for (std::uint64_t i = 0; i < n; ++i) z.set(i, rng.bit());

    for (const Rat r : {Rat(1, 2), Rat(1, 3), Rat(7, 8)}) {
        const BitPrefix a = non_extremal_build(r, lib, z, n);
        const SliceDecomposition decomp = non_extremal_decomposition(r, n);
        for (std::uint64_t k = 0; k < n; ++k) {
            const auto e = decomp.slice_of(k);
            if (!e)
                CHECK(a.bit(k) == z.bit(k));
            else if (*e < lib.size())
                CHECK(a.bit(k) == 1 - lib.total(*e).bit(k));
            else
                CHECK(a.bit(k) == 0);
        }
    }
}

TEST_CASE("witness descriptions certify the slice-union density") {
    const std::uint64_t n = 1 << 12;
    GeneratorLibrary zeros;
    zeros.add(Generator::all_zeros());
    CHECK(evaluate_prefix(witness_q_description(Rat(1, 2), zeros, 0, n), 256) ==
          BitPrefix::zeros(256));
    CHECK(evaluate_prefix(witness_q_description(Rat(1, 2), zeros, 1, n), 512) ==
          evaluate_prefix(Generator::rn(1), 512));
    CHECK_THROWS_AS(witness_q_description(Rat(1, 2), zeros, 2, n), std::invalid_argument);

    const GeneratorLibrary lib = seeded_library(6, 4242);
    Rng rng(4243);
    BitPrefix z = BitPrefix::zeros(n);
    for (std::uint64_t i = 0; i < n; ++i) z.set(i, rng.bit());
    const Rat r(1, 2);
    const BitPrefix a = non_extremal_build(r, lib, z, n);
    const SliceDecomposition decomp = non_extremal_decomposition(r, n);

    for (std::size_t count = 1; count <= 4; ++count) {
        const Generator witness = witness_q_description(r, lib, count, n);
        const BitPrefix w = evaluate_prefix(witness, n);
        // Agreement contains the slice union.
        for (std::uint64_t k = 0; k < n; ++k) {
            const auto e = decomp.slice_of(k);
            if (e && *e < count) CHECK(a.bit(k) == w.bit(k));
        }
        const Rat est =
            estimate_liminf_limsup(density_profile(symagree(a, w)), n / 2).liminf_est;
        CHECK(est >= decomp.union_density(count) - Rat(1, 32));
    }
}
