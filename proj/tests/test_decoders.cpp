#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coarse/codings.hpp"
#include "coarse/decoders.hpp"
#include "coarse/rng.hpp"

#include <set>

using namespace coarse;

namespace {

BitPrefix random_prefix(Rng& rng, std::uint64_t len) {
    BitPrefix p = BitPrefix::zeros(len);
    for (std::uint64_t i = 0; i < len; ++i) p.set(i, rng.bit());
    return p;
}

// Flip `flips` distinct positions of block I_n = [n!, (n+1)!).
void corrupt_block(BitPrefix& c, unsigned n, std::uint64_t flips, Rng& rng) {
    const std::uint64_t lo = factorial(n), hi = factorial(n + 1);
    std::set<std::uint64_t> seen;
    while (seen.size() < flips) {
        const std::uint64_t pos = lo + rng.below(hi - lo);
        if (seen.insert(pos).second) c.flip(pos);
    }
}

}  // namespace

TEST_CASE("majority vote over factorial blocks") {
    const BitPrefix code = interval_code(BitPrefix::from_string("0010"), 24);
    CHECK(majority_vote_decode(code, 2) == 1);

    BitPrefix dented = code;
    dented.flip(3);  // one of the four bits of I_2
    CHECK(majority_vote_decode(dented, 2) == 1);

    // Exactly half of I_3 = [6, 24) is even; the majority is strict.
    const BitPrefix evens = evaluate_prefix(Generator::evens(), 24);
    CHECK(majority_vote_decode(evens, 3) == 0);

    CHECK_THROWS_AS(majority_vote_decode(code, 4), std::invalid_argument);
    CHECK_THROWS_AS(majority_vote_decode(code, 0), std::invalid_argument);
}

TEST_CASE("decode_prefix recovers every short set exactly") {
    for (unsigned len = 2; len <= 6; ++len) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
            BitPrefix a = BitPrefix::zeros(len);
            for (unsigned b = 0; b < len; ++b) a.set(b, (mask >> b) & 1);
            const unsigned n_max = len - 1;
            const BitPrefix code = interval_code(a, factorial(n_max + 1));
            const BitPrefix decoded = decode_prefix(code, n_max);
            CHECK(decoded.bit(0) == 0);
            for (unsigned n = 1; n <= n_max; ++n) CHECK(decoded.bit(n) == a.bit(n));
        }
    }
    CHECK(decode_prefix(BitPrefix::zeros(120), 4) == BitPrefix::zeros(5));
}

TEST_CASE("decoding survives sub-quarter corruption per block") {
    Rng rng(101);
    for (int round = 0; round < 25; ++round) {
        const BitPrefix a = random_prefix(rng, 6);
        BitPrefix code = interval_code(a, 720);
        for (unsigned n = 1; n <= 5; ++n) {
            const std::uint64_t block = factorial(n + 1) - factorial(n);
            corrupt_block(code, n, rng.below(block / 4 + 1), rng);
        }
        const BitPrefix decoded = decode_prefix(code, 5);
        for (unsigned n = 1; n <= 5; ++n) CHECK(decoded.bit(n) == a.bit(n));
    }
}

TEST_CASE("a failed block pins the agreement density down") {
    // If block n decodes wrongly, at least half its positions disagree, so
    // rho_{(n+1)!}(agreement) <= (1 + 1/(n+1)) / 2.
    Rng rng(103);
    for (unsigned n = 2; n <= 5; ++n) {
        for (int round = 0; round < 10; ++round) {
            const BitPrefix a = random_prefix(rng, n + 1);
            const std::uint64_t m = factorial(n + 1);
            const BitPrefix clean = interval_code(a, m);
            BitPrefix corrupted = clean;
            const std::uint64_t block = factorial(n + 1) - factorial(n);
            corrupt_block(corrupted, n, block / 2 + 1, rng);
            REQUIRE(majority_vote_decode(corrupted, n) != a.bit(n));
            const Rat agreement = prefix_density(symagree(corrupted, clean), m);
            CHECK(agreement <=
                  (Rat(1) + Rat(1, static_cast<std::int64_t>(n) + 1)) / 2);
        }
    }
}

TEST_CASE("partial_to_coarse totalizes a budgeted rule") {
    CHECK(evaluate_prefix(partial_to_coarse(PartialGenerator::never(), 50, 16), 64) ==
          BitPrefix::zeros(64));

    // phi answers A on the evens and diverges on the odds.
    const Generator a = Generator::seeded_random(7);
    const PartialGenerator phi = PartialGenerator::with_stages(
        a, [](std::uint64_t i) {
            return i % 2 == 0 ? std::optional<std::uint64_t>{0} : std::optional<std::uint64_t>{};
        });
    const Generator c1 = partial_to_coarse(phi, 10, 32);
    for (std::uint64_t i = 0; i < 256; i += 2) CHECK(c1.bit(i) == a.bit(i));

    // Never disagrees with phi on phi's budgeted domain; the agreement
    // estimate with A dominates the domain estimate on the same window.
    const std::uint64_t n = 512, tail = 256;
    const BitPrefix domain = budgeted_domain_prefix(phi, 10, n);
    const BitPrefix out = evaluate_prefix(c1, n);
    const BitPrefix truth = evaluate_prefix(a, n);
    for (std::uint64_t i = 0; i < n; ++i)
        if (domain.bit(i)) CHECK(out.bit(i) == truth.bit(i));
    const Rat agree_est =
        estimate_liminf_limsup(density_profile(symagree(out, truth)), tail).liminf_est;
    const Rat domain_est = estimate_liminf_limsup(density_profile(domain), tail).liminf_est;
    CHECK(agree_est >= domain_est);
}

TEST_CASE("r-description reports") {
    Rng rng(107);
    const BitPrefix a = random_prefix(rng, 128);
    const DescriptionReport self = check_r_description(a, a, Rat(1), 64);
    CHECK(self.verdict_at_r);
    CHECK(self.estimate.liminf_est == Rat(1));

    const DescriptionReport opposite = check_r_description(a, complement(a), Rat(1, 10), 64);
    CHECK(!opposite.verdict_at_r);
    CHECK(opposite.estimate.limsup_est == Rat(0));

    CHECK_THROWS_AS(check_r_description(a, BitPrefix::zeros(4), Rat(1, 2), 2),
                    std::invalid_argument);
}

TEST_CASE("the factorial coding is a (1/2 - eps)-description via the evens") {
    const Generator a = Generator::seeded_random(113);
    for (unsigned n = 3; n <= 6; ++n) {
        const std::uint64_t horizon = factorial(n + 1);
        const BitPrefix code = interval_code(a, horizon);
        const BitPrefix evens = evaluate_prefix(Generator::evens(), horizon);
        const Rat r = Rat(1, 2) - Rat(1, static_cast<std::int64_t>(n) + 1);
        const DescriptionReport report = check_r_description(code, evens, r, factorial(n));
        CHECK(report.verdict_at_r);
    }
}
