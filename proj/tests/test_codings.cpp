#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coarse/codings.hpp"
#include "coarse/density.hpp"
#include "coarse/rng.hpp"

#include <map>

using namespace coarse;

namespace {

BitPrefix random_prefix(Rng& rng, std::uint64_t len) {
    BitPrefix p = BitPrefix::zeros(len);
    for (std::uint64_t i = 0; i < len; ++i) p.set(i, rng.bit());
    return p;
}

}  // namespace

TEST_CASE("rn membership") {
    CHECK(rn_membership(0, 0) == 0);  // 0 is divisible by every power
    CHECK(rn_membership(1, 6) == 1);
    CHECK(rn_membership(2, 8) == 0);
    CHECK(rn_membership(0, 7) == 1);
    CHECK(rn_membership(3, 8) == 1);
}

TEST_CASE("the R_n partition [1, N)") {
    for (std::uint64_t k = 1; k < 4096; ++k) {
        unsigned hits = 0;
        for (unsigned n = 0; n < 13; ++n) hits += rn_membership(n, k);
        CHECK(hits == 1);
        CHECK(rn_membership(rn_index(k), k) == 1);
    }
}

TEST_CASE("the factorial intervals partition [1, N)") {
    unsigned last = 0;
    for (std::uint64_t p = 1; p < 5040; ++p) {
        const unsigned n = factorial_block_of(p);
        CHECK(factorial(n) <= p);
        CHECK(p < factorial(n + 1));
        CHECK(n >= last);  // blocks appear in order
        last = n;
    }
}

TEST_CASE("rn generator prefix density") {
    for (unsigned n = 0; n <= 6; ++n) {
        const BitPrefix p = evaluate_prefix(Generator::rn(n), 1 << 12);
        // Exact at multiples of 2^{n+1}, within 1/N elsewhere.
        const Rat target = pow2(-static_cast<int>(n + 1));
        for (std::uint64_t len = 1; len <= p.size(); len += 37) {
            const Rat rho = prefix_density(p, len);
            if (len % (std::uint64_t{1} << (n + 1)) == 0)
                CHECK(rho == target);
            else
                CHECK(abs(rho - target) <= Rat(1, static_cast<std::int64_t>(len)));
        }
    }
}

TEST_CASE("r_code basics") {
    CHECK(r_code(Generator::all_zeros(), 8) == BitPrefix::zeros(8));
    CHECK(r_code(BitPrefix::from_string("100"), 6).to_string() == "010101");
    CHECK_THROWS_AS(r_code(BitPrefix::from_string("1"), 6), std::invalid_argument);

    // The code of {0..k-1} is ∪_{n<k} R_n, of density 1 - 2^-k at
    // multiples of 2^k.
    for (unsigned k = 1; k <= 6; ++k) {
        BitPrefix a = BitPrefix::zeros(12);
        for (unsigned b = 0; b < k; ++b) a.set(b, 1);
        const BitPrefix code = r_code(a, 1 << 10);
        for (std::uint64_t len = std::uint64_t{1} << k; len <= code.size();
             len += std::uint64_t{1} << k)
            CHECK(prefix_density(code, len) == Rat(1) - pow2(-static_cast<int>(k)));
    }
}

TEST_CASE("flipping one bit of A flips exactly the R_n layer") {
    Rng rng(3);
    const std::uint64_t n = 1 << 9;
    for (int round = 0; round < 10; ++round) {
        BitPrefix a = random_prefix(rng, 10);
        const BitPrefix before = r_code(a, n);
        const unsigned layer = static_cast<unsigned>(rng.below(8));
        a.flip(layer);
        const BitPrefix after = r_code(a, n);
        std::uint64_t flipped = 0;
        for (std::uint64_t k = 0; k < n; ++k) flipped += before.bit(k) != after.bit(k);
        std::uint64_t layer_size = 0;
        for (std::uint64_t k = 1; k < n; ++k) layer_size += rn_membership(layer, k);
        CHECK(flipped == layer_size);
    }
}

TEST_CASE("ck approximant") {
    const BitPrefix empty_a = BitPrefix::from_string("11");
    CHECK(evaluate_prefix(ck_approximant(empty_a, 0), 64) == BitPrefix::zeros(64));
    CHECK(evaluate_prefix(ck_approximant(BitPrefix::from_string("10"), 2), 64) ==
          evaluate_prefix(Generator::rn(0), 64));
    CHECK_THROWS_AS(ck_approximant(BitPrefix::from_string("1"), 2), std::invalid_argument);

    // Agreement with R(A) contains ∪_{n<k} R_n.
    Rng rng(17);
    for (int round = 0; round < 8; ++round) {
        const BitPrefix a = random_prefix(rng, 12);
        const unsigned k = 1 + static_cast<unsigned>(rng.below(6));
        const std::uint64_t n = 1 << 10;
        const BitPrefix code = r_code(a, n);
        const BitPrefix approx = evaluate_prefix(ck_approximant(a, k), n);
        for (std::uint64_t x = 1; x < n; ++x)
            if (rn_index(x) < k) CHECK(approx.bit(x) == code.bit(x));
    }
}

TEST_CASE("interval_code basics") {
    CHECK(interval_code(Generator::all_zeros(), 10) == BitPrefix::zeros(10));
    CHECK(interval_code(BitPrefix::from_string("001"), 6).to_string() == "001111");
    CHECK(interval_code(BitPrefix::from_string("01"), 2).to_string() == "01");
    CHECK_THROWS_AS(interval_code(BitPrefix::from_string("01"), 7), std::invalid_argument);

    // Flipping A(n) flips exactly |I_n ∩ [0, N)| bits of the code.
    BitPrefix a = BitPrefix::from_string("01011");
    const std::uint64_t n = 100;
    const BitPrefix before = interval_code(a, n);
    a.flip(3);
    const BitPrefix after = interval_code(a, n);
    std::uint64_t flipped = 0;
    for (std::uint64_t k = 0; k < n; ++k) flipped += before.bit(k) != after.bit(k);
    CHECK(flipped == std::min<std::uint64_t>(n, factorial(4)) - factorial(3));
}

TEST_CASE("non-terminating binary expansions") {
    CHECK(binary_expansion_set(Rat(1), 4).to_string() == "1111");
    CHECK(binary_expansion_set(Rat(1, 2), 4).to_string() == "0111");
    CHECK(binary_expansion_set(Rat(3, 8), 5).to_string() == "01011");
    CHECK_THROWS_AS(binary_expansion_set(Rat(0), 4), std::invalid_argument);
    CHECK_THROWS_AS(binary_expansion_set(Rat(3, 2), 4), std::invalid_argument);

    // Partial sums approach r from strictly below, within 2^-bits.
    Rng rng(29);
    for (int round = 0; round < 40; ++round) {
        const std::int64_t den = 2 + static_cast<std::int64_t>(rng.below(500));
        const std::int64_t num = 1 + static_cast<std::int64_t>(rng.below(den));
        const Rat r(num, den);
        const BitPrefix b = binary_expansion_set(r, 30);
        Rat sum(0);
        for (std::uint64_t i = 0; i < b.size(); ++i)
            if (b.bit(i)) sum += pow2(-static_cast<int>(i + 1));
        CHECK(sum < r);
        CHECK(r - sum <= pow2(-30));
    }
}

TEST_CASE("slice decomposition of the expansion set") {
    const SliceDecomposition single(BitPrefix::from_string("1000"));
    CHECK(single.slice_count() == 1);
    CHECK(single.layer(0) == 0);
    CHECK(single.s_density() == Rat(1, 2));
    CHECK(evaluate_prefix(single.slice_generator(0), 64) ==
          evaluate_prefix(Generator::rn(0), 64));

    const SliceDecomposition three(BitPrefix::from_string("0111"));
    CHECK(three.slice_count() == 3);
    CHECK(three.s_density() == Rat(7, 16));
    CHECK(*three.slice_of(2) == 0);
    CHECK(*three.slice_of(4) == 1);
    CHECK(!three.slice_of(1));
    CHECK(!three.slice_of(0));

    // For r = 1/2 the slice-union densities climb to 1/2.
    const SliceDecomposition half(binary_expansion_set(Rat(1, 2), 16));
    Rat prev(0);
    for (std::size_t n2 = 1; n2 <= half.slice_count(); ++n2) {
        CHECK(half.union_density(n2) > prev);
        prev = half.union_density(n2);
        CHECK(prev < Rat(1, 2));
        CHECK(prev == Rat(1, 2) - pow2(-static_cast<int>(n2 + 1)));
    }
    CHECK_THROWS_AS(SliceDecomposition(BitPrefix::zeros(5)), std::invalid_argument);
}

TEST_CASE("monotone images") {
    const IncreasingMap dbl = IncreasingMap::affine(2, 0);
    CHECK(monotone_image(dbl, BitPrefix::ones(8), 8) == evaluate_prefix(Generator::evens(), 8));
    CHECK(monotone_image(dbl, BitPrefix::from_string("1010"), 8).to_string() == "10001000");
    CHECK_THROWS_AS(monotone_image(dbl, BitPrefix::from_string("10"), 8), std::invalid_argument);
}

TEST_CASE("the product identity for monotone images") {
    Rng rng(41);
    const std::vector<IncreasingMap> maps = {
        IncreasingMap::affine(2, 0),
        IncreasingMap::affine(3, 0),
        IncreasingMap::affine(2, 1),
    };
    for (const auto& h : maps) {
        for (int round = 0; round < 6; ++round) {
            const std::uint64_t n = 256;
            const BitPrefix x = random_prefix(rng, n);
            const BitPrefix image = monotone_image(h, x, n);
            const BitPrefix range = h.range_prefix(n);
            for (std::uint64_t u = 1; u <= n; ++u) {
                const std::uint64_t gu = h.g(u);
                // Count form first: |h(X) ∩ [0,u)| = |X ∩ [0, g(u))|.
                CHECK(image.ones_below(u) == x.ones_below(gu));
                if (gu >= 1)
                    CHECK(prefix_density(image, u) ==
                          prefix_density(range, u) *
                              prefix_density(x, gu));
            }
        }
    }
}

TEST_CASE("g is finite-one and tracks h") {
    const IncreasingMap h = IncreasingMap::table({0, 3, 4, 9, 10, 11, 20});
    for (std::uint64_t k = 0; k < 7; ++k) CHECK(h.g(h(k)) == k);
    for (std::uint64_t u = 0; u < 20; ++u) CHECK(h.g(u + 1) <= h.g(u) + 1);
    std::map<std::uint64_t, int> hits;
    for (std::uint64_t u = 0; u <= 20; ++u) ++hits[h.g(u)];
    for (const auto& [k, count] : hits) CHECK(count <= 10);  // finite-one on the window
}

TEST_CASE("spectrum transform") {
    const IncreasingMap dbl = IncreasingMap::affine(2, 0);
    const Generator evens = Generator::evens();
    CHECK(spectrum_transform(BitPrefix::ones(8), dbl, evens, 16) == BitPrefix::ones(16));
    CHECK(spectrum_transform(BitPrefix::zeros(8), dbl, evens, 16) ==
          evaluate_prefix(Generator::odds(), 16));
    CHECK_THROWS_AS(spectrum_transform(BitPrefix::ones(8), dbl, Generator::odds(), 16),
                    std::invalid_argument);
}

TEST_CASE("spectrum transform preserves agreement through h") {
    // symagree(transform(C), transform(A)) = h(symagree(C, A)) ∪ ~R,
    // exactly; and the same identity holds for the bare images.
    Rng rng(53);
    const IncreasingMap dbl = IncreasingMap::affine(2, 0);
    const Generator evens = Generator::evens();
    for (int round = 0; round < 12; ++round) {
        const std::uint64_t n = 128;
        const BitPrefix a = random_prefix(rng, n);
        const BitPrefix c = random_prefix(rng, n);
        const BitPrefix expected =
            set_union(monotone_image(dbl, symagree(c, a), 2 * n),
                      complement(evaluate_prefix(evens, 2 * n)));
        CHECK(symagree(spectrum_transform(c, dbl, evens, 2 * n),
                       spectrum_transform(a, dbl, evens, 2 * n)) == expected);
        CHECK(symagree(monotone_image(dbl, c, 2 * n), monotone_image(dbl, a, 2 * n)) == expected);
    }
}
