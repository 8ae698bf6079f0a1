#include "coarse/adversary.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace coarse {

namespace {

struct Target {
    std::size_t opponent;
    std::uint64_t denom;
    std::uint64_t last_certified = 0;
};

}  // namespace

DefeatResult weak_generic_defeat(const GeneratorLibrary& opponents,
                                 const std::vector<std::uint64_t>& threshold_denoms,
                                 std::uint64_t n) {
    if (opponents.empty()) throw std::invalid_argument("weak_generic_defeat: empty library");
    if (threshold_denoms.empty())
        throw std::invalid_argument("weak_generic_defeat: no thresholds");
    for (auto d : threshold_denoms)
        if (d == 0) throw std::invalid_argument("weak_generic_defeat: threshold 1/0");
    if (n == 0 || n > kPrefixCap)
        throw std::invalid_argument("weak_generic_defeat: bad horizon");

    // Round-robin order: increasing n + e, ties by opponent index.
    std::vector<Target> targets;
    for (std::size_t e = 0; e < opponents.size(); ++e)
        for (auto d : threshold_denoms) targets.push_back({e, d});
    std::stable_sort(targets.begin(), targets.end(), [](const Target& a, const Target& b) {
        if (a.denom + a.opponent != b.denom + b.opponent)
            return a.denom + a.opponent < b.denom + b.opponent;
        return a.opponent < b.opponent;
    });

    std::vector<BitPrefix> opp;
    opp.reserve(opponents.size());
    for (std::size_t e = 0; e < opponents.size(); ++e)
        opp.push_back(evaluate_prefix(opponents.total(e), n));

    DefeatResult result;
    BitPrefix& z = result.z;
    std::vector<std::uint64_t> agree(opponents.size(), 0);

    auto append_from = [&](std::size_t e, std::uint64_t upto) {
        const std::uint64_t start = z.size();
        while (z.size() < upto) {
            const std::uint64_t pos = z.size();
            z.push_back(1 - opp[e].bit(pos));
            for (std::size_t f = 0; f < opp.size(); ++f)
                agree[f] += (z.bit(pos) == opp[f].bit(pos)) ? 1 : 0;
        }
        if (upto > start) result.schedule.segments.push_back({start, upto, e});
    };

    bool first_round = true;
    for (;;) {
        bool progressed = false;
        for (auto& t : targets) {
            // Certify at the least length exceeding n * agreements, the
            // prefix so far, and a doubling ladder of witness lengths;
            // appended complement bits leave this opponent's agreement
            // count unchanged.
            const std::uint64_t need = std::max({z.size(), t.denom * agree[t.opponent] + 1,
                                                 2 * t.last_certified, std::uint64_t{1}});
            if (need > n) {
                if (first_round) result.schedule.uncovered.push_back({t.opponent, t.denom});
                continue;
            }
            append_from(t.opponent, need);
            result.schedule.targets.push_back(
                {t.opponent, Rat(1, static_cast<std::int64_t>(t.denom)), need});
            t.last_certified = need;
            progressed = true;
        }
        first_round = false;
        if (!progressed) break;
    }

    // Cover the tail so segments span [0, N).
    if (z.size() < n) append_from(targets.front().opponent, n);
    return result;
}

bool verify_defeat_schedule(const BitPrefix& z, const GeneratorLibrary& opponents,
                            const DefeatSchedule& schedule) {
    std::vector<BitPrefix> opp;
    for (std::size_t e = 0; e < opponents.size(); ++e)
        opp.push_back(evaluate_prefix(opponents.total(e), z.size()));

    std::uint64_t covered = 0;
    for (const auto& seg : schedule.segments) {
        if (seg.start != covered || seg.end <= seg.start || seg.end > z.size()) return false;
        if (seg.opponent >= opp.size()) return false;
        for (std::uint64_t i = seg.start; i < seg.end; ++i)
            if (z.bit(i) != 1 - opp[seg.opponent].bit(i)) return false;
        covered = seg.end;
    }
    if (covered != z.size()) return false;

    for (const auto& cert : schedule.targets) {
        if (cert.opponent >= opp.size() || cert.length < 1 || cert.length > z.size())
            return false;
        std::uint64_t agree = 0;
        for (std::uint64_t i = 0; i < cert.length; ++i)
            agree += (z.bit(i) == opp[cert.opponent].bit(i)) ? 1 : 0;
        if (!(Rat(static_cast<std::int64_t>(agree), static_cast<std::int64_t>(cert.length)) <
              cert.threshold))
            return false;
    }
    return true;
}

BitPrefix extremal_compose(const BitPrefix& a1, const BitPrefix& z) {
    return set_union(a1, z);
}

SliceDecomposition non_extremal_decomposition(const Rat& r, std::uint64_t n) {
    return SliceDecomposition(binary_expansion_set(r, expansion_bits_for(r, n)));
}

BitPrefix non_extremal_build(const Rat& r, const GeneratorLibrary& lib, const BitPrefix& z,
                             std::uint64_t n) {
    if (z.size() < n) throw std::invalid_argument("non_extremal_build: z shorter than horizon");
    const SliceDecomposition decomp = non_extremal_decomposition(r, n);
    std::vector<BitPrefix> members;
    members.reserve(lib.size());
    for (std::size_t e = 0; e < lib.size(); ++e)
        members.push_back(evaluate_prefix(lib.total(e), n));

    BitPrefix a = BitPrefix::zeros(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        const auto e = decomp.slice_of(k);
        if (!e) {
            a.set(k, z.bit(k));  // S̄ ∩ Z
        } else if (*e < lib.size()) {
            a.set(k, 1 - members[*e].bit(k));  // S_e ∩ C̄_e
        }
        // Slices past the library contribute nothing.
    }
    return a;
}

Generator witness_q_description(const Rat& r, const GeneratorLibrary& lib, std::size_t n,
                                std::uint64_t horizon) {
    if (n > lib.size())
        throw std::invalid_argument("witness_q_description: n exceeds library size");
    const SliceDecomposition decomp = non_extremal_decomposition(r, horizon);
    std::vector<unsigned> layers(decomp.layers().begin(),
                                 decomp.layers().begin() +
                                     static_cast<std::ptrdiff_t>(std::min(n, decomp.slice_count())));
    std::vector<Generator> members;
    members.reserve(layers.size());
    for (std::size_t e = 0; e < layers.size(); ++e) members.push_back(lib.total(e));
    return Generator::formula(
        "witness(" + std::to_string(n) + ")", [layers, members](std::uint64_t k) {
            if (k == 0) return 0;
            const unsigned layer = rn_index(k);
            const auto it = std::lower_bound(layers.begin(), layers.end(), layer);
            if (it == layers.end() || *it != layer) return 0;
            const auto e = static_cast<std::size_t>(it - layers.begin());
            return 1 - members[e].bit(k);
        });
}

}  // namespace coarse
