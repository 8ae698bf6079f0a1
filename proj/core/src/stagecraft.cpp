#include "coarse/stagecraft.hpp"

#include "coarse/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace coarse {

Enumeration::Enumeration(std::uint64_t horizon) : horizon_(horizon), added_(horizon + 1) {}

Enumeration Enumeration::from_stage_adds(
    std::uint64_t horizon,
    const std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>>& adds) {
    Enumeration e(horizon);
    for (const auto& [stage, elems] : adds) {
        if (stage > horizon) throw std::invalid_argument("Enumeration: stage beyond horizon");
        for (auto x : elems) e.add(stage, x);
    }
    return e;
}

Enumeration Enumeration::seeded(std::uint64_t seed, std::uint64_t horizon,
                                std::uint64_t element_max, std::uint64_t add_num,
                                std::uint64_t add_den) {
    if (element_max == 0) throw std::invalid_argument("Enumeration::seeded: element_max == 0");
    Enumeration e(horizon);
    Rng rng(seed);
    for (std::uint64_t s = 1; s <= horizon; ++s) {
        if (!rng.chance(add_num, add_den)) continue;
        const std::uint64_t x = rng.below(element_max);
        if (!e.entry_stage_.contains(x)) e.add(s, x);
    }
    return e;
}

const std::vector<std::uint64_t>& Enumeration::added_at(std::uint64_t s) const {
    if (s > horizon_) throw std::invalid_argument("Enumeration: stage beyond horizon");
    return added_[s];
}

bool Enumeration::contains_at(std::uint64_t element, std::uint64_t stage) const {
    const auto it = entry_stage_.find(element);
    return it != entry_stage_.end() && it->second <= stage;
}

std::optional<std::uint64_t> Enumeration::entry_stage(std::uint64_t element) const {
    const auto it = entry_stage_.find(element);
    if (it == entry_stage_.end()) return std::nullopt;
    return it->second;
}

void Enumeration::add(std::uint64_t stage, std::uint64_t element) {
    if (stage > horizon_) throw std::invalid_argument("Enumeration: stage beyond horizon");
    if (entry_stage_.contains(element))
        throw std::invalid_argument("Enumeration: element " + std::to_string(element) +
                                    " added twice (non-monotone input)");
    entry_stage_[element] = stage;
    added_[stage].push_back(element);
}

std::vector<std::uint64_t> Enumeration::final_elements() const {
    std::vector<std::uint64_t> out;
    out.reserve(entry_stage_.size());
    for (const auto& [x, s] : entry_stage_) out.push_back(x);
    return out;
}

BitPrefix Enumeration::final_prefix(std::uint64_t n) const {
    BitPrefix p = BitPrefix::zeros(n);
    for (const auto& [x, s] : entry_stage_)
        if (x < n) p.set(x, 1);
    return p;
}

bool IntervalRecord::contains(std::uint64_t x) const {
    return std::binary_search(elements.begin(), elements.end(), x);
}

void GTable::ensure_row(std::size_t e, std::size_t i, std::uint64_t stages) {
    auto& row = rows_[{e, i}];
    if (row.size() < stages + 1) row.resize(stages + 1, 0);
}

void GTable::set(std::size_t e, std::size_t i, std::uint64_t s, int v) {
    rows_.at({e, i}).at(s) = static_cast<std::uint8_t>(v != 0);
}

int GTable::at(std::size_t e, std::size_t i, std::uint64_t s) const {
    return rows_.at({e, i}).at(s);
}

IntervalPlanner::IntervalPlanner(SliceDecomposition decomp, std::uint64_t scan_cap)
    : decomp_(std::move(decomp)), scan_cap_(scan_cap) {}

bool IntervalPlanner::eligible(std::size_t e, std::uint64_t k) const {
    const auto slice = decomp_.slice_of(k);
    return !slice || *slice == e;  // S_e or the complement of S
}

std::vector<IntervalRecord> IntervalPlanner::choose_intervals(std::size_t e, std::size_t count) {
    std::vector<IntervalRecord> out;
    for (std::size_t c = 0; c < count; ++c) {
        const std::size_t i = next_i_[e];

        // Elements of S_e ∪ S̄ below the frontier, advanced lazily.
        auto& [prior, upto] = prior_[e];
        for (; upto < frontier_; ++upto)
            if (eligible(e, upto)) ++prior;

        // Greedy: collect every eligible position from the frontier until
        // the interval holds an i/(i+1) share of S_e ∪ S̄ below max+1,
        // i.e. |I| >= i * prior. At least one element either way.
        IntervalRecord rec;
        rec.e = e;
        rec.i = i;
        std::uint64_t k = frontier_;
        while (rec.elements.size() < std::max<std::uint64_t>(1, i * prior)) {
            if (k >= scan_cap_)
                throw cap_limited("choose_intervals: scan cap hit for requirement (" +
                                      std::to_string(e) + "," + std::to_string(i) + ")",
                                  scan_cap_);
            if (eligible(e, k)) rec.elements.push_back(k);
            ++k;
        }
        frontier_ = rec.max() + 1;
        next_i_[e] = i + 1;
        out.push_back(std::move(rec));
    }
    return out;
}

void CheckReport::fail(std::string what) {
    ok = false;
    failures.push_back(std::move(what));
}

void CheckReport::merge(const CheckReport& other) {
    ok = ok && other.ok;
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

StageState run_permitting_construction(const Enumeration& b, const GeneratorLibrary& lib,
                                       const Rat& r, std::uint64_t stages, PermitOptions opts) {
    if (b.horizon() < stages)
        throw std::invalid_argument("run_permitting_construction: enumeration shorter than run");
    if (lib.empty()) throw std::invalid_argument("run_permitting_construction: empty library");

    StageState state;
    state.kind = ConstructionKind::Permitting;
    state.stages = stages;
    state.r = r;
    state.expansion_bits = expansion_bits_for(r, opts.scan_cap);
    state.a = Enumeration(stages);

    const SliceDecomposition decomp(binary_expansion_set(r, state.expansion_bits));
    IntervalPlanner planner(decomp, opts.scan_cap);

    std::vector<PartialGenerator> phis;
    for (std::size_t e = 0; e < lib.size(); ++e) phis.push_back(lib.partial(e));

    // Pre-choose intervals in increasing pairing order so sizes stay
    // balanced across requirements; a capped requirement gets no further
    // intervals.
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> slot;  // (e,i) -> record
    {
        std::vector<std::pair<std::size_t, std::size_t>> order;
        for (std::size_t e = 0; e < lib.size(); ++e)
            for (std::size_t i = 0; i < opts.i_max; ++i) order.push_back({e, i});
        std::sort(order.begin(), order.end(), [](const auto& a2, const auto& b2) {
            return cantor_pair(a2.first, a2.second) < cantor_pair(b2.first, b2.second);
        });
        std::set<std::size_t> exhausted;
        for (const auto& [e, i] : order) {
            if (exhausted.contains(e)) continue;
            try {
                auto recs = planner.choose_intervals(e, 1);
                slot[{e, i}] = state.intervals.size();
                state.trace.push_back({0,
                                       "interval-chosen",
                                       static_cast<std::int64_t>(e),
                                       static_cast<std::int64_t>(i),
                                       {state.intervals.size(), recs[0].min(), recs[0].max(),
                                        recs[0].elements.size()}});
                state.intervals.push_back(std::move(recs[0]));
            } catch (const cap_limited&) {
                exhausted.insert(e);
                state.trace.push_back({0, "interval-unavailable", static_cast<std::int64_t>(e),
                                       static_cast<std::int64_t>(i), {}});
            }
        }
    }

    // Largest element of A ∩ S_e so far, for success condition 2.
    std::map<std::size_t, std::uint64_t> max_in_se;

    for (std::uint64_t t = 1; t <= stages; ++t) {
        const std::uint64_t budget = t - 1;  // the paper's stage s+1 consults Φ_{e,s}
        const auto max_in_se_at_stage_start = max_in_se;
        for (const auto& [key, idx] : slot) {
            const auto& [e, i] = key;
            if (e > budget || i > budget) continue;
            IntervalRecord& rec = state.intervals[idx];
            if (rec.status == IntervalStatus::Successful) continue;

            bool defined = true;
            for (auto x : rec.elements)
                if (!phis[e].evaluate(x, budget)) {
                    defined = false;
                    break;
                }
            if (!defined) continue;

            const auto it = max_in_se_at_stage_start.find(e);
            if (it != max_in_se_at_stage_start.end() && rec.min() <= it->second) continue;

            bool permitted = false;
            for (auto y : b.added_at(t))
                if (y <= rec.min()) {
                    permitted = true;
                    break;
                }
            if (!permitted) continue;

            rec.status = IntervalStatus::Successful;
            rec.declared_at = t;
            std::vector<std::uint64_t> data{idx};
            for (auto x : rec.elements) {
                if (*phis[e].evaluate(x, budget) == 0) {
                    state.a.add(t, x);
                    data.push_back(x);
                    const auto slice = decomp.slice_of(x);
                    if (slice && *slice == e) {
                        auto& mx = max_in_se[e];
                        mx = std::max(mx, x);
                    }
                }
            }
            state.trace.push_back({t, "success", static_cast<std::int64_t>(e),
                                   static_cast<std::int64_t>(i), std::move(data)});
        }
    }
    return state;
}

JumpProbe JumpProbe::never() {
    return JumpProbe([](std::uint64_t) { return std::optional<std::uint64_t>{}; });
}

JumpProbe JumpProbe::at_stage(std::uint64_t converge_stage, std::uint64_t use) {
    if (use >= converge_stage)
        throw std::invalid_argument("JumpProbe: use must be below the convergence stage");
    return JumpProbe([converge_stage, use](std::uint64_t s) {
        if (s < converge_stage) return std::optional<std::uint64_t>{};
        return std::optional<std::uint64_t>{use};
    });
}

JumpProbe JumpProbe::seeded(std::uint64_t seed, std::uint64_t max_stage, std::uint64_t max_use,
                            std::uint64_t div_num, std::uint64_t div_den) {
    if (div_den == 0 || div_num > div_den)
        throw std::invalid_argument("JumpProbe::seeded: divergence fraction must be in [0,1]");
    const std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc908ULL);
    if (div_num > 0 && (h % div_den) < div_num) return never();
    const std::uint64_t use = splitmix64(h) % (max_use + 1);
    const std::uint64_t stage = use + 1 + splitmix64(h + 1) % std::max<std::uint64_t>(1, max_stage - use);
    return at_stage(stage, use);
}

std::optional<std::uint64_t> JumpProbe::query(std::uint64_t stage) const { return fn_(stage); }

namespace {

// Elements of R_layer listed in increasing order: r_j = (2j+1) * 2^layer.
struct RLayer {
    unsigned layer;

    bool element_fits(std::uint64_t j, std::uint64_t cap) const {
        if (layer >= 63) return false;
        const std::uint64_t odd = 2 * j + 1;
        return odd <= (cap >> layer);
    }
    std::uint64_t element(std::uint64_t j) const { return (2 * j + 1) << layer; }
    bool is_member(std::uint64_t k) const { return rn_membership(layer, k) == 1; }
    std::uint64_t index_of(std::uint64_t k) const { return ((k >> layer) - 1) / 2; }
    /// Least j with r_j > bound.
    std::uint64_t first_index_above(std::uint64_t bound) const {
        const std::uint64_t q = bound >> layer;  // r_j > bound iff 2j+1 > q
        return q / 2 + (q % 2 == 0 ? 0 : 1);     // 2j+1 > q iff j >= ...
    }
};

struct Module {
    std::size_t e = 0, i = 0;
    unsigned layer = 0;
    enum class Phase { SeekJump, SeekPhi, Await, Dormant } phase = Phase::SeekJump;
    std::optional<std::size_t> interval;  // index into state.intervals
    std::uint64_t use = 0;
    std::uint64_t seek_phi_from = 0;  // the s_1 search starts after the choice stage
    std::uint64_t floor = 0;          // new intervals start above every previous one
};

bool change_below(const Enumeration& c, std::uint64_t bound, std::uint64_t s) {
    for (auto y : c.added_at(s))
        if (y < bound) return true;
    return false;
}

}  // namespace

StageState run_nonlow_construction(const Enumeration& c, const std::vector<JumpProbe>& probes,
                                   const GeneratorLibrary& lib, std::uint64_t stages,
                                   NonlowOptions opts) {
    if (c.horizon() < stages)
        throw std::invalid_argument("run_nonlow_construction: enumeration shorter than run");
    if (lib.size() < opts.e_max)
        throw std::invalid_argument("run_nonlow_construction: library smaller than e_max");
    if (probes.size() < opts.i_max)
        throw std::invalid_argument("run_nonlow_construction: fewer probes than i_max");

    StageState state;
    state.kind = ConstructionKind::Nonlow;
    state.stages = stages;
    state.a = Enumeration(stages);

    std::vector<PartialGenerator> phis;
    for (std::size_t e = 0; e < lib.size(); ++e) phis.push_back(lib.partial(e));

    std::vector<Module> modules;
    for (std::size_t e = 0; e < opts.e_max; ++e)
        for (std::size_t i = 0; i < opts.i_max; ++i) {
            Module m;
            m.e = e;
            m.i = i;
            m.layer = static_cast<unsigned>(cantor_pair(e, i));
            modules.push_back(m);
            state.g.ensure_row(e, i, stages);
        }
    std::sort(modules.begin(), modules.end(),
              [](const Module& a, const Module& b) { return a.layer < b.layer; });
    std::map<unsigned, std::size_t> layer_owner;  // R-layer -> index into modules
    for (std::size_t idx = 0; idx < modules.size(); ++idx)
        layer_owner[modules[idx].layer] = idx;

    auto trace = [&state](std::uint64_t s, std::string action, const Module& m,
                          std::vector<std::uint64_t> data = {}) {
        state.trace.push_back({s, std::move(action), static_cast<std::int64_t>(m.e),
                               static_cast<std::int64_t>(m.i), std::move(data)});
    };

    auto choose_interval = [&](Module& m, std::uint64_t s) -> bool {
        const RLayer rl{m.layer};
        const std::uint64_t lower = std::max(s, m.floor);
        if (!rl.element_fits(0, opts.element_cap)) {
            m.phase = Module::Phase::Dormant;
            trace(s, "interval-cap", m);
            return false;
        }
        std::uint64_t j0 = rl.first_index_above(lower);
        if (j0 % 2 == 1) ++j0;  // intervals start on an even index (whole pairs)
        // Close at the first pair boundary with |I| > (elements below min):
        // then rho_m(I) >= rho_m(R_{e,i})/2 holds strictly at m = max+1,
        // which is what the quarter bound after a success leans on.
        const std::uint64_t pairs = j0 / 2 + 1;
        const std::uint64_t j_last = j0 + 2 * pairs - 1;
        if (!rl.element_fits(j_last, opts.element_cap)) {
            m.phase = Module::Phase::Dormant;
            trace(s, "interval-cap", m);
            return false;
        }
        IntervalRecord rec;
        rec.e = m.e;
        rec.i = m.i;
        rec.chosen_at = s;
        rec.use = m.use;
        for (std::uint64_t j = j0; j <= j_last; ++j) rec.elements.push_back(rl.element(j));
        for (auto x : rec.elements) state.restraints.insert(x);
        m.interval = state.intervals.size();
        m.seek_phi_from = s + 1;
        trace(s, "interval-chosen", m,
              {state.intervals.size(), rec.min(), rec.max(), rec.elements.size()});
        state.intervals.push_back(std::move(rec));
        m.phase = Module::Phase::SeekPhi;
        return true;
    };

    auto release = [&](Module& m, IntervalRecord& rec) {
        for (auto x : rec.elements) state.restraints.erase(x);
        m.floor = rec.max();
        m.interval.reset();
    };

    for (std::uint64_t s = 1; s <= stages; ++s) {
        for (Module& m : modules) {
            // Run the module's transitions until it blocks at this stage.
            bool moving = true;
            while (moving) {
                moving = false;
                switch (m.phase) {
                    case Module::Phase::Dormant:
                        break;
                    case Module::Phase::SeekJump: {
                        const auto use = probes[m.i].query(s);
                        if (!use) break;
                        if (*use >= s)
                            throw std::logic_error(
                                "run_nonlow_construction: probe use must be below its stage");
                        m.use = *use;
                        trace(s, "probe-converged", m, {*use});
                        choose_interval(m, s);
                        break;  // the s_1 search starts next stage
                    }
                    case Module::Phase::SeekPhi: {
                        if (s < m.seek_phi_from) break;
                        IntervalRecord& rec = state.intervals[*m.interval];
                        // A permitting change below the use outranks the
                        // opponent converging at the same stage.
                        if (change_below(c, m.use, s)) {
                            rec.status = IntervalStatus::Cancelled;
                            std::vector<std::uint64_t> data{*m.interval};
                            for (std::size_t idx = 0; idx < rec.elements.size(); idx += 2) {
                                state.a.add(s, rec.elements[idx]);
                                data.push_back(rec.elements[idx]);
                            }
                            release(m, rec);
                            trace(s, "cancel", m, std::move(data));
                            m.phase = Module::Phase::SeekJump;
                            moving = true;  // the interval became useless; restart now
                            break;
                        }
                        bool defined = true;
                        for (auto x : rec.elements)
                            if (!phis[m.e].evaluate(x, s)) {
                                defined = false;
                                break;
                            }
                        if (defined) {
                            trace(s, "phi-verified", m, {*m.interval});
                            m.phase = Module::Phase::Await;  // g reads 1 from this stage
                        }
                        break;
                    }
                    case Module::Phase::Await: {
                        if (!change_below(c, m.use, s)) break;
                        IntervalRecord& rec = state.intervals[*m.interval];
                        rec.status = IntervalStatus::Successful;
                        rec.declared_at = s;
                        std::vector<std::uint64_t> data{*m.interval};
                        std::vector<std::uint64_t> tie_picks;
                        for (std::size_t idx = 0; idx < rec.elements.size(); idx += 2) {
                            const std::uint64_t even = rec.elements[idx];
                            const std::uint64_t odd = rec.elements[idx + 1];
                            const int pe = *phis[m.e].evaluate(even, s);
                            const int po = *phis[m.e].evaluate(odd, s);
                            // Exactly one of the pair enters A, disagreeing
                            // with the opponent somewhere in the pair. When
                            // the opponent holds 1 on both, take the
                            // even-indexed element and log it.
                            const std::uint64_t pick = (pe == 0 || po == 1) ? even : odd;
                            if (pe == 1 && po == 1) tie_picks.push_back(even);
                            state.a.add(s, pick);
                            data.push_back(pick);
                        }
                        release(m, rec);
                        trace(s, "success", m, std::move(data));
                        if (!tie_picks.empty()) trace(s, "tie-pick", m, std::move(tie_picks));
                        m.phase = Module::Phase::SeekJump;
                        moving = true;  // restart the cycle at this stage
                        break;
                    }
                }
            }
        }

        // Alternate-element filling: s itself enters A when it is an
        // even-indexed element of its module's R-layer and no interval of
        // that module ever claimed it.
        if (s >= 1) {
            const unsigned layer = rn_index(s);
            const auto owner = layer_owner.find(layer);
            if (owner != layer_owner.end()) {
                const Module& m = modules[owner->second];
                const RLayer rl{m.layer};
                if (rl.index_of(s) % 2 == 0) {
                    bool claimed = false;
                    for (const auto& rec : state.intervals)
                        if (rec.e == m.e && rec.i == m.i && rec.contains(s)) {
                            claimed = true;
                            break;
                        }
                    if (!claimed) {
                        state.a.add(s, s);
                        trace(s, "fill", m, {s});
                    }
                }
            }
        }

        for (const Module& m : modules)
            state.g.set(m.e, m.i, s, m.phase == Module::Phase::Await ? 1 : 0);
    }
    return state;
}

CheckReport verify_permitting(const StageState& state, const Enumeration& permitter) {
    CheckReport report;
    if (!state.a.added_at(0).empty()) report.fail("A is nonempty at stage 0");
    for (std::uint64_t s = 1; s <= state.stages; ++s) {
        for (auto x : state.a.added_at(s)) {
            bool permitted = state.kind == ConstructionKind::Nonlow && x == s;
            if (!permitted)
                for (auto y : permitter.added_at(s))
                    if (y <= x) {
                        permitted = true;
                        break;
                    }
            if (!permitted)
                report.fail("element " + std::to_string(x) + " entered unpermitted at stage " +
                            std::to_string(s));
        }
    }
    return report;
}

CheckReport verify_interval_conditions(const StageState& state) {
    CheckReport report;
    if (state.kind != ConstructionKind::Permitting) {
        report.fail("interval conditions apply to the permitting construction");
        return report;
    }
    const SliceDecomposition decomp(binary_expansion_set(state.r, state.expansion_bits));

    // (i) containment in S_e ∪ S̄.
    for (const auto& rec : state.intervals)
        for (auto x : rec.elements) {
            const auto slice = decomp.slice_of(x);
            if (slice && *slice != rec.e)
                report.fail("interval (" + std::to_string(rec.e) + "," + std::to_string(rec.i) +
                            ") takes " + std::to_string(x) + " from a foreign slice");
        }

    // (ii) per-requirement ordering in i.
    std::map<std::size_t, std::vector<const IntervalRecord*>> by_e;
    for (const auto& rec : state.intervals) by_e[rec.e].push_back(&rec);
    for (auto& [e, recs] : by_e) {
        std::sort(recs.begin(), recs.end(),
                  [](const IntervalRecord* a, const IntervalRecord* b) { return a->i < b->i; });
        for (std::size_t j = 1; j < recs.size(); ++j)
            if (recs[j]->min() <= recs[j - 1]->max())
                report.fail("intervals for requirement " + std::to_string(e) +
                            " are not increasing in i");
    }

    // (iii) the density share at m = max + 1, exact.
    for (const auto& rec : state.intervals) {
        const std::uint64_t m = rec.max() + 1;
        std::uint64_t t_count = 0;
        for (std::uint64_t k = 0; k < m; ++k) {
            const auto slice = decomp.slice_of(k);
            if (!slice || *slice == rec.e) ++t_count;
        }
        const auto i = static_cast<std::int64_t>(rec.i);
        if (Rat(static_cast<std::int64_t>(rec.elements.size()), static_cast<std::int64_t>(m)) <
            Rat(i, i + 1) * Rat(static_cast<std::int64_t>(t_count), static_cast<std::int64_t>(m)))
            report.fail("interval (" + std::to_string(rec.e) + "," + std::to_string(rec.i) +
                        ") misses the i/(i+1) density share");
    }

    // (iv) pairwise disjointness.
    std::vector<std::uint64_t> all;
    for (const auto& rec : state.intervals)
        all.insert(all.end(), rec.elements.begin(), rec.elements.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
        report.fail("intervals overlap");
    return report;
}

CheckReport verify_success_disagreement(const StageState& state, const GeneratorLibrary& lib) {
    CheckReport report;
    for (const auto& rec : state.intervals) {
        if (rec.status != IntervalStatus::Successful) continue;
        const PartialGenerator phi = lib.partial(rec.e);
        for (auto x : rec.elements) {
            const auto v = phi.evaluate(x, state.stages);
            const int in_a = state.a.entry_stage(x) ? 1 : 0;
            if (!v || *v == in_a) {
                report.fail("successful interval (" + std::to_string(rec.e) + "," +
                            std::to_string(rec.i) + ") does not totally disagree at " +
                            std::to_string(x));
            }
        }
    }
    return report;
}

CheckReport verify_nonlow_success_bounds(const StageState& state, const GeneratorLibrary& lib) {
    CheckReport report;
    for (const auto& rec : state.intervals) {
        if (rec.status != IntervalStatus::Successful) continue;
        const std::uint64_t m = rec.max() + 1;
        const PartialGenerator phi = lib.partial(rec.e);
        std::uint64_t diff = 0;
        for (std::uint64_t x = 0; x < m; ++x) {
            const auto v = phi.evaluate(x, state.stages);
            if (!v) continue;  // only positions where the opponent answers
            const int in_a = state.a.entry_stage(x) ? 1 : 0;
            if (*v != in_a) ++diff;
        }
        const unsigned layer = static_cast<unsigned>(cantor_pair(rec.e, rec.i));
        std::uint64_t r_count = 0;
        const std::uint64_t first = std::uint64_t{1} << layer;
        if (m > first) r_count = (m - first - 1) / (std::uint64_t{1} << (layer + 1)) + 1;
        if (!(4 * diff > r_count))
            report.fail("success on (" + std::to_string(rec.e) + "," + std::to_string(rec.i) +
                        ") misses the quarter bound at m = " + std::to_string(m));
    }
    return report;
}

CheckReport verify_g_semantics(const StageState& state) {
    CheckReport report;
    // Await spans replayed from the event log: [phi-verified, success).
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::uint64_t, std::uint64_t>>>
        spans;
    std::map<std::pair<std::size_t, std::size_t>, std::optional<std::uint64_t>> open;
    for (const auto& ev : state.trace) {
        if (ev.e < 0) continue;
        const std::pair<std::size_t, std::size_t> key{static_cast<std::size_t>(ev.e),
                                                      static_cast<std::size_t>(ev.i)};
        if (ev.action == "phi-verified") {
            open[key] = ev.stage;
        } else if (ev.action == "success" && open.count(key) && open[key]) {
            spans[key].push_back({*open[key], ev.stage});
            open[key].reset();
        }
    }
    for (auto& [key, start] : open)
        if (start) spans[key].push_back({*start, state.stages + 1});

    for (const auto& [key, row] : state.g.rows()) {
        for (std::uint64_t s = 0; s <= state.stages; ++s) {
            bool in_span = false;
            const auto it = spans.find(key);
            if (it != spans.end())
                for (const auto& [lo, hi] : it->second)
                    if (s >= lo && s < hi) in_span = true;
            if ((row[s] != 0) != in_span) {
                report.fail("g(" + std::to_string(key.first) + "," + std::to_string(key.second) +
                            "," + std::to_string(s) + ") disagrees with the replayed phase");
                break;
            }
        }
    }
    return report;
}

Rat HalfDensityReport::fraction() const {
    if (pairs_checked == 0) return Rat(0);
    return Rat(static_cast<std::int64_t>(exactly_one), static_cast<std::int64_t>(pairs_checked));
}

HalfDensityReport verify_half_density(const StageState& state, std::size_t e, std::size_t i) {
    HalfDensityReport report;
    const RLayer rl{static_cast<unsigned>(cantor_pair(e, i))};
    std::vector<const IntervalRecord*> recs;
    std::uint64_t top_interval_max = 0;
    for (const auto& rec : state.intervals)
        if (rec.e == e && rec.i == i) {
            recs.push_back(&rec);
            top_interval_max = std::max(top_interval_max, rec.max());
        }

    for (std::uint64_t k = 0;; ++k) {
        if (!rl.element_fits(2 * k + 1, kPrefixCap)) break;
        const std::uint64_t even = rl.element(2 * k);
        const std::uint64_t odd = rl.element(2 * k + 1);
        if (even > state.stages && even > top_interval_max) break;
        // In scope: the fill reached the pair, or an interval claimed it.
        bool in_interval = false;
        for (const auto* rec : recs)
            if (rec->contains(even)) {
                in_interval = true;
                break;
            }
        if (even > state.stages && !in_interval) continue;
        ++report.pairs_checked;
        const int members = (state.a.entry_stage(even) ? 1 : 0) + (state.a.entry_stage(odd) ? 1 : 0);
        if (members == 1)
            ++report.exactly_one;
        else
            report.exception_pairs.push_back(even);
    }
    return report;
}

}  // namespace coarse
