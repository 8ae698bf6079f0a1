#include "coarse/bitseq.hpp"

#include "coarse/rng.hpp"

#include <algorithm>
#include <utility>

namespace coarse {

BitPrefix::BitPrefix(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) {
        if (b > 1) throw std::invalid_argument("BitPrefix: bits must be 0 or 1");
    }
}

BitPrefix BitPrefix::zeros(std::uint64_t n) {
    BitPrefix p;
    p.bits_.assign(n, 0);
    return p;
}

BitPrefix BitPrefix::ones(std::uint64_t n) {
    BitPrefix p;
    p.bits_.assign(n, 1);
    return p;
}

BitPrefix BitPrefix::from_string(const std::string& s) {
    BitPrefix p;
    p.bits_.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("BitPrefix: expected '0'/'1'");
        p.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return p;
}

std::uint64_t BitPrefix::ones_below(std::uint64_t n) const {
    if (n > size()) throw std::invalid_argument("ones_below: n exceeds prefix length");
    std::uint64_t c = 0;
    for (std::uint64_t i = 0; i < n; ++i) c += bits_[i];
    return c;
}

std::uint64_t BitPrefix::ones_in(std::uint64_t lo, std::uint64_t hi) const {
    hi = std::min<std::uint64_t>(hi, size());
    std::uint64_t c = 0;
    for (std::uint64_t i = lo; i < hi; ++i) c += bits_[i];
    return c;
}

BitPrefix BitPrefix::first(std::uint64_t n) const {
    if (n > size()) throw std::invalid_argument("first: n exceeds prefix length");
    BitPrefix p;
    p.bits_.assign(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(n));
    return p;
}

std::string BitPrefix::to_string() const {
    std::string s;
    s.reserve(size());
    for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
    return s;
}

Generator Generator::formula(std::string name, std::function<int(std::uint64_t)> rule) {
    Generator g;
    g.kind_ = GeneratorKind::Formula;
    g.name_ = std::move(name);
    g.rule_ = std::move(rule);
    return g;
}

Generator Generator::eventually_periodic(BitPrefix preamble, BitPrefix period) {
    if (period.empty()) throw std::invalid_argument("eventually_periodic: empty period");
    Generator g;
    g.kind_ = GeneratorKind::EventuallyPeriodic;
    g.name_ = "periodic(" + preamble.to_string() + "|" + period.to_string() + ")";
    g.preamble_ = std::move(preamble);
    g.period_ = std::move(period);
    const auto pre = std::make_shared<BitPrefix>(g.preamble_);
    const auto per = std::make_shared<BitPrefix>(g.period_);
    g.rule_ = [pre, per](std::uint64_t i) {
        if (i < pre->size()) return pre->bit(i);
        return per->bit((i - pre->size()) % per->size());
    };
    return g;
}

Generator Generator::seeded_random(std::uint64_t seed, std::uint64_t bias_num,
                                   std::uint64_t bias_den) {
    if (bias_den == 0 || bias_num > bias_den)
        throw std::invalid_argument("seeded_random: bias must be in [0,1]");
    Generator g;
    g.kind_ = GeneratorKind::SeededRandom;
    g.name_ = "seeded(" + std::to_string(seed) + ")";
    g.seed_ = seed;
    g.bias_num_ = bias_num;
    g.bias_den_ = bias_den;
    g.rule_ = [seed, bias_num, bias_den](std::uint64_t i) {
        const std::uint64_t h = splitmix64(seed ^ (i * 0x9e3779b97f4a7c15ULL + 0x1234567));
        return (h % bias_den) < bias_num ? 1 : 0;
    };
    return g;
}

Generator Generator::table_backed(BitPrefix table) {
    Generator g;
    g.kind_ = GeneratorKind::TableBacked;
    g.name_ = "table[" + std::to_string(table.size()) + "]";
    g.table_ = std::make_shared<const BitPrefix>(std::move(table));
    const auto t = g.table_;
    // 0 beyond the stored table.
    g.rule_ = [t](std::uint64_t i) { return i < t->size() ? t->bit(i) : 0; };
    return g;
}

Generator Generator::all_zeros() {
    return eventually_periodic(BitPrefix(), BitPrefix::from_string("0"));
}

Generator Generator::all_ones() {
    return eventually_periodic(BitPrefix(), BitPrefix::from_string("1"));
}

Generator Generator::evens() {
    return eventually_periodic(BitPrefix(), BitPrefix::from_string("10"));
}

Generator Generator::odds() {
    return eventually_periodic(BitPrefix(), BitPrefix::from_string("01"));
}

Generator Generator::rn(unsigned n) {
    // k ∈ R_n iff k ≡ 2^n (mod 2^{n+1}); one 1 per period of length 2^{n+1}.
    if (n > 20) throw std::invalid_argument("rn: period 2^{n+1} exceeds the prefix cap");
    const std::uint64_t period_len = std::uint64_t{1} << (n + 1);
    BitPrefix period = BitPrefix::zeros(period_len);
    period.set(std::uint64_t{1} << n, 1);
    Generator g = eventually_periodic(BitPrefix(), std::move(period));
    g.name_ = "R_" + std::to_string(n);
    return g;
}

Generator Generator::complement_of(const Generator& g) {
    Generator c;
    if (g.kind_ == GeneratorKind::EventuallyPeriodic) {
        BitPrefix pre = g.preamble_, per = g.period_;
        for (std::uint64_t i = 0; i < pre.size(); ++i) pre.flip(i);
        for (std::uint64_t i = 0; i < per.size(); ++i) per.flip(i);
        c = eventually_periodic(std::move(pre), std::move(per));
    } else {
        auto inner = g.rule_;
        c = formula("", [inner](std::uint64_t i) { return 1 - inner(i); });
        c.kind_ = g.kind_ == GeneratorKind::TableBacked ? GeneratorKind::Formula : g.kind_;
    }
    c.name_ = "not(" + g.name_ + ")";
    return c;
}

PartialGenerator PartialGenerator::total(Generator values) {
    std::string n = "total(" + values.name() + ")";
    return PartialGenerator(std::move(values),
                            [](std::uint64_t) { return std::optional<std::uint64_t>{0}; },
                            std::move(n));
}

PartialGenerator PartialGenerator::never(std::string name) {
    return PartialGenerator(Generator::all_zeros(),
                            [](std::uint64_t) { return std::optional<std::uint64_t>{}; },
                            std::move(name));
}

PartialGenerator PartialGenerator::with_stages(Generator values, StageRule stage_rule,
                                               std::string name) {
    if (name.empty()) name = "budgeted(" + values.name() + ")";
    return PartialGenerator(std::move(values), std::move(stage_rule), std::move(name));
}

PartialGenerator PartialGenerator::seeded(std::uint64_t seed, std::uint64_t max_stage,
                                          std::uint64_t div_num, std::uint64_t div_den) {
    if (div_den == 0 || div_num > div_den)
        throw std::invalid_argument("seeded: divergence fraction must be in [0,1]");
    auto stage = [seed, max_stage, div_num, div_den](std::uint64_t i) {
        const std::uint64_t h = splitmix64(seed ^ (i * 0xda942042e4dd58b5ULL + 99));
        if ((h % div_den) < div_num) return std::optional<std::uint64_t>{};
        return std::optional<std::uint64_t>{splitmix64(h) % (max_stage + 1)};
    };
    return PartialGenerator(Generator::seeded_random(splitmix64(seed) ^ 0xabcdef, 1, 2),
                            std::move(stage), "seeded-partial(" + std::to_string(seed) + ")");
}

std::optional<int> PartialGenerator::evaluate(std::uint64_t i, std::uint64_t budget) const {
    const auto s = stage_(i);
    if (!s || *s > budget) return std::nullopt;
    return values_.bit(i);
}

GeneratorLibrary::GeneratorLibrary(std::vector<Generator> totals) {
    for (auto& g : totals) entries_.emplace_back(std::move(g));
}

bool GeneratorLibrary::is_total(std::size_t e) const {
    return std::holds_alternative<Generator>(entries_.at(e));
}

const Generator& GeneratorLibrary::total(std::size_t e) const {
    const auto& v = entries_.at(e);
    if (const auto* g = std::get_if<Generator>(&v)) return *g;
    throw std::invalid_argument("library entry " + std::to_string(e) + " is not total");
}

PartialGenerator GeneratorLibrary::partial(std::size_t e) const {
    const auto& v = entries_.at(e);
    if (const auto* g = std::get_if<Generator>(&v)) return PartialGenerator::total(*g);
    return std::get<PartialGenerator>(v);
}

BitPrefix evaluate_prefix(const Generator& g, std::uint64_t n, std::uint64_t cap) {
    if (n > cap) throw std::invalid_argument("evaluate_prefix: length exceeds cap");
    BitPrefix p = BitPrefix::zeros(n);
    for (std::uint64_t i = 0; i < n; ++i) p.set(i, g.bit(i));
    return p;
}

BitPrefix pointwise(PointwiseOp op, const BitPrefix& a, const BitPrefix& b) {
    if (op != PointwiseOp::Complement && a.size() != b.size())
        throw std::invalid_argument("pointwise: length mismatch");
    BitPrefix out = BitPrefix::zeros(a.size());
    for (std::uint64_t i = 0; i < a.size(); ++i) {
        const int x = a.bit(i);
        switch (op) {
            case PointwiseOp::Complement: out.set(i, 1 - x); break;
            case PointwiseOp::Union: out.set(i, x | b.bit(i)); break;
            case PointwiseOp::Intersect: out.set(i, x & b.bit(i)); break;
            case PointwiseOp::Symdiff: out.set(i, x ^ b.bit(i)); break;
            case PointwiseOp::Symagree: out.set(i, 1 - (x ^ b.bit(i))); break;
        }
    }
    return out;
}

BitPrefix complement(const BitPrefix& a) { return pointwise(PointwiseOp::Complement, a, a); }
BitPrefix set_union(const BitPrefix& a, const BitPrefix& b) {
    return pointwise(PointwiseOp::Union, a, b);
}
BitPrefix set_intersect(const BitPrefix& a, const BitPrefix& b) {
    return pointwise(PointwiseOp::Intersect, a, b);
}
BitPrefix symdiff(const BitPrefix& a, const BitPrefix& b) {
    return pointwise(PointwiseOp::Symdiff, a, b);
}
BitPrefix symagree(const BitPrefix& a, const BitPrefix& b) {
    return pointwise(PointwiseOp::Symagree, a, b);
}

}  // namespace coarse
