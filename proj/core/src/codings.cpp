#include "coarse/codings.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace coarse {

int rn_membership(unsigned n, std::uint64_t k) {
    if (k == 0 || n >= 63) return 0;
    return (k % (std::uint64_t{1} << (n + 1))) == (std::uint64_t{1} << n) ? 1 : 0;
}

unsigned rn_index(std::uint64_t k) {
    if (k == 0) throw std::invalid_argument("rn_index: 0 lies in no R_n");
    return static_cast<unsigned>(std::countr_zero(k));
}

namespace {

unsigned max_rn_layer_below(std::uint64_t n) {
    // Largest layer with R_layer ∩ [0, n) nonempty: need 2^layer < n.
    unsigned layer = 0;
    while ((std::uint64_t{1} << (layer + 1)) < n) ++layer;
    return layer;
}

template <typename Membership>
BitPrefix r_code_impl(Membership&& in_a, std::uint64_t n) {
    BitPrefix out = BitPrefix::zeros(n);
    for (std::uint64_t k = 1; k < n; ++k) out.set(k, in_a(rn_index(k)));
    return out;
}

}  // namespace

BitPrefix r_code(const BitPrefix& a, std::uint64_t n) {
    if (n > 1 && a.size() <= max_rn_layer_below(n))
        throw std::invalid_argument("r_code: A-prefix too short to decide all layers below N");
    return r_code_impl([&](unsigned layer) { return layer < a.size() ? a.bit(layer) : 0; }, n);
}

BitPrefix r_code(const Generator& a, std::uint64_t n) {
    return r_code_impl([&](unsigned layer) { return a.bit(layer); }, n);
}

Generator ck_approximant(const BitPrefix& a, unsigned k) {
    if (a.size() < k) throw std::invalid_argument("ck_approximant: prefix shorter than k");
    const BitPrefix head = a.first(k);
    return Generator::formula("C_" + std::to_string(k), [head, k](std::uint64_t x) {
        if (x == 0) return 0;
        const unsigned layer = rn_index(x);
        return layer < k ? head.bit(layer) : 0;
    });
}

std::uint64_t factorial(unsigned n) {
    if (n > 20) throw std::invalid_argument("factorial: overflow beyond 20!");
    std::uint64_t f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

unsigned factorial_block_of(std::uint64_t p) {
    if (p == 0) throw std::invalid_argument("factorial_block_of: position 0 lies in no block");
    unsigned n = 1;
    while (factorial(n + 1) <= p) ++n;
    return n;
}

namespace {

template <typename Membership>
BitPrefix interval_code_impl(Membership&& in_a, std::uint64_t n) {
    BitPrefix out = BitPrefix::zeros(n);
    std::uint64_t p = 1;
    unsigned block = 1;
    while (p < n) {
        const std::uint64_t hi = std::min<std::uint64_t>(factorial(block + 1), n);
        const int bit = in_a(block);
        for (; p < hi; ++p) out.set(p, bit);
        ++block;
    }
    return out;
}

}  // namespace

BitPrefix interval_code(const BitPrefix& a, std::uint64_t n) {
    if (n > 1) {
        const unsigned top = factorial_block_of(n - 1);
        if (a.size() <= top)
            throw std::invalid_argument("interval_code: A-prefix too short for horizon");
    }
    return interval_code_impl([&](unsigned b) { return b < a.size() ? a.bit(b) : 0; }, n);
}

BitPrefix interval_code(const Generator& a, std::uint64_t n) {
    return interval_code_impl([&](unsigned b) { return a.bit(b); }, n);
}

BitPrefix binary_expansion_set(const Rat& r, std::uint64_t bits) {
    if (r <= Rat(0) || r > Rat(1))
        throw std::invalid_argument("binary_expansion_set: need r in (0, 1]");
    BitPrefix out = BitPrefix::zeros(bits);
    // Invariant x ∈ (0, 1]: emitting 1 only when 2x > 1 forces the
    // non-terminating form (dyadic rationals drift to the all-ones tail).
    Rat x = r;
    for (std::uint64_t i = 0; i < bits; ++i) {
        x *= 2;
        if (x > Rat(1)) {
            out.set(i, 1);
            x -= 1;
        }
    }
    return out;
}

SliceDecomposition::SliceDecomposition(const BitPrefix& b) {
    for (std::uint64_t i = 0; i < b.size(); ++i)
        if (b.bit(i)) c_.push_back(static_cast<unsigned>(i));
    if (c_.empty()) throw std::invalid_argument("slice_decomposition: empty B-prefix");
}

std::optional<std::size_t> SliceDecomposition::slice_of(std::uint64_t k) const {
    if (k == 0) return std::nullopt;
    const unsigned layer = rn_index(k);
    const auto it = std::lower_bound(c_.begin(), c_.end(), layer);
    if (it == c_.end() || *it != layer) return std::nullopt;
    return static_cast<std::size_t>(it - c_.begin());
}

Generator SliceDecomposition::slice_generator(std::size_t e) const {
    return Generator::rn(layer(e));
}

Rat SliceDecomposition::union_density(std::size_t n) const {
    if (n > c_.size()) throw std::invalid_argument("union_density: slice index out of range");
    Rat sum(0);
    for (std::size_t e = 0; e < n; ++e) sum += pow2(-static_cast<int>(c_[e] + 1));
    return sum;
}

std::uint64_t expansion_bits_for(const Rat& r, std::uint64_t horizon) {
    if (r <= Rat(0) || r > Rat(1))
        throw std::invalid_argument("expansion_bits_for: need r in (0, 1]");
    std::uint64_t bits = std::bit_width(horizon) + 1;
    for (;;) {
        const BitPrefix b = binary_expansion_set(r, bits);
        if (b.ones_below(b.size()) > 0) return bits;
        if (bits >= 62)
            throw std::invalid_argument("expansion_bits_for: r too small for desk scale");
        bits = std::min<std::uint64_t>(62, bits * 2);
    }
}

IncreasingMap IncreasingMap::affine(std::uint64_t a, std::uint64_t b) {
    if (a < 1) throw std::invalid_argument("IncreasingMap::affine: need a >= 1");
    IncreasingMap h;
    h.a_ = a;
    h.b_ = b;
    return h;
}

IncreasingMap IncreasingMap::table(std::vector<std::uint64_t> values) {
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] <= values[i - 1])
            throw std::invalid_argument("IncreasingMap::table: not strictly increasing");
    IncreasingMap h;
    h.table_ = std::move(values);
    return h;
}

std::uint64_t IncreasingMap::operator()(std::uint64_t k) const {
    if (is_affine()) return a_ * k + b_;
    if (k >= table_.size())
        throw std::invalid_argument("IncreasingMap: index beyond the table");
    return table_[k];
}

std::uint64_t IncreasingMap::g(std::uint64_t u) const {
    if (is_affine()) {
        if (u <= b_) return 0;
        return (u - b_ + a_ - 1) / a_;  // least k with a*k + b >= u
    }
    const auto it = std::lower_bound(table_.begin(), table_.end(), u);
    if (it == table_.end())
        throw std::invalid_argument("IncreasingMap::g: u beyond the table range");
    return static_cast<std::uint64_t>(it - table_.begin());
}

BitPrefix IncreasingMap::range_prefix(std::uint64_t n) const {
    BitPrefix out = BitPrefix::zeros(n);
    for (std::uint64_t k = 0;; ++k) {
        if (!is_affine() && k >= table_.size()) {
            if (table_.empty() || table_.back() + 1 < n)
                throw std::invalid_argument("IncreasingMap: table does not cover [0, n)");
            break;
        }
        const std::uint64_t v = (*this)(k);
        if (v >= n) break;
        out.set(v, 1);
    }
    return out;
}

BitPrefix monotone_image(const IncreasingMap& h, const BitPrefix& x, std::uint64_t n) {
    BitPrefix out = BitPrefix::zeros(n);
    for (std::uint64_t k = 0;; ++k) {
        const std::uint64_t u = h(k);
        if (u >= n) break;
        if (k >= x.size())
            throw std::invalid_argument("monotone_image: x too short to cover [0, n)");
        out.set(u, x.bit(k));
    }
    return out;
}

BitPrefix spectrum_transform(const BitPrefix& c, const IncreasingMap& h, const Generator& r,
                             std::uint64_t n) {
    const BitPrefix range = h.range_prefix(n);
    for (std::uint64_t u = 0; u < n; ++u)
        if (range.bit(u) != r.bit(u))
            throw std::invalid_argument("spectrum_transform: range(h) and R disagree on prefix");
    BitPrefix out = complement(range);  // complement(R) part
    for (std::uint64_t k = 0;; ++k) {
        const std::uint64_t u = h(k);
        if (u >= n) break;
        if (k >= c.size())
            throw std::invalid_argument("spectrum_transform: C too short to cover [0, n)");
        if (c.bit(k)) out.set(u, 1);
    }
    return out;
}

}  // namespace coarse
