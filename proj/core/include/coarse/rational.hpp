#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace coarse {

/// Exact rational arithmetic for all density values. Counts are bounded by
/// the prefix cap (2^22), so 64-bit components never overflow here.
using Rat = boost::rational<std::int64_t>;

inline Rat rat(std::int64_t num, std::int64_t den = 1) { return Rat(num, den); }

/// "p/q" with q always present and positive, e.g. "0/1", "17/33".
inline std::string to_string(const Rat& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Accepts "p" or "p/q".
inline Rat parse_rat(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rat(std::stoll(text));
        const std::int64_t num = std::stoll(text.substr(0, slash));
        const std::int64_t den = std::stoll(text.substr(slash + 1));
        return Rat(num, den);
    } catch (const boost::bad_rational&) {
        throw std::invalid_argument("rational with zero denominator: " + text);
    } catch (const std::logic_error&) {
        throw std::invalid_argument("not a rational: " + text);
    }
}

inline double to_double(const Rat& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// 2^-e as an exact rational (e may be negative, giving a power of two).
inline Rat pow2(int e) {
    if (e >= 0) {
        if (e > 62) throw std::invalid_argument("pow2 exponent too large");
        return Rat(std::int64_t{1} << e);
    }
    if (e < -62) throw std::invalid_argument("pow2 exponent too small");
    return Rat(1, std::int64_t{1} << (-e));
}

}  // namespace coarse
