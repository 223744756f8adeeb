#pragma once

#include "obp/errors.hpp"

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <string>
#include <string_view>

namespace obp {

/// Exact nonnegative-friendly rational used for epsilon and augmentation factors.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Rational() = default;
    constexpr Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalize(); }

    constexpr void normalize()
    {
        if (den == 0) {
            throw InstanceError("rational with zero denominator");
        }
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    /// floor(this * x), exact.
    constexpr std::int64_t floor_mul(std::int64_t x) const
    {
        const std::int64_t p = num * x;
        std::int64_t q = p / den;
        if ((p % den != 0) && ((p < 0) != (den < 0))) {
            --q;
        }
        return q;
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    /// Shortest decimal rendering that parses back to the same value when one exists.
    std::string to_string() const
    {
        for (int digits = 1; digits <= 12; ++digits) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.*g", digits, to_double());
            if (parse(buf) == *this) {
                return buf;
            }
        }
        return std::to_string(num) + "/" + std::to_string(den);
    }

    /// Accepts "3", "0.125", "1/8".
    static Rational parse(std::string_view text)
    {
        if (text.empty()) {
            throw ConfigError("empty rational");
        }
        auto parse_int = [&](std::string_view s) {
            if (s.empty()) {
                throw ConfigError("malformed rational '" + std::string(text) + "'");
            }
            std::int64_t v = 0;
            bool neg = false;
            std::size_t i = 0;
            if (s[0] == '-') {
                neg = true;
                i = 1;
                if (s.size() == 1) {
                    throw ConfigError("malformed rational '" + std::string(text) + "'");
                }
            }
            for (; i < s.size(); ++i) {
                if (s[i] < '0' || s[i] > '9') {
                    throw ConfigError("malformed rational '" + std::string(text) + "'");
                }
                v = v * 10 + (s[i] - '0');
            }
            return neg ? -v : v;
        };
        if (auto slash = text.find('/'); slash != std::string_view::npos) {
            const auto d = parse_int(text.substr(slash + 1));
            if (d == 0) {
                throw ConfigError("zero denominator in '" + std::string(text) + "'");
            }
            return Rational(parse_int(text.substr(0, slash)), d);
        }
        if (auto dot = text.find('.'); dot != std::string_view::npos) {
            const auto frac = text.substr(dot + 1);
            if (frac.size() > 15) {
                throw ConfigError("too many decimals in '" + std::string(text) + "'");
            }
            std::int64_t scale = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) {
                scale *= 10;
            }
            const auto whole_text = text.substr(0, dot);
            const bool neg = !whole_text.empty() && whole_text[0] == '-';
            const std::int64_t whole =
                whole_text.empty() || whole_text == "-" ? 0 : parse_int(whole_text);
            const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
            const std::int64_t mag = (whole < 0 ? -whole : whole) * scale + f;
            return Rational(neg ? -mag : mag, scale);
        }
        return Rational(parse_int(text));
    }

    friend constexpr Rational operator+(Rational a, Rational b)
    {
        return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend constexpr Rational operator-(Rational a, Rational b)
    {
        return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend constexpr Rational operator*(Rational a, Rational b)
    {
        return Rational(a.num * b.num, a.den * b.den);
    }
    friend constexpr bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
    friend constexpr std::strong_ordering operator<=>(Rational a, Rational b)
    {
        return a.num * b.den <=> b.num * a.den;
    }
};

} // namespace obp
