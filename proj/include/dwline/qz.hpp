#pragma once

// Exact arithmetic in Q/Z. Every U(1) value in the library is stored additively
// as a reduced fraction p/q with 0 <= p < q.

#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "dwline/error.hpp"

namespace dwline {

using Integer = boost::multiprecision::cpp_int;

class QZ {
public:
    constexpr QZ() = default;

    /// p/q reduced mod 1. q must be nonzero; negative values wrap.
    QZ(std::int64_t p, std::int64_t q) { assign(p, q); }

    static QZ zero() { return {}; }

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }
    bool is_zero() const { return num_ == 0; }

    QZ operator-() const { return num_ == 0 ? *this : QZ(den_ - num_, den_); }

    QZ& operator+=(const QZ& o) {
        const std::int64_t g = std::gcd(den_, o.den_);
        const __int128 lcm = static_cast<__int128>(den_ / g) * o.den_;
        const __int128 p = static_cast<__int128>(num_) * (lcm / den_) + static_cast<__int128>(o.num_) * (lcm / o.den_);
        assign128(p, lcm);
        return *this;
    }
    QZ& operator-=(const QZ& o) { return *this += -o; }

    friend QZ operator+(QZ a, const QZ& b) { return a += b; }
    friend QZ operator-(QZ a, const QZ& b) { return a -= b; }

    /// k * (p/q).
    QZ scaled(std::int64_t k) const {
        const std::int64_t r = ((k % den_) + den_) % den_;
        QZ out;
        out.assign128(static_cast<__int128>(r) * num_, den_);
        return out;
    }
    QZ scaled(const Integer& k) const {
        Integer r = k % den_;
        if (r < 0) r += den_;
        return scaled(static_cast<std::int64_t>(r));
    }
    friend QZ operator*(std::int64_t k, const QZ& a) { return a.scaled(k); }

    /// The canonical solution y of s*y = *this, namely p/(s*q) reduced. s != 0.
    QZ divided(std::int64_t s) const {
        if (s == 0) throw InvalidInput("QZ: division by zero");
        QZ out;
        const __int128 q = static_cast<__int128>(den_) * (s < 0 ? -s : s);
        out.assign128(s < 0 ? -static_cast<__int128>(num_) : static_cast<__int128>(num_), q);
        return out;
    }
    QZ divided(const Integer& s) const {
        if (s > INT64_MAX || s < -INT64_MAX) throw InvalidInput("QZ: divisor out of range");
        return divided(static_cast<std::int64_t>(s));
    }

    /// Canonical half: p/(2q).
    QZ halved() const { return divided(2); }

    friend bool operator==(const QZ&, const QZ&) = default;
    friend auto operator<=>(const QZ& a, const QZ& b) {
        return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
    }

    /// "p/q", with zero printed as "0".
    std::string str() const {
        if (num_ == 0) return "0";
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Parses "p/q", "p", or "-p/q".
    static QZ parse(std::string_view text);

private:
    void assign(std::int64_t p, std::int64_t q) { assign128(p, q); }

    void assign128(__int128 p, __int128 q) {
        if (q == 0) throw InvalidInput("QZ: zero denominator");
        if (q < 0) {
            p = -p;
            q = -q;
        }
        p %= q;
        if (p < 0) p += q;
        __int128 a = p, b = q;
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        const __int128 g = a == 0 ? q : a;
        p /= g;
        q /= g;
        if (q > INT64_MAX) throw InvalidInput("QZ: denominator overflow");
        num_ = static_cast<std::int64_t>(p);
        den_ = static_cast<std::int64_t>(q);
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline QZ QZ::parse(std::string_view text) {
    auto to_int = [&](std::string_view s) -> std::int64_t {
        if (s.empty()) throw InvalidInput("QZ: cannot parse '" + std::string(text) + "'");
        std::size_t pos = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(std::string(s), &pos);
        } catch (const std::exception&) {
            throw InvalidInput("QZ: cannot parse '" + std::string(text) + "'");
        }
        if (pos != s.size()) throw InvalidInput("QZ: cannot parse '" + std::string(text) + "'");
        return v;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return QZ(to_int(text), 1);
    return QZ(to_int(text.substr(0, slash)), to_int(text.substr(slash + 1)));
}

inline std::ostream& operator<<(std::ostream& os, const QZ& v) { return os << v.str(); }

}  // namespace dwline

template <>
struct std::hash<dwline::QZ> {
    std::size_t operator()(const dwline::QZ& v) const noexcept {
        return std::hash<std::int64_t>{}(v.numerator()) * 1000003u ^ std::hash<std::int64_t>{}(v.denominator());
    }
};
