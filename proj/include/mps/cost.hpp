#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mps {

// All weights are scaled 64-bit integers, strictly positive.
using Weight = long long;

/// Non-negative extended cost: a finite scaled-integer value or infinity.
/// Infinity absorbs addition and compares greater than every finite value.
struct Cost {
    static constexpr long long kInf = std::numeric_limits<long long>::max();

    long long value = 0;

    constexpr Cost() = default;
    constexpr Cost(long long v) : value(v) {}

    static constexpr Cost infinity() { return Cost(kInf); }
    constexpr bool is_infinite() const { return value == kInf; }

    friend constexpr Cost operator+(Cost a, Cost b) {
        if (a.is_infinite() || b.is_infinite()) return infinity();
        return Cost(a.value + b.value);
    }
    friend constexpr bool operator==(Cost a, Cost b) { return a.value == b.value; }
    friend constexpr bool operator!=(Cost a, Cost b) { return a.value != b.value; }
    friend constexpr bool operator<(Cost a, Cost b) { return a.value < b.value; }
    friend constexpr bool operator<=(Cost a, Cost b) { return a.value <= b.value; }
    friend constexpr bool operator>(Cost a, Cost b) { return a.value > b.value; }
    friend constexpr bool operator>=(Cost a, Cost b) { return a.value >= b.value; }

    std::string str() const { return is_infinite() ? "inf" : std::to_string(value); }
    friend std::ostream& operator<<(std::ostream& os, Cost c) { return os << c.str(); }
};

/// Exact non-negative rational, used for stretch factors. Comparisons go
/// through 128-bit products so no reduction or floating point is involved.
struct Rational {
    long long num = 0;
    long long den = 1;

    constexpr Rational() = default;
    constexpr Rational(long long n) : num(n), den(1) {}
    constexpr Rational(long long n, long long d) : num(n), den(d) {}

    double approx() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(Rational a, Rational b) {
        return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<(Rational a, Rational b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(Rational a, Rational b) { return a < b || a == b; }
    friend bool operator>(Rational a, Rational b) { return b < a; }
    friend bool operator>=(Rational a, Rational b) { return b <= a; }

    // Parses "18", "17.9", "3/2".
    static Rational parse(const std::string& text) {
        if (text.empty()) throw std::invalid_argument("empty rational");
        auto slash = text.find('/');
        if (slash != std::string::npos) {
            long long n = std::stoll(text.substr(0, slash));
            long long d = std::stoll(text.substr(slash + 1));
            if (d <= 0) throw std::invalid_argument("rational with non-positive denominator");
            return Rational(n, d);
        }
        auto dot = text.find('.');
        if (dot == std::string::npos) return Rational(std::stoll(text));
        long long whole = std::stoll(text.substr(0, dot));
        std::string frac = text.substr(dot + 1);
        long long den = 1;
        long long num = 0;
        for (char ch : frac) {
            if (ch < '0' || ch > '9') throw std::invalid_argument("bad rational: " + text);
            num = num * 10 + (ch - '0');
            den *= 10;
        }
        return Rational(whole * den + num, den);
    }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

// True iff dh <= alpha * dg + beta, with infinities handled per the metric
// conventions: an infinite dg makes any dh admissible.
inline bool within_stretch(Cost dh, Rational alpha, Cost dg, Cost beta) {
    if (dg.is_infinite()) return true;
    if (dh.is_infinite()) return false;
    if (beta.is_infinite()) return true;
    const __int128 lhs = static_cast<__int128>(dh.value) * alpha.den;
    const __int128 rhs = static_cast<__int128>(alpha.num) * dg.value +
                         static_cast<__int128>(beta.value) * alpha.den;
    return lhs <= rhs;
}

/// Thrown by brute-force oracles and exhaustive verifiers when the input
/// exceeds their guard size. Oracles are test equipment, not production paths.
class GuardError : public std::runtime_error {
public:
    explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mps
