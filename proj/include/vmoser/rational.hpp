#pragma once

#include <boost/rational.hpp>
#include <cctype>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace vmoser {

// ----------------------------------------------------------------------
// Exact exponent arithmetic. Integrability exponents are rationals with a
// representable +infinity so boundary cases (2/q + d/s = 1, q* = 2, ...)
// compare exactly instead of hinging on floating-point rounding.
// ----------------------------------------------------------------------

using Rational = boost::rational<long long>;

class Exponent {
  public:
    Exponent() = default;
    Exponent(long long n) : r_(n) {}
    Exponent(long long num, long long den) : r_(num, den) {}
    Exponent(Rational r) : r_(r) {}

    static Exponent infinity() {
        Exponent e;
        e.inf_ = true;
        return e;
    }

    bool is_infinite() const { return inf_; }
    bool is_finite() const { return !inf_; }

    const Rational& value() const {
        if (inf_) throw std::domain_error("infinite exponent has no rational value");
        return r_;
    }

    /// 1/x with 1/inf = 0 and 1/0 = inf; total on nonnegative exponents.
    Exponent reciprocal() const {
        if (inf_) return Exponent(0);
        if (r_ == Rational(0)) return infinity();
        return Exponent(Rational(1) / r_);
    }

    double to_double() const {
        if (inf_) return std::numeric_limits<double>::infinity();
        return boost::rational_cast<double>(r_);
    }

    std::string str() const {
        if (inf_) return "inf";
        std::ostringstream out;
        out << r_.numerator();
        if (r_.denominator() != 1) out << '/' << r_.denominator();
        return out.str();
    }

    friend bool operator==(const Exponent& a, const Exponent& b) {
        if (a.inf_ || b.inf_) return a.inf_ && b.inf_;
        return a.r_ == b.r_;
    }
    friend bool operator!=(const Exponent& a, const Exponent& b) { return !(a == b); }
    friend bool operator<(const Exponent& a, const Exponent& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.r_ < b.r_;
    }
    friend bool operator>(const Exponent& a, const Exponent& b) { return b < a; }
    friend bool operator<=(const Exponent& a, const Exponent& b) { return !(b < a); }
    friend bool operator>=(const Exponent& a, const Exponent& b) { return !(a < b); }

  private:
    bool inf_ = false;
    Rational r_{0};
};

/// Accepts "inf", integers ("7"), fractions ("3/4"), and decimals ("0.25").
inline Exponent parse_exponent(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw std::invalid_argument("parse_exponent: empty exponent");

    std::string lower;
    for (char c : t) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "inf" || lower == "infinity") return Exponent::infinity();

    bool neg = false;
    std::size_t pos = 0;
    if (t[pos] == '+' || t[pos] == '-') {
        neg = t[pos] == '-';
        ++pos;
    }

    auto digits_to_ll = [&](const std::string& d) {
        if (d.empty() || d.size() > 18)
            throw std::invalid_argument("parse_exponent: numeric part out of range: " + text);
        long long v = 0;
        for (char c : d) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw std::invalid_argument("parse_exponent: malformed exponent: " + text);
            v = v * 10 + (c - '0');
        }
        return v;
    };

    std::string body = t.substr(pos);
    Rational r;
    if (auto slash = body.find('/'); slash != std::string::npos) {
        long long num = digits_to_ll(body.substr(0, slash));
        long long den = digits_to_ll(body.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("parse_exponent: zero denominator: " + text);
        r = Rational(num, den);
    } else if (auto dot = body.find('.'); dot != std::string::npos) {
        std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (ip.size() + fp.size() > 18)
            throw std::invalid_argument("parse_exponent: numeric part out of range: " + text);
        long long scale = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
        r = Rational(digits_to_ll(ip) * scale + (fp.empty() ? 0 : digits_to_ll(fp)), scale);
    } else {
        r = Rational(digits_to_ll(body));
    }
    if (neg) r = -r;
    return Exponent(r);
}

// ----------------------------------------------------------------------
// Exact iteration-exponent arithmetic: q_k = 2^k eps + 2 and the derived
// normalized sums q* and c-hat, kept rational so the closed form can be
// compared against the recursion q_{k+1} = 2(q_k - 1) without rounding.
// ----------------------------------------------------------------------

inline Rational q_k_rational(const Rational& eps, int k) {
    if (k < 0) throw std::invalid_argument("q_k_rational: k must be nonnegative");
    if (k > 40) throw std::invalid_argument("q_k_rational: k too large for exact arithmetic");
    return Rational(static_cast<long long>(1) << k) * eps + Rational(2);
}

inline Rational q_star_rational(const Rational& eps, int j) {
    if (j < 1) throw std::invalid_argument("q_star_rational: j must be at least 1");
    Rational sum(0);
    for (int k = 1; k <= j; ++k) sum += q_k_rational(eps, k);
    return sum / q_k_rational(eps, j);
}

inline Rational c_hat_rational(const Rational& eps, int j) {
    if (j < 1) throw std::invalid_argument("c_hat_rational: j must be at least 1");
    Rational sum(0);
    for (int k = 1; k <= j; ++k) sum += Rational(k) * q_k_rational(eps, j - k);
    return sum / q_k_rational(eps, j);
}

}  // namespace vmoser
