#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

#include "vmoser/rational.hpp"

namespace vmoser {

// ----------------------------------------------------------------------
// Exponent algebra for the regularity criterion: the Serrin condition on
// (q, s), the baseline exponent kappa(d), parabolic Sobolev pairs, the
// dual pair (q0, s0) = (2q/(q-2), 2s/(s-2)), and the absorption
// feasibility check tying them together. All comparisons are exact.
// ----------------------------------------------------------------------

struct ExponentReport {
    int d = 2;
    Exponent q, s;
    Exponent kappa;
    Exponent two_star;
    Exponent s_star, q_star;
    Exponent s0, q0;
    bool serrin_ok = false;
    bool star_ok = false;
    bool absorption_ok = false;
    Rational delta{1, 2};  // cutoff band width, carried as metadata
    int p = 0;             // minimal admissible auxiliary exponent
};

/// kappa(d): 2 in the plane, 2d/(d-2) above.
inline Exponent kappa(int d) {
    if (d < 2) throw std::invalid_argument("kappa: dimension must be at least 2");
    if (d == 2) return Exponent(2);
    return Exponent(Rational(2 * static_cast<long long>(d), d - 2));
}

/// Sobolev conjugate 2*: 2d/(d-2) for d >= 3, infinity in the plane.
inline Exponent two_star(int d) {
    if (d < 2) throw std::invalid_argument("two_star: dimension must be at least 2");
    if (d == 2) return Exponent::infinity();
    return Exponent(Rational(2 * static_cast<long long>(d), d - 2));
}

/// Serrin condition on the space-time integrability of u:
/// d = 2 requires q, s > 2; d >= 3 requires 2/q + d/s <= 1 with q finite
/// (the q = infinity endpoint is excluded).
inline bool serrin_check(int d, const Exponent& q, const Exponent& s) {
    if (d < 2) throw std::invalid_argument("serrin_check: dimension must be at least 2");
    if (!(q > Exponent(0)) || !(s > Exponent(0)))
        throw std::invalid_argument("serrin_check: exponents must be positive");
    if (d == 2) return q > Exponent(2) && s > Exponent(2);
    if (q.is_infinite()) return false;
    Rational lhs = Rational(2) * q.reciprocal().value() +
                   Rational(d) * s.reciprocal().value();
    return lhs <= Rational(1);
}

enum class SobolevMode { equality, inequality };

/// Admissible parabolic Sobolev pairs: the equality form d/q* + 2/s* = d/2
/// and the weaker inequality form d/s* + 2/q* >= d/2 (note the slots swap
/// between the two relations). Infinite exponents contribute zero.
inline bool sobolev_pair_ok(int d, const Exponent& q_star, const Exponent& s_star,
                            SobolevMode mode) {
    if (d < 2) throw std::invalid_argument("sobolev_pair_ok: dimension must be at least 2");
    if (!(q_star > Exponent(2)) || !(s_star > Exponent(2)))
        throw std::invalid_argument("sobolev_pair_ok: exponents must exceed 2");
    Rational half_d(d, 2);
    if (mode == SobolevMode::equality) {
        Rational lhs = Rational(d) * q_star.reciprocal().value() +
                       Rational(2) * s_star.reciprocal().value();
        return lhs == half_d;
    }
    Rational lhs = Rational(d) * s_star.reciprocal().value() +
                   Rational(2) * q_star.reciprocal().value();
    return lhs >= half_d;
}

/// Dual exponent x0 = 2x/(x-2); the infinite endpoint duals to exactly 2.
inline Exponent dual_exponent(const Exponent& x) {
    if (!(x > Exponent(2))) throw std::invalid_argument("dual exponent undefined");
    if (x.is_infinite()) return Exponent(2);
    const Rational& v = x.value();
    return Exponent(Rational(2) * v / (v - Rational(2)));
}

/// Minimal integer p > 2 with s*/2 > p/(p-2), i.e. p > 2s*/(s*-2);
/// returns 0 when no finite p works (s* <= 2).
inline int min_absorption_p(const Exponent& s_star) {
    if (!(s_star > Exponent(2))) return 0;
    if (s_star.is_infinite()) return 3;  // threshold is exactly 2
    Rational t = Rational(2) * s_star.value() / (s_star.value() - Rational(2));
    long long fl = t.numerator() / t.denominator();  // positive, truncation = floor
    return static_cast<int>(fl + 1);                 // strict: floor(t) + 1 > t always

}

/// Absorption feasibility: given data exponents (q, s) of u and a trial
/// Sobolev pair (q*, s*), checks s* >= s0, q* >= q0 and that the dual
/// pair itself satisfies the star inequality d/s0 + 2/q0 >= d/2. The
/// star relation is evaluated directly on the duals (which can sit on
/// the boundary value 2 when q or s is infinite).
inline ExponentReport absorption_ok(int d, const Exponent& q, const Exponent& s,
                                    const Exponent& q_star, const Exponent& s_star) {
    if (d < 2) throw std::invalid_argument("absorption_ok: dimension must be at least 2");
    ExponentReport rep;
    rep.d = d;
    rep.q = q;
    rep.s = s;
    rep.q_star = q_star;
    rep.s_star = s_star;
    rep.kappa = kappa(d);
    rep.two_star = two_star(d);
    rep.s0 = dual_exponent(s);
    rep.q0 = dual_exponent(q);
    rep.serrin_ok = serrin_check(d, q, s);
    Rational star_lhs = Rational(d) * rep.s0.reciprocal().value() +
                        Rational(2) * rep.q0.reciprocal().value();
    rep.star_ok = star_lhs >= Rational(d, 2);
    rep.absorption_ok = (s_star >= rep.s0) && (q_star >= rep.q0) && rep.star_ok;
    rep.p = min_absorption_p(s_star);
    return rep;
}

/// Feasibility search: the dual pair (q0, s0) is the pointwise-smallest
/// admissible witness, so testing it decides existence.
inline ExponentReport absorption_feasible(int d, const Exponent& q, const Exponent& s) {
    Exponent s0 = dual_exponent(s), q0 = dual_exponent(q);
    return absorption_ok(d, q, s, q0, s0);
}

inline std::string exponent_report_csv(const ExponentReport& r) {
    std::ostringstream out;
    out << "d,q,s,kappa,two_star,s_star,q_star,s0,q0,serrin_ok,star_ok,absorption_ok,delta,p\n";
    out << r.d << ',' << r.q.str() << ',' << r.s.str() << ',' << r.kappa.str() << ','
        << r.two_star.str() << ',' << r.s_star.str() << ',' << r.q_star.str() << ','
        << r.s0.str() << ',' << r.q0.str() << ',' << (r.serrin_ok ? "true" : "false") << ','
        << (r.star_ok ? "true" : "false") << ',' << (r.absorption_ok ? "true" : "false") << ','
        << r.delta.numerator() << '/' << r.delta.denominator() << ',' << r.p << '\n';
    return out.str();
}

inline std::string exponent_report_text(const ExponentReport& r) {
    std::ostringstream out;
    out << "d          = " << r.d << "\n";
    out << "q, s       = " << r.q.str() << ", " << r.s.str() << "\n";
    out << "kappa      = " << r.kappa.str() << "\n";
    out << "two_star   = " << r.two_star.str() << "\n";
    out << "q*, s*     = " << r.q_star.str() << ", " << r.s_star.str() << "\n";
    out << "q0, s0     = " << r.q0.str() << ", " << r.s0.str() << "\n";
    out << "serrin_ok  = " << (r.serrin_ok ? "true" : "false") << "\n";
    out << "star_ok    = " << (r.star_ok ? "true" : "false") << "\n";
    out << "absorption = " << (r.absorption_ok ? "true" : "false") << "\n";
    out << "delta      = " << r.delta.numerator() << '/' << r.delta.denominator() << "\n";
    out << "p          = " << r.p << "\n";
    return out.str();
}

}  // namespace vmoser
