#include "seqpack/rational.hpp"

#include "seqpack/errors.hpp"

#include <cctype>
#include <cstdlib>

namespace seqpack {

int sign(const Rational& r) {
    if (r > 0) return 1;
    if (r < 0) return -1;
    return 0;
}

namespace {

Integer pow10(unsigned n) {
    Integer p = 1;
    for (unsigned i = 0; i < n; ++i) p *= 10;
    return p;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

Rational rational_from_decimal(std::string_view text) {
    std::string_view s = text;
    bool neg = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }

    long exp10 = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
        std::string_view es = s.substr(epos + 1);
        s = s.substr(0, epos);
        bool eneg = false;
        if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
            eneg = es.front() == '-';
            es.remove_prefix(1);
        }
        if (!all_digits(es) || es.size() > 6)
            throw ParseError("invalid decimal exponent in '" + std::string(text) + "'");
        exp10 = std::strtol(std::string(es).c_str(), nullptr, 10);
        if (eneg) exp10 = -exp10;
    }

    std::string_view ipart = s, fpart;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        ipart = s.substr(0, dot);
        fpart = s.substr(dot + 1);
    }
    if (ipart.empty() && fpart.empty())
        throw ParseError("invalid decimal literal '" + std::string(text) + "'");
    if ((!ipart.empty() && !all_digits(ipart)) || (!fpart.empty() && !all_digits(fpart)))
        throw ParseError("invalid decimal literal '" + std::string(text) + "'");

    Integer num = ipart.empty() ? Integer(0) : Integer(std::string(ipart));
    Integer den = 1;
    for (char c : fpart) {
        num = num * 10 + (c - '0');
        den *= 10;
    }
    if (exp10 > 0)
        num *= pow10(static_cast<unsigned>(exp10));
    else if (exp10 < 0)
        den *= pow10(static_cast<unsigned>(-exp10));

    Rational r(num, den);
    return neg ? Rational(-r) : r;
}

Rational rational_from_string(std::string_view text) {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::string_view ps = text.substr(0, slash);
        std::string_view qs = text.substr(slash + 1);
        bool neg = false;
        if (!ps.empty() && (ps.front() == '+' || ps.front() == '-')) {
            neg = ps.front() == '-';
            ps.remove_prefix(1);
        }
        if (!all_digits(ps) || !all_digits(qs))
            throw ParseError("invalid fraction '" + std::string(text) + "'");
        Integer p{std::string(ps)}, q{std::string(qs)};
        if (q == 0)
            throw ParseError("zero denominator in '" + std::string(text) + "'");
        Rational r(p, q);
        return neg ? Rational(-r) : r;
    }
    return rational_from_decimal(text);
}

std::string decimal_string(const Rational& r, int significant_digits) {
    if (significant_digits < 1) significant_digits = 1;
    if (r == 0) return "0";

    Integer p = numerator(r), q = denominator(r);
    bool neg = p < 0;
    if (neg) p = -p;

    // Find e with 10^e <= p/q < 10^(e+1).
    long e = static_cast<long>(p.str().size()) - static_cast<long>(q.str().size());
    auto cmp_pow = [&](long k) {
        // sign of p/q - 10^k
        if (k >= 0) return p.compare(q * pow10(static_cast<unsigned>(k)));
        return (p * pow10(static_cast<unsigned>(-k))).compare(q);
    };
    while (cmp_pow(e) < 0) --e;
    while (cmp_pow(e + 1) >= 0) ++e;

    // d = round(p/q * 10^(sig-1-e)), half away from zero.
    long shift = significant_digits - 1 - e;
    Integer num = p, den = q;
    if (shift >= 0)
        num *= pow10(static_cast<unsigned>(shift));
    else
        den *= pow10(static_cast<unsigned>(-shift));
    Integer d = (2 * num + den) / (2 * den);
    if (d >= pow10(static_cast<unsigned>(significant_digits))) {
        d /= 10;
        ++e;
    }

    std::string digits = d.str();
    long point = e + 1; // digit count before the decimal point
    std::string out;
    if (point <= 0) {
        out = "0." + std::string(static_cast<size_t>(-point), '0') + digits;
    } else if (point >= static_cast<long>(digits.size())) {
        out = digits + std::string(static_cast<size_t>(point - static_cast<long>(digits.size())), '0');
    } else {
        out = digits.substr(0, static_cast<size_t>(point)) + "." + digits.substr(static_cast<size_t>(point));
    }
    if (out.find('.') != std::string::npos) {
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
    }
    return neg ? "-" + out : out;
}

std::string exact_string(const Rational& r) {
    Integer p = numerator(r), q = denominator(r);
    if (q == 1) return p.str();
    return p.str() + "/" + q.str();
}

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

} // namespace seqpack
