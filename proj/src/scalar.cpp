#include "homkit/scalar.hpp"

#include <algorithm>

namespace hk {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Laurent coefficient overflow");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Laurent coefficient overflow");
    return r;
}

Laurent Laurent::monomial(const Monomial& m, std::int64_t c) {
    if (c == 0) return {};
    return Laurent(std::vector<Term>{{m, c}});
}

Laurent Laurent::var(int i, int power) {
    Monomial m;
    m.exp.at(i) = power;
    return monomial(m);
}

std::int64_t Laurent::coeff(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& key) { return t.first < key; });
    return (it != terms_.end() && it->first == m) ? it->second : 0;
}

Laurent Laurent::merge(const Laurent& a, const Laurent& b, bool subtract) {
    std::vector<Term> out;
    out.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
        if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
            out.push_back(*i++);
        } else if (i == a.terms_.end() || j->first < i->first) {
            out.push_back({j->first, subtract ? checked_mul(-1, j->second) : j->second});
            ++j;
        } else {
            std::int64_t c = subtract ? checked_add(i->second, checked_mul(-1, j->second))
                                      : checked_add(i->second, j->second);
            if (c != 0) out.push_back({i->first, c});
            ++i;
            ++j;
        }
    }
    return Laurent(std::move(out));
}

Laurent& Laurent::operator+=(const Laurent& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    return *this = merge(*this, o, false);
}

Laurent& Laurent::operator-=(const Laurent& o) {
    if (o.is_zero()) return *this;
    return *this = merge(*this, o, true);
}

Laurent operator-(Laurent a) {
    for (auto& t : a.terms_) t.second = checked_mul(-1, t.second);
    return a;
}

Laurent operator*(const Laurent& a, const Laurent& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (b.terms_.size() == 1) {
        // multiplying by a monomial preserves the term order
        std::vector<Laurent::Term> out = a.terms_;
        for (auto& t : out) {
            t.first = t.first * b.terms_[0].first;
            t.second = checked_mul(t.second, b.terms_[0].second);
        }
        return Laurent(std::move(out));
    }
    if (a.terms_.size() == 1) return b * a;
    std::vector<Laurent::Term> prod;
    prod.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) prod.push_back({ma * mb, checked_mul(ca, cb)});
    std::sort(prod.begin(), prod.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<Laurent::Term> out;
    for (const auto& t : prod) {
        if (!out.empty() && out.back().first == t.first)
            out.back().second = checked_add(out.back().second, t.second);
        else
            out.push_back(t);
    }
    std::erase_if(out, [](const auto& t) { return t.second == 0; });
    return Laurent(std::move(out));
}

Rational Laurent::evaluate(std::span<const Rational> values) const {
    Rational sum = 0;
    for (const auto& [m, c] : terms_) {
        Rational term = Rational(Integer(static_cast<long>(c)));
        for (int i = 0; i < kMaxVars; ++i) {
            int e = m.exp[i];
            if (e == 0) continue;
            if (static_cast<std::size_t>(i) >= values.size())
                throw std::invalid_argument("Laurent evaluation: missing value for variable");
            const Rational& v = values[i];
            if (hk::is_zero(v)) throw std::domain_error("Laurent evaluation: variable specialized to zero");
            Rational p = 1;
            for (int k = 0; k < (e < 0 ? -e : e); ++k) p *= v;
            if (e < 0) p = 1 / p;
            term *= p;
        }
        sum += term;
    }
    return sum;
}

std::string Laurent::to_string(std::span<const std::string> names) const {
    if (is_zero()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        std::int64_t mag = c < 0 ? -c : c;
        if (out.empty())
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        std::string mono;
        for (int i = 0; i < kMaxVars; ++i) {
            if (m.exp[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += static_cast<std::size_t>(i) < names.size() ? names[i] : "x" + std::to_string(i);
            if (m.exp[i] != 1) mono += "^" + std::to_string(m.exp[i]);
        }
        if (mono.empty())
            out += std::to_string(mag);
        else
            out += (mag == 1 ? "" : std::to_string(mag)) + mono;
    }
    return out;
}

std::string scalar_string(const Integer& x) { return x.get_str(); }

std::string scalar_string(const Rational& x) {
    Rational c = x;
    c.canonicalize();
    return c.get_str();
}

namespace {
bool is_canonical_int(const std::string& s) {
    std::size_t i = (s.size() > 1 && s[0] == '-') ? 1 : 0;
    if (i >= s.size()) return false;
    if (s[i] == '0' && (s.size() - i > 1 || i == 1)) return false;
    for (std::size_t k = i; k < s.size(); ++k)
        if (s[k] < '0' || s[k] > '9') return false;
    return true;
}
} // namespace

Integer parse_integer(const std::string& text) {
    if (!is_canonical_int(text)) throw std::invalid_argument("bad integer '" + text + "'");
    return Integer(text);
}

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(parse_integer(text));
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    Rational r(num, den);
    if (den <= 1) throw std::invalid_argument("bad rational '" + text + "'");
    r.canonicalize();
    if (r.get_den() != den) throw std::invalid_argument("rational not in lowest terms '" + text + "'");
    return r;
}

} // namespace hk
