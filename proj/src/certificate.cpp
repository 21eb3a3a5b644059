#include "homkit/certificate.hpp"

#include <charconv>

namespace hk::cert {

json scalar_to_json(const Integer& x, const Names&) { return scalar_string(x); }
json scalar_to_json(const Rational& x, const Names&) { return scalar_string(x); }

json scalar_to_json(const Laurent& x, const Names& names) {
    json out = json::object();
    for (const auto& [m, c] : x.terms()) out[monomial_key(m, names)] = c;
    return out;
}

void scalar_from_json(const json& j, const Names&, Integer& out) {
    if (!j.is_string()) throw FormatError("integer scalar must be a string");
    try {
        out = parse_integer(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

void scalar_from_json(const json& j, const Names&, Rational& out) {
    if (!j.is_string()) throw FormatError("rational scalar must be a string");
    try {
        out = parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

void scalar_from_json(const json& j, const Names& names, Laurent& out) {
    if (!j.is_object()) throw FormatError("Laurent scalar must be an object");
    out = Laurent();
    for (const auto& [key, c] : j.items()) {
        if (!c.is_number_integer()) throw FormatError("Laurent coefficient must be an integer");
        auto v = c.get<std::int64_t>();
        if (v == 0) throw FormatError("stored zero Laurent coefficient");
        out += Laurent::monomial(parse_monomial_key(key, names), v);
    }
}

std::string monomial_key(const Monomial& m, const Names& names) {
    std::string out;
    for (int i = 0; i < kMaxVars; ++i) {
        if (m.exp[i] == 0) continue;
        if (static_cast<std::size_t>(i) >= names.size()) throw FormatError("monomial uses an unnamed variable");
        if (!out.empty()) out += "*";
        out += names[i];
        if (m.exp[i] != 1) out += "^" + std::to_string(m.exp[i]);
    }
    return out.empty() ? "1" : out;
}

Monomial parse_monomial_key(const std::string& key, const Names& names) {
    Monomial m;
    if (key == "1") return m;
    std::size_t pos = 0;
    while (pos <= key.size()) {
        std::size_t end = key.find('*', pos);
        if (end == std::string::npos) end = key.size();
        std::string factor = key.substr(pos, end - pos);
        std::size_t caret = factor.find('^');
        std::string name = factor.substr(0, caret);
        int e = 1;
        if (caret != std::string::npos) {
            const char* first = factor.data() + caret + 1;
            const char* last = factor.data() + factor.size();
            auto [ptr, ec] = std::from_chars(first, last, e);
            if (ec != std::errc() || ptr != last) throw FormatError("bad exponent in '" + key + "'");
        }
        int var = -1;
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) var = static_cast<int>(i);
        if (var < 0) throw FormatError("unknown variable '" + name + "'");
        m.exp[var] += e;
        pos = end + 1;
    }
    if (monomial_key(m, names) != key) throw FormatError("non-canonical monomial '" + key + "'");
    return m;
}

std::string dump(const json& j) { return j.dump(1) + "\n"; }

} // namespace hk::cert
