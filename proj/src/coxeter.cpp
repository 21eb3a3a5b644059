#include "homkit/coxeter.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <map>
#include <numeric>

namespace hk::cox {

namespace {

using Perm = std::vector<std::uint8_t>;

Perm identity_perm(int n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Perm swap_points(int n, std::initializer_list<std::pair<int, int>> swaps) {
    Perm p = identity_perm(n);
    for (auto [a, b] : swaps) std::swap(p[a], p[b]);
    return p;
}

// Generator permutations of the faithful model, in Dynkin order.
std::vector<Perm> model_generators(const CoxType& t) {
    std::vector<Perm> gens;
    const int n = t.rank;
    switch (t.family) {
    case Family::A:
        for (int i = 0; i < n; ++i) gens.push_back(swap_points(n + 1, {{i, i + 1}}));
        break;
    case Family::B:
        // points k and k+n stand for +e_k and -e_k
        for (int i = 0; i + 1 < n; ++i) gens.push_back(swap_points(2 * n, {{i, i + 1}, {i + n, i + 1 + n}}));
        gens.push_back(swap_points(2 * n, {{n - 1, 2 * n - 1}}));
        break;
    case Family::D:
        for (int i = 0; i + 1 < n; ++i) gens.push_back(swap_points(2 * n, {{i, i + 1}, {i + n, i + 1 + n}}));
        // reflection in e_{n-1} + e_n
        gens.push_back(swap_points(2 * n, {{n - 2, 2 * n - 1}, {n - 1, 2 * n - 2}}));
        break;
    case Family::I2: {
        // vertices of the m-gon; s1: i -> -i, s2: i -> 1-i
        Perm s1(t.m), s2(t.m);
        for (int i = 0; i < t.m; ++i) {
            s1[i] = static_cast<std::uint8_t>((t.m - i) % t.m);
            s2[i] = static_cast<std::uint8_t>((t.m + 1 - i) % t.m);
        }
        gens = {s1, s2};
        break;
    }
    }
    return gens;
}

Perm compose(const Perm& u, const Perm& v) {
    Perm r(u.size());
    for (std::size_t x = 0; x < u.size(); ++x) r[x] = u[v[x]];
    return r;
}

} // namespace

CoxType CoxType::parse(std::string_view text) {
    auto fail = [&] { return UnsupportedType("unsupported Coxeter type '" + std::string(text) + "'"); };
    if (text.size() < 2) throw fail();
    CoxType t;
    auto parse_int = [&](std::string_view s) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) throw fail();
        return v;
    };
    if (text.starts_with("I2(")) {
        if (text.back() != ')') throw fail();
        t.family = Family::I2;
        t.rank = 2;
        t.m = parse_int(text.substr(3, text.size() - 4));
    } else {
        switch (text[0]) {
        case 'A': t.family = Family::A; break;
        case 'B': t.family = Family::B; break;
        case 'D': t.family = Family::D; break;
        default: throw fail();
        }
        t.rank = parse_int(text.substr(1));
    }
    if (!t.supported()) throw fail();
    return t;
}

std::string CoxType::name() const {
    switch (family) {
    case Family::A: return "A" + std::to_string(rank);
    case Family::B: return "B" + std::to_string(rank);
    case Family::D: return "D" + std::to_string(rank);
    case Family::I2: return "I2(" + std::to_string(m) + ")";
    }
    return "?";
}

bool CoxType::supported() const {
    switch (family) {
    case Family::A: return rank >= 1 && rank <= 4;
    case Family::B: return rank >= 2 && rank <= 3;
    case Family::D: return rank == 4;
    case Family::I2: return rank == 2 && m >= 3 && m <= 12;
    }
    return false;
}

std::vector<int> GenSet::members() const {
    std::vector<int> out;
    for (int s = 0; s < 32; ++s)
        if (contains(s)) out.push_back(s);
    return out;
}

std::string GenSet::to_string() const {
    std::string out = "{";
    bool first = true;
    for (int s : members()) {
        if (!first) out += ",";
        out += std::to_string(s + 1);
        first = false;
    }
    return out + "}";
}

std::vector<GenSet> subsets_of(GenSet universe) {
    std::vector<GenSet> out;
    for (std::uint32_t b = 0; b <= universe.bits(); ++b)
        if ((b & ~universe.bits()) == 0) out.emplace_back(b);
    return out;
}

CoxGroup CoxGroup::build(const CoxType& type) {
    if (!type.supported()) throw UnsupportedType("unsupported Coxeter type " + type.name());
    CoxGroup g;
    g.type_ = type;
    const auto gen_perms = model_generators(type);
    g.rank_ = static_cast<int>(gen_perms.size());
    const int npoints = static_cast<int>(gen_perms[0].size());

    // BFS from the identity, right-multiplying by generators in order.
    std::vector<Perm> elems{identity_perm(npoints)};
    std::map<Perm, int> index{{elems[0], 0}};
    g.length_ = {0};
    for (std::size_t head = 0; head < elems.size(); ++head) {
        for (const auto& s : gen_perms) {
            Perm ws = compose(elems[head], s);
            if (index.emplace(ws, static_cast<int>(elems.size())).second) {
                elems.push_back(std::move(ws));
                g.length_.push_back(g.length_[head] + 1);
            }
        }
    }
    const int n = static_cast<int>(elems.size());
    g.mult_.resize(static_cast<std::size_t>(n) * n);
    g.inv_.assign(n, -1);
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            int uv = index.at(compose(elems[u], elems[v]));
            g.mult_[static_cast<std::size_t>(u) * n + v] = uv;
            if (uv == 0) g.inv_[u] = v;
        }
    }
    for (const auto& s : gen_perms) g.gens_.push_back(index.at(s));
    g.gen_index_.assign(n, -1);
    for (int s = 0; s < g.rank_; ++s) g.gen_index_[g.gens_[s]] = s;

    const std::uint32_t nsub = 1u << g.rank_;
    g.parabolic_.resize(nsub);
    g.longest_.resize(nsub);
    for (std::uint32_t bits = 0; bits < nsub; ++bits) {
        GenSet I(bits);
        std::vector<char> seen(n, 0);
        std::vector<Elem> members{0};
        seen[0] = 1;
        for (std::size_t head = 0; head < members.size(); ++head)
            for (int s : I.members()) {
                Elem ws = g.rmul_gen(members[head], s);
                if (!seen[ws]) {
                    seen[ws] = 1;
                    members.push_back(ws);
                }
            }
        std::sort(members.begin(), members.end());
        g.longest_[bits] = *std::max_element(members.begin(), members.end(),
                                             [&](Elem a, Elem b) { return g.length(a) < g.length(b); });
        g.parabolic_[bits] = std::move(members);
    }

    g.gen_class_.assign(g.rank_, -1);
    int next_class = 0;
    for (int s = 0; s < g.rank_; ++s) {
        if (g.gen_class_[s] >= 0) continue;
        g.gen_class_[s] = next_class;
        for (int t = s + 1; t < g.rank_; ++t)
            for (Elem w = 0; w < n; ++w)
                if (g.mul(g.mul(w, g.gens_[s]), g.inv(w)) == g.gens_[t]) {
                    g.gen_class_[t] = next_class;
                    break;
                }
        ++next_class;
    }
    return g;
}

int CoxGroup::class_count() const {
    int count = 0;
    for (int c : gen_class_) count = std::max(count, c + 1);
    return count;
}

std::vector<int> CoxGroup::reduced_word(Elem w) const {
    std::vector<int> word;
    while (w != identity()) {
        for (int s = 0; s < rank_; ++s) {
            if (left_descent(w, s)) {
                word.push_back(s);
                w = lmul_gen(s, w);
                break;
            }
        }
    }
    return word;
}

Elem CoxGroup::from_word(const std::vector<int>& word) const {
    Elem w = identity();
    for (int s : word) {
        if (s < 0 || s >= rank_) throw std::invalid_argument("generator index out of range");
        w = rmul_gen(w, s);
    }
    return w;
}

std::string CoxGroup::word_string(Elem w) const {
    if (w == identity()) return "e";
    std::string out;
    for (int s : reduced_word(w)) out += "s" + std::to_string(s + 1);
    return out;
}

Elem CoxGroup::parse_word(std::string_view text) const {
    if (text == "e") return identity();
    std::vector<int> word;
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (text[pos] != 's') throw std::invalid_argument("bad word '" + std::string(text) + "'");
        ++pos;
        int v = 0;
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
        if (ec != std::errc()) throw std::invalid_argument("bad word '" + std::string(text) + "'");
        pos = static_cast<std::size_t>(ptr - text.data());
        word.push_back(v - 1);
    }
    return from_word(word);
}

bool CoxGroup::in_parabolic(Elem w, GenSet I) const {
    const auto& p = parabolic_[I.bits()];
    return std::binary_search(p.begin(), p.end(), w);
}

CoxGroup::Split CoxGroup::coset_min_rep(GenSet I, Elem w, Side side) const {
    Elem d = w;
    Elem u = identity();
    bool moved = true;
    while (moved) {
        moved = false;
        for (int s : I.members()) {
            if (side == Side::right && left_descent(d, s)) {
                d = lmul_gen(s, d);
                u = rmul_gen(u, s);
                moved = true;
            } else if (side == Side::left && right_descent(d, s)) {
                d = rmul_gen(d, s);
                u = lmul_gen(s, u);
                moved = true;
            }
        }
    }
    return {d, u};
}

bool CoxGroup::in_dist(Elem w, GenSet I, GenSet J) const {
    for (int s : I.members())
        if (left_descent(w, s)) return false;
    for (int s : J.members())
        if (right_descent(w, s)) return false;
    return true;
}

std::vector<Elem> CoxGroup::dist_reps(GenSet I, GenSet J) const {
    std::vector<Elem> out;
    for (Elem w = 0; w < size(); ++w)
        if (in_dist(w, I, J)) out.push_back(w);
    std::stable_sort(out.begin(), out.end(), [&](Elem a, Elem b) { return length(a) < length(b); });
    return out;
}

bool CoxGroup::right_divides(Elem w1, Elem w2) const {
    return length(mul(w2, inv(w1))) + length(w1) == length(w2);
}

GenSet CoxGroup::conjugate_into(GenSet I, Elem w) const {
    GenSet out;
    for (int t = 0; t < rank_; ++t) {
        int c = gen_index(mul(mul(w, gens_[t]), inv(w)));
        if (c >= 0 && I.contains(c)) out = out.with(t);
    }
    return out;
}

int CoxGroup::coxeter_m(int s, int t) const {
    Elem st = mul(gens_[s], gens_[t]);
    Elem x = st;
    int m = 1;
    while (x != identity()) {
        x = mul(x, st);
        ++m;
    }
    return m;
}

} // namespace hk::cox
