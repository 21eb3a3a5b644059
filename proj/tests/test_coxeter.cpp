#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "homkit/coxeter.hpp"

#include <algorithm>
#include <map>
#include <random>

using namespace hk::cox;

namespace {

// Coefficients of prod_i (1 + q + ... + q^{d_i - 1}).
std::vector<int> poincare(const std::vector<int>& degrees) {
    std::vector<int> p{1};
    for (int d : degrees) {
        std::vector<int> next(p.size() + d - 1, 0);
        for (std::size_t i = 0; i < p.size(); ++i)
            for (int k = 0; k < d; ++k) next[i + k] += p[i];
        p = next;
    }
    return p;
}

std::vector<int> degrees_of(const CoxType& t) {
    std::vector<int> d;
    switch (t.family) {
    case Family::A:
        for (int i = 2; i <= t.rank + 1; ++i) d.push_back(i);
        break;
    case Family::B:
        for (int i = 1; i <= t.rank; ++i) d.push_back(2 * i);
        break;
    case Family::D:
        for (int i = 1; i < t.rank; ++i) d.push_back(2 * i);
        d.push_back(t.rank);
        break;
    case Family::I2: d = {2, t.m}; break;
    }
    return d;
}

std::vector<int> length_histogram(const CoxGroup& G) {
    std::vector<int> h;
    for (Elem w = 0; w < G.size(); ++w) {
        if (G.length(w) >= static_cast<int>(h.size())) h.resize(G.length(w) + 1);
        ++h[G.length(w)];
    }
    return h;
}

// Lex-least reduced word by brute force over all words of length l(w).
std::vector<int> brute_lex_word(const CoxGroup& G, Elem w) {
    int l = G.length(w);
    std::vector<int> word(l, 0);
    for (;;) {
        if (G.from_word(word) == w) return word;
        int i = l - 1;
        while (i >= 0 && word[i] == G.rank() - 1) word[i--] = 0;
        if (i < 0) break;
        ++word[i];
    }
    return {};
}

const char* kTypes[] = {"A1", "A2", "A3", "A4", "B2", "B3", "D4", "I2(3)", "I2(5)", "I2(8)", "I2(12)"};

} // namespace

TEST_CASE("group orders") {
    CHECK(CoxGroup::build(CoxType::parse("A2")).size() == 6);
    CHECK(CoxGroup::build(CoxType::parse("I2(5)")).size() == 10);
    CHECK(CoxGroup::build(CoxType::parse("A3")).size() == 24);
    CHECK(CoxGroup::build(CoxType::parse("A4")).size() == 120);
    CHECK(CoxGroup::build(CoxType::parse("B3")).size() == 48);
    CHECK(CoxGroup::build(CoxType::parse("D4")).size() == 192);
}

TEST_CASE("B2 lengths") {
    auto G = CoxGroup::build(CoxType::parse("B2"));
    std::vector<int> lengths;
    for (Elem w = 0; w < G.size(); ++w) lengths.push_back(G.length(w));
    std::sort(lengths.begin(), lengths.end());
    CHECK(lengths == std::vector<int>{0, 1, 1, 2, 2, 3, 3, 4});
}

TEST_CASE("length distribution matches the Poincare polynomial") {
    for (const char* name : kTypes) {
        CAPTURE(name);
        auto t = CoxType::parse(name);
        auto G = CoxGroup::build(t);
        CHECK(length_histogram(G) == poincare(degrees_of(t)));
    }
}

TEST_CASE("type parsing") {
    CHECK(CoxType::parse("I2(7)").m == 7);
    CHECK(CoxType::parse("D4").name() == "D4");
    for (const char* bad : {"A5", "B4", "B1", "D5", "I2(2)", "I2(13)", "E6", "H3", "A", "A2x", "I2(7"})
        CHECK_THROWS_AS(CoxType::parse(bad), UnsupportedType);
}

TEST_CASE("table axioms") {
    for (const char* name : kTypes) {
        CAPTURE(name);
        auto G = CoxGroup::build(CoxType::parse(name));
        int zero_length = 0;
        for (Elem w = 0; w < G.size(); ++w) {
            if (G.length(w) == 0) ++zero_length;
            CHECK(G.mul(G.inv(w), w) == G.identity());
            for (int s = 0; s < G.rank(); ++s) {
                CHECK(G.rmul_gen(G.rmul_gen(w, s), s) == w);
                int d = G.length(G.rmul_gen(w, s)) - G.length(w);
                CHECK((d == 1 || d == -1));
                CHECK((d == -1) == G.right_descent(w, s));
            }
        }
        CHECK(zero_length == 1);
        CHECK(G.inv(G.identity()) == G.identity());
    }
}

TEST_CASE("associativity on random triples") {
    auto G = CoxGroup::build(CoxType::parse("D4"));
    std::mt19937 rng(0);
    std::uniform_int_distribution<int> pick(0, G.size() - 1);
    for (int i = 0; i < 500; ++i) {
        Elem a = pick(rng), b = pick(rng), c = pick(rng);
        CHECK(G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c)));
    }
}

TEST_CASE("reduced words") {
    auto A2 = CoxGroup::build(CoxType::parse("A2"));
    Elem wS = A2.longest(A2.all());
    CHECK(A2.reduced_word(wS) == std::vector<int>{0, 1, 0});
    CHECK(A2.length(A2.mul(A2.gen(0), A2.gen(1))) == 2);
    for (const char* name : {"A3", "B3", "I2(5)"}) {
        auto G = CoxGroup::build(CoxType::parse(name));
        for (Elem w = 0; w < G.size(); ++w) {
            auto word = G.reduced_word(w);
            CHECK(static_cast<int>(word.size()) == G.length(w));
            CHECK(G.from_word(word) == w);
            CHECK(word == brute_lex_word(G, w));
            CHECK(G.parse_word(G.word_string(w)) == w);
        }
    }
}

TEST_CASE("exchange condition") {
    auto G = CoxGroup::build(CoxType::parse("A3"));
    for (Elem w = 0; w < G.size(); ++w) {
        auto word = G.reduced_word(w);
        for (int s = 0; s < G.rank(); ++s) {
            if (!G.right_descent(w, s)) continue;
            bool found = false;
            for (std::size_t i = 0; i < word.size() && !found; ++i) {
                auto shorter = word;
                shorter.erase(shorter.begin() + static_cast<long>(i));
                found = G.from_word(shorter) == G.rmul_gen(w, s);
            }
            CHECK(found);
        }
    }
}

TEST_CASE("longest elements") {
    auto A2 = CoxGroup::build(CoxType::parse("A2"));
    auto B2 = CoxGroup::build(CoxType::parse("B2"));
    CHECK(A2.length(A2.longest(A2.all())) == 3);
    CHECK(B2.length(B2.longest(B2.all())) == 4);
    CHECK(A2.longest(GenSet()) == A2.identity());
    for (const char* name : kTypes) {
        auto G = CoxGroup::build(CoxType::parse(name));
        for (GenSet I : subsets_of(G.all())) {
            Elem wI = G.longest(I);
            CHECK(G.mul(wI, wI) == G.identity());
            for (Elem u : G.parabolic(I)) CHECK(G.length(u) <= G.length(wI));
        }
    }
}

TEST_CASE("coset decompositions") {
    auto G = CoxGroup::build(CoxType::parse("A2"));
    Elem s1 = G.gen(0), s2 = G.gen(1);
    auto r = G.coset_min_rep(GenSet::single(0), G.mul(s1, s2), Side::right);
    CHECK(r.d == s2);
    CHECK(r.u == s1);
    auto l = G.coset_min_rep(GenSet::single(1), G.longest(G.all()), Side::left);
    // w_S W_{s2} = {s1s2s1, s2s1}
    CHECK(l.d == G.mul(s2, s1));
    CHECK(l.u == s2);
    auto id = G.coset_min_rep(G.all(), G.identity(), Side::right);
    CHECK(id.d == G.identity());
    CHECK(id.u == G.identity());
    for (const char* name : {"A3", "B3", "I2(7)"}) {
        auto H = CoxGroup::build(CoxType::parse(name));
        for (GenSet I : subsets_of(H.all()))
            for (Elem w = 0; w < H.size(); ++w) {
                auto rr = H.coset_min_rep(I, w, Side::right);
                CHECK(H.mul(rr.u, rr.d) == w);
                CHECK(H.length(rr.u) + H.length(rr.d) == H.length(w));
                CHECK(H.in_parabolic(rr.u, I));
                auto ll = H.coset_min_rep(I, w, Side::left);
                CHECK(H.mul(ll.d, ll.u) == w);
                CHECK(H.length(ll.u) + H.length(ll.d) == H.length(w));
            }
    }
}

TEST_CASE("distinguished double coset representatives") {
    auto G = CoxGroup::build(CoxType::parse("A2"));
    Elem s1 = G.gen(0), s2 = G.gen(1);
    CHECK(G.dist_reps(GenSet(), GenSet::single(1)) == std::vector<Elem>{G.identity(), s1, G.mul(s2, s1)});
    CHECK(G.dist_reps(GenSet::single(0), GenSet::single(0)) == std::vector<Elem>{G.identity(), s2});
    CHECK(G.dist_reps(G.all(), G.all()) == std::vector<Elem>{G.identity()});
    CHECK(static_cast<int>(G.dist_reps(GenSet(), GenSet()).size()) == G.size());
    for (const char* name : {"A3", "B3", "D4", "I2(6)"}) {
        auto H = CoxGroup::build(CoxType::parse(name));
        for (GenSet I : subsets_of(H.all())) {
            CHECK(H.dist_reps(GenSet(), I).size() * H.parabolic(I).size() == static_cast<std::size_t>(H.size()));
            for (GenSet J : subsets_of(H.all())) {
                // brute-force double coset partition
                std::vector<int> cls(H.size(), -1);
                int count = 0;
                for (Elem w = 0; w < H.size(); ++w) {
                    if (cls[w] >= 0) continue;
                    for (Elem u : H.parabolic(I))
                        for (Elem v : H.parabolic(J)) cls[H.mul(H.mul(u, w), v)] = count;
                    ++count;
                }
                auto reps = H.dist_reps(I, J);
                CHECK(static_cast<int>(reps.size()) == count);
                std::vector<char> hit(count, 0);
                for (Elem d : reps) {
                    CHECK(!hit[cls[d]]);
                    hit[cls[d]] = 1;
                }
            }
        }
    }
}

TEST_CASE("right divisibility") {
    auto G = CoxGroup::build(CoxType::parse("A2"));
    Elem s1 = G.gen(0), s2 = G.gen(1);
    for (Elem w = 0; w < G.size(); ++w) {
        CHECK(G.right_divides(G.identity(), w));
        CHECK(G.right_divides(w, w));
    }
    CHECK(G.right_divides(s1, G.mul(s2, s1)));
    CHECK_FALSE(G.right_divides(s2, G.mul(s2, s1)));
    auto H = CoxGroup::build(CoxType::parse("B3"));
    for (Elem a = 0; a < H.size(); a += 3)
        for (Elem b = 0; b < H.size(); b += 2)
            for (Elem c = 0; c < H.size(); c += 5)
                if (H.right_divides(a, b) && H.right_divides(b, c)) CHECK(H.right_divides(a, c));
}

TEST_CASE("longest element conjugation permutes S") {
    for (const char* name : kTypes) {
        auto G = CoxGroup::build(CoxType::parse(name));
        Elem wS = G.longest(G.all());
        std::vector<int> image;
        for (int s = 0; s < G.rank(); ++s) image.push_back(G.gen_index(G.mul(G.mul(wS, G.gen(s)), wS)));
        std::sort(image.begin(), image.end());
        std::vector<int> expect(G.rank());
        for (int s = 0; s < G.rank(); ++s) expect[s] = s;
        CHECK(image == expect);
    }
}

TEST_CASE("generator classes") {
    CHECK(CoxGroup::build(CoxType::parse("A3")).class_count() == 1);
    CHECK(CoxGroup::build(CoxType::parse("B2")).class_count() == 2);
    CHECK(CoxGroup::build(CoxType::parse("B3")).class_count() == 2);
    CHECK(CoxGroup::build(CoxType::parse("I2(5)")).class_count() == 1);
    CHECK(CoxGroup::build(CoxType::parse("I2(6)")).class_count() == 2);
    auto G = CoxGroup::build(CoxType::parse("A3"));
    CHECK(G.coxeter_m(0, 1) == 3);
    CHECK(G.coxeter_m(0, 2) == 2);
}
