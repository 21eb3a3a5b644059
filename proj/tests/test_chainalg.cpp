#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "homkit/certificate.hpp"
#include "homkit/equivalence.hpp"
#include "homkit/linalg.hpp"

#include <random>

using namespace hk;

namespace {

template <class R> SparseMatrix<R> dense(int rows, int cols, std::vector<long> entries) {
    MatrixBuilder<R> b(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) b.add(i, j, R(entries[i * cols + j]));
    return b.build();
}

Complex<Integer> two_term(const Integer& d) {
    Complex<Integer> x;
    x.modules = {{{"a"}}, {{"b"}}};
    MatrixBuilder<Integer> m(1, 1);
    m.add(0, 0, d);
    x.diffs = {m.build()};
    return x;
}

CoeffSystem<Integer> constant_system(int n) {
    std::map<std::uint32_t, FreeModule> mods;
    for (GenSet I : cox::subsets_of(GenSet::full(n))) mods[I.bits()] = {{"x"}};
    return make_coeff_system<Integer>(GenSet::full(n), mods,
                                      [](GenSet, GenSet) { return SparseMatrix<Integer>::identity(1); });
}

Laurent q() { return Laurent::var(0); }

} // namespace

TEST_CASE("Laurent arithmetic") {
    Laurent a = q() * q() - 3 + Laurent::var(0, -1);
    Laurent b = q() - 1;
    CHECK(a * b == b * a);
    CHECK(a + b - b == a);
    CHECK((a * b).coeff(Monomial{{3, 0}}) == 1);
    CHECK(q() * Laurent::var(0, -1) == Laurent(1));
    CHECK(is_zero(a - a));
    std::vector<std::string> names{"q"};
    CHECK(a.to_string(names) == "q^2 - 3 + q^-1");
    std::vector<Rational> two{Rational(2)};
    CHECK(a.evaluate(two) == Rational(3, 2));
    std::vector<Rational> zero{Rational(0)};
    CHECK_THROWS_AS(a.evaluate(zero), std::domain_error);
    Laurent big = Laurent(std::int64_t{1} << 62);
    CHECK_THROWS_AS(big * 4, std::overflow_error);
}

TEST_CASE("scalar text forms") {
    CHECK(parse_rational("-3/4") == Rational(-3, 4));
    CHECK(scalar_string(Rational(6, 8)) == "3/4");
    for (const char* bad : {"6/8", "1/1", "3/-4", "+2", "02", "-0", "", "1/0", "x"})
        CHECK_THROWS(parse_rational(bad));
    CHECK(parse_integer("-12") == -12);
}

TEST_CASE("sparse matrices") {
    auto a = dense<Integer>(2, 3, {1, 0, 2, 0, -1, 3});
    auto b = dense<Integer>(3, 2, {1, 1, 0, 2, -1, 0});
    auto c = a * b;
    CHECK(c == dense<Integer>(2, 2, {-1, 1, -3, -2}));
    CHECK(a.transpose().transpose() == a);
    CHECK((a - a).is_zero());
    CHECK(a.at(1, 2) == 3);
    CHECK(a.nnz() == 4);
    CHECK(sub_block(a, 1, 1, 1, 2) == dense<Integer>(1, 2, {-1, 3}));
}

TEST_CASE("assembly of constant systems") {
    auto one = assemble(constant_system(1), default_order(1)).complex;
    CHECK(one.d(0) == SparseMatrix<Integer>::identity(1));
    auto two = assemble(constant_system(2), default_order(2)).complex;
    // d on {s1} enters {s1,s2} with (-1)^{n({s1},s2)} = -1, d on {s2} with +1
    CHECK(two.d(0) == dense<Integer>(2, 1, {1, 1}));
    CHECK(two.d(1) == dense<Integer>(1, 2, {-1, 1}));
    CHECK(verify_complex(two));
    auto three = assemble(constant_system(3), Order{2, 0, 1}).complex;
    CHECK(verify_complex(three));
    CHECK(homology_int(three)[0].free_rank == 0);
}

TEST_CASE("assembly rejects non-functorial systems") {
    auto cs = constant_system(2);
    cs.rest[{GenSet::full(2).bits(), 0u}] = dense<Integer>(1, 1, {2});
    CHECK_THROWS_WITH_AS(assemble(cs, default_order(2)), doctest::Contains("functoriality"), std::invalid_argument);
}

TEST_CASE("contraction checks") {
    Complex<Integer> zero;
    CHECK(verify_contraction(zero, GradedMap<Integer>{-1, {}}));
    auto x = two_term(1);
    GradedMap<Integer> s{-1, {{1, SparseMatrix<Integer>::identity(1)}}};
    CHECK(verify_contraction(x, s));
    GradedMap<Integer> wrong{-1, {{1, dense<Integer>(1, 1, {2})}}};
    auto c = verify_contraction(x, wrong);
    CHECK_FALSE(c);
    CHECK(c.degree == 0);
    CHECK(c.label == "a");
}

TEST_CASE("Smith normal form") {
    auto a = dense<Integer>(3, 3, {2, 4, 4, -6, 6, 12, 10, -4, -16});
    auto snf = smith_normal_form(a, true);
    CHECK(snf.invariants == std::vector<Integer>{2, 6, 12});
    auto D = dense_mul(dense_mul(snf.U, to_dense(a)), snf.V);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(D[i][j] == (i == j ? snf.invariants[i] : Integer(0)));
    CHECK(abs(dense_det(snf.U)) == 1);
    CHECK(abs(dense_det(snf.V)) == 1);

    std::mt19937 rng(0);
    std::uniform_int_distribution<long> val(-3, 3);
    for (int trial = 0; trial < 30; ++trial) {
        int m = 1 + trial % 5, n = 1 + (trial * 7) % 6;
        std::vector<long> e(m * n);
        for (auto& v : e) v = val(rng);
        auto r = dense<Integer>(m, n, e);
        auto f = smith_normal_form(r, true);
        auto P = dense_mul(dense_mul(f.U, to_dense(r)), f.V);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(P[i][j] == (i == j && i < static_cast<int>(f.invariants.size()) ? f.invariants[i] : Integer(0)));
        for (std::size_t i = 1; i < f.invariants.size(); ++i)
            CHECK(mpz_divisible_p(f.invariants[i].get_mpz_t(), f.invariants[i - 1].get_mpz_t()));
        CHECK(abs(dense_det(f.U)) == 1);
        CHECK(abs(dense_det(f.V)) == 1);
        CHECK(static_cast<int>(f.invariants.size()) == rank(r.map([](const Integer& v) { return Rational(v); })));
    }
}

TEST_CASE("integral homology") {
    Complex<Integer> point;
    point.modules = {{{"p"}}};
    auto h = homology_int(point);
    CHECK(h[0].free_rank == 1);
    auto t = homology_int(two_term(2));
    CHECK(t[0].free_rank == 0);
    CHECK(t[0].torsion.empty());
    CHECK(t[1].free_rank == 0);
    CHECK(t[1].torsion == std::vector<Integer>{2});
}

TEST_CASE("ranks over Q and specialization") {
    auto m = dense<Rational>(3, 3, {1, 2, 3, 2, 4, 6, 0, 1, 1});
    CHECK(rank(m) == 2);
    MatrixBuilder<Laurent> b(2, 2);
    b.add(0, 0, q());
    b.add(0, 1, Laurent(2));
    b.add(1, 0, Laurent(1));
    b.add(1, 1, q() - 1);
    auto lm = b.build();
    std::vector<Rational> at2{Rational(2)};
    CHECK(rank(specialize(lm, at2)) == 1); // det = q^2 - q - 2 vanishes at 2
    std::vector<Rational> at3{Rational(3)};
    CHECK(rank(specialize(lm, at3)) == 2);
}

TEST_CASE("quotients") {
    std::vector<SparseVec<Rational>> rel{{{0, Rational(1)}, {1, Rational(-1)}}, {{2, Rational(2)}}};
    auto qt = quotient_by(3, rel);
    CHECK(qt.free == std::vector<int>{1});
    CHECK(qt.project.at(0, 0) == 1);
    CHECK(qt.project.at(0, 1) == 1);
    CHECK(qt.project.col(2).empty());
}

TEST_CASE("split equivalence, trivial kernel") {
    auto y = two_term(1);
    auto id = identity_map(y);
    Kernel<Integer> ker;
    ker.Z.modules = {{}, {}};
    ker.Z.diffs = {SparseMatrix<Integer>(0, 0)};
    auto c = split_equivalence(y, y, id, id, ker);
    CHECK(verify_equivalence(c));
    CHECK(c.g.at(0, y, y) == SparseMatrix<Integer>::identity(1));
    CHECK(c.k.at(1, y, y).is_zero());
}

TEST_CASE("split equivalence onto zero") {
    auto y = two_term(1);
    Complex<Integer> zero;
    zero.modules = {{}, {}};
    zero.diffs = {SparseMatrix<Integer>(0, 0)};
    Kernel<Integer> ker;
    ker.Z = y;
    ker.incl = identity_map(y);
    ker.retract = identity_map(y);
    ker.sigma = GradedMap<Integer>{-1, {{1, SparseMatrix<Integer>::identity(1)}}};
    auto c = split_equivalence(y, zero, GradedMap<Integer>{}, GradedMap<Integer>{}, ker);
    CHECK(c.g.blocks.empty());
    CHECK(c.k.at(1, y, y) == SparseMatrix<Integer>::identity(1));
}

TEST_CASE("split equivalence with a section that is not a chain map") {
    // Y: Z^2 -> Z^2 with d = [[1,0],[1,1]]; Y' = Z -> Z with d = 1; p takes the first coordinates
    Complex<Integer> y;
    y.modules = {{{"a0", "b0"}}, {{"a1", "b1"}}};
    y.diffs = {dense<Integer>(2, 2, {1, 0, 1, 1})};
    Complex<Integer> yp;
    yp.modules = {{{"a0"}}, {{"a1"}}};
    yp.diffs = {dense<Integer>(1, 1, {1})};
    GradedMap<Integer> p{0, {{0, dense<Integer>(1, 2, {1, 0})}, {1, dense<Integer>(1, 2, {1, 0})}}};
    GradedMap<Integer> s{0, {{0, dense<Integer>(2, 1, {1, 0})}, {1, dense<Integer>(2, 1, {1, 0})}}};
    Kernel<Integer> ker;
    ker.Z.modules = {{{"b0"}}, {{"b1"}}};
    ker.Z.diffs = {dense<Integer>(1, 1, {1})};
    ker.incl = GradedMap<Integer>{0, {{0, dense<Integer>(2, 1, {0, 1})}, {1, dense<Integer>(2, 1, {0, 1})}}};
    ker.retract = GradedMap<Integer>{0, {{0, dense<Integer>(1, 2, {0, 1})}, {1, dense<Integer>(1, 2, {0, 1})}}};
    ker.sigma = GradedMap<Integer>{-1, {{1, dense<Integer>(1, 1, {1})}}};
    auto c = split_equivalence(y, yp, p, s, ker);
    CHECK(verify_equivalence(c));
    CHECK(c.g.at(0, yp, y) == dense<Integer>(2, 1, {1, -1}));

    GradedMap<Integer> bad_s = s;
    bad_s.blocks[0] = dense<Integer>(2, 1, {2, 0});
    CHECK_THROWS_AS(split_equivalence(y, yp, p, bad_s, ker), VerificationError);
    Kernel<Integer> bad_ker = ker;
    bad_ker.sigma.blocks[1] = dense<Integer>(1, 1, {2});
    CHECK_THROWS_AS(split_equivalence(y, yp, p, s, bad_ker), VerificationError);
}

TEST_CASE("certificate scalars round-trip") {
    cert::Names names{"q1", "q2"};
    Laurent a = Laurent::var(0, 2) * Laurent::var(1, -1) * 3 - 1 + Laurent::var(1);
    auto j = cert::scalar_to_json(a, names);
    Laurent back;
    cert::scalar_from_json(j, names, back);
    CHECK(back == a);
    CHECK(j.dump() == R"({"1":-1,"q1^2*q2^-1":3,"q2":1})");
    CHECK_THROWS(cert::parse_monomial_key("q2*q1", names));
    CHECK_THROWS(cert::parse_monomial_key("q1^1", names));
    Rational r;
    CHECK_THROWS(cert::scalar_from_json(cert::json("2/4"), names, r));

    auto m = dense<Rational>(2, 2, {1, 0, -3, 2});
    auto mj = cert::matrix_to_json(m, names);
    CHECK(cert::matrix_from_json<Rational>(mj, names) == m);
    auto dup = mj;
    dup["entries"].push_back(dup["entries"][0]);
    CHECK_THROWS_AS(cert::matrix_from_json<Rational>(dup, names), cert::FormatError);
}
