#include "homkit/bnpair.hpp"

#include <algorithm>
#include <numeric>
#include <regex>
#include <set>
#include <stdexcept>

namespace hk::bn {

namespace {

int ipow(int b, int e) {
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
}

int det_mod(const std::vector<int>& m, int n, int q) {
    auto at = [&](int i, int j) { return m[i * n + j]; };
    int d = 0;
    if (n == 1) d = at(0, 0);
    if (n == 2) d = at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
    if (n == 3)
        d = at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) - at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
            at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
    return ((d % q) + q) % q;
}

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

FinGroup::FinGroup(int n, int q, std::vector<std::vector<int>> mats) : n_(n), q_(q), mats_(std::move(mats)) {
    code_to_index_.assign(ipow(q, n * n), -1);
    auto code = [&](const std::vector<int>& m) {
        int c = 0;
        for (int k = n * n - 1; k >= 0; --k) c = c * q + m[k];
        return c;
    };
    for (int a = 0; a < size(); ++a) code_to_index_[code(mats_[a])] = a;
    std::vector<int> one(n * n, 0);
    for (int i = 0; i < n; ++i) one[i * n + i] = 1;
    id_ = code_to_index_[code(one)];
    if (id_ < 0) throw std::logic_error("group without identity");
    mult_.assign(static_cast<std::size_t>(size()) * size(), -1);
    inv_.assign(size(), -1);
    std::vector<int> prod(n * n);
    for (int a = 0; a < size(); ++a)
        for (int b = 0; b < size(); ++b) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    int s = 0;
                    for (int k = 0; k < n; ++k) s += mats_[a][i * n + k] * mats_[b][k * n + j];
                    prod[i * n + j] = s % q;
                }
            int c = code_to_index_[code(prod)];
            if (c < 0) throw std::logic_error("matrix set is not closed under products");
            mult_[static_cast<std::size_t>(a) * size() + b] = c;
            if (c == id_) inv_[a] = b;
        }
}

int FinGroup::index_of(const std::vector<int>& m) const {
    if (static_cast<int>(m.size()) != n_ * n_) return -1;
    int c = 0;
    for (int k = n_ * n_ - 1; k >= 0; --k) {
        if (m[k] < 0 || m[k] >= q_) return -1;
        c = c * q_ + m[k];
    }
    return code_to_index_[c];
}

std::string FinGroup::to_string(int a) const {
    std::string s = "[";
    for (int i = 0; i < n_; ++i) {
        if (i) s += ";";
        for (int j = 0; j < n_; ++j) s += std::to_string(mats_[a][i * n_ + j]);
    }
    return s + "]";
}

bool is_group_spec(const std::string& spec) {
    static const std::regex re(R"((GL|SL)[1-9]\([0-9]+\))");
    return std::regex_match(spec, re);
}

std::unique_ptr<BNPair> BNPair::build(const std::string& spec) {
    static const std::regex re(R"((GL|SL)([0-9]+)\(([0-9]+)\))");
    std::smatch m;
    if (!std::regex_match(spec, m, re)) throw std::invalid_argument("unknown group '" + spec + "'");
    bool special = m[1] == "SL";
    int n = std::stoi(m[2]), q = std::stoi(m[3]);
    if (n < 2 || n > 3 || (q != 2 && q != 3)) throw std::invalid_argument("supported groups: GL_n, SL_n with n in {2,3}, q in {2,3}");
    long order = 1;
    for (int i = 0; i < n; ++i) order *= ipow(q, n) - ipow(q, i);
    if (special) order /= q - 1;
    if (order > 1000) throw std::invalid_argument(spec + " has order " + std::to_string(order) + " > 1000");
    std::vector<std::vector<int>> mats;
    const int total = ipow(q, n * n);
    for (int c = 0; c < total; ++c) {
        std::vector<int> mat(n * n);
        int x = c;
        for (int k = 0; k < n * n; ++k) {
            mat[k] = x % q;
            x /= q;
        }
        int d = det_mod(mat, n, q);
        if (special ? d == 1 : d != 0) mats.push_back(std::move(mat));
    }
    if (static_cast<long>(mats.size()) != order) throw std::logic_error("group order disagrees with the order formula");
    auto W = CoxGroup::build(cox::CoxType::parse("A" + std::to_string(n - 1)));
    std::unique_ptr<BNPair> bn(new BNPair(spec, FinGroup(n, q, std::move(mats)), std::move(W)));
    bn->setup(special);
    return bn;
}

void BNPair::setup(bool special) {
    const int n = G_.n(), q = G_.q();
    for (int a = 0; a < G_.size(); ++a) {
        const auto& m = G_.matrix(a);
        bool upper = true, unit = true, diag = true;
        int nz_rows = 0;
        std::vector<int> col_count(n, 0);
        for (int i = 0; i < n; ++i) {
            int row_nz = 0;
            for (int j = 0; j < n; ++j) {
                int v = m[i * n + j];
                if (v != 0) {
                    ++row_nz;
                    ++col_count[j];
                }
                if (i > j && v != 0) upper = false;
                if (i != j && v != 0) diag = false;
                if (i == j && v != 1) unit = false;
            }
            if (row_nz == 1) ++nz_rows;
        }
        bool mono = nz_rows == n && std::all_of(col_count.begin(), col_count.end(), [](int c) { return c == 1; });
        if (upper) B_.push_back(a);
        if (upper && unit) U_.push_back(a);
        if (diag) T_.push_back(a);
        if (mono) N_.push_back(a);
    }
    std::vector<int> sdot;
    for (int i = 0; i + 1 < n; ++i) {
        std::vector<int> mat(n * n, 0);
        for (int k = 0; k < n; ++k)
            if (k != i && k != i + 1) mat[k * n + k] = 1;
        mat[i * n + i + 1] = 1;
        mat[(i + 1) * n + i] = special ? q - 1 : 1;
        int idx = G_.index_of(mat);
        if (idx < 0) throw std::logic_error("generator representative is not in the group");
        sdot.push_back(idx);
    }
    rep_.assign(W_.size(), G_.identity());
    for (Elem w = 0; w < W_.size(); ++w)
        for (int s : W_.reduced_word(w)) rep_[w] = G_.mul(rep_[w], sdot[s]);
    weyl_idx_.assign(G_.size(), -1);
    for (Elem w = 0; w < W_.size(); ++w)
        for (int t : T_) {
            int x = G_.mul(rep_[w], t);
            if (weyl_idx_[x] >= 0) throw std::logic_error("representatives of W are not distinct modulo T");
            weyl_idx_[x] = w;
        }
    for (int x : N_)
        if (weyl_idx_[x] < 0) throw std::logic_error("N is not covered by the representatives of W");
    for (Elem a = 0; a < W_.size(); ++a)
        for (Elem b = 0; b < W_.size(); ++b)
            if (weyl_idx_[G_.mul(rep_[a], rep_[b])] != W_.mul(a, b)) throw std::logic_error("N -> W is not a homomorphism");

    const Elem wS = W_.longest(W_.all());
    const auto Bm = conjugate(G_, B_, rep_[wS]);
    para_.resize(std::size_t{1} << W_.rank());
    for (GenSet I : cox::subsets_of(W_.all())) {
        Parabolic pr;
        std::vector<int> P, Pm;
        for (Elem w : W_.parabolic(I)) {
            auto a = product_set(G_, product_set(G_, B_, {rep_[w]}), B_);
            auto b = product_set(G_, product_set(G_, Bm, {rep_[w]}), Bm);
            P.insert(P.end(), a.begin(), a.end());
            Pm.insert(Pm.end(), b.begin(), b.end());
        }
        pr.P = sorted_unique(std::move(P));
        pr.Pm = sorted_unique(std::move(Pm));
        pr.U = U_;
        for (Elem w : W_.parabolic(I)) pr.U = intersect(pr.U, conjugate(G_, U_, G_.inv(rep_[w])));
        pr.Um = intersect(conjugate(G_, U_, rep_[wS]), conjugate(G_, U_, rep_[W_.mul(wS, W_.longest(I))]));
        pr.L = intersect(pr.P, pr.Pm);
        para_[I.bits()] = std::move(pr);
    }
}

Elem BNPair::weyl_of(int n) const {
    Elem w = weyl_idx_.at(n);
    if (w < 0) throw std::invalid_argument("element is not in N");
    return w;
}

GroupAlg BNPair::idempotent(GenSet I) const {
    const auto& U = parabolic(I).U;
    return ga_sum(U, Rational(1, static_cast<long>(U.size())));
}

std::vector<int> BNPair::generators(const std::vector<int>& subgroup) const {
    std::vector<int> gens;
    std::vector<int> cl{G_.identity()};
    for (int g : subgroup) {
        if (std::binary_search(cl.begin(), cl.end(), g)) continue;
        gens.push_back(g);
        cl = closure(G_, gens);
        if (cl.size() == subgroup.size()) break;
    }
    return gens;
}

GroupAlg ga_basis(int g, Rational c) {
    if (is_zero(c)) return {};
    return {{g, std::move(c)}};
}

GroupAlg ga_mul(const FinGroup& G, const GroupAlg& x, const GroupAlg& y) {
    Accumulator<Rational> acc(G.size());
    for (const auto& [a, c] : x)
        for (const auto& [b, d] : y) acc.add(G.mul(a, b), c * d);
    return acc.take();
}

GroupAlg ga_sum(const std::vector<int>& elems, Rational c) {
    GroupAlg out;
    for (int g : sorted_unique(elems)) out.emplace_back(g, c);
    return out;
}

std::vector<int> closure(const FinGroup& G, const std::vector<int>& gens) {
    std::vector<char> seen(G.size(), 0);
    std::vector<int> out{G.identity()}, todo{G.identity()};
    seen[G.identity()] = 1;
    while (!todo.empty()) {
        int x = todo.back();
        todo.pop_back();
        for (int g : gens) {
            int y = G.mul(x, g);
            if (!seen[y]) {
                seen[y] = 1;
                out.push_back(y);
                todo.push_back(y);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool is_subset(const std::vector<int>& a, const std::vector<int>& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

std::vector<int> conjugate(const FinGroup& G, const std::vector<int>& H, int x) {
    std::vector<int> out;
    for (int h : H) out.push_back(G.mul(G.mul(G.inv(x), h), x));
    return sorted_unique(std::move(out));
}

std::vector<int> product_set(const FinGroup& G, const std::vector<int>& A, const std::vector<int>& Bs) {
    std::vector<int> out;
    for (int a : A)
        for (int b : Bs) out.push_back(G.mul(a, b));
    return sorted_unique(std::move(out));
}

Report bn_invariants(const BNPair& bn) {
    const auto& G = bn.group();
    const auto& W = bn.weyl();
    Report r;
    r.add("B = U T", product_set(G, bn.U(), bn.T()) == bn.B() && intersect(bn.U(), bn.T()).size() == 1);
    {
        std::vector<int> seen(G.size(), 0);
        bool sizes = true;
        long total = 0;
        for (Elem w = 0; w < W.size(); ++w) {
            auto c = product_set(G, product_set(G, bn.B(), {bn.rep(w)}), bn.B());
            long expect = static_cast<long>(bn.B().size()) * ipow(bn.p(), W.length(w));
            if (static_cast<long>(c.size()) != expect) sizes = false;
            for (int g : c) ++seen[g];
            total += static_cast<long>(c.size());
        }
        bool partition = total == G.size() && std::all_of(seen.begin(), seen.end(), [](int k) { return k == 1; });
        r.add("Bruhat cells partition G with |BwB| = |B| q^l(w)", partition && sizes);
    }
    auto pgroup = [&](std::size_t n) {
        while (n % bn.p() == 0) n /= bn.p();
        return n == 1;
    };
    auto normal_in = [&](const std::vector<int>& H, const std::vector<int>& P) {
        for (int x : bn.generators(P))
            if (conjugate(G, H, x) != H) return false;
        return true;
    };
    for (GenSet I : cox::subsets_of(W.all())) {
        const auto& pr = bn.parabolic(I);
        std::string tag = " for I = " + I.to_string();
        r.add("P_I = U_I L_I" + tag, product_set(G, pr.U, pr.L) == pr.P && intersect(pr.U, pr.L).size() == 1 &&
                                        pr.U.size() * pr.L.size() == pr.P.size());
        r.add("U_I normal p-subgroup of P_I" + tag, pgroup(pr.U.size()) && normal_in(pr.U, pr.P));
        r.add("P_I^- = U_I^- L_I" + tag, product_set(G, pr.Um, pr.L) == pr.Pm && intersect(pr.Um, pr.L).size() == 1);
        r.add("U_I^- normal p-subgroup of P_I^-" + tag, pgroup(pr.Um.size()) && normal_in(pr.Um, pr.Pm));
        r.add("B inside P_I" + tag, is_subset(bn.B(), pr.P));
        bool levi = is_subset(bn.T(), pr.L);
        for (Elem w : W.parabolic(I)) levi = levi && std::binary_search(pr.L.begin(), pr.L.end(), bn.rep(w));
        r.add("L_I contains T and the representatives of W_I" + tag, levi);
        auto e = bn.idempotent(I);
        r.add("e_I idempotent" + tag, ga_mul(G, e, e) == e);
        for (GenSet J : cox::subsets_of(W.all()))
            if (I.subset_of(J) && I != J) {
                auto f = bn.idempotent(J);
                if (!(ga_mul(G, e, f) == e && ga_mul(G, f, e) == e))
                    r.add("e_I e_J = e_J e_I = e_I for I = " + I.to_string() + ", J = " + J.to_string(), false);
            }
    }
    return r;
}

Report prop10_check(const BNPair& bn) {
    const auto& G = bn.group();
    const auto& W = bn.weyl();
    Report r;
    int checked = 0;
    for (GenSet I : cox::subsets_of(W.all()))
        for (GenSet J : cox::subsets_of(W.all()))
            for (Elem w : W.dist_reps(I, J)) {
                GenSet IwJ = I & W.conjugate_into(J, W.inv(w)); // I cap wJ
                GenSet IJw = J & W.conjugate_into(I, w);        // I^w cap J
                for (int t : bn.T()) {
                    auto n = ga_basis(G.mul(bn.rep(w), t));
                    auto prod = [&](GenSet a, GenSet b) {
                        return ga_mul(G, ga_mul(G, bn.idempotent(a), n), bn.idempotent(b));
                    };
                    auto base = prod(I, J);
                    bool ok = base == prod(IwJ, J) && base == prod(I, IJw) && base == prod(IwJ, IJw);
                    ++checked;
                    if (!ok)
                        r.add("idempotent products disagree for I = " + I.to_string() + ", J = " + J.to_string() + ", w = " + W.word_string(w), false);
                }
            }
    r.add("four products agree on " + std::to_string(checked) + " triples", r.ok());
    return r;
}

CosetIndex coset_index(const FinGroup& G, const std::vector<int>& H, bool right) {
    CosetIndex c;
    c.id.assign(G.size(), -1);
    for (int g = 0; g < G.size(); ++g) {
        if (c.id[g] >= 0) continue;
        int k = c.count();
        c.reps.push_back(g);
        for (int h : H) c.id[right ? G.mul(h, g) : G.mul(g, h)] = k;
    }
    return c;
}

StModel st_model(const BNPair& bn, bool minus, const Order& order) {
    const auto& G = bn.group();
    const auto& W = bn.weyl();
    StModel out;
    std::map<std::uint32_t, FreeModule> mods;
    for (GenSet I : cox::subsets_of(W.all())) {
        const auto& P = minus ? bn.parabolic(I).Pm : bn.parabolic(I).P;
        auto c = coset_index(G, P, minus);
        FreeModule m;
        for (int g : c.reps) m.labels.push_back(minus ? "P-" + std::to_string(g) : std::to_string(g) + "P");
        out.cosets[I.bits()] = std::move(c);
        mods[I.bits()] = std::move(m);
    }
    auto cs = make_coeff_system<Integer>(W.all(), mods, [&](GenSet J, GenSet I) {
        const auto& rs = out.cosets.at(I.bits()).reps;
        const auto& cJ = out.cosets.at(J.bits());
        SparseMatrix<Integer> m(cJ.count(), static_cast<int>(rs.size()));
        for (std::size_t k = 0; k < rs.size(); ++k) m.set_col(static_cast<int>(k), {{cJ.id[rs[k]], Integer(1)}});
        return m;
    });
    out.assembled = assemble(cs, order);
    return out;
}

Complex<Integer> st_complex(const BNPair& bn, bool minus, const Order& order) { return st_model(bn, minus, order).assembled.complex; }

} // namespace hk::bn
