#include "homkit/hecke.hpp"

#include "homkit/bimodule.hpp"
#include "homkit/linalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hk::hecke {

HParams::HParams(const CoxGroup& G) : G_(&G) {
    const auto& cls = G.generator_class();
    std::vector<int> seen;
    for (int s = 0; s < G.rank(); ++s) {
        auto it = std::find(seen.begin(), seen.end(), cls[s]);
        if (it == seen.end()) {
            seen.push_back(cls[s]);
            var_.push_back(static_cast<int>(seen.size()) - 1);
        } else {
            var_.push_back(static_cast<int>(it - seen.begin()));
        }
    }
    if (static_cast<int>(seen.size()) > kMaxVars) throw cox::UnsupportedType("too many parameter classes");
    // generators joined by an odd bond are conjugate and must share a parameter
    for (int s = 0; s < G.rank(); ++s)
        for (int t = 0; t < G.rank(); ++t)
            if (s != t && G.coxeter_m(s, t) % 2 == 1 && var_[s] != var_[t])
                throw std::logic_error("conjugate generators received different parameters");
    if (seen.size() == 1) {
        names_ = {"q"};
    } else {
        for (std::size_t i = 0; i < seen.size(); ++i) names_.push_back("q" + std::to_string(i + 1));
    }
    for (int s = 0; s < G.rank(); ++s) q_.push_back(Laurent::var(var_[s]));
}

std::vector<Rational> HParams::parse_values(const std::string& text) const {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        Rational v = parse_rational(part);
        if (is_zero(v)) throw std::invalid_argument("parameters must be nonzero");
        out.push_back(v);
    }
    if (static_cast<int>(out.size()) != nvars())
        throw std::invalid_argument("expected " + std::to_string(nvars()) + " parameter value(s), got '" + text + "'");
    return out;
}

HeckeElem h_basis(Elem w, Laurent c) {
    if (c.is_zero()) return {};
    return {{w, std::move(c)}};
}

HeckeElem h_add(const HeckeElem& a, const HeckeElem& b, const Laurent& c) {
    HeckeElem out;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            Laurent v = c * b[j].second;
            if (!v.is_zero()) out.emplace_back(b[j].first, std::move(v));
            ++j;
        } else {
            Laurent v = a[i].second + c * b[j].second;
            if (!v.is_zero()) out.emplace_back(a[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

HeckeElem h_scale(const Laurent& c, const HeckeElem& a) {
    HeckeElem out;
    for (const auto& [w, x] : a) {
        Laurent v = c * x;
        if (!v.is_zero()) out.emplace_back(w, std::move(v));
    }
    return out;
}

namespace {

template <class Step> HeckeElem gen_mul(const HParams& P, const HeckeElem& x, int s, Step step) {
    const auto& G = P.group();
    Accumulator<Laurent> acc(G.size());
    const Laurent& q = P.q(s);
    const Laurent qm1 = q - Laurent(1);
    for (const auto& [w, c] : x) {
        Elem ws = step(w);
        if (G.length(ws) > G.length(w)) {
            acc.add(ws, c);
        } else {
            acc.add(w, qm1 * c);
            acc.add(ws, q * c);
        }
    }
    return acc.take();
}

} // namespace

HeckeElem h_rmul_gen(const HParams& P, const HeckeElem& x, int s) {
    return gen_mul(P, x, s, [&](Elem w) { return P.group().rmul_gen(w, s); });
}

HeckeElem h_lmul_gen(const HParams& P, int s, const HeckeElem& x) {
    return gen_mul(P, x, s, [&](Elem w) { return P.group().lmul_gen(s, w); });
}

HeckeElem h_rmul_word(const HParams& P, HeckeElem x, const std::vector<int>& word) {
    for (int s : word) x = h_rmul_gen(P, x, s);
    return x;
}

HeckeElem h_mul(const HParams& P, const HeckeElem& x, const HeckeElem& y) {
    const auto& G = P.group();
    HeckeElem out;
    for (const auto& [z, c] : y) out = h_add(out, h_rmul_word(P, x, G.reduced_word(z)), c);
    return out;
}

HeckeElem h_inv(const HParams& P, Elem w) {
    const auto& G = P.group();
    auto word = G.reduced_word(w);
    HeckeElem x = h_basis(G.identity());
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        int s = *it;
        Laurent qi = Laurent::var(P.var_of(s), -1);
        // x h_s^-1 = q^-1 x h_s - (1 - q^-1) x
        x = h_add(h_scale(qi, h_rmul_gen(P, x, s)), x, qi - Laurent(1));
    }
    return x;
}

HeckeElem alpha(const HParams& P, const HeckeElem& x) {
    const auto& G = P.group();
    HeckeElem out;
    for (const auto& [w, c] : x) {
        HeckeElem y = h_basis(G.identity());
        for (int s : G.reduced_word(w)) y = h_add(h_scale(Laurent(-1), h_rmul_gen(P, y, s)), y, P.q(s) - Laurent(1));
        out = h_add(out, y, c);
    }
    return out;
}

Report check_alpha(const HParams& P) {
    const auto& G = P.group();
    Report r;
    std::vector<HeckeElem> img;
    for (int s = 0; s < G.rank(); ++s) img.push_back(alpha(P, h_basis(G.gen(s))));
    for (int s = 0; s < G.rank(); ++s) {
        auto sq = h_mul(P, img[s], img[s]);
        auto rhs = h_add(h_scale(P.q(s) - Laurent(1), img[s]), h_basis(G.identity(), P.q(s)));
        r.add("alpha preserves the quadratic relation of s" + std::to_string(s + 1), sq == rhs);
        r.add("alpha^2 fixes h_s" + std::to_string(s + 1), alpha(P, img[s]) == h_basis(G.gen(s)));
    }
    for (int s = 0; s < G.rank(); ++s)
        for (int t = s + 1; t < G.rank(); ++t) {
            int m = G.coxeter_m(s, t);
            HeckeElem a = h_basis(G.identity()), b = a;
            for (int k = 0; k < m; ++k) {
                a = h_mul(P, a, img[k % 2 == 0 ? s : t]);
                b = h_mul(P, b, img[k % 2 == 0 ? t : s]);
            }
            r.add("alpha preserves the braid relation of s" + std::to_string(s + 1) + ",s" + std::to_string(t + 1), a == b);
        }
    return r;
}

std::string h_to_string(const HParams& P, const HeckeElem& x) {
    if (x.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : x) {
        if (!out.empty()) out += " + ";
        out += "(" + c.to_string(P.names()) + ")h_" + P.group().word_string(w);
    }
    return out;
}

TensorSpace::TensorSpace(const CoxGroup& G, GenSet K, GenSet right)
    : G_(&G), K_(K), right_(right), lpos_(G.size(), -1), rpos_(G.size(), -1) {
    if (!K.subset_of(right)) throw std::invalid_argument("tensor level must lie in the right parabolic");
    left_ = G.dist_reps(GenSet(), K);
    rights_ = G.parabolic(right);
    std::stable_sort(rights_.begin(), rights_.end(), [&](Elem a, Elem b) {
        return G.length(a) != G.length(b) ? G.length(a) < G.length(b) : a < b;
    });
    for (std::size_t i = 0; i < left_.size(); ++i) lpos_[left_[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < rights_.size(); ++i) rpos_[rights_[i]] = static_cast<int>(i);
}

int TensorSpace::index(Elem d, Elem w) const {
    if (lpos_[d] < 0) throw std::invalid_argument("left factor is not a distinguished representative");
    if (rpos_[w] < 0) throw std::invalid_argument("right factor leaves the tensor space");
    return lpos_[d] * static_cast<int>(rights_.size()) + rpos_[w];
}

FreeModule TensorSpace::module() const {
    FreeModule m;
    for (Elem d : left_)
        for (Elem w : rights_) m.labels.push_back(G_->word_string(d) + "|" + G_->word_string(w));
    return m;
}

SparseVec<Laurent> tensor_normalize(const HParams& P, const TensorSpace& T, const HeckeElem& x, const HeckeElem& y) {
    const auto& G = P.group();
    Accumulator<Laurent> acc(T.dim());
    for (const auto& [z, c] : x) {
        auto sp = G.coset_min_rep(T.level(), z, cox::Side::left); // z = d u
        HeckeElem uy = y;
        auto word = G.reduced_word(sp.u);
        for (auto it = word.rbegin(); it != word.rend(); ++it) uy = h_lmul_gen(P, *it, uy);
        for (const auto& [w, c2] : uy) acc.add(T.index(sp.d, w), c * c2);
    }
    return acc.take();
}

SparseMatrix<Laurent> tensor_action(const HParams& P, const TensorSpace& T, const HeckeElem& x, const HeckeElem& y) {
    const auto& G = P.group();
    SparseMatrix<Laurent> m(T.dim(), T.dim());
    const bool left_id = x == h_basis(G.identity()), right_id = y == h_basis(G.identity());
    for (int i = 0; i < T.dim(); ++i) {
        auto [d, w] = T.at(i);
        HeckeElem l = left_id ? h_basis(d) : h_mul(P, x, h_basis(d));
        HeckeElem r = right_id ? h_basis(w) : h_mul(P, h_basis(w), y);
        m.set_col(i, tensor_normalize(P, T, l, r));
    }
    return m;
}

CoeffSystem<Laurent> tensor_system(const HParams& P, GenSet universe, GenSet right) {
    const auto& G = P.group();
    std::map<std::uint32_t, TensorSpace> spaces;
    std::map<std::uint32_t, FreeModule> mods;
    for (GenSet K : cox::subsets_of(universe)) {
        auto it = spaces.emplace(K.bits(), TensorSpace(G, K, right)).first;
        mods[K.bits()] = it->second.module();
    }
    return make_coeff_system<Laurent>(universe, std::move(mods), [&](GenSet J, GenSet I) {
        const auto& src = spaces.at(I.bits());
        const auto& dst = spaces.at(J.bits());
        SparseMatrix<Laurent> m(dst.dim(), src.dim());
        for (int i = 0; i < src.dim(); ++i) {
            auto [d, w] = src.at(i);
            m.set_col(i, tensor_normalize(P, dst, h_basis(d), h_basis(w)));
        }
        return m;
    });
}

XHModel build_XH(const HParams& P, const Order& order) {
    const auto& G = P.group();
    XHModel M;
    auto cs = tensor_system(P, G.all(), G.all());
    auto as = assemble(cs, order);
    M.X = std::move(as.complex);
    M.block = std::move(as.block);
    for (GenSet I : cox::subsets_of(G.all())) M.spaces.emplace(I.bits(), TensorSpace(G, I, G.all()));
    return M;
}

GradedMap<Laurent> xh_action(const HParams& P, const XHModel& M, const HeckeElem& x, cox::Side side) {
    const auto& G = P.group();
    std::map<int, MatrixBuilder<Laurent>> bld;
    for (int deg = M.X.lo; deg <= M.X.hi(); ++deg) bld.emplace(deg, MatrixBuilder<Laurent>(M.X.dim(deg), M.X.dim(deg)));
    const HeckeElem one = h_basis(G.identity());
    for (const auto& [bits, T] : M.spaces) {
        auto [deg, off] = M.block.at(bits);
        auto a = side == cox::Side::left ? tensor_action(P, T, x, one) : tensor_action(P, T, one, x);
        bld.at(deg).add_block(a, off, off);
    }
    GradedMap<Laurent> out{0, {}};
    for (auto& [deg, b] : bld) out.blocks[deg] = b.build();
    return out;
}

SparseVec<Laurent> xi(const HParams& P, const XHModel& M) {
    const auto& G = P.group();
    const auto& T = M.spaces.at(0);
    Accumulator<Laurent> acc(T.dim());
    for (Elem w = 0; w < G.size(); ++w) {
        Laurent sign = G.length(w) % 2 == 0 ? Laurent(1) : Laurent(-1);
        for (const auto& [i, c] : tensor_normalize(P, T, h_basis(w), h_inv(P, w))) acc.add(i, sign * c);
    }
    return acc.take();
}

namespace {

SparseVec<Laurent> scale_vec(const Laurent& c, const SparseVec<Laurent>& v) {
    SparseVec<Laurent> out;
    for (const auto& [i, x] : v) {
        Laurent y = c * x;
        if (!y.is_zero()) out.emplace_back(i, std::move(y));
    }
    return out;
}

} // namespace

Report remark18_suite(const HParams& P, const std::vector<std::vector<Rational>>& specializations) {
    const auto& G = P.group();
    Report r;
    auto M = build_XH(P, default_order(G.rank()));
    r.add("X(H) is a complex", verify_complex(M.X));
    auto x = xi(P, M);
    const auto d0 = M.X.d(0);
    r.add("d0 xi = 0", d0.apply(x).empty());
    for (int s = 0; s < G.rank(); ++s) {
        const auto hs = h_basis(G.gen(s));
        auto L = xh_action(P, M, hs, cox::Side::left).blocks.at(0);
        auto R = xh_action(P, M, hs, cox::Side::right).blocks.at(0);
        auto Ra = xh_action(P, M, alpha(P, hs), cox::Side::right).blocks.at(0);
        std::string tag = "s" + std::to_string(s + 1);
        r.add("h_s xi h_s = -q_s xi for " + tag, L.apply(R.apply(x)) == scale_vec(-P.q(s), x));
        r.add("h_s xi = xi alpha(h_s) for " + tag, L.apply(x) == Ra.apply(x));
    }
    r.merge(check_alpha(P));
    // xi h_w = sum_v (-1)^{l(v)} h_v (x) h_v^-1 h_w, at level 0 no normalization is needed
    const auto& T = M.spaces.at(0);
    std::vector<HeckeElem> inv(G.size());
    for (Elem v = 0; v < G.size(); ++v) inv[v] = h_inv(P, v);
    SparseMatrix<Laurent> xiH(T.dim(), G.size());
    bool in_kernel = true;
    for (Elem w = 0; w < G.size(); ++w) {
        Accumulator<Laurent> acc(T.dim());
        for (Elem v = 0; v < G.size(); ++v) {
            Laurent sign = G.length(v) % 2 == 0 ? Laurent(1) : Laurent(-1);
            for (const auto& [u, c] : h_mul(P, inv[v], h_basis(w))) acc.add(T.index(v, u), sign * c);
        }
        auto col = acc.take();
        if (!d0.apply(col).empty()) in_kernel = false;
        xiH.set_col(w, std::move(col));
    }
    r.add("xi h_w lies in ker d0 for every w", in_kernel);
    const int n = G.size();
    for (const auto& vals : specializations) {
        std::string tag;
        for (const auto& v : vals) tag += (tag.empty() ? "" : ",") + scalar_string(v);
        int rk = rank(specialize(d0, vals));
        r.add("rank d0 = |W|^2 - |W| at q=" + tag, rk == n * n - n, "rank " + std::to_string(rk));
        int rx = rank(specialize(xiH, vals));
        r.add("xi h_w independent at q=" + tag, rx == n, "rank " + std::to_string(rx));
    }
    return r;
}

DualityResult duality_homology_check(const HParams& P, std::span<const Rational> values) {
    const auto& G = P.group();
    for (const auto& v : values)
        if (is_zero(v)) throw std::invalid_argument("singular specialization");
    if (static_cast<int>(values.size()) != P.nvars()) throw std::invalid_argument("wrong number of parameter values");
    auto M = build_XH(P, default_order(G.rank()));
    ActedComplex X;
    X.X = specialize(M.X, values);
    auto spec = [&](const GradedMap<Laurent>& f) {
        GradedMap<Rational> g{f.shift, {}};
        for (const auto& [deg, m] : f.blocks) g.blocks[deg] = specialize(m, values);
        return g;
    };
    for (int s = 0; s < G.rank(); ++s) {
        X.left.push_back(spec(xh_action(P, M, h_basis(G.gen(s)), cox::Side::left)));
        X.right.push_back(spec(xh_action(P, M, h_basis(G.gen(s)), cox::Side::right)));
    }
    auto T = tensor_over(X, dual_complex(X));
    DualityResult out;
    out.lo = T.lo;
    out.ranks = homology_ranks(T);
    out.ok = verify_complex(T).ok;
    for (int deg = T.lo; deg <= T.hi(); ++deg) {
        int expect = deg == 0 ? G.size() : 0;
        if (out.ranks[deg - T.lo] != expect) out.ok = false;
    }
    if (!T.in_range(0)) out.ok = false;
    return out;
}

} // namespace hk::hecke
