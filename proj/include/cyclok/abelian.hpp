#pragma once
// Finite abelian groups in invariant-factor form, homomorphisms between them,
// kernels, cokernels, images and primary parts.

#include "matrix.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cyclok {

using Elem = std::vector<Int>;

class FinAbGroup {
  public:
    FinAbGroup() = default;
    // factors must already be a divisibility chain of integers >= 2
    explicit FinAbGroup(std::vector<Int> invariant_factors) : d_(std::move(invariant_factors)) {
        for (std::size_t i = 0; i < d_.size(); ++i) {
            if (d_[i] < 2) throw std::invalid_argument("FinAbGroup: invariant factor < 2");
            if (i && d_[i] % d_[i - 1] != 0) throw std::invalid_argument("FinAbGroup: factors not a divisibility chain");
        }
    }
    static FinAbGroup trivial() { return FinAbGroup(); }
    static FinAbGroup cyclic(const Int& n);
    // any list of cyclic orders (0 rejected, 1 ignored)
    static FinAbGroup from_cyclic_orders(const std::vector<Int>& orders);

    const std::vector<Int>& invariant_factors() const { return d_; }
    std::size_t rank() const { return d_.size(); }
    const Int& factor(std::size_t i) const { return d_[i]; }
    Int order() const {
        Int r = 1;
        for (auto& x : d_) r *= x;
        return r;
    }
    Int exponent() const { return d_.empty() ? Int(1) : d_.back(); }
    bool is_trivial() const { return d_.empty(); }

    Elem zero() const { return Elem(d_.size()); }
    Elem gen(std::size_t j) const {
        Elem e = zero();
        e[j] = d_[j] == 1 ? 0 : 1;
        return e;
    }
    Elem reduce(Elem x) const {
        if (x.size() != d_.size()) throw std::invalid_argument("FinAbGroup: element has wrong length");
        for (std::size_t i = 0; i < d_.size(); ++i) x[i] = mod_nonneg(x[i], d_[i]);
        return x;
    }
    bool contains_canonical(const Elem& x) const {
        if (x.size() != d_.size()) return false;
        for (std::size_t i = 0; i < d_.size(); ++i)
            if (x[i] < 0 || x[i] >= d_[i]) return false;
        return true;
    }
    Int element_order(const Elem& x) const {
        Int o = 1;
        for (std::size_t i = 0; i < d_.size(); ++i) {
            Int g = gcd(Int(mod_nonneg(x[i], d_[i])), d_[i]);
            o = lcm(o, Int(d_[i] / g));
        }
        return o;
    }
    // relation lattice diag(d)
    IntMatrix relations() const { return IntMatrix::diagonal(d_); }

    bool operator==(const FinAbGroup& o) const { return d_ == o.d_; }

    std::string str() const {
        if (d_.empty()) return "0";
        std::ostringstream os;
        for (std::size_t i = 0; i < d_.size(); ++i) os << (i ? " + " : "") << "Z/" << d_[i];
        return os.str();
    }

  private:
    std::vector<Int> d_;
};

inline bool iso_eq(const FinAbGroup& a, const FinAbGroup& b) { return a == b; }

class AbHom {
  public:
    AbHom() = default;
    // column j = image of source generator j, in target coordinates
    AbHom(FinAbGroup src, FinAbGroup tgt, IntMatrix m) : src_(std::move(src)), tgt_(std::move(tgt)), m_(std::move(m)) {
        if (m_.rows() != tgt_.rank() || m_.cols() != src_.rank()) throw std::invalid_argument("AbHom: matrix shape mismatch");
        for (std::size_t i = 0; i < m_.rows(); ++i)
            for (std::size_t j = 0; j < m_.cols(); ++j) m_(i, j) = mod_nonneg(m_(i, j), tgt_.factor(i));
        for (std::size_t j = 0; j < src_.rank(); ++j)
            for (std::size_t i = 0; i < tgt_.rank(); ++i)
                if ((src_.factor(j) * m_(i, j)) % tgt_.factor(i) != 0)
                    throw std::invalid_argument("AbHom: matrix does not respect generator orders");
    }
    static AbHom identity(const FinAbGroup& g) { return AbHom(g, g, IntMatrix::identity(g.rank())); }
    static AbHom zero(const FinAbGroup& s, const FinAbGroup& t) { return AbHom(s, t, IntMatrix(t.rank(), s.rank())); }
    static AbHom scalar(const FinAbGroup& g, const Int& k) { return AbHom(g, g, IntMatrix::identity(g.rank()).scaled(k)); }

    const FinAbGroup& source() const { return src_; }
    const FinAbGroup& target() const { return tgt_; }
    const IntMatrix& matrix() const { return m_; }

    Elem operator()(const Elem& x) const { return tgt_.reduce(m_ * x); }

    bool is_zero() const {
        for (std::size_t i = 0; i < m_.rows(); ++i)
            for (std::size_t j = 0; j < m_.cols(); ++j)
                if (m_(i, j) != 0) return false;
        return true;
    }
    bool operator==(const AbHom& o) const { return src_ == o.src_ && tgt_ == o.tgt_ && m_ == o.m_; }

  private:
    FinAbGroup src_, tgt_;
    IntMatrix m_;
};

// g after f
inline AbHom compose(const AbHom& g, const AbHom& f) {
    if (!(f.target() == g.source())) throw std::invalid_argument("compose: groups do not match");
    return AbHom(f.source(), g.target(), g.matrix() * f.matrix());
}

inline AbHom add(const AbHom& f, const AbHom& g) {
    if (!(f.source() == g.source()) || !(f.target() == g.target())) throw std::invalid_argument("add: groups do not match");
    return AbHom(f.source(), f.target(), f.matrix() + g.matrix());
}

inline AbHom scale(const AbHom& f, const Int& k) { return AbHom(f.source(), f.target(), f.matrix().scaled(k)); }

// Z^k / (column span of R), with maps between Z^k coordinates and the canonical group
struct Presentation {
    FinAbGroup group;
    IntMatrix to_canonical;    // rank x k
    IntMatrix from_canonical;  // k x rank, column j is a preimage of generator j
};

inline Presentation present(const IntMatrix& R) {
    const std::size_t k = R.rows();
    Snf s = snf(R);
    std::vector<Int> d(k);
    for (std::size_t i = 0; i < k; ++i) {
        d[i] = i < R.cols() ? s.S(i, i) : Int(0);
        if (d[i] == 0) throw std::invalid_argument("present: relations do not define a finite group");
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < k; ++i)
        if (d[i] != 1) keep.push_back(i);
    std::vector<Int> fac;
    for (auto i : keep) fac.push_back(d[i]);
    Presentation p;
    p.group = FinAbGroup(fac);
    p.to_canonical = IntMatrix(keep.size(), k);
    p.from_canonical = IntMatrix(k, keep.size());
    for (std::size_t a = 0; a < keep.size(); ++a) {
        for (std::size_t j = 0; j < k; ++j) {
            p.to_canonical(a, j) = mod_nonneg(s.U(keep[a], j), fac[a]);
            p.from_canonical(j, a) = s.Uinv(j, keep[a]);
        }
    }
    return p;
}

inline FinAbGroup FinAbGroup::cyclic(const Int& n) { return from_cyclic_orders({n}); }

inline FinAbGroup FinAbGroup::from_cyclic_orders(const std::vector<Int>& orders) {
    std::vector<Int> d;
    for (auto& o : orders) {
        if (o <= 0) throw std::invalid_argument("FinAbGroup: cyclic order must be positive");
        d.push_back(o);
    }
    return present(IntMatrix::diagonal(d)).group;
}

struct Subgroup {
    FinAbGroup group;
    AbHom inclusion;  // group -> ambient
};

struct Quotient {
    FinAbGroup group;
    AbHom projection;  // ambient -> group
    IntMatrix section;  // ambient.rank x group.rank, column j lifts generator j
};

inline Quotient cokernel(const AbHom& f) {
    const FinAbGroup& T = f.target();
    Presentation p = present(IntMatrix::hcat(T.relations(), f.matrix()));
    return {p.group, AbHom(T, p.group, p.to_canonical), p.from_canonical};
}

// subgroup of G generated by the columns of B (in G coordinates)
inline Subgroup subgroup_generated(const FinAbGroup& G, const IntMatrix& B) {
    if (B.rows() != G.rank()) throw std::invalid_argument("subgroup_generated: generator length mismatch");
    const std::size_t q = B.cols();
    IntMatrix K = integer_kernel(IntMatrix::hcat(B, G.relations()));
    Presentation p = present(K.row_range(0, q));
    IntMatrix inc = B * p.from_canonical;
    return {p.group, AbHom(p.group, G, inc)};
}

inline Subgroup image(const AbHom& f) { return subgroup_generated(f.target(), f.matrix()); }

inline Subgroup kernel(const AbHom& f) {
    const FinAbGroup& S = f.source();
    IntMatrix K = integer_kernel(IntMatrix::hcat(f.matrix(), f.target().relations()));
    return subgroup_generated(S, K.row_range(0, S.rank()));
}

// all integer solutions of A y == b modulo relations diag(mods): one particular solution, if any
inline std::optional<std::vector<Int>> solve_mod(const IntMatrix& A, const std::vector<Int>& b, const std::vector<Int>& mods) {
    IntMatrix M = IntMatrix::hcat(A, IntMatrix::diagonal(mods));
    Snf s = snf(M);
    std::vector<Int> ub = s.U * b;
    std::vector<Int> z(M.cols());
    for (std::size_t i = 0; i < M.rows(); ++i) {
        Int di = i < M.cols() ? s.S(i, i) : Int(0);
        if (di == 0) {
            if (ub[i] != 0) return std::nullopt;
        } else {
            if (ub[i] % di != 0) return std::nullopt;
            z[i] = ub[i] / di;
        }
    }
    std::vector<Int> y = s.V * z;
    y.resize(A.cols());
    return y;
}

// the unique g' with inc . g' == g; requires image(g) inside image(inc) and inc injective
inline AbHom factor_through(const AbHom& g, const AbHom& inc) {
    if (!(g.target() == inc.target())) throw std::invalid_argument("factor_through: targets differ");
    const FinAbGroup& K = inc.source();
    IntMatrix out(K.rank(), g.source().rank());
    for (std::size_t j = 0; j < g.source().rank(); ++j) {
        auto y = solve_mod(inc.matrix(), g.matrix().col(j), g.target().invariant_factors());
        if (!y) throw std::invalid_argument("factor_through: map does not land in the subgroup");
        for (std::size_t i = 0; i < K.rank(); ++i) out(i, j) = (*y)[i];
    }
    return AbHom(g.source(), K, out);
}

inline bool is_injective(const AbHom& f) { return kernel(f).group.is_trivial(); }
inline bool is_surjective(const AbHom& f) { return cokernel(f).group.is_trivial(); }

inline Subgroup primary_subgroup(const FinAbGroup& G, const Int& p) {
    if (!is_prime(p)) throw std::invalid_argument("primary_part: " + p.get_str() + " is not prime");
    IntMatrix B(G.rank(), G.rank());
    for (std::size_t i = 0; i < G.rank(); ++i) {
        Int d = G.factor(i), pp = 1;
        while (d % p == 0) { d /= p; pp *= p; }
        B(i, i) = G.factor(i) / pp;
    }
    return subgroup_generated(G, B);
}

inline FinAbGroup primary_part(const FinAbGroup& G, const Int& p) { return primary_subgroup(G, p).group; }

struct DirectSum {
    FinAbGroup group;
    AbHom inj1, inj2, proj1, proj2;
};

inline DirectSum direct_sum(const FinAbGroup& A, const FinAbGroup& B) {
    std::vector<Int> d = A.invariant_factors();
    d.insert(d.end(), B.invariant_factors().begin(), B.invariant_factors().end());
    Presentation p = present(IntMatrix::diagonal(d));
    const std::size_t a = A.rank(), b = B.rank();
    IntMatrix I = IntMatrix::identity(a + b);
    IntMatrix in1 = p.to_canonical * I.col_range(0, a);
    IntMatrix in2 = p.to_canonical * I.col_range(a, a + b);
    IntMatrix pr = p.from_canonical;  // (a+b) x rank
    return {p.group, AbHom(A, p.group, in1), AbHom(B, p.group, in2), AbHom(p.group, A, pr.row_range(0, a)),
            AbHom(p.group, B, pr.row_range(a, a + b))};
}

// block map f (+) g between direct sums
inline AbHom direct_sum_map(const AbHom& f, const AbHom& g) {
    DirectSum s = direct_sum(f.source(), g.source());
    DirectSum t = direct_sum(f.target(), g.target());
    AbHom a = compose(t.inj1, compose(f, s.proj1));
    AbHom b = compose(t.inj2, compose(g, s.proj2));
    return add(a, b);
}

}  // namespace cyclok
