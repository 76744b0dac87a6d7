#pragma once
// Z C_2-modules: finite abelian groups with an involution, and their Tate cohomology.

#include "abelian.hpp"

namespace cyclok {

class Sign {
  public:
    static constexpr Sign plus() { return Sign(1); }
    static constexpr Sign minus() { return Sign(-1); }
    // (-1)^n
    static constexpr Sign parity(long n) { return Sign(n % 2 == 0 ? 1 : -1); }
    constexpr int value() const { return v_; }
    constexpr bool operator==(const Sign&) const = default;
    constexpr Sign operator-() const { return Sign(-v_); }

  private:
    constexpr explicit Sign(int v) : v_(v) {}
    int v_;
};

class InvModule {
  public:
    InvModule() : inv_(AbHom::identity(FinAbGroup())) {}
    InvModule(FinAbGroup g, AbHom involution) : g_(std::move(g)), inv_(std::move(involution)) {
        if (!(inv_.source() == g_) || !(inv_.target() == g_)) throw std::invalid_argument("InvModule: involution is not an endomorphism");
        if (!(compose(inv_, inv_) == AbHom::identity(g_))) throw std::invalid_argument("InvModule: map does not square to the identity");
    }
    static InvModule trivial_action(const FinAbGroup& g) { return InvModule(g, AbHom::identity(g)); }
    static InvModule negation(const FinAbGroup& g) { return InvModule(g, AbHom::scalar(g, -1)); }

    const FinAbGroup& group() const { return g_; }
    const AbHom& involution() const { return inv_; }
    Elem bar(const Elem& x) const { return inv_(x); }

  private:
    FinAbGroup g_;
    AbHom inv_;
};

// x -> x + eps * bar(x)
inline AbHom norm_map(const InvModule& M, Sign eps) {
    return add(AbHom::identity(M.group()), scale(M.involution(), eps.value()));
}

// {x : bar(x) = eps x}
inline Subgroup eigen_set(const InvModule& M, Sign eps) {
    return kernel(add(M.involution(), AbHom::scalar(M.group(), -eps.value())));
}

// {x + eps bar(x)}
inline Subgroup norm_image_set(const InvModule& M, Sign eps) { return image(norm_map(M, eps)); }

inline FinAbGroup tate(const InvModule& M, long n) {
    Sign eps = Sign::parity(n);
    Subgroup E = eigen_set(M, eps);
    AbHom N = factor_through(norm_map(M, eps), E.inclusion);
    return cokernel(N).group;
}

// restriction to a subgroup stable under the involution
inline InvModule restrict_to(const InvModule& M, const Subgroup& S) {
    AbHom r = factor_through(compose(M.involution(), S.inclusion), S.inclusion);
    return InvModule(S.group, r);
}

struct InvQuotient {
    InvModule module;
    AbHom projection;
};

// M / S for a stable subgroup S
inline InvQuotient quotient_by(const InvModule& M, const Subgroup& S) {
    Quotient q = cokernel(S.inclusion);
    // induced map on generators: project(bar(section))
    IntMatrix m = q.projection.matrix() * M.involution().matrix() * q.section;
    return {InvModule(q.group, AbHom(q.group, q.group, m)), q.projection};
}

inline InvModule primary_part(const InvModule& M, const Int& p) { return restrict_to(M, primary_subgroup(M.group(), p)); }

inline InvModule direct_sum(const InvModule& a, const InvModule& b) {
    return InvModule(direct_sum(a.group(), b.group()).group, direct_sum_map(a.involution(), b.involution()));
}

// A (+) A with (x, y) -> (bar y, bar x)
inline InvModule swap_square(const InvModule& A) {
    DirectSum s = direct_sum(A.group(), A.group());
    AbHom to1 = compose(s.inj1, compose(A.involution(), s.proj2));
    AbHom to2 = compose(s.inj2, compose(A.involution(), s.proj1));
    return InvModule(s.group, add(to1, to2));
}

}  // namespace cyclok
