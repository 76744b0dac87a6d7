#pragma once
// Residue rings F_p[zeta_n] and F_p[lambda_n], their unit groups, the quotients
// F_p[zeta_n]^x / F_p[lambda_n]^x, the map Psi^+_m and the groups V~_m.

#include "finite_field.hpp"
#include "involutive.hpp"
#include "memo.hpp"
#include "zpoly.hpp"

#include <memory>
#include <utility>

namespace cyclok {

// F_p[x]/Phi_n split as a product of copies of F_{p^f}: factor i is evaluation at omega^{c_i}
class ResidueRingUnits {
  public:
    ResidueRingUnits(u64 p, u64 n) : p_(p), n_(n) {
        if (!is_prime(p)) throw std::invalid_argument("residue_units: p = " + std::to_string(p) + " is not prime");
        if (n < 1) throw std::invalid_argument("residue_units: n must be positive");
        if (std::gcd(p, n) != 1) throw std::invalid_argument("residue_units: gcd(p, n) != 1");
        f_ = static_cast<long>(mult_order(p % n, n));
        field_ = std::make_shared<GF>(p, f_);
        fac_ = factor_prime_power_minus_one(p, f_);
        gamma_ = primitive_element(*field_, fac_);
        Int N = field_->unit_order();
        if (N % n != 0) throw ConsistencyError("residue_units: n does not divide p^f - 1");
        omega_ = field_->pow(gamma_, N / n);
        dlog_ = std::make_shared<CyclicDlog>(field_.get(), gamma_, N, fac_);

        // coset representatives of <p> in (Z/n)^x, with -c placed right after c when it is a different coset
        std::vector<char> seen(n, 0);
        auto mark = [&](u64 c) {
            u64 x = c % n;
            for (long j = 0; j < f_; ++j, x = mulmod(x, p, n)) seen[x] = 1;
        };
        if (n == 1) reps_.push_back(0);
        for (u64 c = 1; c < n; ++c) {
            if (std::gcd(c, n) != 1 || seen[c]) continue;
            reps_.push_back(c);
            mark(c);
            if (!seen[n - c]) {
                reps_.push_back(n - c);
                mark(n - c);
            }
        }
        if (reps_.size() * static_cast<u64>(f_) != totient(n)) throw ConsistencyError("residue_units: coset count mismatch");

        points_.clear();
        for (u64 c : reps_) points_.push_back(field_->pow(omega_, from_u64(c)));
        // minimal polynomials; their product must be Phi_n mod p
        fp::Poly prod{1};
        for (auto& pt : points_) {
            std::vector<GF::E> coeffs{field_->one()};
            GF::E r = pt;
            for (long j = 0; j < f_; ++j) {
                std::vector<GF::E> next(coeffs.size() + 1, field_->zero());
                for (std::size_t k = 0; k < coeffs.size(); ++k) {
                    next[k + 1] = field_->add(next[k + 1], coeffs[k]);
                    next[k] = field_->sub(next[k], field_->mul(coeffs[k], r));
                }
                coeffs = std::move(next);
                r = field_->frobenius(r);
            }
            fp::Poly mp;
            for (auto& c : coeffs) {
                for (long t = 1; t < f_; ++t)
                    if (c[t] != 0) throw ConsistencyError("residue_units: minimal polynomial not defined over F_p");
                mp.push_back(c[0]);
            }
            minpolys_.push_back(mp);
            prod = fp::mul(prod, mp, p);
        }
        if (prod != reduce_mod_p(cyclotomic_poly(n), p)) throw ConsistencyError("residue_units: factors do not multiply to Phi_n");

        std::vector<Int> orders(reps_.size(), N);
        group_ = FinAbGroup::from_cyclic_orders(orders);
        coords_ = N >= 2;

        // conjugation x -> x^{-1}: log_i(bar a) = p^j log_k(a) where c_k p^j = -c_i
        IntMatrix C(group_.rank(), group_.rank());
        if (coords_) {
            for (std::size_t i = 0; i < reps_.size(); ++i) {
                u64 target = (n - reps_[i] % n) % n;
                bool found = false;
                for (std::size_t k = 0; k < reps_.size() && !found; ++k) {
                    u64 x = reps_[k] % n;
                    Int pj = 1;
                    for (long j = 0; j < f_; ++j, x = mulmod(x, p, n), pj *= from_u64(p)) {
                        if (x == target) {
                            C(i, k) = pj;
                            found = true;
                            break;
                        }
                    }
                }
                if (!found) throw ConsistencyError("residue_units: conjugate coset not found");
            }
        }
        conj_ = AbHom(group_, group_, C);
    }

    u64 p() const { return p_; }
    u64 n() const { return n_; }
    long field_degree() const { return f_; }
    std::size_t factor_count() const { return reps_.size(); }
    const GF& field() const { return *field_; }
    const GF::E& generator() const { return gamma_; }
    const GF::E& root_of_unity() const { return omega_; }
    const std::vector<u64>& representatives() const { return reps_; }
    const std::vector<fp::Poly>& factor_polynomials() const { return minpolys_; }
    const FinAbGroup& group() const { return group_; }
    Int order() const { return group_.order(); }
    Int factor_order() const { return field_->unit_order(); }
    const std::map<Int, int>& factor_order_factorization() const { return fac_; }
    // the involution induced by zeta -> zeta^{-1}
    const AbHom& conjugation() const { return conj_; }

    std::vector<GF::E> evaluate(const fp::Poly& a) const {
        std::vector<GF::E> out;
        for (auto& pt : points_) {
            GF::E acc = field_->zero();
            for (std::size_t k = a.size(); k-- > 0;) acc = field_->add(field_->mul(acc, pt), field_->scalar(a[k] % p_));
            out.push_back(acc);
        }
        return out;
    }

    Int log(const GF::E& x) const { return dlog_->log(x); }

    // factorwise discrete log of a ring element given as a polynomial in zeta_n
    Elem dlog(const fp::Poly& a) const {
        auto vals = evaluate(a);
        Elem e;
        for (auto& v : vals) {
            if (field_->is_zero(v)) throw std::domain_error("residue_units: element is not a unit");
            if (coords_) e.push_back(log(v));
        }
        return group_.reduce(e);
    }

  private:
    u64 p_, n_;
    long f_ = 1;
    std::shared_ptr<GF> field_;
    std::map<Int, int> fac_;
    GF::E gamma_, omega_;
    std::shared_ptr<CyclicDlog> dlog_;
    std::vector<u64> reps_;
    std::vector<GF::E> points_;
    std::vector<fp::Poly> minpolys_;
    FinAbGroup group_;
    bool coords_ = true;
    AbHom conj_;
};

inline std::shared_ptr<const ResidueRingUnits> residue_units(u64 p, u64 n) {
    static Memo<std::pair<u64, u64>, ResidueRingUnits> memo;
    if (!is_prime(p)) throw std::invalid_argument("residue_units: p = " + std::to_string(p) + " is not prime");
    if (n < 1 || std::gcd(p, n) != 1) throw std::invalid_argument("residue_units: need n >= 1 and gcd(p, n) = 1");
    return memo.get({p, n}, [&] { return ResidueRingUnits(p, n); });
}

// units of F_p[lambda_n] inside F_p[zeta_n]^x
class LambdaUnits {
  public:
    LambdaUnits(u64 p, u64 n) : ring_(residue_units(p, n)) {
        const auto& R = *ring_;
        fprime_ = static_cast<long>(mult_order_pm(p % n, n));
        const long f = R.field_degree();
        const auto& reps = R.representatives();
        Int q1 = R.factor_order();
        Int sub1 = ipow(from_u64(p), static_cast<unsigned long>(fprime_)) - 1;
        std::vector<std::vector<std::pair<std::size_t, Int>>> cols;  // per lambda factor: (ring coordinate, exponent)
        for (std::size_t i = 0; i < reps.size();) {
            bool paired = i + 1 < reps.size() && n > 2 && (reps[i] + reps[i + 1]) % n == 0 && !same_coset(reps[i], n - reps[i] % n, p, n, f);
            if (paired) {
                if (fprime_ != f) throw ConsistencyError("lambda_units: paired cosets need f' = f");
                cols.push_back({{i, Int(1)}, {i + 1, Int(1)}});
                i += 2;
            } else {
                if (n > 2 && 2 * fprime_ != f) throw ConsistencyError("lambda_units: self-conjugate coset needs f = 2f'");
                cols.push_back({{i, Int(q1 / sub1)}});
                i += 1;
            }
        }
        count_ = cols.size();
        if (count_ * 2 * static_cast<u64>(fprime_) != (n > 2 ? totient(n) : 2 * static_cast<u64>(fprime_)))
            throw ConsistencyError("lambda_units: factor count mismatch");
        std::vector<Int> orders(count_, sub1);
        group_ = FinAbGroup::from_cyclic_orders(orders);
        IntMatrix E(R.group().rank(), group_.rank());
        if (sub1 >= 2 && R.group().rank() > 0)
            for (std::size_t j = 0; j < cols.size(); ++j)
                for (auto& [i, e] : cols[j]) E(i, j) = e;
        embedding_ = AbHom(group_, R.group(), E);
        if (!is_injective(embedding_)) throw ConsistencyError("lambda_units: embedding is not injective");
    }

    const ResidueRingUnits& ring() const { return *ring_; }
    long field_degree() const { return fprime_; }
    std::size_t factor_count() const { return count_; }
    const FinAbGroup& group() const { return group_; }
    const AbHom& embedding() const { return embedding_; }

  private:
    static bool same_coset(u64 a, u64 b, u64 p, u64 n, long f) {
        u64 x = a % n;
        for (long j = 0; j < f; ++j, x = mulmod(x, p, n))
            if (x == b % n) return true;
        return false;
    }

    std::shared_ptr<const ResidueRingUnits> ring_;
    long fprime_ = 1;
    std::size_t count_ = 0;
    FinAbGroup group_;
    AbHom embedding_;
};

inline std::shared_ptr<const LambdaUnits> lambda_units(u64 p, u64 n) {
    static Memo<std::pair<u64, u64>, LambdaUnits> memo;
    residue_units(p, n);  // validates
    return memo.get({p, n}, [&] { return LambdaUnits(p, n); });
}

// F_p[zeta_n]^x / F_p[lambda_n]^x with the involution induced by conjugation
class UnitQuotient {
  public:
    UnitQuotient(u64 p, u64 n) : lambda_(lambda_units(p, n)) {
        const auto& R = lambda_->ring();
        q_ = cokernel(lambda_->embedding());
        IntMatrix m = q_.projection.matrix() * R.conjugation().matrix() * q_.section;
        module_ = InvModule(q_.group, AbHom(q_.group, q_.group, m));
        if (q_.group.order() * lambda_->group().order() != R.order()) throw ConsistencyError("unit_quotient: order mismatch");
    }

    const ResidueRingUnits& ring() const { return lambda_->ring(); }
    const LambdaUnits& lambda() const { return *lambda_; }
    const FinAbGroup& group() const { return q_.group; }
    const AbHom& projection() const { return q_.projection; }
    const InvModule& module() const { return module_; }

    Elem project(const fp::Poly& a) const { return q_.projection(ring().dlog(a)); }

  private:
    std::shared_ptr<const LambdaUnits> lambda_;
    Quotient q_;
    InvModule module_;
};

inline std::shared_ptr<const UnitQuotient> unit_quotient(u64 p, u64 n) {
    static Memo<std::pair<u64, u64>, UnitQuotient> memo;
    residue_units(p, n);
    return memo.get({p, n}, [&] { return UnitQuotient(p, n); });
}

// Psi^+_m for square-free m: the images of zeta_{m'} and (if m' is composite) 1 - zeta_{m'},
// m' the odd part of m, in the sum over primes r | m of F_r[zeta_k]^x / F_r[lambda_k]^x
struct PsiPlus {
    u64 m = 0, m_odd = 0;
    struct Part {
        u64 prime, k;
        std::shared_ptr<const UnitQuotient> quotient;
        Elem zeta_image, one_minus_zeta_image;
    };
    std::vector<Part> parts;
    bool has_cyclotomic_unit = false;
    FinAbGroup source;                 // Z/ord(zeta) (+) Z/ord(1 - zeta)
    Presentation target_presentation;  // of the concatenated part coordinates
    AbHom hom;
    InvModule target_module;  // target with the conjugation involution

    const FinAbGroup& target() const { return target_presentation.group; }

    // concatenated part coordinates -> canonical target element
    Elem combine(const std::vector<Elem>& per_part) const {
        Elem flat;
        for (auto& e : per_part) flat.insert(flat.end(), e.begin(), e.end());
        return target().reduce(target_presentation.to_canonical * flat);
    }
};

inline void require_vtilde_scope(u64 m) {
    if (m < 2) throw ScopeError("V~_m needs m >= 2");
    if (!is_squarefree(m)) throw ScopeError("V~_m is only defined for square-free m; " + std::to_string(m) + " is not square-free");
}

inline PsiPlus build_psi_plus(u64 m) {
    require_vtilde_scope(m);
    PsiPlus out;
    out.m = m;
    out.m_odd = odd_part(m);
    auto odd_primes = prime_divisors(out.m_odd);
    out.has_cyclotomic_unit = odd_primes.size() >= 2;
    std::vector<Int> part_factors;
    for (u64 r : prime_divisors(m)) {
        u64 k = r == 2 ? out.m_odd : out.m_odd / r;
        PsiPlus::Part part{r, k, unit_quotient(r, k), {}, {}};
        // zeta_{m'} maps to the primitive k-th root x; 1 - zeta_{m'} to 1 - x
        fp::Poly x = k == 1 ? fp::Poly{1} : fp::Poly{0, 1};
        fp::Poly one_minus = fp::sub(fp::Poly{1}, x, r);
        part.zeta_image = part.quotient->project(x);
        if (out.has_cyclotomic_unit) part.one_minus_zeta_image = part.quotient->project(one_minus);
        for (auto& d : part.quotient->group().invariant_factors()) part_factors.push_back(d);
        out.parts.push_back(std::move(part));
    }
    out.target_presentation = present(IntMatrix::diagonal(part_factors));
    const auto& T = out.target();

    std::vector<Elem> zs, os;
    for (auto& pt : out.parts) {
        zs.push_back(pt.zeta_image);
        os.push_back(out.has_cyclotomic_unit ? pt.one_minus_zeta_image : pt.quotient->group().zero());
    }
    Elem z = out.combine(zs), o = out.combine(os);
    std::vector<Int> src_orders{T.element_order(z)};
    if (out.has_cyclotomic_unit) src_orders.push_back(T.element_order(o));
    // build the source as Z/a (+) Z/b and map its canonical generators through the cyclic coordinates
    Presentation sp = present(IntMatrix::diagonal(src_orders));
    out.source = sp.group;
    IntMatrix cyc(T.rank(), src_orders.size());
    for (std::size_t i = 0; i < T.rank(); ++i) {
        cyc(i, 0) = z[i];
        if (out.has_cyclotomic_unit) cyc(i, 1) = o[i];
    }
    out.hom = AbHom(out.source, T, cyc * sp.from_canonical);

    // conjugation, block by block
    std::size_t total = part_factors.size(), pos = 0;
    IntMatrix C(total, total);
    for (auto& pt : out.parts) {
        const auto& mm = pt.quotient->module().involution().matrix();
        for (std::size_t i = 0; i < mm.rows(); ++i)
            for (std::size_t j = 0; j < mm.cols(); ++j) C(pos + i, pos + j) = mm(i, j);
        pos += mm.rows();
    }
    IntMatrix tc = out.target_presentation.to_canonical * C * out.target_presentation.from_canonical;
    out.target_module = InvModule(T, AbHom(T, T, tc));
    return out;
}

inline std::shared_ptr<const PsiPlus> psi_plus_presentation(u64 m) {
    static Memo<u64, PsiPlus> memo;
    require_vtilde_scope(m);
    if (is_prime(m)) throw ScopeError("psi_plus_presentation: m = " + std::to_string(m) + " is prime; V~_p is trivial by definition");
    return memo.get(m, [&] { return build_psi_plus(m); });
}

// V~_m with its involution
inline std::shared_ptr<const InvModule> vtilde_module(u64 m) {
    static Memo<u64, InvModule> memo;
    require_vtilde_scope(m);
    return memo.get(m, [&] {
        if (is_prime(m)) return InvModule();
        auto psi = psi_plus_presentation(m);
        Quotient q = cokernel(psi->hom);
        IntMatrix inv = q.projection.matrix() * psi->target_module.involution().matrix() * q.section;
        return InvModule(q.group, AbHom(q.group, q.group, inv));
    });
}

inline FinAbGroup vtilde(u64 m) { return vtilde_module(m)->group(); }

// |target of Psi^+_m| / (m' * [2 if m' composite]); divides |V~_m|
inline Int c_bound(u64 m) {
    require_vtilde_scope(m);
    if (is_prime(m)) throw ScopeError("c_bound: m = " + std::to_string(m) + " is prime");
    auto psi = psi_plus_presentation(m);
    Int den = from_u64(psi->m_odd) * (psi->has_cyclotomic_unit ? 2 : 1);
    Int num = psi->target().order();
    if (num % den != 0) throw ConsistencyError("c_bound(" + std::to_string(m) + "): ratio " + num.get_str() + "/" + den.get_str() + " is not integral");
    return num / den;
}

}  // namespace cyclok
