#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace treecoh {

// Coefficient capacity for ring elements.  Large enough for the residue
// fields used anywhere in the laboratory (up to F_81 for quadratic
// extensions of F_9).
inline constexpr int kMaxDeg = 8;

// Element of GR(p^k, f) in the polynomial basis: coeffs[i] is the
// coefficient of x^i, an integer in [0, p^k).  Coefficients beyond f are 0.
using RElt = std::array<std::int64_t, kMaxDeg>;

// The Galois ring GR(p^k, f) = (Z/p^k)[x]/(h), where h is the least monic
// degree-f lift (constant-coefficient-first counter order) whose reduction
// mod p is irreducible over F_p.  With k = 1 this is the field F_q, q = p^f;
// with f = 1 it is Z/p^k.  It models the quotients o/p^k of the valuation
// ring of the unramified extension with residue field F_q and uniformizer p.
class GaloisRing {
public:
    GaloisRing(std::int64_t p, int f, int k) : p_(p), f_(f), k_(k) {
        if (p == 2) throw std::domain_error("odd residue characteristic required");
        if (!is_prime(p)) throw std::domain_error("ring: p must be prime");
        if (f < 1 || f > kMaxDeg) throw std::domain_error("ring: bad extension degree");
        if (k < 1) throw std::domain_error("ring: precision must be >= 1");
        pk_ = 1;
        for (int i = 0; i < k; ++i) {
            if (pk_ > (1LL << 26) / p) throw std::overflow_error("ring: p^k too large");
            pk_ *= p;
        }
        q_ = 1;
        for (int i = 0; i < f; ++i) q_ *= p;
        order_ = 1;
        for (int i = 0; i < f; ++i) {
            if (order_ > INT64_MAX / pk_) throw std::overflow_error("ring: ring order too large");
            order_ *= pk_;
        }
        find_modulus();
    }

    std::int64_t p() const { return p_; }
    int f() const { return f_; }
    int k() const { return k_; }
    std::int64_t q() const { return q_; }          // residue field size p^f
    std::int64_t pk() const { return pk_; }        // coefficient modulus p^k
    std::int64_t order() const { return order_; }  // ring size p^(f k)
    std::int64_t unit_count() const { return order_ - order_ / q_; }

    // Lower-degree coefficients of the modulus h = x^f + sum h[i] x^i.
    const RElt& modulus() const { return h_; }

    // ----- element construction -----
    RElt zero() const { return RElt{}; }
    RElt one() const { return from_int(1); }
    RElt from_int(std::int64_t c) const {
        RElt r{};
        r[0] = mod(c, pk_);
        return r;
    }
    RElt make(std::initializer_list<std::int64_t> cs) const {
        if ((int)cs.size() > f_) throw std::domain_error("ring: too many coefficients");
        RElt r{};
        int i = 0;
        for (auto c : cs) r[i++] = mod(c, pk_);
        return r;
    }

    // Integer encoding: little-endian base-p^k digits.  Bijective with the
    // ring; encode(from_int(c)) = c for 0 <= c < p^k.
    std::int64_t encode(const RElt& a) const {
        std::int64_t v = 0;
        for (int i = f_ - 1; i >= 0; --i) v = v * pk_ + a[i];
        return v;
    }
    RElt decode(std::int64_t v) const {
        if (v < 0 || v >= order_) throw std::domain_error("ring: encode value out of range");
        RElt r{};
        for (int i = 0; i < f_; ++i) { r[i] = v % pk_; v /= pk_; }
        return r;
    }

    // ----- arithmetic -----
    RElt add(const RElt& a, const RElt& b) const {
        RElt r{};
        for (int i = 0; i < f_; ++i) r[i] = mod(a[i] + b[i], pk_);
        return r;
    }
    RElt sub(const RElt& a, const RElt& b) const {
        RElt r{};
        for (int i = 0; i < f_; ++i) r[i] = mod(a[i] - b[i], pk_);
        return r;
    }
    RElt neg(const RElt& a) const { return sub(zero(), a); }
    RElt mul(const RElt& a, const RElt& b) const {
        std::array<std::int64_t, 2 * kMaxDeg> t{};
        for (int i = 0; i < f_; ++i) {
            if (!a[i]) continue;
            for (int j = 0; j < f_; ++j) t[i + j] += a[i] * b[j] % pk_;
        }
        // reduce by the monic modulus: x^f = -(lower part of h)
        for (int i = 2 * f_ - 2; i >= f_; --i) {
            const std::int64_t c = mod(t[i], pk_);
            if (!c) continue;
            for (int j = 0; j < f_; ++j) t[i - f_ + j] = mod(t[i - f_ + j] - c * h_[j], pk_);
        }
        RElt r{};
        for (int i = 0; i < f_; ++i) r[i] = mod(t[i], pk_);
        return r;
    }
    RElt mul_int(std::int64_t c, const RElt& a) const {
        c = mod(c, pk_);
        RElt r{};
        for (int i = 0; i < f_; ++i) r[i] = mod(c * a[i], pk_);
        return r;
    }
    RElt pow(RElt a, std::int64_t e) const {
        if (e < 0) { a = inv(a); e = -e; }
        RElt r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    bool is_zero(const RElt& a) const {
        for (int i = 0; i < f_; ++i)
            if (a[i]) return false;
        return true;
    }
    bool eq(const RElt& a, const RElt& b) const {
        for (int i = 0; i < f_; ++i)
            if (a[i] != b[i]) return false;
        return true;
    }

    // A ring element is a unit iff its image in the residue field is nonzero.
    bool is_unit(const RElt& a) const {
        for (int i = 0; i < f_; ++i)
            if (a[i] % p_) return true;
        return false;
    }

    // p-adic valuation in [0, k]; val(0) = k by convention.
    int val(const RElt& a) const {
        int v = k_;
        for (int i = 0; i < f_; ++i) {
            if (!a[i]) continue;
            int vi = 0;
            std::int64_t c = a[i];
            while (c % p_ == 0) { c /= p_; ++vi; }
            if (vi < v) v = vi;
        }
        return v;
    }

    // Exact division by p^j (requires val >= j).
    RElt div_p(const RElt& a, int j = 1) const {
        std::int64_t pj = 1;
        for (int i = 0; i < j; ++i) pj *= p_;
        RElt r{};
        for (int i = 0; i < f_; ++i) {
            if (a[i] % pj) throw std::domain_error("ring: element not divisible by p^j");
            r[i] = a[i] / pj;
        }
        return r;
    }

    // Inverse of a unit: extended Euclid in F_p[x] followed by Hensel lifting
    // to precision p^k.  Non-units signal an error.
    RElt inv(const RElt& a) const {
        if (!is_unit(a)) throw std::domain_error("non-invertible element");
        RElt x = residue_inverse(a);
        // Newton: x <- x(2 - a x), doubling p-adic precision each step.
        for (int prec = 1; prec < k_; prec *= 2)
            x = mul(x, sub(from_int(2), mul(a, x)));
        return x;
    }

    // ----- precision maps -----
    // Reduce coefficients mod p^j; the result lives in GaloisRing(p, f, j)
    // (same modulus polynomial, which depends only on (p, f)).
    RElt reduce(const RElt& a, int j) const {
        if (j < 1 || j > k_) throw std::domain_error("ring: reduction level out of range");
        std::int64_t pj = 1;
        for (int i = 0; i < j; ++i) pj *= p_;
        RElt r{};
        for (int i = 0; i < f_; ++i) r[i] = a[i] % pj;
        return r;
    }
    // Coefficients mod p^j without leaving this ring's representation;
    // j = 0 gives zero, j >= k is the identity.
    RElt reduce_mod(const RElt& a, int j) const {
        if (j < 0) throw std::domain_error("ring: negative reduction level");
        if (j >= k_) return a;
        std::int64_t pj = 1;
        for (int i = 0; i < j; ++i) pj *= p_;
        RElt r{};
        for (int i = 0; i < f_; ++i) r[i] = a[i] % pj;
        return r;
    }
    GaloisRing reduced_ring(int j) const { return GaloisRing(p_, f_, j); }
    GaloisRing residue_field() const { return GaloisRing(p_, f_, 1); }

    // Teichmueller representative of a residue-field element (input read mod
    // p): the unique lift fixed by x -> x^q.  Multiplicative section of the
    // reduction map.
    RElt teichmuller(const RElt& x0) const {
        RElt z = reduce_mod_p_lift(x0);
        for (int it = 0; it < k_ + 2; ++it) {
            RElt w = pow(z, q_);
            if (eq(w, z)) return z;
            z = w;
        }
        throw std::logic_error("ring: Teichmueller iteration failed to stabilize");
    }

    // ----- residue-field structure (meaningful when k == 1) -----
    // Least generator of F_q^x in encoding order.
    RElt generator() const {
        require_field("generator");
        for (std::int64_t v = 1; v < order_; ++v) {
            RElt a = decode(v);
            if (!is_unit(a)) continue;
            if (mult_order(a) == q_ - 1) return a;
        }
        throw std::logic_error("ring: no generator found");
    }
    std::int64_t mult_order(const RElt& a) const {
        RElt x = a;
        for (std::int64_t n = 1; n <= order_; ++n) {
            if (eq(x, one())) return n;
            x = mul(x, a);
        }
        throw std::domain_error("ring: order of non-unit requested");
    }
    // Discrete log against generator(); brute table, fields here are tiny.
    std::int64_t dlog(const RElt& a) const {
        require_field("dlog");
        if (!is_unit(a)) throw std::domain_error("ring: dlog of non-unit");
        RElt g = generator(), x = one();
        for (std::int64_t e = 0; e < q_ - 1; ++e) {
            if (eq(x, a)) return e;
            x = mul(x, g);
        }
        throw std::logic_error("ring: dlog enumeration failed");
    }

    // Absolute trace F_q -> F_p, returned as an integer in [0, p).
    std::int64_t trace_to_prime(const RElt& a) const {
        require_field("trace");
        RElt s = zero(), x = a;
        for (int i = 0; i < f_; ++i) {
            s = add(s, x);
            x = pow(x, p_);
        }
        for (int i = 1; i < f_; ++i)
            if (s[i]) throw std::logic_error("ring: trace not in prime field");
        return s[0];
    }

    // True iff the residue of x is a square in F_q^x (x must be a unit).
    bool is_square_in_residue(const RElt& x) const {
        if (!is_unit(x)) throw std::domain_error("ring: square test needs a unit");
        GaloisRing k1 = residue_field();
        RElt r = reduce(x, 1);
        return k1.eq(k1.pow(r, (q_ - 1) / 2), k1.one());
    }

    // ----- characters of the residue field (k == 1) -----
    // Additive character psi_a(x) = exp(2 pi i Tr(ax) / p); psi_a trivial
    // iff a = 0.
    std::complex<double> psi(const RElt& a, const RElt& x) const {
        const double t = 2.0 * std::numbers::pi *
                         (double)trace_to_prime(mul(a, x)) / (double)p_;
        return {std::cos(t), std::sin(t)};
    }
    // Multiplicative character chi_j(x) = zeta_{q-1}^{j dlog x} (x a unit).
    std::complex<double> chi(std::int64_t j, const RElt& x) const {
        const double t = 2.0 * std::numbers::pi *
                         (double)mod(j * dlog(x), q_ - 1) / (double)(q_ - 1);
        return {std::cos(t), std::sin(t)};
    }
    // The unique multiplicative character of order 2 (Legendre symbol).
    std::complex<double> chi0(const RElt& x) const { return chi((q_ - 1) / 2, x); }

    // Generators of the unit group (R_k)^x modulo nothing (full unit group):
    // the Teichmueller lift of a residue generator plus 1 + p xi^i.
    std::vector<RElt> unit_group_generators() const {
        std::vector<RElt> gens;
        GaloisRing k1 = residue_field();
        RElt g = teichmuller(k1.generator());
        gens.push_back(g);
        if (k_ > 1) {
            RElt xi = teichmuller(k1.generator());
            RElt xipow = one();
            for (int i = 0; i < f_; ++i) {
                gens.push_back(add(one(), mul_int(p_, xipow)));
                xipow = mul(xipow, xi);
            }
        }
        return gens;
    }

    static std::int64_t mod(std::int64_t a, std::int64_t m) {
        a %= m;
        return a < 0 ? a + m : a;
    }

    std::string str(const RElt& a) const {
        std::string s = "(";
        for (int i = 0; i < f_; ++i) s += (i ? "," : "") + std::to_string(a[i]);
        return s + ")";
    }

private:
    static bool is_prime(std::int64_t n) {
        if (n < 2) return false;
        for (std::int64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }
    void require_field(const char* what) const {
        if (k_ != 1)
            throw std::domain_error(std::string("ring: ") + what + " requires the residue field (k = 1)");
    }

    RElt reduce_mod_p_lift(const RElt& a) const {
        RElt r{};
        for (int i = 0; i < f_; ++i) r[i] = mod(a[i], p_);
        return r;
    }

    // Least monic lift irreducible mod p, counting constant coefficient first.
    void find_modulus() {
        if (f_ == 1) { h_ = RElt{}; return; }  // h = x
        std::int64_t total = 1;
        for (int i = 0; i < f_; ++i) total *= p_;
        for (std::int64_t c = 0; c < total; ++c) {
            RElt cand{};
            std::int64_t v = c;
            for (int i = 0; i < f_; ++i) { cand[i] = v % p_; v /= p_; }
            if (poly_irreducible_mod_p(cand)) { h_ = cand; return; }
        }
        throw std::logic_error("ring: no irreducible modulus found");
    }

    // Irreducibility of x^f + sum low[i] x^i over F_p by trial division by
    // every monic polynomial of degree 1..f/2.
    bool poly_irreducible_mod_p(const RElt& low) const {
        std::vector<std::int64_t> hh(f_ + 1);
        for (int i = 0; i < f_; ++i) hh[i] = low[i] % p_;
        hh[f_] = 1;
        for (int d = 1; 2 * d <= f_; ++d) {
            std::int64_t cnt = 1;
            for (int i = 0; i < d; ++i) cnt *= p_;
            for (std::int64_t c = 0; c < cnt; ++c) {
                std::vector<std::int64_t> div(d + 1);
                std::int64_t v = c;
                for (int i = 0; i < d; ++i) { div[i] = v % p_; v /= p_; }
                div[d] = 1;
                if (poly_divides_mod_p(div, hh)) return false;
            }
        }
        return true;
    }
    bool poly_divides_mod_p(const std::vector<std::int64_t>& dv,
                            std::vector<std::int64_t> num) const {
        const int dd = (int)dv.size() - 1, dn = (int)num.size() - 1;
        for (int i = dn; i >= dd; --i) {
            const std::int64_t c = num[i] % p_;
            if (!c) continue;
            for (int j = 0; j <= dd; ++j)
                num[i - dd + j] = mod(num[i - dd + j] - c * dv[j], p_);
        }
        for (int i = 0; i < dd; ++i)
            if (num[i] % p_) return false;
        return true;
    }

    // Inverse in the residue field by brute enumeration (fields are tiny),
    // lifted trivially; Newton in inv() finishes the job.
    RElt residue_inverse(const RElt& a) const {
        GaloisRing k1(p_, f_, 1);
        RElt ar = reduce(a, 1);
        for (std::int64_t v = 1; v < q_; ++v) {
            RElt b = k1.decode(v);
            if (k1.eq(k1.mul(ar, b), k1.one())) return b;  // coeffs < p, valid here
        }
        throw std::logic_error("ring: residue inverse not found");
    }

    std::int64_t p_, pk_, q_, order_;
    int f_, k_;
    RElt h_{};
};

// A character of the residue field, for reporting: additive psi_a or
// multiplicative chi_j against the canonical generator.
struct ResidueCharacter {
    bool additive = true;
    std::int64_t param = 0;  // encode(a) for additive; exponent j for multiplicative
};

inline std::vector<ResidueCharacter> characters_of_residue_field(const GaloisRing& k1) {
    std::vector<ResidueCharacter> out;
    for (std::int64_t v = 0; v < k1.q(); ++v) out.push_back({true, v});
    for (std::int64_t j = 0; j < k1.q() - 1; ++j) out.push_back({false, j});
    return out;
}

inline std::complex<double> character_value(const GaloisRing& k1, const ResidueCharacter& c,
                                            const RElt& x) {
    return c.additive ? k1.psi(k1.decode(c.param), x) : k1.chi(c.param, x);
}

// A root of F's modulus polynomial inside the bigger field E (k = 1 both
// sides); substituting it into the polynomial basis gives the canonical
// embedding F -> E.
inline RElt subfield_root(const GaloisRing& F, const GaloisRing& E) {
    if (F.p() != E.p() || E.f() % F.f() != 0 || F.k() != 1 || E.k() != 1)
        throw std::domain_error("ring: no embedding between these rings");
    for (std::int64_t v = 0; v < E.order(); ++v) {
        RElt z = E.decode(v);
        // evaluate h_F(z) = z^f + sum h[i] z^i in E
        RElt acc = E.pow(z, F.f());
        RElt zp = E.one();
        for (int i = 0; i < F.f(); ++i) {
            acc = E.add(acc, E.mul_int(F.modulus()[i], zp));
            zp = E.mul(zp, z);
        }
        if (E.is_zero(acc)) return z;
    }
    throw std::logic_error("ring: modulus has no root in extension");
}

inline RElt embed_element(const GaloisRing& F, const RElt& a, const GaloisRing& E,
                          const RElt& root) {
    RElt acc = E.zero(), zp = E.one();
    for (int i = 0; i < F.f(); ++i) {
        acc = E.add(acc, E.mul_int(a[i], zp));
        zp = E.mul(zp, root);
    }
    return acc;
}

}  // namespace treecoh
