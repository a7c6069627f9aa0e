#pragma once

// Finite fields, F_q[T], residue rings A/n for square-free n, P^1(A/n),
// and valuations of rational functions.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "jllab/error.hpp"

namespace jllab {

using Elem = std::uint32_t;

inline constexpr std::uint32_t kMaxFieldSize = 1u << 16;

namespace detail {

// Polynomials over the prime field, low-to-high; only used to build field tables.
using PrimePoly = std::vector<std::uint32_t>;

inline void trim(PrimePoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t powModPrime(std::uint64_t b, std::uint64_t e, std::uint32_t p) {
    std::uint64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

inline std::uint32_t invModPrime(std::uint32_t a, std::uint32_t p) { return powModPrime(a, p - 2, p); }

inline PrimePoly ppMul(const PrimePoly& a, const PrimePoly& b, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    PrimePoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
    trim(r);
    return r;
}

inline PrimePoly ppMod(PrimePoly a, const PrimePoly& f, std::uint32_t p) {
    trim(a);
    const std::size_t df = f.size() - 1;
    const std::uint32_t inv = invModPrime(f.back(), p);
    while (a.size() > df) {
        const std::size_t shift = a.size() - 1 - df;
        const std::uint64_t c = std::uint64_t(a.back()) * inv % p;
        for (std::size_t i = 0; i <= df; ++i)
            a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * f[i]) % p);
        trim(a);
    }
    return a;
}

inline PrimePoly ppSub(PrimePoly a, const PrimePoly& b, std::uint32_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    trim(a);
    return a;
}

inline PrimePoly ppGcd(PrimePoly a, PrimePoly b, std::uint32_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        PrimePoly r = ppMod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline bool ppIrreducible(const PrimePoly& f, std::uint32_t p) {
    const std::size_t d = f.size() - 1;
    if (d == 0) return false;
    if (d == 1) return true;
    PrimePoly x{0, 1};
    PrimePoly xp = x;
    for (std::size_t i = 1; i <= d / 2; ++i) {
        PrimePoly r{1};
        PrimePoly b = xp;
        for (std::uint32_t e = p; e; e >>= 1) {
            if (e & 1) r = ppMod(ppMul(r, b, p), f, p);
            b = ppMod(ppMul(b, b, p), f, p);
        }
        xp = r;
        if (ppGcd(ppSub(xp, x, p), f, p).size() > 1) return false;
    }
    return true;
}

inline std::vector<std::uint64_t> primeFactors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace detail

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// GF(p^s) as F_p[Z]/(f) with f the smallest monic irreducible of degree s
// (ordered by the base-p integer encoding of its lower coefficients).
// Elements are encoded as base-p digit strings of their coefficients.
class Field {
public:
    static FieldPtr make(std::uint32_t q) {
        require(q >= 2 && q <= kMaxFieldSize, "field size out of range: " + std::to_string(q));
        auto primes = detail::primeFactors(q);
        require(primes.size() == 1, "field size is not a prime power: " + std::to_string(q));
        const auto p = static_cast<std::uint32_t>(primes[0]);
        std::uint32_t s = 0;
        for (std::uint32_t t = q; t > 1; t /= p) ++s;
        return make(p, s);
    }

    static FieldPtr make(std::uint32_t p, std::uint32_t s) {
        require(s >= 1, "extension degree must be positive");
        require(detail::primeFactors(p) == std::vector<std::uint64_t>{p}, "characteristic must be prime");
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < s; ++i) {
            q *= p;
            require(q <= kMaxFieldSize, "field too large");
        }
        return FieldPtr(new Field(p, s));
    }

    std::uint32_t characteristic() const { return p_; }
    std::uint32_t degree() const { return s_; }
    std::uint32_t size() const { return q_; }
    const detail::PrimePoly& modulus() const { return modulus_; }
    Elem generator() const { return gen_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }

    Elem fromInt(long long k) const {
        long long r = k % static_cast<long long>(p_);
        if (r < 0) r += p_;
        return static_cast<Elem>(r);
    }

    Elem add(Elem a, Elem b) const {
        if (p_ == 2) return a ^ b;
        Elem r = 0;
        for (Elem m = 1; a || b; m *= p_) {
            r += ((a % p_ + b % p_) % p_) * m;
            a /= p_;
            b /= p_;
        }
        return r;
    }

    Elem neg(Elem a) const {
        if (p_ == 2) return a;
        Elem r = 0;
        for (Elem m = 1; a; m *= p_) {
            r += ((p_ - a % p_) % p_) * m;
            a /= p_;
        }
        return r;
    }

    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

    Elem mul(Elem a, Elem b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }

    Elem inv(Elem a) const {
        if (a == 0) throw DomainError("inverse of zero");
        return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    }

    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    Elem pow(Elem a, std::uint64_t e) const {
        if (e == 0) return 1;
        if (a == 0) return 0;
        return exp_[(std::uint64_t(log_[a]) * (e % (q_ - 1))) % (q_ - 1)];
    }

    // Discrete log base generator(); a must be nonzero.
    std::uint32_t log(Elem a) const {
        if (a == 0) throw DomainError("log of zero");
        return log_[a];
    }

    bool contains(Elem a) const { return a < q_; }

    friend bool operator==(const Field& a, const Field& b) { return a.p_ == b.p_ && a.s_ == b.s_; }

private:
    Field(std::uint32_t p, std::uint32_t s) : p_(p), s_(s), q_(1) {
        for (std::uint32_t i = 0; i < s; ++i) q_ *= p;
        if (s == 1) {
            modulus_ = {0, 1};
        } else {
            for (std::uint32_t low = 0; low < q_; ++low) {
                detail::PrimePoly f = digits(low);
                f.resize(s, 0);
                f.push_back(1);
                if (f[0] != 0 && detail::ppIrreducible(f, p)) {
                    modulus_ = f;
                    break;
                }
            }
        }
        ensure(!modulus_.empty(), "no irreducible modulus found");
        const auto factors = detail::primeFactors(q_ - 1);
        gen_ = 0;
        for (Elem g = 1; g < q_ && gen_ == 0; ++g) {
            bool primitive = true;
            for (auto r : factors)
                if (slowPow(g, (q_ - 1) / r) == 1) primitive = false;
            if (primitive) gen_ = g;
        }
        ensure(gen_ != 0, "no primitive element found");
        exp_.assign(2 * (q_ - 1), 0);
        log_.assign(q_, 0);
        Elem cur = 1;
        for (std::uint32_t k = 0; k < q_ - 1; ++k) {
            exp_[k] = exp_[k + q_ - 1] = cur;
            log_[cur] = k;
            cur = slowMul(cur, gen_);
        }
        ensure(cur == 1, "generator order mismatch");
    }

    detail::PrimePoly digits(Elem a) const {
        detail::PrimePoly d;
        for (; a; a /= p_) d.push_back(a % p_);
        return d;
    }

    Elem fromDigits(const detail::PrimePoly& d) const {
        Elem r = 0;
        for (std::size_t i = d.size(); i-- > 0;) r = r * p_ + d[i];
        return r;
    }

    Elem slowMul(Elem a, Elem b) const {
        return fromDigits(detail::ppMod(detail::ppMul(digits(a), digits(b), p_), modulus_, p_));
    }

    Elem slowPow(Elem a, std::uint64_t e) const {
        Elem r = 1;
        while (e) {
            if (e & 1) r = slowMul(r, a);
            a = slowMul(a, a);
            e >>= 1;
        }
        return r;
    }

    std::uint32_t p_, s_, q_;
    detail::PrimePoly modulus_;
    Elem gen_ = 0;
    std::vector<Elem> exp_;
    std::vector<std::uint32_t> log_;
};

inline bool sameField(const FieldPtr& a, const FieldPtr& b) { return a == b || (a && b && *a == *b); }

// F_{p^s} -> F_{p^{sk}}: the generator Z of the source goes to the smallest root
// of the source modulus in the target.
class Embedding {
public:
    Embedding(FieldPtr src, FieldPtr dst) : src_(std::move(src)), dst_(std::move(dst)) {
        require(src_->characteristic() == dst_->characteristic(), "embedding across characteristics");
        require(dst_->degree() % src_->degree() == 0, "source degree does not divide target degree");
        const auto& f = src_->modulus();
        Elem root = 0;
        bool found = false;
        for (Elem r = 0; r < dst_->size() && !found; ++r) {
            Elem acc = 0;
            for (std::size_t i = f.size(); i-- > 0;) acc = dst_->add(dst_->mul(acc, r), dst_->fromInt(f[i]));
            if (acc == 0) {
                root = r;
                found = true;
            }
        }
        ensure(found, "modulus has no root in target field");
        const std::uint32_t p = src_->characteristic();
        table_.resize(src_->size());
        for (Elem e = 0; e < src_->size(); ++e) {
            Elem acc = 0, pw = 1;
            for (Elem t = e; t; t /= p) {
                acc = dst_->add(acc, dst_->mul(dst_->fromInt(t % p), pw));
                pw = dst_->mul(pw, root);
            }
            table_[e] = acc;
        }
    }

    Elem operator()(Elem e) const { return table_.at(e); }
    const FieldPtr& source() const { return src_; }
    const FieldPtr& target() const { return dst_; }

private:
    FieldPtr src_, dst_;
    std::vector<Elem> table_;
};

inline constexpr int kZeroDegree = -1;

// Element of F_q[T]; coefficients low-to-high without trailing zeros.
class Poly {
public:
    explicit Poly(FieldPtr field, std::vector<Elem> coeffs = {}) : field_(std::move(field)), c_(std::move(coeffs)) {
        require(field_ != nullptr, "polynomial without field");
        for (Elem e : c_) require(field_->contains(e), "coefficient outside field");
        trim();
    }

    static Poly constant(FieldPtr f, Elem c) { return Poly(std::move(f), {c}); }
    static Poly one(FieldPtr f) { return constant(std::move(f), 1); }
    static Poly variable(FieldPtr f) { return Poly(std::move(f), {0, 1}); }
    static Poly monomial(FieldPtr f, Elem c, int k) {
        std::vector<Elem> v(static_cast<std::size_t>(k) + 1, 0);
        v.back() = c;
        return Poly(std::move(f), std::move(v));
    }

    const FieldPtr& field() const { return field_; }
    const std::vector<Elem>& coeffs() const { return c_; }
    int degree() const { return c_.empty() ? kZeroDegree : static_cast<int>(c_.size()) - 1; }
    bool isZero() const { return c_.empty(); }
    Elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    Elem leading() const { return c_.empty() ? 0 : c_.back(); }
    bool isMonic() const { return !c_.empty() && c_.back() == 1; }

    Poly monic() const {
        if (isZero()) return *this;
        return scaled(field_->inv(leading()));
    }

    Poly scaled(Elem s) const {
        std::vector<Elem> r(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] = field_->mul(c_[i], s);
        return Poly(field_, std::move(r));
    }

    Poly operator-() const { return scaled(field_->neg(1)); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        checkSame(a, b);
        std::vector<Elem> r(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.field_->add(a.coeff(i), b.coeff(i));
        return Poly(a.field_, std::move(r));
    }

    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        checkSame(a, b);
        if (a.isZero() || b.isZero()) return Poly(a.field_);
        const Field& F = *a.field_;
        std::vector<Elem> r(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a.c_[i], b.c_[j]));
        }
        return Poly(a.field_, std::move(r));
    }

    Elem eval(Elem x) const {
        Elem acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = field_->add(field_->mul(acc, x), c_[i]);
        return acc;
    }

    Poly pow(unsigned e) const {
        Poly r = one(field_), b = *this;
        for (; e; e >>= 1) {
            if (e & 1) r = r * b;
            b = b * b;
        }
        return r;
    }

    std::string toString() const {
        if (isZero()) return "0";
        std::string out;
        for (std::size_t k = c_.size(); k-- > 0;) {
            if (c_[k] == 0) continue;
            if (!out.empty()) out += "+";
            std::string mono = k == 0 ? "" : (k == 1 ? "T" : "T^" + std::to_string(k));
            if (k == 0 || c_[k] != 1) out += std::to_string(c_[k]) + (k == 0 ? "" : "*");
            out += mono;
        }
        return out;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.field_->size() == b.field_->size() && a.c_ == b.c_;
    }

    // Degree first, then coefficients from the top down.
    friend std::strong_ordering operator<=>(const Poly& a, const Poly& b) {
        if (auto c = a.degree() <=> b.degree(); c != 0) return c;
        for (std::size_t i = a.c_.size(); i-- > 0;)
            if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }

private:
    static void checkSame(const Poly& a, const Poly& b) {
        if (!sameField(a.field_, b.field_)) throw DomainError("polynomials over different fields");
    }

    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    FieldPtr field_;
    std::vector<Elem> c_;
};

struct DivRem {
    Poly quotient;
    Poly remainder;
};

inline DivRem polyDivRem(const Poly& a, const Poly& b) {
    if (b.isZero()) throw DomainError("division by the zero polynomial");
    const Field& F = *a.field();
    std::vector<Elem> r = a.coeffs();
    const int db = b.degree();
    const Elem inv = F.inv(b.leading());
    std::vector<Elem> q(a.degree() >= db ? a.degree() - db + 1 : 0, 0);
    for (int k = a.degree(); k >= db; --k) {
        const Elem c = F.mul(r[k], inv);
        if (c == 0) continue;
        q[k - db] = c;
        for (int i = 0; i <= db; ++i) r[k - db + i] = F.sub(r[k - db + i], F.mul(c, b.coeffs()[i]));
    }
    return {Poly(a.field(), std::move(q)), Poly(a.field(), std::move(r))};
}

inline Poly operator/(const Poly& a, const Poly& b) { return polyDivRem(a, b).quotient; }
inline Poly operator%(const Poly& a, const Poly& b) { return polyDivRem(a, b).remainder; }

inline bool divides(const Poly& d, const Poly& a) { return (a % d).isZero(); }

// Monic gcd; zero only if both inputs are zero.
inline Poly gcd(Poly a, Poly b) {
    while (!b.isZero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

struct Xgcd {
    Poly g, s, t;  // s*a + t*b = g, g monic
};

inline Xgcd xgcd(const Poly& a, const Poly& b) {
    const FieldPtr& F = a.field();
    Poly r0 = a, r1 = b, s0 = Poly::one(F), s1(F), t0(F), t1 = Poly::one(F);
    while (!r1.isZero()) {
        auto [q, r] = polyDivRem(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        Poly s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.isZero()) return {r0, s0, t0};
    const Elem inv = F->inv(r0.leading());
    return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

inline Poly powMod(Poly base, std::uint64_t e, const Poly& m) {
    Poly r = Poly::one(base.field()) % m;
    base = base % m;
    for (; e; e >>= 1) {
        if (e & 1) r = (r * base) % m;
        base = (base * base) % m;
    }
    return r;
}

inline bool isIrreducible(const Poly& f) {
    const int d = f.degree();
    if (d < 1) return false;
    if (d == 1) return true;
    const Poly T = Poly::variable(f.field());
    Poly x = T;
    for (int i = 1; i <= d / 2; ++i) {
        x = powMod(x, f.field()->size(), f);
        if (gcd(x - T, f).degree() > 0) return false;
    }
    return true;
}

// Monic polynomials of degree d in the canonical order; index digits are the
// lower coefficients base q, most significant = T^{d-1}.
inline Poly monicFromIndex(const FieldPtr& F, int d, std::uint64_t idx) {
    std::vector<Elem> c(static_cast<std::size_t>(d) + 1, 0);
    for (int i = 0; i < d; ++i) {
        c[i] = static_cast<Elem>(idx % F->size());
        idx /= F->size();
    }
    c[d] = 1;
    return Poly(F, std::move(c));
}

inline std::vector<Poly> irreduciblesOfDegree(const FieldPtr& F, int d) {
    require(d >= 1, "degree must be positive");
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) {
        count *= F->size();
        require(count <= (1ull << 24), "too many candidates for irreducible enumeration");
    }
    std::vector<Poly> out;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        Poly f = monicFromIndex(F, d, idx);
        if (isIrreducible(f)) out.push_back(std::move(f));
    }
    return out;
}

inline int multiplicity(Poly a, const Poly& g) {
    require(!a.isZero(), "multiplicity in the zero polynomial");
    require(g.degree() >= 1, "multiplicity of a constant");
    int k = 0;
    for (;;) {
        auto [q, r] = polyDivRem(a, g);
        if (!r.isZero()) return k;
        a = std::move(q);
        ++k;
    }
}

// Distinct monic irreducible factors of a square-free monic polynomial, sorted.
inline std::vector<Poly> factorSquareFree(const Poly& n) {
    require(n.isMonic() && n.degree() >= 1, "modulus must be monic of positive degree");
    std::vector<Poly> out;
    Poly rest = n;
    for (int d = 1; 2 * d <= rest.degree(); ++d) {
        for (const Poly& p : irreduciblesOfDegree(n.field(), d)) {
            const int k = multiplicity(rest, p);
            if (k > 1) throw DomainError("modulus is not square-free: " + n.toString());
            if (k == 1) {
                rest = rest / p;
                out.push_back(p);
            }
        }
    }
    if (rest.degree() >= 1) {
        for (const Poly& p : out)
            if (p == rest) throw DomainError("modulus is not square-free: " + n.toString());
        out.push_back(rest);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Parses "T^2+T+1", "2*T^3+T", "T^2 - 1"; coefficients are field element codes.
inline Poly parsePoly(const FieldPtr& F, std::string_view text) {
    std::string s;
    for (char ch : text)
        if (ch != ' ') s += ch;
    require(!s.empty(), "empty polynomial");
    Poly acc(F);
    std::size_t i = 0;
    while (i < s.size()) {
        bool negative = false;
        if (s[i] == '+' || s[i] == '-') {
            negative = s[i] == '-';
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
        std::string term = s.substr(i, j - i);
        require(!term.empty(), "malformed polynomial: " + std::string(text));
        Elem coef = 1;
        int power = 0;
        std::size_t tpos = term.find_first_of("Tt");
        std::string cpart = term.substr(0, tpos);
        if (!cpart.empty() && cpart.back() == '*') cpart.pop_back();
        if (!cpart.empty()) {
            require(cpart.find_first_not_of("0123456789") == std::string::npos,
                    "malformed coefficient: " + cpart);
            const unsigned long v = std::stoul(cpart);
            require(v < F->size(), "coefficient outside field: " + cpart);
            coef = static_cast<Elem>(v);
        } else {
            require(tpos != std::string::npos, "malformed polynomial: " + std::string(text));
        }
        if (tpos != std::string::npos) {
            std::string rest = term.substr(tpos + 1);
            power = 1;
            if (!rest.empty()) {
                require(rest[0] == '^' && rest.size() > 1 &&
                            rest.find_first_not_of("0123456789", 1) == std::string::npos,
                        "malformed exponent: " + term);
                power = std::stoi(rest.substr(1));
            }
        }
        Poly t = Poly::monomial(F, coef, power);
        acc = negative ? acc - t : acc + t;
        i = j;
    }
    return acc;
}

inline nlohmann::json toJson(const Poly& f) {
    return {{"q", f.field()->size()}, {"coeffs", f.coeffs()}};
}

inline Poly polyFromJson(const nlohmann::json& j) {
    auto F = Field::make(j.at("q").get<std::uint32_t>());
    return Poly(F, j.at("coeffs").get<std::vector<Elem>>());
}

// A place of F_q(T): a monic irreducible polynomial, or infinity.
class Place {
public:
    static Place finite(const Poly& generator) {
        require(generator.isMonic(), "place generator must be monic");
        require(isIrreducible(generator), "place generator must be irreducible: " + generator.toString());
        return Place(generator.field(), generator);
    }
    static Place infinity(FieldPtr F) { return Place(std::move(F), std::nullopt); }

    bool isInfinity() const { return !gen_.has_value(); }
    const Poly& generator() const {
        if (!gen_) throw DomainError("infinite place has no generator");
        return *gen_;
    }
    const FieldPtr& field() const { return field_; }
    int degree() const { return gen_ ? gen_->degree() : 1; }
    std::uint64_t size() const {
        std::uint64_t r = 1;
        for (int i = 0; i < degree(); ++i) r *= field_->size();
        return r;
    }
    std::string name() const { return gen_ ? gen_->toString() : "inf"; }

    friend bool operator==(const Place& a, const Place& b) {
        return a.isInfinity() == b.isInfinity() && (a.isInfinity() || *a.gen_ == *b.gen_);
    }

private:
    Place(FieldPtr F, std::optional<Poly> g) : field_(std::move(F)), gen_(std::move(g)) {}
    FieldPtr field_;
    std::optional<Poly> gen_;
};

// Element of F_q(T) in lowest terms with monic denominator.
class RationalFunction {
public:
    RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.isZero()) throw DomainError("zero denominator");
        Poly g = gcd(num_, den_);
        num_ = num_ / g;
        den_ = den_ / g;
        const Elem lc = den_.leading();
        num_ = num_.scaled(num_.field()->inv(lc));
        den_ = den_.scaled(den_.field()->inv(lc));
    }
    explicit RationalFunction(Poly num) : RationalFunction(num, Poly::one(num.field())) {}

    const Poly& numerator() const { return num_; }
    const Poly& denominator() const { return den_; }
    bool isZero() const { return num_.isZero(); }

    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return {a.num_ * b.num_, a.den_ * b.den_};
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.isZero()) throw DomainError("division by zero rational function");
        return {a.num_ * b.den_, a.den_ * b.num_};
    }
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
    }
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    std::string toString() const {
        if (den_.degree() == 0) return num_.toString();
        return "(" + num_.toString() + ")/(" + den_.toString() + ")";
    }

private:
    Poly num_, den_;
};

inline int ordAtPlace(const RationalFunction& f, const Place& v) {
    if (f.isZero()) throw DomainError("valuation of zero");
    if (v.isInfinity()) return f.denominator().degree() - f.numerator().degree();
    return multiplicity(f.numerator(), v.generator()) - multiplicity(f.denominator(), v.generator());
}

// A/v realized inside GF(q^deg v) by sending T to the smallest root of v.
class ResidueField {
public:
    explicit ResidueField(const Poly& v)
        : v_(v),
          K_(Field::make(v.field()->characteristic(), v.field()->degree() * static_cast<std::uint32_t>(v.degree()))),
          emb_(v.field(), K_) {
        require(v.isMonic() && isIrreducible(v), "residue field modulus must be monic irreducible");
        bool found = false;
        for (Elem r = 0; r < K_->size() && !found; ++r) {
            if (evalAt(v_, r) == 0) {
                root_ = r;
                found = true;
            }
        }
        ensure(found, "no root of modulus in residue field");
        lift_.assign(K_->size(), K_->size());
        for (std::uint64_t idx = 0; idx < K_->size(); ++idx) {
            const Elem e = reduce(polyFromIndex(idx));
            ensure(lift_[e] == K_->size(), "residue map not injective");
            lift_[e] = static_cast<std::uint32_t>(idx);
        }
    }

    const Poly& modulus() const { return v_; }
    const FieldPtr& field() const { return K_; }
    const Embedding& embedding() const { return emb_; }
    Elem root() const { return root_; }
    std::uint32_t size() const { return K_->size(); }

    Elem reduce(const Poly& a) const { return evalAt(a, root_); }

    // The unique polynomial of degree < deg v reducing to e.
    Poly lift(Elem e) const { return polyFromIndex(lift_.at(e)); }

private:
    Elem evalAt(const Poly& a, Elem x) const {
        Elem acc = 0;
        for (std::size_t i = a.coeffs().size(); i-- > 0;) acc = K_->add(K_->mul(acc, x), emb_(a.coeffs()[i]));
        return acc;
    }

    Poly polyFromIndex(std::uint64_t idx) const {
        const FieldPtr& F = v_.field();
        std::vector<Elem> c;
        for (; idx; idx /= F->size()) c.push_back(static_cast<Elem>(idx % F->size()));
        return Poly(F, std::move(c));
    }

    Poly v_;
    FieldPtr K_;
    Embedding emb_;
    Elem root_ = 0;
    std::vector<std::uint32_t> lift_;
};

// A/n for square-free monic n, split into residue fields by CRT.
class ResidueRing {
public:
    explicit ResidueRing(const Poly& n) : n_(n) {
        for (const Poly& v : factorSquareFree(n)) fields_.emplace_back(v);
        for (const auto& rf : fields_) {
            const Poly cofactor = n_ / rf.modulus();
            const Xgcd e = xgcd(cofactor % rf.modulus(), rf.modulus());
            ensure(e.g.degree() == 0, "CRT cofactor not invertible");
            basis_.push_back((cofactor * e.s) % n_);
        }
    }

    const Poly& modulus() const { return n_; }
    const std::vector<ResidueField>& factors() const { return fields_; }
    std::size_t factorCount() const { return fields_.size(); }
    const FieldPtr& baseField() const { return n_.field(); }

    std::vector<Elem> split(const Poly& a) const {
        std::vector<Elem> out;
        for (const auto& rf : fields_) out.push_back(rf.reduce(a));
        return out;
    }

    Poly recombine(const std::vector<Elem>& residues) const {
        require(residues.size() == fields_.size(), "wrong number of residues");
        Poly acc(n_.field());
        for (std::size_t i = 0; i < fields_.size(); ++i) acc = acc + fields_[i].lift(residues[i]) * basis_[i];
        return acc % n_;
    }

    std::uint64_t size() const {
        std::uint64_t r = 1;
        for (const auto& rf : fields_) r *= rf.size();
        return r;
    }

private:
    Poly n_;
    std::vector<ResidueField> fields_;
    std::vector<Poly> basis_;
};

// Per factor: code c < q_v stands for (1 : c), code q_v for (0 : 1).
struct ProjPoint {
    std::vector<std::uint32_t> codes;
    friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
    friend auto operator<=>(const ProjPoint&, const ProjPoint&) = default;
};

// 2x2 matrix over A.
struct Mat2 {
    Poly a, b, c, d;

    static Mat2 identity(const FieldPtr& F) { return {Poly::one(F), Poly(F), Poly(F), Poly::one(F)}; }
    Poly det() const { return a * d - b * c; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend bool operator==(const Mat2&, const Mat2&) = default;
    friend auto operator<=>(const Mat2& x, const Mat2& y) {
        if (auto r = x.a <=> y.a; r != 0) return r;
        if (auto r = x.b <=> y.b; r != 0) return r;
        if (auto r = x.c <=> y.c; r != 0) return r;
        return x.d <=> y.d;
    }
};

class ProjectiveLine {
public:
    // A matrix reduced into each residue field, as (a, b, c, d).
    struct Action {
        std::vector<std::array<Elem, 4>> perFactor;
    };

    explicit ProjectiveLine(ResidueRing ring) : ring_(std::move(ring)) {
        std::uint64_t n = 1;
        for (const auto& rf : ring_.factors()) {
            radix_.push_back(rf.size() + 1);
            n *= rf.size() + 1;
            require(n <= (1ull << 31), "projective line too large");
        }
        size_ = static_cast<std::uint32_t>(n);
    }

    const ResidueRing& ring() const { return ring_; }
    std::uint32_t size() const { return size_; }

    ProjPoint point(std::uint32_t index) const {
        require(index < size_, "projective point index out of range");
        ProjPoint p;
        for (auto r : radix_) {
            p.codes.push_back(index % r);
            index /= r;
        }
        return p;
    }

    std::uint32_t index(const ProjPoint& p) const {
        require(p.codes.size() == radix_.size(), "projective point has wrong arity");
        std::uint32_t idx = 0;
        for (std::size_t i = radix_.size(); i-- > 0;) {
            require(p.codes[i] < radix_[i], "projective point code out of range");
            idx = idx * radix_[i] + p.codes[i];
        }
        return idx;
    }

    // The point (u : v) for a pair that is unimodular modulo n.
    ProjPoint fromPair(const Poly& u, const Poly& v) const {
        ProjPoint p;
        for (const auto& rf : ring_.factors()) p.codes.push_back(normalize(rf, rf.reduce(u), rf.reduce(v)));
        return p;
    }

    Action reduce(const Mat2& m) const {
        Action act;
        for (const auto& rf : ring_.factors()) {
            std::array<Elem, 4> e{rf.reduce(m.a), rf.reduce(m.b), rf.reduce(m.c), rf.reduce(m.d)};
            const Field& K = *rf.field();
            require(K.sub(K.mul(e[0], e[3]), K.mul(e[1], e[2])) != 0, "matrix not invertible modulo n");
            act.perFactor.push_back(e);
        }
        return act;
    }

    std::uint32_t act(const Action& m, std::uint32_t index) const {
        std::uint32_t out = 0, scale = 1;
        const auto& fs = ring_.factors();
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const std::uint32_t code = index % radix_[i];
            index /= radix_[i];
            const Field& K = *fs[i].field();
            const Elem u = code < fs[i].size() ? 1 : 0;
            const Elem v = code < fs[i].size() ? code : 1;
            const auto& e = m.perFactor[i];
            const Elem nu = K.add(K.mul(e[0], u), K.mul(e[1], v));
            const Elem nv = K.add(K.mul(e[2], u), K.mul(e[3], v));
            out += normalize(fs[i], nu, nv) * scale;
            scale *= radix_[i];
        }
        return out;
    }

    std::uint32_t act(const Mat2& m, std::uint32_t index) const { return act(reduce(m), index); }

    std::string label(const ProjPoint& p) const {
        std::string s = "[";
        for (std::size_t i = 0; i < p.codes.size(); ++i) {
            if (i) s += ";";
            if (p.codes[i] == ring_.factors()[i].size())
                s += "(0:1)";
            else
                s += "(1:" + std::to_string(p.codes[i]) + ")";
        }
        return s + "]";
    }

private:
    static std::uint32_t normalize(const ResidueField& rf, Elem u, Elem v) {
        const Field& K = *rf.field();
        if (u != 0) return K.div(v, u);
        if (v != 0) return rf.size();
        throw DomainError("pair is not unimodular");
    }

    ResidueRing ring_;
    std::vector<std::uint32_t> radix_;
    std::uint32_t size_ = 1;
};

inline std::vector<ProjPoint> enumerateProjectiveLine(const ResidueRing& ring) {
    ProjectiveLine line(ring);
    std::vector<ProjPoint> out;
    out.reserve(line.size());
    for (std::uint32_t i = 0; i < line.size(); ++i) out.push_back(line.point(i));
    return out;
}

}  // namespace jllab
