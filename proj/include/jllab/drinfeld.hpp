#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include <nlohmann/json.hpp>

#include "jllab/algebra.hpp"
#include "jllab/btquotient.hpp"

namespace jllab {

// Twisted polynomials sum c_i tau^i over K with tau s = s^q tau.
class SkewPoly {
public:
    SkewPoly(FieldPtr K, std::uint32_t q, std::vector<Elem> coeffs = {})
        : K_(std::move(K)), q_(q), c_(std::move(coeffs)) {
        trim();
    }

    static SkewPoly scalar(FieldPtr K, std::uint32_t q, Elem c) { return SkewPoly(std::move(K), q, {c}); }

    const FieldPtr& field() const { return K_; }
    std::uint32_t q() const { return q_; }
    const std::vector<Elem>& coeffs() const { return c_; }
    int degree() const { return c_.empty() ? kZeroDegree : static_cast<int>(c_.size()) - 1; }
    bool isZero() const { return c_.empty(); }
    Elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }

    // Evaluate as an additive polynomial: sum c_i z^{q^i}.
    Elem operator()(Elem z) const {
        Elem acc = 0, zi = z;
        for (Elem c : c_) {
            acc = K_->add(acc, K_->mul(c, zi));
            zi = K_->pow(zi, q_);
        }
        return acc;
    }

    friend SkewPoly operator+(const SkewPoly& a, const SkewPoly& b) {
        check(a, b);
        std::vector<Elem> r(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.K_->add(a.coeff(i), b.coeff(i));
        return SkewPoly(a.K_, a.q_, std::move(r));
    }

    friend SkewPoly operator-(const SkewPoly& a, const SkewPoly& b) {
        check(a, b);
        std::vector<Elem> r(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.K_->sub(a.coeff(i), b.coeff(i));
        return SkewPoly(a.K_, a.q_, std::move(r));
    }

    friend SkewPoly operator*(const SkewPoly& a, const SkewPoly& b) {
        check(a, b);
        if (a.isZero() || b.isZero()) return SkewPoly(a.K_, a.q_);
        const FieldPtr& K = a.K_;
        std::vector<Elem> r(a.c_.size() + b.c_.size() - 1, 0);
        std::vector<Elem> twisted = b.c_;
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            // twisted holds b_j^{q^i}
            for (std::size_t j = 0; j < twisted.size(); ++j) r[i + j] = K->add(r[i + j], K->mul(a.c_[i], twisted[j]));
            for (auto& t : twisted) t = K->pow(t, a.q_);
        }
        return SkewPoly(K, a.q_, std::move(r));
    }

    friend bool operator==(const SkewPoly& a, const SkewPoly& b) {
        return sameField(a.K_, b.K_) && a.q_ == b.q_ && a.c_ == b.c_;
    }

private:
    static void check(const SkewPoly& a, const SkewPoly& b) {
        require(sameField(a.K_, b.K_) && a.q_ == b.q_, "skew polynomials over different rings");
    }
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    FieldPtr K_;
    std::uint32_t q_;
    std::vector<Elem> c_;
};

// Rank-2 module phi_T = gamma + g tau + Delta tau^2 over K, an extension of F_q.
class DrinfeldModule {
public:
    DrinfeldModule(Embedding emb, Elem gammaT, Elem g, Elem delta)
        : emb_(std::move(emb)), gammaT_(gammaT), g_(g), delta_(delta) {
        require(delta_ != 0, "Delta must be nonzero");
        require(K()->contains(gammaT) && K()->contains(g) && K()->contains(delta), "coefficient outside K");
    }

    const FieldPtr& baseField() const { return emb_.source(); }
    const FieldPtr& K() const { return emb_.target(); }
    const Embedding& embedding() const { return emb_; }
    std::uint32_t q() const { return baseField()->size(); }
    Elem gammaT() const { return gammaT_; }
    Elem g() const { return g_; }
    Elem delta() const { return delta_; }

    SkewPoly phiT() const { return SkewPoly(K(), q(), {gammaT_, g_, delta_}); }

    // gamma(a) = a evaluated at gamma(T).
    Elem gamma(const Poly& a) const {
        require(sameField(a.field(), baseField()), "polynomial over the wrong field");
        Elem acc = 0;
        for (std::size_t i = a.coeffs().size(); i-- > 0;) acc = K()->add(K()->mul(acc, gammaT_), emb_(a.coeffs()[i]));
        return acc;
    }

    SkewPoly phi(const Poly& a) const {
        require(sameField(a.field(), baseField()), "polynomial over the wrong field");
        const SkewPoly t = phiT();
        SkewPoly acc(K(), q());
        for (std::size_t i = a.coeffs().size(); i-- > 0;)
            acc = acc * t + SkewPoly::scalar(K(), q(), emb_(a.coeffs()[i]));
        return acc;
    }

    Elem jInvariant() const { return K()->div(K()->pow(g_, q() + 1), delta_); }

private:
    Embedding emb_;
    Elem gammaT_, g_, delta_;
};

inline SkewPoly phiOf(const DrinfeldModule& m, const Poly& a) { return m.phi(a); }
inline Elem jInvariant(const DrinfeldModule& m) { return m.jInvariant(); }

// Height 2 at p: phi_p = c tau^{2 deg p}.
inline bool isSupersingular(const DrinfeldModule& m, const Place& p) {
    require(!p.isInfinity(), "supersingularity is defined at finite places");
    require(m.gamma(p.generator()) == 0, "module characteristic differs from the place");
    const SkewPoly phiP = m.phi(p.generator());
    const int d = p.degree();
    ensure(phiP.degree() == 2 * d, "phi_p has the wrong tau-degree");
    for (int i = 0; i < 2 * d; ++i)
        if (phiP.coeff(static_cast<std::size_t>(i)) != 0) return false;
    return true;
}

// u in the closure with u phi_T = phi_T u, counted in K(F_{q^2}).
inline std::uint64_t autGroupOrder(const DrinfeldModule& m) {
    const FieldPtr& K = m.K();
    const std::uint32_t p = K->characteristic();
    const std::uint32_t s = m.baseField()->degree();
    const FieldPtr L = Field::make(p, std::lcm(K->degree(), 2 * s));
    const Embedding toL(K, L);
    const SkewPoly t(L, m.q(), {toL(m.gammaT()), toL(m.g()), toL(m.delta())});
    std::uint64_t count = 0;
    for (Elem u = 1; u < L->size(); ++u) {
        const SkewPoly su = SkewPoly::scalar(L, m.q(), u);
        count += su * t == t * su;
    }
    return count;
}

// gamma(T) for the characteristic-p structure: smallest root of p in K.
inline Elem characteristicRoot(const Embedding& emb, const Poly& p) {
    const FieldPtr& K = emb.target();
    for (Elem r = 0; r < K->size(); ++r) {
        Elem acc = 0;
        for (std::size_t i = p.coeffs().size(); i-- > 0;) acc = K->add(K->mul(acc, r), emb(p.coeffs()[i]));
        if (acc == 0) return r;
    }
    throw DomainError("place has no root in K");
}

// Representative with a given j: g = 0, Delta = 1 for j = 0, else g = 1, Delta = 1/j.
inline DrinfeldModule moduleWithJ(const Embedding& emb, Elem gammaT, Elem j) {
    const FieldPtr& K = emb.target();
    if (j == 0) return DrinfeldModule(emb, gammaT, 0, 1);
    return DrinfeldModule(emb, gammaT, 1, K->inv(j));
}

struct Census {
    Place place;
    FieldPtr K;
    Embedding embedding;
    Elem gammaT;
    std::vector<Elem> jValues;  // sorted
};

inline Census supersingularCensus(const Place& p) {
    require(!p.isInfinity(), "census needs a finite place");
    const FieldPtr& F = p.field();
    const std::uint32_t d = static_cast<std::uint32_t>(p.degree());
    const FieldPtr K = Field::make(F->characteristic(), F->degree() * 2 * d);
    Embedding emb(F, K);
    const Elem gammaT = characteristicRoot(emb, p.generator());
    std::vector<Elem> js;
    for (Elem j = 0; j < K->size(); ++j)
        if (isSupersingular(moduleWithJ(emb, gammaT, j), p)) js.push_back(j);
    return Census{p, K, std::move(emb), gammaT, std::move(js)};
}

struct OrbitThickness {
    std::uint32_t q = 0;
    std::string place, auxPlace;
    Elem j = 0;
    std::uint64_t autOrder = 0;    // |Aut(phi)|
    std::uint64_t actingOrder = 0; // |Aut(phi) / F_q^*|
    std::uint64_t pairs = 0;       // cyclic submodules of phi[aux]
    std::uint64_t points = 0;      // singular points of the fibre
    std::uint64_t t = 0, s = 0;    // free orbits, fixed pairs
    std::vector<std::uint64_t> thickness;  // sorted
};

// Aut(phi)/F_q^* acts on the q_aux + 1 lines of phi[aux]; each orbit is a
// singular point whose thickness is the stabilizer order. The point count
// comes from the genus of the quotient graph at level p*aux.
inline OrbitThickness orbitThicknessData(const Place& p, const Place& aux) {
    require(!p.isInfinity() && !aux.isInfinity() && p.generator() != aux.generator(), "need two distinct finite places");
    const Census c = supersingularCensus(p);
    ensure(c.jValues.size() == 1, "supersingular class is not unique");
    const auto m = moduleWithJ(c.embedding, c.gammaT, c.jValues.front());
    OrbitThickness r;
    r.q = p.field()->size();
    r.place = p.name();
    r.auxPlace = aux.name();
    r.j = c.jValues.front();
    r.autOrder = autGroupOrder(m);
    ensure(r.autOrder % (r.q - 1) == 0, "F_q^* is not inside Aut");
    r.actingOrder = r.autOrder / (r.q - 1);
    r.pairs = aux.size() + 1;
    const auto graph = buildQuotientGraph(ResidueRing(p.generator() * aux.generator()));
    r.points = genusFromQuotient(graph) + 1;
    if (r.actingOrder == 1) {
        ensure(r.pairs == r.points, "free action but pair and point counts differ");
        r.t = r.pairs;
        r.s = 0;
    } else {
        // actingOrder * t + s = pairs, t + s = points; orbits are free or fixed.
        ensure(r.pairs >= r.points && (r.pairs - r.points) % (r.actingOrder - 1) == 0, "orbit system has no integral solution");
        r.t = (r.pairs - r.points) / (r.actingOrder - 1);
        ensure(r.t <= r.points, "orbit system has a negative solution");
        r.s = r.points - r.t;
    }
    r.thickness.assign(r.t, 1);
    r.thickness.insert(r.thickness.end(), r.s, r.actingOrder);
    std::sort(r.thickness.begin(), r.thickness.end());
    return r;
}

inline nlohmann::json toJson(const OrbitThickness& r) {
    return {{"q", r.q},         {"place", r.place},   {"aux", r.auxPlace},       {"j", r.j},
            {"autOrder", r.autOrder}, {"pairs", r.pairs}, {"points", r.points}, {"t", r.t},
            {"s", r.s},         {"thickness", r.thickness}};
}

}
