#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jllab/abgroup.hpp"
#include "jllab/btquotient.hpp"
#include "jllab/drinfeld.hpp"
#include "jllab/dualgraph.hpp"

namespace jllab {

// Cusp indices.
enum Cusp : std::size_t { kCuspInf = 0, kCuspZero = 1, kCuspX = 2, kCuspY = 3 };
inline constexpr std::size_t kCuspCount = 4;
inline const std::array<std::string, kCuspCount> kCuspNames{"[inf]", "[0]", "[x]", "[y]"};

using CuspPerm = std::array<std::size_t, kCuspCount>;

// Level n = xy with deg x = 1, deg y = 2.
struct XYLevel {
    FieldPtr F;
    Poly x, y;

    XYLevel(const Poly& x_, const Poly& y_) : F(x_.field()), x(x_), y(y_) {
        require(sameField(x.field(), y.field()), "x and y over different fields");
        require(x.degree() == 1 && y.degree() == 2, "need deg x = 1 and deg y = 2");
        require(x.isMonic() && y.isMonic() && isIrreducible(y), "x and y must be monic irreducible");
    }

    static XYLevel standard(std::uint32_t q) {
        auto F = Field::make(q);
        return XYLevel(Poly::variable(F), irreduciblesOfDegree(F, 2)[0]);
    }

    std::uint32_t q() const { return F->size(); }
    Poly n() const { return x * y; }
    Place placeX() const { return Place::finite(x); }
    Place placeY() const { return Place::finite(y); }
    std::uint64_t qx() const { return placeX().size(); }
    std::uint64_t qy() const { return placeY().size(); }
};

// Cusp of a/c with gcd(a, c) = 1: determined by gcd(c, n).
inline std::size_t cuspOf(const XYLevel& L, Poly a, Poly c) {
    const Poly g = gcd(a, c);
    require(!g.isZero(), "zero vector is not a cusp");
    c = c / g;
    const Poly d = c.isZero() ? L.n() : gcd(c, L.n());
    if (d == L.n()) return kCuspInf;
    if (d.degree() == 0) return kCuspZero;
    if (d == L.x) return kCuspX;
    if (d == L.y) return kCuspY;
    throw ConsistencyError("unexpected cusp divisor " + d.toString());
}

inline std::array<std::pair<Poly, Poly>, kCuspCount> cuspRepresentatives(const XYLevel& L) {
    const Poly one = Poly::one(L.F), zero(L.F);
    return {{{one, zero}, {zero, one}, {one, L.x}, {one, L.y}}};
}

// (m a, b; n, m) with m a - (n/m) b = 1; m = n gives (0 1; n 0).
inline Mat2 atkinLehnerMatrix(const XYLevel& L, const Poly& m) {
    const Poly n = L.n();
    require(divides(m, n), "m must divide n");
    if (m == n) return {Poly(L.F), Poly::one(L.F), n, Poly(L.F)};
    const Poly cof = n / m;
    const Xgcd e = xgcd(m, cof);
    ensure(e.g.degree() == 0, "m and n/m are not coprime");
    const Elem inv = L.F->inv(e.g.leading());
    const Poly a = e.s.scaled(inv), b = (Poly(L.F) - e.t).scaled(inv);
    const Mat2 W{m * a, b, n, m};
    ensure(W.det() == m, "Atkin-Lehner determinant is not m");
    return W;
}

inline CuspPerm atkinLehnerPermutation(const XYLevel& L, const Poly& m) {
    const Mat2 W = atkinLehnerMatrix(L, m);
    const auto reps = cuspRepresentatives(L);
    CuspPerm p{};
    for (std::size_t c = 0; c < kCuspCount; ++c) {
        const auto& [a, cc] = reps[c];
        ensure(cuspOf(L, a, cc) == c, "cusp representative misclassified");
        p[c] = cuspOf(L, W.a * a + W.b * cc, W.c * a + W.d * cc);
    }
    return p;
}

struct ALInvolutions {
    CuspPerm wx, wy, wxy;
};

inline ALInvolutions atkinLehner(const XYLevel& L) {
    ALInvolutions r{atkinLehnerPermutation(L, L.x), atkinLehnerPermutation(L, L.y), atkinLehnerPermutation(L, L.n())};
    for (const CuspPerm* w : {&r.wx, &r.wy, &r.wxy}) {
        for (std::size_t c = 0; c < kCuspCount; ++c) {
            ensure((*w)[(*w)[c]] == c, "Atkin-Lehner map is not an involution");
            ensure((*w)[c] != c, "Atkin-Lehner map fixes a cusp");
        }
    }
    for (std::size_t c = 0; c < kCuspCount; ++c) ensure(r.wx[r.wy[c]] == r.wxy[c], "W_x W_y != W_xy");
    return r;
}

struct DeltaTable {
    std::array<BigInt, kCuspCount> delta, deltaX, deltaY, deltaXY;
    BigInt rootXY, rootX, rootY;  // root exponents of Delta/Delta_xy, Delta/Delta_x, Delta/Delta_y
};

inline DeltaTable deltaOrders(const XYLevel& L) {
    const auto al = atkinLehner(L);
    const BigInt q = L.q(), qx = L.qx(), qy = L.qy();
    DeltaTable t;
    t.delta = {1, qx * qy, qy, qx};
    auto permuted = [&](const CuspPerm& w) {
        std::array<BigInt, kCuspCount> r;
        for (std::size_t c = 0; c < kCuspCount; ++c) r[c] = t.delta[w[c]];
        return r;
    };
    t.deltaX = permuted(al.wx);
    t.deltaY = permuted(al.wy);
    t.deltaXY = permuted(al.wxy);
    t.rootXY = q - 1;
    t.rootX = q - 1;
    t.rootY = q * q - 1;
    return t;
}

// Rows over generators (c0, cx, cy), c_m = [m] - [inf].
inline IntMatrix relationMatrix(const XYLevel& L) {
    const DeltaTable t = deltaOrders(L);
    IntMatrix R(4, 3);
    auto put = [&](std::size_t row, const std::array<BigInt, kCuspCount>& other, const BigInt& k) {
        BigInt deg = 0;
        for (std::size_t c = 0; c < kCuspCount; ++c) {
            const BigInt d = t.delta[c] - other[c];
            deg += d;
            ensure(d % k == 0, "quotient divisor is not divisible by its root exponent");
            if (c != kCuspInf) R(row, c - 1) = d / k;
        }
        ensure(deg == 0, "quotient divisor has nonzero degree");
    };
    put(0, t.deltaXY, t.rootXY);
    put(1, t.deltaX, t.rootX);
    put(2, t.deltaY, t.rootY);
    // [inf] + [0] - [x] - [y]
    R(3, 0) = 1;
    R(3, 1) = -1;
    R(3, 2) = -1;
    return R;
}

inline FinAbGroup cuspidalGroup(const XYLevel& L) { return groupFromRelations(3, relationMatrix(L)); }

// Cusp divisor generators in user coordinates of the cuspidal group.
inline Coords cuspClass(std::size_t cusp) {
    Coords v(3);
    if (cusp != kCuspInf) v[cusp - 1] = 1;
    return v;
}

struct LocalModel {
    std::string place;
    LengthGraph graph;
    CriticalGroupResult component;
    std::array<std::string, kCuspCount> reduction;  // cusp -> vertex label
    std::map<std::string, std::string> named;       // Z, Z', E1, ... -> vertex label
};

// Two components Z', Z joined by one edge per singular point; [inf] and its
// W_{n/v} partner lie on Z'.
inline LocalModel twoComponentModel(const std::string& name, const std::vector<std::uint64_t>& thickness,
                                    const CuspPerm& wOther) {
    LocalModel m;
    m.place = name;
    m.graph.addVertex("Z'");
    m.graph.addVertex("Z");
    for (auto t : thickness) m.graph.addEdge(0, 1, t);
    m.component = criticalGroup(m.graph);
    ensure(wOther[kCuspZero] != kCuspInf && wOther[wOther[kCuspZero]] == kCuspZero, "component rule is inconsistent");
    for (std::size_t c = 0; c < kCuspCount; ++c) m.reduction[c] = (c == kCuspInf || c == wOther[kCuspInf]) ? "Z'" : "Z";
    m.named = {{"Z'", "Z'"}, {"Z", "Z"}};
    return m;
}

inline LocalModel modelAtX(const XYLevel& L) {
    const auto t = orbitThicknessData(L.placeX(), L.placeY());
    return twoComponentModel("x", t.thickness, atkinLehner(L).wy);
}

inline LocalModel modelAtY(const XYLevel& L) {
    const auto t = orbitThicknessData(L.placeY(), L.placeX());
    return twoComponentModel("y", t.thickness, atkinLehner(L).wx);
}

inline LocalModel modelAtInfinity(const XYLevel& L) {
    const auto qg = buildQuotientGraph(ResidueRing(L.n()), -1, {"x", "y"});
    const auto fd = finiteDualGraph(qg);
    ensure(!fd.collapsed, "finite dual graph collapsed");
    LocalModel m;
    m.place = "inf";
    m.graph = fd.graph;
    m.component = criticalGroup(m.graph);
    const auto& names = kCuspNames;
    for (std::size_t c = 0; c < kCuspCount; ++c) m.reduction[c] = m.graph.label(fd.cuspReduction.at(names[c]));
    // E_1 carries [inf], E_q carries [0]; Z' is the other neighbour of E_q.
    const std::size_t e1 = fd.cuspReduction.at(names[kCuspInf]), eq = fd.cuspReduction.at(names[kCuspZero]);
    std::vector<std::size_t> other;
    for (const auto& e : m.graph.edges()) {
        const std::size_t u = e.u == eq ? e.v : (e.v == eq ? e.u : SIZE_MAX);
        if (u != SIZE_MAX && u != e1 && std::find(other.begin(), other.end(), u) == other.end()) other.push_back(u);
    }
    ensure(other.size() == 1 && m.graph.degree(eq) == 2, "E_q does not sit on a chain");
    m.named = {{"E1", m.reduction[kCuspInf]}, {"Eq", m.reduction[kCuspZero]},
               {"G1", m.reduction[kCuspX]},   {"Gq", m.reduction[kCuspY]},
               {"Z'", m.graph.label(other[0])}};
    return m;
}

// phi_v(c_m) = class of red([m]) - red([inf]).
inline AbHom specializationMap(const FinAbGroup& C, const LocalModel& m) {
    std::vector<Coords> images;
    const Coords base = m.component.divisorFromLabels({{m.reduction[kCuspInf], 1}});
    for (std::size_t c : {kCuspZero, kCuspX, kCuspY}) {
        Coords d = m.component.divisorFromLabels({{m.reduction[c], 1}});
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= base[i];
        images.push_back(m.component.userVector(d));
    }
    return homFromImages(C, m.component.group, images);
}

struct CuspidalData {
    XYLevel level;
    ALInvolutions al;
    DeltaTable delta;
    IntMatrix relations;
    FinAbGroup C;
    Coords c0, cx, cy;  // canonical coordinates in C
    LocalModel atX, atY, atInf;
    AbHom phiX, phiY, phiInf;
};

inline CuspidalData cuspidalData(const XYLevel& L) {
    const auto C = cuspidalGroup(L);
    auto mx = modelAtX(L), my = modelAtY(L), mi = modelAtInfinity(L);
    auto px = specializationMap(C, mx), py = specializationMap(C, my), pi = specializationMap(C, mi);
    return CuspidalData{L,
                        atkinLehner(L),
                        deltaOrders(L),
                        relationMatrix(L),
                        C,
                        C.fromUser(cuspClass(kCuspZero)),
                        C.fromUser(cuspClass(kCuspX)),
                        C.fromUser(cuspClass(kCuspY)),
                        std::move(mx),
                        std::move(my),
                        std::move(mi),
                        std::move(px),
                        std::move(py),
                        std::move(pi)};
}

struct Claim {
    std::string name;
    bool pass = false;
    std::string detail;
};

inline nlohmann::json toJson(const Claim& c) { return {{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}}; }

inline bool allPass(const std::vector<Claim>& cs) {
    return std::all_of(cs.begin(), cs.end(), [](const Claim& c) { return c.pass; });
}

// Image of c under phi, in the target's canonical coordinates.
inline Coords imageOf(const AbHom& h, const Coords& c) { return h.apply(c); }

inline std::vector<Claim> certifyOrders(const CuspidalData& d) {
    const BigInt q = d.level.q();
    const FinAbGroup& C = d.C;
    std::vector<Claim> out;
    auto add = [&](std::string n, bool ok, std::string det) { out.push_back({std::move(n), ok, std::move(det)}); };
    add("upper bound c_x", C.isZero(C.scale(q + 1, d.cx)), "(q+1) c_x = 0 in the presentation");
    add("upper bound c_y", C.isZero(C.scale(q * q + 1, d.cy)), "(q^2+1) c_y = 0 in the presentation");
    add("c_0 = c_x + c_y", C.equal(d.c0, C.add(d.cx, d.cy)), "hyperelliptic relation");
    const BigInt lx = elementOrder(d.phiY.target(), imageOf(d.phiY, d.cx));
    add("lower bound c_x", lx == q + 1, "ord phi_y(c_x) = " + lx.str());
    const BigInt ly = elementOrder(d.phiX.target(), imageOf(d.phiX, d.cy));
    add("lower bound c_y", ly == q * q + 1, "ord phi_x(c_y) = " + ly.str());
    // Joint image of (phi_x, phi_y) on <c_x, c_y>.
    const FinAbGroup prod = FinAbGroup::fromFactors([&] {
        auto f = d.phiX.target().invariantFactors();
        const auto& g = d.phiY.target().invariantFactors();
        f.insert(f.end(), g.begin(), g.end());
        return f;
    }());
    auto pair = [&](const Coords& c) {
        Coords a = imageOf(d.phiX, c);
        const Coords b = imageOf(d.phiY, c);
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };
    const BigInt joint = subgroupGeneratedBy(prod, {pair(d.cx), pair(d.cy)}).group.order();
    add("joint image", joint == (q + 1) * (q * q + 1), "|im(phi_x, phi_y)| = " + joint.str());
    add("|C|", C.order() == (q + 1) * (q * q + 1), "|C| = " + C.order().str());
    const BigInt sx = subgroupGeneratedBy(C, {d.cx}).group.order(), sy = subgroupGeneratedBy(C, {d.cy}).group.order();
    add("direct sum", sx * sy == C.order() && sx == q + 1 && sy == q * q + 1,
        "|<c_x>| |<c_y>| = " + BigInt(sx * sy).str());
    return out;
}

struct SequenceVerdict {
    std::string place;
    FinAbGroup kernel, cokernel;
    bool pass = false;
};

inline std::vector<SequenceVerdict> exactSequences(const CuspidalData& d) {
    const BigInt q = d.level.q();
    const bool even = q % 2 == 0;
    auto check = [](const std::string& name, const AbHom& h, const FinAbGroup& wantK, const FinAbGroup& wantC) {
        auto kic = kernelImageCokernel(h);
        SequenceVerdict v{name, kic.kernel.group, kic.cokernel, false};
        v.pass = v.kernel.isomorphicTo(wantK) && v.cokernel.isomorphicTo(wantC);
        return v;
    };
    const auto trivial = FinAbGroup::fromFactors({});
    return {check("x", d.phiX, FinAbGroup::cyclic(q + 1), FinAbGroup::cyclic(q + 1)),
            check("y", d.phiY, FinAbGroup::cyclic(q * q + 1), trivial),
            check("inf", d.phiInf, even ? trivial : FinAbGroup::cyclic(2), even ? trivial : FinAbGroup::cyclic(2))};
}

struct SubgroupC0 {
    FinAbGroup group;
    bool injectiveAtX = false, injectiveAtInf = false, kernelOfPhiY = false;
};

inline SubgroupC0 subgroupC0(const CuspidalData& d) {
    const auto sub = subgroupGeneratedBy(d.C, {d.cy});
    SubgroupC0 r{sub.group};
    const BigInt n = sub.group.order();
    r.injectiveAtX = elementOrder(d.phiX.target(), imageOf(d.phiX, d.cy)) == n;
    r.injectiveAtInf = elementOrder(d.phiInf.target(), imageOf(d.phiInf, d.cy)) == n;
    const auto ker = kernelImageCokernel(d.phiY).kernel;
    bool inside = true;
    for (const auto& g : ker.generators) inside = inside && inSubgroup(d.C, {d.cy}, g);
    r.kernelOfPhiY = inside && ker.group.order() == n;
    return r;
}

inline nlohmann::json coordsJson(const Coords& c) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& v : c) a.push_back(bigToJson(v));
    return a;
}

inline nlohmann::json cuspidalReport(const CuspidalData& d) {
    nlohmann::json j;
    j["q"] = d.level.q();
    j["x"] = d.level.x.toString();
    j["y"] = d.level.y.toString();
    j["group"] = toJson(d.C);
    j["orders"] = {{"c0", bigToJson(elementOrder(d.C, d.c0))},
                   {"cx", bigToJson(elementOrder(d.C, d.cx))},
                   {"cy", bigToJson(elementOrder(d.C, d.cy))}};
    nlohmann::json rel = nlohmann::json::array();
    for (std::size_t i = 0; i < d.relations.rows(); ++i) rel.push_back(coordsJson(d.relations.row(i)));
    j["relations"] = rel;
    nlohmann::json maps;
    for (const auto* h : {&d.phiX, &d.phiY, &d.phiInf}) {
        const std::string name = h == &d.phiX ? "x" : (h == &d.phiY ? "y" : "inf");
        maps[name] = {{"target", toJson(h->target())},
                      {"c0", coordsJson(h->apply(d.c0))},
                      {"cx", coordsJson(h->apply(d.cx))},
                      {"cy", coordsJson(h->apply(d.cy))}};
    }
    j["maps"] = maps;
    nlohmann::json seq = nlohmann::json::object();
    for (const auto& v : exactSequences(d))
        seq[v.place] = {{"kernel", toJson(v.kernel)}, {"cokernel", toJson(v.cokernel)}, {"pass", v.pass}};
    j["sequences"] = seq;
    nlohmann::json claims = nlohmann::json::array();
    for (const auto& c : certifyOrders(d)) claims.push_back(toJson(c));
    j["certificate"] = claims;
    const auto c0 = subgroupC0(d);
    j["C0"] = {{"group", toJson(c0.group)},
               {"injectiveAtX", c0.injectiveAtX},
               {"injectiveAtInf", c0.injectiveAtInf},
               {"kernelOfPhiY", c0.kernelOfPhiY}};
    return j;
}

}
