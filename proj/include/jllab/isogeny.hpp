#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jllab/abgroup.hpp"
#include "jllab/algebra.hpp"
#include "jllab/cuspidal.hpp"
#include "jllab/quaternion.hpp"

namespace jllab {

// Order form of 0 -> H1 -> Phi_A -> Phi_B -> H0 -> 0.
inline BigInt quotientComponentOrder(const BigInt& phiA, const BigInt& h0, const BigInt& h1) {
    require(h1 > 0 && phiA > 0 && h0 > 0, "orders must be positive");
    const BigInt num = phiA * h0;
    if (num % h1 != 0) throw DomainError("|Phi_A| |H0| is not divisible by |H1|");
    return num / h1;
}

// H with its specialization into Phi_A at one place.
struct KernelDatum {
    BigInt order;  // |H|
    BigInt h0;     // |ker|
    BigInt h1;     // |im|
};

inline KernelDatum kernelDatum(const AbHom& phi, const std::vector<Coords>& generators) {
    const auto H = subgroupGeneratedBy(phi.source(), generators);
    std::vector<Coords> imgs;
    for (const auto& g : generators) imgs.push_back(phi.apply(g));
    const BigInt h1 = subgroupGeneratedBy(phi.target(), imgs).group.order();
    const BigInt n = H.group.order();
    ensure(n % h1 == 0, "image order does not divide |H|");
    return {n, n / h1, h1};
}

struct PlaceComparison {
    std::string place;
    BigInt phiA, h0, h1, quotient, jacquetLanglands;
    bool pass = false;
};

// Component orders of J_0(xy)/C_0 against those of J^{xy}.
inline std::vector<PlaceComparison> compareTables(const CuspidalData& d, const JxyComponentGroups& jl) {
    std::vector<PlaceComparison> out;
    auto one = [&](const std::string& name, const AbHom& phi, const FinAbGroup& target) {
        const KernelDatum k = kernelDatum(phi, {d.cy});
        PlaceComparison c{name, phi.target().order(), k.h0, k.h1, 0, target.order(), false};
        c.quotient = quotientComponentOrder(c.phiA, c.h0, c.h1);
        ensure(c.phiA * c.h0 == c.quotient * c.h1, "alternating order product fails");
        c.pass = c.quotient == c.jacquetLanglands;
        out.push_back(c);
    };
    one("x", d.phiX, jl.atX);
    one("y", d.phiY, jl.atY);
    one("inf", d.phiInf, jl.atInf);
    return out;
}

inline std::vector<PlaceComparison> compareTables(std::uint32_t q) {
    const auto L = XYLevel::standard(q);
    return compareTables(cuspidalData(L), componentGroupsJxy(L.x, L.y));
}

// Y^2 + a1 XY + a3 Y = X^3 + a2 X^2 + a4 X + a6 over F_q[T].
struct WeierstrassCurve {
    Poly a1, a2, a3, a4, a6;

    static WeierstrassCurve fromStrings(const FieldPtr& F, const std::array<std::string, 5>& a) {
        return {parsePoly(F, a[0]), parsePoly(F, a[1]), parsePoly(F, a[2]), parsePoly(F, a[3]), parsePoly(F, a[4])};
    }
    const FieldPtr& field() const { return a1.field(); }
};

struct WeierstrassInvariants {
    Poly b2, b4, b6, b8, c4, delta;
    RationalFunction j;
};

inline WeierstrassInvariants weierstrassInvariants(const WeierstrassCurve& e) {
    const FieldPtr& F = e.field();
    auto k = [&](long long n) { return Poly::constant(F, F->fromInt(n)); };
    const Poly b2 = e.a1 * e.a1 + k(4) * e.a2;
    const Poly b4 = k(2) * e.a4 + e.a1 * e.a3;
    const Poly b6 = e.a3 * e.a3 + k(4) * e.a6;
    const Poly b8 = e.a1 * e.a1 * e.a6 + k(4) * e.a2 * e.a6 - e.a1 * e.a3 * e.a4 + e.a2 * e.a3 * e.a3 - e.a4 * e.a4;
    const Poly c4 = b2 * b2 - k(24) * b4;
    const Poly delta = k(-1) * b2 * b2 * b8 - k(8) * b4 * b4 * b4 - k(27) * b6 * b6 + k(9) * b2 * b4 * b6;
    if (delta.isZero()) throw DomainError("singular curve");
    return {b2, b4, b6, b8, c4, delta, RationalFunction(c4 * c4 * c4, delta)};
}

// -ord_v(j) when positive.
inline std::optional<int> multiplicativeOrder(const WeierstrassCurve& e, const Place& v) {
    const auto inv = weierstrassInvariants(e);
    if (inv.j.isZero()) return std::nullopt;
    const int o = -ordAtPlace(inv.j, v);
    if (o <= 0) return std::nullopt;
    return o;
}

inline int componentOrderAtPlace(const WeierstrassCurve& e, const Place& v) {
    const auto o = multiplicativeOrder(e, v);
    if (!o) throw DomainError("reduction at " + v.name() + " is not multiplicative");
    return *o;
}

// Distinct monic irreducible factors by trial division.
inline std::vector<Poly> distinctPrimeFactors(Poly f) {
    require(!f.isZero(), "factoring zero");
    f = f.monic();
    std::vector<Poly> out;
    for (int d = 1; 2 * d <= f.degree(); ++d) {
        for (const Poly& g : irreduciblesOfDegree(f.field(), d)) {
            if (!divides(g, f)) continue;
            out.push_back(g);
            while (divides(g, f)) f = f / g;
        }
    }
    if (f.degree() > 0) out.push_back(f);
    std::sort(out.begin(), out.end());
    return out;
}

struct ReferenceCurve {
    std::string name;
    WeierstrassCurve curve;
    std::array<int, 3> expected;  // orders at x, y, inf
};

// Two isogeny classes over F_2(T) with x = T+1, y = T^2+T+1.
inline std::vector<ReferenceCurve> referenceCurvesQ2() {
    const auto F = Field::make(2);
    auto c = [&](const std::string& a2, const std::string& a6) {
        return WeierstrassCurve::fromStrings(F, {"T", a2, "1", "0", a6});
    };
    return {{"E1", c("0", "T^3+1"), {3, 3, 3}},
            {"E1'", c("0", "T^5+T^2"), {9, 1, 1}},
            {"E1''", c("0", "0"), {1, 1, 9}},
            {"E2", c("1", "T"), {5, 1, 5}},
            {"E2'", c("1", "T^5+T^2+T"), {1, 5, 1}}};
}

struct CurveCheck {
    std::string name;
    std::array<int, 3> computed{}, expected{};
    std::vector<std::string> badPlaces;
    bool pass = false;
};

inline std::vector<CurveCheck> checkReferenceCurves() {
    const auto F = Field::make(2);
    const std::array<Place, 3> places{Place::finite(parsePoly(F, "T+1")), Place::finite(parsePoly(F, "T^2+T+1")),
                                      Place::infinity(F)};
    std::vector<CurveCheck> out;
    for (const auto& rc : referenceCurvesQ2()) {
        CurveCheck c{rc.name, {}, rc.expected, {}, true};
        for (std::size_t i = 0; i < 3; ++i) {
            const auto o = multiplicativeOrder(rc.curve, places[i]);
            c.computed[i] = o.value_or(0);
        }
        for (const auto& p : distinctPrimeFactors(weierstrassInvariants(rc.curve).delta)) c.badPlaces.push_back(p.toString());
        if (multiplicativeOrder(rc.curve, places[2])) c.badPlaces.push_back("inf");
        c.pass = c.computed == c.expected &&
                 c.badPlaces == std::vector<std::string>{places[0].name(), places[1].name(), "inf"};
        out.push_back(c);
    }
    return out;
}

struct Candidate {
    std::string name;
    BigInt h0, h1, order;
    bool matches = false;
};

struct Q2Verification {
    std::vector<PlaceComparison> tables;
    std::vector<CurveCheck> curves;
    std::vector<Candidate> candidates;
    std::string selected;
    bool selectedIsC0 = false;
    std::string optimalNote;
    bool pass = false;
};

// Kernel candidates at infinity for q = 2: H3 = <c_y> = C_0 and H1 = <c_x>
// come from the cuspidal group; H2 = mu_3 is not cuspidal and specializes
// to 0 at infinity, so it only contributes to |H0|.
inline XYLevel verificationLevelQ2() {
    const auto F = Field::make(2);
    return XYLevel(parsePoly(F, "T+1"), parsePoly(F, "T^2+T+1"));
}

inline Q2Verification q2Verification(const XYLevel& L = verificationLevelQ2()) {
    require(L.q() == 2, "the q = 2 verification needs q = 2");
    const auto d = cuspidalData(L);
    const auto jl = componentGroupsJxy(L.x, L.y);
    Q2Verification v;
    v.tables = compareTables(d, jl);
    v.curves = checkReferenceCurves();
    const BigInt phiInf = d.phiInf.target().order();
    const BigInt target = jl.atInf.order();
    const KernelDatum h3 = kernelDatum(d.phiInf, {d.cy});
    const KernelDatum h13 = kernelDatum(d.phiInf, {d.cx, d.cy});
    const BigInt mu3 = 3;  // |H2|, vanishing at infinity
    auto cand = [&](std::string name, const BigInt& h0, const BigInt& h1) {
        Candidate c{std::move(name), h0, h1, quotientComponentOrder(phiInf, h0, h1), false};
        c.matches = c.order == target;
        v.candidates.push_back(c);
    };
    cand("H3", h3.h0, h3.h1);
    cand("H1+H3", h13.h0, h13.h1);
    cand("H2+H3", h3.h0 * mu3, h3.h1);
    std::size_t matches = 0;
    for (const auto& c : v.candidates)
        if (c.matches) {
            ++matches;
            v.selected = c.name;
        }
    const auto c0 = subgroupC0(d);
    v.selectedIsC0 = matches == 1 && v.selected == "H3" && c0.group.order() == h3.order;
    // Conditional: an optimal curve has #Phi_{E,inf} dividing q^2 - 1 = 3.
    std::string ruledOut;
    for (const auto& c : v.curves)
        if (c.name.rfind("E2", 0) == 0 && 3 % c.computed[2] != 0) ruledOut += (ruledOut.empty() ? "" : ",") + c.name;
    v.optimalNote = "conditional: #Phi_inf | q^2-1 rules out " + (ruledOut.empty() ? std::string("none") : ruledOut);
    const bool tablesOk = std::all_of(v.tables.begin(), v.tables.end(), [](const auto& t) { return t.pass; });
    const bool curvesOk = std::all_of(v.curves.begin(), v.curves.end(), [](const auto& c) { return c.pass; });
    v.pass = tablesOk && curvesOk && v.selectedIsC0;
    return v;
}

inline nlohmann::json toJson(const PlaceComparison& c) {
    return {{"place", c.place},         {"phiA", bigToJson(c.phiA)}, {"h0", bigToJson(c.h0)},
            {"h1", bigToJson(c.h1)},    {"quotient", bigToJson(c.quotient)},
            {"jacquetLanglands", bigToJson(c.jacquetLanglands)}, {"pass", c.pass}};
}

inline nlohmann::json toJson(const Q2Verification& v) {
    nlohmann::json j;
    j["tables"] = nlohmann::json::array();
    for (const auto& t : v.tables) j["tables"].push_back(toJson(t));
    j["curves"] = nlohmann::json::array();
    for (const auto& c : v.curves)
        j["curves"].push_back(
            {{"name", c.name}, {"computed", c.computed}, {"expected", c.expected}, {"badPlaces", c.badPlaces}, {"pass", c.pass}});
    j["candidates"] = nlohmann::json::array();
    for (const auto& c : v.candidates)
        j["candidates"].push_back({{"name", c.name},
                                   {"h0", bigToJson(c.h0)},
                                   {"h1", bigToJson(c.h1)},
                                   {"order", bigToJson(c.order)},
                                   {"matches", c.matches}});
    j["selected"] = v.selected;
    j["selectedIsC0"] = v.selectedIsC0;
    j["optimal"] = v.optimalNote;
    j["pass"] = v.pass;
    return j;
}

}
