#pragma once

#include <array>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jllab/btquotient.hpp"
#include "jllab/cuspidal.hpp"
#include "jllab/drinfeld.hpp"
#include "jllab/quaternion.hpp"
#include "jllab/verify.hpp"

namespace jllab {

inline constexpr int kSchemaVersion = 1;

inline std::string schemaId(const std::string& name) { return "jllab/" + name + "/v" + std::to_string(kSchemaVersion); }

inline nlohmann::json levelJson(const XYLevel& L) {
    return {{"q", L.q()}, {"x", toJson(L.x)}, {"y", toJson(L.y)}, {"xText", L.x.toString()}, {"yText", L.y.toString()}};
}

struct GroupCell {
    FinAbGroup group;
    std::string provenance;
};

struct ComponentGroupTable {
    XYLevel level;
    std::array<GroupCell, 3> j0, jxy;  // x, y, inf
};

inline const std::array<std::string, 3> kPlaceColumns{"x", "y", "inf"};

inline ComponentGroupTable componentGroupTable(const XYLevel& L) {
    const auto jl = componentGroupsJxy(L.x, L.y);
    const std::string twoComp = "drinfeld.orbitThicknessData > cuspidal.twoComponentModel > dualgraph.criticalGroup";
    return {L,
            {GroupCell{modelAtX(L).component.group, twoComp},
             GroupCell{modelAtY(L).component.group, twoComp},
             GroupCell{modelAtInfinity(L).component.group,
                       "btquotient.buildQuotientGraph > btquotient.finiteDualGraph > dualgraph.criticalGroup"}},
            {GroupCell{jl.atX, "quaternion.massAndUnits > quaternion.xrGraphData > dualgraph.criticalGroup"},
             GroupCell{jl.atY, "quaternion.massAndUnits > quaternion.xrGraphData > dualgraph.criticalGroup"},
             GroupCell{jl.atInf, "quaternion.genusClosedForm > quaternion.xrInfinityGraphData > dualgraph.criticalGroup"}}};
}

inline nlohmann::json toJson(const ComponentGroupTable& t) {
    auto row = [](const std::array<GroupCell, 3>& cells) {
        nlohmann::json r;
        for (std::size_t i = 0; i < 3; ++i)
            r[kPlaceColumns[i]] = {{"group", toJson(cells[i].group)},
                                   {"text", cells[i].group.toString()},
                                   {"provenance", cells[i].provenance}};
        return r;
    };
    return {{"schema", schemaId("component-groups")},
            {"level", levelJson(t.level)},
            {"rows", {{"J0", row(t.j0)}, {"Jxy", row(t.jxy)}}}};
}

inline std::string renderTable(const ComponentGroupTable& t) {
    std::ostringstream os;
    os << "q = " << t.level.q() << ", x = " << t.level.x.toString() << ", y = " << t.level.y.toString() << "\n";
    auto cell = [&](const std::string& s) { os << s << std::string(s.size() < 12 ? 12 - s.size() : 1, ' '); };
    cell("");
    for (const auto& c : kPlaceColumns) cell(c);
    os << "\n";
    for (const auto& [name, cells] : {std::pair{std::string("J0(xy)"), &t.j0}, std::pair{std::string("J^xy"), &t.jxy}}) {
        cell(name);
        for (const auto& c : *cells) cell(c.group.toString());
        os << "\n";
    }
    std::string out = os.str();
    // drop trailing padding
    std::string trimmed;
    std::istringstream in(out);
    for (std::string line; std::getline(in, line);) {
        line.erase(line.find_last_not_of(' ') + 1);
        trimmed += line + "\n";
    }
    return trimmed;
}

inline nlohmann::json cuspidalReportJson(const XYLevel& L) {
    auto j = cuspidalReport(cuspidalData(L));
    j["schema"] = schemaId("cuspidal");
    j["level"] = levelJson(L);
    j["provenance"] = {{"group", "cuspidal.deltaOrders > cuspidal.relationMatrix > abgroup.groupFromRelations"},
                       {"orders", "abgroup.elementOrder"},
                       {"maps", "cuspidal.local models > cuspidal.specializationMap"},
                       {"sequences", "abgroup.kernel/cokernel of the specialization maps"},
                       {"certificate", "cuspidal.certifyOrders"},
                       {"C0", "cuspidal.subgroupC0"}};
    return j;
}

inline QuotientGraph levelQuotientGraph(const XYLevel& L) { return buildQuotientGraph(ResidueRing(L.n()), -1, {"x", "y"}); }

inline nlohmann::json quotientGraphReport(const XYLevel& L) {
    const auto g = levelQuotientGraph(L);
    const auto fd = finiteDualGraph(g);
    nlohmann::json j = toJson(g);
    j["schema"] = schemaId("quotient-graph");
    j["level"] = levelJson(L);
    j["genus"] = genusFromQuotient(g);
    j["finiteDual"] = fd.collapsed ? nlohmann::json(nullptr) : toJson(fd.graph);
    j["provenance"] = {{"vertices", "btquotient.layerOrbits"},
                       {"edges", "btquotient.buildQuotientGraph"},
                       {"genus", "btquotient.genusFromQuotient"},
                       {"finiteDual", "btquotient.finiteDualGraph"}};
    return j;
}

inline nlohmann::json quaternionReportJson(const XYLevel& L) {
    auto j = quaternionReport(L.x, L.y);
    j["schema"] = schemaId("quaternion");
    j["level"] = levelJson(L);
    j["provenance"] = {{"masses", "quaternion.massAndUnits"},
                       {"graphs", "quaternion.xrGraphData, quaternion.xrInfinityGraphData"},
                       {"genus", "quaternion.genusXR"},
                       {"componentGroups", "quaternion.twoVertexGraph > dualgraph.criticalGroup"}};
    return j;
}

// The census runs at v and its orbit data uses the other place of the level:
// deg v = 1 pairs with the smallest irreducible quadratic, deg v = 2 with T.
inline nlohmann::json censusReport(const Place& v) {
    require(!v.isInfinity(), "the census needs a finite place");
    require(v.degree() == 1 || v.degree() == 2, "the census place must have degree 1 or 2");
    const FieldPtr& F = v.field();
    const Poly aux = v.degree() == 1 ? irreduciblesOfDegree(F, 2)[0] : Poly::variable(F);
    const auto c = supersingularCensus(v);
    const auto o = orbitThicknessData(v, Place::finite(aux));
    nlohmann::json j;
    j["schema"] = schemaId("census");
    j["q"] = F->size();
    j["place"] = toJson(v.generator());
    j["placeText"] = v.name();
    j["aux"] = toJson(aux);
    j["auxText"] = aux.toString();
    j["K"] = c.K->size();
    j["gammaT"] = c.gammaT;
    j["jValues"] = c.jValues;
    j["orbit"] = toJson(o);
    j["provenance"] = {{"jValues", "drinfeld.supersingularCensus"},
                       {"gammaT", "drinfeld.characteristicRoot"},
                       {"orbit", "drinfeld.orbitThicknessData > btquotient.genusFromQuotient"}};
    return j;
}

inline nlohmann::json verifyReportJson(const VerifyReport& r) {
    auto j = toJson(r);
    j["schema"] = schemaId("verify");
    return j;
}

inline std::string renderVerify(const VerifyReport& r) {
    std::ostringstream os;
    os << "q = " << r.q << ", x = " << r.x << ", y = " << r.y << "\n";
    for (const auto& c : r.checks) os << c.id << ". " << c.name << ": " << statusName(c.status) << " (" << c.detail << ")\n";
    if (!r.selectedKernel.empty()) os << "selected kernel: " << r.selectedKernel << "\n";
    os << (r.pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

namespace detail {

inline void flatten(const nlohmann::json& j, const std::string& path, std::ostringstream& os) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, os);
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", os);
    } else {
        os << path << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

}

// One "path = value" line per leaf; arrays of scalars stay on one line.
inline std::string flattenText(const nlohmann::json& j) {
    std::ostringstream os;
    detail::flatten(j, "", os);
    return os.str();
}

}
