#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "jllab/report.hpp"

using namespace jllab;

namespace {

constexpr int kUsage = 2;
constexpr std::uint32_t kMaxQ = 16;

struct Common {
    std::uint32_t q = 2;
    std::string x, y, format;
};

void addCommon(CLI::App* sub, Common& c) {
    sub->add_option("--q", c.q, "field size, a prime power <= 16")->capture_default_str();
    sub->add_option("--x", c.x, "degree-1 place (default T; T+1 for verify at q = 2)");
    sub->add_option("--y", c.y, "degree-2 place (default: smallest irreducible quadratic)");
    sub->add_option("--format", c.format, "json, dot or text (env JLLAB_OUTPUT otherwise)");
}

FieldPtr baseField(std::uint32_t q) {
    require(q <= kMaxQ, "q must be at most " + std::to_string(kMaxQ));
    return Field::make(q);
}

XYLevel levelFrom(const Common& c, bool verifyDefaults) {
    const auto F = baseField(c.q);
    const bool fixedQ2 = verifyDefaults && c.q == 2;
    const Poly x = parsePoly(F, c.x.empty() ? (fixedQ2 ? "T+1" : "T") : c.x);
    const Poly y = c.y.empty() ? irreduciblesOfDegree(F, 2)[0] : parsePoly(F, c.y);
    return XYLevel(x, y);
}

std::string formatOf(const Common& c) {
    std::string f = c.format;
    if (f.empty()) {
        const char* env = std::getenv("JLLAB_OUTPUT");
        f = env && *env ? env : "json";
    }
    require(f == "json" || f == "dot" || f == "text", "unknown output format: " + f);
    return f;
}

void emitJson(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

void emit(const nlohmann::json& j, const std::string& format) {
    require(format != "dot", "dot output is only available for quotient-graph");
    if (format == "text")
        std::cout << flattenText(j);
    else
        emitJson(j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Component groups, cuspidal groups and quotient graphs for level xy over F_q(T)"};
    app.require_subcommand(1);
    Common c;
    std::string place = "T";
    bool injectFault = false;

    auto* cg = app.add_subcommand("component-groups", "component groups of J0(xy) and J^xy at x, y, inf");
    auto* cu = app.add_subcommand("cuspidal", "cuspidal divisor group and its specialization maps");
    auto* qg = app.add_subcommand("quotient-graph", "quotient of the Bruhat-Tits tree by Gamma_0(xy)");
    auto* qu = app.add_subcommand("quaternion", "masses, graph data and genus for the quaternionic curve");
    auto* dc = app.add_subcommand("drinfeld-census", "supersingular j-invariants at a place of degree 1 or 2");
    auto* ve = app.add_subcommand("verify", "run every applicable check; exit 1 on failure");
    for (auto* s : {cg, cu, qg, qu, ve}) addCommon(s, c);
    dc->add_option("--q", c.q, "field size, a prime power <= 16")->capture_default_str();
    dc->add_option("--place", place, "monic irreducible place of degree 1 or 2")->capture_default_str();
    dc->add_option("--format", c.format, "json or text (env JLLAB_OUTPUT otherwise)");
    ve->add_flag("--inject-fault", injectFault, "corrupt one expected order to exercise the failure path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        const std::string format = formatOf(c);
        if (*cg) {
            const auto t = componentGroupTable(levelFrom(c, false));
            if (format == "text")
                std::cout << renderTable(t);
            else
                emit(toJson(t), format);
        } else if (*cu) {
            emit(cuspidalReportJson(levelFrom(c, false)), format);
        } else if (*qg) {
            const auto L = levelFrom(c, false);
            if (format == "dot")
                std::cout << toDot(levelQuotientGraph(L));
            else
                emit(quotientGraphReport(L), format);
        } else if (*qu) {
            emit(quaternionReportJson(levelFrom(c, false)), format);
        } else if (*dc) {
            const auto F = baseField(c.q);
            emit(censusReport(Place::finite(parsePoly(F, place))), format);
        } else if (*ve) {
            const auto r = runVerify(levelFrom(c, true), VerifyOptions{injectFault});
            if (format == "text")
                std::cout << renderVerify(r);
            else
                emit(verifyReportJson(r), format);
            if (!r.pass()) {
                for (const auto& k : r.checks)
                    if (k.status == CheckStatus::Fail)
                        std::cerr << "verify: check " << k.id << " (" << k.name << ") failed: " << k.detail << "\n";
                return 1;
            }
        }
    } catch (const DomainError& e) {
        std::cerr << "jllab: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "jllab: internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
