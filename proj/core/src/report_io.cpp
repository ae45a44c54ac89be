#include <iomanip>
#include <ostream>

#include <json.hpp>

#include "gmlab/field_io.hpp"
#include "gmlab/verifier.hpp"

namespace gmlab {

void write_report_text(std::ostream& os, const BoundsReport& report) {
    std::size_t width = 10;
    for (const auto& e : report.entries) width = std::max(width, e.check_name.size());
    os << std::left << std::setw(static_cast<int>(width)) << "check" << "  " << std::setw(24) << "lhs"
       << std::setw(24) << "rhs" << std::setw(24) << "slack" << "result\n";
    for (const auto& e : report.entries) {
        os << std::setw(static_cast<int>(width)) << e.check_name << "  " << std::setw(24)
           << format_double(e.lhs) << std::setw(24) << format_double(e.rhs) << std::setw(24)
           << format_double(e.slack) << (e.passed ? "pass" : "FAIL") << '\n';
    }
    for (const auto& [key, val] : report.measurements) os << "# " << key << " = " << format_double(val) << '\n';
    os << "# tolerance pointwise=" << format_double(report.tolerances.pointwise)
       << " theorem=" << format_double(report.tolerances.theorem) << '\n';
    os << "overall: " << (report.overall() ? "pass" : "FAIL") << '\n';
}

std::string report_to_json(const BoundsReport& report, int indent) {
    nlohmann::json doc;
    doc["overall"] = report.overall();
    auto& entries = doc["entries"] = nlohmann::json::array();
    for (const auto& e : report.entries) {
        entries.push_back({{"check_name", e.check_name},
                           {"lhs", e.lhs},
                           {"rhs", e.rhs},
                           {"slack", e.slack},
                           {"tolerance", e.tolerance},
                           {"passed", e.passed},
                           {"anchor", e.anchor}});
    }
    doc["tolerances"] = {{"curvature", report.tolerances.curvature},
                         {"h", report.tolerances.h},
                         {"pointwise", report.tolerances.pointwise},
                         {"theorem", report.tolerances.theorem}};
    doc["measurements"] = report.measurements;
    return doc.dump(indent);
}

}  // namespace gmlab
