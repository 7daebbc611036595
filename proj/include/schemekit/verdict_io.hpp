#pragma once
// Machine-readable verdict emission for the compare pipeline.

#include "schemekit/equivalence.hpp"
#include "schemekit/scheme_io.hpp"

namespace schemekit {

inline const char* cond_status_name(CondStatus s) {
    switch (s) {
        case CondStatus::pass: return "pass";
        case CondStatus::fail: return "fail";
        default: return "skipped-needs-certificate";
    }
}

inline Json verdict_to_json(const Verdict& v, bool include_witness = false) {
    Json j = Json::object();
    j["equivalent"] = v.equivalent;
    Json conds = Json::object();
    for (const auto& [id, res] : v.per_condition) {
        Json c = Json::object();
        c["status"] = cond_status_name(res.status);
        c["diagnostics"] = res.diagnostics;
        conds["condition" + std::to_string(id)] = c;
    }
    j["per_condition"] = conds;
    if (include_witness && v.witness) j["witness"] = certificate_to_json(*v.witness);
    return j;
}

}  // namespace schemekit
