#pragma once
// On-disk formats. Scheme and certificate files are JSON-compatible object
// trees with a frozen key set; integers are plain, measured reals are decimal
// strings (shortest round-trip form), exact rationals are decimal-or-fraction
// strings. Serialization is byte-stable: fixed key order, fixed real
// formatting, two-space indentation.

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "schemekit/certificate.hpp"
#include "schemekit/moduli.hpp"
#include "schemekit/scheme.hpp"

namespace schemekit {

using Json = nlohmann::ordered_json;

namespace io_detail {

inline Json parse_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("not a well-formed object tree: ") + e.what());
    }
}

inline const Json& field(const Json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + ": missing section '" + key + "'");
    return *it;
}

inline std::string get_string(const Json& obj, const std::string& key, const std::string& path) {
    const Json& v = field(obj, key, path);
    if (!v.is_string()) throw ParseError(path + "/" + key + ": expected a string");
    return v.get<std::string>();
}

inline long long get_int(const Json& obj, const std::string& key, const std::string& path) {
    const Json& v = field(obj, key, path);
    if (!v.is_number_integer()) throw ParseError(path + "/" + key + ": expected an integer");
    return v.get<long long>();
}

inline double get_real(const Json& obj, const std::string& key, const std::string& path) {
    // reals travel as strings so that serialization stays byte-stable
    return parse_real(get_string(obj, key, path));
}

inline Rational get_rational(const Json& v, const std::string& path) {
    if (!v.is_string()) throw ParseError(path + ": expected a rational as a string");
    try {
        return parse_rational(v.get<std::string>());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline Mat2 get_mat2(const Json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_array() || v[0].size() != 2 || !v[1].is_array() ||
        v[1].size() != 2)
        throw ParseError(path + ": expected a 2x2 integer matrix [[a,b],[c,d]]");
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!v[i][j].is_number_integer()) throw ParseError(path + ": matrix entries must be integers");
    return {v[0][0].get<long long>(), v[0][1].get<long long>(), v[1][0].get<long long>(),
            v[1][1].get<long long>()};
}

inline Json put_mat2(const Mat2& m) {
    return Json::array({Json::array({m.a, m.b}), Json::array({m.c, m.d})});
}

inline std::pair<long long, long long> get_class(const Json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
        throw ParseError(path + ": expected an integer pair [p,q]");
    return {v[0].get<long long>(), v[1].get<long long>()};
}

inline FreeGroupAut get_aut(const Json& v, const std::string& path) {
    if (!v.is_object()) throw ParseError(path + ": expected an automorphism object");
    FreeGroupAut aut;
    aut.rank = static_cast<int>(get_int(v, "rank", path));
    const Json& imgs = field(v, "images", path);
    if (!imgs.is_array()) throw ParseError(path + "/images: expected an array of word literals");
    for (const auto& w : imgs) {
        if (!w.is_string()) throw ParseError(path + "/images: expected word literal strings");
        try {
            aut.images.push_back(parse_word(w.get<std::string>()));
        } catch (const ParseError& e) {
            throw ParseError(path + "/images: " + e.what());
        }
    }
    return aut;
}

inline Json put_aut(const FreeGroupAut& aut) {
    Json j = Json::object();
    j["rank"] = aut.rank;
    Json imgs = Json::array();
    for (const auto& w : aut.images) imgs.push_back(word_to_string(w));
    j["images"] = imgs;
    return j;
}

inline const Json& get_array(const Json& obj, const std::string& key, const std::string& path) {
    const Json& v = field(obj, key, path);
    if (!v.is_array()) throw ParseError(path + "/" + key + ": expected an array");
    return v;
}

template <typename T>
void check_duplicate(std::vector<T>& ids, const T& id, const std::string& path) {
    for (const auto& seen : ids)
        if (seen == id) throw ParseError(path + ": duplicate id '" + id + "'");
    ids.push_back(id);
}

inline std::map<std::string, std::string> get_label_map(const Json& obj, const std::string& key,
                                                        const std::string& path) {
    const Json& v = field(obj, key, path);
    if (!v.is_object()) throw ParseError(path + "/" + key + ": expected an object of label pairs");
    std::map<std::string, std::string> out;
    for (const auto& [k, val] : v.items()) {
        if (!val.is_string()) throw ParseError(path + "/" + key + "/" + k + ": expected a label string");
        out[k] = val.get<std::string>();
    }
    return out;
}

}  // namespace io_detail

// ---------- scheme ----------

inline Json scheme_to_json(const Scheme& s) {
    using io_detail::put_mat2;
    Json j = Json::object();
    Json comps = Json::array();
    for (const auto& c : s.components)
        comps.push_back(Json{{"id", c.id},
                             {"action_matrix", put_mat2(c.action_matrix)},
                             {"image_component", c.image_component}});
    j["components"] = comps;
    auto curves = [&](const std::vector<SeparatrixCurve>& list) {
        Json arr = Json::array();
        for (const auto& c : list)
            arr.push_back(Json{{"id", c.id},
                               {"kind", c.kind == CurveKind::stable ? "stable" : "unstable"},
                               {"saddle", c.saddle},
                               {"component", c.component},
                               {"homotopy_class", Json::array({c.p, c.q})},
                               {"partner", c.partner}});
        return arr;
    };
    j["s_curves"] = curves(s.s_curves);
    j["u_curves"] = curves(s.u_curves);
    auto boundary = [&](const std::vector<BoundaryCurve>& list) {
        Json arr = Json::array();
        for (const auto& c : list)
            arr.push_back(Json{{"id", c.id},
                               {"attractor", c.attractor},
                               {"boundary_point", c.boundary_point},
                               {"component", c.component},
                               {"homotopy_class", Json::array({c.p, c.q})}});
        return arr;
    };
    j["s_boundary"] = boundary(s.s_boundary);
    j["u_boundary"] = boundary(s.u_boundary);
    Json fams = Json::array();
    for (const auto& fam : s.tangencies) {
        Json pts = Json::array();
        for (const auto& pt : fam.points)
            pts.push_back(Json{{"id", pt.id},
                               {"component", pt.component},
                               {"host_curve", pt.host_curve},
                               {"tau", format_real(pt.tau)},
                               {"order", pt.order}});
        fams.push_back(Json{{"id", fam.id},
                            {"saddle_s", fam.saddle_s},
                            {"saddle_u", fam.saddle_u},
                            {"lambda", format_real(fam.lambda)},
                            {"mu", format_real(fam.mu)},
                            {"points", pts}});
    }
    j["tangencies"] = fams;
    Json winds = Json::array();
    for (const auto& w : s.windings)
        winds.push_back(Json{{"from", w.from_point}, {"to", w.to_point}, {"k", w.k}});
    j["windings"] = winds;
    Json atts = Json::array();
    for (const auto& a : s.attractors) {
        Json bps = Json::array();
        for (const auto& bp : a.boundary_points) bps.push_back(Json{{"id", bp.id}, {"curves", bp.curves}});
        Json bunches = Json::array();
        for (const auto& b : a.bunches) {
            Json members = Json::array();
            for (const auto& m : b.members) members.push_back(Json::array({m.boundary_point, m.side}));
            bunches.push_back(Json{{"id", b.id}, {"degree", b.degree}, {"members", members}});
        }
        atts.push_back(Json{{"id", a.id},
                            {"kind", a.kind == BasicSetKind::attractor ? "attractor" : "repeller"},
                            {"num_periodic_components", a.num_periodic_components},
                            {"rank", a.rank},
                            {"automorphism", io_detail::put_aut(a.automorphism)},
                            {"boundary_points", bps},
                            {"bunches", bunches}});
    }
    j["attractors"] = atts;
    j["k_f"] = s.k_f;
    return j;
}

inline std::string serialize_scheme(const Scheme& s) { return scheme_to_json(s).dump(2) + "\n"; }

inline Scheme scheme_from_json(const Json& j) {
    using namespace io_detail;
    Scheme s;
    std::vector<std::string> comp_ids, curve_ids, boundary_ids, fam_ids, point_ids, att_ids;
    for (const auto& v : get_array(j, "components", "scheme")) {
        TorusComponent c;
        c.id = get_string(v, "id", "components");
        check_duplicate(comp_ids, c.id, "components");
        c.action_matrix = get_mat2(field(v, "action_matrix", "components/" + c.id), "components/" + c.id);
        c.image_component = get_string(v, "image_component", "components/" + c.id);
        s.components.push_back(c);
    }
    auto read_curves = [&](const std::string& key, std::vector<SeparatrixCurve>& out) {
        for (const auto& v : get_array(j, key, "scheme")) {
            SeparatrixCurve c;
            c.id = get_string(v, "id", key);
            check_duplicate(curve_ids, c.id, key);
            std::string kind = get_string(v, "kind", key + "/" + c.id);
            if (kind != "stable" && kind != "unstable")
                throw ParseError(key + "/" + c.id + ": kind must be 'stable' or 'unstable'");
            c.kind = kind == "stable" ? CurveKind::stable : CurveKind::unstable;
            c.saddle = get_string(v, "saddle", key + "/" + c.id);
            c.component = get_string(v, "component", key + "/" + c.id);
            std::tie(c.p, c.q) =
                get_class(field(v, "homotopy_class", key + "/" + c.id), key + "/" + c.id);
            c.partner = get_string(v, "partner", key + "/" + c.id);
            out.push_back(c);
        }
    };
    read_curves("s_curves", s.s_curves);
    read_curves("u_curves", s.u_curves);
    auto read_boundary = [&](const std::string& key, std::vector<BoundaryCurve>& out) {
        for (const auto& v : get_array(j, key, "scheme")) {
            BoundaryCurve c;
            c.id = get_string(v, "id", key);
            check_duplicate(boundary_ids, c.id, key);
            c.attractor = get_string(v, "attractor", key + "/" + c.id);
            c.boundary_point = get_string(v, "boundary_point", key + "/" + c.id);
            c.component = get_string(v, "component", key + "/" + c.id);
            std::tie(c.p, c.q) =
                get_class(field(v, "homotopy_class", key + "/" + c.id), key + "/" + c.id);
            out.push_back(c);
        }
    };
    read_boundary("s_boundary", s.s_boundary);
    read_boundary("u_boundary", s.u_boundary);
    for (const auto& v : get_array(j, "tangencies", "scheme")) {
        TangencyFamily fam;
        fam.id = get_string(v, "id", "tangencies");
        check_duplicate(fam_ids, fam.id, "tangencies");
        std::string fpath = "tangencies/" + fam.id;
        fam.saddle_s = get_string(v, "saddle_s", fpath);
        fam.saddle_u = get_string(v, "saddle_u", fpath);
        fam.lambda = get_real(v, "lambda", fpath);
        fam.mu = get_real(v, "mu", fpath);
        for (const auto& pv : get_array(v, "points", fpath)) {
            TangencyPoint pt;
            pt.id = get_string(pv, "id", fpath + "/points");
            check_duplicate(point_ids, pt.id, fpath + "/points");
            pt.component = get_string(pv, "component", fpath + "/points/" + pt.id);
            pt.host_curve = get_string(pv, "host_curve", fpath + "/points/" + pt.id);
            pt.tau = get_real(pv, "tau", fpath + "/points/" + pt.id);
            pt.order = static_cast<int>(get_int(pv, "order", fpath + "/points/" + pt.id));
            fam.points.push_back(pt);
        }
        s.tangencies.push_back(fam);
    }
    for (const auto& v : get_array(j, "windings", "scheme")) {
        PathWinding w;
        w.from_point = get_string(v, "from", "windings");
        w.to_point = get_string(v, "to", "windings");
        w.k = get_int(v, "k", "windings");
        s.windings.push_back(w);
    }
    for (const auto& v : get_array(j, "attractors", "scheme")) {
        AttractorRecord a;
        a.id = get_string(v, "id", "attractors");
        check_duplicate(att_ids, a.id, "attractors");
        std::string apath = "attractors/" + a.id;
        std::string kind = get_string(v, "kind", apath);
        if (kind != "attractor" && kind != "repeller")
            throw ParseError(apath + ": kind must be 'attractor' or 'repeller'");
        a.kind = kind == "attractor" ? BasicSetKind::attractor : BasicSetKind::repeller;
        a.num_periodic_components = get_int(v, "num_periodic_components", apath);
        a.rank = static_cast<int>(get_int(v, "rank", apath));
        a.automorphism = get_aut(field(v, "automorphism", apath), apath + "/automorphism");
        std::vector<std::string> bp_ids;
        for (const auto& bv : get_array(v, "boundary_points", apath)) {
            BoundaryPointRecord bp;
            bp.id = get_string(bv, "id", apath + "/boundary_points");
            check_duplicate(bp_ids, bp.id, apath + "/boundary_points");
            for (const auto& cv : get_array(bv, "curves", apath + "/boundary_points/" + bp.id)) {
                if (!cv.is_string())
                    throw ParseError(apath + "/boundary_points/" + bp.id + ": curve ids must be strings");
                bp.curves.push_back(cv.get<std::string>());
            }
            a.boundary_points.push_back(bp);
        }
        std::vector<std::string> bunch_ids;
        for (const auto& bv : get_array(v, "bunches", apath)) {
            Bunch b;
            b.id = get_string(bv, "id", apath + "/bunches");
            check_duplicate(bunch_ids, b.id, apath + "/bunches");
            b.degree = get_int(bv, "degree", apath + "/bunches/" + b.id);
            for (const auto& mv : get_array(bv, "members", apath + "/bunches/" + b.id)) {
                if (!mv.is_array() || mv.size() != 2 || !mv[0].is_string() || !mv[1].is_string())
                    throw ParseError(apath + "/bunches/" + b.id + ": members are [point, side] pairs");
                b.members.push_back({mv[0].get<std::string>(), mv[1].get<std::string>()});
            }
            a.bunches.push_back(b);
        }
        s.attractors.push_back(a);
    }
    s.k_f = io_detail::get_int(j, "k_f", "scheme");
    return s;
}

inline Scheme parse_scheme(const std::string& text) {
    return scheme_from_json(io_detail::parse_text(text));
}

// ---------- certificate ----------

inline Json certificate_to_json(const Certificate& c) {
    Json j = Json::object();
    auto put_map = [](const std::map<std::string, std::string>& m) {
        Json o = Json::object();
        for (const auto& [k, v] : m) o[k] = v;
        return o;
    };
    j["component_map"] = put_map(c.component_map);
    Json bases = Json::object();
    for (const auto& [k, P] : c.basis_changes) bases[k] = io_detail::put_mat2(P);
    j["basis_changes"] = bases;
    j["curve_map"] = put_map(c.curve_map);
    j["boundary_curve_map"] = put_map(c.boundary_curve_map);
    j["tangency_map"] = put_map(c.tangency_map);
    j["point_map"] = put_map(c.point_map);
    Json ms = Json::array();
    for (const auto& mv : c.m_values)
        ms.push_back(Json{{"from", mv.from_point}, {"to", mv.to_point}, {"m", mv.m}});
    j["m_values"] = ms;
    Json ams = Json::array();
    for (const auto& am : c.attractor_maps)
        ams.push_back(Json{{"from", am.from},
                           {"to", am.to},
                           {"psi", io_detail::put_aut(am.psi)},
                           {"psi_inv", io_detail::put_aut(am.psi_inv)},
                           {"boundary_point_map", put_map(am.boundary_point_map)}});
    j["attractor_maps"] = ams;
    return j;
}

inline std::string serialize_certificate(const Certificate& c) {
    return certificate_to_json(c).dump(2) + "\n";
}

inline Certificate certificate_from_json(const Json& j) {
    using namespace io_detail;
    Certificate c;
    c.component_map = get_label_map(j, "component_map", "certificate");
    const Json& bases = field(j, "basis_changes", "certificate");
    if (!bases.is_object()) throw ParseError("certificate/basis_changes: expected an object");
    for (const auto& [k, v] : bases.items()) c.basis_changes[k] = get_mat2(v, "basis_changes/" + k);
    c.curve_map = get_label_map(j, "curve_map", "certificate");
    c.boundary_curve_map = get_label_map(j, "boundary_curve_map", "certificate");
    c.tangency_map = get_label_map(j, "tangency_map", "certificate");
    c.point_map = get_label_map(j, "point_map", "certificate");
    for (const auto& v : get_array(j, "m_values", "certificate")) {
        MValue mv;
        mv.from_point = get_string(v, "from", "m_values");
        mv.to_point = get_string(v, "to", "m_values");
        mv.m = get_int(v, "m", "m_values");
        c.m_values.push_back(mv);
    }
    for (const auto& v : get_array(j, "attractor_maps", "certificate")) {
        AttractorMap am;
        am.from = get_string(v, "from", "attractor_maps");
        am.to = get_string(v, "to", "attractor_maps");
        am.psi = get_aut(field(v, "psi", "attractor_maps"), "attractor_maps/psi");
        am.psi_inv = get_aut(field(v, "psi_inv", "attractor_maps"), "attractor_maps/psi_inv");
        am.boundary_point_map = get_label_map(v, "boundary_point_map", "attractor_maps");
        c.attractor_maps.push_back(am);
    }
    return c;
}

inline Certificate parse_certificate(const std::string& text) {
    return certificate_from_json(io_detail::parse_text(text));
}

// ---------- map spec ----------

inline Json poly2_to_json(const Poly2& p) {
    Json rows = Json::array();
    for (const auto& row : p.c) {
        Json r = Json::array();
        for (const auto& v : row) r.push_back(rational_to_string(v));
        rows.push_back(r);
    }
    return rows;
}

inline Poly2 poly2_from_json(const Json& v, const std::string& path) {
    if (!v.is_array()) throw ParseError(path + ": expected coefficient rows [[c00,c01],...]");
    Poly2 p;
    for (const auto& row : v) {
        if (!row.is_array()) throw ParseError(path + ": each row must be a coefficient array");
        p.c.emplace_back();
        for (const auto& cv : row) p.c.back().push_back(io_detail::get_rational(cv, path));
    }
    p.normalize();
    return p;
}

inline Json mapspec_to_json(const MapSpec& ms) {
    Json j = Json::object();
    Json saddles = Json::array();
    for (const auto& sd : ms.saddles)
        saddles.push_back(Json{{"id", sd.saddle},
                               {"period", sd.period},
                               {"mu", rational_to_string(sd.mu)},
                               {"lambda", rational_to_string(sd.lambda)}});
    j["saddles"] = saddles;
    Json trans = Json::array();
    for (const auto& g : ms.transitions)
        trans.push_back(Json{{"id", g.id},
                             {"source", g.source},
                             {"target", g.target},
                             {"xi", poly2_to_json(g.xi)},
                             {"eta", poly2_to_json(g.eta)},
                             {"a_s", Json::array({rational_to_string(g.a_x), rational_to_string(g.a_y)})}});
    j["transitions"] = trans;
    Json tps = Json::array();
    for (const auto& tp : ms.tangency_points)
        tps.push_back(Json{{"transition", tp.transition},
                           {"point", Json::array({rational_to_string(tp.x), rational_to_string(tp.y)})},
                           {"one_sided", tp.one_sided}});
    j["tangency_points"] = tps;
    return j;
}

inline std::string serialize_mapspec(const MapSpec& ms) { return mapspec_to_json(ms).dump(2) + "\n"; }

inline MapSpec parse_mapspec(const std::string& text) {
    using namespace io_detail;
    Json j = parse_text(text);
    MapSpec ms;
    std::vector<std::string> saddle_ids, trans_ids;
    for (const auto& v : get_array(j, "saddles", "mapspec")) {
        SaddleChart sd;
        sd.saddle = get_string(v, "id", "saddles");
        check_duplicate(saddle_ids, sd.saddle, "saddles");
        sd.period = get_int(v, "period", "saddles/" + sd.saddle);
        sd.mu = get_rational(field(v, "mu", "saddles/" + sd.saddle), "saddles/" + sd.saddle + "/mu");
        sd.lambda =
            get_rational(field(v, "lambda", "saddles/" + sd.saddle), "saddles/" + sd.saddle + "/lambda");
        if (!(boost::abs(sd.mu) > Rational(1)) || !(boost::abs(sd.lambda) < Rational(1)) ||
            sd.lambda.numerator() == 0)
            throw ParseError("saddles/" + sd.saddle + ": need |mu| > 1 > |lambda| > 0");
        ms.saddles.push_back(sd);
    }
    for (const auto& v : get_array(j, "transitions", "mapspec")) {
        TransitionMap g;
        g.id = get_string(v, "id", "transitions");
        check_duplicate(trans_ids, g.id, "transitions");
        std::string path = "transitions/" + g.id;
        g.source = get_string(v, "source", path);
        g.target = get_string(v, "target", path);
        for (const auto& ref : {g.source, g.target})
            if (std::find(saddle_ids.begin(), saddle_ids.end(), ref) == saddle_ids.end())
                throw ParseError(path + ": unresolved saddle '" + ref + "'");
        g.xi = poly2_from_json(field(v, "xi", path), path + "/xi");
        g.eta = poly2_from_json(field(v, "eta", path), path + "/eta");
        const Json& a = field(v, "a_s", path);
        if (!a.is_array() || a.size() != 2) throw ParseError(path + "/a_s: expected a coordinate pair");
        g.a_x = get_rational(a[0], path + "/a_s");
        g.a_y = get_rational(a[1], path + "/a_s");
        ms.transitions.push_back(g);
    }
    for (const auto& v : get_array(j, "tangency_points", "mapspec")) {
        DeclaredTangency tp;
        tp.transition = get_string(v, "transition", "tangency_points");
        if (std::find(trans_ids.begin(), trans_ids.end(), tp.transition) == trans_ids.end())
            throw ParseError("tangency_points: unresolved transition '" + tp.transition + "'");
        const Json& pt = field(v, "point", "tangency_points");
        if (!pt.is_array() || pt.size() != 2)
            throw ParseError("tangency_points/point: expected a coordinate pair");
        tp.x = get_rational(pt[0], "tangency_points/point");
        tp.y = get_rational(pt[1], "tangency_points/point");
        const Json& os = field(v, "one_sided", "tangency_points");
        if (!os.is_boolean()) throw ParseError("tangency_points/one_sided: expected a boolean");
        tp.one_sided = os.get<bool>();
        ms.tangency_points.push_back(tp);
    }
    return ms;
}

}  // namespace schemekit
