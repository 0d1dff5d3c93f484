#pragma once

#include <cctype>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "umrow/errors.hpp"
#include "umrow/euler.hpp"
#include "umrow/mwk.hpp"
#include "umrow/qform.hpp"
#include "umrow/ring.hpp"
#include "umrow/row.hpp"
#include "umrow/upoly.hpp"

namespace umrow {

// All CLI documents use insertion order so repeated runs are byte-identical.
using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& need(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw UsageError(std::string("missing key \"") + key + "\" in JSON payload");
    return j.at(key);
}

inline std::string need_string(const Json& j, const char* what) {
    if (!j.is_string()) throw UsageError(std::string(what) + " must be a string");
    return j.get<std::string>();
}

}  // namespace detail

// --- base fields -------------------------------------------------------------

inline BaseField base_from_string(const std::string& s) {
    if (s == "R") return BaseField::reals();
    if (s == "C") return BaseField::complexes();
    if (s == "Q") return BaseField::rationals();
    if (s == "Q(t)") return BaseField::rational_function();
    if (s.size() >= 2 && s[0] == 'F') {
        bool digits = true;
        for (std::size_t i = 1; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) digits = false;
        if (digits) return BaseField::prime(std::stol(s.substr(1)));
    }
    throw UsageError("unknown base field \"" + s + "\" (expected R, C, Q, Q(t) or Fp)");
}

inline Json base_to_json(const BaseField& b) {
    if (b.kind == FieldKind::PrimeField) return Json{{"Fp", b.p}};
    return Json(b.name());
}

inline BaseField base_from_json(const Json& j) {
    if (j.is_string()) return base_from_string(j.get<std::string>());
    if (j.is_object() && j.contains("Fp")) {
        const Json& p = j.at("Fp");
        if (!p.is_number_integer()) throw UsageError("Fp must be an integer");
        return BaseField::prime(p.get<long>());
    }
    throw UsageError("base field must be a name or {\"Fp\": p}");
}

// --- diagonal forms ------------------------------------------------------------

inline Json form_to_json(const DiagonalForm& f) {
    Json j;
    j["base"] = base_to_json(f.base);
    Json es = Json::array();
    for (const auto& e : f.entries)
        es.push_back(std::holds_alternative<Rat>(e)
                         ? rat_to_string(std::get<Rat>(e))
                         : rf_to_string(std::get<RationalFunction>(e)));
    j["entries"] = es;
    if (f.base.kind == FieldKind::Reals) j["signature"] = signature(f);
    return j;
}

inline DiagonalForm form_from_json(const Json& j) {
    BaseField base = base_from_json(detail::need(j, "base"));
    if (base.kind == FieldKind::RationalFunctionQ)
        throw UsageError("Q(t) forms are not accepted as JSON input");
    const Json& ej = detail::need(j, "entries");
    if (!ej.is_array()) throw UsageError("form entries must be an array");
    std::vector<Rat> entries;
    for (const auto& e : ej) {
        if (e.is_string()) entries.push_back(rat_from_string(e.get<std::string>()));
        else if (e.is_number_integer()) entries.push_back(Rat(e.get<long>()));
        else throw UsageError("form entries must be strings or integers");
    }
    return form_from_rats(base, entries);
}

// --- G^n values -----------------------------------------------------------------

inline Json milnor_to_json(const MilnorRep& m) {
    Json j;
    switch (m.group) {
        case MilnorRep::Group::Absent: j["group"] = "absent"; return j;
        case MilnorRep::Group::Z: j["group"] = "Z"; break;
        case MilnorRep::Group::Z2: j["group"] = "Z/2"; break;
        case MilnorRep::Group::ZModP1: j["group"] = "Z/" + std::to_string(m.modulus); break;
        case MilnorRep::Group::Trivial: j["group"] = "0"; break;
    }
    j["value"] = m.value.get_str();
    return j;
}

inline Json gn_to_json(const GnValue& v) {
    Json j;
    j["degree"] = v.degree;
    j["base"] = base_to_json(v.base);
    j["milnor"] = milnor_to_json(v.milnor);
    j["witt"] = form_to_json(v.witt);
    j["compatible"] = v.compatible;
    return j;
}

// --- ring specs -----------------------------------------------------------------

inline Json ring_to_json(const RingSpec& ring) {
    Json j;
    j["vars"] = ring.vars;
    j["relations"] = polys_to_strings(ring.relations, ring);
    j["dim"] = ring.dim;
    j["complete_intersection"] = ring.complete_intersection;
    if (ring.rational_variety) j["rational_variety"] = true;
    if (ring.trivial_canonical_bundle) j["trivial_canonical_bundle"] = true;
    return j;
}

inline RingSpec ring_from_json(const Json& j) {
    RingSpec ring;
    const Json& vs = detail::need(j, "vars");
    if (!vs.is_array()) throw UsageError("ring vars must be an array");
    for (const auto& v : vs) ring.vars.push_back(detail::need_string(v, "ring var"));
    const Json& rs = detail::need(j, "relations");
    if (!rs.is_array()) throw UsageError("ring relations must be an array");
    for (const auto& r : rs)
        ring.relations.push_back(parse_poly(detail::need_string(r, "ring relation"), ring));
    const Json& d = detail::need(j, "dim");
    if (!d.is_number_integer()) throw UsageError("ring dim must be an integer");
    ring.dim = d.get<int>();
    ring.complete_intersection = j.value("complete_intersection", false);
    ring.rational_variety = j.value("rational_variety", false);
    ring.trivial_canonical_bundle = j.value("trivial_canonical_bundle", false);
    ring.validate();
    return ring;
}

// Optional "components" block of a ring file:
// {"labels": ["right","left"], "separators": ["x"], "signs": [[1],[-1]]}
inline ComponentSeparator separator_from_json(const Json& j, const RingSpec& ring) {
    ComponentSeparator cs;
    const Json& ls = detail::need(j, "labels");
    if (!ls.is_array()) throw UsageError("component labels must be an array");
    for (const auto& l : ls) cs.labels.push_back(detail::need_string(l, "component label"));
    const Json& ss = detail::need(j, "separators");
    if (!ss.is_array()) throw UsageError("separators must be an array");
    for (const auto& s : ss)
        cs.separators.push_back(parse_poly(detail::need_string(s, "separator"), ring));
    const Json& sg = detail::need(j, "signs");
    if (!sg.is_array()) throw UsageError("signs must be an array of arrays");
    for (const auto& row : sg) {
        if (!row.is_array()) throw UsageError("signs must be an array of arrays");
        std::vector<int> r;
        for (const auto& v : row) {
            if (!v.is_number_integer()) throw UsageError("sign entries must be integers");
            r.push_back(v.get<int>());
        }
        cs.sign_table.push_back(std::move(r));
    }
    cs.validate(ring);
    return cs;
}

// --- rows, ops, classes -----------------------------------------------------------

inline Json pointed_class_to_json(const PointedClass& c) {
    Json j;
    j["class"] = c.entries;
    j["components"] = c.components;
    j["convention"] = c.convention;
    return j;
}

inline std::vector<ElementaryOp> ops_from_json(const Json& j, const RingSpec& ring) {
    if (!j.is_array()) throw UsageError("ops payload must be a JSON array");
    std::vector<ElementaryOp> ops;
    for (const auto& o : j) {
        const Json& i = detail::need(o, "i");
        const Json& jj = detail::need(o, "j");
        if (!i.is_number_integer() || !jj.is_number_integer())
            throw UsageError("op indices must be integers");
        long iv = i.get<long>(), jv = jj.get<long>();
        if (iv < 0 || jv < 0) throw UsageError("op indices are 0-based and nonnegative");
        ElementaryOp op;
        op.i = static_cast<std::size_t>(iv);
        op.j = static_cast<std::size_t>(jv);
        op.h = parse_poly(detail::need_string(detail::need(o, "h"), "op multiplier"), ring);
        ops.push_back(std::move(op));
    }
    return ops;
}

inline Json ops_to_json(const std::vector<ElementaryOp>& ops, const RingSpec& ring) {
    Json arr = Json::array();
    for (const auto& op : ops) {
        Json o;
        o["i"] = op.i;
        o["j"] = op.j;
        o["h"] = poly_to_string(op.h, ring);
        arr.push_back(std::move(o));
    }
    return arr;
}

inline CompletionMatrix matrix_from_json(const Json& j, const RingSpec& ring) {
    if (!j.is_array()) throw UsageError("matrix payload must be a JSON array of rows");
    CompletionMatrix cm;
    for (const auto& row : j) {
        if (!row.is_array()) throw UsageError("matrix rows must be arrays");
        std::vector<Poly> r;
        for (const auto& e : row)
            r.push_back(parse_poly(detail::need_string(e, "matrix entry"), ring));
        cm.m.push_back(std::move(r));
    }
    return cm;
}

}  // namespace umrow
