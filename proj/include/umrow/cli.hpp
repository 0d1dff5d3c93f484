#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "umrow/errors.hpp"
#include "umrow/euler.hpp"
#include "umrow/gersten.hpp"
#include "umrow/json_io.hpp"
#include "umrow/mwk.hpp"
#include "umrow/registry.hpp"
#include "umrow/ring.hpp"
#include "umrow/row.hpp"

namespace umrow::cli {

namespace detail {

inline std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

// A ring source is either a built-in name or a path to a RingSpec JSON file.
// File rings may carry a "components" block; without one the real locus is
// treated as a single unnamed component.
struct RingSource {
    RingSpec ring;
    ComponentSeparator separator;
    std::optional<BuiltinModel> builtin;
};

inline RingSource resolve_ring(const std::string& src) {
    RingSource out;
    if (is_builtin(src)) {
        BuiltinModel m = builtin_model(src);
        out.ring = m.ring;
        out.separator = m.separator;
        out.builtin = std::move(m);
        return out;
    }
    std::ifstream in(src);
    if (!in)
        throw UsageError("ring source \"" + src +
                         "\" is neither a built-in name nor a readable file");
    Json doc = Json::parse(in);
    out.ring = ring_from_json(doc);
    out.separator = doc.contains("components")
                        ? separator_from_json(doc.at("components"), out.ring)
                        : single_component("X");
    return out;
}

struct Opts {
    std::string ring, row, ops, end0, end1, track, matrix, base, expr, name;
    std::string variant = "default";
    std::uint64_t seed = 0;
    int n = 1, j = 0, dim = 0;
};

inline Json cmd_row_check(const Opts& o) {
    RingSource rs = resolve_ring(o.ring);
    Row row = make_row(rs.ring, split_csv(o.row));
    auto verdict = is_unimodular(row);
    Json doc;
    doc["schema"] = 1;
    if (std::holds_alternative<Certificate>(verdict)) {
        const Certificate& c = std::get<Certificate>(verdict);
        doc["unimodular"] = true;
        Json cert;
        cert["row_cofactors"] = polys_to_strings(c.row_cofactors, rs.ring);
        cert["relation_cofactors"] = polys_to_strings(c.relation_cofactors, rs.ring);
        doc["certificate"] = cert;
    } else {
        doc["unimodular"] = false;
        doc["refutation_basis"] =
            polys_to_strings(std::get<Refutation>(verdict).basis, rs.ring);
    }
    return doc;
}

inline Json cmd_row_apply_ops(const Opts& o) {
    RingSource rs = resolve_ring(o.ring);
    Row row = make_row(rs.ring, split_csv(o.row));
    Row moved = apply_elementary(row, ops_from_json(Json::parse(o.ops), rs.ring));
    Json doc;
    doc["schema"] = 1;
    doc["row"] = polys_to_strings(moved.entries, rs.ring);
    return doc;
}

inline Json cmd_row_homotopy(const Opts& o) {
    RingSource rs = resolve_ring(o.ring);
    Row end0 = make_row(rs.ring, split_csv(o.end0));
    Row end1 = make_row(rs.ring, split_csv(o.end1));
    RingSpec ext = extend_ring(rs.ring);
    std::vector<Poly> track;
    for (const auto& s : split_csv(o.track)) track.push_back(parse_poly(s, ext));
    Json doc;
    doc["schema"] = 1;
    doc["homotopic"] = check_homotopy(make_homotopy(end0, end1, track));
    return doc;
}

inline Json cmd_row_complete_verify(const Opts& o) {
    RingSource rs = resolve_ring(o.ring);
    Row row = make_row(rs.ring, split_csv(o.row));
    CompletionMatrix cm;
    if (!o.matrix.empty()) {
        cm = matrix_from_json(Json::parse(o.matrix), rs.ring);
    } else if (rs.builtin && rs.builtin->has_completion) {
        cm = completion_matrix(rs.ring);
    } else {
        throw UsageError("--matrix is required unless the ring has a built-in completion");
    }
    Json doc;
    doc["schema"] = 1;
    doc["verified"] = verify_completion(row, cm);
    return doc;
}

inline Json cmd_row_prep(const Opts& o) {
    RingSource rs = resolve_ring(o.ring);
    Row row = make_row(rs.ring, split_csv(o.row));
    PrepResult pr = prep_regular(row, o.seed);
    Json doc;
    doc["schema"] = 1;
    doc["row"] = polys_to_strings(pr.row.entries, rs.ring);
    doc["ops"] = ops_to_json(pr.ops, rs.ring);
    return doc;
}

inline Json cmd_row_class(const Opts& o) {
    RingSource rs = resolve_ring(o.ring);
    Row row = make_row(rs.ring, split_csv(o.row));
    Json doc;
    doc["schema"] = 1;
    if (rs.ring.rational_variety && rs.ring.trivial_canonical_bundle) {
        FreenessVerdict fv = freeness_verdict(row, rs.separator, o.seed);
        doc.update(pointed_class_to_json(fv.cls));
        doc["verdict"] = fv.verdict;
    } else {
        doc.update(pointed_class_to_json(phi_class(row, rs.separator, o.seed)));
        doc["verdict"] = "out of theorem scope";
    }
    return doc;
}

inline Json cmd_mwk_eval(const Opts& o) {
    BaseField base = base_from_string(o.base);
    GnValue v = mw_eval(mw_parse(o.expr), base);
    Json doc;
    doc["schema"] = 1;
    doc.update(gn_to_json(v));
    return doc;
}

inline Json cmd_gersten_xi(const Opts& o) {
    ToyCycle c = xi_cycle(o.n);
    Json doc;
    doc["schema"] = 1;
    doc["n"] = c.n;
    doc["unit"] = rf_to_string(c.data.unit);
    doc["form"] = form_to_json(c.data.form);
    doc["twist"] = koszul_to_string(c.twist);
    return doc;
}

inline Json cmd_gersten_boundary(const Opts& o) {
    BoundaryValue b = boundary_at_origin(xi_cycle(o.n));
    Json doc;
    doc["schema"] = 1;
    doc["n"] = o.n;
    doc["boundary"] = gn_to_json(b.value);
    doc["twist"] = koszul_to_string(b.twist);
    return doc;
}

inline Json cmd_gersten_table(const Opts& o) {
    PuncturedTable t = punctured_table(o.n, o.j);
    Json doc;
    doc["schema"] = 1;
    doc["n"] = t.n;
    doc["j"] = t.j;
    Json rows = Json::array();
    for (const auto& e : t.rows) {
        Json r;
        r["i"] = e.i;
        r["group"] = e.group;
        if (e.twisted) r["twist"] = koszul_to_string(e.twist);
        rows.push_back(std::move(r));
    }
    doc["rows"] = rows;
    return doc;
}

inline Json cmd_gersten_eq1(const Opts& o) {
    Eq1Variant v;
    if (o.variant == "default") v = Eq1Variant::Default;
    else if (o.variant == "perturbed-right") v = Eq1Variant::PerturbedRight;
    else if (o.variant == "dropped-summand") v = Eq1Variant::DroppedSummand;
    else
        throw UsageError("unknown variant \"" + o.variant +
                         "\" (expected default, perturbed-right or dropped-summand)");
    Eq1Report rep = eq1_identity_check(v);
    Json doc;
    doc["schema"] = 1;
    doc["variant"] = o.variant;
    doc["milnor_equal"] = rep.milnor_equal;
    switch (rep.witt.verdict) {
        case WittVerdictKind::Equal: doc["witt"] = "equal"; break;
        case WittVerdictKind::Unequal: doc["witt"] = "unequal"; break;
        case WittVerdictKind::Undecided: doc["witt"] = "undecided"; break;
    }
    if (!rep.witt.reason.empty()) doc["reason"] = rep.witt.reason;
    doc["verdict"] = rep.verdict;
    return doc;
}

inline std::string class_brackets(const PointedClass& c) {
    std::string s = "[";
    for (std::size_t i = 0; i < c.entries.size(); ++i)
        s += (i ? "," : "") + std::to_string(c.entries[i]);
    return s + "]";
}

inline Json cmd_demo(const Opts& o, std::string& prose) {
    std::string name = o.name;
    if (name == "sphere") {
        if (o.dim == 0) throw UsageError("demo sphere needs --dim");
        name = "sphere" + std::to_string(o.dim);
    } else if (o.dim != 0) {
        throw UsageError("--dim only combines with the name 'sphere'");
    }
    if (!is_builtin(name)) throw UsageError("unknown demo \"" + name + "\"");
    BuiltinModel m = builtin_model(name);
    Row row = make_row(m.ring, m.tangent_row);

    std::ostringstream rep;
    rep << "== " << m.name << " ==\n";
    rep << "ring: Q[";
    for (std::size_t i = 0; i < m.ring.vars.size(); ++i)
        rep << (i ? "," : "") << m.ring.vars[i];
    rep << "]/(" << poly_to_string(m.ring.relations[0], m.ring) << ")\n";
    rep << "tangent row: (";
    for (std::size_t i = 0; i < m.tangent_row.size(); ++i)
        rep << (i ? "," : "") << m.tangent_row[i];
    rep << ")\n";

    FreenessVerdict fv = freeness_verdict(row, m.separator, o.seed);
    rep << "phi class: " << class_brackets(fv.cls) << " on " << m.separator.labels[0]
        << "\n";
    rep << "euler verdict: " << fv.verdict << "\n";

    Json doc;
    doc["schema"] = 1;
    doc["demo"] = m.name;
    doc["row"] = m.tangent_row;
    doc.update(pointed_class_to_json(fv.cls));
    doc["freeness"] = fv.verdict;
    std::string verdict = fv.verdict;
    if (m.has_completion) {
        CompletionMatrix cm = completion_matrix(m.ring);
        bool ok = verify_completion(row, cm);
        Json comp;
        comp["size"] = cm.m.size();
        comp["verified"] = ok;
        doc["completion"] = comp;
        rep << "completion: " << cm.m.size() << "x" << cm.m.size()
            << " multiplication matrix, det reduces to 1: " << (ok ? "yes" : "no") << "\n";
        if (ok) verdict = "free";
    }
    doc["verdict"] = verdict;
    rep << "verdict: " << verdict << "\n";
    prose = rep.str();
    return doc;
}

}  // namespace detail

// Parses and dispatches one invocation. Returns the process exit status:
// 0 success (negative verdicts included), 1 domain error, 2 usage or parse
// error, 3 resource abort. The JSON document goes to `out`; demo commentary
// and error messages go to `err`.
inline int run(const std::vector<std::string>& argv, std::ostream& out,
               std::ostream& err) {
    CLI::App app{"exact Euler-class computations for unimodular rows"};
    app.name("umrow");
    app.require_subcommand(1);

    detail::Opts o;
    Json doc;
    std::string prose;

    auto ring_opt = [&](CLI::App* c) {
        c->add_option("--ring", o.ring, "built-in ring name or RingSpec JSON file")
            ->required();
    };
    auto seed_opt = [&](CLI::App* c) {
        c->add_option("--seed", o.seed, "seed for the preparation search (default 0)");
    };

    CLI::App* row = app.add_subcommand("row", "unimodular row operations");
    row->require_subcommand(1);

    CLI::App* check = row->add_subcommand("check", "certificate or refutation");
    ring_opt(check);
    check->add_option("--row", o.row, "comma-separated polynomial entries")->required();
    check->callback([&] { doc = detail::cmd_row_check(o); });

    CLI::App* apply = row->add_subcommand("apply-ops", "apply elementary operations");
    ring_opt(apply);
    apply->add_option("--row", o.row, "comma-separated polynomial entries")->required();
    apply->add_option("--ops", o.ops, "JSON array of {\"i\",\"j\",\"h\"} (0-based)")
        ->required();
    apply->callback([&] { doc = detail::cmd_row_apply_ops(o); });

    CLI::App* hom = row->add_subcommand("homotopy-check", "verify a naive homotopy");
    ring_opt(hom);
    hom->add_option("--end0", o.end0, "row at t=0")->required();
    hom->add_option("--end1", o.end1, "row at t=1")->required();
    hom->add_option("--track", o.track, "row over the ring extended by t")->required();
    hom->callback([&] { doc = detail::cmd_row_homotopy(o); });

    CLI::App* comp = row->add_subcommand("complete-verify",
                                         "check a square completion of the row");
    ring_opt(comp);
    comp->add_option("--row", o.row, "comma-separated polynomial entries")->required();
    comp->add_option("--matrix", o.matrix,
                     "JSON matrix of polynomial strings (built-in rings may omit)");
    comp->callback([&] { doc = detail::cmd_row_complete_verify(o); });

    CLI::App* prep = row->add_subcommand("prep", "make the tail a regular sequence");
    ring_opt(prep);
    prep->add_option("--row", o.row, "comma-separated polynomial entries")->required();
    seed_opt(prep);
    prep->callback([&] { doc = detail::cmd_row_prep(o); });

    CLI::App* cls = row->add_subcommand("class", "phi-class and freeness verdict");
    ring_opt(cls);
    cls->add_option("--row", o.row, "comma-separated polynomial entries")->required();
    seed_opt(cls);
    cls->callback([&] { doc = detail::cmd_row_class(o); });

    CLI::App* mwk = app.add_subcommand("mwk", "Milnor-Witt symbol calculus");
    mwk->require_subcommand(1);
    CLI::App* eval = mwk->add_subcommand("eval", "evaluate a symbol expression");
    eval->add_option("--base", o.base, "base field: R, C or Fp")->required();
    eval->add_option("expr", o.expr, "expression, e.g. \"[2]*[3]+eta*[5]\"")->required();
    eval->callback([&] { doc = detail::cmd_mwk_eval(o); });

    CLI::App* ger = app.add_subcommand("gersten", "toy Gersten complex of A^{n+1}-0");
    ger->require_subcommand(1);
    CLI::App* xi = ger->add_subcommand("xi", "the generating cycle");
    xi->add_option("--n", o.n, "ambient parameter")->required();
    xi->callback([&] { doc = detail::cmd_gersten_xi(o); });
    CLI::App* bnd = ger->add_subcommand("boundary", "boundary of xi at the origin");
    bnd->add_option("--n", o.n, "ambient parameter")->required();
    bnd->callback([&] { doc = detail::cmd_gersten_boundary(o); });
    CLI::App* tab = ger->add_subcommand("table", "cohomology of punctured affine space");
    tab->add_option("--n", o.n, "ambient parameter")->required();
    tab->add_option("--j", o.j, "coefficient weight")->required();
    tab->callback([&] { doc = detail::cmd_gersten_table(o); });
    CLI::App* eq1 = ger->add_subcommand("eq1", "the G^1(Q(t)) summation identity");
    eq1->add_option("--variant", o.variant,
                    "default, perturbed-right or dropped-summand");
    eq1->callback([&] { doc = detail::cmd_gersten_eq1(o); });

    CLI::App* demo = app.add_subcommand("demo", "end-to-end sphere walkthroughs");
    demo->add_option("name", o.name, "sphere2|sphere3|sphere4|sphere7, or sphere")
        ->required();
    demo->add_option("--dim", o.dim, "dimension when the name is 'sphere'");
    seed_opt(demo);
    demo->callback([&] { doc = detail::cmd_demo(o, prose); });

    try {
        std::vector<std::string> args(argv.rbegin(), argv.rend());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        err << "json error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceAbort& e) {
        err << "resource abort: " << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return 1;
    }

    if (!prose.empty()) err << prose;
    out << doc.dump(2) << "\n";
    return 0;
}

}  // namespace umrow::cli
