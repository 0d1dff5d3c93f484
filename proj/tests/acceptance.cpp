// Acceptance gate: one line per criterion, exact arithmetic throughout.
// Exit status 0 iff every criterion passes.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "umrow/cli.hpp"
#include "oracles.hpp"

using namespace umrow;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
}

void criterion(int num, const std::string& title, double budget_s,
               const std::function<void()>& body) {
    auto t0 = Clock::now();
    std::string note;
    bool ok = true;
    try {
        body();
    } catch (const std::exception& e) {
        ok = false;
        note = e.what();
    }
    double dt = elapsed(t0);
    if (ok && budget_s > 0 && dt > budget_s) {
        ok = false;
        note = "time budget exceeded";
    }
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (ok ? "PASS" : "FAIL") << "  " << num << ". " << title << "  (" << dt << " s";
    if (budget_s > 0) line << " / " << budget_s << " s";
    line << ")";
    if (!ok && !note.empty()) line << "  -- " << note;
    std::cout << line.str() << std::endl;
    if (!ok) ++failures;
}

Json run_cli_json(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    require(code == 0, "cli exited " + std::to_string(code) + ": " + err.str());
    return Json::parse(out.str());
}

std::vector<Poly> tail(const RingSpec& ring, const std::vector<std::string>& ss) {
    std::vector<Poly> out;
    for (const auto& s : ss) out.push_back(parse_poly(s, ring));
    return out;
}

// lhs/rhs of the defining relations, mirrored here so criterion 7 can inspect
// the evaluated G^n values of both sides.
std::vector<MWExpr> relation_sides(int which, const std::vector<Rat>& args) {
    switch (which) {
        case 1: {
            MWExpr lhs = mw_symbol({args[0] * args[1]});
            MWExpr rhs = mw_add(mw_add(mw_symbol({args[0]}), mw_symbol({args[1]})),
                                mw_product(mw_eta(), mw_symbol({args[0], args[1]})));
            return {lhs, rhs};
        }
        case 2: {
            MWExpr zero;
            zero.degree = 2;
            return {mw_symbol({args[0], Rat(1) - args[0]}), zero};
        }
        case 3: {
            MWExpr inner = mw_add(mw_product(mw_eta(), mw_symbol({Rat(-1)})), mw_int(2));
            MWExpr zero;
            zero.degree = -1;
            return {mw_product(mw_eta(), inner), zero};
        }
        case 4:
            return {mw_product(mw_eta(), mw_symbol({args[0]})),
                    mw_product(mw_symbol({args[0]}), mw_eta())};
        default:
            throw std::runtime_error("bad relation id");
    }
}

// every (relation, argument tuple) exercised by criterion 6
struct RelationCase {
    BaseField base;
    int which;
    std::vector<Rat> args;
};

std::vector<RelationCase> relation_cases() {
    std::vector<RelationCase> cases;
    for (long p : {3L, 5L, 7L}) {
        BaseField f = BaseField::prime(p);
        cases.push_back({f, 3, {}});
        for (long a = 1; a < p; ++a) {
            cases.push_back({f, 4, {Rat(a)}});
            if (a != 1) cases.push_back({f, 2, {Rat(a)}});
            for (long b = 1; b < p; ++b) cases.push_back({f, 1, {Rat(a), Rat(b)}});
        }
    }
    BaseField r = BaseField::reals();
    cases.push_back({r, 3, {}});
    std::mt19937_64 rng(20260814u);
    auto rat = [&]() {
        long num = static_cast<long>(rng() % 101) - 50;
        if (num == 0) num = 7;
        Rat q(num, static_cast<long>(1 + rng() % 20));
        q.canonicalize();
        return q;
    };
    for (int t = 0; t < 200; ++t) {
        switch (t % 3) {
            case 0: cases.push_back({r, 1, {rat(), rat()}}); break;
            case 1: {
                Rat a = rat();
                if (a == 1) a = Rat(3, 2);
                cases.push_back({r, 2, {a}});
                break;
            }
            default: cases.push_back({r, 4, {rat()}}); break;
        }
    }
    return cases;
}

}  // namespace

int main() {
    std::cout << "acceptance suite" << std::endl;

    criterion(1, "S2 tangent row: class [1] via the CLI", 1.0, [] {
        Json doc = run_cli_json({"row", "class", "--ring", "sphere2", "--row", "z,x,y"});
        require(doc["class"] == Json::array({1}), "class is not [1]");
        require(doc["components"] == Json::array({"S2"}), "component label mismatch");
        require(doc["convention"] == "tangent=+1", "convention mismatch");
    });

    criterion(2, "S4 tangent row: class magnitude 1", 30.0, [] {
        BuiltinModel m = builtin_model("sphere4");
        PointedClass c = phi_class(make_row(m.ring, m.tangent_row), m.separator);
        require(c.entries.size() == 1 && (c.entries[0] == 1 || c.entries[0] == -1),
                "class magnitude is not 1");
    });

    criterion(3, "S3 quaternion and S7 octonion completions verify", 0, [] {
        auto tq = Clock::now();
        BuiltinModel s3 = builtin_model("sphere3");
        require(verify_completion(make_row(s3.ring, s3.tangent_row),
                                  completion_matrix(s3.ring)),
                "quaternion completion fails");
        require(elapsed(tq) < 5.0, "quaternion budget (5 s) exceeded");
        require(run_cli_json({"demo", "sphere3"})["verdict"] == "free",
                "sphere3 verdict is not free");
        auto to = Clock::now();
        BuiltinModel s7 = builtin_model("sphere7");
        require(verify_completion(make_row(s7.ring, s7.tangent_row),
                                  completion_matrix(s7.ring)),
                "octonion completion fails");
        require(elapsed(to) < 120.0, "octonion budget (120 s) exceeded");
        require(run_cli_json({"demo", "sphere7"})["verdict"] == "free",
                "sphere7 verdict is not free");
    });

    criterion(4, "E-invariance: 100 seeded elementary ops per row", 0, [] {
        BuiltinModel m = builtin_model("sphere2");
        std::size_t nv = m.ring.nvars();
        std::vector<Monomial> monos;
        for (int a = 0; a <= 2; ++a)
            for (int b = 0; a + b <= 2; ++b)
                for (int c = 0; a + b + c <= 2; ++c) monos.push_back({a, b, c});
        std::mt19937_64 rng(0xE1u);
        for (const char* entries : {"z,x,y", "-z,x,y", "1,x,y"}) {
            Row base = make_row(m.ring, cli::detail::split_csv(entries));
            PointedClass expect = phi_class(base, m.separator);
            for (int trial = 0; trial < 100; ++trial) {
                ElementaryOp op;
                op.i = rng() % 3;
                do op.j = rng() % 3; while (op.j == op.i);
                Poly h(nv);
                for (const auto& mono : monos) {
                    long coef = static_cast<long>(rng() % 5) - 2;
                    if (rng() % 3 == 0 && coef != 0)
                        h = h + Poly::term(nv, mono, Rat(coef));
                }
                if (h.is_zero()) h = Poly::constant(nv, 1);
                op.h = h;
                PointedClass got = phi_class(apply_elementary(base, {op}), m.separator);
                require(got == expect, "class moved under an elementary op");
            }
        }
    });

    criterion(5, "WMS additivity on five relation instances", 0, [] {
        BuiltinModel m = builtin_model("sphere2");
        std::vector<Poly> v = tail(m.ring, {"x", "y"});
        for (const char* xs :
             {"1/2*z+2", "1/4*z", "2*z", "3*z", "1/4*z+1/2"}) {
            auto inst = wms_relation_instance(parse_poly(xs, m.ring), v, m.ring);
            require(std::holds_alternative<WmsInstance>(inst),
                    std::string("instance rejected: ") + xs);
            require(phi_additivity_check(std::get<WmsInstance>(inst), m.separator),
                    std::string("additivity fails for x = ") + xs);
        }
    });

    criterion(6, "MW-K relations: exhaustive F3/F5/F7 plus 200 real tuples", 0, [] {
        for (const auto& rc : relation_cases())
            require(mw_relation_check(rc.which, rc.args, rc.base),
                    "relation " + std::to_string(rc.which) + " fails over " +
                        rc.base.name());
        // degree-3 coverage: Steinberg with a spectator slot, and relation 1
        // multiplied through by a third symbol
        for (long p : {3L, 5L, 7L}) {
            BaseField f = BaseField::prime(p);
            MWExpr zero3;
            zero3.degree = 3;
            GnValue z3 = mw_eval(zero3, f);
            for (long a = 2; a < p; ++a)
                for (long c = 1; c < p; ++c)
                    require(gn_equal(mw_eval(mw_symbol({Rat(a), Rat(1 - a), Rat(c)}), f),
                                     z3),
                            "degree-3 Steinberg fails over " + f.name());
            for (long a = 1; a < p; ++a)
                for (long b = 1; b < p; ++b)
                    for (long c = 1; c < p; ++c) {
                        auto sides = relation_sides(1, {Rat(a), Rat(b)});
                        MWExpr spect = mw_symbol({Rat(c)});
                        require(gn_equal(mw_eval(mw_product(sides[0], spect), f),
                                         mw_eval(mw_product(sides[1], spect), f)),
                                "degree-3 relation 1 fails over " + f.name());
                    }
        }
    });

    criterion(7, "fiber compatibility holds for every criterion-6 value", 0, [] {
        for (const auto& rc : relation_cases())
            for (const auto& side : relation_sides(rc.which, rc.args)) {
                GnValue v = mw_eval(side, rc.base);
                require(v.compatible, "incompatible value over " + rc.base.name());
            }
        for (long p : {3L, 5L, 7L}) {
            BaseField f = BaseField::prime(p);
            for (long a = 2; a < p; ++a)
                for (long c = 1; c < p; ++c)
                    require(mw_eval(mw_symbol({Rat(a), Rat(1 - a), Rat(c)}), f).compatible,
                            "incompatible degree-3 value over " + f.name());
        }
    });

    criterion(8, "Eq. (1): equal, and both perturbations unequal", 0, [] {
        require(eq1_identity_check(Eq1Variant::Default).verdict == "equal",
                "default variant is not equal");
        require(eq1_identity_check(Eq1Variant::PerturbedRight).verdict == "unequal",
                "perturbed-right variant is not unequal");
        require(eq1_identity_check(Eq1Variant::DroppedSummand).verdict == "unequal",
                "dropped-summand variant is not unequal");
    });

    criterion(9, "boundary of xi is the unit generator for n = 1, 2, 3", 0, [] {
        for (int n = 1; n <= 3; ++n) {
            BoundaryValue b = boundary_at_origin(xi_cycle(n));
            require(b.value.witt.dim() == 1, "witt part is not rank one");
            require(std::get<Rat>(b.value.witt.entries[0]) == 1, "witt part is not <1>");
            require(b.value.milnor.group == MilnorRep::Group::Z2 &&
                        b.value.milnor.value == 1,
                    "milnor part is not the generator");
            require(b.value.compatible, "boundary value incompatible");
            require(b.twist.sign == 1, "twist sign flipped");
            require(b.twist == koszul_range(1, n + 1), "twist is not Kos(x1..x_{n+1})");
        }
    });

    criterion(10, "Witt oracle: brute-force agreement, dim <= 4, F3/F5/F7", 0, [] {
        for (long p : {3L, 5L, 7L}) {
            BaseField f = BaseField::prime(p);
            for (std::size_t dim = 1; dim <= 4; ++dim) {
                std::vector<long> idx(dim, 1);
                while (true) {
                    std::vector<Rat> rats(idx.begin(), idx.end());
                    std::size_t got = witt_decompose(form_from_rats(f, rats)).witt_index;
                    std::size_t want = oracles::fp_witt_index(idx, p);
                    require(got == want, "witt index mismatch over " + f.name());
                    std::size_t k = dim;
                    while (k > 0 && ++idx[k - 1] == p) idx[--k] = 1;
                    if (k == 0) break;
                }
            }
        }
    });

    criterion(11, "trace-form signatures count real points", 0, [] {
        auto count = [](const std::string& rel, int npoints) {
            RingSpec r;
            r.vars = {"z"};
            r.relations = {parse_poly(rel, r)};
            r.dim = 0;
            r.complete_intersection = true;
            r.validate();
            FiniteAlgebra A = make_finite_algebra(r.relations, r);
            require(qmat_signature(trace_form(A)).signature == npoints,
                    rel + " signature is not " + std::to_string(npoints));
        };
        count("z^2-1", 2);
        count("z^2+1", 0);
        count("z^3-z", 3);
    });

    criterion(12, "conjugate-pair zeros do not move the class", 0, [] {
        BuiltinModel m = builtin_model("sphere2");
        PointedClass plain =
            phi_class(make_row(m.ring, {"z", "x", "y"}), m.separator);
        PointedClass fat =
            phi_class(make_row(m.ring, {"z", "x", "y*(z^2+2)"}), m.separator);
        require(plain == fat, "classes differ");
        require(plain.entries == std::vector<long long>{1}, "base class is not [1]");
    });

    criterion(13, "verdict table: S2 free/not-free, S3 indeterminate + completion", 0, [] {
        BuiltinModel s2 = builtin_model("sphere2");
        require(freeness_verdict(make_row(s2.ring, {"1", "x", "y"}), s2.separator)
                        .verdict == "free",
                "(1,x,y) is not free");
        require(freeness_verdict(make_row(s2.ring, {"z", "x", "y"}), s2.separator)
                        .verdict == "not free",
                "(z,x,y) is not not-free");
        BuiltinModel s3 = builtin_model("sphere3");
        FreenessVerdict fv =
            freeness_verdict(make_row(s3.ring, s3.tangent_row), s3.separator);
        require(fv.verdict == "indeterminate under SL-action",
                "S3 tangent verdict mismatch");
        require(fv.has_class && !fv.cls.is_zero(), "S3 class should be nonzero");
        require(verify_completion(make_row(s3.ring, s3.tangent_row),
                                  completion_matrix(s3.ring)),
                "S3 completion not recorded");
    });

    if (failures == 0) {
        std::cout << "all 13 criteria pass" << std::endl;
        return 0;
    }
    std::cout << failures << " criteria fail" << std::endl;
    return 1;
}
