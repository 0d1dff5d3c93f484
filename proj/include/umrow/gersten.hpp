#pragma once

#include <string>
#include <vector>

#include "umrow/mwk.hpp"

namespace umrow {

// --- Koszul twist tags ---------------------------------------------------
//
// Symbolic wedge of coordinate generators x_i, kept sorted with the sign of
// the normalizing permutation. These tags carry the one-dimensional twist of
// the groups supported at a point; they never mix with untwisted values.

struct KoszulTag {
    int sign = 1;
    std::vector<int> gens;  // 1-based coordinate indices, strictly increasing

    friend bool operator==(const KoszulTag&, const KoszulTag&) = default;
};

inline KoszulTag koszul_normalize(std::vector<int> gens) {
    KoszulTag out;
    for (std::size_t i = 1; i < gens.size(); ++i)
        for (std::size_t j = i; j > 0 && gens[j] < gens[j - 1]; --j) {
            std::swap(gens[j], gens[j - 1]);
            out.sign = -out.sign;
        }
    for (std::size_t i = 1; i < gens.size(); ++i)
        if (gens[i] == gens[i - 1]) throw DomainError("degenerate Koszul wedge");
    out.gens = std::move(gens);
    return out;
}

inline KoszulTag koszul_range(int lo, int hi) {
    std::vector<int> g;
    for (int i = lo; i <= hi; ++i) g.push_back(i);
    return koszul_normalize(std::move(g));
}

inline std::string koszul_to_string(const KoszulTag& k) {
    std::string out = k.sign < 0 ? "-Kos(" : "Kos(";
    for (std::size_t i = 0; i < k.gens.size(); ++i) {
        if (i) out += ",";
        out += "x" + std::to_string(k.gens[i]);
    }
    return out + ")";
}

// --- couples in G^1 of Q(t) ------------------------------------------------

inline RationalFunction qt_signed_disc(const DiagonalForm& f) {
    if (f.base.kind != FieldKind::RationalFunctionQ)
        throw DomainError("signed discriminant over Q(t) expects a Q(t) form");
    RationalFunction d = RationalFunction::constant(Rat(1));
    for (const auto& e : f.entries) d = d * std::get<RationalFunction>(e);
    std::size_t n = f.dim();
    if (((n * (n - 1)) / 2) % 2 == 1) d = -d;
    return d;
}

// A pair (unit, even-rank form) whose images agree in Ibar^1: the unit's
// square class must be the signed discriminant of the form.
struct G1Couple {
    RationalFunction unit;
    DiagonalForm form;

    void validate() const {
        if (unit.is_zero()) throw DomainError("G^1 couple needs a nonzero unit");
        if (form.base.kind != FieldKind::RationalFunctionQ)
            throw DomainError("G^1 couple lives over Q(t)");
        form.validate();
        if (form.dim() % 2 != 0)
            throw DomainError("G^1 couple needs an even-rank form (I^1 membership)");
        if (!rf_is_square(unit * qt_signed_disc(form)))
            throw DomainError("unit and form discriminant disagree in Ibar^1");
    }
};

inline G1Couple couple_make(RationalFunction unit, DiagonalForm form) {
    G1Couple c{std::move(unit), std::move(form)};
    c.validate();
    return c;
}

// Group law of the fibre product: units multiply, forms add.
inline G1Couple couple_add(const G1Couple& a, const G1Couple& b) {
    return couple_make(a.unit * b.unit, form_sum(a.form, b.form));
}

// --- the explicit cycle on punctured affine space ----------------------------
//
// The toy complex restricts to cycles supported on the coordinate line
// V(x_2,...,x_{n+1}) inside A^{n+1} minus the origin; the line's function
// field is Q(x_1) and x_1 is written t below.

struct ToyCycle {
    int n = 1;
    G1Couple data;
    KoszulTag twist;  // wedge of generators among x_2..x_{n+1}

    void validate() const {
        if (n < 1) throw DomainError("ambient parameter must be >= 1");
        data.validate();
        if (twist.gens.empty()) throw DomainError("cycle carries an empty twist");
        for (int g : twist.gens)
            if (g < 2 || g > n + 1)
                throw DomainError("twist generator x" + std::to_string(g) +
                                  " is not a coordinate of the supporting line");
    }
};

inline ToyCycle xi_cycle(int n) {
    if (n < 1) throw DomainError("xi_cycle needs n >= 1");
    RationalFunction t = RationalFunction::from_poly(UPoly::t());
    ToyCycle c;
    c.n = n;
    c.data.unit = t;
    c.data.form = form_make(BaseField::rational_function(),
                            {FieldElem(RationalFunction::constant(Rat(-1))), FieldElem(t)});
    c.twist = koszul_range(2, n + 1);
    c.validate();
    return c;
}

// GW(k)-action on a cycle: the rank acts on the unit, the form by tensor.
inline ToyCycle cycle_scale(const ToyCycle& c, const DiagonalForm& scalar) {
    if (scalar.base.kind != FieldKind::Rationals)
        throw DomainError("scalar must be a form over Q");
    scalar.validate();
    DiagonalForm lift;
    lift.base = BaseField::rational_function();
    for (const auto& e : scalar.entries)
        lift.entries.push_back(RationalFunction::constant(std::get<Rat>(e)));
    ToyCycle out = c;
    out.data.unit = RationalFunction::constant(Rat(1));
    for (std::size_t i = 0; i < scalar.dim(); ++i) out.data.unit = out.data.unit * c.data.unit;
    out.data.form = form_tensor(lift, c.data.form);
    out.validate();
    return out;
}

// Boundary of a cycle at the origin of the line. The Witt side is the second
// residue at t = 0; the K-theoretic side is the tame valuation, tracked mod 2
// (the Ibar face of the fibre product, which is all the toy complex carries).
// The uniformizer wedges in front: Kos(x_2..x_{n+1}) picks up x_1 to become
// Kos(x_1,...,x_{n+1}).
struct BoundaryValue {
    GnValue value;   // degree 0 over Q
    KoszulTag twist;
};

inline BoundaryValue boundary_at_origin(const ToyCycle& c) {
    c.validate();
    std::vector<int> line;
    for (int g = 2; g <= c.n + 1; ++g) line.push_back(g);
    if (c.twist.gens != line)
        throw DomainError("support mismatch: cycle must live on V(x_2,...,x_{n+1})");

    Place origin = Place::linear(UPoly::t());
    BoundaryValue out;
    out.value.degree = 0;
    out.value.base = BaseField::rationals();
    int v = rf_valuation(c.data.unit, origin, nullptr);
    out.value.milnor.group = MilnorRep::Group::Z2;
    out.value.milnor.value = ((v % 2) + 2) % 2;
    out.value.witt = residue_second(c.data.form, origin);
    out.value.compatible =
        out.value.milnor.value == mpz_class(static_cast<long>(out.value.witt.dim() % 2));

    std::vector<int> all = c.twist.gens;
    all.insert(all.begin(), 1);
    out.twist = koszul_normalize(std::move(all));
    out.twist.sign *= c.twist.sign;
    return out;
}

// --- equation (1) in G^1(Q(t)) -----------------------------------------------

enum class Eq1Variant { Default, PerturbedRight, DroppedSummand };

struct Eq1Report {
    bool milnor_equal = false;
    WittVerdict witt;
    std::string verdict;  // "equal" / "unequal" / "undecided"
};

// Checks (t,<-1,t>) + (1-t,<-1,1-t>) = (t(1-t),<-1,t(1-t)>): the unit parts
// multiply exactly and the Witt parts are compared through their second
// residues. The perturbed variants break one side on purpose.
inline Eq1Report eq1_identity_check(Eq1Variant variant = Eq1Variant::Default) {
    RationalFunction t = RationalFunction::from_poly(UPoly::t());
    RationalFunction one = RationalFunction::constant(Rat(1));
    auto couple = [&](const RationalFunction& u) {
        return couple_make(u, form_make(BaseField::rational_function(),
                                        {FieldElem(RationalFunction::constant(Rat(-1))),
                                         FieldElem(u)}));
    };

    G1Couple a = couple(t);
    G1Couple lhs = variant == Eq1Variant::DroppedSummand ? a : couple_add(a, couple(one - t));
    G1Couple rhs =
        couple(variant == Eq1Variant::PerturbedRight ? t * (one + t) : t * (one - t));

    std::vector<UPoly> base = {UPoly::t(), UPoly::constant(Rat(1)) - UPoly::t()};
    if (variant == Eq1Variant::PerturbedRight)
        base.push_back(UPoly::constant(Rat(1)) + UPoly::t());

    Eq1Report rep;
    rep.milnor_equal = lhs.unit == rhs.unit;
    rep.witt = witt_equal_via_residues(lhs.form, rhs.form, base);
    if (!rep.milnor_equal || rep.witt.verdict == WittVerdictKind::Unequal)
        rep.verdict = "unequal";
    else if (rep.witt.verdict == WittVerdictKind::Equal)
        rep.verdict = "equal";
    else
        rep.verdict = "undecided";
    return rep;
}

// --- the cohomology table of punctured affine space ---------------------------

inline std::string g_group_name(int m) {
    if (m < 0) return "W(k)";  // negative powers of I collapse to W
    if (m == 0) return "GW(k)";
    return "G^" + std::to_string(m) + "(k)";
}

struct CohomEntry {
    int i = 0;
    std::string group;
    bool twisted = false;
    KoszulTag twist;
};

struct PuncturedTable {
    int n = 1;
    int j = 0;
    std::vector<CohomEntry> rows;
};

// H^i of A^{n+1} minus the origin with G^j coefficients. This is bookkeeping
// from two inputs (homotopy invariance and the one-point support computation)
// through the localization sequence, not a cohomology engine.
inline PuncturedTable punctured_table(int n, int j) {
    if (n < 1) throw DomainError("punctured_table needs n >= 1");
    PuncturedTable tab;
    tab.n = n;
    tab.j = j;
    for (int i = 0; i <= n; ++i) {
        CohomEntry e;
        e.i = i;
        if (i == 0) {
            e.group = g_group_name(j);
        } else if (i < n) {
            e.group = "0";
        } else {
            e.group = g_group_name(j - n - 1);
            e.twisted = true;
            e.twist = koszul_range(1, n + 1);
        }
        tab.rows.push_back(std::move(e));
    }
    return tab;
}

}  // namespace umrow
