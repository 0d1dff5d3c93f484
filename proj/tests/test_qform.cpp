#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <functional>
#include <vector>

#include "oracles.hpp"
#include "umrow/qform.hpp"

using namespace umrow;

namespace {

DiagonalForm rform(std::vector<long> es) {
    std::vector<Rat> rs(es.begin(), es.end());
    return form_from_rats(BaseField::reals(), rs);
}

DiagonalForm fpform(long p, std::vector<long> es) {
    std::vector<Rat> rs(es.begin(), es.end());
    return form_from_rats(BaseField::prime(p), rs);
}

RationalFunction rf_t() { return RationalFunction::from_poly(UPoly::t()); }
RationalFunction rf_c(long v) { return RationalFunction::constant(Rat(v)); }
RationalFunction rf_one_minus_t() {
    return RationalFunction::from_poly(UPoly({Rat(1), Rat(-1)}));
}

DiagonalForm ffform(std::vector<RationalFunction> es) {
    std::vector<FieldElem> fe(es.begin(), es.end());
    return form_make(BaseField::rational_function(), std::move(fe));
}

std::vector<Rat> sorted_rats(const DiagonalForm& f) {
    std::vector<Rat> out;
    for (const auto& e : f.entries) out.push_back(std::get<Rat>(e));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("witt decomposition over the reals and complexes", "[qform]") {
    auto d = witt_decompose(rform({1, 1, -1}));
    CHECK(d.witt_index == 1);
    REQUIRE(d.anisotropic.dim() == 1);
    CHECK(std::get<Rat>(d.anisotropic.entries[0]) == 1);

    auto h = witt_decompose(rform({1, -1}));
    CHECK(h.witt_index == 1);
    CHECK(h.anisotropic.dim() == 0);

    std::vector<Rat> centries = {Rat(1), Rat(1), Rat(1)};
    auto c = witt_decompose(form_from_rats(BaseField::complexes(), centries));
    CHECK(c.witt_index == 1);
    CHECK(c.anisotropic.dim() == 1);
}

TEST_CASE("witt decomposition over small prime fields", "[qform]") {
    auto d = witt_decompose(fpform(3, {1, 1}));
    CHECK(d.witt_index == 0);
    CHECK(d.anisotropic.dim() == 2);

    // <1,3> is hyperbolic over F_7 because -3 = 4 is a square.
    auto h = witt_decompose(fpform(7, {1, 3}));
    CHECK(h.witt_index == 1);
    CHECK(h.anisotropic.dim() == 0);

    auto odd = witt_decompose(fpform(5, {2, 2, 2}));
    CHECK(odd.anisotropic.dim() == 1);
    CHECK(odd.witt_index == 1);
}

TEST_CASE("pfister forms use the <1,-a> convention", "[qform]") {
    auto p1 = pfister(BaseField::reals(), {FieldElem(Rat(-1))});
    CHECK(sorted_rats(p1) == std::vector<Rat>{Rat(1), Rat(1)});

    auto ph = pfister(BaseField::reals(), {FieldElem(Rat(1))});
    CHECK(sorted_rats(ph) == std::vector<Rat>{Rat(-1), Rat(1)});
    CHECK(witt_is_zero(ph));

    auto p2 = pfister(BaseField::reals(), {FieldElem(Rat(-1)), FieldElem(Rat(-1))});
    CHECK(signature(p2) == 4);
    CHECK(sorted_rats(p2) == std::vector<Rat>(4, Rat(1)));

    CHECK_THROWS_AS(pfister(BaseField::reals(), {FieldElem(Rat(0))}), DomainError);
}

TEST_CASE("form algebra: sum, tensor, scale", "[qform]") {
    auto t = form_tensor(rform({-1, 2}), rform({-1, 3}));
    CHECK(sorted_rats(t) == std::vector<Rat>{Rat(-3), Rat(-2), Rat(1), Rat(6)});

    auto s = form_sum(rform({1}), rform({-1}));
    CHECK(witt_is_zero(s));

    auto sc = form_scale(rform({1, -2}), FieldElem(Rat(-1)));
    CHECK(sorted_rats(sc) == std::vector<Rat>{Rat(-1), Rat(2)});
    CHECK_THROWS_AS(form_scale(rform({1}), FieldElem(Rat(0))), DomainError);

    DiagonalForm bad{BaseField::reals(), {FieldElem(Rat(0))}};
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("fundamental ideal membership", "[qform]") {
    CHECK(in_fundamental_power(rform({1, 1}), 1));
    CHECK_FALSE(in_fundamental_power(rform({1, 1}), 2));
    CHECK(in_fundamental_power(rform({1, 1, 1, 1}), 2));
    CHECK_FALSE(in_fundamental_power(rform({1, 1, 1, 1}), 3));
    CHECK(in_fundamental_power(rform({1, -1}), 10));
    CHECK(in_fundamental_power(rform({1}), 0));
    CHECK_FALSE(in_fundamental_power(rform({1}), 1));

    std::vector<Rat> ce = {Rat(1), Rat(1)};
    CHECK(in_fundamental_power(form_from_rats(BaseField::complexes(), ce), 5));
    std::vector<Rat> co = {Rat(1)};
    CHECK_FALSE(in_fundamental_power(form_from_rats(BaseField::complexes(), co), 1));

    // F_5: a=2 is a nonsquare and -2=3 is also a nonsquare, so <1,2> is
    // anisotropic and survives in I/I^2.
    CHECK(in_fundamental_power(fpform(5, {1, 2}), 1));
    CHECK_FALSE(in_fundamental_power(fpform(5, {1, 2}), 2));
    // F_7: every <1, nonsquare> is hyperbolic (-a becomes a square), so the
    // class is zero and lies in every power.
    CHECK(in_fundamental_power(fpform(7, {1, 3}), 2));
    CHECK_FALSE(in_fundamental_power(fpform(7, {1, 1, 1}), 1));

    CHECK_THROWS_AS(
        in_fundamental_power(form_from_rats(BaseField::rationals(), ce), 1),
        DomainError);
}

TEST_CASE("witt_decompose agrees with the brute-force oracle", "[qform]") {
    for (long p : {3L, 5L, 7L}) {
        std::size_t max_dim = p == 3 ? 4 : 3;
        std::vector<std::vector<long>> forms;
        std::vector<long> cur;
        // enumerate all diagonal forms with entries in 1..p-1 up to max_dim
        std::function<void(std::size_t)> gen = [&](std::size_t depth) {
            if (depth > 0) forms.push_back(cur);
            if (depth == max_dim) return;
            for (long a = 1; a < p; ++a) {
                cur.push_back(a);
                gen(depth + 1);
                cur.pop_back();
            }
        };
        gen(0);
        for (const auto& d : forms) {
            auto dec = witt_decompose(fpform(p, d));
            std::size_t oracle = oracles::fp_witt_index(d, p);
            INFO("p=" << p << " dim=" << d.size());
            REQUIRE(dec.witt_index == oracle);
            REQUIRE(dec.anisotropic.dim() == d.size() - 2 * oracle);
        }
    }
}

TEST_CASE("upoly: gcd, sqrt, valuation", "[qform]") {
    UPoly t = UPoly::t();
    UPoly p = (t - UPoly::constant(Rat(1))) * (t - UPoly::constant(Rat(1))) *
              (t + UPoly::constant(Rat(2)));
    auto g = upoly_gcd(p, upoly_derivative(p));
    CHECK(g == t - UPoly::constant(Rat(1)));

    auto s = upoly_sqrt((t + UPoly::constant(Rat(3))) * (t + UPoly::constant(Rat(3))));
    REQUIRE(s.has_value());
    CHECK((*s == t + UPoly::constant(Rat(3)) || *s == -(t + UPoly::constant(Rat(3)))));
    CHECK_FALSE(upoly_sqrt(t).has_value());
    CHECK_FALSE(upoly_sqrt(UPoly::constant(Rat(2))).has_value());
    CHECK(upoly_sqrt(UPoly::constant(Rat(4)))->coeff(0) == 2);

    auto [k, u] = upoly_valuation(p, t - UPoly::constant(Rat(1)));
    CHECK(k == 2);
    CHECK(u == t + UPoly::constant(Rat(2)));

    RationalFunction f(p, (t - UPoly::constant(Rat(1))) * t);
    Rat uv;
    CHECK(rf_valuation(f, Place::linear(t - UPoly::constant(Rat(1))), &uv) == 1);
    CHECK(rf_valuation(f, Place::infinity(), &uv) == -1);
    CHECK(rf_is_square(RationalFunction(p * p, t * t)));
    CHECK_FALSE(rf_is_square(RationalFunction(p, t)));
}

TEST_CASE("second residues at finite places and infinity", "[qform]") {
    auto f = ffform({rf_t(), rf_one_minus_t()});
    auto rt = residue_second(f, Place::linear(UPoly::t()));
    REQUIRE(rt.dim() == 1);
    CHECK(std::get<Rat>(rt.entries[0]) == 1);

    // with the monic uniformizer t-1, the entry 1-t has unit part -1
    auto r1 = residue_second(f, Place::linear(UPoly::t() - UPoly::constant(Rat(1))));
    REQUIRE(r1.dim() == 1);
    CHECK(std::get<Rat>(r1.entries[0]) == -1);

    auto fm = ffform({rf_c(-1), rf_t()});
    auto rinf = residue_second(fm, Place::infinity());
    REQUIRE(rinf.dim() == 1);
    CHECK(std::get<Rat>(rinf.entries[0]) == 1);

    auto rother = residue_second(fm, Place::linear(UPoly::t() - UPoly::constant(Rat(5))));
    CHECK(rother.dim() == 0);

    CHECK_THROWS_AS(Place::linear(UPoly::t() * UPoly::t()), DomainError);
}

TEST_CASE("witt equality over Q(t): equal, unequal, undecided", "[qform]") {
    std::vector<UPoly> fb = {UPoly::t(), UPoly({Rat(1), Rat(-1)})};
    RationalFunction t = rf_t(), omt = rf_one_minus_t();

    auto lhs = ffform({rf_c(-1), t, rf_c(-1), omt});
    auto rhs = ffform({rf_c(-1), t * omt, rf_c(1), rf_c(-1)});
    auto v = witt_equal_via_residues(lhs, rhs, fb);
    CHECK(v.verdict == WittVerdictKind::Equal);

    auto identical = witt_equal_via_residues(lhs, lhs, fb);
    CHECK(identical.verdict == WittVerdictKind::Equal);

    auto bad1 = ffform({rf_c(-1), -t, rf_c(-1), omt});
    auto v1 = witt_equal_via_residues(bad1, rhs, fb);
    CHECK(v1.verdict == WittVerdictKind::Unequal);

    auto bad2 = ffform({rf_c(-1), t, rf_c(1), -omt});
    auto v2 = witt_equal_via_residues(bad2, rhs, fb);
    CHECK(v2.verdict == WittVerdictKind::Unequal);

    auto parity = witt_equal_via_residues(ffform({t}), ffform({t, omt}), fb);
    CHECK(parity.verdict == WittVerdictKind::Unequal);

    UPoly t2p1({Rat(1), Rat(0), Rat(1)});
    auto outside = ffform({RationalFunction::from_poly(t2p1)});
    auto vu = witt_equal_via_residues(outside, ffform({t}), fb);
    CHECK(vu.verdict == WittVerdictKind::Undecided);
}

TEST_CASE("prime field guards", "[qform]") {
    CHECK_THROWS_AS(BaseField::prime(4), DomainError);
    CHECK_THROWS_AS(BaseField::prime(2), DomainError);
    CHECK_THROWS_AS(BaseField::prime(9), DomainError);
    CHECK(fp_least_nonsquare(3) == 2);
    CHECK(fp_least_nonsquare(5) == 2);
    CHECK(fp_least_nonsquare(7) == 3);
    CHECK(fp_is_square(2, 7));
    CHECK_FALSE(fp_is_square(3, 7));
    CHECK(fp_reduce(Rat(1, 2), 7) == 4);
    CHECK_THROWS_AS(fp_reduce(Rat(1, 7), 7), DomainError);
}
