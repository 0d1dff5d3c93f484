#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "umrow/euler.hpp"

using namespace umrow;

namespace {

RingSpec s2_ring() {
    RingSpec r;
    r.vars = {"x", "y", "z"};
    r.dim = 2;
    r.complete_intersection = true;
    r.relations = {parse_poly("x^2+y^2+z^2-1", r)};
    r.validate();
    return r;
}

RingSpec s3_ring() {
    RingSpec r;
    r.vars = {"x1", "x2", "x3", "x4"};
    r.dim = 3;
    r.complete_intersection = true;
    r.relations = {parse_poly("x1^2+x2^2+x3^2+x4^2-1", r)};
    r.validate();
    return r;
}

RingSpec s4_ring() {
    RingSpec r;
    r.vars = {"x1", "x2", "x3", "x4", "x5"};
    r.dim = 4;
    r.complete_intersection = true;
    r.relations = {parse_poly("x1^2+x2^2+x3^2+x4^2+x5^2-1", r)};
    r.validate();
    return r;
}

// Disjoint union of two unit spheres centered at x = 3 and x = -3. One
// defining equation, smooth, two compact components told apart by sign(x).
RingSpec two_spheres_ring() {
    RingSpec r;
    r.vars = {"x", "y", "z"};
    r.dim = 2;
    r.complete_intersection = true;
    r.relations = {parse_poly("((x-3)^2+y^2+z^2-1)*((x+3)^2+y^2+z^2-1)", r)};
    r.validate();
    return r;
}

ComponentSeparator two_spheres_sep(const RingSpec& r) {
    ComponentSeparator cs;
    cs.labels = {"right", "left"};
    cs.separators = {parse_poly("x", r)};
    cs.sign_table = {{1}, {-1}};
    cs.validate(r);
    return cs;
}

std::vector<Poly> tail(const RingSpec& r, const std::vector<std::string>& ss) {
    std::vector<Poly> out;
    for (const auto& s : ss) out.push_back(parse_poly(s, r));
    return out;
}

}  // namespace

TEST_CASE("local form of the sphere tail (x, y)", "[euler]") {
    RingSpec s2 = s2_ring();
    LocalForm lf = local_form(s2, tail(s2, {"x", "y"}));

    // quotient is Q[z]/(z^2-1)
    REQUIRE(lf.algebra.dim() == 2);
    REQUIRE(lf.jacobian_nf == parse_poly("2*z", s2));

    // the residue functional: lambda(1) = 0, lambda(z) = 1
    REQUIRE(qvec_dot(lf.algebra.coords(parse_poly("1", s2)), lf.lambda) == Rat(0));
    REQUIRE(qvec_dot(lf.algebra.coords(parse_poly("z", s2)), lf.lambda) == Rat(1));

    // the form <lambda(b_i b_j)> is a hyperbolic plane
    auto sig = qmat_signature(lf.gram);
    REQUIRE(sig.signature == 0);
    REQUIRE(sig.rank == 2);
    REQUIRE(qmat_det(lf.gram) == Rat(-1));

    // weighting by z counts the two real points with the signs of z
    REQUIRE(qmat_signature(weighted_gram(lf, parse_poly("z", s2))).signature == 2);
    REQUIRE(qmat_signature(weighted_gram(lf, parse_poly("-z", s2))).signature == -2);
    REQUIRE(weighted_gram(lf, parse_poly("1", s2)) == lf.gram);

    SECTION("another regular tail gives the same residue pairing") {
        LocalForm lg = local_form(s2, tail(s2, {"x", "y-x"}));
        REQUIRE(lg.algebra.dim() == 2);
        REQUIRE(lg.jacobian_nf == parse_poly("2*z", s2));
        REQUIRE(qmat_signature(lg.gram).signature == 0);
        REQUIRE(qmat_det(lg.gram) != 0);
    }
}

TEST_CASE("local form handles fat points and empty loci", "[euler]") {
    RingSpec s2 = s2_ring();

    SECTION("double points at the poles") {
        LocalForm lf = local_form(s2, tail(s2, {"x", "y^2"}));
        REQUIRE(lf.algebra.dim() == 4);
        auto sig = qmat_signature(lf.gram);
        REQUIRE(sig.signature == 0);
        REQUIRE(sig.rank == 4);
        // both local degrees vanish: y^2 does not change sign through a pole
        REQUIRE(qmat_signature(weighted_gram(lf, parse_poly("z", s2))).signature == 0);
    }

    SECTION("unit tail ideal gives the empty algebra") {
        LocalForm lf = local_form(s2, tail(s2, {"x^2+y^2+z^2", "y"}));
        REQUIRE(lf.algebra.dim() == 0);
        REQUIRE(lf.lambda.empty());
        REQUIRE(lf.gram.empty());
        REQUIRE(lf.jacobian_nf.is_zero());
    }

    SECTION("preconditions") {
        REQUIRE_THROWS_AS(local_form(s2, tail(s2, {"x"})), DomainError);
        REQUIRE_THROWS_AS(local_form(s2, tail(s2, {"x", "x"})), DomainError);

        RingSpec circle;
        circle.vars = {"x", "y"};
        circle.dim = 1;
        circle.complete_intersection = true;
        circle.relations = {parse_poly("x^2+y^2-1", circle)};
        REQUIRE_THROWS_AS(local_form(circle, tail(circle, {"y"})), DomainError);

        RingSpec loose = s2_ring();
        loose.complete_intersection = false;
        REQUIRE_THROWS_AS(local_form(loose, tail(loose, {"x", "y"})), DomainError);
    }
}

TEST_CASE("phi classes of rows on the sphere", "[euler]") {
    RingSpec s2 = s2_ring();
    ComponentSeparator one = single_component("S2");

    auto cls = [&](std::vector<std::string> entries) {
        return phi_class(certify(make_row(s2, entries)), one);
    };

    PointedClass tangent = cls({"z", "x", "y"});
    REQUIRE(tangent.components == std::vector<std::string>{"S2"});
    REQUIRE(tangent.entries == std::vector<long long>{1});
    REQUIRE(tangent.convention == "tangent=+1");

    REQUIRE(cls({"-z", "x", "y"}).entries == std::vector<long long>{-1});
    REQUIRE(cls({"1", "x", "y"}).entries == std::vector<long long>{0});
    REQUIRE(cls({"1", "x", "y"}).is_zero());

    // fat zeros of the tail contribute their (here vanishing) local degrees
    REQUIRE(cls({"z", "x", "y^2"}).entries == std::vector<long long>{0});

    // a conjugate pair of complex tail zeros drops out of every signature
    REQUIRE(cls({"z", "x", "y*(z^2+2)"}).entries == std::vector<long long>{1});

    // empty vanishing locus
    REQUIRE(cls({"z", "x^2+y^2+z^2", "y"}).entries == std::vector<long long>{0});

    SECTION("tangent row of the 4-sphere") {
        RingSpec s4 = s4_ring();
        Row t = certify(make_row(s4, {"x1", "x2", "x3", "x4", "x5"}));
        PointedClass c = phi_class(t, single_component("S4"));
        REQUIRE(c.entries == std::vector<long long>{1});
    }

    SECTION("dimension guard") {
        RingSpec circle;
        circle.vars = {"x", "y"};
        circle.dim = 1;
        circle.complete_intersection = true;
        circle.relations = {parse_poly("x^2+y^2-1", circle)};
        Row r = certify(make_row(circle, {"x", "y"}));
        REQUIRE_THROWS_AS(phi_class(r, single_component("C")), DomainError);
    }
}

TEST_CASE("phi class is an E-invariant", "[euler]") {
    RingSpec s2 = s2_ring();
    ComponentSeparator one = single_component("S2");
    Row t = certify(make_row(s2, {"z", "x", "y"}));

    SECTION("frozen single operation") {
        Row moved = apply_elementary(t, {{1, 0, parse_poly("z", s2)}});
        REQUIRE(moved.entries[1] == parse_poly("x+z^2", s2));
        REQUIRE(phi_class(moved, one).entries == std::vector<long long>{1});
    }

    SECTION("seeded operation chains") {
        std::mt19937_64 rng(20240813);
        auto coef = [&]() { return Rat(static_cast<long>(rng() % 3) - 1); };
        for (int trial = 0; trial < 6; ++trial) {
            Row r = t;
            std::size_t nops = 1 + rng() % 2;
            for (std::size_t k = 0; k < nops; ++k) {
                std::size_t i = rng() % 3, j = rng() % 3;
                if (i == j) j = (j + 1) % 3;
                Poly h = Poly::constant(3, coef()) +
                         Poly::variable(3, rng() % 3) * Poly::constant(3, coef());
                r = apply_elementary(r, {{i, j, h}});
            }
            PointedClass c = phi_class(r, one);
            INFO("trial " << trial);
            REQUIRE(c.entries == std::vector<long long>{1});
        }
    }

    SECTION("independent of the preparation seed") {
        Row needs_prep = certify(make_row(s2, {"1", "x", "0"}));
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            PointedClass c = phi_class(needs_prep, one, seed);
            REQUIRE(c.entries == std::vector<long long>{0});
        }
    }
}

TEST_CASE("phi classes split over the components of a two-sphere union", "[euler]") {
    RingSpec ring = two_spheres_ring();
    ComponentSeparator sep = two_spheres_sep(ring);

    auto cls = [&](std::vector<std::string> entries) {
        return phi_class(certify(make_row(ring, entries)), sep);
    };

    PointedClass right = cls({"x-3", "y", "z"});
    REQUIRE(right.components == std::vector<std::string>{"right", "left"});
    REQUIRE(right.entries == std::vector<long long>{1, 0});

    REQUIRE(cls({"x+3", "y", "z"}).entries == std::vector<long long>{0, 1});
    REQUIRE(cls({"1", "y", "z"}).entries == std::vector<long long>{0, 0});
    REQUIRE(cls({"x^2-11", "y", "z"}).entries == std::vector<long long>{1, -1});

    SECTION("separator validation") {
        ComponentSeparator bad = sep;
        bad.sign_table[1] = {1};  // no longer separates
        REQUIRE_THROWS_AS(bad.validate(ring), DomainError);

        bad = sep;
        bad.sign_table = {{1}};
        REQUIRE_THROWS_AS(bad.validate(ring), DomainError);

        bad = sep;
        bad.sign_table[0] = {2};
        REQUIRE_THROWS_AS(bad.validate(ring), DomainError);

        bad = sep;
        bad.labels = {"right", "right"};
        bad.sign_table = {{1}, {-1}};
        REQUIRE_THROWS_AS(bad.validate(ring), DomainError);

        bad = sep;
        bad.separators = {parse_poly("x1", s4_ring())};
        REQUIRE_THROWS_AS(bad.validate(ring), RingMismatchError);
    }
}

TEST_CASE("phi classes are additive across the WMS relation", "[euler]") {
    RingSpec s2 = s2_ring();
    ComponentSeparator one = single_component("S2");

    auto inst = wms_relation_instance(parse_poly("1/4*z", s2), tail(s2, {"x", "y"}), s2);
    REQUIRE(std::holds_alternative<WmsInstance>(inst));
    const auto& w = std::get<WmsInstance>(inst);
    REQUIRE(phi_class(w.row_x, one).entries == std::vector<long long>{1});
    REQUIRE(phi_class(w.row_one_minus_x, one).entries == std::vector<long long>{0});
    REQUIRE(phi_class(w.row_product, one).entries == std::vector<long long>{1});
    REQUIRE(phi_additivity_check(w, one));

    auto flat =
        wms_relation_instance(parse_poly("1/2*z+2", s2), tail(s2, {"x", "y"}), s2);
    REQUIRE(std::holds_alternative<WmsInstance>(flat));
    REQUIRE(phi_additivity_check(std::get<WmsInstance>(flat), one));
}

TEST_CASE("freeness verdicts", "[euler]") {
    RingSpec s2 = s2_ring();
    s2.rational_variety = true;
    s2.trivial_canonical_bundle = true;
    ComponentSeparator one = single_component("S2");

    FreenessVerdict v = freeness_verdict(certify(make_row(s2, {"z", "x", "y"})), one);
    REQUIRE(v.verdict == "not free");
    REQUIRE(v.has_class);
    REQUIRE(v.cls.entries == std::vector<long long>{1});

    REQUIRE(freeness_verdict(certify(make_row(s2, {"1", "x", "y"})), one).verdict == "free");

    RingSpec s3 = s3_ring();
    s3.rational_variety = true;
    s3.trivial_canonical_bundle = true;
    ComponentSeparator s3one = single_component("S3");
    FreenessVerdict odd =
        freeness_verdict(certify(make_row(s3, {"x1", "x2", "x3", "x4"})), s3one);
    REQUIRE(odd.verdict == "indeterminate under SL-action");
    REQUIRE(odd.cls.entries == std::vector<long long>{1});

    FreenessVerdict unit =
        freeness_verdict(certify(make_row(s3, {"1", "x1", "x2", "x3"})), s3one);
    REQUIRE(unit.verdict == "E-trivial hence free");

    // without the user-asserted geometric flags there is no interpretation
    RingSpec plain = s2_ring();
    FreenessVerdict scope = freeness_verdict(certify(make_row(plain, {"z", "x", "y"})), one);
    REQUIRE(scope.verdict == "out of theorem scope");
    REQUIRE_FALSE(scope.has_class);
}

TEST_CASE("trace form counts real points of the prepared tail", "[euler]") {
    RingSpec s2 = s2_ring();

    LocalForm poles = local_form(s2, tail(s2, {"x", "y"}));
    REQUIRE(qmat_signature(trace_form(poles.algebra)).signature == 2);

    LocalForm conj = local_form(s2, tail(s2, {"x", "y*(z^2+2)"}));
    REQUIRE(conj.algebra.dim() == 6);
    REQUIRE(qmat_signature(trace_form(conj.algebra)).signature == 2);

    RingSpec pair = two_spheres_ring();
    LocalForm four = local_form(pair, tail(pair, {"y", "z"}));
    REQUIRE(four.algebra.dim() == 4);
    REQUIRE(qmat_signature(trace_form(four.algebra)).signature == 4);
}
