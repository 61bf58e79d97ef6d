#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>

#include "vmoser/serrin.hpp"

using namespace vmoser;

TEST_CASE("exponent type: exact comparisons, reciprocal, parsing") {
    CHECK(Exponent(3, 4) == Exponent(Rational(6, 8)));
    CHECK(Exponent(2) < Exponent(5, 2));
    CHECK(Exponent::infinity() > Exponent(1000000));
    CHECK(Exponent::infinity() == Exponent::infinity());
    CHECK(Exponent(1, 2).reciprocal() == Exponent(2));
    CHECK(Exponent::infinity().reciprocal() == Exponent(0));
    CHECK(Exponent(0).reciprocal() == Exponent::infinity());
    CHECK(Exponent(3, 4).str() == "3/4");
    CHECK(Exponent(2).str() == "2");
    CHECK(Exponent::infinity().str() == "inf");
    CHECK(Exponent(5, 2).to_double() == 2.5);
    CHECK(std::isinf(Exponent::infinity().to_double()));
    CHECK_THROWS_AS(Exponent::infinity().value(), std::domain_error);

    CHECK(parse_exponent("inf") == Exponent::infinity());
    CHECK(parse_exponent("Infinity") == Exponent::infinity());
    CHECK(parse_exponent("7") == Exponent(7));
    CHECK(parse_exponent("3/4") == Exponent(3, 4));
    CHECK(parse_exponent("21/10") == Exponent(21, 10));
    CHECK(parse_exponent("0.25") == Exponent(1, 4));
    CHECK(parse_exponent(" 2.5 ") == Exponent(5, 2));
    CHECK(parse_exponent(".5") == Exponent(1, 2));
    CHECK(parse_exponent("2.") == Exponent(2));
    CHECK(parse_exponent("-3/4") == Exponent(-3, 4));
    CHECK_THROWS_AS(parse_exponent(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_exponent("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_exponent("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_exponent("1e5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_exponent("99999999999999999999"), std::invalid_argument);
}

TEST_CASE("baseline exponent and Sobolev conjugate") {
    CHECK(kappa(2) == Exponent(2));
    CHECK(kappa(3) == Exponent(6));
    CHECK(kappa(4) == Exponent(4));
    CHECK(kappa(6) == Exponent(3));
    CHECK_THROWS_AS(kappa(1), std::invalid_argument);

    CHECK(two_star(2) == Exponent::infinity());
    CHECK(two_star(3) == Exponent(6));
    CHECK(two_star(4) == Exponent(4));
    CHECK_THROWS_AS(two_star(0), std::invalid_argument);
}

TEST_CASE("integrability condition on (q, s)") {
    SECTION("planar case: both exponents strictly above 2") {
        CHECK(serrin_check(2, Exponent(3), Exponent(3)));
        CHECK(serrin_check(2, Exponent::infinity(), Exponent(3)));
        CHECK_FALSE(serrin_check(2, Exponent(2), Exponent(5)));
        CHECK_FALSE(serrin_check(2, Exponent(5), Exponent(2)));
    }

    SECTION("d >= 3: 2/q + d/s <= 1 with the infinite-q endpoint excluded") {
        CHECK(serrin_check(3, Exponent(4), Exponent(6)));  // exact boundary
        CHECK(serrin_check(3, Exponent(3), Exponent(9)));  // exact boundary
        CHECK(serrin_check(3, Exponent(4), Exponent(7)));
        CHECK_FALSE(serrin_check(3, Exponent(3), Exponent(8)));
        CHECK_FALSE(serrin_check(3, Exponent::infinity(), Exponent(4)));
        // The boundary decision is exact rational arithmetic.
        CHECK(serrin_check(3, Exponent(4), Exponent(594, 99)));   // = 6
        CHECK_FALSE(serrin_check(3, Exponent(4), Exponent(599, 100)));
        CHECK(serrin_check(4, Exponent(4), Exponent(8)));  // 1/2 + 1/2
    }

    CHECK_THROWS_AS(serrin_check(1, Exponent(3), Exponent(3)), std::invalid_argument);
    CHECK_THROWS_AS(serrin_check(3, Exponent(0), Exponent(3)), std::invalid_argument);
    CHECK_THROWS_AS(serrin_check(3, Exponent(3), Exponent(-1)), std::invalid_argument);
}

TEST_CASE("parabolic Sobolev pairs: the two relations use swapped slots") {
    // Equality form: d/q* + 2/s* = d/2.
    CHECK(sobolev_pair_ok(3, Exponent(4), Exponent(8, 3), SobolevMode::equality));
    CHECK_FALSE(sobolev_pair_ok(3, Exponent(4), Exponent(12), SobolevMode::equality));
    // Swapping the arguments changes the answer: the relation is asymmetric.
    CHECK_FALSE(sobolev_pair_ok(3, Exponent(8, 3), Exponent(4), SobolevMode::equality));

    // Inequality form: d/s* + 2/q* >= d/2.
    CHECK(sobolev_pair_ok(3, Exponent(4), Exponent(8, 3), SobolevMode::inequality));
    CHECK_FALSE(sobolev_pair_ok(3, Exponent(4), Exponent::infinity(), SobolevMode::inequality));

    // Planar case is symmetric in the two slots.
    CHECK(sobolev_pair_ok(2, Exponent(4), Exponent(4), SobolevMode::equality));
    CHECK(sobolev_pair_ok(2, Exponent(3), Exponent(6), SobolevMode::equality));
    CHECK_FALSE(sobolev_pair_ok(2, Exponent(5), Exponent(5), SobolevMode::inequality));

    CHECK_THROWS_AS(sobolev_pair_ok(3, Exponent(2), Exponent(4), SobolevMode::equality),
                    std::invalid_argument);
    CHECK_THROWS_AS(sobolev_pair_ok(1, Exponent(4), Exponent(4), SobolevMode::equality),
                    std::invalid_argument);
}

TEST_CASE("dual exponents") {
    CHECK(dual_exponent(Exponent(4)) == Exponent(4));  // self-dual point
    CHECK(dual_exponent(Exponent(3)) == Exponent(6));
    CHECK(dual_exponent(Exponent(6)) == Exponent(3));
    CHECK(dual_exponent(Exponent(5, 2)) == Exponent(10));
    CHECK(dual_exponent(Exponent::infinity()) == Exponent(2));
    // Involution on the open ray (2, inf).
    for (long long n : {3LL, 5LL, 7LL, 12LL, 100LL})
        CHECK(dual_exponent(dual_exponent(Exponent(n))) == Exponent(n));
    CHECK_THROWS_AS(dual_exponent(Exponent(2)), std::invalid_argument);
    CHECK_THROWS_AS(dual_exponent(Exponent(3, 2)), std::invalid_argument);
}

TEST_CASE("minimal absorption exponent: strict floor rule") {
    CHECK(min_absorption_p(Exponent::infinity()) == 3);
    CHECK(min_absorption_p(Exponent(4)) == 5);   // threshold exactly 4
    CHECK(min_absorption_p(Exponent(6)) == 4);   // threshold exactly 3
    CHECK(min_absorption_p(Exponent(3)) == 7);   // threshold exactly 6
    CHECK(min_absorption_p(Exponent(5)) == 4);   // threshold 10/3
    CHECK(min_absorption_p(Exponent(5, 2)) == 11);
    CHECK(min_absorption_p(Exponent(2)) == 0);
    CHECK(min_absorption_p(Exponent(3, 2)) == 0);
}

TEST_CASE("absorption feasibility ties the pieces together") {
    SECTION("boundary pair (4, 6) in three dimensions") {
        ExponentReport rep = absorption_ok(3, Exponent(4), Exponent(6), Exponent(4), Exponent(3));
        CHECK(rep.s0 == Exponent(3));
        CHECK(rep.q0 == Exponent(4));
        CHECK(rep.kappa == Exponent(6));
        CHECK(rep.two_star == Exponent(6));
        CHECK(rep.serrin_ok);
        CHECK(rep.star_ok);
        CHECK(rep.absorption_ok);
        CHECK(rep.p == 7);  // from s* = 3
        CHECK(rep.delta == Rational(1, 2));

        // Shrinking s* below the dual breaks admissibility.
        ExponentReport small =
            absorption_ok(3, Exponent(4), Exponent(6), Exponent(4), Exponent(5, 2));
        CHECK(small.star_ok);
        CHECK_FALSE(small.absorption_ok);
    }

    SECTION("the dual pair is the decisive witness (d = 3, finite exponents)") {
        for (long long qn = 21; qn <= 60; qn += 3)
            for (long long sn = 21; sn <= 60; sn += 3) {
                Exponent q(qn, 10), s(sn, 10);
                ExponentReport rep = absorption_feasible(3, q, s);
                CHECK(rep.absorption_ok == serrin_check(3, q, s));
            }
    }

    SECTION("planar feasibility is strictly stronger than the planar condition") {
        ExponentReport rep = absorption_feasible(2, Exponent(3), Exponent(3));
        CHECK(serrin_check(2, Exponent(3), Exponent(3)));
        CHECK_FALSE(rep.absorption_ok);  // needs 2/q + 2/s <= 1
        ExponentReport ok = absorption_feasible(2, Exponent(4), Exponent(4));
        CHECK(ok.absorption_ok);
    }

    CHECK_THROWS_AS(absorption_ok(1, Exponent(4), Exponent(6), Exponent(4), Exponent(3)),
                    std::invalid_argument);
}

TEST_CASE("report serialization") {
    ExponentReport rep = absorption_ok(3, Exponent(4), Exponent(6), Exponent(4), Exponent(3));

    std::string csv = exponent_report_csv(rep);
    CHECK(csv ==
          "d,q,s,kappa,two_star,s_star,q_star,s0,q0,serrin_ok,star_ok,absorption_ok,delta,p\n"
          "3,4,6,6,6,3,4,3,4,true,true,true,1/2,7\n");

    std::string text = exponent_report_text(rep);
    CHECK(text.find("kappa      = 6") != std::string::npos);
    CHECK(text.find("serrin_ok  = true") != std::string::npos);
    CHECK(text.find("absorption = true") != std::string::npos);
    CHECK(text.find("p          = 7") != std::string::npos);

    ExponentReport inf_rep =
        absorption_ok(2, Exponent::infinity(), Exponent(4), Exponent(4), Exponent(4));
    std::string icsv = exponent_report_csv(inf_rep);
    CHECK(icsv.find(",inf,") != std::string::npos);
}
