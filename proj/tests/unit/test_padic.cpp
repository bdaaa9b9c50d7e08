#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "springerlab/errors.hpp"
#include "springerlab/padic.hpp"

using namespace springerlab;

namespace {

// Reference model for Z_p modulo p^N: plain integer residues.
std::int64_t ipow(std::int64_t b, int k) {
    std::int64_t r = 1;
    while (k-- > 0) r *= b;
    return r;
}

PadicElt random_elt(const LocalField& F, std::mt19937_64& rng, int N, bool allow_negative_val) {
    std::uniform_int_distribution<int> dig(0, static_cast<int>(F.residue_card()) - 1);
    PadicElt x = PadicElt::zero(F, N);
    PadicElt pk = PadicElt::one(F, N);
    PadicElt pi = PadicElt::uniformizer(F, N);
    for (int i = 0; i < N; ++i) {
        x = x + PadicElt::from_residue(F, dig(rng), N) * pk;
        pk = pk * pi;
    }
    if (allow_negative_val && rng() % 4 == 0) x = x.shift_pi(-static_cast<int>(rng() % 3));
    return x;
}

std::vector<LocalField> configurations() {
    return {
        LocalField::unramified(2),
        LocalField::unramified(3),
        LocalField::unramified(5, 2),
        LocalField::unramified(2, 3),
        LocalField::parse(2, 1, "x^2 - 2"),
        LocalField::parse(3, 1, "x^3 - 3*x - 3"),
        LocalField::parse(3, 2, "x^2 - 3*t"),
    };
}

}  // namespace

TEST_CASE("valuation and indeterminacy") {
    LocalField Q5 = LocalField::unramified(5);
    PadicElt u = PadicElt::from_int(Q5, 7, 10);
    PadicElt x = PadicElt::pi_power(Q5, 3, 10) * u;
    CHECK(x.val() == 3);
    PadicElt z = PadicElt::zero(Q5, 8);
    CHECK_FALSE(z.val().has_value());
    CHECK(z.val_or_prec() == 8);
    LocalField E = LocalField::parse(5, 1, "x^2 - 5");
    CHECK(PadicElt::from_int(E, 5, 12).val() == 2);
    CHECK(PadicElt::uniformizer(E, 12).val() == 1);
}

TEST_CASE("precision calculus") {
    LocalField Q3 = LocalField::unramified(3);
    PadicElt a = PadicElt::from_int(Q3, 9, 6);   // val 2, prec 6
    PadicElt b = PadicElt::from_int(Q3, 3, 4);   // val 1, prec 4
    CHECK((a + b).prec() == 4);
    CHECK((a * b).prec() == std::min(6 + 1, 4 + 2));
    CHECK(b.inv().prec() == 4 - 2);
    CHECK(b.inv().val() == -1);
    CHECK_THROWS_AS(PadicElt::zero(Q3, 6).inv(), PrecisionError);
    try {
        PadicElt::zero(Q3, 6).inv();
    } catch (const PrecisionError& e) {
        CHECK(std::string(e.what()).find("insufficient precision") != std::string::npos);
        CHECK(e.suggested_precision() > 6);
    }
}

TEST_CASE("small identities") {
    LocalField Q5 = LocalField::unramified(5);
    PadicElt p = PadicElt::from_int(Q5, 5, 5);
    PadicElt one = PadicElt::one(Q5, 5);
    CHECK(((one + p) * (one - p)).equals(one - p * p));
    LocalField Q3 = LocalField::unramified(3);
    PadicElt q = PadicElt::from_int(Q3, 3, 4);
    PadicElt i = (PadicElt::one(Q3, 4) - q).inv();
    CHECK(i.prec() == 4);
    CHECK(i.to_string() == "1,1,1,1 (mod ϖ^4)");
}

TEST_CASE("ring axioms on random triples against an integer model") {
    std::mt19937_64 rng(12345);
    for (const auto& F : configurations()) {
        for (int trial = 0; trial < 1000; ++trial) {
            int N = 4 + static_cast<int>(rng() % 8);
            PadicElt a = random_elt(F, rng, N, true), b = random_elt(F, rng, N, true), c = random_elt(F, rng, N, false);
            CHECK(((a + b) + c).equals(a + (b + c)));
            CHECK((a + b).equals(b + a));
            CHECK(((a * b) * c).equals(a * (b * c)));
            CHECK((a * b).equals(b * a));
            CHECK((a * (b + c)).equals(a * b + a * c));
            CHECK((a - a).is_zero());
            auto va = a.val(), vb = b.val();
            if (va && vb) {
                auto vab = (a * b).val();
                if (vab) CHECK(*vab == *va + *vb);
                auto vs = (a + b).val();
                if (vs) {
                    CHECK(*vs >= std::min(*va, *vb));
                    if (*va != *vb) CHECK(*vs == std::min(*va, *vb));
                }
            }
            if (va && a.prec() - 2 * *va > 0) {
                PadicElt ai = a.inv();
                CHECK((a * ai).equals(PadicElt::one(F, (a * ai).prec())));
            }
        }
    }
    // Independent model: Z_p elements as integers modulo p^N.
    LocalField Q7 = LocalField::unramified(7);
    const int N = 6;
    const std::int64_t M = ipow(7, N);
    std::uniform_int_distribution<std::int64_t> d(0, M - 1);
    for (int trial = 0; trial < 1000; ++trial) {
        std::int64_t x = d(rng), y = d(rng);
        PadicElt X = PadicElt::from_int(Q7, x, N), Y = PadicElt::from_int(Q7, y, N);
        std::int64_t s = (x + y) % M, pr = static_cast<std::int64_t>(static_cast<__int128>(x) * y % M);
        CHECK((X + Y).equals(PadicElt::from_int(Q7, s, N)));
        CHECK((X * Y).with_prec(N).equals(PadicElt::from_int(Q7, pr, N)));
    }
}

TEST_CASE("teichmuller lifts") {
    LocalField Q3 = LocalField::unramified(3);
    CHECK(teichmuller(Q3, 1, 6).equals(PadicElt::one(Q3, 6)));
    CHECK(teichmuller(Q3, 2, 6).equals(PadicElt::from_int(Q3, -1, 6)));
    LocalField Q5 = LocalField::unramified(5);
    PadicElt t = teichmuller(Q5, 2, 4);
    // Frozen from iterating t <- t^5 mod 5^4 on plain integers: 182 = 2 + 1*5 + 2*25 + 1*125.
    CHECK(t.equals(PadicElt::from_int(Q5, 182, 4)));
    CHECK(t.to_string() == "2,1,2,1 (mod ϖ^4)");
    CHECK(t.pow(4).equals(PadicElt::one(Q5, 4)));
    CHECK_THROWS_AS(teichmuller(Q5, 0, 4), DomainError);

    for (auto [p, m] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}}) {
        LocalField F = LocalField::unramified(p, m);
        const auto& R = F.residue_field();
        const int N = 8;
        for (int a = 1; a < R.size(); ++a) {
            PadicElt ta = teichmuller(F, a, N);
            CHECK(ta.residue() == a);
            CHECK(teichmuller(F, ta.residue(), N).equals(ta));
            for (int b = 1; b < R.size(); ++b)
                CHECK((ta * teichmuller(F, b, N)).equals(teichmuller(F, R.mul(a, b), N)));
        }
    }
    LocalField E = LocalField::parse(3, 2, "x^2 - 3");
    PadicElt te = teichmuller(E, 5, 10);
    CHECK(te.pow(9).equals(te));
}

TEST_CASE("base change") {
    LocalField W = LocalField::unramified(3, 1);
    LocalField W2 = LocalField::unramified(3, 2);
    PadicElt x = PadicElt::from_int(W, 4, 6);
    CHECK(x.extend(W2).to_string() == x.to_string());
    LocalField E = LocalField::parse(3, 1, "x^2 - 3");
    LocalField E2 = E.unramified_extension(2);
    PadicElt pi = PadicElt::uniformizer(E, 10).extend(E2);
    CHECK(pi.equals(PadicElt::uniformizer(E2, 10)));
    CHECK(pi.val() == 1);
    LocalField Eb = LocalField::parse(3, 2, "x^2 - 6");
    CHECK_THROWS_AS(PadicElt::uniformizer(E, 10).extend(Eb), TowerMismatch);

    // extend commutes with ring operations.
    LocalField F = LocalField::unramified(2, 2);
    LocalField F6 = LocalField::unramified(2, 6);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        PadicElt a = random_elt(F, rng, 8, true), b = random_elt(F, rng, 8, true);
        CHECK((a * b).extend(F6).equals(a.extend(F6) * b.extend(F6)));
        CHECK((a + b).extend(F6).equals(a.extend(F6) + b.extend(F6)));
        PadicElt t = teichmuller(F, 1 + static_cast<int>(rng() % 3), 8);
        CHECK(t.extend(F6).pow(64).equals(t.extend(F6)));
    }
}

TEST_CASE("digit literals round-trip") {
    std::mt19937_64 rng(99);
    for (const auto& F : configurations()) {
        for (int trial = 0; trial < 100; ++trial) {
            PadicElt a = random_elt(F, rng, 1 + static_cast<int>(rng() % 9), true);
            std::string s = a.to_string();
            PadicElt b = PadicElt::parse_digits(F, s);
            CHECK(b.prec() == a.prec());
            CHECK(b.to_string() == s);
        }
    }
    LocalField Q2 = LocalField::unramified(2);
    CHECK(PadicElt::parse_digits(Q2, "1,0,1 (mod pi^5)").equals(PadicElt::from_int(Q2, 5, 5)));
    CHECK(PadicElt::zero(Q2, 0).to_string() == "(mod ϖ^0)");
    CHECK(PadicElt::from_decimal(Q2, "1/4", 3).to_string() == "ϖ^-2*(1,0,0,0,0) (mod ϖ^3)");
    CHECK(PadicElt::from_decimal(LocalField::unramified(3), "-1/2", 4).equals(
        PadicElt::from_int(LocalField::unramified(3), 40, 4)));
    CHECK_THROWS_AS(PadicElt::parse_digits(Q2, "1,2 (mod pi^5)"), ParseError);
}
