#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "springerlab/errors.hpp"
#include "springerlab/factor.hpp"
#include "springerlab/matrix.hpp"

using namespace springerlab;

namespace {

IntPoly P(const LocalField& F, const std::string& s) { return IntPoly::parse(F, s, F.max_precision()); }

std::vector<std::pair<Ratio, int>> rv(std::initializer_list<std::tuple<int, int, int>> l) {
    std::vector<std::pair<Ratio, int>> r;
    for (auto [a, b, m] : l) r.push_back({make_ratio(a, b), m});
    return r;
}

int vp(long long v, int p) {
    int k = 0;
    while (v % p == 0) {
        v /= p;
        ++k;
    }
    return k;
}

bool is_square_mod(long long u, int p) {
    u %= p;
    if (u < 0) u += p;
    for (int x = 0; x < p; ++x)
        if ((static_cast<long long>(x) * x - u) % p == 0) return true;
    return false;
}

}  // namespace

TEST_CASE("polynomial literals") {
    LocalField Q3 = LocalField::unramified(3);
    IntPoly f = P(Q3, "x^2 - 27");
    CHECK(f.degree() == 2);
    CHECK(f.to_string() == "x^2 - 27");
    CHECK(P(Q3, "(x - 1)*(x + 1)").to_string() == "x^2 - 1");
    CHECK(P(Q3, "x^3 + 1/3*x").to_string() == "x^3 + 1/3*x");
    CHECK(P(Q3, "pi^2*x").equals(P(Q3, "9*x")));
    CHECK_THROWS_AS(P(Q3, "x^2 +"), ParseError);
    LocalField W = LocalField::unramified(3, 2);
    IntPoly g = P(W, "x^2 - t");
    CHECK(g.to_string() == "x^2 + {" + (-PadicElt::unram_generator(W, W.max_precision())).to_string() + "}");
}

TEST_CASE("newton polygons") {
    LocalField Q3 = LocalField::unramified(3);
    CHECK(newton_polygon(P(Q3, "x^2 - 3")).root_valuations() == rv({{1, 2, 2}}));
    CHECK(newton_polygon(P(Q3, "x^2 - 3*x + 27")).root_valuations() == rv({{1, 1, 1}, {2, 1, 1}}));
    CHECK(newton_polygon(P(Q3, "(x - 1)*(x - 3)")).root_valuations() == rv({{0, 1, 1}, {1, 1, 1}}));
    // A coefficient known only modulo 3 that could sit on the hull.
    IntPoly h(Q3, {PadicElt::from_int(Q3, 9, 10), PadicElt::zero(Q3, 1), PadicElt::one(Q3, 10)});
    CHECK_THROWS_AS(newton_polygon(h), PrecisionError);
    IntPoly h2(Q3, {PadicElt::from_int(Q3, 9, 10), PadicElt::zero(Q3, 2), PadicElt::one(Q3, 10)});
    CHECK(newton_polygon(h2).root_valuations() == rv({{1, 1, 2}}));
}

TEST_CASE("matrix basics") {
    LocalField Q3 = LocalField::unramified(3);
    int N = Q3.max_precision();
    Mat I = Mat::identity(Q3, 2, N);
    CHECK(I.charpoly().equals(P(Q3, "x^2 - 2*x + 1")));
    Mat D = Mat::from_ints(Q3, {{3, 0}, {0, 1}}, N);
    CHECK(D.charpoly().equals(P(Q3, "x^2 - 4*x + 3")));
    IntPoly f = P(Q3, "x^3 - 3*x + 5");
    CHECK(Mat::companion(f).charpoly().equals(f));
    Mat A = Mat::parse(Q3, "[[1, 2, 0], [3, 4, 1], [0, 9, 1/3]]", N);
    CHECK(A.to_string() == "[[1,2,0],[3,4,1],[0,9,1/3]]");
    CHECK((A * A.inverse()).with_prec(10).equals(Mat::identity(Q3, 3, 10)));
    // det via an independent cofactor expansion.
    PadicElt third = PadicElt::from_decimal(Q3, "1/3", N);
    PadicElt cof = PadicElt::from_int(Q3, 1, N) * (PadicElt::from_int(Q3, 4, N) * third - PadicElt::from_int(Q3, 9, N)) -
                   PadicElt::from_int(Q3, 2, N) * (PadicElt::from_int(Q3, 3, N) * third);
    CHECK(A.det().equals(cof));
    CHECK(A.charpoly()[0].equals(-A.det()));
}

TEST_CASE("discriminant valuations") {
    LocalField Q3 = LocalField::unramified(3);
    CHECK(disc_val_poly(P(Q3, "x^2 - 27")) == 3);
    CHECK(disc_val_poly(P(Q3, "(x - 1)*(x - 10)")) == 4);
    LocalField Q2 = LocalField::unramified(2);
    CHECK(disc_val_poly(P(Q2, "x^2 - 2")) == 3);
    CHECK_THROWS_AS(disc_val_poly(P(Q3, "(x - 1)^2")), DomainError);
}

TEST_CASE("maximal orders") {
    for (int p : {3, 5, 7}) {
        LocalField F = LocalField::unramified(p);
        auto r = maximal_order(P(F, "x^2 - " + std::to_string(p)));
        CHECK(r.disc_val == 1);
        CHECK(r.index_val == 0);
        auto r3 = maximal_order(P(F, "x^2 - " + std::to_string(p * p * p)));
        CHECK(r3.disc_val == 1);
        CHECK(r3.index_val == 1);
        // x/p lies in the maximal order: the degree-1 basis vector has leading coefficient 1/p.
        CHECK(r3.basis[1][1].val() == -1);
    }
    LocalField Q2 = LocalField::unramified(2);
    auto r = maximal_order(P(Q2, "x^2 - 2"));
    CHECK(r.disc_val == 3);
    CHECK(r.index_val == 0);
}

TEST_CASE("factorization examples") {
    LocalField Q3 = LocalField::unramified(3);
    auto r = factor(P(Q3, "x^2 - 1"));
    REQUIRE(r.factors.size() == 2);
    for (const auto& f : r.factors) {
        CHECK(f.e == 1);
        CHECK(f.f == 1);
    }
    CHECK(r.all_ok());

    LocalField Q5 = LocalField::unramified(5);
    auto s = factor(P(Q5, "x^2 + 1"));
    REQUIRE(s.factors.size() == 2);
    std::vector<int> roots;
    for (const auto& f : s.factors) roots.push_back((-f.poly[0]).residue());
    std::sort(roots.begin(), roots.end());
    CHECK(roots == std::vector<int>{2, 3});
    CHECK(s.product_ok);

    auto t = factor(P(Q3, "x^2 + 1"));
    REQUIRE(t.factors.size() == 1);
    CHECK(t.factors[0].e == 1);
    CHECK(t.factors[0].f == 2);
    // Exhaustive residue root search: -1 is not a square mod 3.
    CHECK_FALSE(is_square_mod(-1, 3));

    LocalField Q2 = LocalField::unramified(2);
    auto u = factor(P(Q2, "x^3 - 4"));
    CHECK(u.all_ok());
    int art = 0;
    for (const auto& f : u.factors) art += f.disc_val;
    CHECK(art == 2);

    // Non-integral input is rescaled internally.
    auto w = factor(P(Q3, "x^2 - 1/3"));
    REQUIRE(w.factors.size() == 1);
    CHECK(w.factors[0].e == 2);
    CHECK(w.factors[0].root_val == make_ratio(-1, 2));
    CHECK(w.all_ok());
}

TEST_CASE("quadratic oracle over odd p") {
    std::mt19937_64 rng(2024);
    for (int p : {3, 5, 7}) {
        LocalField F = LocalField::unramified(p);
        for (int trial = 0; trial < 60; ++trial) {
            long long b = static_cast<long long>(rng() % 200) - 100, c = static_cast<long long>(rng() % 2000) - 1000;
            long long d = b * b - 4 * c;
            if (d == 0) continue;
            // Oracle from the discriminant alone.
            int v = vp(d, p);
            long long u = d;
            for (int i = 0; i < v; ++i) u /= p;
            int nfac, e, f, dv;
            if (v % 2 == 1) {
                nfac = 1, e = 2, f = 1, dv = 1;
            } else if (is_square_mod(u, p)) {
                nfac = 2, e = 1, f = 1, dv = 0;
            } else {
                nfac = 1, e = 1, f = 2, dv = 0;
            }
            IntPoly g = IntPoly::from_ints(F, {c, b, 1}, F.max_precision());
            auto r = factor(g);
            CHECK(r.all_ok());
            REQUIRE(static_cast<int>(r.factors.size()) == nfac);
            if (nfac == 1) {
                CHECK(r.factors[0].e == e);
                CHECK(r.factors[0].f == f);
                CHECK(r.factors[0].disc_val == dv);
                CHECK(r.factors[0].index_val == (v - dv) / 2);
            }
        }
    }
}

TEST_CASE("factorization battery: identities, tameness, Newton polygons") {
    std::mt19937_64 rng(77);
    int tested = 0;
    for (int p : {2, 3, 5}) {
        LocalField F = LocalField::unramified(p);
        for (int trial = 0; trial < 80; ++trial) {
            int n = 2 + static_cast<int>(rng() % 3);
            std::vector<std::int64_t> c(n + 1);
            for (int i = 0; i < n; ++i) {
                int v = static_cast<int>(rng() % 4);
                std::int64_t m = static_cast<std::int64_t>(rng() % 7) - 3;
                std::int64_t pv = 1;
                for (int k = 0; k < v; ++k) pv *= p;
                c[i] = m * pv;
            }
            c[n] = 1;
            IntPoly g = IntPoly::from_ints(F, c, F.max_precision());
            FactorizationReport r;
            try {
                r = factor(g);
            } catch (const DomainError&) {
                continue;  // repeated root
            }
            ++tested;
            CHECK(r.all_ok());
            std::vector<std::pair<Ratio, int>> from_factors;
            for (const auto& f : r.factors) {
                bool tame = f.e % p != 0;
                CHECK(f.disc_val >= f.f * (f.e - 1));
                CHECK(tame == (f.disc_val == f.f * (f.e - 1)));
                from_factors.push_back({f.root_val, f.poly.degree()});
            }
            if (!g[0].is_zero()) {
                std::sort(from_factors.begin(), from_factors.end());
                std::vector<std::pair<Ratio, int>> merged;
                for (const auto& x : from_factors) {
                    if (!merged.empty() && merged.back().first == x.first)
                        merged.back().second += x.second;
                    else
                        merged.push_back(x);
                }
                CHECK(newton_polygon(g).root_valuations() == merged);
            }
        }
    }
    CHECK(tested > 150);
}

TEST_CASE("ramified and unramified base fields") {
    LocalField E = LocalField::parse(3, 1, "x^2 - 3");
    auto r = factor(P(E, "x^2 - 3"));
    CHECK(r.factors.size() == 2);
    CHECK(r.all_ok());
    auto s = factor(P(E, "x^3 - pi"));
    REQUIRE(s.factors.size() == 1);
    CHECK(s.factors[0].e == 3);
    CHECK(s.all_ok());
    LocalField W = LocalField::unramified(3, 2);
    auto t = factor(P(W, "x^2 + 1"));
    CHECK(t.factors.size() == 2);
    auto j = to_json(t);
    CHECK(j["factors"].size() == 2);
    CHECK(j["checks"]["product"] == true);
}
