#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "springerlab/errors.hpp"
#include "springerlab/invariants.hpp"

using namespace springerlab;

namespace {

IntPoly P(const LocalField& F, const std::string& s) { return IntPoly::parse(F, s, F.max_precision()); }
Mat M(const LocalField& F, const std::string& s) { return Mat::parse(F, s, F.max_precision()); }

std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// U g U^{-1} with U unimodular (a product of two random unitriangular matrices).
Mat conjugate_random(const Mat& g, std::mt19937_64& rng) {
    int n = g.rows();
    const LocalField& F = g.field();
    std::vector<std::vector<std::int64_t>> lo(n, std::vector<std::int64_t>(n, 0)), up = lo;
    for (int i = 0; i < n; ++i) {
        lo[i][i] = up[i][i] = 1;
        for (int j = 0; j < i; ++j) {
            lo[i][j] = static_cast<std::int64_t>(rng() % 5) - 2;
            up[j][i] = static_cast<std::int64_t>(rng() % 5) - 2;
        }
    }
    Mat U = Mat::from_ints(F, lo, F.max_precision()) * Mat::from_ints(F, up, F.max_precision());
    return U * g * U.inverse();
}

Mat random_integral(const LocalField& F, int n, std::mt19937_64& rng) {
    std::vector<std::vector<std::int64_t>> a(n, std::vector<std::int64_t>(n));
    for (auto& row : a)
        for (auto& x : row) x = (static_cast<std::int64_t>(rng() % 7) - 3) * ipow(F.p(), static_cast<int>(rng() % 3));
    return Mat::from_ints(F, a, F.max_precision());
}

// Bounded modulo the center: an integral unit-determinant matrix, or a
// conjugated companion of x^n + p(...) + p u (all roots of valuation 1/n), possibly scaled by p^k.
Mat random_bounded_mod_center(const LocalField& F, int n, std::mt19937_64& rng) {
    int p = F.p();
    Mat g;
    if (rng() % 2 == 0) {
        do g = random_integral(F, n, rng);
        while (!g.det().is_unit());
    } else {
        std::vector<std::int64_t> c(n + 1, 0);
        std::int64_t u;
        do u = static_cast<std::int64_t>(rng() % 9) - 4;
        while (u % p == 0);
        c[0] = p * u;
        for (int i = 1; i < n; ++i) c[i] = p * (static_cast<std::int64_t>(rng() % 5) - 2);
        c[n] = 1;
        g = conjugate_random(Mat::companion(IntPoly::from_ints(F, c, F.max_precision())), rng);
    }
    int k = static_cast<int>(rng() % 2);
    return k ? g.scale(PadicElt::from_int(F, p, F.max_precision())) : g;
}

bool is_identity(const Mat& m, int N) { return m.with_prec(N).equals(Mat::identity(m.field(), m.rows(), N)); }

}  // namespace

TEST_CASE("chevalley and kostant") {
    LocalField Q3 = LocalField::unramified(3);
    int N = Q3.max_precision();
    CHECK(chevalley(Mat::identity(Q3, 2, N)).equals(P(Q3, "x^2 - 2*x + 1")));
    CHECK(chevalley(Mat::from_ints(Q3, {{3, 0}, {0, 1}}, N)).equals(P(Q3, "x^2 - 4*x + 3")));
    Mat k = kostant_section(P(Q3, "x^2 - 27"));
    CHECK(k.to_string() == "[[0,27],[1,0]]");
    CHECK_THROWS_AS(kostant_section(P(Q3, "x^2 - 1/3")), DomainError);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        int p = trial % 2 ? 3 : 5;
        LocalField F = LocalField::unramified(p);
        int n = 1 + static_cast<int>(rng() % 4);
        std::vector<std::int64_t> c(n + 1);
        for (auto& x : c) x = static_cast<std::int64_t>(rng() % 101) - 50;
        c[n] = 1;
        IntPoly a = IntPoly::from_ints(F, c, F.max_precision());
        CHECK(chevalley(kostant_section(a)).equals(a));
    }
}

TEST_CASE("kottwitz and kappa defect") {
    LocalField Q2 = LocalField::unramified(2);
    int N = Q2.max_precision();
    CHECK(kottwitz(Mat::from_ints(Q2, {{1, 1}, {0, 1}}, N)) == 0);
    CHECK(kottwitz(M(Q2, "[[0,1],[2,0]]")) == 1);
    CHECK(kottwitz(Mat::identity(Q2, 3, N).scale(PadicElt::from_int(Q2, 2, N))) == 3);
    CHECK(kappa_defect(5, 0) == 0);
    CHECK(kappa_defect(2, 1) == 1);
    CHECK(kappa_defect(4, 2) == 2);
    CHECK(kappa_defect(6, -4) == 4);
    for (int n = 1; n <= 12; ++n)
        for (int a = -15; a <= 15; ++a) CHECK(kappa_defect(n, a) == kappa_defect(n, a + n));
}

TEST_CASE("discriminant valuations: examples") {
    LocalField Q2 = LocalField::unramified(2), Q3 = LocalField::unramified(3);
    auto d = discriminant_valuations(Mat::from_ints(Q3, {{5, 0}, {0, 14}}, Q3.max_precision()));
    CHECK(d.d_lie == 4);  // 2 val(5 - 14)
    auto e = discriminant_valuations(kostant_section(P(Q2, "x^2 - 2")));
    CHECK(e.d_lie == 3);
    CHECK(*e.d_grp == 2);
    CHECK(*e.d_grp_adjoint == 2);
    CHECK(discriminant_valuations(kostant_section(P(Q3, "x^2 - 27"))).d_lie == 3);
    CHECK_THROWS_AS(discriminant_valuations(Mat::identity(Q3, 2, Q3.max_precision())), DomainError);
}

TEST_CASE("discriminant valuations: both group routes on random bounded-mod-center matrices") {
    std::mt19937_64 rng(11);
    int checked = 0;
    while (checked < 200) {
        int p = std::vector<int>{2, 3, 5}[checked % 3];
        LocalField F = LocalField::unramified(p);
        int n = 1 + static_cast<int>(rng() % 3);
        Mat g = random_bounded_mod_center(F, n, rng);
        DiscriminantValuations d;
        try {
            d = discriminant_valuations(g, true);
        } catch (const DomainError&) {
            continue;
        }
        ++checked;
        REQUIRE(d.d_grp_adjoint.has_value());
        CHECK(*d.d_grp_adjoint == *d.d_grp_closed_form);
        CHECK(*d.d_grp == d.d_lie - (n - 1) * kottwitz(g));
    }
}

TEST_CASE("artin conductor examples") {
    LocalField Q3 = LocalField::unramified(3), Q2 = LocalField::unramified(2);
    auto split = artin_conductor(factor(P(Q3, "(x - 1)*(x - 2)*(x - 4)")));
    CHECK(split.art == 0);
    CHECK(split.torus_def == 0);
    for (int p : {3, 5, 7}) {
        LocalField F = LocalField::unramified(p);
        auto a = artin_conductor(factor(P(F, "x^2 - " + std::to_string(p))));
        CHECK(a.art == 1);
        CHECK(a.torus_def == 1);
        CHECK(a.swan == 0);
    }
    auto w = artin_conductor(factor(P(Q2, "x^2 - 2")));
    CHECK(w.art == 3);
    CHECK(w.torus_def == 1);
    CHECK(w.swan == 2);
}

TEST_CASE("compute_invariants: known classes") {
    LocalField Q2 = LocalField::unramified(2), Q3 = LocalField::unramified(3);
    auto a = compute_invariants(P(Q3, "x^2 - 27"));
    CHECK(a.d_lie == 3);
    CHECK(a.art == 1);
    CHECK(*a.dim_lie_pred == 1);
    CHECK(*a.order_index == 1);

    auto pi2 = compute_invariants(M(Q2, "[[0,1],[2,0]]"));
    CHECK(pi2.d_lie == 3);
    CHECK(*pi2.kappa == 1);
    CHECK(*pi2.kappa_def == 1);
    CHECK(*pi2.d_grp == 2);
    CHECK(pi2.art == 3);
    CHECK(*pi2.dim_grp_pred == 0);
    CHECK(pi2.flags.bounded_mod_center);
    CHECK_FALSE(pi2.flags.group_bounded);
    CHECK(pi2.flags.top_unipotent_adjoint);
    CHECK_FALSE(pi2.flags.strongly_top_unipotent_adjoint);
    CHECK(pi2.flags.top_nilpotent);

    auto c = compute_invariants(P(Q3, "x^3 - 3"));
    CHECK(c.d_lie == 5);
    CHECK(*c.d_grp == 3);
    CHECK(*c.kappa_def == 2);
    CHECK(c.art == 5);
    CHECK(*c.dim_grp_pred == 0);

    auto d = compute_invariants(P(Q2, "x^3 - 4"));
    CHECK(d.d_lie == 4);
    CHECK(d.art == 2);
    CHECK(*d.dim_lie_pred == 1);

    auto e = compute_invariants(P(Q2, "x^2 - 8"));
    CHECK(e.d_lie == 5);
    CHECK(e.art == 3);
    CHECK(*e.dim_lie_pred == 1);

    auto s = compute_invariants(P(Q3, "x^2 - 1"));
    CHECK(s.art == 0);
    CHECK(*s.dim_lie_pred == 0);
    CHECK(s.flags.group_bounded);

    auto dg = compute_invariants(Mat::from_ints(Q3, {{1, 0}, {0, 10}}, Q3.max_precision()));
    CHECK(*dg.dim_lie_pred == 2);  // val(1 - 10) = 2
    CHECK(dg.flags.top_unipotent);
    CHECK(dg.flags.strongly_top_unipotent);

    auto u = compute_invariants(P(Q3, "x^2 - 1/3"));
    CHECK_FALSE(u.flags.bounded);
    CHECK(u.lie_status == "nonempty fails: unbounded");
    CHECK(u.flags.bounded_mod_center);
    CHECK(u.dim_grp_pred.has_value());

    auto j = to_json(pi2);
    CHECK(j["kappa"] == 1);
    CHECK(j["flags"]["bounded_mod_center"] == true);
}

TEST_CASE("conductor identity and prediction integrality on random bounded classes") {
    std::mt19937_64 rng(99);
    int checked = 0;
    for (int trial = 0; trial < 400 && checked < 120; ++trial) {
        int p = std::vector<int>{2, 3, 5}[trial % 3];
        LocalField F = LocalField::unramified(p);
        int n = 2 + static_cast<int>(rng() % 3);
        std::vector<std::int64_t> c(n + 1);
        for (int i = 0; i < n; ++i)
            c[i] = (static_cast<std::int64_t>(rng() % 7) - 3) * ipow(p, static_cast<int>(rng() % 4));
        c[n] = 1;
        ConjugacyInvariants inv;
        try {
            inv = compute_invariants(IntPoly::from_ints(F, c, F.max_precision()), false);
        } catch (const DomainError&) {
            continue;
        }
        ++checked;
        CHECK(inv.d_lie == 2 * *inv.order_index + inv.art);
        CHECK(*inv.dim_lie_pred == *inv.order_index);
        CHECK(inv.art >= inv.torus_def);
        CHECK(inv.torus_def >= 0);
        bool tame = true;
        for (const auto& f : inv.factorization.factors) tame = tame && f.e % p != 0;
        CHECK((inv.swan == 0) == tame);
        if (inv.flags.bounded_mod_center) CHECK(*inv.dim_grp_pred >= 0);
    }
    CHECK(checked >= 100);
}

TEST_CASE("topological Jordan decomposition in the group") {
    LocalField Q3 = LocalField::unramified(3);
    int N = 12;
    auto J = topological_jordan_group(Mat::from_ints(Q3, {{2, 0}, {0, 4}}, Q3.max_precision()), N);
    CHECK(J.all_ok());
    CHECK(J.s.with_prec(N).equals(Mat::from_ints(Q3, {{-1, 0}, {0, 1}}, N)));
    CHECK(J.u.with_prec(N).equals(Mat::from_ints(Q3, {{-2, 0}, {0, 4}}, N)));

    Mat unip = Mat::from_ints(Q3, {{4, 3}, {9, 1}}, Q3.max_precision());
    auto Ju = topological_jordan_group(unip, N);
    CHECK(is_identity(Ju.s, N));

    CHECK_THROWS_AS(topological_jordan_group(M(Q3, "[[0,1],[3,0]]"), N), DomainError);

    std::mt19937_64 rng(3);
    int tested = 0;
    while (tested < 50) {
        int p = tested % 2 ? 3 : 5;
        LocalField F = LocalField::unramified(p);
        int n = 2 + static_cast<int>(rng() % 2);
        Mat g = random_integral(F, n, rng);
        if (!g.det().is_unit()) continue;
        JordanGroup Jg;
        try {
            Jg = topological_jordan_group(g, 8);
        } catch (const DomainError&) {
            continue;
        } catch (const PrecisionError&) {
            continue;  // discriminant too deep for p = 5 capacity
        }
        ++tested;
        CHECK(Jg.all_ok());
        // Idempotence, certified two digits lower since s and u carry the working precision of g.
        auto Js = topological_jordan_group(Jg.s, 6);
        CHECK(Js.s.with_prec(6).equals(Jg.s.with_prec(6)));
        CHECK(is_identity(Js.u, 6));
        auto Jv = topological_jordan_group(Jg.u, 6);
        CHECK(is_identity(Jv.s, 6));
        CHECK(Jv.u.with_prec(6).equals(Jg.u.with_prec(6)));
    }
}

TEST_CASE("topological Jordan decomposition in the Lie algebra") {
    LocalField Q3 = LocalField::unramified(3);
    int N = 12;
    auto J = topological_jordan_lie(Mat::from_ints(Q3, {{4, 0}, {0, 5}}, Q3.max_precision()), N);
    CHECK(J.all_ok());
    CHECK(J.g0.with_prec(N).equals(Mat::from_ints(Q3, {{1, 0}, {0, -1}}, N)));

    auto Jn = topological_jordan_lie(M(Q3, "[[0,1],[3,0]]"), N);
    CHECK(Jn.all_ok());
    CHECK(Jn.g0.with_prec(N).equals(Mat(Q3, 2, 2, N)));

    // Irreducible residue factor: x^2 + 1 over F_3 needs the quadratic cluster limit.
    auto Jq = topological_jordan_lie(kostant_section(P(Q3, "x^2 + 3*x + 1")), N);
    CHECK(Jq.all_ok());
    CHECK(Jq.r == 2);

    std::mt19937_64 rng(8);
    int tested = 0;
    while (tested < 50) {
        int p = tested % 2 ? 3 : 5;
        LocalField F = LocalField::unramified(p);
        Mat g = random_integral(F, 2 + static_cast<int>(rng() % 2), rng);
        JordanLie Jl;
        try {
            Jl = topological_jordan_lie(g, 8);
        } catch (const DomainError&) {
            continue;
        } catch (const PrecisionError&) {
            continue;
        }
        ++tested;
        CHECK(Jl.all_ok());
        if (g.det().is_unit()) {
            auto Jg = topological_jordan_group(g, 8);
            CHECK(Jg.s.with_prec(8).equals(Jl.g0.with_prec(8)));
        }
    }
}

TEST_CASE("quasi-logarithm") {
    LocalField Q2 = LocalField::unramified(2);
    int N = Q2.max_precision();
    CHECK(quasi_log(Mat::identity(Q2, 3, N)).equals(Mat(Q2, 3, 3, N)));
    Mat X = Mat::from_ints(Q2, {{2, 4}, {6, 8}}, N);
    CHECK(quasi_log(Mat::identity(Q2, 2, N) + X).equals(X));

    std::mt19937_64 rng(21);
    int tested = 0;
    while (tested < 50) {
        int p = std::vector<int>{2, 3, 5}[tested % 3];
        LocalField F = LocalField::unramified(p);
        int n = 2 + static_cast<int>(rng() % 2);
        // Strictly upper triangular mod p, then conjugated: topologically nilpotent.
        std::vector<std::vector<std::int64_t>> a(n, std::vector<std::int64_t>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::int64_t r = static_cast<std::int64_t>(rng() % 7) - 3;
                a[i][j] = j > i ? r : p * r;
            }
        Mat Xn = conjugate_random(Mat::from_ints(F, a, F.max_precision()), rng);
        Mat g = Mat::identity(F, n, F.max_precision()) + Xn;
        ConjugacyInvariants ig, il;
        try {
            ig = compute_invariants(g);
            il = compute_invariants(quasi_log(g));
        } catch (const DomainError&) {
            continue;
        }
        ++tested;
        CHECK(ig.flags.strongly_top_unipotent);
        CHECK(il.flags.top_nilpotent);
        CHECK(*ig.d_grp == il.d_lie);
        // Equivariance: Φ(h g h^{-1}) = h Φ(g) h^{-1}.
        Mat h = conjugate_random(Mat::identity(F, n, F.max_precision()), rng);
        CHECK(quasi_log(h * g * h.inverse()).equals(h * quasi_log(g) * h.inverse()));
    }
}

TEST_CASE("descent to the centralizer of the semisimple part") {
    LocalField Q3 = LocalField::unramified(3);
    // Two residue clusters {1, 1+9} and {2}: the cross terms contribute nothing.
    Mat g = Mat::from_ints(Q3, {{1, 0, 0}, {0, 10, 0}, {0, 0, 2}}, Q3.max_precision());
    g = conjugate_random(g, *std::make_unique<std::mt19937_64>(1));
    auto r = hc_descent_invariants(g, 10);
    CHECK(r.ok());
    CHECK(r.clusters == 2);
    CHECK(r.d_grp == 4);

    // Single cluster: reduces to the direct computation.
    auto one = hc_descent_invariants(Mat::from_ints(Q3, {{4, 3}, {9, 1}}, Q3.max_precision()), 10);
    CHECK(one.ok());
    CHECK(one.clusters == 1);

    std::mt19937_64 rng(17);
    int tested = 0;
    while (tested < 30) {
        int p = tested % 2 ? 3 : 5;
        LocalField F = LocalField::unramified(p);
        Mat h = random_integral(F, 2 + static_cast<int>(rng() % 2), rng);
        if (!h.det().is_unit()) continue;
        DescentReport d;
        try {
            d = hc_descent_invariants(h, 8);
        } catch (const DomainError&) {
            continue;
        } catch (const PrecisionError&) {
            continue;
        }
        ++tested;
        CHECK(d.ok());
    }
}
