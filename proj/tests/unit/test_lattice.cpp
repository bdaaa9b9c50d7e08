#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "springerlab/errors.hpp"
#include "springerlab/invariants.hpp"
#include "springerlab/lattice.hpp"

using namespace springerlab;

namespace {

Mat M(const LocalField& F, const std::string& s) { return Mat::parse(F, s, F.max_precision()); }
Mat C(const LocalField& F, const std::string& s) { return Mat::companion(IntPoly::parse(F, s, F.max_precision())); }

std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

using Elem = std::pair<std::int64_t, std::int64_t>;
using ElemSet = std::set<Elem>;

// Subgroup of (Z/p^N)^2 generated by the given elements.
ElemSet closure(const std::vector<Elem>& gens, std::int64_t mod) {
    ElemSet s = {{0, 0}};
    std::vector<Elem> frontier = {{0, 0}};
    while (!frontier.empty()) {
        std::vector<Elem> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                Elem y = {(x.first + g.first) % mod, (x.second + g.second) % mod};
                if (s.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    return s;
}

std::int64_t to_mod(const PadicElt& x, std::int64_t mod, int N) {
    if (x.is_zero() || x.val_or_prec() >= N) return 0;
    auto v = x.with_prec(N).to_balanced_int();
    REQUIRE(v.has_value());
    return ((*v % mod) + mod) % mod;
}

ElemSet lattice_elements(const Lattice& L, int p, int N) {
    std::int64_t mod = ipow(p, N);
    std::vector<Elem> gens;
    for (const auto& c : L.basis()) gens.push_back({to_mod(c[0], mod, N), to_mod(c[1], mod, N)});
    return closure(gens, mod);
}

// Independent oracle: every T-stable subgroup of (Z/p^N)^2 not inside p(Z/p^N)^2.
std::set<ElemSet> naive_stable_lattices(int p, int N, const std::vector<std::vector<std::int64_t>>& T) {
    std::int64_t mod = ipow(p, N);
    std::vector<Elem> all;
    for (std::int64_t a = 0; a < mod; ++a)
        for (std::int64_t b = 0; b < mod; ++b) all.push_back({a, b});
    std::set<ElemSet> seen, out;
    for (const auto& u : all)
        for (const auto& v : all) {
            ElemSet S = closure({u, v}, mod);
            if (!seen.insert(S).second) continue;
            bool stable = true, primitive = false;
            for (const auto& x : S) {
                Elem y = {(((T[0][0] * x.first + T[0][1] * x.second) % mod) + mod) % mod,
                          (((T[1][0] * x.first + T[1][1] * x.second) % mod) + mod) % mod};
                if (!S.count(y)) stable = false;
                if (x.first % p || x.second % p) primitive = true;
            }
            // Every lattice between p^N O^2 and O^2 has full image here.
            if (stable && primitive) out.insert(S);
        }
    return out;
}

}  // namespace

TEST_CASE("lattice normal form is canonical") {
    auto F = LocalField::unramified(3);
    std::mt19937_64 rng(7);
    for (int t = 0; t < 100; ++t) {
        std::vector<std::vector<std::int64_t>> a(2, std::vector<std::int64_t>(2)), u = {{1, 0}, {0, 1}};
        do
            for (auto& r : a)
                for (auto& x : r) x = static_cast<std::int64_t>(rng() % 19) - 9;
        while (a[0][0] * a[1][1] == a[0][1] * a[1][0]);
        u[0][1] = static_cast<std::int64_t>(rng() % 7) - 3;
        u[1][0] = static_cast<std::int64_t>(rng() % 5) - 2;
        u[1][1] += u[0][1] * u[1][0];  // det u = 1
        Mat A = Mat::from_ints(F, a, F.max_precision());
        Mat U = Mat::from_ints(F, u, F.max_precision());
        Lattice L = Lattice::from_columns(A), L2 = Lattice::from_columns(A * U);
        CHECK(L == L2);
        CHECK(L.contains(L2));
        CHECK(L.scaled(1) != L);
        CHECK(L.contains(L.scaled(1)));
        CHECK_FALSE(L.scaled(1).contains(L));
        CHECK(L.colength() == *A.det().val());
    }
}

TEST_CASE("stable subspaces and flags over a residue field") {
    for (int p : {2, 3}) {
        const ResidueField& R = ResidueField::get(p, 1);
        FqMatrix Z(2, 2);
        CHECK(stable_subspaces(R, Z).size() == static_cast<size_t>(p + 3));
        CHECK(stable_flags(R, Z).size() == static_cast<size_t>(p + 1));
        FqMatrix Z3(3, 3);
        CHECK(stable_flags(R, Z3).size() == static_cast<size_t>((p * p + p + 1) * (p + 1)));
        CHECK(stable_subspaces(R, Z3).size() == static_cast<size_t>(2 * (p * p + p + 1) + 2));
        FqMatrix J(2, 2);
        J.at(0, 1) = 1;  // one Jordan block: a single stable line
        CHECK(stable_subspaces(R, J).size() == 3u);
        CHECK(stable_flags(R, J).size() == 1u);
    }
    const ResidueField& R2 = ResidueField::get(2, 1);
    FqMatrix irr(2, 2);  // companion of x^2 + x + 1
    irr.at(0, 1) = 1;
    irr.at(1, 0) = 1;
    irr.at(1, 1) = 1;
    CHECK(stable_subspaces(R2, irr).size() == 2u);
    CHECK(stable_flags(R2, irr).empty());
}

TEST_CASE("stable lattice search agrees with subgroup enumeration") {
    struct Case {
        int p, N;
        std::vector<std::vector<std::int64_t>> T;
    };
    std::vector<Case> cases = {
        {2, 2, {{0, 0}, {0, 0}}}, {2, 3, {{0, 1}, {2, 0}}}, {2, 3, {{1, 1}, {0, 1}}}, {2, 3, {{0, 1}, {1, 1}}},
        {2, 3, {{1, 0}, {0, 3}}}, {3, 2, {{0, 0}, {0, 0}}}, {3, 2, {{0, 1}, {3, 0}}}, {3, 2, {{1, 0}, {0, 4}}},
        {3, 2, {{0, 1}, {9, 0}}}, {2, 3, {{0, 1}, {4, 0}}}, {2, 3, {{0, 1}, {8, 0}}},
    };
    for (const auto& c : cases) {
        CAPTURE(c.p);
        CAPTURE(c.N);
        auto F = LocalField::unramified(c.p);
        Mat T = Mat::from_ints(F, c.T, F.max_precision());
        std::set<ElemSet> got;
        auto lats = stable_lattices(T, c.N, 2);
        for (const auto& L : lats) {
            CHECK(L.is_primitive());
            CHECK(L.stable_under(T));
            got.insert(lattice_elements(L, c.p, c.N));
        }
        CHECK(got.size() == lats.size());
        CHECK(got == naive_stable_lattices(c.p, c.N, c.T));
        // Threaded and serial searches agree.
        CHECK(stable_lattices(T, c.N, 1) == lats);
    }
    auto F = LocalField::unramified(5);
    CHECK(stable_lattices(Mat::identity(F, 1, F.max_precision()), 6).size() == 1u);
}

TEST_CASE("window monotonicity") {
    auto F = LocalField::unramified(3);
    Mat g = C(F, "x^2 - 27");
    auto a = stable_lattices(g, 4), b = stable_lattices(g, 6);
    for (const auto& L : a) CHECK(std::binary_search(b.begin(), b.end(), L));
}

TEST_CASE("integral frame") {
    auto F = LocalField::unramified(2);
    Mat g = M(F, "[[0, 1/2], [4, 0]]");  // charpoly x^2 - 2
    Mat B = integral_frame(g);
    CHECK((B.inverse() * g * B).is_integral());
    CHECK_THROWS_AS(integral_frame(M(F, "[[1/2, 0], [0, 1]]")), DomainError);
    Mat id = integral_frame(M(F, "[[0, 1], [2, 0]]"));
    CHECK(id.equals(Mat::identity(F, 2, F.max_precision())));
}

TEST_CASE("Lie fiber count profiles") {
    struct Case {
        int p;
        std::string f;
        std::vector<std::int64_t> counts;
        int dim;
    };
    // Frozen from the stable lattice search, which is checked against subgroup enumeration above.
    std::vector<Case> cases = {
        {3, "x^2 - 27", {8, 20, 56, 164}, 1},
        {2, "x^2 - 8", {6, 10, 18, 34}, 1},
        {3, "x^2 - 3", {2, 2, 2, 2}, 0},
        {2, "x^2 - 2", {2, 2, 2, 2}, 0},
        {3, "x^2 - 1", {9, 9, 9, 9}, 0},
    };
    for (const auto& c : cases) {
        CAPTURE(c.f);
        auto F = LocalField::unramified(c.p);
        FiberSpec s;
        s.gamma = C(F, c.f);
        auto inv = compute_invariants(s.gamma);
        REQUIRE(inv.dim_lie_pred);
        CHECK(*inv.dim_lie_pred == c.dim);
        s.window = default_window(c.dim);
        auto prof = count_profile(s, 4, inv.dim_lie_pred, 4);
        for (int m = 0; m < 4; ++m) CHECK(prof.counts[m].second == c.counts[m]);
        CHECK(prof.verdict == "match");
        CHECK(prof.spread <= kSpreadGate);
    }
    auto F = LocalField::unramified(3);
    CHECK_THROWS_AS(enumerate_lie_fiber(C(F, "x^2 - 27"), 3, 1), DomainError);
    CHECK_NOTHROW(enumerate_lie_fiber(C(F, "x^2 - 27"), 4, 1));
    auto un = enumerate_lie_fiber(M(F, "[[1/3, 0], [0, 1]]"), 4, 1);
    CHECK(un.points.empty());
    CHECK(un.diagnosis == std::optional<std::string>("nonempty fails: unbounded"));
}

TEST_CASE("dimension fit gate") {
    CountProfile p;
    p.q = 3;
    p.predicted_dim = 1;
    p.counts = {{1, 3}, {2, 9}, {3, 27}};
    fit_dimension(p);
    CHECK(p.verdict == "match");
    p.counts = {{1, 1}, {2, 9}, {3, 27}};
    fit_dimension(p);
    CHECK(p.verdict == "ambiguous");
    CHECK_FALSE(p.fitted_dim);
    p.counts = {{1, 1}, {2, 0}};
    fit_dimension(p);
    CHECK(p.verdict == "empty");
    p.counts = {{1, 1}, {2, 1}};
    fit_dimension(p);
    CHECK(p.verdict == "mismatch");
    p.predicted_dim.reset();
    fit_dimension(p);
    CHECK(p.verdict == "unpredicted");
}

TEST_CASE("group fibers and nonemptiness diagnoses") {
    auto F2 = LocalField::unramified(2), F3 = LocalField::unramified(3);
    Mat pi2 = M(F2, "[[0, 1], [2, 0]]");
    auto iw = enumerate_group_fiber(pi2, Level::iwahori, 1, 4, 1);
    CHECK_FALSE(iw.diagnosis);
    CHECK(iw.points.size() == 2u);
    for (const auto& pt : iw.points) {
        REQUIRE(pt.chain.size() == 2u);
        CHECK(pt.chain[0].contains(pt.chain[1]));
        CHECK(pt.chain[1].colength() == pt.chain[0].colength() + 1);
        CHECK(pt.chain[0].image(pi2) == pt.chain[1]);
        CHECK(pt.chain[1].image(pi2) == pt.chain[0].scaled(1));
    }
    auto hs = enumerate_group_fiber(pi2, Level::hyperspecial, 1, 3, 1);
    CHECK(hs.points.empty());
    REQUIRE(hs.diagnosis);
    CHECK(hs.diagnosis->find("pi_0") != std::string::npos);
    auto mis = enumerate_group_fiber(pi2, Level::iwahori, 0, 3, 1);
    CHECK(mis.points.empty());
    CHECK(mis.diagnosis->find("coset mismatch") != std::string::npos);
    auto ub = enumerate_group_fiber(M(F3, "[[1, 0], [0, 9]]"), Level::hyperspecial, 2, 3, 1);
    CHECK(ub.points.empty());
    CHECK(*ub.diagnosis == "nonempty fails: not bounded mod center");
    auto ok = enumerate_group_fiber(C(F3, "x^2 - 9"), Level::hyperspecial, 2, 3, 1);
    CHECK_FALSE(ok.diagnosis);
    CHECK_FALSE(ok.points.empty());
    auto n3 = enumerate_group_fiber(C(F3, "x^3 - 3"), Level::iwahori, 1, 4, 1);
    CHECK(n3.points.size() == 3u);
    for (const auto& pt : n3.points) CHECK(pt.chain.size() == 3u);
}

TEST_CASE("regular locus and transitivity") {
    auto F2 = LocalField::unramified(2), F3 = LocalField::unramified(3);
    for (const Mat& g : {C(F3, "x^2 - 3"), C(F2, "x^2 + x + 1"), C(F3, "x^3 - 3"), C(F2, "x^2 - 2")}) {
        auto r = regular_locus_check(g, 6, 1, 2);
        CHECK(r.base_point_regular);
        CHECK(r.total > 0);
        CHECK(r.regular == r.total);
        CHECK(r.transitive());
        CHECK(r.orbits() == 1);
    }
    auto r = regular_locus_check(C(F3, "x^2 - 27"), 6);
    CHECK(r.total == 8);
    CHECK(r.regular < r.total);
    CHECK(r.transitive());
    CHECK_THROWS_AS(regular_locus_check(M(F3, "[[1, 0], [0, 1]]"), 3), DomainError);
}

TEST_CASE("orbital integrals") {
    auto F2 = LocalField::unramified(2), F3 = LocalField::unramified(3);
    for (int N : {6, 8}) {
        auto r = orbital_integral(C(F3, "x^2 - 27"), N, 2);
        CHECK(r.value_string() == "4");
        CHECK(r.classes_integral());
        CHECK(r.classes_num == 2);
        CHECK(r.lattices == 8);
        CHECK(r.e == 2);
    }
    CHECK(orbital_integral(C(F3, "x^2 - 3"), 4).value_string() == "1");
    CHECK(orbital_integral(C(F2, "x^2 + x + 1"), 4).value_string() == "1");
    CHECK(orbital_integral(C(F2, "x^2 - 2"), 4).value_string() == "1");
    CHECK(orbital_integral(C(F3, "x^3 - 3"), 4).value_string() == "1");
    // x^2 + 3 over Q3 generates the maximal order; x^2 + 27 is index 1 inside it.
    CHECK(orbital_integral(C(F3, "x^2 + 3"), 4).value_string() == "1");
    auto r = orbital_integral(C(F3, "x^2 + 27"), 6);
    CHECK(r.classes_integral());
    CHECK_THROWS_AS(orbital_integral(C(F3, "x^2 - 1"), 4), DomainError);

    Mat g = C(F3, "x^2 - 27");
    auto u = multiplier_unit_index(g, Lattice::standard(F3, 2));
    CHECK(u.length == 1);
    CHECK(u.f_order == 1);
    CHECK(u.num == 3);
    CHECK(u.den == 1);
}

TEST_CASE("quasi-logarithm fiber equality") {
    auto F2 = LocalField::unramified(2), F3 = LocalField::unramified(3);
    for (const Mat& g : {C(F2, "x^2 - 2*x - 1"), M(F3, "[[1, 1], [0, 4]]"), C(F3, "x^2 - 2*x - 8"),
                         M(F2, "[[1, 2], [2, 5]]")}) {
        for (Level lv : {Level::hyperspecial, Level::iwahori}) {
            auto q = quasi_log_fiber_equality(g, lv, 4, 1, 2);
            CHECK(q.sets_equal);
            CHECK(q.group_points == q.lie_points);
            CHECK(q.group_points > 0);
        }
        auto q = quasi_log_fiber_equality(g, Level::hyperspecial, 4, 1);
        CHECK(q.d_grp == q.d_lie_of_log);
    }
}

TEST_CASE("Levi transporter counts") {
    auto F3 = LocalField::unramified(3), F5 = LocalField::unramified(5);
    // Brute force over u = [[1, x], [0, 1]] with x in 3^{-2}Z/Z.
    {
        Mat g = M(F3, "[[1, 0], [0, 4]]");
        int hits = 0;
        for (int k = 0; k < 9; ++k) {
            Mat u = Mat::identity(F3, 2, F3.max_precision());
            u.at(0, 1) = PadicElt::from_int(F3, k, F3.max_precision()).shift_pi(-2);
            Mat t = u.inverse() * g * u * g.inverse();
            if (t.is_integral()) ++hits;
        }
        CHECK(levi_transporter_count(g, 2, 1) == hits);
        CHECK(hits == 3);
    }
    struct Case {
        Mat g;
        int r;
        int M;
    };
    std::vector<Case> cases = {
        {M(F3, "[[1, 0], [0, 4]]"), 1, 3},
        {M(F3, "[[1, 0], [0, 10]]"), 2, 3},
        {M(F5, "[[1, 0, 0], [0, 6, 0], [0, 0, 2]]"), 1, 2},
        {M(F3, "[[1, 0, 0], [0, 4, 0], [0, 0, 10]]"), 4, 2},
    };
    for (const auto& c : cases) {
        auto rep = levi_reduction_check(c.g, c.M);
        CHECK(rep.r_n == c.r);
        CHECK(rep.half_d_grp == c.r);
        CHECK(rep.ok());
        CHECK(rep.profile.counts[0].second == ipow(rep.profile.q, c.r));
    }
}

TEST_CASE("TSV rows") {
    auto F = LocalField::unramified(3);
    Lattice L = Lattice::from_columns(M(F, "[[1, 2], [0, 9]]"));
    CHECK(L.to_tsv() == "^0\t0\t^2");
    Lattice L2 = Lattice::from_columns(M(F, "[[9, 5], [0, 1]]"));
    CHECK(L2.to_tsv() == "^2\t2,1\t^0");
}
