#include "springerlab/battery.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "springerlab/errors.hpp"
#include "springerlab/invariants.hpp"
#include "springerlab/lattice.hpp"
#include "springerlab/rootdata.hpp"

namespace springerlab {

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Task {
    std::string id;
    std::function<Outcome()> run;
};

std::string pad2(int k) { return (k < 10 ? "0" : "") + std::to_string(k); }

std::string case_id(int criterion, int k, const std::string& label) {
    return "c" + pad2(criterion) + "-" + (k < 100 ? "0" : "") + pad2(k) + "-" + label;
}

Mat parse_mat(int p, const std::string& s) {
    auto F = LocalField::unramified(p);
    return Mat::parse(F, s, F.max_precision());
}

Mat companion(int p, const std::string& f) {
    auto F = LocalField::unramified(p);
    return Mat::companion(IntPoly::parse(F, f, F.max_precision()));
}

std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// U g U^{-1} for a product U of a lower and an upper unitriangular integer matrix.
Mat conjugate_random(const Mat& g, std::mt19937_64& rng) {
    int n = g.rows();
    const LocalField& F = g.field();
    std::vector<std::vector<std::int64_t>> lo(n, std::vector<std::int64_t>(n, 0)), up = lo;
    for (int i = 0; i < n; ++i) {
        lo[i][i] = up[i][i] = 1;
        for (int j = 0; j < i; ++j) {
            lo[i][j] = draw(rng, -2, 2);
            up[j][i] = draw(rng, -2, 2);
        }
    }
    Mat U = Mat::from_ints(F, lo, F.max_precision()) * Mat::from_ints(F, up, F.max_precision());
    return U * g * U.inverse();
}

Mat random_integral(const LocalField& F, int n, std::mt19937_64& rng) {
    std::vector<std::vector<std::int64_t>> a(n, std::vector<std::int64_t>(n));
    for (auto& row : a)
        for (auto& x : row) x = draw(rng, -3, 3) * ipow(F.p(), static_cast<int>(rng() % 3));
    return Mat::from_ints(F, a, F.max_precision());
}

Mat random_unit_det(const LocalField& F, int n, std::mt19937_64& rng) {
    Mat g;
    do g = random_integral(F, n, rng);
    while (!g.det().is_unit());
    return g;
}

// Every eigenvalue has the same valuation: a unit-determinant integral
// matrix, or a conjugated companion of x^n + p(...) + p u, possibly times p.
Mat random_bounded_mod_center(const LocalField& F, int n, std::mt19937_64& rng) {
    int p = F.p();
    Mat g;
    if (rng() % 2 == 0) {
        g = random_unit_det(F, n, rng);
    } else {
        std::vector<std::int64_t> c(n + 1, 0);
        std::int64_t u;
        do u = draw(rng, -4, 4);
        while (u % p == 0);
        c[0] = p * u;
        for (int i = 1; i < n; ++i) c[i] = p * draw(rng, -2, 2);
        c[n] = 1;
        g = conjugate_random(Mat::companion(IntPoly::from_ints(F, c, F.max_precision())), rng);
    }
    return rng() % 2 ? g.scale(PadicElt::from_int(F, p, F.max_precision())) : g;
}

IntPoly random_poly(const LocalField& F, int deg, std::mt19937_64& rng) {
    int p = F.p();
    std::vector<std::int64_t> c(deg + 1, 0);
    bool eisenstein_like = rng() % 3 == 0;
    for (int i = 0; i < deg; ++i) {
        c[i] = draw(rng, -12, 12) * ipow(p, static_cast<int>(rng() % 3));
        if (eisenstein_like) c[i] *= p;
    }
    if (eisenstein_like && c[0] % (p * p) == 0) c[0] += p;
    c[deg] = 1;
    return IntPoly::from_ints(F, c, F.max_precision());
}

std::string fit_detail(const CountProfile& prof) {
    std::ostringstream os;
    os << "counts=";
    for (size_t i = 0; i < prof.counts.size(); ++i) os << (i ? "," : "") << prof.counts[i].second;
    os << " fitted=" << (prof.fitted_dim ? std::to_string(*prof.fitted_dim) : "none")
       << " pred=" << (prof.predicted_dim ? std::to_string(*prof.predicted_dim) : "none") << " spread=" << prof.spread
       << " verdict=" << prof.verdict;
    return os.str();
}

// ---------------------------------------------------------------------------

std::vector<Task> conductor_identity_tasks(std::uint64_t seed) {
    std::vector<Task> tasks;
    struct Fixed {
        int p;
        std::string f;
    };
    std::vector<Fixed> fixed = {{2, "x^2 - 2"},  {3, "x^3 - 3"},      {2, "x^2 - 8"},  {3, "x^2 - 27"},
                                {5, "x^2 - 5"},  {2, "x^4 - 2"},      {3, "x^3 - 6"},  {5, "x^4 + 5*x + 5"},
                                {2, "x^3 - 2"},  {2, "x^2 + x + 1"}};
    int k = 0;
    for (const auto& c : fixed) {
        tasks.push_back({case_id(1, k++, "p" + std::to_string(c.p) + "-fixed"), [c] {
                             auto F = LocalField::unramified(c.p);
                             auto inv = compute_invariants(IntPoly::parse(F, c.f, F.max_precision()));
                             int rhs = 2 * *inv.order_index + inv.art;
                             return Outcome{inv.d_lie == rhs, c.f + ": d_lie=" + std::to_string(inv.d_lie) +
                                                                   " 2*index+art=" + std::to_string(rhs)};
                         }});
    }
    std::mt19937_64 rng(seed ^ 0x1111);
    for (int p : {2, 3, 5})
        for (int i = 0; i < 20; ++i) {
            std::uint64_t s = rng();
            int deg = 2 + i % 3;
            tasks.push_back({case_id(1, k++, "p" + std::to_string(p) + "-random"), [p, deg, s] {
                                 std::mt19937_64 r(s);
                                 auto F = LocalField::unramified(p);
                                 for (int attempt = 0; attempt < 100; ++attempt) {
                                     IntPoly f = random_poly(F, deg, r);
                                     ConjugacyInvariants inv;
                                     try {
                                         inv = compute_invariants(f);
                                     } catch (const DomainError&) {
                                         continue;  // repeated root
                                     } catch (const PrecisionError&) {
                                         continue;
                                     }
                                     int rhs = 2 * *inv.order_index + inv.art;
                                     return Outcome{inv.d_lie == rhs, f.to_string() + ": d_lie=" + std::to_string(inv.d_lie) +
                                                                          " 2*index+art=" + std::to_string(rhs)};
                                 }
                                 return Outcome{false, "no squarefree polynomial drawn"};
                             }});
        }
    return tasks;
}

std::vector<Task> route_agreement_tasks(std::uint64_t seed) {
    std::vector<Task> tasks;
    std::mt19937_64 rng(seed ^ 0x2222);
    for (int i = 0; i < 200; ++i) {
        int p = std::vector<int>{2, 3, 5}[i % 3];
        int n = 2 + (i / 3) % 2;
        std::uint64_t s = rng();
        tasks.push_back({case_id(2, i, "p" + std::to_string(p) + "-n" + std::to_string(n)), [p, n, s] {
                             std::mt19937_64 r(s);
                             auto F = LocalField::unramified(p);
                             for (int attempt = 0; attempt < 100; ++attempt) {
                                 Mat g = random_bounded_mod_center(F, n, r);
                                 DiscriminantValuations dv;
                                 try {
                                     dv = discriminant_valuations(g, true);
                                 } catch (const DomainError&) {
                                     continue;
                                 } catch (const PrecisionError&) {
                                     continue;
                                 } catch (const std::logic_error& e) {
                                     return Outcome{false, g.to_string() + ": " + e.what()};
                                 }
                                 int kappa = kottwitz(g);
                                 int closed = dv.d_lie - (n - 1) * kappa;
                                 bool ok = dv.d_grp_adjoint && *dv.d_grp_adjoint == closed;
                                 return Outcome{ok, g.to_string() + ": adjoint=" +
                                                        (dv.d_grp_adjoint ? std::to_string(*dv.d_grp_adjoint) : "none") +
                                                        " closed=" + std::to_string(closed)};
                             }
                             return Outcome{false, "no regular semisimple matrix drawn"};
                         }});
    }
    return tasks;
}

Outcome lie_fit(const Mat& g, int M) {
    auto inv = compute_invariants(g);
    if (!inv.dim_lie_pred) return {false, "no prediction: " + inv.lie_status};
    FiberSpec s;
    s.kind = FiberSpec::Kind::lie;
    s.gamma = g;
    s.window = default_window(*inv.dim_lie_pred);
    auto prof = count_profile(s, M, inv.dim_lie_pred);
    bool ok = prof.verdict == "match" && prof.spread <= kSpreadGate;
    return {ok, fit_detail(prof) + " N=" + std::to_string(s.window)};
}

std::vector<Task> lie_dimension_tasks() {
    struct C {
        int p;
        std::string label, mat;
        bool poly;
    };
    std::vector<C> cases = {
        {2, "split-v0", "[[0,0],[0,1]]", false},   {2, "split-v1", "[[0,0],[0,2]]", false},
        {2, "split-v2", "[[0,0],[0,4]]", false},   {3, "split-v0", "[[0,0],[0,1]]", false},
        {3, "split-v1", "[[0,0],[0,3]]", false},   {3, "split-v2", "[[0,0],[0,9]]", false},
        {3, "x2-p", "x^2 - 3", true},              {3, "x2-p3", "x^2 - 27", true},
        {2, "x2-p3", "x^2 - 8", true},             {2, "wild-x2-2", "x^2 - 2", true},
        {2, "wild-x2-32", "x^2 - 32", true},      {2, "n3-tame-x3-4", "x^3 - 4", true},
        {3, "n3-split", "[[0,0,0],[0,1,0],[0,0,3]]", false},
    };
    std::vector<Task> tasks;
    int k = 0;
    for (const auto& c : cases)
        tasks.push_back({case_id(3, k++, "q" + std::to_string(c.p) + "-" + c.label), [c] {
                             Mat g = c.poly ? companion(c.p, c.mat) : parse_mat(c.p, c.mat);
                             return lie_fit(g, 4);
                         }});
    return tasks;
}

std::vector<Task> iwahori_group_tasks() {
    struct C {
        int p;
        std::string label, mat;
        int M;
    };
    std::vector<C> cases = {
        {2, "Pi2", "[[0,1],[2,0]]", 4},
        {2, "x2-2u-u3", "[[0,6],[1,0]]", 4},
        {2, "x2-2u-u5", "[[0,10],[1,0]]", 4},
        {3, "x3-3", "[[0,0,3],[1,0,0],[0,1,0]]", 3},
    };
    std::vector<Task> tasks;
    int k = 0;
    for (const auto& c : cases)
        tasks.push_back({case_id(4, k++, c.label), [c] {
                             Mat g = parse_mat(c.p, c.mat);
                             auto inv = compute_invariants(g);
                             if (!inv.dim_grp_pred || !inv.kappa) return Outcome{false, "no prediction: " + inv.grp_status};
                             int formula = (*inv.d_grp + *inv.kappa_def - inv.art) / 2;
                             FiberSpec s;
                             s.kind = FiberSpec::Kind::group;
                             s.level = Level::iwahori;
                             s.gamma = g;
                             s.coset = *inv.kappa;
                             s.window = default_window(*inv.dim_grp_pred);
                             auto prof = count_profile(s, c.M, inv.dim_grp_pred);
                             bool ok = prof.verdict == "match" && formula == 0 && *prof.fitted_dim == 0 &&
                                       !inv.flags.strongly_top_unipotent;
                             return Outcome{ok, fit_detail(prof) + " formula=" + std::to_string(formula)};
                         }});
    return tasks;
}

std::vector<Task> nonemptiness_tasks() {
    struct C {
        int p;
        std::string label, mat;
        Level level;
        int a;
    };
    std::vector<C> cases = {
        {2, "Pi2-hs-a1", "[[0,1],[2,0]]", Level::hyperspecial, 1},
        {2, "Pi2-iw-a1", "[[0,1],[2,0]]", Level::iwahori, 1},
        {2, "Pi2-iw-a0", "[[0,1],[2,0]]", Level::iwahori, 0},
        {3, "diag1-9-hs-a2", "[[1,0],[0,9]]", Level::hyperspecial, 2},
        {3, "diag1-9-iw-a2", "[[1,0],[0,9]]", Level::iwahori, 2},
        {3, "x2-9-hs-a2", "[[0,9],[1,0]]", Level::hyperspecial, 2},
        {3, "diag1-3-iw-a1", "[[1,0],[0,3]]", Level::iwahori, 1},
        {3, "x2-3-hs-a1", "[[0,3],[1,0]]", Level::hyperspecial, 1},
        {3, "x2-3-iw-a1", "[[0,3],[1,0]]", Level::iwahori, 1},
        {2, "x3-2-hs-a1", "[[0,0,2],[1,0,0],[0,1,0]]", Level::hyperspecial, 1},
        {2, "x3-2-iw-a1", "[[0,0,2],[1,0,0],[0,1,0]]", Level::iwahori, 1},
        {2, "x3-4-iw-a2", "[[0,0,4],[1,0,0],[0,1,0]]", Level::iwahori, 2},
    };
    std::vector<Task> tasks;
    int k = 0;
    for (const auto& c : cases)
        tasks.push_back({case_id(5, k++, c.label), [c] {
                             Mat g = parse_mat(c.p, c.mat);
                             int n = g.rows();
                             auto inv = compute_invariants(g);
                             bool predicted = inv.kappa && *inv.kappa == c.a && inv.flags.bounded_mod_center &&
                                              (c.level == Level::iwahori || c.a % n == 0);
                             FiberSpec s;
                             s.kind = FiberSpec::Kind::group;
                             s.level = c.level;
                             s.gamma = g;
                             s.coset = c.a;
                             s.window = 3;
                             auto res = enumerate_fiber(s, 1);
                             bool nonempty = !res.points.empty();
                             return Outcome{predicted == nonempty,
                                            std::string("criterion=") + (predicted ? "nonempty" : "empty") +
                                                " points=" + std::to_string(res.points.size()) +
                                                " diagnosis=" + res.diagnosis.value_or("-")};
                         }});
    return tasks;
}

std::vector<Task> jordan_tasks(std::uint64_t seed) {
    std::vector<Task> tasks;
    std::mt19937_64 rng(seed ^ 0x6666);
    for (int i = 0; i < 50; ++i) {
        int p = i % 2 ? 5 : 3;
        int n = 2 + (i / 2) % 2;
        std::uint64_t s = rng();
        tasks.push_back({case_id(6, i, "p" + std::to_string(p) + "-n" + std::to_string(n)), [p, n, s] {
                             std::mt19937_64 r(s);
                             auto F = LocalField::unramified(p);
                             const int N = 8;
                             for (int attempt = 0; attempt < 100; ++attempt) {
                                 Mat g = random_unit_det(F, n, r);
                                 try {
                                     compute_invariants(g, false);
                                 } catch (const DomainError&) {
                                     continue;
                                 } catch (const PrecisionError&) {
                                     continue;
                                 }
                                 auto jg = topological_jordan_group(g, N);
                                 auto jl = topological_jordan_lie(g, N);
                                 std::string d = g.to_string() + " group(product,unipotent,semisimple)=" +
                                                 std::to_string(jg.product_ok) + std::to_string(jg.unipotent_ok) +
                                                 std::to_string(jg.semisimple_ok) + " lie(commute,nilpotent,semisimple)=" +
                                                 std::to_string(jl.commute_ok) + std::to_string(jl.nilpotent_ok) +
                                                 std::to_string(jl.semisimple_ok);
                                 return Outcome{jg.all_ok() && jl.all_ok(), d};
                             }
                             return Outcome{false, "no regular semisimple matrix drawn"};
                         }});
    }
    return tasks;
}

std::vector<Task> quasi_log_tasks(std::uint64_t seed) {
    std::vector<Task> tasks;
    std::mt19937_64 rng(seed ^ 0x7777);
    for (int i = 0; i < 10; ++i) {
        int p = i % 2 ? 3 : 2;
        std::uint64_t s = rng();
        tasks.push_back({case_id(7, i, "q" + std::to_string(p)), [p, s] {
                             std::mt19937_64 r(s);
                             auto F = LocalField::unramified(p);
                             for (int attempt = 0; attempt < 200; ++attempt) {
                                 // Id + X with X integral and X^2 = 0 mod p, conjugated.
                                 std::int64_t a = draw(r, -2, 2), b = draw(r, -3, 3), c = draw(r, -2, 2),
                                              d = draw(r, -2, 2);
                                 Mat X = Mat::from_ints(F, {{p * a, b}, {p * c, p * d}}, F.max_precision());
                                 Mat g = conjugate_random(X, r) + Mat::identity(F, 2, F.max_precision());
                                 ConjugacyInvariants inv;
                                 try {
                                     inv = compute_invariants(g);
                                 } catch (const DomainError&) {
                                     continue;
                                 } catch (const PrecisionError&) {
                                     continue;
                                 }
                                 if (!inv.flags.strongly_top_unipotent || !inv.dim_lie_pred || *inv.dim_lie_pred > 2) continue;
                                 int W = default_window(*inv.dim_lie_pred);
                                 auto hs = quasi_log_fiber_equality(g, Level::hyperspecial, W, 1);
                                 auto iw = quasi_log_fiber_equality(g, Level::iwahori, W, 1);
                                 bool ok = hs.sets_equal && iw.sets_equal && hs.group_points > 0 &&
                                           hs.d_grp == hs.d_lie_of_log;
                                 return Outcome{ok, g.to_string() + " hyperspecial=" + std::to_string(hs.group_points) +
                                                        "/" + std::to_string(hs.lie_points) +
                                                        " iwahori=" + std::to_string(iw.group_points) + "/" +
                                                        std::to_string(iw.lie_points) + " d_G=" + std::to_string(hs.d_grp) +
                                                        " d_g(log)=" + std::to_string(hs.d_lie_of_log)};
                             }
                             return Outcome{false, "no strongly topologically unipotent case drawn"};
                         }});
    }
    return tasks;
}

std::vector<Task> regular_orbital_tasks() {
    struct C {
        int p;
        std::string label, f;
    };
    std::vector<C> maximal = {
        {2, "x2-2", "x^2 - 2"},     {3, "x2-3", "x^2 - 3"},         {2, "x2-6", "x^2 - 6"},
        {2, "x2+x+1", "x^2 + x + 1"}, {3, "x2+1", "x^2 + 1"},       {3, "x3-3", "x^3 - 3"},
        {2, "x3-2", "x^3 - 2"},     {5, "x2-5", "x^2 - 5"},
    };
    std::vector<Task> tasks;
    int k = 0;
    for (const auto& c : maximal)
        tasks.push_back({case_id(8, k++, c.label), [c] {
                             Mat g = companion(c.p, c.f);
                             auto inv = compute_invariants(g);
                             if (!inv.order_index || *inv.order_index != 0) return Outcome{false, "not a maximal order"};
                             const int N = 4;
                             auto reg = regular_locus_check(g, N);
                             auto orb = orbital_integral(g, N);
                             bool ok = reg.regular == reg.total && reg.transitive() && reg.total > 0 &&
                                       orb.value_string() == "1" && orb.classes_integral();
                             return Outcome{ok, "points=" + std::to_string(reg.total) + " regular=" +
                                                    std::to_string(reg.regular) + " reached=" + std::to_string(reg.reached) +
                                                    " orbital=" + orb.value_string()};
                         }});
    tasks.push_back({case_id(8, k++, "x2-p3-window"), [] {
                         Mat g = companion(3, "x^2 - 27");
                         auto a = orbital_integral(g, 6), b = orbital_integral(g, 8);
                         bool ok = a.value_string() == b.value_string() && a.classes_num == b.classes_num &&
                                   a.classes_den == b.classes_den && a.classes_integral();
                         return Outcome{ok, "N=6: " + a.value_string() + " N=8: " + b.value_string() +
                                                " classes=" + std::to_string(a.classes_num)};
                     }});
    return tasks;
}

std::vector<Task> levi_tasks() {
    struct C {
        int p;
        std::string label, mat;
        int M;
    };
    std::vector<C> cases = {
        {3, "diag-1-4", "[[1,0],[0,4]]", 3},
        {3, "diag-1-10", "[[1,0],[0,10]]", 3},
        {2, "diag-1-3", "[[1,0],[0,3]]", 3},
        {5, "diag-1-6-2", "[[1,0,0],[0,6,0],[0,0,2]]", 2},
        {3, "diag-1-4-10", "[[1,0,0],[0,4,0],[0,0,10]]", 2},
    };
    std::vector<Task> tasks;
    int k = 0;
    for (const auto& c : cases)
        tasks.push_back({case_id(9, k++, c.label), [c] {
                             auto rep = levi_reduction_check(parse_mat(c.p, c.mat), c.M);
                             return Outcome{rep.ok(), fit_detail(rep.profile) + " r_N=" + std::to_string(rep.r_n) +
                                                          " d_G/2=" + std::to_string(rep.half_d_grp)};
                         }});
    return tasks;
}

std::vector<Task> table_tasks() {
    std::vector<Task> tasks;
    // Expected entries, transcribed per band of the classification.
    tasks.push_back({case_id(10, 0, "bands"), [] {
                         struct Band {
                             std::string type;
                             std::vector<int> bad, torsion;
                             std::string pi1;
                         };
                         std::vector<Band> bands = {
                             {"A1", {}, {}, "Z/2"},          {"A7", {}, {}, "Z/8"},
                             {"B2", {2}, {}, "Z/2"},         {"B3", {2}, {2}, "Z/2"},
                             {"C3", {2}, {}, "Z/2"},         {"C6", {2}, {}, "Z/2"},
                             {"D4", {2}, {2}, "Z/2 x Z/2"},  {"D5", {2}, {2}, "Z/4"},
                             {"E6", {2, 3}, {2, 3}, "Z/3"},  {"E7", {2, 3}, {2, 3}, "Z/2"},
                             {"E8", {2, 3, 5}, {2, 3, 5}, "0"}, {"F4", {2, 3}, {2, 3}, "0"},
                             {"G2", {2, 3}, {2}, "0"},
                         };
                         std::string bad;
                         for (const auto& b : bands) {
                             auto t = RootType::parse(b.type);
                             if (bad_primes(t) != b.bad || torsion_primes(t) != b.torsion ||
                                 pi1_adjoint(t).to_string() != b.pi1)
                                 bad += b.type + " ";
                         }
                         return Outcome{bad.empty(), bad.empty() ? "13 bands match" : "mismatch: " + bad};
                     }});
    tasks.push_back({case_id(10, 1, "torsion-in-bad"), [] {
                         int count = 0;
                         for (const auto& t : all_types(32)) {
                             auto b = bad_primes(t);
                             for (int p : torsion_primes(t))
                                 if (std::find(b.begin(), b.end(), p) == b.end())
                                     return Outcome{false, t.name() + ": torsion prime " + std::to_string(p) + " not bad"};
                             for (int p : b)
                                 if (weyl_order(t) % static_cast<std::uint64_t>(p) != 0)
                                     return Outcome{false, t.name() + ": bad prime does not divide |W|"};
                             ++count;
                         }
                         return Outcome{true, std::to_string(count) + " descriptors checked"};
                     }});
    tasks.push_back({case_id(10, 2, "datum-torsion"), [] {
                         bool ok = torsion_for_datum(2, RootType::parse("PGL2")) &&
                                   !torsion_for_datum(3, RootType::parse("SL3")) &&
                                   torsion_for_datum(3, RootType::parse("PGL3")) && is_good(7, RootType::parse("E8"));
                         return Outcome{ok, "PGL2@2, SL3@3, PGL3@3, E8@7"};
                     }});
    return tasks;
}

struct CriterionDef {
    int id;
    std::string title;
    int required;
    double budget;
};

const std::vector<CriterionDef>& criterion_defs() {
    static const std::vector<CriterionDef> defs = {
        {1, "conductor identity", 60, 30},
        {2, "discriminant route agreement", 200, 60},
        {3, "Lie dimension vs enumeration", 12, 1800},
        {4, "Iwahori group fiber at p | n", 3, 300},
        {5, "nonemptiness criterion", 10, 120},
        {6, "topological Jordan certificates", 50, 60},
        {7, "quasi-log fiber equality", 10, 300},
        {8, "regular locus and orbital normalization", 2, 300},
        {9, "Levi reduction", 5, 300},
        {10, "static root tables", 3, 1},
    };
    return defs;
}

std::vector<Task> tasks_for(int criterion, std::uint64_t seed) {
    switch (criterion) {
        case 1: return conductor_identity_tasks(seed);
        case 2: return route_agreement_tasks(seed);
        case 3: return lie_dimension_tasks();
        case 4: return iwahori_group_tasks();
        case 5: return nonemptiness_tasks();
        case 6: return jordan_tasks(seed);
        case 7: return quasi_log_tasks(seed);
        case 8: return regular_orbital_tasks();
        case 9: return levi_tasks();
        case 10: return table_tasks();
    }
    return {};
}

CaseResult run_task(const Task& t, int criterion) {
    CaseResult r;
    r.id = t.id;
    r.criterion = criterion;
    auto start = Clock::now();
    try {
        Outcome o = t.run();
        r.pass = o.pass;
        r.detail = o.detail;
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return r;
}

}  // namespace

BatteryReport run_battery(const BatteryOptions& opt) {
    BatteryReport rep;
    for (const auto& def : criterion_defs()) {
        if (!opt.criteria.empty() && !opt.criteria.count(def.id)) continue;
        auto tasks = tasks_for(def.id, opt.seed);
        std::vector<CaseResult> rows(tasks.size());
        auto start = Clock::now();
        int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(tasks.size())));
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t i; (i = next.fetch_add(1)) < tasks.size();) rows[i] = run_task(tasks[i], def.id);
        };
        std::vector<std::thread> pool;
        for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
        CriterionSummary s;
        s.criterion = def.id;
        s.title = def.title;
        s.required_cases = def.required;
        s.budget = def.budget;
        s.cases = static_cast<int>(rows.size());
        s.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        for (const auto& r : rows) s.failed += r.pass ? 0 : 1;
        rep.criteria.push_back(s);
        rep.cases.insert(rep.cases.end(), rows.begin(), rows.end());
    }
    std::sort(rep.cases.begin(), rep.cases.end(), [](const CaseResult& a, const CaseResult& b) { return a.id < b.id; });
    return rep;
}

std::string battery_tsv(const std::vector<CaseResult>& rows) {
    std::string out = "case\tcriterion\tverdict\tdetail\n";
    for (const auto& r : rows) {
        std::string detail = r.detail;
        std::replace(detail.begin(), detail.end(), '\t', ' ');
        std::replace(detail.begin(), detail.end(), '\n', ' ');
        out += r.id + "\t" + std::to_string(r.criterion) + "\t" + (r.pass ? "pass" : "fail") + "\t" + detail + "\n";
    }
    return out;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
    const char* s = std::getenv("SPRINGERLAB_SEED");
    if (!s || !*s) return fallback;
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        return fallback;
    }
}

}  // namespace springerlab
