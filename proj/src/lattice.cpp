#include "springerlab/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

#include <boost/rational.hpp>

#include "springerlab/errors.hpp"
#include "springerlab/factor.hpp"
#include "springerlab/invariants.hpp"

namespace springerlab {

using Rows = std::vector<std::vector<int>>;
using Rational = boost::rational<std::int64_t>;

// ---------------------------------------------------------------------------
// Lattice

Lattice Lattice::span(const LocalField& F, int n, std::vector<Vec> gens) {
    auto ech = echelon(std::move(gens), n);
    Lattice L;
    L.F_ = F;
    L.n_ = n;
    L.diag_.resize(n);
    for (int j = 0; j < n; ++j) {
        if (ech[j].empty()) throw DomainError("lattice generators do not have full rank");
        L.diag_[j] = *ech[j][j].val();
    }
    L.cols_ = std::move(ech);
    for (int j = 0; j < n; ++j)
        for (int i = j - 1; i >= 0; --i) {
            const int d = L.diag_[i];
            PadicElt x = L.cols_[j][i];
            if (x.prec() < d) throw PrecisionError("lattice entry known below its pivot", 2 * d);
            PadicElt r = x.truncate_digits(d);
            PadicElt c = (x - r).shift_pi(-d);
            for (int k = 0; k < i; ++k) L.cols_[j][k] = L.cols_[j][k] - c * L.cols_[i][k];
            L.cols_[j][i] = r;
        }
    for (int j = 0; j < n; ++j) {
        L.key_.push_back(L.diag_[j]);
        for (int i = 0; i < j; ++i) {
            auto k = L.cols_[j][i].with_prec(L.diag_[i]).key();
            L.key_.insert(L.key_.end(), k.begin(), k.end());
        }
    }
    return L;
}

Lattice Lattice::standard(const LocalField& F, int n) { return from_columns(Mat::identity(F, n, F.max_precision())); }

Lattice Lattice::from_columns(const Mat& B) {
    std::vector<Vec> gens(B.cols());
    for (int j = 0; j < B.cols(); ++j)
        for (int i = 0; i < B.rows(); ++i) gens[j].push_back(B.at(i, j));
    return span(B.field(), B.rows(), std::move(gens));
}

int Lattice::colength() const { return std::accumulate(diag_.begin(), diag_.end(), 0); }

bool Lattice::is_integral() const {
    for (const auto& c : cols_)
        for (const auto& x : c)
            if (!x.is_integral()) return false;
    return true;
}

bool Lattice::is_primitive() const {
    for (const auto& c : cols_)
        for (const auto& x : c)
            if (x.val() == 0) return true;
    return false;
}

Vec Lattice::coords(const Vec& v) const { return triangular_coords(cols_, v); }

bool Lattice::contains(const Vec& v) const {
    for (const auto& c : coords(v)) {
        if (c.is_zero()) {
            if (c.prec() < 0) throw PrecisionError("lattice membership undecidable at this precision");
            continue;
        }
        if (*c.val() < 0) return false;
    }
    return true;
}

bool Lattice::contains(const Lattice& o) const {
    for (const auto& c : o.cols_)
        if (!contains(c)) return false;
    return true;
}

Lattice Lattice::image(const Mat& g) const {
    std::vector<Vec> gens;
    for (const auto& c : cols_) gens.push_back(g.apply(c));
    return span(F_, n_, std::move(gens));
}

Lattice Lattice::scaled(int k) const {
    std::vector<Vec> gens;
    for (const auto& c : cols_) {
        Vec v;
        for (const auto& x : c) v.push_back(x.shift_pi(k));
        gens.push_back(v);
    }
    return span(F_, n_, std::move(gens));
}

bool Lattice::stable_under(const Mat& g) const {
    for (const auto& c : cols_)
        if (!contains(g.apply(c))) return false;
    return true;
}

FqMatrix Lattice::residue_action(const Mat& g) const {
    FqMatrix T(n_, n_);
    for (int j = 0; j < n_; ++j) {
        auto r = vec_residue(coords(g.apply(cols_[j])));
        for (int i = 0; i < n_; ++i) T.at(i, j) = r[i];
    }
    return T;
}

Mat Lattice::basis_matrix() const {
    int P = F_.max_precision();
    Mat B(F_, n_, n_, P);
    for (int j = 0; j < n_; ++j)
        for (int i = 0; i < n_; ++i) B.at(i, j) = cols_[j][i];
    return B;
}

std::string Lattice::to_tsv() const {
    std::string out;
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) {
            if (!out.empty()) out += '\t';
            if (i == j) {
                out += "^" + std::to_string(diag_[j]);
                continue;
            }
            PadicElt x = cols_[j][i].with_prec(diag_[i]);
            auto d = x.digits();
            if (d.empty()) {
                out += "0";
                continue;
            }
            if (x.digit_shift() != 0) out += "pi^" + std::to_string(x.digit_shift()) + ":";
            for (size_t k = 0; k < d.size(); ++k) out += (k ? "," : "") + std::to_string(d[k]);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Stable subspaces and flags over F_q

namespace {

Rows rref_rows(const ResidueField& R, const Rows& rows, int d) {
    if (rows.empty()) return {};
    FqMatrix m(static_cast<int>(rows.size()), d);
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < d; ++j) m.at(static_cast<int>(i), j) = rows[i][j];
    auto piv = fq::rref(R, m);
    Rows out;
    for (size_t i = 0; i < piv.size(); ++i)
        out.emplace_back(m.a.begin() + static_cast<long>(i) * d, m.a.begin() + static_cast<long>(i + 1) * d);
    return out;
}

int rank_rows(const ResidueField& R, const Rows& rows, int d) { return static_cast<int>(rref_rows(R, rows, d).size()); }

std::vector<int> normalize_line(const ResidueField& R, std::vector<int> v) {
    for (int x : v)
        if (x) {
            int inv = R.inv(x);
            for (auto& y : v) y = R.mul(y, inv);
            break;
        }
    return v;
}

// Lines through T-eigenvectors, each normalized so the first nonzero entry is 1.
Rows stable_lines(const ResidueField& R, const FqMatrix& T) {
    int d = T.rows;
    Rows lines;
    for (int lam : fq::roots(R, fq::charpoly(R, T))) {
        FqMatrix S = T;
        for (int i = 0; i < d; ++i) S.at(i, i) = R.sub(S.at(i, i), lam);
        auto K = fq::kernel(R, S);
        int k = static_cast<int>(K.size());
        int Q = R.size();
        for (int lead = 0; lead < k; ++lead) {
            int free = k - 1 - lead;
            std::int64_t total = 1;
            for (int i = 0; i < free; ++i) total *= Q;
            for (std::int64_t code = 0; code < total; ++code) {
                std::vector<int> v = K[lead];
                std::int64_t c = code;
                for (int i = lead + 1; i < k; ++i) {
                    int coef = static_cast<int>(c % Q);
                    c /= Q;
                    if (!coef) continue;
                    for (int t = 0; t < d; ++t) v[t] = R.add(v[t], R.mul(coef, K[i][t]));
                }
                lines.push_back(normalize_line(R, v));
            }
        }
    }
    return lines;
}

// Quotient of F^d by a subspace given in row-reduced form.
struct Quotient {
    const ResidueField* R;
    int d;
    Rows sub;
    std::vector<int> pivots, free;

    Quotient(const ResidueField& Rf, int dim, Rows s) : R(&Rf), d(dim), sub(std::move(s)) {
        std::vector<bool> is_piv(d, false);
        for (const auto& row : sub)
            for (int j = 0; j < d; ++j)
                if (row[j]) {
                    pivots.push_back(j);
                    is_piv[j] = true;
                    break;
                }
        for (int j = 0; j < d; ++j)
            if (!is_piv[j]) free.push_back(j);
    }
    int dim() const { return static_cast<int>(free.size()); }
    std::vector<int> project(std::vector<int> w) const {
        for (size_t k = 0; k < sub.size(); ++k) {
            int c = w[pivots[k]];
            if (!c) continue;
            for (int j = 0; j < d; ++j) w[j] = R->sub(w[j], R->mul(c, sub[k][j]));
        }
        std::vector<int> out;
        for (int j : free) out.push_back(w[j]);
        return out;
    }
    std::vector<int> insert(const std::vector<int>& x) const {
        std::vector<int> w(d, 0);
        for (size_t k = 0; k < free.size(); ++k) w[free[k]] = x[k];
        return w;
    }
    FqMatrix induced(const FqMatrix& T) const {
        int q = dim();
        FqMatrix Tq(q, q);
        for (int j = 0; j < q; ++j) {
            std::vector<int> e(q, 0);
            e[j] = 1;
            auto img = project(fq::apply(*R, T, insert(e)));
            for (int i = 0; i < q; ++i) Tq.at(i, j) = img[i];
        }
        return Tq;
    }
};

}  // namespace

std::vector<Rows> stable_subspaces(const ResidueField& R, const FqMatrix& T) {
    int d = T.rows;
    std::set<Rows> acc;
    acc.insert(Rows{});
    if (d == 0) return {Rows{}};
    Rows full(d, std::vector<int>(d, 0));
    for (int i = 0; i < d; ++i) full[i][i] = 1;
    acc.insert(full);
    for (const auto& v : stable_lines(R, T)) {
        Quotient Q(R, d, {v});
        for (const auto& S : stable_subspaces(R, Q.induced(T))) {
            Rows rows = {v};
            for (const auto& s : S) rows.push_back(Q.insert(s));
            acc.insert(rref_rows(R, rows, d));
        }
    }
    return {acc.begin(), acc.end()};
}

std::vector<std::vector<Rows>> stable_flags(const ResidueField& R, const FqMatrix& T) {
    int d = T.rows;
    if (d == 0) return {std::vector<Rows>{}};
    std::vector<std::vector<Rows>> out;
    for (const auto& v : stable_lines(R, T)) {
        Quotient Q(R, d, {v});
        for (const auto& fl : stable_flags(R, Q.induced(T))) {
            std::vector<Rows> flag = {{v}};
            for (const auto& S : fl) {
                Rows rows = {v};
                for (const auto& s : S) rows.push_back(Q.insert(s));
                flag.push_back(rref_rows(R, rows, d));
            }
            out.push_back(flag);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Enumeration of stable lattices

namespace {

// Preimage in L of the subspace V ⊆ L/ϖL (rows in HNF coordinates).
Lattice preimage(const Lattice& L, const Rows& V) {
    const LocalField& F = L.field();
    int n = L.rank();
    int P = F.max_precision();
    std::vector<Vec> gens;
    for (const auto& row : V) {
        Vec g(n, PadicElt::zero(F, P));
        for (int t = 0; t < n; ++t) {
            if (!row[t]) continue;
            PadicElt c = PadicElt::from_residue(F, row[t], P);
            for (int i = 0; i < n; ++i) g[i] = g[i] + c * L.basis()[t][i];
        }
        gens.push_back(g);
    }
    for (const auto& c : L.basis()) {
        Vec g;
        for (const auto& x : c) g.push_back(x.shift_pi(1));
        gens.push_back(g);
    }
    return Lattice::span(F, n, std::move(gens));
}

template <class Fn>
void parallel_for(int count, int jobs, Fn fn) {
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (int i; (i = next.fetch_add(1)) < count;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

// Children at depth k of a T-stable L ⊇ ϖ^{k-1}O^n: the T-stable L' with
// ϖL ⊆ L' ⊆ L and L' + ϖ^{k-1}O^n = L. Every lattice at depth k has exactly one parent.
std::vector<Lattice> children(const Lattice& L, const Mat& T, int k) {
    const LocalField& F = L.field();
    const ResidueField& R = F.residue_field();
    int n = L.rank();
    int P = F.max_precision();
    FqMatrix TL = L.residue_action(T);
    Rows U;
    for (int i = 0; i < n; ++i) {
        Vec e(n, PadicElt::zero(F, P));
        e[i] = PadicElt::pi_power(F, k - 1, P);
        U.push_back(vec_residue(L.coords(e)));
    }
    std::vector<Lattice> out;
    for (const auto& V : stable_subspaces(R, TL)) {
        Rows both = V;
        both.insert(both.end(), U.begin(), U.end());
        if (rank_rows(R, both, n) != n) continue;
        out.push_back(preimage(L, V));
    }
    return out;
}

}  // namespace

std::vector<Lattice> stable_lattices(const Mat& T, int W, int jobs) {
    if (!T.is_integral()) throw DomainError("stable_lattices requires an integral operator");
    const LocalField& F = T.field();
    int n = T.rows();
    std::vector<Lattice> level = {Lattice::standard(F, n)};
    for (int k = 1; k <= W; ++k) {
        std::vector<std::vector<Lattice>> kids(level.size());
        parallel_for(static_cast<int>(level.size()), jobs, [&](int i) { kids[i] = children(level[i], T, k); });
        std::vector<Lattice> next;
        for (auto& v : kids)
            for (auto& L : v) next.push_back(std::move(L));
        level = std::move(next);
    }
    std::vector<Lattice> out;
    for (auto& L : level)
        if (L.is_primitive()) out.push_back(std::move(L));
    std::sort(out.begin(), out.end());
    return out;
}

Mat integral_frame(const Mat& g) {
    const LocalField& F = g.field();
    int n = g.rows();
    if (g.is_integral()) return Mat::identity(F, n, F.max_precision());
    if (!g.charpoly().is_integral()) throw DomainError("integral_frame: element is not bounded");
    std::vector<Vec> gens;
    Mat pw = Mat::identity(F, n, F.max_precision());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Vec c;
            for (int r = 0; r < n; ++r) c.push_back(pw.at(r, j));
            gens.push_back(c);
        }
        pw = pw * g;
    }
    Mat B = Lattice::span(F, n, std::move(gens)).basis_matrix();
    if (!(B.inverse() * g * B).is_integral()) throw std::logic_error("integral_frame: frame is not g-stable");
    return B;
}

std::string to_string(Level l) { return l == Level::hyperspecial ? "hyperspecial" : "iwahori"; }

Level parse_level(const std::string& s) {
    if (s == "hyperspecial") return Level::hyperspecial;
    if (s == "iwahori") return Level::iwahori;
    throw ParseError("unknown level '" + s + "' (expected hyperspecial or iwahori)");
}

// ---------------------------------------------------------------------------
// Fibers

namespace {

Mat conj(const Mat& B, const Mat& g) { return B.inverse() * g * B; }

Mat pi_scaled(const Mat& g, int k) {
    const LocalField& F = g.field();
    return g.scale(PadicElt::pi_power(F, k, F.max_precision()));
}

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

// Chain member L_{i} for any integer i from the members L_0..L_{n-1}.
Lattice chain_at(const std::vector<Lattice>& chain, int i) {
    int n = static_cast<int>(chain.size());
    int q = floor_div(i, n);
    return chain[i - q * n].scaled(q);
}

bool chain_is_complete(const std::vector<Lattice>& chain) {
    int n = static_cast<int>(chain.size());
    for (int i = 0; i < n; ++i) {
        Lattice next = chain_at(chain, i + 1);
        if (next.colength() != chain[i].colength() + 1) return false;
        if (!chain[i].contains(next)) return false;
    }
    return true;
}

// Chains L_0 ⊋ ... ⊋ L_{n-1} ⊋ ϖL_0 with g L_i = L_{i+a}, in a frame where
// g' = ϖ^{-b} g (a = nb + r, 0 <= r < n) is integral.
std::vector<FiberPoint> group_chains(const Mat& g, int a, int W, int jobs) {
    const LocalField& F = g.field();
    const ResidueField& R = F.residue_field();
    int n = g.rows();
    int r = ((a % n) + n) % n, b = (a - r) / n;
    int gg = r == 0 ? n : std::gcd(r, n);
    Mat gp = pi_scaled(g, -b);
    // δ' = ϖ^{-r/gg} g'^{n/gg} fixes every chain member.
    Mat delta = pi_scaled(gp.pow(static_cast<std::uint64_t>(n / gg)), -r / gg);
    auto anchors = stable_lattices(gp, W, jobs);
    std::vector<std::vector<FiberPoint>> found(anchors.size());
    parallel_for(static_cast<int>(anchors.size()), jobs, [&](int idx) {
        const Lattice& L0 = anchors[idx];
        if (!L0.stable_under(delta)) return;
        // L_gg is determined by L_0 through powers of g'.
        Lattice Lg = L0.scaled(1);
        if (gg < n) {
            int t = 1;
            while ((t * r) % n != gg) ++t;
            Lg = L0.image(gp.pow(static_cast<std::uint64_t>(t))).scaled(-(t * r - gg) / n);
            if (!L0.contains(Lg) || !Lg.contains(L0.scaled(1))) return;
        }
        // Subspace S = L_gg / ϖL_0 of L_0/ϖL_0.
        Rows S;
        for (const auto& c : Lg.basis()) S.push_back(vec_residue(L0.coords(c)));
        S = rref_rows(R, S, n);
        if (static_cast<int>(S.size()) != n - gg) return;
        Quotient Q(R, n, S);
        FqMatrix D = Q.induced(L0.residue_action(delta));
        for (const auto& flag : stable_flags(R, D)) {
            // flag[k] has dimension k+1 in L_0/L_gg; member L_j is the preimage of flag[gg-1-j].
            std::vector<Lattice> first = {L0};
            for (int j = 1; j < gg; ++j) {
                Rows rows = S;
                for (const auto& x : flag[gg - 1 - j]) rows.push_back(Q.insert(x));
                first.push_back(preimage(L0, rref_rows(R, rows, n)));
            }
            std::vector<Lattice> chain(n);
            for (int j = 0; j < gg; ++j)
                for (int t = 0; t < n / gg; ++t) {
                    int pos = j + t * r;
                    chain[pos % n] = first[j].image(gp.pow(static_cast<std::uint64_t>(t))).scaled(-(pos / n));
                }
            if (!chain_is_complete(chain)) continue;
            bool ok = true;
            for (int i = 0; i < n && ok; ++i) ok = chain[i].image(g) == chain_at(chain, i + a);
            if (ok) found[idx].push_back(FiberPoint{chain});
        }
    });
    std::vector<FiberPoint> out;
    for (auto& v : found) out.insert(out.end(), v.begin(), v.end());
    return out;
}

// Chains with X L_i ⊆ L_i for all i.
std::vector<FiberPoint> lie_chains(const Mat& X, int W, int jobs) {
    const LocalField& F = X.field();
    const ResidueField& R = F.residue_field();
    int n = X.rows();
    auto anchors = stable_lattices(X, W, jobs);
    std::vector<std::vector<FiberPoint>> found(anchors.size());
    parallel_for(static_cast<int>(anchors.size()), jobs, [&](int idx) {
        const Lattice& L0 = anchors[idx];
        for (const auto& flag : stable_flags(R, L0.residue_action(X))) {
            std::vector<Lattice> chain = {L0};
            for (int j = 1; j < n; ++j) chain.push_back(preimage(L0, flag[n - 1 - j]));
            if (!chain_is_complete(chain)) continue;
            bool ok = true;
            for (int i = 0; i < n && ok; ++i) ok = chain[i].stable_under(X);
            if (ok) found[idx].push_back(FiberPoint{chain});
        }
    });
    std::vector<FiberPoint> out;
    for (auto& v : found) out.insert(out.end(), v.begin(), v.end());
    return out;
}

// Exhaustive search of the window for points of a group fiber whose criterion fails.
std::vector<FiberPoint> exhaustive_group_points(const Mat& g, Level level, int a, int W) {
    const LocalField& F = g.field();
    const ResidueField& R = F.residue_field();
    int n = g.rows();
    Mat zero(F, n, n, F.max_precision());
    std::vector<FiberPoint> out;
    for (const auto& L0 : stable_lattices(zero, W)) {
        if (level == Level::hyperspecial) {
            if (a % n != 0) {
                // g L = ϖ^s L is impossible by volume; test both neighbours literally.
                int s = floor_div(a, n);
                Lattice gL = L0.image(g);
                if (gL == L0.scaled(s) || gL == L0.scaled(s + 1)) out.push_back(FiberPoint{{L0}});
            } else if (L0.image(g) == L0.scaled(a / n)) {
                out.push_back(FiberPoint{{L0}});
            }
            continue;
        }
        FqMatrix Z(n, n);
        for (const auto& flag : stable_flags(R, Z)) {
            std::vector<Lattice> chain = {L0};
            for (int j = 1; j < n; ++j) chain.push_back(preimage(L0, flag[n - 1 - j]));
            bool ok = true;
            for (int i = 0; i < n && ok; ++i) ok = chain[i].image(g) == chain_at(chain, i + a);
            if (ok) out.push_back(FiberPoint{chain});
        }
    }
    return out;
}

bool bounded_mod_center(const Mat& g) {
    IntPoly chi = g.charpoly();
    if (chi[0].is_zero()) return false;
    return newton_polygon(chi).segments.size() == 1;
}

}  // namespace

FiberResult enumerate_fiber(const FiberSpec& spec, int m, int jobs) {
    if (m < 1) throw DomainError("extension degree must be positive");
    const LocalField& F0 = spec.gamma.field();
    LocalField F = m > 1 ? F0.unramified_extension(m) : F0;
    Mat g = m > 1 ? spec.gamma.extend(F) : spec.gamma;
    int n = g.rows();
    int W = spec.window;
    FiberResult res;
    res.field = F;
    res.frame = Mat::identity(F, n, F.max_precision());

    if (spec.kind == FiberSpec::Kind::lie) {
        if (!g.charpoly().is_integral()) {
            res.diagnosis = "nonempty fails: unbounded";
            return res;
        }
        res.frame = integral_frame(g);
        Mat X = conj(res.frame, g);
        if (spec.level == Level::hyperspecial) {
            for (auto& L : stable_lattices(X, W, jobs)) res.points.push_back(FiberPoint{{L}});
        } else {
            res.points = lie_chains(X, W, jobs);
        }
        std::sort(res.points.begin(), res.points.end());
        return res;
    }

    int a = spec.coset;
    auto dv = g.det().val();
    if (!dv) throw DomainError("group fiber of a non-invertible element");
    int kappa = *dv;
    if (kappa != a)
        res.diagnosis = "coset mismatch: kappa = " + std::to_string(kappa) + " but the coset is Pi^" + std::to_string(a);
    else if (!bounded_mod_center(g))
        res.diagnosis = "nonempty fails: not bounded mod center";
    else if (spec.level == Level::hyperspecial && a % n != 0)
        res.diagnosis = "nonempty fails: kappa = " + std::to_string(kappa) +
                        " is not in pi_0 of the hyperspecial normalizer (multiples of " + std::to_string(n) + ")";
    if (res.diagnosis) {
        res.points = exhaustive_group_points(g, spec.level, a, W);
        std::sort(res.points.begin(), res.points.end());
        return res;
    }
    if (spec.level == Level::hyperspecial) {
        Mat gs = pi_scaled(g, -a / n);
        res.frame = integral_frame(gs);
        Mat T = conj(res.frame, gs);
        for (auto& L : stable_lattices(T, W, jobs))
            if (L.image(T) == L) res.points.push_back(FiberPoint{{L}});
    } else {
        int r = ((a % n) + n) % n, b = (a - r) / n;
        res.frame = integral_frame(pi_scaled(g, -b));
        res.points = group_chains(conj(res.frame, g), a, W, jobs);
    }
    std::sort(res.points.begin(), res.points.end());
    return res;
}

int default_window(int predicted_dim) { return 2 * predicted_dim + 4; }

namespace {
void check_window(int N, std::optional<int> pred) {
    if (pred && N < 2 * *pred + 2)
        throw DomainError("window policy: window " + std::to_string(N) + " is below 2*" + std::to_string(*pred) +
                          "+2 for predicted dimension " + std::to_string(*pred));
}
}  // namespace

FiberResult enumerate_lie_fiber(const Mat& g, int N, int m, int jobs) {
    check_window(N, compute_invariants(g).dim_lie_pred);
    FiberSpec s;
    s.kind = FiberSpec::Kind::lie;
    s.gamma = g;
    s.window = N;
    return enumerate_fiber(s, m, jobs);
}

FiberResult enumerate_group_fiber(const Mat& g, Level level, int a, int N, int m, int jobs) {
    check_window(N, compute_invariants(g).dim_grp_pred);
    FiberSpec s;
    s.kind = FiberSpec::Kind::group;
    s.level = level;
    s.gamma = g;
    s.coset = a;
    s.window = N;
    return enumerate_fiber(s, m, jobs);
}

// ---------------------------------------------------------------------------
// Count profiles

void fit_dimension(CountProfile& prof) {
    prof.log_ratios.clear();
    prof.fitted_dim.reset();
    prof.spread = 0;
    bool empty = prof.counts.empty();
    for (const auto& c : prof.counts) empty = empty || c.second == 0;
    if (empty) {
        prof.verdict = "empty";
        return;
    }
    const double lq = std::log(static_cast<double>(prof.q));
    for (size_t i = 0; i + 1 < prof.counts.size(); ++i)
        prof.log_ratios.push_back(
            std::log(static_cast<double>(prof.counts[i + 1].second) / static_cast<double>(prof.counts[i].second)) / lq);
    if (prof.log_ratios.empty()) {
        prof.verdict = "ambiguous";
        return;
    }
    auto [lo, hi] = std::minmax_element(prof.log_ratios.begin(), prof.log_ratios.end());
    prof.spread = *hi - *lo;
    if (prof.spread > kSpreadGate) {
        prof.verdict = "ambiguous";
        return;
    }
    double avg = std::accumulate(prof.log_ratios.begin(), prof.log_ratios.end(), 0.0) / prof.log_ratios.size();
    prof.fitted_dim = static_cast<int>(std::lround(avg));
    if (!prof.predicted_dim)
        prof.verdict = "unpredicted";
    else
        prof.verdict = *prof.fitted_dim == *prof.predicted_dim ? "match" : "mismatch";
}

CountProfile count_profile(const FiberSpec& spec, int M, std::optional<int> predicted, int jobs) {
    CountProfile prof;
    prof.q = spec.gamma.field().residue_card();
    prof.window = spec.window;
    prof.predicted_dim = predicted;
    for (int m = 1; m <= M; ++m)
        prof.counts.push_back({m, static_cast<std::int64_t>(enumerate_fiber(spec, m, jobs).points.size())});
    fit_dimension(prof);
    return prof;
}

nlohmann::json to_json(const CountProfile& prof) {
    nlohmann::json j;
    j["q"] = prof.q;
    j["N"] = prof.window;
    j["counts"] = nlohmann::json::array();
    for (const auto& [m, c] : prof.counts) j["counts"].push_back({{"m", m}, {"count", c}});
    j["log_ratios"] = prof.log_ratios;
    j["spread"] = prof.spread;
    j["fitted_dim"] = prof.fitted_dim ? nlohmann::json(*prof.fitted_dim) : nlohmann::json("ambiguous");
    j["predicted_dim"] = prof.predicted_dim ? nlohmann::json(*prof.predicted_dim) : nlohmann::json(nullptr);
    j["verdict"] = prof.verdict;
    return j;
}

// ---------------------------------------------------------------------------
// Regular locus

namespace {

bool is_regular(const ResidueField& R, const FqMatrix& T) {
    int n = T.rows;
    FqMatrix ad(n * n, n * n);
    // ad(T) X = T X - X T on row-major X.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                ad.at(i * n + j, k * n + j) = R.add(ad.at(i * n + j, k * n + j), T.at(i, k));
                ad.at(i * n + j, i * n + k) = R.sub(ad.at(i * n + j, i * n + k), T.at(k, j));
            }
    return fq::rank(R, ad) == n * n - n;
}

bool is_cyclic_vector(const ResidueField& R, const FqMatrix& T, const std::vector<int>& v) {
    int n = T.rows;
    FqMatrix K(n, n);
    std::vector<int> cur = v;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) K.at(i, j) = cur[i];
        cur = fq::apply(R, T, cur);
    }
    return fq::rank(R, K) == n;
}

std::optional<std::vector<int>> find_cyclic_vector(const ResidueField& R, const FqMatrix& T) {
    int n = T.rows, Q = R.size();
    std::int64_t total = 1;
    for (int i = 0; i < n; ++i) total *= Q;
    for (std::int64_t code = 1; code < total; ++code) {
        std::vector<int> v(n);
        std::int64_t c = code;
        for (int i = 0; i < n; ++i) {
            v[i] = static_cast<int>(c % Q);
            c /= Q;
        }
        if (is_cyclic_vector(R, T, v)) return v;
    }
    return std::nullopt;
}

Vec lift_in(const Lattice& L, const std::vector<int>& r) {
    const LocalField& F = L.field();
    int n = L.rank(), P = F.max_precision();
    Vec v(n, PadicElt::zero(F, P));
    for (int t = 0; t < n; ++t) {
        PadicElt c = PadicElt::from_residue(F, r[t], P);
        for (int i = 0; i < n; ++i) v[i] = v[i] + c * L.basis()[t][i];
    }
    return v;
}

}  // namespace

RegularLocusReport regular_locus_check(const Mat& g0, int N, int m, int jobs) {
    LocalField F = m > 1 ? g0.field().unramified_extension(m) : g0.field();
    Mat g = m > 1 ? g0.extend(F) : g0;
    if (!g.is_integral()) throw DomainError("regular_locus_check requires an integral element");
    const ResidueField& R = F.residue_field();
    int n = g.rows();
    RegularLocusReport rep;
    Lattice std_lat = Lattice::standard(F, n);
    FqMatrix T0 = std_lat.residue_action(g);
    rep.base_point_regular = is_regular(R, T0);
    if (!rep.base_point_regular) throw DomainError("regular_locus_check: the reduction of the element is not regular");
    Vec w0 = lift_in(std_lat, *find_cyclic_vector(R, T0));
    Mat K(F, n, n, F.max_precision());
    {
        Vec cur = w0;
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) K.at(i, j) = cur[i];
            cur = g.apply(cur);
        }
    }
    Mat Kinv = K.inverse();
    auto pts = stable_lattices(g, N, jobs);
    rep.total = static_cast<int>(pts.size());
    std::vector<int> reg(pts.size(), 0), hit(pts.size(), 0);
    parallel_for(static_cast<int>(pts.size()), jobs, [&](int idx) {
        const Lattice& L = pts[idx];
        FqMatrix TL = L.residue_action(g);
        if (!is_regular(R, TL)) return;
        reg[idx] = 1;
        Vec v = lift_in(L, *find_cyclic_vector(R, TL));
        // L = O[g] v = x(g) O[g] w0 = x(g) O^n for x = Σ c_i X^i with v = Σ c_i g^i w0.
        Vec c = Kinv.apply(v);
        Mat x(F, n, n, F.max_precision());
        Mat pw = Mat::identity(F, n, F.max_precision());
        for (int i = 0; i < n; ++i) {
            x = x + pw.scale(c[i]);
            pw = pw * g;
        }
        if (Lattice::from_columns(x) == L) hit[idx] = 1;
    });
    rep.regular = std::accumulate(reg.begin(), reg.end(), 0);
    rep.reached = std::accumulate(hit.begin(), hit.end(), 0);
    return rep;
}

// ---------------------------------------------------------------------------
// Orbital integrals

namespace {

std::int64_t ipow64(std::int64_t b, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// Basis (power coordinates) of {c : T c ∈ O^rows} for an injective integral T
// given column-wise, by unimodular row and column elimination.
std::vector<Vec> integral_preimage(std::vector<Vec> cols) {
    int k = static_cast<int>(cols.size());
    int N = static_cast<int>(cols[0].size());
    const LocalField F = cols[0][0].field();
    int P = F.max_precision();
    std::vector<Vec> V(k, Vec(k, PadicElt::zero(F, P)));
    for (int i = 0; i < k; ++i) V[i][i] = PadicElt::one(F, P);
    std::vector<int> a(k, 0);
    std::vector<int> rowperm(N);
    std::iota(rowperm.begin(), rowperm.end(), 0);
    for (int s = 0; s < k; ++s) {
        int bi = -1, bj = -1, bv = 0;
        for (int j = s; j < k; ++j)
            for (int i = s; i < N; ++i) {
                auto v = cols[j][rowperm[i]].val();
                if (v && (bi < 0 || *v < bv)) {
                    bi = i;
                    bj = j;
                    bv = *v;
                }
            }
        if (bi < 0) throw PrecisionError("multiplier order: operator is not injective at this precision");
        std::swap(rowperm[s], rowperm[bi]);
        std::swap(cols[s], cols[bj]);
        std::swap(V[s], V[bj]);
        int pr = rowperm[s];
        PadicElt pinv = cols[s][pr].inv();
        for (int i = s + 1; i < N; ++i) {
            int ri = rowperm[i];
            PadicElt f = cols[s][ri] * pinv;
            for (int j = s; j < k; ++j) cols[j][ri] = cols[j][ri] - f * cols[j][pr];
        }
        for (int j = s + 1; j < k; ++j) {
            PadicElt f = cols[j][pr] * pinv;
            for (int i = 0; i < N; ++i) cols[j][i] = cols[j][i] - f * cols[s][i];
            for (int i = 0; i < k; ++i) V[j][i] = V[j][i] - f * V[s][i];
        }
        a[s] = bv;
    }
    std::vector<Vec> basis;
    for (int s = 0; s < k; ++s) {
        Vec b;
        for (const auto& x : V[s]) b.push_back(x.shift_pi(-a[s]));
        basis.push_back(b);
    }
    return basis;
}

struct MaximalData {
    int index = 0;
    int f = 1;
};

MaximalData maximal_data(const IntPoly& chi) {
    Order O(chi);
    O.maximize();
    return {O.index_val(), chi.degree() - static_cast<int>(O.residue_radical().size())};
}

UnitIndex unit_index_with(const Mat& g, const Lattice& L, const MaximalData& md) {
    const LocalField& F = g.field();
    int n = g.rows();
    Mat B = L.basis_matrix();
    Mat Binv = B.inverse();
    std::vector<Vec> cols;
    Mat pw = Mat::identity(F, n, F.max_precision());
    for (int i = 0; i < n; ++i) {
        Mat A = Binv * pw * B;
        Vec c;
        for (int r = 0; r < n; ++r)
            for (int s = 0; s < n; ++s) c.push_back(A.at(r, s));
        cols.push_back(c);
        pw = pw * g;
    }
    auto basis = compact(echelon(integral_preimage(cols), n));
    Order OL(g.charpoly(), basis);
    UnitIndex u;
    u.length = md.index - OL.index_val();
    u.f_order = n - static_cast<int>(OL.residue_radical().size());
    std::int64_t q = F.residue_card();
    // q^ℓ (1 - q^{-f}) / (1 - q^{-f_O}) = q^{ℓ + f_O - f} (q^f - 1) / (q^{f_O} - 1)
    Rational w(ipow64(q, md.f) - 1, ipow64(q, u.f_order) - 1);
    int ex = u.length + u.f_order - md.f;
    w *= ex >= 0 ? Rational(ipow64(q, ex)) : Rational(1, ipow64(q, -ex));
    u.num = w.numerator();
    u.den = w.denominator();
    return u;
}

}  // namespace

UnitIndex multiplier_unit_index(const Mat& g, const Lattice& L) { return unit_index_with(g, L, maximal_data(g.charpoly())); }

std::string OrbitalReport::value_string() const {
    return value_den == 1 ? std::to_string(value_num) : std::to_string(value_num) + "/" + std::to_string(value_den);
}

OrbitalReport orbital_integral(const Mat& g0, int N, int jobs) {
    IntPoly chi = g0.charpoly();
    auto fr = factor(chi);
    if (fr.factors.size() != 1) throw DomainError("orbital_integral: non-elliptic classes are unsupported");
    if (!chi.is_integral()) throw DomainError("orbital_integral: element is not bounded");
    Mat B = integral_frame(g0);
    Mat g = conj(B, g0);
    OrbitalReport rep;
    rep.e = fr.factors[0].e;
    rep.f = fr.factors[0].f;
    rep.window = N;
    MaximalData md = maximal_data(g.charpoly());
    auto pts = stable_lattices(g, N, jobs);
    rep.lattices = static_cast<int>(pts.size());
    std::vector<UnitIndex> w(pts.size());
    parallel_for(static_cast<int>(pts.size()), jobs, [&](int i) { w[i] = unit_index_with(g, pts[i], md); });
    // The E^×-orbit of [L] in the lattices modulo ϖ^Z has e·[O_E^× : O_L^×] members.
    Rational value(0), classes(0);
    for (const auto& u : w) {
        Rational weight(u.num, u.den);
        Rational share = Rational(1) / (weight * rep.e);
        classes += share;
        value += share * weight;
    }
    rep.value_num = value.numerator();
    rep.value_den = value.denominator();
    rep.classes_num = classes.numerator();
    rep.classes_den = classes.denominator();
    return rep;
}

// ---------------------------------------------------------------------------
// Quasi-logarithm fibers

QuasiLogReport quasi_log_fiber_equality(const Mat& g, Level level, int N, int m, int jobs) {
    QuasiLogReport rep;
    FiberSpec gs;
    gs.kind = FiberSpec::Kind::group;
    gs.level = level;
    gs.gamma = g;
    gs.coset = 0;
    gs.window = N;
    FiberSpec ls = gs;
    ls.kind = FiberSpec::Kind::lie;
    ls.gamma = quasi_log(g);
    auto a = enumerate_fiber(gs, m, jobs), b = enumerate_fiber(ls, m, jobs);
    rep.group_points = static_cast<int>(a.points.size());
    rep.lie_points = static_cast<int>(b.points.size());
    rep.sets_equal = !a.diagnosis && a.frame.equals(b.frame) && a.points == b.points;
    rep.d_grp = *compute_invariants(g).d_grp;
    rep.d_lie_of_log = compute_invariants(quasi_log(g)).d_lie;
    return rep;
}

// ---------------------------------------------------------------------------
// Levi reduction

namespace {

struct LeviSearch {
    const LocalField* F;
    int n, W, P;
    Mat g, ginv;
    std::vector<std::pair<int, int>> positions;  // by increasing height
    std::int64_t count = 0;

    // Entry (i, j) of u^{-1} g u g^{-1}.
    Mat transporter(const Mat& u) const { return u.inverse() * g * u * ginv; }

    bool accept(const Mat& u) const {
        Mat t = transporter(u);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const PadicElt& x = t.at(i, j);
                if (!x.is_integral()) return false;
                if (i > j && !x.is_zero()) return false;
                if (i == j && !(x - PadicElt::one(*F, P)).is_zero()) return false;
            }
        return true;
    }

    void run(Mat& u, size_t k) {
        if (k == positions.size()) {
            if (accept(u)) ++count;
            return;
        }
        auto [i, j] = positions[k];
        u.at(i, j) = PadicElt::zero(*F, P);
        PadicElt c = transporter(u).at(i, j);
        PadicElt alpha1 = g.at(i, i) * ginv.at(j, j) - PadicElt::one(*F, P);
        int v = *alpha1.val();
        PadicElt x0 = -(c * alpha1.inv());
        int v0 = x0.is_zero() ? 0 : std::min(0, *x0.val());
        int depth;
        if (v <= W) {
            if (v0 < -W) return;
            depth = v;
        } else {
            if (v0 < -v) return;
            depth = W;
            x0 = PadicElt::zero(*F, P);
        }
        const int Q = F->residue_card();
        std::int64_t total = 1;
        for (int t = 0; t < depth; ++t) total *= Q;
        for (std::int64_t code = 0; code < total; ++code) {
            PadicElt x = x0;
            std::int64_t cc = code;
            for (int t = 1; t <= depth; ++t) {
                int d = static_cast<int>(cc % Q);
                cc /= Q;
                if (d) x = x + PadicElt::from_residue(*F, d, P).shift_pi(-t);
            }
            u.at(i, j) = x.truncate_digits(0);
            run(u, k + 1);
        }
        u.at(i, j) = PadicElt::zero(*F, P);
    }
};

}  // namespace

std::int64_t levi_transporter_count(const Mat& g0, int W, int m) {
    LocalField F = m > 1 ? g0.field().unramified_extension(m) : g0.field();
    Mat g = m > 1 ? g0.extend(F) : g0;
    int n = g.rows();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && !g.at(i, j).is_zero()) throw DomainError("levi_reduction_check expects a diagonal element");
    for (int i = 0; i < n; ++i)
        if (!g.at(i, i).is_unit()) throw DomainError("levi_reduction_check expects unit diagonal entries");
    LeviSearch s;
    s.F = &F;
    s.n = n;
    s.W = W;
    s.P = F.max_precision();
    s.g = g;
    s.ginv = g.inverse();
    for (int h = 1; h < n; ++h)
        for (int i = 0; i + h < n; ++i) {
            if ((g.at(i, i) - g.at(i + h, i + h)).is_zero())
                throw DomainError("levi_reduction_check: element is not regular semisimple");
            s.positions.push_back({i, i + h});
        }
    Mat u = Mat::identity(F, n, s.P);
    s.run(u, 0);
    return s.count;
}

LeviReport levi_reduction_check(const Mat& g, int M, std::optional<int> window) {
    LeviReport rep;
    int n = g.rows();
    const LocalField& F = g.field();
    int P = F.max_precision();
    int vmax = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            PadicElt a1 = g.at(i, i) * g.at(j, j).inv() - PadicElt::one(F, P);
            auto v = a1.val();
            if (!v) throw DomainError("levi_reduction_check: element is not regular semisimple");
            rep.r_n += *v;
            vmax = std::max(vmax, *v);
        }
    rep.half_d_grp = *compute_invariants(g).d_grp / 2;
    rep.window = window.value_or(vmax + 1);
    rep.profile.q = F.residue_card();
    rep.profile.window = rep.window;
    rep.profile.predicted_dim = rep.r_n;
    for (int m = 1; m <= M; ++m) rep.profile.counts.push_back({m, levi_transporter_count(g, rep.window, m)});
    fit_dimension(rep.profile);
    return rep;
}

}  // namespace springerlab
