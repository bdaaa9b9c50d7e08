#include "springerlab/factor.hpp"

#include <algorithm>
#include <climits>
#include <numeric>

#include "springerlab/errors.hpp"
#include "springerlab/matrix.hpp"

namespace springerlab {

Ratio make_ratio(int num, int den) {
    if (den == 0) return Ratio{1, 0};
    if (den < 0) {
        num = -num;
        den = -den;
    }
    int g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) g = 1;
    return Ratio{num / g, den / g};
}

std::string Ratio::to_string() const {
    if (den == 0) return "inf";
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

std::vector<std::pair<Ratio, int>> NewtonPolygon::root_valuations() const {
    std::vector<std::pair<Ratio, int>> r;
    for (const auto& s : segments) r.push_back({make_ratio(-s.slope.num, s.slope.den), s.length});
    std::reverse(r.begin(), r.end());
    return r;
}

NewtonPolygon newton_polygon(const IntPoly& f) {
    int n = f.degree();
    if (n < 0) throw DomainError("Newton polygon of the zero polynomial");
    std::vector<std::pair<int, int>> pts;
    std::vector<std::pair<int, int>> bounds;
    for (int i = 0; i <= n; ++i) {
        auto v = f[i].val();
        if (v)
            pts.push_back({i, *v});
        else
            bounds.push_back({i, f[i].prec()});
    }
    if (!f[n].val())
        throw PrecisionError("insufficient precision: leading coefficient is indistinguishable from zero",
                             2 * f[n].prec() + 2);
    if (!f[0].val())
        throw PrecisionError("insufficient precision: constant coefficient is indistinguishable from zero",
                             2 * f[0].prec() + 2);
    auto cross = [](std::pair<int, int> o, std::pair<int, int> a, std::pair<int, int> b) {
        return static_cast<long long>(a.first - o.first) * (b.second - o.second) -
               static_cast<long long>(a.second - o.second) * (b.first - o.first);
    };
    std::vector<std::pair<int, int>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
        hull.push_back(p);
    }
    // Indeterminate coefficients must lie strictly above the hull.
    for (const auto& [i, b] : bounds) {
        for (size_t s = 0; s + 1 < hull.size(); ++s) {
            auto [x0, y0] = hull[s];
            auto [x1, y1] = hull[s + 1];
            if (i < x0 || i > x1) continue;
            // b > y0 + (y1 - y0)(i - x0)/(x1 - x0)
            long long lhs = static_cast<long long>(b - y0) * (x1 - x0);
            long long rhs = static_cast<long long>(y1 - y0) * (i - x0);
            if (lhs <= rhs)
                throw PrecisionError("insufficient precision: coefficient of x^" + std::to_string(i) +
                                         " is indeterminate on or below the Newton polygon",
                                     2 * b + 2);
        }
    }
    NewtonPolygon np;
    np.vertices = hull;
    for (size_t s = 0; s + 1 < hull.size(); ++s) {
        int dx = hull[s + 1].first - hull[s].first;
        int dy = hull[s + 1].second - hull[s].second;
        np.segments.push_back({make_ratio(dy, dx), dx});
    }
    return np;
}

namespace {

bool exact_input(const IntPoly& f) { return f.min_prec() >= f.field().max_precision(); }

}  // namespace

int disc_val_poly(const IntPoly& f) {
    PadicElt d = discriminant(f);
    auto v = d.val();
    if (!v) {
        if (exact_input(f)) throw DomainError("not regular semisimple: the polynomial has a repeated root");
        throw PrecisionError("insufficient precision: discriminant is indistinguishable from zero modulo ϖ^" +
                                 std::to_string(d.prec()),
                             2 * f.min_prec());
    }
    return *v;
}

// ---------------------------------------------------------------------------
// Orders

Vec mulmod_poly(const Vec& a, const Vec& b, const IntPoly& f) {
    int n = f.degree();
    const LocalField& F = f.field();
    int P = F.max_precision();
    Vec prod(2 * n - 1, PadicElt::zero(F, P));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) prod[i + j] += a[i] * b[j];
    for (int k = 2 * n - 2; k >= n; --k) {
        PadicElt c = prod[k];
        for (int i = 0; i < n; ++i) prod[k - n + i] = prod[k - n + i] - c * f[i];
    }
    prod.resize(n);
    return prod;
}

Order::Order(const IntPoly& f) : f_(f), n_(f.degree()) {
    if (!f.is_monic()) throw DomainError("orders require a monic polynomial");
    if (!f.is_integral()) throw DomainError("orders require an integral polynomial");
    const LocalField& F = f.field();
    int P = F.max_precision();
    for (int i = 0; i < n_; ++i) {
        Vec v(n_, PadicElt::zero(F, P));
        v[i] = PadicElt::one(F, P);
        basis_.push_back(v);
    }
    rebuild();
}

Order::Order(const IntPoly& f, std::vector<Vec> basis) : f_(f), n_(f.degree()), basis_(std::move(basis)) {
    if (!f.is_monic() || !f.is_integral()) throw DomainError("orders require a monic integral polynomial");
    if (static_cast<int>(basis_.size()) != n_) throw DomainError("order basis has the wrong size");
    rebuild();
}

int Order::index_val() const {
    int s = 0;
    for (int i = 0; i < n_; ++i) s -= *basis_[i][i].val();
    return s;
}

Vec Order::to_coords(const Vec& power) const { return triangular_coords(basis_, power); }

Vec Order::from_coords(const Vec& c) const {
    const LocalField& F = field();
    Vec r(n_, PadicElt::zero(F, F.max_precision()));
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k <= i; ++k) r[k] += c[i] * basis_[i][k];
    return r;
}

Vec Order::mul(const Vec& a, const Vec& b) const {
    const LocalField& F = field();
    Vec r(n_, PadicElt::zero(F, F.max_precision()));
    for (int i = 0; i < n_; ++i) {
        if (a[i].is_zero() && a[i].prec() >= F.max_precision()) continue;
        for (int j = 0; j < n_; ++j) {
            PadicElt c = a[i] * b[j];
            for (int k = 0; k < n_; ++k) r[k] += c * table_[i][j][k];
        }
    }
    return r;
}

Vec Order::one() const {
    const LocalField& F = field();
    Vec p(n_, PadicElt::zero(F, F.max_precision()));
    p[0] = PadicElt::one(F, F.max_precision());
    return to_coords(p);
}

std::vector<Vec> Order::mult_matrix(const Vec& a) const {
    // rows[k][i] = k-th coordinate of a * basis_i
    const LocalField& F = field();
    std::vector<Vec> m(n_, Vec(n_, PadicElt::zero(F, F.max_precision())));
    for (int i = 0; i < n_; ++i) {
        Vec e(n_, PadicElt::zero(F, F.max_precision()));
        e[i] = PadicElt::one(F, F.max_precision());
        Vec col = mul(a, e);
        for (int k = 0; k < n_; ++k) m[k][i] = col[k];
    }
    return m;
}

PadicElt Order::trace(const Vec& a) const {
    PadicElt s = a[0] * traces_[0];
    for (int i = 1; i < n_; ++i) s += a[i] * traces_[i];
    return s;
}

void Order::rebuild() {
    table_.assign(n_, std::vector<Vec>(n_));
    rtab_.assign(n_, std::vector<std::vector<int>>(n_));
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) {
            Vec c = to_coords(mulmod_poly(basis_[i], basis_[j], f_));
            for (const auto& x : c)
                if (!x.is_integral())
                    throw PrecisionError("insufficient precision: order multiplication table is not integral", -1);
            table_[i][j] = c;
            table_[j][i] = c;
            rtab_[i][j] = vec_residue(c);
            rtab_[j][i] = rtab_[i][j];
        }
    traces_.clear();
    for (int i = 0; i < n_; ++i) {
        PadicElt t = table_[i][0][0];
        for (int j = 1; j < n_; ++j) t += table_[i][j][j];
        traces_.push_back(t);
    }
}

std::vector<int> Order::residue_mul(const std::vector<int>& a, const std::vector<int>& b) const {
    const ResidueField& R = field().residue_field();
    std::vector<int> r(n_, 0);
    for (int i = 0; i < n_; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < n_; ++j) {
            if (b[j] == 0) continue;
            int c = R.mul(a[i], b[j]);
            for (int k = 0; k < n_; ++k)
                if (rtab_[i][j][k]) r[k] = R.add(r[k], R.mul(c, rtab_[i][j][k]));
        }
    }
    return r;
}

std::vector<int> Order::residue_pow(std::vector<int> a, std::uint64_t k) const {
    std::vector<int> r = vec_residue(one());
    while (k) {
        if (k & 1) r = residue_mul(r, a);
        k >>= 1;
        if (k) a = residue_mul(a, a);
    }
    return r;
}

std::vector<std::vector<int>> Order::residue_radical() const {
    const ResidueField& R = field().residue_field();
    std::uint64_t qk = static_cast<std::uint64_t>(R.size());
    while (qk < static_cast<std::uint64_t>(n_)) qk *= static_cast<std::uint64_t>(R.size());
    FqMatrix M(n_, n_);
    for (int i = 0; i < n_; ++i) {
        std::vector<int> e(n_, 0);
        e[i] = 1;
        auto img = residue_pow(e, qk);
        for (int k = 0; k < n_; ++k) M.at(k, i) = img[k];
    }
    return fq::kernel(R, M);
}

void Order::maximize() {
    const LocalField& F = field();
    const ResidueField& R = F.residue_field();
    const int P = F.max_precision();
    for (int iter = 0; iter < 256; ++iter) {
        auto rad = residue_radical();
        if (rad.empty()) break;
        // I = ϖR + lift(radical), in order coordinates.
        std::vector<Vec> gens;
        for (int i = 0; i < n_; ++i) {
            Vec v(n_, PadicElt::zero(F, P));
            v[i] = PadicElt::uniformizer(F, P);
            gens.push_back(v);
        }
        for (const auto& r : rad) gens.push_back(vec_lift(F, r, P));
        std::vector<Vec> J = echelon(gens, n_);
        // Kernel of R/ϖ -> End(I/ϖI).
        FqMatrix big(n_ * n_, n_);
        for (int i = 0; i < n_; ++i) {
            Vec e(n_, PadicElt::zero(F, P));
            e[i] = PadicElt::one(F, P);
            for (int j = 0; j < n_; ++j) {
                auto img = vec_residue(triangular_coords(J, mul(e, J[j])));
                for (int k = 0; k < n_; ++k) big.at(j * n_ + k, i) = img[k];
            }
        }
        auto U = fq::kernel(R, big);
        if (U.empty()) break;
        std::vector<Vec> pg = basis_;
        for (const auto& u : U) {
            Vec w = from_coords(vec_lift(F, u, P));
            pg.push_back(vec_scale(w, PadicElt::pi_power(F, -1, P - 1)));
        }
        basis_ = echelon(pg, n_);
        for (const auto& b : basis_)
            if (b.empty()) throw PrecisionError("insufficient precision: order basis lost rank", -1);
        rebuild();
    }
    maximal_ = true;
}

// ---------------------------------------------------------------------------
// Factorization

namespace {

Mat to_mat(const LocalField& F, const std::vector<Vec>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows[0].size()) : 0;
    Mat m(F, r, c, F.max_precision());
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    return m;
}

int det_val(const LocalField& F, const std::vector<Vec>& rows) {
    PadicElt d = to_mat(F, rows).det();
    auto v = d.val();
    if (!v) throw PrecisionError("insufficient precision: determinant is indistinguishable from zero", -1);
    return *v;
}

// Primitive idempotents of the residue algebra of a maximal order.
std::vector<std::vector<int>> residue_idempotents(const Order& O) {
    const ResidueField& R = O.field().residue_field();
    int n = O.degree();
    FqMatrix M(n, n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> e(n, 0);
        e[i] = 1;
        auto img = O.residue_pow(e, static_cast<std::uint64_t>(R.size()));
        for (int k = 0; k < n; ++k) M.at(k, i) = R.sub(img[k], e[k]);
    }
    auto S = fq::kernel(R, M);
    std::vector<std::vector<int>> E = {vec_residue(O.one())};
    for (const auto& b : S) {
        FqMatrix mb(n, n);
        for (int i = 0; i < n; ++i) {
            std::vector<int> e(n, 0);
            e[i] = 1;
            auto img = O.residue_mul(b, e);
            for (int k = 0; k < n; ++k) mb.at(k, i) = img[k];
        }
        auto roots = fq::roots(R, fq::charpoly(R, mb));
        std::vector<std::vector<int>> next;
        for (const auto& e : E) {
            auto be = O.residue_mul(b, e);
            for (int lam : roots) {
                std::vector<int> proj = e;
                for (int mu : roots) {
                    if (mu == lam) continue;
                    std::vector<int> t(n);
                    int inv = R.inv(R.sub(lam, mu));
                    for (int k = 0; k < n; ++k) t[k] = R.mul(R.sub(be[k], R.mul(mu, e[k])), inv);
                    proj = O.residue_mul(proj, t);
                }
                if (std::any_of(proj.begin(), proj.end(), [](int x) { return x != 0; })) next.push_back(proj);
            }
        }
        E = next;
    }
    if (E.size() != S.size()) throw DomainError("internal: idempotent splitting did not separate the factors");
    return E;
}

Vec lift_idempotent(const Order& O, const std::vector<int>& eb) {
    const LocalField& F = O.field();
    Vec e = vec_lift(F, eb, F.max_precision());
    for (int it = 0; it < 64; ++it) {
        Vec e2 = O.mul(e, e);
        Vec e3 = O.mul(e2, e);
        Vec ne(e.size());
        PadicElt three = PadicElt::from_int(F, 3, F.max_precision());
        PadicElt two = PadicElt::from_int(F, 2, F.max_precision());
        for (size_t k = 0; k < e.size(); ++k) ne[k] = three * e2[k] - two * e3[k];
        bool same = true;
        for (size_t k = 0; k < e.size(); ++k) same = same && ne[k].equals(e[k]);
        e = ne;
        if (same) break;
    }
    return e;
}

int fq_rank_of(const Order& O, const std::vector<std::vector<int>>& vecs) {
    const ResidueField& R = O.field().residue_field();
    int n = O.degree();
    FqMatrix M(static_cast<int>(vecs.size()), n);
    for (size_t i = 0; i < vecs.size(); ++i)
        for (int k = 0; k < n; ++k) M.at(static_cast<int>(i), k) = vecs[i][k];
    return fq::rank(R, M);
}

std::vector<FactorRecord> factor_integral(const IntPoly& f) {
    const LocalField& F = f.field();
    const int P = F.max_precision();
    const int n = f.degree();
    if (n == 1) {
        FactorRecord r;
        r.poly = f;
        r.root_val = f[0].val() ? make_ratio(*f[0].val(), 1) : Ratio{1, 0};
        return {r};
    }
    Order O(f.with_prec(P));
    O.maximize();
    auto idem = residue_idempotents(O);
    auto rad = O.residue_radical();

    Vec xp(n, PadicElt::zero(F, P));
    xp[1] = PadicElt::one(F, P);
    Vec xc = O.to_coords(xp);

    std::vector<FactorRecord> out;
    for (const auto& eb : idem) {
        Vec eps = lift_idempotent(O, eb);
        std::vector<std::vector<int>> span;
        for (int k = 0; k < n; ++k) {
            std::vector<int> e(n, 0);
            e[k] = 1;
            span.push_back(O.residue_mul(eb, e));
        }
        int ni = fq_rank_of(O, span);
        std::vector<std::vector<int>> erad;
        for (const auto& r : rad) erad.push_back(O.residue_mul(eb, r));
        int fi = ni - (erad.empty() ? 0 : fq_rank_of(O, erad));
        FactorRecord rec;
        rec.f = fi;
        rec.e = ni / fi;

        Vec xe = O.mul(xc, eps);
        IntPoly cp = to_mat(F, O.mult_matrix(xe)).charpoly();
        std::vector<PadicElt> coeffs;
        for (int k = 0; k < n - ni; ++k)
            if (!cp[k].is_zero())
                throw PrecisionError("insufficient precision: factor characteristic polynomial did not split", -1);
        for (int k = n - ni; k <= n; ++k) coeffs.push_back(cp[k]);
        rec.poly = IntPoly(F, coeffs);

        // Basis of eps * O_A.
        std::vector<Vec> gens;
        for (int k = 0; k < n; ++k) {
            Vec e(n, PadicElt::zero(F, P));
            e[k] = PadicElt::one(F, P);
            gens.push_back(O.mul(eps, e));
        }
        auto ech = echelon(gens, n);
        std::vector<Vec> w;
        std::vector<int> cols;
        for (int j = 0; j < n; ++j)
            if (!ech[j].empty()) {
                w.push_back(ech[j]);
                cols.push_back(j);
            }
        if (static_cast<int>(w.size()) != ni)
            throw PrecisionError("insufficient precision: idempotent component has the wrong rank", -1);
        std::vector<Vec> tf(ni, Vec(ni));
        for (int a = 0; a < ni; ++a)
            for (int b = 0; b < ni; ++b) tf[a][b] = O.trace(O.mul(w[a], w[b]));
        rec.disc_val = det_val(F, tf);

        std::vector<Vec> pw;
        Vec cur = eps;
        for (int k = 0; k < ni; ++k) {
            Vec c;
            if (!triangular_coords_partial(w, cols, cur, c))
                throw PrecisionError("insufficient precision: power basis left the component", -1);
            pw.push_back(c);
            cur = O.mul(cur, xc);
        }
        rec.index_val = det_val(F, pw);
        rec.poly_disc_val = disc_val_poly(rec.poly);
        auto v0 = rec.poly[0].val();
        rec.root_val = v0 ? make_ratio(*v0, ni) : Ratio{1, 0};
        out.push_back(rec);
    }
    return out;
}

std::string sort_key(const FactorRecord& r) {
    std::string k;
    for (const auto& c : r.poly.coeffs()) k += c.to_string() + ";";
    return k;
}

}  // namespace

FactorizationReport factor(const IntPoly& f_in) {
    if (!f_in.is_monic()) throw DomainError("factor requires a monic polynomial");
    const LocalField& F = f_in.field();
    const int n = f_in.degree();
    const int N = std::min(f_in.min_prec(), F.max_precision());
    disc_val_poly(f_in);

    // Rescale x -> x/ϖ^k so that the roots become integral.
    int k = 0;
    for (int i = 0; i < n; ++i) {
        auto v = f_in[i].val();
        if (v && *v < 0) k = std::max(k, (-*v + (n - i) - 1) / (n - i));
    }
    IntPoly g = f_in;
    if (k > 0) {
        std::vector<PadicElt> c;
        for (int i = 0; i <= n; ++i) c.push_back(f_in[i].shift_pi(k * (n - i)));
        g = IntPoly(F, c);
    }
    int Ng = std::min(g.min_prec(), F.max_precision());
    int Dg = disc_val_poly(g);
    if (!exact_input(f_in) && Ng < 2 * Dg + 1)
        throw PrecisionError("insufficient precision: factorization needs precision at least " +
                                 std::to_string(2 * Dg + 1) + ", have " + std::to_string(Ng),
                             default_precision(Dg));

    FactorizationReport rep;
    rep.input = f_in;
    rep.precision = N;
    auto recs = factor_integral(g.with_prec(F.max_precision()));
    for (auto& r : recs) {
        int ni = r.poly.degree();
        std::vector<PadicElt> c;
        for (int i = 0; i <= ni; ++i) {
            PadicElt x = r.poly[i].shift_pi(k * (i - ni));
            c.push_back(x.with_prec(std::min(x.prec(), N)));
        }
        r.poly = IntPoly(F, c);
        if (k > 0) {
            r.poly_disc_val = disc_val_poly(r.poly);
            r.index_val = (r.poly_disc_val - r.disc_val) / 2;
            r.root_val = make_ratio(r.root_val.num - k * r.root_val.den, r.root_val.den);
        }
    }
    std::sort(recs.begin(), recs.end(), [](const FactorRecord& a, const FactorRecord& b) {
        if (a.poly.degree() != b.poly.degree()) return a.poly.degree() < b.poly.degree();
        return sort_key(a) < sort_key(b);
    });
    rep.factors = recs;

    IntPoly prod = IntPoly::constant(PadicElt::one(F, F.max_precision()));
    int deg = 0;
    bool ident = true;
    for (const auto& r : rep.factors) {
        prod = prod * r.poly;
        deg += r.e * r.f;
        ident = ident && (r.poly_disc_val == 2 * r.index_val + r.disc_val);
    }
    for (const auto& r : rep.factors) rep.precision = std::min(rep.precision, r.poly.min_prec());
    rep.product_ok = prod.equals(f_in);
    rep.degree_ok = deg == n;
    rep.index_identity_ok = ident;
    return rep;
}

nlohmann::json to_json(const FactorizationReport& r) {
    nlohmann::json j;
    j["input"] = r.input.to_string();
    j["precision"] = r.precision;
    nlohmann::json fs = nlohmann::json::array();
    for (const auto& f : r.factors) {
        nlohmann::json c = nlohmann::json::array();
        for (const auto& x : f.poly.coeffs()) c.push_back(x.to_string());
        fs.push_back({{"poly", f.poly.to_string()},
                      {"coefficients", c},
                      {"e", f.e},
                      {"f", f.f},
                      {"disc_val", f.disc_val},
                      {"index_val", f.index_val},
                      {"poly_disc_val", f.poly_disc_val},
                      {"root_valuation", f.root_val.to_string()}});
    }
    j["factors"] = fs;
    j["checks"] = {{"product", r.product_ok}, {"degree", r.degree_ok}, {"index_identity", r.index_identity_ok}};
    return j;
}

MaximalOrderReport maximal_order(const IntPoly& f) {
    const LocalField& F = f.field();
    Order O(f.with_prec(F.max_precision()));
    O.maximize();
    int n = f.degree();
    std::vector<Vec> tf(n, Vec(n));
    for (int a = 0; a < n; ++a) {
        Vec ea(n, PadicElt::zero(F, F.max_precision()));
        ea[a] = PadicElt::one(F, F.max_precision());
        for (int b = 0; b < n; ++b) {
            Vec eb(n, PadicElt::zero(F, F.max_precision()));
            eb[b] = PadicElt::one(F, F.max_precision());
            tf[a][b] = O.trace(O.mul(ea, eb));
        }
    }
    MaximalOrderReport r;
    r.disc_val = det_val(F, tf);
    r.index_val = O.index_val();
    r.basis = O.basis();
    return r;
}

}  // namespace springerlab
