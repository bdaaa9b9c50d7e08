#include "springerlab/residue_field.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "springerlab/errors.hpp"

namespace springerlab {

namespace {

constexpr int kMaxFieldSize = 1 << 20;

// Arithmetic in F_p[t] on digit vectors, used only while building tables.
std::vector<int> mulmod_digits(const std::vector<int>& x, const std::vector<int>& y,
                               const std::vector<int>& g, int p) {
    const int m = static_cast<int>(g.size()) - 1;
    std::vector<int> prod(2 * m, 0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
    for (int k = 2 * m - 2; k >= m; --k) {
        int c = prod[k];
        if (c == 0) continue;
        prod[k] = 0;
        for (int i = 0; i < m; ++i) prod[k - m + i] = ((prod[k - m + i] - c * g[i]) % p + p) % p;
    }
    prod.resize(m);
    return prod;
}

bool irreducible_over_fp(const std::vector<int>& g, int p) {
    // Trial division by all monic polynomials of degree <= m/2.
    const int m = static_cast<int>(g.size()) - 1;
    if (m == 1) return true;
    for (int d = 1; d <= m / 2; ++d) {
        long count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (long code = 0; code < count; ++code) {
            std::vector<int> h(d + 1, 0);
            long c = code;
            for (int i = 0; i < d; ++i) {
                h[i] = static_cast<int>(c % p);
                c /= p;
            }
            h[d] = 1;
            std::vector<int> r = g;
            for (int k = m; k >= d; --k) {
                int lead = r[k];
                if (lead == 0) continue;
                for (int i = 0; i <= d; ++i) r[k - d + i] = ((r[k - d + i] - lead * h[i]) % p + p) % p;
            }
            bool zero = true;
            for (int i = 0; i < d; ++i)
                if (r[i] != 0) zero = false;
            if (zero) return false;
        }
    }
    return true;
}

std::vector<int> smallest_irreducible(int p, int m) {
    long count = 1;
    for (int i = 0; i < m; ++i) count *= p;
    for (long code = 0; code < count; ++code) {
        std::vector<int> g(m + 1, 0);
        long c = code;
        for (int i = 0; i < m; ++i) {
            g[i] = static_cast<int>(c % p);
            c /= p;
        }
        g[m] = 1;
        if (g[0] == 0 && m > 1) continue;
        if (irreducible_over_fp(g, p)) return g;
    }
    throw DomainError("no irreducible polynomial found");
}

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace

const ResidueField& ResidueField::get(int p, int m) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<ResidueField>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, m);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    if (!is_prime(p)) throw DomainError("residue characteristic must be prime");
    if (m < 1) throw DomainError("residue degree must be positive");
    auto field = std::unique_ptr<ResidueField>(new ResidueField(p, m));
    const ResidueField& ref = *field;
    cache.emplace(key, std::move(field));
    return ref;
}

ResidueField::ResidueField(int p, int m) : p_(p), m_(m) {
    long q = 1;
    for (int i = 0; i < m; ++i) {
        q *= p;
        if (q > kMaxFieldSize) throw DomainError("residue field too large for table arithmetic");
    }
    q_ = static_cast<int>(q);
    pow_p_.resize(m + 1);
    pow_p_[0] = 1;
    for (int j = 1; j <= m; ++j) pow_p_[j] = pow_p_[j - 1] * p;
    modulus_ = smallest_irreducible(p, m);

    auto to_digits = [&](int a) {
        std::vector<int> d(m);
        for (int j = 0; j < m; ++j) {
            d[j] = a % p;
            a /= p;
        }
        return d;
    };
    auto encode = [&](const std::vector<int>& d) {
        int a = 0;
        for (int j = m - 1; j >= 0; --j) a = a * p + d[j];
        return a;
    };

    exp_.assign(2 * q_, 0);
    log_.assign(q_, -1);
    for (int cand = 1; cand < q_; ++cand) {
        std::vector<int> x(m, 0);
        x[0] = 1;
        std::vector<int> g = to_digits(cand);
        bool ok = true;
        std::vector<int> seen(q_, 0);
        for (int k = 0; k < q_ - 1; ++k) {
            int code = encode(x);
            if (seen[code]) {
                ok = false;
                break;
            }
            seen[code] = 1;
            exp_[k] = code;
            x = mulmod_digits(x, g, modulus_, p);
        }
        if (ok) {
            gen_ = cand;
            break;
        }
    }
    for (int k = 0; k < q_ - 1; ++k) {
        exp_[k + q_ - 1] = exp_[k];
        log_[exp_[k]] = k;
    }
    if (q_ <= 1024) {
        add_table_.resize(static_cast<size_t>(q_) * q_);
        for (int a = 0; a < q_; ++a)
            for (int b = 0; b < q_; ++b) {
                int s = 0;
                for (int j = m - 1; j >= 0; --j) s = s * p + ((a / pow_p_[j]) % p + (b / pow_p_[j]) % p) % p;
                add_table_[static_cast<size_t>(a) * q_ + b] = s;
            }
    }
}

int ResidueField::add(int a, int b) const {
    if (!add_table_.empty()) return add_table_[static_cast<size_t>(a) * q_ + b];
    int s = 0;
    for (int j = m_ - 1; j >= 0; --j) s = s * p_ + ((a / pow_p_[j]) % p_ + (b / pow_p_[j]) % p_) % p_;
    return s;
}

int ResidueField::neg(int a) const {
    int s = 0;
    for (int j = m_ - 1; j >= 0; --j) s = s * p_ + (p_ - (a / pow_p_[j]) % p_) % p_;
    return s;
}

int ResidueField::sub(int a, int b) const { return add(a, neg(b)); }

int ResidueField::mul(int a, int b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
}

int ResidueField::inv(int a) const {
    if (a == 0) throw DomainError("inverse of zero in residue field");
    int l = log_[a];
    return exp_[(q_ - 1 - l) % (q_ - 1)];
}

int ResidueField::pow(int a, std::uint64_t k) const {
    if (k == 0) return 1;
    if (a == 0) return 0;
    std::uint64_t l = static_cast<std::uint64_t>(log_[a]) * (k % static_cast<std::uint64_t>(q_ - 1));
    return exp_[l % static_cast<std::uint64_t>(q_ - 1)];
}

int ResidueField::from_int(std::int64_t k) const {
    std::int64_t r = k % p_;
    if (r < 0) r += p_;
    return static_cast<int>(r);
}

int ResidueField::digit(int a, int j) const { return (a / pow_p_[j]) % p_; }

int ResidueField::from_digits(const std::vector<int>& d) const {
    int a = 0;
    for (int j = m_ - 1; j >= 0; --j) a = a * p_ + (j < static_cast<int>(d.size()) ? ((d[j] % p_) + p_) % p_ : 0);
    return a;
}

FqMatrix FqMatrix::identity(int n) {
    FqMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

namespace fq {

void trim(FqPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const FqPoly& f) { return static_cast<int>(f.size()) - 1; }

FqPoly add(const ResidueField& F, const FqPoly& a, const FqPoly& b) {
    FqPoly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i)
        r[i] = F.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
    trim(r);
    return r;
}

FqPoly sub(const ResidueField& F, const FqPoly& a, const FqPoly& b) {
    FqPoly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i)
        r[i] = F.sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
    trim(r);
    return r;
}

FqPoly mul(const ResidueField& F, const FqPoly& a, const FqPoly& b) {
    if (a.empty() || b.empty()) return {};
    FqPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    trim(r);
    return r;
}

FqPoly scale(const ResidueField& F, const FqPoly& a, int c) {
    FqPoly r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], c);
    trim(r);
    return r;
}

void divmod(const ResidueField& F, const FqPoly& a, const FqPoly& b, FqPoly& q, FqPoly& r) {
    if (b.empty()) throw DomainError("polynomial division by zero");
    r = a;
    trim(r);
    const int db = degree(b);
    const int lead_inv = F.inv(b.back());
    q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, 0);
    while (degree(r) >= db) {
        int shift = degree(r) - db;
        int c = F.mul(r.back(), lead_inv);
        q[shift] = c;
        for (int i = 0; i <= db; ++i) r[shift + i] = F.sub(r[shift + i], F.mul(c, b[i]));
        trim(r);
    }
    trim(q);
}

FqPoly mod(const ResidueField& F, const FqPoly& a, const FqPoly& b) {
    FqPoly q, r;
    divmod(F, a, b, q, r);
    return r;
}

FqPoly monic(const ResidueField& F, const FqPoly& a) {
    if (a.empty()) return a;
    return scale(F, a, F.inv(a.back()));
}

FqPoly gcd(const ResidueField& F, FqPoly a, FqPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        FqPoly r = mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(F, a);
}

FqPoly ext_gcd(const ResidueField& F, const FqPoly& a, const FqPoly& b, FqPoly& s, FqPoly& t) {
    FqPoly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
    trim(r0);
    trim(r1);
    while (!r1.empty()) {
        FqPoly q, r;
        divmod(F, r0, r1, q, r);
        FqPoly s2 = sub(F, s0, mul(F, q, s1));
        FqPoly t2 = sub(F, t0, mul(F, q, t1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.empty()) {
        s = {};
        t = {};
        return {};
    }
    int c = F.inv(r0.back());
    s = scale(F, s0, c);
    t = scale(F, t0, c);
    return scale(F, r0, c);
}

FqPoly powmod(const ResidueField& F, const FqPoly& a, std::uint64_t k, const FqPoly& m) {
    FqPoly result{1};
    result = mod(F, result, m);
    FqPoly base = mod(F, a, m);
    while (k > 0) {
        if (k & 1) result = mod(F, mul(F, result, base), m);
        base = mod(F, mul(F, base, base), m);
        k >>= 1;
    }
    return result;
}

FqPoly derivative(const ResidueField& F, const FqPoly& a) {
    if (a.size() <= 1) return {};
    FqPoly r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = F.mul(a[i], F.from_int(static_cast<std::int64_t>(i)));
    trim(r);
    return r;
}

int eval(const ResidueField& F, const FqPoly& a, int x) {
    int r = 0;
    for (size_t i = a.size(); i-- > 0;) r = F.add(F.mul(r, x), a[i]);
    return r;
}

std::vector<int> roots(const ResidueField& F, const FqPoly& f) {
    std::vector<int> out;
    FqPoly g = f;
    trim(g);
    if (g.empty()) throw DomainError("roots of the zero polynomial");
    for (int x = 0; x < F.size(); ++x)
        if (eval(F, g, x) == 0) out.push_back(x);
    return out;
}

namespace {

// p-th root of a polynomial whose derivative vanishes.
FqPoly pth_root(const ResidueField& F, const FqPoly& f) {
    const int p = F.p();
    // a -> a^{q/p} inverts the Frobenius on coefficients.
    std::uint64_t e = static_cast<std::uint64_t>(F.size() / p);
    FqPoly r;
    for (size_t i = 0; i < f.size(); i += p) r.push_back(F.pow(f[i], e));
    trim(r);
    return r;
}

// Squarefree decomposition: returns (g_i, i) with f = prod g_i^i, each g_i squarefree.
std::vector<std::pair<FqPoly, int>> squarefree(const ResidueField& F, const FqPoly& f0) {
    std::vector<std::pair<FqPoly, int>> out;
    FqPoly f = monic(F, f0);
    if (degree(f) <= 0) return out;
    FqPoly df = derivative(F, f);
    if (df.empty()) {
        for (auto& [g, mult] : squarefree(F, pth_root(F, f))) out.emplace_back(g, mult * F.p());
        return out;
    }
    FqPoly c = gcd(F, f, df);
    FqPoly q, r;
    divmod(F, f, c, q, r);
    FqPoly w = q;
    int i = 1;
    while (degree(w) > 0) {
        FqPoly y = gcd(F, w, c);
        FqPoly z, rr;
        divmod(F, w, y, z, rr);
        if (degree(z) > 0) out.emplace_back(monic(F, z), i);
        w = y;
        FqPoly c2;
        divmod(F, c, y, c2, rr);
        c = c2;
        ++i;
    }
    if (degree(c) > 0) {
        for (auto& [g, mult] : squarefree(F, pth_root(F, c))) out.emplace_back(g, mult * F.p());
    }
    return out;
}

// Berlekamp splitting of a monic squarefree polynomial.
std::vector<FqPoly> berlekamp(const ResidueField& F, const FqPoly& f) {
    const int n = degree(f);
    if (n <= 1) return {f};
    FqMatrix Q(n, n);
    FqPoly xq = powmod(F, FqPoly{0, 1}, static_cast<std::uint64_t>(F.size()), f);
    FqPoly cur{1};
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) Q.at(i, j) = i < static_cast<int>(cur.size()) ? cur[i] : 0;
        Q.at(j, j) = F.sub(Q.at(j, j), 1);
        cur = mod(F, mul(F, cur, xq), f);
    }
    auto ker = kernel(F, Q);
    const size_t r = ker.size();
    std::vector<FqPoly> factors{f};
    if (r == 1) return factors;
    for (const auto& v : ker) {
        FqPoly vp(v.begin(), v.end());
        trim(vp);
        if (degree(vp) <= 0) continue;
        std::vector<FqPoly> next;
        for (const auto& g : factors) {
            if (degree(g) <= 1) {
                next.push_back(g);
                continue;
            }
            FqPoly rest = g;
            for (int c = 0; c < F.size() && degree(rest) > 0; ++c) {
                FqPoly shifted = vp;
                shifted[0] = F.sub(shifted[0], c);
                trim(shifted);
                FqPoly h = gcd(F, rest, shifted);
                if (degree(h) > 0 && degree(h) < degree(rest)) {
                    next.push_back(h);
                    FqPoly q2, r2;
                    divmod(F, rest, h, q2, r2);
                    rest = monic(F, q2);
                } else if (degree(h) == degree(rest) && degree(h) > 0 && degree(rest) < degree(g)) {
                    next.push_back(rest);
                    rest = {1};
                }
            }
            if (degree(rest) > 0) next.push_back(rest);
        }
        factors = std::move(next);
        if (factors.size() == r) break;
    }
    return factors;
}

}  // namespace

std::vector<std::pair<FqPoly, int>> factor(const ResidueField& F, const FqPoly& f) {
    std::vector<std::pair<FqPoly, int>> out;
    for (auto& [g, mult] : squarefree(F, f))
        for (auto& h : berlekamp(F, g)) out.emplace_back(monic(F, h), mult);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        return std::lexicographical_compare(a.first.rbegin(), a.first.rend(), b.first.rbegin(), b.first.rend());
    });
    return out;
}

FqMatrix mul(const ResidueField& F, const FqMatrix& x, const FqMatrix& y) {
    FqMatrix r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            int a = x.at(i, k);
            if (a == 0) continue;
            for (int j = 0; j < y.cols; ++j) r.at(i, j) = F.add(r.at(i, j), F.mul(a, y.at(k, j)));
        }
    return r;
}

std::vector<int> rref(const ResidueField& F, FqMatrix& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int sel = -1;
        for (int i = row; i < m.rows; ++i)
            if (m.at(i, col) != 0) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != row)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(row, j));
        int inv = F.inv(m.at(row, col));
        for (int j = 0; j < m.cols; ++j) m.at(row, j) = F.mul(m.at(row, j), inv);
        for (int i = 0; i < m.rows; ++i) {
            if (i == row || m.at(i, col) == 0) continue;
            int c = m.at(i, col);
            for (int j = 0; j < m.cols; ++j) m.at(i, j) = F.sub(m.at(i, j), F.mul(c, m.at(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

int rank(const ResidueField& F, FqMatrix m) { return static_cast<int>(rref(F, m).size()); }

std::vector<std::vector<int>> kernel(const ResidueField& F, const FqMatrix& m0) {
    FqMatrix m = m0;
    auto pivots = rref(F, m);
    std::vector<int> is_pivot(m.cols, -1);
    for (size_t r = 0; r < pivots.size(); ++r) is_pivot[pivots[r]] = static_cast<int>(r);
    std::vector<std::vector<int>> basis;
    for (int free = 0; free < m.cols; ++free) {
        if (is_pivot[free] >= 0) continue;
        std::vector<int> v(m.cols, 0);
        v[free] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = F.neg(m.at(static_cast<int>(r), free));
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<int> apply(const ResidueField& F, const FqMatrix& m, const std::vector<int>& v) {
    std::vector<int> r(m.rows, 0);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r[i] = F.add(r[i], F.mul(m.at(i, j), v[j]));
    return r;
}

FqPoly charpoly(const ResidueField& F, const FqMatrix& m) {
    // Hessenberg-free: Faddeev-style via determinant expansion is unsafe in char p,
    // so use the Berkowitz recursion.
    const int n = m.rows;
    std::vector<int> c{1};  // charpoly of the empty leading block, high degree first
    for (int k = 0; k < n; ++k) {
        // leading (k+1)x(k+1) block: A = [[a, R],[S, M]] with a = m(k,k) and M the previous block
        std::vector<int> R(k), S(k);
        for (int j = 0; j < k; ++j) {
            R[j] = m.at(k, j);
            S[j] = m.at(j, k);
        }
        const int a = m.at(k, k);
        // Toeplitz column: 1, -a, -R S, -R M S, ...
        std::vector<int> col(k + 2, 0);
        col[0] = 1;
        col[1] = F.neg(a);
        std::vector<int> v = S;
        for (int t = 2; t <= k + 1; ++t) {
            int dot = 0;
            for (int j = 0; j < k; ++j) dot = F.add(dot, F.mul(R[j], v[j]));
            col[t] = F.neg(dot);
            std::vector<int> w(k, 0);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) w[i] = F.add(w[i], F.mul(m.at(i, j), v[j]));
            v = std::move(w);
        }
        std::vector<int> next(k + 2, 0);
        for (int i = 0; i < k + 2; ++i)
            for (int j = 0; j <= i && j < static_cast<int>(c.size()); ++j)
                next[i] = F.add(next[i], F.mul(col[i - j], c[j]));
        c = std::move(next);
    }
    FqPoly out(c.rbegin(), c.rend());
    trim(out);
    return out;
}

}  // namespace fq

}  // namespace springerlab
