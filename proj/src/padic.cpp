#include "springerlab/padic.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "springerlab/errors.hpp"

namespace springerlab {

using Core = PadicElt::Core;
using boost::multiprecision::cpp_int;

struct FieldData {
    int p = 0, m = 1, e = 1;
    int kmax = 0;
    std::vector<std::int64_t> ppow;  // p^0 .. p^kmax
    const ResidueField* res = nullptr;
    std::vector<std::int64_t> gmod;               // lifted residue modulus, monic, size m+1
    std::vector<std::vector<std::int64_t>> eis;   // c_0..c_{e-1} mod p^kmax, each m entries
    std::vector<std::vector<std::int64_t>> eis_input;  // as given, including the leading 1
    Core hinv{};  // h with ϖ*h = p, mod p^kmax

    mutable std::mutex mu;
    mutable std::map<const FieldData*, std::vector<std::int64_t>> embed_cache;  // image of t in target W
};

namespace {

constexpr std::int64_t kCapacity = std::int64_t(1) << 62;

inline std::int64_t md(__int128 v, std::int64_t M) {
    __int128 r = v % M;
    if (r < 0) r += M;
    return static_cast<std::int64_t>(r);
}

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t M) {
    return static_cast<std::int64_t>((static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b)) %
                                     static_cast<unsigned __int128>(M));
}

// a, b: m-vectors of W-coefficients in [0, M); out = a*b mod (g, M).
void mulW(const FieldData& F, const std::int64_t* a, const std::int64_t* b, std::int64_t* out, std::int64_t M) {
    const int m = F.m;
    if (m == 1) {
        out[0] = mulmod(a[0], b[0], M);
        return;
    }
    std::int64_t tmp[2 * PadicElt::kMaxComponents];
    std::fill(tmp, tmp + 2 * m - 1, 0);
    for (int i = 0; i < m; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < m; ++j) {
            if (b[j] == 0) continue;
            std::int64_t s = tmp[i + j] + mulmod(a[i], b[j], M);
            if (s >= M) s -= M;
            tmp[i + j] = s;
        }
    }
    for (int k = 2 * m - 2; k >= m; --k) {
        std::int64_t c = tmp[k];
        if (c == 0) continue;
        for (int i = 0; i < m; ++i) {
            if (F.gmod[i] == 0) continue;
            std::int64_t s = tmp[k - m + i] - mulmod(c, F.gmod[i], M);
            if (s < 0) s += M;
            tmp[k - m + i] = s;
        }
    }
    std::copy(tmp, tmp + m, out);
}

// Largest relative precision the fixed-width cores can carry.
int capacity(const FieldData& F) { return F.e * (F.kmax - 1); }

int k_for(const FieldData& F, int R) {
    int K = (R + F.e - 1) / F.e + 1;
    if (K < 1) K = 1;
    if (K > F.kmax)
        throw PrecisionError("precision " + std::to_string(R) + " exceeds the fixed-width capacity " +
                                 std::to_string(F.e * (F.kmax - 1)) + " of this field",
                             F.e * (F.kmax - 1));
    return K;
}

void reduce_core(const FieldData& F, Core& c, std::int64_t M) {
    const int d = F.e * F.m;
    for (int i = 0; i < d; ++i) {
        c[i] %= M;
        if (c[i] < 0) c[i] += M;
    }
}

Core mul_core(const FieldData& F, const Core& x, const Core& y, std::int64_t M) {
    const int e = F.e, m = F.m;
    Core out{};
    if (e == 1) {
        mulW(F, x.data(), y.data(), out.data(), M);
        return out;
    }
    std::int64_t tmp[2 * PadicElt::kMaxComponents][PadicElt::kMaxComponents];
    for (int k = 0; k < 2 * e - 1; ++k) std::fill(tmp[k], tmp[k] + m, 0);
    std::int64_t w[PadicElt::kMaxComponents];
    for (int i = 0; i < e; ++i)
        for (int j = 0; j < e; ++j) {
            mulW(F, x.data() + i * m, y.data() + j * m, w, M);
            for (int t = 0; t < m; ++t) {
                std::int64_t s = tmp[i + j][t] + w[t];
                if (s >= M) s -= M;
                tmp[i + j][t] = s;
            }
        }
    std::int64_t ce[PadicElt::kMaxComponents];
    for (int k = 2 * e - 2; k >= e; --k) {
        bool nz = false;
        for (int t = 0; t < m; ++t) nz |= tmp[k][t] != 0;
        if (!nz) continue;
        for (int i = 0; i < e; ++i) {
            for (int t = 0; t < m; ++t) ce[t] = F.eis[i][t] % M;
            mulW(F, tmp[k], ce, w, M);
            for (int t = 0; t < m; ++t) {
                std::int64_t s = tmp[k - e + i][t] - w[t];
                if (s < 0) s += M;
                tmp[k - e + i][t] = s;
            }
        }
    }
    for (int i = 0; i < e; ++i)
        for (int t = 0; t < m; ++t) out[i * m + t] = tmp[i][t];
    return out;
}

// Multiply by ϖ^k, k >= 0.
Core mul_pi(const FieldData& F, Core c, int k, std::int64_t M) {
    const int e = F.e, m = F.m;
    if (k <= 0) return c;
    if (e == 1) {
        std::int64_t f = 1;
        for (int i = 0; i < k && f != 0; ++i) f = mulmod(f, F.p, M);
        for (int t = 0; t < m; ++t) c[t] = mulmod(c[t], f, M);
        return c;
    }
    std::int64_t w[PadicElt::kMaxComponents], ce[PadicElt::kMaxComponents];
    for (int step = 0; step < k; ++step) {
        std::int64_t top[PadicElt::kMaxComponents];
        std::copy(c.begin() + (e - 1) * m, c.begin() + e * m, top);
        for (int i = e - 1; i >= 1; --i)
            for (int t = 0; t < m; ++t) c[i * m + t] = c[(i - 1) * m + t];
        for (int t = 0; t < m; ++t) c[t] = 0;
        bool nz = false;
        for (int t = 0; t < m; ++t) nz |= top[t] != 0;
        if (!nz) continue;
        for (int i = 0; i < e; ++i) {
            for (int t = 0; t < m; ++t) ce[t] = F.eis[i][t] % M;
            mulW(F, top, ce, w, M);
            for (int t = 0; t < m; ++t) {
                std::int64_t s = c[i * m + t] - w[t];
                if (s < 0) s += M;
                c[i * m + t] = s;
            }
        }
    }
    return c;
}

// Canonical representative modulo ϖ^R.
void canonicalize(const FieldData& F, Core& c, int R) {
    const int e = F.e, m = F.m;
    for (int i = 0; i < e; ++i) {
        int k = R > i ? (R - i + e - 1) / e : 0;
        if (k > F.kmax) k = F.kmax;
        std::int64_t M = F.ppow[k];
        for (int t = 0; t < m; ++t) {
            std::int64_t v = c[i * m + t] % M;
            if (v < 0) v += M;
            c[i * m + t] = v;
        }
    }
    for (int i = e * m; i < PadicElt::kMaxComponents; ++i) c[i] = 0;
}

int vp(std::int64_t v, int p) {
    int k = 0;
    while (v % p == 0) {
        v /= p;
        ++k;
    }
    return k;
}

// Valuation of a canonical core modulo ϖ^R, or R if it vanishes there.
int val_core(const FieldData& F, const Core& c, int R) {
    const int e = F.e, m = F.m;
    int best = R;
    for (int i = 0; i < e; ++i)
        for (int t = 0; t < m; ++t) {
            std::int64_t v = c[i * m + t];
            if (v == 0) continue;
            best = std::min(best, e * vp(v, F.p) + i);
        }
    return best;
}

int residue_core(const FieldData& F, const Core& c) {
    std::vector<int> d(F.m);
    for (int t = 0; t < F.m; ++t) d[t] = static_cast<int>(c[t] % F.p);
    return F.res->from_digits(d);
}

Core rep_core(const FieldData& F, int r) {
    Core c{};
    for (int t = 0; t < F.m; ++t) c[t] = F.res->digit(r, t);
    return c;
}

// Exact division by ϖ of a core divisible by ϖ; input valid mod p^K, output mod p^(K-1).
Core div_pi(const FieldData& F, const Core& c, int K) {
    std::int64_t M = F.ppow[K];
    Core z = F.e == 1 ? c : mul_core(F, c, F.hinv, M);
    const int d = F.e * F.m;
    for (int i = 0; i < d; ++i) {
        std::int64_t v = ((z[i] % M) + M) % M;
        if (v % F.p != 0) throw DomainError("internal: division by the uniformizer is not exact");
        z[i] = v / F.p;
    }
    return z;
}

Core add_core(const FieldData& F, const Core& a, const Core& b, std::int64_t M) {
    Core r{};
    const int d = F.e * F.m;
    for (int i = 0; i < d; ++i) {
        std::int64_t s = a[i] % M + b[i] % M;
        if (s >= M) s -= M;
        r[i] = s;
    }
    return r;
}

Core neg_core(const FieldData& F, const Core& a, std::int64_t M) {
    Core r{};
    const int d = F.e * F.m;
    for (int i = 0; i < d; ++i) {
        std::int64_t v = a[i] % M;
        r[i] = v == 0 ? 0 : M - v;
    }
    return r;
}

// Inverse of a unit core modulo ϖ^R by Newton iteration.
Core unit_inv(const FieldData& F, const Core& u, int R) {
    int K = k_for(F, R);
    std::int64_t M = F.ppow[K];
    int r = residue_core(F, u);
    Core y = rep_core(F, F.res->inv(r));
    Core two{};
    two[0] = 2 % M;
    int known = 1;
    while (known < R) {
        Core uy = mul_core(F, u, y, M);
        Core t = add_core(F, two, neg_core(F, uy, M), M);
        y = mul_core(F, y, t, M);
        known *= 2;
    }
    canonicalize(F, y, R);
    return y;
}

// Unit inverse in W(F_q) modulo p^K (vector of m entries).
std::vector<std::int64_t> w_inv(const FieldData& F, const std::vector<std::int64_t>& a, int K) {
    std::int64_t M = F.ppow[K];
    std::vector<int> digs(F.m);
    for (int t = 0; t < F.m; ++t) digs[t] = static_cast<int>(((a[t] % F.p) + F.p) % F.p);
    int r = F.res->from_digits(digs);
    if (r == 0) throw DomainError("internal: W element is not a unit");
    int ri = F.res->inv(r);
    std::vector<std::int64_t> y(F.m);
    for (int t = 0; t < F.m; ++t) y[t] = F.res->digit(ri, t);
    std::vector<std::int64_t> tmp(F.m), t2(F.m);
    std::vector<std::int64_t> aa(F.m);
    for (int t = 0; t < F.m; ++t) aa[t] = md(a[t], M);
    for (int known = 1; known < K; known *= 2) {
        mulW(F, aa.data(), y.data(), tmp.data(), M);
        for (int t = 0; t < F.m; ++t) tmp[t] = md(-static_cast<__int128>(tmp[t]) + (t == 0 ? 2 : 0), M);
        mulW(F, y.data(), tmp.data(), t2.data(), M);
        y = t2;
    }
    return y;
}

std::string pi_symbol() { return "\xCF\x96"; }  // ϖ

}  // namespace

// ---------------------------------------------------------------------------
// LocalField

namespace {

std::mutex g_field_mu;
std::map<std::tuple<int, int, std::vector<std::vector<std::int64_t>>>, std::unique_ptr<FieldData>> g_fields;

bool is_prime_int(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace

LocalField LocalField::unramified(int p, int m) { return make(p, m, {}); }

LocalField LocalField::make(int p, int m, const std::vector<std::vector<std::int64_t>>& eis_in) {
    if (!is_prime_int(p)) throw DomainError("p must be prime");
    if (m < 1) throw DomainError("unramified degree must be positive");
    const ResidueField& res = ResidueField::get(p, m);

    int kmax = 0;
    std::int64_t pk = 1;
    while (pk <= kCapacity / p) {
        pk *= p;
        ++kmax;
    }

    std::vector<std::vector<std::int64_t>> eis = eis_in;
    // Reduce t-coefficient vectors to length m, canonical mod p^kmax.
    for (auto& c : eis) {
        c.resize(m, 0);
        for (auto& v : c) v = md(v, pk);
    }
    // x - p is the trivial Eisenstein polynomial.
    if (eis.size() == 2) {
        std::vector<std::int64_t> minus_p(m, 0), one(m, 0);
        minus_p[0] = md(-p, pk);
        one[0] = 1;
        if (eis[0] == minus_p && eis[1] == one) eis.clear();
    }
    int e = eis.empty() ? 1 : static_cast<int>(eis.size()) - 1;
    if (e * m > PadicElt::kMaxComponents)
        throw DomainError("field too large: e*m must be at most " + std::to_string(PadicElt::kMaxComponents));

    std::lock_guard<std::mutex> lock(g_field_mu);
    auto key = std::make_tuple(p, m, eis);
    auto it = g_fields.find(key);
    if (it != g_fields.end()) return LocalField(it->second.get());

    auto fd = std::make_unique<FieldData>();
    fd->p = p;
    fd->m = m;
    fd->e = e;
    fd->kmax = kmax;
    fd->ppow.resize(kmax + 1);
    fd->ppow[0] = 1;
    for (int k = 1; k <= kmax; ++k) fd->ppow[k] = fd->ppow[k - 1] * p;
    fd->res = &res;
    fd->gmod.assign(res.modulus().begin(), res.modulus().end());
    fd->eis_input = eis;

    if (e == 1) {
        fd->eis = {std::vector<std::int64_t>(m, 0)};
        fd->eis[0][0] = md(-p, pk);
        fd->hinv.fill(0);
        fd->hinv[0] = 1;
    } else {
        // Eisenstein criterion on c_0..c_{e-1}; leading coefficient must be 1.
        std::vector<std::int64_t> one(m, 0);
        one[0] = 1;
        if (eis[e] != one) throw DomainError("Eisenstein polynomial must be monic");
        for (int i = 0; i < e; ++i)
            for (int t = 0; t < m; ++t)
                if (eis[i][t] % p != 0) throw DomainError("Eisenstein polynomial: lower coefficients must be divisible by p");
        std::vector<std::int64_t> u0(m);
        bool unit = false;
        for (int t = 0; t < m; ++t) {
            u0[t] = eis[0][t] / p;
            if (u0[t] % p != 0) unit = true;
        }
        if (!unit) throw DomainError("Eisenstein polynomial: constant term must have valuation exactly 1");
        fd->eis.assign(eis.begin(), eis.begin() + e);
        // h = -(ϖ^{e-1} + c_{e-1} ϖ^{e-2} + ... + c_1) * u0^{-1}, so that ϖ h = p.
        // u0 = c_0 / p is only known mod p^(kmax-1).
        std::vector<std::int64_t> u0inv = w_inv(*fd, u0, kmax - 1);
        std::int64_t M = pk;
        Core h{};
        for (int i = 0; i < e - 1; ++i)
            for (int t = 0; t < m; ++t) h[i * m + t] = eis[i + 1][t];
        h[(e - 1) * m] = (h[(e - 1) * m] + 1) % M;
        Core uc{};
        for (int t = 0; t < m; ++t) uc[t] = u0inv[t];
        Core hu = mul_core(*fd, h, uc, M);
        fd->hinv = neg_core(*fd, hu, M);
    }
    FieldData* raw = fd.get();
    g_fields.emplace(key, std::move(fd));
    return LocalField(raw);
}

int LocalField::p() const { return d_->p; }
int LocalField::unram_deg() const { return d_->m; }
int LocalField::e() const { return d_->e; }
std::int64_t LocalField::residue_card() const { return d_->res->size(); }
const ResidueField& LocalField::residue_field() const { return *d_->res; }
int LocalField::max_precision() const { return d_->e * (d_->kmax - 2); }
const std::vector<std::vector<std::int64_t>>& LocalField::eisenstein_coeffs() const { return d_->eis_input; }

LocalField LocalField::unramified_extension(int k) const {
    if (k < 1) throw DomainError("extension degree must be positive");
    if (k == 1) return *this;
    if (d_->e == 1) return unramified(d_->p, d_->m * k);
    // Eisenstein coefficients are re-expressed through the embedding of W(F_{p^m}).
    LocalField base_small = unramified(d_->p, d_->m);
    LocalField base_big = unramified(d_->p, d_->m * k);
    std::vector<std::vector<std::int64_t>> coeffs;
    for (const auto& c : d_->eis_input) {
        PadicElt x = PadicElt::zero(base_small, base_small.max_precision());
        PadicElt t = PadicElt::unram_generator(base_small, base_small.max_precision());
        PadicElt tp = PadicElt::one(base_small, base_small.max_precision());
        for (int j = 0; j < d_->m; ++j) {
            x = x + PadicElt::from_int(base_small, c[j], base_small.max_precision()) * tp;
            tp = tp * t;
        }
        PadicElt y = x.extend(base_big);
        std::vector<std::int64_t> v(y.core().begin(), y.core().begin() + d_->m * k);
        coeffs.push_back(v);
    }
    return make(d_->p, d_->m * k, coeffs);
}

LocalField LocalField::unramified_subfield() const { return unramified(d_->p, d_->m); }

std::string LocalField::describe() const {
    std::ostringstream os;
    os << "p=" << d_->p << " unram=" << d_->m << " e=" << d_->e;
    return os.str();
}

// ---------------------------------------------------------------------------
// PadicElt

void PadicElt::normalize() {
    const FieldData& F = *f_;
    // Precision beyond the fixed-width capacity is dropped (always sound).
    prec_ = std::min(prec_, std::min(shift_, 0) + capacity(F));
    int R = prec_ - shift_;
    if (R <= 0) {
        shift_ = std::min(prec_, 0);
        c_.fill(0);
        return;
    }
    if (shift_ > 0) {
        int K = k_for(F, prec_);
        std::int64_t M = F.ppow[K];
        reduce_core(F, c_, M);
        c_ = mul_pi(F, c_, shift_, M);
        shift_ = 0;
        R = prec_;
    }
    canonicalize(F, c_, R);
    while (shift_ < 0 && residue_core(F, c_) == 0) {
        if (R <= 1) {
            shift_ = std::min(prec_, 0);
            c_.fill(0);
            return;
        }
        int K = k_for(F, R);
        c_ = div_pi(F, c_, K);
        ++shift_;
        --R;
        canonicalize(F, c_, R);
    }
}

PadicElt PadicElt::zero(const LocalField& F, int prec) {
    PadicElt x(F.d_, std::min(prec, 0), prec);
    return x;
}

PadicElt PadicElt::one(const LocalField& F, int prec) { return from_int(F, 1, prec); }

PadicElt PadicElt::from_int(const LocalField& F, std::int64_t v, int prec) {
    PadicElt x(F.d_, 0, prec);
    if (prec <= 0) return zero(F, prec);
    const FieldData& d = *F.d_;
    if (d.e == 1) {
        int K = k_for(d, prec);
        x.c_[0] = md(v, d.ppow[K]);
        x.normalize();
        return x;
    }
    // p = ϖ^e * (unit); build through exact integer arithmetic on the W-component.
    int K = k_for(d, prec);
    x.c_[0] = md(v, d.ppow[K]);
    x.normalize();
    return x;
}

PadicElt PadicElt::from_decimal(const LocalField& F, const std::string& text, int prec) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw ParseError("empty number");
    auto slash = s.find('/');
    std::string num_s = s.substr(0, slash);
    std::string den_s = slash == std::string::npos ? "1" : s.substr(slash + 1);
    auto parse_int = [](const std::string& t) {
        if (t.empty() || t == "-" || t == "+") throw ParseError("malformed integer '" + t + "'");
        for (size_t i = 0; i < t.size(); ++i)
            if (!(std::isdigit(static_cast<unsigned char>(t[i])) || (i == 0 && (t[i] == '-' || t[i] == '+'))))
                throw ParseError("malformed integer '" + t + "'");
        return cpp_int(t[0] == '+' ? t.substr(1) : t);
    };
    cpp_int num = parse_int(num_s), den = parse_int(den_s);
    if (den == 0) throw ParseError("zero denominator");
    const FieldData& d = *F.d_;
    int vden = 0;
    while (den % d.p == 0) {
        den /= d.p;
        ++vden;
    }
    int vnum = 0;
    if (num != 0)
        while (num % d.p == 0) {
            num /= d.p;
            ++vnum;
        }
    // value = p^(vnum - vden) * num/den with num, den p-units.
    int shift_p = vnum - vden;
    if (num == 0) return zero(F, prec);
    int work = std::min(prec - d.e * shift_p + 2, capacity(d));
    if (work < 1) return zero(F, prec);
    int K = k_for(d, work);
    cpp_int M = d.ppow[K];
    auto reduce = [&](cpp_int a) {
        a %= M;
        if (a < 0) a += M;
        return static_cast<std::int64_t>(a);
    };
    PadicElt n = from_int(F, reduce(num), work);
    PadicElt dd = from_int(F, reduce(den), work);
    PadicElt u = n * dd.inv();
    PadicElt pp = from_int(F, d.p, std::min(work + d.e * std::abs(shift_p) + 2, capacity(d)));
    PadicElt scale = shift_p >= 0 ? pp.pow(shift_p) : pp.pow(-shift_p).inv();
    return (u * scale).with_prec(prec);
}

PadicElt PadicElt::from_residue(const LocalField& F, int r, int prec) {
    if (prec <= 0) return zero(F, prec);
    PadicElt x(F.d_, 0, prec);
    x.c_ = rep_core(*F.d_, r);
    x.normalize();
    return x;
}

PadicElt PadicElt::uniformizer(const LocalField& F, int prec) { return pi_power(F, 1, prec); }

PadicElt PadicElt::pi_power(const LocalField& F, int k, int prec) {
    PadicElt x(F.d_, k, prec);
    if (prec - k <= 0) return zero(F, prec);
    x.c_.fill(0);
    x.c_[0] = 1;
    x.normalize();
    return x;
}

PadicElt PadicElt::unram_generator(const LocalField& F, int prec) {
    if (prec <= 0) return zero(F, prec);
    PadicElt x(F.d_, 0, prec);
    if (F.d_->m == 1) {
        // W(F_p) = Z_p; the generator is the digit representative of the residue generator root.
        x.c_[0] = md(-F.d_->gmod[0], F.d_->ppow[F.d_->kmax]);
    } else {
        x.c_[1] = 1;
    }
    x.normalize();
    return x;
}

bool PadicElt::is_zero() const { return val_core(*f_, c_, prec_ - shift_) >= prec_ - shift_; }

std::optional<int> PadicElt::val() const {
    int R = prec_ - shift_;
    int v = val_core(*f_, c_, R);
    if (v >= R) return std::nullopt;
    return shift_ + v;
}

int PadicElt::val_or_prec() const {
    auto v = val();
    return v ? *v : prec_;
}

bool PadicElt::is_unit() const {
    auto v = val();
    return v && *v == 0;
}

int PadicElt::residue() const {
    if (shift_ < 0 && !is_zero()) throw DomainError("residue of a non-integral element");
    if (prec_ < 1) throw PrecisionError("insufficient precision: residue needs precision at least 1", 1);
    return residue_core(*f_, c_);
}

PadicElt PadicElt::operator+(const PadicElt& o) const {
    if (f_ != o.f_) throw DomainError("arithmetic across different fields");
    const FieldData& F = *f_;
    int N = std::min(prec_, o.prec_);
    int s = std::min(shift_, o.shift_);
    N = std::min(N, s + capacity(F));
    PadicElt r(f_, s, N);
    int R = N - s;
    if (R <= 0) return zero(field(), N);
    int K = k_for(F, R);
    std::int64_t M = F.ppow[K];
    Core a = mul_pi(F, c_, shift_ - s, M);
    Core b = mul_pi(F, o.c_, o.shift_ - s, M);
    r.c_ = add_core(F, a, b, M);
    r.normalize();
    return r;
}

PadicElt PadicElt::operator-() const {
    PadicElt r = *this;
    int R = prec_ - shift_;
    if (R <= 0) return r;
    int K = k_for(*f_, R);
    r.c_ = neg_core(*f_, c_, f_->ppow[K]);
    r.normalize();
    return r;
}

PadicElt PadicElt::operator-(const PadicElt& o) const { return *this + (-o); }

PadicElt PadicElt::operator*(const PadicElt& o) const {
    if (f_ != o.f_) throw DomainError("arithmetic across different fields");
    const FieldData& F = *f_;
    int vx = val_or_prec(), vy = o.val_or_prec();
    int N = std::min(prec_ + vy, o.prec_ + vx);
    int s = shift_ + o.shift_;
    N = std::min(N, s + capacity(F));
    int R = N - s;
    if (R <= 0) return zero(field(), N);
    PadicElt r(f_, s, N);
    int K = k_for(F, R);
    std::int64_t M = F.ppow[K];
    r.c_ = mul_core(F, c_, o.c_, M);
    r.normalize();
    return r;
}

PadicElt PadicElt::inv() const {
    auto v = val();
    if (!v)
        throw PrecisionError("insufficient precision: cannot invert an element indistinguishable from zero modulo " +
                                 pi_symbol() + "^" + std::to_string(prec_) + "; raise precision above " +
                                 std::to_string(prec_),
                             2 * std::max(prec_, 1));
    const FieldData& F = *f_;
    int N = prec_ - 2 * *v;
    Core u;
    int R;
    if (shift_ < 0) {
        u = c_;
        R = prec_ - shift_;
    } else {
        // Strip ϖ^v from the integral core.
        R = prec_;
        u = c_;
        for (int i = 0; i < *v; ++i) {
            int K = k_for(F, R);
            u = div_pi(F, u, K);
            --R;
            canonicalize(F, u, R);
        }
    }
    Core y = unit_inv(F, u, R);
    PadicElt r(f_, -*v, N);
    r.c_ = y;
    r.normalize();
    return r;
}

PadicElt PadicElt::pow(std::uint64_t k) const {
    if (k == 0) return one(field(), prec_);
    PadicElt result;
    PadicElt base = *this;
    bool first = true;
    while (k > 0) {
        if (k & 1) {
            result = first ? base : result * base;
            first = false;
        }
        k >>= 1;
        if (k > 0) base = base * base;
    }
    return result;
}

PadicElt PadicElt::with_prec(int N) const {
    PadicElt r = *this;
    if (N == prec_) return r;
    if (N > prec_ && is_zero()) return zero(field(), N);
    r.prec_ = N;
    r.normalize();
    return r;
}

PadicElt PadicElt::shift_pi(int k) const {
    if (k == 0) return *this;
    if (is_zero()) return zero(field(), prec_ + k);
    PadicElt r = *this;
    r.shift_ += k;
    r.prec_ += k;
    r.normalize();
    return r;
}

PadicElt PadicElt::truncate_digits(int k) const { return with_prec(std::min(k, prec_)).with_prec(prec_); }

std::vector<int> PadicElt::digits() const {
    const FieldData& F = *f_;
    int R = prec_ - shift_;
    std::vector<int> out;
    if (R <= 0) return out;
    Core c = c_;
    int cur = R;
    for (int i = 0; i < R; ++i) {
        int r = residue_core(F, c);
        out.push_back(r);
        if (i + 1 == R) break;
        int K = k_for(F, cur);
        std::int64_t M = F.ppow[K];
        c = add_core(F, c, neg_core(F, rep_core(F, r), M), M);
        c = div_pi(F, c, K);
        --cur;
        canonicalize(F, c, cur);
    }
    return out;
}

std::string PadicElt::to_string() const {
    std::ostringstream os;
    std::vector<int> d = digits();
    std::string body;
    for (size_t i = 0; i < d.size(); ++i) {
        if (i) body += ",";
        body += std::to_string(d[i]);
    }
    if (shift_ < 0)
        os << pi_symbol() << "^" << shift_ << "*(" << body << ") (mod " << pi_symbol() << "^" << prec_ << ")";
    else if (body.empty())
        os << "(mod " << pi_symbol() << "^" << prec_ << ")";
    else
        os << body << " (mod " << pi_symbol() << "^" << prec_ << ")";
    return os.str();
}

std::optional<std::int64_t> PadicElt::to_balanced_int() const {
    const FieldData& F = *f_;
    if (F.e != 1 || F.m != 1 || shift_ < 0 || prec_ <= 0) return std::nullopt;
    std::int64_t M = F.ppow[std::min(prec_, F.kmax)];
    std::int64_t v = c_[0] % M;
    if (v > M / 2) v -= M;
    return v;
}

std::vector<std::int64_t> PadicElt::key() const {
    std::vector<std::int64_t> k;
    k.reserve(2 + f_->e * f_->m);
    k.push_back(shift_);
    k.push_back(prec_);
    for (int i = 0; i < f_->e * f_->m; ++i) k.push_back(c_[i]);
    return k;
}

PadicElt PadicElt::parse_digits(const LocalField& F, const std::string& text_in) {
    std::string s = text_in;
    // Normalize the uniformizer spelling.
    for (;;) {
        auto pos = s.find(pi_symbol());
        if (pos == std::string::npos) break;
        s.replace(pos, pi_symbol().size(), "pi");
    }
    std::string t;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    auto mpos = t.find("(modpi^");
    if (mpos == std::string::npos) throw ParseError("digit literal must end with '(mod ϖ^N)'");
    std::string tail = t.substr(mpos + 7);
    if (tail.empty() || tail.back() != ')') throw ParseError("malformed precision suffix");
    tail.pop_back();
    int N;
    try {
        size_t used = 0;
        N = std::stoi(tail, &used);
        if (used != tail.size()) throw ParseError("malformed precision");
    } catch (const std::logic_error&) {
        throw ParseError("malformed precision '" + tail + "'");
    }
    std::string head = t.substr(0, mpos);
    int shift = 0;
    if (head.rfind("pi^", 0) == 0) {
        auto star = head.find("*(");
        if (star == std::string::npos || head.back() != ')') throw ParseError("malformed shifted digit literal");
        try {
            shift = std::stoi(head.substr(3, star - 3));
        } catch (const std::logic_error&) {
            throw ParseError("malformed shift");
        }
        head = head.substr(star + 2, head.size() - star - 3);
    }
    std::vector<int> d;
    if (!head.empty()) {
        std::stringstream ss(head);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) throw ParseError("empty digit");
            for (char ch : tok)
                if (!std::isdigit(static_cast<unsigned char>(ch))) throw ParseError("malformed digit '" + tok + "'");
            long v = std::stol(tok);
            if (v < 0 || v >= F.residue_card()) throw ParseError("digit out of range: " + tok);
            d.push_back(static_cast<int>(v));
        }
    }
    if (static_cast<int>(d.size()) > N - shift) throw ParseError("more digits than the precision allows");
    if (shift > 0) throw ParseError("shift must be negative");
    int R = N - shift;
    if (R <= 0) return zero(F, N);
    PadicElt core = zero(F, R);
    PadicElt pi = uniformizer(F, R);
    PadicElt pk = one(F, R);
    for (int i = 0; i < static_cast<int>(d.size()); ++i) {
        core = core + from_residue(F, d[i], R) * pk;
        pk = pk * pi;
    }
    PadicElt r = core.with_prec(R).shift_pi(shift);
    return r;
}

PadicElt PadicElt::extend(const LocalField& target) const {
    const FieldData& S = *f_;
    const FieldData& T = *target.d_;
    if (&S == &T) return *this;
    if (S.p != T.p || T.m % S.m != 0 || S.e != T.e)
        throw TowerMismatch("target field does not refine the source field");
    std::vector<std::int64_t> tau;
    {
        std::lock_guard<std::mutex> lock(S.mu);
        auto it = S.embed_cache.find(&T);
        if (it != S.embed_cache.end()) tau = it->second;
    }
    if (tau.empty()) {
        // Root of the residue modulus of S in the residue field of T, Hensel-lifted.
        LocalField Wt = LocalField::unramified(T.p, T.m);
        const ResidueField& RT = *T.res;
        FqPoly gbar;
        // Express S's residue modulus (coefficients in F_p) inside F_{q_T}.
        for (auto c : S.gmod) gbar.push_back(RT.from_int(c));
        int root = -1;
        for (int x = 0; x < RT.size(); ++x)
            if (fq::eval(RT, gbar, x) == 0) {
                root = x;
                break;
            }
        if (root < 0) throw TowerMismatch("residue field does not embed");
        int P = Wt.max_precision();
        PadicElt r = from_residue(Wt, root, P);
        for (int it = 0; it < 80; ++it) {
            PadicElt g = zero(Wt, P), dg = zero(Wt, P), pw = one(Wt, P);
            for (size_t j = 0; j < S.gmod.size(); ++j) {
                g = g + from_int(Wt, S.gmod[j], P) * pw;
                if (j + 1 < S.gmod.size())
                    dg = dg + from_int(Wt, static_cast<std::int64_t>(S.gmod[j + 1]) * static_cast<std::int64_t>(j + 1), P) * pw;
                pw = pw * r;
            }
            if (g.is_zero()) break;
            r = (r - g * dg.inv()).with_prec(P);
        }
        tau.assign(r.c_.begin(), r.c_.begin() + T.m);
        std::lock_guard<std::mutex> lock(S.mu);
        S.embed_cache[&T] = tau;
    }
    // Eisenstein data must match under the embedding.
    if (S.e > 1) {
        std::int64_t M = T.ppow[T.kmax - 1];
        for (int i = 0; i < S.e; ++i) {
            std::vector<std::int64_t> img(T.m, 0), pw(T.m, 0), tmp(T.m);
            pw[0] = 1;
            for (int j = 0; j < S.m; ++j) {
                for (int t = 0; t < T.m; ++t) img[t] = md(static_cast<__int128>(img[t]) + mulmod(md(S.eis[i][j], M), pw[t], M), M);
                mulW(T, pw.data(), tau.data(), tmp.data(), M);
                pw = tmp;
            }
            for (int t = 0; t < T.m; ++t)
                if (md(img[t], M) != md(T.eis[i][t], M)) throw TowerMismatch("Eisenstein polynomials do not match under base change");
        }
    }
    PadicElt r(&T, shift_, prec_);
    int R = prec_ - shift_;
    if (R <= 0) return zero(target, prec_);
    int K = k_for(T, R);
    std::int64_t M = T.ppow[K];
    for (int i = 0; i < S.e; ++i) {
        std::vector<std::int64_t> img(T.m, 0), pw(T.m, 0), tmp(T.m);
        pw[0] = 1;
        for (int j = 0; j < S.m; ++j) {
            std::int64_t a = c_[i * S.m + j] % M;
            for (int t = 0; t < T.m; ++t) img[t] = md(static_cast<__int128>(img[t]) + mulmod(a, pw[t] % M, M), M);
            mulW(T, pw.data(), tau.data(), tmp.data(), M);
            pw = tmp;
        }
        for (int t = 0; t < T.m; ++t) r.c_[i * T.m + t] = img[t];
    }
    r.normalize();
    return r;
}

PadicElt teichmuller(const LocalField& F, int r, int prec) {
    if (r == 0) throw DomainError("teichmuller lift of zero residue");
    if (r < 0 || r >= F.residue_card()) throw DomainError("residue out of range");
    PadicElt t = PadicElt::from_residue(F, r, prec);
    const std::uint64_t q = static_cast<std::uint64_t>(F.residue_card());
    for (int it = 0; it <= prec + 2; ++it) {
        PadicElt nt = t.pow(q);
        if (nt.equals(t)) return nt;
        t = nt;
    }
    throw PrecisionError("teichmuller iteration did not converge");
}

}  // namespace springerlab
