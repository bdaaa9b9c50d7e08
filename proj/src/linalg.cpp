#include "springerlab/linalg.hpp"

#include <algorithm>

#include "springerlab/errors.hpp"

namespace springerlab {

std::vector<Vec> echelon(std::vector<Vec> pool, int n) {
    std::vector<Vec> out(n);
    for (int j = n - 1; j >= 0; --j) {
        int best = -1, bv = 0;
        for (int g = 0; g < static_cast<int>(pool.size()); ++g) {
            auto v = pool[g][j].val();
            if (v && (best < 0 || *v < bv)) {
                best = g;
                bv = *v;
            }
        }
        if (best < 0) continue;
        Vec piv = pool[best];
        pool.erase(pool.begin() + best);
        const LocalField F = piv[j].field();
        PadicElt uinv = piv[j].shift_pi(-bv).inv();
        piv = vec_scale(piv, uinv);
        piv[j] = PadicElt::pi_power(F, bv, F.max_precision() + std::min(bv, 0));
        for (auto& g : pool) {
            PadicElt c = g[j] * piv[j].inv();
            for (int k = 0; k < j; ++k) g[k] = g[k] - c * piv[k];
            g[j] = PadicElt::zero(F, g[j].prec());
        }
        out[j] = piv;
    }
    return out;
}

std::vector<Vec> compact(const std::vector<Vec>& ech) {
    std::vector<Vec> r;
    for (const auto& v : ech)
        if (!v.empty()) r.push_back(v);
    return r;
}

Vec triangular_coords(const std::vector<Vec>& basis, Vec w) {
    int n = static_cast<int>(basis.size());
    Vec c(n);
    for (int j = n - 1; j >= 0; --j) {
        c[j] = w[j] * basis[j][j].inv();
        for (int k = 0; k < j; ++k) w[k] = w[k] - c[j] * basis[j][k];
    }
    return c;
}

bool triangular_coords_partial(const std::vector<Vec>& basis, const std::vector<int>& cols, Vec w, Vec& out) {
    int r = static_cast<int>(basis.size());
    int n = static_cast<int>(w.size());
    out.assign(r, PadicElt());
    std::vector<int> order(r);
    for (int i = 0; i < r; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return cols[a] > cols[b]; });
    int next = 0;
    for (int j = n - 1; j >= 0; --j) {
        if (next < r && cols[order[next]] == j) {
            int i = order[next++];
            PadicElt c = w[j] * basis[i][j].inv();
            out[i] = c;
            for (int k = 0; k <= j; ++k) w[k] = w[k] - c * basis[i][k];
        } else if (!w[j].is_zero()) {
            return false;
        }
    }
    return true;
}

Vec vec_add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec vec_sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec vec_scale(const Vec& a, const PadicElt& s) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

Vec vec_with_prec(const Vec& a, int N) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i].with_prec(N);
    return r;
}

int vec_min_val(const Vec& a) {
    int m = 1 << 29;
    for (const auto& x : a) m = std::min(m, x.val_or_prec());
    return m;
}

std::vector<int> vec_residue(const Vec& a) {
    std::vector<int> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_integral()) throw DomainError("residue of a non-integral vector");
        r[i] = a[i].residue();
    }
    return r;
}

Vec vec_lift(const LocalField& F, const std::vector<int>& r, int prec) {
    Vec v(r.size());
    for (size_t i = 0; i < r.size(); ++i) v[i] = PadicElt::from_residue(F, r[i], prec);
    return v;
}

}  // namespace springerlab
