#include "springerlab/invariants.hpp"

#include <numeric>
#include <stdexcept>

#include "springerlab/errors.hpp"
#include "springerlab/linalg.hpp"

namespace springerlab {

namespace {

FqPoly residue_poly(const IntPoly& f) {
    FqPoly r(f.coeffs().size());
    for (int i = 0; i <= f.degree(); ++i) r[i] = f[i].residue();
    fq::trim(r);
    return r;
}

FqPoly power_of_linear(const ResidueField& R, int root, int n) {
    FqPoly lin = {R.neg(root), 1}, r = {1};
    for (int i = 0; i < n; ++i) r = fq::mul(R, r, lin);
    return r;
}

std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

IntPoly powmod(IntPoly a, std::uint64_t k, const IntPoly& m, int prec) {
    IntPoly r = IntPoly::constant(PadicElt::one(m.field(), prec));
    a = a.mod(m);
    while (k) {
        if (k & 1) r = (r * a).mod(m);
        k >>= 1;
        if (k) a = (a * a).mod(m);
    }
    return r;
}

// Matrix of X -> g X g^{-1} on row-major n x n matrices.
Mat adjoint_matrix(const Mat& g) {
    int n = g.rows();
    Mat gi = g.inverse();
    Mat M(g.field(), n * n, n * n, g.min_prec());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) M.at(i * n + j, k * n + l) = g.at(i, k) * gi.at(l, j);
    return M;
}

bool reduces_to(const IntPoly& chi, const FqPoly& target) {
    if (!chi.is_integral()) return false;
    return residue_poly(chi) == target;
}

int prec_of(const Mat& m) { return m.min_prec(); }

// Discriminant depth used to size working precision; 0 for repeated eigenvalues.
int disc_depth(const IntPoly& chi) {
    try {
        return disc_val_poly(chi);
    } catch (const DomainError&) {
        return 0;
    } catch (const PrecisionError&) {
        return 0;
    }
}

}  // namespace

IntPoly chevalley(const Mat& g) { return g.charpoly(); }

Mat kostant_section(const IntPoly& a) {
    if (!a.is_monic()) throw DomainError("kostant_section: polynomial is not monic");
    if (!a.is_integral()) throw DomainError("kostant_section: coefficients are not integral");
    return Mat::companion(a);
}

int kottwitz(const Mat& g) {
    PadicElt d = g.det();
    auto v = d.val();
    if (!v) throw PrecisionError("kottwitz: determinant is zero at precision " + std::to_string(d.prec()));
    return *v;
}

int kappa_defect(int n, long long a) {
    if (n < 1) throw DomainError("kappa_defect: n must be positive");
    long long r = ((a % n) + n) % n;
    int via_gcd = n - static_cast<int>(std::gcd(static_cast<long long>(n), r));
    std::vector<bool> seen(n, false);
    int cycles = 0;
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        ++cycles;
        for (int j = i; !seen[j]; j = static_cast<int>((j + r) % n)) seen[j] = true;
    }
    if (n - cycles != via_gcd) throw std::logic_error("kappa_defect: cycle count disagrees with gcd");
    return via_gcd;
}

DiscriminantValuations discriminant_valuations(const Mat& g, bool adjoint_route) {
    DiscriminantValuations r;
    IntPoly chi = g.charpoly();
    r.d_lie = disc_val_poly(chi);
    auto dv = chi[0].val();
    if (!dv) return r;
    int n = g.rows();
    r.d_grp_closed_form = r.d_lie - (n - 1) * *dv;
    r.d_grp = r.d_grp_closed_form;
    if (adjoint_route) {
        Mat A = adjoint_matrix(g);
        Mat M = Mat::identity(g.field(), n * n, A.min_prec()) - A;
        IntPoly cp = M.charpoly();
        auto v = cp[n].val();
        if (!v) throw PrecisionError("discriminant_valuations: adjoint coefficient indeterminate");
        r.d_grp_adjoint = *v;
        if (*r.d_grp_adjoint != *r.d_grp_closed_form)
            throw std::logic_error("discriminant_valuations: group routes disagree (" +
                                   std::to_string(*r.d_grp_closed_form) + " vs " +
                                   std::to_string(*r.d_grp_adjoint) + ")");
    }
    return r;
}

ArtinData artin_conductor(const FactorizationReport& r) {
    ArtinData a;
    for (const auto& f : r.factors) {
        a.art += f.disc_val;
        a.torus_def += f.e * f.f - f.f;
    }
    a.swan = a.art - a.torus_def;
    return a;
}

void predict_dimension(ConjugacyInvariants& inv) {
    inv.dim_lie_pred.reset();
    inv.dim_grp_pred.reset();
    if (!inv.flags.regular_semisimple) {
        inv.lie_status = inv.grp_status = "not regular semisimple";
        return;
    }
    auto checked = [](int twice, const char* what) {
        if (twice < 0 || twice % 2 != 0)
            throw std::logic_error(std::string("predict_dimension: ") + what + " numerator " +
                                   std::to_string(twice) + " is not a non-negative even integer");
        return twice / 2;
    };
    if (inv.flags.bounded) {
        inv.dim_lie_pred = checked(inv.d_lie - inv.art, "Lie");
        inv.lie_status = "ok";
    } else {
        inv.lie_status = "nonempty fails: unbounded";
    }
    if (!inv.kappa) {
        inv.grp_status = "not invertible";
    } else if (inv.flags.bounded_mod_center && inv.d_grp && inv.kappa_def) {
        inv.dim_grp_pred = checked(*inv.d_grp + *inv.kappa_def - inv.art, "group");
        inv.grp_status = "ok";
    } else {
        inv.grp_status = "nonempty fails: unbounded";
    }
}

ConjugacyInvariants compute_invariants(const Mat& g, bool adjoint_route) {
    ConjugacyInvariants inv;
    int n = g.rows();
    inv.n = n;
    inv.charpoly = g.charpoly();
    auto dv = discriminant_valuations(g, adjoint_route);
    inv.flags.regular_semisimple = true;
    inv.d_lie = dv.d_lie;
    inv.d_grp = dv.d_grp;
    inv.factorization = factor(inv.charpoly);
    auto a = artin_conductor(inv.factorization);
    inv.art = a.art;
    inv.torus_def = a.torus_def;
    inv.swan = a.swan;
    if (auto v = inv.charpoly[0].val()) {
        inv.kappa = *v;
        inv.kappa_def = kappa_defect(n, *v);
    }

    const ResidueField& R = g.field().residue_field();
    auto& fl = inv.flags;
    fl.bounded = inv.charpoly.is_integral();
    if (fl.bounded) {
        Order O(inv.charpoly);
        O.maximize();
        inv.order_index = O.index_val();
    }
    fl.group_bounded = fl.bounded && inv.charpoly[0].is_unit();
    if (inv.kappa) fl.bounded_mod_center = newton_polygon(inv.charpoly).segments.size() == 1;
    fl.top_nilpotent = reduces_to(inv.charpoly, power_of_linear(R, 0, n));
    fl.top_unipotent = reduces_to(inv.charpoly, power_of_linear(R, 1, n));
    fl.strongly_top_unipotent = fl.top_unipotent && inv.kappa == 0;
    if (fl.bounded_mod_center) {
        IntPoly ad = adjoint_matrix(g).charpoly();
        fl.top_unipotent_adjoint = reduces_to(ad, power_of_linear(R, 1, n * n));
    }
    fl.strongly_top_unipotent_adjoint = fl.top_unipotent_adjoint && *inv.kappa % n == 0;
    predict_dimension(inv);
    return inv;
}

ConjugacyInvariants compute_invariants(const IntPoly& charpoly, bool adjoint_route) {
    if (!charpoly.is_monic()) throw DomainError("characteristic polynomial must be monic");
    return compute_invariants(Mat::companion(charpoly), adjoint_route);
}

nlohmann::json to_json(const ConjugacyInvariants& inv) {
    nlohmann::json j;
    auto opt = [](const std::optional<int>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    j["n"] = inv.n;
    j["charpoly"] = inv.charpoly.to_string();
    j["d_lie"] = inv.d_lie;
    j["d_grp"] = opt(inv.d_grp);
    j["art"] = inv.art;
    j["torus_def"] = inv.torus_def;
    j["swan"] = inv.swan;
    j["kappa"] = opt(inv.kappa);
    j["kappa_def"] = opt(inv.kappa_def);
    j["order_index"] = opt(inv.order_index);
    j["dim_lie_pred"] = opt(inv.dim_lie_pred);
    j["dim_grp_pred"] = opt(inv.dim_grp_pred);
    j["lie_status"] = inv.lie_status;
    j["grp_status"] = inv.grp_status;
    const auto& f = inv.flags;
    j["flags"] = {{"bounded", f.bounded},
                  {"group_bounded", f.group_bounded},
                  {"bounded_mod_center", f.bounded_mod_center},
                  {"top_nilpotent", f.top_nilpotent},
                  {"top_unipotent", f.top_unipotent},
                  {"strongly_top_unipotent", f.strongly_top_unipotent},
                  {"top_unipotent_adjoint", f.top_unipotent_adjoint},
                  {"strongly_top_unipotent_adjoint", f.strongly_top_unipotent_adjoint},
                  {"regular_semisimple", f.regular_semisimple}};
    j["factorization"] = to_json(inv.factorization);
    return j;
}

int residue_splitting_degree(const IntPoly& f) {
    const ResidueField& R = f.field().residue_field();
    int r = 1;
    for (const auto& [phi, m] : fq::factor(R, residue_poly(f))) r = std::lcm(r, fq::degree(phi));
    return r;
}

JordanGroup topological_jordan_group(const Mat& g, int N) {
    IntPoly chi = g.charpoly();
    if (!chi.is_integral() || !chi[0].is_unit())
        throw DomainError("topological_jordan_group: element is not bounded");
    int dv = disc_depth(chi);
    // Headroom of val(disc) digits when available; the certificates below are
    // what guarantee the result modulo ϖ^N.
    int W = std::min(N + dv + 2, prec_of(g));
    if (W < N + 2)
        throw PrecisionError("topological_jordan_group: input precision below " + std::to_string(N + 2), N + dv + 2);
    JordanGroup J;
    J.r = residue_splitting_degree(chi);
    std::uint64_t Q = ipow(static_cast<std::uint64_t>(g.field().residue_card()), J.r);
    Mat x = g.with_prec(W);
    Mat s = x;
    int bound = 4 * (N + dv);
    bool converged = false;
    for (int it = 1; it <= bound; ++it) {
        Mat nxt = s.pow(Q);
        J.iterations = it;
        if (nxt.equals(s)) {
            converged = true;
            break;
        }
        s = nxt;
    }
    if (!converged) throw PrecisionError("topological_jordan_group: no convergence", 2 * W);
    J.s = s;
    J.u = s.inverse() * x;

    const ResidueField& R = g.field().residue_field();
    int n = g.rows();
    Mat gN = g.with_prec(N);
    J.product_ok = (J.s * J.u).with_prec(N).equals(gN) && (J.u * J.s).with_prec(N).equals(gN);
    J.unipotent_ok = reduces_to(J.u.charpoly(), power_of_linear(R, 1, n));
    // s^Q = s makes every eigenvalue a root of x^Q - x; u being topologically
    // unipotent, s and g must also share their characteristic polynomial mod ϖ.
    J.semisimple_ok = J.s.pow(Q).with_prec(N).equals(J.s.with_prec(N)) &&
                      residue_poly(J.s.charpoly()) == residue_poly(chi);
    return J;
}

JordanLie topological_jordan_lie(const Mat& g, int N) {
    IntPoly chi = g.charpoly();
    if (!chi.is_integral()) throw DomainError("topological_jordan_lie: element is not bounded");
    int dv = disc_val_poly(chi);
    // Headroom of val(disc) digits when available; the certificates below are
    // what guarantee the result modulo ϖ^N.
    int W = std::min(N + dv + 2, prec_of(g));
    if (W < N + 2)
        throw PrecisionError("topological_jordan_lie: input precision below " + std::to_string(N + 2), N + dv + 2);
    const LocalField& F = g.field();
    const ResidueField& R = F.residue_field();
    int n = g.rows();
    chi = chi.with_prec(W);
    FqPoly chibar = residue_poly(chi);
    auto parts = fq::factor(R, chibar);

    JordanLie J;
    J.clusters = static_cast<int>(parts.size());
    J.r = residue_splitting_degree(chi);
    auto lift = [&](const FqPoly& a) {
        std::vector<PadicElt> c(std::max<size_t>(a.size(), 1), PadicElt::zero(F, W));
        for (size_t i = 0; i < a.size(); ++i) c[i] = PadicElt::from_residue(F, a[i], W);
        return IntPoly(F, c);
    };
    PadicElt two = PadicElt::from_int(F, 2, W), three = PadicElt::from_int(F, 3, W);
    IntPoly tau_sum = IntPoly::constant(PadicElt::zero(F, W));
    int bound = 4 * (N + dv) + 8;
    for (const auto& [phi, m] : parts) {
        FqPoly A = {1};
        for (int i = 0; i < m; ++i) A = fq::mul(R, A, phi);
        FqPoly B, rem;
        fq::divmod(R, chibar, A, B, rem);
        FqPoly s, t;
        fq::ext_gcd(R, A, B, s, t);
        IntPoly e = lift(fq::mod(R, fq::mul(R, t, B), chibar));
        // Idempotent refinement e <- 3e^2 - 2e^3 converges quadratically.
        bool ok = false;
        for (int it = 0; it < bound; ++it) {
            IntPoly e2 = (e * e).mod(chi);
            IntPoly e3 = (e2 * e).mod(chi);
            IntPoly nxt = e2.scale(three) - e3.scale(two);
            if (nxt.equals(e)) {
                ok = true;
                break;
            }
            e = nxt;
        }
        if (!ok) throw PrecisionError("topological_jordan_lie: idempotent did not stabilise", 2 * W);
        IntPoly tau;
        if (fq::degree(phi) == 1) {
            int root = R.neg(phi[0]);
            tau = root == 0 ? IntPoly::constant(PadicElt::zero(F, W)) : e.scale(teichmuller(F, root, W));
        } else {
            std::uint64_t Qc = ipow(static_cast<std::uint64_t>(R.size()), fq::degree(phi));
            IntPoly y = (IntPoly::x(F, W) * e).mod(chi);
            ok = false;
            for (int it = 0; it < bound; ++it) {
                IntPoly nxt = powmod(y, Qc, chi, W);
                if (nxt.equals(y)) {
                    ok = true;
                    break;
                }
                y = nxt;
            }
            if (!ok) throw PrecisionError("topological_jordan_lie: cluster limit did not converge", 2 * W);
            tau = y;
        }
        tau_sum = tau_sum + tau;
    }
    Mat x = g.with_prec(W);
    J.g0 = eval_at(tau_sum.trimmed(), x);
    J.g1 = x - J.g0;

    std::uint64_t Q = ipow(static_cast<std::uint64_t>(R.size()), J.r);
    J.commute_ok = (J.g0 * J.g1).with_prec(N).equals((J.g1 * J.g0).with_prec(N));
    J.nilpotent_ok = reduces_to(J.g1.charpoly(), power_of_linear(R, 0, n));
    J.semisimple_ok = J.g0.pow(Q).with_prec(N).equals(J.g0.with_prec(N));
    return J;
}

Mat quasi_log(const Mat& g) { return g - Mat::identity(g.field(), g.rows(), g.min_prec()); }

DescentReport hc_descent_invariants(const Mat& g, int N) {
    DescentReport rep;
    int n = g.rows();
    auto dv = discriminant_valuations(g, true);
    rep.d_grp = *dv.d_grp;
    rep.art = artin_conductor(factor(g.charpoly())).art;
    rep.kappa_def = kappa_defect(n, kottwitz(g));

    JordanGroup J = topological_jordan_group(g, N);
    if (!J.all_ok()) throw PrecisionError("hc_descent_invariants: Jordan certificates failed", 2 * N);
    LocalField Fp = J.r > 1 ? g.field().unramified_extension(J.r) : g.field();
    Mat s = J.s.extend(Fp), u = J.u.extend(Fp);
    int P = std::min(s.min_prec(), u.min_prec());
    const ResidueField& R = Fp.residue_field();
    auto roots = fq::roots(R, residue_poly(s.charpoly()));
    std::vector<PadicElt> omega;
    for (int rt : roots) omega.push_back(teichmuller(Fp, rt, P));
    rep.clusters = static_cast<int>(roots.size());

    for (size_t c = 0; c < roots.size(); ++c) {
        // Lagrange projector onto the ω_c-eigenspace of s.
        Mat E = Mat::identity(Fp, n, P);
        for (size_t d = 0; d < roots.size(); ++d) {
            if (d == c) continue;
            Mat shifted = s - Mat::identity(Fp, n, P).scale(omega[d]);
            E = (E * shifted).scale((omega[c] - omega[d]).inv());
        }
        std::vector<Vec> cols(n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) cols[j].push_back(E.at(i, j));
        auto ech = echelon(cols, n);
        std::vector<Vec> basis;
        std::vector<int> piv;
        for (int j = 0; j < n; ++j) {
            if (ech[j].empty()) continue;
            // The image of an integral idempotent is a direct summand, so pivots are units.
            if (ech[j][j].val() != 0)
                throw PrecisionError("hc_descent_invariants: non-unit pivot in an eigenspace basis", 2 * N);
            basis.push_back(ech[j]);
            piv.push_back(j);
        }
        int k = static_cast<int>(basis.size());
        rep.block_sizes.push_back(k);
        Mat uc(Fp, k, k, P);
        for (int b = 0; b < k; ++b) {
            Vec coords;
            if (!triangular_coords_partial(basis, piv, u.apply(basis[b]), coords))
                throw PrecisionError("hc_descent_invariants: eigenspace of s is not u-stable at this precision", 2 * N);
            for (int a = 0; a < k; ++a) uc.at(a, b) = coords[a];
        }
        if (k > 1) rep.d_blocks += *discriminant_valuations(uc, true).d_grp;
        rep.art_blocks += artin_conductor(factor(uc.charpoly())).art;
        rep.kappa_def_blocks += kappa_defect(k, kottwitz(uc));
    }
    int total = std::accumulate(rep.block_sizes.begin(), rep.block_sizes.end(), 0);
    if (total != n) throw PrecisionError("hc_descent_invariants: eigenspaces do not fill the space", 2 * N);
    return rep;
}

}  // namespace springerlab
