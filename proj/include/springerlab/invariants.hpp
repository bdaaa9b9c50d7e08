#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "springerlab/factor.hpp"
#include "springerlab/matrix.hpp"

namespace springerlab {

// Characteristic polynomial; the type-A Chevalley image.
IntPoly chevalley(const Mat& g);

// Companion matrix of a monic integral polynomial (cyclic vector e_1).
// DomainError for non-monic or non-integral input.
Mat kostant_section(const IntPoly& a);

// val det g; PrecisionError when the determinant is indeterminate.
int kottwitz(const Mat& g);

// n - gcd(n, a mod n), asserted equal to n minus the cycle count of i -> i + a on Z/n.
int kappa_defect(int n, long long a);

struct DiscriminantValuations {
    int d_lie = 0;
    std::optional<int> d_grp;               // set when det g != 0
    std::optional<int> d_grp_closed_form;   // d_lie - (n-1) val det
    std::optional<int> d_grp_adjoint;       // val of the t^n coefficient of charpoly(Id - Ad g)
};

// Both group routes are computed and must agree (std::logic_error otherwise).
// DomainError "not regular semisimple" for a repeated eigenvalue.
DiscriminantValuations discriminant_valuations(const Mat& g, bool adjoint_route = true);

struct ArtinData {
    int art = 0, torus_def = 0, swan = 0;
};
ArtinData artin_conductor(const FactorizationReport& r);

struct InvariantFlags {
    bool bounded = false;             // integral characteristic polynomial
    bool group_bounded = false;       // bounded with a unit determinant
    bool bounded_mod_center = false;  // every eigenvalue has valuation kappa / n
    bool top_nilpotent = false;       // charpoly = x^n mod ϖ
    bool top_unipotent = false;       // charpoly = (x - 1)^n mod ϖ
    bool strongly_top_unipotent = false;
    // Same notions for the image in PGL_n, read off the eigenvalue ratios.
    bool top_unipotent_adjoint = false;
    bool strongly_top_unipotent_adjoint = false;
    bool regular_semisimple = false;
};

struct ConjugacyInvariants {
    int n = 0;
    IntPoly charpoly;
    int d_lie = 0;
    std::optional<int> d_grp;
    int art = 0, torus_def = 0, swan = 0;
    std::optional<int> kappa;
    std::optional<int> kappa_def;
    // length(O_A / O[g]) for A = F[x]/(charpoly), O_A its maximal order; bounded only.
    std::optional<int> order_index;
    std::optional<int> dim_lie_pred;
    std::optional<int> dim_grp_pred;
    InvariantFlags flags;
    std::string lie_status = "ok";
    std::string grp_status = "ok";
    FactorizationReport factorization;
};

// Fills dim_lie_pred / dim_grp_pred and the status strings from the other
// fields. A prediction that is odd or negative throws std::logic_error.
void predict_dimension(ConjugacyInvariants& inv);

// Full record for a regular semisimple matrix.
ConjugacyInvariants compute_invariants(const Mat& g, bool adjoint_route = true);
// Same for the class with the given characteristic polynomial (via its companion matrix).
ConjugacyInvariants compute_invariants(const IntPoly& charpoly, bool adjoint_route = true);

nlohmann::json to_json(const ConjugacyInvariants& inv);

// Lcm of the degrees of the irreducible factors of the reduction of an integral monic f.
int residue_splitting_degree(const IntPoly& f);

struct JordanGroup {
    Mat s, u;
    int r = 1;           // s^{q^r} = s
    int iterations = 0;  // q^r-power steps used
    bool product_ok = false;     // s u = u s = g
    bool unipotent_ok = false;   // charpoly(u) = (x - 1)^n mod ϖ
    bool semisimple_ok = false;  // s^{q^r} = s and charpoly(s) = charpoly(g) mod ϖ
    bool all_ok() const { return product_ok && unipotent_ok && semisimple_ok; }
};

// s = lim g^{q^{rk}}, u = s^{-1} g, certified modulo ϖ^N.
// DomainError unless g is group-bounded; PrecisionError on non-convergence.
JordanGroup topological_jordan_group(const Mat& g, int N);

struct JordanLie {
    Mat g0, g1;
    int r = 1;
    int clusters = 0;
    bool commute_ok = false;     // g0 g1 = g1 g0
    bool nilpotent_ok = false;   // charpoly(g1) = x^n mod ϖ
    bool semisimple_ok = false;  // g0^{q^r} = g0, so eigenvalue differences are 0 or units
    bool all_ok() const { return commute_ok && nilpotent_ok && semisimple_ok; }
};

// g0 = Σ_c [λ_c] e_c over residue clusters, g1 = g - g0, certified modulo ϖ^N.
// DomainError unless the characteristic polynomial is integral and squarefree.
JordanLie topological_jordan_lie(const Mat& g, int N);

// g - Id.
Mat quasi_log(const Mat& g);

struct DescentReport {
    int d_grp = 0;
    int d_blocks = 0;  // Σ over clusters of d(u_c) for GL of the block
    int art = 0;
    int art_blocks = 0;
    int kappa_def = 0;
    int kappa_def_blocks = 0;
    int clusters = 0;
    std::vector<int> block_sizes;
    bool ok() const { return d_grp == d_blocks && art == art_blocks && kappa_def == kappa_def_blocks; }
};

// Splits the topologically unipotent part over the eigenspaces of the
// strongly semisimple part (after an unramified base change that makes the
// residue clusters rational) and recomputes the invariants blockwise.
DescentReport hc_descent_invariants(const Mat& g, int N);

}  // namespace springerlab
