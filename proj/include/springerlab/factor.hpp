#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "springerlab/linalg.hpp"
#include "springerlab/poly.hpp"

namespace springerlab {

// Reduced fraction num/den with den > 0.
struct Ratio {
    int num = 0, den = 1;
    bool operator==(const Ratio& o) const { return num == o.num && den == o.den; }
    bool operator<(const Ratio& o) const {
        return static_cast<long long>(num) * o.den < static_cast<long long>(o.num) * den;
    }
    std::string to_string() const;
};
Ratio make_ratio(int num, int den);

// Lower convex hull of the points (i, val a_i).
struct NewtonPolygon {
    std::vector<std::pair<int, int>> vertices;  // increasing i
    struct Segment {
        Ratio slope;  // Δval / Δi, increasing along the polygon
        int length;   // number of roots with valuation -slope
    };
    std::vector<Segment> segments;

    // Valuations of the roots with multiplicities, increasing.
    std::vector<std::pair<Ratio, int>> root_valuations() const;
};

// Throws PrecisionError if an indeterminate coefficient could lie on or below the hull.
NewtonPolygon newton_polygon(const IntPoly& f);

// val(disc f) for monic squarefree f; DomainError "not regular semisimple" when
// the discriminant vanishes exactly, PrecisionError when it is only small.
int disc_val_poly(const IntPoly& f);

struct FactorRecord {
    IntPoly poly;        // monic irreducible factor
    int e = 1, f = 1;    // ramification index, residue degree
    int disc_val = 0;    // val of the discriminant of the field it cuts out
    int index_val = 0;   // length of O_E / O[x]/(poly)
    int poly_disc_val = 0;
    Ratio root_val;      // common valuation of its roots
};

struct FactorizationReport {
    IntPoly input;
    std::vector<FactorRecord> factors;
    int precision = 0;  // factors are valid modulo ϖ^precision
    bool product_ok = false;
    bool degree_ok = false;
    bool index_identity_ok = false;
    bool all_ok() const { return product_ok && degree_ok && index_identity_ok; }
};

// Complete factorization over the base field of a monic squarefree polynomial.
// Non-integral inputs are rescaled internally; their index_val is then read off
// the order-index identity and may be negative.
FactorizationReport factor(const IntPoly& f);

nlohmann::json to_json(const FactorizationReport& r);

// An O-order in A = F[x]/(f), given by a triangular basis in power coordinates
// (basis[i] has degree i with leading coefficient ϖ^{-d_i}).
class Order {
public:
    // The equation order O[x]/(f).
    explicit Order(const IntPoly& f);
    // The order with an explicit triangular basis in power coordinates
    // (basis[i] of degree i); throws if the span is not closed under multiplication.
    Order(const IntPoly& f, std::vector<Vec> basis);

    const IntPoly& modulus() const { return f_; }
    int degree() const { return n_; }
    const LocalField& field() const { return f_.field(); }
    const std::vector<Vec>& basis() const { return basis_; }
    // Σ d_i = length(this / O[x]).
    int index_val() const;

    // Power coordinates <-> order coordinates.
    Vec to_coords(const Vec& power) const;
    Vec from_coords(const Vec& c) const;
    Vec mul(const Vec& a, const Vec& b) const;  // order coordinates
    Vec one() const;
    // Matrix of multiplication by a (order coordinates), columns = images of basis.
    std::vector<Vec> mult_matrix(const Vec& a) const;
    PadicElt trace(const Vec& a) const;

    // Replace this order by its ϖ-maximal overorder (Round 2).
    void maximize();
    bool is_maximal() const { return maximal_; }

    // Multiplication table of the residue algebra this/ϖ.
    const std::vector<std::vector<std::vector<int>>>& residue_table() const { return rtab_; }
    std::vector<int> residue_mul(const std::vector<int>& a, const std::vector<int>& b) const;
    std::vector<int> residue_pow(std::vector<int> a, std::uint64_t k) const;
    // Basis of the nilradical of this/ϖ.
    std::vector<std::vector<int>> residue_radical() const;

private:
    void rebuild();

    IntPoly f_;
    int n_;
    std::vector<Vec> basis_;
    std::vector<std::vector<Vec>> table_;  // table_[i][j] = coords of basis_i * basis_j
    std::vector<PadicElt> traces_;
    std::vector<std::vector<std::vector<int>>> rtab_;
    bool maximal_ = false;
};

// Multiply polynomials in power coordinates modulo the monic f.
Vec mulmod_poly(const Vec& a, const Vec& b, const IntPoly& f);

struct MaximalOrderReport {
    int disc_val = 0;
    int index_val = 0;
    std::vector<Vec> basis;  // power coordinates
};
// For an irreducible monic integral polynomial.
MaximalOrderReport maximal_order(const IntPoly& f);

}  // namespace springerlab
