#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace springerlab {

// Finite field F_q, q = p^m, realised as F_p[t]/(g) with g the smallest monic
// irreducible of degree m in lexicographic order of its coefficient string.
// Elements are encoded as integers in [0, q): the base-p digits are the
// coefficients of 1, t, ..., t^{m-1}.
class ResidueField {
public:
    // Interned; the returned reference stays valid for the program lifetime.
    static const ResidueField& get(int p, int m);

    int p() const { return p_; }
    int degree() const { return m_; }
    int size() const { return q_; }
    const std::vector<int>& modulus() const { return modulus_; }

    int add(int a, int b) const;
    int sub(int a, int b) const;
    int neg(int a) const;
    int mul(int a, int b) const;
    int inv(int a) const;
    int pow(int a, std::uint64_t k) const;
    int from_int(std::int64_t k) const;

    int digit(int a, int j) const;
    int from_digits(const std::vector<int>& d) const;

    // Primitive element used for the log tables.
    int generator() const { return gen_; }

private:
    ResidueField(int p, int m);

    int p_, m_, q_;
    std::vector<int> modulus_;  // length m+1, monic
    std::vector<int> pow_p_;    // p^j
    int gen_ = 1;
    std::vector<int> exp_, log_;
    std::vector<int> add_table_;  // q*q entries when q is small
};

// Polynomials over F_q, coefficient vectors low degree first, no trailing zeros.
using FqPoly = std::vector<int>;

namespace fq {

void trim(FqPoly& f);
int degree(const FqPoly& f);  // -1 for the zero polynomial
FqPoly add(const ResidueField& F, const FqPoly& a, const FqPoly& b);
FqPoly sub(const ResidueField& F, const FqPoly& a, const FqPoly& b);
FqPoly mul(const ResidueField& F, const FqPoly& a, const FqPoly& b);
FqPoly scale(const ResidueField& F, const FqPoly& a, int c);
void divmod(const ResidueField& F, const FqPoly& a, const FqPoly& b, FqPoly& q, FqPoly& r);
FqPoly mod(const ResidueField& F, const FqPoly& a, const FqPoly& b);
FqPoly monic(const ResidueField& F, const FqPoly& a);
FqPoly gcd(const ResidueField& F, FqPoly a, FqPoly b);
// Returns g = gcd(a, b) (monic) and s, t with s*a + t*b = g.
FqPoly ext_gcd(const ResidueField& F, const FqPoly& a, const FqPoly& b, FqPoly& s, FqPoly& t);
FqPoly powmod(const ResidueField& F, const FqPoly& a, std::uint64_t k, const FqPoly& m);
FqPoly derivative(const ResidueField& F, const FqPoly& a);
int eval(const ResidueField& F, const FqPoly& a, int x);
std::vector<int> roots(const ResidueField& F, const FqPoly& f);

// Monic irreducible factors with multiplicities, sorted by (degree, coefficients).
std::vector<std::pair<FqPoly, int>> factor(const ResidueField& F, const FqPoly& f);

}  // namespace fq

// Dense matrices over F_q, row major.
struct FqMatrix {
    int rows = 0, cols = 0;
    std::vector<int> a;

    FqMatrix() = default;
    FqMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}
    int& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    int at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
    static FqMatrix identity(int n);
};

namespace fq {

FqMatrix mul(const ResidueField& F, const FqMatrix& x, const FqMatrix& y);
// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(const ResidueField& F, FqMatrix& m);
int rank(const ResidueField& F, FqMatrix m);
// Basis of the right kernel {v : m v = 0}, each vector of length m.cols.
std::vector<std::vector<int>> kernel(const ResidueField& F, const FqMatrix& m);
std::vector<int> apply(const ResidueField& F, const FqMatrix& m, const std::vector<int>& v);
FqPoly charpoly(const ResidueField& F, const FqMatrix& m);

}  // namespace fq

}  // namespace springerlab
