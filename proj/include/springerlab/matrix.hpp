#pragma once

#include <string>
#include <vector>

#include "springerlab/padic.hpp"
#include "springerlab/poly.hpp"

namespace springerlab {

// Dense square or rectangular matrix over a LocalField, row major.
class Mat {
public:
    Mat() = default;
    Mat(LocalField F, int rows, int cols, int prec);

    static Mat identity(const LocalField& F, int n, int prec);
    static Mat from_ints(const LocalField& F, const std::vector<std::vector<std::int64_t>>& rows, int prec);
    static Mat diagonal(const std::vector<PadicElt>& d);
    // Companion matrix: ones on the subdiagonal, negated coefficients of the
    // monic polynomial f in the last column.
    static Mat companion(const IntPoly& f);
    // "[[a,b],[c,d]]" with scalar expressions as entries.
    static Mat parse(const LocalField& F, const std::string& text, int prec);

    const LocalField& field() const { return F_; }
    int rows() const { return r_; }
    int cols() const { return c_; }
    PadicElt& at(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
    const PadicElt& at(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat operator*(const Mat& o) const;
    Mat scale(const PadicElt& s) const;
    Mat transpose() const;
    Mat pow(std::uint64_t k) const;
    std::vector<PadicElt> apply(const std::vector<PadicElt>& v) const;

    PadicElt trace() const;
    PadicElt det() const;       // full min-valuation pivoting
    Mat inverse() const;        // Gauss-Jordan with min-valuation pivots
    IntPoly charpoly() const;   // division-free (Berkowitz)
    int min_prec() const;
    int min_val() const;        // minimum valuation over entries (prec bound for zeros)
    bool is_integral() const;
    bool equals(const Mat& o) const;
    Mat with_prec(int N) const;
    Mat extend(const LocalField& target) const;
    // Entrywise residues; requires integral entries.
    FqMatrix residue() const;

    std::string to_string() const;

private:
    LocalField F_;
    int r_ = 0, c_ = 0;
    std::vector<PadicElt> a_;
};

// Evaluate a polynomial at a square matrix (Horner).
Mat eval_at(const IntPoly& f, const Mat& A);

}  // namespace springerlab
