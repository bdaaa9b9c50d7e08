#pragma once

#include <vector>

#include "springerlab/padic.hpp"
#include "springerlab/residue_field.hpp"

namespace springerlab {

using Vec = std::vector<PadicElt>;

// Triangular basis of the O-module spanned by `gens` inside F^n.
// Column j (processed from n-1 down to 0) gets at most one pivot vector whose
// j-th entry is exactly ϖ^d and whose entries beyond j vanish. The result has
// one entry per column; columns without a pivot hold an empty vector.
std::vector<Vec> echelon(std::vector<Vec> gens, int n);

// Pivot rows of an echelon() result, in increasing column order.
std::vector<Vec> compact(const std::vector<Vec>& ech);

// Coordinates of w in a full-rank triangular basis (basis[j] has its pivot in
// column j). Throws PrecisionError when a pivot division is undecidable.
Vec triangular_coords(const std::vector<Vec>& basis, Vec w);

// Same, for a basis with pivots in arbitrary distinct columns (pivot_cols[i]
// is the pivot column of basis[i]). Returns false when w has a nonzero
// remainder outside the span at its precision.
bool triangular_coords_partial(const std::vector<Vec>& basis, const std::vector<int>& pivot_cols, Vec w, Vec& out);

Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_scale(const Vec& a, const PadicElt& s);
Vec vec_with_prec(const Vec& a, int N);
int vec_min_val(const Vec& a);  // valuation or precision bound
std::vector<int> vec_residue(const Vec& a);
Vec vec_lift(const LocalField& F, const std::vector<int>& r, int prec);

}  // namespace springerlab
