#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "springerlab/linalg.hpp"
#include "springerlab/matrix.hpp"
#include "springerlab/residue_field.hpp"

namespace springerlab {

// Full-rank O-lattice in F^n, stored in column Hermite normal form: column j
// has ϖ^{d_j} in row j, zeros below, and each entry above row i reduced to its
// canonical digit representative modulo ϖ^{d_i}. Two lattices are equal iff
// their keys are equal.
class Lattice {
public:
    Lattice() = default;
    // Span of the given vectors; DomainError unless they have full rank.
    static Lattice span(const LocalField& F, int n, std::vector<Vec> gens);
    static Lattice standard(const LocalField& F, int n);
    // Span of the columns of B.
    static Lattice from_columns(const Mat& B);

    int rank() const { return n_; }
    const LocalField& field() const { return F_; }
    const std::vector<Vec>& basis() const { return cols_; }  // cols_[j][i] = entry (i, j)
    const std::vector<int>& diag() const { return diag_; }
    // Σ d_j; equals length(O^n / L) for L inside O^n.
    int colength() const;
    bool is_integral() const;   // L ⊆ O^n
    bool is_primitive() const;  // L ⊄ ϖ O^n

    Vec coords(const Vec& v) const;
    bool contains(const Vec& v) const;
    bool contains(const Lattice& o) const;
    Lattice image(const Mat& g) const;  // g L
    Lattice scaled(int k) const;        // ϖ^k L
    bool stable_under(const Mat& g) const;  // g L ⊆ L
    // Matrix of g on L / ϖL in the HNF basis; requires g L ⊆ L.
    FqMatrix residue_action(const Mat& g) const;
    Mat basis_matrix() const;

    const std::vector<std::int64_t>& key() const { return key_; }
    bool operator==(const Lattice& o) const { return key_ == o.key_; }
    bool operator<(const Lattice& o) const { return key_ < o.key_; }

    // One TSV row: the upper triangle row by row; pivots as "^d", other
    // entries as comma-separated ϖ-adic digits below the pivot of their row.
    std::string to_tsv() const;

private:
    LocalField F_;
    int n_ = 0;
    std::vector<Vec> cols_;
    std::vector<int> diag_;
    std::vector<std::int64_t> key_;
};

// Subspaces of F_q^d stable under T, each as row-reduced basis rows.
std::vector<std::vector<std::vector<int>>> stable_subspaces(const ResidueField& R, const FqMatrix& T);
// Complete flags V_1 ⊂ ... ⊂ V_d of T-stable subspaces; flag[k] has dim k+1.
std::vector<std::vector<std::vector<std::vector<int>>>> stable_flags(const ResidueField& R, const FqMatrix& T);

// All lattices L with ϖ^W O^n ⊆ L ⊆ O^n and T L ⊆ L, for an integral T.
// Only primitive lattices (L ⊄ ϖO^n, one per ϖ^Z-class) are returned, sorted by key.
// Levels of the search tree are expanded on `jobs` threads.
std::vector<Lattice> stable_lattices(const Mat& T, int W, int jobs = 1);

// B with B^{-1} g B integral, from the g-stable lattice Σ g^i O^n. Identity
// for integral g; DomainError when g is not bounded.
Mat integral_frame(const Mat& g);

enum class Level { hyperspecial, iwahori };
std::string to_string(Level l);
Level parse_level(const std::string& s);

struct FiberSpec {
    enum class Kind { lie, group };
    Kind kind = Kind::lie;
    Level level = Level::hyperspecial;
    Mat gamma;      // over the base field
    int coset = 0;  // a, for the coset of Π_n^a (group fibers)
    int window = 0;
};

// A point of a fiber: one lattice (hyperspecial) or the chain L_0 ⊋ ... ⊋ L_{n-1} (Iwahori).
struct FiberPoint {
    std::vector<Lattice> chain;
    bool operator<(const FiberPoint& o) const { return chain < o.chain; }
    bool operator==(const FiberPoint& o) const { return chain == o.chain; }
};

struct FiberResult {
    std::vector<FiberPoint> points;  // sorted
    // Set when the κ / π_0 / boundedness criterion rules the fiber out.
    std::optional<std::string> diagnosis;
    LocalField field;  // base field extended by the residue degree m
    Mat frame;         // points are expressed in the basis given by the columns of frame
};

// Exact enumeration inside the window for the residue field F_{q^m}.
// No window policy is applied here.
FiberResult enumerate_fiber(const FiberSpec& spec, int m, int jobs = 1);

// Policy-checked entry points: the window must be at least 2·(predicted dim) + 2.
FiberResult enumerate_lie_fiber(const Mat& g, int N, int m, int jobs = 1);
FiberResult enumerate_group_fiber(const Mat& g, Level level, int a, int N, int m, int jobs = 1);

// Default window 2·pred + 4.
int default_window(int predicted_dim);

struct CountProfile {
    std::int64_t q = 0;
    int window = 0;
    std::vector<std::pair<int, std::int64_t>> counts;  // (m, #points over F_{q^m})
    std::vector<double> log_ratios;                     // log_q(c_{m+1} / c_m)
    double spread = 0;
    std::optional<int> fitted_dim;  // nullopt: ambiguous or empty
    std::optional<int> predicted_dim;
    std::string verdict;  // "match", "mismatch", "ambiguous", "empty", "unpredicted"
};

constexpr double kSpreadGate = 0.5;

CountProfile count_profile(const FiberSpec& spec, int M, std::optional<int> predicted, int jobs = 1);
// Fit from raw counts; exposed for testing the gate.
void fit_dimension(CountProfile& prof);
nlohmann::json to_json(const CountProfile& prof);

struct RegularLocusReport {
    int total = 0;
    int regular = 0;
    int reached = 0;  // regular points written as x(g)·O^n with x in F[g]^×
    bool base_point_regular = false;
    int orbits() const { return regular > 0 && reached == regular ? 1 : -1; }
    bool transitive() const { return reached == regular; }
};

// Requires an integral g whose reduction is regular.
RegularLocusReport regular_locus_check(const Mat& g, int N, int m = 1, int jobs = 1);

struct OrbitalReport {
    std::int64_t value_num = 0, value_den = 1;    // Σ over E^×-classes of [O_E^× : O_L^×]
    std::int64_t classes_num = 0, classes_den = 1;  // number of classes; must be an integer
    int lattices = 0;  // primitive lattices in the window
    int e = 1, f = 1;
    int window = 0;
    bool classes_integral() const { return classes_den == 1; }
    std::string value_string() const;
};

// Elliptic bounded g; measure with vol(G(O)) = vol(O_E^×) = 1.
OrbitalReport orbital_integral(const Mat& g, int N, int jobs = 1);

struct UnitIndex {
    int length = 0;  // length(O_E / O_L)
    int f_order = 1; // residue degree of O_L
    std::int64_t num = 1, den = 1;  // [O_E^× : O_L^×] = q^length (1 - q^{-f}) / (1 - q^{-f_order})
};
// Multiplier order O_L = {x in F[g] : x L ⊆ L} of a g-stable lattice and its unit index in O_E.
UnitIndex multiplier_unit_index(const Mat& g, const Lattice& L);

struct QuasiLogReport {
    int group_points = 0, lie_points = 0;
    bool sets_equal = false;
    int d_grp = 0, d_lie_of_log = 0;
};
// Group fiber of g (coset a = 0) and Lie fiber of g - Id at the same window.
QuasiLogReport quasi_log_fiber_equality(const Mat& g, Level level, int N, int m, int jobs = 1);

struct LeviReport {
    int r_n = 0;                 // Σ_{i<j} val(1 - a_i / a_j)
    int half_d_grp = 0;          // d_G(g) / 2
    int window = 0;
    CountProfile profile;        // counts of the unipotent transporter
    bool ok() const { return profile.fitted_dim && *profile.fitted_dim == r_n && r_n == half_d_grp; }
};

// g = diag(a_1..a_n) with unit entries; Z = {u ∈ U(F)/U(O) with poles of order ≤ W :
// u^{-1} g u g^{-1} ∈ U(O)}, enumerated one root height at a time.
LeviReport levi_reduction_check(const Mat& g, int M, std::optional<int> window = std::nullopt);
// Number of points of Z over F_{q^m}.
std::int64_t levi_transporter_count(const Mat& g, int W, int m);

}  // namespace springerlab
