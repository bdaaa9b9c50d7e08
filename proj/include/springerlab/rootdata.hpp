#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace springerlab {

enum class Series { A, B, C, D, E, F, G };

// Isogeny class, only meaningful for type A: GL_n, SL_n, PGL_n with n = rank + 1.
enum class Isogeny { none, gl, sl, pgl };

struct RootType {
    Series series = Series::A;
    int rank = 1;
    Isogeny isogeny = Isogeny::none;

    // "A3", "B2", "E8", "G2"; type-A groups as "GL3", "SL3", "PGL3".
    static RootType parse(const std::string& text);
    std::string name() const;
    // DomainError when the rank is outside B_n n>=2, C_n n>=3, D_n n>=4,
    // E6/E7/E8, F4, G2, A_n n>=1, or an isogeny tag is attached to a non-A type.
    void validate() const;
};

// Finite abelian group as a product of cyclic factors (empty: trivial group).
struct FiniteAbelian {
    std::vector<int> cyclic;
    std::int64_t order() const;
    std::string to_string() const;  // "0", "Z/2", "Z/2 x Z/2"
};

std::vector<int> bad_primes(const RootType& t);
std::vector<int> torsion_primes(const RootType& t);
FiniteAbelian pi1_adjoint(const RootType& t);
std::uint64_t weyl_order(const RootType& t);

bool is_good(int p, const RootType& t);
// Order of ker(G^sc -> G) for the isogeny tag: 1 for SL and GL, n for PGL_n.
// Untagged types are read as simply connected.
std::int64_t isogeny_kernel_order(const RootType& t);
// Torsion prime of the root system, or a divisor of the isogeny kernel order.
bool torsion_for_datum(int p, const RootType& t);

// Every valid untagged descriptor with classical rank at most max_rank, in table order.
std::vector<RootType> all_types(int max_rank);

// Tab-separated table with a header: type, bad, torsion, pi1_adjoint, weyl_order.
std::string root_tables_tsv(int max_rank);
// Tab-separated table for the type-A isogeny tags: group, kernel_order, datum_torsion primes below 12.
std::string isogeny_table_tsv(int max_rank);

}  // namespace springerlab
