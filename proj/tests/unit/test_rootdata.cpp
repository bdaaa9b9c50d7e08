#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "springerlab/errors.hpp"
#include "springerlab/rootdata.hpp"

using namespace springerlab;

namespace {
std::vector<int> V(std::initializer_list<int> l) { return l; }
}  // namespace

TEST_CASE("bad and torsion primes") {
    CHECK(bad_primes(RootType::parse("A5")).empty());
    CHECK(bad_primes(RootType::parse("B2")) == V({2}));
    CHECK(bad_primes(RootType::parse("C3")) == V({2}));
    CHECK(bad_primes(RootType::parse("D4")) == V({2}));
    CHECK(bad_primes(RootType::parse("E6")) == V({2, 3}));
    CHECK(bad_primes(RootType::parse("E8")) == V({2, 3, 5}));
    CHECK(bad_primes(RootType::parse("G2")) == V({2, 3}));
    CHECK(torsion_primes(RootType::parse("C4")).empty());
    CHECK(torsion_primes(RootType::parse("B2")).empty());
    CHECK(torsion_primes(RootType::parse("B3")) == V({2}));
    CHECK(torsion_primes(RootType::parse("G2")) == V({2}));
    CHECK(torsion_primes(RootType::parse("E7")) == V({2, 3}));
    CHECK(torsion_primes(RootType::parse("E8")) == V({2, 3, 5}));
    CHECK(is_good(7, RootType::parse("E8")));
    CHECK_FALSE(is_good(5, RootType::parse("E8")));
}

TEST_CASE("fundamental groups of adjoint groups") {
    CHECK(pi1_adjoint(RootType::parse("A3")).to_string() == "Z/4");
    CHECK(pi1_adjoint(RootType::parse("B5")).to_string() == "Z/2");
    CHECK(pi1_adjoint(RootType::parse("D4")).to_string() == "Z/2 x Z/2");
    CHECK(pi1_adjoint(RootType::parse("D5")).to_string() == "Z/4");
    CHECK(pi1_adjoint(RootType::parse("E6")).to_string() == "Z/3");
    CHECK(pi1_adjoint(RootType::parse("E7")).to_string() == "Z/2");
    for (const char* t : {"E8", "F4", "G2"}) CHECK(pi1_adjoint(RootType::parse(t)).order() == 1);
}

TEST_CASE("datum torsion for type A isogenies") {
    CHECK(torsion_for_datum(2, RootType::parse("PGL2")));
    CHECK_FALSE(torsion_for_datum(3, RootType::parse("SL3")));
    CHECK(torsion_for_datum(3, RootType::parse("PGL3")));
    CHECK_FALSE(torsion_for_datum(2, RootType::parse("GL4")));
    CHECK(isogeny_kernel_order(RootType::parse("PGL6")) == 6);
    CHECK(RootType::parse("PGL3").name() == "PGL3");
    CHECK(RootType::parse("PGL3").rank == 2);
}

TEST_CASE("invalid descriptors") {
    CHECK_THROWS_AS(RootType::parse("B1"), DomainError);
    CHECK_THROWS_AS(RootType::parse("C2"), DomainError);
    CHECK_THROWS_AS(RootType::parse("D3"), DomainError);
    CHECK_THROWS_AS(RootType::parse("E9"), DomainError);
    CHECK_THROWS_AS(RootType::parse("F3"), DomainError);
    CHECK_THROWS_AS(RootType::parse("X2"), ParseError);
    CHECK_THROWS_AS(RootType::parse("A"), ParseError);
    CHECK_THROWS_AS(bad_primes(RootType{Series::G, 3, Isogeny::none}), DomainError);
}

TEST_CASE("structural properties over all descriptors") {
    for (const auto& t : all_types(24)) {
        CAPTURE(t.name());
        auto bad = bad_primes(t), tor = torsion_primes(t);
        for (int p : tor) CHECK(std::find(bad.begin(), bad.end(), p) != bad.end());
        for (int p : bad) CHECK(weyl_order(t) % static_cast<std::uint64_t>(p) == 0);
    }
}

TEST_CASE("table matches the transcribed golden file") {
    std::ifstream in(std::string(SPRINGERLAB_GOLDEN_DIR) + "/root_tables.tsv", std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(root_tables_tsv(8) == ss.str());
}
