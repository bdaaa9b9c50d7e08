#include "springerlab/rootdata.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "springerlab/errors.hpp"

namespace springerlab {

namespace {

char series_letter(Series s) { return "ABCDEFG"[static_cast<int>(s)]; }

std::string join(const std::vector<int>& v) {
    if (v.empty()) return "-";
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

std::uint64_t factorial(int n) {
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
    return r;
}

}  // namespace

RootType RootType::parse(const std::string& text) {
    RootType t;
    std::string s = text;
    std::string prefix;
    for (const char* tag : {"PGL", "GL", "SL"})
        if (s.rfind(tag, 0) == 0) {
            prefix = tag;
            break;
        }
    size_t pos = 0;
    if (!prefix.empty()) {
        t.series = Series::A;
        t.isogeny = prefix == "PGL" ? Isogeny::pgl : prefix == "GL" ? Isogeny::gl : Isogeny::sl;
        pos = prefix.size();
    } else {
        if (s.empty() || std::string("ABCDEFG").find(s[0]) == std::string::npos)
            throw ParseError("unknown root type '" + text + "'");
        t.series = static_cast<Series>(std::string("ABCDEFG").find(s[0]));
        pos = 1;
    }
    if (pos >= s.size() || !std::all_of(s.begin() + static_cast<long>(pos), s.end(), [](char c) { return std::isdigit(c); }))
        throw ParseError("root type '" + text + "' needs a numeric rank");
    int k = std::stoi(s.substr(pos));
    // A group tag carries n for GL_n; the root system is A_{n-1}.
    t.rank = t.isogeny == Isogeny::none ? k : k - 1;
    t.validate();
    return t;
}

std::string RootType::name() const {
    switch (isogeny) {
        case Isogeny::gl: return "GL" + std::to_string(rank + 1);
        case Isogeny::sl: return "SL" + std::to_string(rank + 1);
        case Isogeny::pgl: return "PGL" + std::to_string(rank + 1);
        case Isogeny::none: break;
    }
    return std::string(1, series_letter(series)) + std::to_string(rank);
}

void RootType::validate() const {
    bool ok = false;
    switch (series) {
        case Series::A: ok = rank >= 1; break;
        case Series::B: ok = rank >= 2; break;
        case Series::C: ok = rank >= 3; break;
        case Series::D: ok = rank >= 4; break;
        case Series::E: ok = rank >= 6 && rank <= 8; break;
        case Series::F: ok = rank == 4; break;
        case Series::G: ok = rank == 2; break;
    }
    if (!ok) throw DomainError("invalid rank " + std::to_string(rank) + " for type " + series_letter(series));
    if (isogeny != Isogeny::none && series != Series::A) throw DomainError("isogeny tags apply to type A only");
}

std::int64_t FiniteAbelian::order() const {
    std::int64_t r = 1;
    for (int c : cyclic) r *= c;
    return r;
}

std::string FiniteAbelian::to_string() const {
    if (cyclic.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < cyclic.size(); ++i) out += (i ? " x Z/" : "Z/") + std::to_string(cyclic[i]);
    return out;
}

std::vector<int> bad_primes(const RootType& t) {
    t.validate();
    switch (t.series) {
        case Series::A: return {};
        case Series::B:
        case Series::C:
        case Series::D: return {2};
        case Series::E: return t.rank == 8 ? std::vector<int>{2, 3, 5} : std::vector<int>{2, 3};
        case Series::F:
        case Series::G: return {2, 3};
    }
    return {};
}

std::vector<int> torsion_primes(const RootType& t) {
    t.validate();
    switch (t.series) {
        case Series::A:
        case Series::C: return {};
        // B_2 = C_2 has no torsion primes.
        case Series::B: return t.rank >= 3 ? std::vector<int>{2} : std::vector<int>{};
        case Series::D:
        case Series::G: return {2};
        case Series::E: return t.rank == 8 ? std::vector<int>{2, 3, 5} : std::vector<int>{2, 3};
        case Series::F: return {2, 3};
    }
    return {};
}

FiniteAbelian pi1_adjoint(const RootType& t) {
    t.validate();
    switch (t.series) {
        case Series::A: return {{t.rank + 1}};
        case Series::B:
        case Series::C: return {{2}};
        case Series::D: return t.rank % 2 == 0 ? FiniteAbelian{{2, 2}} : FiniteAbelian{{4}};
        case Series::E:
            if (t.rank == 6) return {{3}};
            if (t.rank == 7) return {{2}};
            return {};
        case Series::F:
        case Series::G: return {};
    }
    return {};
}

std::uint64_t weyl_order(const RootType& t) {
    t.validate();
    int n = t.rank;
    switch (t.series) {
        case Series::A: return factorial(n + 1);
        case Series::B:
        case Series::C: return (std::uint64_t{1} << n) * factorial(n);
        case Series::D: return (std::uint64_t{1} << (n - 1)) * factorial(n);
        case Series::E: return n == 6 ? 51840 : n == 7 ? 2903040 : 696729600;
        case Series::F: return 1152;
        case Series::G: return 12;
    }
    return 1;
}

bool is_good(int p, const RootType& t) {
    auto b = bad_primes(t);
    return std::find(b.begin(), b.end(), p) == b.end();
}

std::int64_t isogeny_kernel_order(const RootType& t) {
    t.validate();
    return t.isogeny == Isogeny::pgl ? t.rank + 1 : 1;
}

bool torsion_for_datum(int p, const RootType& t) {
    auto tp = torsion_primes(t);
    if (std::find(tp.begin(), tp.end(), p) != tp.end()) return true;
    return isogeny_kernel_order(t) % p == 0;
}

std::vector<RootType> all_types(int max_rank) {
    std::vector<RootType> out;
    auto add = [&](Series s, int lo, int hi) {
        for (int r = lo; r <= hi; ++r) out.push_back(RootType{s, r, Isogeny::none});
    };
    add(Series::A, 1, max_rank);
    add(Series::B, 2, max_rank);
    add(Series::C, 3, max_rank);
    add(Series::D, 4, max_rank);
    add(Series::E, 6, 8);
    add(Series::F, 4, 4);
    add(Series::G, 2, 2);
    return out;
}

std::string root_tables_tsv(int max_rank) {
    std::string out = "type\tbad\ttorsion\tpi1_adjoint\tweyl_order\n";
    for (const auto& t : all_types(max_rank))
        out += t.name() + "\t" + join(bad_primes(t)) + "\t" + join(torsion_primes(t)) + "\t" +
               pi1_adjoint(t).to_string() + "\t" + std::to_string(weyl_order(t)) + "\n";
    return out;
}

std::string isogeny_table_tsv(int max_rank) {
    std::string out = "group\tkernel_order\tdatum_torsion\n";
    for (int r = 1; r <= max_rank; ++r)
        for (Isogeny iso : {Isogeny::gl, Isogeny::sl, Isogeny::pgl}) {
            RootType t{Series::A, r, iso};
            std::vector<int> primes;
            for (int p : {2, 3, 5, 7, 11})
                if (torsion_for_datum(p, t)) primes.push_back(p);
            out += t.name() + "\t" + std::to_string(isogeny_kernel_order(t)) + "\t" + join(primes) + "\n";
        }
    return out;
}

}  // namespace springerlab
