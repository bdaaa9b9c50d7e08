#pragma once

#include <string>
#include <vector>

#include "springerlab/padic.hpp"

namespace springerlab {

// Polynomial with PadicElt coefficients, low degree first. The formal degree is
// size()-1; leading coefficients are never trimmed implicitly.
class IntPoly {
public:
    IntPoly() = default;
    IntPoly(LocalField F, std::vector<PadicElt> coeffs);

    static IntPoly zero(const LocalField& F);
    static IntPoly constant(const PadicElt& c);
    static IntPoly x(const LocalField& F, int prec);
    static IntPoly from_ints(const LocalField& F, const std::vector<std::int64_t>& coeffs, int prec);
    // "a0 + a1*x + ... + x^n"; coefficients may use integers, rationals, t, pi/ϖ,
    // braced digit literals {d0,d1 (mod ϖ^N)}, products, powers and parentheses.
    static IntPoly parse(const LocalField& F, const std::string& text, int prec);

    const LocalField& field() const { return F_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<PadicElt>& coeffs() const { return c_; }
    const PadicElt& operator[](int i) const { return c_[i]; }
    PadicElt coeff(int i) const;  // zero beyond the degree
    bool is_monic() const;
    bool is_integral() const;
    int min_prec() const;

    IntPoly operator+(const IntPoly& o) const;
    IntPoly operator-(const IntPoly& o) const;
    IntPoly operator*(const IntPoly& o) const;
    IntPoly operator-() const;
    IntPoly scale(const PadicElt& s) const;
    IntPoly derivative() const;
    PadicElt eval(const PadicElt& x) const;
    // Division by a monic polynomial.
    void divmod(const IntPoly& monic_divisor, IntPoly& q, IntPoly& r) const;
    IntPoly mod(const IntPoly& monic_divisor) const;
    // Drop trailing coefficients that vanish at their precision.
    IntPoly trimmed() const;
    IntPoly with_prec(int N) const;
    IntPoly extend(const LocalField& target) const;
    // Product equal at the common precision.
    bool equals(const IntPoly& o) const;

    std::string to_string() const;

private:
    LocalField F_;
    std::vector<PadicElt> c_;
};

// Printing of a single scalar in polynomial/matrix literals: balanced integers
// over Q_p, a/p^k for non-integral Q_p elements, braced digit literals otherwise.
std::string scalar_to_string(const PadicElt& x);
// Parse a constant expression (no x) with the same grammar as polynomial literals.
PadicElt parse_scalar(const LocalField& F, const std::string& text, int prec);

// Resultant Res(f, g) for monic f, computed as det g(C_f).
PadicElt resultant(const IntPoly& f, const IntPoly& g);
// Discriminant of a monic polynomial: (-1)^{n(n-1)/2} Res(f, f').
PadicElt discriminant(const IntPoly& f);

}  // namespace springerlab
