#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "springerlab/residue_field.hpp"

namespace springerlab {

struct FieldData;

// A p-adic field of the form W(F_{p^m})[1/p][x]/(E) with E Eisenstein of
// degree e over the unramified part (E = x - p when e = 1). Handles are
// interned, so equality is pointer equality.
class LocalField {
public:
    LocalField() = default;

    static LocalField unramified(int p, int m = 1);
    // eisenstein: coefficients c_0..c_e over W(F_{p^m}), each a vector of
    // t-coefficients (t the image of the residue generator), low degree first.
    static LocalField make(int p, int m, const std::vector<std::vector<std::int64_t>>& eisenstein);
    // eisenstein_text: polynomial literal over W(F_{p^m}), e.g. "x^2 - 3"; empty for e = 1.
    static LocalField parse(int p, int m, const std::string& eisenstein_text);

    bool valid() const { return d_ != nullptr; }
    int p() const;
    int unram_deg() const;
    int e() const;
    std::int64_t residue_card() const;  // q = p^m
    const ResidueField& residue_field() const;
    // Largest absolute precision (in units of val) the fixed-width backend supports
    // for integral elements.
    int max_precision() const;
    // Same Eisenstein data over W(F_{p^{m k}}).
    LocalField unramified_extension(int k) const;
    LocalField unramified_subfield() const;
    std::string describe() const;
    const std::vector<std::vector<std::int64_t>>& eisenstein_coeffs() const;

    const FieldData* data() const { return d_; }
    bool operator==(const LocalField& o) const { return d_ == o.d_; }
    bool operator!=(const LocalField& o) const { return d_ != o.d_; }

private:
    explicit LocalField(const FieldData* d) : d_(d) {}
    const FieldData* d_ = nullptr;
    friend class PadicElt;
};

// Element of a LocalField known modulo ϖ^prec (absolute precision).
// Representation: value = ϖ^shift * core with shift = min(val, 0) for definite
// valuations and shift = min(prec, 0) otherwise; core is an integral element
// stored canonically modulo ϖ^(prec - shift) in the basis t^j ϖ^i.
class PadicElt {
public:
    static constexpr int kMaxComponents = 16;
    using Core = std::array<std::int64_t, kMaxComponents>;

    PadicElt() = default;

    static PadicElt zero(const LocalField& F, int prec);
    static PadicElt one(const LocalField& F, int prec);
    static PadicElt from_int(const LocalField& F, std::int64_t v, int prec);
    // Decimal integer or rational "a/b" (b may contain powers of p).
    static PadicElt from_decimal(const LocalField& F, const std::string& text, int prec);
    // Digit representative of a residue class (t-coefficients in [0, p)).
    static PadicElt from_residue(const LocalField& F, int r, int prec);
    static PadicElt uniformizer(const LocalField& F, int prec);
    static PadicElt pi_power(const LocalField& F, int k, int prec);
    // Image t of the residue generator in W(F_q).
    static PadicElt unram_generator(const LocalField& F, int prec);
    // Digit literal "d0,d1,...,dk (mod ϖ^N)" or "ϖ^-s*(d0,...) (mod ϖ^N)"; "pi" accepted for ϖ.
    static PadicElt parse_digits(const LocalField& F, const std::string& text);

    bool valid() const { return f_ != nullptr; }
    LocalField field() const { return LocalField(f_); }
    int prec() const { return prec_; }
    bool is_zero() const;  // indistinguishable from zero at this precision
    std::optional<int> val() const;
    int val_or_prec() const;  // valuation, or the precision when indeterminate
    bool is_integral() const { return shift_ >= 0 || is_zero(); }
    bool is_unit() const;
    // Residue class in F_q; requires an integral element with prec >= 1.
    int residue() const;

    PadicElt operator+(const PadicElt& o) const;
    PadicElt operator-(const PadicElt& o) const;
    PadicElt operator*(const PadicElt& o) const;
    PadicElt operator/(const PadicElt& o) const { return *this * o.inv(); }
    PadicElt operator-() const;
    PadicElt& operator+=(const PadicElt& o) { return *this = *this + o; }
    PadicElt& operator-=(const PadicElt& o) { return *this = *this - o; }
    PadicElt& operator*=(const PadicElt& o) { return *this = *this * o; }
    PadicElt inv() const;
    PadicElt pow(std::uint64_t k) const;
    // Truncate (N < prec) or treat the known digits as exact and pad (N > prec).
    PadicElt with_prec(int N) const;
    // Exact multiplication by ϖ^k; precision moves by k as well.
    PadicElt shift_pi(int k) const;
    // Digits strictly below ϖ^k: x mod ϖ^k, re-padded to the current precision.
    PadicElt truncate_digits(int k) const;
    // x == o at the common precision.
    bool equals(const PadicElt& o) const { return (*this - o).is_zero(); }

    // ϖ-adic digits of the core (residue encodings), prec - shift of them.
    std::vector<int> digits() const;
    int digit_shift() const { return shift_; }
    std::string to_string() const;
    // Balanced integer representative when the field is Q_p and the element is
    // integral with prec small enough; nullopt otherwise.
    std::optional<std::int64_t> to_balanced_int() const;

    // Canonical key for hashing/equality of representations.
    std::vector<std::int64_t> key() const;

    // Canonical embedding into a field with the same Eisenstein data over a
    // larger unramified base.
    PadicElt extend(const LocalField& target) const;

    // Raw access for performance-sensitive callers.
    const Core& core() const { return c_; }

private:
    PadicElt(const FieldData* f, int shift, int prec) : f_(f), shift_(shift), prec_(prec) { c_.fill(0); }
    void normalize();

    const FieldData* f_ = nullptr;
    int shift_ = 0;
    int prec_ = 0;
    Core c_{};

    friend PadicElt teichmuller(const LocalField& F, int r, int prec);
};

// Teichmüller lift of a nonzero residue class: t ≡ r mod ϖ and t^q = t.
PadicElt teichmuller(const LocalField& F, int r, int prec);

// Precision used when a task's answer is bounded by D.
inline int default_precision(int bound) { return 2 * bound + 8; }

}  // namespace springerlab
