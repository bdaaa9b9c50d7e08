#include "springerlab/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "springerlab/errors.hpp"
#include "springerlab/matrix.hpp"

namespace springerlab {

IntPoly::IntPoly(LocalField F, std::vector<PadicElt> coeffs) : F_(F), c_(std::move(coeffs)) {}

IntPoly IntPoly::zero(const LocalField& F) { return IntPoly(F, {}); }

IntPoly IntPoly::constant(const PadicElt& c) { return IntPoly(c.field(), {c}); }

IntPoly IntPoly::x(const LocalField& F, int prec) {
    return IntPoly(F, {PadicElt::zero(F, prec), PadicElt::one(F, prec)});
}

IntPoly IntPoly::from_ints(const LocalField& F, const std::vector<std::int64_t>& coeffs, int prec) {
    std::vector<PadicElt> c;
    for (auto v : coeffs) c.push_back(PadicElt::from_int(F, v, prec));
    return IntPoly(F, c);
}

PadicElt IntPoly::coeff(int i) const {
    if (i >= 0 && i < static_cast<int>(c_.size())) return c_[i];
    return PadicElt::zero(F_, min_prec());
}

bool IntPoly::is_monic() const {
    if (c_.empty()) return false;
    return (c_.back() - PadicElt::one(F_, c_.back().prec())).is_zero() && c_.back().is_unit();
}

bool IntPoly::is_integral() const {
    for (const auto& c : c_)
        if (!c.is_integral()) return false;
    return true;
}

int IntPoly::min_prec() const {
    int m = 1 << 29;
    for (const auto& c : c_) m = std::min(m, c.prec());
    return c_.empty() ? F_.max_precision() : m;
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
    size_t n = std::max(c_.size(), o.c_.size());
    std::vector<PadicElt> r;
    for (size_t i = 0; i < n; ++i) {
        if (i >= c_.size())
            r.push_back(o.c_[i]);
        else if (i >= o.c_.size())
            r.push_back(c_[i]);
        else
            r.push_back(c_[i] + o.c_[i]);
    }
    return IntPoly(F_.valid() ? F_ : o.F_, r);
}

IntPoly IntPoly::operator-() const {
    std::vector<PadicElt> r;
    for (const auto& c : c_) r.push_back(-c);
    return IntPoly(F_, r);
}

IntPoly IntPoly::operator-(const IntPoly& o) const { return *this + (-o); }

IntPoly IntPoly::operator*(const IntPoly& o) const {
    if (c_.empty() || o.c_.empty()) return IntPoly(F_.valid() ? F_ : o.F_, {});
    std::vector<PadicElt> r(c_.size() + o.c_.size() - 1);
    std::vector<bool> set(r.size(), false);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) {
            PadicElt t = c_[i] * o.c_[j];
            if (!set[i + j]) {
                r[i + j] = t;
                set[i + j] = true;
            } else {
                r[i + j] += t;
            }
        }
    return IntPoly(F_, r);
}

IntPoly IntPoly::scale(const PadicElt& s) const {
    std::vector<PadicElt> r;
    for (const auto& c : c_) r.push_back(c * s);
    return IntPoly(F_, r);
}

IntPoly IntPoly::derivative() const {
    std::vector<PadicElt> r;
    for (size_t i = 1; i < c_.size(); ++i)
        r.push_back(c_[i] * PadicElt::from_int(F_, static_cast<std::int64_t>(i), F_.max_precision()));
    return IntPoly(F_, r);
}

PadicElt IntPoly::eval(const PadicElt& x) const {
    if (c_.empty()) return PadicElt::zero(F_, x.prec());
    PadicElt r = c_.back();
    for (size_t i = c_.size() - 1; i-- > 0;) r = r * x + c_[i];
    return r;
}

void IntPoly::divmod(const IntPoly& d, IntPoly& q, IntPoly& r) const {
    if (!d.is_monic()) throw DomainError("division by a non-monic polynomial");
    std::vector<PadicElt> rem = c_;
    int dd = d.degree();
    int n = degree();
    if (n < dd) {
        q = IntPoly(F_, {});
        r = *this;
        return;
    }
    std::vector<PadicElt> quo(n - dd + 1);
    for (int k = n; k >= dd; --k) {
        PadicElt c = rem[k];
        quo[k - dd] = c;
        for (int i = 0; i <= dd; ++i) rem[k - dd + i] = rem[k - dd + i] - c * d.c_[i];
    }
    rem.resize(dd);
    q = IntPoly(F_, quo);
    r = IntPoly(F_, rem);
}

IntPoly IntPoly::mod(const IntPoly& d) const {
    IntPoly q, r;
    divmod(d, q, r);
    return r;
}

IntPoly IntPoly::trimmed() const {
    std::vector<PadicElt> r = c_;
    while (!r.empty() && r.back().is_zero()) r.pop_back();
    return IntPoly(F_, r);
}

IntPoly IntPoly::with_prec(int N) const {
    std::vector<PadicElt> r;
    for (const auto& c : c_) r.push_back(c.with_prec(N));
    return IntPoly(F_, r);
}

IntPoly IntPoly::extend(const LocalField& target) const {
    std::vector<PadicElt> r;
    for (const auto& c : c_) r.push_back(c.extend(target));
    return IntPoly(target, r);
}

bool IntPoly::equals(const IntPoly& o) const {
    size_t n = std::max(c_.size(), o.c_.size());
    for (size_t i = 0; i < n; ++i) {
        bool a = i < c_.size(), b = i < o.c_.size();
        if (a && b) {
            if (!c_[i].equals(o.c_[i])) return false;
        } else if (a) {
            if (!c_[i].is_zero()) return false;
        } else if (!o.c_[i].is_zero()) {
            return false;
        }
    }
    return true;
}

std::string scalar_to_string(const PadicElt& x) {
    const LocalField& F = x.field();
    if (x.is_zero()) return "0";
    if ((x - PadicElt::one(F, x.prec())).is_zero()) return "1";
    if ((x + PadicElt::one(F, x.prec())).is_zero()) return "-1";
    if (F.e() == 1 && F.unram_deg() == 1) {
        if (x.is_integral()) {
            if (x.is_zero()) return "0";
            auto v = x.to_balanced_int();
            if (v) return std::to_string(*v);
        } else {
            // x = p^s * u with s < 0.
            int s = *x.val();
            PadicElt u = x.shift_pi(-s);
            auto v = u.to_balanced_int();
            if (v) {
                std::ostringstream os;
                os << *v << "/" << F.p();
                if (-s > 1) os << "^" << -s;
                return os.str();
            }
        }
    }
    return "{" + x.to_string() + "}";
}

std::string IntPoly::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const PadicElt& c = c_[i];
        if (c.is_zero()) continue;
        std::string cs = scalar_to_string(c);
        bool neg = false;
        if (!cs.empty() && cs[0] == '-') {
            neg = true;
            cs = cs.substr(1);
        }
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        std::string mon = i == 0 ? "" : (i == 1 ? "x" : "x^" + std::to_string(i));
        if (i == 0)
            os << cs;
        else if (cs == "1")
            os << mon;
        else
            os << cs << "*" << mon;
    }
    if (first) return "0";
    return os.str();
}

// ---------------------------------------------------------------------------
// Literal parser

namespace {

class ExprParser {
public:
    ExprParser(const LocalField& F, const std::string& text, int prec) : F_(F), s_(text), prec_(prec) {}

    IntPoly parse_all() {
        IntPoly r = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + s_.substr(pos_, 1) + "'");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("cannot parse '" + s_ + "': " + msg + " at offset " + std::to_string(pos_));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(const std::string& tok) {
        skip();
        return s_.compare(pos_, tok.size(), tok) == 0;
    }
    bool accept(const std::string& tok) {
        if (peek(tok)) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    IntPoly constant(const PadicElt& c) { return IntPoly::constant(c); }

    IntPoly expr() {
        IntPoly r;
        bool neg = false;
        if (accept("-"))
            neg = true;
        else
            accept("+");
        r = term();
        if (neg) r = -r;
        for (;;) {
            if (accept("+"))
                r = r + term();
            else if (accept("-"))
                r = r - term();
            else
                break;
        }
        return r;
    }

    IntPoly term() {
        IntPoly r = power();
        for (;;) {
            if (accept("*")) {
                r = r * power();
            } else if (accept("/")) {
                IntPoly d = power();
                if (d.degree() != 0) fail("division by a non-constant");
                r = r.scale(d[0].inv());
            } else {
                break;
            }
        }
        return r;
    }

    IntPoly power() {
        IntPoly b = atom();
        if (accept("^")) {
            skip();
            bool neg = accept("-");
            skip();
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected exponent");
            long k = std::stol(s_.substr(start, pos_ - start));
            if (neg) {
                if (b.degree() != 0) fail("negative power of a non-constant");
                PadicElt c = b[0].inv();
                return constant(c.pow(static_cast<std::uint64_t>(k)));
            }
            IntPoly r = constant(PadicElt::one(F_, prec_));
            for (long i = 0; i < k; ++i) r = r * b;
            return r;
        }
        return b;
    }

    IntPoly atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        if (accept("(")) {
            IntPoly r = expr();
            if (!accept(")")) fail("expected ')'");
            return r;
        }
        if (accept("{")) {
            auto close = s_.find('}', pos_);
            if (close == std::string::npos) fail("unterminated '{'");
            std::string lit = s_.substr(pos_, close - pos_);
            pos_ = close + 1;
            return constant(PadicElt::parse_digits(F_, lit));
        }
        if (accept("pi") || accept("\xCF\x96")) return constant(PadicElt::uniformizer(F_, prec_));
        if (accept("x")) return IntPoly::x(F_, prec_);
        if (accept("t")) return constant(PadicElt::unram_generator(F_, prec_));
        if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return constant(PadicElt::from_decimal(F_, s_.substr(start, pos_ - start), prec_));
        }
        fail("unexpected '" + s_.substr(pos_, 1) + "'");
    }

    LocalField F_;
    std::string s_;
    int prec_;
    size_t pos_ = 0;
};

}  // namespace

IntPoly IntPoly::parse(const LocalField& F, const std::string& text, int prec) {
    ExprParser ps(F, text, prec);
    IntPoly r = ps.parse_all();
    // Keep the formal degree given by the highest nonzero coefficient.
    return r.trimmed();
}

PadicElt parse_scalar(const LocalField& F, const std::string& text, int prec) {
    ExprParser ps(F, text, prec);
    IntPoly r = ps.parse_all().trimmed();
    if (r.degree() > 0) throw ParseError("expected a constant, got '" + text + "'");
    if (r.degree() < 0) return PadicElt::zero(F, prec);
    return r[0].with_prec(std::min(prec, r[0].prec()));
}

LocalField LocalField::parse(int p, int m, const std::string& text) {
    bool blank = std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (blank) return unramified(p, m);
    LocalField W = unramified(p, m);
    IntPoly f = IntPoly::parse(W, text, W.max_precision());
    if (f.degree() < 1) throw DomainError("Eisenstein polynomial must have positive degree");
    std::vector<std::vector<std::int64_t>> coeffs;
    for (int i = 0; i <= f.degree(); ++i) {
        PadicElt c = f[i];
        if (!c.is_integral()) throw DomainError("Eisenstein polynomial must have integral coefficients");
        std::vector<std::int64_t> v(c.core().begin(), c.core().begin() + m);
        coeffs.push_back(v);
    }
    return make(p, m, coeffs);
}

// ---------------------------------------------------------------------------

PadicElt resultant(const IntPoly& f, const IntPoly& g) {
    if (!f.is_monic()) throw DomainError("resultant requires a monic first argument");
    Mat C = Mat::companion(f);
    return eval_at(g, C).det();
}

PadicElt discriminant(const IntPoly& f) {
    int n = f.degree();
    PadicElt r = resultant(f, f.derivative());
    if ((n * (n - 1) / 2) % 2 == 1) r = -r;
    return r;
}

}  // namespace springerlab
