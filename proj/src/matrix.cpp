#include "springerlab/matrix.hpp"

#include <algorithm>
#include <sstream>

#include "springerlab/errors.hpp"

namespace springerlab {

Mat::Mat(LocalField F, int rows, int cols, int prec)
    : F_(F), r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols, PadicElt::zero(F, prec)) {}

Mat Mat::identity(const LocalField& F, int n, int prec) {
    Mat m(F, n, n, prec);
    for (int i = 0; i < n; ++i) m.at(i, i) = PadicElt::one(F, prec);
    return m;
}

Mat Mat::from_ints(const LocalField& F, const std::vector<std::vector<std::int64_t>>& rows, int prec) {
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows[0].size()) : 0;
    Mat m(F, r, c, prec);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c) throw ParseError("ragged matrix");
        for (int j = 0; j < c; ++j) m.at(i, j) = PadicElt::from_int(F, rows[i][j], prec);
    }
    return m;
}

Mat Mat::diagonal(const std::vector<PadicElt>& d) {
    if (d.empty()) return Mat();
    int n = static_cast<int>(d.size());
    int prec = d[0].prec();
    for (const auto& x : d) prec = std::max(prec, x.prec());
    Mat m(d[0].field(), n, n, prec);
    for (int i = 0; i < n; ++i) m.at(i, i) = d[i];
    return m;
}

Mat Mat::companion(const IntPoly& f) {
    if (!f.is_monic()) throw DomainError("companion matrix requires a monic polynomial");
    int n = f.degree();
    Mat m(f.field(), n, n, f.field().max_precision());
    for (int i = 1; i < n; ++i) m.at(i, i - 1) = PadicElt::one(f.field(), f.field().max_precision());
    for (int i = 0; i < n; ++i) m.at(i, n - 1) = -f[i];
    return m;
}

namespace {

// Split "a, b, c" at top-level commas (ignoring commas inside (), [] and {}).
std::vector<std::string> split_top(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char ch : s) {
        if (ch == '(' || ch == '[' || ch == '{') ++depth;
        if (ch == ')' || ch == ']' || ch == '}') --depth;
        if (ch == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\n\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\n\r");
    return s.substr(a, b - a + 1);
}

std::string unbracket(const std::string& s, const std::string& whole) {
    std::string t = strip(s);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']')
        throw ParseError("cannot parse matrix '" + whole + "': expected [...]");
    return t.substr(1, t.size() - 2);
}

}  // namespace

Mat Mat::parse(const LocalField& F, const std::string& text, int prec) {
    auto rows = split_top(unbracket(text, text));
    std::vector<std::vector<PadicElt>> vals;
    for (const auto& row : rows) {
        std::vector<PadicElt> r;
        for (const auto& cell : split_top(unbracket(row, text))) r.push_back(parse_scalar(F, strip(cell), prec));
        vals.push_back(r);
    }
    int n = static_cast<int>(vals.size());
    int c = static_cast<int>(vals[0].size());
    Mat m(F, n, c, prec);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(vals[i].size()) != c) throw ParseError("cannot parse matrix '" + text + "': ragged rows");
        for (int j = 0; j < c; ++j) m.at(i, j) = vals[i][j];
    }
    return m;
}

Mat Mat::operator+(const Mat& o) const {
    Mat r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    Mat r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

Mat Mat::operator*(const Mat& o) const {
    if (c_ != o.r_) throw DomainError("matrix dimension mismatch");
    Mat r(F_, r_, o.c_, 0);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < o.c_; ++j) {
            PadicElt s = at(i, 0) * o.at(0, j);
            for (int k = 1; k < c_; ++k) s += at(i, k) * o.at(k, j);
            r.at(i, j) = s;
        }
    return r;
}

Mat Mat::scale(const PadicElt& s) const {
    Mat r = *this;
    for (auto& x : r.a_) x = x * s;
    return r;
}

Mat Mat::transpose() const {
    Mat r(F_, c_, r_, 0);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) r.at(j, i) = at(i, j);
    return r;
}

Mat Mat::pow(std::uint64_t k) const {
    Mat result = identity(F_, r_, F_.max_precision());
    Mat b = *this;
    while (k) {
        if (k & 1) result = result * b;
        k >>= 1;
        if (k) b = b * b;
    }
    return result;
}

std::vector<PadicElt> Mat::apply(const std::vector<PadicElt>& v) const {
    std::vector<PadicElt> out;
    for (int i = 0; i < r_; ++i) {
        PadicElt s = at(i, 0) * v[0];
        for (int j = 1; j < c_; ++j) s += at(i, j) * v[j];
        out.push_back(s);
    }
    return out;
}

PadicElt Mat::trace() const {
    PadicElt s = at(0, 0);
    for (int i = 1; i < r_; ++i) s += at(i, i);
    return s;
}

PadicElt Mat::det() const {
    if (r_ != c_) throw DomainError("determinant of a non-square matrix");
    int n = r_;
    if (n == 0) return PadicElt::one(F_, F_.max_precision());
    std::vector<PadicElt> a = a_;
    auto A = [&](int i, int j) -> PadicElt& { return a[static_cast<size_t>(i) * n + j]; };
    PadicElt d = PadicElt::one(F_, F_.max_precision());
    bool neg = false;
    for (int k = 0; k < n; ++k) {
        int bi = -1, bj = -1, bv = 0;
        for (int i = k; i < n; ++i)
            for (int j = k; j < n; ++j) {
                auto v = A(i, j).val();
                if (v && (bi < 0 || *v < bv)) {
                    bi = i;
                    bj = j;
                    bv = *v;
                }
            }
        if (bi < 0) {
            // Remaining block vanishes at its precision: the determinant is zero
            // modulo val(d) + the smallest remaining precision.
            int mp = 1 << 29;
            for (int i = k; i < n; ++i)
                for (int j = k; j < n; ++j) mp = std::min(mp, A(i, j).prec());
            int dv = d.val_or_prec();
            return PadicElt::zero(F_, std::min(d.prec(), dv + mp));
        }
        if (bi != k) {
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(bi, j));
            neg = !neg;
        }
        if (bj != k) {
            for (int i = 0; i < n; ++i) std::swap(A(i, k), A(i, bj));
            neg = !neg;
        }
        PadicElt piv = A(k, k);
        d *= piv;
        PadicElt pinv = piv.inv();
        for (int i = k + 1; i < n; ++i) {
            PadicElt f = A(i, k) * pinv;
            for (int j = k + 1; j < n; ++j) A(i, j) = A(i, j) - f * A(k, j);
        }
    }
    return neg ? -d : d;
}

Mat Mat::inverse() const {
    if (r_ != c_) throw DomainError("inverse of a non-square matrix");
    int n = r_;
    Mat A = *this;
    Mat B = identity(F_, n, F_.max_precision());
    for (int k = 0; k < n; ++k) {
        int bi = -1, bv = 0;
        for (int i = k; i < n; ++i) {
            auto v = A.at(i, k).val();
            if (v && (bi < 0 || *v < bv)) {
                bi = i;
                bv = *v;
            }
        }
        if (bi < 0) throw PrecisionError("matrix is singular at the working precision: insufficient precision");
        if (bi != k)
            for (int j = 0; j < n; ++j) {
                std::swap(A.at(k, j), A.at(bi, j));
                std::swap(B.at(k, j), B.at(bi, j));
            }
        PadicElt pinv = A.at(k, k).inv();
        for (int j = 0; j < n; ++j) {
            A.at(k, j) = A.at(k, j) * pinv;
            B.at(k, j) = B.at(k, j) * pinv;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            PadicElt f = A.at(i, k);
            for (int j = 0; j < n; ++j) {
                A.at(i, j) = A.at(i, j) - f * A.at(k, j);
                B.at(i, j) = B.at(i, j) - f * B.at(k, j);
            }
        }
    }
    return B;
}

IntPoly Mat::charpoly() const {
    if (r_ != c_) throw DomainError("characteristic polynomial of a non-square matrix");
    int n = r_;
    int hp = F_.max_precision();
    PadicElt one = PadicElt::one(F_, hp);
    if (n == 0) return IntPoly(F_, {one});
    // vect holds coefficients of the characteristic polynomial of the leading
    // r x r block, highest degree first.
    std::vector<PadicElt> vect = {one, -at(0, 0)};
    for (int r = 1; r < n; ++r) {
        // t = [1, -a_rr, -R C, -R A C, ..., -R A^{r-1} C]
        std::vector<PadicElt> t = {one, -at(r, r)};
        std::vector<PadicElt> col(r);
        for (int i = 0; i < r; ++i) col[i] = at(i, r);
        for (int k = 0; k < r; ++k) {
            PadicElt s = at(r, 0) * col[0];
            for (int j = 1; j < r; ++j) s += at(r, j) * col[j];
            t.push_back(-s);
            if (k + 1 < r) {
                std::vector<PadicElt> nc(r);
                for (int i = 0; i < r; ++i) {
                    PadicElt u = at(i, 0) * col[0];
                    for (int j = 1; j < r; ++j) u += at(i, j) * col[j];
                    nc[i] = u;
                }
                col = nc;
            }
        }
        std::vector<PadicElt> nv(r + 2);
        for (int i = 0; i < r + 2; ++i) {
            PadicElt s = PadicElt::zero(F_, hp);
            for (int j = 0; j <= std::min(i, r); ++j) s += t[i - j] * vect[j];
            nv[i] = s;
        }
        vect = nv;
    }
    std::reverse(vect.begin(), vect.end());
    return IntPoly(F_, vect);
}

int Mat::min_prec() const {
    int m = 1 << 29;
    for (const auto& x : a_) m = std::min(m, x.prec());
    return a_.empty() ? F_.max_precision() : m;
}

int Mat::min_val() const {
    int m = 1 << 29;
    for (const auto& x : a_) m = std::min(m, x.val_or_prec());
    return m;
}

bool Mat::is_integral() const {
    for (const auto& x : a_)
        if (!x.is_integral()) return false;
    return true;
}

bool Mat::equals(const Mat& o) const {
    if (r_ != o.r_ || c_ != o.c_) return false;
    for (size_t i = 0; i < a_.size(); ++i)
        if (!a_[i].equals(o.a_[i])) return false;
    return true;
}

Mat Mat::with_prec(int N) const {
    Mat r = *this;
    for (auto& x : r.a_) x = x.with_prec(N);
    return r;
}

Mat Mat::extend(const LocalField& target) const {
    Mat r(target, r_, c_, 0);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i].extend(target);
    return r;
}

FqMatrix Mat::residue() const {
    FqMatrix m(r_, c_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) {
            const PadicElt& x = at(i, j);
            if (!x.is_integral()) throw DomainError("residue of a non-integral matrix");
            if (x.prec() < 1) throw PrecisionError("matrix entry has no residue at precision 0: insufficient precision", 1);
            m.at(i, j) = x.residue();
        }
    return m;
}

std::string Mat::to_string() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < r_; ++i) {
        if (i) os << ",";
        os << "[";
        for (int j = 0; j < c_; ++j) {
            if (j) os << ",";
            os << scalar_to_string(at(i, j));
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

Mat eval_at(const IntPoly& f, const Mat& A) {
    int n = A.rows();
    int hp = A.field().max_precision();
    Mat R(A.field(), n, n, hp);
    if (f.degree() < 0) return R;
    for (int k = f.degree(); k >= 0; --k) {
        R = R * A;
        for (int i = 0; i < n; ++i) R.at(i, i) = R.at(i, i) + f[k];
    }
    return R;
}

}  // namespace springerlab
