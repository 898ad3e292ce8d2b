#include "etcs/exact.hpp"

#include <algorithm>

namespace etcs {

Int gcd(Int a, Int b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Int lcm(const Int& a, const Int& b) {
    if (a == 0 || b == 0) return 0;
    Int g = gcd(a, b);
    Int l = a / g * b;
    return l < 0 ? Int(-l) : l;
}

Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
    return q;
}

Int mod(const Int& a, const Int& b) {
    Int r = a % b;
    if (r < 0) r += (b < 0 ? Int(-b) : b);
    return r;
}

Rat frac_mod1(const Rat& r) {
    Int n = num(r), d = den(r);
    return Rat(mod(n, d), d);
}

std::optional<Int> exact_sqrt(const Int& n) {
    if (n < 0) return std::nullopt;
    Int s = boost::multiprecision::sqrt(n);
    if (s * s == n) return s;
    return std::nullopt;
}

std::string to_string(const Int& x) { return x.str(); }

std::string to_string(const Rat& r) {
    if (den(r) == 1) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int n(s.substr(0, slash));
        Int d(s.substr(slash + 1));
        if (d == 0) throw std::invalid_argument("zero denominator");
        return Rat(n, d);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("malformed rational '" + s + "'");
    }
}

QMat to_q(const IMat& a) {
    QMat q(a.size());
    for (size_t i = 0; i < a.size(); ++i) q[i] = to_q(a[i]);
    return q;
}

QVec to_q(const IVec& v) {
    QVec q;
    q.reserve(v.size());
    for (auto& x : v) q.emplace_back(x);
    return q;
}

bool is_integral(const QMat& a) {
    for (auto& row : a)
        for (auto& x : row)
            if (den(x) != 1) return false;
    return true;
}

IMat to_int(const QMat& a) {
    IMat m(a.size());
    for (size_t i = 0; i < a.size(); ++i) m[i] = to_int(a[i]);
    return m;
}

IVec to_int(const QVec& v) {
    IVec out;
    for (auto& x : v) {
        if (den(x) != 1) throw std::domain_error("non-integral entry " + to_string(x));
        out.push_back(num(x));
    }
    return out;
}

Int common_denominator(const QMat& a) {
    Int d = 1;
    for (auto& row : a)
        for (auto& x : row) d = lcm(d, den(x));
    return d;
}

Rat det(QMat a) {
    size_t n = a.size();
    Rat d = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            Rat f = a[r][c] / a[c][c];
            for (size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return d;
}

Int det(const IMat& a) {
    Rat d = det(to_q(a));
    return num(d);
}

std::optional<QMat> inverse(const QMat& a) {
    size_t n = a.size();
    QMat m = a;
    QMat inv = identity<Rat>(n);
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return std::nullopt;
        std::swap(m[p], m[c]);
        std::swap(inv[p], inv[c]);
        Rat piv = m[c][c];
        for (size_t j = 0; j < n; ++j) {
            m[c][j] /= piv;
            inv[c][j] /= piv;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0) continue;
            Rat f = m[r][c];
            for (size_t j = 0; j < n; ++j) {
                m[r][j] -= f * m[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<size_t> rref(QMat& a) {
    std::vector<size_t> pivots;
    size_t rows = a.size(), cols = ncols(a), r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        Rat piv = a[r][c];
        for (auto& x : a[r]) x /= piv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rat f = a[i][c];
            for (size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

size_t rank(QMat a) { return rref(a).size(); }

std::vector<QVec> nullspace(const QMat& a) {
    QMat m = a;
    size_t cols = ncols(a);
    auto pivots = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<QVec> basis;
    for (size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        QVec v(cols, Rat(0));
        v[f] = 1;
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][f];
        basis.push_back(v);
    }
    return basis;
}

bool is_symmetric(const IMat& a) {
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != a.size()) return false;
        for (size_t j = 0; j < i; ++j)
            if (a[i][j] != a[j][i]) return false;
    }
    return true;
}

}  // namespace etcs
