#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace etcs {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

template <class T>
using Vec = std::vector<T>;
template <class T>
using Mat = std::vector<std::vector<T>>;

using IVec = Vec<Int>;
using QVec = Vec<Rat>;
// Row-major; when a matrix holds a lattice basis, each row is one basis vector.
using IMat = Mat<Int>;
using QMat = Mat<Rat>;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

Int gcd(Int a, Int b);
Int lcm(const Int& a, const Int& b);
Int floor_div(const Int& a, const Int& b);
Int mod(const Int& a, const Int& b);
Rat frac_mod1(const Rat& r);
std::optional<Int> exact_sqrt(const Int& n);

std::string to_string(const Int& x);
std::string to_string(const Rat& r);
Rat parse_rat(const std::string& s);

template <class T>
Mat<T> zeros(size_t r, size_t c) {
    return Mat<T>(r, Vec<T>(c, T(0)));
}

template <class T>
Mat<T> identity(size_t n) {
    auto m = zeros<T>(n, n);
    for (size_t i = 0; i < n; ++i) m[i][i] = T(1);
    return m;
}

template <class T>
size_t ncols(const Mat<T>& m) {
    return m.empty() ? 0 : m[0].size();
}

template <class T>
Mat<T> transpose(const Mat<T>& a) {
    size_t r = a.size(), c = ncols(a);
    auto t = zeros<T>(c, r);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) t[j][i] = a[i][j];
    return t;
}

template <class T>
Mat<T> mul(const Mat<T>& a, const Mat<T>& b) {
    size_t r = a.size(), k = ncols(a), c = ncols(b);
    if (k != b.size()) throw std::invalid_argument("matrix dimension mismatch");
    auto m = zeros<T>(r, c);
    for (size_t i = 0; i < r; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (size_t j = 0; j < c; ++j) m[i][j] += a[i][l] * b[l][j];
        }
    return m;
}

template <class T>
Vec<T> mul(const Mat<T>& a, const Vec<T>& v) {
    if (ncols(a) != v.size() && !a.empty()) throw std::invalid_argument("matrix dimension mismatch");
    Vec<T> out(a.size(), T(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
    return out;
}

template <class T>
T dot(const Vec<T>& a, const Vec<T>& b) {
    T s(0);
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template <class T>
Mat<T> block(const Mat<T>& a, size_t r0, size_t r1, size_t c0, size_t c1) {
    auto m = zeros<T>(r1 - r0, c1 - c0);
    for (size_t i = r0; i < r1; ++i)
        for (size_t j = c0; j < c1; ++j) m[i - r0][j - c0] = a[i][j];
    return m;
}

QMat to_q(const IMat& a);
QVec to_q(const IVec& v);
bool is_integral(const QMat& a);
IMat to_int(const QMat& a);
IVec to_int(const QVec& v);
Int common_denominator(const QMat& a);

Rat det(QMat a);
Int det(const IMat& a);
std::optional<QMat> inverse(const QMat& a);
size_t rank(QMat a);
// Basis of {x : a x = 0}, one vector per entry.
std::vector<QVec> nullspace(const QMat& a);
bool is_symmetric(const IMat& a);

}  // namespace etcs
