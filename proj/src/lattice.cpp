#include "etcs/lattice.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace etcs {

GramLattice::GramLattice(IMat g, std::vector<std::string> l) : gram(std::move(g)), labels(std::move(l)) {
    if (!is_symmetric(gram)) throw std::invalid_argument("gram matrix is not symmetric");
    if (labels.empty())
        for (size_t i = 0; i < gram.size(); ++i) labels.push_back("e" + std::to_string(i + 1));
    if (labels.size() != gram.size()) throw std::invalid_argument("label count does not match rank");
}

bool GramLattice::is_even() const {
    for (size_t i = 0; i < gram.size(); ++i)
        if (mod(gram[i][i], 2) != 0) return false;
    return true;
}

Int FiniteAbelianGroup::torsion_order() const {
    Int o = 1;
    for (auto& d : factors) o *= d;
    return o;
}

std::string FiniteAbelianGroup::str() const {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < free_rank; ++i) {
        os << (first ? "" : "+") << "Z";
        first = false;
    }
    for (auto& d : factors) {
        os << (first ? "" : "+") << "Z/" << d;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

DiscriminantForm DiscriminantForm::negated() const {
    DiscriminantForm d = *this;
    for (auto& row : d.pairing)
        for (auto& x : row) x = frac_mod1(-x);
    return d;
}

SmithForm smith_form(const IMat& a) {
    size_t m = a.size(), n = ncols(a);
    SmithForm s;
    IMat d = a;
    s.U = identity<Int>(m);
    s.Uinv = identity<Int>(m);
    s.V = identity<Int>(n);
    s.Vinv = identity<Int>(n);

    auto row_add = [&](size_t i, size_t k, const Int& c) {  // row_i += c row_k
        for (size_t j = 0; j < n; ++j) d[i][j] += c * d[k][j];
        for (size_t j = 0; j < m; ++j) s.U[i][j] += c * s.U[k][j];
        for (size_t j = 0; j < m; ++j) s.Uinv[j][k] -= c * s.Uinv[j][i];
    };
    auto row_swap = [&](size_t i, size_t k) {
        if (i == k) return;
        std::swap(d[i], d[k]);
        std::swap(s.U[i], s.U[k]);
        for (size_t j = 0; j < m; ++j) std::swap(s.Uinv[j][i], s.Uinv[j][k]);
    };
    auto row_neg = [&](size_t i) {
        for (auto& x : d[i]) x = -x;
        for (auto& x : s.U[i]) x = -x;
        for (size_t j = 0; j < m; ++j) s.Uinv[j][i] = -s.Uinv[j][i];
    };
    auto col_add = [&](size_t j, size_t k, const Int& c) {  // col_j += c col_k
        for (size_t i = 0; i < m; ++i) d[i][j] += c * d[i][k];
        for (size_t i = 0; i < n; ++i) s.V[i][j] += c * s.V[i][k];
        for (size_t i = 0; i < n; ++i) s.Vinv[k][i] -= c * s.Vinv[j][i];
    };
    auto col_swap = [&](size_t j, size_t k) {
        if (j == k) return;
        for (size_t i = 0; i < m; ++i) std::swap(d[i][j], d[i][k]);
        for (size_t i = 0; i < n; ++i) std::swap(s.V[i][j], s.V[i][k]);
        std::swap(s.Vinv[j], s.Vinv[k]);
    };

    size_t t = 0;
    for (; t < std::min(m, n); ++t) {
        while (true) {
            size_t pi = m, pj = n;
            Int best = 0;
            for (size_t i = t; i < m; ++i)
                for (size_t j = t; j < n; ++j) {
                    if (d[i][j] == 0) continue;
                    Int v = abs(d[i][j]);
                    if (pi == m || v < best) {
                        best = v;
                        pi = i;
                        pj = j;
                    }
                }
            if (pi == m) break;
            row_swap(t, pi);
            col_swap(t, pj);
            bool clean = true;
            for (size_t i = t + 1; i < m; ++i) {
                if (d[i][t] == 0) continue;
                row_add(i, t, -(d[i][t] / d[t][t]));
                if (d[i][t] != 0) clean = false;
            }
            for (size_t j = t + 1; j < n; ++j) {
                if (d[t][j] == 0) continue;
                col_add(j, t, -(d[t][j] / d[t][t]));
                if (d[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            bool divides = true;
            for (size_t i = t + 1; i < m && divides; ++i)
                for (size_t j = t + 1; j < n; ++j)
                    if (d[i][j] % d[t][t] != 0) {
                        row_add(t, i, 1);
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (d[t][t] == 0) break;
        if (d[t][t] < 0) row_neg(t);
    }
    s.rank = t;
    for (size_t i = 0; i < std::min(m, n); ++i) s.diag.push_back(d[i][i]);
    return s;
}

Cokernel cokernel_presentation(const IMat& a) {
    Cokernel c;
    c.rows = a.size();
    c.cols = ncols(a);
    if (c.rows == 0) return c;
    c.snf = smith_form(a.empty() || c.cols == 0 ? zeros<Int>(c.rows, 1) : a);
    if (c.cols == 0) {
        c.snf.V = {};
        c.snf.Vinv = {};
        c.snf.diag = {};
        c.snf.rank = 0;
    }
    for (size_t i = 0; i < c.snf.rank; ++i)
        if (c.snf.diag[i] > 1) {
            c.torsion_idx.push_back(i);
            c.group.factors.push_back(c.snf.diag[i]);
        }
    for (size_t i = c.snf.rank; i < c.rows; ++i) c.free_idx.push_back(i);
    c.group.free_rank = static_cast<int>(c.free_idx.size());
    return c;
}

std::pair<IVec, IVec> Cokernel::classify(const IVec& t) const {
    IVec s = mul(snf.U, t);
    IVec tors, fr;
    for (auto i : torsion_idx) tors.push_back(mod(s[i], snf.diag[i]));
    for (auto i : free_idx) fr.push_back(s[i]);
    return {tors, fr};
}

IVec Cokernel::torsion_generator(size_t k) const {
    IVec g(rows);
    for (size_t i = 0; i < rows; ++i) g[i] = snf.Uinv[i][torsion_idx[k]];
    return g;
}

IVec Cokernel::free_functional(size_t j) const { return snf.U[free_idx[j]]; }

std::optional<Cokernel::Preimage> Cokernel::solve(const IVec& t) const {
    IVec s = mul(snf.U, t);
    for (auto i : free_idx)
        if (s[i] != 0) return std::nullopt;
    Int m = 1;
    for (size_t i = 0; i < snf.rank; ++i) m = lcm(m, snf.diag[i] / gcd(snf.diag[i], s[i]));
    IVec y(cols, Int(0));
    for (size_t i = 0; i < snf.rank; ++i) y[i] = m * s[i] / snf.diag[i];
    Preimage p{m, cols ? mul(snf.V, y) : IVec{}};
    return p;
}

DiscriminantForm discriminant_form(const GramLattice& g) { return discriminant_form(g.gram); }

DiscriminantForm discriminant_form(const IMat& g) {
    if (det(g) == 0) throw std::domain_error("singular lattice");
    auto inv = *inverse(to_q(g));
    auto ck = cokernel_presentation(g);
    DiscriminantForm d;
    d.group = ck.group;
    for (size_t k = 0; k < ck.torsion_idx.size(); ++k) d.gens.push_back(ck.torsion_generator(k));
    size_t k = d.gens.size();
    d.pairing = zeros<Rat>(k, k);
    for (size_t i = 0; i < k; ++i) {
        QVec gi = mul(inv, to_q(d.gens[i]));
        for (size_t j = 0; j < k; ++j) d.pairing[i][j] = frac_mod1(dot(to_q(d.gens[j]), gi));
    }
    return d;
}

DiscriminantForm quotient_by_2torsion(const DiscriminantForm& d) {
    DiscriminantForm q;
    std::vector<size_t> keep;
    for (size_t i = 0; i < d.group.factors.size(); ++i) {
        Int f = d.group.factors[i];
        if (f % 2 == 0) f /= 2;
        if (f > 1) {
            keep.push_back(i);
            q.group.factors.push_back(f);
            q.gens.push_back(d.gens.empty() ? IVec{} : d.gens[i]);
        }
    }
    q.pairing = zeros<Rat>(keep.size(), keep.size());
    for (size_t a = 0; a < keep.size(); ++a)
        for (size_t b = 0; b < keep.size(); ++b) q.pairing[a][b] = frac_mod1(2 * d.pairing[keep[a]][keep[b]]);
    return q;
}

namespace {

std::vector<IVec> all_elements(const std::vector<Int>& factors) {
    std::vector<IVec> out{IVec{}};
    for (auto& f : factors) {
        std::vector<IVec> next;
        for (auto& e : out)
            for (Int c = 0; c < f; ++c) {
                auto x = e;
                x.push_back(c);
                next.push_back(x);
            }
        out = std::move(next);
    }
    return out;
}

Int element_order(const IVec& e, const std::vector<Int>& factors) {
    Int o = 1;
    for (size_t i = 0; i < e.size(); ++i) o = lcm(o, factors[i] / gcd(factors[i], e[i]));
    return o;
}

Rat pair_elements(const DiscriminantForm& d, const IVec& x, const IVec& y) {
    Rat s = 0;
    for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = 0; j < y.size(); ++j) s += Rat(x[i] * y[j]) * d.pairing[i][j];
    return frac_mod1(s);
}

}  // namespace

bool forms_isomorphic(const DiscriminantForm& a, const DiscriminantForm& b) {
    if (a.group.factors != b.group.factors) return false;
    size_t k = a.group.factors.size();
    if (k == 0) return true;
    if (a.group.torsion_order() > 4096) throw std::length_error("group too large for isometry search");
    auto elems = all_elements(b.group.factors);
    std::vector<std::vector<size_t>> candidates(k);
    for (size_t i = 0; i < k; ++i)
        for (size_t e = 0; e < elems.size(); ++e)
            if (element_order(elems[e], b.group.factors) == a.group.factors[i] &&
                pair_elements(b, elems[e], elems[e]) == a.pairing[i][i])
                candidates[i].push_back(e);

    std::vector<size_t> chosen(k);
    std::function<bool(size_t)> search = [&](size_t i) -> bool {
        if (i == k) {
            std::set<IVec> image;
            for (auto& x : all_elements(a.group.factors)) {
                IVec y(k, Int(0));
                for (size_t g = 0; g < k; ++g)
                    for (size_t c = 0; c < k; ++c) y[c] += x[g] * elems[chosen[g]][c];
                for (size_t c = 0; c < k; ++c) y[c] = mod(y[c], b.group.factors[c]);
                image.insert(y);
            }
            return Int(image.size()) == b.group.torsion_order();
        }
        for (auto e : candidates[i]) {
            bool ok = true;
            for (size_t j = 0; j < i && ok; ++j)
                ok = pair_elements(b, elems[e], elems[chosen[j]]) == a.pairing[i][j];
            if (!ok) continue;
            chosen[i] = e;
            if (search(i + 1)) return true;
        }
        return false;
    };
    return search(0);
}

std::string describe_linking(const DiscriminantForm& d) {
    auto& f = d.group.factors;
    if (f.empty()) return "";
    if (f.size() == 1) {
        // smallest numerator among generator self-linkings u^2 b(g,g)
        Int n = f[0];
        Rat best = d.pairing[0][0];
        for (Int u = 1; u < n; ++u) {
            if (gcd(u, n) != 1) continue;
            Rat v = frac_mod1(Rat(u * u) * d.pairing[0][0]);
            if (v < best) best = v;
        }
        return to_string(best);
    }
    if (f.size() == 2 && f[0] == 2 && f[1] == 2) {
        for (auto& e : all_elements(f))
            if (!(e[0] == 0 && e[1] == 0) && pair_elements(d, e, e) != 0) return "diagonal";
        return "hyperbolic";
    }
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < d.pairing.size(); ++i) {
        os << (i ? ";" : "");
        for (size_t j = 0; j < d.pairing.size(); ++j) os << (j ? "," : "") << to_string(d.pairing[i][j]);
    }
    os << "]";
    return os.str();
}

RadicalSplit radical_and_quotient(const IMat& g) {
    size_t n = g.size();
    RadicalSplit r;
    if (n == 0) return r;
    if (det(g) != 0) {
        r.complement = identity<Int>(n);
        r.quotient = identity<Int>(n);
        r.reduced = GramLattice(g);
        return r;
    }
    auto s = smith_form(g);
    IMat vt = transpose(s.V);
    for (size_t j = 0; j < n; ++j) (j < s.rank ? r.complement : r.radical).push_back(vt[j]);
    for (size_t j = 0; j < s.rank; ++j) r.quotient.push_back(s.Vinv[j]);
    r.reduced = GramLattice(mul(mul(r.complement, g), transpose(r.complement)));
    return r;
}

IMat hnf_rows(IMat rows) {
    size_t n = ncols(rows), r = 0;
    for (size_t c = 0; c < n && r < rows.size(); ++c) {
        while (true) {
            size_t p = rows.size();
            for (size_t i = r; i < rows.size(); ++i)
                if (rows[i][c] != 0 && (p == rows.size() || abs(rows[i][c]) < abs(rows[p][c]))) p = i;
            if (p == rows.size()) break;
            std::swap(rows[p], rows[r]);
            bool done = true;
            for (size_t i = r + 1; i < rows.size(); ++i) {
                if (rows[i][c] == 0) continue;
                Int q = floor_div(rows[i][c], rows[r][c]);
                for (size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[r][j];
                if (rows[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (r >= rows.size() || rows[r][c] == 0) continue;
        if (rows[r][c] < 0)
            for (auto& x : rows[r]) x = -x;
        for (size_t i = 0; i < r; ++i) {
            Int q = floor_div(rows[i][c], rows[r][c]);
            if (q == 0) continue;
            for (size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[r][j];
        }
        ++r;
    }
    rows.resize(r);
    return rows;
}

IMat saturate_rows(const IMat& rows) {
    if (rows.empty()) return {};
    auto s = smith_form(rows);
    IMat out(s.Vinv.begin(), s.Vinv.begin() + static_cast<long>(s.rank));
    return hnf_rows(out);
}

IMat integer_kernel(const IMat& a) {
    size_t n = ncols(a);
    if (a.empty()) return identity<Int>(n);
    auto s = smith_form(a);
    IMat vt = transpose(s.V);
    IMat out(vt.begin() + static_cast<long>(s.rank), vt.end());
    return hnf_rows(out);
}

QMat intersect_lattices(const QMat& a, const QMat& b) {
    if (a.empty() || b.empty()) return {};
    size_t n = ncols(a);
    Int d = lcm(common_denominator(a), common_denominator(b));
    IMat ai, stacked;
    for (auto& row : a) {
        IVec v;
        for (auto& x : row) v.push_back(num(x * Rat(d)));
        ai.push_back(v);
        stacked.push_back(v);
    }
    for (auto& row : b) {
        IVec v;
        for (auto& x : row) v.push_back(-num(x * Rat(d)));
        stacked.push_back(v);
    }
    // u A = v B  <=>  (u, v) [A; -B] = 0
    auto ker = integer_kernel(transpose(stacked));
    IMat gens;
    for (auto& k : ker) {
        IVec x(n, Int(0));
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < n; ++j) x[j] += k[i] * ai[i][j];
        gens.push_back(x);
    }
    auto basis = hnf_rows(gens);
    QMat out;
    for (auto& row : basis) {
        QVec v;
        for (auto& x : row) v.emplace_back(x, d);
        out.push_back(v);
    }
    return out;
}

namespace {

SubLattice span_with_gram(const QMat& ambient, const QMat& gens) {
    SubLattice s;
    if (gens.empty()) return s;
    Int d = common_denominator(gens);
    IMat scaled;
    for (auto& g : gens) {
        IVec v;
        for (auto& x : g) v.push_back(num(x * Rat(d)));
        scaled.push_back(v);
    }
    for (auto& row : hnf_rows(scaled)) {
        QVec v;
        for (auto& x : row) v.emplace_back(x, d);
        s.basis.push_back(v);
    }
    return s;
}

}  // namespace

SubLattice saturated_sum(const QMat& ambient, const QMat& generators) {
    auto s = span_with_gram(ambient, generators);
    QMat g = mul(mul(s.basis, ambient), transpose(s.basis));
    if (!is_integral(g)) throw std::domain_error("sum is not an integral lattice");
    s.lattice = GramLattice(to_int(g));
    if (!s.lattice.is_even()) throw std::domain_error("sum is not an even lattice");
    return s;
}

SubLattice overlattice_with_basis(const IMat& g, const QMat& glue) {
    QMat gens = to_q(identity<Int>(g.size()));
    for (auto& v : glue) {
        if (v.size() != g.size()) throw std::invalid_argument("glue vector has wrong length");
        gens.push_back(v);
    }
    auto s = span_with_gram(to_q(g), gens);
    QMat gram = mul(mul(s.basis, to_q(g)), transpose(s.basis));
    if (!is_integral(gram)) throw std::domain_error("glue vectors do not define an even integral overlattice");
    s.lattice = GramLattice(to_int(gram));
    if (!s.lattice.is_even()) throw std::domain_error("glue vectors do not define an even integral overlattice");
    return s;
}

GramLattice overlattice_from_glue(const IMat& g, const QMat& glue) {
    if (glue.empty()) return GramLattice(g);
    return overlattice_with_basis(g, glue).lattice;
}

IMat even_dual_kernel(const IMat& g) {
    size_t n = g.size();
    // kernel of G mod 2 by elimination over F2
    std::vector<std::vector<int>> m(n, std::vector<int>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m[i][j] = static_cast<int>(mod(g[i][j], 2));
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < n && r < n; ++c) {
        size_t p = r;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) continue;
        std::swap(m[p], m[r]);
        for (size_t i = 0; i < n; ++i)
            if (i != r && m[i][c])
                for (size_t j = 0; j < n; ++j) m[i][j] ^= m[r][j];
        pivots.push_back(c);
        ++r;
    }
    IMat gens;
    std::vector<bool> piv(n, false);
    for (auto p : pivots) piv[p] = true;
    for (size_t f = 0; f < n; ++f) {
        if (piv[f]) continue;
        IVec v(n, Int(0));
        v[f] = 1;
        for (size_t i = 0; i < pivots.size(); ++i)
            if (m[i][f]) v[pivots[i]] = 1;
        gens.push_back(v);
    }
    for (size_t i = 0; i < n; ++i) {
        IVec v(n, Int(0));
        v[i] = 2;
        gens.push_back(v);
    }
    return hnf_rows(gens);
}

Signature signature(const IMat& g) { return signature(to_q(g)); }

Signature signature(const QMat& g) {
    QMat a = g;
    size_t n = a.size();
    Signature s;
    auto swap_sym = [&](size_t i, size_t j) {
        std::swap(a[i], a[j]);
        for (auto& row : a) std::swap(row[i], row[j]);
    };
    for (size_t k = 0; k < n; ++k) {
        size_t p = n;
        for (size_t i = k; i < n; ++i)
            if (a[i][i] != 0) {
                p = i;
                break;
            }
        if (p == n) {
            size_t pi = n, pj = n;
            for (size_t i = k; i < n && pi == n; ++i)
                for (size_t j = i + 1; j < n; ++j)
                    if (a[i][j] != 0) {
                        pi = i;
                        pj = j;
                        break;
                    }
            if (pi == n) {
                s.zero = static_cast<int>(n - k);
                break;
            }
            // e_i += e_j makes the diagonal entry 2 a_ij
            for (size_t c = 0; c < n; ++c) a[pi][c] += a[pj][c];
            for (size_t r = 0; r < n; ++r) a[r][pi] += a[r][pj];
            p = pi;
        }
        swap_sym(k, p);
        Rat piv = a[k][k];
        (piv > 0 ? s.pos : s.neg) += 1;
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) a[i][j] -= a[i][k] * a[k][j] / piv;
        for (size_t i = k + 1; i < n; ++i) a[i][k] = a[k][i] = 0;
    }
    return s;
}

Projections block_projections(const IMat& w, size_t rho_plus) {
    size_t n = w.size();
    if (rho_plus == 0 || rho_plus >= n) throw std::invalid_argument("invalid block split");
    QMat q = to_q(w);
    auto a = block(q, 0, rho_plus, 0, rho_plus);
    auto b = block(q, rho_plus, n, rho_plus, n);
    auto c = block(q, 0, rho_plus, rho_plus, n);
    auto ai = inverse(a);
    auto bi = inverse(b);
    if (!ai || !bi) throw std::domain_error("degenerate diagonal block");
    return {mul(*ai, c), mul(*bi, transpose(c))};
}

QVec characteristic_polynomial(const QMat& m) {
    size_t n = m.size();
    QVec c(n + 1, Rat(0));
    c[n] = 1;
    QMat mk = zeros<Rat>(n, n);
    for (size_t k = 1; k <= n; ++k) {
        QMat next = mul(m, mk);
        for (size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
        mk = next;
        QMat am = mul(m, mk);
        Rat tr = 0;
        for (size_t i = 0; i < n; ++i) tr += am[i][i];
        c[n - k] = -tr / Rat(static_cast<long>(k));
    }
    return c;
}

namespace {

std::vector<Int> divisors(Int x) {
    if (x < 0) x = -x;
    std::vector<Int> small, large;
    for (Int d = 1; d * d <= x; ++d)
        if (x % d == 0) {
            small.push_back(d);
            if (d * d != x) large.push_back(x / d);
        }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

Rat eval(const QVec& p, const Rat& x) {
    Rat v = 0;
    for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    return v;
}

QVec deflate(const QVec& p, const Rat& r) {
    size_t n = p.size() - 1;
    QVec q(n, Rat(0));
    Rat carry = 0;
    for (size_t i = n; i-- > 0;) {
        carry = p[i + 1] + carry * r;
        q[i] = carry;
    }
    return q;
}

}  // namespace

Eigenstructure rational_eigenstructure(const QMat& m) {
    Eigenstructure e;
    QVec p = characteristic_polynomial(m);
    std::map<Rat, int> found;
    while (p.size() > 1 && p[0] == 0) {
        p.erase(p.begin());
        found[Rat(0)]++;
    }
    bool progress = true;
    while (p.size() > 1 && progress) {
        progress = false;
        Int d = 1;
        for (auto& x : p) d = lcm(d, den(x));
        Int a0 = num(p.front() * Rat(d)), an = num(p.back() * Rat(d));
        for (auto& q : divisors(an)) {
            for (auto& r : divisors(a0)) {
                for (int sgn : {1, -1}) {
                    Rat cand(r * sgn, q);
                    if (eval(p, cand) == 0) {
                        p = deflate(p, cand);
                        found[cand]++;
                        progress = true;
                        break;
                    }
                }
                if (progress) break;
            }
            if (progress) break;
        }
    }
    for (auto& [r, k] : found) e.roots.emplace_back(r, k);
    Rat lead = p.back();
    for (auto& x : p) x /= lead;
    e.residual = p;
    return e;
}

}  // namespace etcs
