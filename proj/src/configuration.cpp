#include "etcs/configuration.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace etcs {

using nlohmann::json;

std::string to_string(Family f) { return f == Family::square ? "square" : "hexagonal"; }

std::string to_string(Pi1 p) {
    switch (p) {
        case Pi1::simply_connected: return "trivial";
        case Pi1::z2: return "Z2";
        case Pi1::z3: return "Z3";
        default: return "inadmissible";
    }
}

Rat parse_theta(const std::string& s) {
    if (s.size() < 2 || s.substr(s.size() - 2) != "pi") throw std::invalid_argument("malformed angle '" + s + "'");
    std::string head = s.substr(0, s.size() - 2);
    if (head.empty()) return Rat(1);
    if (head == "-") return Rat(-1);
    try {
        return parse_rat(head);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed angle '" + s + "'");
    }
}

std::string theta_string(const Rat& t) { return to_string(t) + "pi"; }

Rat cos_squared(const Rat& theta) {
    static const std::map<Rat, Rat> table{{Rat(1, 6), Rat(3, 4)}, {Rat(1, 4), Rat(1, 2)}, {Rat(1, 3), Rat(1, 4)},
                                          {Rat(1, 2), Rat(0)}};
    auto it = table.find(theta);
    if (it == table.end()) throw std::invalid_argument("unsupported angle " + theta_string(theta));
    return it->second;
}

namespace {

Rat canonical(const Rat& raw, int& eps, int& orient) {
    orient = raw < 0 ? -1 : 1;
    Rat t = raw < 0 ? Rat(-raw) : raw;
    eps = 1;
    if (t > Rat(1, 2)) {
        t = 1 - t;
        eps = -1;
    } else if (t == Rat(1, 2)) {
        eps = 0;
    }
    return t;
}

}  // namespace

Admissibility admissible_angle(BlockKind kplus, BlockKind kminus, Family family, int b_plus, int b_minus,
                               const Rat& theta) {
    Rat t = theta < 0 ? Rat(-theta) : theta;
    if (t <= 0 || t >= 1) return {Pi1::inadmissible, "angle must lie strictly between 0 and pi"};
    Rat k = family == Family::square ? t * 2 : t * 3;
    if (den(k * 2) != 1) return {Pi1::inadmissible, "angle is not a half-integer multiple of the family unit"};
    if (den(k - Rat(b_plus + b_minus, 2)) != 1)
        return {Pi1::inadmissible, "parity: k = " + to_string(k) + " is incompatible with b+ + b- = " +
                                       std::to_string(b_plus + b_minus)};
    auto side = [&](BlockKind kind, int b, const char* name) -> std::string {
        if (b == 1 && kind != BlockKind::involution)
            return std::string("b") + name + " = 1 requires an involution block on the " + name + " side";
        if (b == 0 && family == Family::hexagonal && kind != BlockKind::involution)
            return std::string("hexagonal gluing requires an involution block on the ") + name + " side";
        return "";
    };
    if (auto r = side(kplus, b_plus, "+"); !r.empty()) return {Pi1::inadmissible, r};
    if (auto r = side(kminus, b_minus, "-"); !r.empty()) return {Pi1::inadmissible, r};

    bool quarter = t == Rat(1, 4) || t == Rat(3, 4);
    bool sixth = t == Rat(1, 6) || t == Rat(5, 6);
    bool third = t == Rat(1, 3) || t == Rat(2, 3);
    bool half = t == Rat(1, 2);
    int bs = b_plus + b_minus;
    if (family == Family::square) {
        if (quarter && b_plus == 1 && b_minus == 0) return {Pi1::simply_connected, ""};
        if (half && bs == 0) return {Pi1::simply_connected, ""};
        if (half && b_plus == 1 && b_minus == 1) return {Pi1::z2, ""};
    } else {
        if (third && b_plus == 1 && b_minus == 1) return {Pi1::simply_connected, ""};
        if (sixth && b_plus == 1 && b_minus == 0) return {Pi1::simply_connected, ""};
        if (half && b_plus == 1 && b_minus == 0) return {Pi1::z2, ""};
        if (third && bs == 0) return {Pi1::z3, ""};
    }
    return {Pi1::inadmissible, "no admissible gluing for " + to_string(family) + " family with (b+, b-) = (" +
                                   std::to_string(b_plus) + ", " + std::to_string(b_minus) + ") at " +
                                   theta_string(t)};
}

Admissibility admissible_angle(const GluingAngle& a, BlockKind kplus, BlockKind kminus) {
    return admissible_angle(kplus, kminus, a.family, a.b_plus, a.b_minus, a.raw);
}

GluingAngle make_angle(const Rat& raw, BlockKind kplus, BlockKind kminus, std::optional<Family> family,
                       std::optional<int> b_plus, std::optional<int> b_minus) {
    GluingAngle a;
    a.raw = raw;
    a.theta = canonical(raw, a.epsilon, a.orientation);
    bool inv2 = kplus == BlockKind::involution && kminus == BlockKind::involution;
    Family f = Family::square;
    int bp = 1, bm = 0;
    if (a.theta == Rat(1, 6)) {
        f = Family::hexagonal;
    } else if (a.theta == Rat(1, 3)) {
        f = Family::hexagonal;
        bm = 1;
    } else if (a.theta == Rat(1, 2)) {
        bp = bm = inv2 ? 1 : 0;
    }
    a.family = family.value_or(f);
    a.b_plus = b_plus.value_or(bp);
    a.b_minus = b_minus.value_or(bm);
    return a;
}

QMat Configuration::A() const { return block(to_q(raw), 0, rho_plus(), 0, rho_plus()); }
QMat Configuration::B() const {
    size_t n = raw.size();
    return block(to_q(raw), rho_plus(), n, rho_plus(), n);
}
QMat Configuration::C() const { return block(to_q(raw), 0, rho_plus(), rho_plus(), raw.size()); }

bool Configuration::plus_involutive() const { return angle.b_plus == 1 || angle.family == Family::hexagonal; }
bool Configuration::minus_involutive() const { return angle.b_minus == 1 || angle.family == Family::hexagonal; }

Configuration make_configuration(const BuildingBlock& plus, const BuildingBlock& minus, const GluingAngle& angle,
                                 const IMat& w) {
    size_t n = plus.N.rank() + minus.N.rank();
    if (w.size() != n) throw ConfigError("pushout size does not match the block ranks");
    if (!is_symmetric(w)) throw ConfigError("pushout gram is not symmetric");
    Configuration c;
    c.plus = plus;
    c.minus = minus;
    c.angle = angle;
    c.raw = w;
    c.split = radical_and_quotient(w);
    return c;
}

Configuration configuration_from_glue(const BuildingBlock& plus, const BuildingBlock& minus, const GluingAngle& angle,
                                      const IMat& base, const QMat& glue, const QMat& plus_basis,
                                      const QMat& minus_basis) {
    if (!is_symmetric(base)) throw ConfigError("base gram is not symmetric");
    auto over = overlattice_with_basis(base, glue);
    QMat vecs = plus_basis;
    vecs.insert(vecs.end(), minus_basis.begin(), minus_basis.end());
    for (auto& v : vecs)
        if (v.size() != base.size()) throw ConfigError("basis vector has wrong length");
    QMat g = mul(mul(vecs, to_q(base)), transpose(vecs));
    if (!is_integral(g)) throw ConfigError("block bases have non-integral pairings");
    auto c = make_configuration(plus, minus, angle, to_int(g));
    c.glue = glue;
    auto inv = inverse(over.basis);
    if (!inv) throw ConfigError("glue lattice is degenerate");
    for (auto& v : vecs) {
        QMat row{v};
        if (!is_integral(mul(row, *inv))) c.construction_violations.push_back("block basis vector outside the glue lattice");
    }
    return c;
}

namespace {

Rat read_rat(const json& j) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) return parse_rat(j.get<std::string>());
    throw ConfigError("expected an integer or a \"p/q\" string");
}

QMat read_qmat(const json& j, const char* field) {
    if (!j.is_array()) throw ConfigError(std::string(field) + " must be an array of rows");
    QMat m;
    for (auto& row : j) {
        if (!row.is_array()) throw ConfigError(std::string(field) + " must be an array of rows");
        QVec v;
        for (auto& x : row) v.push_back(read_rat(x));
        m.push_back(v);
    }
    return m;
}

IMat read_imat(const json& j, const char* field) {
    auto q = read_qmat(j, field);
    if (!is_integral(q)) throw ConfigError(std::string(field) + " must be integral");
    return to_int(q);
}

}  // namespace

Configuration configuration_from_json(const json& doc, const Catalog& catalog) {
    if (!doc.is_object()) throw ConfigError("configuration must be an object");
    for (auto f : {"plus", "minus", "theta", "pushout"})
        if (!doc.contains(f)) throw ConfigError(std::string("configuration is missing ") + f);
    auto& plus = require_block(catalog, doc["plus"].get<std::string>());
    auto& minus = require_block(catalog, doc["minus"].get<std::string>());
    std::optional<Family> fam;
    if (doc.contains("family")) {
        auto f = doc["family"].get<std::string>();
        if (f == "square")
            fam = Family::square;
        else if (f == "hexagonal")
            fam = Family::hexagonal;
        else
            throw ConfigError("family must be square or hexagonal");
    }
    std::optional<int> bp, bm;
    if (doc.contains("b_plus")) bp = doc["b_plus"].get<int>();
    if (doc.contains("b_minus")) bm = doc["b_minus"].get<int>();
    Rat raw;
    try {
        raw = parse_theta(doc["theta"].get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    auto angle = make_angle(raw, plus.kind, minus.kind, fam, bp, bm);
    auto& p = doc["pushout"];
    try {
        if (p.contains("gram")) return make_configuration(plus, minus, angle, read_imat(p["gram"], "gram"));
        if (p.contains("base_gram"))
            return configuration_from_glue(plus, minus, angle, read_imat(p["base_gram"], "base_gram"),
                                           p.contains("glue") ? read_qmat(p["glue"], "glue") : QMat{},
                                           read_qmat(p.at("plus_basis"), "plus_basis"),
                                           read_qmat(p.at("minus_basis"), "minus_basis"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("pushout needs either gram or base_gram");
}

QMat plus_operator(const Configuration& cfg) {
    auto p = block_projections(cfg.raw, cfg.rho_plus());
    return mul(p.plus_of_minus, p.minus_of_plus);
}

QMat minus_operator(const Configuration& cfg) {
    auto p = block_projections(cfg.raw, cfg.rho_plus());
    return mul(p.minus_of_plus, p.plus_of_minus);
}

namespace {

QMat shifted(QMat m, const Rat& s) {
    for (size_t i = 0; i < m.size(); ++i) m[i][i] -= s;
    return m;
}

}  // namespace

ValidationReport validate_configuration(const Configuration& cfg) {
    ValidationReport r;
    size_t rp = cfg.rho_plus(), n = cfg.raw.size();
    if (block(cfg.raw, 0, rp, 0, rp) != cfg.plus.N.gram) r.violations.push_back("leading block does not equal N+");
    if (block(cfg.raw, rp, n, rp, n) != cfg.minus.N.gram) r.violations.push_back("trailing block does not equal N-");
    for (size_t i = 0; i < n; ++i)
        if (mod(cfg.raw[i][i], 2) != 0) {
            r.violations.push_back("pushout is not even");
            break;
        }
    for (auto& v : cfg.construction_violations) r.violations.push_back(v);

    auto q = cfg.split.reduced.gram;
    auto sig = signature(q);
    r.quotient_signature = sig;
    int rk = static_cast<int>(q.size());
    if (sig.pos != 2 || sig.neg != rk - 2)
        r.violations.push_back("signature must be (2, rk-2), found (" + std::to_string(sig.pos) + ", " +
                               std::to_string(sig.neg) + ")");
    if (sig.pos > 3 || sig.neg > 19) r.violations.push_back("signature does not fit in the K3 lattice");
    if (2 * rk > 22) r.notes.push_back("embedding existence not guaranteed (2 rk W > 22)");

    try {
        auto es = rational_eigenstructure(plus_operator(cfg));
        for (auto& [ev, k] : es.roots)
            if (ev < 0 || ev > 1) r.violations.push_back("eigenvalue " + to_string(ev) + " of pi+ pi- outside [0,1]");
        if (es.irrational()) r.notes.push_back("irrational eigenvalues of pi+ pi- not range checked");
        if (cfg.angle.theta != Rat(1, 2)) {
            Rat c2 = cos_squared(cfg.angle.theta);
            bool found = std::any_of(es.roots.begin(), es.roots.end(), [&](auto& e) { return e.first == c2; });
            if (!found)
                r.violations.push_back("cos^2(theta) = " + to_string(c2) + " is not an eigenvalue of pi+ pi-");
        }
    } catch (const std::exception& e) {
        r.violations.push_back(e.what());
    }
    auto adm = admissible_angle(cfg.angle, cfg.plus.kind, cfg.minus.kind);
    if (adm.pi1 == Pi1::inadmissible) r.violations.push_back("inadmissible angle: " + adm.reason);
    return r;
}

AngleEigenspaces angle_eigenspaces(const Configuration& cfg, const Rat& cos2) {
    AngleEigenspaces e;
    e.plus = nullspace(shifted(plus_operator(cfg), cos2));
    e.minus = nullspace(shifted(minus_operator(cfg), cos2));
    e.multiplicity = e.plus.size();
    return e;
}

bool is_pure_angle(const Configuration& cfg) {
    Rat c2 = cos_squared(cfg.angle.theta);
    return shifted(plus_operator(cfg), c2) == zeros<Rat>(cfg.rho_plus(), cfg.rho_plus()) &&
           shifted(minus_operator(cfg), c2) == zeros<Rat>(cfg.rho_minus(), cfg.rho_minus());
}

int d_theta(const Configuration& cfg) {
    if (cfg.angle.theta == Rat(1, 2)) {
        auto p = block_projections(cfg.raw, cfg.rho_plus());
        return static_cast<int>(nullspace(p.minus_of_plus).size() + nullspace(p.plus_of_minus).size());
    }
    return static_cast<int>(angle_eigenspaces(cfg, cos_squared(cfg.angle.theta)).multiplicity);
}

std::string Angle::str() const {
    if (is_zero()) return "0";
    if (is_pi()) return "pi";
    std::string s = sign > 0 ? "+" : "-";
    if (cos == Rat(1, 2)) return s + "pi/3";
    if (cos == 0) return s + "pi/2";
    if (cos == Rat(-1, 2)) return s + "2pi/3";
    return s + "acos(" + to_string(cos) + ")";
}

AngleSpectrum configuration_angles(const Configuration& cfg) {
    auto& q = cfg.split.reduced.gram;
    size_t r = q.size(), rp = cfg.rho_plus(), n = cfg.raw.size();
    QMat qq = to_q(q);
    QMat pq = to_q(cfg.split.quotient);
    auto reflection = [&](size_t c0, size_t c1) {
        QMat x = block(pq, 0, r, c0, c1);
        QMat xt = transpose(x);
        auto inv = inverse(mul(mul(xt, qq), x));
        if (!inv) throw std::logic_error("degenerate block inside the quotient");
        QMat p = mul(mul(mul(x, *inv), xt), qq);
        for (auto& row : p)
            for (auto& v : row) v *= 2;
        return shifted(p, 1);
    };
    QMat ap = reflection(0, rp), am = reflection(rp, n);
    QMat s = mul(ap, am);
    QMat s2 = mul(am, ap);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j) s[i][j] += s2[i][j];

    auto es = rational_eigenstructure(s);
    if (es.irrational()) throw std::domain_error("algebraic angles unsupported");
    AngleSpectrum out;
    for (auto& [ev, k] : es.roots) {
        auto basis = nullspace(shifted(s, ev));
        if (basis.size() != static_cast<size_t>(k)) throw std::logic_error("angle operator is not semisimple");
        QMat e = transpose(QMat(basis.begin(), basis.end()));
        auto sig = signature(mul(mul(transpose(e), qq), e));
        if (sig.zero) throw std::logic_error("degenerate invariant subspace");
        if (ev == 2 || ev == -2) {
            Angle a{ev / 2, 0};
            for (int i = 0; i < sig.pos; ++i) out.alpha_plus.push_back(a);
            for (int i = 0; i < sig.neg; ++i) out.alpha_minus.push_back(a);
        } else {
            if (sig.pos % 2 || sig.neg % 2) throw std::logic_error("indefinite invariant 2-plane");
            for (int i = 0; i < sig.pos / 2; ++i) {
                out.alpha_plus.push_back({ev / 2, 1});
                out.alpha_plus.push_back({ev / 2, -1});
            }
            for (int i = 0; i < sig.neg / 2; ++i) {
                out.alpha_minus.push_back({ev / 2, 1});
                out.alpha_minus.push_back({ev / 2, -1});
            }
        }
    }
    if (out.alpha_plus.size() > 3 || out.alpha_minus.size() > 19)
        throw std::logic_error("angle count exceeds the K3 signature");
    out.alpha_plus.resize(3, Angle{1, 0});
    out.alpha_minus.resize(19, Angle{1, 0});
    std::sort(out.alpha_plus.begin(), out.alpha_plus.end());
    std::sort(out.alpha_minus.begin(), out.alpha_minus.end());
    return out;
}

std::optional<Rank1Pushout> rank1_pushout(const Int& n_plus, const Int& n_minus, const Rat& theta) {
    if (n_plus <= 0 || n_minus <= 0) return std::nullopt;
    if (theta == Rat(1, 4)) {
        auto s = exact_sqrt(2 * n_plus * n_minus);
        if (!s || *s % 2 != 0 || n_plus % 2 != 0) return std::nullopt;
        Rank1Pushout p{*s / 2, std::nullopt};
        Int m = gcd(n_plus / 2, n_minus);
        auto qp = exact_sqrt(n_plus / 2 / m), qm = exact_sqrt(n_minus / m);
        if (qp && qm) p.decomposition = std::array<Int, 3>{m, *qp, *qm};
        return p;
    }
    if (theta == Rat(1, 6)) {
        auto s = exact_sqrt(3 * n_plus * n_minus);
        if (!s || *s % 2 != 0) return std::nullopt;
        return Rank1Pushout{*s / 2, std::nullopt};
    }
    return std::nullopt;
}

namespace {

struct Ineq {
    QVec a;  // a . t >= b
    Rat b;
    bool operator<(const Ineq& o) const { return a != o.a ? a < o.a : b < o.b; }
};

}  // namespace

std::optional<QVec> strict_cone_point(const QMat& g) {
    size_t d = ncols(g);
    if (g.empty()) return QVec(d, Rat(0));
    std::vector<std::vector<Ineq>> levels(d + 1);
    for (auto& row : g) levels[d].push_back({row, Rat(1)});
    for (size_t v = d; v-- > 0;) {
        std::set<Ineq> next;
        std::vector<Ineq> pos, neg;
        for (auto& q : levels[v + 1]) {
            if (q.a[v] > 0)
                pos.push_back(q);
            else if (q.a[v] < 0)
                neg.push_back(q);
            else
                next.insert(q);
        }
        for (auto& p : pos)
            for (auto& m : neg) {
                Rat fp = -m.a[v], fm = p.a[v];
                Ineq c{QVec(d, Rat(0)), fp * p.b + fm * m.b};
                for (size_t u = 0; u < d; ++u) c.a[u] = fp * p.a[u] + fm * m.a[u];
                c.a[v] = 0;
                next.insert(c);
            }
        levels[v].assign(next.begin(), next.end());
    }
    for (auto& q : levels[0])
        if (q.b > 0) return std::nullopt;
    QVec t(d, Rat(0));
    for (size_t v = 0; v < d; ++v) {
        std::optional<Rat> lo, hi;
        for (auto& q : levels[v + 1]) {
            if (q.a[v] == 0) continue;
            Rat rhs = q.b;
            for (size_t u = 0; u < v; ++u) rhs -= q.a[u] * t[u];
            Rat bound = rhs / q.a[v];
            if (q.a[v] > 0)
                lo = lo ? std::max(*lo, bound) : bound;
            else
                hi = hi ? std::min(*hi, bound) : bound;
        }
        if (lo && hi)
            t[v] = (*lo + *hi) / 2;
        else if (lo)
            t[v] = *lo;
        else if (hi)
            t[v] = *hi;
    }
    return t;
}

namespace {

QVec primitive(QVec v) {
    Int d = common_denominator(QMat{v});
    Int g = 0;
    for (auto& x : v) g = gcd(g, num(x * Rat(d)));
    if (g == 0) return v;
    for (auto& x : v) x = x * Rat(d) / Rat(g);
    return v;
}

}  // namespace

Feasibility feasibility_cone_check(const Configuration& cfg) {
    Feasibility f;
    auto proj = block_projections(cfg.raw, cfg.rho_plus());
    std::vector<QVec> basis;
    if (cfg.angle.theta == Rat(1, 2))
        basis = nullspace(proj.minus_of_plus);
    else
        basis = angle_eigenspaces(cfg, cos_squared(cfg.angle.theta)).plus;
    if (basis.empty()) return f;
    QMat k = transpose(QMat(basis.begin(), basis.end()));  // rho+ x dim
    QMat g = k;
    if (cfg.angle.epsilon != 0) {
        QMat img = mul(proj.minus_of_plus, k);
        for (auto& row : img) {
            for (auto& x : row) x *= cfg.angle.epsilon;
            g.push_back(row);
        }
    }
    auto t = strict_cone_point(g);
    if (!t) return f;
    f.feasible = true;
    f.witness = primitive(mul(k, *t));
    f.image = mul(proj.minus_of_plus, f.witness);
    for (auto& x : f.image) x *= cfg.angle.epsilon;
    return f;
}

namespace {

SubLattice lambda_side(const Configuration& cfg, bool plus_side) {
    size_t rp = cfg.rho_plus(), n = cfg.raw.size();
    Rat c2 = cfg.angle.theta == Rat(1, 2) ? Rat(0) : cos_squared(cfg.angle.theta);
    // the other side's eigenspace and its orthogonal complement there
    auto eig = angle_eigenspaces(cfg, c2);
    auto& other_eig = plus_side ? eig.minus : eig.plus;
    QMat gram = plus_side ? cfg.B() : cfg.A();
    size_t off = plus_side ? rp : 0;
    QMat rows;
    for (auto& k : other_eig) rows.push_back(mul(transpose(gram), k));
    std::vector<QVec> comp = rows.empty() ? nullspace(zeros<Rat>(1, gram.size())) : nullspace(rows);

    QMat pq = to_q(cfg.split.quotient);
    IMat gens;
    auto add = [&](const QVec& raw) {
        QVec v = primitive(mul(pq, raw));
        gens.push_back(to_int(v));
    };
    size_t own0 = plus_side ? 0 : rp, own1 = plus_side ? rp : n;
    for (size_t i = own0; i < own1; ++i) {
        QVec e(n, Rat(0));
        e[i] = 1;
        add(e);
    }
    for (auto& y : comp) {
        QVec e(n, Rat(0));
        for (size_t i = 0; i < y.size(); ++i) e[off + i] = y[i];
        add(e);
    }
    IMat basis = saturate_rows(gens);
    SubLattice s;
    s.basis = to_q(basis);
    s.lattice = GramLattice(mul(mul(basis, cfg.split.reduced.gram), transpose(basis)));
    return s;
}

}  // namespace

LambdaLattices lambda_lattices(const Configuration& cfg) { return {lambda_side(cfg, true), lambda_side(cfg, false)}; }

}  // namespace etcs
