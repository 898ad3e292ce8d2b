#include "etcs/invariants.hpp"

#include <algorithm>

namespace etcs {

using nlohmann::json;

Betti betti(const Configuration& cfg) {
    auto adm = admissible_angle(cfg.angle, cfg.plus.kind, cfg.minus.kind);
    if (adm.pi1 != Pi1::simply_connected)
        throw std::domain_error("configuration is not simply connected; check admissible_angle");
    Betti b;
    b.b2 = static_cast<int>(cfg.split.radical.size());
    b.d_theta = d_theta(cfg);
    int ep = cfg.plus_involutive() ? cfg.plus.b3plus.value_or(cfg.plus.b3) : cfg.plus.b3;
    int em = cfg.minus_involutive() ? cfg.minus.b3plus.value_or(cfg.minus.b3) : cfg.minus.b3;
    b.b3 = 23 - static_cast<int>(cfg.rho_plus() + cfg.rho_minus()) + b.b2 + ep + em + b.d_theta;
    return b;
}

bool boundary_supported(const Configuration& cfg) {
    if (cfg.angle.theta == Rat(1, 4))
        return cfg.angle.family == Family::square && cfg.angle.b_plus == 1 && cfg.angle.b_minus == 0 &&
               cfg.plus.kind == BlockKind::involution && cfg.plus.pleasant;
    if (cfg.angle.theta == Rat(1, 6))
        return cfg.angle.family == Family::hexagonal && cfg.plus.kind == BlockKind::involution &&
               cfg.minus.kind == BlockKind::involution && cfg.plus.pleasant && cfg.minus.pleasant;
    return false;
}

BoundaryData boundary_data(const Configuration& cfg) {
    if (!boundary_supported(cfg)) throw std::domain_error("boundary map needs a pleasant pi/4 or pi/6 configuration");
    bool hex = cfg.angle.theta == Rat(1, 6);
    size_t rp = cfg.rho_plus(), rm = cfg.rho_minus();
    IMat a = cfg.plus.N.gram, b = cfg.minus.N.gram;
    IMat c = block(cfg.raw, 0, rp, rp, rp + rm);
    BoundaryData d;
    d.plus_domain = even_dual_kernel(a);
    d.minus_domain = hex ? even_dual_kernel(b) : identity<Int>(rm);

    std::vector<IVec> cols;
    for (auto& x : d.plus_domain) {
        IVec col;
        for (auto v : mul(a, x)) {
            if (mod(v, 2) != 0) throw std::logic_error("internal invariant violation: odd pairing on the even kernel");
            col.push_back(v / 2);
        }
        for (auto v : mul(transpose(c), x)) col.push_back(v);
        cols.push_back(col);
    }
    for (auto& y : d.minus_domain) {
        IVec col = mul(c, y);
        for (auto v : mul(b, y)) {
            if (hex) {
                if (mod(3 * v, 2) != 0) throw std::logic_error("internal invariant violation: non-integral boundary entry");
                col.push_back(3 * v / 2);
            } else {
                col.push_back(v);
            }
        }
        cols.push_back(col);
    }
    d.What = transpose(cols);
    for (auto& x : cfg.plus.c2bar) {
        if (mod(x, 2) != 0) throw std::logic_error("internal invariant violation: odd c2bar entry");
        d.p_class.push_back(x / 2);
    }
    for (auto& x : cfg.minus.c2bar) {
        if (hex && mod(x, 2) != 0) throw std::logic_error("internal invariant violation: odd c2bar entry");
        d.p_class.push_back(hex ? Int(-x / 2) : Int(-x));
    }
    for (size_t i = 0; i < d.plus_domain.size(); ++i) d.domain_labels.push_back("x" + std::to_string(i + 1));
    for (size_t i = 0; i < d.minus_domain.size(); ++i) d.domain_labels.push_back("y" + std::to_string(i + 1));
    for (size_t i = 0; i < rp; ++i) d.codomain_labels.push_back("N+*" + std::to_string(i + 1));
    for (size_t i = 0; i < rm; ++i) d.codomain_labels.push_back("N-*" + std::to_string(i + 1));
    return d;
}

TorsionResult torsion_report(const Configuration& cfg) {
    auto bd = boundary_data(cfg);
    auto ck = cokernel_presentation(bd.What);
    size_t rp = cfg.rho_plus();
    size_t kp = bd.plus_domain.size();
    TorsionResult out;
    out.torsion = ck.group;
    out.torsion.free_rank = 0;
    out.linking.group = out.torsion;
    size_t k = ck.torsion_idx.size();
    for (size_t i = 0; i < k; ++i) out.linking.gens.push_back(ck.torsion_generator(i));
    out.linking.pairing = zeros<Rat>(k, k);
    for (size_t i = 0; i < k; ++i) {
        auto pre = ck.solve(out.linking.gens[i]);
        if (!pre) throw std::logic_error("internal invariant violation: torsion element without preimage");
        IVec xs(pre->x.begin(), pre->x.begin() + static_cast<long>(kp));
        IVec ys(pre->x.begin() + static_cast<long>(kp), pre->x.end());
        IVec x = mul(transpose(bd.plus_domain), xs);
        IVec y = mul(transpose(bd.minus_domain), ys);
        for (size_t j = 0; j < k; ++j) {
            auto& t = out.linking.gens[j];
            Int s = 0;
            for (size_t u = 0; u < rp; ++u) s += t[u] * x[u];
            for (size_t u = 0; u < y.size(); ++u) s += t[rp + u] * y[u];
            out.linking.pairing[i][j] = frac_mod1(Rat(s, pre->m));
        }
    }
    return out;
}

namespace {

int gcd24(const std::vector<Int>& vals) {
    Int g = 24;
    for (auto& v : vals) g = gcd(g, v);
    return static_cast<int>(g.convert_to<long>());
}

}  // namespace

PDivisor p_divisor(const Configuration& cfg) {
    auto bd = boundary_data(cfg);
    auto ck = cokernel_presentation(bd.What);
    auto [tors, fr] = ck.classify(bd.p_class);
    PDivisor p;
    p.d_free = gcd24(fr);
    int best = 1;
    for (int k : {1, 2, 3, 4, 6, 8, 12, 24}) {
        if (p.d_free % k != 0) continue;
        bool ok = true;
        for (size_t i = 0; i < tors.size(); ++i)
            if (tors[i] % gcd(Int(k), ck.group.factors[i]) != 0) ok = false;
        if (ok) best = k;
    }
    p.d_full = best;
    return p;
}

PureTorsion pure_angle_torsion(const Configuration& cfg) {
    if (!boundary_supported(cfg)) throw std::domain_error("shortcut needs a pleasant pi/4 or pi/6 configuration");
    if (!is_pure_angle(cfg)) throw std::domain_error("configuration is not at pure angle");
    bool hex = cfg.angle.theta == Rat(1, 6);
    size_t rp = cfg.rho_plus(), rm = cfg.rho_minus();
    auto proj = block_projections(cfg.raw, rp);
    QMat a = cfg.A();

    QMat gens = to_q(identity<Int>(rp));
    for (auto& col : transpose(proj.plus_of_minus)) {
        QVec v;
        for (auto& x : col) v.push_back(2 * x);
        gens.push_back(v);
    }
    PureTorsion out;
    auto sum = saturated_sum(a, gens);
    out.delta = discriminant_form(sum.lattice);
    out.linking = quotient_by_2torsion(out.delta);
    out.torsion = out.linking.group;

    QVec cp = to_q(cfg.plus.c2bar), cm = to_q(cfg.minus.c2bar);
    out.p_free.assign(rm, Rat(0));
    for (size_t j = 0; j < rm; ++j) {
        for (size_t i = 0; i < rp; ++i) out.p_free[j] += cp[i] * proj.plus_of_minus[i][j];
        out.p_free[j] += hex ? cm[j] / 2 : cm[j];
    }
    QMat image;
    for (auto& col : transpose(proj.minus_of_plus)) {
        QVec v = col;
        if (hex)
            for (auto& x : v) x *= Rat(2, 3);
        image.push_back(v);
    }
    out.free_lattice = intersect_lattices(image, to_q(identity<Int>(rm)));
    std::vector<Int> vals;
    for (auto& v : out.free_lattice) {
        Rat s = dot(out.p_free, v);
        out.p_free_values.push_back(s);
        if (den(s) != 1) throw std::logic_error("internal invariant violation: non-integral free class");
        vals.push_back(num(s));
    }
    out.divisor.d_free = gcd24(vals);
    Int order = out.torsion.torsion_order();
    bool divisible = true;
    for (auto& x : cfg.plus.c2bar)
        if (x / 2 % out.divisor.d_free != 0) divisible = false;
    for (auto& x : cfg.minus.c2bar)
        if ((hex ? x / 2 : x) % out.divisor.d_free != 0) divisible = false;
    if (gcd(Int(out.divisor.d_free), order) == 1 || divisible) out.divisor.d_full = out.divisor.d_free;
    return out;
}

int nu_bar(const AngleSpectrum& angles, const Rat& theta, int orientation) {
    Rat rho = 1 - 2 * theta;
    Rat arho = rho < 0 ? Rat(-rho) : rho;
    static const std::map<Rat, Rat> cos_table{{Rat(0), Rat(1)},      {Rat(1, 3), Rat(1, 2)}, {Rat(1, 2), Rat(0)},
                                              {Rat(2, 3), Rat(-1, 2)}, {Rat(1), Rat(-1)}};
    auto it = cos_table.find(arho);
    if (it == cos_table.end() || den(72 * rho) != 1) throw std::invalid_argument("unsupported angle for nu-bar");
    Rat edge = -it->second;  // cos(pi - |rho|)
    int boundary = 0, interior = 0;
    for (auto& a : angles.alpha_minus) {
        if (a.is_pi()) {
            ++boundary;
            continue;
        }
        if (a.sign <= 0) continue;
        if (a.cos == edge)
            ++boundary;
        else if (a.cos > -1 && a.cos < edge)
            ++interior;
    }
    int sgn = rho > 0 ? 1 : (rho < 0 ? -1 : 0);
    int v = static_cast<int>(num(-72 * rho).convert_to<long>()) + 3 * sgn * (boundary - 1 + 2 * interior);
    return orientation < 0 ? -v : v;
}

int nu_mod48(int nb) { return static_cast<int>(mod(Int(nb + 24), Int(48)).convert_to<long>()); }

int nu_symmetric(int nb) {
    int v = nu_mod48(nb);
    return v > 24 ? v - 48 : v;
}

InvariantReport full_report(const Configuration& cfg) {
    InvariantReport r;
    r.plus_id = cfg.plus.id;
    r.minus_id = cfg.minus.id;
    r.theta = theta_string(cfg.angle.raw);
    auto adm = admissible_angle(cfg.angle, cfg.plus.kind, cfg.minus.kind);
    r.pi1 = to_string(adm.pi1);
    auto bt = betti(cfg);
    r.b2 = bt.b2;
    r.b3 = bt.b3;
    r.d_theta = bt.d_theta;
    r.pure = cfg.angle.theta != Rat(1, 2) && is_pure_angle(cfg);
    r.angles = configuration_angles(cfg);
    r.nu_bar = nu_bar(r.angles, cfg.angle.theta, cfg.angle.orientation);
    r.nu = nu_symmetric(r.nu_bar);
    r.nu48 = nu_mod48(r.nu_bar);
    r.parity_ok = mod(Int(r.nu_bar + 24), Int(2)) == mod(Int(1 + r.b2 + r.b3), Int(2));
    if (!r.parity_ok) throw std::logic_error("internal invariant violation: nu parity");

    r.torsion_supported = boundary_supported(cfg);
    if (!r.torsion_supported) {
        r.notes.push_back("torsion and p(M) unsupported at this angle");
        return r;
    }
    auto tr = torsion_report(cfg);
    auto pd = p_divisor(cfg);
    r.torsion = tr.torsion;
    r.linking = tr.linking;
    r.d_free = pd.d_free;
    r.d_full = pd.d_full;
    r.p_torsion_clean = pd.clean();
    r.p_class = boundary_data(cfg).p_class;
    if (r.pure) {
        auto pt = pure_angle_torsion(cfg);
        if (!(pt.torsion == tr.torsion) || !forms_isomorphic(pt.linking, tr.linking))
            throw std::logic_error("internal invariant violation: shortcut torsion disagrees");
        if (pt.divisor.d_free != pd.d_free || (pt.divisor.d_full && pt.divisor.d_full != pd.d_full))
            throw std::logic_error("internal invariant violation: shortcut p divisor disagrees");
    }
    if (cfg.angle.orientation < 0) r.linking = r.linking.negated();
    r.linking_class = describe_linking(r.linking);
    if (r.b2 != 0) r.notes.push_back("not 2-connected: b2 = " + std::to_string(r.b2));
    return r;
}

namespace {

json rat_matrix(const QMat& m) {
    json out = json::array();
    for (auto& row : m) {
        json r = json::array();
        for (auto& x : row) r.push_back(to_string(x));
        out.push_back(r);
    }
    return out;
}

json angle_list(const std::vector<Angle>& v) {
    json out = json::array();
    for (auto& a : v) out.push_back(json{{"cos", to_string(a.cos)}, {"sign", a.sign}, {"label", a.str()}});
    return out;
}

}  // namespace

json to_json(const InvariantReport& r) {
    json j;
    j["plus"] = r.plus_id;
    j["minus"] = r.minus_id;
    j["theta"] = r.theta;
    j["pi1"] = r.pi1;
    j["b2"] = r.b2;
    j["b3"] = r.b3;
    j["d_theta"] = r.d_theta;
    j["pure"] = r.pure;
    j["torsion_supported"] = r.torsion_supported;
    if (r.torsion_supported) {
        json f = json::array();
        for (auto& x : r.torsion.factors) f.push_back(to_string(x));
        j["torsion"] = f;
        j["torsion_order"] = to_string(r.torsion.torsion_order());
        j["linking"] = rat_matrix(r.linking.pairing);
        j["linking_class"] = r.linking_class;
        j["d_free"] = r.d_free;
        j["d_full"] = r.d_full ? json(*r.d_full) : json(nullptr);
        j["p_torsion_clean"] = r.p_torsion_clean;
        json p = json::array();
        for (auto& x : r.p_class) p.push_back(to_string(x));
        j["p_class"] = p;
    }
    j["alpha_plus"] = angle_list(r.angles.alpha_plus);
    j["alpha_minus"] = angle_list(r.angles.alpha_minus);
    j["nu_bar"] = r.nu_bar;
    j["nu"] = r.nu;
    j["nu_mod48"] = r.nu48;
    j["parity_ok"] = r.parity_ok;
    j["notes"] = r.notes;
    return j;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::distinct: return "distinct";
        case Verdict::homeo_candidate: return "homeo_candidate";
        case Verdict::diffeo_candidate: return "diffeo_candidate";
        default: return "inconclusive";
    }
}

Comparison compare_2connected(const InvariantReport& a, const InvariantReport& b) {
    for (auto* r : {&a, &b})
        if (r->b2 != 0 || r->pi1 != "trivial" || !r->torsion_supported)
            throw std::invalid_argument("comparison needs 2-connected reports with torsion data");
    Comparison c;
    if (a.b3 != b.b3) c.reason = "b3 differs";
    else if (!(a.torsion == b.torsion)) c.reason = "torsion groups differ";
    else if (a.d_free != b.d_free) c.reason = "p(M) divisors modulo torsion differ";
    else if (a.d_full != b.d_full) c.reason = "p(M) divisors differ";
    if (!c.reason.empty()) return c;

    bool same = forms_isomorphic(a.linking, b.linking);
    bool reversed = forms_isomorphic(a.linking, b.linking.negated());
    Verdict candidate = Verdict::diffeo_candidate;
    bool two_torsion = std::any_of(a.torsion.factors.begin(), a.torsion.factors.end(),
                                   [](const Int& d) { return d % 2 == 0; });
    if (two_torsion) {
        candidate = Verdict::inconclusive;
        c.notes.push_back("q: 2-torsion present, quadratic refinement not determined by the linking form");
    } else if (a.d_free % 8 == 0) {
        candidate = Verdict::homeo_candidate;
        c.notes.push_back("mu: p(M) divisible by 8, Eells-Kuiper invariant not computed");
    }
    if (112 % a.d_free != 0) c.notes.push_back("xi: not determined by mu and nu for the G2-structures");
    if (a.nu != b.nu) c.notes.push_back("nu differs: G2-structures not homotopic under any diffeomorphism");
    c.oriented = same ? candidate : Verdict::distinct;
    c.reversed = reversed ? candidate : Verdict::distinct;
    if (!same) c.reason = reversed ? "linking forms differ unless orientation is reversed" : "linking forms differ";
    return c;
}

}  // namespace etcs
