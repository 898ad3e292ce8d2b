#include "etcs/search.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace etcs {

using nlohmann::json;

std::optional<MatchCandidate> evaluate_pushout(const BuildingBlock& plus, const BuildingBlock& minus,
                                               const GluingAngle& angle, const IMat& w) {
    auto cfg = make_configuration(plus, minus, angle, w);
    if (!validate_configuration(cfg).ok()) return std::nullopt;
    if (!feasibility_cone_check(cfg).feasible) return std::nullopt;
    MatchCandidate c;
    try {
        c.report = full_report(cfg);
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
    c.plus_id = plus.id;
    c.minus_id = minus.id;
    c.theta = theta_string(angle.raw);
    c.pushout = w;
    return c;
}

namespace {

void sort_matches(std::vector<MatchCandidate>& v) {
    std::stable_sort(v.begin(), v.end(), [](const MatchCandidate& a, const MatchCandidate& b) {
        if (a.report.b3 != b.report.b3) return a.report.b3 < b.report.b3;
        if (a.plus_id != b.plus_id) return a.plus_id < b.plus_id;
        if (a.minus_id != b.minus_id) return a.minus_id < b.minus_id;
        return a.pushout < b.pushout;
    });
}

IMat rank1_gram(const BuildingBlock& p, const BuildingBlock& m, const Int& w) {
    return {{p.N.gram[0][0], w}, {w, m.N.gram[0][0]}};
}

// a rank-1 involution block whose data coincide with an ordinary block is the same candidate twice
bool duplicates_ordinary(const BuildingBlock& b, const Catalog& catalog) {
    for (auto& o : catalog)
        if (o.kind == BlockKind::ordinary && o.rank == b.rank && o.N.gram == b.N.gram && o.c2bar == b.c2bar &&
            o.b3 == b.b3)
            return true;
    return false;
}

}  // namespace

SearchResult rank1_pi4_search(const Catalog& catalog) {
    SearchResult res;
    std::vector<const BuildingBlock*> plus, minus;
    for (auto& b : catalog) {
        if (b.rank != 1) continue;
        if (b.kind == BlockKind::involution) plus.push_back(&b);
        if (b.kind == BlockKind::ordinary || !duplicates_ordinary(b, catalog)) minus.push_back(&b);
    }
    for (auto* p : plus)
        for (auto* m : minus) {
            ++res.candidate_pairs;
            auto r1 = rank1_pushout(p->N.gram[0][0], m->N.gram[0][0], Rat(1, 4));
            if (!r1) continue;
            auto angle = make_angle(Rat(1, 4), p->kind, m->kind, Family::square, 1, 0);
            auto c = evaluate_pushout(*p, *m, angle, rank1_gram(*p, *m, r1->w));
            if (!c) {
                ++res.rejected;
                continue;
            }
            c->rank1_decomposition = r1->decomposition;
            res.matches.push_back(std::move(*c));
        }
    sort_matches(res.matches);
    return res;
}

SearchResult rank1_pi6_search(const Catalog& catalog) {
    SearchResult res;
    std::vector<const BuildingBlock*> inv;
    for (auto& b : catalog)
        if (b.rank == 1 && b.kind == BlockKind::involution) inv.push_back(&b);
    for (auto* p : inv)
        for (auto* m : inv) {
            ++res.candidate_pairs;
            auto r1 = rank1_pushout(p->N.gram[0][0], m->N.gram[0][0], Rat(1, 6));
            if (!r1) continue;
            auto angle = make_angle(Rat(1, 6), p->kind, m->kind, Family::hexagonal, 1, 0);
            auto c = evaluate_pushout(*p, *m, angle, rank1_gram(*p, *m, r1->w));
            if (!c) {
                ++res.rejected;
                continue;
            }
            res.matches.push_back(std::move(*c));
        }
    sort_matches(res.matches);
    return res;
}

namespace {

// basis permutations fixing both the Gram matrix and c2bar
std::vector<std::vector<size_t>> symmetries(const BuildingBlock& b) {
    std::vector<size_t> p(b.rank);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<size_t>> out;
    do {
        bool ok = true;
        for (size_t i = 0; i < p.size() && ok; ++i) {
            if (b.c2bar[p[i]] != b.c2bar[i]) ok = false;
            for (size_t j = 0; j < p.size() && ok; ++j)
                if (b.N.gram[p[i]][p[j]] != b.N.gram[i][j]) ok = false;
        }
        if (ok) out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

IMat canonical_cross(const IMat& c, const std::vector<std::vector<size_t>>& sp,
                     const std::vector<std::vector<size_t>>& sm) {
    IMat best;
    for (auto& p : sp)
        for (auto& q : sm) {
            IMat t(c.size(), IVec(c[0].size()));
            for (size_t i = 0; i < c.size(); ++i)
                for (size_t j = 0; j < c[0].size(); ++j) t[i][j] = c[p[i]][q[j]];
            if (best.empty() || t < best) best = t;
        }
    return best;
}

}  // namespace

SearchResult cross_term_search(const BuildingBlock& plus, const BuildingBlock& minus, const Rat& theta,
                               const CrossTermOptions& opt) {
    if (opt.bound < 0) throw std::invalid_argument("bound must be non-negative");
    if (plus.rank > 3 || minus.rank > 3) throw std::invalid_argument("cross-term search needs blocks of rank at most 3");
    auto angle = make_angle(theta, plus.kind, minus.kind);
    auto adm = admissible_angle(angle, plus.kind, minus.kind);
    if (adm.pi1 == Pi1::inadmissible) throw ConfigError("inadmissible angle: " + adm.reason);

    SearchResult res;
    size_t rp = plus.rank, rm = minus.rank;
    QMat a = to_q(plus.N.gram), binv = *inverse(to_q(minus.N.gram)), ainv = *inverse(a);
    Rat c2 = cos_squared(angle.theta);
    auto sp = symmetries(plus), sm = symmetries(minus);
    std::set<IMat> seen;

    size_t cells = rp * rm;
    int width = 2 * opt.bound + 1;
    std::vector<int> digits(cells, 0);
    for (;;) {
        ++res.candidate_pairs;
        IMat c(rp, IVec(rm));
        for (size_t k = 0; k < cells; ++k) c[k / rm][k % rm] = digits[k] - opt.bound;

        QMat qc = to_q(c);
        QMat s = mul(mul(qc, binv), transpose(qc));  // C B^-1 C^T
        bool pass = true;
        if (opt.pure) {
            for (size_t i = 0; i < rp && pass; ++i)
                for (size_t j = 0; j < rp && pass; ++j)
                    if (s[i][j] != c2 * a[i][j]) pass = false;
            if (pass) {
                QMat t = mul(mul(mul(binv, transpose(qc)), ainv), qc);
                for (size_t i = 0; i < rm && pass; ++i)
                    for (size_t j = 0; j < rm && pass; ++j)
                        if (t[i][j] != (i == j ? c2 : Rat(0))) pass = false;
            }
        } else {
            QMat t = s;
            for (size_t i = 0; i < rp; ++i)
                for (size_t j = 0; j < rp; ++j) t[i][j] -= c2 * a[i][j];
            pass = det(t) == 0;
        }
        if (pass) {
            IMat canon = canonical_cross(c, sp, sm);
            if (seen.insert(canon).second) {
                IMat w = zeros<Int>(rp + rm, rp + rm);
                for (size_t i = 0; i < rp; ++i)
                    for (size_t j = 0; j < rp; ++j) w[i][j] = plus.N.gram[i][j];
                for (size_t i = 0; i < rm; ++i)
                    for (size_t j = 0; j < rm; ++j) w[rp + i][rp + j] = minus.N.gram[i][j];
                for (size_t i = 0; i < rp; ++i)
                    for (size_t j = 0; j < rm; ++j) w[i][rp + j] = w[rp + j][i] = canon[i][j];
                std::optional<MatchCandidate> m;
                try {
                    m = evaluate_pushout(plus, minus, angle, w);
                } catch (const std::logic_error&) {
                    m.reset();  // algebraic configuration angles or a degenerate split
                }
                if (m) {
                    if (!m->report.pure && opt.pure) m->notes.push_back("angle not pure");
                    res.matches.push_back(std::move(*m));
                } else {
                    ++res.rejected;
                }
            }
        }
        size_t k = 0;
        while (k < cells && ++digits[k] == width) digits[k++] = 0;
        if (k == cells) break;
    }
    if (res.matches.size() > 1)
        for (auto& m : res.matches)
            m.notes.push_back("deduplicated by exact Gram only; lattice isometries may identify listed configurations");
    sort_matches(res.matches);
    return res;
}

json to_json(const MatchCandidate& c) {
    json j;
    j["plus"] = c.plus_id;
    j["minus"] = c.minus_id;
    j["theta"] = c.theta;
    json w = json::array();
    for (auto& row : c.pushout) {
        json r = json::array();
        for (auto& x : row) r.push_back(x.convert_to<long long>());
        w.push_back(r);
    }
    j["pushout"] = w;
    if (c.rank1_decomposition) {
        auto& d = *c.rank1_decomposition;
        j["rank1_decomposition"] = {{"m", to_string(d[0])}, {"q_plus", to_string(d[1])}, {"q_minus", to_string(d[2])}};
    }
    j["report"] = to_json(c.report);
    j["notes"] = c.notes;
    return j;
}

}  // namespace etcs
