// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "dimer_mirror/chl.hpp"
#include "dimer_mirror/disks.hpp"
#include "dimer_mirror/jacobi.hpp"
#include "dimer_mirror/mirror.hpp"
#include "oracles.hpp"

using namespace dm;
using oracle::Exp;
using oracle::family;
using oracle::plus;
using oracle::qi;
using oracle::ONE;
using oracle::Q;
using oracle::Q14;
using oracle::Q23;

namespace {

// collects failed sub-checks of one criterion
struct Check {
    std::vector<std::string> failures;
    void operator()(bool ok, const std::string& what)
    {
        if (!ok)
            failures.push_back(what);
    }
};

int failed = 0;

void criterion(int n, const char* title, double limitSeconds, const std::function<void(Check&)>& body)
{
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.failures.push_back(std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s >= limitSeconds)
        c.failures.push_back("took " + std::to_string(s) + " s, limit " + std::to_string(limitSeconds) + " s");
    bool ok = c.failures.empty();
    failed += !ok;
    std::printf("criterion %2d: %s  %-58s (%.2f s)\n", n, ok ? "PASS" : "FAIL", title, s);
    for (auto& f : c.failures)
        std::printf("    - %s\n", f.c_str());
    std::fflush(stdout);
}

NCPoly P(const QuiverPtr& q, const std::string& words, int N)
{
    return NCPoly::of(q, pathFromNames(*q, words), N);
}

NCPoly cycOf(const QuiverPtr& q, const std::string& words, int N)
{
    return cyc(q, pathFromNames(*q, words), N);
}

DefSeries var(const Quiver& q, const std::string& name, int N)
{
    return DefSeries::mono({q.var(name)}, 1, N);
}

std::string show(const DefSeries& s, const Quiver& q)
{
    return s.str(q.vars);
}

// coefficient family: sum of two weighted families, as in the potential displays
struct Fam {
    Exp base, X, Y;
    std::function<long(int, int)> coef;
};

DefSeries sum(const std::vector<Fam>& fs, int N)
{
    DefSeries s(N);
    for (auto& f : fs)
        s += family(f.base, f.X, f.Y, N, f.coef);
    return s;
}

const auto L = [](int, int l) { return long(l); };
const auto L1 = [](int, int l) { return long(l + 1); };
const auto K = [](int k, int) { return long(k); };
const auto K1 = [](int k, int) { return long(k + 1); };

}  // namespace

int main()
{
    std::cout << "acceptance: exact arithmetic, canonical serializations compared literally\n";

    criterion(1, "classical mirror of the three-punctured sphere", 1, [](Check& c) {
        auto m = buildMirror(sphere3());
        auto dual = dualDimer(m.q);
        auto dq = dual.quiver();
        c(dq->vertices.size() == 1, "dual quiver has one vertex");
        c(dq->arrows.size() == 3, "dual quiver has three loops");
        for (size_t a = 0; a < dq->arrows.size(); ++a)
            c(dq->tail[a] == dq->head[a], "arrow is a loop");
        auto q = m.quiver;
        auto w = classicalSuperpotential(m);
        c(w == cycOf(q, "a b c", 0) - cycOf(q, "c b a", 0), "W = (abc)cyc - (cba)cyc, got " + w.str());
        c(m.normalForm(P(q, "a b", 0) - P(q, "b a", 0)).value.isZero(), "ab = ba in Jac");
        auto l = classicalPotential(m);
        c(m.normalForm(l.value - P(q, "a b c", 0)).value.isZero(), "l = abc, got " + l.value.str());
    });

    criterion(2, "midpoint census of the three-punctured sphere", 1, [](Check& c) {
        auto m = buildMirror(sphere3());
        auto ps = enumerateMidpointPolygons(m.q, 1);
        c(ps.size() == 12, "12 polygons, got " + std::to_string(ps.size()));
        std::map<std::pair<bool, size_t>, int> census;
        std::map<bool, std::set<std::string>> monogonParams;
        for (auto& p : ps) {
            census[{p.clockwise, p.corners.size()}]++;
            if (p.corners.size() == 3) {
                c(p.punc.empty(), "trigons carry no q-parameter");
                c(p.sign() == 1, "trigons have sign +1");
            } else if (p.corners.size() == 1) {
                c(p.punc.size() == 1, "monogons carry one q-parameter");
                c(p.sign() == -1, "monogons have sign -1");
                monogonParams[p.clockwise].insert(monoStr(*m.quiver, p.punc));
                // the monogon at arc x encloses the puncture named x
                c(monoStr(*m.quiver, p.punc) == "q" + m.q.arcs()[p.corners[0]].id, "monogon parameter matches its arc");
            } else {
                c(false, "unexpected polygon " + p.str(m.q));
            }
        }
        for (bool cw : {true, false}) {
            c((census[{cw, 3}] == 3), "three trigons per orientation");
            c((census[{cw, 1}] == 3), "three monogons per orientation");
            c(monogonParams[cw] == std::set<std::string>{"qa", "qb", "qc"}, "monogons cover qa, qb, qc");
        }
    });

    criterion(3, "deformed terms of the sphere superpotential cancel", 1, [](Check& c) {
        auto m = buildMirror(sphere3());
        auto wq = deformedSuperpotential(m, 4);
        c(wq == classicalSuperpotential(m, 4), "W_q = W, got " + wq.str());
    });

    criterion(4, "deformed potential of the sphere", 1, [](Check& c) {
        auto m = buildMirror(sphere3());
        // identity on the copy of a turning right at both ends
        auto id = parseIdentityLocation(m, "Z1=aR");
        auto l = deformedPotential(m, {{id.first, id.second}}, 2);
        auto q = m.quiver;
        auto expect = P(q, "a b c", 2) - P(q, "a", 2).scaled(var(*q, "qa", 2)) -
                      P(q, "b", 2).scaled(var(*q, "qb", 2)) - P(q, "c", 2).scaled(var(*q, "qc", 2));
        c(l == expect, "l_q = abc - qa a - qb b - qc c, got " + l.str());
        c(deformedPotential(m, {}, 2) == expect, "default identity agrees");
    });

    criterion(5, "deformed mirror objects of the sphere", 1, [](Check& c) {
        auto m = buildMirror(sphere3());
        auto q = m.quiver;
        auto ps = enumerateMidpointPolygons(m.q, 2);
        auto one = NCPoly::of(q, idPath(0), 2);
        struct Row {
            const char *arc, *x, *y;
        };
        for (Row r : {Row{"a", "b", "c"}, Row{"b", "c", "a"}, Row{"c", "a", "b"}}) {
            auto mf = deformedMirrorObject(m, ps, {}, m.q.arc(r.arc), 2);
            auto g = P(q, r.x, 2) * P(q, r.y, 2) - one.scaled(var(*q, std::string("q") + r.arc, 2));
            auto curv = -(P(q, r.x, 2).scaled(var(*q, std::string("q") + r.x, 2)) +
                          P(q, r.y, 2).scaled(var(*q, std::string("q") + r.y, 2)));
            c(mf.f == P(q, r.arc, 2), std::string("f of ") + r.arc);
            c(m.normalForm(mf.g - g).value.isZero(), std::string("g of ") + r.arc + ": " + mf.g.str());
            c(m.normalForm(mf.curvatureEven - curv).value.isZero(),
              std::string("even curvature of ") + r.arc + ": " + mf.curvatureEven.str());
            c(m.normalForm(mf.curvatureOdd - curv).value.isZero(),
              std::string("odd curvature of ") + r.arc + ": " + mf.curvatureOdd.str());
        }
    });

    criterion(6, "classical data of the four-punctured torus", 5, [](Check& c) {
        auto m = buildMirror(torus4());
        auto q = m.quiver;
        auto w = classicalSuperpotential(m);
        auto expect = cycOf(q, "b1 a4 b2 a2", 0) + cycOf(q, "b4 a1 b3 a3", 0) - cycOf(q, "b2 a3 b1 a1", 0) -
                      cycOf(q, "b3 a2 b4 a4", 0);
        c(w == expect, "W matches the four-term display");
        std::vector<NCPoly> rels;
        for (size_t a = 0; a < q->arrows.size(); ++a)
            rels.push_back(cyclicDerivative(w, int(a)));
        for (auto [x, y] : {std::pair{"a4 b2 a2", "a1 b2 a3"}, std::pair{"a2 b1 a4", "a3 b1 a1"}}) {
            auto r = P(q, x, 0) - P(q, y, 0);
            bool found = false;
            for (auto& e : rels)
                found = found || e == r || e == -r;
            c(found, std::string("relation ") + x + " = " + y);
        }
        auto l = classicalPotential(m);
        c(m.normalForm(l.value - cycOf(q, "b1 a4 b2 a2", 0)).value.isZero(), "l = (b1 a4 b2 a2)cyc");
        for (size_t a = 0; a < q->arrows.size(); ++a) {
            auto x = NCPoly::of(q, m.arrow(int(a)), 0);
            c(m.normalForm(l.value * x - x * l.value).value.isZero(), "l central at " + q->arrows[a]);
        }
    });

    criterion(7, "torus polygon census against the sixteen families", 30, [](Check& c) {
        const int N = 6;
        auto m = buildMirror(torus4());
        auto ps = enumerateMidpointPolygons(m.q, N);
        auto table = oracle::torusTable();
        std::map<std::pair<size_t, size_t>, DefSeries> got;
        auto words = [](const std::string& s) {
            std::istringstream in(s);
            std::vector<std::string> out;
            for (std::string w; in >> w;)
                out.push_back(w);
            return out;
        };
        for (auto& p : ps) {
            std::vector<std::string> w;
            for (int a : p.arcsWord())
                w.push_back(m.q.arcs()[a].id);
            bool found = false;
            for (size_t r = 0; r < table.size() && !found; ++r) {
                auto row = words(table[r].arcs);
                if (table[r].clockwise != p.clockwise || row.size() != w.size())
                    continue;
                for (size_t k = 0; k < row.size() && !found; ++k) {
                    std::vector<std::string> rot(row.begin() + k, row.end());
                    rot.insert(rot.end(), row.begin(), row.begin() + k);
                    if (rot == w) {
                        found = true;
                        got.try_emplace({r, k}, DefSeries(N)).first->second += DefSeries::mono(p.punc, 1, N);
                    }
                }
            }
            c(found, "polygon outside the table: " + p.str(m.q));
        }
        for (size_t r = 0; r < table.size(); ++r)
            for (size_t k = 0; k < 4; ++k) {
                auto expect = family(table[r].base, table[r].X, table[r].Y, N);
                auto it = got.find({r, k});
                DefSeries have = it == got.end() ? DefSeries(N) : it->second;
                c(have == expect, "family " + table[r].arcs + " rotation " + std::to_string(k) + ": got " +
                                      show(have, *m.quiver) + ", table " + show(expect, *m.quiver));
            }
    });

    criterion(8, "W_q coefficient of the (b2 a2 b1 a4) class", 30, [](Check& c) {
        const int N = 4;
        auto m = buildMirror(torus4());
        auto q = m.quiver;
        auto wq = deformedSuperpotential(m, N);
        auto coeff = wq.coeff(pathFromNames(*q, "b2 a2 b1 a4"));
        for (auto rot : {"a2 b1 a4 b2", "b1 a4 b2 a2", "a4 b2 a2 b1"})
            c(wq.coeff(pathFromNames(*q, rot)) == coeff, std::string("cyclic class: ") + rot);
        // clockwise (0,0) family minus counterclockwise (q, q14 q, q23 q) family
        auto table = family(ONE, Q23, Q14, N) - family(Q, plus(Q14, Q), plus(Q23, Q), N);
        c(coeff == table, "coefficient equals the table families: " + show(coeff, *q));
        DefSeries squarefree(N);
        for (auto& [mono, v] : coeff.terms())
            if (std::adjacent_find(mono.begin(), mono.end()) == mono.end())
                squarefree.addTerm(mono, v);
        auto stated = parseDefSeries(*q, "1 + q1*q4 + q2*q3 - q1*q2*q3*q4", N);
        c(squarefree == stated, "square-free part is 1 + q1q4 + q2q3 - q1q2q3q4, got " + show(squarefree, *q));
    });

    criterion(9, "torus potentials l_q1, l_q2 with identity a2", 60, [](Check& c) {
        const int N = 5;
        auto m = buildMirror(torus4());
        auto q = m.quiver;
        auto ps = enumerateMidpointPolygons(m.q, N);
        auto i1 = parseIdentityLocation(m, "Z3=a2"), i2 = parseIdentityLocation(m, "Z4=a2");
        auto l1 = deformedPotentialPart(m, ps, i1.first, i1.second, N);
        auto l2 = deformedPotentialPart(m, ps, i2.first, i2.second, N);
        Exp q14q = plus(Q14, Q), q23q = plus(Q23, Q);
        std::vector<std::pair<std::string, std::vector<Fam>>> d1{
            {"b1 a4 b2 a2", {{ONE, Q23, Q14, L}, {Q, q14q, q23q, L1}}},
            {"b1 a1 b3 a2", {{qi(4), q23q, Q14, L}, {qi(4), Q14, q23q, L1}}},
            {"b4 a1 b2 a2", {{qi(3), Q23, q14q, L}, {qi(3), q14q, Q23, L1}}},
            {"b4 a4 b3 a2", {{Q, q23q, q14q, L}, {ONE, Q14, Q23, L1}}},
            {"b1 a4 b3 a3", {{qi(2), Q23, q14q, L1}, {qi(2), q14q, Q23, L}}},
            {"b1 a1 b2 a3", {{Q, q23q, q14q, L1}, {ONE, Q14, Q23, L}}},
            {"b4 a1 b3 a3", {{ONE, Q23, Q14, L}, {Q, q14q, q23q, L1}}},
            {"b4 a4 b2 a3", {{qi(1), q23q, Q14, L}, {qi(1), Q14, q23q, L1}}},
        };
        std::vector<std::pair<std::string, std::vector<Fam>>> d2{
            {"a2 b1 a4 b2", {{ONE, Q23, Q14, K1}, {Q, q14q, q23q, K}}},
            {"a2 b1 a1 b3", {{qi(4), q23q, Q14, K1}, {qi(4), Q14, q23q, K}}},
            {"a2 b4 a1 b2", {{qi(3), Q23, q14q, K1}, {qi(3), q14q, Q23, K}}},
            {"a2 b4 a4 b3", {{Q, q23q, q14q, K1}, {ONE, Q14, Q23, K}}},
            {"a3 b4 a1 b3", {{ONE, Q23, Q14, K}, {Q, q14q, q23q, K1}}},
            {"a3 b4 a4 b2", {{qi(1), q23q, Q14, K1}, {qi(1), Q14, q23q, K}}},
            {"a3 b1 a4 b3", {{qi(2), Q23, q14q, K}, {qi(2), q14q, Q23, K1}}},
            {"a3 b1 a1 b2", {{Q, q23q, q14q, K1}, {ONE, Q14, Q23, K}}},
        };
        auto compare = [&](const NCPoly& l, const auto& display, const std::string& name) {
            NCPoly expect(q, N);
            for (auto& [path, fams] : display)
                expect += NCPoly::of(q, pathFromNames(*q, path), sum(fams, N));
            for (auto& [path, fams] : display) {
                auto p = pathFromNames(*q, path);
                c(l.coeff(p) == expect.coeff(p), name + " at " + path + ": got " + show(l.coeff(p), *q) +
                                                     ", display " + show(expect.coeff(p), *q));
            }
            c(l == expect, name + " has no paths beyond the display");
        };
        compare(l1, d1, "l_q1");
        compare(l2, d2, "l_q2");
    });

    criterion(10, "centrality of l_q at a2", 120, [](Check& c) {
        const int N = 6;
        auto m = buildMirror(torus4());
        auto q = m.quiver;
        auto ps = enumerateMidpointPolygons(m.q, N);
        auto wq = deformedSuperpotential(m, ps, N);
        auto i1 = parseIdentityLocation(m, "Z3=a2"), i2 = parseIdentityLocation(m, "Z4=a2");
        IdentityChoice ids{{i1.first, i1.second}, {i2.first, i2.second}};

        // truncated membership at order 4, length cap 9
        {
            const int n = 4;
            auto pn = enumerateMidpointPolygons(m.q, n);
            auto rel = deformedRelations(m, deformedSuperpotential(m, pn, n));
            auto l = deformedPotential(m, pn, ids, n);
            auto a2 = P(q, "a2", n);
            auto x = l * a2 - a2 * l;
            auto v = idealMembershipTruncated(x, rel, n, 9);
            c(v.member, "l_q a2 - a2 l_q is a member of the relation ideal");
            if (v.member)
                c(evaluateCombination(v.combination, rel, n) == x, "membership combination re-evaluates");
        }

        auto D = [&](const char* a) { return cyclicDerivative(wq, q->arrow(a)); };
        auto l1 = deformedPotentialPart(m, ps, i1.first, i1.second, N);
        auto l2 = deformedPotentialPart(m, ps, i2.first, i2.second, N);
        auto a2 = P(q, "a2", N);
        auto lhs = l2 * a2 - a2 * l1;
        Exp q14q = plus(Q14, Q), q23q = plus(Q23, Q), qq = plus(Q, Q);
        auto F = [&](Exp b, Exp x, Exp y) { return family(b, x, y, N); };
        // right-hand side of the lemma; the eight "same minus same" terms vanish identically
        auto rhsWith = [&](const DefSeries& b1Second, const DefSeries& b4First) {
            NCPoly r = a2 * D("a2") * a2;
            r += (P(q, "a3 b4", N) * D("b1")).scaled(F(qi(1), Q, Q14) - F(plus(qi(1), Q23), Q, q23q));
            r += (P(q, "a2 b1", N) * D("b1")).scaled(F(Q14, qq, Q14) - b1Second);
            r += (P(q, "a3 b1", N) * D("b4")).scaled(F(plus(plus(qi(1), qi(2)), qi(4)), Q, q14q) - F(qi(2), Q, Q23));
            r += (P(q, "a2 b4", N) * D("b4")).scaled(b4First - F(Q23, qq, Q23));
            r += (D("b2") * P(q, "b3 a3", N)).scaled(F(plus(qi(2), Q14), q14q, Q) - F(qi(2), Q23, Q));
            r += (D("b2") * P(q, "b2 a2", N)).scaled(F(q14q, q14q, qq) - F(Q23, Q23, qq));
            r += (D("b3") * P(q, "b2 a3", N)).scaled(F(qi(1), Q14, Q) - F(plus(qi(1), Q23), q23q, Q));
            r += (D("b3") * P(q, "b3 a2", N)).scaled(F(Q14, Q14, qq) - F(q23q, q23q, qq));
            return r;
        };
        auto printed = rhsWith(F(Q23, qq, q23q), F(Q14, qq, q14q));

        // first path: both sides vanish
        auto p1 = pathFromNames(*q, "a2 b1 a1 b3 a2");
        c(lhs.coeff(p1).isZero(), "left side has no a2 b1 a1 b3 a2 term");
        c(printed.coeff(p1) == lhs.coeff(p1), "a2 b1 a1 b3 a2: both sides agree");

        // second path: left side equals the closed form, and the twelve proof terms sum to it
        auto p2 = pathFromNames(*q, "a2 b1 a1 b2 a3");
        auto closed = -family(Q, q23q, q14q, N, L1) - family(ONE, Q14, Q23, N, L);
        c(lhs.coeff(p2) == closed, "a2 b1 a1 b2 a3 on the left equals the closed form: " + show(lhs.coeff(p2), *q));
        DefSeries twelve(N);
        auto term = [&](long e14, long e23, int sign) {
            Exp e = plus(plus(ONE, Q14, int(e14)), Q23, int(e23));
            twelve += oracle::mono(e, sign, N);
        };
        const int R = N / 2 + 1;
        for (int k = 0; k <= R; ++k)
            for (int l = 0; l <= R; ++l)
                for (int k2 = 0; k2 <= R; ++k2)
                    for (int l2 = 0; l2 <= R; ++l2) {
                        long a = (k + 1) * (2 * l + 1), s = 1 + l + k + 2 * k * l, t = k2 + l2 + 2 * k2 * l2;
                        term(a + (2 * k2 + 1) * (l2 + 1), 2 * (k + 1) * l + (k2 + 1) * (2 * l2 + 1), +1);
                        term(a + l2 * (2 * k2 + 1), 2 * (k + 1) * l + k2 * (2 * l2 + 1), -1);
                        term(a + (2 * k2 + 1) * (l2 + 1), 2 * (k + 1) * (l + 1) + (k2 + 1) * (2 * l2 + 1), -1);
                        term(a + (2 * k2 + 1) * l2, 2 * (k + 1) * (l + 1) + k2 * (2 * l2 + 1), +1);
                        term(a + (2 * k2 + 1) * (l2 + 1), a + (k2 + 1) * (2 * l2 + 1), -1);
                        term(a + (2 * k2 + 1) * l2, a + k2 * (2 * l2 + 1), +1);
                        term(a + (2 * k2 + 1) * (l2 + 1), a + (k2 + 1) * (2 * l2 + 1), +1);
                        term(a + (2 * k2 + 1) * l2, a + k2 * (2 * l2 + 1), -1);
                        term(s + t, k * (2 * l + 1) + 2 * l2 * (k2 + 1), +1);
                        term(s + t, k * (2 * l + 1) + 2 * k2 * (l2 + 1), -1);
                        term(s + t, a + 2 * (k2 + 1) * l2, -1);
                        term(s + t, a + 2 * k2 * (l2 + 1), +1);
                    }
        c(twelve == closed, "the twelve proof terms sum to the closed form");

        // the relation coefficients used in the proof
        auto C = [&](const char* a, const char* p) { return D(a).coeff(pathFromNames(*q, p)); };
        DefSeries db1(N), da3(N), db3(N);
        auto pw = [](int e14, int e23) { return plus(plus(ONE, Q14, e14), Q23, e23); };
        for (int k = 0; k <= N; ++k)
            for (int l = 0; l <= N; ++l) {
                db1 += oracle::mono(pw(2 * k + 1 + l + 2 * k * l, 2 * l + 1 + k + 2 * k * l), 1, N) -
                       oracle::mono(pw(l + 2 * k * l, k + 2 * k * l), 1, N);
                da3 += oracle::mono(pw(2 * k + l + 1 + 2 * k * l, 2 * l + k + 1 + 2 * k * l), 1, N) -
                       oracle::mono(pw(l + 2 * k * l, k + 2 * k * l), 1, N);
                db3 += oracle::mono(plus(qi(4), pw(k + l + 2 * k * l, 2 * l + 2 * k * l)), 1, N) -
                       oracle::mono(plus(qi(4), pw(k + l + 2 * k * l, 2 * k + 2 * k * l)), 1, N);
            }
        c(C("b1", "a1 b2 a3") == db1, "d_b1 W_q at a1 b2 a3");
        c(C("a3", "b1 a1 b2") == da3, "d_a3 W_q at b1 a1 b2");
        c(C("b3", "a2 b1 a1") == db3, "d_b3 W_q at a2 b1 a1");

        // with a factor q restored in two prefactors the identity holds for every path
        auto corrected = rhsWith(F(q23q, qq, q23q), F(q14q, qq, q14q));
        c(corrected == lhs, "corrected right-hand side equals the left side on all paths");
        c(corrected.coeff(p2) == closed, "a2 b1 a1 b2 a3 on the corrected right side");
    });

    criterion(11, "product-table pipeline reproduces the disk computations", 120, [](Check& c) {
        for (auto name : {"sphere3", "torus4"})
            for (int N = 0; N <= 3; ++N) {
                auto m = buildMirror(loadDimer(name));
                auto ps = enumerateMidpointPolygons(m.q, N);
                auto t = parseProductTable(productTableFromDisks(m, ps, {}, N).str());
                std::string tag = std::string(name) + " N=" + std::to_string(N);
                c(chlSuperpotential(t, m.quiver) == deformedSuperpotential(m, ps, N), tag + ": W_q");
                auto r = chlRelationsAndPotential(t, m.quiver);
                c(r.potential == deformedPotential(m, ps, {}, N), tag + ": l_q");
                for (size_t a = 0; a < m.quiver->arrows.size(); ++a) {
                    const auto& arrow = m.quiver->arrows[a];
                    auto x = chlMirrorObject(t, m.quiver, t.module("m_" + arrow), t.module("m_" + arrow + "*"));
                    auto y = deformedMirrorObject(m, ps, {}, int(a), N);
                    c(x.str(*m.quiver) == y.str(*m.quiver), tag + ": F_q(" + arrow + ")");
                }
            }
    });

    criterion(12, "property suite", 60, [](Check& c) {
        std::mt19937 rng(20261015);
        std::vector<std::string> dimers{"sphere3", "torus4", "Q4", "Q5", "Q6"};
        struct Case {
            Mirror m;
            std::vector<MidpointPolygon> ps;
            NCPoly wq;
            int N;
        };
        std::map<std::pair<std::string, int>, std::shared_ptr<Case>> cache;
        auto get = [&](const std::string& d, int N) {
            auto& slot = cache[{d, N}];
            if (!slot) {
                auto m = buildMirror(loadDimer(d));
                auto ps = enumerateMidpointPolygons(m.q, N);
                auto wq = deformedSuperpotential(m, ps, N);
                slot = std::make_shared<Case>(Case{std::move(m), std::move(ps), std::move(wq), N});
            }
            return slot;
        };
        int cyclic = 0, relation = 0, shift = 0, curvature = 0;
        for (int trial = 0; trial < 200; ++trial) {
            auto cs = get(dimers[rng() % dimers.size()], int(rng() % 4));
            auto& m = cs->m;
            int N = cs->N;
            auto tag = m.q.name() + " N=" + std::to_string(N);
            // cyclicity, probed on a random term and rotation
            c(isCyclic(cs->wq), tag + ": W_q cyclic");
            if (!cs->wq.isZero()) {
                auto it = cs->wq.terms().begin();
                std::advance(it, rng() % cs->wq.terms().size());
                auto rot = rotateLeft(*m.quiver, it->first, rng() % it->first.size());
                c(cs->wq.coeff(rot) == it->second, tag + ": rotated coefficient");
            }
            ++cyclic;
            // relations from the product table against cyclic derivatives
            int a = int(rng() % m.quiver->arrows.size());
            auto t = productTableFromDisks(m, cs->ps, {}, N);
            auto r = chlRelationsAndPotential(t, m.quiver);
            c(r.relations[a] == cyclicDerivative(cs->wq, a), tag + ": R_e = d_e W_q at " + m.quiver->arrows[a]);
            ++relation;
            // moving the identity one step along a zigzag path
            int z = int(rng() % m.zigzags.size());
            const auto& steps = m.zigzags[z].steps;
            size_t j = rng() % steps.size();
            Step s1 = steps[j], s2 = steps[(j + 1) % steps.size()];
            auto diff = deformedPotentialPart(m, cs->ps, z, s2, N) - deformedPotentialPart(m, cs->ps, z, s1, N);
            auto b2 = NCPoly::of(m.quiver, m.arrow(s2.arc), N);
            auto d2 = cyclicDerivative(cs->wq, s2.arc);
            auto expect = s1.turn == Turn::Left ? b2 * d2 : -(d2 * b2);
            c(diff == expect, tag + ": identity shift along " + m.zigzags[z].name);
            ++shift;
            // curvature vanishes at q = 0
            int arc = int(rng() % m.q.arcs().size());
            auto mf = deformedMirrorObject(m, cs->ps, {}, arc, N);
            c(mf.curvatureEven.qZero().isZero() && mf.curvatureOdd.qZero().isZero(),
              tag + ": curvature of F_q(" + m.q.arcs()[arc].id + ") is infinitesimal");
            ++curvature;
        }

        // crossing counts under single F-term flips
        auto t = torus4();
        auto q = t.quiver();
        auto rules = dimerFlipRules(t);
        auto zz = zigzagPaths(t);
        int tested = 0, flips = 0;
        while (tested < 200 || flips < 200) {
            int len = 4 + int(rng() % 9), v = int(rng() % q->vertices.size()), cur = v;
            std::vector<int> arcs;
            for (int s = 0; s < len; ++s) {
                std::vector<int> out;
                for (size_t a = 0; a < q->arrows.size(); ++a)
                    if (q->tail[a] == cur)
                        out.push_back(int(a));
                int a = out[rng() % out.size()];
                arcs.insert(arcs.begin(), a);
                cur = q->head[a];
            }
            if (cur != v)
                continue;
            Path p = makePath(*q, arcs);
            if (!isLFree(t, p))
                continue;
            ++tested;
            for (auto& g : rules.groups)
                for (auto& w : g)
                    for (size_t st = 0; st + w.size() <= arcs.size(); ++st) {
                        if (!std::equal(w.begin(), w.end(), arcs.begin() + st))
                            continue;
                        for (auto& w2 : g) {
                            if (w2 == w)
                                continue;
                            std::vector<int> na(arcs.begin(), arcs.begin() + st);
                            na.insert(na.end(), w2.begin(), w2.end());
                            na.insert(na.end(), arcs.begin() + st + w.size(), arcs.end());
                            Path p2 = makePath(*q, na);
                            if (!isLFree(t, p2))
                                continue;
                            ++flips;
                            for (auto& zp : zz)
                                c(crossingCount(t, p, zp) == crossingCount(t, p2, zp),
                                  "crossing count changes under a flip of " + pathStr(*q, p));
                        }
                    }
        }
        c(flips >= 200, "at least 200 flips exercised, got " + std::to_string(flips));

        // quasi-flatness on the toy relations
        auto tq = makeQuiver({"v"}, {{"X", "v", "v"}}, {"q"});
        auto X = NCPoly::of(tq, pathFromNames(*tq, "X"), 1);
        auto qid = NCPoly::of(tq, idPath(0), DefSeries::mono({0}, 1, 1));
        c(quasiFlatCheckTruncated({X + qid}, 1, 3).quasiFlat, "(X + q) is quasi-flat");
        c(!quasiFlatCheckTruncated({X, qid}, 1, 3).quasiFlat, "(X) + (q) is not quasi-flat");

        std::printf("    cases: cyclic %d, relation %d, shift %d, curvature %d, crossing paths %d (%d flips)\n", cyclic,
                    relation, shift, curvature, tested, flips);
    });

    criterion(13, "consistency classifications and zigzag counts", 5, [](Check& c) {
        for (int m = 3; m <= 12; ++m)
            c(checkGeometricConsistency(standardSphereDimer(m), 3).kind == Consistency::Inconsistent,
              "Q" + std::to_string(m) + " is inconsistent");
        auto t = torus4();
        c(checkGeometricConsistency(t, 3).str(t) == "CONSISTENT_CERTIFIED", "torus4 certified");
        c(zigzagPaths(standardSphereDimer(5)).size() == 1, "Q5 has one zigzag path");
        c(zigzagPaths(standardSphereDimer(6)).size() == 2, "Q6 has two zigzag paths");
    });

    std::printf("acceptance: %d of 13 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
