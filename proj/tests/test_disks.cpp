#include <functional>
#include <sstream>

#include "doctest.h"
#include "dimer_mirror/disks.hpp"
#include "dimer_mirror/error.hpp"
#include "oracles.hpp"

using namespace dm;

namespace {

std::string code(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.qualified();
    }
    return "";
}

std::vector<std::string> names(const Dimer& d, const std::vector<int>& w)
{
    std::vector<std::string> out;
    for (int a : w)
        out.push_back(d.arcs()[a].id);
    return out;
}

std::vector<std::string> split(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;)
        out.push_back(w);
    return out;
}

}  // namespace

TEST_SUITE("disks")
{
    TEST_CASE("three-punctured sphere: twelve marked polygons")
    {
        auto m = buildMirror(sphere3());
        auto ps = enumerateMidpointPolygons(m.q, 1);
        CHECK(ps.size() == 12);
        int triangles = 0, monogons = 0;
        for (auto& p : ps) {
            if (p.corners.size() == 3) {
                ++triangles;
                CHECK(p.punc.empty());
                CHECK(p.sign() == 1);
            } else {
                ++monogons;
                CHECK(p.corners.size() == 1);
                CHECK(p.punc.size() == 1);
                CHECK(p.sign() == -1);
            }
        }
        CHECK(triangles == 6);
        CHECK(monogons == 6);
        // nothing new appears at higher order
        CHECK(enumerateMidpointPolygons(m.q, 3).size() == 12);
        CHECK(enumerateMidpointPolygons(m.q, 0).size() == 6);
    }

    TEST_CASE("sign is the parity of the polygon size")
    {
        for (auto name : {"sphere3", "torus4"}) {
            auto m = buildMirror(loadDimer(name));
            for (auto& p : enumerateMidpointPolygons(m.q, 2)) {
                int size = 0;
                for (int n : p.segmentLengths) {
                    CHECK(n % 2 == 1);
                    size += (n - 1) / 2;
                }
                CHECK(p.size() == size);
                CHECK(p.sign() == (size % 2 ? -1 : 1));
                if (std::string(name) == "torus4")
                    CHECK(p.sign() == 1);
            }
        }
    }

    TEST_CASE("torus polygons follow the sixteen families")
    {
        const int N = 3;
        auto m = buildMirror(torus4());
        auto ps = enumerateMidpointPolygons(m.q, N);
        auto table = oracle::torusTable();
        // (row, rotation) -> generating series of the punctures covered
        std::map<std::pair<size_t, size_t>, DefSeries> got;
        for (auto& p : ps) {
            auto w = names(m.q, p.arcsWord());
            bool found = false;
            for (size_t r = 0; r < table.size() && !found; ++r) {
                auto row = split(table[r].arcs);
                if (table[r].clockwise != p.clockwise || row.size() != w.size())
                    continue;
                for (size_t k = 0; k < row.size() && !found; ++k) {
                    std::vector<std::string> rot(row.begin() + k, row.end());
                    rot.insert(rot.end(), row.begin(), row.begin() + k);
                    if (rot != w)
                        continue;
                    found = true;
                    auto& s = got.try_emplace({r, k}, DefSeries(N)).first->second;
                    s += DefSeries::mono(p.punc, 1, N);
                }
            }
            CHECK_MESSAGE(found, p.str(m.q));
        }
        // the four families starting at q1 q2 q3 q4 begin above degree 3
        CHECK(got.size() == 48);
        for (size_t r = 0; r < table.size(); ++r)
            for (size_t k = 0; k < 4; ++k) {
                auto expect = oracle::family(table[r].base, table[r].X, table[r].Y, N);
                const DefSeries& have = got[std::make_pair(r, k)];
                CHECK_MESSAGE(have == expect, table[r].arcs);
            }
    }

    TEST_CASE("deformed superpotential")
    {
        auto s = buildMirror(sphere3());
        auto ws = deformedSuperpotential(s, 2);
        CHECK(isCyclic(ws));
        CHECK(ws.str() == classicalSuperpotential(s, 2).str());

        auto t = buildMirror(torus4());
        auto wt = deformedSuperpotential(t, 2);
        CHECK(isCyclic(wt));
        CHECK(wt.qZero() == classicalSuperpotential(t, 2));
        CHECK(wt.lowestDegree() == 0);
        // every term of degree one comes from the single-puncture families
        for (auto& [p, c] : wt.terms())
            for (auto& [mono, v] : c.terms())
                CHECK(int(mono.size()) <= 2);
    }

    TEST_CASE("deformed potential of the sphere")
    {
        auto m = buildMirror(sphere3());
        auto l = deformedPotential(m, {}, 2);
        CHECK(l.str() == "+1*[a b c] -1*qa*[a] -1*qb*[b] -1*qc*[c]");
        CHECK(parseNCPoly(m.quiver, l.str(), 2) == l);
    }

    TEST_CASE("deformed mirror objects of the sphere")
    {
        auto m = buildMirror(sphere3());
        auto ps = enumerateMidpointPolygons(m.q, 2);
        const char* arcs[] = {"a", "b", "c"};
        const char* other[][2] = {{"b", "c"}, {"c", "a"}, {"a", "b"}};
        for (int i = 0; i < 3; ++i) {
            int a = m.q.arc(arcs[i]);
            auto mf = deformedMirrorObject(m, ps, {}, a, 2);
            auto q = m.quiver;
            auto id = NCPoly::of(q, idPath(0), 2);
            auto qa = DefSeries::mono({q->var("q" + std::string(arcs[i]))}, 1, 2);
            auto x = NCPoly::of(q, pathFromNames(*q, other[i][0]), 2);
            auto y = NCPoly::of(q, pathFromNames(*q, other[i][1]), 2);
            // g = (product of the other two) - q_a in the commutative Jacobi algebra
            auto expectG = x * y - id.scaled(qa);
            CHECK(m.normalForm(mf.g - expectG).value.isZero());
            CHECK(mf.f == NCPoly::of(q, m.arrow(a), 2));
            // curvature: minus the two other monogon terms
            auto qx = DefSeries::mono({q->var("q" + std::string(other[i][0]))}, 1, 2);
            auto qy = DefSeries::mono({q->var("q" + std::string(other[i][1]))}, 1, 2);
            auto expectC = -(x.scaled(qx) + y.scaled(qy));
            CHECK(m.normalForm(mf.curvatureEven - expectC).value.isZero());
            CHECK(m.normalForm(mf.curvatureOdd - expectC).value.isZero());
            CHECK(mf.curvatureEven.lowestDegree() >= 1);
        }
    }

    TEST_CASE("deformed complements reduce to the classical ones")
    {
        for (auto name : {"sphere3", "torus4"}) {
            auto m = buildMirror(loadDimer(name));
            for (size_t a = 0; a < m.q.arcs().size(); ++a) {
                auto c = deformedComplement(m, int(a), 2);
                CHECK(c.qZero() == NCPoly::of(m.quiver, complementPath(m, int(a)), 2));
            }
        }
        auto t = buildMirror(torus4());
        auto mf = deformedMirrorObject(t, t.q.arc("a1"), 1);
        CHECK(mf.g.str() == "+1*[b3 a3 b4] +1*q3*[b2 a2 b4] +1*q4*[b3 a2 b1]");
        CHECK(mf.curvatureEven.str() == "+1*q1*[a4 b2 a3 b4] +1*q2*[a4 b3 a3 b1]");
    }

    TEST_CASE("identity locations")
    {
        auto t = buildMirror(torus4());
        std::vector<std::string> expect{"b2R", "a1R", "b1R", "a2R"};
        for (size_t i = 0; i < t.zigzags.size(); ++i) {
            Step s = identityStep(t, int(i), {});
            CHECK(t.q.arcs()[s.arc].id + turnChar(s.turn) == expect[i]);
        }
        auto [z, s] = parseIdentityLocation(t, "Z3=a2");
        CHECK(z == 2);
        CHECK(s.arc == t.q.arc("a2"));
        CHECK(code([&] { parseIdentityLocation(t, "Z9=a2"); }) == "disks.PARSE_ERROR");
        CHECK(code([&] { parseIdentityLocation(t, "Z1"); }) == "disks.PARSE_ERROR");
        CHECK(code([] { enumerateMidpointPolygons(torus4(), -1); }) == "disks.BAD_ORDER");
    }

    TEST_CASE("product rules")
    {
        auto m = buildMirror(sphere3());
        auto ps = enumerateMidpointPolygons(m.q, 1);
        int a = m.q.arc("a"), b = m.q.arc("b"), c = m.q.arc("c");
        // mu(X_b, X_c) = Y_a from the clockwise triangle
        auto bc = hlOddProduct(m, ps, {}, {b, c}, 1);
        REQUIRE(bc.count(Label{0, a}));
        CHECK(bc[Label{0, a}] == DefSeries::constant(1, 1));
        // mu(X_c, X_b) = -Y_a from the counterclockwise one
        auto cb = hlOddProduct(m, ps, {}, {c, b}, 1);
        REQUIRE(cb.count(Label{0, a}));
        CHECK(cb[Label{0, a}] == DefSeries::constant(-1, 1));
        // module products on M_a
        CHECK(mdProduct(m, ps, a, false, {a}, 1) == DefSeries::constant(-1, 1));
        // the odd element sees the complement b c and the monogon around q_a
        CHECK(mdProduct(m, ps, a, true, {b, c}, 1) == DefSeries::constant(1, 1));
        CHECK(mdProduct(m, ps, a, true, {c, b}, 1).isZero());
        CHECK(mdProduct(m, ps, a, true, {}, 1) == DefSeries::mono({m.quiver->var("qa")}, -1, 1));

        auto t = buildMirror(torus4());
        auto pt = enumerateMidpointPolygons(t.q, 1);
        std::vector<int> bad;
        for (size_t x = 0; x < t.q.arcs().size() && bad.empty(); ++x)
            for (size_t y = 0; y < t.q.arcs().size() && bad.empty(); ++y)
                if (t.tailOf(int(x)) != t.headOf(int(y)))
                    bad = {int(x), int(y)};
        REQUIRE(bad.size() == 2);
        CHECK(code([&] { hlOddProduct(t, pt, {}, bad, 1); }) == "disks.NON_COMPOSABLE");
    }
}
