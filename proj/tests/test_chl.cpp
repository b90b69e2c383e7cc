#include <functional>

#include "doctest.h"
#include "dimer_mirror/chl.hpp"
#include "dimer_mirror/error.hpp"

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

const char* toy =
    "objects: v\n"
    "vars: s\n"
    "caps: arity 2 order 1\n"
    "odd: x v v\n"
    "mu: X_x X_x -> (+1)*Y_x\n"
    "mu: X_x -> (-1*s)*id_v\n";

}  // namespace

TEST_SUITE("chl")
{
    TEST_CASE("quiver of a product table")
    {
        auto t = parseProductTable(toy);
        auto q = chlQuiver(t);
        CHECK(q->vertices.size() == 1);
        CHECK(q->arrows.size() == 1);
        CHECK(q->vars == std::vector<std::string>{"s"});

        auto m = buildMirror(torus4());
        auto big = productTableFromDisks(m, {}, 1);
        auto bq = chlQuiver(big);
        CHECK(bq->sameShape(*m.quiver));
        for (auto& o : big.odd) {
            int a = bq->arrow(o.name);
            CHECK(bq->tail[a] == o.src);
            CHECK(bq->head[a] == o.tgt);
        }
    }

    TEST_CASE("toy table: superpotential, relation and potential")
    {
        auto t = parseProductTable(toy);
        CHECK(chlSuperpotential(t).str() == "+1*[x x x]");
        auto r = chlRelationsAndPotential(t);
        REQUIRE(r.relations.size() == 1);
        CHECK(r.relations[0].str() == "+1*[x x]");
        CHECK(r.potential.str() == "-1*s*[x]");
        auto growth = slowGrowthAudit(t);
        REQUIRE(growth.size() == 2);
        CHECK(growth[0].arity == 1);
        CHECK(growth[0].minDegree == 1);
        CHECK(growth[1].arity == 2);
        CHECK(growth[1].minDegree == 0);
    }

    TEST_CASE("a single object without morphisms")
    {
        auto t = parseProductTable("objects: v\nvars:\ncaps: arity 2 order 0\n");
        CHECK(chlSuperpotential(t).isZero());
        auto r = chlRelationsAndPotential(t);
        CHECK(r.relations.empty());
        CHECK(r.potential.isZero());
        CHECK(slowGrowthAudit(t).empty());
    }

    TEST_CASE("tables from polygon counting reproduce the disk computations")
    {
        for (auto name : {"sphere3", "torus4"})
            for (int N = 0; N <= 2; ++N) {
                auto m = buildMirror(loadDimer(name));
                auto ps = enumerateMidpointPolygons(m.q, N);
                auto t = productTableFromDisks(m, ps, {}, N);
                auto back = parseProductTable(t.str());
                CHECK(back.str() == t.str());
                CHECK(chlSuperpotential(back, m.quiver) == deformedSuperpotential(m, ps, N));
                auto r = chlRelationsAndPotential(back, m.quiver);
                CHECK(r.potential == deformedPotential(m, ps, {}, N));
                auto wq = deformedSuperpotential(m, ps, N);
                for (size_t a = 0; a < m.quiver->arrows.size(); ++a) {
                    CHECK(r.relations[a] == cyclicDerivative(wq, int(a)));
                    const auto& arrow = m.quiver->arrows[a];
                    auto x = chlMirrorObject(back, m.quiver, back.module("m_" + arrow), back.module("m_" + arrow + "*"));
                    auto y = deformedMirrorObject(m, ps, {}, int(a), N);
                    CHECK(x.f == y.f);
                    CHECK(x.g == y.g);
                    CHECK(x.curvatureEven == y.curvatureEven);
                    CHECK(x.curvatureOdd == y.curvatureOdd);
                }
            }
    }

    TEST_CASE("sphere table growth")
    {
        auto m = buildMirror(sphere3());
        auto t = productTableFromDisks(m, enumerateMidpointPolygons(m.q, 1), {}, 1);
        CHECK(t.mu.size() == 10);
        auto g = slowGrowthAudit(t);
        REQUIRE(g.size() == 3);
        CHECK(g[0].entries == 3);
        CHECK(g[0].minDegree == 1);
        CHECK(g[1].entries == 6);
        CHECK(g[1].minDegree == 0);
        CHECK(g[2].entries == 1);
        CHECK(g[2].minDegree == 0);
    }

    TEST_CASE("broken tables are rejected")
    {
        auto m = buildMirror(sphere3());
        auto text = productTableFromDisks(m, enumerateMidpointPolygons(m.q, 0), {}, 0).str();
        auto at = text.find("mu: X_a X_b -> (+1)*Y_c");
        REQUIRE(at != std::string::npos);
        auto broken = text;
        broken.replace(at, std::string("mu: X_a X_b -> (+1)*Y_c").size(), "mu: X_a X_b -> (+2)*Y_c");
        auto t = parseProductTable(broken);
        CHECK(code([&] { checkCyclic(t); }) == "chl.CYCLICITY_VIOLATION");
        CHECK(code([&] { chlSuperpotential(t); }) == "chl.CYCLICITY_VIOLATION");

        CHECK(code([] { parseProductTable("nonsense"); }) == "chl.PARSE_ERROR");
        CHECK(code([] {
                  parseProductTable("objects: v w\nvars:\ncaps: arity 2 order 0\nodd: x v w\nmu: -> (+1)*Y_x\n");
              }) == "chl.TABLE_INVALID");
        CHECK(code([] {
                  parseProductTable("objects: v\nvars:\ncaps: arity 2 order 0\nodd: x v v\nmu: X_y -> (+1)*Y_x\n");
              }) != "");
    }
}
