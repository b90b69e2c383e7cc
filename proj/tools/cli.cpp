#include <algorithm>
#include <chrono>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "dimer_mirror/chl.hpp"
#include "dimer_mirror/disks.hpp"
#include "dimer_mirror/error.hpp"
#include "dimer_mirror/jacobi.hpp"
#include "dimer_mirror/mirror.hpp"
#include "report.hpp"

namespace dm::cli {

namespace {

enum Exit { Ok = 0, Usage = 1, Validation = 2, CapFailure = 3, Violation = 4 };

// raised for verdicts that are not library errors but still fail the run
struct Verdict {
    int code;
    std::string message;
};

int exitFor(const Error& e)
{
    static const std::set<std::string> caps = {"CLASS_UNBOUNDED_SUSPECTED", "RADIUS_INSUFFICIENT"};
    static const std::set<std::string> invariants = {"CURVATURE_NOT_INFINITESIMAL", "CYCLICITY_VIOLATION",
                                                     "RELATION_MISMATCH", "NOT_CYCLIC", "INTERNAL"};
    if (e.code() == "BAD_ORDER")
        return Usage;
    if (caps.count(e.code()))
        return CapFailure;
    if (invariants.count(e.code()))
        return Violation;
    return Validation;
}

struct Options {
    std::string format = "text";
    std::string file;
    std::string element;
    std::string arc;
    int order = 2;
    int lengthCap = 0;
    std::vector<std::string> idLocs;
};

struct Context {
    Dimer d;
    Report r;
};

Context open(const std::string& command, const Options& o)
{
    Context c{loadDimer(o.file), {}};
    c.r.command = command;
    c.r.input = o.file;
    c.r.digest = digestOf(c.d.serialize());
    return c;
}

void checkOrder(int order)
{
    if (order < 0)
        fail("cli", "BAD_ORDER", "order must be non-negative");
}

IdentityChoice identities(const Mirror& m, const std::vector<std::string>& locs)
{
    IdentityChoice ids;
    for (auto& s : locs) {
        auto [z, step] = parseIdentityLocation(m, s);
        ids[z] = step;
    }
    return ids;
}

std::string idLocStr(const Mirror& m, const IdentityChoice& ids)
{
    std::string out;
    for (size_t i = 0; i < m.zigzags.size(); ++i) {
        Step s = identityStep(m, int(i), ids);
        if (!out.empty())
            out += ",";
        out += m.zigzags[i].name + "=" + m.q.arcs()[s.arc].id + turnChar(s.turn);
    }
    return out;
}

Report cmdValidate(const Options& o)
{
    auto c = open("validate", o);
    const Dimer& d = c.d;
    int cw = 0;
    for (auto& f : d.faces())
        cw += f.clockwise;
    int depth = 3;
    c.r.caps = {{"depth", std::to_string(depth)}};
    c.r.add("punctures", std::to_string(d.punctures().size()));
    c.r.add("arcs", std::to_string(d.arcs().size()));
    c.r.add("faces", std::to_string(d.faces().size()) + " (" + std::to_string(cw) + " clockwise, " +
                         std::to_string(d.faces().size() - cw) + " counterclockwise)");
    c.r.add("genus", std::to_string(d.genus()));
    c.r.add("zigzags", std::to_string(zigzagPaths(d).size()));
    c.r.add("consistency", checkGeometricConsistency(d, depth).str(d));
    c.r.add("dimer", d.serialize());
    return c.r;
}

Report cmdZigzag(const Options& o)
{
    auto c = open("zigzag", o);
    auto zz = zigzagPaths(c.d);
    c.r.add("count", std::to_string(zz.size()));
    for (auto& z : zz) {
        std::string s = zigzagStr(c.d, z);
        c.r.add(z.name, s.substr(s.find(':') + 2));
    }
    return c.r;
}

Report cmdDual(const Options& o)
{
    auto c = open("dual", o);
    Dimer dual = dualDimer(c.d);
    c.r.add("vertices", std::to_string(dual.punctures().size()));
    c.r.add("genus", std::to_string(dual.genus()));
    c.r.add("dimer", dual.serialize());
    return c.r;
}

Report cmdSuperpotential(const Options& o)
{
    auto c = open("superpotential", o);
    Mirror m = buildMirror(c.d, o.lengthCap);
    int cap = o.lengthCap > 0 ? o.lengthCap : defaultLengthCap(m.dual, 0);
    c.r.caps = {{"length-cap", std::to_string(cap)}};
    c.r.add("W", classicalSuperpotential(m).str());
    auto rels = classicalRelations(m);
    for (size_t e = 0; e < rels.size(); ++e)
        c.r.add("R_" + m.quiver->arrows[e], rels[e].str());
    c.r.add("l", classicalPotential(m).value.str());
    c.r.add("bounded", boundedTypeCheck(m.dual, cap).str(*m.quiver));
    return c.r;
}

Report cmdJacobi(const Options& o)
{
    auto c = open("jacobi", o);
    Mirror m = buildMirror(c.d, o.lengthCap);
    int cap = o.lengthCap > 0 ? o.lengthCap : defaultLengthCap(m.dual, 0);
    c.r.caps = {{"length-cap", std::to_string(cap)}};
    NCPoly x = parseNCPoly(m.quiver, o.element, 0);
    JacobiElement nf = m.normalForm(x);
    c.r.add("element", x.str());
    c.r.add("normal_form", nf.value.str());
    c.r.add("already_reduced", nf.reduced ? "yes" : "no");
    return c.r;
}

Report cmdDeform(const Options& o)
{
    checkOrder(o.order);
    auto c = open("deform", o);
    Mirror m = buildMirror(c.d);
    IdentityChoice ids = identities(m, o.idLocs);
    auto polys = enumerateMidpointPolygons(c.d, o.order);
    c.r.caps = {{"order", std::to_string(o.order)}, {"id-loc", idLocStr(m, ids)}};
    NCPoly wq = deformedSuperpotential(m, polys, o.order);
    c.r.add("polygons", std::to_string(polys.size()));
    c.r.add("W_q", wq.str());
    c.r.add("l_q", deformedPotential(m, polys, ids, o.order).str());
    auto rels = deformedRelations(m, wq);
    for (size_t e = 0; e < rels.size(); ++e)
        c.r.add("R_" + m.quiver->arrows[e], rels[e].str());
    return c.r;
}

Report cmdMirror(const Options& o)
{
    checkOrder(o.order);
    auto c = open("mirror", o);
    Mirror m = buildMirror(c.d);
    int a = m.quiver->arrow(o.arc);
    if (a < 0)
        fail("mirror", "UNKNOWN_ARC", o.arc);
    c.r.caps = {{"order", std::to_string(o.order)}, {"id-loc", idLocStr(m, {})}};
    auto mf = deformedMirrorObject(m, enumerateMidpointPolygons(c.d, o.order), {}, a, o.order);
    const Quiver& q = *m.quiver;
    c.r.add("object", q.arrows[a]);
    c.r.add("even", q.vertices[mf.evenModule]);
    c.r.add("odd", q.vertices[mf.oddModule]);
    c.r.add("f", mf.f.str());
    c.r.add("g", mf.g.str());
    c.r.add("curvature_even", mf.curvatureEven.str());
    c.r.add("curvature_odd", mf.curvatureOdd.str());
    return c.r;
}

// the generic default (3 * face * (N + 1)) makes the generator span explode;
// two face lengths plus one is enough for commutators of l_q with an arrow
int membershipCap(const Mirror& m, const Options& o)
{
    return o.lengthCap > 0 ? o.lengthCap : 2 * m.dual.maxFaceLength() + 1;
}

Report cmdCentrality(const Options& o)
{
    checkOrder(o.order);
    auto c = open("centrality", o);
    Mirror m = buildMirror(c.d);
    int cap = membershipCap(m, o);
    c.r.caps = {{"order", std::to_string(o.order)}, {"length-cap", std::to_string(cap)},
                {"id-loc", idLocStr(m, {})}};
    auto polys = enumerateMidpointPolygons(c.d, o.order);
    auto rels = deformedRelations(m, deformedSuperpotential(m, polys, o.order));
    NCPoly l = deformedPotential(m, polys, {}, o.order);
    bool all = true;
    for (size_t e = 0; e < m.quiver->arrows.size(); ++e) {
        NCPoly x = NCPoly::of(m.quiver, m.arrow(int(e)), o.order);
        auto v = idealMembershipTruncated(l * x - x * l, rels, o.order, cap);
        if (v.member && !(evaluateCombination(v.combination, rels, o.order) == (l * x - x * l)))
            throw Verdict{Violation, "membership combination for " + m.quiver->arrows[e] + " does not audit"};
        all = all && v.member;
        c.r.add(m.quiver->arrows[e], v.member ? "MEMBER (" + std::to_string(v.combination.size()) + " terms)"
                                              : "NOT_MEMBER_UP_TO_CAPS");
    }
    c.r.add("central", all ? "yes" : "not established within caps");
    if (!all)
        c.r.warnings.push_back("some commutators are not in the ideal span at these caps");
    return c.r;
}

Report cmdFlatness(const Options& o)
{
    checkOrder(o.order);
    auto c = open("flatness", o);
    Mirror m = buildMirror(c.d);
    int cap = membershipCap(m, o);
    c.r.caps = {{"order", std::to_string(o.order)}, {"length-cap", std::to_string(cap)}};
    auto rels = deformedRelations(m, deformedSuperpotential(m, o.order));
    auto v = quasiFlatCheckTruncated(rels, o.order, cap);
    c.r.add("verdict", v.str());
    return c.r;
}

Report cmdPolygons(const Options& o)
{
    checkOrder(o.order);
    auto c = open("polygons", o);
    c.r.caps = {{"order", std::to_string(o.order)}};
    auto polys = enumerateMidpointPolygons(c.d, o.order);
    std::set<std::pair<bool, std::vector<int>>> types;
    for (auto& p : polys) {
        auto w = p.arcsWord();
        std::rotate(w.begin(), std::min_element(w.begin(), w.end()), w.end());
        types.insert({p.clockwise, w});
    }
    c.r.add("count", std::to_string(polys.size()));
    c.r.add("cyclic_types", std::to_string(types.size()));
    c.r.add("rows", polygonDump(c.d, polys));
    return c.r;
}

Report cmdOracle(const Options& o)
{
    checkOrder(o.order);
    auto c = open("oracle", o);
    Mirror m = buildMirror(c.d);
    c.r.caps = {{"order", std::to_string(o.order)}, {"id-loc", idLocStr(m, {})}};
    auto polys = enumerateMidpointPolygons(c.d, o.order);
    ProductTable t = productTableFromDisks(m, polys, {}, o.order);
    int mismatches = 0;
    auto verdict = [&](const std::string& key, bool same) {
        mismatches += !same;
        c.r.add(key, same ? "match" : "MISMATCH");
    };
    verdict("W_q", chlSuperpotential(t, m.quiver) == deformedSuperpotential(m, polys, o.order));
    verdict("l_q", chlRelationsAndPotential(t, m.quiver).potential == deformedPotential(m, polys, {}, o.order));
    for (size_t a = 0; a < m.quiver->arrows.size(); ++a) {
        const std::string& name = m.quiver->arrows[a];
        auto x = chlMirrorObject(t, m.quiver, t.module("m_" + name), t.module("m_" + name + "*"));
        auto y = deformedMirrorObject(m, polys, {}, int(a), o.order);
        verdict("F_q(" + name + ")", x.f == y.f && x.g == y.g && x.curvatureEven == y.curvatureEven &&
                                         x.curvatureOdd == y.curvatureOdd && x.evenModule == y.evenModule &&
                                         x.oddModule == y.oddModule);
    }
    c.r.add("table_entries", std::to_string(t.mu.size() + t.mod.size()));
    if (mismatches)
        throw Verdict{Violation, std::to_string(mismatches) + " oracle mismatches\n" + c.r.text()};
    return c.r;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Mirrors of punctured surfaces from dimer models", "dimer-mirror"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));

    auto sub = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("file", o.file, "Dimer file or built-in name (sphere3, torus4, Q<M>)")->required();
        return s;
    };
    auto* validate = sub("validate", "Check a dimer file and report its invariants");
    auto* zigzag = sub("zigzag", "List zigzag paths");
    auto* dual = sub("dual", "Print the dual dimer");
    auto* superpotential = sub("superpotential", "Classical superpotential, relations and potential of the mirror");
    auto* jacobi = sub("jacobi", "Normal form in the Jacobi algebra of the mirror");
    jacobi->add_option("--reduce", o.element, "Element, e.g. '+1*[a b] -1*[b a]'")->required();
    jacobi->add_option("--length-cap", o.lengthCap, "Length cap for F-term classes");
    auto* deform = sub("deform", "Deformed superpotential, potential and relations");
    deform->add_option("--order", o.order, "Truncation order in the deformation parameters");
    deform->add_option("--id-loc", o.idLocs, "Identity location, path=arc");
    auto* mirror = sub("mirror", "Deformed mirror matrix factorization of an arc");
    mirror->add_option("--arc", o.arc, "Arc of the dimer")->required();
    mirror->add_option("--order", o.order, "Truncation order");
    auto* centrality = sub("centrality", "Check that l_q commutes with every arrow modulo the relations");
    centrality->add_option("--order", o.order, "Truncation order");
    centrality->add_option("--length-cap", o.lengthCap, "Path length cap for the ideal span");
    auto* flatness = sub("flatness", "Quasi-flatness of the deformed relations");
    flatness->add_option("--order", o.order, "Truncation order");
    auto* polygons = sub("polygons", "Dump the midpoint polygons up to an order");
    polygons->add_option("--order", o.order, "Truncation order");
    auto* oracle = sub("oracle", "Cross-check the product-table pipeline against polygon counting");
    oracle->add_option("--order", o.order, "Truncation order");

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i)
        args.emplace_back(argv[i]);
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return Usage;
    }

    auto started = std::chrono::steady_clock::now();
    try {
        Report r;
        if (validate->parsed())
            r = cmdValidate(o);
        else if (zigzag->parsed())
            r = cmdZigzag(o);
        else if (dual->parsed())
            r = cmdDual(o);
        else if (superpotential->parsed())
            r = cmdSuperpotential(o);
        else if (jacobi->parsed())
            r = cmdJacobi(o);
        else if (deform->parsed())
            r = cmdDeform(o);
        else if (mirror->parsed())
            r = cmdMirror(o);
        else if (centrality->parsed())
            r = cmdCentrality(o);
        else if (flatness->parsed())
            r = cmdFlatness(o);
        else if (polygons->parsed())
            r = cmdPolygons(o);
        else if (oracle->parsed())
            r = cmdOracle(o);
        out << (o.format == "json" ? r.json() : r.text());
    } catch (const Verdict& v) {
        err << "error: " << v.message << "\n";
        return v.code;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exitFor(e);
    }
    // timing stays off stdout so reports are byte-identical across runs
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    err << "elapsed: " << ms << " ms\n";
    return Ok;
}

}  // namespace dm::cli
