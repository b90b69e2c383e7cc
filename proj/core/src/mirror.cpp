#include "dimer_mirror/mirror.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "dimer_mirror/error.hpp"

namespace dm {

namespace {

// canonical form of a face for comparisons: rotation starting at min arc
std::pair<bool, std::vector<int>> canonicalFace(std::vector<int> c, bool cw)
{
    auto it = std::min_element(c.begin(), c.end());
    std::rotate(c.begin(), it, c.end());
    return {cw, c};
}

// traversal order after the pair (x, y) in a cycle, as a word
std::vector<int> complementWord(const std::vector<int>& cycle, int pos, int skip)
{
    int k = int(cycle.size());
    std::vector<int> trav;
    for (int i = skip; i < k; ++i)
        trav.push_back(cycle[(pos + i) % k]);
    return std::vector<int>(trav.rbegin(), trav.rend());
}

}  // namespace

Dimer dualDimer(const Dimer& d)
{
    auto zz = zigzagPaths(d);
    const auto& arcs = d.arcs();
    int na = int(arcs.size());
    std::vector<std::string> names;
    for (const auto& z : zz)
        names.push_back(z.name);
    std::vector<Arc> darcs(na);
    for (int a = 0; a < na; ++a)
        darcs[a] = {arcs[a].id, zigzagOf(zz, {a, Turn::Left}), zigzagOf(zz, {a, Turn::Right})};

    // successor of each end around its new vertex; index 2a+head
    std::vector<int> succ(2 * na, -1);
    auto id = [](int arc, bool head) { return 2 * arc + (head ? 1 : 0); };
    for (const auto& f : d.faces()) {
        int k = int(f.cycle.size());
        for (int i = 0; i < k; ++i) {
            int x = f.cycle[i], y = f.cycle[(i + 1) % k];
            if (f.clockwise)
                succ[id(x, true)] = id(y, false);
            else
                succ[id(x, false)] = id(y, true);
        }
    }
    std::vector<std::vector<ArcEnd>> rot(zz.size());
    std::vector<bool> seen(2 * na, false);
    for (int s = 0; s < 2 * na; ++s) {
        if (seen[s])
            continue;
        int v = (s & 1) ? darcs[s / 2].head : darcs[s / 2].tail;
        if (!rot[v].empty())
            fail("mirror", "INTERNAL", "dual vertex " + names[v] + " is not a disk neighbourhood");
        for (int e = s; !seen[e]; e = succ[e]) {
            if (succ[e] < 0)
                fail("mirror", "INTERNAL", "incomplete corner data");
            int ve = (e & 1) ? darcs[e / 2].head : darcs[e / 2].tail;
            if (ve != v)
                fail("mirror", "INTERNAL", "corner joins different dual vertices");
            seen[e] = true;
            rot[v].push_back({e / 2, bool(e & 1)});
        }
    }
    Dimer out = fromRotation(names, darcs, rot, d.name().empty() ? "dual" : d.name() + "-dual");

    // faces must be the clockwise cycles and the reversed counterclockwise ones
    std::set<std::pair<bool, std::vector<int>>> want, got;
    for (const auto& f : d.faces()) {
        std::vector<int> c = f.cycle;
        if (!f.clockwise)
            std::reverse(c.begin(), c.end());
        want.insert(canonicalFace(c, f.clockwise));
    }
    for (const auto& f : out.faces())
        got.insert(canonicalFace(f.cycle, f.clockwise));
    if (want != got)
        fail("mirror", "INTERNAL", "dual faces do not match the regluing");
    return out;
}

Mirror buildMirror(const Dimer& q, int lengthCap)
{
    Mirror m;
    m.q = q;
    m.dual = dualDimer(q);
    m.zigzags = zigzagPaths(q);
    std::vector<std::tuple<std::string, std::string, std::string>> a;
    for (const auto& x : m.dual.arcs())
        a.emplace_back(x.id, m.dual.punctures()[x.tail], m.dual.punctures()[x.head]);
    m.quiver = makeQuiver(m.dual.punctures(), a, q.varNames());
    if (lengthCap <= 0)
        lengthCap = defaultLengthCap(m.dual, 2);
    m.jac = std::make_shared<JacobiContext>(m.dual, lengthCap);
    return m;
}

NCPoly classicalSuperpotential(const Dimer& d, QuiverPtr quiver, int order)
{
    if (!quiver)
        quiver = d.quiver();
    NCPoly w(quiver, order);
    for (size_t f = 0; f < d.faces().size(); ++f) {
        Path p = makePath(*quiver, faceWord(d, int(f)));
        NCPoly c = cyc(quiver, p, order);
        w += d.faces()[f].clockwise ? c : -c;
    }
    return w;
}

NCPoly classicalSuperpotential(const Mirror& m, int order)
{
    return classicalSuperpotential(m.dual, m.quiver, order);
}

std::vector<NCPoly> classicalRelations(const Mirror& m, int order)
{
    NCPoly w = classicalSuperpotential(m, order);
    std::vector<NCPoly> out;
    for (size_t e = 0; e < m.quiver->arrows.size(); ++e)
        out.push_back(cyclicDerivative(w, int(e)));
    return out;
}

NCPoly potentialAt(const Mirror& m, int vertex, int order)
{
    const auto& faces = m.dual.faces();
    for (size_t f = 0; f < faces.size(); ++f) {
        if (!faces[f].clockwise)
            continue;
        const auto& c = faces[f].cycle;
        for (size_t i = 0; i < c.size(); ++i) {
            if (m.dual.arcs()[c[i]].tail != vertex)
                continue;
            std::vector<int> trav(c.begin() + i, c.end());
            trav.insert(trav.end(), c.begin(), c.begin() + i);
            std::vector<int> w(trav.rbegin(), trav.rend());
            return NCPoly::of(m.quiver, makePath(*m.quiver, w), order);
        }
    }
    fail("mirror", "INTERNAL", "no clockwise face at dual vertex " + m.quiver->vertices[vertex]);
}

JacobiElement classicalPotential(const Mirror& m, int order)
{
    NCPoly l(m.quiver, order);
    for (size_t v = 0; v < m.quiver->vertices.size(); ++v)
        l += potentialAt(m, int(v), order);
    return m.normalForm(l);
}

Path complementPath(const Mirror& m, int arc)
{
    int f = m.dual.cwFace(arc);
    const auto& c = m.dual.faces()[f].cycle;
    return makePath(*m.quiver, complementWord(c, m.dual.positionInFace(f, arc), 1));
}

std::string MatrixFactorization::str(const Quiver& q) const
{
    std::ostringstream o;
    o << "object " << q.arrows[arc] << "\n";
    o << "even " << q.vertices[evenModule] << "\n";
    o << "odd " << q.vertices[oddModule] << "\n";
    o << "f: " << f.str() << "\n";
    o << "g: " << g.str() << "\n";
    o << "curvature even: " << curvatureEven.str() << "\n";
    o << "curvature odd: " << curvatureOdd.str() << "\n";
    return o.str();
}

MatrixFactorization classicalMirrorObject(const Mirror& m, int arc)
{
    if (arc < 0 || arc >= int(m.quiver->arrows.size()))
        fail("mirror", "UNKNOWN_ARC", "arc index " + std::to_string(arc));
    MatrixFactorization mf;
    mf.arc = arc;
    mf.evenModule = m.headOf(arc);
    mf.oddModule = m.tailOf(arc);
    mf.f = NCPoly::of(m.quiver, m.arrow(arc), 0);
    mf.g = NCPoly::of(m.quiver, complementPath(m, arc), 0);
    NCPoly le = potentialAt(m, mf.evenModule), lo = potentialAt(m, mf.oddModule);
    mf.curvatureEven = m.normalForm(le - mf.f * mf.g).value;
    mf.curvatureOdd = m.normalForm(lo - mf.g * mf.f).value;
    return mf;
}

std::string MFMorphism::str(const Quiver& q) const
{
    std::ostringstream o;
    o << "morphism " << q.arrows[source] << " -> " << q.arrows[target] << (odd ? " odd" : " even") << "\n";
    const char* nm[2] = {"even", "odd"};
    for (int t = 0; t < 2; ++t)
        for (int s = 0; s < 2; ++s)
            if (!blocks[t][s].isZero())
                o << nm[t] << " <- " << nm[s] << ": " << blocks[t][s].str() << "\n";
    return o.str();
}

Angle angleBetween(const Dimer& d, int a, int b)
{
    for (size_t v = 0; v < d.rotation().size(); ++v) {
        const auto& r = d.rotation()[v];
        int n = int(r.size());
        for (int i = 0; i < n; ++i) {
            if (r[i].arc != a)
                continue;
            for (int k = 0; k <= n; ++k)
                if (r[(i + k) % n].arc == b && (k > 0 || a == b))
                    return {int(v), i, a == b && k == 0 ? 0 : k};
        }
    }
    fail("mirror", "NOT_AN_ANGLE", "arcs " + d.arcs()[a].id + " and " + d.arcs()[b].id + " share no puncture");
}

namespace {

// product of 2x2 morphism matrices, first `a` then `b`
void compose(const NCPoly a[2][2], const NCPoly b[2][2], NCPoly out[2][2], const QuiverPtr& q, int order)
{
    for (int t = 0; t < 2; ++t)
        for (int s = 0; s < 2; ++s) {
            NCPoly sum(q, order);
            for (int mid = 0; mid < 2; ++mid)
                if (!a[mid][s].isZero() && !b[t][mid].isZero())
                    sum += a[mid][s] * b[t][mid];
            out[t][s] = sum;
        }
}

}  // namespace

MFMorphism zeta(const Mirror& m, const Angle& alpha)
{
    const Dimer& d = m.q;
    if (alpha.puncture < 0 || alpha.puncture >= int(d.rotation().size()) || alpha.length < 0)
        fail("mirror", "NOT_AN_ANGLE", "bad puncture or negative length");
    const auto& rot = d.rotation()[alpha.puncture];
    int n = int(rot.size());
    if (alpha.start < 0 || alpha.start >= n)
        fail("mirror", "NOT_AN_ANGLE", "start index outside the rotation");
    const QuiverPtr& q = m.quiver;
    auto end = [&](int j) { return rot[(alpha.start + j) % n]; };

    MFMorphism z;
    z.source = end(0).arc;
    z.target = end(alpha.length).arc;
    z.odd = alpha.length % 2 == 1;
    NCPoly cur[2][2];
    for (auto& row : cur)
        for (auto& x : row)
            x = NCPoly(q, 0);
    cur[0][0] = NCPoly::of(q, idPath(m.headOf(z.source)), 0);
    cur[1][1] = NCPoly::of(q, idPath(m.tailOf(z.source)), 0);

    for (int j = 1; j <= alpha.length; ++j) {
        ArcEnd e = end(j - 1), e2 = end(j);
        if (e.head == e2.head)
            fail("mirror", "NOT_AN_ANGLE", "corner without a face");
        std::vector<int> comp;
        if (e.head) {
            // clockwise corner x -> y, kept in the dual
            int f = d.cwFace(e.arc);
            const auto& c = d.faces()[f].cycle;
            comp = complementWord(c, d.positionInFace(f, e.arc), 2);
        } else {
            // counterclockwise corner x -> y with e = y.t, e2 = x.h; reversed in the dual
            int f = d.ccwFace(e2.arc);
            std::vector<int> c = d.faces()[f].cycle;
            std::reverse(c.begin(), c.end());
            int pos = int(std::find(c.begin(), c.end(), e.arc) - c.begin());
            comp = complementWord(c, pos, 2);
        }
        NCPoly step[2][2];
        for (auto& row : step)
            for (auto& x : row)
                x = NCPoly(q, 0);
        step[1][0] = NCPoly::of(q, idPath(m.headOf(e.arc)), 0);
        step[0][1] = -NCPoly::of(q, makePath(*q, comp), 0);
        NCPoly next[2][2];
        compose(cur, step, next, q, 0);
        for (int t = 0; t < 2; ++t)
            for (int s = 0; s < 2; ++s)
                cur[t][s] = next[t][s];
    }
    bool negate = (alpha.length / 2) % 2 == 1;
    for (int t = 0; t < 2; ++t)
        for (int s = 0; s < 2; ++s)
            z.blocks[t][s] = negate ? -cur[t][s] : cur[t][s];
    return z;
}

MFMorphism mu1(const MFMorphism& phi, const MatrixFactorization& src, const MatrixFactorization& tgt)
{
    const QuiverPtr& q = src.f.quiver();
    int order = src.f.order();
    auto delta = [&](const MatrixFactorization& mf, NCPoly out[2][2]) {
        out[0][0] = NCPoly(q, order);
        out[1][1] = NCPoly(q, order);
        out[1][0] = mf.f;
        out[0][1] = mf.g;
    };
    NCPoly da[2][2], db[2][2], left[2][2], right[2][2];
    delta(src, da);
    delta(tgt, db);
    compose(phi.blocks, db, left, q, order);   // delta_b after phi
    compose(da, phi.blocks, right, q, order);  // phi after delta_a
    MFMorphism out;
    out.source = phi.source;
    out.target = phi.target;
    out.odd = !phi.odd;
    for (int t = 0; t < 2; ++t)
        for (int s = 0; s < 2; ++s)
            out.blocks[t][s] = phi.odd ? left[t][s] + right[t][s] : left[t][s] - right[t][s];
    return out;
}

bool isClosed(const Mirror& m, const MFMorphism& phi, const MatrixFactorization& src,
              const MatrixFactorization& tgt)
{
    MFMorphism d = mu1(phi, src, tgt);
    for (auto& row : d.blocks)
        for (auto& x : row)
            if (!x.isZero() && !m.normalForm(x).value.isZero())
                return false;
    return true;
}

}  // namespace dm
