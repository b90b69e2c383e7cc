#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "dimer_mirror/dimer.hpp"
#include "dimer_mirror/error.hpp"

namespace dm {

namespace {

using V2 = std::array<long, 2>;

V2 add(V2 a, V2 b) { return {a[0] + b[0], a[1] + b[1]}; }
V2 sub(V2 a, V2 b) { return {a[0] - b[0], a[1] - b[1]}; }
V2 scale(long k, V2 a) { return {k * a[0], k * a[1]}; }
bool isZero(V2 a) { return a[0] == 0 && a[1] == 0; }
long cross(V2 a, V2 b) { return a[0] * b[1] - a[1] * b[0]; }

// prefix sums of the cocycle along a face cycle
std::vector<V2> facePrefix(const Dimer& d, const TorusCoords& tc, int f)
{
    const auto& c = d.faces()[f].cycle;
    std::vector<V2> p(c.size() + 1, V2{0, 0});
    for (size_t i = 0; i < c.size(); ++i)
        p[i + 1] = add(p[i], tc.w[c[i]]);
    return p;
}

// lifted arc in a patch: (lifted face on the clockwise side, position)
struct LArc {
    int face;
    int pos;
    bool operator<(const LArc& o) const { return face != o.face ? face < o.face : pos < o.pos; }
    bool operator==(const LArc& o) const { return face == o.face && pos == o.pos; }
};

// walks zigzag rays inside a patch where lifted faces carry neighbor links
struct PatchWalker {
    const Dimer& d;
    const CoverPatch& p;

    // normalise a (lifted face, position) to the clockwise side
    std::optional<LArc> norm(int lf, int pos) const
    {
        const LiftedFace& F = p.faces[lf];
        if (d.faces()[F.face].clockwise)
            return LArc{lf, pos};
        int g = F.neighbor[pos];
        if (g < 0)
            return std::nullopt;
        int a = d.faces()[F.face].cycle[pos];
        return LArc{g, d.positionInFace(p.faces[g].face, a)};
    }
    // the lifted face on a given side of a lifted arc
    std::optional<std::pair<int, int>> side(LArc x, bool clockwise) const
    {
        if (clockwise)
            return std::make_pair(x.face, x.pos);
        int g = p.faces[x.face].neighbor[x.pos];
        if (g < 0)
            return std::nullopt;
        int a = d.faces()[p.faces[x.face].face].cycle[x.pos];
        return std::make_pair(g, d.positionInFace(p.faces[g].face, a));
    }
    std::optional<LArc> step(LArc x, Turn t, bool forward) const
    {
        // forward: along the face where this step turns; backward: along the
        // face where the previous step turned
        bool cw = forward ? t == Turn::Right : flip(t) == Turn::Right;
        auto s = side(x, cw);
        if (!s)
            return std::nullopt;
        auto [lf, pos] = *s;
        int n = int(d.faces()[p.faces[lf].face].cycle.size());
        int np = forward ? (pos + 1) % n : (pos + n - 1) % n;
        return norm(lf, np);
    }
};

}  // namespace

std::optional<TorusCoords> torusCoordinates(const Dimer& d)
{
    if (d.genus() > 1)
        return std::nullopt;
    const int nv = int(d.punctures().size());
    const int na = int(d.arcs().size());
    const int nf = int(d.faces().size());

    // spanning tree of punctures
    std::vector<bool> inTree(na, false), reached(nv, false);
    std::deque<int> q{0};
    reached[0] = true;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int a = 0; a < na; ++a) {
            const Arc& x = d.arcs()[a];
            int o = -1;
            if (x.tail == v && !reached[x.head])
                o = x.head;
            else if (x.head == v && !reached[x.tail])
                o = x.tail;
            if (o < 0)
                continue;
            reached[o] = true;
            inTree[a] = true;
            q.push_back(o);
        }
    }

    // dual spanning tree of faces through non-tree arcs
    std::vector<bool> inCotree(na, false), freached(nf, false);
    std::vector<int> parentArc(nf, -1), forder;
    q = {0};
    freached[0] = true;
    while (!q.empty()) {
        int f = q.front();
        q.pop_front();
        forder.push_back(f);
        for (int a : d.faces()[f].cycle) {
            if (inTree[a])
                continue;
            int g = d.cwFace(a) == f ? d.ccwFace(a) : d.cwFace(a);
            if (freached[g])
                continue;
            freached[g] = true;
            inCotree[a] = true;
            parentArc[g] = a;
            q.push_back(g);
        }
    }

    TorusCoords tc;
    tc.w.assign(na, V2{0, 0});
    int gen = 0;
    for (int a = 0; a < na; ++a)
        if (!inTree[a] && !inCotree[a]) {
            if (gen >= 2)
                fail("dimer", "MALFORMED_ROTATION", "more than two homology generators on a torus");
            tc.w[a][gen++] = 1;
        }

    // solve cotree arcs leaf-first so that every face cycle sums to zero
    for (auto it = forder.rbegin(); it != forder.rend(); ++it) {
        int f = *it;
        if (parentArc[f] < 0)
            continue;
        V2 s{0, 0};
        for (int a : d.faces()[f].cycle)
            if (a != parentArc[f])
                s = add(s, tc.w[a]);
        tc.w[parentArc[f]] = scale(-1, s);
    }
    for (int f = 0; f < nf; ++f) {
        V2 s{0, 0};
        for (int a : d.faces()[f].cycle)
            s = add(s, tc.w[a]);
        if (!isZero(s))
            fail("dimer", "MALFORMED_ROTATION", "cocycle does not close on a face");
    }
    return tc;
}

CoverPatch developCover(const Dimer& d, int radius)
{
    CoverPatch patch;
    const int nf = int(d.faces().size());
    if (radius < 0)
        radius = 0;
    auto other = [&](int f, int a) { return d.cwFace(a) == f ? d.ccwFace(a) : d.cwFace(a); };

    if (d.genus() == 1) {
        TorusCoords tc = *torusCoordinates(d);
        patch.hasDeckCoordinates = true;
        std::map<std::pair<int, V2>, int> index;
        auto get = [&](int f, V2 off, int depth) {
            auto key = std::make_pair(f, off);
            auto it = index.find(key);
            if (it != index.end())
                return std::make_pair(it->second, false);
            LiftedFace lf;
            lf.face = f;
            lf.offset = off;
            lf.depth = depth;
            lf.neighbor.assign(d.faces()[f].cycle.size(), -1);
            patch.faces.push_back(lf);
            index[key] = int(patch.faces.size()) - 1;
            return std::make_pair(int(patch.faces.size()) - 1, true);
        };
        get(0, V2{0, 0}, 0);
        std::deque<int> q{0};
        while (!q.empty()) {
            int i = q.front();
            q.pop_front();
            int f = patch.faces[i].face;
            auto pf = facePrefix(d, tc, f);
            const auto& cyc = d.faces()[f].cycle;
            for (size_t k = 0; k < cyc.size(); ++k) {
                int a = cyc[k];
                int g = other(f, a);
                auto pg = facePrefix(d, tc, g);
                int kg = d.positionInFace(g, a);
                V2 off = sub(add(patch.faces[i].offset, pf[k]), pg[kg]);
                auto key = std::make_pair(g, off);
                bool exists = index.count(key) > 0;
                if (!exists && patch.faces[i].depth >= radius)
                    continue;
                auto [j, fresh] = get(g, off, patch.faces[i].depth + 1);
                patch.faces[i].neighbor[k] = j;
                patch.faces[j].neighbor[kg] = i;
                if (fresh)
                    q.push_back(j);
            }
        }
        return patch;
    }

    if (d.genus() == 0) {
        // the sphere is its own universal cover
        std::vector<int> depth(nf, -1);
        std::deque<int> q{0};
        depth[0] = 0;
        std::vector<int> order;
        while (!q.empty()) {
            int f = q.front();
            q.pop_front();
            if (depth[f] > radius)
                continue;
            order.push_back(f);
            for (int a : d.faces()[f].cycle) {
                int g = other(f, a);
                if (depth[g] < 0) {
                    depth[g] = depth[f] + 1;
                    q.push_back(g);
                }
            }
        }
        std::vector<int> lift(nf, -1);
        for (size_t i = 0; i < order.size(); ++i)
            lift[order[i]] = int(i);
        for (int f : order) {
            LiftedFace lf;
            lf.face = f;
            lf.depth = depth[f];
            for (int a : d.faces()[f].cycle)
                lf.neighbor.push_back(lift[other(f, a)]);
            patch.faces.push_back(lf);
        }
        return patch;
    }

    // higher genus: grow a tree of faces, closing up a puncture star whenever
    // going around it through existing links already reaches the target face
    auto newFace = [&](int f, int depth) {
        LiftedFace lf;
        lf.face = f;
        lf.depth = depth;
        lf.neighbor.assign(d.faces()[f].cycle.size(), -1);
        patch.faces.push_back(lf);
        return int(patch.faces.size()) - 1;
    };
    // walk around the head (dir=+1) or tail (dir=-1) of the arc at position k
    auto around = [&](int i, int k, int dir) -> int {
        int target = d.faces()[patch.faces[i].face].cycle[k];
        int cur = i, pos = k;
        int deg = int(d.rotation()[dir > 0 ? d.arcs()[target].head : d.arcs()[target].tail].size());
        for (int s = 0; s + 1 < deg; ++s) {
            const auto& cyc = d.faces()[patch.faces[cur].face].cycle;
            int n = int(cyc.size());
            int np = dir > 0 ? (pos + 1) % n : (pos + n - 1) % n;
            int nxt = patch.faces[cur].neighbor[np];
            if (nxt < 0)
                return -1;
            int a = cyc[np];
            pos = d.positionInFace(patch.faces[nxt].face, a);
            cur = nxt;
        }
        const auto& cyc = d.faces()[patch.faces[cur].face].cycle;
        int n = int(cyc.size());
        int np = dir > 0 ? (pos + 1) % n : (pos + n - 1) % n;
        return cyc[np] == target ? cur : -1;
    };
    newFace(0, 0);
    std::deque<int> q{0};
    while (!q.empty()) {
        int i = q.front();
        q.pop_front();
        if (patch.faces[i].depth >= radius)
            continue;
        int f = patch.faces[i].face;
        const auto& cyc = d.faces()[f].cycle;
        for (size_t k = 0; k < cyc.size(); ++k) {
            if (patch.faces[i].neighbor[k] >= 0)
                continue;
            int a = cyc[k];
            int g = other(f, a);
            int kg = d.positionInFace(g, a);
            int j = around(i, int(k), +1);
            if (j < 0)
                j = around(i, int(k), -1);
            if (j < 0 || patch.faces[j].face != g || patch.faces[j].neighbor[kg] >= 0) {
                j = newFace(g, patch.faces[i].depth + 1);
                q.push_back(j);
            }
            patch.faces[i].neighbor[k] = j;
            patch.faces[j].neighbor[kg] = i;
        }
    }
    return patch;
}

std::string ConsistencyVerdict::str(const Dimer& d) const
{
    std::ostringstream out;
    switch (kind) {
    case Consistency::Certified:
        out << "CONSISTENT_CERTIFIED";
        break;
    case Consistency::UpToDepth:
        out << "CONSISTENT_UP_TO_DEPTH(depth=" << depth << ")";
        break;
    case Consistency::Inconsistent:
        out << "INCONSISTENT(arc=" << d.arcs()[arc].id << ", ray " << rayK << " index " << indexI
            << " meets ray " << rayL << " index " << indexJ << ")";
        break;
    }
    return out.str();
}

namespace {

// Torus: each zigzag line is periodic under a deck translation, so collisions
// reduce to small integer linear systems.
ConsistencyVerdict torusConsistency(const Dimer& d, int depth)
{
    TorusCoords tc = *torusCoordinates(d);
    auto zz = zigzagPaths(d);
    struct Line {
        std::vector<Step> steps;
        std::vector<V2> off;  // tail offset of each position, off[0] = 0
        V2 period;
    };
    std::vector<Line> lines;
    for (auto& z : zz) {
        Line L;
        L.steps = z.steps;
        V2 cur{0, 0};
        for (auto& s : z.steps) {
            L.off.push_back(cur);
            cur = add(cur, tc.w[s.arc]);
        }
        L.period = cur;
        lines.push_back(L);
    }
    ConsistencyVerdict v;
    v.depth = depth;
    auto verdict = [&](int arc, int k, long i, int l, long j) {
        v.kind = Consistency::Inconsistent;
        v.arc = arc;
        v.rayK = k, v.indexI = int(i), v.rayL = l, v.indexJ = int(j);
        return v;
    };
    // signed position s on the line through (a, R): rays 1 (s>=0) and 4 (s<0);
    // through (a, L): rays 2 and 3
    auto rayOf = [](bool rightLine, long s) {
        if (rightLine)
            return std::make_pair(s >= 0 ? 1 : 4, s >= 0 ? s : -s);
        return std::make_pair(s >= 0 ? 2 : 3, s >= 0 ? s : -s);
    };

    for (int a = 0; a < int(d.arcs().size()); ++a) {
        int zr = zigzagOf(zz, {a, Turn::Right}), zl = zigzagOf(zz, {a, Turn::Left});
        const Line& R = lines[zr];
        const Line& L = lines[zl];
        int i0 = zz[zr].indexOf({a, Turn::Right}), j0 = zz[zl].indexOf({a, Turn::Left});
        long nr = long(R.steps.size()), nl = long(L.steps.size());

        // self intersections of either line
        for (int pass = 0; pass < 2; ++pass) {
            const Line& X = pass == 0 ? R : L;
            int x0 = pass == 0 ? i0 : j0;
            long n = long(X.steps.size());
            if (isZero(X.period))
                return verdict(a, pass == 0 ? 1 : 2, 0, pass == 0 ? 1 : 2, n);
            for (long i = 0; i < n; ++i)
                for (long j = 0; j < n; ++j) {
                    if (i == j || X.steps[i].arc != X.steps[j].arc)
                        continue;
                    V2 delta = sub(X.off[i], X.off[j]);
                    if (cross(delta, X.period) != 0)
                        continue;
                    long num = X.period[0] != 0 ? delta[0] : delta[1];
                    long den = X.period[0] != 0 ? X.period[0] : X.period[1];
                    if (num % den != 0)
                        continue;
                    long m = num / den;  // off[i] = off[j] + m*period
                    long si = i - x0, sj = j - x0 + m * n;
                    auto [k1, i1] = rayOf(pass == 0, si);
                    auto [k2, i2] = rayOf(pass == 0, sj);
                    if (pass == 1) {
                        // a line through (a, L) is made of rays 2 and 3
                    }
                    return verdict(a, k1, i1, k2, i2);
                }
        }

        // the two lines meet only at a
        V2 v1 = R.period, v2 = L.period;
        for (long i = 0; i < nr; ++i)
            for (long j = 0; j < nl; ++j) {
                if (R.steps[i].arc != L.steps[j].arc)
                    continue;
                // off_R(i) - off_R(i0) + m v1 == off_L(j) - off_L(j0) + m' v2
                V2 delta = sub(sub(L.off[j], L.off[j0]), sub(R.off[i], R.off[i0]));
                bool trivial = i == i0 && j == j0;
                long det = cross(v1, scale(-1, v2));
                if (det != 0) {
                    long nm = cross(delta, scale(-1, v2));
                    long nmp = cross(v1, delta);
                    if (nm % det != 0 || nmp % det != 0)
                        continue;
                    long m = nm / det, mp = nmp / det;
                    if (trivial && m == 0 && mp == 0)
                        continue;
                    auto [k1, i1] = rayOf(true, i - i0 + m * nr);
                    auto [k2, i2] = rayOf(false, j - j0 + mp * nl);
                    return verdict(a, k1, i1, k2, i2);
                }
                // parallel periods: the lines run side by side forever
                if (cross(delta, v1) != 0)
                    continue;
                long g = std::gcd(v1[0], v1[1]);
                V2 u{v1[0] / g, v1[1] / g};
                long alpha = g;
                long beta = u[0] != 0 ? v2[0] / u[0] : v2[1] / u[1];
                long gamma = u[0] != 0 ? delta[0] / u[0] : delta[1] / u[1];
                long gg = std::gcd(alpha, beta);
                if (gamma % gg != 0)
                    continue;
                // some solution exists, and with it infinitely many
                long m = 0, mp = 0;
                for (long t = -4 * (std::abs(beta) + 1); t <= 4 * (std::abs(beta) + 1); ++t)
                    if ((gamma - t * alpha) % beta == 0 && !(trivial && t == 0)) {
                        m = t;
                        mp = (t * alpha - gamma) / beta;
                        break;
                    }
                auto [k1, i1] = rayOf(true, i - i0 + m * nr);
                auto [k2, i2] = rayOf(false, j - j0 + mp * nl);
                return verdict(a, k1, i1, k2, i2);
            }
    }
    v.kind = Consistency::Certified;
    return v;
}

}  // namespace

ConsistencyVerdict checkGeometricConsistency(const Dimer& d, int depth)
{
    if (depth < 1)
        depth = 1;
    if (d.genus() == 1)
        return torusConsistency(d, depth);

    // develop the four rays inside a patch and look for a repeated lifted arc
    CoverPatch p = developCover(d, depth + 2);
    PatchWalker w{d, p};
    ConsistencyVerdict v;
    v.depth = depth;
    for (int lf = 0; lf < int(p.faces.size()); ++lf) {
        if (!d.faces()[p.faces[lf].face].clockwise || p.faces[lf].depth > 1)
            continue;
        const auto& cyc = d.faces()[p.faces[lf].face].cycle;
        for (int pos = 0; pos < int(cyc.size()); ++pos) {
            LArc a0{lf, pos};
            std::map<LArc, std::pair<int, int>> seen;
            // ray k: 1 forward from (a,R), 2 forward from (a,L),
            //        3 backward into (a,L), 4 backward into (a,R)
            std::array<std::optional<LArc>, 4> cur{a0, a0, a0, a0};
            std::array<Turn, 4> turn{Turn::Right, Turn::Left, Turn::Left, Turn::Right};
            for (int i = 0; i <= depth; ++i) {
                for (int k = 0; k < 4; ++k) {
                    if (!cur[k])
                        continue;
                    if (i > 0) {
                        auto it = seen.find(*cur[k]);
                        if (it != seen.end()) {
                            v.kind = Consistency::Inconsistent;
                            v.arc = cyc[pos];
                            v.rayK = it->second.first, v.indexI = it->second.second;
                            v.rayL = k + 1, v.indexJ = i;
                            return v;
                        }
                        seen[*cur[k]] = {k + 1, i};
                    } else if (k == 0) {
                        seen[*cur[k]] = {1, 0};
                    }
                }
                for (int k = 0; k < 4; ++k) {
                    if (!cur[k])
                        continue;
                    bool forward = k < 2;
                    cur[k] = w.step(*cur[k], turn[k], forward);
                    turn[k] = flip(turn[k]);
                }
            }
        }
    }
    v.kind = Consistency::UpToDepth;
    return v;
}

}  // namespace dm
