#include "dimer_mirror/disks.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <deque>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "dimer_mirror/error.hpp"

namespace dm {

namespace {

using V2 = std::array<long, 2>;
V2 operator+(V2 a, V2 b) { return {a[0] + b[0], a[1] + b[1]}; }
V2 operator-(V2 a, V2 b) { return {a[0] - b[0], a[1] - b[1]}; }

// lifted face (kind 0) or lifted puncture (kind 1)
using Piece = std::tuple<int, int, long, long>;
// lifted corner edge: the angle after the step at a lifted midpoint
using Edge = std::tuple<int, int, long, long>;
using Mid = std::tuple<int, long, long>;

struct Geometry {
    const Dimer& d;
    std::vector<V2> w;
    std::vector<std::vector<V2>> prefix;  // per face: offset of the tail of cycle[i]
    std::vector<ZigzagPath> zz;
    int cap = 0;
    int maxEdges = 0;

    explicit Geometry(const Dimer& dd) : d(dd)
    {
        auto tc = torusCoordinates(d);
        if (!tc)
            fail("disks", "UNSUPPORTED_SURFACE", "polygon enumeration needs a sphere or torus dimer");
        w = tc->w;
        for (const auto& f : d.faces()) {
            std::vector<V2> p{{0, 0}};
            for (size_t i = 0; i + 1 < f.cycle.size(); ++i)
                p.push_back(p.back() + w[f.cycle[i]]);
            prefix.push_back(p);
        }
        zz = zigzagPaths(d);
    }

    int faceOf(Step s) const { return s.turn == Turn::Right ? d.cwFace(s.arc) : d.ccwFace(s.arc); }

    Piece facePiece(Step s, V2 off) const
    {
        int f = faceOf(s);
        V2 o = off - prefix[f][d.positionInFace(f, s.arc)];
        return {0, f, o[0], o[1]};
    }
    Piece punctPiece(Step s, V2 off) const
    {
        V2 o = off + w[s.arc];
        return {1, d.arcs()[s.arc].head, o[0], o[1]};
    }
};

class Walker {
public:
    Walker(const Geometry& g, bool cw, int start, std::vector<MidpointPolygon>& out)
        : g_(g), cw_(cw), x0_(start), out_(out)
    {
        arrive_ = cw ? Turn::Left : Turn::Right;
        leave_ = flip(arrive_);
    }

    void run()
    {
        visited_.insert({x0_, 0, 0});
        edge({x0_, leave_}, {0, 0});
    }

private:
    bool punctureSide(Step s) const { return s.turn == arrive_; }

    void edge(Step s, V2 off)
    {
        if (int(edges_.size()) >= g_.maxEdges)
            return;
        Piece pp;
        bool counted = false;
        if (punctureSide(s)) {
            pp = g_.punctPiece(s, off);
            if (++dside_[pp] == 1 && int(dside_.size()) > g_.cap) {
                dside_.erase(pp);
                return;
            }
            counted = true;
        }
        edges_.push_back({s, off});
        ++side_;
        Step n = g_.d.next(s);
        V2 noff = off + g_.w[s.arc];
        if (n.arc == x0_ && noff == V2{0, 0}) {
            if (n.turn == arrive_)
                close();
        } else if (visited_.insert({n.arc, noff[0], noff[1]}).second) {
            interior_.push_back(n);
            edge(n, noff);
            interior_.pop_back();
            if (n.turn == arrive_) {
                corners_.push_back(n.arc);
                sides_.push_back({side_, interior_});
                int saved = side_;
                std::vector<Step> savedInt;
                savedInt.swap(interior_);
                side_ = 0;
                edge({n.arc, leave_}, noff);
                side_ = saved;
                interior_.swap(savedInt);
                sides_.pop_back();
                corners_.pop_back();
            }
            visited_.erase({n.arc, noff[0], noff[1]});
        }
        --side_;
        edges_.pop_back();
        if (counted && --dside_[pp] == 0)
            dside_.erase(pp);
    }

    // flood fill of the enclosed pieces; false if the boundary does not bound
    // a disk on the expected side within the puncture cap
    bool fill(Monomial& punc) const
    {
        std::set<Edge> boundary;
        std::set<Piece> outside, seeds;
        for (const auto& [s, off] : edges_) {
            boundary.insert({s.arc, int(s.turn), off[0], off[1]});
            Piece f = g_.facePiece(s, off), p = g_.punctPiece(s, off);
            bool faceInside = (s.turn == Turn::Right) == cw_;
            seeds.insert(faceInside ? f : p);
            outside.insert(faceInside ? p : f);
        }
        for (const auto& s : seeds)
            if (outside.count(s))
                return false;
        std::set<Piece> region(seeds.begin(), seeds.end());
        std::deque<Piece> queue(seeds.begin(), seeds.end());
        int punctures = 0;
        for (const auto& p : region)
            punctures += std::get<0>(p) == 1;
        const auto& d = g_.d;
        auto visit = [&](const Piece& p) {
            if (region.count(p))
                return true;
            if (outside.count(p))
                return false;
            if (std::get<0>(p) == 1 && ++punctures > g_.cap)
                return false;
            region.insert(p);
            queue.push_back(p);
            return true;
        };
        while (!queue.empty()) {
            Piece p = queue.front();
            queue.pop_front();
            auto [kind, id, o0, o1] = p;
            V2 o{o0, o1};
            if (kind == 0) {
                const Face& f = d.faces()[id];
                Turn t = f.clockwise ? Turn::Right : Turn::Left;
                for (size_t i = 0; i < f.cycle.size(); ++i) {
                    Step s{f.cycle[i], t};
                    V2 off = o + g_.prefix[id][i];
                    if (boundary.count({s.arc, int(t), off[0], off[1]}))
                        continue;
                    if (!visit(g_.punctPiece(s, off)))
                        return false;
                }
            } else {
                for (const auto& e : d.rotation()[id]) {
                    if (!e.head)
                        continue;
                    V2 off = o - g_.w[e.arc];
                    for (Turn t : {Turn::Right, Turn::Left}) {
                        Step s{e.arc, t};
                        if (boundary.count({s.arc, int(t), off[0], off[1]}))
                            continue;
                        if (!visit(g_.facePiece(s, off)))
                            return false;
                    }
                }
            }
        }
        punc.clear();
        for (const auto& p : region)
            if (std::get<0>(p) == 1)
                punc.push_back(std::get<1>(p));
        std::sort(punc.begin(), punc.end());
        return true;
    }

    void close()
    {
        Monomial punc;
        if (!fill(punc))
            return;
        std::vector<int> walk{x0_};
        walk.insert(walk.end(), corners_.begin(), corners_.end());
        std::vector<std::pair<int, std::vector<Step>>> sides = sides_;
        sides.push_back({side_, interior_});
        int k = int(walk.size());
        MidpointPolygon p;
        p.clockwise = cw_;
        p.punc = punc;
        if (cw_) {
            p.corners = walk;
            for (const auto& s : sides)
                p.segmentLengths.push_back(s.first);
            p.closingInterior = sides.back().second;
            p.closingZigzag = zigzagOf(g_.zz, {walk.back(), Turn::Right});
        } else {
            p.corners.push_back(walk[0]);
            for (int j = k - 1; j >= 1; --j)
                p.corners.push_back(walk[j]);
            p.segmentLengths.assign(k, 0);
            for (int j = 1; j <= k; ++j)
                p.segmentLengths[k - j] = sides[j - 1].first;
            p.closingInterior = sides[0].second;
            p.closingZigzag = zigzagOf(g_.zz, {walk[0], Turn::Left});
        }
        for (int c : p.corners)
            p.pointingFaces.push_back(cw_ ? g_.d.cwFace(c) : g_.d.ccwFace(c));
        out_.push_back(std::move(p));
    }

    const Geometry& g_;
    bool cw_;
    int x0_;
    std::vector<MidpointPolygon>& out_;
    Turn arrive_, leave_;
    std::set<Mid> visited_;
    std::vector<std::pair<Step, V2>> edges_;
    std::map<Piece, int> dside_;
    std::vector<int> corners_;
    std::vector<std::pair<int, std::vector<Step>>> sides_;
    std::vector<Step> interior_;
    int side_ = 0;
};

int resolveThreads(int threads)
{
    if (threads > 0)
        return threads;
    if (const char* env = std::getenv("DIMER_MIRROR_THREADS")) {
        int t = std::atoi(env);
        if (t > 0)
            return t;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

DefSeries puncSeries(const MidpointPolygon& p, int c, int N)
{
    return DefSeries::mono(p.punc, c, N);
}

}  // namespace

int MidpointPolygon::size() const
{
    int s = 0;
    for (int n : segmentLengths)
        s += (n - 1) / 2;
    return s;
}

std::vector<int> MidpointPolygon::arcsWord() const
{
    return std::vector<int>(corners.rbegin(), corners.rend());
}

bool MidpointPolygon::operator<(const MidpointPolygon& o) const
{
    auto key = [](const MidpointPolygon& p) {
        return std::make_tuple(!p.clockwise, p.punc.size(), p.corners.size(), std::cref(p.punc),
                               std::cref(p.corners), std::cref(p.segmentLengths));
    };
    return key(*this) < key(o);
}

bool MidpointPolygon::operator==(const MidpointPolygon& o) const
{
    return clockwise == o.clockwise && corners == o.corners && segmentLengths == o.segmentLengths &&
           punc == o.punc;
}

std::string MidpointPolygon::str(const Dimer& d) const
{
    std::ostringstream o;
    o << (clockwise ? "clockwise" : "counterclockwise") << " punc=";
    if (punc.empty())
        o << "1";
    for (size_t i = 0; i < punc.size(); ++i)
        o << (i ? "*" : "") << "q" << d.punctures()[punc[i]];
    o << " arcs=[";
    auto w = arcsWord();
    for (size_t i = 0; i < w.size(); ++i)
        o << (i ? " " : "") << d.arcs()[w[i]].id;
    o << "] n=";
    for (size_t i = 0; i < segmentLengths.size(); ++i)
        o << (i ? "," : "") << segmentLengths[i];
    o << " sign=" << (sign() > 0 ? "+1" : "-1");
    return o.str();
}

std::vector<MidpointPolygon> enumerateMidpointPolygons(const Dimer& d, int qOrderCap, const PolygonFilter& filter,
                                                       int threads)
{
    if (qOrderCap < 0)
        fail("disks", "BAD_ORDER", "negative order cap");
    if (d.genus() == 1) {
        auto v = checkGeometricConsistency(d, 4);
        if (v.kind == Consistency::Inconsistent)
            fail("disks", "INCONSISTENT_DIMER", v.str(d));
    }
    Geometry g(d);
    g.cap = qOrderCap;
    int deg = d.maxDegree();
    g.maxEdges = std::max(1, qOrderCap * deg) * d.maxFaceLength() + qOrderCap * deg;

    std::vector<std::pair<bool, int>> tasks;
    for (bool cw : {true, false}) {
        if (filter.clockwise && *filter.clockwise != cw)
            continue;
        for (int a = 0; a < int(d.arcs().size()); ++a)
            if (!filter.firstArc || *filter.firstArc == a)
                tasks.push_back({cw, a});
    }
    std::vector<std::vector<MidpointPolygon>> results(tasks.size());
    std::atomic<size_t> nextTask{0};
    auto worker = [&] {
        for (size_t t; (t = nextTask++) < tasks.size();)
            Walker(g, tasks[t].first, tasks[t].second, results[t]).run();
    };
    int nt = std::min<int>(resolveThreads(threads), int(tasks.size()));
    std::vector<std::thread> pool;
    for (int i = 1; i < nt; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();

    std::vector<MidpointPolygon> out;
    for (auto& r : results)
        for (auto& p : r) {
            if (filter.lastArc && p.corners.back() != *filter.lastArc)
                continue;
            if (filter.corners && p.corners != *filter.corners)
                continue;
            out.push_back(std::move(p));
        }
    std::sort(out.begin(), out.end());
    for (size_t i = 1; i < out.size(); ++i)
        if (out[i] == out[i - 1])
            fail("disks", "RADIUS_INSUFFICIENT", "duplicate polygon " + out[i].str(d));
    return out;
}

std::string polygonDump(const Dimer& d, const std::vector<MidpointPolygon>& polys)
{
    std::string s;
    for (const auto& p : polys)
        s += p.str(d) + "\n";
    return s;
}

Step identityStep(const Mirror& m, int zigzag, const IdentityChoice& ids)
{
    auto it = ids.find(zigzag);
    if (it != ids.end())
        return it->second;
    const auto& z = m.zigzags[zigzag];
    return z.steps[z.identityLocation];
}

std::pair<int, Step> parseIdentityLocation(const Mirror& m, const std::string& text)
{
    auto eq = text.find('=');
    if (eq == std::string::npos)
        fail("disks", "PARSE_ERROR", "identity location must read path=arc: " + text);
    std::string path = text.substr(0, eq), arc = text.substr(eq + 1);
    int zi = -1;
    for (size_t i = 0; i < m.zigzags.size(); ++i)
        if (m.zigzags[i].name == path)
            zi = int(i);
    if (zi < 0)
        fail("disks", "PARSE_ERROR", "unknown zigzag path " + path);
    std::optional<Turn> turn;
    int a = m.q.arc(arc);
    if (a < 0 && !arc.empty() && (arc.back() == 'L' || arc.back() == 'R')) {
        turn = arc.back() == 'L' ? Turn::Left : Turn::Right;
        a = m.q.arc(arc.substr(0, arc.size() - 1));
    }
    if (a < 0)
        fail("disks", "PARSE_ERROR", "unknown arc " + arc);
    std::vector<Step> hits;
    for (const auto& s : m.zigzags[zi].steps)
        if (s.arc == a && (!turn || s.turn == *turn))
            hits.push_back(s);
    if (hits.size() != 1)
        fail("disks", "BAD_IDENTITY", "arc " + arc + " does not single out a step of " + path);
    return {zi, hits[0]};
}

int lPolygonMultiplicity(const MidpointPolygon& p, int zigzag, Step identity)
{
    int mult = 0;
    if (identity.turn == Turn::Left && !p.clockwise && p.corners.front() == identity.arc)
        ++mult;
    if (identity.turn == Turn::Right && p.clockwise && p.corners.back() == identity.arc)
        ++mult;
    if (p.closingZigzag == zigzag)
        mult += int(std::count(p.closingInterior.begin(), p.closingInterior.end(), identity));
    return mult;
}

NCPoly deformedSuperpotential(const Mirror& m, const std::vector<MidpointPolygon>& polys, int N)
{
    NCPoly w(m.quiver, N);
    for (const auto& p : polys) {
        if (int(p.punc.size()) > N)
            continue;
        int c = (p.clockwise ? 1 : -1) * p.sign();
        w.addTerm(makePath(*m.quiver, p.arcsWord()), puncSeries(p, c, N));
    }
    return w;
}

NCPoly deformedSuperpotential(const Mirror& m, int N)
{
    return deformedSuperpotential(m, enumerateMidpointPolygons(m.q, N), N);
}

NCPoly deformedPotentialPart(const Mirror& m, const std::vector<MidpointPolygon>& polys, int zigzag,
                             Step identity, int N)
{
    NCPoly l(m.quiver, N);
    for (const auto& p : polys) {
        if (int(p.punc.size()) > N)
            continue;
        int mult = lPolygonMultiplicity(p, zigzag, identity);
        if (mult)
            l.addTerm(makePath(*m.quiver, p.arcsWord()), puncSeries(p, mult * p.sign(), N));
    }
    return l;
}

NCPoly deformedPotential(const Mirror& m, const std::vector<MidpointPolygon>& polys, const IdentityChoice& ids,
                         int N)
{
    NCPoly l(m.quiver, N);
    for (size_t i = 0; i < m.zigzags.size(); ++i)
        l += deformedPotentialPart(m, polys, int(i), identityStep(m, int(i), ids), N);
    return l;
}

NCPoly deformedPotential(const Mirror& m, const IdentityChoice& ids, int N)
{
    return deformedPotential(m, enumerateMidpointPolygons(m.q, N), ids, N);
}

NCPoly deformedComplement(const Mirror& m, const std::vector<MidpointPolygon>& polys, int arc, int N)
{
    NCPoly g(m.quiver, N);
    for (const auto& p : polys) {
        if (!p.clockwise || p.corners.back() != arc || int(p.punc.size()) > N)
            continue;
        std::vector<int> w(p.corners.rbegin() + 1, p.corners.rend());
        Path path = w.empty() ? idPath(m.tailOf(arc)) : makePath(*m.quiver, w);
        g.addTerm(path, puncSeries(p, p.sign(), N));
    }
    return g;
}

NCPoly deformedComplement(const Mirror& m, int arc, int N)
{
    PolygonFilter f;
    f.clockwise = true;
    f.lastArc = arc;
    return deformedComplement(m, enumerateMidpointPolygons(m.q, N, f), arc, N);
}

std::vector<NCPoly> deformedRelations(const Mirror& m, const NCPoly& wq)
{
    std::vector<NCPoly> out;
    for (size_t e = 0; e < m.quiver->arrows.size(); ++e)
        out.push_back(cyclicDerivative(wq, int(e)));
    return out;
}

MatrixFactorization deformedMirrorObject(const Mirror& m, const std::vector<MidpointPolygon>& polys,
                                         const IdentityChoice& ids, int arc, int N)
{
    if (arc < 0 || arc >= int(m.quiver->arrows.size()))
        fail("disks", "UNKNOWN_ARC", "arc index " + std::to_string(arc));
    MatrixFactorization mf;
    mf.arc = arc;
    mf.evenModule = m.headOf(arc);
    mf.oddModule = m.tailOf(arc);
    mf.f = NCPoly::of(m.quiver, m.arrow(arc), N);
    mf.g = deformedComplement(m, polys, arc, N);
    NCPoly l = deformedPotential(m, polys, ids, N);
    NCPoly ce = l * NCPoly::of(m.quiver, idPath(mf.evenModule), N) - mf.f * mf.g;
    NCPoly co = l * NCPoly::of(m.quiver, idPath(mf.oddModule), N) - mf.g * mf.f;
    for (NCPoly* c : {&ce, &co}) {
        NCPoly zero = c->qZero();
        if (!m.normalForm(zero).value.isZero())
            fail("disks", "CURVATURE_NOT_INFINITESIMAL",
                 "order-0 defect " + zero.str() + " for arc " + m.quiver->arrows[arc]);
        *c -= zero;
    }
    mf.curvatureEven = ce;
    mf.curvatureOdd = co;
    return mf;
}

MatrixFactorization deformedMirrorObject(const Mirror& m, int arc, int N)
{
    return deformedMirrorObject(m, enumerateMidpointPolygons(m.q, N), {}, arc, N);
}

namespace {

void checkComposable(const Mirror& m, const std::vector<int>& word)
{
    for (size_t i = 0; i + 1 < word.size(); ++i)
        if (m.tailOf(word[i]) != m.headOf(word[i + 1]))
            fail("disks", "NON_COMPOSABLE",
                 "X_" + m.quiver->arrows[word[i + 1]] + " does not end where X_" + m.quiver->arrows[word[i]] +
                     " starts");
}

}  // namespace

Combination hlOddProduct(const Mirror& m, const std::vector<MidpointPolygon>& polys, const IdentityChoice& ids,
                         const std::vector<int>& word, int N)
{
    checkComposable(m, word);
    Combination out;
    auto add = [&](Label l, const DefSeries& s) {
        auto it = out.emplace(l, DefSeries(N)).first;
        it->second += s;
        if (it->second.isZero())
            out.erase(it);
    };
    for (const auto& p : polys) {
        if (int(p.punc.size()) > N)
            continue;
        auto aw = p.arcsWord();
        if (aw.size() == word.size() + 1 && std::equal(word.begin(), word.end(), aw.begin() + 1))
            add({0, aw[0]}, puncSeries(p, (p.clockwise ? 1 : -1) * p.sign(), N));
        if (aw == word)
            for (size_t i = 0; i < m.zigzags.size(); ++i) {
                int mult = lPolygonMultiplicity(p, int(i), identityStep(m, int(i), ids));
                if (mult)
                    add({1, int(i)}, puncSeries(p, mult * p.sign(), N));
            }
    }
    return out;
}

DefSeries mdProduct(const Mirror& m, const std::vector<MidpointPolygon>& polys, int arc, bool odd,
                    const std::vector<int>& word, int N)
{
    checkComposable(m, word);
    DefSeries out(N);
    if (!odd) {
        if (word.size() == 1 && word[0] == arc)
            out = DefSeries::constant(-1, N);
        return out;
    }
    for (const auto& p : polys) {
        if (!p.clockwise || p.corners.back() != arc || int(p.punc.size()) > N)
            continue;
        std::vector<int> w(p.corners.rbegin() + 1, p.corners.rend());
        if (w == word)
            out += puncSeries(p, p.sign(), N);
    }
    return out;
}

}  // namespace dm
