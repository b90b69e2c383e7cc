#include "dimer_mirror/jacobi.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>
#include <unordered_map>

#include "dimer_mirror/error.hpp"

namespace dm {

namespace {

using Word = std::vector<int>;

// all words obtained from w by one replacement inside some group
template <class F>
void forEachFlip(const Word& w, const FlipRules& rules, F&& f)
{
    for (const auto& g : rules.groups) {
        for (const auto& u : g) {
            if (u.empty() || u.size() > w.size())
                continue;
            for (size_t i = 0; i + u.size() <= w.size(); ++i) {
                if (!std::equal(u.begin(), u.end(), w.begin() + i))
                    continue;
                for (const auto& v : g) {
                    if (&v == &u || v == u)
                        continue;
                    Word n(w.begin(), w.begin() + i);
                    n.insert(n.end(), v.begin(), v.end());
                    n.insert(n.end(), w.begin() + i + u.size(), w.end());
                    f(n);
                }
            }
        }
    }
}

struct Bfs {
    std::map<Word, Word> parent;  // member -> predecessor
    bool saturated = true;
};

// BFS over flips; stop(w) may end the search early (returns true)
Bfs flipBfs(const Word& seed, const FlipRules& rules, int cap, size_t memberCap,
            const std::function<bool(const Word&)>& stop = {})
{
    Bfs b;
    b.parent[seed] = seed;
    std::deque<Word> queue{seed};
    if (stop && stop(seed))
        return b;
    while (!queue.empty()) {
        Word w = std::move(queue.front());
        queue.pop_front();
        bool halt = false;
        forEachFlip(w, rules, [&](const Word& n) {
            if (halt || b.parent.count(n))
                return;
            if (int(n.size()) > cap || b.parent.size() >= memberCap) {
                b.saturated = false;
                return;
            }
            b.parent[n] = w;
            if (stop && stop(n)) {
                halt = true;
                return;
            }
            queue.push_back(n);
        });
        if (halt) {
            b.saturated = false;
            return b;
        }
    }
    return b;
}

std::vector<Path> chainTo(const Bfs& b, Word w, int src, int tgt)
{
    std::vector<Path> out;
    while (true) {
        out.push_back(Path{src, tgt, w});
        const Word& p = b.parent.at(w);
        if (p == w)
            break;
        w = p;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

bool ccwBetween(const std::vector<ArcEnd>& rot, ArcEnd from, ArcEnd to, ArcEnd e)
{
    auto pos = [&](ArcEnd x) {
        for (size_t i = 0; i < rot.size(); ++i)
            if (rot[i] == x)
                return long(i);
        fail("jacobi", "INTERNAL", "arc end not at puncture");
    };
    long n = long(rot.size());
    long f = pos(from), t = pos(to), x = pos(e);
    long dx = ((x - f) % n + n) % n, dt = ((t - f) % n + n) % n;
    return dx > 0 && dx < dt;
}

}  // namespace

std::vector<int> faceWord(const Dimer& d, int face)
{
    const auto& c = d.faces()[face].cycle;
    return Word(c.rbegin(), c.rend());
}

FlipRules dimerFlipRules(const Dimer& d)
{
    FlipRules r;
    for (size_t e = 0; e < d.arcs().size(); ++e) {
        std::vector<Word> g;
        for (bool cw : {true, false}) {
            int f = cw ? d.cwFace(int(e)) : d.ccwFace(int(e));
            const auto& c = d.faces()[f].cycle;
            int k = int(c.size());
            int pos = d.positionInFace(f, int(e));
            // traversal after e: c[pos+1], ..., c[pos-1]; word reversed
            Word w;
            for (int i = k - 1; i >= 1; --i)
                w.push_back(c[(pos + i) % k]);
            g.push_back(w);
        }
        r.groups.push_back(g);
    }
    return r;
}

FlipRules rawFlipRules(const std::vector<NCPoly>& basis)
{
    FlipRules r;
    for (const auto& b : basis) {
        std::vector<Word> g;
        for (const auto& [p, c] : b.terms())
            g.push_back(p.arcs);
        if (g.size() >= 2)
            r.groups.push_back(g);
    }
    return r;
}

FtermClass ftermClass(const Path& p, const FlipRules& rules, int lengthCap, size_t memberCap)
{
    Bfs b = flipBfs(p.arcs, rules, std::max(lengthCap, int(p.size())), memberCap);
    FtermClass c;
    c.saturated = b.saturated;
    for (const auto& [w, par] : b.parent)
        c.members.insert(Path{p.src, p.tgt, w});
    c.representative = *c.members.begin();
    return c;
}

FtermClass ftermClass(const Path& p, const Dimer& d, int lengthCap)
{
    return ftermClass(p, dimerFlipRules(d), lengthCap);
}

Path JacobiContext::representative(const Path& p)
{
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = rep_.find(p);
        if (it != rep_.end())
            return it->second;
    }
    FtermClass c = ftermClass(p, rules_, cap_);
    if (!c.saturated)
        fail("jacobi", "CLASS_UNBOUNDED_SUSPECTED",
             "F-term class of a path of length " + std::to_string(p.size()) + " exceeds length cap " +
                 std::to_string(cap_));
    std::lock_guard<std::mutex> lk(mu_);
    for (const auto& m : c.members)
        rep_.emplace(m, c.representative);
    return c.representative;
}

JacobiElement JacobiContext::normalForm(const NCPoly& x)
{
    NCPoly out(x.quiver(), x.order());
    for (const auto& [p, c] : x.terms())
        out.addTerm(representative(p), c);
    return JacobiElement{out, true};
}

JacobiElement normalForm(const NCPoly& x, const Dimer& d, int lengthCap)
{
    JacobiContext ctx(d, lengthCap);
    return ctx.normalForm(x);
}

// ------------------------------------------------------------- crossings

bool isLFree(const Dimer& d, const Path& p)
{
    const Word& w = p.arcs;
    size_t n = w.size();
    bool closed = p.src == p.tgt;
    for (size_t f = 0; f < d.faces().size(); ++f) {
        Word fw = faceWord(d, int(f));
        size_t k = fw.size();
        if (k > n)
            continue;
        for (size_t r = 0; r < k; ++r) {
            Word rot(fw.begin() + r, fw.end());
            rot.insert(rot.end(), fw.begin(), fw.begin() + r);
            size_t starts = closed ? n : n - k + 1;
            for (size_t i = 0; i < starts; ++i) {
                bool ok = true;
                for (size_t j = 0; j < k && ok; ++j)
                    ok = w[(i + j) % n] == rot[j];
                if (ok)
                    return false;
            }
        }
    }
    return true;
}

int crossingCount(const Dimer& d, const Path& p, const ZigzagPath& z)
{
    if (p.src != p.tgt || p.arcs.empty())
        fail("jacobi", "NOT_LFREE", "crossing count needs a nonempty closed path");
    if (!isLFree(d, p))
        fail("jacobi", "NOT_LFREE", "path contains a face cycle");
    Word trav(p.arcs.rbegin(), p.arcs.rend());
    long n = long(trav.size()), m = long(z.steps.size());
    auto at = [&](long i) { return trav[((i % n) + n) % n]; };
    auto zat = [&](long j) { return z.steps[((j % m) + m) % m].arc; };
    const auto& arcs = d.arcs();
    int count = 0;
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < m; ++j) {
            if (at(i) != zat(j) || at(i - 1) == zat(j - 1))
                continue;
            long len = 1;
            while (len < n && at(i + len) == zat(j + len))
                ++len;
            if (len == n)
                continue;  // p runs along z entirely
            int b1 = at(i), bk = at(i + len - 1);
            int a = at(i - 1), c = at(i + len);
            int v = arcs[b1].tail, w = arcs[bk].head;
            bool entryLeft = ccwBetween(d.rotation()[v], {b1, false}, {zat(j - 1), true}, {a, true});
            bool exitLeft = ccwBetween(d.rotation()[w], {zat(j + len), false}, {bk, true}, {c, false});
            if (entryLeft != exitLeft)
                ++count;
        }
    }
    return count;
}

// ------------------------------------------------------------- matchings

std::vector<std::vector<int>> perfectMatchings(const Dimer& d)
{
    int na = int(d.arcs().size()), nf = int(d.faces().size());
    std::vector<std::vector<int>> facesOf(na);
    for (int f = 0; f < nf; ++f)
        for (int a : d.faces()[f].cycle)
            facesOf[a].push_back(f);
    // last arc index touching each face, to detect dead faces early
    std::vector<int> last(nf, -1);
    for (int a = 0; a < na; ++a)
        for (int f : facesOf[a])
            last[f] = std::max(last[f], a);
    std::vector<int> used(nf, 0), chosen;
    std::vector<std::vector<int>> out;
    std::function<void(int)> go = [&](int a) {
        if (a == na) {
            if (std::all_of(used.begin(), used.end(), [](int u) { return u == 1; }))
                out.push_back(chosen);
            return;
        }
        // skip a
        bool ok = true;
        for (int f : facesOf[a])
            if (last[f] == a && used[f] == 0)
                ok = false;
        if (ok)
            go(a + 1);
        // take a
        ok = true;
        for (int f : facesOf[a])
            if (used[f] > 0)
                ok = false;
        if (ok) {
            for (int f : facesOf[a])
                ++used[f];
            chosen.push_back(a);
            go(a + 1);
            chosen.pop_back();
            for (int f : facesOf[a])
                --used[f];
        }
    };
    if (nf > 0)
        go(0);
    return out;
}

// ------------------------------------------------------------ bounded type

std::string BoundedVerdict::str(const Quiver& q) const
{
    switch (kind) {
    case Certified:
        return "BOUNDED_CERTIFIED(" + reason + ")";
    case UpToCap:
        return "BOUNDED_UP_TO_CAP(" + reason + ")";
    case UnboundedSuspected: {
        std::string s = "UNBOUNDED_SUSPECTED(";
        for (size_t i = 0; i < witness.size(); ++i)
            s += (i ? " ~ " : "") + pathStr(q, witness[i]);
        return s + ")";
    }
    }
    return "";
}

namespace {

BoundedVerdict bfsVerdict(const std::vector<Path>& seeds, const FlipRules& rules, int cap)
{
    for (const auto& s : seeds) {
        size_t target = std::max<size_t>(2 * s.size(), s.size() + 1);
        Word hit;
        Bfs b = flipBfs(s.arcs, rules, cap, 200000, [&](const Word& w) {
            if (w.size() >= target) {
                hit = w;
                return true;
            }
            return false;
        });
        if (!hit.empty()) {
            BoundedVerdict v;
            v.kind = BoundedVerdict::UnboundedSuspected;
            v.reason = "class grows to twice the seed length";
            v.witness = chainTo(b, hit, s.src, s.tgt);
            return v;
        }
        if (!b.saturated) {
            BoundedVerdict v;
            v.kind = BoundedVerdict::UnboundedSuspected;
            v.reason = "class exceeds length cap";
            v.witness = {s};
            return v;
        }
    }
    BoundedVerdict v;
    v.kind = BoundedVerdict::UpToCap;
    v.reason = "all seed classes saturate below cap " + std::to_string(cap);
    return v;
}

}  // namespace

BoundedVerdict boundedTypeCheck(const Dimer& d, int lengthCap, bool cancellationConsistent)
{
    std::vector<std::string> reasons;
    const auto& faces = d.faces();
    bool equal = std::all_of(faces.begin(), faces.end(),
                             [&](const Face& f) { return f.cycle.size() == faces[0].cycle.size(); });
    if (equal)
        reasons.push_back("equal face lengths");
    if (cancellationConsistent && d.genus() == 1) {
        auto pm = perfectMatchings(d);
        std::vector<int> grade(d.arcs().size(), 0);
        for (const auto& m : pm)
            for (int a : m)
                ++grade[a];
        if (std::all_of(grade.begin(), grade.end(), [](int g) { return g > 0; }))
            reasons.push_back("torus grading");
    }
    if (cancellationConsistent && d.genus() >= 1 &&
        std::all_of(faces.begin(), faces.end(), [](const Face& f) { return f.cycle.size() >= 4; }))
        reasons.push_back("no triangles");
    if (!reasons.empty()) {
        BoundedVerdict v;
        v.kind = BoundedVerdict::Certified;
        for (size_t i = 0; i < reasons.size(); ++i)
            v.reason += (i ? ", " : "") + reasons[i];
        return v;
    }
    auto q = d.quiver();
    std::vector<Path> seeds;
    for (size_t f = 0; f < faces.size(); ++f) {
        Word w = faceWord(d, int(f));
        for (size_t r = 0; r < w.size(); ++r)
            seeds.push_back(rotateLeft(*q, makePath(*q, w), r));
    }
    return bfsVerdict(seeds, dimerFlipRules(d), lengthCap);
}

BoundedVerdict boundedTypeCheckRaw(const std::vector<NCPoly>& basis, int lengthCap)
{
    std::vector<Path> seeds;
    for (const auto& b : basis)
        for (const auto& [p, c] : b.terms())
            if (std::find(seeds.begin(), seeds.end(), p) == seeds.end())
                seeds.push_back(p);
    std::sort(seeds.begin(), seeds.end());
    return bfsVerdict(seeds, rawFlipRules(basis), lengthCap);
}

int defaultLengthCap(const Dimer& d, int qOrder)
{
    return 3 * d.maxFaceLength() * (qOrder + 1);
}

// -------------------------------------------------------- linear algebra

namespace {

using Key = std::pair<Monomial, Path>;

struct KeyLess {
    bool operator()(const Key& a, const Key& b) const
    {
        if (a.first != b.first)
            return monoLess(a.first, b.first);
        return a.second < b.second;
    }
};

using Vec = std::map<int, mpq_class>;

// Incremental row echelon form with combination tracking. Columns are
// interned keys; any fixed column order works for span membership.
class Echelon {
public:
    int column(const Key& k)
    {
        auto [it, fresh] = ids_.emplace(k, int(keys_.size()));
        if (fresh)
            keys_.push_back(k);
        return it->second;
    }
    const Key& key(int c) const { return keys_[c]; }

    Vec vec(const NCPoly& x, const Monomial& shift, int order)
    {
        Vec v;
        for (const auto& [p, s] : x.terms())
            for (const auto& [m, c] : s.terms()) {
                Monomial mm = monoMul(m, shift);
                if (int(mm.size()) > order)
                    continue;
                v[column({mm, p})] += c;
            }
        for (auto it = v.begin(); it != v.end();)
            it = it->second == 0 ? v.erase(it) : std::next(it);
        return v;
    }

    // reduces v (and its combination) by leading terms; true if v became zero
    bool reduce(Vec& v, Vec& combo) const
    {
        while (!v.empty()) {
            int lead = v.begin()->first;
            auto it = pivot_.find(lead);
            if (it == pivot_.end())
                return false;
            const auto& [row, rc] = rows_[it->second];
            mpq_class f = v.begin()->second;
            axpy(v, row, -f);
            axpy(combo, rc, -f);
        }
        return true;
    }

    // inserts v; returns true if it was independent
    bool insert(Vec v, Vec combo)
    {
        if (reduce(v, combo))
            return false;
        mpq_class inv = 1 / v.begin()->second;
        for (auto& [c, x] : v)
            x *= inv;
        for (auto& [c, x] : combo)
            x *= inv;
        pivot_[v.begin()->first] = rows_.size();
        rows_.emplace_back(std::move(v), std::move(combo));
        return true;
    }

    static void axpy(Vec& y, const Vec& x, const mpq_class& f)
    {
        for (const auto& [c, a] : x) {
            auto [it, fresh] = y.emplace(c, 0);
            it->second += f * a;
            if (it->second == 0)
                y.erase(it);
        }
    }

private:
    std::map<Key, int, KeyLess> ids_;
    std::vector<Key> keys_;
    std::unordered_map<int, size_t> pivot_;
    std::vector<std::pair<Vec, Vec>> rows_;
};

std::vector<Path> pathsUpTo(const Quiver& q, int len)
{
    std::vector<Path> out;
    for (size_t v = 0; v < q.vertices.size(); ++v)
        out.push_back(idPath(int(v)));
    size_t begin = 0;
    for (int l = 1; l <= len; ++l) {
        size_t end = out.size();
        for (size_t i = begin; i < end; ++i)
            for (size_t a = 0; a < q.arrows.size(); ++a)
                if (q.tail[a] == out[i].tgt) {
                    Path p = out[i];
                    p.arcs.insert(p.arcs.begin(), int(a));
                    p.tgt = q.head[a];
                    out.push_back(p);
                }
        begin = end;
    }
    return out;
}

std::vector<Monomial> monomialsUpTo(int nvars, int deg)
{
    std::vector<Monomial> out{{}};
    size_t begin = 0;
    for (int d = 1; d <= deg; ++d) {
        size_t end = out.size();
        for (size_t i = begin; i < end; ++i) {
            int from = out[i].empty() ? 0 : out[i].back();
            for (int v = from; v < nvars; ++v) {
                Monomial m = out[i];
                m.push_back(v);
                out.push_back(m);
            }
        }
        begin = end;
    }
    return out;
}

struct Generator {
    Monomial mono;
    Path left, right;
    int relation;
    NCPoly value;  // p * r * s, coefficient-free of mono
};

int maxLen(const NCPoly& x)
{
    int m = 0;
    for (const auto& [p, c] : x.terms())
        m = std::max(m, int(p.size()));
    return m;
}

// p * r * s for all paths within the length cap
std::vector<Generator> pathMultiples(const std::vector<NCPoly>& rels, int qOrder, int lengthCap,
                                     const std::function<bool(const Path&)>& keepTerm)
{
    std::vector<Generator> out;
    if (rels.empty())
        return out;
    const QuiverPtr& q = rels[0].quiver();
    auto paths = pathsUpTo(*q, lengthCap);
    for (size_t r = 0; r < rels.size(); ++r) {
        const NCPoly& rel = rels[r].truncated(qOrder);
        if (rel.isZero())
            continue;
        int room = lengthCap - maxLen(rel);
        std::vector<Path> ends;
        for (const auto& [p, c] : rel.terms())
            ends.push_back(p);
        for (const auto& left : paths) {
            if (int(left.size()) > room)
                break;
            bool lok = std::any_of(ends.begin(), ends.end(), [&](const Path& e) { return composable(left, e); });
            if (!lok)
                continue;
            for (const auto& right : paths) {
                if (int(left.size() + right.size()) > room)
                    break;
                NCPoly l = NCPoly::of(q, left, qOrder), s = NCPoly::of(q, right, qOrder);
                NCPoly v = l * rel * s;
                if (v.isZero())
                    continue;
                bool keep = false;
                for (const auto& [p, c] : v.terms())
                    keep = keep || keepTerm(p);
                if (keep)
                    out.push_back({{}, left, right, int(r), std::move(v)});
            }
        }
    }
    return out;
}

}  // namespace

std::string MembershipVerdict::str(const Quiver& q) const
{
    if (!member)
        return "NOT_MEMBER_UP_TO_CAPS";
    std::string s = "MEMBER(";
    for (size_t i = 0; i < combination.size(); ++i) {
        const auto& t = combination[i];
        if (i)
            s += " ";
        s += (t.coeff >= 0 ? "+" : "") + t.coeff.get_str();
        if (!t.mono.empty())
            s += "*" + monoStr(q, t.mono);
        s += "*" + pathStr(q, t.left) + "*r" + std::to_string(t.relation) + "*" + pathStr(q, t.right);
    }
    return s + ")";
}

NCPoly evaluateCombination(const std::vector<IdealTerm>& c, const std::vector<NCPoly>& relations, int qOrder)
{
    if (relations.empty())
        return NCPoly();
    const QuiverPtr& q = relations[0].quiver();
    NCPoly sum(q, qOrder);
    for (const auto& t : c) {
        NCPoly l = NCPoly::of(q, t.left, DefSeries::mono(t.mono, t.coeff, qOrder));
        NCPoly s = NCPoly::of(q, t.right, qOrder);
        sum += l * relations[t.relation].truncated(qOrder) * s;
    }
    return sum;
}

MembershipVerdict idealMembershipTruncated(const NCPoly& x, const std::vector<NCPoly>& relations,
                                           int qOrder, int lengthCap)
{
    MembershipVerdict v;
    NCPoly xt = x.truncated(qOrder);
    if (xt.isZero()) {
        v.member = true;
        return v;
    }
    if (relations.empty())
        return v;
    // restrict to the (source, target) components present in x when every
    // relation is homogeneous for them
    std::set<std::pair<int, int>> comps;
    for (const auto& [p, c] : xt.terms())
        comps.insert({p.src, p.tgt});
    bool homog = true;
    for (const auto& r : relations) {
        std::set<std::pair<int, int>> rc;
        for (const auto& [p, c] : r.terms())
            rc.insert({p.src, p.tgt});
        homog = homog && rc.size() <= 1;
    }
    auto keep = [&](const Path& p) { return !homog || comps.count({p.src, p.tgt}) > 0; };
    auto gens = pathMultiples(relations, qOrder, lengthCap, keep);
    int nvars = int(xt.quiver()->vars.size());
    auto monos = monomialsUpTo(nvars, qOrder);

    Echelon ech;
    std::vector<std::pair<size_t, size_t>> index;  // (generator, monomial)
    for (size_t g = 0; g < gens.size(); ++g) {
        for (size_t m = 0; m < monos.size(); ++m) {
            Vec row = ech.vec(gens[g].value, monos[m], qOrder);
            if (row.empty())
                continue;
            Vec combo{{int(index.size()), 1}};
            index.push_back({g, m});
            ech.insert(std::move(row), std::move(combo));
        }
    }
    v.generators = index.size();
    Vec target = ech.vec(xt, {}, qOrder), combo;
    if (!ech.reduce(target, combo))
        return v;
    v.member = true;
    for (const auto& [i, c] : combo) {
        const auto& [g, m] = index[i];
        v.combination.push_back({-c, monos[m], gens[g].left, gens[g].relation, gens[g].right});
    }
    return v;
}

std::string FlatnessVerdict::str() const
{
    return quasiFlat ? "QUASI_FLAT" : "VIOLATION(" + witness.str() + ")";
}

FlatnessVerdict quasiFlatCheckTruncated(const std::vector<NCPoly>& relations, int qOrder, int lengthCap)
{
    FlatnessVerdict out;
    if (relations.empty())
        return out;
    const QuiverPtr& q = relations[0].quiver();
    auto gens = pathMultiples(relations, qOrder, lengthCap, [](const Path&) { return true; });
    auto monos = monomialsUpTo(int(q->vars.size()), qOrder);

    // span of generators with a multiplier of degree >= 1
    Echelon high;
    for (const auto& g : gens)
        for (const auto& m : monos) {
            if (m.empty())
                continue;
            Vec row = high.vec(g.value, m, qOrder);
            if (!row.empty())
                high.insert(std::move(row), {});
        }

    // kernel of the q=0 projection on the degree-0 generators
    Echelon low;
    for (size_t g = 0; g < gens.size(); ++g) {
        Vec row = low.vec(gens[g].value.qZero(), {}, 0);
        Vec combo{{int(g), 1}};
        if (!low.reduce(row, combo)) {
            low.insert(std::move(row), std::move(combo));
            continue;
        }
        // combo is a kernel element: sum combo_i * gens_i lies in m*X
        NCPoly k(q, qOrder);
        for (const auto& [i, c] : combo)
            k += gens[i].value.scaled(c);
        if (k.isZero())
            continue;
        Vec kv = high.vec(k, {}, qOrder), dummy;
        if (!high.reduce(kv, dummy)) {
            out.quasiFlat = false;
            out.witness = k;
            return out;
        }
    }
    return out;
}

}  // namespace dm
