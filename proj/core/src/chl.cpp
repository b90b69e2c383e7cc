#include "dimer_mirror/chl.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "dimer_mirror/error.hpp"
#include "dimer_mirror/jacobi.hpp"

namespace dm {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w)
        out.push_back(w);
    return out;
}

[[noreturn]] void invalid(const std::string& detail) { fail("chl", "TABLE_INVALID", detail); }
[[noreturn]] void parseError(const std::string& detail) { fail("chl", "PARSE_ERROR", detail); }

void addTo(ChlCombination& c, ChlLabel l, const DefSeries& s)
{
    if (s.isZero())
        return;
    auto it = c.emplace(l, DefSeries(s.order())).first;
    it->second += s;
    if (it->second.isZero())
        c.erase(it);
}

std::string labelStr(const ProductTable& t, ChlLabel l)
{
    switch (l.kind) {
    case ChlKind::Y: return "Y_" + t.odd[l.index].name;
    case ChlKind::Id: return "id_" + t.objects[l.index];
    case ChlKind::IdStar: return "id*_" + t.objects[l.index];
    case ChlKind::Module: return t.modules[l.index].name;
    }
    return "";
}

std::string wordStr(const ProductTable& t, const std::vector<int>& w)
{
    std::string out;
    for (int e : w)
        out += " X_" + t.odd[e].name;
    return out;
}

std::string combinationStr(const ProductTable& t, const ChlCombination& c)
{
    std::string out;
    for (auto& [l, s] : c) {
        if (!out.empty())
            out += " + ";
        out += "(" + s.str(t.vars) + ")*" + labelStr(t, l);
    }
    return out.empty() ? "0" : out;
}

// head of the word (where it ends) and tail (where it starts)
int wordHead(const ProductTable& t, const std::vector<int>& w) { return t.odd[w.front()].tgt; }
int wordTail(const ProductTable& t, const std::vector<int>& w) { return t.odd[w.back()].src; }

void checkWord(const ProductTable& t, const std::vector<int>& w)
{
    for (int e : w)
        if (e < 0 || e >= int(t.odd.size()))
            invalid("word refers to an unknown odd element");
    for (size_t i = 0; i + 1 < w.size(); ++i)
        if (t.odd[w[i]].src != t.odd[w[i + 1]].tgt)
            invalid("X_" + t.odd[w[i + 1]].name + " does not end where X_" + t.odd[w[i]].name + " starts");
}

Path wordPath(const Quiver& q, const std::vector<int>& w, int vertex)
{
    return w.empty() ? idPath(vertex) : makePath(q, w);
}

}  // namespace

int ProductTable::object(const std::string& name) const
{
    auto it = std::find(objects.begin(), objects.end(), name);
    return it == objects.end() ? -1 : int(it - objects.begin());
}

int ProductTable::oddIndex(const std::string& name) const
{
    for (size_t i = 0; i < odd.size(); ++i)
        if (odd[i].name == name)
            return int(i);
    return -1;
}

int ProductTable::module(const std::string& name) const
{
    for (size_t i = 0; i < modules.size(); ++i)
        if (modules[i].name == name)
            return int(i);
    return -1;
}

void ProductTable::addMu(const std::vector<int>& word, ChlLabel out, const DefSeries& c)
{
    auto& comb = mu[word];
    addTo(comb, out, c);
    if (comb.empty())
        mu.erase(word);
}

void ProductTable::addMod(int element, const std::vector<int>& word, int outElement, const DefSeries& c)
{
    auto key = std::make_pair(element, word);
    auto& comb = mod[key];
    addTo(comb, {ChlKind::Module, outElement}, c);
    if (comb.empty())
        mod.erase(key);
}

void ProductTable::validate() const
{
    for (size_t i = 0; i < odd.size(); ++i) {
        if (odd[i].src < 0 || odd[i].src >= int(objects.size()) || odd[i].tgt < 0 ||
            odd[i].tgt >= int(objects.size()))
            invalid("X_" + odd[i].name + " has an unknown endpoint");
        if (i && !(odd[i - 1].name < odd[i].name))
            invalid("odd basis must be sorted by name without repeats");
    }
    for (const auto& me : modules)
        if (me.object < 0 || me.object >= int(objects.size()))
            invalid("module element " + me.name + " sits at an unknown object");
    for (auto& [w, comb] : mu) {
        checkWord(*this, w);
        for (auto& [l, s] : comb) {
            bool ok = true;
            if (l.kind == ChlKind::Y) {
                ok = l.index >= 0 && l.index < int(odd.size()) &&
                     (w.empty() ? odd[l.index].src == odd[l.index].tgt
                                : odd[l.index].src == wordHead(*this, w) && odd[l.index].tgt == wordTail(*this, w));
            } else if (l.kind == ChlKind::Id || l.kind == ChlKind::IdStar) {
                ok = l.index >= 0 && l.index < int(objects.size()) &&
                     (w.empty() || (wordHead(*this, w) == l.index && wordTail(*this, w) == l.index));
            } else {
                ok = false;
            }
            if (!ok)
                invalid("mu:" + wordStr(*this, w) + " has an output " + labelStr(*this, l) +
                        " with the wrong endpoints");
        }
    }
    for (auto& [key, comb] : mod) {
        auto& [el, w] = key;
        if (el < 0 || el >= int(modules.size()))
            invalid("module product on an unknown element");
        checkWord(*this, w);
        for (auto& [l, s] : comb) {
            if (l.kind != ChlKind::Module || l.index < 0 || l.index >= int(modules.size()))
                invalid("module product of " + modules[el].name + " must land on module elements");
            int in = modules[el].object, out = modules[l.index].object;
            bool ok = w.empty() ? in == out : (wordTail(*this, w) == out && wordHead(*this, w) == in);
            if (!ok)
                invalid("mod " + modules[el].name + ":" + wordStr(*this, w) + " does not fit " +
                        modules[l.index].name);
        }
    }
}

std::string ProductTable::str() const
{
    std::ostringstream out;
    out << "objects:";
    for (auto& o : objects)
        out << " " << o;
    out << "\nvars:";
    for (auto& v : vars)
        out << " " << v;
    out << "\ncaps: arity " << arityCap << " order " << qOrderCap << "\n";
    for (auto& x : odd)
        out << "odd: " << x.name << " " << objects[x.src] << " " << objects[x.tgt] << "\n";
    for (auto& me : modules) {
        out << "module: " << me.name << " " << objects[me.object] << " " << (me.odd ? "odd" : "even");
        if (me.arc >= 0)
            out << " " << odd[me.arc].name;
        out << "\n";
    }
    for (auto& [w, comb] : mu)
        out << "mu:" << wordStr(*this, w) << " -> " << combinationStr(*this, comb) << "\n";
    for (auto& [key, comb] : mod)
        out << "mod " << modules[key.first].name << ":" << wordStr(*this, key.second) << " -> "
            << combinationStr(*this, comb) << "\n";
    return out.str();
}

ProductTable parseProductTable(const std::string& text)
{
    ProductTable t;
    std::istringstream in(text);
    std::string line;
    std::vector<std::tuple<std::string, std::string, std::string>> oddRaw;
    std::vector<std::vector<std::string>> moduleRaw;
    std::vector<std::string> productLines;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            parseError("missing ':' in " + line);
        std::string key = line.substr(0, colon), rest = line.substr(colon + 1);
        auto ws = words(rest);
        if (key == "objects") {
            t.objects = ws;
        } else if (key == "vars") {
            t.vars = ws;
        } else if (key == "caps") {
            if (ws.size() != 4 || ws[0] != "arity" || ws[2] != "order")
                parseError("caps line must read 'caps: arity A order N'");
            t.arityCap = std::stoi(ws[1]);
            t.qOrderCap = std::stoi(ws[3]);
        } else if (key == "odd") {
            if (ws.size() != 3)
                parseError("odd line must read 'odd: name src tgt'");
            oddRaw.emplace_back(ws[0], ws[1], ws[2]);
        } else if (key == "module") {
            if (ws.size() != 3 && ws.size() != 4)
                parseError("module line must read 'module: name object odd|even [arc]'");
            moduleRaw.push_back(ws);
        } else if (key == "mu" || key.rfind("mod ", 0) == 0) {
            productLines.push_back(line);
        } else {
            parseError("unknown key " + key);
        }
    }
    std::sort(oddRaw.begin(), oddRaw.end());
    for (auto& [name, s, g] : oddRaw) {
        int si = t.object(s), ti = t.object(g);
        if (si < 0 || ti < 0)
            parseError("odd element " + name + " has an unknown endpoint");
        t.odd.push_back({name, si, ti});
    }
    for (auto& ws : moduleRaw) {
        ChlModuleElement me;
        me.name = ws[0];
        me.object = t.object(ws[1]);
        if (me.object < 0)
            parseError("module element " + ws[0] + " sits at an unknown object");
        if (ws[2] != "odd" && ws[2] != "even")
            parseError("module parity must be odd or even");
        me.odd = ws[2] == "odd";
        if (ws.size() == 4 && (me.arc = t.oddIndex(ws[3])) < 0)
            parseError("unknown odd element " + ws[3]);
        t.modules.push_back(me);
    }
    Quiver vq;
    vq.vars = t.vars;
    for (auto& pl : productLines) {
        auto colon = pl.find(':');
        std::string key = pl.substr(0, colon), rest = pl.substr(colon + 1);
        auto arrow = rest.find("->");
        if (arrow == std::string::npos)
            parseError("missing '->' in " + pl);
        std::vector<int> w;
        for (auto& x : words(rest.substr(0, arrow))) {
            if (x.rfind("X_", 0) != 0 || t.oddIndex(x.substr(2)) < 0)
                parseError("unknown input " + x);
            w.push_back(t.oddIndex(x.substr(2)));
        }
        int element = -1;
        if (key != "mu") {
            element = t.module(trim(key.substr(4)));
            if (element < 0)
                parseError("unknown module element in " + key);
        }
        std::string rhs = trim(rest.substr(arrow + 2));
        size_t pos = 0;
        while (rhs != "0" && pos < rhs.size()) {
            while (pos < rhs.size() && (rhs[pos] == ' ' || rhs[pos] == '+'))
                ++pos;
            if (pos >= rhs.size())
                break;
            if (rhs[pos] != '(')
                parseError("coefficients must be parenthesised: " + rhs);
            auto close = rhs.find(')', pos);
            if (close == std::string::npos || close + 1 >= rhs.size() || rhs[close + 1] != '*')
                parseError("expected ')*label' in " + rhs);
            DefSeries c = parseDefSeries(vq, rhs.substr(pos + 1, close - pos - 1), t.qOrderCap);
            auto end = rhs.find(' ', close);
            std::string lab = rhs.substr(close + 2, end == std::string::npos ? std::string::npos : end - close - 2);
            pos = end == std::string::npos ? rhs.size() : end;
            if (element >= 0) {
                int o = t.module(lab);
                if (o < 0)
                    parseError("unknown module element " + lab);
                t.addMod(element, w, o, c);
                continue;
            }
            ChlLabel l;
            if (lab.rfind("Y_", 0) == 0) {
                l = {ChlKind::Y, t.oddIndex(lab.substr(2))};
            } else if (lab.rfind("id*_", 0) == 0) {
                l = {ChlKind::IdStar, t.object(lab.substr(4))};
            } else if (lab.rfind("id_", 0) == 0) {
                l = {ChlKind::Id, t.object(lab.substr(3))};
            } else {
                parseError("unknown output label " + lab);
            }
            if (l.index < 0)
                parseError("unknown output label " + lab);
            t.addMu(w, l, c);
        }
    }
    t.validate();
    return t;
}

ProductTable productTableFromDisks(const Mirror& m, const std::vector<MidpointPolygon>& polys,
                                   const IdentityChoice& ids, int N)
{
    const Quiver& q = *m.quiver;
    ProductTable t;
    t.objects = q.vertices;
    t.vars = q.vars;
    t.qOrderCap = N;
    for (size_t e = 0; e < q.arrows.size(); ++e)
        t.odd.push_back({q.arrows[e], q.tail[e], q.head[e]});

    std::set<std::vector<int>> words;
    std::vector<std::set<std::vector<int>>> modWords(q.arrows.size());
    for (const auto& p : polys) {
        if (int(p.punc.size()) > N)
            continue;
        auto aw = p.arcsWord();
        words.insert(aw);
        words.insert(std::vector<int>(aw.begin() + 1, aw.end()));
        if (p.clockwise)
            modWords[p.corners.back()].insert(std::vector<int>(p.corners.rbegin() + 1, p.corners.rend()));
    }
    for (const auto& w : words) {
        for (auto& [l, s] : hlOddProduct(m, polys, ids, w, N))
            t.addMu(w, {l.kind == 0 ? ChlKind::Y : ChlKind::Id, l.index}, s);
        t.arityCap = std::max(t.arityCap, int(w.size()));
    }
    for (size_t a = 0; a < q.arrows.size(); ++a) {
        int odd = int(t.modules.size());
        t.modules.push_back({"m_" + q.arrows[a], m.tailOf(int(a)), true, int(a)});
        t.modules.push_back({"m_" + q.arrows[a] + "*", m.headOf(int(a)), false, int(a)});
        for (const auto& w : modWords[a])
            t.addMod(odd, w, odd + 1, mdProduct(m, polys, int(a), true, w, N));
        std::vector<int> single{int(a)};
        t.addMod(odd + 1, single, odd, mdProduct(m, polys, int(a), false, single, N));
    }
    t.validate();
    return t;
}

ProductTable productTableFromDisks(const Mirror& m, const IdentityChoice& ids, int N)
{
    return productTableFromDisks(m, enumerateMidpointPolygons(m.q, N), ids, N);
}

QuiverPtr chlQuiver(const ProductTable& t)
{
    std::vector<std::tuple<std::string, std::string, std::string>> arrows;
    for (auto& x : t.odd)
        arrows.emplace_back(x.name, t.objects[x.src], t.objects[x.tgt]);
    return makeQuiver(t.objects, arrows, t.vars);
}

void checkCyclic(const ProductTable& t)
{
    auto coeff = [&](const std::vector<int>& w, int f) {
        auto it = t.mu.find(w);
        if (it == t.mu.end())
            return DefSeries(t.qOrderCap);
        auto jt = it->second.find({ChlKind::Y, f});
        return jt == it->second.end() ? DefSeries(t.qOrderCap) : jt->second;
    };
    for (auto& [w, comb] : t.mu)
        for (auto& [l, s] : comb) {
            if (l.kind != ChlKind::Y || w.empty())
                continue;
            // cycle f w = [f, e_k, ..., e_1]; rotate e_1 to the front
            std::vector<int> rot{l.index};
            rot.insert(rot.end(), w.begin(), w.end() - 1);
            if (!(coeff(rot, w.back()) == s))
                fail("chl", "CYCLICITY_VIOLATION",
                     "<mu(" + wordStr(t, w) + " ), X_" + t.odd[l.index].name + "> differs from its rotation");
        }
}

NCPoly chlSuperpotential(const ProductTable& t) { return chlSuperpotential(t, chlQuiver(t)); }

NCPoly chlSuperpotential(const ProductTable& t, const QuiverPtr& q)
{
    checkCyclic(t);
    NCPoly w(q, t.qOrderCap);
    for (auto& [word, comb] : t.mu)
        for (auto& [l, s] : comb) {
            if (l.kind != ChlKind::Y)
                continue;
            std::vector<int> cyc{l.index};
            cyc.insert(cyc.end(), word.begin(), word.end());
            w.addTerm(makePath(*q, cyc), s);
        }
    if (!isCyclic(w))
        fail("chl", "CYCLICITY_VIOLATION", "assembled superpotential is not cyclic");
    return w;
}

ChlRelations chlRelationsAndPotential(const ProductTable& t) { return chlRelationsAndPotential(t, chlQuiver(t)); }

ChlRelations chlRelationsAndPotential(const ProductTable& t, const QuiverPtr& q)
{
    ChlRelations r;
    r.potential = NCPoly(q, t.qOrderCap);
    r.relations.assign(t.odd.size(), NCPoly(q, t.qOrderCap));
    for (auto& [word, comb] : t.mu)
        for (auto& [l, s] : comb) {
            if (l.kind == ChlKind::Y)
                r.relations[l.index].addTerm(wordPath(*q, word, t.odd[l.index].tgt), s);
            else if (l.kind == ChlKind::Id)
                r.potential.addTerm(wordPath(*q, word, l.index), s);
        }
    NCPoly w;
    try {
        w = chlSuperpotential(t, q);
    } catch (const Error& e) {
        fail("chl", "RELATION_MISMATCH", e.what());
    }
    for (size_t e = 0; e < t.odd.size(); ++e)
        if (!(cyclicDerivative(w, int(e)) == r.relations[e]))
            fail("chl", "RELATION_MISMATCH", "Y_" + t.odd[e].name + " coefficients differ from the derivative of W");
    return r;
}

MatrixFactorization chlMirrorObject(const ProductTable& t, int oddElement, int evenElement)
{
    return chlMirrorObject(t, chlQuiver(t), oddElement, evenElement);
}

MatrixFactorization chlMirrorObject(const ProductTable& t, const QuiverPtr& q, int oddElement, int evenElement)
{
    int nm = int(t.modules.size());
    if (oddElement < 0 || oddElement >= nm || evenElement < 0 || evenElement >= nm ||
        !t.modules[oddElement].odd || t.modules[evenElement].odd)
        fail("chl", "TABLE_INVALID", "mirror object needs an odd and an even module element");
    int N = t.qOrderCap;
    MatrixFactorization mf;
    mf.arc = std::max(0, t.modules[oddElement].arc);
    mf.oddModule = t.modules[oddElement].object;
    mf.evenModule = t.modules[evenElement].object;
    mf.f = NCPoly(q, N);
    mf.g = NCPoly(q, N);
    // delta(m) = (-1)^(|m|+1) mu(m, b, ..., b): the even element picks up a sign
    for (auto& [key, comb] : t.mod) {
        auto& [el, w] = key;
        if (el != oddElement && el != evenElement)
            continue;
        int target = el == oddElement ? evenElement : oddElement;
        for (auto& [l, s] : comb) {
            if (l.index != target)
                continue;
            Path p = wordPath(*q, w, t.modules[el].object);
            if (el == oddElement)
                mf.g.addTerm(p, s);
            else
                mf.f.addTerm(p, -s);
        }
    }
    ChlRelations rel = chlRelationsAndPotential(t, q);
    NCPoly ce = rel.potential * NCPoly::of(q, idPath(mf.evenModule), N) - mf.f * mf.g;
    NCPoly co = rel.potential * NCPoly::of(q, idPath(mf.oddModule), N) - mf.g * mf.f;
    std::vector<NCPoly> classical;
    for (auto& r : rel.relations)
        classical.push_back(r.qZero());
    for (NCPoly* c : {&ce, &co}) {
        NCPoly zero = c->qZero();
        if (!zero.isZero()) {
            int cap = 0;
            for (auto& [p, s] : zero.terms())
                cap = std::max(cap, int(p.size()));
            if (!idealMembershipTruncated(zero, classical, 0, cap).member)
                fail("chl", "CURVATURE_NOT_INFINITESIMAL",
                     "order-0 defect " + zero.str() + " for " + t.modules[oddElement].name);
        }
        *c -= zero;
    }
    mf.curvatureEven = ce;
    mf.curvatureOdd = co;
    return mf;
}

MatrixFactorization chlMirrorObject(const ProductTable& t, const std::string& oddElement)
{
    int o = t.module(oddElement), e = t.module(oddElement + "*");
    if (o < 0 || e < 0)
        fail("chl", "TABLE_INVALID", "no module pair " + oddElement + " / " + oddElement + "*");
    return chlMirrorObject(t, o, e);
}

std::vector<GrowthRow> slowGrowthAudit(const ProductTable& t)
{
    std::map<int, GrowthRow> rows;
    for (auto& [w, comb] : t.mu) {
        auto& r = rows[int(w.size())];
        r.arity = int(w.size());
        ++r.entries;
        for (auto& [l, s] : comb) {
            int d = s.lowestDegree();
            if (d >= 0 && (r.minDegree < 0 || d < r.minDegree))
                r.minDegree = d;
        }
    }
    std::vector<GrowthRow> out;
    for (auto& [k, r] : rows)
        out.push_back(r);
    return out;
}

}  // namespace dm
