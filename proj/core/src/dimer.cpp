#include "dimer_mirror/dimer.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dimer_mirror/error.hpp"

namespace dm {

namespace {

const char* kSphere3 = R"(# three-punctured sphere; punctures named after the opposite arc
punctures: a b c
arc a c b
arc b a c
arc c b a
rot b: a.h c.t
rot a: c.h b.t
rot c: b.h a.t
)";

// four-punctured torus, two clockwise and two counterclockwise squares
const char* kTorus4 = R"(punctures: 1 2 3 4
arc a1 1 2
arc a2 1 2
arc a3 4 3
arc a4 4 3
arc b1 3 1
arc b2 2 4
arc b3 3 1
arc b4 2 4
rot 1: b1.h a2.t b3.h a1.t
rot 2: a2.h b2.t a1.h b4.t
rot 3: a4.h b1.t a3.h b3.t
rot 4: b2.h a4.t b4.h a3.t
)";

std::string trim(const std::string& s)
{
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<int> minRotation(const std::vector<Step>& s)
{
    // returns the start index of the lexicographically minimal rotation
    size_t n = s.size();
    size_t best = 0;
    for (size_t k = 1; k < n; ++k) {
        for (size_t i = 0; i < n; ++i) {
            const Step& x = s[(k + i) % n];
            const Step& y = s[(best + i) % n];
            if (x == y)
                continue;
            if (x < y)
                best = k;
            break;
        }
    }
    return {int(best)};
}

}  // namespace

int ZigzagPath::indexOf(Step s) const
{
    for (size_t i = 0; i < steps.size(); ++i)
        if (steps[i] == s)
            return int(i);
    return -1;
}

int Dimer::puncture(const std::string& id) const
{
    auto it = std::find(punctures_.begin(), punctures_.end(), id);
    return it == punctures_.end() ? -1 : int(it - punctures_.begin());
}

int Dimer::arc(const std::string& id) const
{
    for (size_t i = 0; i < arcs_.size(); ++i)
        if (arcs_[i].id == id)
            return int(i);
    return -1;
}

int Dimer::positionInFace(int face, int a) const
{
    const auto& c = faces_[face].cycle;
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i] == a)
            return int(i);
    return -1;
}

int Dimer::eulerCharacteristic() const
{
    return int(punctures_.size()) - int(arcs_.size()) + int(faces_.size());
}

int Dimer::maxFaceLength() const
{
    size_t m = 0;
    for (auto& f : faces_)
        m = std::max(m, f.cycle.size());
    return int(m);
}

int Dimer::maxDegree() const
{
    size_t m = 0;
    for (auto& r : rotation_)
        m = std::max(m, r.size());
    return int(m);
}

int Dimer::nextInFace(int a, bool clockwise) const
{
    int f = clockwise ? cwFace_[a] : ccwFace_[a];
    const auto& c = faces_[f].cycle;
    int i = positionInFace(f, a);
    return c[(i + 1) % c.size()];
}

int Dimer::prevInFace(int a, bool clockwise) const
{
    int f = clockwise ? cwFace_[a] : ccwFace_[a];
    const auto& c = faces_[f].cycle;
    int i = positionInFace(f, a);
    return c[(i + c.size() - 1) % c.size()];
}

Step Dimer::next(Step s) const
{
    return {nextInFace(s.arc, s.turn == Turn::Right), flip(s.turn)};
}

Step Dimer::prev(Step s) const
{
    // the predecessor turned the opposite way and shares that face with us
    Turn t = flip(s.turn);
    return {prevInFace(s.arc, t == Turn::Right), t};
}

std::vector<std::string> Dimer::varNames() const
{
    std::vector<std::string> v;
    for (auto& p : punctures_)
        v.push_back("q" + p);
    return v;
}

QuiverPtr Dimer::quiver() const
{
    std::vector<std::tuple<std::string, std::string, std::string>> a;
    for (auto& x : arcs_)
        a.emplace_back(x.id, punctures_[x.tail], punctures_[x.head]);
    return makeQuiver(punctures_, a, varNames());
}

std::string Dimer::serialize() const
{
    std::ostringstream out;
    out << "punctures:";
    for (auto& p : punctures_)
        out << " " << p;
    out << "\n";
    for (auto& a : arcs_)
        out << "arc " << a.id << " " << punctures_[a.tail] << " " << punctures_[a.head] << "\n";
    for (size_t v = 0; v < punctures_.size(); ++v) {
        out << "rot " << punctures_[v] << ":";
        for (auto& e : rotation_[v])
            out << " " << arcs_[e.arc].id << (e.head ? ".h" : ".t");
        out << "\n";
    }
    return out.str();
}

void Dimer::derive()
{
    const int nv = int(punctures_.size());
    const int na = int(arcs_.size());
    if (rotation_.size() != size_t(nv))
        fail("dimer", "MALFORMED_ROTATION", "rotation count differs from puncture count");

    // position of every arc end in its rotation
    std::vector<std::array<int, 2>> pos(na, {-1, -1});
    for (int v = 0; v < nv; ++v) {
        for (size_t i = 0; i < rotation_[v].size(); ++i) {
            const ArcEnd& e = rotation_[v][i];
            if (e.arc < 0 || e.arc >= na)
                fail("dimer", "MALFORMED_ROTATION", "unknown arc in rotation of " + punctures_[v]);
            const Arc& a = arcs_[e.arc];
            int at = e.head ? a.head : a.tail;
            if (at != v)
                fail("dimer", "MALFORMED_ROTATION",
                     a.id + (e.head ? ".h" : ".t") + " listed at " + punctures_[v] +
                         " but belongs to " + punctures_[at]);
            int& slot = pos[e.arc][e.head ? 1 : 0];
            if (slot >= 0)
                fail("dimer", "MALFORMED_ROTATION",
                     a.id + (e.head ? ".h" : ".t") + " appears twice");
            slot = int(i);
        }
    }
    for (int a = 0; a < na; ++a)
        for (int h = 0; h < 2; ++h)
            if (pos[a][h] < 0)
                fail("dimer", "MALFORMED_ROTATION",
                     arcs_[a].id + (h ? ".h" : ".t") + " missing from the rotation");

    // trace left-face orbits of darts; dart (a, +) runs tail -> head
    std::vector<std::array<bool, 2>> seen(na, {false, false});
    faces_.clear();
    for (int a0 = 0; a0 < na; ++a0) {
        for (int d0 = 0; d0 < 2; ++d0) {
            if (seen[a0][d0])
                continue;
            std::vector<std::pair<int, int>> orbit;
            int a = a0, d = d0;
            while (!seen[a][d]) {
                seen[a][d] = true;
                orbit.push_back({a, d});
                bool viaHead = d == 0;
                int v = viaHead ? arcs_[a].head : arcs_[a].tail;
                const auto& rot = rotation_[v];
                int i = pos[a][viaHead ? 1 : 0];
                const ArcEnd& e = rot[(i + rot.size() - 1) % rot.size()];
                a = e.arc;
                d = e.head ? 1 : 0;
            }
            bool allPlus = true, allMinus = true;
            for (auto& [x, dx] : orbit) {
                allPlus = allPlus && dx == 0;
                allMinus = allMinus && dx == 1;
            }
            if (!allPlus && !allMinus) {
                std::string s;
                for (auto& [x, dx] : orbit)
                    s += (s.empty() ? "" : " ") + arcs_[x].id + (dx ? "-" : "+");
                fail("dimer", "ORIENTATION_CLASH", "face with mixed directions: " + s);
            }
            Face f;
            f.clockwise = allMinus;
            for (auto& od : orbit)
                f.cycle.push_back(od.first);
            if (f.clockwise)
                std::reverse(f.cycle.begin(), f.cycle.end());
            if (f.cycle.size() < 3) {
                std::string s;
                for (int x : f.cycle)
                    s += " " + arcs_[x].id;
                fail("dimer", "FACE_TOO_SHORT", "face of length " + std::to_string(f.cycle.size()) + ":" + s);
            }
            std::rotate(f.cycle.begin(), std::min_element(f.cycle.begin(), f.cycle.end()), f.cycle.end());
            faces_.push_back(std::move(f));
        }
    }
    std::sort(faces_.begin(), faces_.end(), [](const Face& x, const Face& y) {
        if (x.clockwise != y.clockwise)
            return x.clockwise;
        return x.cycle < y.cycle;
    });
    cwFace_.assign(na, -1);
    ccwFace_.assign(na, -1);
    for (size_t f = 0; f < faces_.size(); ++f)
        for (int a : faces_[f].cycle)
            (faces_[f].clockwise ? cwFace_ : ccwFace_)[a] = int(f);

    int chi = eulerCharacteristic();
    if (chi > 2 || chi % 2 != 0)
        fail("dimer", "MALFORMED_ROTATION", "Euler characteristic " + std::to_string(chi) + " is not 2-2g");
}

Dimer fromRotation(std::vector<std::string> punctures, std::vector<Arc> arcs,
                   std::vector<std::vector<ArcEnd>> rotation, std::string name)
{
    // sort arcs by id and renumber the rotation
    std::vector<int> order(arcs.size());
    for (size_t i = 0; i < order.size(); ++i)
        order[i] = int(i);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return arcs[x].id < arcs[y].id; });
    std::vector<int> renum(arcs.size());
    for (size_t i = 0; i < order.size(); ++i)
        renum[order[i]] = int(i);
    Dimer d;
    d.name_ = std::move(name);
    d.punctures_ = std::move(punctures);
    for (int i : order)
        d.arcs_.push_back(arcs[i]);
    for (size_t i = 1; i < d.arcs_.size(); ++i)
        if (d.arcs_[i].id == d.arcs_[i - 1].id)
            fail("dimer", "MALFORMED_ROTATION", "duplicate arc id " + d.arcs_[i].id);
    for (auto& r : rotation)
        for (auto& e : r)
            if (e.arc >= 0 && e.arc < int(renum.size()))
                e.arc = renum[e.arc];
    d.rotation_ = std::move(rotation);
    d.derive();
    return d;
}

std::optional<std::string> builtinText(const std::string& name)
{
    if (name == "sphere3")
        return std::string(kSphere3);
    if (name == "torus4")
        return std::string(kTorus4);
    if (name.size() >= 2 && name[0] == 'Q' &&
        std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit((unsigned char)c); })) {
        int m = std::stoi(name.substr(1));
        return standardSphereDimer(m).serialize();
    }
    return std::nullopt;
}

Dimer buildDimer(const std::string& text)
{
    if (auto b = builtinText(trim(text)))
        return buildDimer(*b);

    std::vector<std::string> punctures;
    std::vector<Arc> arcs;
    std::vector<std::string> arcIds;
    std::map<std::string, std::vector<std::string>> rotText;
    std::vector<std::string> rotOrder;
    bool sawPunctures = false;

    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    auto bad = [&](const std::string& why) {
        fail("dimer", "PARSE_ERROR", "line " + std::to_string(lineNo) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineNo;
        if (auto h = line.find('#'); h != std::string::npos)
            line.erase(h);
        line = trim(line);
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "punctures:") {
            std::string p;
            while (ls >> p)
                punctures.push_back(p);
            sawPunctures = true;
        } else if (kw == "arc") {
            std::string id, t, h;
            if (!(ls >> id >> t >> h))
                bad("expected 'arc <id> <tail> <head>'");
            arcs.push_back({id, 0, 0});
            arcIds.push_back(t + " " + h);
        } else if (kw == "rot") {
            std::string p;
            ls >> p;
            if (p.empty() || p.back() != ':')
                bad("expected 'rot <puncture>: ...'");
            p.pop_back();
            if (rotText.count(p))
                fail("dimer", "MALFORMED_ROTATION", "two rotations for puncture " + p);
            std::string e;
            auto& v = rotText[p];
            rotOrder.push_back(p);
            while (ls >> e)
                v.push_back(e);
        } else {
            bad("unknown keyword '" + kw + "'");
        }
    }
    if (!sawPunctures)
        fail("dimer", "PARSE_ERROR", "missing 'punctures:' line");
    auto pidx = [&](const std::string& p) {
        auto it = std::find(punctures.begin(), punctures.end(), p);
        if (it == punctures.end())
            fail("dimer", "MALFORMED_ROTATION", "unknown puncture '" + p + "'");
        return int(it - punctures.begin());
    };
    for (size_t i = 0; i < arcs.size(); ++i) {
        std::istringstream ts(arcIds[i]);
        std::string t, h;
        ts >> t >> h;
        arcs[i].tail = pidx(t);
        arcs[i].head = pidx(h);
    }
    std::vector<std::vector<ArcEnd>> rotation(punctures.size());
    for (auto& p : rotOrder) {
        int v = pidx(p);
        for (auto& e : rotText[p]) {
            auto dot = e.rfind('.');
            if (dot == std::string::npos || (e.substr(dot) != ".h" && e.substr(dot) != ".t"))
                fail("dimer", "MALFORMED_ROTATION", "bad arc end '" + e + "'");
            std::string id = e.substr(0, dot);
            int a = -1;
            for (size_t i = 0; i < arcs.size(); ++i)
                if (arcs[i].id == id)
                    a = int(i);
            if (a < 0)
                fail("dimer", "MALFORMED_ROTATION", "unknown arc '" + id + "'");
            rotation[v].push_back({a, e.substr(dot) == ".h"});
        }
    }
    return fromRotation(std::move(punctures), std::move(arcs), std::move(rotation), "");
}

Dimer loadDimer(const std::string& fileOrBuiltin)
{
    if (auto b = builtinText(fileOrBuiltin)) {
        Dimer d = buildDimer(*b);
        d.setName(fileOrBuiltin);
        return d;
    }
    std::ifstream in(fileOrBuiltin);
    if (!in)
        fail("dimer", "PARSE_ERROR", "cannot open '" + fileOrBuiltin + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    Dimer d = buildDimer(ss.str());
    d.setName(fileOrBuiltin);
    return d;
}

Dimer standardSphereDimer(int m)
{
    if (m < 3)
        fail("dimer", "M_TOO_SMALL", "standard sphere dimer needs M >= 3, got " + std::to_string(m));
    std::vector<std::string> p;
    std::vector<Arc> arcs;
    for (int i = 0; i < m; ++i)
        p.push_back(std::to_string(i + 1));
    for (int i = 0; i < m; ++i)
        arcs.push_back({"x" + std::to_string(i + 1), i, (i + 1) % m});
    std::vector<std::vector<ArcEnd>> rot(m);
    for (int i = 0; i < m; ++i)
        rot[i] = {{(i + m - 1) % m, true}, {i, false}};
    return fromRotation(p, arcs, rot, "Q" + std::to_string(m));
}

Dimer sphere3() { return loadDimer("sphere3"); }
Dimer torus4() { return loadDimer("torus4"); }

// ------------------------------------------------------------------ zigzags

std::vector<ZigzagPath> zigzagPaths(const Dimer& d)
{
    const int na = int(d.arcs().size());
    std::vector<std::array<bool, 2>> seen(na, {false, false});
    std::vector<ZigzagPath> out;
    for (int a = 0; a < na; ++a) {
        for (int t = 0; t < 2; ++t) {
            if (seen[a][t])
                continue;
            std::vector<Step> s;
            Step cur{a, Turn(t)};
            while (!seen[cur.arc][int(cur.turn)]) {
                seen[cur.arc][int(cur.turn)] = true;
                s.push_back(cur);
                cur = d.next(cur);
            }
            int k = minRotation(s)[0];
            std::rotate(s.begin(), s.begin() + k, s.end());
            ZigzagPath z;
            z.steps = std::move(s);
            out.push_back(std::move(z));
        }
    }
    std::sort(out.begin(), out.end(), [](const ZigzagPath& x, const ZigzagPath& y) { return x.steps < y.steps; });
    for (size_t i = 0; i < out.size(); ++i) {
        ZigzagPath& z = out[i];
        z.name = "Z" + std::to_string(i + 1);
        int best = -1;
        for (size_t k = 0; k < z.steps.size(); ++k)
            if (z.steps[k].turn == Turn::Right && (best < 0 || z.steps[k].arc < z.steps[best].arc))
                best = int(k);
        z.identityLocation = best < 0 ? 0 : best;
        int n = int(z.steps.size());
        z.coidentityLocation = (z.identityLocation + n - 1) % n;
    }
    return out;
}

int zigzagOf(const std::vector<ZigzagPath>& zz, Step s)
{
    for (size_t i = 0; i < zz.size(); ++i)
        if (zz[i].indexOf(s) >= 0)
            return int(i);
    return -1;
}

std::string zigzagStr(const Dimer& d, const ZigzagPath& z)
{
    std::string out = z.name + ":";
    for (auto& s : z.steps)
        out += " " + d.arcs()[s.arc].id + turnChar(s.turn);
    return out;
}

}  // namespace dm
