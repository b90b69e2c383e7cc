#include "dimer_mirror/ncpoly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <tuple>

#include "dimer_mirror/error.hpp"

namespace dm {

namespace {

int indexOf(const std::vector<std::string>& v, const std::string& s)
{
    auto it = std::find(v.begin(), v.end(), s);
    return it == v.end() ? -1 : int(it - v.begin());
}

std::string coeffStr(const mpq_class& c)
{
    std::string s = c.get_str();
    return c >= 0 ? "+" + s : s;
}

// scanner shared by the NCPoly / DefSeries readers
struct Scan {
    const std::string& s;
    size_t i = 0;

    void ws() { while (i < s.size() && std::isspace((unsigned char)s[i])) ++i; }
    bool done() { ws(); return i >= s.size(); }
    bool eat(char c) { ws(); if (i < s.size() && s[i] == c) { ++i; return true; } return false; }
    char peek() { ws(); return i < s.size() ? s[i] : '\0'; }
    std::string ident()
    {
        ws();
        size_t b = i;
        while (i < s.size() && (std::isalnum((unsigned char)s[i]) || s[i] == '_' || s[i] == '\''))
            ++i;
        return s.substr(b, i - b);
    }
    [[noreturn]] void bad(const std::string& what)
    {
        fail("ncpoly", "PARSE_ERROR", what + " at offset " + std::to_string(i) + " in '" + s + "'");
    }
};

// reads "<sign><rational>*v1*v2^3" up to (not including) an optional '[' or the
// next sign; returns false at end of input
bool readCoeffTerm(Scan& sc, const Quiver& q, mpq_class& c, Monomial& m)
{
    if (sc.done())
        return false;
    int sign = 1;
    if (sc.eat('+')) {
    } else if (sc.eat('-')) {
        sign = -1;
    }
    c = 1;
    m.clear();
    sc.ws();
    if (sc.i < sc.s.size() && std::isdigit((unsigned char)sc.s[sc.i])) {
        size_t b = sc.i;
        while (sc.i < sc.s.size() && (std::isdigit((unsigned char)sc.s[sc.i]) || sc.s[sc.i] == '/'))
            ++sc.i;
        c = mpq_class(sc.s.substr(b, sc.i - b));
        c.canonicalize();
        if (!sc.eat('*'))
            goto out;
    }
    while (true) {
        char p = sc.peek();
        if (p == '[' || p == '\0' || p == '+' || p == '-')
            break;
        std::string v = sc.ident();
        if (v.empty())
            sc.bad("expected variable");
        int idx = q.var(v);
        if (idx < 0)
            sc.bad("unknown variable '" + v + "'");
        int e = 1;
        if (sc.eat('^')) {
            std::string n = sc.ident();
            e = std::stoi(n);
        }
        for (int k = 0; k < e; ++k)
            m.push_back(idx);
        if (!sc.eat('*'))
            break;
    }
out:
    std::sort(m.begin(), m.end());
    c *= sign;
    return true;
}

}  // namespace

int Quiver::vertex(const std::string& name) const { return indexOf(vertices, name); }
int Quiver::arrow(const std::string& name) const { return indexOf(arrows, name); }
int Quiver::var(const std::string& name) const { return indexOf(vars, name); }

bool Quiver::sameShape(const Quiver& o) const
{
    return vertices == o.vertices && arrows == o.arrows && tail == o.tail && head == o.head &&
           vars == o.vars;
}

QuiverPtr makeQuiver(std::vector<std::string> vertices,
                     std::vector<std::tuple<std::string, std::string, std::string>> arrows,
                     std::vector<std::string> vars)
{
    auto q = std::make_shared<Quiver>();
    q->vertices = std::move(vertices);
    q->vars = std::move(vars);
    std::sort(arrows.begin(), arrows.end());
    for (auto& [name, t, h] : arrows) {
        int ti = q->vertex(t), hi = q->vertex(h);
        if (ti < 0 || hi < 0)
            fail("ncpoly", "QUIVER_MISMATCH", "arrow " + name + " has unknown endpoint");
        q->arrows.push_back(name);
        q->tail.push_back(ti);
        q->head.push_back(hi);
    }
    return q;
}

Monomial monoMul(const Monomial& a, const Monomial& b)
{
    Monomial r;
    r.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

bool monoLess(const Monomial& a, const Monomial& b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    return a < b;
}

std::string monoStr(const Quiver& q, const Monomial& m)
{
    std::string out;
    for (size_t i = 0; i < m.size();) {
        size_t j = i;
        while (j < m.size() && m[j] == m[i])
            ++j;
        if (!out.empty())
            out += "*";
        out += q.vars[m[i]];
        if (j - i > 1)
            out += "^" + std::to_string(j - i);
        i = j;
    }
    return out;
}

Monomial parseMonomial(const Quiver& q, const std::string& text)
{
    Scan sc{text};
    mpq_class c;
    Monomial m;
    if (!readCoeffTerm(sc, q, c, m))
        return {};
    return m;
}

// ---------------------------------------------------------------- DefSeries

DefSeries DefSeries::constant(const mpq_class& c, int order)
{
    DefSeries s(order);
    s.addTerm({}, c);
    return s;
}

DefSeries DefSeries::mono(const Monomial& m, const mpq_class& c, int order)
{
    DefSeries s(order);
    s.addTerm(m, c);
    return s;
}

int DefSeries::lowestDegree() const
{
    return t_.empty() ? -1 : int(t_.begin()->first.size());
}

mpq_class DefSeries::coeff(const Monomial& m) const
{
    auto it = t_.find(m);
    return it == t_.end() ? mpq_class(0) : it->second;
}

void DefSeries::addTerm(const Monomial& m, const mpq_class& c)
{
    if (int(m.size()) > order_ || c == 0)
        return;
    auto [it, fresh] = t_.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0)
            t_.erase(it);
    }
}

DefSeries DefSeries::truncated(int n) const
{
    DefSeries r(std::min(n, order_));
    for (auto& [m, c] : t_)
        if (int(m.size()) <= r.order_)
            r.t_.emplace(m, c);
    return r;
}

DefSeries& DefSeries::operator+=(const DefSeries& o)
{
    if (o.order_ < order_)
        *this = truncated(o.order_);
    for (auto& [m, c] : o.t_)
        addTerm(m, c);
    return *this;
}

DefSeries& DefSeries::operator-=(const DefSeries& o)
{
    if (o.order_ < order_)
        *this = truncated(o.order_);
    for (auto& [m, c] : o.t_)
        addTerm(m, -c);
    return *this;
}

DefSeries DefSeries::operator-() const
{
    DefSeries r = *this;
    for (auto& kv : r.t_)
        kv.second = -kv.second;
    return r;
}

DefSeries operator*(const DefSeries& a, const DefSeries& b)
{
    DefSeries r(std::min(a.order_, b.order_));
    for (auto& [ma, ca] : a.t_) {
        if (int(ma.size()) > r.order_)
            break;
        for (auto& [mb, cb] : b.t_) {
            if (int(ma.size() + mb.size()) > r.order_)
                break;  // terms are degree-sorted
            r.addTerm(monoMul(ma, mb), ca * cb);
        }
    }
    return r;
}

DefSeries DefSeries::scaled(const mpq_class& c) const
{
    DefSeries r(order_);
    if (c == 0)
        return r;
    for (auto& [m, x] : t_)
        r.t_.emplace(m, x * c);
    return r;
}

std::string DefSeries::str(const std::vector<std::string>& vars) const
{
    if (t_.empty())
        return "0";
    Quiver tmp;
    tmp.vars = vars;
    std::string out;
    for (auto& [m, c] : t_) {
        if (!out.empty())
            out += " ";
        out += coeffStr(c);
        if (!m.empty())
            out += "*" + monoStr(tmp, m);
    }
    return out;
}

DefSeries parseDefSeries(const Quiver& q, const std::string& text, int order)
{
    DefSeries s(order);
    Scan sc{text};
    if (sc.peek() == '0' && text.find_first_not_of(" \t0") == std::string::npos)
        return s;
    mpq_class c;
    Monomial m;
    while (readCoeffTerm(sc, q, c, m)) {
        if (sc.peek() == '[')
            sc.bad("path in a series");
        s.addTerm(m, c);
    }
    return s;
}

// --------------------------------------------------------------------- Path

bool Path::operator<(const Path& o) const
{
    if (arcs.size() != o.arcs.size())
        return arcs.size() < o.arcs.size();
    if (arcs != o.arcs)
        return arcs < o.arcs;
    return std::tie(src, tgt) < std::tie(o.src, o.tgt);
}

Path idPath(int v) { return Path{v, v, {}}; }

Path arrowPath(const Quiver& q, int a) { return Path{q.tail[a], q.head[a], {a}}; }

Path makePath(const Quiver& q, const std::vector<int>& arcs)
{
    if (arcs.empty())
        fail("ncpoly", "NOT_A_PATH", "empty arc list needs a vertex");
    for (size_t i = 0; i + 1 < arcs.size(); ++i)
        if (q.head[arcs[i + 1]] != q.tail[arcs[i]])
            fail("ncpoly", "NOT_A_PATH",
                 q.arrows[arcs[i + 1]] + " does not compose into " + q.arrows[arcs[i]]);
    return Path{q.tail[arcs.back()], q.head[arcs.front()], arcs};
}

Path pathFromNames(const Quiver& q, const std::string& words)
{
    std::istringstream in(words);
    std::vector<int> arcs;
    std::string w;
    while (in >> w) {
        if (w[0] == '@') {
            int v = q.vertex(w.substr(1));
            if (v < 0)
                fail("ncpoly", "PARSE_ERROR", "unknown vertex " + w);
            return idPath(v);
        }
        int a = q.arrow(w);
        if (a < 0)
            fail("ncpoly", "PARSE_ERROR", "unknown arrow '" + w + "'");
        arcs.push_back(a);
    }
    if (arcs.empty()) {
        if (q.vertices.size() != 1)
            fail("ncpoly", "PARSE_ERROR", "bare [] is ambiguous with several vertices");
        return idPath(0);
    }
    return makePath(q, arcs);
}

bool composable(const Path& x, const Path& y) { return x.src == y.tgt; }

Path concat(const Path& x, const Path& y)
{
    Path r{y.src, x.tgt, x.arcs};
    r.arcs.insert(r.arcs.end(), y.arcs.begin(), y.arcs.end());
    return r;
}

Path rotateLeft(const Quiver& q, const Path& p, size_t k)
{
    std::vector<int> a(p.arcs);
    std::rotate(a.begin(), a.begin() + (k % a.size()), a.end());
    return makePath(q, a);
}

std::string pathStr(const Quiver& q, const Path& p)
{
    if (p.arcs.empty())
        return q.vertices.size() == 1 ? "[]" : "[@" + q.vertices[p.src] + "]";
    std::string out = "[";
    for (size_t i = 0; i < p.arcs.size(); ++i) {
        if (i)
            out += " ";
        out += q.arrows[p.arcs[i]];
    }
    return out + "]";
}

// ------------------------------------------------------------------- NCPoly

NCPoly NCPoly::of(QuiverPtr q, const Path& p, int order, const mpq_class& c)
{
    NCPoly r(std::move(q), order);
    r.addTerm(p, DefSeries::constant(c, order));
    return r;
}

NCPoly NCPoly::of(QuiverPtr q, const Path& p, const DefSeries& c)
{
    NCPoly r(std::move(q), c.order());
    r.addTerm(p, c);
    return r;
}

DefSeries NCPoly::coeff(const Path& p) const
{
    auto it = t_.find(p);
    return it == t_.end() ? DefSeries(order_) : it->second;
}

void NCPoly::addTerm(const Path& p, const DefSeries& c)
{
    if (c.isZero())
        return;
    auto it = t_.find(p);
    if (it == t_.end()) {
        DefSeries s(order_);
        s += c;
        if (!s.isZero())
            t_.emplace(p, std::move(s));
        return;
    }
    it->second += c;
    if (it->second.isZero())
        t_.erase(it);
}

NCPoly NCPoly::truncated(int n) const
{
    NCPoly r(q_, std::min(n, order_));
    for (auto& [p, c] : t_) {
        DefSeries s = c.truncated(r.order_);
        if (!s.isZero())
            r.t_.emplace(p, std::move(s));
    }
    return r;
}

int NCPoly::lowestDegree() const
{
    int best = -1;
    for (auto& [p, c] : t_) {
        int d = c.lowestDegree();
        if (best < 0 || d < best)
            best = d;
    }
    return best;
}

NCPoly NCPoly::qZero() const
{
    NCPoly r(q_, order_);
    for (auto& [p, c] : t_) {
        mpq_class x = c.coeff({});
        if (x != 0)
            r.addTerm(p, DefSeries::constant(x, order_));
    }
    return r;
}

void NCPoly::checkQuiver(const NCPoly& o) const
{
    if (q_ == o.q_ || !o.q_ || !q_)
        return;
    if (!q_->sameShape(*o.q_))
        fail("ncpoly", "QUIVER_MISMATCH", "operands live on different quivers");
}

NCPoly& NCPoly::operator+=(const NCPoly& o)
{
    checkQuiver(o);
    if (!q_)
        q_ = o.q_, order_ = o.order_;
    if (o.order_ < order_)
        *this = truncated(o.order_);
    for (auto& [p, c] : o.t_)
        addTerm(p, c);
    return *this;
}

NCPoly& NCPoly::operator-=(const NCPoly& o)
{
    checkQuiver(o);
    if (!q_)
        q_ = o.q_, order_ = o.order_;
    if (o.order_ < order_)
        *this = truncated(o.order_);
    for (auto& [p, c] : o.t_)
        addTerm(p, -c);
    return *this;
}

NCPoly NCPoly::operator-() const
{
    NCPoly r = *this;
    for (auto& kv : r.t_)
        kv.second = -kv.second;
    return r;
}

NCPoly operator*(const NCPoly& a, const NCPoly& b)
{
    a.checkQuiver(b);
    NCPoly r(a.q_ ? a.q_ : b.q_, std::min(a.order_, b.order_));
    for (auto& [pa, ca] : a.t_)
        for (auto& [pb, cb] : b.t_) {
            if (!composable(pa, pb))
                continue;
            r.addTerm(concat(pa, pb), ca * cb);
        }
    return r;
}

NCPoly NCPoly::scaled(const DefSeries& c) const
{
    NCPoly r(q_, std::min(order_, c.order()));
    for (auto& [p, x] : t_)
        r.addTerm(p, x * c);
    return r;
}

NCPoly NCPoly::scaled(const mpq_class& c) const
{
    NCPoly r(q_, order_);
    if (c == 0)
        return r;
    for (auto& [p, x] : t_)
        r.t_.emplace(p, x.scaled(c));
    return r;
}

std::string NCPoly::str() const
{
    if (t_.empty())
        return "0";
    struct Row {
        const Monomial* m;
        const mpq_class* c;
        const Path* p;
    };
    std::vector<Row> rows;
    for (auto& [p, s] : t_)
        for (auto& [m, c] : s.terms())
            rows.push_back({&m, &c, &p});
    std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
        if (*x.m != *y.m)
            return monoLess(*x.m, *y.m);
        return *x.p < *y.p;
    });
    std::string out;
    for (auto& r : rows) {
        if (!out.empty())
            out += " ";
        out += coeffStr(*r.c);
        if (!r.m->empty())
            out += "*" + monoStr(*q_, *r.m);
        out += "*" + pathStr(*q_, *r.p);
    }
    return out;
}

NCPoly parseNCPoly(QuiverPtr q, const std::string& text, int order)
{
    NCPoly r(q, order);
    Scan sc{text};
    if (text.find_first_not_of(" \t0") == std::string::npos)
        return r;
    mpq_class c;
    Monomial m;
    while (readCoeffTerm(sc, *q, c, m)) {
        if (!sc.eat('['))
            sc.bad("expected '[' path");
        size_t close = text.find(']', sc.i);
        if (close == std::string::npos)
            sc.bad("unterminated path");
        Path p = pathFromNames(*q, text.substr(sc.i, close - sc.i));
        sc.i = close + 1;
        r.addTerm(p, DefSeries::mono(m, c, order));
    }
    return r;
}

// ------------------------------------------------------------ cyclic calculus

NCPoly cyc(QuiverPtr q, const Path& p, int order)
{
    if (!p.isCycle())
        fail("ncpoly", "NOT_A_CYCLE", "path " + pathStr(*q, p) + " is not closed");
    NCPoly r(q, order);
    for (size_t k = 0; k < p.size(); ++k)
        r.addTerm(rotateLeft(*q, p, k), DefSeries::constant(1, order));
    return r;
}

bool isCyclic(const NCPoly& x)
{
    const Quiver& q = *x.quiver();
    for (auto& [p, c] : x.terms()) {
        if (!p.isCycle())
            return false;
        if (!(x.coeff(rotateLeft(q, p, 1)) == c))
            return false;
    }
    return true;
}

NCPoly cyclicDerivative(const NCPoly& w, int arrow)
{
    if (!isCyclic(w))
        fail("ncpoly", "NOT_CYCLIC", "derivative of a non-cyclic element");
    NCPoly r(w.quiver(), w.order());
    const Quiver& q = *w.quiver();
    for (auto& [p, c] : w.terms()) {
        if (p.arcs.front() != arrow)
            continue;
        if (p.size() == 1) {
            r.addTerm(idPath(q.head[arrow]), c);
            continue;
        }
        std::vector<int> rest(p.arcs.begin() + 1, p.arcs.end());
        r.addTerm(makePath(q, rest), c);
    }
    return r;
}

}  // namespace dm
