#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace dm {

// A quiver together with the names of the deformation variables that may
// appear in coefficients. Arrows are kept sorted by name so that index order
// and name order agree.
struct Quiver {
    std::vector<std::string> vertices;
    std::vector<std::string> arrows;
    std::vector<int> tail;
    std::vector<int> head;
    std::vector<std::string> vars;

    int vertex(const std::string& name) const;  // -1 if unknown
    int arrow(const std::string& name) const;
    int var(const std::string& name) const;
    bool sameShape(const Quiver& o) const;
};
using QuiverPtr = std::shared_ptr<const Quiver>;

// Builds a quiver; arrows are re-sorted by name.
QuiverPtr makeQuiver(std::vector<std::string> vertices,
                     std::vector<std::tuple<std::string, std::string, std::string>> arrows,
                     std::vector<std::string> vars);

// Sorted multiset of variable indices; degree is the size.
using Monomial = std::vector<int>;
Monomial monoMul(const Monomial& a, const Monomial& b);
bool monoLess(const Monomial& a, const Monomial& b);  // degree, then lex

struct MonoOrder {
    bool operator()(const Monomial& a, const Monomial& b) const { return monoLess(a, b); }
};

// Truncated power series in the deformation variables, exact rationals.
class DefSeries {
public:
    using Terms = std::map<Monomial, mpq_class, MonoOrder>;

    explicit DefSeries(int order = 0) : order_(order) {}
    static DefSeries constant(const mpq_class& c, int order);
    static DefSeries mono(const Monomial& m, const mpq_class& c, int order);

    int order() const { return order_; }
    const Terms& terms() const { return t_; }
    bool isZero() const { return t_.empty(); }
    int lowestDegree() const;  // -1 for zero
    mpq_class coeff(const Monomial& m) const;
    DefSeries truncated(int n) const;
    void addTerm(const Monomial& m, const mpq_class& c);

    DefSeries& operator+=(const DefSeries& o);
    DefSeries& operator-=(const DefSeries& o);
    DefSeries operator-() const;
    friend DefSeries operator+(DefSeries a, const DefSeries& b) { return a += b; }
    friend DefSeries operator-(DefSeries a, const DefSeries& b) { return a -= b; }
    friend DefSeries operator*(const DefSeries& a, const DefSeries& b);
    DefSeries scaled(const mpq_class& c) const;
    bool operator==(const DefSeries& o) const { return t_ == o.t_; }

    std::string str(const std::vector<std::string>& vars) const;

private:
    int order_;
    Terms t_;
};

// A path in product notation: arcs[0] is traversed last. Composability means
// head(arcs[i+1]) == tail(arcs[i]). Empty paths are vertex idempotents.
struct Path {
    int src = 0;
    int tgt = 0;
    std::vector<int> arcs;

    size_t size() const { return arcs.size(); }
    bool isCycle() const { return src == tgt && !arcs.empty(); }
    bool operator==(const Path& o) const { return src == o.src && tgt == o.tgt && arcs == o.arcs; }
    bool operator<(const Path& o) const;  // length, lex, source
};

Path idPath(int v);
Path arrowPath(const Quiver& q, int a);
Path makePath(const Quiver& q, const std::vector<int>& arcs);  // throws on gaps
Path pathFromNames(const Quiver& q, const std::string& words);  // "b1 a4 b2"
bool composable(const Path& x, const Path& y);  // x*y defined
Path concat(const Path& x, const Path& y);
Path rotateLeft(const Quiver& q, const Path& p, size_t k);  // cycle: move k arcs from front to back
std::string pathStr(const Quiver& q, const Path& p);

class NCPoly {
public:
    using Terms = std::map<Path, DefSeries>;

    NCPoly() = default;
    NCPoly(QuiverPtr q, int order) : q_(std::move(q)), order_(order) {}
    static NCPoly of(QuiverPtr q, const Path& p, int order, const mpq_class& c = 1);
    static NCPoly of(QuiverPtr q, const Path& p, const DefSeries& c);

    const QuiverPtr& quiver() const { return q_; }
    int order() const { return order_; }
    const Terms& terms() const { return t_; }
    bool isZero() const { return t_.empty(); }
    DefSeries coeff(const Path& p) const;
    void addTerm(const Path& p, const DefSeries& c);
    NCPoly truncated(int n) const;
    int lowestDegree() const;  // smallest q-degree over terms, -1 if zero
    NCPoly qZero() const;      // order-0 part

    NCPoly& operator+=(const NCPoly& o);
    NCPoly& operator-=(const NCPoly& o);
    NCPoly operator-() const;
    friend NCPoly operator+(NCPoly a, const NCPoly& b) { return a += b; }
    friend NCPoly operator-(NCPoly a, const NCPoly& b) { return a -= b; }
    friend NCPoly operator*(const NCPoly& a, const NCPoly& b);
    NCPoly scaled(const DefSeries& c) const;
    NCPoly scaled(const mpq_class& c) const;
    bool operator==(const NCPoly& o) const { return t_ == o.t_; }

    std::string str() const;

private:
    void checkQuiver(const NCPoly& o) const;

    QuiverPtr q_;
    int order_ = 0;
    Terms t_;
};

NCPoly parseNCPoly(QuiverPtr q, const std::string& text, int order);
DefSeries parseDefSeries(const Quiver& q, const std::string& text, int order);
Monomial parseMonomial(const Quiver& q, const std::string& text);
std::string monoStr(const Quiver& q, const Monomial& m);

NCPoly cyc(QuiverPtr q, const Path& p, int order);
bool isCyclic(const NCPoly& x);
NCPoly cyclicDerivative(const NCPoly& w, int arrow);

}  // namespace dm
