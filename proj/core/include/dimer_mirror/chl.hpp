#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dimer_mirror/disks.hpp"
#include "dimer_mirror/mirror.hpp"
#include "dimer_mirror/ncpoly.hpp"

namespace dm {

// Finite product data over a basis of odd morphisms X_e : L_src -> L_tgt
// between reference objects, plus module elements for mirror objects.
struct ChlOdd {
    std::string name;
    int src = 0;
    int tgt = 0;
};

struct ChlModuleElement {
    std::string name;
    int object = 0;
    bool odd = true;
    int arc = -1;  // odd basis index this element belongs to, if any
};

enum class ChlKind { Y, Id, IdStar, Module };

struct ChlLabel {
    ChlKind kind = ChlKind::Y;
    int index = 0;
    bool operator<(const ChlLabel& o) const { return kind != o.kind ? kind < o.kind : index < o.index; }
    bool operator==(const ChlLabel& o) const { return kind == o.kind && index == o.index; }
};
using ChlCombination = std::map<ChlLabel, DefSeries>;

// Words are written as in mu(X_{e_k}, ..., X_{e_1}): word = [e_k, ..., e_1].
struct ProductTable {
    std::vector<std::string> objects;
    std::vector<std::string> vars;
    std::vector<ChlOdd> odd;  // sorted by name
    std::vector<ChlModuleElement> modules;
    std::map<std::vector<int>, ChlCombination> mu;
    std::map<std::pair<int, std::vector<int>>, ChlCombination> mod;
    int arityCap = 0;
    int qOrderCap = 0;

    int object(const std::string& name) const;
    int oddIndex(const std::string& name) const;
    int module(const std::string& name) const;

    void addMu(const std::vector<int>& word, ChlLabel out, const DefSeries& c);
    void addMod(int element, const std::vector<int>& word, int outElement, const DefSeries& c);

    // endpoint composability of every stored word and label
    void validate() const;
    std::string str() const;
};

ProductTable parseProductTable(const std::string& text);

// Table from the polygon-counting product rule of the disks module.
ProductTable productTableFromDisks(const Mirror& m, const std::vector<MidpointPolygon>& polys,
                                   const IdentityChoice& ids, int N);
ProductTable productTableFromDisks(const Mirror& m, const IdentityChoice& ids, int N);

QuiverPtr chlQuiver(const ProductTable& t);

// coefficient of Y_f in mu(w) must be invariant under rotating the cycle f w
void checkCyclic(const ProductTable& t);

NCPoly chlSuperpotential(const ProductTable& t);
NCPoly chlSuperpotential(const ProductTable& t, const QuiverPtr& q);

struct ChlRelations {
    std::vector<NCPoly> relations;  // indexed by arrow
    NCPoly potential;
};
ChlRelations chlRelationsAndPotential(const ProductTable& t);
ChlRelations chlRelationsAndPotential(const ProductTable& t, const QuiverPtr& q);

// mirror object of the pair (oddElement, its even partner)
MatrixFactorization chlMirrorObject(const ProductTable& t, int oddElement, int evenElement);
MatrixFactorization chlMirrorObject(const ProductTable& t, const QuiverPtr& q, int oddElement, int evenElement);
// partner found by the naming rule m / m*
MatrixFactorization chlMirrorObject(const ProductTable& t, const std::string& oddElement);

struct GrowthRow {
    int arity = 0;
    size_t entries = 0;
    int minDegree = -1;  // lowest q-degree over coefficients, -1 if none
};
std::vector<GrowthRow> slowGrowthAudit(const ProductTable& t);

}  // namespace dm
