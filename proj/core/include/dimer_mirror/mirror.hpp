#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dimer_mirror/dimer.hpp"
#include "dimer_mirror/jacobi.hpp"
#include "dimer_mirror/ncpoly.hpp"

namespace dm {

// Q-check: vertices are the zigzag paths of Q, arcs are the arcs of Q.
Dimer dualDimer(const Dimer& d);

// Everything needed to talk about the mirror of a dimer Q.
struct Mirror {
    Dimer q;
    Dimer dual;
    std::vector<ZigzagPath> zigzags;
    QuiverPtr quiver;  // shape of the dual, deformation variables of q
    std::shared_ptr<JacobiContext> jac;

    int tailOf(int arc) const { return quiver->tail[arc]; }  // zigzag turning left at arc
    int headOf(int arc) const { return quiver->head[arc]; }  // zigzag turning right at arc
    Path arrow(int arc) const { return arrowPath(*quiver, arc); }
    JacobiElement normalForm(const NCPoly& x) const { return jac->normalForm(x); }
};

Mirror buildMirror(const Dimer& q, int lengthCap = 0);

// W = sum of clockwise face cycles minus counterclockwise ones, over d's own quiver
NCPoly classicalSuperpotential(const Dimer& d, QuiverPtr quiver = nullptr, int order = 0);
NCPoly classicalSuperpotential(const Mirror& m, int order = 0);
std::vector<NCPoly> classicalRelations(const Mirror& m, int order = 0);

// l_v: a clockwise face cycle of the dual read from v
NCPoly potentialAt(const Mirror& m, int vertex, int order = 0);
JacobiElement classicalPotential(const Mirror& m, int order = 0);

// complement of a in its clockwise face, from h(a) to t(a)
Path complementPath(const Mirror& m, int arc);

struct MatrixFactorization {
    int arc = 0;
    int evenModule = 0;  // (Jac) h(a)
    int oddModule = 0;   // (Jac) t(a)
    NCPoly f;            // even -> odd, right multiplication
    NCPoly g;            // odd -> even
    NCPoly curvatureEven;
    NCPoly curvatureOdd;
    std::string str(const Quiver& q) const;
};

MatrixFactorization classicalMirrorObject(const Mirror& m, int arc);

// 2x2 morphism between M_a and M_b; blocks[target][source], index 0 = even
struct MFMorphism {
    int source = 0, target = 0;  // arcs
    bool odd = false;
    NCPoly blocks[2][2];
    std::string str(const Quiver& q) const;
};

// angle at a puncture of q: from rotation[puncture][start], turning through
// `length` corners counterclockwise
struct Angle {
    int puncture = 0;
    int start = 0;
    int length = 0;
};

// finds the angle from arc a to arc b (first one at a shared puncture)
Angle angleBetween(const Dimer& d, int a, int b);

MFMorphism zeta(const Mirror& m, const Angle& alpha);

// mu1(phi) = delta_b phi -/+ phi delta_a, for objects with maps (f, g)
MFMorphism mu1(const MFMorphism& phi, const MatrixFactorization& src, const MatrixFactorization& tgt);
bool isClosed(const Mirror& m, const MFMorphism& phi, const MatrixFactorization& src,
              const MatrixFactorization& tgt);

}  // namespace dm
