#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dimer_mirror/dimer.hpp"
#include "dimer_mirror/mirror.hpp"
#include "dimer_mirror/ncpoly.hpp"

namespace dm {

// A marked midpoint polygon. Corners e_1..e_k are listed in clockwise order
// around the polygon starting at the marked first corner; side i runs from
// e_i to e_{i+1}, the closing side from e_k back to e_1.
struct MidpointPolygon {
    bool clockwise = true;
    std::vector<int> corners;
    std::vector<int> pointingFaces;
    std::vector<int> segmentLengths;
    Monomial punc;  // covered punctures with multiplicity
    int closingZigzag = 0;
    std::vector<Step> closingInterior;  // steps at the interior midpoints of the closing side

    int size() const;  // |D| = sum (n_i - 1) / 2
    int sign() const { return size() % 2 ? -1 : 1; }
    std::vector<int> arcsWord() const;  // e_k ... e_1
    std::string str(const Dimer& d) const;
    bool operator<(const MidpointPolygon& o) const;
    bool operator==(const MidpointPolygon& o) const;
};

struct PolygonFilter {
    std::optional<bool> clockwise;
    std::optional<int> firstArc;
    std::optional<int> lastArc;
    std::optional<std::vector<int>> corners;
};

// threads <= 0: DIMER_MIRROR_THREADS or hardware concurrency
std::vector<MidpointPolygon> enumerateMidpointPolygons(const Dimer& d, int qOrderCap,
                                                       const PolygonFilter& filter = {}, int threads = 0);

std::string polygonDump(const Dimer& d, const std::vector<MidpointPolygon>& polys);

// identity location per zigzag path (index into zigzags); missing entries use the default
using IdentityChoice = std::map<int, Step>;
Step identityStep(const Mirror& m, int zigzag, const IdentityChoice& ids);
// "Z1=a2" or "Z1=a2R"
std::pair<int, Step> parseIdentityLocation(const Mirror& m, const std::string& text);

// L-polygon multiplicity of p for the zigzag path i with the given identity
int lPolygonMultiplicity(const MidpointPolygon& p, int zigzag, Step identity);

NCPoly deformedSuperpotential(const Mirror& m, const std::vector<MidpointPolygon>& polys, int N);
NCPoly deformedSuperpotential(const Mirror& m, int N);

NCPoly deformedPotentialPart(const Mirror& m, const std::vector<MidpointPolygon>& polys, int zigzag,
                             Step identity, int N);
NCPoly deformedPotential(const Mirror& m, const std::vector<MidpointPolygon>& polys, const IdentityChoice& ids,
                         int N);
NCPoly deformedPotential(const Mirror& m, const IdentityChoice& ids, int N);

NCPoly deformedComplement(const Mirror& m, const std::vector<MidpointPolygon>& polys, int arc, int N);
NCPoly deformedComplement(const Mirror& m, int arc, int N);

std::vector<NCPoly> deformedRelations(const Mirror& m, const NCPoly& wq);

MatrixFactorization deformedMirrorObject(const Mirror& m, const std::vector<MidpointPolygon>& polys,
                                         const IdentityChoice& ids, int arc, int N);
MatrixFactorization deformedMirrorObject(const Mirror& m, int arc, int N);

// ---- product data (odd inputs only)

// output label of a product: Y_e (kind 0), id_L (kind 1), or a module element (kind 2)
struct Label {
    int kind = 0;
    int index = 0;
    bool operator<(const Label& o) const { return kind != o.kind ? kind < o.kind : index < o.index; }
    bool operator==(const Label& o) const { return kind == o.kind && index == o.index; }
};
using Combination = std::map<Label, DefSeries>;

// inputs written as mu(X_{e_k}, ..., X_{e_1}): word = [e_k, ..., e_1]
Combination hlOddProduct(const Mirror& m, const std::vector<MidpointPolygon>& polys, const IdentityChoice& ids,
                         const std::vector<int>& word, int N);
// module element of arc a: odd m (index 0) or even m* (index 1); output on the other one
DefSeries mdProduct(const Mirror& m, const std::vector<MidpointPolygon>& polys, int arc, bool odd,
                    const std::vector<int>& word, int N);

}  // namespace dm
