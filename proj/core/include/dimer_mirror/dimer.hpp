#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dimer_mirror/ncpoly.hpp"

namespace dm {

struct ArcEnd {
    int arc = 0;
    bool head = false;
    bool operator==(const ArcEnd& o) const { return arc == o.arc && head == o.head; }
};

struct Arc {
    std::string id;
    int tail = 0;
    int head = 0;
};

// A face stored as its directed cycle x1 -> x2 -> ... with head(xi) == tail(xi+1).
struct Face {
    std::vector<int> cycle;
    bool clockwise = false;
};

enum class Turn { Left = 0, Right = 1 };
inline Turn flip(Turn t) { return t == Turn::Left ? Turn::Right : Turn::Left; }
inline char turnChar(Turn t) { return t == Turn::Left ? 'L' : 'R'; }

struct Step {
    int arc = 0;
    Turn turn = Turn::Left;
    bool operator==(const Step& o) const { return arc == o.arc && turn == o.turn; }
    bool operator<(const Step& o) const { return arc != o.arc ? arc < o.arc : turn < o.turn; }
};

struct ZigzagPath {
    std::string name;
    std::vector<Step> steps;  // canonical rotation
    int identityLocation = 0;
    int coidentityLocation = 0;  // angle index: the angle after steps[i]

    int indexOf(Step s) const;  // -1 if absent
};

class Dimer {
public:
    Dimer() = default;

    const std::vector<std::string>& punctures() const { return punctures_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    const std::vector<std::vector<ArcEnd>>& rotation() const { return rotation_; }
    const std::vector<Face>& faces() const { return faces_; }
    const std::string& name() const { return name_; }
    void setName(std::string n) { name_ = std::move(n); }

    int puncture(const std::string& id) const;
    int arc(const std::string& id) const;
    int cwFace(int arc) const { return cwFace_[arc]; }
    int ccwFace(int arc) const { return ccwFace_[arc]; }
    int positionInFace(int face, int arc) const;  // index in the face cycle
    int eulerCharacteristic() const;
    int genus() const { return (2 - eulerCharacteristic()) / 2; }
    int maxFaceLength() const;
    int maxDegree() const;

    // successor of an arc within its clockwise / counterclockwise face
    int nextInFace(int arc, bool clockwise) const;
    int prevInFace(int arc, bool clockwise) const;

    // Zigzag successor: after (x, Right) comes (next in cw face, Left).
    Step next(Step s) const;
    Step prev(Step s) const;

    // quiver of Q itself; deformation variables are q<puncture>
    QuiverPtr quiver() const;
    std::vector<std::string> varNames() const;

    std::string serialize() const;

    friend Dimer buildDimer(const std::string& text);
    friend Dimer fromRotation(std::vector<std::string>, std::vector<Arc>,
                              std::vector<std::vector<ArcEnd>>, std::string);

private:
    void derive();

    std::string name_;
    std::vector<std::string> punctures_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<ArcEnd>> rotation_;
    std::vector<Face> faces_;
    std::vector<int> cwFace_, ccwFace_;
};

// Text format: "punctures:", "arc <id> <tail> <head>", "rot <p>: <a>.h <b>.t ..."
// listed counterclockwise; '#' comments. Built-in names sphere3, torus4, Q<M>
// are also accepted.
Dimer buildDimer(const std::string& text);
Dimer fromRotation(std::vector<std::string> punctures, std::vector<Arc> arcs,
                   std::vector<std::vector<ArcEnd>> rotation, std::string name);
Dimer loadDimer(const std::string& fileOrBuiltin);
Dimer standardSphereDimer(int m);
Dimer sphere3();
Dimer torus4();
std::optional<std::string> builtinText(const std::string& name);

std::vector<ZigzagPath> zigzagPaths(const Dimer& d);
int zigzagOf(const std::vector<ZigzagPath>& zz, Step s);  // index of the path containing s
std::string zigzagStr(const Dimer& d, const ZigzagPath& z);

// ------------------------------------------------------------------- covers

// Integer cocycle on arcs whose face sums vanish; nonzero on 2g generators.
// Only computed for genus <= 1.
struct TorusCoords {
    std::vector<std::array<long, 2>> w;  // per arc
};
std::optional<TorusCoords> torusCoordinates(const Dimer& d);

struct LiftedFace {
    int face = 0;
    std::array<long, 2> offset{0, 0};  // deck coordinates (torus only)
    std::vector<int> neighbor;         // per position in the face cycle, -1 if outside
    int depth = 0;
};

struct CoverPatch {
    std::vector<LiftedFace> faces;
    int basepoint = 0;
    bool hasDeckCoordinates = false;
};

CoverPatch developCover(const Dimer& d, int radius);

enum class Consistency { Certified, UpToDepth, Inconsistent };

struct ConsistencyVerdict {
    Consistency kind = Consistency::UpToDepth;
    int depth = 0;
    // witness: a lifted arc a with a_i^k == a_j^l
    int arc = -1;
    int rayK = 0, indexI = 0, rayL = 0, indexJ = 0;
    std::string str(const Dimer& d) const;
};

ConsistencyVerdict checkGeometricConsistency(const Dimer& d, int depth);

}  // namespace dm
