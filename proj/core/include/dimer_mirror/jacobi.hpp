#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "dimer_mirror/dimer.hpp"
#include "dimer_mirror/ncpoly.hpp"

namespace dm {

// Interchangeable words: any occurrence of one member of a group may be
// replaced by any other member of the same group.
struct FlipRules {
    std::vector<std::vector<std::vector<int>>> groups;
};

// r_e^+ <-> r_e^- for every arc, read off the faces of d itself
FlipRules dimerFlipRules(const Dimer& d);
// the paths occurring together in one basis element are related
FlipRules rawFlipRules(const std::vector<NCPoly>& basis);

// word of a face: product notation, the last arc of the cycle leftmost
std::vector<int> faceWord(const Dimer& d, int face);

struct FtermClass {
    Path representative;
    std::set<Path> members;
    bool saturated = true;
};

FtermClass ftermClass(const Path& p, const FlipRules& rules, int lengthCap, size_t memberCap = 200000);
FtermClass ftermClass(const Path& p, const Dimer& d, int lengthCap);

struct JacobiElement {
    NCPoly value;
    bool reduced = false;
};

// Memoising normal-form engine; concurrent readers are fine.
class JacobiContext {
public:
    JacobiContext(FlipRules rules, int lengthCap) : rules_(std::move(rules)), cap_(lengthCap) {}
    JacobiContext(const Dimer& d, int lengthCap) : JacobiContext(dimerFlipRules(d), lengthCap) {}

    Path representative(const Path& p);  // throws CLASS_UNBOUNDED_SUSPECTED
    JacobiElement normalForm(const NCPoly& x);
    bool equal(const NCPoly& x, const NCPoly& y) { return normalForm(x - y).value.isZero(); }
    int lengthCap() const { return cap_; }

private:
    FlipRules rules_;
    int cap_;
    std::mutex mu_;
    std::map<Path, Path> rep_;
};

JacobiElement normalForm(const NCPoly& x, const Dimer& d, int lengthCap);

// Paths here live in d's own quiver; z is one of d's zigzag paths.
bool isLFree(const Dimer& d, const Path& p);
int crossingCount(const Dimer& d, const Path& p, const ZigzagPath& z);

std::vector<std::vector<int>> perfectMatchings(const Dimer& d);

struct BoundedVerdict {
    enum Kind { Certified, UpToCap, UnboundedSuspected } kind = UpToCap;
    std::string reason;
    std::vector<Path> witness;
    std::string str(const Quiver& q) const;
};

BoundedVerdict boundedTypeCheck(const Dimer& d, int lengthCap, bool cancellationConsistent = true);
BoundedVerdict boundedTypeCheckRaw(const std::vector<NCPoly>& basis, int lengthCap);

// one summand m * p * relations[rel] * s of an ideal combination
struct IdealTerm {
    mpq_class coeff;
    Monomial mono;
    Path left;
    int relation = 0;
    Path right;
};

struct MembershipVerdict {
    bool member = false;
    std::vector<IdealTerm> combination;
    size_t generators = 0;
    std::string str(const Quiver& q) const;
};

MembershipVerdict idealMembershipTruncated(const NCPoly& x, const std::vector<NCPoly>& relations,
                                           int qOrder, int lengthCap);
// recomputes sum of the combination, for auditing verdicts
NCPoly evaluateCombination(const std::vector<IdealTerm>& c, const std::vector<NCPoly>& relations, int qOrder);

struct FlatnessVerdict {
    bool quasiFlat = true;
    NCPoly witness;
    std::string str() const;
};

FlatnessVerdict quasiFlatCheckTruncated(const std::vector<NCPoly>& relations, int qOrder, int lengthCap);

int defaultLengthCap(const Dimer& d, int qOrder);

}  // namespace dm
