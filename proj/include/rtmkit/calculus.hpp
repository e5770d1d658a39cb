#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rtmkit/lts.hpp"

namespace rtmkit {

struct ProcessExpr;
using PExpr = std::shared_ptr<const ProcessExpr>;

// Deadlock 0, skip 1, action prefix, binary choice, channel-restricted
// parallel composition and name references.
struct ProcessExpr {
    enum class Kind { Deadlock, Skip, Prefix, Choice, Par, Name };
    Kind kind = Kind::Deadlock;
    Action action;                   // Prefix
    PExpr left, right;               // Prefix uses left as the body
    std::set<std::string> channels;  // Par
    std::string name;                // Name
};

PExpr deadlock();
PExpr skip();
PExpr prefix(Action a, PExpr body);
PExpr choice(PExpr l, PExpr r);
PExpr par(std::set<std::string> channels, PExpr l, PExpr r);
PExpr name_ref(std::string name);

// Right-folded choice over the summands, with an optional trailing skip
// summand; the empty summation is deadlock.
PExpr sum_right(const std::vector<PExpr>& summands, bool plus_skip);

struct RecSpec {
    std::map<std::string, PExpr> equations;
};

// Canonical printing: stable parenthesisation, sorted channel sets. Parsing
// the result yields a structurally identical tree.
std::string print_expr(const PExpr& e);

// .tcp text: one `Name = expr` line per equation plus a `root: expr` line.
std::string write_tcp(const RecSpec& spec, const PExpr& root);

PExpr parse_expr_text(const std::string& text);

// Parses a .tcp file; reports syntax errors with line/column, undefined
// names and duplicate defining equations.
std::pair<RecSpec, PExpr> parse_tcp(const std::string& text);

// The termination predicate of the operational rules; name cycles contribute
// false (least fixpoint reading).
bool terminates(const RecSpec& spec, const PExpr& p);

// All transitions derivable by the operational rules, canonically ordered.
// Throws "unguarded recursion at name N" when a name unfolds into itself
// without passing an action prefix.
std::vector<std::pair<Action, PExpr>> sos_out(const RecSpec& spec, const PExpr& p);

// Transition system over process expressions; states are identified by their
// canonical printed form.
LtsGenerator lts_of(const RecSpec& spec, const PExpr& p);

}  // namespace rtmkit
