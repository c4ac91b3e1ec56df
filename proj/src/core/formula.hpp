#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gml {

/// Unbounded integer. Graded subscripts use binary coding, so values like
/// 2^n must stay cheap to represent.
using Int = boost::multiprecision::cpp_int;

/// Proposition letters are identifiers: a lowercase letter followed by
/// alphanumerics or underscores.
using PropLetter = std::string;

enum class Op {
    True,
    False,
    Letter,
    Not,
    And,
    Or,
    Implies,
    Iff,
    AtLeast,  // dia>=C
    AtMost,   // dia<=C
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable graded modal formula. box/dia/boxdot are surface syntax only;
/// they are desugared at construction time and never appear as nodes.
class Formula {
public:
    Op op() const { return op_; }
    const PropLetter& name() const { return name_; }
    const Int& count() const { return count_; }
    const FormulaPtr& lhs() const { return lhs_; }
    const FormulaPtr& rhs() const { return rhs_; }

    /// Operand of Not/AtLeast/AtMost.
    const FormulaPtr& child() const { return lhs_; }

    static FormulaPtr make(Op op, PropLetter name, Int count, FormulaPtr lhs,
                           FormulaPtr rhs);

private:
    Formula() = default;
    Op op_ = Op::True;
    PropLetter name_;
    Int count_;
    FormulaPtr lhs_;
    FormulaPtr rhs_;
};

FormulaPtr mk_true();
FormulaPtr mk_false();
FormulaPtr mk_letter(PropLetter name);
FormulaPtr mk_not(FormulaPtr a);
FormulaPtr mk_and(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_at_least(Int count, FormulaPtr a);
FormulaPtr mk_at_most(Int count, FormulaPtr a);

/// box f == dia<=0 ~f
FormulaPtr mk_box(FormulaPtr a);
/// dia f == dia>=1 f
FormulaPtr mk_dia(FormulaPtr a);
/// boxdot f == f & box f
FormulaPtr mk_boxdot(FormulaPtr a);

/// Conjunction of a list; `true` when empty.
FormulaPtr mk_conj(const std::vector<FormulaPtr>& fs);
/// Disjunction of a list; `false` when empty.
FormulaPtr mk_disj(const std::vector<FormulaPtr>& fs);

bool equal(const FormulaPtr& a, const FormulaPtr& b);
std::size_t hash_value(const FormulaPtr& f);

struct FormulaHash {
    std::size_t operator()(const FormulaPtr& f) const { return hash_value(f); }
};
struct FormulaEq {
    bool operator()(const FormulaPtr& a, const FormulaPtr& b) const {
        return equal(a, b);
    }
};

struct ParseError : std::runtime_error {
    ParseError(std::string msg, int line, int column);
    int line;
    int column;
};

/// Parses the ASCII grammar: identifiers, ~ & | -> <->, parentheses,
/// dia>=C / dia<=C with C a decimal natural, sugar box/dia/boxdot, and the
/// literals true/false. Whitespace-insensitive. Throws ParseError.
FormulaPtr parse(const std::string& text);

/// Inverse of parse up to structural equality: parse(render(f)) == f.
std::string render(const FormulaPtr& f);

/// Symbol count: 1 per connective or letter occurrence, plus the bit length
/// of each subscript (1 symbol for a zero subscript).
unsigned long long formula_size(const FormulaPtr& f);

std::set<PropLetter> letters(const FormulaPtr& f);

/// True iff f contains no graded operator.
bool is_propositional(const FormulaPtr& f);

/// n pairwise-distinct letters outside `avoid`, deterministic in its inputs.
std::vector<PropLetter> fresh_letters(std::size_t n,
                                      const std::set<PropLetter>& avoid);

}  // namespace gml
