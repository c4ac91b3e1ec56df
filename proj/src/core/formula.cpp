#include "core/formula.hpp"

#include <cctype>
#include <functional>
#include <sstream>
#include <utility>

namespace gml {

FormulaPtr Formula::make(Op op, PropLetter name, Int count, FormulaPtr lhs,
                         FormulaPtr rhs) {
    auto f = std::shared_ptr<Formula>(new Formula());
    f->op_ = op;
    f->name_ = std::move(name);
    f->count_ = std::move(count);
    f->lhs_ = std::move(lhs);
    f->rhs_ = std::move(rhs);
    return f;
}

FormulaPtr mk_true() {
    static const FormulaPtr t = Formula::make(Op::True, "", 0, nullptr, nullptr);
    return t;
}

FormulaPtr mk_false() {
    static const FormulaPtr f =
        Formula::make(Op::False, "", 0, nullptr, nullptr);
    return f;
}

FormulaPtr mk_letter(PropLetter name) {
    if (name.empty() || !std::islower(static_cast<unsigned char>(name[0])))
        throw std::invalid_argument("bad proposition letter: " + name);
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            throw std::invalid_argument("bad proposition letter: " + name);
    return Formula::make(Op::Letter, std::move(name), 0, nullptr, nullptr);
}

FormulaPtr mk_not(FormulaPtr a) {
    return Formula::make(Op::Not, "", 0, std::move(a), nullptr);
}

FormulaPtr mk_and(FormulaPtr a, FormulaPtr b) {
    return Formula::make(Op::And, "", 0, std::move(a), std::move(b));
}

FormulaPtr mk_or(FormulaPtr a, FormulaPtr b) {
    return Formula::make(Op::Or, "", 0, std::move(a), std::move(b));
}

FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b) {
    return Formula::make(Op::Implies, "", 0, std::move(a), std::move(b));
}

FormulaPtr mk_iff(FormulaPtr a, FormulaPtr b) {
    return Formula::make(Op::Iff, "", 0, std::move(a), std::move(b));
}

FormulaPtr mk_at_least(Int count, FormulaPtr a) {
    if (count < 0) throw std::invalid_argument("negative subscript");
    return Formula::make(Op::AtLeast, "", std::move(count), std::move(a),
                         nullptr);
}

FormulaPtr mk_at_most(Int count, FormulaPtr a) {
    if (count < 0) throw std::invalid_argument("negative subscript");
    return Formula::make(Op::AtMost, "", std::move(count), std::move(a),
                         nullptr);
}

FormulaPtr mk_box(FormulaPtr a) { return mk_at_most(0, mk_not(std::move(a))); }

FormulaPtr mk_dia(FormulaPtr a) { return mk_at_least(1, std::move(a)); }

FormulaPtr mk_boxdot(FormulaPtr a) { return mk_and(a, mk_box(a)); }

FormulaPtr mk_conj(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return mk_true();
    FormulaPtr acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = mk_and(acc, fs[i]);
    return acc;
}

FormulaPtr mk_disj(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return mk_false();
    FormulaPtr acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = mk_or(acc, fs[i]);
    return acc;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->op() != b->op()) return false;
    switch (a->op()) {
        case Op::True:
        case Op::False:
            return true;
        case Op::Letter:
            return a->name() == b->name();
        case Op::Not:
            return equal(a->child(), b->child());
        case Op::AtLeast:
        case Op::AtMost:
            return a->count() == b->count() && equal(a->child(), b->child());
        default:
            return equal(a->lhs(), b->lhs()) && equal(a->rhs(), b->rhs());
    }
}

std::size_t hash_value(const FormulaPtr& f) {
    if (!f) return 0;
    std::size_t h = static_cast<std::size_t>(f->op()) * 0x9e3779b97f4a7c15ull;
    auto mix = [&h](std::size_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    switch (f->op()) {
        case Op::Letter:
            mix(std::hash<std::string>{}(f->name()));
            break;
        case Op::AtLeast:
        case Op::AtMost:
            mix(std::hash<std::string>{}(f->count().str()));
            mix(hash_value(f->child()));
            break;
        case Op::Not:
            mix(hash_value(f->child()));
            break;
        case Op::True:
        case Op::False:
            break;
        default:
            mix(hash_value(f->lhs()));
            mix(hash_value(f->rhs()));
            break;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

ParseError::ParseError(std::string msg, int line_, int column_)
    : std::runtime_error(msg + " at " + std::to_string(line_) + ":" +
                         std::to_string(column_)),
      line(line_),
      column(column_) {}

namespace {

enum class Tok {
    Ident,
    Number,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Geq,
    Leq,
    LParen,
    RParen,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < s_.size() &&
               std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            if (s_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
        tok_.line = line_;
        tok_.col = col_;
        tok_.text.clear();
        if (pos_ >= s_.size()) {
            tok_.kind = Tok::End;
            return;
        }
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos_ < s_.size() &&
                   std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                tok_.text.push_back(s_[pos_]);
                bump();
            }
            tok_.kind = Tok::Number;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                    s_[pos_] == '_')) {
                tok_.text.push_back(s_[pos_]);
                bump();
            }
            tok_.kind = Tok::Ident;
            return;
        }
        switch (c) {
            case '~':
                bump();
                tok_.kind = Tok::Not;
                return;
            case '&':
                bump();
                tok_.kind = Tok::And;
                return;
            case '|':
                bump();
                tok_.kind = Tok::Or;
                return;
            case '(':
                bump();
                tok_.kind = Tok::LParen;
                return;
            case ')':
                bump();
                tok_.kind = Tok::RParen;
                return;
            case '-':
                bump();
                expect('>', "expected '->'");
                tok_.kind = Tok::Implies;
                return;
            case '<':
                bump();
                if (pos_ < s_.size() && s_[pos_] == '=') {
                    bump();
                    tok_.kind = Tok::Leq;
                    return;
                }
                expect('-', "expected '<->' or '<='");
                expect('>', "expected '<->'");
                tok_.kind = Tok::Iff;
                return;
            case '>':
                bump();
                expect('=', "expected '>='");
                tok_.kind = Tok::Geq;
                return;
            default:
                throw ParseError(std::string("unexpected character '") + c +
                                     "'",
                                 line_, col_);
        }
    }

    void bump() {
        ++pos_;
        ++col_;
    }

    void expect(char c, const char* msg) {
        if (pos_ >= s_.size() || s_[pos_] != c)
            throw ParseError(msg, line_, col_);
        bump();
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token tok_{Tok::End, "", 1, 1};
};

class Parser {
public:
    explicit Parser(const std::string& s) : lex_(s) {}

    FormulaPtr run() {
        FormulaPtr f = parse_iff();
        const Token& t = lex_.peek();
        if (t.kind != Tok::End)
            throw ParseError("unexpected trailing input", t.line, t.col);
        return f;
    }

private:
    FormulaPtr parse_iff() {
        FormulaPtr a = parse_implies();
        if (lex_.peek().kind == Tok::Iff) {
            lex_.take();
            return mk_iff(a, parse_iff());
        }
        return a;
    }

    FormulaPtr parse_implies() {
        FormulaPtr a = parse_or();
        if (lex_.peek().kind == Tok::Implies) {
            lex_.take();
            return mk_implies(a, parse_implies());
        }
        return a;
    }

    FormulaPtr parse_or() {
        FormulaPtr a = parse_and();
        while (lex_.peek().kind == Tok::Or) {
            lex_.take();
            a = mk_or(a, parse_and());
        }
        return a;
    }

    FormulaPtr parse_and() {
        FormulaPtr a = parse_unary();
        while (lex_.peek().kind == Tok::And) {
            lex_.take();
            a = mk_and(a, parse_unary());
        }
        return a;
    }

    FormulaPtr parse_unary() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Not) {
            lex_.take();
            return mk_not(parse_unary());
        }
        if (t.kind == Tok::Ident) {
            if (t.text == "dia") {
                lex_.take();
                Tok k = lex_.peek().kind;
                if (k == Tok::Geq || k == Tok::Leq) {
                    lex_.take();
                    Int c = parse_subscript();
                    FormulaPtr body = parse_unary();
                    return k == Tok::Geq ? mk_at_least(c, body)
                                         : mk_at_most(c, body);
                }
                return mk_dia(parse_unary());
            }
            if (t.text == "box") {
                lex_.take();
                return mk_box(parse_unary());
            }
            if (t.text == "boxdot") {
                lex_.take();
                return mk_boxdot(parse_unary());
            }
        }
        return parse_primary();
    }

    Int parse_subscript() {
        const Token& t = lex_.peek();
        if (t.kind != Tok::Number)
            throw ParseError("malformed subscript: expected a decimal natural",
                             t.line, t.col);
        return Int(lex_.take().text);
    }

    FormulaPtr parse_primary() {
        Token t = lex_.take();
        switch (t.kind) {
            case Tok::Ident:
                if (t.text == "true") return mk_true();
                if (t.text == "false") return mk_false();
                if (!std::islower(static_cast<unsigned char>(t.text[0])))
                    throw ParseError("proposition letters start lowercase",
                                     t.line, t.col);
                return mk_letter(t.text);
            case Tok::LParen: {
                FormulaPtr f = parse_iff();
                const Token& r = lex_.peek();
                if (r.kind != Tok::RParen)
                    throw ParseError("expected ')'", r.line, r.col);
                lex_.take();
                return f;
            }
            default:
                throw ParseError("expected a formula", t.line, t.col);
        }
    }

    Lexer lex_;
};

}  // namespace

FormulaPtr parse(const std::string& text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

// Precedence levels, loosest first: <-> 1, -> 2, | 3, & 4, unary 5, atom 6.
int precedence(Op op) {
    switch (op) {
        case Op::Iff:
            return 1;
        case Op::Implies:
            return 2;
        case Op::Or:
            return 3;
        case Op::And:
            return 4;
        case Op::Not:
        case Op::AtLeast:
        case Op::AtMost:
            return 5;
        default:
            return 6;
    }
}

void render_into(const FormulaPtr& f, int min_prec, std::string& out) {
    int prec = precedence(f->op());
    bool parens = prec < min_prec;
    if (parens) out.push_back('(');
    switch (f->op()) {
        case Op::True:
            out += "true";
            break;
        case Op::False:
            out += "false";
            break;
        case Op::Letter:
            out += f->name();
            break;
        case Op::Not:
            out.push_back('~');
            render_into(f->child(), 5, out);
            break;
        case Op::AtLeast:
        case Op::AtMost:
            out += f->op() == Op::AtLeast ? "dia>=" : "dia<=";
            out += f->count().str();
            out.push_back(' ');
            render_into(f->child(), 5, out);
            break;
        case Op::And:
            render_into(f->lhs(), 4, out);
            out += " & ";
            render_into(f->rhs(), 5, out);
            break;
        case Op::Or:
            render_into(f->lhs(), 3, out);
            out += " | ";
            render_into(f->rhs(), 4, out);
            break;
        case Op::Implies:
            render_into(f->lhs(), 3, out);
            out += " -> ";
            render_into(f->rhs(), 2, out);
            break;
        case Op::Iff:
            render_into(f->lhs(), 2, out);
            out += " <-> ";
            render_into(f->rhs(), 1, out);
            break;
    }
    if (parens) out.push_back(')');
}

}  // namespace

std::string render(const FormulaPtr& f) {
    std::string out;
    render_into(f, 0, out);
    return out;
}

unsigned long long formula_size(const FormulaPtr& f) {
    switch (f->op()) {
        case Op::True:
        case Op::False:
        case Op::Letter:
            return 1;
        case Op::Not:
            return 1 + formula_size(f->child());
        case Op::AtLeast:
        case Op::AtMost: {
            unsigned long long bits =
                f->count() == 0
                    ? 1
                    : boost::multiprecision::msb(f->count()) + 1;
            return 1 + bits + formula_size(f->child());
        }
        default:
            return 1 + formula_size(f->lhs()) + formula_size(f->rhs());
    }
}

namespace {
void collect_letters(const FormulaPtr& f, std::set<PropLetter>& out) {
    switch (f->op()) {
        case Op::Letter:
            out.insert(f->name());
            break;
        case Op::Not:
        case Op::AtLeast:
        case Op::AtMost:
            collect_letters(f->child(), out);
            break;
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            collect_letters(f->lhs(), out);
            collect_letters(f->rhs(), out);
            break;
        default:
            break;
    }
}
}  // namespace

std::set<PropLetter> letters(const FormulaPtr& f) {
    std::set<PropLetter> out;
    collect_letters(f, out);
    return out;
}

bool is_propositional(const FormulaPtr& f) {
    switch (f->op()) {
        case Op::AtLeast:
        case Op::AtMost:
            return false;
        case Op::Not:
            return is_propositional(f->child());
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            return is_propositional(f->lhs()) && is_propositional(f->rhs());
        default:
            return true;
    }
}

std::vector<PropLetter> fresh_letters(std::size_t n,
                                      const std::set<PropLetter>& avoid) {
    std::vector<PropLetter> out;
    out.reserve(n);
    for (unsigned long long k = 1; out.size() < n; ++k) {
        PropLetter cand = "g" + std::to_string(k);
        if (!avoid.count(cand)) out.push_back(cand);
    }
    return out;
}

}  // namespace gml
