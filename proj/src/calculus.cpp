#include "rtmkit/calculus.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "rtmkit/formats.hpp"

namespace rtmkit {

PExpr deadlock() {
    static PExpr d = std::make_shared<ProcessExpr>(ProcessExpr{ProcessExpr::Kind::Deadlock});
    return d;
}

PExpr skip() {
    static PExpr s = std::make_shared<ProcessExpr>(ProcessExpr{ProcessExpr::Kind::Skip});
    return s;
}

PExpr prefix(Action a, PExpr body) {
    auto e = std::make_shared<ProcessExpr>();
    e->kind = ProcessExpr::Kind::Prefix;
    e->action = std::move(a);
    e->left = std::move(body);
    return e;
}

PExpr choice(PExpr l, PExpr r) {
    auto e = std::make_shared<ProcessExpr>();
    e->kind = ProcessExpr::Kind::Choice;
    e->left = std::move(l);
    e->right = std::move(r);
    return e;
}

PExpr par(std::set<std::string> channels, PExpr l, PExpr r) {
    auto e = std::make_shared<ProcessExpr>();
    e->kind = ProcessExpr::Kind::Par;
    e->channels = std::move(channels);
    e->left = std::move(l);
    e->right = std::move(r);
    return e;
}

PExpr name_ref(std::string name) {
    auto e = std::make_shared<ProcessExpr>();
    e->kind = ProcessExpr::Kind::Name;
    e->name = std::move(name);
    return e;
}

PExpr sum_right(const std::vector<PExpr>& summands, bool plus_skip) {
    PExpr acc = plus_skip ? skip() : nullptr;
    for (auto it = summands.rbegin(); it != summands.rend(); ++it)
        acc = acc ? choice(*it, acc) : *it;
    return acc ? acc : deadlock();
}

namespace {

void print_rec(const PExpr& e, std::string& out, bool parenthesise_choice) {
    switch (e->kind) {
        case ProcessExpr::Kind::Deadlock:
            out += '0';
            return;
        case ProcessExpr::Kind::Skip:
            out += '1';
            return;
        case ProcessExpr::Kind::Name:
            out += e->name;
            return;
        case ProcessExpr::Kind::Prefix: {
            out += e->action.label();
            out += '.';
            bool paren = e->left->kind == ProcessExpr::Kind::Choice;
            if (paren) out += '(';
            print_rec(e->left, out, false);
            if (paren) out += ')';
            return;
        }
        case ProcessExpr::Kind::Choice: {
            if (parenthesise_choice) out += '(';
            print_rec(e->left, out, false);
            out += " + ";
            // Right operand keeps explicit parentheses so the left-associated
            // reading reproduces the tree.
            print_rec(e->right, out, true);
            if (parenthesise_choice) out += ')';
            return;
        }
        case ProcessExpr::Kind::Par: {
            out += '<';
            print_rec(e->left, out, false);
            out += " || ";
            print_rec(e->right, out, false);
            out += ">_{";
            bool first = true;
            for (const auto& c : e->channels) {
                if (!first) out += ',';
                out += c;
                first = false;
            }
            out += '}';
            return;
        }
    }
}

struct Token {
    enum class Kind { Ident, Punct, End } kind = Kind::End;
    std::string text;
    int line = 1;
    int column = 1;
};

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#' || c == '$' ||
           c == '@' || c == '\'';
}

class Lexer {
  public:
    Lexer(const std::string& text, int first_line) : text_(text), line_(first_line) {}

    Token next() {
        skip_ws();
        Token t;
        t.line = line_;
        t.column = column_;
        if (pos_ >= text_.size()) return t;
        char c = text_[pos_];
        if (ident_char(c)) {
            t.kind = Token::Kind::Ident;
            while (pos_ < text_.size() && ident_char(text_[pos_])) t.text += advance();
            return t;
        }
        t.kind = Token::Kind::Punct;
        if (c == '|' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '|') {
            t.text = "||";
            advance();
            advance();
            return t;
        }
        t.text = advance();
        return t;
    }

  private:
    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }
    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '\n')
            advance();
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_;
    int column_ = 1;
};

class ExprParser {
  public:
    ExprParser(const std::string& text, int first_line) : lexer_(text, first_line) {
        cur_ = lexer_.next();
        ahead_ = lexer_.next();
    }

    PExpr parse_full() {
        PExpr e = parse_choice();
        if (cur_.kind != Token::Kind::End)
            throw ParseError("unexpected token '" + cur_.text + "'", cur_.line, cur_.column);
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(msg, cur_.line, cur_.column);
    }

    void bump() {
        cur_ = ahead_;
        ahead_ = lexer_.next();
    }

    bool punct(const std::string& p) const {
        return cur_.kind == Token::Kind::Punct && cur_.text == p;
    }

    void expect_punct(const std::string& p) {
        if (!punct(p)) fail("expected '" + p + "'");
        bump();
    }

    PExpr parse_choice() {
        PExpr e = parse_prefix();
        while (punct("+")) {
            bump();
            e = choice(e, parse_prefix());
        }
        return e;
    }

    bool at_action_prefix() const {
        if (cur_.kind != Token::Kind::Ident) return false;
        if (ahead_.kind != Token::Kind::Punct) return false;
        return ahead_.text == "." || ahead_.text == "!" || ahead_.text == "?";
    }

    PExpr parse_prefix() {
        if (!at_action_prefix()) return parse_atom();
        std::string first = cur_.text;
        bump();
        Action a;
        if (punct("!") || punct("?")) {
            bool send = punct("!");
            bump();
            if (cur_.kind != Token::Kind::Ident) fail("expected datum after channel");
            a = send ? Action::send(first, cur_.text) : Action::recv(first, cur_.text);
            bump();
        } else {
            a = first == "tau" ? Action::tau() : Action::plain(first);
        }
        expect_punct(".");
        return prefix(a, parse_prefix());
    }

    PExpr parse_atom() {
        if (cur_.kind == Token::Kind::Ident) {
            std::string id = cur_.text;
            bump();
            if (id == "0") return deadlock();
            if (id == "1") return skip();
            if (id == "tau") fail("'tau' must prefix an expression");
            return name_ref(id);
        }
        if (punct("(")) {
            bump();
            PExpr e = parse_choice();
            expect_punct(")");
            return e;
        }
        if (punct("<")) {
            bump();
            PExpr l = parse_choice();
            expect_punct("||");
            PExpr r = parse_choice();
            expect_punct(">");
            if (cur_.kind != Token::Kind::Ident || cur_.text != "_")
                fail("expected '_{' after '>'");
            bump();
            expect_punct("{");
            std::set<std::string> channels;
            if (!punct("}")) {
                while (true) {
                    if (cur_.kind != Token::Kind::Ident) fail("expected channel name");
                    channels.insert(cur_.text);
                    bump();
                    if (punct(",")) {
                        bump();
                        continue;
                    }
                    break;
                }
            }
            expect_punct("}");
            return par(std::move(channels), std::move(l), std::move(r));
        }
        fail("expected a process expression");
    }

    Lexer lexer_;
    Token cur_, ahead_;
};

void collect_names(const PExpr& e, std::set<std::string>& names) {
    switch (e->kind) {
        case ProcessExpr::Kind::Name:
            names.insert(e->name);
            return;
        case ProcessExpr::Kind::Prefix:
            collect_names(e->left, names);
            return;
        case ProcessExpr::Kind::Choice:
        case ProcessExpr::Kind::Par:
            collect_names(e->left, names);
            collect_names(e->right, names);
            return;
        default:
            return;
    }
}

bool terminates_rec(const RecSpec& spec, const PExpr& p, std::set<std::string>& active) {
    switch (p->kind) {
        case ProcessExpr::Kind::Deadlock:
        case ProcessExpr::Kind::Prefix:
            return false;
        case ProcessExpr::Kind::Skip:
            return true;
        case ProcessExpr::Kind::Choice:
            return terminates_rec(spec, p->left, active) || terminates_rec(spec, p->right, active);
        case ProcessExpr::Kind::Par:
            return terminates_rec(spec, p->left, active) && terminates_rec(spec, p->right, active);
        case ProcessExpr::Kind::Name: {
            if (active.count(p->name)) return false;
            auto it = spec.equations.find(p->name);
            if (it == spec.equations.end())
                throw std::runtime_error("undefined name '" + p->name + "'");
            active.insert(p->name);
            bool result = terminates_rec(spec, it->second, active);
            active.erase(p->name);
            return result;
        }
    }
    return false;
}

std::vector<std::pair<Action, PExpr>> sos_out_rec(const RecSpec& spec, const PExpr& p,
                                                  std::set<std::string>& active) {
    std::vector<std::pair<Action, PExpr>> result;
    switch (p->kind) {
        case ProcessExpr::Kind::Deadlock:
        case ProcessExpr::Kind::Skip:
            return result;
        case ProcessExpr::Kind::Prefix:
            result.push_back({p->action, p->left});
            return result;
        case ProcessExpr::Kind::Choice: {
            result = sos_out_rec(spec, p->left, active);
            auto right = sos_out_rec(spec, p->right, active);
            result.insert(result.end(), right.begin(), right.end());
            return result;
        }
        case ProcessExpr::Kind::Par: {
            auto left = sos_out_rec(spec, p->left, active);
            auto right = sos_out_rec(spec, p->right, active);
            auto blocked = [&p](const Action& a) {
                return a.is_comm() && p->channels.count(a.channel) != 0;
            };
            for (const auto& [a, l2] : left)
                if (!blocked(a)) result.push_back({a, par(p->channels, l2, p->right)});
            for (const auto& [a, r2] : right)
                if (!blocked(a)) result.push_back({a, par(p->channels, p->left, r2)});
            for (const auto& [a, l2] : left) {
                if (!blocked(a)) continue;
                for (const auto& [b, r2] : right) {
                    if (!blocked(b)) continue;
                    if (a.channel == b.channel && a.datum == b.datum && a.kind != b.kind)
                        result.push_back({Action::tau(), par(p->channels, l2, r2)});
                }
            }
            return result;
        }
        case ProcessExpr::Kind::Name: {
            if (active.count(p->name))
                throw std::runtime_error("unguarded recursion at name " + p->name);
            auto it = spec.equations.find(p->name);
            if (it == spec.equations.end())
                throw std::runtime_error("undefined name '" + p->name + "'");
            active.insert(p->name);
            result = sos_out_rec(spec, it->second, active);
            active.erase(p->name);
            return result;
        }
    }
    return result;
}

}  // namespace

std::string print_expr(const PExpr& e) {
    std::string out;
    print_rec(e, out, false);
    return out;
}

std::string write_tcp(const RecSpec& spec, const PExpr& root) {
    std::ostringstream out;
    for (const auto& [name, body] : spec.equations) out << name << " = " << print_expr(body) << '\n';
    out << "root: " << print_expr(root) << '\n';
    return out.str();
}

PExpr parse_expr_text(const std::string& text) { return ExprParser(text, 1).parse_full(); }

std::pair<RecSpec, PExpr> parse_tcp(const std::string& text) {
    RecSpec spec;
    PExpr root;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        if (trimmed.empty()) continue;
        if (trimmed.rfind("root:", 0) == 0) {
            if (root) throw ParseError("duplicate root line", lineno);
            root = ExprParser(trimmed.substr(5), lineno).parse_full();
            continue;
        }
        auto eq = trimmed.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'Name = expr'", lineno);
        std::string name = trimmed.substr(0, eq);
        name.erase(name.find_last_not_of(" \t") + 1);
        if (name.empty() || !std::all_of(name.begin(), name.end(), ident_char))
            throw ParseError("malformed equation name '" + name + "'", lineno);
        if (name == "0" || name == "1" || name == "tau")
            throw ParseError("reserved word used as equation name", lineno);
        if (spec.equations.count(name))
            throw ParseError("duplicate defining equation for " + name, lineno);
        spec.equations[name] = ExprParser(trimmed.substr(eq + 1), lineno).parse_full();
    }
    if (!root) throw ParseError("missing root: line", lineno ? lineno : 1);

    std::set<std::string> used;
    collect_names(root, used);
    for (const auto& [name, body] : spec.equations) collect_names(body, used);
    for (const auto& n : used)
        if (!spec.equations.count(n)) throw ParseError("undefined name '" + n + "'", 1);
    return {std::move(spec), std::move(root)};
}

bool terminates(const RecSpec& spec, const PExpr& p) {
    std::set<std::string> active;
    return terminates_rec(spec, p, active);
}

std::vector<std::pair<Action, PExpr>> sos_out(const RecSpec& spec, const PExpr& p) {
    std::set<std::string> active;
    auto result = sos_out_rec(spec, p, active);
    std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return print_expr(a.second) < print_expr(b.second);
    });
    result.erase(std::unique(result.begin(), result.end(),
                             [](const auto& a, const auto& b) {
                                 return a.first == b.first &&
                                        print_expr(a.second) == print_expr(b.second);
                             }),
                 result.end());
    return result;
}

LtsGenerator lts_of(const RecSpec& spec, const PExpr& p) {
    LtsGenerator gen;
    gen.initial = print_expr(p);
    gen.out = [spec](const State& s) {
        PExpr e = parse_expr_text(s);
        std::vector<Step> steps;
        for (const auto& [a, q] : sos_out(spec, e)) steps.push_back({a, print_expr(q)});
        return steps;
    };
    gen.fin = [spec](const State& s) { return terminates(spec, parse_expr_text(s)); };
    return gen;
}

}  // namespace rtmkit
