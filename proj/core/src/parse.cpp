#include "fcvm/parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <vector>

#include "fcvm/validate.hpp"

namespace fcvm {

namespace {

enum class Tok {
    LowerIdent,
    UpperIdent,
    Integer,
    Equals,
    Pipe,
    Question,
    Semicolon,
    Comma,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Arrow,
    Newline,  // only at bracket depth 0; separates top-level items
    KwData,
    KwLet,
    KwIn,
    KwFree,
    KwCase,
    KwOf,
    KwFail,
    KwApply,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    std::int64_t value = 0;
    SourceLocation loc;
};

constexpr int kMaxNesting = 2000;

struct Lexer {
    std::string_view src;
    std::string file;
    std::size_t pos = 0;
    int line = 1, col = 1;
    int depth = 0;

    SourceLocation here() const { return SourceLocation{file, line, col}; }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(here(), msg); }

    char peek() const { return pos < src.size() ? src[pos] : '\0'; }
    char peek2() const { return pos + 1 < src.size() ? src[pos + 1] : '\0'; }

    void advance() {
        if (pos >= src.size()) return;
        if (src[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    static Tok keyword(const std::string& s) {
        if (s == "data") return Tok::KwData;
        if (s == "let") return Tok::KwLet;
        if (s == "in") return Tok::KwIn;
        if (s == "free") return Tok::KwFree;
        if (s == "case") return Tok::KwCase;
        if (s == "of") return Tok::KwOf;
        if (s == "fail") return Tok::KwFail;
        if (s == "apply") return Tok::KwApply;
        return Tok::End;
    }

    std::vector<Token> run() {
        std::vector<Token> out;
        bool line_has_tokens = false;
        auto emit = [&](Token t) {
            out.push_back(std::move(t));
            line_has_tokens = true;
        };
        while (pos < src.size()) {
            char c = peek();
            if (c == '\n') {
                if (depth == 0 && line_has_tokens) out.push_back({Tok::Newline, "\n", 0, here()});
                line_has_tokens = false;
                advance();
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r') {
                advance();
                continue;
            }
            if (c == '-' && peek2() == '-') {
                while (pos < src.size() && peek() != '\n') advance();
                continue;
            }
            SourceLocation loc = here();
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::string text;
                while (pos < src.size()) {
                    char d = peek();
                    if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'') {
                        text += d;
                        advance();
                    } else {
                        break;
                    }
                }
                Tok kw = keyword(text);
                if (kw != Tok::End) {
                    emit({kw, text, 0, loc});
                } else if (std::isupper(static_cast<unsigned char>(text[0]))) {
                    emit({Tok::UpperIdent, text, 0, loc});
                } else {
                    emit({Tok::LowerIdent, text, 0, loc});
                }
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) ||
                (c == '-' && std::isdigit(static_cast<unsigned char>(peek2())))) {
                bool neg = c == '-';
                if (neg) advance();
                unsigned long long acc = 0;
                while (pos < src.size() && std::isdigit(static_cast<unsigned char>(peek()))) {
                    acc = acc * 10 + static_cast<unsigned long long>(peek() - '0');
                    if (acc > (1ull << 63)) throw ParseError(loc, "integer literal out of range");
                    advance();
                }
                if (!neg && acc > 0x7fffffffffffffffULL)
                    throw ParseError(loc, "integer literal out of range");
                std::int64_t v = neg ? static_cast<std::int64_t>(-acc)
                                     : static_cast<std::int64_t>(acc);
                emit({Tok::Integer, "", v, loc});
                continue;
            }
            switch (c) {
                case '=':
                    advance();
                    emit({Tok::Equals, "=", 0, loc});
                    continue;
                case '|':
                    advance();
                    emit({Tok::Pipe, "|", 0, loc});
                    continue;
                case '?':
                    advance();
                    emit({Tok::Question, "?", 0, loc});
                    continue;
                case ';':
                    advance();
                    emit({Tok::Semicolon, ";", 0, loc});
                    continue;
                case ',':
                    advance();
                    emit({Tok::Comma, ",", 0, loc});
                    continue;
                case '{':
                    ++depth;
                    advance();
                    emit({Tok::LBrace, "{", 0, loc});
                    continue;
                case '}':
                    if (depth == 0) fail("unmatched '}'");
                    --depth;
                    advance();
                    emit({Tok::RBrace, "}", 0, loc});
                    continue;
                case '(':
                    ++depth;
                    advance();
                    emit({Tok::LParen, "(", 0, loc});
                    continue;
                case ')':
                    if (depth == 0) fail("unmatched ')'");
                    --depth;
                    advance();
                    emit({Tok::RParen, ")", 0, loc});
                    continue;
                case '-':
                    if (peek2() == '>') {
                        advance();
                        advance();
                        emit({Tok::Arrow, "->", 0, loc});
                        continue;
                    }
                    fail("stray '-' (expected '->', '--' or a negative literal)");
                default:
                    fail(std::string("unsupported character '") + c + "'");
            }
        }
        out.push_back({Tok::End, "", 0, here()});
        return out;
    }
};

struct SymbolTables {
    std::map<Name, int> functions;     // name -> arity
    std::map<Name, int> constructors;  // name -> arity
};

struct Parser;
ExprPtr parse_braced_let(Parser& p, SourceLocation loc);

struct Parser {
    const std::vector<Token>& toks;
    std::size_t pos = 0;
    const SymbolTables& tables;
    std::vector<Name> scope;
    int nesting = 0;

    const Token& peek(std::size_t k = 0) const {
        std::size_t i = pos + k;
        return i < toks.size() ? toks[i] : toks.back();
    }
    const Token& next() {
        const Token& t = peek();
        if (t.kind != Tok::End) ++pos;
        return t;
    }
    bool at(Tok k) const { return peek().kind == k; }
    const Token& expect(Tok k, const char* what) {
        if (!at(k)) throw ParseError(peek().loc, std::string("expected ") + what);
        return next();
    }

    bool in_scope(const Name& n) const {
        return std::find(scope.begin(), scope.end(), n) != scope.end();
    }

    struct NestGuard {
        Parser& p;
        explicit NestGuard(Parser& parser) : p(parser) {
            if (++p.nesting > kMaxNesting)
                throw ParseError(p.peek().loc, "expression nesting too deep");
        }
        ~NestGuard() { --p.nesting; }
    };

    // ---- expressions ----

    ExprPtr parse_expr() {
        NestGuard guard(*this);
        switch (peek().kind) {
            case Tok::KwLet:
                return parse_let();
            case Tok::KwCase:
                return parse_case();
            case Tok::KwApply:
                return parse_apply();
            default:
                return parse_choice();
        }
    }

    ExprPtr parse_choice() {
        ExprPtr lhs = parse_application();
        if (at(Tok::Question)) {
            SourceLocation loc = next().loc;
            ExprPtr rhs = parse_expr();  // right-associative, lowest precedence
            return make_expr(ChoiceE{lhs, rhs}, loc);
        }
        return lhs;
    }

    bool starts_atom() const {
        switch (peek().kind) {
            case Tok::LowerIdent:
            case Tok::UpperIdent:
            case Tok::Integer:
            case Tok::KwFail:
            case Tok::LParen:
                return true;
            default:
                return false;
        }
    }

    ExprPtr parse_application() {
        if (!starts_atom())
            throw ParseError(peek().loc, "expected an expression");
        Token head = peek();
        ExprPtr first = parse_atom();
        std::vector<ExprPtr> args;
        while (starts_atom()) args.push_back(parse_atom());
        if (args.empty()) return first;
        // Heads that are plain names were classified without arguments by
        // parse_atom; reclassify them against the argument count.
        if (head.kind == Tok::LowerIdent && !in_scope(head.text)) {
            auto it = tables.functions.find(head.text);
            if (it != tables.functions.end())
                return classify_call(head.text, it->second, std::move(args), head.loc, false);
        }
        if (head.kind == Tok::UpperIdent) {
            auto it = tables.constructors.find(head.text);
            if (it != tables.constructors.end())
                return classify_call(head.text, it->second, std::move(args), head.loc, true);
            return make_expr(ConAppE{head.text, std::move(args)}, head.loc);
        }
        return make_expr(ApplyE{first, std::move(args)}, head.loc);
    }

    ExprPtr classify_call(const Name& head, int arity, std::vector<ExprPtr> args,
                          SourceLocation loc, bool is_con) {
        auto saturated = [&](std::vector<ExprPtr> xs) -> ExprPtr {
            if (is_con) return make_expr(ConAppE{head, std::move(xs)}, loc);
            return make_expr(FunAppE{head, std::move(xs)}, loc);
        };
        int n = static_cast<int>(args.size());
        if (n == arity) return saturated(std::move(args));
        if (n < arity) {
            // below arity: a partial-application value applied to the
            // supplied arguments
            return make_expr(ApplyE{make_expr(PartRefE{head}, loc), std::move(args)}, loc);
        }
        // above arity: saturate, then apply the remainder
        std::vector<ExprPtr> first(args.begin(), args.begin() + arity);
        std::vector<ExprPtr> rest(args.begin() + arity, args.end());
        return make_expr(ApplyE{saturated(std::move(first)), std::move(rest)}, loc);
    }

    ExprPtr parse_atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Integer: {
                next();
                return make_expr(LitE{t.value}, t.loc);
            }
            case Tok::KwFail: {
                next();
                return make_expr(BotE{}, t.loc);
            }
            case Tok::LParen: {
                next();
                ExprPtr e = parse_expr();
                expect(Tok::RParen, "')'");
                return e;
            }
            case Tok::LowerIdent: {
                next();
                if (in_scope(t.text)) return make_expr(VarE{t.text}, t.loc);
                auto it = tables.functions.find(t.text);
                if (it != tables.functions.end()) {
                    if (it->second == 0) return make_expr(FunAppE{t.text, {}}, t.loc);
                    return make_expr(PartRefE{t.text}, t.loc);
                }
                return make_expr(VarE{t.text}, t.loc);  // validation reports unbound names
            }
            case Tok::UpperIdent: {
                next();
                auto it = tables.constructors.find(t.text);
                if (it != tables.constructors.end()) {
                    if (it->second == 0) return make_expr(ConAppE{t.text, {}}, t.loc);
                    return make_expr(PartRefE{t.text}, t.loc);
                }
                return make_expr(ConAppE{t.text, {}}, t.loc);
            }
            default:
                throw ParseError(t.loc, "expected an expression");
        }
    }

    ExprPtr parse_apply() {
        SourceLocation loc = expect(Tok::KwApply, "'apply'").loc;
        ExprPtr fn = parse_atom();
        std::vector<ExprPtr> args;
        while (starts_atom()) args.push_back(parse_atom());
        if (args.empty()) throw ParseError(peek().loc, "apply needs at least one argument");
        return make_expr(ApplyE{fn, std::move(args)}, loc);
    }

    ExprPtr parse_let() {
        SourceLocation loc = expect(Tok::KwLet, "'let'").loc;
        if (at(Tok::LBrace)) return parse_braced_let(*this, loc);
        // single unbraced binding or a free declaration list
        Token n = expect(Tok::LowerIdent, "binding or free variable name");
        if (at(Tok::Comma) || at(Tok::KwFree)) {
            std::vector<Name> names{n.text};
            while (at(Tok::Comma)) {
                next();
                names.push_back(expect(Tok::LowerIdent, "free variable name").text);
            }
            expect(Tok::KwFree, "'free'");
            expect(Tok::KwIn, "'in'");
            std::size_t mark = scope.size();
            for (const auto& nm : names) scope.push_back(nm);
            ExprPtr body = parse_expr();
            scope.resize(mark);
            return make_expr(FreeE{std::move(names), body}, loc);
        }
        expect(Tok::Equals, "'='");
        std::size_t mark = scope.size();
        scope.push_back(n.text);
        ExprPtr rhs = parse_expr();
        expect(Tok::KwIn, "'in'");
        ExprPtr body = parse_expr();
        scope.resize(mark);
        return make_expr(LetE{{{n.text, rhs}}, body}, loc);
    }

    ExprPtr parse_case() {
        SourceLocation loc = expect(Tok::KwCase, "'case'").loc;
        ExprPtr scrut = parse_expr();
        expect(Tok::KwOf, "'of'");
        expect(Tok::LBrace, "'{'");
        std::vector<Branch> branches;
        for (;;) {
            Pattern pat = parse_pattern();
            expect(Tok::Arrow, "'->'");
            std::size_t mark = scope.size();
            if (const auto* cp = std::get_if<ConPat>(&pat))
                for (const auto& v : cp->vars) scope.push_back(v);
            ExprPtr body = parse_expr();
            scope.resize(mark);
            branches.push_back(Branch{std::move(pat), body});
            if (at(Tok::Semicolon)) {
                next();
                continue;
            }
            break;
        }
        expect(Tok::RBrace, "'}'");
        return make_expr(CaseE{scrut, std::move(branches)}, loc);
    }

    Pattern parse_pattern() {
        const Token& t = peek();
        if (t.kind == Tok::Integer) {
            next();
            return LitPat{t.value};
        }
        if (t.kind == Tok::UpperIdent) {
            next();
            std::vector<Name> vars;
            while (at(Tok::LowerIdent)) vars.push_back(next().text);
            return ConPat{t.text, std::move(vars)};
        }
        throw ParseError(t.loc, "expected a pattern");
    }
};

// Braced let groups are recursive: the binding names must be in scope while
// parsing the right-hand sides, so they are scanned before the bodies.
ExprPtr parse_braced_let(Parser& p, SourceLocation loc) {
    p.expect(Tok::LBrace, "'{'");
    std::vector<Name> names;
    std::vector<std::size_t> rhs_starts;
    // first scan: names and rhs token ranges (balanced up to ';' / '}')
    std::size_t scan = p.pos;
    {
        int d = 0;
        bool expect_name = true;
        for (;;) {
            const Token& t = scan < p.toks.size() ? p.toks[scan] : p.toks.back();
            if (t.kind == Tok::End) throw ParseError(t.loc, "unterminated let block");
            if (d == 0 && expect_name) {
                if (t.kind != Tok::LowerIdent) throw ParseError(t.loc, "expected binding name");
                names.push_back(t.text);
                if (p.toks[scan + 1].kind != Tok::Equals)
                    throw ParseError(p.toks[scan + 1].loc, "expected '='");
                rhs_starts.push_back(scan + 2);
                scan += 2;
                expect_name = false;
                continue;
            }
            if (t.kind == Tok::LBrace || t.kind == Tok::LParen) ++d;
            if (t.kind == Tok::RBrace || t.kind == Tok::RParen) {
                if (d == 0 && t.kind == Tok::RBrace) break;
                --d;
            }
            if (d == 0 && t.kind == Tok::Semicolon) expect_name = true;
            ++scan;
        }
    }
    std::size_t mark = p.scope.size();
    for (const auto& n : names) p.scope.push_back(n);
    std::vector<std::pair<Name, ExprPtr>> bindings;
    for (std::size_t i = 0; i < names.size(); ++i) {
        p.pos = rhs_starts[i];
        ExprPtr rhs = p.parse_expr();
        bindings.emplace_back(names[i], rhs);
        if (i + 1 < names.size()) p.expect(Tok::Semicolon, "';'");
    }
    p.expect(Tok::RBrace, "'}'");
    p.expect(Tok::KwIn, "'in'");
    ExprPtr body = p.parse_expr();
    p.scope.resize(mark);
    return make_expr(LetE{std::move(bindings), body}, loc);
}

struct Item {
    std::size_t begin, end;  // token range, exclusive of the separating newline
};

std::vector<Item> split_items(const std::vector<Token>& toks) {
    std::vector<Item> items;
    std::size_t i = 0;
    while (i < toks.size() && toks[i].kind != Tok::End) {
        while (i < toks.size() && toks[i].kind == Tok::Newline) ++i;
        if (toks[i].kind == Tok::End) break;
        std::size_t begin = i;
        while (toks[i].kind != Tok::Newline && toks[i].kind != Tok::End) ++i;
        items.push_back(Item{begin, i});
    }
    return items;
}

DataDecl parse_data_decl(const std::vector<Token>& toks, const Item& item) {
    std::size_t i = item.begin;
    auto tok = [&]() -> const Token& { return toks[i]; };
    auto bump = [&]() -> const Token& { return toks[i++]; };
    auto expect = [&](Tok k, const char* what) -> const Token& {
        if (i >= item.end || tok().kind != k)
            throw ParseError(toks[std::min(i, item.end)].loc, std::string("expected ") + what);
        return bump();
    };
    DataDecl d;
    d.loc = tok().loc;
    expect(Tok::KwData, "'data'");
    d.type_name = expect(Tok::UpperIdent, "data type name").text;
    expect(Tok::Equals, "'='");
    for (;;) {
        ConstructorDecl c;
        c.name = expect(Tok::UpperIdent, "constructor name").text;
        if (i < item.end && tok().kind == Tok::Integer) {
            if (tok().value < 0) throw ParseError(tok().loc, "constructor arity must be >= 0");
            c.arity = static_cast<int>(bump().value);
        } else {
            while (i < item.end && tok().kind == Tok::LowerIdent) {
                ++c.arity;
                bump();
            }
        }
        d.constructors.push_back(std::move(c));
        if (i < item.end && tok().kind == Tok::Pipe) {
            bump();
            continue;
        }
        break;
    }
    if (i != item.end) throw ParseError(tok().loc, "unexpected token after data declaration");
    return d;
}

struct FuncHeader {
    Name name;
    std::vector<Name> params;
    std::size_t body_begin;
    SourceLocation loc;
};

FuncHeader parse_func_header(const std::vector<Token>& toks, const Item& item) {
    std::size_t i = item.begin;
    if (toks[i].kind != Tok::LowerIdent)
        throw ParseError(toks[i].loc, "expected a data declaration or function definition");
    FuncHeader h;
    h.loc = toks[i].loc;
    h.name = toks[i].text;
    ++i;
    while (i < item.end && toks[i].kind == Tok::LowerIdent) {
        h.params.push_back(toks[i].text);
        ++i;
    }
    if (i >= item.end || toks[i].kind != Tok::Equals)
        throw ParseError(toks[std::min(i, item.end)].loc, "expected '=' in function definition");
    h.body_begin = i + 1;
    return h;
}

}  // namespace

Program parse_program_unchecked(std::string_view text, const std::string& filename) {
    Lexer lexer{text, filename};
    std::vector<Token> toks = lexer.run();
    std::vector<Item> items = split_items(toks);

    Program program;
    std::vector<std::pair<FuncHeader, Item>> funcs;
    SymbolTables tables;
    for (const auto& item : items) {
        if (toks[item.begin].kind == Tok::KwData) {
            DataDecl d = parse_data_decl(toks, item);
            for (const auto& c : d.constructors) tables.constructors[c.name] = c.arity;
            program.data_decls.push_back(std::move(d));
        } else {
            FuncHeader h = parse_func_header(toks, item);
            tables.functions[h.name] = static_cast<int>(h.params.size());
            funcs.emplace_back(std::move(h), item);
        }
    }
    for (auto& [header, item] : funcs) {
        // truncate the token view to the item so expressions stop at the
        // item boundary
        std::vector<Token> body(toks.begin() + static_cast<std::ptrdiff_t>(header.body_begin),
                                toks.begin() + static_cast<std::ptrdiff_t>(item.end));
        body.push_back({Tok::End, "", 0,
                        item.end < toks.size() ? toks[item.end].loc : toks.back().loc});
        Parser parser{body, 0, tables, header.params, 0};
        ExprPtr e = parser.parse_expr();
        if (!parser.at(Tok::End))
            throw ParseError(parser.peek().loc, "unexpected token after function body");
        program.functions.push_back(FuncDef{header.name, header.params, e, header.loc});
    }
    program.rebuild_tables();
    return program;
}

Program parse_program(std::string_view text, const std::string& filename) {
    Program p = parse_program_unchecked(text, filename);
    ValidationReport report = validate_program(p);
    if (!report.ok()) {
        const Diagnostic& d = report.diagnostics.front();
        throw ParseError(d.loc, "[" + d.rule + "] " + d.message);
    }
    return p;
}

}  // namespace fcvm
