#pragma once

// Abstract syntax for FlatCurry programs: expressions, patterns, function
// definitions, data declarations, and the program table.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fcvm/source_location.hpp"

namespace fcvm {

using Name = std::string;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Patterns match a constructor with fresh variables for its fields, or a
// literal by value.
struct ConPat {
    Name con;
    std::vector<Name> vars;
};
struct LitPat {
    std::int64_t value = 0;
};
using Pattern = std::variant<ConPat, LitPat>;

struct Branch {
    Pattern pat;
    ExprPtr body;
};

struct VarE {
    Name name;
};
struct LitE {
    std::int64_t value = 0;
};
struct BotE {};  // written `fail` in the surface syntax
struct ChoiceE {
    ExprPtr left, right;
};
struct FunAppE {
    Name fn;
    std::vector<ExprPtr> args;  // saturated: |args| == declared arity
};
struct ConAppE {
    Name con;
    std::vector<ExprPtr> args;  // saturated: |args| == declared arity
};
// A function or constructor mentioned below its arity; evaluates to a
// partial-application value. Carries no arguments: `f a` desugars to
// Apply(PartRef f, [a]).
struct PartRefE {
    Name head;
};
struct LetE {
    // one recursive binding group; names pairwise distinct
    std::vector<std::pair<Name, ExprPtr>> bindings;
    ExprPtr body;
};
struct FreeE {
    std::vector<Name> names;  // pairwise distinct
    ExprPtr body;
};
struct CaseE {
    ExprPtr scrutinee;
    std::vector<Branch> branches;
};
// General application for higher-order calls (eval-apply).
struct ApplyE {
    ExprPtr fn;
    std::vector<ExprPtr> args;  // nonempty
};

using ExprNode = std::variant<VarE, LitE, BotE, ChoiceE, FunAppE, ConAppE, PartRefE, LetE, FreeE,
                              CaseE, ApplyE>;

struct Expr {
    ExprNode node;
    SourceLocation loc;
};

inline ExprPtr make_expr(ExprNode node, SourceLocation loc = {}) {
    return std::make_shared<Expr>(Expr{std::move(node), std::move(loc)});
}

struct FuncDef {
    Name name;
    std::vector<Name> params;  // pairwise distinct
    ExprPtr body;
    SourceLocation loc;
};

struct ConstructorDecl {
    Name name;
    int arity = 0;
};

struct DataDecl {
    Name type_name;
    std::vector<ConstructorDecl> constructors;  // declaration order
    SourceLocation loc;
};

struct ConstructorInfo {
    Name type_name;
    int arity = 0;
    int index = 0;  // position within the data declaration
};

struct Program {
    std::vector<DataDecl> data_decls;
    std::vector<FuncDef> functions;  // source order
    Name entry = "main";

    // Lookup tables; rebuilt by rebuild_tables() after structural edits.
    std::map<Name, ConstructorInfo> constructor_table;
    std::map<Name, std::size_t> function_index;

    const FuncDef* find_function(const Name& n) const {
        auto it = function_index.find(n);
        return it == function_index.end() ? nullptr : &functions[it->second];
    }
    const ConstructorInfo* find_constructor(const Name& n) const {
        auto it = constructor_table.find(n);
        return it == constructor_table.end() ? nullptr : &it->second;
    }
    void rebuild_tables() {
        constructor_table.clear();
        function_index.clear();
        for (const auto& d : data_decls) {
            int idx = 0;
            for (const auto& c : d.constructors) {
                constructor_table.insert({c.name, ConstructorInfo{d.type_name, c.arity, idx}});
                ++idx;
            }
        }
        for (std::size_t i = 0; i < functions.size(); ++i) {
            function_index.insert({functions[i].name, i});
        }
    }
};

// Structural equality, ignoring source locations.
bool equal(const Expr& a, const Expr& b);
bool equal(const ExprPtr& a, const ExprPtr& b);
bool equal(const Pattern& a, const Pattern& b);
bool equal(const FuncDef& a, const FuncDef& b);
bool equal(const Program& a, const Program& b);

// Free variables of an expression in first-occurrence order.
std::vector<Name> free_vars(const ExprPtr& e);

constexpr const char* kApplyBuiltin = "apply";

}  // namespace fcvm
