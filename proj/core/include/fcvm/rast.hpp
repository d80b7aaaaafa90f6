#pragma once

// Restricted FlatCurry: every application argument is a variable, each
// function body has at most one case and it is outermost.

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "fcvm/ast.hpp"

namespace fcvm {

struct RVar {
    Name name;
};
struct RLit {
    std::int64_t value = 0;
};
struct RBot {};
struct RChoice {
    Name left, right;
};
struct RFreeDecl {};  // allocates a fresh logic variable
struct RFunApp {
    Name fn;
    std::vector<Name> args;
};
struct RConApp {
    Name con;
    std::vector<Name> args;
};
struct RPartRef {
    Name head;
};
struct RApply {
    Name fn;
    std::vector<Name> args;
};

using RExpr =
    std::variant<RVar, RLit, RBot, RChoice, RFreeDecl, RFunApp, RConApp, RPartRef, RApply>;

struct RStmt;
using RStmtPtr = std::shared_ptr<const RStmt>;

struct RLet {
    std::vector<std::pair<Name, RExpr>> bindings;  // one recursive group
    RStmtPtr rest;
};
struct RReturn {
    RExpr expr;
};
using RStmtNode = std::variant<RLet, RReturn>;

struct RStmt {
    RStmtNode node;
};

inline RStmtPtr make_rstmt(RStmtNode node) {
    return std::make_shared<RStmt>(RStmt{std::move(node)});
}

struct RBranch {
    Pattern pat;
    RStmtPtr body;
};

struct RCase {
    Name scrutinee;
    std::vector<RBranch> branches;
};

using RBlock = std::variant<RCase, RStmtPtr>;

struct RFuncDef {
    Name name;
    std::vector<Name> params;
    RBlock body;
    SourceLocation loc;
};

struct RProgram {
    std::vector<DataDecl> data_decls;
    std::vector<RFuncDef> functions;
    Name entry = "main";

    std::map<Name, ConstructorInfo> constructor_table;
    std::map<Name, std::size_t> function_index;

    const RFuncDef* find_function(const Name& n) const {
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

// The trivial inclusion of restricted programs back into the full syntax.
// Used by the oracle (so both interpreters run the same program text) and by
// the restrictor's idempotence law.
ExprPtr embed_rexpr(const RExpr& e);
ExprPtr embed_stmt(const RStmtPtr& s);
ExprPtr embed_block(const RBlock& b);
Program embed_program(const RProgram& p);

bool equal(const RExpr& a, const RExpr& b);
bool equal(const RStmtPtr& a, const RStmtPtr& b);
bool equal(const RBlock& a, const RBlock& b);

}  // namespace fcvm
