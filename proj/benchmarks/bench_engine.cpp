#include <benchmark/benchmark.h>

#include <sstream>
#include <string>

#include "fcvm/engine.hpp"
#include "fcvm/oracle.hpp"
#include "fcvm/parse.hpp"
#include "fcvm/restrict.hpp"

namespace {

fcvm::RProgram compile(const std::string& src) {
    return fcvm::restrict_program(fcvm::parse_program(src));
}

// deterministic reduction: a right-nested chain of and applications
std::string and_chain_source(int depth) {
    std::ostringstream os;
    os << "data Bool = False | True\n"
       << "and x y = case x of { False -> False; True -> case y of { False -> False; True -> "
          "True } }\n"
       << "main = ";
    for (int i = 0; i < depth; ++i) os << "and True (";
    os << "True";
    for (int i = 0; i < depth; ++i) os << ")";
    os << "\n";
    return os.str();
}

// breadth: a full binary tree of choices, 2^depth answers
std::string choice_tree_source(int depth) {
    std::ostringstream os;
    os << "main = ";
    std::function<void(int)> emit = [&](int d) {
        if (d == 0) {
            os << "0";
            return;
        }
        os << "(";
        emit(d - 1);
        os << " ? ";
        emit(d - 1);
        os << ")";
    };
    emit(depth);
    os << "\n";
    return os.str();
}

// narrowing: enumerate all boolean vectors of a given width
std::string narrowing_source(int width) {
    std::ostringstream os;
    os << "data Bool = False | True\n";
    os << "data List = Nil | Cons 2\n";
    os << "force l = case l of { Nil -> 0; Cons x xs -> case x of { False -> force xs; True -> "
          "force xs } }\n";
    os << "main = let ";
    for (int i = 0; i < width; ++i) {
        if (i) os << ", ";
        os << "x" << i;
    }
    os << " free in force ";
    for (int i = 0; i < width; ++i) os << "(Cons x" << i << " ";
    os << "Nil";
    for (int i = 0; i < width; ++i) os << ")";
    os << "\n";
    return os.str();
}

void BM_HnfAndChain(benchmark::State& state) {
    fcvm::RProgram rp = compile(and_chain_source(static_cast<int>(state.range(0))));
    for (auto _ : state) {
        fcvm::RunResult r = fcvm::run_main(rp, fcvm::Limits{100'000'000, 0});
        benchmark::DoNotOptimize(r.answers.size());
    }
}
BENCHMARK(BM_HnfAndChain)->Arg(64)->Arg(256)->Arg(1024);

void BM_ChoiceTreeEnumeration(benchmark::State& state) {
    fcvm::RProgram rp = compile(choice_tree_source(static_cast<int>(state.range(0))));
    for (auto _ : state) {
        fcvm::RunResult r = fcvm::run_main(rp, fcvm::Limits{100'000'000, 0});
        benchmark::DoNotOptimize(r.answers.size());
    }
}
BENCHMARK(BM_ChoiceTreeEnumeration)->Arg(6)->Arg(10)->Arg(12);

void BM_NarrowBoolVector(benchmark::State& state) {
    fcvm::RProgram rp = compile(narrowing_source(static_cast<int>(state.range(0))));
    for (auto _ : state) {
        fcvm::RunResult r = fcvm::run_main(rp, fcvm::Limits{100'000'000, 0});
        benchmark::DoNotOptimize(r.answers.size());
    }
}
BENCHMARK(BM_NarrowBoolVector)->Arg(4)->Arg(8)->Arg(10);

void BM_OracleChoiceTree(benchmark::State& state) {
    fcvm::RProgram rp = compile(choice_tree_source(static_cast<int>(state.range(0))));
    for (auto _ : state) {
        fcvm::OracleResult r = fcvm::oracle_normalize(rp, 100'000'000);
        benchmark::DoNotOptimize(r.answers.size());
    }
}
BENCHMARK(BM_OracleChoiceTree)->Arg(6)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
