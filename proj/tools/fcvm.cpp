// fcvm — run, flatten and check FlatCurry programs.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fcvm/engine.hpp"
#include "fcvm/oracle.hpp"
#include "fcvm/parse.hpp"
#include "fcvm/pretty.hpp"
#include "fcvm/restrict.hpp"
#include "fcvm/validate.hpp"

namespace {

constexpr int kExitAnswers = 0;
constexpr int kExitNoAnswers = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTruncated = 3;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::optional<fcvm::Program> load_validated(const std::string& path) {
    auto text = read_file(path);
    if (!text) {
        std::cerr << "error: cannot read " << path << "\n";
        return std::nullopt;
    }
    try {
        fcvm::Program p = fcvm::parse_program_unchecked(*text, path);
        fcvm::ValidationReport report = fcvm::validate_program(p);
        if (!report.ok()) {
            std::cerr << report.to_string();
            return std::nullopt;
        }
        return p;
    } catch (const fcvm::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return std::nullopt;
    }
}

struct RunOptions {
    std::string file;
    std::uint64_t answer_limit = 0;  // 0 = all
    std::uint64_t max_steps = 10'000'000;
    bool trace = false;
    std::string dot_path;
    bool oracle = false;
    bool multiset = false;
    bool show_failures = false;
};

int cmd_run(const RunOptions& opt) {
    auto program = load_validated(opt.file);
    if (!program) return kExitUsage;
    fcvm::RProgram rp = fcvm::restrict_program(*program);

    fcvm::Limits limits{opt.max_steps, opt.answer_limit};
    fcvm::Machine machine(rp, limits);
    if (opt.trace) {
        machine.trace = [](const fcvm::TraceEvent& ev) {
            std::cerr << fcvm::format_trace_line(ev) << "\n";
        };
    }
    machine.make_root();

    std::ofstream dot;
    if (!opt.dot_path.empty()) {
        dot.open(opt.dot_path, std::ios::trunc);
        if (!dot) {
            std::cerr << "error: cannot write " << opt.dot_path << "\n";
            return kExitUsage;
        }
    }
    auto dump = [&](const fcvm::Machine& m) {
        if (dot.is_open()) dot << m.graph.to_dot(m.graph.root);
    };

    fcvm::RunResult result =
        fcvm::run_machine(machine, dot.is_open() ? dump : std::function<void(const fcvm::Machine&)>{});
    if (dot.is_open()) dump(machine);  // state at exhaustion

    for (const auto& a : result.answers) {
        if (a.is_value()) {
            std::cout << fcvm::to_string(a.term) << "\n";
        } else if (opt.show_failures) {
            std::cout << "<fail>\n";
        }
    }

    if (opt.oracle) {
        try {
            fcvm::OracleResult oracle = fcvm::oracle_normalize(rp, opt.max_steps);
            fcvm::CompareMode mode =
                opt.multiset ? fcvm::CompareMode::Multiset : fcvm::CompareMode::Ordered;
            if (result.truncated || oracle.truncated) mode = fcvm::CompareMode::Multiset;
            fcvm::CompareReport report =
                fcvm::compare_answers(result.values(), oracle.answers, mode);
            if (report.equal) {
                std::cout << "ORACLE: MATCH\n";
            } else {
                std::cout << "ORACLE: MISMATCH (" << report.detail << ")\n";
            }
        } catch (const fcvm::OracleError& e) {
            std::cout << "ORACLE: UNSUPPORTED (" << e.what() << ")\n";
        }
    }

    if (result.truncated) {
        std::cerr << "truncated: " << result.truncation_reason << "\n";
        return kExitTruncated;
    }
    std::size_t values = result.values().size();
    return values > 0 ? kExitAnswers : kExitNoAnswers;
}

int cmd_flatten(const std::string& file) {
    auto program = load_validated(file);
    if (!program) return kExitUsage;
    fcvm::RProgram rp = fcvm::restrict_program(*program);
    std::cout << fcvm::pretty(rp);
    return kExitAnswers;
}

int cmd_check(const std::string& file, bool restricted) {
    auto text = read_file(file);
    if (!text) {
        std::cerr << "error: cannot read " << file << "\n";
        return kExitUsage;
    }
    try {
        fcvm::Program p = fcvm::parse_program_unchecked(*text, file);
        fcvm::ValidationReport report =
            restricted ? fcvm::validate_restricted(p) : fcvm::validate_program(p);
        if (report.ok()) {
            std::cout << "OK\n";
            return kExitAnswers;
        }
        std::cout << report.to_string();
        return kExitUsage;
    } catch (const fcvm::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FlatCurry virtual machine"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "evaluate main and print its answers");
    run->add_option("file", run_opt.file, "input .fcy program")->required();
    bool all = false;
    run->add_flag("--all", all, "enumerate every answer (default)");
    run->add_option("-n", run_opt.answer_limit, "stop after N answers")
        ->check(CLI::PositiveNumber);
    run->add_option("--max-steps", run_opt.max_steps, "step budget (default 10^7)")
        ->check(CLI::PositiveNumber);
    run->add_flag("--trace", run_opt.trace, "print rule firings to stderr");
    run->add_option("--dot", run_opt.dot_path, "dump the heap graph at each answer");
    run->add_flag("--oracle", run_opt.oracle, "cross-check against the reference interpreter");
    bool ordered = false;
    run->add_flag("--ordered", ordered, "ordered answer comparison (default)");
    run->add_flag("--multiset", run_opt.multiset, "multiset answer comparison");
    run->add_flag("--show-failures", run_opt.show_failures, "print <fail> for failed attempts");

    std::string flatten_file;
    auto* flatten = app.add_subcommand("flatten", "print the restricted program");
    flatten->add_option("file", flatten_file, "input .fcy program")->required();

    std::string check_file;
    bool restricted = false;
    auto* check = app.add_subcommand("check", "validate a program");
    check->add_option("file", check_file, "input .fcy program")->required();
    check->add_flag("--restricted", restricted, "also check restricted-form rules");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_opt);
        if (flatten->parsed()) return cmd_flatten(flatten_file);
        if (check->parsed()) return cmd_check(check_file, restricted);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
