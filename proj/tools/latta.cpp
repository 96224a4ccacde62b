// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "latta/engine.hpp"
#include "latta/io.hpp"

namespace {

using namespace latta;

enum Exit : int { Safe = 0, PropertyAlarm = 1, Deadlock = 2, Usage = 3, Budget = 4 };

struct Options {
    std::string input;
    std::string domain = "interval";
    std::string procs = "1";
    std::string property;
    bool deadlock = false;
    std::string dot;
    std::string json;
    std::string dump;
    int widening_delay = 2;
    int shape_k = 1;
    int budget = 500;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << text;
}

std::optional<int> parse_procs(const std::string& s) {
    if (s == "unbounded") {
        return std::nullopt;
    }
    std::size_t used = 0;
    const int n = std::stoi(s, &used);
    if (used != s.size() || n < 1) {
        throw std::invalid_argument("--procs expects a positive integer or 'unbounded'");
    }
    return n;
}

std::string locs_text(const std::vector<Loc>& locs, const Vocabulary& voc) {
    std::string out;
    for (std::size_t i = 0; i < locs.size(); ++i) {
        out += (i ? ", " : "") + voc.loc_name(locs[i]);
    }
    return "[" + out + "]";
}

int analyze(const CompiledSemantics& sem, const Options& o, std::optional<int> procs, const std::string& source_name) {
    AnalysisConfig cfg;
    cfg.domain = sem.voc().domain;
    cfg.procs = procs;
    cfg.widening_delay = o.widening_delay;
    cfg.shape_k = o.shape_k;
    cfg.step_budget = o.budget;

    std::optional<PropertyAutomaton> bad;
    if (!o.property.empty()) {
        bad = parse_property(read_file(o.property), sem.voc());
    }
    if (!o.dump.empty()) {
        write_file(o.dump, to_json(sem).dump(2) + "\n");
    }

    const AnalysisResult res = fixpoint(sem, cfg);
    const Vocabulary& voc = sem.voc();
    std::cout << "input: " << source_name << "\n";
    std::cout << "domain: " << domain_name(voc.domain) << "\n";
    std::cout << "procs: " << (procs ? std::to_string(*procs) : "unbounded") << "\n";
    std::cout << "iterations: " << res.iterations << "\n";
    std::cout << "nodes: " << res.reach.num_states() << "\n";
    std::cout << "transitions: " << res.reach.transitions().size() << "\n";
    if (!o.dot.empty()) {
        write_file(o.dot, to_dot(res.reach, voc));
    }
    if (!o.json.empty()) {
        write_file(o.json, to_json(res.reach, voc).dump(2) + "\n");
    }
    if (!res.converged) {
        std::cout << "result: BUDGET EXHAUSTED after " << res.iterations << " iterations\n";
        return Budget;
    }

    int code = Safe;
    for (const auto& a : res.alarms) {
        std::cout << "alarm (" << alarm_kind_name(a.kind) << "): " << a.witness << "\n";
        code = PropertyAlarm;
    }
    if (bad) {
        if (const auto alarm = check_safety(res.reach, *bad, voc)) {
            std::cout << "property: ALARM\n  witness: " << alarm->witness << "\n";
            code = PropertyAlarm;
        } else {
            std::cout << "property: SAFE\n";
        }
    }
    if (o.deadlock) {
        const auto dl = check_deadlock(sem, res.reach);
        std::cout << "deadlock: " << (dl.empty() ? "none" : std::to_string(dl.size()) + " potential") << "\n";
        for (const auto& a : dl) {
            std::cout << "  at " << locs_text(a.locations, voc) << ": " << a.witness << "\n";
        }
        if (!dl.empty() && code == Safe) {
            code = Deadlock;
        }
    }
    std::cout << "result: " << (code == Safe ? "SAFE" : code == Deadlock ? "DEADLOCK" : "ALARM") << "\n";
    return code;
}

void add_analysis_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--property", o.property, "Bad-configuration automaton file")->check(CLI::ExistingFile);
    cmd->add_flag("--deadlock", o.deadlock, "Report potential deadlocks");
    cmd->add_option("--dot", o.dot, "Write the reach automaton as DOT");
    cmd->add_option("--json", o.json, "Write the reach automaton as JSON");
    cmd->add_option("--widening-delay", o.widening_delay, "Join-only iterations before widening")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--shape-k", o.shape_k, "Past depth for shape widening")->check(CLI::PositiveNumber);
    cmd->add_option("--budget", o.budget, "Maximum fixpoint iterations")->check(CLI::PositiveNumber);
    cmd->add_option("--dump-semantics", o.dump, "Write the compiled semantics as JSON");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice-automata static analyzer for message-passing programs"};
    app.require_subcommand(1);
    Options o;

    auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a program");
    analyze_cmd->add_option("program", o.input, "Program source")->required()->check(CLI::ExistingFile);
    analyze_cmd->add_option("--domain", o.domain, "Numeric domain")->check(CLI::IsMember({"interval", "affine"}));
    analyze_cmd->add_option("--procs", o.procs, "Number of processes, or 'unbounded'");
    add_analysis_flags(analyze_cmd, o);

    auto* run_cmd = app.add_subcommand("run", "Analyze previously dumped semantics");
    run_cmd->add_option("semantics", o.input, "Semantics JSON")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--procs", o.procs, "Number of processes, or 'unbounded'");
    add_analysis_flags(run_cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? Safe : Usage;
    }

    try {
        const std::optional<int> procs = parse_procs(o.procs);
        if (*analyze_cmd) {
            const Domain d = o.domain == "affine" ? Domain::Affine : Domain::Interval;
            const CompiledSemantics sem = compile_source(read_file(o.input), d, procs);
            return analyze(sem, o, procs, o.input);
        }
        const CompiledSemantics sem = semantics_from_json(Json::parse(read_file(o.input)));
        return analyze(sem, o, procs, o.input);
    } catch (const SourceError& e) {
        std::cerr << o.input << ":" << e.line() << ":" << e.column() << ": error: " << e.what() << "\n";
        return Usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    }
}
