#include "kbdx/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "kbdx/complexity.hpp"
#include "kbdx/diagnoses.hpp"
#include "kbdx/errors.hpp"
#include "kbdx/parser.hpp"
#include "kbdx/service.hpp"
#include "kbdx/session.hpp"
#include "kbdx/simulation.hpp"
#include "kbdx/validate.hpp"

namespace kbdx {

namespace {

std::string braces(const std::vector<std::string>& ids) {
    std::string s = "{";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += ", ";
        s += ids[i];
    }
    return s + "}";
}

std::optional<std::string> readFile(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return std::nullopt;
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::shared_ptr<spdlog::logger> makeLogger(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("kbdx", sink);
    logger->set_pattern("%l: %v");
    spdlog::level::level_enum level = spdlog::level::err;
    if (const char* env = std::getenv("KBDX_LOG")) {
        const std::string v = env;
        if (v == "info") level = spdlog::level::info;
        if (v == "debug") level = spdlog::level::debug;
    }
    logger->set_level(level);
    return logger;
}

void printDiagnoses(std::ostream& out, const std::vector<Diagnosis>& ds) {
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out << fmt::format("  #{:<3} size {:<3} p={:.6f}  {}\n", i + 1, ds[i].axioms.size(),
                           ds[i].probability.value_or(0.0), braces(ds[i].axioms));
    }
}

void printMetrics(std::ostream& out, const SessionState& s) {
    out << fmt::format("queries answered: {}\ntest cases added: {}\ninteractions: {}\nremaining diagnoses: {}\n",
                       s.metrics.queriesAnswered, s.metrics.testCasesAdded, s.metrics.interactions,
                       s.metrics.remainingDiagnoses);
}

int finish(std::ostream& out, const SessionState& s) {
    out << "status: " << toString(s.status) << "\n";
    if (s.solved) out << "diagnosis: " << braces(s.solved->axioms) << "\n";
    printMetrics(out, s);
    switch (s.status) {
        case Status::Stalled:
        case Status::Aborted: return kExitStalled;
        default: return kExitOk;
    }
}

// Shared error reporting; returns the exit status.
int report(const std::exception_ptr& ep, const std::string& source, std::ostream& err) {
    try {
        std::rethrow_exception(ep);
    } catch (const InvalidDpiError& e) {
        err << "error: invalid DPI\n";
        for (const auto& v : e.report().violations) {
            err << "  " << toString(v.kind);
            if (!v.detail.empty()) err << ": " << v.detail;
            err << "\n";
        }
        return kExitInvalidDpi;
    } catch (const ParseError& e) {
        err << "error: " << source << ":" << e.line() << ":" << e.column() << ": " << e.detail() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        err << "error: " << toString(e.code()) << ": " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

Dpi loadDpi(const std::string& path) {
    auto text = readFile(path);
    if (!text) throw Error(ErrorCode::Parse, "cannot read " + path);
    return parseDpiFile(*text);
}

struct DiagnoseArgs {
    std::string file;
    std::size_t limit = 0;
    std::string priors = "uniform";
    bool coherence = false;
};

int cmdDiagnose(const DiagnoseArgs& a, std::ostream& out, std::ostream& err, spdlog::logger& log) {
    try {
        Dpi dpi = loadDpi(a.file);
        if (a.coherence) dpi.requireCoherence = true;
        log.info("loaded {}: |O|={} |B|={} |P|={} |N|={}", a.file, dpi.ontology.size(), dpi.background.size(),
                 dpi.positives.size(), dpi.negatives.size());
        ValidationReport v = validateDpi(dpi);
        if (!v.valid()) throw InvalidDpiError(std::move(v));
        const FaultProbabilities priors =
            a.priors == "complexity" ? priorsFromComplexity(dpi.ontology) : uniformPriors(dpi.ontology);
        DiagnosisSearch search;
        if (a.limit > 0) search.limit = a.limit;
        search.priors = &priors;
        const DiagnosisResult r = searchDiagnoses(dpi, search);
        out << fmt::format("{} minimal diagnoses, {} conflicts\n", r.diagnoses.size(), r.conflicts.size());
        out << "conflicts:\n";
        for (const auto& c : r.conflicts) out << "  " << braces(c.axioms) << "\n";
        out << "diagnoses:\n";
        printDiagnoses(out, r.diagnoses);
        return kExitOk;
    } catch (...) {
        return report(std::current_exception(), a.file, err);
    }
}

struct InteractArgs {
    std::string file;
    std::string mode = "query";
    std::string strategy = "entropy";
    std::size_t k = kExhaustiveSeedLimit;
    std::string answers;
    std::string priors = "uniform";
    std::uint64_t seed = 0;
};

int queryLoop(SessionState s, std::istream& in, std::ostream& out, std::ostream& err) {
    while (s.status == Status::Active && s.currentQuery) {
        out << "query (revision " << s.revision << "), answer +, - or ? per axiom:\n";
        Answer answer;
        for (const auto& a : s.currentQuery->axioms) {
            out << "  [" << a.id << "] " << serializeAxiom(a) << " ? ";
            std::string token;
            std::optional<Classification> c;
            while (!c) {
                if (!(in >> token)) {
                    out << "\ninput ended\n";
                    return finish(out, s);
                }
                c = parseClassification(token);
                if (!c) err << "expected +, - or ?\n";
            }
            out << token << "\n";
            answer.classifications[a.id] = *c;
        }
        s = submitAnswer(s, answer);
        out << s.leading.size() << " leading diagnoses\n";
        printDiagnoses(out, s.leading);
    }
    return finish(out, s);
}

std::string_view trimmed(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

int testCaseLoop(SessionState s, std::istream& in, std::ostream& out, std::ostream& err) {
    std::string line;
    while (s.status == Status::Active || s.status == Status::Stalled) {
        out << "> ";
        if (!std::getline(in, line)) {
            out << "\ninput ended\n";
            break;
        }
        std::string_view cmd = trimmed(line);
        out << cmd << "\n";
        if (cmd.empty() || cmd.front() == '#') continue;
        if (cmd == "quit") break;
        if (cmd == "list") {
            printDiagnoses(out, s.leading);
            continue;
        }
        if (cmd.rfind("mark", 0) == 0) {
            const std::string arg(trimmed(cmd.substr(4)));
            char* end = nullptr;
            const unsigned long n = std::strtoul(arg.c_str(), &end, 10);
            if (arg.empty() || *end != '\0' || n == 0) {
                err << "usage: mark <n>\n";
                continue;
            }
            try {
                s = markDiagnosis(s, n - 1);
            } catch (const Error& e) {
                err << "error: " << e.what() << "\n";
            }
            continue;
        }
        if (cmd.rfind("add", 0) == 0) cmd = trimmed(cmd.substr(3));
        if (!cmd.empty() && (cmd.front() == '+' || cmd.front() == '-')) {
            const Polarity p = cmd.front() == '+' ? Polarity::Positive : Polarity::Negative;
            try {
                s = addTestCase(s, parseAxiom(trimmed(cmd.substr(1))), p);
                out << s.leading.size() << " leading diagnoses\n";
                printDiagnoses(out, s.leading);
            } catch (const InvalidDpiError& e) {
                err << "error: test case rejected: " << e.report().summary() << "\n";
            } catch (const Error& e) {
                err << "error: " << toString(e.code()) << ": " << e.what() << "\n";
            }
            continue;
        }
        err << "commands: add +|- <axiom>, list, mark <n>, quit\n";
    }
    return finish(out, s);
}

int cmdInteract(const InteractArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
    try {
        const auto mode = parseMode(a.mode);
        const auto strategy = parseStrategy(a.strategy);
        if (!mode || !strategy) {
            err << "error: unknown mode or strategy\n";
            return kExitInput;
        }
        SessionConfig config;
        config.k = a.k;
        config.strategy = {*strategy, a.seed};
        config.priors = a.priors == "complexity" ? PriorKind::Complexity : PriorKind::Uniform;
        SessionState s = startSession(loadDpi(a.file), *mode, config);
        out << s.leading.size() << " leading diagnoses\n";
        printDiagnoses(out, s.leading);

        std::ifstream script;
        std::istream* source = &in;
        if (!a.answers.empty()) {
            script.open(a.answers);
            if (!script) {
                err << "error: cannot read " << a.answers << "\n";
                return kExitInput;
            }
            source = &script;
        }
        return *mode == Mode::QueryBased ? queryLoop(std::move(s), *source, out, err)
                                         : testCaseLoop(std::move(s), *source, out, err);
    } catch (...) {
        return report(std::current_exception(), a.file, err);
    }
}

struct SimulateArgs {
    std::size_t trials = 100;
    std::size_t faults = 1;
    std::vector<std::string> strategies{"entropy"};
    std::string oracle = "perfect";
    double gamma = 1.0;
    std::uint64_t seed = 1;
    std::size_t k = kExhaustiveSeedLimit;
    std::string outDir = "simulation";
};

int cmdSimulate(const SimulateArgs& a, std::ostream& out, std::ostream& err, spdlog::logger& log) {
    try {
        SimulationConfig config;
        config.trials = a.trials;
        config.faults = a.faults;
        config.seed = a.seed;
        config.k = a.k;
        config.gamma = a.gamma;
        config.strategies.clear();
        for (const auto& s : a.strategies) {
            auto parsed = parseStrategy(s);
            if (!parsed) {
                err << "error: unknown strategy " << s << "\n";
                return kExitInput;
            }
            config.strategies.push_back(*parsed);
        }
        if (a.oracle == "noisy") {
            config.oracle = OracleSpec::Kind::Noisy;
        } else if (a.oracle != "perfect") {
            err << "error: oracle must be perfect or noisy\n";
            return kExitInput;
        }
        log.info("running {} trials", config.trials);
        const SimulationReport r = runSimulation(config);

        std::filesystem::create_directories(a.outDir);
        std::ofstream trials(std::filesystem::path(a.outDir) / "trials.ndjson", std::ios::binary);
        for (const auto& rec : r.records) trials << toNdjson(rec) << "\n";
        const std::string table = summaryTable(r, config);
        std::ofstream(std::filesystem::path(a.outDir) / "summary.txt", std::ios::binary) << table;
        out << table;
        return kExitOk;
    } catch (...) {
        return report(std::current_exception(), "simulate", err);
    }
}

struct ScoreArgs {
    std::string axiom;
    std::string file;
    bool explain = false;
    bool strict = false;
};

void explain(std::ostream& out, const AxiomScore& s) {
    for (std::size_t i = 0; i < s.operands.size(); ++i) {
        const ExpressionScore& op = s.operands[i];
        out << "  operand " << i + 1 << ": " << op.trace.front().expression << "\n";
        for (const auto& step : op.trace) {
            out << fmt::format("    {:{}}rule {:>2}  {}  M_ce = {:g}\n", "", 2 * step.depth, step.rule,
                               step.expression, step.value);
        }
    }
    std::string product;
    for (const auto& op : s.operands) {
        if (!product.empty()) product += " * ";
        const std::string v = op.exact ? op.exact->str() : fmt::format("{:g}", op.value);
        product += v.find('/') == std::string::npos ? "1/" + v : "1/(" + v + ")";
    }
    out << "  M_ax = " << product;
    if (s.exact) out << " = " << s.exact->str();
    out << fmt::format(" = {:.4f}\n", s.value);
}

int cmdScore(const ScoreArgs& a, std::ostream& out, std::ostream& err) {
    try {
        if (a.file.empty()) {
            if (a.axiom.empty()) {
                err << "error: give an axiom or --file\n";
                return kExitInput;
            }
            const Axiom ax = parseAxiom(a.axiom);
            const AxiomScore s = explainAxiom(ax, a.strict);
            out << fmt::format("{:.4f}\n", s.value);
            if (a.explain) {
                out << serializeAxiom(ax) << "\n";
                explain(out, s);
            }
            return kExitOk;
        }
        auto text = readFile(a.file);
        if (!text) {
            err << "error: cannot read " << a.file << "\n";
            return kExitInput;
        }
        std::vector<Axiom> axioms;
        std::istringstream lines(*text);
        std::string line;
        std::size_t lineNo = 0;
        while (std::getline(lines, line)) {
            ++lineNo;
            const std::string_view t = trimmed(line);
            if (t.empty() || t.front() == '#') continue;
            try {
                axioms.push_back(parseAxiom(t));
            } catch (const ParseError& e) {
                err << "error: " << a.file << ":" << lineNo << ":" << e.column() << ": " << e.detail() << "\n";
                return kExitInput;
            }
        }
        for (const auto& ax : axioms) {
            const AxiomScore s = explainAxiom(ax, a.strict);
            out << fmt::format("{:.4f}  {}\n", s.value, serializeAxiom(ax));
            if (a.explain) explain(out, s);
        }
        out << fmt::format("M = {:.4f}\n", scoreQuery(axioms, a.strict));
        return kExitOk;
    } catch (...) {
        return report(std::current_exception(), "axiom", err);
    }
}

}  // namespace

int runCli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Knowledge-base debugging: diagnoses, queries and difficulty scores", "kbdx"};
    app.require_subcommand(1);
    auto log = makeLogger(err);

    DiagnoseArgs da;
    auto* diagnose = app.add_subcommand("diagnose", "Print ranked minimal diagnoses of a DPI file");
    diagnose->add_option("file", da.file, "DPI file")->required();
    diagnose->add_option("--limit", da.limit, "Stop after this many diagnoses (0 = all)");
    diagnose->add_option("--priors", da.priors, "uniform or complexity")
        ->check(CLI::IsMember({"uniform", "complexity"}));
    diagnose->add_flag("--coherence", da.coherence, "Require coherence");

    InteractArgs ia;
    auto* interact = app.add_subcommand("interact", "Run an interactive debugging session");
    interact->add_option("file", ia.file, "DPI file")->required();
    interact->add_option("--mode", ia.mode, "query or testcase")->check(CLI::IsMember({"query", "testcase"}));
    interact->add_option("--strategy", ia.strategy, "entropy, split or random")
        ->check(CLI::IsMember({"entropy", "split", "random"}));
    interact->add_option("--k", ia.k, "Leading diagnoses")->check(CLI::Range(2, 64));
    interact->add_option("--answers", ia.answers, "Read answers or commands from this file");
    interact->add_option("--priors", ia.priors, "uniform or complexity")
        ->check(CLI::IsMember({"uniform", "complexity"}));
    interact->add_option("--seed", ia.seed, "Seed for the random strategy");

    SimulateArgs sa;
    auto* simulate = app.add_subcommand("simulate", "Fault-injection benchmark with simulated oracles");
    simulate->add_option("--trials", sa.trials)->check(CLI::PositiveNumber);
    simulate->add_option("--faults", sa.faults)->check(CLI::Range(0, 8));
    simulate->add_option("--strategy", sa.strategies, "Comma-separated strategies")->delimiter(',');
    simulate->add_option("--oracle", sa.oracle)->check(CLI::IsMember({"perfect", "noisy"}));
    simulate->add_option("--gamma", sa.gamma)->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--seed", sa.seed);
    simulate->add_option("--k", sa.k)->check(CLI::Range(2, 64));
    simulate->add_option("--out", sa.outDir, "Output directory");

    ScoreArgs ca;
    auto* score = app.add_subcommand("score", "Difficulty score of axioms");
    score->add_option("axiom", ca.axiom, "Axiom text");
    score->add_option("--file", ca.file, "One axiom per line; prints the query product too");
    score->add_flag("--explain", ca.explain, "Show which rule scored each sub-expression");
    score->add_flag("--strict", ca.strict, "Reject class assertions");

    std::string host = "127.0.0.1";
    int port = 8080;
    auto* serveCmd = app.add_subcommand("serve", "Serve the JSON session API");
    serveCmd->add_option("--host", host);
    serveCmd->add_option("--port", port)->check(CLI::Range(1, 65535));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    if (*diagnose) return cmdDiagnose(da, out, err, *log);
    if (*interact) return cmdInteract(ia, in, out, err);
    if (*simulate) return cmdSimulate(sa, out, err, *log);
    if (*score) return cmdScore(ca, out, err);
    SessionService service;
    log->info("listening on {}:{}", host, port);
    out << "listening on http://" << host << ":" << port << "\n" << std::flush;
    return serve(service, host, port) == 0 ? kExitOk : kExitInput;
}

}  // namespace kbdx
