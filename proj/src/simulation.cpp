#include "kbdx/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "kbdx/complexity.hpp"
#include "kbdx/conflicts.hpp"
#include "kbdx/diagnoses.hpp"
#include "kbdx/errors.hpp"
#include "kbdx/validate.hpp"

namespace kbdx {

namespace {

constexpr int kGenerationRetries = 64;

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string className(std::size_t i) { return "C" + std::to_string(i + 1); }

std::vector<Axiom> withBackground(std::vector<Axiom> axioms, const std::vector<Axiom>& background) {
    axioms.insert(axioms.end(), background.begin(), background.end());
    return axioms;
}

std::vector<Axiom> entailments(const std::vector<Axiom>& theory, const Reasoner& reasoner) {
    std::vector<Axiom> out = reasoner.realize(theory);
    for (auto& a : reasoner.classify(theory)) out.push_back(std::move(a));
    return out;
}

template <class T>
const T& pickOne(std::mt19937_64& rng, const std::vector<T>& v) {
    return v[uniform(rng, 0, v.size() - 1)];
}

struct Mutation {
    Axiom axiom;
    bool appended;  // new axiom rather than a replacement
};

// One attempt at a faulty variant of `intended`; nullopt when the drawn
// mutation is not usable.
std::optional<Mutation> mutate(std::mt19937_64& rng, const std::vector<Axiom>& current,
                               const std::vector<Axiom>& intended, const std::vector<Axiom>& background,
                               const std::vector<std::string>& classes, std::size_t target, const Reasoner& reasoner) {
    const std::size_t kind = uniform(rng, 0, 2);
    const std::vector<Axiom> truth = withBackground(intended, background);
    if (kind < 2) {
        const Axiom& original = current[target];
        const auto* s = original.as<ax::SubClassOf>();
        if (!s) return std::nullopt;
        Axiom replaced = original;
        if (kind == 0) {
            replaced.body = ax::SubClassOf{s->sup, s->sub};
        } else {
            const std::string& to = pickOne(rng, classes);
            replaced.body = ax::SubClassOf{s->sub, named(to)};
        }
        const auto* r = replaced.as<ax::SubClassOf>();
        if (structurallyEqual(r->sub, r->sup)) return std::nullopt;
        if (reasoner.entails(truth, replaced)) return std::nullopt;  // would not be a fault
        return Mutation{std::move(replaced), false};
    }
    const std::string& x = pickOne(rng, classes);
    const std::string& y = pickOne(rng, classes);
    if (x == y) return std::nullopt;
    Axiom d = disjointClasses({}, {named(std::min(x, y)), named(std::max(x, y))});
    if (reasoner.entails(truth, d)) return std::nullopt;
    return Mutation{std::move(d), true};
}

std::optional<Trial> attempt(std::mt19937_64& rng, std::uint64_t seed, std::size_t faults, const Reasoner& reasoner) {
    Trial t;
    t.seed = seed;
    const std::size_t nClasses = uniform(rng, 14, 20);
    std::vector<std::string> classes;
    for (std::size_t i = 0; i < nClasses; ++i) classes.push_back(className(i));

    // Terminology: every class but the first gets a parent with a lower
    // index, mostly its predecessor so that chains get long.
    std::size_t nextId = 1;
    auto freshA = [&nextId] { return "a" + std::to_string(nextId++); };
    for (std::size_t i = 1; i < nClasses; ++i) {
        const std::size_t parent = chance(rng, 0.8) ? i - 1 : uniform(rng, 0, i - 1);
        t.intended.push_back(subClassOf(freshA(), named(classes[i]), named(classes[parent])));
        if (i >= 2 && chance(rng, 0.2)) {
            const std::size_t other = uniform(rng, 0, i - 1);
            if (other != parent) t.intended.push_back(subClassOf(freshA(), named(classes[i]), named(classes[other])));
        }
    }

    const std::size_t nIndividuals = uniform(rng, 2, 3);
    for (std::size_t i = 0; i < nIndividuals; ++i) {
        t.dpi.background.push_back(classAssertion("b" + std::to_string(i + 1),
                                                  named(classes[uniform(rng, nClasses * 2 / 3, nClasses - 1)]),
                                                  "i" + std::to_string(i + 1)));
    }
    const std::vector<Axiom> truth = withBackground(t.intended, t.dpi.background);
    if (!reasoner.isConsistent(truth)) return std::nullopt;

    // Faults.
    std::vector<Axiom> faulty = t.intended;
    std::vector<std::size_t> order(faulty.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t cursor = 0;
    for (std::size_t f = 0; f < faults; ++f) {
        std::optional<Mutation> m;
        for (int tries = 0; tries < 16 && !m && cursor < order.size(); ++tries) {
            m = mutate(rng, faulty, t.intended, t.dpi.background, classes, order[cursor], reasoner);
            if (m && containsStructurally(faulty, m->axiom)) m.reset();
        }
        if (!m) return std::nullopt;
        if (m->appended) {
            m->axiom.id = freshA();
            t.truth.push_back(m->axiom.id);
            faulty.push_back(std::move(m->axiom));
        } else {
            t.truth.push_back(faulty[order[cursor]].id);
            faulty[order[cursor]] = std::move(m->axiom);
            ++cursor;
        }
    }
    std::sort(t.truth.begin(), t.truth.end());
    t.dpi.ontology = faulty;

    // Test cases: N from what the faulty ontology wrongly entails, P from
    // what the intended one entails.
    const std::vector<Axiom> faultyTheory = withBackground(faulty, t.dpi.background);
    if (faults > 0 && reasoner.isConsistent(faultyTheory)) {
        // Wrong assertions about individuals, highest class first: their
        // derivations run furthest through the hierarchy. A wrong subsumption
        // as N would pin the fault to a single axiom.
        std::vector<Axiom> wrong;
        for (auto& a : reasoner.realize(faultyTheory)) {
            if (!reasoner.entails(truth, a)) wrong.push_back(std::move(a));
        }
        if (wrong.empty()) return std::nullopt;
        std::shuffle(wrong.begin(), wrong.end(), rng);
        const auto depth = [&](const Axiom& a) {
            const auto* n = a.as<ax::ClassAssertion>()->cls->as<ce::NamedClass>();
            return n ? std::find(classes.begin(), classes.end(), n->name) - classes.begin()
                     : static_cast<std::ptrdiff_t>(classes.size());
        };
        std::stable_sort(wrong.begin(), wrong.end(), [&](const Axiom& a, const Axiom& b) { return depth(a) < depth(b); });
        const std::size_t take = std::min<std::size_t>(wrong.size(), uniform(rng, 1, 2));
        for (std::size_t i = 0; i < take; ++i) {
            wrong[i].id = "n" + std::to_string(i + 1);
            t.dpi.negatives.push_back(wrong[i]);
        }
    }
    std::vector<Axiom> right;
    for (auto& a : entailments(truth, reasoner)) {
        if (!containsStructurally(faulty, a) && !containsStructurally(t.dpi.negatives, a)) right.push_back(std::move(a));
    }
    std::shuffle(right.begin(), right.end(), rng);
    const std::size_t takeP = std::min<std::size_t>(right.size(), uniform(rng, 0, 1));
    for (std::size_t i = 0; i < takeP; ++i) {
        right[i].id = "p" + std::to_string(i + 1);
        t.dpi.positives.push_back(right[i]);
    }

    if (!validateDpi(t.dpi, reasoner).valid()) return std::nullopt;
    if (faults > 0 && !violates(t.dpi.ontology, t.dpi, reasoner)) return std::nullopt;
    return t;
}

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

std::vector<TrialRecord> runTrial(const SimulationConfig& config, std::size_t index, const Reasoner& reasoner) {
    const std::uint64_t seed = splitmix(config.seed ^ splitmix(index));
    Trial trial = generateTrial(seed, config.faults, reasoner);
    const bool eligible = truthIsMinimalDiagnosis(trial, reasoner);

    std::vector<TrialRecord> out;
    for (Strategy strategy : config.strategies) {
        TrialRecord r;
        r.trial = index;
        r.seed = seed;
        r.strategy = strategy;
        r.faults = config.faults;
        r.eligible = eligible;
        r.truth = trial.truth;

        SessionConfig sc;
        sc.k = config.k;
        sc.strategy = {strategy, seed};
        SessionState s = startSession(trial.dpi, Mode::QueryBased, sc, reasoner);
        r.initialDiagnoses = s.leading.size();

        OracleSpec spec;
        spec.kind = config.oracle;
        spec.intended = trial.intended;
        spec.gamma = config.gamma;
        spec.seed = seed;
        Oracle oracle(spec, trial.dpi.background, reasoner);
        for (std::size_t step = 0; s.status == Status::Active && step < config.maxSteps; ++step) {
            s = submitAnswer(s, oracle.answer(*s.currentQuery), reasoner);
        }
        r.queries = s.metrics.queriesAnswered;
        r.interactions = s.metrics.interactions;
        r.remaining = s.leading.size();
        r.status = s.status;
        r.flips = oracle.flips();
        if (s.solved) r.solved = s.solved->axioms;
        r.success = s.status == Status::Solved && s.solved && s.solved->axioms == trial.truth;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

Oracle::Oracle(OracleSpec spec, std::vector<Axiom> background, const Reasoner& reasoner)
    : spec_(std::move(spec)), reasoner_(&reasoner), rng_(spec_.seed) {
    knowledge_ = withBackground(spec_.intended, background);
}

Answer Oracle::answer(const Query& query) {
    if (spec_.kind == OracleSpec::Kind::Scripted) {
        if (cursor_ >= spec_.script.size()) throw Error(ErrorCode::ScriptExhausted, "scripted oracle has no answers left");
        return spec_.script[cursor_++];
    }
    Answer a;
    const Verdict v = reasoner_->check(knowledge_, query.axioms, false);
    for (std::size_t i = 0; i < query.axioms.size(); ++i) {
        const Axiom& ax = query.axioms[i];
        Classification c = v.entailed[i] ? Classification::Positive : Classification::Negative;
        if (spec_.kind == OracleSpec::Kind::Noisy) {
            const double e = spec_.gamma * (1.0 - scoreAxiom(ax));
            if (e > 0.0 && std::bernoulli_distribution(std::min(e, 1.0))(rng_)) {
                c = c == Classification::Positive ? Classification::Negative : Classification::Positive;
                ++flips_;
            }
        }
        a.classifications[ax.id] = c;
    }
    return a;
}

Trial generateTrial(std::uint64_t seed, std::size_t faults, const Reasoner& reasoner) {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < kGenerationRetries; ++i) {
        if (auto t = attempt(rng, seed, faults, reasoner)) return std::move(*t);
    }
    throw Error(ErrorCode::GenerationFailure,
                "no usable instance after " + std::to_string(kGenerationRetries) + " attempts");
}

bool truthIsMinimalDiagnosis(const Trial& trial, const Reasoner& reasoner) {
    if (!isDiagnosis(trial.dpi, trial.truth, reasoner)) return false;
    const std::size_t n = trial.truth.size();
    for (std::uint32_t m = 0; m + 1 < (1U << n); ++m) {
        std::vector<std::string> subset;
        for (std::size_t i = 0; i < n; ++i) {
            if (m >> i & 1U) subset.push_back(trial.truth[i]);
        }
        if (isDiagnosis(trial.dpi, subset, reasoner)) return false;
    }
    return true;
}

SimulationReport runSimulation(const SimulationConfig& config, const Reasoner& reasoner) {
    std::vector<std::vector<TrialRecord>> perTrial(config.trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failureLock;
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(config.trials, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < config.trials; i = next++) {
                try {
                    perTrial[i] = runTrial(config, i, reasoner);
                } catch (...) {
                    std::lock_guard lock(failureLock);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    SimulationReport report;
    for (auto& rs : perTrial) {
        for (auto& r : rs) report.records.push_back(std::move(r));
    }
    for (Strategy strategy : config.strategies) {
        StrategySummary s;
        s.strategy = strategy;
        std::vector<double> queries, remaining, interactions;
        std::size_t successes = 0;
        for (const auto& r : report.records) {
            if (r.strategy != strategy) continue;
            ++s.trials;
            queries.push_back(static_cast<double>(r.queries));
            remaining.push_back(static_cast<double>(r.remaining));
            interactions.push_back(static_cast<double>(r.interactions));
            if (r.eligible) {
                ++s.eligible;
                if (r.success) {
                    ++successes;
                } else {
                    ++s.divergences;
                }
            }
        }
        s.meanQueries = mean(queries);
        s.medianQueries = median(queries);
        s.meanRemaining = mean(remaining);
        s.meanInteractions = mean(interactions);
        s.successRate = s.eligible ? static_cast<double>(successes) / static_cast<double>(s.eligible) : 0.0;
        report.summaries.push_back(s);
    }
    return report;
}

std::string toNdjson(const TrialRecord& r) {
    nlohmann::ordered_json j;
    j["trial"] = r.trial;
    j["seed"] = r.seed;
    j["strategy"] = toString(r.strategy);
    j["faults"] = r.faults;
    j["eligible"] = r.eligible;
    j["initialDiagnoses"] = r.initialDiagnoses;
    j["queries"] = r.queries;
    j["interactions"] = r.interactions;
    j["remaining"] = r.remaining;
    j["status"] = toString(r.status);
    j["success"] = r.success;
    j["flips"] = r.flips;
    j["truth"] = r.truth;
    j["solved"] = r.solved;
    return j.dump();
}

std::string summaryTable(const SimulationReport& report, const SimulationConfig& config) {
    std::ostringstream out;
    out << "trials " << config.trials << ", faults " << config.faults << ", oracle "
        << (config.oracle == OracleSpec::Kind::Noisy ? "noisy" : "perfect");
    if (config.oracle == OracleSpec::Kind::Noisy) out << " (gamma " << config.gamma << ")";
    out << ", seed " << config.seed << "\n\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-9s %7s %9s %13s %12s %8s %15s %12s\n", "strategy", "trials", "eligible",
                  "mean queries", "med queries", "success", "mean remaining", "divergences");
    out << line;
    for (const auto& s : report.summaries) {
        std::snprintf(line, sizeof line, "%-9s %7zu %9zu %13.3f %12.1f %8.2f %15.3f %12zu\n",
                      std::string(toString(s.strategy)).c_str(), s.trials, s.eligible, s.meanQueries,
                      s.medianQueries, s.successRate, s.meanRemaining, s.divergences);
        out << line;
    }
    return out.str();
}

}  // namespace kbdx
