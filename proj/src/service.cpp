#include "kbdx/service.hpp"

#include <cstdio>
#include <random>

#include "httplib.h"
#include "kbdx/complexity.hpp"
#include "kbdx/errors.hpp"
#include "kbdx/parser.hpp"
#include "kbdx/validate.hpp"

namespace kbdx {

namespace {

// Request problems detected before any session operation runs.
struct BadRequest {
    std::string message;
};

ServiceResponse errorResponse(int status, std::string_view code, const std::string& message) {
    Json body;
    body["error"] = code;
    body["message"] = message;
    return {status, std::move(body)};
}

int statusFor(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidDpi: return 422;
        case ErrorCode::SessionNotActive:
        case ErrorCode::ModeMismatch:
        case ErrorCode::DuplicateTestCase:
        case ErrorCode::ContradictsAcquired: return 409;
        default: return 400;
    }
}

ServiceResponse fromError(const Error& e) {
    ServiceResponse r = errorResponse(statusFor(e.code()), toString(e.code()), e.what());
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
        r.body["line"] = pe->line();
        r.body["column"] = pe->column();
        r.body["detail"] = pe->detail();
        r.body["expected"] = pe->expected();
    }
    if (const auto* ie = dynamic_cast<const InvalidDpiError*>(&e)) {
        Json list = Json::array();
        for (const auto& v : ie->report().violations) {
            list.push_back({{"kind", toString(v.kind)}, {"detail", v.detail}, {"axiomIds", v.axiomIds}});
        }
        r.body["violations"] = std::move(list);
    }
    return r;
}

Json axiomList(const std::vector<Axiom>& axioms) {
    Json list = Json::array();
    for (const auto& a : axioms) list.push_back({{"id", a.id}, {"axiom", serializeAxiom(a)}});
    return list;
}

const Json& field(const Json& body, const char* name) {
    if (!body.is_object() || !body.contains(name)) throw BadRequest{std::string("missing field '") + name + "'"};
    return body.at(name);
}

std::string stringField(const Json& body, const char* name) {
    const Json& v = field(body, name);
    if (!v.is_string()) throw BadRequest{std::string("field '") + name + "' must be a string"};
    return v.get<std::string>();
}

std::uint64_t revisionField(const Json& body) {
    const Json& v = field(body, "queryRevision");
    if (!v.is_number_unsigned() && !v.is_number_integer()) throw BadRequest{"queryRevision must be an integer"};
    return v.get<std::uint64_t>();
}

std::vector<std::string_view> splitPath(std::string_view path) {
    std::vector<std::string_view> parts;
    while (!path.empty()) {
        if (path.front() == '/') {
            path.remove_prefix(1);
            continue;
        }
        const std::size_t slash = path.find('/');
        parts.push_back(path.substr(0, slash));
        if (slash == std::string_view::npos) break;
        path.remove_prefix(slash);
    }
    return parts;
}

}  // namespace

Json stateToJson(const std::string& sessionId, const SessionState& s) {
    Json j;
    j["sessionId"] = sessionId;
    j["queryRevision"] = s.revision;
    j["mode"] = toString(s.mode);
    j["status"] = toString(s.status);
    j["solved"] = s.solved ? Json(s.solved->axioms) : Json(nullptr);

    Json diagnoses = Json::array();
    for (const auto& d : s.leading) {
        diagnoses.push_back({{"axioms", d.axioms}, {"probability", d.probability.value_or(0.0)}});
    }
    j["diagnoses"] = std::move(diagnoses);

    if (s.currentQuery) {
        Json q;
        Json texts = Json::array();
        Json ids = Json::array();
        for (const auto& a : s.currentQuery->axioms) {
            texts.push_back(serializeAxiom(a));
            ids.push_back(a.id);
        }
        q["axioms"] = std::move(texts);
        q["ids"] = std::move(ids);
        q["score"] = s.currentQuery->score;
        j["currentQuery"] = std::move(q);
    } else {
        j["currentQuery"] = nullptr;
    }
    j["ontology"] = axiomList(s.dpi.ontology);
    j["testCases"] = {{"positive", axiomList(s.dpi.positives)}, {"negative", axiomList(s.dpi.negatives)}};
    j["metrics"] = {
        {"queriesAnswered", s.metrics.queriesAnswered},
        {"testCasesAdded", s.metrics.testCasesAdded},
        {"interactions", s.metrics.interactions},
        {"elapsedMs", std::chrono::duration_cast<std::chrono::milliseconds>(s.metrics.elapsed).count()},
        {"remainingDiagnoses", s.metrics.remainingDiagnoses},
    };
    return j;
}

SessionService::SessionService(std::chrono::minutes idleLimit, const Reasoner& reasoner)
    : reasoner_(&reasoner), idleLimit_(idleLimit) {}

std::size_t SessionService::sessionCount() const {
    std::lock_guard lock(tableLock_);
    return sessions_.size();
}

std::optional<SessionState> SessionService::snapshot(const std::string& id) const {
    auto e = find(id);
    if (!e) return std::nullopt;
    std::lock_guard lock(e->lock);
    return e->state;
}

std::size_t SessionService::evictIdle(std::chrono::steady_clock::time_point now) {
    std::lock_guard lock(tableLock_);
    std::size_t dropped = 0;
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        std::unique_lock entryLock(it->second->lock, std::try_to_lock);
        if (entryLock.owns_lock() && now - it->second->lastUsed > idleLimit_) {
            entryLock.unlock();
            it = sessions_.erase(it);
            ++dropped;
        } else {
            ++it;
        }
    }
    return dropped;
}

std::shared_ptr<SessionService::Entry> SessionService::find(const std::string& id) const {
    std::lock_guard lock(tableLock_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

std::string SessionService::nextId() {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%llu-%08llx", static_cast<unsigned long long>(++counter_),
                  static_cast<unsigned long long>(rng() & 0xffffffffULL));
    return buf;
}

ServiceResponse SessionService::handle(std::string_view method, std::string_view path, std::string_view body) {
    ServiceResponse r = dispatch(method, path, body);
    // Session-less replies carry a null revision.
    if (r.body.is_object() && !r.body.contains("queryRevision")) r.body["queryRevision"] = nullptr;
    return r;
}

ServiceResponse SessionService::dispatch(std::string_view method, std::string_view path, std::string_view body) {
    evictIdle();
    try {
        Json parsed;
        if (method == "POST") {
            parsed = Json::parse(body.empty() ? std::string_view("{}") : body, nullptr, false);
            if (parsed.is_discarded() || !parsed.is_object()) {
                return errorResponse(400, "MalformedRequest", "request body must be a JSON object");
            }
        }
        const auto parts = splitPath(path);
        if (parts.size() < 2 || parts[0] != "api") return errorResponse(404, "NotFound", "no such endpoint");
        if (parts[1] == "score" && parts.size() == 2) {
            if (method != "POST") return errorResponse(405, "MethodNotAllowed", "use POST");
            return score(parsed);
        }
        if (parts[1] != "sessions") return errorResponse(404, "NotFound", "no such endpoint");
        if (parts.size() == 2) {
            if (method != "POST") return errorResponse(405, "MethodNotAllowed", "use POST");
            return create(parsed);
        }
        if (parts.size() > 4) return errorResponse(404, "NotFound", "no such endpoint");
        return onSession(method, std::string(parts[2]), parts.size() == 4 ? parts[3] : std::string_view{}, parsed);
    } catch (const BadRequest& e) {
        return errorResponse(400, "MalformedRequest", e.message);
    } catch (const Error& e) {
        return fromError(e);
    } catch (const Json::exception& e) {
        return errorResponse(400, "MalformedRequest", e.what());
    }
}

ServiceResponse SessionService::create(const Json& body) {
    const std::string text = stringField(body, "dpiText");
    Mode mode = Mode::QueryBased;
    if (body.contains("mode")) {
        auto m = parseMode(body.at("mode").get<std::string>());
        if (!m) throw BadRequest{"mode must be \"query\" or \"testcase\""};
        mode = *m;
    }
    SessionConfig config;
    if (body.contains("strategy")) {
        auto s = parseStrategy(body.at("strategy").get<std::string>());
        if (!s) throw BadRequest{"strategy must be entropy, split or random"};
        config.strategy.kind = *s;
    }
    if (body.contains("seed")) config.strategy.seed = body.at("seed").get<std::uint64_t>();
    if (body.contains("k")) {
        const auto k = body.at("k").get<std::int64_t>();
        if (k < 2) throw BadRequest{"k must be at least 2"};
        config.k = static_cast<std::size_t>(k);
    }
    if (body.contains("priors")) {
        const auto p = body.at("priors").get<std::string>();
        if (p == "complexity") {
            config.priors = PriorKind::Complexity;
        } else if (p != "uniform") {
            throw BadRequest{"priors must be uniform or complexity"};
        }
    }
    if (body.contains("coherence")) config.requireCoherence = body.at("coherence").get<bool>();

    Dpi dpi = parseDpiFile(text);
    SessionState state = startSession(std::move(dpi), mode, config, *reasoner_);

    auto entry = std::make_shared<Entry>();
    entry->state = std::move(state);
    entry->lastUsed = std::chrono::steady_clock::now();
    std::string id;
    {
        std::lock_guard lock(tableLock_);
        id = nextId();
        sessions_[id] = entry;
    }
    Json out;
    out["sessionId"] = id;
    out["queryRevision"] = entry->state.revision;
    out["state"] = stateToJson(id, entry->state);
    return {201, std::move(out)};
}

ServiceResponse SessionService::onSession(std::string_view method, const std::string& id, std::string_view action,
                                          const Json& body) {
    auto entry = find(id);
    if (!entry) return errorResponse(404, "UnknownSession", "no session " + id);
    std::lock_guard lock(entry->lock);
    entry->lastUsed = std::chrono::steady_clock::now();
    SessionState& s = entry->state;

    auto reply = [&](int status = 200) {
        Json out;
        out["sessionId"] = id;
        out["queryRevision"] = s.revision;
        out["state"] = stateToJson(id, s);
        return ServiceResponse{status, std::move(out)};
    };
    auto withRevision = [&](ServiceResponse r) {
        r.body["queryRevision"] = s.revision;
        return r;
    };

    if (action.empty()) {
        if (method != "GET") return errorResponse(405, "MethodNotAllowed", "use GET");
        return reply();
    }
    if (method != "POST") return errorResponse(405, "MethodNotAllowed", "use POST");

    try {
        if (action == "answer") {
            const std::uint64_t revision = revisionField(body);
            if (s.mode != Mode::QueryBased) {
                return withRevision(errorResponse(409, "ModeMismatch", "session is in test-case mode"));
            }
            if (revision != s.revision) {
                return withRevision(errorResponse(409, "StaleRevision", "query revision " + std::to_string(revision) +
                                                                            " is not current"));
            }
            const Json& list = field(body, "classifications");
            if (!list.is_array()) throw BadRequest{"classifications must be an array"};
            Answer answer;
            for (const auto& item : list) {
                const std::string axiomId = stringField(item, "axiomId");
                const std::string label = item.contains("answer") ? stringField(item, "answer")
                                                                  : stringField(item, "classification");
                auto c = parseClassification(label);
                if (!c) throw BadRequest{"answer must be positive, negative or unknown"};
                answer.classifications[axiomId] = *c;
            }
            s = submitAnswer(s, answer, *reasoner_);
            return reply();
        }
        if (action == "testcases") {
            if (body.contains("queryRevision") && revisionField(body) != s.revision) {
                return withRevision(errorResponse(409, "StaleRevision", "revision is not current"));
            }
            const std::string text = stringField(body, "axiom");
            const std::string polarity = stringField(body, "polarity");
            Polarity p;
            if (polarity == "positive" || polarity == "+") {
                p = Polarity::Positive;
            } else if (polarity == "negative" || polarity == "-") {
                p = Polarity::Negative;
            } else {
                throw BadRequest{"polarity must be positive or negative"};
            }
            s = addTestCase(s, parseAxiom(text), p, *reasoner_);
            return reply();
        }
        if (action == "mark") {
            if (body.contains("queryRevision") && revisionField(body) != s.revision) {
                return withRevision(errorResponse(409, "StaleRevision", "revision is not current"));
            }
            const Json& index = field(body, "diagnosisIndex");
            if (!index.is_number_integer() || index.get<std::int64_t>() < 0) {
                throw BadRequest{"diagnosisIndex must be a non-negative integer"};
            }
            s = markDiagnosis(s, static_cast<DiagnosisRef>(index.get<std::int64_t>()));
            return reply();
        }
    } catch (const Error& e) {
        return withRevision(fromError(e));
    }
    return errorResponse(404, "NotFound", "no such endpoint");
}

ServiceResponse SessionService::score(const Json& body) {
    std::vector<std::string> texts;
    if (body.contains("axiom")) texts.push_back(stringField(body, "axiom"));
    if (body.contains("axioms")) {
        const Json& list = body.at("axioms");
        if (!list.is_array()) throw BadRequest{"axioms must be an array"};
        for (const auto& t : list) {
            if (!t.is_string()) throw BadRequest{"axioms must be strings"};
            texts.push_back(t.get<std::string>());
        }
    }
    if (texts.empty()) throw BadRequest{"provide 'axiom' or 'axioms'"};
    const bool strict = body.contains("strict") && body.at("strict").get<bool>();

    Json scores = Json::array();
    std::vector<Axiom> axioms;
    for (const auto& t : texts) {
        Axiom a = parseAxiom(t);
        const AxiomScore s = explainAxiom(a, strict);
        Json item;
        item["axiom"] = serializeAxiom(a);
        item["score"] = s.value;
        item["exact"] = s.exact ? Json(s.exact->str()) : Json(nullptr);
        scores.push_back(std::move(item));
        axioms.push_back(std::move(a));
    }
    Json out;
    out["scores"] = std::move(scores);
    out["query"] = scoreQuery(axioms, strict);
    return {200, std::move(out)};
}

int serve(SessionService& service, const std::string& host, int port) {
    httplib::Server server;
    auto bridge = [&service](const httplib::Request& req, httplib::Response& res) {
        const ServiceResponse r = service.handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json; charset=utf-8");
    };
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    server.Get(R"(/api/.*)", bridge);
    server.Post(R"(/api/.*)", bridge);
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    if (!server.listen(host, port)) return 1;
    return 0;
}

}  // namespace kbdx
