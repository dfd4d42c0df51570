// JSON session API. SessionService is transport-free so it can be exercised
// directly in tests; serve() binds it to an HTTP listener.

#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "json.hpp"
#include "kbdx/reasoner.hpp"
#include "kbdx/session.hpp"

namespace kbdx {

using Json = nlohmann::ordered_json;

struct ServiceResponse {
    int status = 200;
    Json body;
};

Json stateToJson(const std::string& sessionId, const SessionState& state);

class SessionService {
public:
    explicit SessionService(std::chrono::minutes idleLimit = std::chrono::minutes(60),
                            const Reasoner& reasoner = defaultReasoner());

    ServiceResponse handle(std::string_view method, std::string_view path, std::string_view body);

    /// Drops sessions idle for longer than the limit; returns how many.
    std::size_t evictIdle(std::chrono::steady_clock::time_point now = std::chrono::steady_clock::now());
    std::size_t sessionCount() const;

    /// Direct access for differential tests.
    std::optional<SessionState> snapshot(const std::string& sessionId) const;

private:
    struct Entry {
        std::mutex lock;  // serializes mutations of one session
        SessionState state;
        std::chrono::steady_clock::time_point lastUsed;
    };

    ServiceResponse dispatch(std::string_view method, std::string_view path, std::string_view body);
    ServiceResponse create(const Json& body);
    ServiceResponse score(const Json& body);
    ServiceResponse onSession(std::string_view method, const std::string& id, std::string_view action,
                              const Json& body);
    std::shared_ptr<Entry> find(const std::string& id) const;
    std::string nextId();

    const Reasoner* reasoner_;
    std::chrono::minutes idleLimit_;
    mutable std::mutex tableLock_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    std::uint64_t counter_ = 0;
};

/// Blocks serving HTTP until the process is stopped.
int serve(SessionService& service, const std::string& host, int port);

}  // namespace kbdx
