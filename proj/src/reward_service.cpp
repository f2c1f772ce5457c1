#include "reasontrans/reward_service.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace reasontrans {

using nlohmann::json;

namespace {

struct FieldError {
    std::string field;
    std::string message;
};

json bad_request(const std::string& field, const std::string& message) {
    return json{{"error", message}, {"field", field}};
}

const json& require(const json& body, const char* field) {
    auto it = body.find(field);
    if (it == body.end()) {
        throw FieldError{field, std::string("missing required field `") + field + "`"};
    }
    return *it;
}

std::vector<std::string> string_array(const json& j, const char* field) {
    if (!j.is_array()) {
        throw FieldError{field, std::string("`") + field + "` must be an array of strings"};
    }
    std::vector<std::string> out;
    for (const auto& v : j) {
        if (!v.is_string()) {
            throw FieldError{field, std::string("`") + field + "` must be an array of strings"};
        }
        out.push_back(v.get<std::string>());
    }
    return out;
}

}  // namespace

struct RewardService::Impl {
    RewardServiceDefaults defaults;
    httplib::Server server;
    std::thread thread;
    int port = 0;

    explicit Impl(RewardServiceDefaults d) : defaults(std::move(d)) {
        server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("ok", "text/plain");
        });
        server.Post("/v1/rewards", [this](const httplib::Request& req, httplib::Response& res) {
            handle_rewards(req, res);
        });
    }

    void handle_rewards(const httplib::Request& req, httplib::Response& res) {
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::parse_error& e) {
            res.status = 400;
            res.set_content(bad_request("body", std::string("malformed JSON: ") + e.what()).dump(),
                            "application/json");
            return;
        }
        try {
            const auto completions = string_array(require(body, "completions"), "completions");
            const auto references = string_array(require(body, "references"), "references");

            Language language;
            try {
                language = parse_language(require(body, "language").get<std::string>());
            } catch (const FieldError&) {
                throw;
            } catch (const std::exception& e) {
                throw FieldError{"language", e.what()};
            }

            const json& suites_json = require(body, "suites");
            if (!suites_json.is_array()) {
                throw FieldError{"suites", "`suites` must be an array of test suites"};
            }
            std::vector<TestSuite> suites;
            for (const auto& sj : suites_json) {
                try {
                    suites.push_back(suite_from_json(sj));
                } catch (const std::exception& e) {
                    throw FieldError{"suites", e.what()};
                }
            }
            if (completions.size() != references.size() || completions.size() != suites.size()) {
                throw FieldError{"completions",
                                 "`completions`, `references`, and `suites` must be aligned"};
            }

            LengthRewardConfig config = defaults.length;
            if (body.contains("config")) {
                try {
                    config = length_config_from_json(body["config"]);
                } catch (const std::exception& e) {
                    throw FieldError{"config", e.what()};
                }
            }
            RewardWeights weights = defaults.weights;
            if (body.contains("weights")) {
                try {
                    weights = weights_from_json(body["weights"]);
                } catch (const std::exception& e) {
                    throw FieldError{"weights", e.what()};
                }
            }

            const auto breakdowns =
                combined_reward(completions, references, language, suites, config, weights,
                                defaults.limits, defaults.toolchain, defaults.concurrency);
            json rewards = json::array();
            for (const auto& b : breakdowns) {
                rewards.push_back(to_json(b));
            }
            res.set_content(json{{"rewards", std::move(rewards)}}.dump(), "application/json");
        } catch (const FieldError& e) {
            res.status = 400;
            res.set_content(bad_request(e.field, e.message).dump(), "application/json");
        } catch (const std::exception& e) {
            // Per-item sandbox failures are already zeros inside combined_reward;
            // anything reaching here is a request-shape problem.
            res.status = 400;
            res.set_content(bad_request("request", e.what()).dump(), "application/json");
        }
    }
};

RewardService::RewardService(RewardServiceDefaults defaults)
    : impl_(std::make_unique<Impl>(std::move(defaults))) {}

RewardService::~RewardService() {
    stop();
}

int RewardService::start(const std::string& host, int port) {
    if (impl_->server.is_running()) {
        throw Error("reward service already running");
    }
    int bound = port;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
        if (bound < 0) {
            throw Error("reward service: cannot bind to " + host);
        }
    } else if (!impl_->server.bind_to_port(host, port)) {
        throw Error("reward service: cannot bind to " + host + ":" + std::to_string(port));
    }
    impl_->port = bound;
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

void RewardService::stop() {
    if (impl_ && impl_->server.is_running()) {
        impl_->server.stop();
    }
    if (impl_ && impl_->thread.joinable()) {
        impl_->thread.join();
    }
}

bool RewardService::running() const {
    return impl_->server.is_running();
}

std::pair<std::string, int> parse_bind_address(const std::string& bind) {
    const std::size_t colon = bind.rfind(':');
    if (colon == std::string::npos) {
        throw Error("bad bind address `" + bind + "` (expected HOST:PORT)");
    }
    std::string host = bind.substr(0, colon);
    if (host.empty()) {
        host = "0.0.0.0";
    }
    int port = 0;
    try {
        port = std::stoi(bind.substr(colon + 1));
    } catch (const std::exception&) {
        throw Error("bad port in bind address `" + bind + "`");
    }
    return {host, port};
}

void serve_rewards(const std::string& bind_address, const RewardServiceDefaults& defaults) {
    auto [host, port] = parse_bind_address(bind_address);
    RewardService service(defaults);
    const int bound = service.start(host, port);
    // Blocks until the process is interrupted.
    while (service.running()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(200));
    }
    (void)bound;
}

}  // namespace reasontrans
