#pragma once

#include <memory>
#include <string>
#include <thread>

#include "reasontrans/reward.hpp"

namespace reasontrans {

struct RewardServiceDefaults {
    ExecLimits limits;
    ToolchainConfig toolchain;
    LengthRewardConfig length;
    RewardWeights weights;
    std::size_t concurrency = 0;
};

/// HTTP boundary for external RL trainers.
///   POST /v1/rewards  {completions[], references[], language, suites[],
///                      config?, weights?} -> {"rewards": [RewardBreakdown...]}
///   GET  /healthz     -> 200 "ok"
/// Malformed requests get a 400 carrying the offending field name. Numeric
/// results are exactly what combined_reward produces for the same inputs.
class RewardService {
public:
    explicit RewardService(RewardServiceDefaults defaults = {});
    ~RewardService();

    RewardService(const RewardService&) = delete;
    RewardService& operator=(const RewardService&) = delete;

    /// Starts serving on a background thread. Returns the bound port (useful
    /// with port 0 for tests).
    int start(const std::string& host, int port);
    void stop();

    bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Parses "host:port" (host defaults to 0.0.0.0 when omitted).
std::pair<std::string, int> parse_bind_address(const std::string& bind);

/// Blocking entry point used by the CLI: serves until the process is signalled.
void serve_rewards(const std::string& bind_address, const RewardServiceDefaults& defaults);

}  // namespace reasontrans
