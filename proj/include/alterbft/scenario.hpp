/**
 * Copyright 2026 The alterbft-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alterbft/common.hpp"

namespace alterbft {

enum class AdversaryMode : std::uint8_t { None, SilentLeader, Equivocate, Crash, DelayL };

std::string_view to_string(AdversaryMode m);
AdversaryMode adversary_from_string(std::string_view s);

class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

// Everything needed to reproduce a run. Durations are microseconds internally
// and milliseconds in files and on the command line.
struct ScenarioConfig {
    std::uint32_t n = 5;
    std::uint32_t f = 2;
    std::vector<std::uint32_t> byzantine;
    AdversaryMode adversary = AdversaryMode::None;
    // CRASH: time after which Byzantine replicas fall silent.
    Duration crash_time{0};
    // SILENT_LEADER: restrict silence to these epochs (empty: every led epoch).
    std::vector<Epoch> silent_epochs;

    Duration delta_s = from_ms(100);
    Duration delta_l = from_ms(500);
    std::optional<SimTime> gst = SimTime{0};  // nullopt: never
    std::size_t small_threshold = 4096;
    // Sampler specs; empty selects the default for the class.
    std::string dist_s;
    std::string dist_l;
    std::string dist_l_pre;

    std::size_t payload_size = 128 * 1024;
    Epoch epochs = 50;
    std::uint64_t seed = 1;
    bool fast_path = false;
    // nullopt: same as fast_path.
    std::optional<bool> wait_after_misbehavior;
    std::optional<Duration> start_stagger;  // nullopt: delta_s
    std::optional<SimTime> max_time;
    std::string scheme = "ed25519";
    // Probability that an honest type-S delivery overshoots delta_s.
    double stress_s_violation = 0.0;

    std::string trace_path;
    std::string metrics_path;
    std::vector<std::string> checks;

    Duration stagger() const { return start_stagger.value_or(delta_s); }
    bool waits_after_misbehavior() const { return wait_after_misbehavior.value_or(fast_path); }
    bool is_byzantine(std::uint32_t r) const;

    // Throws ConfigError naming the offending field.
    void validate() const;

    // Applies one "key = value" setting (value in file syntax).
    void set(const std::string& key, const std::string& value);

    static const std::vector<std::string>& keys();
};

nlohmann::json to_json(const ScenarioConfig& c);
ScenarioConfig scenario_from_json(const nlohmann::json& j);

// "key = value" lines, '#' comments, lists as [a, b, c].
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);

}  // namespace alterbft
