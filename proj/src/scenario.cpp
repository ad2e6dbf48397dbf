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

#include "alterbft/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "alterbft/codec.hpp"

namespace alterbft {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> parse_list(const std::string& key, const std::string& value) {
    auto v = trim(value);
    const bool open = !v.empty() && v.front() == '[', close = !v.empty() && v.back() == ']';
    if (open != close || (open && v.size() < 2)) throw ConfigError(key, "expected a list like [a, b]");
    // The brackets may be dropped on the command line: "a,b".
    if (open) v = v.substr(1, v.size() - 2);
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    const auto v = trim(value);
    std::size_t pos = 0;
    unsigned long long x = 0;
    try {
        if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
        x = std::stoull(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
    return x;
}

double parse_double(const std::string& key, const std::string& value) {
    const auto v = trim(value);
    std::size_t pos = 0;
    double x = 0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a number, got '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError(key, "expected a number, got '" + v + "'");
    return x;
}

Duration parse_ms(const std::string& key, const std::string& value) {
    const double ms = parse_double(key, value);
    if (ms < 0) throw ConfigError(key, "must not be negative");
    return from_ms(ms);
}

bool parse_bool(const std::string& key, const std::string& value) {
    auto v = trim(value);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    throw ConfigError(key, "expected a boolean, got '" + v + "'");
}

std::string unquote(const std::string& value) {
    auto v = trim(value);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    return v;
}

}  // namespace

std::string_view to_string(AdversaryMode m) {
    switch (m) {
    case AdversaryMode::None: return "NONE";
    case AdversaryMode::SilentLeader: return "SILENT_LEADER";
    case AdversaryMode::Equivocate: return "EQUIVOCATE";
    case AdversaryMode::Crash: return "CRASH";
    case AdversaryMode::DelayL: return "DELAY_L";
    }
    return "?";
}

AdversaryMode adversary_from_string(std::string_view s) {
    std::string u(s);
    std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return std::toupper(c); });
    for (auto m : {AdversaryMode::None, AdversaryMode::SilentLeader, AdversaryMode::Equivocate, AdversaryMode::Crash,
                   AdversaryMode::DelayL}) {
        if (to_string(m) == u) return m;
    }
    throw ConfigError("adversary", "unknown mode '" + std::string(s) + "'");
}

bool ScenarioConfig::is_byzantine(std::uint32_t r) const {
    return std::find(byzantine.begin(), byzantine.end(), r) != byzantine.end();
}

const std::vector<std::string>& ScenarioConfig::keys() {
    static const std::vector<std::string> k = {
        "n",          "f",          "byzantine",     "adversary",   "crash_time",     "silent_epochs",
        "delta_s",    "delta_l",    "gst",           "small_threshold", "dist_s",     "dist_l",
        "dist_l_pre", "payload_size", "epochs",      "seed",        "fast_path",      "wait_after_misbehavior",
        "start_stagger", "max_time", "scheme",       "stress_s_violation", "trace",   "metrics",
        "checks",
    };
    return k;
}

void ScenarioConfig::set(const std::string& key, const std::string& value) {
    if (key == "n") {
        n = static_cast<std::uint32_t>(parse_uint(key, value));
    } else if (key == "f") {
        f = static_cast<std::uint32_t>(parse_uint(key, value));
    } else if (key == "byzantine") {
        byzantine.clear();
        for (const auto& x : parse_list(key, value)) byzantine.push_back(static_cast<std::uint32_t>(parse_uint(key, x)));
    } else if (key == "adversary") {
        adversary = adversary_from_string(unquote(value));
    } else if (key == "crash_time") {
        crash_time = parse_ms(key, value);
    } else if (key == "silent_epochs") {
        silent_epochs.clear();
        for (const auto& x : parse_list(key, value)) silent_epochs.push_back(parse_uint(key, x));
    } else if (key == "delta_s") {
        delta_s = parse_ms(key, value);
    } else if (key == "delta_l") {
        delta_l = parse_ms(key, value);
    } else if (key == "gst") {
        if (unquote(value) == "never") {
            gst.reset();
        } else {
            gst = parse_ms(key, value);
        }
    } else if (key == "small_threshold") {
        small_threshold = parse_uint(key, value);
    } else if (key == "dist_s") {
        dist_s = unquote(value);
    } else if (key == "dist_l") {
        dist_l = unquote(value);
    } else if (key == "dist_l_pre") {
        dist_l_pre = unquote(value);
    } else if (key == "payload_size") {
        payload_size = parse_uint(key, value);
    } else if (key == "epochs") {
        epochs = parse_uint(key, value);
    } else if (key == "seed") {
        seed = parse_uint(key, value);
    } else if (key == "fast_path") {
        fast_path = parse_bool(key, value);
    } else if (key == "wait_after_misbehavior") {
        wait_after_misbehavior = parse_bool(key, value);
    } else if (key == "start_stagger") {
        start_stagger = parse_ms(key, value);
    } else if (key == "max_time") {
        max_time = parse_ms(key, value);
    } else if (key == "scheme") {
        scheme = unquote(value);
    } else if (key == "stress_s_violation") {
        stress_s_violation = parse_double(key, value);
    } else if (key == "trace") {
        trace_path = unquote(value);
    } else if (key == "metrics") {
        metrics_path = unquote(value);
    } else if (key == "checks") {
        checks.clear();
        for (const auto& x : parse_list(key, value)) checks.push_back(unquote(x));
    } else {
        throw ConfigError(key, "unknown key");
    }
}

void ScenarioConfig::validate() const {
    if (n == 0) throw ConfigError("n", "must be positive");
    if (n <= 2 * f) throw ConfigError("n", "n = " + std::to_string(n) + " must exceed 2f = " + std::to_string(2 * f));
    if (byzantine.size() > f) throw ConfigError("byzantine", "more than f = " + std::to_string(f) + " replicas");
    std::set<std::uint32_t> seen;
    for (auto b : byzantine) {
        if (b >= n) throw ConfigError("byzantine", "replica " + std::to_string(b) + " out of range");
        if (!seen.insert(b).second) throw ConfigError("byzantine", "replica " + std::to_string(b) + " listed twice");
    }
    if (delta_s <= Duration{0}) throw ConfigError("delta_s", "must be positive");
    if (delta_l < delta_s) throw ConfigError("delta_l", "must be at least delta_s");
    if (payload_size < 4) throw ConfigError("payload_size", "must be at least 4 bytes");
    if (scheme != "ed25519" && scheme != "mac") throw ConfigError("scheme", "expected ed25519 or mac");
    if (stress_s_violation < 0 || stress_s_violation > 1) throw ConfigError("stress_s_violation", "must be in [0, 1]");

    // Every QUIT-EPOCH variant and every vote must travel as type S.
    Vote v;
    SilenceMsg s;
    BlockCert bc;
    SilenceCert sc;
    for (std::uint32_t i = 0; i <= f; ++i) {
        bc.votes.push_back(Vote{0, {}, ReplicaId{i}, {}});
        sc.msgs.push_back(SilenceMsg{0, ReplicaId{i}, {}});
    }
    const std::size_t largest = std::max({codec::encoded_size(Message{QuitEpochMsg{bc}}),
                                          codec::encoded_size(Message{QuitEpochMsg{sc}}),
                                          codec::encoded_size(Message{QuitEpochMsg{EquivCert{0, v, v}}}),
                                          codec::encoded_size(Message{v}), codec::encoded_size(Message{s})});
    if (largest > small_threshold) {
        throw ConfigError("small_threshold",
                          "certificates of " + std::to_string(largest) + " bytes would not be type S");
    }
}

json to_json(const ScenarioConfig& c) {
    json j;
    j["n"] = c.n;
    j["f"] = c.f;
    j["byzantine"] = c.byzantine;
    j["adversary"] = to_string(c.adversary);
    j["crash_time"] = to_ms(c.crash_time);
    j["silent_epochs"] = c.silent_epochs;
    j["delta_s"] = to_ms(c.delta_s);
    j["delta_l"] = to_ms(c.delta_l);
    j["gst"] = c.gst ? json(to_ms(*c.gst)) : json("never");
    j["small_threshold"] = c.small_threshold;
    j["dist_s"] = c.dist_s;
    j["dist_l"] = c.dist_l;
    j["dist_l_pre"] = c.dist_l_pre;
    j["payload_size"] = c.payload_size;
    j["epochs"] = c.epochs;
    j["seed"] = c.seed;
    j["fast_path"] = c.fast_path;
    j["wait_after_misbehavior"] = c.waits_after_misbehavior();
    j["start_stagger"] = to_ms(c.stagger());
    j["max_time"] = c.max_time ? json(to_ms(*c.max_time)) : json(nullptr);
    j["scheme"] = c.scheme;
    j["stress_s_violation"] = c.stress_s_violation;
    return j;
}

ScenarioConfig scenario_from_json(const json& j) {
    ScenarioConfig c;
    for (const auto& [key, value] : j.items()) {
        if (value.is_null()) continue;
        std::string text;
        if (value.is_string()) {
            text = value.get<std::string>();
        } else if (value.is_array()) {
            text = "[";
            for (std::size_t i = 0; i < value.size(); ++i) text += (i ? ", " : "") + value[i].dump();
            text += "]";
        } else {
            text = value.dump();
        }
        c.set(key, text);
    }
    return c;
}

ScenarioConfig parse_scenario(const std::string& text) {
    ScenarioConfig c;
    std::stringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
        }
        c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

}  // namespace alterbft
