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

#include "alterbft/trace.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace alterbft {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 11> kKindNames = {
    "SEND", "DELIVER", "TIMER_START", "TIMER_FIRE", "EPOCH_START", "LOCK",
    "STATE_CHANGE", "DECISION", "COMMIT", "STORE", "REJECT",
};

template <class E>
E enum_from(std::string_view s, E first, E last, std::string_view what) {
    for (auto i = static_cast<int>(first); i <= static_cast<int>(last); ++i) {
        if (to_string(static_cast<E>(i)) == s) return static_cast<E>(i);
    }
    throw std::invalid_argument(std::string("unknown ") + std::string(what) + ": " + std::string(s));
}

MessageType message_type_from(std::string_view s) {
    return enum_from<MessageType>(s, MessageType::Propose, MessageType::QuitEpoch, "message type");
}
CertKind cert_kind_from(std::string_view s) {
    return enum_from<CertKind>(s, CertKind::Block, CertKind::Silence, "certificate kind");
}
TimerKind timer_kind_from(std::string_view s) {
    return enum_from<TimerKind>(s, TimerKind::Certificate, TimerKind::EpochChange, "timer kind");
}
EpochState epoch_state_from(std::string_view s) {
    return enum_from<EpochState>(s, EpochState::Active, EpochState::NotCommitted, "epoch state");
}
MessageClass class_from(std::string_view s) {
    if (s == "S") return MessageClass::Small;
    if (s == "L") return MessageClass::Large;
    throw std::invalid_argument("unknown message class: " + std::string(s));
}

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

template <class T>
void get(const json& j, const char* key, std::optional<T>& out) {
    if (auto it = j.find(key); it != j.end()) out = it->template get<T>();
}

}  // namespace

std::string_view to_string(TraceKind k) { return kKindNames.at(static_cast<std::size_t>(k)); }

TraceKind trace_kind_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == s) return static_cast<TraceKind>(i);
    }
    throw std::invalid_argument("unknown trace kind: " + std::string(s));
}

json to_json(const TraceRecord& r) {
    json j;
    j["t"] = r.time;
    j["r"] = r.replica;
    j["kind"] = to_string(r.kind);
    put(j, "epoch", r.epoch);
    if (r.block) j["block"] = r.block->hex();
    if (r.prev) j["prev"] = r.prev->hex();
    if (r.msg) j["msg"] = to_string(*r.msg);
    if (r.cert) j["cert"] = to_string(*r.cert);
    put(j, "cert_epoch", r.cert_epoch);
    put(j, "signer", r.signer);
    put(j, "from", r.from);
    put(j, "to", r.to);
    put(j, "sent", r.sent);
    if (r.cls) j["cls"] = to_string(*r.cls);
    put(j, "bytes", r.bytes);
    if (r.timer) j["timer"] = to_string(*r.timer);
    put(j, "duration", r.duration);
    if (r.state) j["state"] = to_string(*r.state);
    put(j, "height", r.height);
    put(j, "direct", r.direct);
    put(j, "checksum", r.checksum);
    put(j, "computed", r.computed);
    put(j, "reason", r.reason);
    return j;
}

TraceRecord record_from_json(const json& j) {
    TraceRecord r;
    r.time = j.at("t").get<std::int64_t>();
    r.replica = j.at("r").get<std::uint32_t>();
    r.kind = trace_kind_from_string(j.at("kind").get<std::string>());
    get(j, "epoch", r.epoch);
    if (auto it = j.find("block"); it != j.end()) r.block = BlockId::from_hex(it->get<std::string>());
    if (auto it = j.find("prev"); it != j.end()) r.prev = BlockId::from_hex(it->get<std::string>());
    if (auto it = j.find("msg"); it != j.end()) r.msg = message_type_from(it->get<std::string>());
    if (auto it = j.find("cert"); it != j.end()) r.cert = cert_kind_from(it->get<std::string>());
    get(j, "cert_epoch", r.cert_epoch);
    get(j, "signer", r.signer);
    get(j, "from", r.from);
    get(j, "to", r.to);
    get(j, "sent", r.sent);
    if (auto it = j.find("cls"); it != j.end()) r.cls = class_from(it->get<std::string>());
    get(j, "bytes", r.bytes);
    if (auto it = j.find("timer"); it != j.end()) r.timer = timer_kind_from(it->get<std::string>());
    get(j, "duration", r.duration);
    if (auto it = j.find("state"); it != j.end()) r.state = epoch_state_from(it->get<std::string>());
    get(j, "height", r.height);
    get(j, "direct", r.direct);
    get(j, "checksum", r.checksum);
    get(j, "computed", r.computed);
    get(j, "reason", r.reason);
    return r;
}

void write_jsonl(std::ostream& out, const Trace& trace) {
    out << json{{"kind", "HEADER"}, {"config", trace.header}}.dump() << '\n';
    for (const auto& r : trace.records) out << to_json(r).dump() << '\n';
    if (trace.complete) out << json{{"kind", "END"}, {"t", trace.end_time}}.dump() << '\n';
}

std::string to_jsonl(const Trace& trace) {
    std::ostringstream out;
    write_jsonl(out, trace);
    return out.str();
}

Trace read_jsonl(std::istream& in) {
    Trace trace;
    trace.complete = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
        }
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "HEADER") {
            trace.header = j.at("config");
        } else if (kind == "END") {
            trace.complete = true;
            trace.end_time = j.at("t").get<std::int64_t>();
        } else {
            if (trace.complete) throw std::runtime_error("trace line " + std::to_string(lineno) + ": record after END");
            trace.records.push_back(record_from_json(j));
            trace.end_time = std::max(trace.end_time, trace.records.back().time);
        }
    }
    return trace;
}

Trace read_jsonl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    return read_jsonl(in);
}

}  // namespace alterbft
