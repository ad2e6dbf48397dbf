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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alterbft/types.hpp"

namespace alterbft {

enum class TraceKind : std::uint8_t {
    Send,
    Deliver,
    TimerStart,
    TimerFire,
    EpochStart,
    Lock,
    StateChange,
    Decision,
    Commit,
    Store,
    Reject,
};

std::string_view to_string(TraceKind k);
TraceKind trace_kind_from_string(std::string_view s);

// One log entry. Which optional fields are set depends on the kind:
//   SEND        msg, epoch, block?, signer?, cert?, cls, bytes, to?
//   DELIVER     msg, epoch, block?, signer?, cert?, cls, from, sent
//   TIMER_*     timer, epoch, block?, duration (start only)
//   EPOCH_START epoch
//   LOCK        epoch (current), cert_epoch, block
//   STATE_CHANGE epoch, state, cert?
//   DECISION    epoch, block
//   COMMIT      epoch (deciding epoch), block, prev?, height, direct, checksum, computed
//   STORE       block, prev?
//   REJECT      reason, msg?, epoch?
struct TraceRecord {
    std::int64_t time = 0;  // microseconds
    std::uint32_t replica = 0;
    TraceKind kind = TraceKind::Send;

    std::optional<Epoch> epoch;
    std::optional<BlockId> block;
    std::optional<BlockId> prev;
    std::optional<MessageType> msg;
    std::optional<CertKind> cert;
    std::optional<Epoch> cert_epoch;
    std::optional<std::uint32_t> signer;
    std::optional<std::uint32_t> from;
    std::optional<std::uint32_t> to;
    std::optional<std::int64_t> sent;
    std::optional<MessageClass> cls;
    std::optional<std::uint64_t> bytes;
    std::optional<TimerKind> timer;
    std::optional<std::int64_t> duration;
    std::optional<EpochState> state;
    std::optional<std::uint64_t> height;
    std::optional<bool> direct;
    std::optional<std::uint32_t> checksum;
    std::optional<std::uint32_t> computed;
    std::optional<std::string> reason;

    bool operator==(const TraceRecord&) const = default;
};

nlohmann::json to_json(const TraceRecord& r);
TraceRecord record_from_json(const nlohmann::json& j);

// A run's log: the scenario header, the records, and whether the run drained
// its event queue (complete) or stopped at the time horizon.
struct Trace {
    nlohmann::json header = nlohmann::json::object();
    std::vector<TraceRecord> records;
    bool complete = true;
    std::int64_t end_time = 0;
};

// Newline-delimited JSON: a HEADER line, one line per record, an END line.
void write_jsonl(std::ostream& out, const Trace& trace);
std::string to_jsonl(const Trace& trace);
// A missing END line yields complete = false.
Trace read_jsonl(std::istream& in);
Trace read_jsonl_file(const std::string& path);

}  // namespace alterbft
