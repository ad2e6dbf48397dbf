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

#include "alterbft/latmodel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace alterbft::latmodel {

namespace {

bool parse_value(const std::string& text, double& out) {
    const auto b = text.find_first_not_of(" \t\r");
    if (b == std::string::npos) return false;
    const auto e = text.find_last_not_of(" \t\r");
    const std::string v = text.substr(b, e - b + 1);
    try {
        std::size_t pos = 0;
        out = std::stod(v, &pos);
        return pos == v.size();
    } catch (const std::exception&) {
        return false;
    }
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

DelaySampleSet parse_samples(std::istream& in, std::string label) {
    DelaySampleSet set;
    set.label = std::move(label);
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        double v = 0;
        if (!parse_value(line, v)) {
            if (first) {
                first = false;
                continue;
            }
            throw ParseError(lineno, "not a number: '" + line + "'");
        }
        first = false;
        if (!(v > 0) || !std::isfinite(v)) throw ParseError(lineno, "delay must be positive: '" + line + "'");
        set.samples.push_back(v);
    }
    if (set.samples.empty()) throw ParseError(0, "no samples");
    return set;
}

DelaySampleSet load_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sample file: " + path);
    return parse_samples(in, path);
}

double percentile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("percentile of an empty set");
    if (!(p > 0 && p <= 100)) throw std::invalid_argument("percentile must be in (0, 100]");
    const double exact = p / 100.0 * static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(exact - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

double percentile(const DelaySampleSet& set, double p) {
    auto sorted = set.samples;
    std::sort(sorted.begin(), sorted.end());
    return percentile_sorted(sorted, p);
}

double synth_large_delay(const DelaySampleSet& set, unsigned k, Rng& rng) {
    if (set.samples.empty()) throw std::invalid_argument("synthetic delay from an empty set");
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    double best = 0;
    for (unsigned i = 0; i < k; ++i) best = std::max(best, set.samples[rng.below(set.samples.size())]);
    return best;
}

Bounds derive_bounds(const DelaySampleSet& set, unsigned k, std::size_t draws, std::uint64_t seed) {
    if (draws == 0) throw std::invalid_argument("draws must be positive");
    Bounds b;
    b.k = k;
    b.draws = draws;
    b.seed = seed;
    b.count = set.samples.size();
    b.delta_s = percentile(set, 99.99);
    Rng rng(seed);
    std::vector<double> synth(draws);
    for (auto& x : synth) x = synth_large_delay(set, k, rng);
    std::sort(synth.begin(), synth.end());
    b.delta_l = percentile_sorted(synth, 99);
    return b;
}

nlohmann::json to_json(const Bounds& b) {
    return {{"delta_s", b.delta_s}, {"delta_l", b.delta_l}, {"k", b.k},
            {"draws", b.draws},     {"seed", b.seed},       {"samples", b.count}};
}

}  // namespace alterbft::latmodel
