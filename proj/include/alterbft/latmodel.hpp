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
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alterbft/rng.hpp"

namespace alterbft::latmodel {

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    // 0 when the error is not tied to a line (e.g. an empty file).
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

// Delay samples in milliseconds.
struct DelaySampleSet {
    std::vector<double> samples;
    std::string label;
};

// One decimal value per line. A non-numeric first non-blank line is a header;
// anything else that does not parse as a positive number is an error.
DelaySampleSet parse_samples(std::istream& in, std::string label = {});
DelaySampleSet load_samples(const std::string& path);

// Nearest rank: the ceil(p/100 * N)-th smallest sample, 0 < p <= 100.
double percentile(const DelaySampleSet& set, double p);
double percentile_sorted(const std::vector<double>& sorted, double p);

// Largest of k uniform draws (with replacement) from the set.
double synth_large_delay(const DelaySampleSet& set, unsigned k, Rng& rng);

struct Bounds {
    double delta_s = 0;
    double delta_l = 0;
    unsigned k = 64;
    std::size_t draws = 100000;
    std::uint64_t seed = 1;
    std::size_t count = 0;
};

// delta_s: 99.99th percentile of the set; delta_l: 99th percentile of `draws`
// synthetic large-message delays.
Bounds derive_bounds(const DelaySampleSet& set, unsigned k = 64, std::size_t draws = 100000, std::uint64_t seed = 1);

nlohmann::json to_json(const Bounds& b);

}  // namespace alterbft::latmodel
