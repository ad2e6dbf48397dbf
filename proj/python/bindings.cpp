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

#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "alterbft/checker.hpp"
#include "alterbft/latmodel.hpp"
#include "alterbft/netsim.hpp"

namespace py = pybind11;
using namespace alterbft;

namespace {

ScenarioConfig scenario(const std::vector<std::pair<std::string, std::string>>& settings) {
    ScenarioConfig c;
    for (const auto& [k, v] : settings) c.set(k, v);
    c.validate();
    return c;
}

Trace parse_trace(const std::string& jsonl) {
    std::istringstream in(jsonl);
    return read_jsonl(in);
}

latmodel::DelaySampleSet samples(const std::vector<double>& v) { return {v, "python"}; }

}  // namespace

PYBIND11_MODULE(_alterbft, m) {
    m.doc() = "AlterBFT simulator core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def(
        "run",
        [](const std::vector<std::pair<std::string, std::string>>& settings) {
            const auto cfg = scenario(settings);
            Trace t;
            {
                py::gil_scoped_release release;
                t = netsim::simulate(cfg);
            }
            return to_jsonl(t);
        },
        py::arg("settings"), "Simulates a scenario given (key, value) settings; returns the trace as JSON lines.");

    m.def(
        "check",
        [](const std::string& jsonl, const std::vector<std::string>& names) {
            auto j = nlohmann::json::array();
            for (const auto& v : checker::run_checks(parse_trace(jsonl), names)) j.push_back(checker::to_json(v));
            return j.dump();
        },
        py::arg("trace"), py::arg("checks"));

    m.def(
        "metrics", [](const std::string& jsonl) { return checker::to_json(checker::metrics(parse_trace(jsonl))).dump(); },
        py::arg("trace"));

    m.def(
        "percentile", [](const std::vector<double>& v, double p) { return latmodel::percentile(samples(v), p); },
        py::arg("samples"), py::arg("p"));

    m.def(
        "synth_large_delay",
        [](const std::vector<double>& v, unsigned k, std::uint64_t seed, std::size_t count) {
            Rng rng(seed);
            const auto set = samples(v);
            std::vector<double> out(count);
            for (auto& x : out) x = latmodel::synth_large_delay(set, k, rng);
            return out;
        },
        py::arg("samples"), py::arg("k") = 64, py::arg("seed") = 1, py::arg("count") = 1);

    m.def(
        "derive_bounds",
        [](const std::vector<double>& v, unsigned k, std::size_t draws, std::uint64_t seed) {
            return latmodel::to_json(latmodel::derive_bounds(samples(v), k, draws, seed)).dump();
        },
        py::arg("samples"), py::arg("k") = 64, py::arg("draws") = 100000, py::arg("seed") = 1);

    m.def(
        "classify",
        [](std::size_t bytes, std::size_t threshold) { return std::string(to_string(classify(bytes, threshold))); },
        py::arg("bytes"), py::arg("threshold") = 4096);

    m.def("check_names", &checker::check_names);
}
