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

#include <atomic>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "alterbft/checker.hpp"
#include "alterbft/latmodel.hpp"
#include "alterbft/netsim.hpp"
#include "alterbft/scenario.hpp"
#include "alterbft/trace.hpp"

using namespace alterbft;

namespace {

struct ScenarioArgs {
    std::string config;
    std::map<std::string, std::string> values;

    void attach(CLI::App* app) {
        app->add_option("-c,--config", config, "scenario file (key = value)");
        for (const auto& key : ScenarioConfig::keys()) app->add_option("--" + key, values[key], "override '" + key + "'");
    }

    ScenarioConfig build() const {
        ScenarioConfig cfg = config.empty() ? ScenarioConfig{} : load_scenario(config);
        for (const auto& [key, value] : values)
            if (!value.empty()) cfg.set(key, value);
        cfg.validate();
        return cfg;
    }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

bool report(const std::vector<checker::Verdict>& verdicts, std::ostream& out) {
    bool pass = true;
    for (const auto& v : verdicts) {
        out << fmt::format("{:<13} {}  {}\n", v.name, v.pass ? "PASS" : "FAIL", v.detail);
        pass = pass && v.pass;
    }
    return pass;
}

int cmd_run(const ScenarioArgs& args) {
    const ScenarioConfig cfg = args.build();
    const Trace trace = netsim::simulate(cfg);
    if (!cfg.trace_path.empty()) write_file(cfg.trace_path, to_jsonl(trace));
    const auto m = checker::to_json(checker::metrics(trace)).dump(2) + "\n";
    if (!cfg.metrics_path.empty())
        write_file(cfg.metrics_path, m);
    else
        std::cout << m;
    if (cfg.checks.empty()) return 0;
    return report(checker::run_checks(trace, cfg.checks), std::cerr) ? 0 : 1;
}

struct Variations {
    std::vector<std::string> adversaries;
    std::vector<std::string> fast_paths;
    std::vector<std::string> payload_sizes;
};

struct SweepRun {
    ScenarioConfig cfg;
    bool pass = true;
    std::string failures;
    double mean_latency_ms = 0;
    std::uint64_t committed = 0;
};

int cmd_sweep(const ScenarioArgs& args, const Variations& vary, std::uint64_t first, std::uint64_t count,
              unsigned threads, const std::string& out_path) {
    const ScenarioConfig base = args.build();
    const auto checks = base.checks.empty() ? std::vector<std::string>{"all"} : base.checks;
    auto axis = [](const std::vector<std::string>& v) { return v.empty() ? std::vector<std::string>{""} : v; };

    std::vector<SweepRun> runs;
    for (std::uint64_t k = 0; k < count; ++k)
        for (const auto& adv : axis(vary.adversaries))
            for (const auto& fp : axis(vary.fast_paths))
                for (const auto& size : axis(vary.payload_sizes)) {
                    SweepRun r;
                    r.cfg = base;
                    r.cfg.seed = first + k;
                    r.cfg.trace_path.clear();
                    if (!adv.empty()) r.cfg.set("adversary", adv);
                    if (!fp.empty()) r.cfg.set("fast_path", fp);
                    if (!size.empty()) r.cfg.set("payload_size", size);
                    r.cfg.validate();
                    runs.push_back(std::move(r));
                }

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < runs.size(); k = next++) {
                auto& r = runs[k];
                try {
                    const Trace t = netsim::simulate(r.cfg);
                    for (const auto& v : checker::run_checks(t, checks))
                        if (!v.pass) r.failures += fmt::format("{}: {}; ", v.name, v.detail);
                    const auto m = checker::metrics(t);
                    r.mean_latency_ms = m.mean_latency_ms;
                    r.committed = m.committed_blocks;
                } catch (const std::exception& e) {
                    r.failures = std::string("error: ") + e.what();
                }
                r.pass = r.failures.empty();
            }
        });
    }
    for (auto& t : pool) t.join();

    std::size_t passed = 0;
    const SweepRun* first_failure = nullptr;
    nlohmann::json report = nlohmann::json::array();
    for (const auto& r : runs) {
        report.push_back({{"seed", r.cfg.seed},
                          {"adversary", std::string(to_string(r.cfg.adversary))},
                          {"fast_path", r.cfg.fast_path},
                          {"payload_size", r.cfg.payload_size},
                          {"pass", r.pass},
                          {"failures", r.failures},
                          {"mean_latency_ms", r.mean_latency_ms},
                          {"committed_blocks", r.committed}});
        if (r.pass) {
            ++passed;
        } else {
            if (!first_failure) first_failure = &r;
            std::cout << fmt::format("FAIL seed={} adversary={} fast_path={} payload_size={} {}\n", r.cfg.seed,
                                     to_string(r.cfg.adversary), r.cfg.fast_path, r.cfg.payload_size, r.failures);
        }
    }
    if (!out_path.empty())
        write_file(out_path, nlohmann::json{{"config", to_json(base)},
                                            {"runs", report},
                                            {"passed", passed},
                                            {"total", runs.size()}}
                                 .dump(2) +
                                 "\n");
    std::cout << fmt::format("{} of {} runs passed\n", passed, runs.size());
    if (first_failure)
        std::cout << fmt::format("replay: alterbft run --seed {} --adversary {} --fast_path {} --payload_size {}\n",
                                 first_failure->cfg.seed, to_string(first_failure->cfg.adversary),
                                 first_failure->cfg.fast_path, first_failure->cfg.payload_size);
    return first_failure ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AlterBFT simulator"};
    app.require_subcommand(1);

    ScenarioArgs run_args;
    auto* run = app.add_subcommand("run", "simulate one scenario");
    run_args.attach(run);

    ScenarioArgs sweep_args;
    std::uint64_t first_seed = 1, runs = 100;
    unsigned threads = 0;
    auto* sweep = app.add_subcommand("sweep", "run many seeds and check each trace");
    sweep_args.attach(sweep);
    sweep->add_option("--first-seed", first_seed, "first seed");
    sweep->add_option("--runs", runs, "number of seeds");
    sweep->add_option("-j,--threads", threads, "worker threads (0: all cores)");
    Variations vary;
    std::string sweep_out;
    sweep->add_option("--vary-adversary", vary.adversaries, "adversary modes to cross with seeds")->delimiter(',');
    sweep->add_option("--vary-fast-path", vary.fast_paths, "fast path settings to cross with seeds")->delimiter(',');
    sweep->add_option("--vary-payload", vary.payload_sizes, "payload sizes to cross with seeds")->delimiter(',');
    sweep->add_option("-o,--out", sweep_out, "aggregate report (JSON)");

    std::string samples;
    unsigned k = 64;
    std::size_t draws = 100000;
    std::uint64_t bseed = 1;
    auto* bounds = app.add_subcommand("bounds", "derive delta_s and delta_l from delay samples");
    bounds->add_option("samples", samples, "one delay (ms) per line")->required();
    bounds->add_option("-k", k, "draws per synthetic large delay");
    bounds->add_option("--draws", draws, "synthetic large delays");
    bounds->add_option("--seed", bseed, "seed");

    std::string trace_path;
    std::vector<std::string> check_list{"all"};
    bool with_metrics = false;
    auto* check = app.add_subcommand("check", "check a recorded trace");
    check->add_option("trace", trace_path, "trace file (JSON lines)")->required();
    check->add_option("--checks", check_list, "checks to run")->delimiter(',');
    check->add_flag("--metrics", with_metrics, "also print metrics");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(run_args);
        if (*sweep) return cmd_sweep(sweep_args, vary, first_seed, runs, threads, sweep_out);
        if (*bounds) {
            const auto b = latmodel::derive_bounds(latmodel::load_samples(samples), k, draws, bseed);
            std::cout << latmodel::to_json(b).dump(2) << "\n";
            return 0;
        }
        if (*check) {
            const Trace t = read_jsonl_file(trace_path);
            const bool pass = report(checker::run_checks(t, check_list), std::cout);
            if (with_metrics) std::cout << checker::to_json(checker::metrics(t)).dump(2) << "\n";
            return pass ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
