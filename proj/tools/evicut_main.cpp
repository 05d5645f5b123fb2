// evicut command line: defend over a dataset, synthetic simulations, solver
// benchmarks, dataset validation. Exit codes: 0 ok, 1 runtime failure,
// 2 usage/validation error.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "evicut/pipeline.hpp"
#include "evicut/remote_provider.hpp"
#include "evicut/sim/attack.hpp"
#include "evicut/sim/dataset.hpp"
#include "evicut/sim/metrics.hpp"
#include "evicut/sim/oracle.hpp"
#include "evicut/sim/scenario.hpp"
#include "evicut/util.hpp"

namespace {

using nlohmann::json;

struct RunConfig {
    int top_k = 10;
    double lambda = evicut::kDefaultLambda;
    std::string attack = "none";
    std::string positions;
    std::string schedule;
    int trials = 100;
    uint64_t seed = 0;
    int jobs = 0;  // 0 = hardware concurrency
    std::string provider = "oracle";
    std::string remote_endpoint = "http://127.0.0.1:8108";
    std::string input;
    std::string output;
    int steps = 1;
    int flip_step = -1;
};

std::vector<int> parse_position_list(const std::string& text) {
    std::vector<int> out;
    std::string tok;
    std::istringstream ss(text);
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("bad position '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

// "1;1,2;;3" -> four steps: [1], [1,2], [], [3]
std::vector<std::vector<int>> parse_schedule(const std::string& text) {
    std::vector<std::vector<int>> out;
    std::string seg;
    std::istringstream ss(text);
    while (std::getline(ss, seg, ';')) out.push_back(parse_position_list(seg));
    if (!text.empty() && text.back() == ';') out.emplace_back();
    return out;
}

evicut::sim::AttackConfig attack_from_config(const RunConfig& cfg) {
    evicut::sim::AttackConfig attack;
    attack.kind = evicut::sim::attack_kind_from_name(cfg.attack);
    attack.positions = parse_position_list(cfg.positions);
    attack.schedule = parse_schedule(cfg.schedule);
    return attack;
}

std::unique_ptr<evicut::ScoringProvider> make_provider(const RunConfig& cfg,
                                                       uint64_t seed) {
    if (cfg.provider == "oracle") {
        evicut::sim::OracleConfig oc;
        oc.seed = seed;
        return std::make_unique<evicut::sim::OracleProvider>(oc);
    }
    if (cfg.provider == "remote") {
        evicut::RemoteProviderConfig rc;
        rc.endpoint = cfg.remote_endpoint;
        return std::make_unique<evicut::RemoteProvider>(rc);
    }
    throw std::invalid_argument("unknown provider: " + cfg.provider);
}

void write_output(const RunConfig& cfg, const json& result) {
    const std::string text = result.dump(2) + "\n";
    if (cfg.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.output, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + cfg.output);
    out << text;
}

void require_input_file(const RunConfig& cfg) {
    if (cfg.input.empty()) throw std::invalid_argument("--input is required");
    if (!std::filesystem::exists(cfg.input)) {
        throw std::invalid_argument("input file not found: " + cfg.input);
    }
}

int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(trial) for every trial across a worker pool; results land in
// per-trial slots so the aggregate never depends on scheduling.
template <typename Fn>
void parallel_trials(int trials, int jobs, Fn&& fn) {
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= trials) return;
            fn(t);
        }
    };
    const int n = std::min(resolve_jobs(jobs), trials);
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

struct TrialStats {
    int steps = 0;
    int correct = 0;
    int hijacked = 0;
    int abstained = 0;
    int attacked = 0;
    int adv_excluded = 0;
    double honest_retained_sum = 0.0;
    int honest_steps = 0;
};

TrialStats score_trial(const evicut::sim::Scenario& sc,
                       const std::vector<evicut::DefenseOutcome>& outcomes,
                       const evicut::sim::AttackConfig& attack) {
    TrialStats st;
    st.steps = static_cast<int>(outcomes.size());
    const auto eval = evicut::sim::evaluate(outcomes, sc.truth, sc.targets,
                                            evicut::sim::MatchMode::claim);
    st.correct = eval.correct;
    st.hijacked = eval.hijacked;
    st.abstained = eval.abstentions;

    for (size_t t = 0; t < outcomes.size(); ++t) {
        const auto& positions =
            attack.kind == evicut::sim::AttackKind::none
                ? std::vector<int>{}
                : evicut::sim::positions_for_step(attack, static_cast<int>(t));
        const auto& reliable = outcomes[t].reliable_indices;
        const int k = static_cast<int>(sc.stream[t].docs.size());

        if (!positions.empty()) {
            st.attacked += 1;
            bool excluded = true;
            for (int pos : positions) {
                if (std::find(reliable.begin(), reliable.end(), pos - 1) != reliable.end()) {
                    excluded = false;
                    break;
                }
            }
            if (excluded) st.adv_excluded += 1;
        }

        const int honest_total = k - static_cast<int>(positions.size());
        if (honest_total > 0) {
            int honest_kept = 0;
            for (int idx : reliable) {
                if (std::find(positions.begin(), positions.end(), idx + 1) == positions.end()) {
                    honest_kept += 1;
                }
            }
            st.honest_retained_sum += static_cast<double>(honest_kept) / honest_total;
            st.honest_steps += 1;
        }
    }
    return st;
}

int cmd_simulate(const RunConfig& cfg) {
    if (cfg.provider != "oracle") {
        throw std::invalid_argument("simulate supports --provider oracle only");
    }
    const auto attack = attack_from_config(cfg);

    std::vector<TrialStats> stats(cfg.trials);
    parallel_trials(cfg.trials, cfg.jobs, [&](int trial) {
        const uint64_t trial_seed = evicut::hash_combine(cfg.seed, static_cast<uint64_t>(trial));

        evicut::sim::ScenarioConfig sc;
        sc.steps = cfg.steps;
        sc.top_k = cfg.top_k;
        sc.truth_claim = static_cast<int>(evicut::mix64(trial_seed) % 100000);
        sc.flip_step = cfg.flip_step;
        sc.attack = attack;
        sc.seed = trial_seed;
        const auto scenario = evicut::sim::build_stream(sc);

        evicut::sim::OracleConfig oc;
        oc.seed = trial_seed;
        evicut::sim::OracleProvider provider(oc);
        evicut::sim::OracleGenerator generator;
        const auto outcomes =
            evicut::run_stream(scenario.stream, provider, generator, cfg.lambda);
        stats[trial] = score_trial(scenario, outcomes, attack);
    });

    TrialStats total;
    for (const auto& st : stats) {
        total.steps += st.steps;
        total.correct += st.correct;
        total.hijacked += st.hijacked;
        total.abstained += st.abstained;
        total.attacked += st.attacked;
        total.adv_excluded += st.adv_excluded;
        total.honest_retained_sum += st.honest_retained_sum;
        total.honest_steps += st.honest_steps;
    }

    json result;
    result["command"] = "simulate";
    result["config"] = {{"top_k", cfg.top_k},       {"lambda", cfg.lambda},
                        {"attack", cfg.attack},     {"positions", cfg.positions},
                        {"schedule", cfg.schedule}, {"trials", cfg.trials},
                        {"seed", cfg.seed},         {"steps", cfg.steps},
                        {"flip_step", cfg.flip_step}};
    result["results"] = {
        {"steps", total.steps},
        {"accuracy", total.steps ? static_cast<double>(total.correct) / total.steps : 0.0},
        {"asr", total.steps ? static_cast<double>(total.hijacked) / total.steps : 0.0},
        {"abstention_rate",
         total.steps ? static_cast<double>(total.abstained) / total.steps : 0.0},
        {"attacked_steps", total.attacked},
        {"adv_excluded_rate",
         total.attacked ? static_cast<double>(total.adv_excluded) / total.attacked : 0.0},
        {"honest_retained",
         total.honest_steps ? total.honest_retained_sum / total.honest_steps : 0.0}};
    write_output(cfg, result);
    return 0;
}

int cmd_defend(const RunConfig& cfg) {
    require_input_file(cfg);
    const auto records = evicut::sim::load_dataset(cfg.input);
    const auto attack = attack_from_config(cfg);
    auto provider = make_provider(cfg, cfg.seed);
    evicut::sim::OracleGenerator generator;

    json record_results = json::array();
    int total_steps = 0, total_correct = 0, total_hijacked = 0, total_abstained = 0;
    for (const auto& rec : records) {
        const auto ds = evicut::sim::record_stream(rec, attack);
        const auto outcomes = evicut::run_stream(ds.stream, *provider, generator, cfg.lambda);
        const auto eval = evicut::sim::evaluate(outcomes, ds.truth, ds.targets,
                                                evicut::sim::MatchMode::text);

        json steps = json::array();
        for (size_t t = 0; t < outcomes.size(); ++t) {
            json rec_line = json::parse(evicut::outcome_record(outcomes[t]));
            rec_line["year"] = ds.years[t];
            steps.push_back(std::move(rec_line));
        }
        record_results.push_back({{"question", rec.question},
                                  {"steps", std::move(steps)},
                                  {"accuracy", eval.accuracy},
                                  {"asr", eval.asr},
                                  {"abstentions", eval.abstentions}});
        total_steps += eval.steps;
        total_correct += eval.correct;
        total_hijacked += eval.hijacked;
        total_abstained += eval.abstentions;
    }

    json result;
    result["command"] = "defend";
    result["config"] = {{"input", cfg.input},   {"lambda", cfg.lambda},
                        {"attack", cfg.attack}, {"positions", cfg.positions},
                        {"schedule", cfg.schedule}, {"provider", cfg.provider},
                        {"seed", cfg.seed}};
    result["records"] = std::move(record_results);
    result["aggregate"] = {
        {"records", records.size()},
        {"steps", total_steps},
        {"accuracy", total_steps ? static_cast<double>(total_correct) / total_steps : 0.0},
        {"asr", total_steps ? static_cast<double>(total_hijacked) / total_steps : 0.0},
        {"abstention_rate",
         total_steps ? static_cast<double>(total_abstained) / total_steps : 0.0}};
    write_output(cfg, result);
    return 0;
}

int cmd_bench(const RunConfig& cfg) {
    std::vector<double> ms(cfg.trials);
    for (int trial = 0; trial < cfg.trials; ++trial) {
        std::mt19937_64 rng(evicut::hash_combine(cfg.seed, static_cast<uint64_t>(trial)));
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        const int k = cfg.top_k;
        evicut::CentralityVector v;
        v.v.resize(k);
        for (int i = 0; i < k; ++i) v.v(i) = unit(rng);
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
        Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                m(i, j) = m(j, i) = unit(rng);
                c(i, j) = c(j, i) = unit(rng);
            }
        }
        std::vector<int> ranks(k);
        for (int i = 0; i < k; ++i) ranks[i] = i + 1;

        const auto t0 = std::chrono::steady_clock::now();
        const auto caps = evicut::terminal_capacities(v, c, ranks, k);
        const auto net = evicut::build_static_graph(caps, m);
        const auto lab = evicut::solve_mincut(net);
        const auto t1 = std::chrono::steady_clock::now();
        if (lab.y.size() != static_cast<size_t>(k)) throw std::logic_error("bench: bad labeling");
        ms[trial] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }

    std::vector<double> sorted = ms;
    std::sort(sorted.begin(), sorted.end());
    auto pct = [&](double q) {
        const size_t idx = std::min(sorted.size() - 1,
                                    static_cast<size_t>(q * (sorted.size() - 1) + 0.5));
        return sorted[idx];
    };

    json result;
    result["command"] = "bench";
    result["config"] = {{"top_k", cfg.top_k}, {"trials", cfg.trials}, {"seed", cfg.seed}};
    result["latency_ms"] = {{"median", pct(0.5)},
                            {"p90", pct(0.9)},
                            {"p99", pct(0.99)},
                            {"max", sorted.back()},
                            {"min", sorted.front()}};
    write_output(cfg, result);
    std::cerr << "median " << pct(0.5) << " ms over " << cfg.trials
              << " solves at k=" << cfg.top_k << "\n";
    return 0;
}

int cmd_validate_dataset(const RunConfig& cfg) {
    require_input_file(cfg);
    const auto records = evicut::sim::load_dataset(cfg.input);
    size_t steps = 0;
    for (const auto& r : records) steps += r.yearly.size();

    json result;
    result["command"] = "validate-dataset";
    result["input"] = cfg.input;
    result["records"] = records.size();
    result["steps"] = steps;
    result["valid"] = true;
    write_output(cfg, result);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    std::string command;

    CLI::App app{"reliable-evidence selection via exact energy minimization"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--lambda", cfg.lambda, "isolation filter threshold in [-1,1]")
            ->check(CLI::Range(-1.0, 1.0));
        sub->add_option("--seed", cfg.seed, "RNG seed");
        sub->add_option("--output", cfg.output, "results file (default stdout)");
    };
    auto add_attack = [&](CLI::App* sub) {
        sub->add_option("--attack", cfg.attack, "attack kind")
            ->check(CLI::IsMember({"none", "pia", "poison"}));
        sub->add_option("--positions", cfg.positions, "1-based ranks to corrupt, e.g. 1,2");
        sub->add_option("--schedule", cfg.schedule,
                        "per-step positions, ';'-separated, e.g. '1;;1,2'");
    };

    CLI::App* defend = app.add_subcommand("defend", "run the defense over a dataset");
    defend->add_option("--input", cfg.input, "dataset JSON")->required();
    defend->add_option("--provider", cfg.provider, "scoring provider")
        ->check(CLI::IsMember({"oracle", "remote"}));
    defend->add_option("--remote-endpoint", cfg.remote_endpoint, "scoring service URL");
    add_attack(defend);
    add_common(defend);

    CLI::App* simulate = app.add_subcommand("simulate", "synthetic robustness trials");
    simulate->add_option("--top-k,-k", cfg.top_k, "retrieved documents per step")
        ->check(CLI::Range(1, 1000));
    simulate->add_option("--trials", cfg.trials, "number of trials")->check(CLI::Range(1, 1000000));
    simulate->add_option("--steps", cfg.steps, "stream length per trial")->check(CLI::Range(1, 1000));
    simulate->add_option("--flip-step", cfg.flip_step, "step where the truth changes (-1 stable)");
    simulate->add_option("--jobs", cfg.jobs, "worker threads (0 = all cores)");
    simulate->add_option("--provider", cfg.provider, "scoring provider")
        ->check(CLI::IsMember({"oracle", "remote"}));
    add_attack(simulate);
    add_common(simulate);

    CLI::App* bench = app.add_subcommand("bench", "min-cut latency benchmark");
    bench->add_option("--top-k,--k,-k", cfg.top_k, "documents per instance")
        ->check(CLI::Range(1, 10000));
    bench->add_option("--trials", cfg.trials, "solve count")->check(CLI::Range(1, 1000000));
    add_common(bench);

    CLI::App* validate = app.add_subcommand("validate-dataset", "schema-check a dataset file");
    validate->add_option("--input", cfg.input, "dataset JSON")->required();
    add_common(validate);

    defend->callback([&] { command = "defend"; });
    simulate->callback([&] { command = "simulate"; });
    bench->callback([&] { command = "bench"; });
    validate->callback([&] { command = "validate-dataset"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (command == "defend") return cmd_defend(cfg);
        if (command == "simulate") return cmd_simulate(cfg);
        if (command == "bench") return cmd_bench(cfg);
        if (command == "validate-dataset") return cmd_validate_dataset(cfg);
        std::cerr << "no command\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
