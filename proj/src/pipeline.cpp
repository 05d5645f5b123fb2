#include "evicut/pipeline.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "evicut/util.hpp"

namespace evicut {

namespace {

// Shared front half of both defense paths, up to the static network.
struct Stages {
    bool ok = false;                  // false: nothing informative to work with
    std::vector<AtomicAnswer> answers;
    std::vector<int> informative;     // document positions, ascending
    RelationMatrices rel;
    CentralityVector cen;
    TerminalCapacities caps;
    FlowNetwork net;
};

Stages build_stages(const EvidenceSnapshot& snapshot, ScoringProvider& provider) {
    Stages st;
    st.answers.reserve(snapshot.docs.size());
    for (size_t i = 0; i < snapshot.docs.size(); ++i) {
        AtomicAnswer a = provider.generate_atomic(snapshot.query, snapshot.docs[i]);
        a.doc_index = static_cast<int>(i);
        st.answers.push_back(std::move(a));
    }
    st.informative = informative_indices(st.answers);
    if (st.informative.empty()) return st;

    st.rel = build_matrices(st.answers, provider);
    st.cen = eigencentrality(st.rel.m, CentralityConfig{});

    std::vector<int> ranks;
    ranks.reserve(st.informative.size());
    for (int pos : st.informative) ranks.push_back(pos + 1);
    st.caps = terminal_capacities(st.cen, st.rel.c, ranks,
                                  static_cast<int>(snapshot.docs.size()));
    st.net = build_static_graph(st.caps, st.rel.m);
    st.ok = true;
    return st;
}

int best_fallback(const Stages& st) {
    int best = -1;
    double best_margin = 0.0;
    for (Eigen::Index i = 0; i < st.caps.s_cap.size(); ++i) {
        const double margin = st.caps.s_cap(i) - st.caps.f_cap(i);
        if (best < 0 || margin > best_margin) {
            best = st.informative[static_cast<size_t>(i)];
            best_margin = margin;
        }
    }
    return best;
}

DefenseOutcome abstain_outcome(int step, const BeliefState& prev, Diagnostics diag) {
    DefenseOutcome o;
    o.step = step;
    o.answer = kAbstainMarker;
    o.abstained = true;
    o.belief = prev;
    o.belief.step = prev.step + 1;
    o.diagnostics = std::move(diag);
    return o;
}

std::vector<std::string> informative_texts(const Stages& st) {
    std::vector<std::string> out;
    out.reserve(st.informative.size());
    for (int pos : st.informative) out.push_back(st.answers[pos].text);
    return out;
}

// Energy of an augmented labeling: document terms plus the memory node's
// terminal and link contributions.
EnergyValue augmented_energy(const std::vector<int>& y, bool memory_kept,
                             const Stages& st, const MemoryAugmentation& aug) {
    EnergyValue e = energy_of(y, st.caps, st.rel.m);
    if (memory_kept) {
        e.unary_sink += aug.f_old;
    } else {
        e.unary_source += aug.s_old;
    }
    const int mem_label = memory_kept ? 1 : 0;
    for (size_t i = 0; i < y.size(); ++i) {
        if (y[i] != mem_label) e.pairwise += aug.links[i];
    }
    e.total = e.unary_source + e.unary_sink + e.pairwise;
    return e;
}

}  // namespace

std::string synthesis_prompt(const std::string& query,
                             const std::vector<ReliableItem>& items) {
    std::string p;
    p += "You are given a question and a list of vetted statements.\n";
    p += "Answer the question from those statements alone. Do not bring in\n";
    p += "outside knowledge, do not correct the statements, and do not argue\n";
    p += "with them. When they differ, give the conclusion most of them share.\n";
    p += "\nQuestion: " + query + "\n\nStatements:\n";
    for (size_t i = 0; i < items.size(); ++i) {
        p += "  " + std::to_string(i + 1) + ". " + items[i].text + "\n";
    }
    p += "\nAnswer:";
    return p;
}

DefenseOutcome defend_static(const EvidenceSnapshot& snapshot,
                             ScoringProvider& provider,
                             Generator& generator,
                             double lambda,
                             const BeliefState& prev_belief) {
    Diagnostics diag;
    if (snapshot.docs.empty()) {
        return abstain_outcome(snapshot.step, prev_belief, std::move(diag));
    }

    const Stages st = build_stages(snapshot, provider);
    if (!st.ok) {
        return abstain_outcome(snapshot.step, prev_belief, std::move(diag));
    }

    const Labeling lab = solve_mincut(st.net);
    diag.cut_value = lab.cut_value;
    diag.energy = energy_of(lab.y, st.caps, st.rel.m);
    diag.fallback_doc = best_fallback(st);

    std::vector<int> selected;  // document positions
    for (size_t i = 0; i < lab.y.size(); ++i) {
        if (lab.y[i] == 1) selected.push_back(st.informative[i]);
    }
    if (selected.empty()) {
        return abstain_outcome(snapshot.step, prev_belief, std::move(diag));
    }

    std::vector<std::string> filter_items;
    filter_items.reserve(selected.size());
    for (int pos : selected) filter_items.push_back(st.answers[pos].text);
    diag.filter = filter_isolated(filter_items, provider, lambda);
    if (diag.filter.kept.empty()) {
        return abstain_outcome(snapshot.step, prev_belief, std::move(diag));
    }

    std::vector<int> inf_slot(snapshot.docs.size(), -1);
    for (size_t i = 0; i < st.informative.size(); ++i) inf_slot[st.informative[i]] = static_cast<int>(i);

    DefenseOutcome o;
    o.step = snapshot.step;
    std::vector<ReliableItem> synth;
    for (int item : diag.filter.kept) {
        const int pos = selected[item];
        o.reliable_indices.push_back(pos);
        synth.push_back({snapshot.docs[pos], st.cen.v(inf_slot[pos])});
    }
    o.answer = generator.synthesize(snapshot.query, synth);
    o.belief = update_priors(o.answer, informative_texts(st), provider, prev_belief);
    o.diagnostics = std::move(diag);
    return o;
}

DefenseOutcome defend_dynamic(const EvidenceSnapshot& snapshot,
                              const std::string& prev_answer,
                              const BeliefState& belief,
                              ScoringProvider& provider,
                              Generator& generator,
                              double lambda) {
    if (snapshot.step <= 0) {
        throw std::invalid_argument("defend_dynamic: step must be > 0 (use defend_static at step 0)");
    }
    if (prev_answer.empty()) {
        throw std::invalid_argument("defend_dynamic: previous answer required");
    }

    Diagnostics diag;
    auto degraded_outcome = [&]() {
        DefenseOutcome o;
        o.step = snapshot.step;
        o.answer = prev_answer;
        o.belief = belief;
        o.diagnostics.degraded = true;
        return o;
    };

    if (snapshot.docs.empty()) return degraded_outcome();
    const Stages st = build_stages(snapshot, provider);
    if (!st.ok) return degraded_outcome();

    const std::vector<std::string> evidence = informative_texts(st);
    const MemoryAugmentation aug =
        build_memory_augmentation(prev_answer, belief, evidence, provider);
    const FlowNetwork net = augment_graph(st.net, aug);
    const Labeling lab = solve_mincut(net);

    diag.cut_value = lab.cut_value;
    diag.energy = augmented_energy(lab.y, lab.memory_kept, st, aug);
    diag.fallback_doc = best_fallback(st);

    std::vector<int> selected;
    for (size_t i = 0; i < lab.y.size(); ++i) {
        if (lab.y[i] == 1) selected.push_back(st.informative[i]);
    }

    std::vector<std::string> filter_items;
    for (int pos : selected) filter_items.push_back(st.answers[pos].text);
    if (lab.memory_kept) filter_items.push_back(prev_answer);  // memory answer rides last

    if (filter_items.empty()) {
        return abstain_outcome(snapshot.step, belief, std::move(diag));
    }
    diag.filter = filter_isolated(filter_items, provider, lambda);
    if (diag.filter.kept.empty()) {
        return abstain_outcome(snapshot.step, belief, std::move(diag));
    }

    std::vector<int> inf_slot(snapshot.docs.size(), -1);
    for (size_t i = 0; i < st.informative.size(); ++i) inf_slot[st.informative[i]] = static_cast<int>(i);

    DefenseOutcome o;
    o.step = snapshot.step;
    o.memory_used = true;
    o.memory_kept = lab.memory_kept;
    std::vector<ReliableItem> synth;
    for (int item : diag.filter.kept) {
        if (item < static_cast<int>(selected.size())) {
            const int pos = selected[item];
            o.reliable_indices.push_back(pos);
            synth.push_back({st.answers[pos].text, st.cen.v(inf_slot[pos])});
        } else {
            synth.push_back({prev_answer, aug.s_old});
        }
    }
    o.answer = generator.synthesize(snapshot.query, synth);
    o.belief = update_priors(o.answer, evidence, provider, belief);
    o.diagnostics = std::move(diag);
    return o;
}

std::vector<DefenseOutcome> run_stream(const std::vector<EvidenceSnapshot>& stream,
                                       ScoringProvider& provider,
                                       Generator& generator,
                                       double lambda) {
    std::vector<DefenseOutcome> out;
    if (stream.empty()) return out;
    if (stream.front().step != 0) {
        throw std::invalid_argument("run_stream: stream must start at step 0");
    }
    for (size_t i = 1; i < stream.size(); ++i) {
        if (stream[i].step <= stream[i - 1].step) {
            throw std::invalid_argument("run_stream: steps must increase");
        }
    }

    BeliefState belief;
    std::string prev_answer;
    for (const auto& snap : stream) {
        DefenseOutcome o = prev_answer.empty()
            ? defend_static(snap, provider, generator, lambda, belief)
            : defend_dynamic(snap, prev_answer, belief, provider, generator, lambda);
        belief = o.belief;
        prev_answer = o.abstained ? std::string{} : o.answer;
        out.push_back(std::move(o));
    }
    return out;
}

std::string serialize_state(const InterStepState& state) {
    nlohmann::json j;
    j["answer_b64"] = base64_encode(state.answer);
    j["pi_s"] = state.belief.pi_s;
    j["pi_f"] = state.belief.pi_f;
    j["step"] = state.belief.step;
    return j.dump();
}

InterStepState deserialize_state(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object() || !j.contains("answer_b64") || !j.contains("pi_s") ||
        !j.contains("pi_f") || !j.contains("step")) {
        throw std::invalid_argument("deserialize_state: missing field");
    }
    InterStepState state;
    state.answer = base64_decode(j.at("answer_b64").get<std::string>());
    state.belief.pi_s = j.at("pi_s").get<double>();
    state.belief.pi_f = j.at("pi_f").get<double>();
    state.belief.step = j.at("step").get<int>();
    require_unit(state.belief.pi_s, "pi_s");
    require_unit(state.belief.pi_f, "pi_f");
    if (state.belief.step < 0) throw std::invalid_argument("deserialize_state: negative step");
    return state;
}

std::string outcome_record(const DefenseOutcome& o) {
    nlohmann::json j;
    j["step"] = o.step;
    j["answer"] = o.answer;
    j["abstained"] = o.abstained;
    j["reliable"] = o.reliable_indices;
    j["memory_used"] = o.memory_used;
    j["memory_kept"] = o.memory_kept;
    j["cut_value"] = o.diagnostics.cut_value;
    j["degraded"] = o.diagnostics.degraded;
    j["belief"] = {{"pi_s", o.belief.pi_s}, {"pi_f", o.belief.pi_f}, {"step", o.belief.step}};
    return j.dump();
}

}  // namespace evicut
