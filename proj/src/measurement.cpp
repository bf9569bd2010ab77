#include "catsim/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace catsim {

namespace {

constexpr double kDeadBranch = 1e-14;

struct WorkItem {
    Mat rho;  // normalized; empty once the branch is dead
    double probability = 1.0;
    std::vector<std::string> outcomes;
};

void apply_measurement(std::vector<WorkItem>& frontier, const MeasurementStep& step,
                       const NoiseContext& ctx) {
    if (step.outcomes.empty())
        throw std::invalid_argument("measurement step has no outcomes");
    const bool confuse = step.qubit_confusion && ctx.mode == EvolutionMode::Noisy;
    if (confuse && step.outcomes.size() != 2)
        throw std::invalid_argument(
            "readout confusion requires exactly two outcomes ordered {g, e}");

    std::vector<WorkItem> next;
    next.reserve(frontier.size() * step.outcomes.size());
    for (auto& item : frontier) {
        if (item.rho.size() == 0) {
            item.outcomes.push_back("-");
            next.push_back(std::move(item));
            continue;
        }

        const int k = int(step.outcomes.size());
        std::vector<Mat> projected(k);
        std::vector<double> true_prob(k);
        double total = 0.0;
        for (int t = 0; t < k; ++t) {
            const Mat& proj = step.outcomes[t].projector;
            if (proj.rows() != item.rho.rows() || proj.cols() != item.rho.cols())
                throw std::invalid_argument("projector dimension mismatch in step " +
                                            step.label);
            projected[t] = proj * item.rho * proj.adjoint();
            true_prob[t] = std::max(0.0, projected[t].trace().real());
            total += true_prob[t];
        }
        if (std::abs(total - 1.0) > 1e-8)
            throw std::invalid_argument("projectors of step " + step.label +
                                        " do not resolve the identity (total " +
                                        std::to_string(total) + ")");

        for (int r = 0; r < k; ++r) {
            WorkItem child;
            child.outcomes = item.outcomes;
            child.outcomes.push_back(step.outcomes[r].label);

            double p;
            Mat post;
            if (confuse) {
                p = 0.0;
                post = Mat::Zero(item.rho.rows(), item.rho.cols());
                for (int t = 0; t < k; ++t) {
                    double c = ctx.params.readout_confusion(r, t);
                    p += c * true_prob[t];
                    post += c * projected[t];
                }
            } else {
                p = true_prob[r];
                post = projected[r];
            }

            child.probability = item.probability * p;
            if (p > kDeadBranch) {
                child.rho = post / p;
                child.rho = idle_evolve(child.rho, step.duration, step.dispersive_during,
                                        ctx);
            }
            next.push_back(std::move(child));
        }
    }
    frontier = std::move(next);
}

}  // namespace

MeasurementStep qubit_readout(const std::string& label, const DeviceParams& params,
                              const HilbertConfig& cfg, bool with_confusion) {
    Mat pg = Mat::Zero(2, 2);
    pg(0, 0) = 1.0;
    Mat pe = Mat::Zero(2, 2);
    pe(1, 1) = 1.0;
    return {label,
            {{"g", lift_qubit(pg, cfg)}, {"e", lift_qubit(pe, cfg)}},
            with_confusion,
            params.durations.readout,
            true};
}

BranchLedger run_sequence(const Mat& initial, const std::vector<ProgramStep>& program,
                          const NoiseContext& ctx) {
    validate_density(initial, 1e-8, 1e-8);

    BranchLedger ledger;
    std::vector<WorkItem> frontier;
    frontier.push_back({initial, 1.0, {}});

    for (const auto& step : program) {
        if (std::holds_alternative<Operator>(step)) {
            const auto& gate = std::get<Operator>(step);
            for (auto& item : frontier)
                if (item.rho.size() > 0) item.rho = apply_gate_noisy(item.rho, gate, ctx);
        } else if (std::holds_alternative<IdleStep>(step)) {
            const auto& idle = std::get<IdleStep>(step);
            if (idle.duration < 0)
                throw std::invalid_argument("idle duration must be non-negative");
            for (auto& item : frontier)
                if (item.rho.size() > 0)
                    item.rho = idle_evolve(item.rho, idle.duration, idle.dispersive, ctx);
        } else {
            const auto& meas = std::get<MeasurementStep>(step);
            ledger.measurement_labels.push_back(meas.label);
            apply_measurement(frontier, meas, ctx);
        }
    }

    double total = 0.0;
    for (auto& item : frontier) {
        total += item.probability;
        ledger.branches.push_back(
            {std::move(item.outcomes), item.probability, std::move(item.rho)});
    }
    if (std::abs(total - 1.0) > 1e-8)
        throw std::runtime_error("branch probabilities sum to " + std::to_string(total) +
                                 ", expected 1");
    return ledger;
}

double BranchLedger::total_probability() const {
    double total = 0.0;
    for (const auto& b : branches) total += b.probability;
    return total;
}

const Branch* BranchLedger::find(const std::vector<std::string>& outcomes) const {
    for (const auto& b : branches)
        if (b.outcomes == outcomes) return &b;
    return nullptr;
}

int BranchLedger::label_index(const std::string& label) const {
    auto it = std::find(measurement_labels.begin(), measurement_labels.end(), label);
    if (it == measurement_labels.end())
        throw std::invalid_argument("unknown measurement label " + label);
    return int(it - measurement_labels.begin());
}

double BranchLedger::probability_of(const OutcomeCondition& conditions) const {
    std::vector<std::pair<int, std::string>> indexed;
    indexed.reserve(conditions.size());
    for (const auto& [label, outcome] : conditions)
        indexed.emplace_back(label_index(label), outcome);

    double total = 0.0;
    for (const auto& b : branches) {
        bool match = true;
        for (const auto& [idx, outcome] : indexed)
            if (b.outcomes[idx] != outcome) {
                match = false;
                break;
            }
        if (match) total += b.probability;
    }
    return total;
}

double BranchLedger::conditional_probability(const std::string& target_label,
                                             const std::string& target_outcome,
                                             const OutcomeCondition& conditions) const {
    double denom = probability_of(conditions);
    if (denom < kDeadBranch)
        throw std::runtime_error("conditioning on an event of probability ~ 0");
    OutcomeCondition joint = conditions;
    joint.emplace_back(target_label, target_outcome);
    return probability_of(joint) / denom;
}

Mat BranchLedger::conditional_state(const OutcomeCondition& conditions) const {
    std::vector<std::pair<int, std::string>> indexed;
    indexed.reserve(conditions.size());
    for (const auto& [label, outcome] : conditions)
        indexed.emplace_back(label_index(label), outcome);

    Mat sum;
    double total = 0.0;
    for (const auto& b : branches) {
        bool match = true;
        for (const auto& [idx, outcome] : indexed)
            if (b.outcomes[idx] != outcome) {
                match = false;
                break;
            }
        if (!match || !b.alive()) continue;
        if (sum.size() == 0) sum = Mat::Zero(b.state.rows(), b.state.cols());
        sum += b.probability * b.state;
        total += b.probability;
    }
    if (total < kDeadBranch)
        throw std::runtime_error("conditioning on an event of probability ~ 0");
    return sum / total;
}

std::string BranchLedger::to_text() const {
    std::ostringstream out;
    out << std::setprecision(12);
    for (const auto& b : branches) {
        for (size_t i = 0; i < b.outcomes.size(); ++i) {
            if (i) out << ' ';
            out << measurement_labels[i] << '=' << b.outcomes[i];
        }
        out << " : p=" << b.probability << '\n';
    }
    return out.str();
}

}  // namespace catsim
