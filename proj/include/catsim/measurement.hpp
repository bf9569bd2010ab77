#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "catsim/noise.hpp"

namespace catsim {

struct MeasurementOutcome {
    std::string label;
    Mat projector;
};

// A projective measurement whose outcomes are tracked as named branches.
// With qubit_confusion set (and Noisy mode), recorded probabilities are mixed
// through the readout confusion matrix and the post-record state becomes the
// matching mixture over true outcomes. The readout window then idles for
// `duration`, under the dispersive Hamiltonian when dispersive_during is set.
struct MeasurementStep {
    std::string label;
    std::vector<MeasurementOutcome> outcomes;
    bool qubit_confusion = false;
    double duration = 0.0;
    bool dispersive_during = true;
};

// Standard qubit readout in the energy basis, outcomes "g" and "e".
MeasurementStep qubit_readout(const std::string& label, const DeviceParams& params,
                              const HilbertConfig& cfg, bool with_confusion);

struct IdleStep {
    double duration = 0.0;
    bool dispersive = true;
    std::string label = "idle";
};

using ProgramStep = std::variant<Operator, MeasurementStep, IdleStep>;

// One measurement record: outcome per measurement step, in program order.
// Branches that die (probability ~ 0) carry an empty state and pad later
// outcomes with "-".
struct Branch {
    std::vector<std::string> outcomes;
    double probability = 0.0;
    Mat state;

    bool alive() const { return state.size() > 0; }
};

using OutcomeCondition = std::vector<std::pair<std::string, std::string>>;

struct BranchLedger {
    std::vector<std::string> measurement_labels;
    std::vector<Branch> branches;

    double total_probability() const;
    const Branch* find(const std::vector<std::string>& outcomes) const;

    // Probability that all (label, outcome) pairs hold.
    double probability_of(const OutcomeCondition& conditions) const;

    // P(target_label = target_outcome | conditions). Throws std::runtime_error
    // when the conditioning event has probability ~ 0.
    double conditional_probability(const std::string& target_label,
                                   const std::string& target_outcome,
                                   const OutcomeCondition& conditions = {}) const;

    // Normalized mixture of branch states satisfying the conditions. Throws
    // std::runtime_error when the event has probability ~ 0.
    Mat conditional_state(const OutcomeCondition& conditions = {}) const;

    std::string to_text() const;

  private:
    int label_index(const std::string& label) const;
};

// Deterministic enumeration of all measurement branches of a program. Branch
// probabilities sum to 1 within 1e-8 (checked). Gate and idle steps follow the
// NoiseContext mode.
BranchLedger run_sequence(const Mat& initial, const std::vector<ProgramStep>& program,
                          const NoiseContext& ctx);

}  // namespace catsim
