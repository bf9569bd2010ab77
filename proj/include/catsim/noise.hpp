#pragma once

#include <vector>

#include "catsim/operators.hpp"

namespace catsim {

enum class EvolutionMode { Ideal, Noisy };

struct NoiseChannel {
    Mat op;       // collapse operator in the joint space
    double rate;  // rad/s
    std::string label;
};

// Qubit relaxation at 1/T1, qubit pure dephasing (sigma_z at rate 1/(2 Tphi),
// giving coherence decay exp(-t/T2*) with 1/T2* = 1/(2 T1) + 1/Tphi) and cavity
// photon loss at 1/cavity_t1. Thermal occupations are modeled through initial
// states, not channels.
std::vector<NoiseChannel> standard_channels(const DeviceParams& params,
                                            const HilbertConfig& cfg);

// Master-equation propagation over `duration` with fixed step dt. The
// Hamiltonian commutator is applied exactly when H is diagonal (the only case
// the model produces), wrapped around a fixed-step RK4 treatment of the
// dissipator; non-diagonal H falls back to RK4 on the full generator. Throws a
// step-size error when the trace drifts by more than 1e-6.
Mat lindblad_evolve(const Mat& rho, const Mat& hamiltonian,
                    const std::vector<NoiseChannel>& channels, double duration,
                    double dt = 1e-9);

// Bundles what gate and idle application needs so protocol code does not
// rebuild channel sets per step.
struct NoiseContext {
    DeviceParams params;
    HilbertConfig cfg;
    EvolutionMode mode = EvolutionMode::Ideal;
    double dt = 1e-9;
    Mat h_dispersive;
    std::vector<NoiseChannel> channels;

    static NoiseContext make(const DeviceParams& params, const HilbertConfig& cfg,
                             EvolutionMode mode, double dt = 1e-9);
};

// Ideal: unitary conjugation. Noisy: unitary conjugation followed by channel
// evolution under H = 0 for the gate's nominal duration, except the conditional
// pi phase gate, which evolves under the dispersive Hamiltonian with channels
// active for exactly its duration. A zero-duration conditional phase gate falls
// back to the instantaneous unitary.
Mat apply_gate_noisy(const Mat& rho, const Operator& gate, const NoiseContext& ctx);

// Decoherence over a wait segment. No-op in Ideal mode. `dispersive` selects
// evolution under the dispersive Hamiltonian instead of H = 0.
Mat idle_evolve(const Mat& rho, double duration, bool dispersive,
                const NoiseContext& ctx);

// Maps true-outcome probabilities {P(g), P(e)} to recorded probabilities.
Eigen::Vector2d apply_readout_confusion(const Eigen::Vector2d& probs,
                                        const Eigen::Matrix2d& confusion);

// Initial-state builders for explicit thermal preparation.
Mat thermal_cavity_density(double n_thermal, const HilbertConfig& cfg);
Mat thermal_qubit_density(double p_excited);

}  // namespace catsim
