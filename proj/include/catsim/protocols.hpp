#pragma once

#include <string>
#include <vector>

#include "catsim/measurement.hpp"

namespace catsim {

// phi values from 0 to 2*pi inclusive.
std::vector<double> default_phi_grid(int points = 41);

struct ProtocolParams {
    double theta = 0.25 * std::numbers::pi;  // weight angle of the detector superposition
    cplx alpha = {2.0 * std::numbers::sqrt2, 0.0};
    std::vector<double> phi_grid = default_phi_grid();
    EvolutionMode mode = EvolutionMode::Ideal;

    // Noisy-mode switches. include_confusion mixes readout records through the
    // confusion matrix. thermal_init starts from thermal qubit/cavity states and
    // purifies them with the two initialization measurements instead of assuming
    // perfect preparation.
    bool include_confusion = true;
    bool thermal_init = false;

    double displacement_tail_tol = 1e-8;

    HilbertConfig hilbert{};
    DeviceParams device{};
    double dt = 1e-9;

    NoiseContext context() const;
    void validate() const;
};

struct CurveData {
    std::vector<double> phi;
    std::vector<double> value;
    std::string label;

    double mean() const;
};

// Two-term approximation [cos^2(theta)(1 - cos phi) + sin^2(theta)] / 2,
// valid when the vacuum/coherent overlap e^{-|alpha|^2/2} is negligible.
double analytic_pg_approx(double theta, double phi);

// Exact closed form for the Ramsey ground-state probability with the
// normalized cat input, including all coherent-state overlap terms. Used as
// the independent oracle for the matrix pipeline.
double analytic_pg_exact(double theta, cplx alpha, double phi);

// Fringe contrast of the exact Ramsey law: P_g = (1 - cos(phi) C)/2.
double analytic_fringe_amplitude(double theta, cplx alpha);

// Measurement record labels used by the protocol programs.
inline constexpr char kPrepReadout[] = "prep";
inline constexpr char kRamseyReadout[] = "ramsey";
inline constexpr char kSelectReadout[] = "select";
inline constexpr char kParityReadout[] = "parity";
inline constexpr char kPathReadout[] = "path";
inline constexpr char kInitQubitReadout[] = "init_qubit";
inline constexpr char kInitParityReadout[] = "init_parity";

struct PreparedCat {
    Mat state;  // joint density with the qubit post-selected in |g>
    double success_probability = 0.0;
};

// Displace half way, split the qubit, entangle with the conditional pi phase,
// recombine, post-select |g>, displace again. Leaves the cavity in the
// normalized cos(theta)|0> + sin(theta)|alpha> with the qubit in |g>.
PreparedCat prepare_cat(const ProtocolParams& p, const NoiseContext& ctx);

// Expected cavity state of a perfect preparation, in the truncated space.
Vec ideal_cat_state(double theta, cplx alpha, const HilbertConfig& cfg);

// Program fragments; a full experiment is prepare_cat followed by a
// concatenation of these, executed by run_sequence.
std::vector<ProgramStep> ramsey_steps(double phi, const ProtocolParams& p);
std::vector<ProgramStep> select_steps(const ProtocolParams& p);
std::vector<ProgramStep> parity_steps(const ProtocolParams& p);
std::vector<ProgramStep> which_path_steps(const ProtocolParams& p);

BranchLedger ramsey_ledger(const Mat& prepared, double phi, const ProtocolParams& p,
                           const NoiseContext& ctx);
BranchLedger delayed_choice_ledger(const Mat& prepared, double phi, const ProtocolParams& p,
                                   const NoiseContext& ctx);
BranchLedger eraser_ledger(const Mat& prepared, double phi, const ProtocolParams& p,
                           const NoiseContext& ctx, bool after_on_selection);
BranchLedger which_path_ledger(const Mat& prepared, double phi, const ProtocolParams& p,
                               const NoiseContext& ctx);

struct RamseyResult {
    CurveData pg;
    double prep_success = 0.0;
};
RamseyResult ramsey_curve(const ProtocolParams& p);

struct DelayedChoiceResult {
    CurveData pg_off;  // qubit g conditioned on the detector found empty
    CurveData pg_on;   // qubit g conditioned on the detector found filled
    double prep_success = 0.0;
};
DelayedChoiceResult delayed_choice_curves(const ProtocolParams& p);

struct EraserResult {
    CurveData pg_even;
    CurveData pg_odd;
    bool after_on_selection = false;
    double prep_success = 0.0;
};
EraserResult eraser_curves(const ProtocolParams& p, bool after_on_selection);

struct WhichPathResult {
    CurveData pg_minus;  // qubit g conditioned on detecting the sign-flipped field
    CurveData pg_plus;   // qubit g conditioned on detecting the unflipped field
    CurveData p_ggg;     // raw probability of the all-g record triple
    CurveData p_eee;     // raw probability of the all-e record triple
    double prep_success = 0.0;

    double mean_minus() const { return pg_minus.mean(); }
    double mean_plus() const { return pg_plus.mean(); }
};
WhichPathResult which_path_curves(const ProtocolParams& p);

// Unconditioned cavity state after the full Ramsey sequence (no readout),
// the input for phase-space tomography of the detector.
Mat post_ramsey_cavity_state(double phi, const ProtocolParams& p);

}  // namespace catsim
