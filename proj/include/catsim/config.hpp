#pragma once

#include <string>
#include <utility>
#include <vector>

#include "catsim/protocols.hpp"
#include "catsim/tomography.hpp"

namespace catsim {

// User-facing run description. Angles are stored in units of pi exactly as
// configured, and every field keeps its config-file spelling, so the
// effective-config echo round-trips byte for byte; conversion to radians and
// to device structs happens in protocol().
struct RunConfig {
    std::string experiment;      // ramsey | delayed-choice | eraser |
                                 // eraser-after-on | which-path | wigner | cat-prep
    std::string mode = "ideal";  // ideal | noisy

    double theta = 0.25;             // units of pi
    std::vector<double> theta_list;  // optional sweep (ramsey only), units of pi
    double alpha = 2.0 * std::numbers::sqrt2;
    double alpha_imag = 0.0;
    int phi_points = 41;
    double phi_min = 0.0;  // units of pi
    double phi_max = 2.0;  // units of pi

    int fock_dim = 40;
    double dt_s = 1e-9;

    double chi_hz = -1.64e6;
    double anharmonicity_hz = 246e6;
    double qubit_t1_s = 9.5e-6;
    double qubit_tphi_s = 12.4e-6;
    double cavity_t1_s = 66e-6;
    double cavity_n_thermal = 0.01;
    double qubit_p_e_thermal = 0.085;
    double readout_g_fidelity = 0.98;
    double readout_e_fidelity = 0.943;
    double pi2_pulse_s = 8e-9;
    double selective_pi_s = 400e-9;
    double selective_pi_long_s = 680e-9;
    double readout_s = 240e-9;
    double resync_idle_s = 1.2e-6;
    double selective_sigma_s = 100e-9;
    double selective_sigma_long_s = 170e-9;
    double pi2_fock_sigma_s = 0.0;
    double kerr_cavity_hz = 0.0;
    double kerr_dispersive_hz = 0.0;

    bool include_confusion = true;
    bool thermal_init = false;
    double displacement_tail_tol = 1e-8;

    double grid_min = -4.5;
    double grid_max = 4.5;
    double grid_step = 0.15;
    int reconstruction_dim = 20;  // 0 means fock_dim
    double wigner_noise_sigma = 0.0;
    int wigner_seed = 1;

    std::string output_dir;  // empty: resolved by the tool (flag, env, ".")

    bool noisy() const { return mode == "noisy"; }
    ProtocolParams protocol() const;
    WignerGrid wigner_grid() const;
    void validate() const;
};

// Parses flat "key = value" text ('#' comments, blank lines allowed). Unknown
// or duplicate keys and malformed values are reported with their line number.
// An empty file yields all defaults.
RunConfig load_config(const std::string& path);

// Writes every field in a fixed order with full double precision, so that
// load_config(write_effective_config(cfg)) reproduces cfg exactly.
void write_effective_config(const RunConfig& cfg, const std::string& path);

enum class CheckKind { Band, Upper, Lower, None };

struct SummaryRow {
    std::string metric;
    double value = 0.0;
    CheckKind kind = CheckKind::None;
    double target = 0.0;
    double tolerance = 0.0;

    bool passed() const;
};

struct ExperimentResult {
    std::vector<std::pair<std::string, CurveData>> curves;  // file stem, curve
    std::vector<std::pair<std::string, WignerMap>> maps;
    std::vector<std::pair<std::string, Mat>> densities;
    std::vector<SummaryRow> rows;

    bool all_passed() const;
};

// Runs the configured experiment and assembles curves plus summary rows.
// Ideal-mode rows carry analytic targets at tight tolerance; noisy-mode rows
// carry the measured reference values at their documented bands, or no target
// where none is defined.
ExperimentResult execute_experiment(const RunConfig& cfg);

// execute + write: one CSV per curve/map/density, summary.csv, and
// effective_config.cfg, all atomically, into out_dir. Returns 0 when every
// checked row passes, 1 otherwise.
int run_experiment(const RunConfig& cfg, const std::string& out_dir);

void write_curve_csv(const CurveData& curve, const std::string& path);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path);

}  // namespace catsim
