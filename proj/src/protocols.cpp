#include "catsim/protocols.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace catsim {

namespace {

constexpr double kPi = std::numbers::pi;

Operator displacement_op(cplx beta, double tail_tol, const HilbertConfig& cfg) {
    return {lift_cavity(displacement_matrix(beta, cfg, tail_tol), cfg), "D", 0.0};
}

Mat qubit_cavity_product(const Mat& qubit, const Mat& cavity, const HilbertConfig& cfg) {
    const int N = cfg.fock_dim;
    Mat out(cfg.joint_dim(), cfg.joint_dim());
    for (int q = 0; q < 2; ++q)
        for (int r = 0; r < 2; ++r)
            out.block(q * N, r * N, N, N) = qubit(q, r) * cavity;
    return out;
}

double dispersive_period(const DeviceParams& device) {
    return 2.0 * kPi / std::abs(device.chi_rad());
}

// Wait inserted before the field-discrimination displacement so that the total
// dispersive rotation accumulated by the excited branch since the conditional
// phase gate is a whole number of periods when the displacement fires.
double resync_duration(const ProtocolParams& p) {
    const double period = dispersive_period(p.device);
    const double exposure = 2.0 * p.device.durations.readout;
    double k = std::round((exposure + p.device.durations.resync_idle) / period);
    if (k < 1.0) k = 1.0;
    double wait = k * period - exposure;
    while (wait < 0.0) wait += period;
    return wait;
}

MeasurementStep protocol_readout(const char* label, const ProtocolParams& p) {
    return qubit_readout(label, p.device, p.hilbert, p.include_confusion);
}

double checked_probability(double value, const char* what) {
    if (value < -1e-9 || value > 1.0 + 1e-9)
        throw std::runtime_error(std::string(what) + " out of [0, 1]");
    return std::min(1.0, std::max(0.0, value));
}

double event_probability(const BranchLedger& ledger,
                         const std::vector<OutcomeCondition>& events) {
    double total = 0.0;
    for (const auto& ev : events) total += ledger.probability_of(ev);
    return total;
}

// P(first event | union of events), the conditioning pattern of every
// record-correlation curve here.
double conditional_on_union(const BranchLedger& ledger,
                            const std::vector<OutcomeCondition>& events,
                            const char* what) {
    const double denom = event_probability(ledger, events);
    if (denom < 1e-12)
        throw std::runtime_error(std::string("conditioning event has zero probability: ") + what);
    return checked_probability(ledger.probability_of(events.front()) / denom, what);
}

std::vector<ProgramStep> concat(std::vector<ProgramStep> a, const std::vector<ProgramStep>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

CurveData make_curve(const std::vector<double>& phi, std::string label) {
    CurveData c;
    c.phi = phi;
    c.label = std::move(label);
    c.value.reserve(phi.size());
    return c;
}

}  // namespace

std::vector<double> default_phi_grid(int points) {
    if (points < 2) throw std::invalid_argument("phi grid needs at least 2 points");
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) grid[i] = 2.0 * kPi * i / (points - 1);
    return grid;
}

NoiseContext ProtocolParams::context() const {
    validate();
    return NoiseContext::make(device, hilbert, mode, dt);
}

void ProtocolParams::validate() const {
    hilbert.validate();
    device.validate();
    if (phi_grid.empty()) throw std::invalid_argument("phi grid must not be empty");
    if (dt <= 0) throw std::invalid_argument("dt must be positive");
    if (displacement_tail_tol <= 0)
        throw std::invalid_argument("displacement_tail_tol must be positive");
    const double tail = coherent_tail_deficit(alpha, hilbert);
    if (tail > std::max(1e-6, displacement_tail_tol))
        throw std::invalid_argument(
            "alpha does not fit the Fock truncation (tail " + std::to_string(tail) + ")");
}

double CurveData::mean() const {
    if (value.empty()) throw std::runtime_error("empty curve");
    double sum = 0.0;
    for (double v : value) sum += v;
    return sum / double(value.size());
}

double analytic_pg_approx(double theta, double phi) {
    const double c = std::cos(theta), s = std::sin(theta);
    return (c * c * (1.0 - std::cos(phi)) + s * s) / 2.0;
}

double analytic_fringe_amplitude(double theta, cplx alpha) {
    const double a2 = std::norm(alpha);
    const double k1 = std::exp(-a2 / 2.0);  // <0|alpha> = <0|-alpha>
    const double k2 = std::exp(-2.0 * a2);  // <alpha|-alpha>
    const double c = std::cos(theta), s = std::sin(theta);
    const double norm = 1.0 + k1 * 2.0 * s * c;
    return (c * c + k2 * s * s + k1 * 2.0 * s * c) / norm;
}

double analytic_pg_exact(double theta, cplx alpha, double phi) {
    return 0.5 * (1.0 - std::cos(phi) * analytic_fringe_amplitude(theta, alpha));
}

Vec ideal_cat_state(double theta, cplx alpha, const HilbertConfig& cfg) {
    Vec cat = std::cos(theta) * fock_state(0, cfg) +
              std::sin(theta) * coherent_state(alpha, cfg, 1.0);
    return cat / cat.norm();
}

PreparedCat prepare_cat(const ProtocolParams& p, const NoiseContext& ctx) {
    p.validate();
    const HilbertConfig& cfg = p.hilbert;
    const DeviceParams& dev = p.device;

    Mat initial;
    std::vector<ProgramStep> steps;
    OutcomeCondition keep;
    if (p.thermal_init) {
        initial = qubit_cavity_product(thermal_qubit_density(dev.qubit_p_e_thermal),
                                       thermal_cavity_density(dev.cavity_n_thermal, cfg), cfg);
        steps.push_back(protocol_readout(kInitQubitReadout, p));
        for (const Operator& g : parity_circuit(dev, cfg)) steps.push_back(g);
        steps.push_back(protocol_readout(kInitParityReadout, p));
        keep.emplace_back(kInitQubitReadout, "g");
        keep.emplace_back(kInitParityReadout, "g");
    } else {
        initial = to_density(tensor_state(qubit_g(), fock_state(0, cfg), cfg));
    }

    steps.push_back(displacement_op(p.alpha / 2.0, p.displacement_tail_tol, cfg));
    steps.push_back(qubit_rotation_gate(kPi - 2.0 * p.theta, 0.0, dev, cfg));
    steps.push_back(conditional_pi_phase(dev, cfg));
    steps.push_back(qubit_rotation_gate(-kPi / 2.0, 0.0, dev, cfg));
    steps.push_back(protocol_readout(kPrepReadout, p));
    steps.push_back(displacement_op(p.alpha / 2.0, p.displacement_tail_tol, cfg));

    BranchLedger ledger = run_sequence(initial, steps, ctx);

    OutcomeCondition selected = keep;
    selected.emplace_back(kPrepReadout, "g");
    const double kept = ledger.probability_of(keep);
    const double success = ledger.probability_of(selected);
    if (success < 1e-12) throw std::runtime_error("cat preparation post-selection never succeeds");

    PreparedCat out;
    out.state = ledger.conditional_state(selected);
    out.success_probability =
        keep.empty() ? success : checked_probability(success / kept, "preparation success");
    return out;
}

std::vector<ProgramStep> ramsey_steps(double phi, const ProtocolParams& p) {
    return {qubit_rotation_gate(kPi / 2.0, phi, p.device, p.hilbert),
            conditional_pi_phase(p.device, p.hilbert),
            qubit_rotation_gate(kPi / 2.0, 0.0, p.device, p.hilbert),
            protocol_readout(kRamseyReadout, p)};
}

std::vector<ProgramStep> select_steps(const ProtocolParams& p) {
    const bool gaussian = p.mode == EvolutionMode::Noisy;
    std::vector<ProgramStep> steps;
    steps.push_back(selective_pi_on_vacuum(p.device, p.hilbert,
                                           gaussian ? p.device.selective_sigma : 0.0,
                                           p.device.durations.selective_pi));
    steps.push_back(protocol_readout(kSelectReadout, p));
    return steps;
}

std::vector<ProgramStep> parity_steps(const ProtocolParams& p) {
    std::vector<ProgramStep> steps;
    for (const Operator& g : parity_circuit(p.device, p.hilbert)) steps.push_back(g);
    steps.push_back(protocol_readout(kParityReadout, p));
    return steps;
}

std::vector<ProgramStep> which_path_steps(const ProtocolParams& p) {
    const bool gaussian = p.mode == EvolutionMode::Noisy;
    std::vector<ProgramStep> steps;
    steps.push_back(IdleStep{resync_duration(p), true, "resync"});
    steps.push_back(displacement_op(-p.alpha, p.displacement_tail_tol, p.hilbert));
    steps.push_back(selective_pi_on_vacuum(p.device, p.hilbert,
                                           gaussian ? p.device.selective_sigma_long : 0.0,
                                           p.device.durations.selective_pi_long));
    steps.push_back(protocol_readout(kPathReadout, p));
    return steps;
}

BranchLedger ramsey_ledger(const Mat& prepared, double phi, const ProtocolParams& p,
                           const NoiseContext& ctx) {
    return run_sequence(prepared, ramsey_steps(phi, p), ctx);
}

BranchLedger delayed_choice_ledger(const Mat& prepared, double phi, const ProtocolParams& p,
                                   const NoiseContext& ctx) {
    return run_sequence(prepared, concat(ramsey_steps(phi, p), select_steps(p)), ctx);
}

BranchLedger eraser_ledger(const Mat& prepared, double phi, const ProtocolParams& p,
                           const NoiseContext& ctx, bool after_on_selection) {
    std::vector<ProgramStep> steps = ramsey_steps(phi, p);
    if (after_on_selection) steps = concat(std::move(steps), select_steps(p));
    return run_sequence(prepared, concat(std::move(steps), parity_steps(p)), ctx);
}

BranchLedger which_path_ledger(const Mat& prepared, double phi, const ProtocolParams& p,
                               const NoiseContext& ctx) {
    return run_sequence(
        prepared, concat(concat(ramsey_steps(phi, p), select_steps(p)), which_path_steps(p)),
        ctx);
}

RamseyResult ramsey_curve(const ProtocolParams& p) {
    NoiseContext ctx = p.context();
    PreparedCat prep = prepare_cat(p, ctx);
    RamseyResult result;
    result.prep_success = prep.success_probability;
    result.pg = make_curve(p.phi_grid, "P_g");
    for (double phi : p.phi_grid) {
        BranchLedger ledger = ramsey_ledger(prep.state, phi, p, ctx);
        result.pg.value.push_back(
            checked_probability(ledger.probability_of({{kRamseyReadout, "g"}}), "P_g"));
    }
    return result;
}

DelayedChoiceResult delayed_choice_curves(const ProtocolParams& p) {
    NoiseContext ctx = p.context();
    PreparedCat prep = prepare_cat(p, ctx);
    DelayedChoiceResult result;
    result.prep_success = prep.success_probability;
    result.pg_off = make_curve(p.phi_grid, "P_g|off");
    result.pg_on = make_curve(p.phi_grid, "P_g|on");
    for (double phi : p.phi_grid) {
        BranchLedger ledger = delayed_choice_ledger(prep.state, phi, p, ctx);
        // The vacuum-selective pulse flips the qubit when the detector is
        // empty, so "off" is a flipped record pair and "on" an equal one.
        result.pg_off.value.push_back(conditional_on_union(
            ledger,
            {{{kRamseyReadout, "g"}, {kSelectReadout, "e"}},
             {{kRamseyReadout, "e"}, {kSelectReadout, "g"}}},
            "P_g|off"));
        result.pg_on.value.push_back(conditional_on_union(
            ledger,
            {{{kRamseyReadout, "g"}, {kSelectReadout, "g"}},
             {{kRamseyReadout, "e"}, {kSelectReadout, "e"}}},
            "P_g|on"));
    }
    return result;
}

EraserResult eraser_curves(const ProtocolParams& p, bool after_on_selection) {
    NoiseContext ctx = p.context();
    PreparedCat prep = prepare_cat(p, ctx);
    EraserResult result;
    result.after_on_selection = after_on_selection;
    result.prep_success = prep.success_probability;
    const std::string suffix = after_on_selection ? "on," : "";
    result.pg_even = make_curve(p.phi_grid, "P_g|" + suffix + "even");
    result.pg_odd = make_curve(p.phi_grid, "P_g|" + suffix + "odd");

    // The parity circuit returns the qubit to its pre-circuit state for even
    // photon number and flips it for odd, so parity is read off the last two
    // records: equal means even.
    for (double phi : p.phi_grid) {
        BranchLedger ledger = eraser_ledger(prep.state, phi, p, ctx, after_on_selection);
        auto with_on = [&](const char* qubit, const char* parity) {
            OutcomeCondition cond{{kRamseyReadout, qubit}};
            if (after_on_selection) cond.emplace_back(kSelectReadout, qubit);
            cond.emplace_back(kParityReadout, parity);
            return cond;
        };
        result.pg_even.value.push_back(conditional_on_union(
            ledger, {with_on("g", "g"), with_on("e", "e")}, result.pg_even.label.c_str()));
        result.pg_odd.value.push_back(conditional_on_union(
            ledger, {with_on("g", "e"), with_on("e", "g")}, result.pg_odd.label.c_str()));
    }
    return result;
}

WhichPathResult which_path_curves(const ProtocolParams& p) {
    NoiseContext ctx = p.context();
    PreparedCat prep = prepare_cat(p, ctx);
    WhichPathResult result;
    result.prep_success = prep.success_probability;
    result.pg_minus = make_curve(p.phi_grid, "P_g|path=-alpha");
    result.pg_plus = make_curve(p.phi_grid, "P_g|path=+alpha");
    result.p_ggg = make_curve(p.phi_grid, "P_ggg");
    result.p_eee = make_curve(p.phi_grid, "P_eee");

    auto triple = [](const char* a, const char* b, const char* c) {
        return OutcomeCondition{
            {kRamseyReadout, a}, {kSelectReadout, b}, {kPathReadout, c}};
    };
    for (double phi : p.phi_grid) {
        BranchLedger ledger = which_path_ledger(prep.state, phi, p, ctx);
        // After the on-selection, displacing by -alpha parks the unflipped
        // field component at the origin; the vacuum-selective pulse then flips
        // the qubit exactly for that component. An unflipped third record
        // therefore tags the sign-flipped field, a flipped one the original.
        result.pg_minus.value.push_back(conditional_on_union(
            ledger, {triple("g", "g", "g"), triple("e", "e", "e")}, "P_g|path=-alpha"));
        result.pg_plus.value.push_back(conditional_on_union(
            ledger, {triple("g", "g", "e"), triple("e", "e", "g")}, "P_g|path=+alpha"));
        result.p_ggg.value.push_back(
            checked_probability(ledger.probability_of(triple("g", "g", "g")), "P_ggg"));
        result.p_eee.value.push_back(
            checked_probability(ledger.probability_of(triple("e", "e", "e")), "P_eee"));
    }
    return result;
}

Mat post_ramsey_cavity_state(double phi, const ProtocolParams& p) {
    NoiseContext ctx = p.context();
    PreparedCat prep = prepare_cat(p, ctx);
    Mat rho = prep.state;
    rho = apply_gate_noisy(rho, qubit_rotation_gate(kPi / 2.0, phi, p.device, p.hilbert), ctx);
    rho = apply_gate_noisy(rho, conditional_pi_phase(p.device, p.hilbert), ctx);
    rho = apply_gate_noisy(rho, qubit_rotation_gate(kPi / 2.0, 0.0, p.device, p.hilbert), ctx);
    return partial_trace_qubit(rho, p.hilbert);
}

}  // namespace catsim
