#include "catsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace catsim {

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "ramsey",     "delayed-choice", "eraser",  "eraser-after-on",
        "which-path", "wigner",         "cat-prep"};
    return names;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s) {
    const std::string t = trim(s);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw std::runtime_error("expected a number, got '" + s + "'");
    return v;
}

int parse_int(const std::string& s) {
    const std::string t = trim(s);
    int v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw std::runtime_error("expected an integer, got '" + s + "'");
    return v;
}

bool parse_bool(const std::string& s) {
    const std::string t = trim(s);
    if (t == "true") return true;
    if (t == "false") return false;
    throw std::runtime_error("expected true or false, got '" + s + "'");
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
    if (out.empty()) throw std::runtime_error("expected a comma-separated list of numbers");
    return out;
}

std::string fmt_full(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Returns false for an unknown key; malformed values throw.
bool apply_key(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "experiment") c.experiment = trim(value);
    else if (key == "mode") c.mode = trim(value);
    else if (key == "theta") c.theta = parse_double(value);
    else if (key == "theta_list") c.theta_list = parse_double_list(value);
    else if (key == "alpha") c.alpha = parse_double(value);
    else if (key == "alpha_imag") c.alpha_imag = parse_double(value);
    else if (key == "phi_points") c.phi_points = parse_int(value);
    else if (key == "phi_min") c.phi_min = parse_double(value);
    else if (key == "phi_max") c.phi_max = parse_double(value);
    else if (key == "fock_dim") c.fock_dim = parse_int(value);
    else if (key == "dt_s") c.dt_s = parse_double(value);
    else if (key == "chi_hz") c.chi_hz = parse_double(value);
    else if (key == "anharmonicity_hz") c.anharmonicity_hz = parse_double(value);
    else if (key == "qubit_t1_s") c.qubit_t1_s = parse_double(value);
    else if (key == "qubit_tphi_s") c.qubit_tphi_s = parse_double(value);
    else if (key == "cavity_t1_s") c.cavity_t1_s = parse_double(value);
    else if (key == "cavity_n_thermal") c.cavity_n_thermal = parse_double(value);
    else if (key == "qubit_p_e_thermal") c.qubit_p_e_thermal = parse_double(value);
    else if (key == "readout_g_fidelity") c.readout_g_fidelity = parse_double(value);
    else if (key == "readout_e_fidelity") c.readout_e_fidelity = parse_double(value);
    else if (key == "pi2_pulse_s") c.pi2_pulse_s = parse_double(value);
    else if (key == "selective_pi_s") c.selective_pi_s = parse_double(value);
    else if (key == "selective_pi_long_s") c.selective_pi_long_s = parse_double(value);
    else if (key == "readout_s") c.readout_s = parse_double(value);
    else if (key == "resync_idle_s") c.resync_idle_s = parse_double(value);
    else if (key == "selective_sigma_s") c.selective_sigma_s = parse_double(value);
    else if (key == "selective_sigma_long_s") c.selective_sigma_long_s = parse_double(value);
    else if (key == "pi2_fock_sigma_s") c.pi2_fock_sigma_s = parse_double(value);
    else if (key == "kerr_cavity_hz") c.kerr_cavity_hz = parse_double(value);
    else if (key == "kerr_dispersive_hz") c.kerr_dispersive_hz = parse_double(value);
    else if (key == "include_confusion") c.include_confusion = parse_bool(value);
    else if (key == "thermal_init") c.thermal_init = parse_bool(value);
    else if (key == "displacement_tail_tol") c.displacement_tail_tol = parse_double(value);
    else if (key == "grid_min") c.grid_min = parse_double(value);
    else if (key == "grid_max") c.grid_max = parse_double(value);
    else if (key == "grid_step") c.grid_step = parse_double(value);
    else if (key == "reconstruction_dim") c.reconstruction_dim = parse_int(value);
    else if (key == "wigner_noise_sigma") c.wigner_noise_sigma = parse_double(value);
    else if (key == "wigner_seed") c.wigner_seed = parse_int(value);
    else if (key == "output_dir") c.output_dir = trim(value);
    else return false;
    return true;
}

void atomic_write(const std::string& path,
                  const std::function<void(std::ostream&)>& body) {
    namespace fs = std::filesystem;
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    fs::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.precision(12);
        body(out);
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    fs::rename(tmp, p);
}

const char* check_name(CheckKind k) {
    switch (k) {
        case CheckKind::Band: return "band";
        case CheckKind::Upper: return "upper";
        case CheckKind::Lower: return "lower";
        default: return "none";
    }
}

SummaryRow band(std::string metric, double value, double target, double tol) {
    return {std::move(metric), value, CheckKind::Band, target, tol};
}

SummaryRow upper(std::string metric, double value, double bound) {
    return {std::move(metric), value, CheckKind::Upper, bound, 0.0};
}

SummaryRow lower(std::string metric, double value, double bound) {
    return {std::move(metric), value, CheckKind::Lower, bound, 0.0};
}

SummaryRow info(std::string metric, double value) {
    return {std::move(metric), value, CheckKind::None, 0.0, 0.0};
}

double prep_success_law(double theta, cplx alpha) {
    return (1.0 + std::sin(2.0 * theta) * std::exp(-std::norm(alpha) / 2.0)) / 2.0;
}

void add_prep_row(std::vector<SummaryRow>& rows, const RunConfig& cfg,
                  const ProtocolParams& p, double measured, const std::string& suffix) {
    if (!cfg.noisy() && !cfg.thermal_init)
        rows.push_back(band("prep_success" + suffix, measured,
                            prep_success_law(p.theta, p.alpha), 1e-6));
    else
        rows.push_back(info("prep_success" + suffix, measured));
}

ExperimentResult run_ramsey(const RunConfig& cfg) {
    ExperimentResult res;
    const bool sweep = !cfg.theta_list.empty();
    const std::vector<double> thetas = sweep ? cfg.theta_list
                                             : std::vector<double>{cfg.theta};
    for (double t : thetas) {
        ProtocolParams p = cfg.protocol();
        p.theta = t * kPi;
        auto r = ramsey_curve(p);
        const std::string suffix = sweep ? "_theta_" + fmt12(t) : "";
        res.curves.emplace_back("ramsey" + suffix, r.pg);
        add_prep_row(res.rows, cfg, p, r.prep_success, suffix);
        const double vis = visibility(r.pg.value);
        if (!cfg.noisy())
            res.rows.push_back(band("visibility" + suffix, vis,
                                    analytic_fringe_amplitude(p.theta, p.alpha), 1e-6));
        else
            res.rows.push_back(info("visibility" + suffix, vis));
    }
    return res;
}

ExperimentResult run_delayed_choice(const RunConfig& cfg) {
    ExperimentResult res;
    ProtocolParams p = cfg.protocol();
    auto r = delayed_choice_curves(p);
    res.curves.emplace_back("delayed_choice_pg_off", r.pg_off);
    res.curves.emplace_back("delayed_choice_pg_on", r.pg_on);
    add_prep_row(res.rows, cfg, p, r.prep_success, "");
    const double vis_off = visibility(r.pg_off.value);
    const double con_on = contrast(r.pg_on.value);
    if (!cfg.noisy()) {
        res.rows.push_back(band("pg_off_visibility", vis_off, 1.0, 1e-6));
        res.rows.push_back(
            band("pg_on_contrast", con_on, std::exp(-std::norm(p.alpha)), 1e-6));
    } else {
        res.rows.push_back(band("pg_off_visibility", vis_off, 0.89, 0.05));
        res.rows.push_back(upper("pg_on_contrast", con_on, 0.08));
    }
    return res;
}

ExperimentResult run_eraser(const RunConfig& cfg, bool after_on) {
    ExperimentResult res;
    ProtocolParams p = cfg.protocol();
    auto r = eraser_curves(p, after_on);
    const std::string stem = after_on ? "eraser_after_on" : "eraser";
    res.curves.emplace_back(stem + "_pg_even", r.pg_even);
    res.curves.emplace_back(stem + "_pg_odd", r.pg_odd);
    add_prep_row(res.rows, cfg, p, r.prep_success, "");

    const double vis_even = visibility(r.pg_even.value);
    const double vis_odd = visibility(r.pg_odd.value);
    const double con_even = contrast(r.pg_even.value);
    const double con_odd = contrast(r.pg_odd.value);
    if (!after_on) {
        if (!cfg.noisy()) {
            res.rows.push_back(band("pg_even_visibility", vis_even, 1.0, 1e-6));
            res.rows.push_back(band("pg_odd_visibility", vis_odd, 1.0, 1e-6));
            double dev = 0.0;
            for (size_t i = 0; i < r.pg_even.value.size(); ++i)
                dev = std::max(dev,
                               std::abs(r.pg_even.value[i] + r.pg_odd.value[i] - 1.0));
            res.rows.push_back(upper("parity_sum_deviation", dev, 1e-8));
        } else {
            res.rows.push_back(band("pg_even_visibility", vis_even, 0.82, 0.10));
            res.rows.push_back(band("pg_odd_visibility", vis_odd, 0.50, 0.10));
        }
        res.rows.push_back(info("pg_even_contrast", con_even));
        res.rows.push_back(info("pg_odd_contrast", con_odd));
    } else {
        if (!cfg.noisy()) {
            res.rows.push_back(band("pg_even_contrast", con_even, 1.0, 1e-6));
            res.rows.push_back(band("pg_odd_contrast", con_odd, 1.0, 1e-6));
        } else {
            res.rows.push_back(band("pg_even_contrast", con_even, 0.53, 0.10));
            res.rows.push_back(band("pg_odd_contrast", con_odd, 0.48, 0.10));
        }
        res.rows.push_back(info("pg_even_visibility", vis_even));
        res.rows.push_back(info("pg_odd_visibility", vis_odd));
    }
    return res;
}

ExperimentResult run_which_path(const RunConfig& cfg) {
    ExperimentResult res;
    ProtocolParams p = cfg.protocol();
    auto r = which_path_curves(p);
    res.curves.emplace_back("which_path_pg_minus", r.pg_minus);
    res.curves.emplace_back("which_path_pg_plus", r.pg_plus);
    res.curves.emplace_back("which_path_p_ggg", r.p_ggg);
    res.curves.emplace_back("which_path_p_eee", r.p_eee);
    add_prep_row(res.rows, cfg, p, r.prep_success, "");

    if (!cfg.noisy()) {
        const double k1 = std::exp(-std::norm(p.alpha) / 2.0);
        // The equal-split law holds only where the overlap terms are
        // negligible and the displaced far component still fits the space.
        const bool overlap_small = 3.0 * std::pow(k1, 4) < 1e-4;
        const bool displaced_fits =
            coherent_tail_deficit(2.0 * p.alpha, p.hilbert) < 1e-8;
        if (overlap_small && displaced_fits) {
            res.rows.push_back(band("mean_pg_path_minus", r.mean_minus(), 0.5, 1e-3));
            res.rows.push_back(band("mean_pg_path_plus", r.mean_plus(), 0.5, 1e-3));
        } else {
            res.rows.push_back(info("mean_pg_path_minus", r.mean_minus()));
            res.rows.push_back(info("mean_pg_path_plus", r.mean_plus()));
        }
        const bool quarter = std::abs(p.theta - kPi / 4.0) < 1e-12;
        if (quarter && displaced_fits) {
            double target = 0.0;
            for (double phi : p.phi_grid)
                target += (1.0 - k1) *
                          (1.0 + k1 * k1 - std::pow(k1, 4) + std::pow(k1, 6) +
                           2.0 * std::pow(k1, 4) * std::cos(phi)) /
                          8.0;
            target /= double(p.phi_grid.size());
            res.rows.push_back(band("mean_p_ggg", r.p_ggg.mean(), target, 1e-6));
            res.rows.push_back(band("mean_p_eee", r.p_eee.mean(), target, 1e-6));
        } else {
            res.rows.push_back(info("mean_p_ggg", r.p_ggg.mean()));
            res.rows.push_back(info("mean_p_eee", r.p_eee.mean()));
        }
    } else {
        const bool displaced_fits =
            coherent_tail_deficit(2.0 * p.alpha, p.hilbert) < 1e-8;
        if (displaced_fits) {
            res.rows.push_back(band("mean_pg_path_minus", r.mean_minus(), 0.56, 0.01));
            const double window = 2.0 * p.device.durations.resync_idle;
            const double ratio_target =
                1.0 / (1.0 + std::exp(-window / p.device.qubit_t1));
            res.rows.push_back(
                band("decay_model_agreement", r.mean_minus(), ratio_target, 0.005));
            res.rows.push_back(band("mean_pg_path_plus", r.mean_plus(), 0.52, 0.02));
        } else {
            res.rows.push_back(info("mean_pg_path_minus", r.mean_minus()));
            res.rows.push_back(info("mean_pg_path_plus", r.mean_plus()));
        }
        res.rows.push_back(info("mean_p_ggg", r.p_ggg.mean()));
        res.rows.push_back(info("mean_p_eee", r.p_eee.mean()));
    }
    return res;
}

ExperimentResult run_cat_prep(const RunConfig& cfg, bool with_wigner) {
    ExperimentResult res;
    ProtocolParams p = cfg.protocol();
    auto ctx = p.context();
    auto prep = prepare_cat(p, ctx);
    Mat cavity = partial_trace_qubit(prep.state, p.hilbert);
    add_prep_row(res.rows, cfg, p, prep.success_probability, "");

    Vec target = ideal_cat_state(p.theta, p.alpha, p.hilbert);
    const double fidelity = pure_state_fidelity(target, cavity);
    if (!cfg.noisy())
        res.rows.push_back(band("cat_fidelity", fidelity, 1.0, 1e-8));
    else
        res.rows.push_back(band("cat_fidelity", fidelity, 0.93, 0.04));

    if (!with_wigner) {
        res.densities.emplace_back("cat_density", cavity);
        return res;
    }

    WignerMap map = wigner_map(cavity, cfg.wigner_grid());
    res.maps.emplace_back("wigner_map", map);
    res.densities.emplace_back("cavity_density", cavity);

    // Interference fringes of the two-component superposition alternate in
    // sign transverse to the line joining the components, so the scan covers
    // a strip around the segment rather than the segment alone.
    double min_segment = 0.0;
    const cplx unit = p.alpha / std::abs(p.alpha);
    for (int i = 0; i <= 64; ++i)
        for (int j = -10; j <= 10; ++j) {
            cplx beta = p.alpha * (double(i) / 64.0) +
                        unit * cplx(0.0, 0.1 * double(j));
            min_segment = std::min(min_segment, wigner_point(cavity, beta));
        }
    res.rows.push_back(upper("wigner_min_segment", min_segment, -1e-6));

    const double cell = map.grid.step * map.grid.step;
    res.rows.push_back(band("wigner_mass", map.values.sum() * cell, 1.0, 0.02));

    const int recon_dim = cfg.reconstruction_dim > 0 ? cfg.reconstruction_dim
                                                     : cfg.fock_dim;
    Mat recon = reconstruct_density(map, recon_dim);
    res.densities.emplace_back("reconstructed_density", recon);
    Mat truncated = cavity.topLeftCorner(recon_dim, recon_dim);
    res.rows.push_back(
        lower("roundtrip_fidelity", state_fidelity(recon, truncated), 0.99));

    if (cfg.wigner_noise_sigma > 0.0) {
        std::mt19937 rng(static_cast<unsigned>(cfg.wigner_seed));
        std::normal_distribution<double> noise(0.0, cfg.wigner_noise_sigma);
        WignerMap noisy_map = map;
        for (int r2 = 0; r2 < noisy_map.values.rows(); ++r2)
            for (int c2 = 0; c2 < noisy_map.values.cols(); ++c2)
                noisy_map.values(r2, c2) += noise(rng);
        Mat noisy_recon = reconstruct_density(noisy_map, recon_dim);
        res.rows.push_back(info("reconstruction_fidelity_noisy",
                                state_fidelity(noisy_recon, truncated)));
    }
    return res;
}

}  // namespace

ProtocolParams RunConfig::protocol() const {
    ProtocolParams p;
    p.theta = theta * kPi;
    p.alpha = {alpha, alpha_imag};
    p.phi_grid.resize(phi_points);
    for (int i = 0; i < phi_points; ++i)
        p.phi_grid[i] =
            (phi_min + (phi_max - phi_min) * i / double(phi_points - 1)) * kPi;
    p.mode = noisy() ? EvolutionMode::Noisy : EvolutionMode::Ideal;
    p.include_confusion = include_confusion;
    p.thermal_init = thermal_init;
    p.displacement_tail_tol = displacement_tail_tol;
    p.hilbert = HilbertConfig{fock_dim};
    p.dt = dt_s;

    DeviceParams d;
    d.dispersive_shift_hz = chi_hz;
    d.anharmonicity_hz = anharmonicity_hz;
    d.qubit_t1 = qubit_t1_s;
    d.qubit_tphi = qubit_tphi_s;
    d.cavity_t1 = cavity_t1_s;
    d.cavity_n_thermal = cavity_n_thermal;
    d.qubit_p_e_thermal = qubit_p_e_thermal;
    d.readout_confusion << readout_g_fidelity, 1.0 - readout_e_fidelity,
        1.0 - readout_g_fidelity, readout_e_fidelity;
    d.durations.pi2_pulse = pi2_pulse_s;
    d.durations.selective_pi = selective_pi_s;
    d.durations.selective_pi_long = selective_pi_long_s;
    d.durations.readout = readout_s;
    d.durations.resync_idle = resync_idle_s;
    d.selective_sigma = selective_sigma_s;
    d.selective_sigma_long = selective_sigma_long_s;
    d.pi2_fock_sigma = pi2_fock_sigma_s;
    d.kerr_cavity_hz = kerr_cavity_hz;
    d.kerr_dispersive_hz = kerr_dispersive_hz;
    p.device = d;
    return p;
}

WignerGrid RunConfig::wigner_grid() const { return {grid_min, grid_max, grid_step}; }

void RunConfig::validate() const {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), experiment) == names.end()) {
        std::string all;
        for (const auto& n : names) all += (all.empty() ? "" : ", ") + n;
        throw std::invalid_argument("experiment must be one of {" + all + "}, got '" +
                                    experiment + "'");
    }
    if (mode != "ideal" && mode != "noisy")
        throw std::invalid_argument("mode must be ideal or noisy, got '" + mode + "'");
    if (!theta_list.empty() && experiment != "ramsey")
        throw std::invalid_argument("theta_list is only supported by the ramsey experiment");
    if (phi_points < 2) throw std::invalid_argument("phi_points must be at least 2");
    protocol().validate();
    if (experiment == "wigner") {
        wigner_grid().validate();
        if (reconstruction_dim < 0 || reconstruction_dim > fock_dim)
            throw std::invalid_argument(
                "reconstruction_dim must lie in [0, fock_dim]");
        if (wigner_noise_sigma < 0)
            throw std::invalid_argument("wigner_noise_sigma must be non-negative");
    }
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);

    RunConfig cfg;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = path + ":" + std::to_string(lineno);
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::runtime_error(where + ": missing key");
        if (value.empty()) throw std::runtime_error(where + ": missing value for '" + key + "'");
        if (!seen.insert(key).second)
            throw std::runtime_error(where + ": duplicate key '" + key + "'");
        try {
            if (!apply_key(cfg, key, value))
                throw std::runtime_error("unknown key '" + key + "'");
        } catch (const std::exception& e) {
            throw std::runtime_error(where + ": " + e.what());
        }
    }
    return cfg;
}

void write_effective_config(const RunConfig& c, const std::string& path) {
    atomic_write(path, [&](std::ostream& out) {
        auto kv = [&](const char* key, const std::string& v) {
            out << key << " = " << v << "\n";
        };
        kv("experiment", c.experiment);
        kv("mode", c.mode);
        kv("theta", fmt_full(c.theta));
        if (!c.theta_list.empty()) {
            std::string joined;
            for (double t : c.theta_list)
                joined += (joined.empty() ? "" : ",") + fmt_full(t);
            kv("theta_list", joined);
        }
        kv("alpha", fmt_full(c.alpha));
        kv("alpha_imag", fmt_full(c.alpha_imag));
        kv("phi_points", std::to_string(c.phi_points));
        kv("phi_min", fmt_full(c.phi_min));
        kv("phi_max", fmt_full(c.phi_max));
        kv("fock_dim", std::to_string(c.fock_dim));
        kv("dt_s", fmt_full(c.dt_s));
        kv("chi_hz", fmt_full(c.chi_hz));
        kv("anharmonicity_hz", fmt_full(c.anharmonicity_hz));
        kv("qubit_t1_s", fmt_full(c.qubit_t1_s));
        kv("qubit_tphi_s", fmt_full(c.qubit_tphi_s));
        kv("cavity_t1_s", fmt_full(c.cavity_t1_s));
        kv("cavity_n_thermal", fmt_full(c.cavity_n_thermal));
        kv("qubit_p_e_thermal", fmt_full(c.qubit_p_e_thermal));
        kv("readout_g_fidelity", fmt_full(c.readout_g_fidelity));
        kv("readout_e_fidelity", fmt_full(c.readout_e_fidelity));
        kv("pi2_pulse_s", fmt_full(c.pi2_pulse_s));
        kv("selective_pi_s", fmt_full(c.selective_pi_s));
        kv("selective_pi_long_s", fmt_full(c.selective_pi_long_s));
        kv("readout_s", fmt_full(c.readout_s));
        kv("resync_idle_s", fmt_full(c.resync_idle_s));
        kv("selective_sigma_s", fmt_full(c.selective_sigma_s));
        kv("selective_sigma_long_s", fmt_full(c.selective_sigma_long_s));
        kv("pi2_fock_sigma_s", fmt_full(c.pi2_fock_sigma_s));
        kv("kerr_cavity_hz", fmt_full(c.kerr_cavity_hz));
        kv("kerr_dispersive_hz", fmt_full(c.kerr_dispersive_hz));
        kv("include_confusion", c.include_confusion ? "true" : "false");
        kv("thermal_init", c.thermal_init ? "true" : "false");
        kv("displacement_tail_tol", fmt_full(c.displacement_tail_tol));
        kv("grid_min", fmt_full(c.grid_min));
        kv("grid_max", fmt_full(c.grid_max));
        kv("grid_step", fmt_full(c.grid_step));
        kv("reconstruction_dim", std::to_string(c.reconstruction_dim));
        kv("wigner_noise_sigma", fmt_full(c.wigner_noise_sigma));
        kv("wigner_seed", std::to_string(c.wigner_seed));
        if (!c.output_dir.empty()) kv("output_dir", c.output_dir);
    });
}

bool SummaryRow::passed() const {
    switch (kind) {
        case CheckKind::Band: return std::abs(value - target) <= tolerance;
        case CheckKind::Upper: return value <= target + tolerance;
        case CheckKind::Lower: return value >= target - tolerance;
        default: return true;
    }
}

bool ExperimentResult::all_passed() const {
    for (const auto& r : rows)
        if (!r.passed()) return false;
    return true;
}

ExperimentResult execute_experiment(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.experiment == "ramsey") return run_ramsey(cfg);
    if (cfg.experiment == "delayed-choice") return run_delayed_choice(cfg);
    if (cfg.experiment == "eraser") return run_eraser(cfg, false);
    if (cfg.experiment == "eraser-after-on") return run_eraser(cfg, true);
    if (cfg.experiment == "which-path") return run_which_path(cfg);
    if (cfg.experiment == "wigner") return run_cat_prep(cfg, true);
    return run_cat_prep(cfg, false);
}

void write_curve_csv(const CurveData& curve, const std::string& path) {
    atomic_write(path, [&](std::ostream& out) {
        out << "phi_over_pi,probability\n";
        for (size_t i = 0; i < curve.phi.size(); ++i)
            out << curve.phi[i] / kPi << ',' << curve.value[i] << '\n';
    });
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
    atomic_write(path, [&](std::ostream& out) {
        out << "metric,value,target,tolerance,check,status\n";
        for (const auto& r : rows) {
            out << r.metric << ',' << fmt12(r.value) << ',';
            if (r.kind == CheckKind::None)
                out << ",," << check_name(r.kind) << ",INFO\n";
            else
                out << fmt12(r.target) << ',' << fmt12(r.tolerance) << ','
                    << check_name(r.kind) << ',' << (r.passed() ? "PASS" : "FAIL")
                    << '\n';
        }
    });
}

int run_experiment(const RunConfig& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    ExperimentResult res = execute_experiment(cfg);

    const fs::path dir(out_dir.empty() ? "." : out_dir);
    fs::create_directories(dir);
    for (const auto& [stem, curve] : res.curves)
        write_curve_csv(curve, (dir / (stem + ".csv")).string());
    for (const auto& [stem, map] : res.maps) {
        const fs::path target = dir / (stem + ".csv");
        const fs::path tmp = dir / (stem + ".csv.tmp");
        write_wigner_csv(map, tmp.string());
        fs::rename(tmp, target);
    }
    for (const auto& [stem, rho] : res.densities) {
        const fs::path target = dir / (stem + ".csv");
        const fs::path tmp = dir / (stem + ".csv.tmp");
        write_density_csv(rho, tmp.string());
        fs::rename(tmp, target);
    }
    write_summary_csv(res.rows, (dir / "summary.csv").string());

    RunConfig echo = cfg;
    echo.output_dir = dir.string();
    write_effective_config(echo, (dir / "effective_config.cfg").string());
    return res.all_passed() ? 0 : 1;
}

}  // namespace catsim
