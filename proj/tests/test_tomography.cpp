#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "catsim/tomography.hpp"

using namespace catsim;

namespace {

constexpr double two_over_pi = 2.0 / std::numbers::pi;

double gaussian_wigner(cplx beta, cplx center) {
    return two_over_pi * std::exp(-2.0 * std::norm(beta - center));
}

Vec cat_vector(double theta, cplx alpha, const HilbertConfig& cfg, double tail_tol) {
    Vec psi = std::cos(theta) * fock_state(0, cfg) +
              std::sin(theta) * coherent_state(alpha, cfg, tail_tol);
    return psi / psi.norm();
}

}  // namespace

TEST_CASE("Wigner function of reference states") {
    HilbertConfig cfg{30};

    Mat vac = to_density(fock_state(0, cfg));
    CHECK(wigner_point(vac, 0.0) == doctest::Approx(two_over_pi).epsilon(1e-12));
    for (cplx beta : {cplx(1.0, 0.0), cplx(0.3, -1.2), cplx(-2.5, 2.5)})
        CHECK(wigner_point(vac, beta) ==
              doctest::Approx(gaussian_wigner(beta, 0.0)).epsilon(1e-9));

    // single photon: (2/pi) e^{-2|b|^2} (4|b|^2 - 1), negative at the origin
    Mat one = to_density(fock_state(1, cfg));
    CHECK(wigner_point(one, 0.0) == doctest::Approx(-two_over_pi).epsilon(1e-12));
    cplx beta(0.4, 0.3);
    CHECK(wigner_point(one, beta) ==
          doctest::Approx(gaussian_wigner(beta, 0.0) * (4 * std::norm(beta) - 1))
              .epsilon(1e-9));

    // coherent state: displaced vacuum Gaussian
    cplx center(1.0, -0.7);
    Mat coh = to_density(coherent_state(center, cfg, 1e-9));
    for (cplx b : {center, cplx(0.0, 0.0), cplx(2.0, 0.5)})
        CHECK(wigner_point(coh, b) == doctest::Approx(gaussian_wigner(b, center))
                                          .epsilon(1e-7).scale(1.0));
}

TEST_CASE("cavity parity at the origin distinguishes even and odd cats") {
    HilbertConfig cfg{30};
    Vec even = coherent_state(2.0, cfg, 1e-9) + coherent_state(-2.0, cfg, 1e-9);
    even /= even.norm();
    Vec odd = coherent_state(2.0, cfg, 1e-9) - coherent_state(-2.0, cfg, 1e-9);
    odd /= odd.norm();
    CHECK(wigner_point(to_density(even), 0.0) ==
          doctest::Approx(two_over_pi).epsilon(1e-10));
    CHECK(wigner_point(to_density(odd), 0.0) ==
          doctest::Approx(-two_over_pi).epsilon(1e-10));
}

TEST_CASE("non-Hermitian input is rejected") {
    HilbertConfig cfg{6};
    Mat rho = to_density(fock_state(0, cfg));
    rho(0, 1) = cplx(0.0, 0.3);  // no conjugate partner
    CHECK_THROWS_AS(wigner_point(rho, cplx(0.5, 0.0)), std::runtime_error);
}

TEST_CASE("Wigner map sampling and bounds") {
    WignerGrid def{};
    CHECK(def.points_per_axis() == 61);
    CHECK(def.coord(0) == doctest::Approx(-4.5));
    CHECK(def.coord(60) == doctest::Approx(4.5));

    WignerGrid bad{1.0, -1.0, 0.1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    HilbertConfig cfg{24};
    cplx center(1.0, 0.5);
    Mat rho = to_density(coherent_state(center, cfg, 1e-8));
    WignerGrid grid{-3.0, 3.0, 0.25};
    WignerMap map = wigner_map(rho, grid);
    CHECK(map.values(14, 16) == doctest::Approx(two_over_pi).epsilon(1e-6));
    CHECK(map.max_value() <= two_over_pi + 1e-6);
    CHECK(map.min_value() >= -1e-6);
}

TEST_CASE("round trip: sample a cat state and reconstruct it") {
    HilbertConfig cfg{16};
    Vec cat = cat_vector(std::numbers::pi / 4, 2.0, cfg, 1e-4);
    Mat rho = to_density(cat);

    WignerMap map = wigner_map(rho, {});
    CHECK(map.min_value() < -0.1);  // interference fringes go negative

    Mat rec = reconstruct_density(map, cfg.fock_dim);
    validate_density(rec, 1e-8, 1e-8);
    CHECK(state_fidelity(rec, rho) > 0.9999);
    CHECK(pure_state_fidelity(cat, rec) > 0.9999);
}

TEST_CASE("reconstruction recovers mixed states as well") {
    HilbertConfig cfg{12};
    Vec small_cat = cat_vector(std::numbers::pi / 4, 1.5, cfg, 1e-5);
    Mat thermal = Mat::Zero(cfg.fock_dim, cfg.fock_dim);
    double p = 1.0, total = 0.0;
    for (int n = 0; n < cfg.fock_dim; ++n) {
        thermal(n, n) = p;
        total += p;
        p /= 3.0;
    }
    thermal /= total;
    Mat rho = 0.5 * to_density(small_cat) + 0.5 * thermal;

    Mat rec = reconstruct_density(wigner_map(rho, {}), cfg.fock_dim);
    CHECK(state_fidelity(rec, rho) > 0.999);

    WignerGrid sparse{-1.0, 1.0, 0.5};  // 25 samples cannot fix 144 parameters
    CHECK_THROWS_AS(reconstruct_density(wigner_map(rho, sparse), cfg.fock_dim),
                    std::invalid_argument);
}

TEST_CASE("Uhlmann fidelity") {
    HilbertConfig cfg{20};
    Mat vac = to_density(fock_state(0, cfg));
    Mat coh = to_density(coherent_state(1.0, cfg, 1e-9));
    Mat one = to_density(fock_state(1, cfg));

    CHECK(state_fidelity(vac, vac) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(state_fidelity(vac, one) == doctest::Approx(0.0).epsilon(1e-12));

    // |<0|alpha>|^2 = e^{-1}, through the general route and the pure shortcut
    CHECK(state_fidelity(vac, coh) == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
    CHECK(pure_state_fidelity(fock_state(0, cfg), coh) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-9));

    // symmetry on mixed arguments
    Mat mix_a = 0.7 * vac + 0.3 * one;
    Mat mix_b = 0.2 * vac + 0.8 * coh;
    CHECK(state_fidelity(mix_a, mix_b) ==
          doctest::Approx(state_fidelity(mix_b, mix_a)).epsilon(1e-7));

    CHECK_THROWS_AS(state_fidelity(vac, Mat::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("fringe visibility and contrast") {
    std::vector<double> fringe{0.1, 0.35, 0.62, 0.9, 0.44};
    CHECK(visibility(fringe) == doctest::Approx(0.8 / 1.0).epsilon(1e-12));
    CHECK(contrast(fringe) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK_THROWS_AS(visibility({}), std::invalid_argument);
    CHECK_THROWS_AS(visibility({-0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("CSV export") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "catsim_tomo_test";
    fs::remove_all(dir);

    HilbertConfig cfg{8};
    Mat rho = to_density(fock_state(0, cfg));
    WignerMap map = wigner_map(rho, {-1.0, 1.0, 1.0});
    write_wigner_csv(map, (dir / "w.csv").string());
    write_density_csv(rho, (dir / "rho.csv").string());

    std::ifstream win(dir / "w.csv");
    std::string line;
    std::getline(win, line);
    CHECK(line == "x,y,w");
    std::getline(win, line);
    CHECK(line.find("-1,-1,") == 0);

    std::ifstream din(dir / "rho.csv");
    std::getline(din, line);
    CHECK(line == "row,col,re,im");
    std::getline(din, line);
    CHECK(line == "0,0,1,0");

    fs::remove_all(dir);
}
