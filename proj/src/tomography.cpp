#include "catsim/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace catsim {

namespace {

constexpr double two_over_pi = 2.0 / std::numbers::pi;

// <m|D(gamma)|n> = sqrt(n!/m!) gamma^{m-n} e^{-|gamma|^2/2} L_n^{m-n}(|gamma|^2)
// for m >= n, mirrored through D(gamma)^dag = D(-gamma) otherwise. Logs keep
// the prefactor away from overflow; the Laguerre value carries the sign.
class DisplacementElements {
  public:
    DisplacementElements(cplx gamma, int dim) : x_(std::norm(gamma)) {
        lgamma_.resize(dim + 1);
        for (int n = 0; n <= dim; ++n) lgamma_[n] = std::lgamma(double(n) + 1.0);
        if (x_ > 0) {
            log_mag_ = std::log(std::abs(gamma));
            unit_ = gamma / std::abs(gamma);
        }
    }

    cplx operator()(int m, int n) const {
        if (x_ == 0.0) return m == n ? 1.0 : 0.0;
        int lo = std::min(m, n), hi = std::max(m, n), k = hi - lo;
        double lag = std::assoc_laguerre(unsigned(lo), unsigned(k), x_);
        double mag = std::exp(0.5 * (lgamma_[lo] - lgamma_[hi]) + k * log_mag_ - 0.5 * x_);
        cplx phase = std::pow(m >= n ? unit_ : -std::conj(unit_), k);
        return mag * lag * phase;
    }

  private:
    double x_;
    double log_mag_ = 0.0;
    cplx unit_ = 1.0;
    std::vector<double> lgamma_;
};

cplx wigner_trace(const Mat& rho, cplx beta) {
    const int dim = int(rho.rows());
    DisplacementElements d(2.0 * beta, dim);
    cplx trace = 0.0;
    for (int m = 0; m < dim; ++m) {
        double parity = (m % 2 == 0) ? 1.0 : -1.0;
        for (int n = 0; n < dim; ++n) trace += rho(m, n) * d(n, m) * parity;
    }
    return two_over_pi * trace;
}

}  // namespace

int WignerGrid::points_per_axis() const {
    validate();
    return int(std::floor((max - min) / step + 1e-9)) + 1;
}

void WignerGrid::validate() const {
    if (!(max > min)) throw std::invalid_argument("Wigner grid needs max > min");
    if (!(step > 0)) throw std::invalid_argument("Wigner grid step must be positive");
}

double wigner_point(const Mat& cavity_rho, cplx beta) {
    if (cavity_rho.rows() != cavity_rho.cols())
        throw std::invalid_argument("density matrix must be square");
    cplx w = wigner_trace(cavity_rho, beta);
    if (std::abs(w.imag()) > 1e-9)
        throw std::runtime_error("Wigner value has imaginary part " +
                                 std::to_string(w.imag()) +
                                 "; input is not Hermitian");
    return w.real();
}

WignerMap wigner_map(const Mat& cavity_rho, const WignerGrid& grid) {
    grid.validate();
    const int pts = grid.points_per_axis();
    WignerMap map{grid, Eigen::MatrixXd(pts, pts)};
    for (int iy = 0; iy < pts; ++iy)
        for (int ix = 0; ix < pts; ++ix) {
            double w = wigner_point(cavity_rho, cplx(grid.coord(ix), grid.coord(iy)));
            if (std::abs(w) > two_over_pi + 1e-6)
                throw std::runtime_error("Wigner value " + std::to_string(w) +
                                         " exceeds the 2/pi bound");
            map.values(iy, ix) = w;
        }
    return map;
}

namespace {

std::ofstream open_csv(const std::string& path) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.precision(12);
    return out;
}

}  // namespace

void write_wigner_csv(const WignerMap& map, const std::string& path) {
    auto out = open_csv(path);
    out << "x,y,w\n";
    const int pts = map.grid.points_per_axis();
    for (int iy = 0; iy < pts; ++iy)
        for (int ix = 0; ix < pts; ++ix)
            out << map.grid.coord(ix) << ',' << map.grid.coord(iy) << ','
                << map.values(iy, ix) << '\n';
}

void write_density_csv(const Mat& rho, const std::string& path) {
    auto out = open_csv(path);
    out << "row,col,re,im\n";
    for (int r = 0; r < rho.rows(); ++r)
        for (int c = 0; c < rho.cols(); ++c)
            out << r << ',' << c << ',' << rho(r, c).real() << ',' << rho(r, c).imag()
                << '\n';
}

Mat reconstruct_density(const WignerMap& map, int fock_dim) {
    if (fock_dim < 2) throw std::invalid_argument("fock_dim must be at least 2");
    const int pts = map.grid.points_per_axis();
    const int samples = pts * pts;
    const int n_params = fock_dim * fock_dim;  // diag + (re, im) per off-diagonal pair
    if (samples < n_params)
        throw std::invalid_argument("Wigner grid underdetermines the density matrix");

    auto pair_index = [fock_dim](int m, int n) {
        return fock_dim + 2 * (m * fock_dim - m * (m + 1) / 2 + (n - m - 1));
    };

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(samples + 1, n_params);
    Eigen::VectorXd b(samples + 1);
    int row = 0;
    for (int iy = 0; iy < pts; ++iy)
        for (int ix = 0; ix < pts; ++ix, ++row) {
            cplx beta(map.grid.coord(ix), map.grid.coord(iy));
            DisplacementElements d(2.0 * beta, fock_dim);
            for (int m = 0; m < fock_dim; ++m) {
                double parity = (m % 2 == 0) ? 1.0 : -1.0;
                // W contribution of rho_mn is (2/pi) rho_mn (D P)_{nm};
                // fold (m,n) with (n,m) into the Hermitian parameter set
                a(row, m) += two_over_pi * (d(m, m) * parity).real();
                for (int n = m + 1; n < fock_dim; ++n) {
                    double parity_n = (n % 2 == 0) ? 1.0 : -1.0;
                    cplx coeff = d(n, m) * parity + std::conj(d(m, n) * parity_n);
                    a(row, pair_index(m, n)) += two_over_pi * coeff.real();
                    a(row, pair_index(m, n) + 1) -= two_over_pi * coeff.imag();
                }
            }
            b(row) = map.values(iy, ix);
        }

    const double trace_weight = 1e3;
    for (int n = 0; n < fock_dim; ++n) a(samples, n) = trace_weight;
    b(samples) = trace_weight;

    Eigen::VectorXd theta = a.householderQr().solve(b);

    Mat rho = Mat::Zero(fock_dim, fock_dim);
    for (int n = 0; n < fock_dim; ++n) rho(n, n) = theta(n);
    for (int m = 0; m < fock_dim; ++m)
        for (int n = m + 1; n < fock_dim; ++n) {
            cplx v(theta(pair_index(m, n)), theta(pair_index(m, n) + 1));
            rho(m, n) = v;
            rho(n, m) = std::conj(v);
        }

    // Project onto physical states. The spectrum is soft-thresholded by the
    // largest negative excursion before clipping: statistical noise in the
    // fit produces symmetric spurious eigenvalues, so the most negative one
    // calibrates how much spurious positive weight to remove. On consistent
    // data the excursion is zero and this reduces to plain clipping.
    Eigen::SelfAdjointEigenSolver<Mat> es(rho);
    const double noise_level = std::max(0.0, -es.eigenvalues().minCoeff());
    Eigen::VectorXd clipped =
        (es.eigenvalues().array() - noise_level).cwiseMax(0.0);
    double total = clipped.sum();
    if (total <= 0) {
        clipped = es.eigenvalues().cwiseMax(0.0);
        total = clipped.sum();
    }
    if (total <= 0) throw std::runtime_error("reconstructed state has no positive weight");
    rho = es.eigenvectors() * (clipped / total).asDiagonal() *
          es.eigenvectors().adjoint();
    return rho;
}

double state_fidelity(const Mat& rho, const Mat& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw std::invalid_argument("fidelity needs equal-dimension states");
    Eigen::SelfAdjointEigenSolver<Mat> es_rho(0.5 * (rho + rho.adjoint()));
    Eigen::VectorXd lam = es_rho.eigenvalues().cwiseMax(0.0);
    Mat sqrt_rho = es_rho.eigenvectors() * lam.cwiseSqrt().asDiagonal() *
                   es_rho.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> es_mid(sqrt_rho * sigma * sqrt_rho);
    double root_sum = es_mid.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::min(1.0, root_sum * root_sum);
}

double pure_state_fidelity(const Vec& psi, const Mat& rho) {
    if (psi.size() != rho.rows())
        throw std::invalid_argument("fidelity needs equal-dimension states");
    return (psi.adjoint() * rho * psi)(0, 0).real();
}

double visibility(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("visibility of an empty set");
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    double denom = *hi + *lo;
    if (denom <= 1e-12)
        throw std::invalid_argument("visibility undefined: max + min is not positive");
    return (*hi - *lo) / denom;
}

double contrast(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("contrast of an empty set");
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
}

}  // namespace catsim
