#include "gammalab/mu.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "optimize.hpp"

namespace gammalab {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

int parseCount(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::InvalidInput, "block structure: '" + std::string(text) + "' is not an integer");
    }
    return value;
}

void requireStructure(const Mat& a, const BlockStructure& st) {
    st.validate();
    if (a.rows() != st.n || a.cols() != st.n) {
        throw Error(ErrorKind::ShapeMismatch, "matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                                  ", structure " + st.str() + " needs " + std::to_string(st.n) + "x" +
                                                  std::to_string(st.n));
    }
    detail::requireFinite(a, "mu");
}

Complex cbrtPrincipal(Complex z) {
    if (z == Complex(0)) return 0;
    return std::polar(std::cbrt(std::abs(z)), std::arg(z) / 3);
}

/// Largest root modulus of x^3 - c1 x^2 + c2 x - c3 (Cardano, Newton polished).
double cubicRootRadius(Complex c1, Complex c2, Complex c3) {
    const Complex b = -c1, c = c2, d = -c3;
    const Complex p = c - b * b / 3.0;
    const Complex q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const Complex disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    Complex u1 = -q / 2.0 + disc, u2 = -q / 2.0 - disc;
    Complex u = cbrtPrincipal(std::abs(u1) >= std::abs(u2) ? u1 : u2);
    const Complex omega = std::polar(1.0, kTwoPi / 3);
    double best = 0;
    for (int k = 0; k < 3; ++k) {
        Complex uk = u * std::pow(omega, k);
        Complex vk = (uk == Complex(0)) ? Complex(0) : -p / (3.0 * uk);
        Complex x = uk + vk - b / 3.0;
        for (int it = 0; it < 2; ++it) {
            Complex f = ((x + b) * x + c) * x + d;
            Complex fp = (3.0 * x + 2.0 * b) * x + c;
            if (std::abs(fp) < 1e-300) break;
            Complex step = f / fp;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            x -= step;
        }
        best = std::max(best, std::abs(x));
    }
    return best;
}

struct DominantEigen {
    double radius = 0;
    Complex value = 0;
};

DominantEigen dominantEigen(const Mat& m) {
    if (m.rows() == 0) return {};
    Eigen::ComplexEigenSolver<Mat> es(m, false);
    Eigen::Index k = 0;
    es.eigenvalues().cwiseAbs().maxCoeff(&k);
    return {std::abs(es.eigenvalues()(k)), es.eigenvalues()(k)};
}

Vec phasesFromAngles(const Eigen::VectorXd& angles) {
    Vec z(angles.size() + 1);
    z(0) = 1;
    for (Eigen::Index k = 0; k < angles.size(); ++k) z(k + 1) = std::polar(1.0, angles(k));
    return z;
}

// Hermitian log-scaling parameterisation of the commutant: block j carries a
// Hermitian r_j x r_j matrix; the (0,0) entry of block 0 is pinned to 0.
int scalingParameterCount(const BlockStructure& st) {
    int count = -1;
    for (int r : st.blockSizes) count += r * r;
    return count;
}

std::vector<Mat> scalingBlocksFromParams(const BlockStructure& st, const Eigen::VectorXd& x, double sign) {
    std::vector<Mat> blocks;
    int pos = 0;
    for (int j = 0; j < st.blocks(); ++j) {
        const int r = st.blockSizes[j];
        Mat h = Mat::Zero(r, r);
        for (int i = 0; i < r; ++i) {
            if (j == 0 && i == 0) continue;
            h(i, i) = x(pos++);
        }
        for (int i = 0; i < r; ++i) {
            for (int k = i + 1; k < r; ++k) {
                h(i, k) = Complex(x(pos), x(pos + 1));
                h(k, i) = std::conj(h(i, k));
                pos += 2;
            }
        }
        if (r == 1) {
            blocks.push_back(Mat::Constant(1, 1, std::exp(sign * h(0, 0).real())));
        } else {
            Eigen::SelfAdjointEigenSolver<Mat> es(h);
            RVec e = (sign * es.eigenvalues().array()).exp().matrix();
            blocks.push_back(es.eigenvectors() * e.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint());
        }
    }
    return blocks;
}

double scaledNorm(const Mat& a, const BlockStructure& st, const Eigen::VectorXd& x) {
    const std::vector<Mat> d = scalingBlocksFromParams(st, x, 1);
    const std::vector<Mat> dinv = scalingBlocksFromParams(st, x, -1);
    Mat scaled = a;
    for (int j = 0; j < st.blocks(); ++j) {
        const int o = st.offset(j), r = st.blockSizes[j];
        scaled.middleRows(o, r) = d[j] * scaled.middleRows(o, r);
        scaled.middleCols(o, r) = scaled.middleCols(o, r) * dinv[j];
    }
    return operatorNorm(scaled);
}

} // namespace

BlockStructure BlockStructure::parse(std::string_view text) {
    auto parts = split(text, ';');
    if (parts.size() != 3) throw Error(ErrorKind::InvalidInput, "block structure must look like n;s;r1,...,rs");
    BlockStructure st;
    st.n = parseCount(parts[0]);
    const int s = parseCount(parts[1]);
    for (auto r : split(parts[2], ',')) st.blockSizes.push_back(parseCount(r));
    if (static_cast<int>(st.blockSizes.size()) != s) {
        throw Error(ErrorKind::InvalidInput, "block structure lists " + std::to_string(st.blockSizes.size()) +
                                                 " sizes but declares s = " + std::to_string(s));
    }
    st.validate();
    return st;
}

void BlockStructure::validate() const {
    if (blockSizes.empty()) throw Error(ErrorKind::InvalidInput, "block structure needs at least one block");
    int total = 0;
    for (int r : blockSizes) {
        if (r < 1) throw Error(ErrorKind::InvalidInput, "block sizes must be positive");
        total += r;
    }
    if (total != n) {
        throw Error(ErrorKind::InvalidInput, "block sizes sum to " + std::to_string(total) + ", expected " + std::to_string(n));
    }
}

int BlockStructure::offset(int block) const {
    int o = 0;
    for (int j = 0; j < block; ++j) o += blockSizes[j];
    return o;
}

Mat BlockStructure::expand(const Vec& z) const {
    Mat x = Mat::Zero(n, n);
    for (int j = 0, o = 0; j < blocks(); o += blockSizes[j], ++j) {
        for (int i = 0; i < blockSizes[j]; ++i) x(o + i, o + i) = z(j);
    }
    return x;
}

std::string BlockStructure::str() const {
    std::ostringstream os;
    os << n << ';' << blocks() << ';';
    for (int j = 0; j < blocks(); ++j) os << (j ? "," : "") << blockSizes[j];
    return os.str();
}

MuLowerResult muLower(const Mat& a, const BlockStructure& st, int phaseGrid) {
    requireStructure(a, st);
    if (phaseGrid < 1) throw Error(ErrorKind::InvalidInput, "phase grid must be at least 1");
    const int s = st.blocks();
    const int free = s - 1;
    MuLowerResult out;
    out.phaseWitness = Vec::Ones(s);
    if (a.isZero(0)) return out;

    // Grid sizes per free dimension; the total is capped so large s stays tractable.
    std::size_t total = 1;
    for (int k = 0; k < free; ++k) total *= static_cast<std::size_t>(phaseGrid);
    if (total > (std::size_t(1) << 24)) throw Error(ErrorKind::InvalidInput, "phase grid too large for this structure");
    const double h = kTwoPi / phaseGrid;

    auto anglesOf = [&](std::size_t idx) {
        Eigen::VectorXd ang(free);
        for (int k = 0; k < free; ++k) {
            ang(k) = static_cast<double>(idx % phaseGrid) * h;
            idx /= phaseGrid;
        }
        return ang;
    };

    const bool threeScalars = st.n == 3 && s == 3;
    std::array<Complex, 7> x{};
    if (threeScalars) {
        const GammaPoint p = symmetrize7(a);
        for (int k = 0; k < 7; ++k) x[k] = p.coords(k);
    }
    auto evalRadius = [&](const Eigen::VectorXd& ang) -> double {
        if (threeScalars) {
            const Complex e2 = std::polar(1.0, ang(0)), e3 = std::polar(1.0, ang(1));
            return cubicRootRadius(x[0] + x[1] * e2 + x[3] * e3, x[2] * e2 + x[4] * e3 + x[5] * e2 * e3, x[6] * e2 * e3);
        }
        return dominantEigen(Mat(a * st.expand(phasesFromAngles(ang)))).radius;
    };

    std::vector<double> grid(total);
    auto [best, bestIdx] = detail::parallelArgMax<double>(total, [&](std::size_t idx) {
        grid[idx] = evalRadius(anglesOf(idx));
        return grid[idx];
    });
    out.gridValue = best;

    // local maxima on the periodic grid, best first
    std::vector<std::pair<double, std::size_t>> candidates;
    for (std::size_t idx = 0; idx < total; ++idx) {
        bool isMax = true;
        std::size_t stride = 1;
        for (int k = 0; k < free && isMax; ++k, stride *= phaseGrid) {
            const std::size_t digit = (idx / stride) % phaseGrid;
            const std::size_t up = idx - digit * stride + ((digit + 1) % phaseGrid) * stride;
            const std::size_t down = idx - digit * stride + ((digit + phaseGrid - 1) % phaseGrid) * stride;
            isMax = grid[idx] >= grid[up] && grid[idx] >= grid[down];
        }
        if (isMax) candidates.emplace_back(grid[idx], idx);
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& l, const auto& r) { return l.first > r.first || (l.first == r.first && l.second < r.second); });
    if (candidates.size() > 8) candidates.resize(8);
    if (candidates.empty()) candidates.emplace_back(best, bestIdx);

    Eigen::VectorXd bestAngles = anglesOf(bestIdx);
    double refined = dominantEigen(Mat(a * st.expand(phasesFromAngles(bestAngles)))).radius;
    if (free > 0) {
        for (const auto& [value, idx] : candidates) {
            auto negRadius = [&](const Eigen::VectorXd& ang) {
                return -dominantEigen(Mat(a * st.expand(phasesFromAngles(ang)))).radius;
            };
            auto res = detail::nelderMead(negRadius, anglesOf(idx), h / 2, 1e-15, 400 * free);
            if (-res.value > refined) {
                refined = -res.value;
                bestAngles = res.x;
            }
        }
    }
    Vec phases = phasesFromAngles(bestAngles);
    DominantEigen dom = dominantEigen(Mat(a * st.expand(phases)));
    out.value = std::max(out.gridValue, dom.radius);
    if (dom.radius > 0) {
        // rotate so that A diag(phi) has the positive eigenvalue rho
        phases *= std::polar(1.0, -std::arg(dom.value));
    }
    out.phaseWitness = phases;
    return out;
}

MuUpperResult muUpper(const Mat& a, const BlockStructure& st, int iters) {
    requireStructure(a, st);
    if (iters < 1) throw Error(ErrorKind::InvalidInput, "iteration count must be at least 1");
    const int m = scalingParameterCount(st);
    MuUpperResult out;
    const double normA = operatorNorm(a);
    if (normA == 0) {
        out.scalingBlocks = scalingBlocksFromParams(st, Eigen::VectorXd::Zero(m), 1);
        return out;
    }
    auto objective = [&](const Eigen::VectorXd& x) {
        if (x.cwiseAbs().maxCoeff() > 40) return std::numeric_limits<double>::infinity();
        return scaledNorm(a, st, x) / normA;
    };

    Eigen::VectorXd bestX = Eigen::VectorXd::Zero(m);
    double bestF = objective(bestX);
    if (m > 0) {
        std::mt19937_64 rng(0xD1B54A32D192ED03ull);
        std::normal_distribution<double> gauss(0, 1);
        const int restarts = 1;
        for (int r = 0; r < restarts; ++r) {
            Eigen::VectorXd start = bestX;
            if (r > 0) {
                for (int k = 0; k < m; ++k) start(k) += 0.5 * gauss(rng);
            }
            double step = 0.5;
            auto res = detail::nelderMead(objective, start, step, 1e-12, 200 * (m + 1));
            // restart the simplex around the incumbent with shrinking size; this
            // escapes the false convergence NM shows on kinks of sigma_max
            int stale = 0;
            for (int round = 0; round < iters && stale < 4; ++round) {
                step *= 0.5;
                auto next = detail::nelderMead(objective, res.x, step, 1e-14, 100 * (m + 1));
                if (next.value < res.value * (1 - 1e-12)) {
                    res = next;
                    step = std::min(0.5, step * 4);
                    stale = 0;
                } else {
                    ++stale;
                }
            }
            if (res.value < bestF) {
                bestF = res.value;
                bestX = res.x;
            }
        }
    }
    out.value = scaledNorm(a, st, bestX);
    out.scalingBlocks = scalingBlocksFromParams(st, bestX, 1);
    return out;
}

MuBounds muBounds(const Mat& a, const BlockStructure& st, int phaseGrid, int iters) {
    MuLowerResult lo = muLower(a, st, phaseGrid);
    MuUpperResult up = muUpper(a, st, iters);
    return {lo.value, std::max(up.value, lo.value), lo.phaseWitness, up.scalingBlocks};
}

std::string_view to_string(GammaVariant v) {
    switch (v) {
    case GammaVariant::E3311: return "3311";
    case GammaVariant::E3212: return "3212";
    case GammaVariant::E2211: return "2211";
    }
    return "?";
}

GammaVariant parseVariant(std::string_view text) {
    if (text == "3311") return GammaVariant::E3311;
    if (text == "3212") return GammaVariant::E3212;
    if (text == "2211") return GammaVariant::E2211;
    throw Error(ErrorKind::InvalidInput, "unknown variant '" + std::string(text) + "', expected 3311, 3212 or 2211");
}

namespace {

void requireShape(const Mat& a, int n, const char* what) {
    if (a.rows() != n || a.cols() != n) {
        throw Error(ErrorKind::ShapeMismatch, std::string(what) + " needs a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    }
}

Complex minor2(const Mat& a, int i, int j) { return a(i, i) * a(j, j) - a(i, j) * a(j, i); }

Complex det3(const Mat& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

} // namespace

GammaPoint symmetrize7(const Mat& a) {
    requireShape(a, 3, "symmetrize7");
    GammaPoint p{GammaVariant::E3311, Vec(7), a};
    p.coords << a(0, 0), a(1, 1), minor2(a, 0, 1), a(2, 2), minor2(a, 0, 2), minor2(a, 1, 2), det3(a);
    return p;
}

GammaPoint symmetrize5(const Mat& a) {
    requireShape(a, 3, "symmetrize5");
    GammaPoint p{GammaVariant::E3212, Vec(5), a};
    p.coords << a(0, 0), minor2(a, 0, 1) + minor2(a, 0, 2), det3(a), a(1, 1) + a(2, 2), minor2(a, 1, 2);
    return p;
}

GammaPoint symmetrize3(const Mat& a) {
    requireShape(a, 2, "symmetrize3");
    GammaPoint p{GammaVariant::E2211, Vec(3), a};
    p.coords << a(0, 0), a(1, 1), minor2(a, 0, 1);
    return p;
}

GammaPoint symmetrize(GammaVariant v, const Mat& a) {
    switch (v) {
    case GammaVariant::E3311: return symmetrize7(a);
    case GammaVariant::E3212: return symmetrize5(a);
    case GammaVariant::E2211: return symmetrize3(a);
    }
    throw Error(ErrorKind::InvalidInput, "unknown variant");
}

namespace {

SetCheck boundaryCheck(const GammaPoint& p, double tol, std::vector<NamedResidual> residuals, const BlockStructure& st) {
    SetCheck out;
    out.residuals = std::move(residuals);
    if (p.witness) {
        const double upper = muUpper(*p.witness, st).value;
        out.residuals.push_back({"mu(witness) <= 1", std::max(0.0, upper - 1)});
        const Vec again = symmetrize(p.variant, *p.witness).coords;
        out.residuals.push_back({"coords = symmetrize(witness)", (again - p.coords).cwiseAbs().maxCoeff()});
    }
    out.pass = true;
    for (const auto& r : out.residuals) out.pass = out.pass && r.residual <= tol;
    return out;
}

} // namespace

SetCheck kSetCheck(const GammaPoint& p, double tol) {
    if (p.variant != GammaVariant::E3311 || p.coords.size() != 7) {
        return {false, {{"coordinate count 7", std::numeric_limits<double>::infinity()}}};
    }
    const Vec& x = p.coords;
    return boundaryCheck(p, tol,
                         {{"|x7| = 1", std::abs(std::abs(x(6)) - 1)},
                          {"x1 = conj(x6) x7", std::abs(x(0) - std::conj(x(5)) * x(6))},
                          {"x3 = conj(x4) x7", std::abs(x(2) - std::conj(x(3)) * x(6))},
                          {"x5 = conj(x2) x7", std::abs(x(4) - std::conj(x(1)) * x(6))}},
                         BlockStructure::E3311());
}

SetCheck k1SetCheck(const GammaPoint& p, double tol) {
    if (p.variant != GammaVariant::E3212 || p.coords.size() != 5) {
        return {false, {{"coordinate count 5", std::numeric_limits<double>::infinity()}}};
    }
    const Vec& x = p.coords;
    return boundaryCheck(p, tol,
                         {{"|x3| = 1", std::abs(std::abs(x(2)) - 1)},
                          {"x1 = conj(y2) x3", std::abs(x(0) - std::conj(x(4)) * x(2))},
                          {"x2 = conj(y1) x3", std::abs(x(1) - std::conj(x(3)) * x(2))}},
                         BlockStructure::E3212());
}

} // namespace gammalab
