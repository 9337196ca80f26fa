#include "semsig/normal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace semsig {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kInvSqrt2 = 0.7071067811865475244;

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kNodes8[8] = {
    -0.9602898564975362316, -0.7966664774136267396, -0.5255324099163289858,
    -0.1834346424956498049, 0.1834346424956498049,  0.5255324099163289858,
    0.7966664774136267396,  0.9602898564975362316};
constexpr double kWeights8[8] = {
    0.1012285362903762592, 0.2223810344533744705, 0.3137066458778872873,
    0.3626837833783619830, 0.3626837833783619830, 0.3137066458778872873,
    0.2223810344533744705, 0.1012285362903762592};

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kNodes16[16] = {
    -0.9894009349916499326, -0.9445750230732325761, -0.8656312023878317439,
    -0.7554044083550030339, -0.6178762444026437484, -0.4580167776572273863,
    -0.2816035507792589132, -0.0950125098376374402, 0.0950125098376374402,
    0.2816035507792589132,  0.4580167776572273863,  0.6178762444026437484,
    0.7554044083550030339,  0.8656312023878317439,  0.9445750230732325761,
    0.9894009349916499326};
constexpr double kWeights16[16] = {
    0.0271524594117540949, 0.0622535239386478929, 0.0951585116824927848,
    0.1246289712555338720, 0.1495959888165767320, 0.1691565193950025382,
    0.1826034150449235888, 0.1894506104550684963, 0.1894506104550684963,
    0.1826034150449235888, 0.1691565193950025382, 0.1495959888165767320,
    0.1246289712555338720, 0.0951585116824927848, 0.0622535239386478929,
    0.0271524594117540949};

struct Panel {
    double x0, x1, y0, y1;
};

} // namespace

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double bivariate_rectangle(double mu1, double sd1, double lo1, double hi1,
                           double mu2, double sd2, double lo2, double hi2,
                           double rho, double tol) {
    if (!(sd1 > 0.0) || !(sd2 > 0.0))
        throw std::invalid_argument("bivariate_rectangle: standard deviations must be positive");
    if (!(std::fabs(rho) < 1.0))
        throw std::invalid_argument("bivariate_rectangle: |rho| must be < 1");
    if (hi1 <= lo1 || hi2 <= lo2) return 0.0;

    // Standardize; clip to +-9 sigma where the residual mass is < 1e-18.
    double a1 = std::max((lo1 - mu1) / sd1, -9.0), b1 = std::min((hi1 - mu1) / sd1, 9.0);
    double a2 = std::max((lo2 - mu2) / sd2, -9.0), b2 = std::min((hi2 - mu2) / sd2, 9.0);
    if (b1 <= a1 || b2 <= a2) return 0.0;

    const double det = 1.0 - rho * rho;
    const double norm = 1.0 / (2.0 * M_PI * std::sqrt(det));
    auto density = [&](double x, double y) {
        return norm * std::exp(-0.5 * (x * x - 2.0 * rho * x * y + y * y) / det);
    };

    auto tensor = [&](const Panel& p, const double* nodes, const double* weights, int n) {
        double cx = 0.5 * (p.x0 + p.x1), hx = 0.5 * (p.x1 - p.x0);
        double cy = 0.5 * (p.y0 + p.y1), hy = 0.5 * (p.y1 - p.y0);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            double x = cx + hx * nodes[i];
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += weights[j] * density(x, cy + hy * nodes[j]);
            sum += weights[i] * row;
        }
        return sum * hx * hy;
    };

    const double total_area = (b1 - a1) * (b2 - a2);
    double total = 0.0;
    std::vector<std::pair<Panel, int>> stack{{Panel{a1, b1, a2, b2}, 0}};
    constexpr int kMaxDepth = 26;
    while (!stack.empty()) {
        auto [p, depth] = stack.back();
        stack.pop_back();
        double coarse = tensor(p, kNodes8, kWeights8, 8);
        double fine = tensor(p, kNodes16, kWeights16, 16);
        double err = std::fabs(fine - coarse);
        double budget = tol * ((p.x1 - p.x0) * (p.y1 - p.y0)) / total_area;
        if (err <= std::max(budget, 1e-17)) {
            total += fine;
            continue;
        }
        if (depth >= kMaxDepth)
            throw std::runtime_error("bivariate_rectangle: quadrature did not converge");
        double mx = 0.5 * (p.x0 + p.x1), my = 0.5 * (p.y0 + p.y1);
        stack.push_back({Panel{p.x0, mx, p.y0, my}, depth + 1});
        stack.push_back({Panel{mx, p.x1, p.y0, my}, depth + 1});
        stack.push_back({Panel{p.x0, mx, my, p.y1}, depth + 1});
        stack.push_back({Panel{mx, p.x1, my, p.y1}, depth + 1});
    }
    return std::clamp(total, 0.0, 1.0);
}

} // namespace semsig
