#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace semsig {

// Distortion metrics for quantization. All variants except Lp are additive
// per element, which is what the Viterbi search requires; Lp accumulates
// |e|^p per element and applies the root and 1/d scaling afterwards (a
// monotone transform, so path selection is unaffected).
struct CostMetric {
    enum class Kind { mse, tvd, log_cosh, quantile, lp };

    Kind kind = Kind::mse;
    double param = 0.0; // gamma for quantile, p for lp

    static CostMetric mse() { return {Kind::mse, 0.0}; }
    static CostMetric tvd() { return {Kind::tvd, 0.0}; }
    static CostMetric log_cosh() { return {Kind::log_cosh, 0.0}; }
    static CostMetric quantile(double gamma) {
        if (!(gamma >= 0.0 && gamma <= 1.0))
            throw std::invalid_argument("quantile parameter must lie in [0, 1]");
        return {Kind::quantile, gamma};
    }
    static CostMetric lp(double p) {
        if (!(p >= 1.0)) throw std::invalid_argument("lp parameter must be >= 1");
        return {Kind::lp, p};
    }

    // "mse" | "tvd" | "logcosh" | "quantile:G" | "lp:P"
    static std::optional<CostMetric> parse(std::string_view s) {
        if (s == "mse") return mse();
        if (s == "tvd") return tvd();
        if (s == "logcosh") return log_cosh();
        auto value_after = [&](std::string_view prefix) -> std::optional<double> {
            if (s.substr(0, prefix.size()) != prefix) return std::nullopt;
            try {
                return std::stod(std::string(s.substr(prefix.size())));
            } catch (...) {
                return std::nullopt;
            }
        };
        if (auto g = value_after("quantile:")) {
            if (*g >= 0.0 && *g <= 1.0) return quantile(*g);
            return std::nullopt;
        }
        if (auto p = value_after("lp:")) {
            if (*p >= 1.0) return lp(*p);
            return std::nullopt;
        }
        return std::nullopt;
    }

    std::string name() const {
        switch (kind) {
            case Kind::mse: return "mse";
            case Kind::tvd: return "tvd";
            case Kind::log_cosh: return "logcosh";
            case Kind::quantile: return "quantile:" + std::to_string(param);
            case Kind::lp: return "lp:" + std::to_string(param);
        }
        return "";
    }

    // Additive per-element term; `dim` carries the 1/d normalization where the
    // metric has one.
    double element_cost(double target, double repro, std::size_t dim) const {
        double e = repro - target;
        switch (kind) {
            case Kind::mse: return e * e / static_cast<double>(dim);
            case Kind::tvd: return 0.5 * std::fabs(e);
            case Kind::log_cosh: return std::log(std::cosh(e)) / static_cast<double>(dim);
            case Kind::quantile:
                return std::max(param * e, (param - 1.0) * e) / static_cast<double>(dim);
            case Kind::lp: return std::pow(std::fabs(e), param);
        }
        return 0.0;
    }

    double finalize(double accumulated, std::size_t dim) const {
        if (kind == Kind::lp) return std::pow(accumulated, 1.0 / param) / static_cast<double>(dim);
        return accumulated;
    }
};

inline double cost_eval(const CostMetric& metric, std::span<const double> theta,
                        std::span<const double> theta_hat) {
    if (theta.size() != theta_hat.size())
        throw std::invalid_argument("cost_eval: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i)
        acc += metric.element_cost(theta[i], theta_hat[i], theta.size());
    return metric.finalize(acc, theta.size());
}

} // namespace semsig
