#include "semsig/dmc.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace semsig {

std::vector<std::string> DMCChannel::validate() const {
    std::vector<std::string> out;
    int n = alphabet_size();
    if (static_cast<int>(transition.size()) != n * n) {
        out.push_back("transition matrix must be 2^m x 2^m");
        return out;
    }
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            double p = prob(i, j);
            if (p < 0.0) out.push_back("negative transition probability");
            row += p;
        }
        if (std::fabs(row - 1.0) > 1e-12)
            out.push_back("row " + std::to_string(i) + " does not sum to 1");
    }
    return out;
}

DMCChannel DMCChannel::identity(int symbol_bits) {
    DMCChannel ch{symbol_bits, {}};
    int n = ch.alphabet_size();
    ch.transition.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) ch.transition[static_cast<std::size_t>(i) * n + i] = 1.0;
    return ch;
}

DMCChannel DMCChannel::bit_flip(int symbol_bits, double eps) {
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::invalid_argument("bit_flip: eps must lie in [0, 1]");
    DMCChannel ch{symbol_bits, {}};
    int n = ch.alphabet_size();
    ch.transition.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            int flips = std::popcount(static_cast<unsigned>(i ^ j));
            ch.transition[static_cast<std::size_t>(i) * n + j] =
                std::pow(eps, flips) * std::pow(1.0 - eps, symbol_bits - flips);
        }
    }
    return ch;
}

DMCChannel DMCChannel::uniform(int symbol_bits) {
    DMCChannel ch{symbol_bits, {}};
    int n = ch.alphabet_size();
    ch.transition.assign(static_cast<std::size_t>(n) * n, 1.0 / n);
    return ch;
}

double dmc_expected_cost(std::span<const double> theta, const BitString& codeword,
                         const TrellisSpec& spec, const DMCChannel& channel,
                         const CostMetric& metric) {
    if (channel.symbol_bits != spec.bits_per_sample)
        throw std::invalid_argument("dmc_expected_cost: channel/trellis symbol size mismatch");
    for (const auto& v : channel.validate())
        throw std::invalid_argument("dmc_expected_cost: " + v);
    const int m = spec.bits_per_sample;
    if (codeword.bit_count != theta.size() * static_cast<std::size_t>(m))
        throw std::invalid_argument("dmc_expected_cost: codeword length mismatch");

    const Trellis trellis(spec);
    const int n = channel.alphabet_size();
    BitReader r(codeword);

    double acc = 0.0;
    std::uint32_t state = 0;
    for (std::size_t b = 0; b < theta.size(); ++b) {
        std::uint32_t sent = static_cast<std::uint32_t>(r.read_bits(m));
        double sent_level = spec.reproduction_levels[trellis.output(state, sent)];
        for (int k = 0; k < n; ++k) {
            double p = channel.prob(static_cast<int>(sent), k);
            if (p == 0.0) continue;
            double recv_level = spec.reproduction_levels[trellis.output(state, k)];
            acc += p * metric.element_cost(sent_level, recv_level, theta.size());
        }
        state = trellis.next_state(state, sent);
    }
    return metric.finalize(acc, theta.size());
}

} // namespace semsig
