#include "semsig/tcq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace semsig {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_domain(std::span<const double> theta) {
    if (theta.empty()) throw std::invalid_argument("tcq: empty vector");
    for (double v : theta)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("tcq: entries must lie in [0, 1]");
}

} // namespace

BitString tcq_encode(std::span<const double> theta, const TrellisSpec& spec,
                     const CostMetric& metric) {
    check_domain(theta);
    const Trellis trellis(spec);
    const int states = trellis.state_count();
    const int inputs = trellis.input_count();
    const int m = spec.bits_per_sample;
    const std::size_t dim = theta.size();

    std::vector<double> cost(states, kInf), next_cost(states);
    // Lexicographic rank of each state's surviving input prefix; ties in path
    // cost resolve to the smaller rank, making the final choice the
    // lexicographically smallest minimal-cost input sequence.
    std::vector<std::uint32_t> rank(states, 0), next_rank(states);
    std::vector<std::uint64_t> chosen_key(states);
    // traceback: predecessor state and input per (stage, state)
    std::vector<std::uint32_t> from(dim * states), inbits(dim * states);

    cost[0] = 0.0;
    std::vector<double> branch_cost(spec.output_count());
    std::vector<std::uint32_t> order(states);

    for (std::size_t stage = 0; stage < dim; ++stage) {
        for (int o = 0; o < spec.output_count(); ++o)
            branch_cost[o] = metric.element_cost(theta[stage], spec.reproduction_levels[o], dim);

        std::fill(next_cost.begin(), next_cost.end(), kInf);
        for (int s = 0; s < states; ++s) {
            if (cost[s] == kInf) continue;
            std::uint64_t key_base = static_cast<std::uint64_t>(rank[s]) << m;
            for (int in = 0; in < inputs; ++in) {
                std::uint32_t ns = trellis.next_state(s, in);
                double c = cost[s] + branch_cost[trellis.output(s, in)];
                std::uint64_t key = key_base | static_cast<std::uint32_t>(in);
                if (c < next_cost[ns] || (c == next_cost[ns] && key < chosen_key[ns])) {
                    next_cost[ns] = c;
                    chosen_key[ns] = key;
                    from[stage * states + ns] = static_cast<std::uint32_t>(s);
                    inbits[stage * states + ns] = static_cast<std::uint32_t>(in);
                }
            }
        }
        cost.swap(next_cost);

        // re-rank states by their surviving prefixes ((prev rank, input) keys)
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            bool ra = cost[a] != kInf, rb = cost[b] != kInf;
            if (ra != rb) return ra;
            if (!ra) return a < b;
            return chosen_key[a] != chosen_key[b] ? chosen_key[a] < chosen_key[b] : a < b;
        });
        for (int i = 0; i < states; ++i) next_rank[order[i]] = static_cast<std::uint32_t>(i);
        rank.swap(next_rank);
    }

    int best = -1;
    for (int s = 0; s < states; ++s) {
        if (cost[s] == kInf) continue;
        if (best < 0 || cost[s] < cost[best] ||
            (cost[s] == cost[best] && rank[s] < rank[best]))
            best = s;
    }

    std::vector<std::uint32_t> path(dim);
    for (std::size_t stage = dim; stage-- > 0;) {
        path[stage] = inbits[stage * states + best];
        best = static_cast<int>(from[stage * states + best]);
    }

    BitWriter w;
    for (std::uint32_t in : path) w.write_bits(in, m);
    return w.take();
}

std::vector<double> tcq_decode(BitReader& reader, std::size_t dim, const TrellisSpec& spec) {
    const Trellis trellis(spec);
    const int m = spec.bits_per_sample;
    std::vector<double> out(dim);
    std::uint32_t state = 0;
    for (std::size_t i = 0; i < dim; ++i) {
        std::uint32_t in = static_cast<std::uint32_t>(reader.read_bits(m));
        out[i] = spec.reproduction_levels[trellis.output(state, in)];
        state = trellis.next_state(state, in);
    }
    return out;
}

std::vector<double> tcq_decode(const BitString& bits, const TrellisSpec& spec) {
    if (bits.bit_count % spec.bits_per_sample != 0)
        throw std::invalid_argument("tcq_decode: bit count is not a multiple of m");
    BitReader r(bits);
    return tcq_decode(r, bits.bit_count / spec.bits_per_sample, spec);
}

std::vector<double> tcq_reproduce(std::span<const double> theta, const TrellisSpec& spec,
                                  const CostMetric& metric) {
    return tcq_decode(tcq_encode(theta, spec, metric), spec);
}

std::vector<double> uniform_scalar_quantize(std::span<const double> theta, int bits) {
    check_domain(theta);
    const int n = 1 << bits;
    std::vector<double> out(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        int cell = std::min(static_cast<int>(theta[i] * n), n - 1);
        out[i] = (cell + 0.5) / n;
    }
    return out;
}

} // namespace semsig
