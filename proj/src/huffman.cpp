#include "semsig/huffman.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace semsig {

namespace {

struct TreeNode {
    double weight;
    std::uint32_t min_symbol; // deterministic tie-break
    int left = -1, right = -1;
    std::uint32_t symbol = 0;
    bool leaf = false;
};

void collect_lengths(const std::vector<TreeNode>& nodes, int id, int depth,
                     std::vector<std::pair<std::uint32_t, int>>& out) {
    const TreeNode& n = nodes[id];
    if (n.leaf) {
        out.emplace_back(n.symbol, std::max(depth, 1));
        return;
    }
    collect_lengths(nodes, n.left, depth + 1, out);
    collect_lengths(nodes, n.right, depth + 1, out);
}

} // namespace

HuffmanCodebook HuffmanCodebook::build(const std::map<std::uint32_t, double>& freqs) {
    if (freqs.empty()) throw std::invalid_argument("huffman: empty alphabet");

    std::vector<TreeNode> nodes;
    nodes.reserve(2 * freqs.size());
    using QItem = std::pair<std::pair<double, std::uint32_t>, int>; // ((weight, min_symbol), node)
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> queue;
    for (const auto& [sym, f] : freqs) {
        if (!(f > 0.0)) throw std::invalid_argument("huffman: nonpositive frequency");
        TreeNode n;
        n.weight = f;
        n.min_symbol = sym;
        n.symbol = sym;
        n.leaf = true;
        nodes.push_back(n);
        queue.push({{f, sym}, static_cast<int>(nodes.size()) - 1});
    }
    while (queue.size() > 1) {
        auto a = queue.top();
        queue.pop();
        auto b = queue.top();
        queue.pop();
        TreeNode n;
        n.weight = a.first.first + b.first.first;
        n.min_symbol = std::min(a.first.second, b.first.second);
        n.left = a.second;
        n.right = b.second;
        nodes.push_back(n);
        queue.push({{n.weight, n.min_symbol}, static_cast<int>(nodes.size()) - 1});
    }

    std::vector<std::pair<std::uint32_t, int>> lengths;
    collect_lengths(nodes, queue.top().second, 0, lengths);
    std::sort(lengths.begin(), lengths.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });

    HuffmanCodebook book;
    int max_len = lengths.back().second;
    book.first_code_.assign(static_cast<std::size_t>(max_len) + 2, 0);
    book.first_index_.assign(static_cast<std::size_t>(max_len) + 2, 0);

    std::uint32_t code = 0;
    int prev_len = 0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        auto [sym, len] = lengths[i];
        code <<= (len - prev_len);
        if (prev_len == 0) {
            for (int l = 1; l <= len; ++l) {
                book.first_code_[l] = code >> (len - l);
                book.first_index_[l] = 0;
            }
        } else {
            for (int l = prev_len + 1; l <= len; ++l) {
                book.first_code_[l] = code >> (len - l);
                book.first_index_[l] = static_cast<std::uint32_t>(i);
            }
        }
        book.entries_.push_back({sym, static_cast<std::uint8_t>(len), code});
        book.index_[sym] = i;
        ++code;
        prev_len = len;
    }
    // canonical assignment over a full Huffman tree: Kraft equality must hold
    // (single-symbol alphabets use one bit and sum to 1/2)
    double kraft = book.kraft_sum();
    double expected = book.entries_.size() == 1 ? 0.5 : 1.0;
    if (std::fabs(kraft - expected) > 1e-9)
        throw std::logic_error("huffman: canonical code failed the Kraft check");
    return book;
}

void HuffmanCodebook::encode(BitWriter& w, std::uint32_t symbol) const {
    auto it = index_.find(symbol);
    if (it == index_.end()) throw std::invalid_argument("huffman: unknown symbol");
    const Entry& e = entries_[it->second];
    w.write_bits(e.code, e.length);
}

std::uint32_t HuffmanCodebook::decode(BitReader& r) const {
    std::uint32_t code = 0;
    int max_len = static_cast<int>(first_code_.size()) - 2;
    for (int len = 1; len <= max_len; ++len) {
        code = (code << 1) | (r.read() ? 1u : 0u);
        // number of codes of length <= len starting at first_code_[len]
        std::uint32_t next_first =
            len < max_len ? first_index_[len + 1] : static_cast<std::uint32_t>(entries_.size());
        std::uint32_t count = next_first - first_index_[len];
        if (count > 0 && code >= first_code_[len] && code < first_code_[len] + count) {
            return entries_[first_index_[len] + (code - first_code_[len])].symbol;
        }
    }
    throw std::runtime_error("huffman: malformed bitstream");
}

std::size_t HuffmanCodebook::code_length(std::uint32_t symbol) const {
    auto it = index_.find(symbol);
    if (it == index_.end()) throw std::invalid_argument("huffman: unknown symbol");
    return entries_[it->second].length;
}

double HuffmanCodebook::kraft_sum() const {
    double s = 0.0;
    for (const Entry& e : entries_) s += std::ldexp(1.0, -static_cast<int>(e.length));
    return s;
}

double HuffmanCodebook::average_length(const std::map<std::uint32_t, double>& freqs) const {
    double total = 0.0, bits = 0.0;
    for (const auto& [sym, f] : freqs) {
        total += f;
        bits += f * static_cast<double>(code_length(sym));
    }
    return bits / total;
}

} // namespace semsig
