#include "semsig/container.hpp"

#include "semsig/elias.hpp"
#include "semsig/tcq.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace semsig {

namespace {

constexpr std::uint8_t kVersion = 1;
constexpr char kMagic[4] = {'S', 'G', 'X', '1'};

enum LevelTag : std::uint32_t {
    kRawVector = 0,
    kTcqVector = 1,
    kTimeAmplitude = 2,
    kBlob = 3,
};

void put_count(BitWriter& w, std::uint64_t n) { elias_delta_encode(w, n + 1); }
std::uint64_t get_count(BitReader& r) {
    std::uint64_t v = elias_delta_decode(r);
    if (v == 0) throw std::runtime_error("sgx1: malformed count");
    return v - 1;
}

std::uint64_t zigzag(std::int64_t v) {
    return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}
std::int64_t unzigzag(std::uint64_t v) {
    return static_cast<std::int64_t>(v >> 1) ^ -static_cast<std::int64_t>(v & 1);
}

void put_double(BitWriter& w, double v) { w.write_bits(std::bit_cast<std::uint64_t>(v), 64); }
double get_double(BitReader& r) { return std::bit_cast<double>(r.read_bits(64)); }

// TCQ operates on [0, 1]; attribute vectors live in [-1, 1].
double to_unit(double x) { return (x + 1.0) * 0.5; }
double from_unit(double u) { return 2.0 * u - 1.0; }

bool tcq_applicable(const RealVector& v, const CodecConfig& cfg) {
    if (!cfg.tcq_enabled || v.values.size() < cfg.tcq_min_dim) return false;
    for (double x : v.values)
        if (!(x >= -1.0 && x <= 1.0)) return false;
    return true;
}

void encode_level(BitWriter& w, const AttributeLevel& level, const CodecConfig& cfg,
                  const TrellisSpec& spec) {
    if (const auto* vec = std::get_if<RealVector>(&level)) {
        if (tcq_applicable(*vec, cfg)) {
            w.write_bits(kTcqVector, 2);
            w.write_bits(static_cast<std::uint32_t>(cfg.tcq_bits - 2), 2);
            put_count(w, vec->values.size());
            std::vector<double> unit(vec->values.size());
            for (std::size_t i = 0; i < unit.size(); ++i) unit[i] = to_unit(vec->values[i]);
            w.append(tcq_encode(unit, spec, cfg.metric));
        } else {
            w.write_bits(kRawVector, 2);
            put_count(w, vec->values.size());
            for (double v : vec->values) put_double(w, v);
        }
    } else if (const auto* ta = std::get_if<TimeAmplitude>(&level)) {
        w.write_bits(kTimeAmplitude, 2);
        elias_delta_encode(w, zigzag(ta->time) + 1);
        put_double(w, ta->amplitude);
    } else {
        const auto& blob = std::get<Blob>(level);
        w.write_bits(kBlob, 2);
        put_count(w, blob.bytes.size());
        for (std::uint8_t b : blob.bytes) w.write_bits(b, 8);
    }
}

AttributeLevel decode_level(BitReader& r) {
    std::uint32_t tag = static_cast<std::uint32_t>(r.read_bits(2));
    switch (tag) {
        case kRawVector: {
            RealVector v;
            std::uint64_t n = get_count(r);
            v.values.reserve(n);
            for (std::uint64_t i = 0; i < n; ++i) v.values.push_back(get_double(r));
            return v;
        }
        case kTcqVector: {
            int m = static_cast<int>(r.read_bits(2)) + 2;
            std::uint64_t n = get_count(r);
            TrellisSpec spec = TrellisSpec::preset(m);
            std::vector<double> unit = tcq_decode(r, n, spec);
            RealVector v;
            v.values.reserve(n);
            for (double u : unit) v.values.push_back(from_unit(u));
            return v;
        }
        case kTimeAmplitude: {
            TimeAmplitude ta;
            ta.time = unzigzag(elias_delta_decode(r) - 1);
            ta.amplitude = get_double(r);
            return ta;
        }
        default: {
            Blob b;
            std::uint64_t n = get_count(r);
            b.bytes.reserve(n);
            for (std::uint64_t i = 0; i < n; ++i)
                b.bytes.push_back(static_cast<std::uint8_t>(r.read_bits(8)));
            return b;
        }
    }
}

void encode_attributes(BitWriter& w, const AttributeSet& attrs, const GraphCodec& codec,
                       const CodecConfig& cfg, const TrellisSpec& spec) {
    put_count(w, attrs.size());
    for (const auto& [key, levels] : attrs) {
        w.write_bits(key.side == NodeSide::predicate ? 1 : 0, 1);
        if (key.side == NodeSide::component)
            codec.component_book.encode(w, static_cast<std::uint32_t>(key.ref.class_id));
        else
            codec.predicate_book.encode(w, static_cast<std::uint32_t>(key.ref.class_id));
        elias_delta_encode(w, static_cast<std::uint64_t>(key.ref.index));
        put_count(w, levels.size());
        for (const auto& level : levels) encode_level(w, level, cfg, spec);
    }
}

AttributeSet decode_attributes(BitReader& r, const GraphCodec& codec) {
    AttributeSet attrs;
    std::uint64_t n = get_count(r);
    for (std::uint64_t i = 0; i < n; ++i) {
        NodeKey key;
        key.side = r.read_bits(1) ? NodeSide::predicate : NodeSide::component;
        key.ref.class_id = static_cast<int>(key.side == NodeSide::component
                                                ? codec.component_book.decode(r)
                                                : codec.predicate_book.decode(r));
        key.ref.index = static_cast<int>(elias_delta_decode(r));
        std::uint64_t levels = get_count(r);
        std::vector<AttributeLevel> list;
        list.reserve(levels);
        for (std::uint64_t l = 0; l < levels; ++l) list.push_back(decode_level(r));
        attrs[key] = std::move(list);
    }
    return attrs;
}

void encode_payload(BitWriter& w, const std::vector<SemanticDescription>& frames,
                    const GraphCodec& codec, const CodecConfig& cfg) {
    TrellisSpec spec = TrellisSpec::preset(cfg.tcq_bits);
    put_count(w, frames.size());
    for (const auto& frame : frames) {
        if (frame.t < 0) throw std::invalid_argument("sgx1: negative frame timestamp");
        put_count(w, static_cast<std::uint64_t>(frame.t));
        put_count(w, frame.atom_count());
        for (std::size_t i = 0; i < frame.atom_count(); ++i) {
            BitWriter gw;
            adjacency_encode(gw, frame.instance_graphs[i], codec);
            BitString graph_bits = gw.take();
            put_count(w, graph_bits.bit_count);
            w.append(graph_bits);

            BitWriter aw;
            if (cfg.include_attributes)
                encode_attributes(aw, frame.attributes[i], codec, cfg, spec);
            else
                put_count(aw, 0);
            BitString attr_bits = aw.take();
            put_count(w, attr_bits.bit_count);
            w.append(attr_bits);
        }
    }
}

} // namespace

std::vector<std::uint8_t> sgx1_encode(const std::vector<SemanticDescription>& frames,
                                      const ClassRegistry& reg, const CodecConfig& cfg) {
    GraphCodec codec(reg);
    std::vector<std::uint8_t> out(kMagic, kMagic + 4);
    out.push_back(kVersion);
    std::uint64_t digest = reg.digest();
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(digest >> (8 * i)));

    BitWriter w;
    encode_payload(w, frames, codec, cfg);
    BitString payload = w.take();
    // payload bit length first so the byte padding is unambiguous
    std::vector<std::uint8_t> len(8);
    for (int i = 0; i < 8; ++i)
        len[i] = static_cast<std::uint8_t>(payload.bit_count >> (8 * (7 - i)));
    out.insert(out.end(), len.begin(), len.end());
    out.insert(out.end(), payload.bytes.begin(), payload.bytes.end());
    return out;
}

std::vector<SemanticDescription> sgx1_decode(const std::vector<std::uint8_t>& bytes,
                                             const ClassRegistry& reg) {
    if (bytes.size() < 21 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw std::runtime_error("sgx1: bad magic");
    if (bytes[4] != kVersion) throw std::runtime_error("sgx1: unsupported version");
    std::uint64_t digest = 0;
    for (int i = 0; i < 8; ++i) digest = (digest << 8) | bytes[5 + i];
    if (digest != reg.digest()) throw std::runtime_error("sgx1: registry digest mismatch");
    std::uint64_t payload_bits = 0;
    for (int i = 0; i < 8; ++i) payload_bits = (payload_bits << 8) | bytes[13 + i];
    if ((bytes.size() - 21) * 8 < payload_bits)
        throw std::runtime_error("sgx1: truncated payload");

    GraphCodec codec(reg);
    BitReader r(bytes.data() + 21, payload_bits);

    std::vector<SemanticDescription> frames;
    std::uint64_t n_frames = get_count(r);
    for (std::uint64_t f = 0; f < n_frames; ++f) {
        SemanticDescription frame;
        frame.t = static_cast<std::int64_t>(get_count(r));
        std::uint64_t atoms = get_count(r);
        for (std::uint64_t a = 0; a < atoms; ++a) {
            std::uint64_t graph_bits = get_count(r);
            std::size_t start = r.position();
            InstanceGraph g = adjacency_decode_instance(r, codec);
            if (r.position() - start != graph_bits)
                throw std::runtime_error("sgx1: graph block length mismatch");

            std::uint64_t attr_bits = get_count(r);
            start = r.position();
            AttributeSet attrs = decode_attributes(r, codec);
            if (r.position() - start != attr_bits)
                throw std::runtime_error("sgx1: attribute block length mismatch");

            frame.class_graphs.push_back(abstract_graph(g));
            frame.instance_graphs.push_back(std::move(g));
            frame.attributes.push_back(std::move(attrs));
        }
        frames.push_back(std::move(frame));
    }
    return frames;
}

std::uint64_t sgx1_frame_bits(const SemanticDescription& frame, const ClassRegistry& reg,
                              const CodecConfig& cfg) {
    return sgx1_encode({frame}, reg, cfg).size() * 8;
}

} // namespace semsig
