#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "xpc/bits.hpp"
#include "xpc/codespec.hpp"
#include "xpc/errors.hpp"

namespace xpc {

// MSB-first bit packer: the first bit written lands in the most significant
// bit of byte 0. The final partial byte is zero-padded.
class BitWriter {
public:
    void write_bit(int bit) {
        if (nbits_ % 8 == 0) bytes_.push_back(0);
        if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (nbits_ % 8));
        ++nbits_;
    }
    void write(const BitString& bs) {
        for (std::size_t i = 0; i < bs.size(); ++i) write_bit(bs.bit(i));
    }
    std::uint64_t bit_count() const { return nbits_; }
    std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
    std::uint64_t nbits_ = 0;
};

class BitReader {
public:
    BitReader(const std::uint8_t* data, std::size_t size_bytes)
        : data_(data), size_bits_(8 * size_bytes) {}

    int read_bit() {
        if (pos_ >= size_bits_)
            throw TruncatedStream("bit stream exhausted mid-codeword");
        int b = (data_[pos_ / 8] >> (7 - pos_ % 8)) & 1;
        ++pos_;
        return b;
    }
    std::uint64_t consumed() const { return pos_; }
    std::uint64_t remaining() const { return size_bits_ - pos_; }

private:
    const std::uint8_t* data_;
    std::uint64_t size_bits_;
    std::uint64_t pos_ = 0;
};

// Symbol stream encoded under one CodeSpec. Framing is by explicit symbol
// count, not by self-termination: unary-heavy codes make padding ambiguous.
struct EncodedStream {
    CodeSpec spec;
    std::uint64_t symbol_count = 0;
    std::uint64_t payload_bits = 0;
    std::vector<std::uint8_t> payload;
};

inline EncodedStream encode(const CodeSpec& spec,
                            const std::vector<std::uint64_t>& symbols) {
    if (auto n = spec_alphabet_size(spec)) {
        for (auto s : symbols)
            if (s >= *n)
                throw OutOfAlphabet("symbol " + std::to_string(s) +
                                    " outside finite code alphabet");
    }
    BitWriter w;
    for (auto s : symbols) w.write(spec_codeword(spec, s));
    EncodedStream out{spec, symbols.size(), w.bit_count(), w.take()};
    return out;
}

namespace detail {

// Binary trie over explicit codewords; used for finite codes and for the
// head of unary-ended codes (the continuation prefix gets a special leaf).
class CodewordTrie {
public:
    void insert(const BitString& cw, std::int64_t value) {
        std::size_t node = 0;
        if (nodes_.empty()) nodes_.push_back({});
        for (std::size_t i = 0; i < cw.size(); ++i) {
            if (nodes_[node].value != kFree)
                throw MalformedStream("codeword table is not prefix-free");
            int b = cw.bit(i);
            if (nodes_[node].child[b] < 0) {
                nodes_[node].child[b] = static_cast<int>(nodes_.size());
                nodes_.push_back({});
            }
            node = static_cast<std::size_t>(nodes_[node].child[b]);
        }
        if (nodes_[node].value != kFree || nodes_[node].child[0] >= 0 ||
            nodes_[node].child[1] >= 0)
            throw MalformedStream("codeword table is not prefix-free");
        nodes_[node].value = value;
    }

    std::int64_t decode_one(BitReader& r) const {
        std::size_t node = 0;
        for (;;) {
            if (nodes_[node].value != kFree) return nodes_[node].value;
            int next = nodes_[node].child[r.read_bit()];
            if (next < 0) throw MalformedStream("bit pattern matches no codeword");
            node = static_cast<std::size_t>(next);
        }
    }

    static constexpr std::int64_t kFree = -1;

private:
    struct Node {
        int child[2] = {-1, -1};
        std::int64_t value = kFree;
    };
    std::vector<Node> nodes_;
};

inline std::uint64_t read_unary(BitReader& r, int one_bit = 1) {
    std::uint64_t count = 0;
    while (r.read_bit() == one_bit) ++count;
    return count;
}

inline std::uint64_t decode_golomb(const GolombCode& c, BitReader& r) {
    int prefix_bit = c.prefix == PrefixConvention::OnesThenZero ? 1 : 0;
    std::uint64_t q = read_unary(r, prefix_bit);
    std::uint64_t rem = 0;
    if (c.g > 1) {
        std::uint64_t v = 0;
        for (int i = 0; i < c.g - 1; ++i) v = (v << 1) | static_cast<unsigned>(r.read_bit());
        if (v < static_cast<std::uint64_t>(c.z)) {
            rem = v;
        } else {
            v = (v << 1) | static_cast<unsigned>(r.read_bit());
            rem = v - static_cast<std::uint64_t>(c.z);
        }
    }
    return q * static_cast<std::uint64_t>(c.k) + rem;
}

}  // namespace detail

// Single-use decoder over one payload. Works from the structured code
// description (prefix counting plus suffix reads); only finite tables and
// unary-ended heads materialize a trie.
class Decoder {
public:
    Decoder(const CodeSpec& spec, const EncodedStream& stream)
        : spec_(spec), reader_(stream.payload.data(), stream.payload.size()) {
        if (auto* u = std::get_if<UnaryEndedSpec>(&spec_)) {
            for (std::size_t i = 0; i < u->code.head_codewords.size(); ++i)
                trie_.insert(u->code.head_codewords[i], static_cast<std::int64_t>(i));
            trie_.insert(u->code.continuation_prefix, kContinuation);
        } else if (auto* f = std::get_if<ExplicitFiniteSpec>(&spec_)) {
            for (std::size_t i = 0; i < f->codewords.size(); ++i)
                trie_.insert(f->codewords[i], static_cast<std::int64_t>(i));
        }
    }

    std::uint64_t next() {
        if (auto* g = std::get_if<GolombSpec>(&spec_))
            return detail::decode_golomb(g->code, reader_);
        if (std::holds_alternative<UnarySpec>(spec_)) return detail::read_unary(reader_);
        if (auto* u = std::get_if<UnaryEndedSpec>(&spec_)) {
            std::int64_t v = trie_.decode_one(reader_);
            if (v != kContinuation) return static_cast<std::uint64_t>(v);
            return u->code.head_codewords.size() + detail::read_unary(reader_);
        }
        return static_cast<std::uint64_t>(trie_.decode_one(reader_));
    }

    // After the last symbol: nothing but zero padding may remain.
    void finish() {
        if (reader_.remaining() >= 8)
            throw MalformedStream("payload longer than the decoded bit count allows");
        while (reader_.remaining() > 0)
            if (reader_.read_bit() != 0)
                throw MalformedStream("nonzero padding bits after payload");
    }

private:
    static constexpr std::int64_t kContinuation = -2;
    CodeSpec spec_;
    detail::CodewordTrie trie_;
    BitReader reader_;
};

inline std::vector<std::uint64_t> decode(const CodeSpec& spec, const EncodedStream& stream) {
    Decoder dec(spec, stream);
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(stream.symbol_count));
    for (std::uint64_t t = 0; t < stream.symbol_count; ++t) out.push_back(dec.next());
    dec.finish();
    return out;
}

}  // namespace xpc
