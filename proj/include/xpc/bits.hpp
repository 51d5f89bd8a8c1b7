#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "xpc/errors.hpp"

namespace xpc {

// An ordered bit sequence. Codewords are short, so one byte per bit keeps
// indexing and lexicographic comparison trivial; packing into bytes happens
// only at the stream boundary (see codec.hpp).
class BitString {
public:
    BitString() = default;

    static BitString from_string(const std::string& s) {
        BitString b;
        b.bits_.reserve(s.size());
        for (char c : s) {
            if (c != '0' && c != '1')
                throw InvalidParameter("BitString: expected only '0'/'1', got '" +
                                       std::string(1, c) + "'");
            b.bits_.push_back(c == '1' ? 1 : 0);
        }
        return b;
    }

    static BitString ones(std::size_t n) {
        BitString b;
        b.bits_.assign(n, 1);
        return b;
    }

    // Unary code for v: v ones then a zero (or the reversed polarity).
    static BitString unary(std::uint64_t v, bool ones_then_zero = true) {
        BitString b;
        b.bits_.assign(static_cast<std::size_t>(v) + 1, ones_then_zero ? 1 : 0);
        b.bits_.back() = ones_then_zero ? 0 : 1;
        return b;
    }

    // width low bits of value, most significant first.
    static BitString binary(std::uint64_t value, int width) {
        BitString b;
        b.bits_.reserve(static_cast<std::size_t>(width));
        for (int i = width - 1; i >= 0; --i)
            b.bits_.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
        return b;
    }

    void push_back(int bit) { bits_.push_back(bit ? 1 : 0); }
    void append(const BitString& other) {
        bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
    }

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    int bit(std::size_t i) const { return bits_[i]; }
    void flip(std::size_t i) { bits_[i] ^= 1u; }

    bool is_prefix_of(const BitString& other) const {
        if (size() > other.size()) return false;
        for (std::size_t i = 0; i < size(); ++i)
            if (bits_[i] != other.bits_[i]) return false;
        return true;
    }

    bool all_ones() const {
        for (auto b : bits_)
            if (!b) return false;
        return true;
    }

    std::string to_string() const {
        std::string s;
        s.reserve(bits_.size());
        for (auto b : bits_) s.push_back(b ? '1' : '0');
        return s;
    }

    friend bool operator==(const BitString& a, const BitString& b) = default;
    friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
        return a.bits_ <=> b.bits_;  // lexicographic
    }

private:
    std::vector<std::uint8_t> bits_;
};

}  // namespace xpc
