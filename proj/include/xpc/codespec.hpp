#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "xpc/bits.hpp"
#include "xpc/code_lengths.hpp"
#include "xpc/errors.hpp"
#include "xpc/golomb.hpp"
#include "xpc/light_tail.hpp"

namespace xpc {

// A finitely describable prefix code usable by the codec: Golomb(k), the
// unary code, a unary-ended code, or an explicit finite codeword table.
struct GolombSpec {
    GolombCode code;
};

struct UnarySpec {};

struct UnaryEndedSpec {
    UnaryEndedCode code;
};

struct ExplicitFiniteSpec {
    std::vector<BitString> codewords;
};

using CodeSpec = std::variant<UnarySpec, GolombSpec, UnaryEndedSpec, ExplicitFiniteSpec>;

inline std::optional<std::uint64_t> spec_alphabet_size(const CodeSpec& spec) {
    if (auto* f = std::get_if<ExplicitFiniteSpec>(&spec)) return f->codewords.size();
    return std::nullopt;
}

inline BitString spec_codeword(const CodeSpec& spec, std::uint64_t symbol) {
    struct V {
        std::uint64_t symbol;
        BitString operator()(const GolombSpec& g) const { return codeword(g.code, symbol); }
        BitString operator()(const UnarySpec&) const { return BitString::unary(symbol); }
        BitString operator()(const UnaryEndedSpec& u) const { return u.code.codeword(symbol); }
        BitString operator()(const ExplicitFiniteSpec& f) const {
            if (symbol >= f.codewords.size())
                throw OutOfAlphabet("symbol " + std::to_string(symbol) +
                                    " outside finite code alphabet");
            return f.codewords[static_cast<std::size_t>(symbol)];
        }
    };
    return std::visit(V{symbol}, spec);
}

inline std::int64_t spec_length(const CodeSpec& spec, std::uint64_t symbol) {
    struct V {
        std::uint64_t symbol;
        std::int64_t operator()(const GolombSpec& g) const { return length(g.code, symbol); }
        std::int64_t operator()(const UnarySpec&) const {
            return static_cast<std::int64_t>(symbol) + 1;
        }
        std::int64_t operator()(const UnaryEndedSpec& u) const { return u.code.length(symbol); }
        std::int64_t operator()(const ExplicitFiniteSpec& f) const {
            if (symbol >= f.codewords.size())
                throw OutOfAlphabet("symbol outside finite code alphabet");
            return static_cast<std::int64_t>(f.codewords[static_cast<std::size_t>(symbol)].size());
        }
    };
    return std::visit(V{symbol}, spec);
}

inline CodeLengths spec_lengths(const CodeSpec& spec) {
    struct V {
        CodeLengths operator()(const GolombSpec& g) const { return golomb_lengths(g.code); }
        CodeLengths operator()(const UnarySpec&) const {
            return CodeLengths::eventually_arithmetic({1}, 1);
        }
        CodeLengths operator()(const UnaryEndedSpec& u) const { return u.code.lengths(); }
        CodeLengths operator()(const ExplicitFiniteSpec& f) const {
            std::vector<int> lens;
            lens.reserve(f.codewords.size());
            for (const auto& c : f.codewords) lens.push_back(static_cast<int>(c.size()));
            return CodeLengths::finite(std::move(lens));
        }
    };
    return std::visit(V{}, spec);
}

}  // namespace xpc
