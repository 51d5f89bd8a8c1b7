#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "xpc/codec.hpp"
#include "xpc/codespec.hpp"
#include "xpc/errors.hpp"
#include "xpc/exp_huffman.hpp"
#include "xpc/model.hpp"

namespace xpc {

using json = nlohmann::json;

// ---- source models -------------------------------------------------------

inline json source_to_json(const SourceModel& src) {
    if (auto* g = std::get_if<GeometricSource>(&src))
        return {{"kind", "geometric"}, {"theta", g->theta}};
    if (auto* p = std::get_if<PoissonSource>(&src))
        return {{"kind", "poisson"}, {"lambda", p->lambda}};
    if (auto* f = std::get_if<FiniteWeights>(&src))
        return {{"kind", "finite"}, {"weights", f->w}};
    throw InvalidParameter("custom sources are not serializable");
}

inline SourceModel source_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "geometric") return GeometricSource(j.at("theta").get<double>());
    if (kind == "poisson") return PoissonSource(j.at("lambda").get<double>());
    if (kind == "finite")
        return FiniteWeights(j.at("weights").get<std::vector<double>>());
    throw InvalidParameter("unknown source kind: " + kind);
}

// ---- code specs -----------------------------------------------------------

inline json codespec_to_json(const CodeSpec& spec) {
    struct V {
        json operator()(const GolombSpec& g) const {
            return {{"kind", "golomb"},
                    {"k", g.code.k},
                    {"prefix", g.code.prefix == PrefixConvention::OnesThenZero ? "ones"
                                                                               : "zeros"}};
        }
        json operator()(const UnarySpec&) const { return {{"kind", "unary"}}; }
        json operator()(const UnaryEndedSpec& u) const {
            std::vector<std::string> head;
            head.reserve(u.code.head_codewords.size());
            for (const auto& c : u.code.head_codewords) head.push_back(c.to_string());
            return {{"kind", "unary_ended"},
                    {"head", head},
                    {"continuation", u.code.continuation_prefix.to_string()},
                    {"x", u.code.x}};
        }
        json operator()(const ExplicitFiniteSpec& f) const {
            std::vector<std::string> cws;
            cws.reserve(f.codewords.size());
            for (const auto& c : f.codewords) cws.push_back(c.to_string());
            return {{"kind", "finite"}, {"codewords", cws}};
        }
    };
    return std::visit(V{}, spec);
}

inline CodeSpec codespec_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "golomb") {
        PrefixConvention p = PrefixConvention::OnesThenZero;
        if (j.contains("prefix") && j.at("prefix").get<std::string>() == "zeros")
            p = PrefixConvention::ZerosThenOne;
        return GolombSpec{GolombCode(j.at("k").get<int>(), p)};
    }
    if (kind == "unary") return UnarySpec{};
    if (kind == "unary_ended") {
        UnaryEndedCode code;
        for (const auto& s : j.at("head"))
            code.head_codewords.push_back(BitString::from_string(s.get<std::string>()));
        code.continuation_prefix =
            BitString::from_string(j.at("continuation").get<std::string>());
        if (!code.continuation_prefix.all_ones())
            throw InvalidParameter("unary_ended continuation must be all ones");
        code.x = static_cast<int>(code.head_codewords.size()) -
                 static_cast<int>(code.continuation_prefix.size());
        if (j.contains("x") && j.at("x").get<int>() != code.x)
            throw InvalidParameter("unary_ended x inconsistent with head/continuation");
        if (code.x < 0) throw InvalidParameter("unary_ended x must be nonnegative");
        return UnaryEndedSpec{std::move(code)};
    }
    if (kind == "finite") {
        ExplicitFiniteSpec f;
        for (const auto& s : j.at("codewords"))
            f.codewords.push_back(BitString::from_string(s.get<std::string>()));
        if (f.codewords.empty()) throw InvalidParameter("finite code needs >= 1 codeword");
        return f;
    }
    throw InvalidParameter("unknown codespec kind: " + kind);
}

inline json finite_code_to_json(const FiniteCode& code) {
    std::vector<std::string> cws;
    cws.reserve(code.codewords.size());
    for (const auto& c : code.codewords) cws.push_back(c.to_string());
    return {{"codewords", cws}};
}

// ---- container ------------------------------------------------------------
// Layout (bit-exact): magic "XPC1" | u32 LE codespec JSON length |
// codespec JSON | u64 LE symbol count | payload bytes.

namespace detail {

inline void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
inline void put_u64le(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
inline std::uint64_t get_le(const std::uint8_t* p, int n) {
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

}  // namespace detail

inline std::vector<std::uint8_t> container_serialize(const EncodedStream& stream) {
    std::string spec_json = codespec_to_json(stream.spec).dump();
    std::vector<std::uint8_t> out;
    out.reserve(16 + spec_json.size() + stream.payload.size());
    out.insert(out.end(), {'X', 'P', 'C', '1'});
    detail::put_u32le(out, static_cast<std::uint32_t>(spec_json.size()));
    out.insert(out.end(), spec_json.begin(), spec_json.end());
    detail::put_u64le(out, stream.symbol_count);
    out.insert(out.end(), stream.payload.begin(), stream.payload.end());
    return out;
}

inline EncodedStream container_parse(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 || bytes[0] != 'X' || bytes[1] != 'P' || bytes[2] != 'C' ||
        bytes[3] != '1')
        throw MalformedStream("bad container magic");
    std::uint64_t jlen = detail::get_le(bytes.data() + 4, 4);
    if (bytes.size() < 16 + jlen) throw TruncatedStream("container header truncated");
    json j = json::parse(bytes.begin() + 8, bytes.begin() + 8 + static_cast<long>(jlen));
    EncodedStream s;
    s.spec = codespec_from_json(j);
    s.symbol_count = detail::get_le(bytes.data() + 8 + jlen, 8);
    s.payload.assign(bytes.begin() + 16 + static_cast<long>(jlen), bytes.end());
    return s;
}

}  // namespace xpc
