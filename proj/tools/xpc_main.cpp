// xpc: optimal prefix codes for exponential penalties and max pointwise
// redundancy. Subcommands: optimal, encode, decode, eval, sweep, verify.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xpc/xpc.hpp"

namespace {

using namespace xpc;

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// --source / --spec accept an inline JSON literal or a path to a JSON file.
json load_json_arg(const std::string& arg) {
    std::string text = arg;
    if (!arg.empty() && arg[0] != '{' && arg[0] != '[') {
        std::ifstream in(arg);
        if (!in) throw InvalidParameter("cannot open JSON file: " + arg);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return json::parse(text);
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InvalidParameter("cannot open output file: " + out_path);
    out << text;
}

double round12(double v) {
    if (!std::isfinite(v)) return v;
    return std::stod(fmt12(v));
}

// ---------------------------------------------------------------------------
// optimal

struct OptimalResult {
    CodeSpec spec;
    json summary;
};

OptimalResult optimal_expo(const SourceModel& src, double a, PrefixConvention conv,
                           double tol) {
    OptimalResult res;
    json& s = res.summary;
    s["a"] = a;
    bool nondegenerate = classify(a) != Regime::Degenerate;

    if (auto* f = std::get_if<FiniteWeights>(&src)) {
        FiniteCode code = exp_huffman(*f, a);
        res.spec = ExplicitFiniteSpec{code.codewords};
        double mass = 0.0;
        for (double w : f->w) mass += w;
        s["penalty"] = round12(code_penalty(*f, code.lengths, a));
        if (nondegenerate && std::abs(mass - 1.0) < 1e-9) {
            double h = renyi_entropy(src, renyi_order(a), tol);
            s["entropy"] = round12(h);
            s["redundancy"] = round12(s["penalty"].get<double>() - h);
        }
        return res;
    }
    if (auto* g = std::get_if<GeometricSource>(&src)) {
        int k = optimal_k(g->theta, a);
        res.spec = GolombSpec{GolombCode(k, conv)};
        s["k"] = k;
        s["penalty"] = round12(golomb_penalty_closed_form(g->theta, a, k));
        if (nondegenerate) {
            double h = geometric_renyi_entropy(g->theta, a);
            s["entropy"] = round12(h);
            s["redundancy"] = round12(s["penalty"].get<double>() - h);
        }
        return res;
    }
    if (auto* p = std::get_if<PoissonSource>(&src)) {
        if (!nondegenerate) {
            res.spec = UnarySpec{};
            s["penalty"] =
                round12(penalty(src, CodeLengths::eventually_arithmetic({1}, 1), a, tol));
            return res;
        }
        int r = poisson_r(p->lambda, a);
        UnaryEndedCode code = build_unary_ended(src, a, r);
        s["r"] = r;
        s["penalty"] = round12(penalty(src, code.lengths(), a, tol));
        double h = renyi_entropy(src, renyi_order(a), tol);
        s["entropy"] = round12(h);
        s["redundancy"] = round12(s["penalty"].get<double>() - h);
        res.spec = UnaryEndedSpec{std::move(code)};
        return res;
    }
    throw InvalidParameter("unsupported source kind for optimal");
}

OptimalResult optimal_maxred(const SourceModel& src, PrefixConvention conv) {
    OptimalResult res;
    json& s = res.summary;
    s["penalty_kind"] = "maxred";

    if (auto* f = std::get_if<FiniteWeights>(&src)) {
        FiniteCode code = minimax_stable_code(*f);
        res.spec = ExplicitFiniteSpec{code.codewords};
        auto prof = max_pointwise_redundancy(src, CodeLengths::finite(code.lengths));
        s["max_redundancy"] = round12(prof.sup);
        if (prof.witness) s["sup_witness"] = *prof.witness;
        return res;
    }
    if (auto* g = std::get_if<GeometricSource>(&src)) {
        int k = minimax_golomb_k(g->theta);
        res.spec = GolombSpec{GolombCode(k, conv)};
        s["k"] = k;
        auto prof = max_pointwise_redundancy(src, golomb_lengths(GolombCode(k)));
        s["max_redundancy"] = round12(prof.sup);
        if (prof.witness) s["sup_witness"] = *prof.witness;
        return res;
    }
    int r = minimax_light_tail_r(src);
    UnaryEndedCode code = minimax_reduced_code(src, r);
    s["r"] = r;
    auto prof = max_pointwise_redundancy(src, code.lengths());
    s["max_redundancy"] = round12(prof.sup);
    if (prof.witness) s["sup_witness"] = *prof.witness;
    res.spec = UnaryEndedSpec{std::move(code)};
    return res;
}

int cmd_optimal(const std::string& source_arg, double a, bool maxred,
                const std::string& prefix_conv, double tol, const std::string& out) {
    SourceModel src = source_from_json(load_json_arg(source_arg));
    PrefixConvention conv = prefix_conv == "zeros" ? PrefixConvention::ZerosThenOne
                                                   : PrefixConvention::OnesThenZero;
    OptimalResult res = maxred ? optimal_maxred(src, conv) : optimal_expo(src, a, conv, tol);
    write_output(codespec_to_json(res.spec).dump() + "\n", out);
    std::cout << res.summary.dump() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// encode / decode

std::vector<std::uint64_t> read_symbols(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open symbol file: " + path);
    std::vector<std::uint64_t> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(std::stoull(line));
    }
    return out;
}

int cmd_encode(const std::string& spec_arg, const std::string& in_path,
               const std::string& out_path) {
    CodeSpec spec = codespec_from_json(load_json_arg(spec_arg));
    EncodedStream stream = encode(spec, read_symbols(in_path));
    std::vector<std::uint8_t> bytes = container_serialize(stream);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InvalidParameter("cannot open output file: " + out_path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    std::cout << json({{"symbols", stream.symbol_count},
                       {"payload_bits", stream.payload_bits},
                       {"container_bytes", bytes.size()}})
                     .dump()
              << "\n";
    return 0;
}

int cmd_decode(const std::string& in_path, const std::string& out_path) {
    std::ifstream in(in_path, std::ios::binary);
    if (!in) throw InvalidParameter("cannot open container file: " + in_path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    EncodedStream stream = container_parse(bytes);
    std::vector<std::uint64_t> symbols = decode(stream.spec, stream);
    std::string text;
    for (auto s : symbols) {
        text += std::to_string(s);
        text += '\n';
    }
    write_output(text, out_path);
    return 0;
}

// ---------------------------------------------------------------------------
// eval

int cmd_eval(const std::string& source_arg, const std::string& code_arg, double a,
             const std::string& penalty_kind, double tol) {
    SourceModel src = source_from_json(load_json_arg(source_arg));
    CodeSpec spec = codespec_from_json(load_json_arg(code_arg));
    CodeLengths lens = spec_lengths(spec);

    json out;
    if (penalty_kind == "maxred") {
        auto prof = max_pointwise_redundancy(src, lens);
        out["penalty_kind"] = "maxred";
        out["max_redundancy"] = round12(prof.sup);
        out["exact"] = prof.exact;
        if (prof.witness) out["sup_witness"] = *prof.witness;
        std::cout << out.dump() << "\n";
        return 0;
    }
    if (penalty_kind != "exp") throw InvalidParameter("unknown --penalty: " + penalty_kind);

    out["a"] = a;
    out["tol"] = tol;
    double L = penalty(src, lens, a, tol);
    out["penalty"] = round12(L);
    if (classify(a) != Regime::Degenerate) {
        double alpha = renyi_order(a);
        double h = renyi_entropy(src, alpha, tol);
        out["alpha"] = round12(alpha);
        out["entropy"] = round12(h);
        out["redundancy"] = round12(L - h);
    }
    std::cout << out.dump() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// sweep

std::vector<double> parse_theta_grid(const std::string& arg) {
    // min:max:count, inclusive
    double lo, hi;
    int count;
    if (std::sscanf(arg.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
        throw InvalidParameter("--theta-grid expects min:max:count");
    if (!(lo > 0.0 && hi < 1.0 && lo <= hi))
        throw InvalidParameter("theta grid must lie inside (0,1)");
    std::vector<double> g;
    for (int i = 0; i < count; ++i)
        g.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    return g;
}

std::vector<double> parse_a_grid(const std::string& arg) {
    std::vector<double> g;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) g.push_back(std::stod(item));
    if (g.empty()) throw InvalidParameter("--a-grid expects a comma list");
    for (double a : g)
        if (!(a > 0.5)) throw InvalidParameter("a grid must lie in (0.5, inf)");
    return g;
}

int cmd_sweep(const std::string& theta_arg, const std::string& a_arg,
              const std::string& out) {
    std::vector<double> thetas = parse_theta_grid(theta_arg);
    std::vector<double> as = parse_a_grid(a_arg);
    std::string csv = "theta,a,k_opt,penalty,entropy,redundancy\n";
    for (double theta : thetas) {
        for (double a : as) {
            int k = optimal_k(theta, a);
            double L = golomb_penalty_closed_form(theta, a, k);
            double h = geometric_renyi_entropy(theta, a);
            csv += fmt12(theta) + "," + fmt12(a) + "," + std::to_string(k) + "," +
                   fmt12(L) + "," + fmt12(h) + "," + fmt12(L - h) + "\n";
        }
    }
    write_output(csv, out);
    return 0;
}

// ---------------------------------------------------------------------------
// verify batteries

struct CheckList {
    json checks = json::array();
    bool pass = true;

    void add(const std::string& name, bool ok, json detail = {}) {
        json c = {{"name", name}, {"pass", ok}};
        if (!detail.is_null() && !detail.empty()) c["detail"] = detail;
        checks.push_back(c);
        pass = pass && ok;
    }
};

void battery_huffman_oracle(std::uint32_t seed, CheckList& list) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    const double a_grid[] = {0.3, 0.6, 0.9, 1.0, 1.5, 2.0};
    int trials = 0, penalty_fail = 0, unary_fail = 0;
    for (int t = 0; t < 1000; ++t) {
        int n = 1 + static_cast<int>(rng() % 7);
        std::vector<double> w(n);
        for (auto& x : w) x = u(rng);
        FiniteWeights fw(w);
        for (double a : a_grid) {
            FiniteCode code = exp_huffman(fw, a);
            auto best = oracle::brute_force_optimal(fw, a);
            KahanSum s;
            for (int i = 0; i < n; ++i)
                s.add(a == 1.0 ? w[i] * code.lengths[i]
                               : w[i] * std::pow(a, code.lengths[i]));
            if (std::abs(s.value() - best.penalty) > 1e-9 * std::abs(best.penalty))
                ++penalty_fail;
            if (a <= 0.5) {
                std::vector<int> sorted = code.lengths;
                std::sort(sorted.begin(), sorted.end());
                if (sorted != unary_like_lengths(static_cast<std::size_t>(n)))
                    ++unary_fail;
            }
            ++trials;
        }
    }
    list.add("penalty equals exhaustive optimum", penalty_fail == 0,
             {{"trials", trials}, {"failures", penalty_fail}});
    list.add("degenerate exponents give unary-like lengths", unary_fail == 0);
}

void battery_golomb_sandwich(CheckList& list) {
    int fail = 0, points = 0;
    double worst_gap = 0.0;
    for (double theta = 0.1; theta < 0.96; theta += 0.05) {
        for (double a : {0.6, 0.8, 1.2, 1.5, 2.0, 4.0}) {
            auto rep = oracle::golomb_sandwich_check(theta, a, 200);
            if (!rep.pass) ++fail;
            if (!rep.entries.empty())
                worst_gap = std::max(worst_gap, std::abs(rep.entries.back().gap));
            ++points;
        }
    }
    list.add("sandwich grid", fail == 0,
             {{"points", points}, {"worst_final_gap", worst_gap}});
}

void battery_poisson_examples(CheckList& list) {
    list.add("r formula at lambda=1",
             poisson_r(1.0, 1.0) == 2 && poisson_r(1.0, 2.0) == 2);
    SourceModel poi = PoissonSource(1.0);
    double w1 = reduced_weights(poi, 1.0, 2).w.back();
    double w2 = reduced_weights(poi, 2.0, 2).w.back();
    list.add("reduced tail weights",
             std::abs(w1 - (1.0 - 2.5 / std::numbers::e)) < 1e-9 &&
                 std::abs(w2 - (0.25 * std::numbers::e - 1.25 / std::numbers::e)) < 1e-9,
             {{"w1", w1}, {"w2", w2}});
    UnaryEndedCode c1 = build_unary_ended(poi, 1.0);
    UnaryEndedCode c2 = build_unary_ended(poi, 2.0);
    bool ok1 = true, ok2 = true;
    std::vector<std::int64_t> lens1;
    for (std::uint64_t i = 0; i < 20; ++i) lens1.push_back(c1.length(i));
    std::sort(lens1.begin(), lens1.end());
    for (int i = 0; i < 20; ++i) ok1 = ok1 && lens1[i] == i + 1;
    for (std::uint64_t i = 0; i < 20; ++i)
        ok2 = ok2 && c2.length(i) == (i < 3 ? 2 : static_cast<std::int64_t>(i));
    list.add("a=1 lengths are the unary distribution", ok1);
    list.add("a=2 lengths are {2,2,2,3,4,...}", ok2);
}

void battery_minimax_grid(CheckList& list) {
    int fail = 0;
    for (int t = 0; t < 50; ++t) {
        double theta = 0.02 + 0.019 * t;
        SourceModel src = GeometricSource(theta);
        int k = minimax_golomb_k(theta);
        double best = max_pointwise_redundancy(src, golomb_lengths(GolombCode(k))).sup;
        for (int kp = std::max(1, k - 3); kp <= k + 3; ++kp) {
            double other =
                max_pointwise_redundancy(src, golomb_lengths(GolombCode(kp))).sup;
            if (best > other + 1e-10) ++fail;
        }
    }
    list.add("minimax Golomb rule beats neighbors", fail == 0);

    struct FiniteCase {
        std::vector<double> p;
        std::vector<int> lens;
    } cases[] = {{{0.5, 0.25, 0.125, 0.125}, {1, 2, 3, 3}},
                 {{0.97, 0.03}, {1, 1}},
                 {{0.96, 0.02, 0.02}, {1, 2, 2}}};
    bool mono_ok = true, limit_ok = true;
    for (const auto& c : cases) {
        SourceModel src = FiniteWeights(c.p);
        CodeLengths lens = CodeLengths::finite(c.lens);
        double rstar = max_pointwise_redundancy(src, lens).sup;
        double prev_gap = kInf;
        double rd = 0.0;
        for (double d = 1.0; d <= 64.0; d *= 2.0) {
            rd = d_redundancy(src, lens, d);
            double gap = rstar - rd;
            if (gap > prev_gap + 1e-10 || rd > rstar + 1e-10) mono_ok = false;
            prev_gap = gap;
        }
        if (std::abs(rd - rstar) >= 1e-3) limit_ok = false;
    }
    list.add("d-redundancy converges monotonically to the sup", mono_ok);
    list.add("|R_64 - R*| < 1e-3 on finite sources", limit_ok);
}

void battery_codec_roundtrip(std::uint32_t seed, CheckList& list) {
    std::mt19937 rng(seed);
    auto geometric_batch = [&](double theta, int n) {
        std::geometric_distribution<std::uint64_t> dist(1.0 - theta);
        std::vector<std::uint64_t> out(n);
        for (auto& s : out) s = dist(rng);
        return out;
    };
    std::vector<std::pair<std::string, CodeSpec>> specs;
    specs.push_back({"golomb7", GolombSpec{GolombCode(7)}});
    specs.push_back({"unary", UnarySpec{}});
    specs.push_back({"unary_ended",
                     UnaryEndedSpec{build_unary_ended(SourceModel(PoissonSource(1.0)), 2.0)}});
    FiniteCode huff = exp_huffman(FiniteWeights({0.4, 0.3, 0.2, 0.1}), 2.0);
    specs.push_back({"finite", ExplicitFiniteSpec{huff.codewords}});
    for (auto& [name, spec] : specs) {
        std::vector<std::uint64_t> symbols;
        if (name == "finite") {
            symbols.resize(100000);
            for (auto& s : symbols) s = rng() % 4;
        } else {
            symbols = geometric_batch(0.9, 100000);
        }
        EncodedStream stream = encode(spec, symbols);
        std::uint64_t bits = 0;
        for (auto s : symbols) bits += static_cast<std::uint64_t>(spec_length(spec, s));
        bool this_ok = stream.payload_bits == bits && decode(spec, stream) == symbols;
        list.add("roundtrip " + name, this_ok, {{"symbols", symbols.size()}});
    }
    CodeSpec g3 = GolombSpec{GolombCode(3)};
    EncodedStream s047 = encode(g3, {0, 4, 7});
    std::string bits;
    for (std::uint64_t b = 0; b < s047.payload_bits; ++b)
        bits.push_back((s047.payload[b / 8] >> (7 - b % 8)) & 1 ? '1' : '0');
    list.add("table concatenation bits", bits == "00101011010", {{"bits", bits}});
}

int cmd_verify(const std::string& battery, std::uint32_t seed) {
    CheckList list;
    if (battery == "huffman-oracle")
        battery_huffman_oracle(seed, list);
    else if (battery == "golomb-sandwich")
        battery_golomb_sandwich(list);
    else if (battery == "poisson-examples")
        battery_poisson_examples(list);
    else if (battery == "minimax-grid")
        battery_minimax_grid(list);
    else if (battery == "codec-roundtrip")
        battery_codec_roundtrip(seed, list);
    else
        throw InvalidParameter("unknown battery: " + battery);
    json report = {{"battery", battery}, {"pass", list.pass}, {"checks", list.checks}};
    std::cout << report.dump() << "\n";
    return list.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal prefix codes under exponential penalties"};
    app.require_subcommand(1);

    std::string source_arg, spec_arg, code_arg, in_path, out_path;
    std::string prefix_conv = "ones", penalty_kind = "exp";
    std::string theta_grid, a_grid, battery;
    double a = 1.0, tol = 1e-10;
    bool maxred = false;
    std::uint32_t seed = 20240801;

    auto* optimal = app.add_subcommand("optimal", "construct an optimal code spec");
    optimal->add_option("--source", source_arg, "source JSON or file")->required();
    optimal->add_option("--a", a, "penalty exponent a > 0");
    optimal->add_flag("--maxred", maxred, "minimize maximum pointwise redundancy");
    optimal->add_option("--prefix-convention", prefix_conv, "ones|zeros")
        ->check(CLI::IsMember({"ones", "zeros"}));
    optimal->add_option("--tol", tol, "evaluation tolerance");
    optimal->add_option("--out", out_path, "write the code spec JSON here");

    auto* enc = app.add_subcommand("encode", "encode newline-separated symbols");
    enc->add_option("--spec", spec_arg, "code spec JSON or file")->required();
    enc->add_option("--in", in_path, "input symbol file")->required();
    enc->add_option("--out", out_path, "output container file")->required();

    auto* dec = app.add_subcommand("decode", "decode a container file");
    dec->add_option("--in", in_path, "input container file")->required();
    dec->add_option("--out", out_path, "output symbol file (default stdout)");

    auto* ev = app.add_subcommand("eval", "evaluate penalty/entropy/redundancy");
    ev->add_option("--source", source_arg, "source JSON or file")->required();
    ev->add_option("--code", code_arg, "code spec JSON or file")->required();
    ev->add_option("--a", a, "penalty exponent a > 0");
    ev->add_option("--penalty", penalty_kind, "exp|maxred")
        ->check(CLI::IsMember({"exp", "maxred"}));
    ev->add_option("--tol", tol, "evaluation tolerance");

    auto* sw = app.add_subcommand("sweep", "grid sweep CSV for figure data");
    sw->add_option("--theta-grid", theta_grid, "min:max:count inside (0,1)")->required();
    sw->add_option("--a-grid", a_grid, "comma list of a values in (0.5, inf)")->required();
    sw->add_option("--out", out_path, "output CSV path (default stdout)");

    auto* vf = app.add_subcommand("verify", "run a verification battery");
    vf->add_option("--battery", battery,
                   "huffman-oracle|golomb-sandwich|poisson-examples|minimax-grid|"
                   "codec-roundtrip")
        ->required();
    vf->add_option("--seed", seed, "battery RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(optimal))
            return cmd_optimal(source_arg, a, maxred, prefix_conv, tol, out_path);
        if (app.got_subcommand(enc)) return cmd_encode(spec_arg, in_path, out_path);
        if (app.got_subcommand(dec)) return cmd_decode(in_path, out_path);
        if (app.got_subcommand(ev))
            return cmd_eval(source_arg, code_arg, a, penalty_kind, tol);
        if (app.got_subcommand(sw)) return cmd_sweep(theta_grid, a_grid, out_path);
        if (app.got_subcommand(vf)) return cmd_verify(battery, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
