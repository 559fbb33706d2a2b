// hoinet: command-line front end for simulation, network analysis, exact
// three-node curves, benchmarks and beat-series derivations.

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hoinet/error.hpp"
#include "hoinet/io.hpp"
#include "hoinet/netinfer.hpp"
#include "hoinet/physio.hpp"
#include "hoinet/simgen.hpp"

namespace fs = std::filesystem;
using namespace hoinet;

namespace {

// Seed from --seed, else HOINET_SEED, else 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("HOINET_SEED"); env && *env) {
        std::uint64_t v = 0;
        const std::string text(env);
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size())
            throw InvalidArgument("HOINET_SEED is not an unsigned integer: '" + text + "'");
        return v;
    }
    return 0;
}

// Writes to `path`, or to stdout when the path is empty.
void emit(const fs::path& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
    } else {
        write_text_file(path, text);
    }
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    std::string system;
    fs::path out;
    fs::path sidecar;
    std::size_t n = 1000;
    std::optional<std::uint64_t> seed;
    ThreeNodeStaticParams stat;
    ThreeNodeDynamicParams dyn;
    Binary10Params bin;
    std::string structure = "competing";
    double hub_out = 0.5;
    double other_arm = 0.5;
};

int run_simulate(const SimulateArgs& a) {
    const auto seed = resolve_seed(a.seed);
    nlohmann::json meta;
    meta["system"] = a.system;
    meta["n"] = a.n;
    meta["seed"] = seed;
    Dataset data;
    Adjacency truth;
    std::vector<std::string> names;

    if (a.system == "three-node-static") {
        Rng rng(seed);
        auto g = gen_three_node_static(a.stat, a.n, rng);
        meta["params"] = {{"alpha", a.stat.alpha}, {"beta", a.stat.beta}, {"gamma", a.stat.gamma}};
        names = g.data.channel_names();
        truth = g.truth;
        data = std::move(g.data);
    } else if (a.system == "three-node-dynamic") {
        Rng rng(seed);
        auto g = gen_three_node_dynamic(a.dyn, a.n, rng);
        meta["params"] = {{"a", a.dyn.a}, {"b", a.dyn.b}, {"c", a.dyn.c}};
        names = g.data.channel_names();
        truth = g.truth;
        data = std::move(g.data);
    } else if (a.system == "binary10") {
        Binary10Params p = a.bin;
        p.n = a.n;
        p.seed = seed;
        auto g = gen_binary10(p);
        meta["params"] = {{"gamma1", p.gamma1}, {"gamma2", p.gamma2}, {"gamma3", p.gamma3}};
        names = g.data.channel_names();
        truth = g.truth;
        data = std::move(g.data);
    } else {
        VarStarsParams p;
        p.structure = star_structure_from_string(a.structure);
        p.hub_out = a.hub_out;
        p.other_arm = a.other_arm;
        p.n = a.n;
        p.seed = seed;
        auto g = gen_var_stars(p);
        meta["params"] = {{"structure", a.structure}, {"hub_out", p.hub_out}, {"other_arm", p.other_arm}};
        names = g.data.channel_names();
        truth = g.truth;
        data = std::move(g.data);
    }
    meta["channels"] = names;
    meta["truth"] = adjacency_to_json(truth, names);

    write_dataset(data, a.out);
    fs::path sidecar = a.sidecar;
    if (sidecar.empty()) sidecar = fs::path(a.out).replace_extension(".json");
    write_text_file(sidecar, meta.dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
    std::string mode = "static";
    fs::path input;
    int surrogates = 100;
    double alpha = 0.05;
    int iaaft_max_iter = 100;
    std::string cis_null = "conditional";
    std::optional<std::uint64_t> seed;
    int p_max = kDefaultMaxOrder;
    int q = kDefaultRestrictedOrder;
    fs::path json;
    fs::path dot;
    bool bits = false;
};

std::string link_summary(const NetworkResult& r, bool bits) {
    const double scale = bits ? 1.0 / std::log(2.0) : 1.0;
    std::ostringstream out;
    out << "link,is,cis,nis,b_index,class  (" << (bits ? "bits" : "nats") << ")\n";
    for (const auto& l : r.links) {
        out << r.channel_names[l.i] << '-' << r.channel_names[l.j] << ',' << format_double(l.is_value * scale)
            << ',' << format_double(l.cis_value * scale) << ',' << format_double(l.nis_value * scale) << ','
            << (std::isnan(l.b_index) ? std::string("NaN") : format_double(l.b_index)) << ','
            << to_string(l.link_class) << '\n';
    }
    out << "edges: " << r.adjacency.edge_count() << '\n';
    return out.str();
}

int run_analyze(const AnalyzeArgs& a) {
    const auto mode = analysis_mode_from_string(a.mode);
    SurrogateConfig config;
    config.count = a.surrogates;
    config.alpha = a.alpha;
    config.iaaft_max_iter = a.iaaft_max_iter;
    config.cis_null = conditional_null_from_string(a.cis_null);
    config.master_seed = resolve_seed(a.seed);

    const auto data = read_dataset(a.input, mode);
    NetworkResult result;
    if (mode == AnalysisMode::static_mode) {
        config.method = SurrogateMethod::shuffle;
        result = analyze_static(std::get<SymbolDataset>(data), config);
    } else {
        config.method = SurrogateMethod::iaaft;
        result = analyze_dynamic(std::get<SeriesDataset>(data), config, DynamicOptions{a.p_max, a.q});
    }
    write_result(result, a.json, a.dot);
    std::cout << link_summary(result, a.bits);
    return 0;
}

// ---------------------------------------------------------------------------
// theory

struct TheoryArgs {
    std::string system;
    std::string kind = "static";
    bool sweep = false;
    ThreeNodeStaticParams stat;
    ThreeNodeDynamicParams dyn;
    fs::path out;
    bool bits = false;
};

int run_theory(const TheoryArgs& a) {
    const bool is_static = a.kind == "static";
    if (!is_static && a.kind != "dynamic") throw InvalidArgument("--kind must be static or dynamic");
    const double scale = a.bits ? 1.0 / std::log(2.0) : 1.0;

    std::ostringstream out;
    out << (is_static ? "alpha,beta,gamma" : "a,b,c");
    for (const char* link : {"12", "13", "23"})
        for (const char* measure : {"is", "cis", "nis", "b"}) out << ',' << measure << '_' << link;
    out << '\n';

    auto row = [&](double p1, double p2, double p3, const ExactMeasures& e) {
        out << format_double(p1) << ',' << format_double(p2) << ',' << format_double(p3);
        for (const auto& l : e.links) {
            out << ',' << format_double(l.is_value * scale) << ',' << format_double(l.cis_value * scale) << ','
                << format_double(l.nis_value * scale) << ','
                << (std::isnan(l.b_index) ? std::string() : format_double(l.b_index));
        }
        out << '\n';
    };

    if (is_static) {
        // Sweep: alpha over [0.5, 1] in steps of 0.025 with gamma = 1.5 - alpha.
        const int steps = a.sweep ? 20 : 0;
        for (int k = 0; k <= steps; ++k) {
            ThreeNodeStaticParams p = a.stat;
            if (a.sweep) {
                p.alpha = 0.5 + 0.025 * k;
                p.gamma = 1.5 - p.alpha;
            }
            row(p.alpha, p.beta, p.gamma, exact_three_node_static(p));
        }
    } else {
        // Sweep: a over [0, 1] in steps of 0.05 with c = 1 - a.
        const int steps = a.sweep ? 20 : 0;
        for (int k = 0; k <= steps; ++k) {
            ThreeNodeDynamicParams p = a.dyn;
            if (a.sweep) {
                p.a = 0.05 * k;
                p.c = 1.0 - p.a;
            }
            row(p.a, p.b, p.c, exact_three_node_dynamic(p));
        }
    }
    emit(a.out, out.str());
    return 0;
}

// ---------------------------------------------------------------------------
// benchmark

struct BenchmarkArgs {
    std::string scenario = "binary10";
    std::vector<std::size_t> lengths{250, 500, 1000};
    std::vector<double> params{0.5};
    int runs = 100;
    int surrogates = 100;
    double alpha = 0.05;
    std::string cis_null = "conditional";
    std::optional<std::uint64_t> seed;
    int p_max = kDefaultMaxOrder;
    int q = kDefaultRestrictedOrder;
    int jobs = 0;
    fs::path out;
};

int run_benchmark(const BenchmarkArgs& a) {
    BenchmarkSpec spec;
    spec.scenario = scenario_from_string(a.scenario);
    spec.lengths = a.lengths;
    spec.parameters = a.params;
    spec.runs = a.runs;
    spec.surrogates.count = a.surrogates;
    spec.surrogates.alpha = a.alpha;
    spec.surrogates.cis_null = conditional_null_from_string(a.cis_null);
    spec.surrogates.master_seed = resolve_seed(a.seed);
    spec.dynamic = DynamicOptions{a.p_max, a.q};
    spec.jobs = a.jobs;

    const auto report = benchmark(spec);
    std::ostringstream csv;
    write_benchmark_csv(report, csv);
    emit(a.out, csv.str());

    std::ostream& log = a.out.empty() ? std::cerr : std::cout;
    for (const auto& row : report.rows) {
        log << to_string(report.scenario) << " n=" << row.n;
        if (!std::isnan(row.parameter)) log << " parameter=" << format_double(row.parameter);
        log << " runs=" << row.runs << " failed=" << row.failed_runs
            << " sensitivity=" << format_double(row.sensitivity())
            << " specificity=" << format_double(row.specificity()) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// derive

struct DeriveArgs {
    std::vector<std::string> kinds;
    fs::path input;
    double beta = 1.0;
    fs::path out;
    bool with_beat = false;
};

std::string beat_csv(const std::string& name, const BeatIndexed<double>& s, bool with_beat) {
    std::ostringstream out;
    out << (with_beat ? "beat," : "") << name << '\n';
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        if (with_beat) out << s.first_beat + k << ',';
        out << format_double(s.values[k]) << '\n';
    }
    return out.str();
}

int run_derive(const DeriveArgs& a) {
    const auto series = read_beat_series(a.input);
    if (a.kinds.size() == 1 && (a.kinds[0] == "co" || a.kinds[0] == "pr")) {
        const auto co = derive_cardiac_output(series, a.beta);
        if (a.kinds[0] == "co") {
            emit(a.out, beat_csv("CO", co, a.with_beat));
        } else {
            emit(a.out, beat_csv("PR", derive_peripheral_resistance(series, co), a.with_beat));
        }
        return 0;
    }

    std::vector<DiscreteKind> kinds;
    for (const auto& k : a.kinds) {
        if (k == "co" || k == "pr") throw InvalidArgument("co and pr cannot be combined with other kinds");
        kinds.push_back(discrete_kind_from_string(k));
    }
    const auto set = derive_discrete_set(kinds, series);
    // The aligned set starts at beat 2 for every kind.
    std::ostringstream out;
    if (a.with_beat) out << "beat,";
    for (std::size_t c = 0; c < set.channels(); ++c) out << (c ? "," : "") << set.channel_names()[c];
    out << '\n';
    for (std::size_t t = 0; t < set.observations(); ++t) {
        if (a.with_beat) out << t + 2 << ',';
        for (std::size_t c = 0; c < set.channels(); ++c) out << (c ? "," : "") << set.at(t, c);
        out << '\n';
    }
    emit(a.out, out.str());
    return 0;
}

// ---------------------------------------------------------------------------

void add_seed(CLI::App* cmd, std::optional<std::uint64_t>& seed) {
    cmd->add_option("--seed", seed, "Random seed (falls back to HOINET_SEED, then 0)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"High-order interaction analysis of networks of discrete variables and time series"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "hoinet 1.0");

    // simulate
    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Generate a dataset from a simulated system");
    simulate->add_option("system", sim.system, "System to simulate")
        ->required()
        ->check(CLI::IsMember({"three-node-static", "three-node-dynamic", "binary10", "var-stars"}));
    simulate->add_option("--out,-o", sim.out, "Dataset CSV path")->required();
    simulate->add_option("--truth", sim.sidecar, "Metadata JSON path (default: dataset path with .json)");
    simulate->add_option("--n", sim.n, "Observations / samples")->capture_default_str()->check(CLI::PositiveNumber);
    add_seed(simulate, sim.seed);
    simulate->add_option("--alpha", sim.stat.alpha, "three-node-static: S1 -> S2 copy probability")->capture_default_str();
    simulate->add_option("--beta", sim.stat.beta, "three-node-static: S1 -> S3 reliability")->capture_default_str();
    simulate->add_option("--gamma", sim.stat.gamma, "three-node-static: S2 -> S3 reliability")->capture_default_str();
    simulate->add_option("--a", sim.dyn.a, "three-node-dynamic: S1 -> S2 coefficient")->capture_default_str();
    simulate->add_option("--b", sim.dyn.b, "three-node-dynamic: S1 -> S3 coefficient")->capture_default_str();
    simulate->add_option("--c", sim.dyn.c, "three-node-dynamic: S2 -> S3 coefficient")->capture_default_str();
    simulate->add_option("--gamma1", sim.bin.gamma1, "binary10: noisy-OR reliability")->capture_default_str();
    simulate->add_option("--gamma2", sim.bin.gamma2, "binary10: S5 copy reliability")->capture_default_str();
    simulate->add_option("--gamma3", sim.bin.gamma3, "binary10: S9 -> S10 copy reliability")->capture_default_str();
    simulate->add_option("--structure", sim.structure, "var-stars: competing or propagation")
        ->capture_default_str()
        ->check(CLI::IsMember({"competing", "propagation"}));
    simulate->add_option("--hub-out", sim.hub_out, "var-stars: S1 -> leaf coefficient")->capture_default_str();
    simulate->add_option("--other-arm", sim.other_arm, "var-stars: S6 arm coefficient")->capture_default_str();

    // analyze
    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "Infer the interaction network of a dataset");
    analyze->add_option("--mode", an.mode, "static (discrete symbols) or dynamic (time series)")
        ->capture_default_str()
        ->check(CLI::IsMember({"static", "dynamic"}));
    analyze->add_option("--input,-i", an.input, "Dataset CSV")->required()->check(CLI::ExistingFile);
    analyze->add_option("--surrogates", an.surrogates, "Surrogates per test")->capture_default_str();
    analyze->add_option("--alpha", an.alpha, "Significance level")->capture_default_str();
    analyze->add_option("--iaaft-iter", an.iaaft_max_iter, "Maximum iAAFT iterations")->capture_default_str();
    analyze->add_option("--cis-null", an.cis_null,
                        "Static cIS null: conditional (permute within strata) or shuffle-all")
        ->capture_default_str()
        ->check(CLI::IsMember({"conditional", "shuffle-all"}));
    add_seed(analyze, an.seed);
    analyze->add_option("--p-max", an.p_max, "Largest VAR order tried by AIC")->capture_default_str();
    analyze->add_option("--q", an.q, "Restricted model order")->capture_default_str();
    analyze->add_option("--json", an.json, "Result JSON path");
    analyze->add_option("--dot", an.dot, "Result DOT graph path");
    analyze->add_flag("--bits", an.bits, "Print information values in bits instead of nats");

    // theory
    TheoryArgs th;
    auto* theory = app.add_subcommand("theory", "Exact measures of the three-node systems");
    theory->add_option("system", th.system, "System")->required()->check(CLI::IsMember({"three-node"}));
    theory->add_option("--kind", th.kind, "static or dynamic")
        ->capture_default_str()
        ->check(CLI::IsMember({"static", "dynamic"}));
    theory->add_flag("--sweep", th.sweep,
                     "Sweep alpha in [0.5, 1] (gamma = 1.5 - alpha) or a in [0, 1] (c = 1 - a)");
    theory->add_option("--alpha", th.stat.alpha)->capture_default_str();
    theory->add_option("--beta", th.stat.beta)->capture_default_str();
    theory->add_option("--gamma", th.stat.gamma)->capture_default_str();
    theory->add_option("--a", th.dyn.a)->capture_default_str();
    theory->add_option("--b", th.dyn.b)->capture_default_str();
    theory->add_option("--c", th.dyn.c)->capture_default_str();
    theory->add_option("--out,-o", th.out, "CSV path (default: stdout)");
    theory->add_flag("--bits", th.bits, "Report information values in bits");

    // benchmark
    BenchmarkArgs bm;
    auto* bench = app.add_subcommand("benchmark", "Sensitivity/specificity of network reconstruction");
    bench->add_option("--scenario", bm.scenario)
        ->capture_default_str()
        ->check(CLI::IsMember({"binary10", "var-stars-competing", "var-stars-propagation"}));
    bench->add_option("--lengths", bm.lengths, "Data lengths")->delimiter(',')->capture_default_str();
    bench->add_option("--params", bm.params, "var-stars hub coefficients (other arm = 1 - value)")
        ->delimiter(',')
        ->capture_default_str();
    bench->add_option("--runs", bm.runs, "Runs per grid point")->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--surrogates", bm.surrogates)->capture_default_str();
    bench->add_option("--alpha", bm.alpha)->capture_default_str();
    bench->add_option("--cis-null", bm.cis_null, "Static cIS null: conditional or shuffle-all")
        ->capture_default_str()
        ->check(CLI::IsMember({"conditional", "shuffle-all"}));
    add_seed(bench, bm.seed);
    bench->add_option("--p-max", bm.p_max)->capture_default_str();
    bench->add_option("--q", bm.q)->capture_default_str();
    bench->add_option("--jobs,-j", bm.jobs, "Worker threads (0: all cores)")->capture_default_str();
    bench->add_option("--out,-o", bm.out, "Report CSV path (default: stdout)");

    // derive
    DeriveArgs dv;
    auto* derive = app.add_subcommand("derive", "Beat-to-beat derived variables");
    derive->add_option("--kind", dv.kinds, "hv, sv, rp (comma-separated for an aligned set), co or pr")
        ->required()
        ->delimiter(',')
        ->check(CLI::IsMember({"hv", "sv", "rp", "co", "pr"}));
    derive->add_option("--input,-i", dv.input, "Beat series CSV")->required()->check(CLI::ExistingFile);
    derive->add_option("--beta", dv.beta, "Stroke volume calibration factor (co, pr)")->capture_default_str();
    derive->add_option("--out,-o", dv.out, "CSV path (default: stdout)");
    derive->add_flag("--with-beat", dv.with_beat, "Add a leading beat-number column");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) return run_simulate(sim);
        if (*analyze) return run_analyze(an);
        if (*theory) return run_theory(th);
        if (*bench) return run_benchmark(bm);
        if (*derive) return run_derive(dv);
    } catch (const std::exception& e) {
        std::cerr << "hoinet: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
