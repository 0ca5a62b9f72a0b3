// Command-line front end: compiles the multi-controlled-Toffoli encoders,
// simulates them exactly, and emits the cluster statistics, decay curves and
// entanglement analyses as diff-friendly CSV/JSON reports.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "quditlab/quditlab.hpp"

namespace {

using namespace quditlab;

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot open output file '" + path + "'");
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void check_format(const std::string& f) {
    if (f != "csv" && f != "json")
        throw validation_error("format must be 'csv' or 'json'");
}

Circuit load_circuit(const std::string& path) {
    return circuit_from_json(json::parse(read_file(path)));
}

struct CompileArgs {
    std::string topology;
    int n = 0;
    bool full = false;
    std::string target_op = "flip01";
    std::string out;
};

GateSpec parse_target_op(const std::string& s) {
    if (s == "flip01") return flip(0, 0, 1);
    if (s == "flip12") return flip(0, 1, 2);
    if (s == "flip02") return flip(0, 0, 2);
    if (s == "shift") return shift(0, +1);
    throw validation_error("unknown target op '" + s + "'");
}

int cmd_compile(const CompileArgs& a) {
    Topology t = parse_topology(a.topology);
    BuildReport r = a.full ? build_full_mct(t, a.n, parse_target_op(a.target_op))
                           : build_encoder(t, a.n);
    write_file(a.out, circuit_to_json(r.circuit).dump(2) + "\n");
    std::cout << "wrote " << a.out << ": " << r.gate_count << " gates, depth " << r.depth << "\n";
    return 0;
}

struct SimulateArgs {
    std::string circuit;
    std::string input = "uniform";
    std::string out;
};

int cmd_simulate(const SimulateArgs& a) {
    Circuit c = load_circuit(a.circuit);
    StateVector in;
    if (a.input == "uniform") {
        in = StateVector::uniform_plus(c.dims, c.input_sites());
    } else {
        BasisString b = BasisString::parse(a.input);
        if (b.size() == static_cast<int>(c.input_sites().size()) && b.size() != c.site_count()) {
            // digits cover the input sites; ancillas start at |0>
            BasisString fullb = BasisString::zeros(c.site_count());
            auto inputs = c.input_sites();
            for (size_t i = 0; i < inputs.size(); ++i) fullb[inputs[i]] = b[static_cast<int>(i)];
            b = fullb;
        }
        in = StateVector::basis_state(c.dims, b);
    }
    StateVector out = run(in, c);
    write_file(a.out, state_to_json(out).dump(2) + "\n");
    std::cout << "wrote " << a.out << ": support " << out.support_size() << "\n";
    return 0;
}

struct StatsArgs {
    std::string circuit;
    bool exhaustive = false;
    uint64_t samples = 0;
    uint64_t seed = 0;
    int workers = 1;
    int max_inputs = 24;
    std::string out;
    std::string format = "csv";
};

std::string histogram_csv(const ClusterHistogram& h) {
    std::ostringstream os;
    os << "size,count,total_configs,frequency\n";
    for (const auto& [s, c] : h.counts)
        os << s << "," << c.str() << "," << h.total_configs.str() << ","
           << fmt12(static_cast<double>(c) / static_cast<double>(h.total_configs)) << "\n";
    return os.str();
}

int cmd_stats(const StatsArgs& a) {
    check_format(a.format);
    Circuit c = load_circuit(a.circuit);
    bool exhaustive = a.exhaustive;
    if (!exhaustive && a.samples == 0) {
        // default: exhaustive for small registers
        if (static_cast<int>(c.input_sites().size()) > 20)
            throw validation_error("more than 20 input sites: pass --exhaustive or --samples");
        exhaustive = true;
    }
    ClusterHistogram h = exhaustive ? cluster_histogram_exhaustive(c, a.workers, a.max_inputs)
                                    : cluster_histogram_sampled(c, a.samples, a.seed);
    if (a.format == "json") {
        json j;
        j["n"] = h.n;
        j["total_configs"] = h.total_configs.str();
        j["exhaustive"] = h.exhaustive;
        json counts = json::array();
        for (const auto& [s, cnt] : h.counts) counts.push_back({s, cnt.str()});
        j["counts"] = counts;
        j["empirical_S"] = empirical_S(h);
        write_file(a.out, j.dump(2) + "\n");
    } else {
        write_file(a.out, histogram_csv(h));
    }
    std::cout << "wrote " << a.out << ": S = " << fmt12(empirical_S(h)) << "\n";
    return 0;
}

struct PredictArgs {
    std::string topology;
    int n = 0;
    int kmax = 0;
    std::string out;
    std::string format = "csv";
};

int cmd_predict(const PredictArgs& a) {
    check_format(a.format);
    Topology t = parse_topology(a.topology);
    int kmax = a.kmax > 0 ? a.kmax : a.n;
    std::ostringstream os;
    if (a.format == "json") {
        json j;
        json fk = json::array();
        for (int k = 1; k <= kmax; ++k) fk.push_back({k, predicted_frequency(t, a.n, k)});
        j["f"] = fk;
        j["S"] = figure_of_merit(t, a.n);
        write_file(a.out, j.dump(2) + "\n");
    } else {
        os << "k,f\n";
        for (int k = 1; k <= kmax; ++k) os << k << "," << fmt12(predicted_frequency(t, a.n, k)) << "\n";
        os << "S," << fmt12(figure_of_merit(t, a.n)) << "\n";
        write_file(a.out, os.str());
    }
    std::cout << "wrote " << a.out << ": S = " << fmt12(figure_of_merit(t, a.n)) << "\n";
    return 0;
}

struct RecurrenceArgs {
    int depth = 0;
    std::string out;
    std::string format = "csv";
};

int cmd_recurrence(const RecurrenceArgs& a) {
    check_format(a.format);
    RecurrenceTable t = tree_recurrence(a.depth);
    if (a.format == "json") {
        json rows = json::array();
        for (int N = 2; N <= t.depth; ++N)
            for (int k = 1; k < N; ++k) rows.push_back({N, k, t.at(N, k).str()});
        json j;
        j["depth"] = t.depth;
        j["R"] = rows;
        write_file(a.out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "N,k,R\n";
        for (int N = 2; N <= t.depth; ++N)
            for (int k = 1; k < N; ++k) os << N << "," << k << "," << t.at(N, k).str() << "\n";
        write_file(a.out, os.str());
    }
    std::cout << "wrote " << a.out << "\n";
    return 0;
}

struct DecayArgs {
    std::string circuit;
    std::string params;
    double t_max = 0.0;
    int steps = 0;
    std::string mode = "direct";
    std::string out;
};

int cmd_decay(const DecayArgs& a) {
    Circuit c = load_circuit(a.circuit);
    NoiseParams p = noise_from_json(json::parse(read_file(a.params)));
    DephasingMode mode = a.mode == "derived" ? DephasingMode::Derived
                        : a.mode == "direct" ? DephasingMode::Direct
                        : throw validation_error("mode must be 'direct' or 'derived'");
    if (a.t_max <= 0 || a.steps < 1) throw validation_error("need positive --t-max and --steps");
    RateSet rates = derive_rates(p, mode);
    StateVector out_state = run(StateVector::uniform_plus(c.dims, c.input_sites()), c);
    std::vector<double> grid;
    for (int i = 0; i <= a.steps; ++i) grid.push_back(a.t_max * i / a.steps);
    auto series = evolve_fidelity(out_state, rates, grid);
    std::ostringstream os;
    os << "t_us,fidelity\n";
    for (const auto& [t, f] : series) os << fmt12(t) << "," << fmt12(f) << "\n";
    write_file(a.out, os.str());
    std::cout << "wrote " << a.out << ": slope " << fmt12(fidelity_slope(out_state, rates))
              << " /us\n";
    return 0;
}

struct AnalyzeArgs {
    std::string what;
    int n = 0;
    std::string profile = "uniform";
    std::string error;
    int at = -1;
    std::string out;
};

AmplitudeProfile load_profile(const std::string& spec, int n) {
    if (spec == "uniform") return AmplitudeProfile::uniform(n);
    AmplitudeProfile p = profile_from_json(json::parse(read_file(spec)));
    if (p.size() != n) throw validation_error("profile size does not match --n");
    return p;
}

int cmd_analyze(const AnalyzeArgs& a) {
    AmplitudeProfile prof = load_profile(a.profile, a.n);
    std::ostringstream os;
    if (a.what == "purity") {
        StateVector closed = closed_final_state(prof);
        os << "site,purity_pred,purity_num,abs_err\n";
        for (int j = 0; j < a.n; ++j) {
            double pred = purity_prediction(j, prof);
            double num = purity(reduced_state(closed, {j}));
            os << j << "," << fmt12(pred) << "," << fmt12(num) << ","
               << fmt12(std::abs(pred - num)) << "\n";
        }
    } else if (a.what == "dispersion") {
        BuildReport full = build_full_mct(Topology::TypeALinear, a.n, flip(0, 0, 1));
        // encoder has n-1 gates, then the central controlled target; inject
        // right after it, before decoding
        int center = a.n;
        std::vector<std::pair<ErrorKind, int>> cases;
        if (!a.error.empty()) {
            if (a.at < 0 || a.at >= a.n) throw validation_error("--at must name a control site");
            cases.emplace_back(parse_error_kind(a.error), a.at);
        } else {
            for (ErrorKind k : {ErrorKind::Z2, ErrorKind::X01})
                for (int at = 0; at < a.n; ++at) cases.emplace_back(k, at);
        }
        os << "kind,k,i,D_num,D_pred\n";
        for (auto [kind, at] : cases) {
            ErrorInjection inj(center, error_gate(kind, at));
            for (int i = 0; i < a.n; ++i) {
                double num = dispersion(full.circuit, inj, i, prof);
                double pred = (kind == ErrorKind::Z2 || kind == ErrorKind::X01)
                                  ? dispersion_prediction(kind, i, prof)
                                  : 0.0;
                os << error_kind_name(kind) << "," << at << "," << i << "," << fmt12(num) << ","
                   << fmt12(pred) << "\n";
            }
        }
    } else {
        throw validation_error("analyze expects 'purity' or 'dispersion'");
    }
    write_file(a.out, os.str());
    std::cout << "wrote " << a.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qutrit multi-controlled-Toffoli compiler and error-analysis toolkit"};
    app.require_subcommand(1);

    CompileArgs ca;
    auto* compile = app.add_subcommand("compile", "build an encoder or full gate circuit");
    compile->add_option("--topology", ca.topology)->required();
    compile->add_option("--n", ca.n)->required();
    compile->add_flag("--full", ca.full);
    compile->add_option("--target-op", ca.target_op)->capture_default_str();
    compile->add_option("--out", ca.out)->required();

    SimulateArgs sa;
    auto* simulate = app.add_subcommand("simulate", "run a circuit on a basis or uniform input");
    simulate->add_option("--circuit", sa.circuit)->required();
    simulate->add_option("--input", sa.input)->capture_default_str();
    simulate->add_option("--out", sa.out)->required();

    StatsArgs ta;
    auto* stats = app.add_subcommand("stats", "modified-cluster histogram over binary inputs");
    stats->add_option("--circuit", ta.circuit)->required();
    stats->add_flag("--exhaustive", ta.exhaustive);
    stats->add_option("--samples", ta.samples);
    stats->add_option("--seed", ta.seed)->capture_default_str();
    stats->add_option("--workers", ta.workers)->capture_default_str();
    stats->add_option("--max-inputs", ta.max_inputs)->capture_default_str();
    stats->add_option("--out", ta.out)->required();
    stats->add_option("--format", ta.format)->capture_default_str();

    PredictArgs pa;
    auto* predict = app.add_subcommand("predict", "closed-form cluster frequencies and figure of merit");
    predict->add_option("--topology", pa.topology)->required();
    predict->add_option("--n", pa.n)->required();
    predict->add_option("--kmax", pa.kmax);
    predict->add_option("--out", pa.out)->required();
    predict->add_option("--format", pa.format)->capture_default_str();

    RecurrenceArgs ra;
    auto* recurrence = app.add_subcommand("recurrence", "pairing-tree disjoint-path table");
    recurrence->add_option("--depth", ra.depth)->required();
    recurrence->add_option("--out", ra.out)->required();
    recurrence->add_option("--format", ra.format)->capture_default_str();

    DecayArgs da;
    auto* decay = app.add_subcommand("decay", "fidelity decay of a circuit's uniform-input output");
    decay->add_option("--circuit", da.circuit)->required();
    decay->add_option("--params", da.params)->required();
    decay->add_option("--t-max", da.t_max)->required();
    decay->add_option("--steps", da.steps)->required();
    decay->add_option("--mode", da.mode)->capture_default_str();
    decay->add_option("--out", da.out)->required();

    AnalyzeArgs aa;
    auto* analyze = app.add_subcommand("analyze", "purity or dispersion report for the excitation chain");
    analyze->add_option("what", aa.what)->required();
    analyze->add_option("--n", aa.n)->required();
    analyze->add_option("--profile", aa.profile)->capture_default_str();
    analyze->add_option("--error", aa.error);
    analyze->add_option("--at", aa.at);
    analyze->add_option("--out", aa.out)->required();

    try {
        app.parse(argc, argv);
        if (*compile) return cmd_compile(ca);
        if (*simulate) return cmd_simulate(sa);
        if (*stats) return cmd_stats(ta);
        if (*predict) return cmd_predict(pa);
        if (*recurrence) return cmd_recurrence(ra);
        if (*decay) return cmd_decay(da);
        if (*analyze) return cmd_analyze(aa);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const quditlab::capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 2;
    } catch (const quditlab::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
