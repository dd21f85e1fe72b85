#include "cavityswap/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include <json.hpp>

namespace cavityswap {

namespace {

using nlohmann::json;

void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}

double now_seconds() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

// ---------------------------------------------------------------------------
// Units

double angular_frequency_from(double value, const std::string& unit) {
    if (unit == "rad/s") return value;
    double scale = 0.0;
    if (unit == "GHz") scale = 1e9;
    else if (unit == "MHz") scale = 1e6;
    else if (unit == "kHz") scale = 1e3;
    else if (unit == "Hz") scale = 1.0;
    else throw ConfigError("unknown frequency unit: " + unit);
    return kTwoPi * value * scale;   // quoted values are omega/2pi
}

double rate_from(double value, const std::string& unit) {
    if (unit == "1/s") return value;
    if (unit == "1/ms") return value * 1e3;
    if (unit == "1/us") return value * 1e6;
    // Lifetimes: rate = 1 / (value * scale)
    double scale = 0.0;
    if (unit == "s") scale = 1.0;
    else if (unit == "ms") scale = 1e-3;
    else if (unit == "us") scale = 1e-6;
    else throw ConfigError("unknown rate unit: " + unit);
    require(value > 0.0, "lifetime must be positive");
    return 1.0 / (value * scale);
}

double quantity(const json& node, double (*convert)(double, const std::string&)) {
    require(node.is_object() && node.contains("value") && node.contains("unit"),
            "quantities must look like {\"value\": x, \"unit\": \"GHz\"}");
    return convert(node["value"].get<double>(), node["unit"].get<std::string>());
}

std::vector<double> rate_list(const json& node, int n_pairs) {
    std::vector<double> rates;
    if (node.is_array()) {
        for (const auto& item : node) rates.push_back(quantity(item, rate_from));
    } else {
        rates.assign(n_pairs, quantity(node, rate_from));
    }
    require(static_cast<int>(rates.size()) == n_pairs,
            "decoherence rate list does not match n_pairs");
    return rates;
}

// ---------------------------------------------------------------------------
// Spec handling

std::vector<double> resolve_deltas(const SweepSpec& spec, int n_pairs) {
    std::vector<double> deltas = spec.deltas;
    if (deltas.empty()) deltas = {kDefaultDelta1, kDefaultDelta2};
    if (static_cast<int>(deltas.size()) > n_pairs) deltas.resize(n_pairs);
    while (static_cast<int>(deltas.size()) < n_pairs) deltas.push_back(deltas.back() * 0.5);
    return deltas;
}

DecoherenceConfig resolve_decoherence(const SweepSpec& spec, int n_pairs) {
    DecoherenceConfig deco = spec.decoherence;
    if (static_cast<int>(deco.kappa_a.size()) != n_pairs) {
        const double ka = deco.kappa_a.empty() ? 1.0 / 20e-6 : deco.kappa_a.front();
        deco.kappa_a.assign(n_pairs, ka);
    }
    if (static_cast<int>(deco.kappa_b.size()) != n_pairs) {
        const double kb = deco.kappa_b.empty() ? 1.0 / 20e-6 : deco.kappa_b.front();
        deco.kappa_b.assign(n_pairs, kb);
    }
    deco.validate(n_pairs);
    return deco;
}

std::string fmt(const char* format, double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, x);
    return buf;
}

} // namespace

void SweepSpec::validate() const {
    require(!b_values.empty(), "sweep needs at least one b value");
    for (double b : b_values) require(b > 1.0, "b values must be > 1");
    require(!scenarios.empty(), "sweep needs at least one scenario");
    require(n_pairs >= 1, "n_pairs must be >= 1");
    require(fock_cutoff >= 2, "fock_cutoff must be >= 2");
    require(jobs >= 0, "jobs must be >= 0");
    integrator.validate();
}

SweepSpec default_sweep_spec() {
    SweepSpec spec;
    for (int b = 11; b <= 31; b += 2) spec.b_values.push_back(double(b));
    spec.scenarios = {Scenario::I, Scenario::II, Scenario::III, Scenario::IV};
    spec.deltas = {kDefaultDelta1, kDefaultDelta2};
    spec.decoherence = DecoherenceConfig::paper_defaults(2);
    return spec;
}

SweepSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }

    SweepSpec spec = default_sweep_spec();
    if (doc.contains("system")) {
        const auto& sys = doc["system"];
        if (sys.contains("n_pairs")) spec.n_pairs = sys["n_pairs"].get<int>();
        if (sys.contains("fock_cutoff")) spec.fock_cutoff = sys["fock_cutoff"].get<int>();
        if (sys.contains("dimension_cap")) spec.dimension_cap = sys["dimension_cap"].get<long>();
    }
    if (doc.contains("couplings")) {
        const auto& c = doc["couplings"];
        if (c.contains("deltas")) {
            spec.deltas.clear();
            for (const auto& d : c["deltas"])
                spec.deltas.push_back(quantity(d, angular_frequency_from));
        }
    }
    if (doc.contains("decoherence")) {
        const auto& d = doc["decoherence"];
        spec.decoherence = DecoherenceConfig::none(spec.n_pairs);
        if (d.contains("kappa_a")) spec.decoherence.kappa_a = rate_list(d["kappa_a"], spec.n_pairs);
        if (d.contains("kappa_b")) spec.decoherence.kappa_b = rate_list(d["kappa_b"], spec.n_pairs);
        if (d.contains("kappa")) {
            spec.decoherence.kappa_a = rate_list(d["kappa"], spec.n_pairs);
            spec.decoherence.kappa_b = spec.decoherence.kappa_a;
        }
        if (d.contains("gamma")) spec.decoherence.gamma = quantity(d["gamma"], rate_from);
        if (d.contains("gamma_phi"))
            spec.decoherence.gamma_phi = quantity(d["gamma_phi"], rate_from);
        if (d.contains("sz_convention")) {
            const std::string conv = d["sz_convention"].get<std::string>();
            if (conv == "unhalved") spec.decoherence.sz_convention = SzConvention::Unhalved;
            else if (conv == "halved") spec.decoherence.sz_convention = SzConvention::Halved;
            else throw ConfigError("sz_convention must be unhalved or halved");
        }
    }
    if (doc.contains("integrator")) {
        const auto& i = doc["integrator"];
        if (i.contains("method")) {
            const std::string m = i["method"].get<std::string>();
            if (m == "fixed-rk4") spec.integrator.method = IntegratorOptions::Method::FixedRk4;
            else if (m == "adaptive") spec.integrator.method = IntegratorOptions::Method::Adaptive;
            else throw ConfigError("integrator method must be fixed-rk4 or adaptive");
        }
        if (i.contains("dt")) spec.integrator.dt = i["dt"].get<double>();
        if (i.contains("tolerance")) spec.integrator.tolerance = i["tolerance"].get<double>();
        if (i.contains("krylov_dim")) spec.integrator.krylov_dim = i["krylov_dim"].get<int>();
        if (i.contains("samples")) spec.integrator.samples = i["samples"].get<int>();
        if (i.contains("record_stride"))
            spec.integrator.record_stride = i["record_stride"].get<int>();
        if (i.contains("monitor")) spec.integrator.monitor = i["monitor"].get<bool>();
    }
    if (doc.contains("sweep")) {
        const auto& s = doc["sweep"];
        if (s.contains("b_values")) {
            spec.b_values = s["b_values"].get<std::vector<double>>();
        } else if (s.contains("b_min") && s.contains("b_max") && s.contains("b_steps")) {
            const double lo = s["b_min"].get<double>();
            const double hi = s["b_max"].get<double>();
            const int n = s["b_steps"].get<int>();
            require(n >= 1 && hi >= lo, "invalid b grid");
            spec.b_values.clear();
            for (int k = 0; k < n; ++k)
                spec.b_values.push_back(n == 1 ? lo : lo + (hi - lo) * double(k) / double(n - 1));
        }
        if (s.contains("scenarios")) {
            spec.scenarios.clear();
            for (const auto& name : s["scenarios"])
                spec.scenarios.push_back(scenario_from_name(name.get<std::string>()));
        }
        if (s.contains("jobs")) spec.jobs = s["jobs"].get<int>();
    }
    if (doc.contains("output")) {
        const auto& o = doc["output"];
        if (o.contains("path")) spec.output_path = o["path"].get<std::string>();
        if (o.contains("format")) {
            const std::string f = o["format"].get<std::string>();
            if (f == "csv") spec.format = OutputFormat::Csv;
            else if (f == "json") spec.format = OutputFormat::Json;
            else throw ConfigError("output format must be csv or json");
        }
    }
    spec.validate();
    return spec;
}

ScenarioState scenario_initial_state(Scenario scenario, const SystemLayout& layout) {
    const int n = layout.n_pairs();
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    std::vector<int> occ(layout.n_modes(), 0);

    auto index_of = [&](std::initializer_list<int> occupations) {
        std::copy(occupations.begin(), occupations.end(), occ.begin());
        return layout.basis_index(occ, QubitLevel::Ground);
    };

    if (scenario == Scenario::EprInput) {
        std::fill(occ.begin(), occ.end(), 0);
        for (int j = 0; j < n; ++j) occ[layout.mode_a(j)] = 1;
        StateVector psi = StateVector::Zero(layout.dim());
        psi(layout.basis_index(occ, QubitLevel::Ground)) = 1.0;
        return ScenarioState{scenario, QuantumState::pure(std::move(psi), Frame::Rotating)};
    }

    require(n == 2, "scenarios i-iv are defined for N = 2");
    switch (scenario) {
        case Scenario::I: {
            // (|00> + |11>)_a / sqrt2, |00>_b
            StateVector psi = StateVector::Zero(layout.dim());
            psi(index_of({0, 0, 0, 0})) = inv_sqrt2;
            psi(index_of({1, 1, 0, 0})) = inv_sqrt2;
            return ScenarioState{scenario, QuantumState::pure(std::move(psi), Frame::Rotating)};
        }
        case Scenario::II: {
            // (|00> + |11>)_a / sqrt2, (|00> - |11>)_b / sqrt2
            StateVector psi = StateVector::Zero(layout.dim());
            psi(index_of({0, 0, 0, 0})) = 0.5;
            psi(index_of({0, 0, 1, 1})) = -0.5;
            psi(index_of({1, 1, 0, 0})) = 0.5;
            psi(index_of({1, 1, 1, 1})) = -0.5;
            return ScenarioState{scenario, QuantumState::pure(std::move(psi), Frame::Rotating)};
        }
        case Scenario::III: {
            // (|00><00| + |11><11|)_a / 2, |00>_b
            Operator rho = Operator::Zero(layout.dim(), layout.dim());
            const long i0 = index_of({0, 0, 0, 0});
            const long i1 = index_of({1, 1, 0, 0});
            rho(i0, i0) = 0.5;
            rho(i1, i1) = 0.5;
            return ScenarioState{scenario, QuantumState::mixed(std::move(rho), Frame::Rotating)};
        }
        case Scenario::IV: {
            // (|00><00| + |11><11|)_a / 2, (2|00><00| + |11><11|)_b / 3
            Operator rho = Operator::Zero(layout.dim(), layout.dim());
            rho(index_of({0, 0, 0, 0}), index_of({0, 0, 0, 0})) = 1.0 / 3.0;
            rho(index_of({0, 0, 1, 1}), index_of({0, 0, 1, 1})) = 1.0 / 6.0;
            rho(index_of({1, 1, 0, 0}), index_of({1, 1, 0, 0})) = 1.0 / 3.0;
            rho(index_of({1, 1, 1, 1}), index_of({1, 1, 1, 1})) = 1.0 / 6.0;
            return ScenarioState{scenario, QuantumState::mixed(std::move(rho), Frame::Rotating)};
        }
        default:
            throw ConfigError("scenario " + scenario_name(scenario) +
                              " has no built-in initial state");
    }
}

SweepRecord run_swap_point(double b, Scenario scenario, const SweepSpec& spec) {
    const double wall_start = now_seconds();
    const ProtocolConfig config = derive_parameters(b, resolve_deltas(spec, spec.n_pairs));
    const SystemLayout layout = build_space(spec.n_pairs, spec.fock_cutoff, spec.dimension_cap);
    const DecoherenceConfig deco = resolve_decoherence(spec, spec.n_pairs);
    const ScenarioState initial = scenario_initial_state(scenario, layout);
    const double t_swap = config.t_swap();

    try {
        const Trajectory traj = evolve_lindblad(config, deco, layout, initial.state, t_swap,
                                                spec.integrator, spec.hamiltonian);
        QuantumState final_state = traj.final_state();
        if (final_state.frame() == Frame::Rotating)
            final_state = frame_to_interaction(final_state, t_swap, config, layout);

        const IdealSwapResult ideal = ideal_swapped_state(initial, config, layout);
        const FidelityValue fidelity = uhlmann_fidelity(ideal.state, final_state);

        SweepRecord rec;
        rec.b = b;
        rec.scenario = scenario;
        rec.fidelity = fidelity.value();
        rec.t_swap = t_swap;
        rec.trace_error = traj.max_trace_error();
        rec.min_eig = traj.min_eigenvalue();
        rec.qubit_e_pop_max = traj.max_qubit_e_population();
        rec.wall_time = now_seconds() - wall_start;
        rec.flagged = rec.trace_error > 1e-8;
        return rec;
    } catch (const NumericalError& e) {
        throw NumericalError("point (b=" + fmt("%.6g", b) + ", scenario " +
                             scenario_name(scenario) + "): " + e.what());
    }
}

std::vector<SweepRecord> run_fidelity_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<double> b_sorted = spec.b_values;
    std::sort(b_sorted.begin(), b_sorted.end());

    struct Job {
        double b;
        Scenario scenario;
    };
    std::vector<Job> jobs;
    for (Scenario s : spec.scenarios)
        for (double b : b_sorted) jobs.push_back({b, s});

    std::vector<SweepRecord> records(jobs.size());
    std::vector<std::string> failures;
    std::mutex failure_mutex;
    std::atomic<size_t> cursor{0};

    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int workers =
        std::max(1, std::min<int>(spec.jobs > 0 ? spec.jobs : std::max(1, hw),
                                  static_cast<int>(jobs.size())));
    auto work = [&]() {
        for (;;) {
            const size_t i = cursor.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                records[i] = run_swap_point(jobs[i].b, jobs[i].scenario, spec);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failures.emplace_back(e.what());
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (!failures.empty()) throw NumericalError("sweep failed: " + failures.front());

    const std::string body =
        spec.format == OutputFormat::Csv ? to_csv(records) : to_json(records);
    write_file_atomic(spec.output_path, body);
    return records;
}

EprRecord run_epr_generation(int n_pairs, double b, const SweepSpec& spec) {
    require(n_pairs >= 1, "n_pairs must be >= 1");
    const double wall_start = now_seconds();
    const ProtocolConfig config = derive_parameters(b, resolve_deltas(spec, n_pairs));
    const SystemLayout layout = build_space(n_pairs, spec.fock_cutoff, spec.dimension_cap);
    const DecoherenceConfig deco = resolve_decoherence(spec, n_pairs);
    const ScenarioState initial = scenario_initial_state(Scenario::EprInput, layout);
    const double t_epr = config.t_epr();

    try {
        const Trajectory traj = evolve_lindblad(config, deco, layout, initial.state, t_epr,
                                                spec.integrator, spec.hamiltonian);
        QuantumState final_state = traj.final_state();
        if (final_state.frame() == Frame::Rotating)
            final_state = frame_to_interaction(final_state, t_epr, config, layout);

        const QuantumState target = epr_target_state(n_pairs, config, layout);

        EprRecord rec;
        rec.n_pairs = n_pairs;
        rec.b = b;
        rec.t_epr = t_epr;
        rec.fidelity = uhlmann_fidelity(target, final_state).value();

        // Reduced (a_j, b_j) states against a single EPR pair.
        const int d = layout.fock_cutoff();
        StateVector pair_target = StateVector::Zero(static_cast<long>(d) * d);
        pair_target(1) = 1.0 / std::numbers::sqrt2;              // |1>_a |0>_b
        pair_target(d) = Complex(0.0, 1.0 / std::numbers::sqrt2); // |0>_a |1>_b
        const QuantumState pair_target_state =
            QuantumState::pure(std::move(pair_target), Frame::Interaction);
        const Operator rho_full = final_state.density_matrix();
        for (int j = 0; j < n_pairs; ++j) {
            const int keep[2] = {layout.mode_a(j), layout.mode_b(j)};
            Operator reduced = partial_trace(layout, rho_full, keep);
            const QuantumState pair_state =
                QuantumState::mixed_unchecked(std::move(reduced), Frame::Interaction);
            rec.pair_fidelities.push_back(
                uhlmann_fidelity(pair_target_state, pair_state).value());
        }

        rec.trace_error = traj.max_trace_error();
        rec.min_eig = traj.min_eigenvalue();
        rec.qubit_e_pop_max = traj.max_qubit_e_population();
        rec.wall_time = now_seconds() - wall_start;
        return rec;
    } catch (const NumericalError& e) {
        throw NumericalError("epr (b=" + fmt("%.6g", b) + ", N=" + std::to_string(n_pairs) +
                             "): " + e.what());
    }
}

ValidityReport run_validity_check(double b, const SweepSpec& spec) {
    const ProtocolConfig config = derive_parameters(b, resolve_deltas(spec, spec.n_pairs));
    return check_validity(config);
}

std::string to_csv(const std::vector<SweepRecord>& records) {
    std::string out = "b,scenario,fidelity,t_swap_ns,trace_error,min_eig,"
                      "qubit_e_pop_max,wall_time_s\n";
    for (const auto& r : records) {
        out += fmt("%.10g", r.b);
        out += ",";
        out += scenario_name(r.scenario);
        out += ",";
        out += fmt("%.12g", r.fidelity);
        out += ",";
        out += fmt("%.12g", r.t_swap * 1e9);
        out += ",";
        out += fmt("%.6g", r.trace_error);
        out += ",";
        out += fmt("%.6g", r.min_eig);
        out += ",";
        out += fmt("%.6g", r.qubit_e_pop_max);
        out += ",";
        out += fmt("%.3f", r.wall_time);
        out += "\n";
    }
    return out;
}

namespace {

json record_to_json(const SweepRecord& r) {
    return json{{"b", r.b},
                {"scenario", scenario_name(r.scenario)},
                {"fidelity", r.fidelity},
                {"t_swap_ns", r.t_swap * 1e9},
                {"trace_error", r.trace_error},
                {"min_eig", r.min_eig},
                {"qubit_e_pop_max", r.qubit_e_pop_max},
                {"wall_time_s", r.wall_time},
                {"flagged", r.flagged}};
}

} // namespace

std::string to_json(const std::vector<SweepRecord>& records) {
    json arr = json::array();
    for (const auto& r : records) arr.push_back(record_to_json(r));
    return arr.dump(2) + "\n";
}

std::string to_json(const EprRecord& r) {
    json doc{{"n_pairs", r.n_pairs},
             {"b", r.b},
             {"t_epr_ns", r.t_epr * 1e9},
             {"fidelity", r.fidelity},
             {"pair_fidelities", r.pair_fidelities},
             {"trace_error", r.trace_error},
             {"min_eig", r.min_eig},
             {"qubit_e_pop_max", r.qubit_e_pop_max},
             {"wall_time_s", r.wall_time}};
    return doc.dump(2) + "\n";
}

std::string to_json(const ValidityReport& report) {
    json ld = json::array();
    for (const auto& c : report.large_detuning) {
        ld.push_back(json{{"pair", c.pair + 1},
                          {"delta_over_g", c.delta_over_g},
                          {"delta_over_mu", c.delta_over_mu},
                          {"verdict", verdict_name(c.verdict)}});
    }
    json cp = json::array();
    for (const auto& c : report.cross_pair) {
        cp.push_back(json{{"pairs", {c.pair_j + 1, c.pair_k + 1}},
                          {"detuning_scale", c.detuning_scale},
                          {"vs_gg", c.vs_gg},
                          {"vs_gmu", c.vs_gmu},
                          {"vs_mumu", c.vs_mumu},
                          {"verdict", verdict_name(c.verdict)}});
    }
    json doc{{"overall", verdict_name(report.overall)},
             {"note", report.note},
             {"large_detuning", ld},
             {"cross_pair", cp}};
    return doc.dump(2) + "\n";
}

std::string format_validity_report(const ValidityReport& report) {
    std::string out = "dispersive validity: " + verdict_name(report.overall) + "\n";
    for (const auto& c : report.large_detuning) {
        out += "  pair " + std::to_string(c.pair + 1) + ": Delta/g = " +
               fmt("%.4g", c.delta_over_g) + ", Delta/mu = " + fmt("%.4g", c.delta_over_mu) +
               "  [" + verdict_name(c.verdict) + "]\n";
    }
    for (const auto& c : report.cross_pair) {
        out += "  pairs (" + std::to_string(c.pair_j + 1) + "," +
               std::to_string(c.pair_k + 1) + "): |dD|/(D^-1+D^-1) over gg, gmu, mumu = " +
               fmt("%.4g", c.vs_gg) + ", " + fmt("%.4g", c.vs_gmu) + ", " +
               fmt("%.4g", c.vs_mumu) + "  [" + verdict_name(c.verdict) + "]\n";
    }
    if (!report.note.empty()) out += "  note: " + report.note + "\n";
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out.good()) throw ConfigError("cannot write output file: " + tmp);
        out << content;
        out.flush();
        if (!out.good()) throw ConfigError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw ConfigError("cannot rename " + tmp + " to " + path);
    }
}

int run_selftest(std::ostream& out) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok, const std::string& detail = "") {
        out << "selftest: " << name << " ... " << (ok ? "ok" : "FAIL");
        if (!ok && !detail.empty()) out << "  (" << detail << ")";
        out << "\n";
        if (!ok) failures++;
    };

    // Layout dimensions.
    check("layout dimensions",
          build_space(2, 3).dim() == 162 && build_space(1, 2).dim() == 8 &&
              build_space(3, 2).dim() == 128);

    // Truncated commutator [a, a^dag] = I except the top Fock level.
    {
        const SystemLayout layout = build_space(1, 4);
        const Operator a = annihilation_op(layout, 0);
        const Operator comm = a * a.adjoint() - a.adjoint() * a;
        bool ok = true;
        std::vector<int> occ(2);
        int qubit = 0;
        for (long i = 0; i < layout.dim() && ok; ++i) {
            layout.basis_occupations(i, occ, qubit);
            const double expected = occ[0] == 3 ? -3.0 : 1.0;
            ok = std::abs(comm(i, i).real() - expected) < 1e-14;
        }
        ok = ok && (comm - Operator(comm.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
        check("truncated ladder commutator", ok);
    }

    // Unitarity of expm(-iHt) for random Hermitian H.
    {
        std::mt19937 rng(7);
        std::normal_distribution<double> dist;
        Operator h(24, 24);
        for (int i = 0; i < 24; ++i)
            for (int j = 0; j < 24; ++j) h(i, j) = Complex(dist(rng), dist(rng));
        h = 0.5 * (h + h.adjoint()).eval();
        const Operator u = expm(h, Complex(0.0, -0.37));
        const double err =
            (u.adjoint() * u - Operator::Identity(24, 24)).cwiseAbs().maxCoeff();
        check("expm unitarity", err <= 1e-9, fmt("%.3g", err));
    }

    // Operators embedded on disjoint modes commute exactly.
    {
        const SystemLayout layout = build_space(2, 3);
        const Operator x = annihilation_op(layout, layout.mode_a(0));
        const Operator y = creation_op(layout, layout.mode_b(1));
        check("disjoint-mode commutation", (x * y - y * x).cwiseAbs().maxCoeff() == 0.0);
    }

    // Beam-splitter pair map: lambda t = pi/2 swaps with phase i.
    {
        const Operator u = pair_unitary(1.0, std::numbers::pi / 2.0, 3);
        const Complex got = u(3, 1);   // <01| U |10>, d = 3
        const bool ok = std::abs(got - Complex(0.0, 1.0)) < 1e-12 &&
                        std::abs(u(1, 1)) < 1e-12;
        check("pair swap at lambda*t = pi/2", ok);
    }

    // Ideal-limit exchange: effective Hamiltonian, no dissipation, F = 1.
    {
        SweepSpec spec = default_sweep_spec();
        spec.decoherence = DecoherenceConfig::none(2);
        spec.hamiltonian = HamiltonianKind::Effective;
        spec.integrator.samples = 5;
        const SweepRecord rec = run_swap_point(21.0, Scenario::I, spec);
        check("ideal-limit exchange fidelity", std::abs(rec.fidelity - 1.0) <= 1e-9,
              fmt("%.3g", std::abs(rec.fidelity - 1.0)));
    }

    // Fidelity of commuting diagonal states (Bhattacharyya sum).
    {
        Operator rho = Operator::Zero(2, 2), sigma = Operator::Zero(2, 2);
        rho(0, 0) = 2.0 / 3.0;
        rho(1, 1) = 1.0 / 3.0;
        sigma(0, 0) = 0.5;
        sigma(1, 1) = 0.5;
        const double f = uhlmann_fidelity(QuantumState::mixed(rho, Frame::Interaction),
                                          QuantumState::mixed(sigma, Frame::Interaction))
                             .value();
        const double expected = std::sqrt(1.0 / 3.0) + std::sqrt(1.0 / 6.0);
        check("commuting-state fidelity", std::abs(f - expected) <= 1e-12);
    }

    // EPR generation under the exact effective dynamics.
    {
        SweepSpec spec = default_sweep_spec();
        spec.decoherence = DecoherenceConfig::none(2);
        spec.hamiltonian = HamiltonianKind::Effective;
        spec.integrator.samples = 5;
        const EprRecord rec = run_epr_generation(2, 21.0, spec);
        check("ideal-limit EPR fidelity", std::abs(rec.fidelity - 1.0) <= 1e-9,
              fmt("%.3g", std::abs(rec.fidelity - 1.0)));
    }

    return failures;
}

} // namespace cavityswap
