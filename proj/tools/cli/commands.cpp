#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "sargcert/attack_forms.hpp"
#include "sargcert/bound_verifier.hpp"

namespace sargcert::cli {

namespace {

using ojson = nlohmann::ordered_json;

RunManifest start_manifest(std::string command, ojson parameters) {
    RunManifest m;
    m.command = std::move(command);
    m.parameters = std::move(parameters);
    m.started_at = timestamp_now();
    return m;
}

const char* status_of(bool asserted, bool ok) {
    if (!asserted) return "INFO";
    return ok ? "PASS" : "FAIL";
}

struct CheckTable {
    Report report;
    bool failed = false;

    explicit CheckTable(RunManifest m) {
        report.manifest = std::move(m);
        report.columns = {"check", "value", "bound", "relation", "asserted", "status", "display"};
    }

    // relation is one of ">=", "<=", "<", "==" (value compared to bound)
    void add(const std::string& name, double value, double bound, const std::string& relation, bool asserted) {
        bool ok = false;
        if (relation == ">=") ok = value >= bound;
        else if (relation == "<=") ok = value <= bound;
        else if (relation == "<") ok = value < bound;
        else if (relation == "==") ok = value == bound;
        if (asserted && !ok) failed = true;
        report.add_row({name, value, bound, relation, asserted, std::string(status_of(asserted, ok)),
                        format_display(value) + " " + relation + " " + format_display(bound)});
    }

    Report done() {
        report.manifest.summary = failed ? "FAIL" : "PASS";
        return std::move(report);
    }
};

void require_nu(int nu) {
    if (nu < 1 || nu > kMaxPhotons)
        throw UsageError("--nu must lie in 1.." + std::to_string(kMaxPhotons));
}

Format format_for_path(const std::string& path) {
    return std::filesystem::path(path).extension() == ".json" ? Format::Json : Format::Csv;
}

template <typename T>
T get_field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw UsageError(std::string("config: missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw UsageError(std::string("config: field '") + key + "' has the wrong type");
    }
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed, const char* where) {
    if (!j.is_object()) throw UsageError(std::string("config: ") + where + " must be an object");
    for (const auto& [key, _] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw UsageError(std::string("config: unknown field '") + key + "' in " + where);
    }
}

ojson sim_config_json(const SimConfig& c) {
    ojson j;
    j["protocol"] = to_string(c.protocol);
    if (c.source.kind == PhotonSource::Kind::Fixed) j["source"] = {{"type", "fixed"}, {"nu", c.source.nu}};
    else j["source"] = {{"type", "coherent"}, {"mu", c.source.mu}};
    j["depolarizing"] = c.depolarizing;
    j["transmittance"] = c.transmittance;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    return j;
}

}  // namespace

std::vector<double> GridSpec::points() const {
    if (!(std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(x_step)))
        throw UsageError("grid: bounds must be finite");
    if (x_min < 0.0) throw UsageError("grid: --x-min must be non-negative");
    if (x_max < x_min) throw UsageError("grid: --x-max must not be below --x-min");
    if (x_step <= 0.0) throw UsageError("grid: --x-step must be positive");
    const double count = std::floor((x_max - x_min) / x_step + 1e-9);
    if (count > 100000) throw UsageError("grid: too many points");
    std::vector<double> xs;
    for (long k = 0; k <= static_cast<long>(count); ++k) xs.push_back(x_min + k * x_step);
    return xs;
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    try {
        return nlohmann::json::parse(in, nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError("config: " + path + " is not valid JSON: " + e.what());
    }
}

SimConfig parse_sim_config(const nlohmann::json& j) {
    reject_unknown(j, {"protocol", "source", "depolarizing", "transmittance", "trials", "seed"}, "simulation config");
    SimConfig c;
    try {
        c.protocol = parse_protocol(get_field<std::string>(j, "protocol"));
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    const auto& src = j.contains("source") ? j.at("source") : throw UsageError("config: missing field 'source'");
    const auto type = get_field<std::string>(src, "type");
    if (type == "fixed") {
        reject_unknown(src, {"type", "nu"}, "source");
        c.source = PhotonSource::fixed(get_field<int>(src, "nu"));
    } else if (type == "coherent") {
        reject_unknown(src, {"type", "mu"}, "source");
        c.source = PhotonSource::coherent(get_field<double>(src, "mu"));
    } else {
        throw UsageError("config: source.type must be 'fixed' or 'coherent'");
    }
    c.depolarizing = get_field<double>(j, "depolarizing");
    c.transmittance = get_field<double>(j, "transmittance");
    c.trials = get_field<std::uint64_t>(j, "trials");
    if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed");
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    return c;
}

DecoyInputs decoy_from_simulation(const nlohmann::json& report) {
    if (!report.contains("sim_stats")) throw UsageError("keyrate: simulation report has no 'sim_stats'");
    const auto& s = report.at("sim_stats");
    const auto sifted = get_field<double>(s, "sifted");
    const auto conclusive = get_field<double>(s, "conclusive");
    const auto errors = get_field<double>(s, "errors");
    if (sifted <= 0) throw UsageError("keyrate: simulation has no sifted pulses");
    DecoyInputs d{conclusive / sifted, conclusive > 0 ? errors / conclusive : 0.0, {0, 0}, {0, 0}};
    for (const auto& row : s.at("per_nu")) {
        const int nu = get_field<int>(row, "nu");
        if (nu != 1 && nu != 2) continue;
        const auto c = get_field<double>(row, "conclusive");
        d.xi[nu - 1] = c / sifted;
        d.e_nu[nu - 1] = c > 0 ? get_field<double>(row, "errors") / c : 0.0;
    }
    return d;
}

DecoyInputs parse_keyrate_config(const nlohmann::json& j, const std::string& base_dir) {
    if (j.contains("sim_stats")) return decoy_from_simulation(j);
    reject_unknown(j, {"decoy", "simulation"}, "keyrate config");
    if (j.contains("decoy") == j.contains("simulation"))
        throw UsageError("keyrate config needs exactly one of 'decoy' or 'simulation'");
    if (j.contains("simulation")) {
        std::filesystem::path p = get_field<std::string>(j, "simulation");
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        return decoy_from_simulation(load_json_file(p.string()));
    }
    const auto& d = j.at("decoy");
    reject_unknown(d, {"p_conc", "e_bit", "xi1", "e1", "xi2", "e2"}, "decoy");
    DecoyInputs in{get_field<double>(d, "p_conc"),
                   get_field<double>(d, "e_bit"),
                   {get_field<double>(d, "xi1"), get_field<double>(d, "xi2")},
                   {get_field<double>(d, "e1"), get_field<double>(d, "e2")}};
    try {
        in.validate();
        if (in.e_nu[0] > 0.4) throw std::invalid_argument("e1 must not exceed 0.4");
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    return in;
}

Report build_verify(Protocol protocol, int nu) {
    require_nu(nu);
    CheckTable t(start_manifest("verify", {{"protocol", to_string(protocol)}, {"nu", nu}}));
    const FormSet forms(protocol, nu);
    const bool four = protocol == Protocol::FourState;

    double psd = 1e300;
    for (Event e : kAllEvents) psd = std::min(psd, qmath::min_eigenvalue(forms[e]));
    t.add("forms.min_eigenvalue", psd, -kIdentityTol, ">=", true);
    const double decomposition = std::max(
        {qmath::max_abs(forms.bit() - forms[Event::Chi1Plus] - forms[Event::Chi1Minus]),
         qmath::max_abs(forms.ph() - forms[Event::Chi0Minus] - forms[Event::Chi1Minus]),
         qmath::max_abs(forms.fil() - forms[Event::Chi0Plus] - forms[Event::Chi0Minus] -
                        forms[Event::Chi1Plus] - forms[Event::Chi1Minus])});
    t.add("forms.decomposition_defect", decomposition, kIdentityTol, "<", true);

    if (nu == 1) {
        t.add("single.identity_defect", identity_check_single(forms), kIdentityTol, "<", four);
        const auto [m1, m2] = correlation_psd_check(forms);
        t.add("single.correlation_chi0m_ge_2chi1p", m1, -kIdentityTol, ">=", four);
        t.add("single.correlation_2chi1m_ge_chi0m", m2, -kIdentityTol, ">=", four);
        t.add("single.frontier_at_x1.5", frontier(forms, 1.5).y_star, 1e-6, "<=", four);
    }

    const auto curve = frontier_curve(forms, default_x_grid());
    double worst_step = 0.0, min_y = 1.0;
    for (std::size_t k = 0; k < curve.size(); ++k) {
        min_y = std::min(min_y, curve[k].y_star);
        if (k > 0) worst_step = std::max(worst_step, curve[k].y_star - curve[k - 1].y_star);
    }
    t.add("frontier.max_increase", worst_step, 1e-8, "<=", true);

    if (four && nu == 2) {
        double margin = 1e300, gap = 1e300;
        for (const auto& p : curve) {
            margin = std::min(margin, p.margin_at_g);
            gap = std::min(gap, p.gap);
        }
        t.add("two.min_margin_at_g", margin, -kPsdTol, ">=", true);
        t.add("two.min_gap", gap, -1e-6, ">=", true);
        t.add("two.g_limit_defect", g_of_x(1e6) - g_infimum(), 1e-5, "<", true);
        t.add("two.min_y_star", min_y, g_infimum() + 1e-3, "<=", true);
    } else if (nu >= discrimination_limit(protocol)) {
        t.add("zero_rate.min_y_star", min_y, 0.5 - 1e-3, ">=", true);
    } else {
        t.add("key_possible.min_y_star", min_y, 0.5, "<", true);
    }
    return t.done();
}

Report build_thresholds(Protocol protocol) {
    Report r;
    r.manifest = start_manifest("thresholds", {{"protocol", to_string(protocol)}});
    r.columns = {"protocol", "nu", "label", "e_threshold", "p_threshold", "reference_e", "reference_p",
                 "deviation_e", "deviation_p", "x_opt", "key_possible", "asserted", "status", "display"};
    bool failed = false;
    using Ref = ReferenceThresholds;

    auto row = [&](const ThresholdResult& t, const char* label, double ref_e, double ref_p, bool asserted,
                   bool ok) {
        if (asserted && !ok) failed = true;
        Cell x = t.x_opt ? Cell(*t.x_opt) : Cell();
        char display[96];
        std::snprintf(display, sizeof display, "e=%.3f%% p=%.3f%% (ref %.3f%% / %.3f%%)", 100 * t.e_threshold,
                      100 * t.p_threshold, 100 * ref_e, 100 * ref_p);
        r.add_row({to_string(protocol), static_cast<long long>(t.nu), std::string(label), t.e_threshold,
                   t.p_threshold, ref_e, ref_p, t.e_threshold - ref_e, t.p_threshold - ref_p, x,
                   t.key_possible, asserted, std::string(status_of(asserted, ok)), std::string(display)});
    };

    if (protocol == Protocol::FourState) {
        const auto one = threshold_single();
        row(one, "single-photon", Ref::four_state_single, Ref::four_state_single_p, true,
            std::abs(one.e_threshold - Ref::four_state_single) <= 2e-4 &&
                std::abs(one.p_threshold - Ref::four_state_single_p) <= 5e-4);
        const auto two = threshold_two();
        row(two, "two-photon", Ref::four_state_two, Ref::four_state_two_p, true,
            std::abs(two.e_threshold - Ref::four_state_two) <= 2e-4 &&
                std::abs(two.p_threshold - Ref::four_state_two_p) <= 5e-4 && two.x_opt &&
                std::abs(*two.x_opt - Ref::two_photon_x) <= 0.5);
    } else {
        double prev = 1.0;
        for (int nu = 1; nu <= 4; ++nu) {
            const auto t = sixstate_thresholds(nu);
            // hard requirements: a positive threshold that shrinks with nu
            const bool ok = t.key_possible && t.e_threshold > 0.0 && t.e_threshold < prev;
            prev = t.e_threshold;
            row(t, "frontier pipeline", Ref::six_state[nu - 1], Ref::six_state_p[nu - 1], true, ok);
        }
        for (auto [label, p] : {std::pair{"bb84 reference", Ref::bb84_p},
                                std::pair{"original six-state reference", Ref::original_six_state_p}}) {
            char display[64];
            std::snprintf(display, sizeof display, "p=%.1f%%", 100 * p);
            r.add_row({to_string(protocol), Cell(), std::string(label), depol_ebit(p), p, depol_ebit(p), p, 0.0,
                       0.0, Cell(), true, false, std::string("INFO"), std::string(display)});
        }
    }
    r.manifest.summary = failed ? "FAIL" : "PASS";
    return r;
}

Report build_frontier(Protocol protocol, int nu, const GridSpec& grid) {
    require_nu(nu);
    const auto xs = grid.points();
    Report r;
    r.manifest = start_manifest("frontier", {{"protocol", to_string(protocol)},
                                             {"nu", nu},
                                             {"x_min", grid.x_min},
                                             {"x_max", grid.x_max},
                                             {"x_step", grid.x_step}});
    r.columns = {"x", "y_star", "g", "gap", "margin_at_g", "display"};
    const bool asserted = protocol == Protocol::FourState && nu == 2;
    bool failed = false;
    for (const auto& p : frontier_curve(FormSet(protocol, nu), xs)) {
        if (asserted && (p.margin_at_g < -kPsdTol || p.gap < -1e-6)) failed = true;
        r.add_row({p.x, p.y_star, p.g, p.gap, p.margin_at_g,
                   "y*=" + format_display(p.y_star) + " g=" + format_display(p.g)});
    }
    r.manifest.summary = failed ? "FAIL" : (asserted ? "PASS" : "INFO");
    return r;
}

Report build_simulate(const SimConfig& config, unsigned threads) {
    Report r;
    r.manifest = start_manifest("simulate", sim_config_json(config));
    r.manifest.seed = config.seed;
    r.columns = {"scope",       "nu",          "sifted",      "conclusive",   "errors",
                 "conclusive_fraction", "conclusive_stderr", "e_bit", "e_bit_stderr", "exact_conclusive",
                 "exact_e_bit", "z_conclusive", "z_e_bit",    "display"};
    const SimStats s = run_monte_carlo(config, threads);

    std::optional<ExactStats> exact;
    std::optional<Comparison> cmp;
    if (config.source.kind == PhotonSource::Kind::Fixed && config.source.nu <= 2) {
        exact = exact_channel_stats(config.protocol, config.source.nu, config.depolarizing, config.transmittance);
        cmp = compare(s, *exact);
    }
    auto opt = [](bool has, double v) { return has ? Cell(v) : Cell(); };
    char display[96];
    std::snprintf(display, sizeof display, "P_conc=%.5f e_bit=%.5f", s.conclusive_fraction, s.e_bit);
    r.add_row({std::string("all"), Cell(), static_cast<long long>(s.sifted), static_cast<long long>(s.conclusive),
               static_cast<long long>(s.errors), s.conclusive_fraction, s.conclusive_stderr, s.e_bit, s.e_bit_stderr,
               opt(exact.has_value(), exact ? exact->conclusive : 0.0), opt(exact.has_value(), exact ? exact->e_bit : 0.0),
               opt(cmp.has_value(), cmp ? cmp->z_conclusive : 0.0), opt(cmp.has_value(), cmp ? cmp->z_e_bit : 0.0),
               std::string(display)});

    ojson per_nu = ojson::array();
    for (const auto& row : s.per_nu) {
        const double frac = s.sifted ? static_cast<double>(row.conclusive) / s.sifted : 0.0;
        const double e = row.conclusive ? static_cast<double>(row.errors) / row.conclusive : 0.0;
        std::snprintf(display, sizeof display, "xi=%.5f e=%.5f", frac, e);
        r.add_row({"nu=" + std::to_string(row.nu), static_cast<long long>(row.nu), static_cast<long long>(row.sifted),
                   static_cast<long long>(row.conclusive), static_cast<long long>(row.errors), frac, Cell(), e, Cell(),
                   Cell(), Cell(), Cell(), Cell(), std::string(display)});
        per_nu.push_back({{"nu", row.nu}, {"sifted", row.sifted}, {"conclusive", row.conclusive}, {"errors", row.errors}});
    }

    r.extra["sim_stats"] = {{"trials", s.trials},
                            {"sifted", s.sifted},
                            {"conclusive", s.conclusive},
                            {"errors", s.errors},
                            {"conclusive_fraction", s.conclusive_fraction},
                            {"conclusive_stderr", s.conclusive_stderr},
                            {"e_bit", s.e_bit},
                            {"e_bit_stderr", s.e_bit_stderr},
                            {"per_nu", per_nu}};
    if (cmp) {
        r.extra["comparison"] = {{"exact_conclusive", exact->conclusive},
                                 {"exact_e_bit", exact->e_bit},
                                 {"z_conclusive", cmp->z_conclusive},
                                 {"z_e_bit", cmp->z_e_bit},
                                 {"pass", cmp->pass}};
    }
    r.manifest.summary = cmp ? (cmp->pass ? "PASS" : "FAIL") : "INFO";
    return r;
}

Report build_keyrate(const DecoyInputs& d, const ojson& source) {
    Report r;
    ojson params = {{"p_conc", d.p_conc}, {"e_bit", d.e_bit}, {"xi1", d.xi[0]},
                    {"e1", d.e_nu[0]},   {"xi2", d.xi[1]},    {"e2", d.e_nu[1]}};
    if (!source.is_null()) params["source"] = source;
    r.manifest = start_manifest("keyrate", params);
    r.columns = {"term", "value", "display"};
    const double ec = -d.p_conc * binary_entropy(d.e_bit);
    const double one = d.xi[0] * (1.0 - conditional_phase_entropy_single(d.e_nu[0]));
    const double two = d.xi[1] * (1.0 - conditional_phase_entropy_two(d.e_nu[1]));
    const double total = decoy_total_rate(d);
    for (auto [name, v] : {std::pair{"error_correction", ec}, std::pair{"single_photon", one},
                           std::pair{"two_photon", two}, std::pair{"total", total}})
        r.add_row({std::string(name), v, format_display(v)});
    r.manifest.summary = "PASS";
    return r;
}

Report build_constants_check() {
    CheckTable t(start_manifest("constants-check", ojson::object()));
    const auto c = constants(Protocol::FourState);
    const auto six = constants(Protocol::SixState);
    const double tol = kStructuralTol;

    t.add("R_phi1_minus_phi0", (c.rotation * c.phi[1] - c.phi[0]).cwiseAbs().maxCoeff(), tol, "<", true);
    const LinearOperator r4 = c.rotation * c.rotation * c.rotation * c.rotation;
    t.add("R4_plus_identity", qmath::max_abs(r4 + c.identity), tol, "<", true);
    const auto ev = qmath::eigenvalues(c.filter);
    t.add("F_eigenvalue_defect",
          std::max(std::abs(ev[0] - std::sin(kPi / 8)), std::abs(ev[1] - std::cos(kPi / 8))), tol, "<", true);
    t.add("filter_measurement_identity", filter_measurement_identity_check().max_deviation, tol, "<", true);
    const StateVector filtered = qmath::tensor(c.identity, c.filter) * c.entangled_source(1);
    t.add("filtered_source_minus_half_chi0p", (filtered - 0.5 * c.bell[kChi0Plus]).cwiseAbs().maxCoeff(), tol, "<",
          true);
    LinearOperator bell_sum = LinearOperator::Zero(4, 4);
    for (const auto& p : c.bell_projector) bell_sum += p;
    t.add("bell_completeness", qmath::max_abs(bell_sum - LinearOperator::Identity(4, 4)), tol, "<", true);
    t.add("four_state_sift_size", c.sift_size(), 4, "==", true);
    t.add("six_state_sift_size", six.sift_size(), 24, "==", true);

    std::vector<std::array<double, 3>> distinct;
    for (const auto& u : six.sift)
        for (const auto& phi : six.phi) {
            const auto v = qmath::bloch_vector(u * phi);
            if (std::none_of(distinct.begin(), distinct.end(), [&](const auto& w) {
                    return std::hypot(v[0] - w[0], v[1] - w[1], v[2] - w[2]) <= 1e-9;
                }))
                distinct.push_back(v);
        }
    t.add("six_state_distinct_bloch_vectors", static_cast<double>(distinct.size()), 6, "==", true);
    return t.done();
}

int finish(Report& report, const OutputOptions& options, std::ostream& out) {
    report.manifest.finished_at = timestamp_now();
    if (options.out_path.empty()) {
        emit(report, options.format.value_or(Format::Text), out);
    } else {
        std::ofstream file(options.out_path, std::ios::binary);
        if (!file) throw UsageError("cannot write output file: " + options.out_path);
        emit(report, options.format.value_or(format_for_path(options.out_path)), file);
        emit(report, Format::Text, out);
    }
    return report.manifest.summary == "FAIL" ? kExitCheckFailed : kExitPass;
}

int cmd_verify(Protocol protocol, int nu, const OutputOptions& o, std::ostream& out) {
    auto r = build_verify(protocol, nu);
    return finish(r, o, out);
}

int cmd_thresholds(Protocol protocol, const OutputOptions& o, std::ostream& out) {
    auto r = build_thresholds(protocol);
    return finish(r, o, out);
}

int cmd_frontier(Protocol protocol, int nu, const GridSpec& grid, const OutputOptions& o, std::ostream& out) {
    auto r = build_frontier(protocol, nu, grid);
    return finish(r, o, out);
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed, const OutputOptions& o,
                 std::ostream& out) {
    SimConfig cfg = parse_sim_config(load_json_file(config_path));
    if (seed) cfg.seed = *seed;
    auto r = build_simulate(cfg);
    return finish(r, o, out);
}

int cmd_keyrate(const std::string& config_path, const OutputOptions& o, std::ostream& out) {
    const auto j = load_json_file(config_path);
    const auto base = std::filesystem::path(config_path).parent_path().string();
    const DecoyInputs d = parse_keyrate_config(j, base);
    ojson source = j.contains("simulation") ? ojson(j.at("simulation").get<std::string>())
                   : j.contains("sim_stats") ? ojson(config_path)
                                              : ojson();
    auto r = build_keyrate(d, source);
    return finish(r, o, out);
}

int cmd_constants_check(const OutputOptions& o, std::ostream& out) {
    auto r = build_constants_check();
    return finish(r, o, out);
}

}  // namespace sargcert::cli
