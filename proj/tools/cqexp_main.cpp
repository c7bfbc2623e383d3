#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqexp/discrimination.hpp"
#include "cqexp/entropy.hpp"
#include "cqexp/experiments.hpp"
#include "cqexp/exponents.hpp"
#include "cqexp/rng.hpp"
#include "cqexp/spec_io.hpp"

namespace {

using nlohmann::json;

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw cqexp::ValidationError("cannot open output file: " + out_path);
    out << text;
}

std::string sanitize_csv_field(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

struct SpecInputs {
    cqexp::ChannelSpec spec;
    cqexp::CQChannel channel;
    cqexp::ProbabilityVector distribution;
    std::optional<cqexp::GroupAction> action;
};

SpecInputs load_inputs(const std::string& path, bool repair) {
    cqexp::ChannelSpec spec = cqexp::load_channel_spec(path);
    cqexp::CQChannel channel = cqexp::to_channel(spec, repair);
    cqexp::ProbabilityVector dist = cqexp::input_distribution(spec, repair);
    std::optional<cqexp::GroupAction> action = cqexp::spec_action(spec);
    return SpecInputs{std::move(spec), std::move(channel), std::move(dist),
                      std::move(action)};
}

int run_entropy(const std::string& spec_path, const std::vector<double>& alphas,
                const std::string& which, const std::string& out_path, bool repair) {
    const SpecInputs in = load_inputs(spec_path, repair);
    const cqexp::BipartiteState psi_zb = cqexp::build_cq_state(in.distribution, in.channel);
    const cqexp::PurifiedSource psi = cqexp::purify_source(in.distribution, in.channel);
    const cqexp::BipartiteState psi_dual = cqexp::measure_conjugate(
        psi, {cqexp::Subsystem::APrime, cqexp::Subsystem::C});

    json out;
    out["d"] = in.channel.d();
    out["which"] = which;
    if (which == "all" || which == "vn") {
        out["von_neumann_Z_given_B"] = cqexp::von_neumann_cond(psi_zb);
        out["von_neumann_X_given_dual"] = cqexp::von_neumann_cond(psi_dual);
    }
    json entries = json::array();
    for (double alpha : alphas) {
        json entry;
        entry["alpha"] = alpha;
        if (which == "all" || which == "petz-up") {
            entry["petz_up_Z_given_B"] = cqexp::cond_entropy_petz_up(psi_zb, alpha);
        }
        if (which == "all" || which == "sand-down") {
            entry["sand_down_X_given_dual"] = cqexp::cond_entropy_sand_down(psi_dual, alpha);
        }
        entries.push_back(std::move(entry));
    }
    out["entries"] = std::move(entries);
    write_output(out_path, out.dump(2) + "\n");
    return 0;
}

int run_curve(const std::string& spec_path, const std::string& family,
              const std::vector<double>& rates, double smax, double alpha_max,
              const std::string& out_path, bool repair) {
    const SpecInputs in = load_inputs(spec_path, repair);

    std::optional<cqexp::SymmetricChannel> symmetric;
    if (in.action && cqexp::is_symmetric(in.channel, *in.action)) {
        symmetric = cqexp::SymmetricChannel{in.channel, *in.action};
    }
    if (family == "cc-lower" && !symmetric) {
        throw cqexp::ValidationError(
            "cc-lower requires a symmetric channel: provide a valid 'symmetry' block");
    }
    const cqexp::BipartiteState psi_zb = cqexp::build_cq_state(in.distribution, in.channel);

    std::ostringstream csv;
    csv << "rate,exponent,optimizer,flag\n";
    for (double rate : rates) {
        cqexp::CurvePoint point;
        if (family == "cc-lower") {
            point = cqexp::cc_exponent_lower(*symmetric, rate);
        } else if (family == "cc-sp") {
            point = cqexp::cc_sphere_packing(in.channel, rate, smax,
                                             symmetric ? &symmetric->action : nullptr);
        } else if (family == "dc-lower") {
            point = cqexp::dc_exponent_lower(psi_zb, rate);
        } else if (family == "dc-sp") {
            point = cqexp::dc_sphere_packing(psi_zb, rate);
        } else if (family == "pa-lower") {
            point = cqexp::pa_exponent_lower(psi_zb, rate);
        } else if (family == "pa-sp") {
            point = cqexp::pa_sphere_packing(psi_zb, rate, alpha_max);
        } else {
            throw cqexp::ValidationError("unknown curve family: " + family);
        }
        csv << cqexp::format_double(point.rate) << ','
            << cqexp::format_extended(point.exponent) << ','
            << cqexp::format_double(point.optimizer) << ','
            << cqexp::to_string(point.flag) << '\n';
    }
    write_output(out_path, csv.str());
    return 0;
}

int run_duality(const std::string& spec_path, int n, int m, std::uint64_t seed,
                int trials, double tol_gap, const std::string& out_path, bool repair) {
    const SpecInputs in = load_inputs(spec_path, repair);
    if (!cqexp::is_prime(in.channel.d())) {
        throw cqexp::ValidationError("duality checks require a prime alphabet size");
    }
    if (m < 0 || m > n) throw cqexp::ValidationError("duality: need 0 <= m <= n");
    const cqexp::Source source{in.distribution, in.channel};

    json out;
    out["d"] = in.channel.d();
    out["n"] = n;
    out["m"] = m;
    out["seed"] = seed;
    out["tol"] = tol_gap;
    json trial_records = json::array();
    double max_gap = 0.0;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = cqexp::mix_seed(seed, static_cast<std::uint64_t>(t));
        cqexp::DeterministicRng rng(trial_seed);
        int resamples = 0;
        const cqexp::ToeplitzResult hash =
            cqexp::sample_full_rank_toeplitz(rng, in.channel.d(), m, n, resamples);
        const cqexp::DualityReport report =
            cqexp::duality_check(source, n, hash.matrix, tol_gap);
        max_gap = std::max(max_gap, report.gap);

        json record;
        record["trial"] = t;
        record["seed"] = trial_seed;
        record["resamples"] = resamples;
        json hash_rows = json::array();
        for (int r = 0; r < hash.matrix.rows(); ++r) {
            json row = json::array();
            for (int c = 0; c < hash.matrix.cols(); ++c) row.push_back(hash.matrix.at(r, c));
            hash_rows.push_back(std::move(row));
        }
        record["hash"] = std::move(hash_rows);
        record["pguess"] = {{"lower", report.pguess_side.lower},
                            {"upper", report.pguess_side.upper}};
        record["fidelity"] = {{"lower", report.fidelity_side.lower},
                              {"upper", report.fidelity_side.upper}};
        record["gap"] = report.gap;
        trial_records.push_back(std::move(record));
    }
    out["trials"] = std::move(trial_records);
    out["max_gap"] = max_gap;
    write_output(out_path, out.dump(2) + "\n");
    return 0;
}

int run_simulate(const std::string& spec_path, const std::string& mode_name,
                 const std::vector<int>& ns, const std::vector<double>& rates,
                 std::uint64_t seed, int trials, std::optional<double> k_constant,
                 double tol_gap, const std::string& out_path, bool repair) {
    const SpecInputs in = load_inputs(spec_path, repair);
    cqexp::ScanMode mode;
    if (mode_name == "dc") {
        mode = cqexp::ScanMode::DC;
    } else if (mode_name == "pa") {
        mode = cqexp::ScanMode::PA;
    } else if (mode_name == "cc") {
        mode = cqexp::ScanMode::CC;
    } else {
        throw cqexp::ValidationError("unknown simulate mode: " + mode_name);
    }
    std::optional<cqexp::GroupAction> action;
    if (in.action && cqexp::is_symmetric(in.channel, *in.action)) action = in.action;

    const cqexp::Source source{in.distribution, in.channel};
    const std::vector<cqexp::ScanCell> cells = cqexp::rate_scan(
        mode, source, action, ns, rates, trials, seed, k_constant, tol_gap);

    std::ostringstream csv;
    csv << "n,m,rate,measured,bound_lower,bound_sp,status,seed";
    if (k_constant) csv << ",prefactor_rhs";
    csv << '\n';
    for (const cqexp::ScanCell& cell : cells) {
        csv << cell.n << ',' << cell.m << ',' << cqexp::format_double(cell.rate) << ','
            << cqexp::format_double(cell.measured) << ','
            << (cell.bound_lower ? cqexp::format_extended(*cell.bound_lower) : "nan") << ','
            << (cell.bound_sp ? cqexp::format_extended(*cell.bound_sp) : "nan") << ','
            << sanitize_csv_field(cell.status) << ',' << cell.seed;
        if (k_constant) {
            csv << ','
                << (cell.prefactor_rhs ? cqexp::format_extended(*cell.prefactor_rhs)
                                       : "nan");
        }
        csv << '\n';
    }
    write_output(out_path, csv.str());
    return 0;
}

int run_critical_rate(const std::string& spec_path, const std::string& family,
                      const std::string& out_path, bool repair) {
    const SpecInputs in = load_inputs(spec_path, repair);
    cqexp::CriticalRateResult result;
    if (family == "dc") {
        const cqexp::BipartiteState psi_zb =
            cqexp::build_cq_state(in.distribution, in.channel);
        result = cqexp::critical_rate_dc(psi_zb, in.channel.d());
    } else if (family == "cc") {
        if (!in.action || !cqexp::is_symmetric(in.channel, *in.action)) {
            throw cqexp::ValidationError(
                "critical-rate cc requires a symmetric channel: provide a 'symmetry' block");
        }
        result = cqexp::critical_rate_cc(cqexp::SymmetricChannel{in.channel, *in.action});
    } else {
        throw cqexp::ValidationError("unknown critical-rate family: " + family);
    }
    json out;
    out["family"] = family;
    if (result.rate) {
        out["rate"] = *result.rate;
    } else {
        out["rate"] = nullptr;
    }
    out["boundary"] = result.boundary;
    write_output(out_path, out.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"error-exponent bounds and duality checks for classical-quantum sources"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string spec_path, out_path;
    bool repair = false;
    app.add_option("--spec", spec_path, "channel spec JSON file")->required();
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_flag("--normalize", repair, "repair slightly denormalized inputs");

    auto* entropy_cmd = app.add_subcommand("entropy", "conditional entropies of the source");
    std::vector<double> alphas{0.5, 2.0};
    std::string which = "all";
    entropy_cmd->add_option("--alpha", alphas, "Renyi orders")->delimiter(',');
    entropy_cmd->add_option("--which", which, "all|petz-up|sand-down|vn");

    auto* curve_cmd = app.add_subcommand("curve", "exponent bound over a rate grid");
    std::string family;
    std::vector<double> rates;
    double smax = 64.0, alpha_max = 64.0;
    curve_cmd->add_option("--family", family, "cc-lower|cc-sp|dc-lower|dc-sp|pa-lower|pa-sp")
        ->required();
    curve_cmd->add_option("--rates", rates, "rates in bits per symbol")
        ->required()
        ->delimiter(',');
    curve_cmd->add_option("--smax", smax, "sphere-packing cap on s");
    curve_cmd->add_option("--alpha-max", alpha_max, "privacy-amplification cap on alpha");

    auto* duality_cmd = app.add_subcommand("duality", "guessing/fidelity identity check");
    int n = 1, m = 0, trials = 1;
    std::uint64_t seed = 1;
    double tol_gap = 1e-8;
    duality_cmd->add_option("--n", n, "number of copies")->required();
    duality_cmd->add_option("--m", m, "compressed symbols")->required();
    duality_cmd->add_option("--seed", seed, "PRNG seed");
    duality_cmd->add_option("--trials", trials, "number of random hashes");
    duality_cmd->add_option("--tol", tol_gap, "certified-gap tolerance");

    auto* simulate_cmd = app.add_subcommand("simulate", "finite-n rate scan");
    std::string mode = "dc";
    std::vector<int> ns{1};
    std::vector<double> scan_rates;
    std::uint64_t scan_seed = 1;
    int scan_trials = 1;
    double scan_tol = 1e-8;
    double k_value = 0.0;
    simulate_cmd->add_option("--mode", mode, "dc|pa|cc")->required();
    simulate_cmd->add_option("--n", ns, "blocklengths")->required()->delimiter(',');
    simulate_cmd->add_option("--rates", scan_rates, "rates in bits per symbol")
        ->required()
        ->delimiter(',');
    simulate_cmd->add_option("--seed", scan_seed, "PRNG seed");
    simulate_cmd->add_option("--trials", scan_trials, "hashes per cell");
    simulate_cmd->add_option("--tol", scan_tol, "certified-gap tolerance");
    auto* k_option = simulate_cmd->add_option(
        "--K", k_value, "constant in the finite-n prefactor right-hand side");

    auto* critical_cmd = app.add_subcommand("critical-rate", "lower/upper bound agreement rate");
    std::string crit_family = "dc";
    critical_cmd->add_option("--family", crit_family, "dc|cc")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (entropy_cmd->parsed()) {
            return run_entropy(spec_path, alphas, which, out_path, repair);
        }
        if (curve_cmd->parsed()) {
            return run_curve(spec_path, family, rates, smax, alpha_max, out_path, repair);
        }
        if (duality_cmd->parsed()) {
            return run_duality(spec_path, n, m, seed, trials, tol_gap, out_path, repair);
        }
        if (simulate_cmd->parsed()) {
            std::optional<double> k_constant;
            if (k_option->count() > 0) k_constant = k_value;
            return run_simulate(spec_path, mode, ns, scan_rates, scan_seed, scan_trials,
                                k_constant, scan_tol, out_path, repair);
        }
        if (critical_cmd->parsed()) {
            return run_critical_rate(spec_path, crit_family, out_path, repair);
        }
    } catch (const cqexp::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const cqexp::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return 3;
    } catch (const cqexp::SolverError& e) {
        std::cerr << "solver error: " << e.what() << " [lower=" << e.lower
                  << ", upper=" << e.upper << "]\n";
        return 4;
    }
    return 1;
}
