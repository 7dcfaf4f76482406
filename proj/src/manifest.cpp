#include "sevo/manifest.hpp"

#include "sevo/damping.hpp"
#include "sevo/decay_character.hpp"
#include "sevo/decay_verify.hpp"
#include "sevo/exponents.hpp"
#include "sevo/linear_modes.hpp"
#include "sevo/phase_zones.hpp"
#include "sevo/semilinear.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace sevo {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

class Csv {
  public:
    explicit Csv(const fs::path& path) : f_(path, std::ios::binary) {
        if (!f_) throw std::runtime_error("cannot open " + path.string());
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) f_ << ',';
            f_ << cells[i];
        }
        f_ << '\n';
    }

  private:
    std::ofstream f_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    const std::vector<double>& column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return columns[i];
        throw std::runtime_error("csv column '" + name + "' not found");
    }
};

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty csv " + path.string());
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
    t.columns.resize(t.header.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::size_t c = 0;
        while (std::getline(ls, cell, ',') && c < t.columns.size())
            t.columns[c++].push_back(std::stod(cell));
    }
    return t;
}

DampingSpec damping_from_config(const Config& cfg) {
    const double sigma = cfg.number_or("problem.sigma", 1.0);
    const double delta = cfg.number_or("problem.delta", 0.0);
    const std::string family = cfg.str_or("damping.family", "power_law");
    if (family == "power_law") {
        return DampingSpec::power_law(cfg.number_or("damping.mu", 1.0),
                                      cfg.number_or("damping.kappa", 0.0), sigma, delta);
    }
    if (family == "tabulated") {
        const CsvTable t = read_csv(cfg.str("damping.csv"));
        return DampingSpec::tabulated(t.columns.at(0), t.columns.at(1), sigma, delta);
    }
    throw std::runtime_error("unknown damping family '" + family + "'");
}

SpectralProfile profile_from_config(const Config& cfg, const std::string& block, int n) {
    const std::string kind = cfg.str_or(block + ".kind", "power_cutoff");
    if (kind == "power_cutoff")
        return SpectralProfile::power_cutoff(cfg.number_or(block + ".amplitude", 1.0),
                                             cfg.number_or(block + ".r_exp", 0.0),
                                             cfg.number_or(block + ".cutoff", 1.0), n);
    if (kind == "gaussian_hat")
        return SpectralProfile::gaussian_hat(cfg.number_or(block + ".amplitude", 1.0),
                                             cfg.number_or(block + ".width", 1.0), n);
    if (kind == "tabulated") {
        const CsvTable t = read_csv(cfg.str(block + ".csv"));
        return SpectralProfile::tabulated_radial(t.columns.at(0), t.columns.at(1), n);
    }
    if (kind == "zero") return SpectralProfile::power_cutoff(0.0, 0.0, 1.0, n);
    throw std::runtime_error("unknown profile kind '" + kind + "'");
}

std::vector<double> log_time_grid(double t_min, double t_max, int points, bool include_zero) {
    std::vector<double> out;
    if (include_zero) out.push_back(0.0);
    const double lo = std::log(t_min), hi = std::log(t_max);
    for (int i = 0; i < points; ++i)
        out.push_back(std::exp(lo + (hi - lo) * i / (points - 1)));
    return out;
}

const char* verdict_str(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::NumericOnly: return "numeric-only";
    }
    return "?";
}

const char* outcome_str(RunOutcome::Status s) {
    switch (s) {
        case RunOutcome::Status::Decayed: return "decayed";
        case RunOutcome::Status::BlownUp: return "blown_up";
        case RunOutcome::Status::Inconclusive: return "inconclusive";
    }
    return "?";
}

const char* fit_verdict_str(DecayFitReport::V v) {
    switch (v) {
        case DecayFitReport::V::Consistent: return "consistent";
        case DecayFitReport::V::Violated: return "violated";
        case DecayFitReport::V::Inconclusive: return "inconclusive";
    }
    return "?";
}

void write_json(const fs::path& path, const ordered_json& j) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    f << j.dump(2) << '\n';
}

int apply_expectation(const Config& cfg, const std::string& actual) {
    if (!cfg.has("run.expect")) return 0;
    return cfg.str("run.expect") == actual ? 0 : 2;
}

// ---- subcommands -------------------------------------------------------

CommandResult run_validate_damping(const Manifest& m, const fs::path& dir) {
    const DampingSpec spec = damping_from_config(m.config);
    const double horizon = m.config.number_or("run.horizon", 1e4);
    const ValidationReport rep = validate_effective(spec, horizon);

    ordered_json j;
    auto put = [&](const char* name, const ConditionCheck& c) {
        j["conditions"][name] = {{"verdict", verdict_str(c.verdict)},
                                 {"witness", c.witness},
                                 {"note", c.note}};
    };
    put("B1", rep.b1);
    put("B2", rep.b2);
    put("B3", rep.b3);
    put("B4", rep.b4);
    put("B5", rep.b5);
    put("B6", rep.b6);
    put("B-L", rep.b_l);
    j["effective"] = rep.effective();
    j["horizon"] = horizon;
    write_json(dir / "report.json", j);

    CommandResult r;
    r.summary = {{"effective", rep.effective() ? "true" : "false"}};
    return r;
}

CommandResult run_decay_character(const Manifest& m, const fs::path& dir) {
    const int n = static_cast<int>(m.config.integer_or("profile.n", 1));
    const SpectralProfile prof = profile_from_config(m.config, "profile", n);
    const DecayCharacterEstimate est = estimate_decay_character(prof);

    ordered_json j;
    const char* status = "finite";
    switch (est.status) {
        case DecayCharacterEstimate::Status::Finite: status = "finite"; break;
        case DecayCharacterEstimate::Status::Zero: status = "zero"; break;
        case DecayCharacterEstimate::Status::Infinite: status = "infinite"; break;
        case DecayCharacterEstimate::Status::Indeterminate: status = "indeterminate"; break;
        case DecayCharacterEstimate::Status::Degenerate: status = "degenerate"; break;
    }
    j["status"] = status;
    j["r_star"] = est.r_star;
    j["P"] = est.P_value;
    j["fit"] = {{"slope", est.slope},
                {"residual", est.residual},
                {"rho_lo", est.rho_lo},
                {"rho_hi", est.rho_hi}};
    if (m.config.has("run.etas")) {
        for (double eta : m.config.number_list("run.etas")) {
            const PNormResult pn = p_norm(prof, eta);
            j["p_norm"][format_double(eta)] = {{"value", pn.value},
                                               {"sobolev_part", pn.sobolev_part},
                                               {"indicator_part", pn.indicator_part},
                                               {"status", pn.status}};
        }
    }
    write_json(dir / "character.json", j);

    CommandResult r;
    r.summary = {{"status", status}, {"r_star", format_double(est.r_star)}};
    return r;
}

CommandResult run_zones(const Manifest& m, const fs::path& dir) {
    const DampingSpec spec = damping_from_config(m.config);
    ZoneParams params;
    params.N = m.config.number_or("zones.N", 2.0);
    params.eps = m.config.number_or("zones.eps", 0.1);
    params.d0 = m.config.number_or("zones.d0", 2.0);
    const double t_max = m.config.number_or("grid.t_max", 100.0);
    const double xi_min = m.config.number_or("grid.xi_min", 1e-3);
    const double xi_max = m.config.number_or("grid.xi_max", 10.0);
    const int nt = static_cast<int>(m.config.integer_or("grid.nt", 40));
    const int nxi = static_cast<int>(m.config.integer_or("grid.nxi", 40));

    Csv csv(dir / "zones.csv");
    csv.row({"t", "xi", "label", "weight", "mass"});
    for (int i = 0; i < nt; ++i) {
        const double t = std::pow(1.0 + t_max, static_cast<double>(i) / (nt - 1)) - 1.0;
        for (int j = 0; j < nxi; ++j) {
            const double xi =
                xi_min * std::pow(xi_max / xi_min, static_cast<double>(j) / (nxi - 1));
            csv.row({format_double(t), format_double(xi),
                     zone_name(classify(spec, params, t, xi)),
                     format_double(weight(spec, t, xi)), format_double(mass(spec, t, xi))});
        }
    }
    CommandResult r;
    r.summary = {{"rows", std::to_string(static_cast<long long>(nt) * nxi)}};
    return r;
}

CommandResult run_solve_linear(const Manifest& m, const fs::path& dir) {
    const Config& cfg = m.config;
    const DampingSpec spec = damping_from_config(cfg);
    const double sigma = cfg.number_or("problem.sigma", 1.0);
    const double delta = cfg.number_or("problem.delta", 0.0);
    const int n = static_cast<int>(cfg.integer_or("problem.n", 1));

    const SpectralProfile u0 = profile_from_config(cfg, "profile_u0", n);
    const SpectralProfile u1 = profile_from_config(cfg, "profile_u1", n);

    std::vector<double> alphas = cfg.has("run.alphas")
                                     ? cfg.number_list("run.alphas")
                                     : std::vector<double>{0.0};
    const double t_max = cfg.number("run.t_max");
    const int t_points = static_cast<int>(cfg.integer_or("run.t_points", 61));
    const double t_min = cfg.number_or("run.t_min", std::min(0.1, t_max / 100.0));

    RadialQuadrature quad;
    quad.xi_min = cfg.number_or("run.xi_min", 1e-4);
    quad.xi_max = cfg.number_or("run.xi_max", 32.0);
    quad.nodes = static_cast<int>(cfg.integer_or("run.nodes", 96));
    const double rel_tol = m.rel_tol > 0.0 ? m.rel_tol : cfg.number_or("run.rel_tol", 1e-9);

    const std::vector<double> t_grid = log_time_grid(t_min, t_max, t_points, true);
    const LinearRunResult res = reconstruct_norms(spec, sigma, delta, u0, u1, alphas, t_grid,
                                                  quad, rel_tol, m.threads);

    Csv csv(dir / "linear.csv");
    std::vector<std::string> header = {"t", "B"};
    for (double a : alphas) header.push_back("norm_a" + format_double(a));
    header.insert(header.end(), {"ut_l2", "tail_bound", "Bhat", "b"});
    csv.row(header);
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        std::vector<std::string> row = {format_double(res.times[i]), format_double(res.B[i])};
        for (std::size_t a = 0; a < alphas.size(); ++a)
            row.push_back(format_double(res.u_norms[a][i]));
        row.push_back(format_double(res.ut_l2[i]));
        row.push_back(format_double(res.tail_bound[i]));
        row.push_back(format_double(res.Bhat[i]));
        row.push_back(format_double(res.b[i]));
        csv.row(row);
    }
    CommandResult r;
    r.summary = {{"final_l2", format_double(res.u_norms[0].back())}};
    return r;
}

Statement statement_from_string(const std::string& s) {
    if (s == "thm1.1-i") return Statement::Thm1_1_i;
    if (s == "thm1.1-ii") return Statement::Thm1_1_ii;
    if (s == "thm1.2-i") return Statement::Thm1_2_i;
    if (s == "thm1.2-ii") return Statement::Thm1_2_ii;
    if (s == "thm1.2-iii") return Statement::Thm1_2_iii;
    if (s == "heat-a1") return Statement::HeatA1;
    throw std::runtime_error("unknown statement '" + s + "'");
}

CommandResult run_verify_decay(const Manifest& m, const fs::path& dir) {
    const Config& cfg = m.config;
    const CsvTable table = read_csv(cfg.str("input.csv"));
    const std::string value_col = cfg.str("input.column");

    const Statement st = statement_from_string(cfg.str("prediction.statement"));
    const Quantity q = cfg.str_or("prediction.quantity", "solution") == "velocity"
                           ? Quantity::VelocityL2
                           : Quantity::SolutionHalpha;
    const RatePrediction pred = predicted_rate(
        st, cfg.number_or("problem.sigma", 1.0), cfg.number_or("problem.delta", 0.0),
        static_cast<int>(cfg.integer_or("problem.n", 1)), cfg.number_or("prediction.alpha", 0.0),
        cfg.number("prediction.r0"), cfg.number("prediction.r1"), q);

    const std::vector<double>& times = table.column("t");
    const std::vector<double>& values = table.column(value_col);
    const std::vector<double>& abscissa = table.column(
        cfg.str_or("input.abscissa", abscissa_name(pred.abscissa)));
    std::vector<double> b_values;
    if (pred.b_prefactor_power != 0) b_values = table.column("b");

    const double window = cfg.number_or("run.window_fraction", 0.0);
    const double tol = cfg.number_or("run.tolerance", 0.1);
    const DecayFitReport rep = verify_rate(pred, times, values, abscissa, b_values, window, tol);

    ordered_json j;
    j["statement"] = statement_name(st);
    j["quantity"] = q == Quantity::VelocityL2 ? "velocity" : "solution";
    j["abscissa"] = abscissa_name(pred.abscissa);
    j["predicted_exponent"] = pred.exponent;
    j["b_prefactor_power"] = pred.b_prefactor_power;
    j["branch_note"] = pred.branch_note;
    j["fitted_slope"] = rep.fit.slope;
    j["confidence_width"] = rep.fit.width;
    j["window"] = {{"lo", rep.fit.window_lo}, {"hi", rep.fit.window_hi},
                   {"points", rep.fit.points}};
    j["tolerance"] = tol;
    j["verdict"] = fit_verdict_str(rep.verdict);
    write_json(dir / "verdict.json", j);

    CommandResult r;
    r.summary = {{"verdict", fit_verdict_str(rep.verdict)},
                 {"slope", format_double(rep.fit.slope)}};
    r.exit_code = apply_expectation(cfg, fit_verdict_str(rep.verdict));
    return r;
}

FieldState data_from_config(const Config& cfg, const GridSpec& grid) {
    FieldState f;
    auto build = [&](const std::string& which) -> std::vector<double> {
        const std::string kind = cfg.str_or("data." + which + "_kind", "zero");
        if (kind == "zero") return std::vector<double>(grid.n == 1
                                                           ? grid.M
                                                           : static_cast<std::size_t>(grid.M) *
                                                                 grid.M,
                                                       0.0);
        if (kind == "gaussian") {
            std::vector<double> center;
            if (cfg.has("data." + which + "_center"))
                center = cfg.number_list("data." + which + "_center");
            return gaussian_field(grid, cfg.number_or("data." + which + "_amplitude", 1.0),
                                  cfg.number_or("data." + which + "_width", 1.0), center);
        }
        throw std::runtime_error("unknown data kind '" + kind + "'");
    };
    f.u = build("u0");
    f.u_t = build("u1");
    return f;
}

CommandResult run_solve_semilinear(const Manifest& m, const fs::path& dir) {
    const Config& cfg = m.config;
    SemilinearConfig sc;
    sc.damping = damping_from_config(cfg);
    sc.sigma = cfg.number_or("problem.sigma", 1.0);
    sc.delta = cfg.number_or("problem.delta", 0.0);
    sc.gamma = cfg.number_or("problem.gamma", 0.0);
    sc.p = cfg.number("problem.p");
    sc.nonlin_coeff = cfg.number_or("problem.nonlin_coeff", 1.0);
    sc.grid.n = static_cast<int>(cfg.integer_or("grid.n", 1));
    sc.grid.L = cfg.number_or("grid.L", 40.0);
    sc.grid.M = static_cast<int>(cfg.integer_or("grid.M", sc.grid.n == 1 ? 1024 : 256));
    sc.horizon = cfg.number_or("run.horizon", 100.0);
    sc.escape_threshold = cfg.number_or("run.escape_threshold", 1e6);
    sc.dt_safety = cfg.number_or("run.dt_safety", 1.0);
    sc.output_interval = cfg.number_or("run.output_interval", 1.0);
    sc.rel_tol = m.rel_tol > 0.0 ? m.rel_tol : cfg.number_or("run.rel_tol", 1e-6);

    SpectralGrid grid(sc.grid);
    const FieldState data = data_from_config(cfg, sc.grid);
    const BlowupDataCheck cond = check_blowup_data_condition(sc.damping, sc.delta, data, grid);

    const RunOutcome out = solve_semilinear(sc, data);

    Csv csv(dir / "norms.csv");
    csv.row({"t", "l2", "hsigma", "ut_l2"});
    for (std::size_t i = 0; i < out.times.size(); ++i)
        csv.row({format_double(out.times[i]), format_double(out.l2[i]),
                 format_double(out.hsigma[i]), format_double(out.ut_l2[i])});

    ordered_json j;
    j["status"] = outcome_str(out.status);
    if (out.status == RunOutcome::Status::BlownUp) j["blowup_time"] = out.blowup_time;
    j["initial_l2"] = out.initial_l2;
    j["final_l2"] = out.l2.back();
    j["note"] = out.note;
    j["data_condition"] = {
        {"satisfied", cond.satisfied},
        {"value", cond.value},
        {"branch",
         cond.branch == BlowupDataCheck::Branch::NonDecreasing ? "b_nondecreasing"
                                                               : "b_decreasing"},
        {"B0", cond.B0},
        {"A0", cond.A0}};
    write_json(dir / "outcome.json", j);

    CommandResult r;
    r.summary = {{"status", outcome_str(out.status)},
                 {"blowup_time", out.status == RunOutcome::Status::BlownUp
                                     ? format_double(out.blowup_time)
                                     : ""}};
    r.exit_code = apply_expectation(cfg, outcome_str(out.status));
    return r;
}

CommandResult run_exponents(const Manifest& m, const fs::path& dir) {
    const Config& cfg = m.config;
    ExponentInputs in;
    in.sigma = cfg.number_or("problem.sigma", 1.0);
    in.delta = cfg.number_or("problem.delta", 0.0);
    in.gamma = cfg.number_or("problem.gamma", 0.0);
    in.n = static_cast<int>(cfg.integer_or("problem.n", 1));
    in.r0 = cfg.number_or("problem.r0", 0.0);
    in.r1 = cfg.number_or("problem.r1", 0.0);
    const BPrimeSign sign = cfg.str_or("problem.b_prime_sign", "nonnegative") == "negative"
                                ? BPrimeSign::Negative
                                : BPrimeSign::NonNegative;

    ordered_json j;
    j["inputs"] = {{"sigma", in.sigma}, {"delta", in.delta}, {"gamma", in.gamma},
                   {"n", in.n},         {"r0", in.r0},       {"r1", in.r1}};
    const OmegaResult w = omega_checked(in, sign);
    j["omega"] = w.value;
    if (!w.note.empty()) j["omega_note"] = w.note;
    const double ps = p_star(in, sign);
    j["p_star"] = ps;
    if (const auto range = admissible_p_range(in, sign)) {
        j["admissible_p"] = {{"lo", range->lo},
                             {"lo_open", range->lo_open},
                             {"hi", range->hi_unbounded ? "inf" : format_double(range->hi)}};
    } else {
        j["admissible_p"] = nullptr;
    }
    if (in.n > 2.0 * in.delta) j["critical_p"] = critical_p(in.sigma, in.delta, in.n);
    write_json(dir / "exponents.json", j);

    CommandResult r;
    r.summary = {{"p_star", format_double(ps)}, {"omega", format_double(w.value)}};
    return r;
}

CommandResult run_scan(const Manifest& m, const fs::path& dir) {
    const Config& cfg = m.config;
    const std::string target = cfg.str("scan.target");
    const std::string parameter = cfg.str("scan.parameter");
    const std::vector<double> values = cfg.number_list("scan.values");
    if (values.empty() || values.size() > 10000)
        throw std::runtime_error("scan: needs 1..10^4 grid values");

    struct Point {
        double value = 0.0;
        CommandResult result;
        std::string error;
    };
    std::vector<Point> points(values.size());

    auto run_point = [&](std::size_t i) {
        Manifest pm;
        pm.id = "point-" + format_double(values[i]);
        pm.subcommand = target;
        pm.config = cfg;
        pm.config.set(parameter, values[i]);
        pm.out_dir = dir;
        pm.threads = 1;
        pm.rel_tol = m.rel_tol;
        points[i].value = values[i];
        try {
            points[i].result = run_manifest(pm);
        } catch (const std::exception& e) {
            points[i].result.exit_code = 1;
            points[i].error = e.what();
        }
    };

    if (m.threads <= 1) {
        for (std::size_t i = 0; i < values.size(); ++i) run_point(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int k = 0; k < m.threads; ++k)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < values.size(); i = next++) run_point(i);
            });
        for (auto& th : pool) th.join();
    }

    Csv csv(dir / "summary.csv");
    // union of summary keys in first-seen order
    std::vector<std::string> keys;
    for (const auto& p : points)
        for (const auto& [k, v] : p.result.summary)
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    std::vector<std::string> header = {parameter, "exit_code"};
    header.insert(header.end(), keys.begin(), keys.end());
    header.push_back("error");
    csv.row(header);
    int worst = 0;
    for (const auto& p : points) {
        std::vector<std::string> row = {format_double(p.value),
                                        std::to_string(p.result.exit_code)};
        for (const auto& k : keys) {
            std::string v;
            for (const auto& [sk, sv] : p.result.summary)
                if (sk == k) v = sv;
            row.push_back(v);
        }
        row.push_back(p.error);
        csv.row(row);
        worst = std::max(worst, p.result.exit_code);
    }
    CommandResult r;
    r.exit_code = worst;
    r.summary = {{"points", std::to_string(points.size())}};
    return r;
}

}  // namespace

const std::vector<std::string>& known_subcommands() {
    static const std::vector<std::string> cmds = {
        "validate-damping", "decay-character", "zones",     "solve-linear",
        "verify-decay",     "solve-semilinear", "exponents", "scan"};
    return cmds;
}

CommandResult run_manifest(const Manifest& m) {
    if (m.id.empty()) throw std::runtime_error("manifest: empty id");
    const fs::path dir = m.out_dir / m.id;
    fs::create_directories(dir);

    {
        std::ofstream f(dir / "resolved_config.toml", std::ios::binary);
        f << "# subcommand = " << m.subcommand << "\n# digest = " << m.config.digest() << "\n"
          << m.config.canonical();
    }

    CommandResult r;
    if (m.subcommand == "validate-damping") r = run_validate_damping(m, dir);
    else if (m.subcommand == "decay-character") r = run_decay_character(m, dir);
    else if (m.subcommand == "zones") r = run_zones(m, dir);
    else if (m.subcommand == "solve-linear") r = run_solve_linear(m, dir);
    else if (m.subcommand == "verify-decay") r = run_verify_decay(m, dir);
    else if (m.subcommand == "solve-semilinear") r = run_solve_semilinear(m, dir);
    else if (m.subcommand == "exponents") r = run_exponents(m, dir);
    else if (m.subcommand == "scan") r = run_scan(m, dir);
    else throw std::runtime_error("unknown subcommand '" + m.subcommand + "'");
    r.artifact_dir = dir;
    return r;
}

}  // namespace sevo
