#include "gmlab_cli/commands.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmlab/analytic.hpp"
#include "gmlab/field_io.hpp"

namespace gmlab::cli {

namespace {

using nlohmann::json;

std::string fmt(double x) { return format_double(x); }

template <class T>
const T& single(const std::vector<T>& values, const char* name) {
    if (values.size() != 1) {
        throw Error(ErrorKind::InvalidArgument, std::string("this command takes a single ") + name + " value");
    }
    return values.front();
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

json threshold_json(const ThresholdReport& rep) {
    json j;
    j["sigma"] = rep.sigma;
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    j["k1"] = opt(rep.k1);
    j["k2"] = opt(rep.k2);
    j["k"] = opt(rep.k);
    j["lambda_star"] = rep.lambda_star;
    j["upper_set"] = rep.upper_set ? json(rep.upper_set->to_string()) : json(nullptr);
    j["lower_set"] = rep.lower_set ? json(rep.lower_set->to_string()) : json(nullptr);
    if (rep.upper_sup) j["k1_argmax"] = rep.upper_sup->argmax;
    if (rep.lower_sup) j["k2_argmax"] = rep.lower_sup->argmax;
    return j;
}

void print_sup(std::ostream& out, const char* name, const std::optional<double>& k,
               const std::optional<Supremum>& sup, const std::optional<LambdaSet>& set,
               const char* missing) {
    out << name << " = ";
    if (!k) {
        out << "n/a (" << missing << ")\n";
        return;
    }
    out << fmt(*k);
    if (sup) out << "  at lambda = " << fmt(sup->argmax) << (sup->attained ? "" : " (not attained)");
    if (set) out << "  over " << set->to_string();
    out << '\n';
}

SolutionField make_guess(const ExperimentConfig& cfg, const Grid& grid, const ModelParams& prm) {
    GuessOptions go;
    go.seed = cfg.seed;
    if (cfg.guess == "constant") return initial_guess(GuessKind::Constant, grid, prm, go);
    if (cfg.guess == "perturbed") return initial_guess(GuessKind::Perturbed, grid, prm, go);
    return initial_guess(GuessKind::Spike, grid, prm, go);
}

std::string summary_line(const SolutionField& sol, const std::string& status, const BoundsReport* rep) {
    const Extremes x = Extremes::of(sol);
    std::ostringstream os;
    os << status << ' ' << (is_constant_solution(sol) ? "constant" : "non-constant") << " u_max=" << fmt(x.u_max)
       << " u_min=" << fmt(x.u_min) << " v_max=" << fmt(x.v_max) << " v_min=" << fmt(x.v_min)
       << " residual=" << fmt(sol.residual_norm);
    if (rep) os << " checks=" << (rep->overall() ? "pass" : "FAIL");
    return os.str();
}

void write_report_file(const std::string& path, const BoundsReport& rep, bool as_json) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "' for writing");
    if (as_json) {
        os << report_to_json(rep) << '\n';
    } else {
        write_report_text(os, rep);
    }
}

}  // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NoConvergence:
        case ErrorKind::NotConverged:
        case ErrorKind::PathFailure:
        case ErrorKind::BlowUp:
            return kNoConvergence;
        case ErrorKind::LinearSolveFailure:
        case ErrorKind::NonPositiveField:
        case ErrorKind::TruncationUnsafe:
            return kChecksFailed;
        default:
            return kInvalidInput;
    }
}

int cmd_thresholds(const ExperimentConfig& cfg, std::ostream& out) {
    const ExponentSet exps = exponents_of(cfg);
    std::vector<ThresholdReport> reps;
    for (double sg : cfg.sigma) reps.push_back(k_thresholds(exps, sg));
    const double sigma_thr = sigma_no_bifurcation_threshold(exps);

    if (cfg.format == "json") {
        json j;
        j["exponents"] = {{"p", exps.p()}, {"q", exps.q()}, {"r", exps.r()}, {"s", exps.s()}};
        j["sigma_threshold"] = sigma_thr;
        j["reports"] = json::array();
        for (const auto& r : reps) j["reports"].push_back(threshold_json(r));
        out << j.dump(2) << '\n';
        return kOk;
    }
    if (reps.size() > 1 || cfg.format == "csv") {
        out << "sigma,u_star,k1,k2,k\n";
        auto cell = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
        for (const auto& r : reps) {
            out << fmt(r.sigma) << ',' << fmt(constant_state(exps, r.sigma).u_star) << ',' << cell(r.k1) << ','
                << cell(r.k2) << ',' << cell(r.k) << '\n';
        }
        return kOk;
    }
    const ThresholdReport& r = reps.front();
    const ConstantState cs = constant_state(exps, r.sigma);
    out << "exponents p=" << fmt(exps.p()) << " q=" << fmt(exps.q()) << " r=" << fmt(exps.r())
        << " s=" << fmt(exps.s()) << " sigma=" << fmt(r.sigma) << '\n';
    out << "u* = " << fmt(cs.u_star) << "  v* = " << fmt(cs.v_star) << '\n';
    print_sup(out, "k1", r.k1, r.upper_sup, r.upper_set, "needs q < s+1");
    print_sup(out, "k2", r.k2, r.lower_sup, r.lower_set, "needs r < s+1");
    out << "k = " << (r.k ? fmt(*r.k) : std::string("n/a")) << '\n';
    out << "lambda* = " << fmt(r.lambda_star) << '\n';
    out << "sigma threshold (every d1i < 0 above) = " << fmt(sigma_thr) << '\n';
    return kOk;
}

int cmd_steady(const ExperimentConfig& cfg, std::ostream& out) {
    const ExponentSet exps = exponents_of(cfg);
    if (cfg.format == "json") {
        json j = json::array();
        for (double sg : cfg.sigma) {
            const ConstantState cs = constant_state(exps, sg);
            j.push_back({{"sigma", sg}, {"u_star", cs.u_star}, {"v_star", cs.v_star},
                         {"du_star_dsigma", du_star_dsigma(exps, sg)}});
        }
        out << j.dump(2) << '\n';
        return kOk;
    }
    out << "sigma,u_star,v_star,du_star_dsigma\n";
    for (double sg : cfg.sigma) {
        const ConstantState cs = constant_state(exps, sg);
        out << fmt(sg) << ',' << fmt(cs.u_star) << ',' << fmt(cs.v_star) << ',' << fmt(du_star_dsigma(exps, sg))
            << '\n';
    }
    return kOk;
}

int cmd_solve(const ExperimentConfig& cfg, std::ostream& out) {
    validate(cfg);
    const double sigma = single(cfg.sigma, "sigma");
    const double d1 = single(cfg.d1, "d1");
    const double d2 = single(d2_values(cfg, d1), "d2");
    const ModelParams prm = ModelParams::make(exponents_of(cfg), d1, d2, sigma);
    const Grid grid = Grid::on(geometry_of(cfg), cfg.nx, cfg.ny);
    const std::string path = cfg.out.empty() ? "solution.txt" : cfg.out;
    const bool as_json = cfg.format == "json";

    SolutionField field = make_guess(cfg, grid, prm);
    std::string status = "converged";
    if (cfg.homotopy) {
        try {
            HomotopyPath hp = homotopy_continuation(grid, prm, cfg.rho);
            field = std::move(hp.fields.back());
        } catch (const PathFailure& e) {
            out << "path_failure tau=" << fmt(e.tau()) << ' ' << e.what() << '\n';
            return kNoConvergence;
        }
    } else {
        SteadyStateOptions so;
        so.march_first = cfg.guess == "spike";
        NewtonResult res = find_steady_state(field, prm, so);
        field = std::move(res.field);
        if (!res.converged()) status = to_string(res.status);
    }
    save_solution(path, field, status);
    if (status != "converged") {
        out << summary_line(field, status, nullptr) << " file=" << path << '\n';
        return kNoConvergence;
    }
    const BoundsReport rep = verify_solution(field, prm);
    const std::string report_path = path + (as_json ? ".report.json" : ".report.txt");
    write_report_file(report_path, rep, as_json);
    out << summary_line(field, status, &rep) << " file=" << path << " report=" << report_path << '\n';
    return kOk;
}

std::vector<ScanCell> run_sweep(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<CellSpec> cells;
    for (double sg : cfg.sigma)
        for (double d1 : cfg.d1)
            for (double d2 : d2_values(cfg, d1)) cells.push_back({d1, d2, sg});
    ScanOptions so;
    so.seeds = cfg.seeds;
    so.nodes = cfg.nx;
    so.workers = cfg.workers;
    so.seed = cfg.seed;
    return solve_cells(exponents_of(cfg), cells, geometry_of(cfg), so);
}

void write_sweep_csv(std::ostream& os, const std::vector<ScanCell>& cells) {
    os << "d1,d2,sigma,found_nonconstant,u_max,u_min,v_max,v_min,N_parity,predicted,status\n";
    for (const ScanCell& c : cells) {
        os << fmt(c.d1) << ',' << fmt(c.d2) << ',' << fmt(c.sigma) << ',' << (c.found_nonconstant() ? 1 : 0) << ','
           << fmt(c.extremes.u_max) << ',' << fmt(c.extremes.u_min) << ',' << fmt(c.extremes.v_max) << ','
           << fmt(c.extremes.v_min) << ',' << c.parity_count << ',' << (c.predicted ? 1 : 0) << ','
           << csv_quote(c.status) << '\n';
    }
}

std::string sweep_to_json(const std::vector<ScanCell>& cells) {
    json j = json::array();
    for (const ScanCell& c : cells) {
        j.push_back({{"d1", c.d1},
                     {"d2", c.d2},
                     {"sigma", c.sigma},
                     {"found_nonconstant", c.found_nonconstant()},
                     {"u_max", c.extremes.u_max},
                     {"u_min", c.extremes.u_min},
                     {"v_max", c.extremes.v_max},
                     {"v_min", c.extremes.v_min},
                     {"N_parity", c.parity_count},
                     {"predicted", c.predicted},
                     {"runs", c.runs},
                     {"converged", c.converged},
                     {"nonconstant", c.nonconstant},
                     {"status", c.status}});
    }
    return j.dump(2);
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out) {
    const auto cells = run_sweep(cfg);
    std::ostringstream body;
    if (cfg.format == "json") {
        body << sweep_to_json(cells) << '\n';
    } else {
        write_sweep_csv(body, cells);
    }
    if (cfg.out.empty()) {
        out << body.str();
    } else {
        std::ofstream os(cfg.out);
        if (!os) throw Error(ErrorKind::InvalidArgument, "cannot open '" + cfg.out + "' for writing");
        os << body.str();
        out << cells.size() << " cells written to " << cfg.out << '\n';
    }
    return kOk;
}

int cmd_bifurcations(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    const ExponentSet exps = exponents_of(cfg);
    const DomainGeometry geom = geometry_of(cfg);
    const double sigma = single(cfg.sigma, "sigma");
    const double d1 = single(cfg.d1, "d1");
    const double d2 = single(d2_values(cfg, d1), "d2");
    (void)ModelParams::make(exps, d1, d2, sigma);
    const BifurcationSet set =
        cfg.count > 0 ? parity(exps, sigma, d1, d2, geom, cfg.count) : certified_parity(exps, sigma, d1, d2, geom);
    if (set.is_resonant) {
        err << "warning: d1 = " << fmt(d1) << " lies within the resonance window of a bifurcation value (gap "
            << fmt(set.nearest_gap) << ")\n";
    }
    if (cfg.format == "json") {
        json j;
        j["d1"] = d1;
        j["d2"] = d2;
        j["sigma"] = sigma;
        j["entries"] = json::array();
        for (const auto& e : set.entries)
            j["entries"].push_back({{"i", e.index}, {"lambda", e.lambda}, {"multiplicity", e.multiplicity}, {"d1i", e.d1i}});
        j["active"] = set.active;
        j["N_d"] = set.parity_count;
        j["resonant"] = set.is_resonant;
        out << j.dump(2) << '\n';
        return kOk;
    }
    out << "i,lambda,multiplicity,d1i\n";
    for (const auto& e : set.entries) {
        out << e.index << ',' << fmt(e.lambda) << ',' << e.multiplicity << ',' << fmt(e.d1i) << '\n';
    }
    out << "# A_d = {";
    for (std::size_t k = 0; k < set.active.size(); ++k) out << (k ? "," : "") << set.active[k];
    out << "}\n# N_d = " << set.parity_count << (set.parity_count % 2 ? " (odd)" : " (even)") << '\n';
    return kOk;
}

int cmd_verify(const ExperimentConfig& cfg, std::ostream& out) {
    if (cfg.input.empty()) throw Error(ErrorKind::InvalidArgument, "verify needs --in <solution file>");
    const SolutionField sol = load_solution(cfg.input);
    const BoundsReport rep = verify_solution(sol, sol.params);
    if (cfg.format == "json") {
        out << report_to_json(rep) << '\n';
    } else {
        write_report_text(out, rep);
    }
    return rep.overall() ? kOk : kChecksFailed;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steady states, thresholds and bound checks for the Gierer-Meinhardt system"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "key=value config file; flags override it");

    // Each flag is kept as text and routed through apply_setting, so files and
    // flags share one parser.
    struct Flag {
        const char* flag;
        const char* key;
        const char* help;
    };
    static const Flag kFlags[] = {
        {"-p", "p", "activator self-exponent"},
        {"-q", "q", "inhibitor exponent in the activator source"},
        {"-r", "r", "activator exponent in the inhibitor source"},
        {"-s", "s", "inhibitor self-exponent"},
        {"--sigma", "sigma", "basic activator source; value, list or lin:/log: grid"},
        {"--d1", "d1", "activator diffusion; value, list or grid"},
        {"--d2", "d2", "inhibitor diffusion; value, list or grid"},
        {"--ratio", "ratio", "set d2 = ratio * d1 (overrides --d2)"},
        {"--geometry", "geometry", "interval | rectangle"},
        {"--length", "length", "L, or Lx,Ly for a rectangle"},
        {"--nx", "nx", "grid points along x"},
        {"--ny", "ny", "grid points along y (default nx)"},
        {"--seed", "seed", "base random seed"},
        {"--seeds", "seeds", "initial guesses per sweep cell"},
        {"--out", "out", "output file"},
        {"--format", "format", "text | csv | json"},
        {"--workers", "workers", "sweep threads, 0 = all cores"},
        {"--in", "in", "solution file to verify"},
        {"--guess", "guess", "constant | perturbed | spike"},
        {"--rho", "rho", "constant solution of the tau = 0 problem"},
        {"--count", "count", "eigenvalues to list, 0 = until the tail is certified"},
    };
    std::map<std::string, std::string> values;
    std::vector<std::pair<std::string, CLI::Option*>> opts;
    for (const auto& f : kFlags) opts.emplace_back(f.key, app.add_option(f.flag, values[f.key], f.help));
    bool homotopy = false;
    auto* hom_flag = app.add_flag("--homotopy", homotopy, "solve by continuation from the linear problem");

    auto* thresholds = app.add_subcommand("thresholds", "k1, k2, k, lambda*, lambda sets, sigma threshold");
    auto* steady = app.add_subcommand("steady", "constant steady state");
    auto* solve = app.add_subcommand("solve", "solve on a grid, write the field and its bound report");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep, one CSV row per cell");
    auto* bifurcations = app.add_subcommand("bifurcations", "bifurcation values and parity");
    auto* verify = app.add_subcommand("verify", "re-check a saved solution file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o;
        std::ostringstream e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        for (const auto& [key, opt] : opts) {
            if (opt->count() > 0) apply_setting(cfg, key, values[key]);
        }
        if (hom_flag->count() > 0) cfg.homotopy = homotopy;

        if (thresholds->parsed()) return cmd_thresholds(cfg, out);
        if (steady->parsed()) return cmd_steady(cfg, out);
        if (solve->parsed()) return cmd_solve(cfg, out);
        if (sweep->parsed()) return cmd_sweep(cfg, out);
        if (bifurcations->parsed()) return cmd_bifurcations(cfg, out, err);
        if (verify->parsed()) return cmd_verify(cfg, out);
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kChecksFailed;
    }
    return kInvalidInput;
}

}  // namespace gmlab::cli
