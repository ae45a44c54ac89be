#include "gmlab_cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gmlab/errors.hpp"
#include "gmlab/field_io.hpp"
#include "gmlab/grid.hpp"

namespace gmlab::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double to_double(std::string_view text, std::string_view what) {
    const std::string buf(trim(text));
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size()) {
        throw Error(ErrorKind::ParseError, "invalid number for " + std::string(what) + ": '" + buf + "'");
    }
    return v;
}

template <class Int>
Int to_int(std::string_view text, std::string_view what) {
    text = trim(text);
    Int v{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw Error(ErrorKind::ParseError, "invalid integer for " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return v;
}

bool to_bool(std::string_view text, std::string_view what) {
    text = trim(text);
    if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
    if (text == "0" || text == "false" || text == "no" || text == "off") return false;
    throw Error(ErrorKind::ParseError, "invalid boolean for " + std::string(what) + ": '" + std::string(text) + "'");
}

}  // namespace

std::vector<double> parse_grid(std::string_view spec) {
    spec = trim(spec);
    if (spec.empty()) throw Error(ErrorKind::ParseError, "empty grid specification");
    const bool lin = spec.starts_with("lin:");
    const bool log = spec.starts_with("log:");
    if (lin || log) {
        const auto parts = split(spec.substr(4), ':');
        if (parts.size() != 3) throw Error(ErrorKind::ParseError, "grid '" + std::string(spec) + "' needs a:b:n");
        const double a = to_double(parts[0], "grid start");
        const double b = to_double(parts[1], "grid end");
        const int n = to_int<int>(parts[2], "grid size");
        if (n < 2) throw Error(ErrorKind::ParseError, "grid size must be at least 2");
        if (log && !(a > 0.0 && b > 0.0)) throw Error(ErrorKind::ParseError, "log grid needs positive ends");
        std::vector<double> out(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / (n - 1);
            out[static_cast<std::size_t>(i)] =
                lin ? a + (b - a) * t : std::exp(std::log(a) + (std::log(b) - std::log(a)) * t);
        }
        out.front() = a;
        out.back() = b;
        return out;
    }
    std::vector<double> out;
    for (auto part : split(spec, ',')) out.push_back(to_double(part, "grid value"));
    return out;
}

std::string format_grid(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    if (key == "p") cfg.p = to_double(value, key);
    else if (key == "q") cfg.q = to_double(value, key);
    else if (key == "r") cfg.r = to_double(value, key);
    else if (key == "s") cfg.s = to_double(value, key);
    else if (key == "sigma") cfg.sigma = parse_grid(value);
    else if (key == "d1") cfg.d1 = parse_grid(value);
    else if (key == "d2") cfg.d2 = parse_grid(value);
    else if (key == "ratio") {
        if (value.empty() || value == "none") cfg.ratio.reset();
        else cfg.ratio = to_double(value, key);
    } else if (key == "geometry") cfg.geometry = std::string(value);
    else if (key == "length") {
        const auto parts = split(value, ',');
        if (parts.size() > 2) throw Error(ErrorKind::ParseError, "length takes L or Lx,Ly");
        cfg.lx = to_double(parts[0], key);
        cfg.ly = parts.size() == 2 ? to_double(parts[1], key) : cfg.lx;
    } else if (key == "nx") cfg.nx = to_int<int>(value, key);
    else if (key == "ny") cfg.ny = to_int<int>(value, key);
    else if (key == "seed") cfg.seed = to_int<std::uint64_t>(value, key);
    else if (key == "seeds") cfg.seeds = to_int<int>(value, key);
    else if (key == "workers") cfg.workers = to_int<int>(value, key);
    else if (key == "format") cfg.format = std::string(value);
    else if (key == "out") cfg.out = std::string(value);
    else if (key == "in") cfg.input = std::string(value);
    else if (key == "guess") cfg.guess = std::string(value);
    else if (key == "homotopy") cfg.homotopy = to_bool(value, key);
    else if (key == "rho") cfg.rho = to_double(value, key);
    else if (key == "count") cfg.count = to_int<int>(value, key);
    else throw Error(ErrorKind::ParseError, "unknown config key '" + std::string(key) + "'");
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
    std::size_t lineno = 0;
    for (auto line : split(text, '\n')) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::ParseError, "config line " + std::to_string(lineno) + " lacks '='");
        }
        apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    }
    return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorKind::InvalidArgument, "cannot open config '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

std::string write_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "p=" << format_double(cfg.p) << '\n'
       << "q=" << format_double(cfg.q) << '\n'
       << "r=" << format_double(cfg.r) << '\n'
       << "s=" << format_double(cfg.s) << '\n'
       << "sigma=" << format_grid(cfg.sigma) << '\n'
       << "d1=" << format_grid(cfg.d1) << '\n'
       << "d2=" << format_grid(cfg.d2) << '\n'
       << "ratio=" << (cfg.ratio ? format_double(*cfg.ratio) : "none") << '\n'
       << "geometry=" << cfg.geometry << '\n'
       << "length=" << format_double(cfg.lx) << ',' << format_double(cfg.ly) << '\n'
       << "nx=" << cfg.nx << '\n'
       << "ny=" << cfg.ny << '\n'
       << "seed=" << cfg.seed << '\n'
       << "seeds=" << cfg.seeds << '\n'
       << "workers=" << cfg.workers << '\n'
       << "format=" << cfg.format << '\n'
       << "out=" << cfg.out << '\n'
       << "in=" << cfg.input << '\n'
       << "guess=" << cfg.guess << '\n'
       << "homotopy=" << (cfg.homotopy ? "true" : "false") << '\n'
       << "rho=" << format_double(cfg.rho) << '\n'
       << "count=" << cfg.count << '\n';
    return os.str();
}

ExponentSet exponents_of(const ExperimentConfig& cfg) { return ExponentSet::make(cfg.p, cfg.q, cfg.r, cfg.s); }

DomainGeometry geometry_of(const ExperimentConfig& cfg) {
    if (cfg.geometry == "interval") return DomainGeometry::interval(cfg.lx);
    if (cfg.geometry == "rectangle") return DomainGeometry::rectangle(cfg.lx, cfg.ly);
    throw Error(ErrorKind::InvalidGeometry, "unknown geometry '" + cfg.geometry + "' (interval or rectangle)");
}

std::vector<double> d2_values(const ExperimentConfig& cfg, double d1) {
    if (cfg.ratio) return {*cfg.ratio * d1};
    return cfg.d2;
}

void validate(const ExperimentConfig& cfg) {
    const ExponentSet exps = exponents_of(cfg);
    const DomainGeometry geom = geometry_of(cfg);
    (void)Grid::on(geom, cfg.nx, cfg.ny);
    if (cfg.sigma.empty() || cfg.d1.empty() || (!cfg.ratio && cfg.d2.empty())) {
        throw Error(ErrorKind::InvalidArgument, "sigma, d1 and d2 need at least one value");
    }
    if (cfg.ratio && !(*cfg.ratio > 0.0 && std::isfinite(*cfg.ratio))) {
        throw Error(ErrorKind::InvalidArgument, "ratio d2/d1 must be positive");
    }
    for (double sg : cfg.sigma)
        for (double d1 : cfg.d1)
            for (double d2 : d2_values(cfg, d1)) (void)ModelParams::make(exps, d1, d2, sg);
    if (cfg.seeds < 1) throw Error(ErrorKind::InvalidArgument, "seeds must be at least 1");
    if (cfg.workers < 0) throw Error(ErrorKind::InvalidArgument, "workers must be nonnegative");
    if (cfg.count < 0) throw Error(ErrorKind::InvalidArgument, "count must be nonnegative");
    if (!(cfg.rho > 0.0)) throw Error(ErrorKind::InvalidArgument, "rho must be positive");
    if (cfg.guess != "constant" && cfg.guess != "perturbed" && cfg.guess != "spike") {
        throw Error(ErrorKind::InvalidArgument, "guess must be constant, perturbed or spike");
    }
    if (!cfg.format.empty() && cfg.format != "csv" && cfg.format != "json" && cfg.format != "text") {
        throw Error(ErrorKind::InvalidArgument, "format must be csv, json or text");
    }
}

}  // namespace gmlab::cli
