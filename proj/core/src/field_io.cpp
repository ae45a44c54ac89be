#include "gmlab/field_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace gmlab {

namespace {

double parse_double(const std::string& text, const std::string& what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double val = std::strtod(begin, &end);
    if (end == begin) throw Error(ErrorKind::ParseError, "cannot parse " + what + ": '" + text + "'");
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    if (*end != '\0') throw Error(ErrorKind::ParseError, "trailing text in " + what + ": '" + text + "'");
    return val;
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_solution(std::ostream& os, const SolutionField& sol, const std::string& status) {
    const Grid& g = sol.grid;
    const ModelParams& m = sol.params;
    const bool two_d = g.dimension() == 2;
    os << "# gmlab-field=1\n";
    os << "# status=" << status << '\n';
    os << "# geometry=" << to_string(g.geometry().kind) << '\n';
    os << "# lx=" << format_double(g.geometry().lx) << '\n';
    if (two_d) os << "# ly=" << format_double(g.geometry().ly) << '\n';
    os << "# nx=" << g.nx() << '\n';
    if (two_d) os << "# ny=" << g.ny() << '\n';
    os << "# p=" << format_double(m.exps.p()) << '\n'
       << "# q=" << format_double(m.exps.q()) << '\n'
       << "# r=" << format_double(m.exps.r()) << '\n'
       << "# s=" << format_double(m.exps.s()) << '\n'
       << "# d1=" << format_double(m.d1) << '\n'
       << "# d2=" << format_double(m.d2) << '\n'
       << "# sigma=" << format_double(m.sigma) << '\n'
       << "# residual_norm=" << format_double(sol.residual_norm) << '\n'
       << "# columns=" << (two_d ? "x y u v" : "x u v") << '\n';
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const int k = g.index(i, j);
            os << format_double(g.x(i)) << ' ';
            if (two_d) os << format_double(g.y(j)) << ' ';
            os << format_double(sol.u(k)) << ' ' << format_double(sol.v(k)) << '\n';
        }
    }
}

SolutionField read_solution(std::istream& is) {
    std::map<std::string, std::string> header;
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            header[key] = line.substr(eq + 1);
            continue;
        }
        std::istringstream ls(line);
        std::vector<double> row;
        std::string tok;
        while (ls >> tok) row.push_back(parse_double(tok, "line " + std::to_string(lineno)));
        rows.push_back(std::move(row));
    }
    auto need = [&](const std::string& key) -> const std::string& {
        auto it = header.find(key);
        if (it == header.end()) throw Error(ErrorKind::ParseError, "field file lacks header '" + key + "'");
        return it->second;
    };
    auto num = [&](const std::string& key) { return parse_double(need(key), key); };
    auto integer = [&](const std::string& key) {
        const double v = num(key);
        if (v != static_cast<int>(v)) throw Error(ErrorKind::ParseError, key + " must be an integer");
        return static_cast<int>(v);
    };

    const std::string geom = need("geometry");
    const bool two_d = geom == "rectangle";
    if (!two_d && geom != "interval") throw Error(ErrorKind::ParseError, "unknown geometry '" + geom + "'");
    const Grid grid = two_d ? Grid::rectangle(num("lx"), num("ly"), integer("nx"), integer("ny"))
                            : Grid::interval(num("lx"), integer("nx"));
    const ExponentSet exps = ExponentSet::make(num("p"), num("q"), num("r"), num("s"));
    const ModelParams params = ModelParams::make(exps, num("d1"), num("d2"), num("sigma"));

    const std::size_t cols = two_d ? 4 : 3;
    if (rows.size() != static_cast<std::size_t>(grid.size())) {
        throw Error(ErrorKind::ParseError, "field file has " + std::to_string(rows.size()) +
                                               " rows, grid needs " + std::to_string(grid.size()));
    }
    Eigen::VectorXd u(grid.size());
    Eigen::VectorXd v(grid.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k].size() != cols) throw Error(ErrorKind::ParseError, "wrong column count in row " + std::to_string(k));
        u(static_cast<Eigen::Index>(k)) = rows[k][cols - 2];
        v(static_cast<Eigen::Index>(k)) = rows[k][cols - 1];
    }
    const double res = header.count("residual_norm") ? num("residual_norm") : 0.0;
    return SolutionField{grid, std::move(u), std::move(v), res, params};
}

void save_solution(const std::string& path, const SolutionField& sol, const std::string& status) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "' for writing");
    write_solution(os, sol, status);
}

SolutionField load_solution(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
    return read_solution(is);
}

}  // namespace gmlab
