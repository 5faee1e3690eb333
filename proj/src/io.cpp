#include "anyon/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "anyon/errors.hpp"

namespace anyon {

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory '" + dir + "': " + ec.message());
}

std::string diagnostics_header(const std::vector<double>& lambdas) {
    std::string h = "t,dt,mass,mom1,mom2,energy,sup_norm,bony,entropy";
    for (double l : lambdas) {
        char buf[40];
        std::snprintf(buf, sizeof buf, ",tail_mass_%g", l);
        h += buf;
    }
    return h + ",sup_density";
}

std::string diagnostics_row(const DiagnosticsRecord<double>& r) {
    std::string row = format_real(r.t);
    for (double v : {r.dt, r.mass, r.momentum.x(), r.momentum.y(), r.energy, r.sup_norm, r.bony})
        row += ',' + format_real(v);
    row += ',' + (r.entropy ? format_real(*r.entropy) : std::string("nan"));
    for (const auto& [lambda, tail] : r.tails) row += ',' + format_real(tail.mass);
    row += ',' + format_real(r.sup_density);
    return row;
}

void write_diagnostics(const std::string& path, const std::vector<DiagnosticsRecord<double>>& records,
                       const std::vector<double>& lambdas) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << diagnostics_header(lambdas) << '\n';
    for (const auto& r : records) out << diagnostics_row(r) << '\n';
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string format_snapshot(const State<double>& s) {
    std::ostringstream o;
    const auto& vg = s.velocity();
    o << "# anyon-kinetic snapshot\n";
    o << "format_version " << kSnapshotVersion << '\n';
    o << "n_x " << s.cells() << '\n';
    o << "n_per_axis " << vg.n_per_axis() << '\n';
    o << "vmax " << format_real(vg.vmax()) << '\n';
    o << "n_theta " << s.grids->angle.size() << '\n';
    o << "t " << format_real(s.t) << '\n';
    o << "alpha " << format_real(s.alpha.value()) << '\n';
    o << "data\n";
    for (int i = 0; i < s.cells(); ++i)
        for (int b = 0; b < vg.n_per_axis(); ++b)
            for (int a = 0; a < vg.n_per_axis(); ++a)
                o << i << ' ' << a << ' ' << b << ' ' << format_real(s.f(i, vg.index(a, b))) << '\n';
    return o.str();
}

void write_snapshot(const std::string& path, const State<double>& state) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << format_snapshot(state);
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

State<double> parse_snapshot(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::map<std::string, std::string> header;
    bool data = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (line == "data") {
            data = true;
            break;
        }
        std::istringstream ls(line);
        std::string key, value;
        if (!(ls >> key >> value)) throw ParseError("snapshot: malformed header line '" + line + "'", lineno);
        header[key] = value;
    }
    if (!data) throw ParseError("snapshot: missing data section", lineno);
    auto field = [&](const std::string& key) -> const std::string& {
        const auto it = header.find(key);
        if (it == header.end()) throw ParseError("snapshot: missing header field '" + key + "'", lineno);
        return it->second;
    };
    if (field("format_version") != std::to_string(kSnapshotVersion))
        throw ParseError("snapshot: unsupported format version " + field("format_version"), lineno);
    const int nx = std::stoi(field("n_x"));
    const int n = std::stoi(field("n_per_axis"));
    auto grids = make_discretization(nx, std::stod(field("vmax")), n, std::stoi(field("n_theta")));
    State<double> s(grids, AlphaParam<double>(std::stod(field("alpha"))));
    s.t = std::stod(field("t"));
    for (int i = 0; i < nx; ++i)
        for (int b = 0; b < n; ++b)
            for (int a = 0; a < n; ++a) {
                if (!std::getline(in, line))
                    throw ParseError("snapshot: truncated data section", lineno + 1);
                ++lineno;
                std::istringstream ls(line);
                int ri, ra, rb;
                std::string value;
                if (!(ls >> ri >> ra >> rb >> value) || ri != i || ra != a || rb != b)
                    throw ParseError("snapshot: expected row '" + std::to_string(i) + ' ' + std::to_string(a) + ' ' +
                                         std::to_string(b) + " f', got '" + line + "'",
                                     lineno);
                char* end = nullptr;
                const double f = std::strtod(value.c_str(), &end);
                if (end != value.c_str() + value.size())
                    throw ParseError("snapshot: bad value '" + value + "'", lineno);
                s.f(i, s.velocity().index(a, b)) = f;
            }
    return s;
}

State<double> read_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open snapshot '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_snapshot(ss.str());
}

} // namespace anyon
