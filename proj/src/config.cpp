#include "anyon/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "anyon/errors.hpp"

namespace anyon {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ParseError("key '" + key + "': expected a number, got '" + v + "'", line);
    }
}

long long to_int(const std::string& key, const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const long long i = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ParseError("key '" + key + "': expected an integer, got '" + v + "'", line);
    }
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> items;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&, int)>;

Setter real(double RunConfig::*field) {
    return [field](RunConfig& c, const std::string& k, const std::string& v, int l) { c.*field = to_double(k, v, l); };
}
Setter integer(int RunConfig::*field) {
    return [field](RunConfig& c, const std::string& k, const std::string& v, int l) {
        c.*field = static_cast<int>(to_int(k, v, l));
    };
}
Setter bump_field(GaussianBump InitialCondition::*bump, double GaussianBump::*field) {
    return [bump, field](RunConfig& c, const std::string& k, const std::string& v, int l) {
        (c.ic.*bump).*field = to_double(k, v, l);
    };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        t["grid.n_x"] = integer(&RunConfig::n_x);
        t["grid.n_per_axis"] = integer(&RunConfig::n_per_axis);
        t["grid.vmax"] = real(&RunConfig::vmax);
        t["grid.n_theta"] = integer(&RunConfig::n_theta);
        t["kernel.B0"] = real(&RunConfig::B0);
        t["kernel.gamma"] = real(&RunConfig::gamma);
        t["kernel.gamma_prime"] = real(&RunConfig::gamma_prime);
        t["kernel.profile"] = [](RunConfig& c, const std::string& k, const std::string& v, int l) {
            if (v != "constant" && v != "sin2")
                throw ParseError("key '" + k + "': expected constant or sin2, got '" + v + "'", l);
            c.profile = v;
        };
        t["kernel.profile_scale"] = real(&RunConfig::profile_scale);
        t["run.alpha"] = real(&RunConfig::alpha);
        t["run.t_end"] = real(&RunConfig::t_end);
        t["run.cadence"] = integer(&RunConfig::cadence);
        t["run.lambdas"] = [](RunConfig& c, const std::string& k, const std::string& v, int l) {
            c.lambdas.clear();
            for (const auto& item : split_list(v)) c.lambdas.push_back(to_double(k, item, l));
        };
        t["run.blowup_mode"] = [](RunConfig& c, const std::string& k, const std::string& v, int l) {
            if (v == "ladder")
                c.blowup = BlowupMode::Ladder;
            else if (v == "terminate")
                c.blowup = BlowupMode::Terminate;
            else
                throw ParseError("key '" + k + "': expected ladder or terminate, got '" + v + "'", l);
        };
        t["run.seed"] = [](RunConfig& c, const std::string& k, const std::string& v, int l) {
            c.seed = static_cast<std::uint64_t>(to_int(k, v, l));
        };
        t["step.cfl"] = [](RunConfig& c, const std::string& k, const std::string& v, int l) {
            c.step.cfl_collision = to_double(k, v, l);
        };
        t["step.dt_min"] = [](RunConfig& c, const std::string& k, const std::string& v, int l) {
            c.step.dt_min = to_double(k, v, l);
        };
        t["step.dt_max"] = [](RunConfig& c, const std::string& k, const std::string& v, int l) {
            c.step.dt_max = to_double(k, v, l);
        };
        t["step.ceiling_margin"] = [](RunConfig& c, const std::string& k, const std::string& v, int l) {
            c.step.ceiling_margin = to_double(k, v, l);
        };
        t["ic.kind"] = [](RunConfig& c, const std::string& k, const std::string& v, int l) {
            if (v == "gaussian_bump")
                c.ic.kind = InitialKind::GaussianBump;
            else if (v == "bose_einstein")
                c.ic.kind = InitialKind::BoseEinstein;
            else if (v == "two_beam")
                c.ic.kind = InitialKind::TwoBeam;
            else
                throw ParseError("key '" + k + "': unknown initial condition '" + v + "'", l);
        };
        t["ic.A"] = bump_field(&InitialCondition::bump, &GaussianBump::amplitude);
        t["ic.u1"] = bump_field(&InitialCondition::bump, &GaussianBump::u1);
        t["ic.u2"] = bump_field(&InitialCondition::bump, &GaussianBump::u2);
        t["ic.sigma"] = bump_field(&InitialCondition::bump, &GaussianBump::sigma);
        t["ic.eps"] = bump_field(&InitialCondition::bump, &GaussianBump::eps);
        t["ic.power"] = bump_field(&InitialCondition::bump, &GaussianBump::power);
        t["ic.beam2.A"] = bump_field(&InitialCondition::second, &GaussianBump::amplitude);
        t["ic.beam2.u1"] = bump_field(&InitialCondition::second, &GaussianBump::u1);
        t["ic.beam2.u2"] = bump_field(&InitialCondition::second, &GaussianBump::u2);
        t["ic.beam2.sigma"] = bump_field(&InitialCondition::second, &GaussianBump::sigma);
        t["ic.beam2.eps"] = bump_field(&InitialCondition::second, &GaussianBump::eps);
        t["ic.beam2.power"] = bump_field(&InitialCondition::second, &GaussianBump::power);
        t["ic.T"] = [](RunConfig& c, const std::string& k, const std::string& v, int l) {
            c.ic.bose.temperature = to_double(k, v, l);
        };
        t["ic.mu"] = [](RunConfig& c, const std::string& k, const std::string& v, int l) {
            c.ic.bose.mu = to_double(k, v, l);
        };
        t["ic.delta"] = [](RunConfig& c, const std::string& k, const std::string& v, int l) {
            c.ic.delta = to_double(k, v, l);
        };
        t["out.dir"] = [](RunConfig& c, const std::string&, const std::string& v, int) { c.out_dir = v; };
        t["sweep.alphas"] = [](RunConfig& c, const std::string& k, const std::string& v, int l) {
            c.sweep_alphas.clear();
            for (const auto& item : split_list(v)) c.sweep_alphas.push_back(to_double(k, item, l));
        };
        t["refine.n_list"] = [](RunConfig& c, const std::string& k, const std::string& v, int l) {
            c.refine_n.clear();
            for (const auto& item : split_list(v)) c.refine_n.push_back(static_cast<int>(to_int(k, item, l)));
        };
        return t;
    }();
    return table;
}

const std::set<std::string> kRequired{"run.t_end", "ic.kind"};

std::string real_text(double d) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ", ";
        if constexpr (std::is_floating_point_v<T>)
            s += real_text(xs[i]);
        else
            s += std::to_string(xs[i]);
    }
    return s;
}

} // namespace

void RunConfig::validate() const {
    auto require = [](bool ok, const std::string& key, const std::string& what) {
        if (!ok) throw ConfigError("config key '" + key + "': " + what);
    };
    require(n_x >= 1, "grid.n_x", "must be >= 1");
    require(n_per_axis >= 4 && n_per_axis % 2 == 0, "grid.n_per_axis", "must be even and >= 4");
    require(vmax > 0, "grid.vmax", "must be positive");
    require(n_theta >= 1, "grid.n_theta", "must be >= 1");
    require(B0 >= 0, "kernel.B0", "must be >= 0");
    require(gamma > 0, "kernel.gamma", "must be positive");
    require(gamma_prime > 0 && gamma_prime < 0.5, "kernel.gamma_prime", "must lie in (0, 1/2)");
    require(profile_scale >= 0 && profile_scale <= 1, "kernel.profile_scale", "must lie in [0, 1]");
    require(alpha >= 0 && alpha < 0.5, "run.alpha", "must lie in [0, 1/2)");
    require(t_end > 0, "run.t_end", "must be positive");
    require(cadence >= 1, "run.cadence", "must be >= 1");
    for (double l : lambdas) require(l >= 0, "run.lambdas", "entries must be >= 0");
    require(step.dt_min > 0 && step.dt_min <= step.dt_max, "step.dt_min", "need 0 < dt_min <= dt_max");
    require(step.cfl_collision > 0 && step.cfl_collision <= 1, "step.cfl", "must lie in (0, 1]");
    require(step.ceiling_margin > 0 && step.ceiling_margin < 1, "step.ceiling_margin", "must lie in (0, 1)");
    auto check_bump = [&](const GaussianBump& b, const std::string& prefix) {
        require(b.amplitude > 0, prefix + "A", "must be positive");
        require(b.sigma > 0, prefix + "sigma", "must be positive");
        require(b.eps >= 0 && b.eps < 1, prefix + "eps", "must lie in [0, 1)");
        require(b.power >= 1, prefix + "power", "must be >= 1");
    };
    if (ic.kind != InitialKind::BoseEinstein) check_bump(ic.bump, "ic.");
    if (ic.kind == InitialKind::TwoBeam) check_bump(ic.second, "ic.beam2.");
    if (ic.kind == InitialKind::BoseEinstein) {
        require(ic.bose.temperature > 0, "ic.T", "must be positive");
        require(ic.bose.mu < 0, "ic.mu", "Bose-Einstein data needs mu < 0");
    }
    require(ic.delta >= 0, "ic.delta", "must be >= 0");
    for (double a : sweep_alphas) require(a >= 0 && a < 0.5, "sweep.alphas", "entries must lie in [0, 1/2)");
    for (int n : refine_n) require(n >= 4 && n % 2 == 0, "refine.n_list", "entries must be even and >= 4");
}

KernelSpec<double> RunConfig::kernel() const {
    KernelSpec<double> k;
    k.B0 = B0;
    k.gamma = gamma;
    k.gamma_prime = gamma_prime;
    const double scale = profile_scale;
    if (profile == "sin2")
        k.profile = [scale](double theta) { return scale * std::sin(theta) * std::sin(theta); };
    else
        k.profile = [scale](double) { return scale; };
    return k;
}

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value', got '" + text + "'", line);
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw ParseError("unknown key '" + key + "'", line);
        if (!seen.insert(key).second) throw ParseError("duplicate key '" + key + "'", line);
        if (value.empty()) throw ParseError("key '" + key + "' has no value", line);
        it->second(cfg, key, value, line);
    }
    for (const auto& key : kRequired)
        if (!seen.count(key)) throw ConfigError("config: missing required key '" + key + "'");
    cfg.validate();
    return cfg;
}

RunConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

std::string format_config(const RunConfig& c) {
    std::ostringstream o;
    auto kv = [&o](const std::string& k, const std::string& v) { o << k << " = " << v << '\n'; };
    kv("grid.n_x", std::to_string(c.n_x));
    kv("grid.n_per_axis", std::to_string(c.n_per_axis));
    kv("grid.vmax", real_text(c.vmax));
    kv("grid.n_theta", std::to_string(c.n_theta));
    kv("kernel.B0", real_text(c.B0));
    kv("kernel.gamma", real_text(c.gamma));
    kv("kernel.gamma_prime", real_text(c.gamma_prime));
    kv("kernel.profile", c.profile);
    kv("kernel.profile_scale", real_text(c.profile_scale));
    kv("run.alpha", real_text(c.alpha));
    kv("run.t_end", real_text(c.t_end));
    kv("run.cadence", std::to_string(c.cadence));
    kv("run.lambdas", join(c.lambdas));
    kv("run.blowup_mode", c.blowup == BlowupMode::Ladder ? "ladder" : "terminate");
    kv("run.seed", std::to_string(c.seed));
    kv("step.cfl", real_text(c.step.cfl_collision));
    kv("step.dt_min", real_text(c.step.dt_min));
    kv("step.dt_max", real_text(c.step.dt_max));
    kv("step.ceiling_margin", real_text(c.step.ceiling_margin));
    switch (c.ic.kind) {
    case InitialKind::GaussianBump: kv("ic.kind", "gaussian_bump"); break;
    case InitialKind::BoseEinstein: kv("ic.kind", "bose_einstein"); break;
    case InitialKind::TwoBeam: kv("ic.kind", "two_beam"); break;
    }
    kv("ic.A", real_text(c.ic.bump.amplitude));
    kv("ic.u1", real_text(c.ic.bump.u1));
    kv("ic.u2", real_text(c.ic.bump.u2));
    kv("ic.sigma", real_text(c.ic.bump.sigma));
    kv("ic.eps", real_text(c.ic.bump.eps));
    kv("ic.power", real_text(c.ic.bump.power));
    kv("ic.beam2.A", real_text(c.ic.second.amplitude));
    kv("ic.beam2.u1", real_text(c.ic.second.u1));
    kv("ic.beam2.u2", real_text(c.ic.second.u2));
    kv("ic.beam2.sigma", real_text(c.ic.second.sigma));
    kv("ic.beam2.eps", real_text(c.ic.second.eps));
    kv("ic.beam2.power", real_text(c.ic.second.power));
    kv("ic.T", real_text(c.ic.bose.temperature));
    kv("ic.mu", real_text(c.ic.bose.mu));
    kv("ic.delta", real_text(c.ic.delta));
    kv("out.dir", c.out_dir);
    kv("sweep.alphas", join(c.sweep_alphas));
    kv("refine.n_list", join(c.refine_n));
    return o.str();
}

} // namespace anyon
