#include "perifsi/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "perifsi/csv.hpp"
#include "perifsi/errors.hpp"

namespace perifsi {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    if (trim(s).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view text, int line) {
    T value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
        throw ParseError(line, "not a number: '" + std::string(text) + "'");
    return value;
}

std::vector<double> parse_list(std::string_view text, int line) {
    std::vector<double> out;
    for (auto item : split(text, ',')) out.push_back(parse_number<double>(item, line));
    return out;
}

// amplitude[:harmonic[:cosine]], comma separated.
std::vector<Harmonic> parse_harmonics(std::string_view text, int line) {
    std::vector<Harmonic> out;
    for (auto item : split(text, ',')) {
        const auto parts = split(item, ':');
        if (parts.empty() || parts.size() > 3) throw ParseError(line, "bad harmonic '" + std::string(item) + "'");
        Harmonic h;
        h.amplitude = parse_number<double>(parts[0], line);
        if (parts.size() > 1) h.harmonic = parse_number<int>(parts[1], line);
        if (parts.size() > 2) h.cosine = parse_number<double>(parts[2], line);
        out.push_back(h);
    }
    return out;
}

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + format_double(xs[i]);
    return out;
}

std::string join(const std::vector<Harmonic>& hs) {
    std::string out;
    for (std::size_t i = 0; i < hs.size(); ++i)
        out += (i ? ", " : "") + format_double(hs[i].amplitude) + ":" + std::to_string(hs[i].harmonic) + ":" +
               format_double(hs[i].cosine);
    return out;
}

template <class E>
struct EnumName {
    E value;
    std::string_view name;
};

constexpr EnumName<RunMode> kModes[] = {{RunMode::Periodic, "periodic"}, {RunMode::Ivp, "ivp"}, {RunMode::Verify, "verify"}};
constexpr EnumName<Model> kModels[] = {{Model::Full, "full"}, {Model::SolidMode, "solid-mode"}};
constexpr EnumName<BoundaryMode> kBoundaries[] = {{BoundaryMode::PeriodicTheta, "periodic-theta"},
                                                  {BoundaryMode::ClampedAll, "clamped"}};

template <class E, std::size_t N>
E parse_enum(const EnumName<E> (&table)[N], std::string_view text, int line) {
    for (const auto& e : table)
        if (e.name == text) return e.value;
    std::string allowed;
    for (const auto& e : table) allowed += (allowed.empty() ? "" : ", ") + std::string(e.name);
    throw ParseError(line, "'" + std::string(text) + "' is not one of " + allowed);
}

template <class E, std::size_t N>
std::string_view enum_name(const EnumName<E> (&table)[N], E value) {
    for (const auto& e : table)
        if (e.value == value) return e.name;
    return "?";
}

struct Key {
    std::string_view section, name;
    std::function<void(RunConfig&, std::string_view, int)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <class T>
Key number_key(std::string_view section, std::string_view name, T RunConfig::*member) {
    return {section, name, [member](RunConfig& c, std::string_view v, int line) { c.*member = parse_number<T>(v, line); },
            [member](const RunConfig& c) {
                if constexpr (std::is_floating_point_v<T>) return format_double(c.*member);
                else return std::to_string(c.*member);
            }};
}

template <class S, class T>
Key nested_key(std::string_view section, std::string_view name, S RunConfig::*outer, T S::*member) {
    return {section, name,
            [=](RunConfig& c, std::string_view v, int line) { c.*outer.*member = parse_number<T>(v, line); },
            [=](const RunConfig& c) {
                if constexpr (std::is_floating_point_v<T>) return format_double(c.*outer.*member);
                else return std::to_string(c.*outer.*member);
            }};
}

const std::vector<Key>& keys() {
    static const std::vector<Key> table = {
        {"run", "mode", [](RunConfig& c, std::string_view v, int l) { c.mode = parse_enum(kModes, v, l); },
         [](const RunConfig& c) { return std::string(enum_name(kModes, c.mode)); }},
        number_key("run", "seed", &RunConfig::seed),

        nested_key("geometry", "R", &RunConfig::geometry, &CylinderConfig::R),
        nested_key("geometry", "L", &RunConfig::geometry, &CylinderConfig::L),
        nested_key("geometry", "H", &RunConfig::geometry, &CylinderConfig::H),

        {"physics", "model", [](RunConfig& c, std::string_view v, int l) { c.model = parse_enum(kModels, v, l); },
         [](const RunConfig& c) { return std::string(enum_name(kModels, c.model)); }},
        nested_key("physics", "lambda1", &RunConfig::solid, &SolidParams::lambda1),
        nested_key("physics", "lambda2", &RunConfig::solid, &SolidParams::lambda2),
        nested_key("physics", "delta_visc", &RunConfig::solid, &SolidParams::delta_visc),
        nested_key("physics", "rho_s2", &RunConfig::solid, &SolidParams::rho_s2),
        number_key("physics", "rho_f", &RunConfig::rho_f),
        number_key("physics", "mu", &RunConfig::mu),
        number_key("physics", "rho_s_h", &RunConfig::rho_s_h),

        {"discretization", "boundary",
         [](RunConfig& c, std::string_view v, int l) { c.boundary = parse_enum(kBoundaries, v, l); },
         [](const RunConfig& c) { return std::string(enum_name(kBoundaries, c.boundary)); }},
        number_key("discretization", "N_theta", &RunConfig::n_theta),
        number_key("discretization", "N_z", &RunConfig::n_z),
        number_key("discretization", "N_r_fluid", &RunConfig::n_r_fluid),
        number_key("discretization", "N_r_solid", &RunConfig::n_r_solid),
        number_key("discretization", "n_interior", &RunConfig::n_interior),
        number_key("discretization", "N_t", &RunConfig::n_t),
        number_key("discretization", "stokes_radial", &RunConfig::stokes_radial),
        number_key("discretization", "stokes_axial", &RunConfig::stokes_axial),
        number_key("discretization", "oversample", &RunConfig::oversample),

        number_key("forcing", "T", &RunConfig::period),
        {"forcing", "P_in", [](RunConfig& c, std::string_view v, int l) { c.p_in = parse_harmonics(v, l); },
         [](const RunConfig& c) { return join(c.p_in); }},
        {"forcing", "P_out", [](RunConfig& c, std::string_view v, int l) { c.p_out = parse_harmonics(v, l); },
         [](const RunConfig& c) { return join(c.p_out); }},
        {"forcing", "P_in_samples", [](RunConfig& c, std::string_view v, int l) { c.p_in_samples = parse_list(v, l); },
         [](const RunConfig& c) { return join(c.p_in_samples); }},
        {"forcing", "P_out_samples",
         [](RunConfig& c, std::string_view v, int l) { c.p_out_samples = parse_list(v, l); },
         [](const RunConfig& c) { return join(c.p_out_samples); }},

        nested_key("outer", "epsilon", &RunConfig::outer, &OuterConfig::epsilon),
        nested_key("outer", "relaxation", &RunConfig::outer, &OuterConfig::relaxation),
        nested_key("outer", "max_iter", &RunConfig::outer, &OuterConfig::max_iter),
        nested_key("outer", "tol", &RunConfig::outer, &OuterConfig::tol),
        nested_key("outer", "forcing_l2_max", &RunConfig::outer, &OuterConfig::forcing_l2_max),
        number_key("outer", "margin", &RunConfig::margin),

        number_key("ivp", "dt", &RunConfig::ivp_dt),
        number_key("ivp", "horizon", &RunConfig::ivp_horizon),
        number_key("ivp", "initial_displacement", &RunConfig::ivp_displacement),
        number_key("ivp", "initial_velocity", &RunConfig::ivp_velocity),
        number_key("ivp", "max_picard", &RunConfig::ivp_max_picard),
        number_key("ivp", "picard_tol", &RunConfig::ivp_picard_tol),
    };
    return table;
}

bool known_section(std::string_view name) {
    for (const Key& k : keys())
        if (k.section == name) return true;
    return false;
}

}  // namespace

std::string_view to_string(RunMode mode) { return enum_name(kModes, mode); }

void RunConfig::validate() const {
    geometry.validate();
    solid.validate();
    outer.validate();
    if (rho_f != 1.0) throw ValidationError("rho_f = 1");
    if (mu != 1.0) throw ValidationError("mu = 1");
    if (rho_s_h != 1.0) throw ValidationError("rho_s_h = 1");
    const std::pair<const char*, int> counts[] = {
        {"N_theta >= 1", n_theta},         {"N_z >= 1", n_z},
        {"N_r_fluid >= 1", n_r_fluid},     {"N_r_solid >= 1", n_r_solid},
        {"n_interior >= 1", n_interior},   {"N_t >= 1", n_t},
        {"stokes_radial >= 1", stokes_radial}, {"stokes_axial >= 1", stokes_axial},
        {"oversample >= 1", oversample},   {"max_picard >= 1", ivp_max_picard}};
    for (const auto& [what, n] : counts)
        if (n < 1) throw ValidationError(what);
    if (!(period > 0.0) || !std::isfinite(period)) throw ValidationError("T > 0");
    forcing();
    if (!std::isfinite(margin)) throw ValidationError("margin finite");
    if (!std::isfinite(ivp_dt) || !std::isfinite(ivp_horizon)) throw ValidationError("ivp dt and horizon finite");
    if (!(ivp_displacement >= 0.0) || !(ivp_velocity >= 0.0) || !std::isfinite(ivp_displacement + ivp_velocity))
        throw ValidationError("initial data scales >= 0");
    if (!(ivp_picard_tol > 0.0)) throw ValidationError("picard_tol > 0");
}

Discretization RunConfig::discretization() const {
    Discretization d;
    d.cyl = geometry;
    d.solid = solid;
    d.boundary = boundary;
    d.n_theta = n_theta;
    d.n_z = n_z;
    d.fluid_per_panel = n_r_fluid;
    d.solid_radial = n_r_solid;
    d.n_interior = n_interior;
    d.stokes = {stokes_radial, stokes_axial};
    d.oversample = oversample;
    d.margin = margin;
    return d;
}

BoundaryForcing RunConfig::forcing() const {
    return BoundaryForcing(period, p_in_samples.empty() ? p_in : interpolate_samples(p_in_samples),
                           p_out_samples.empty() ? p_out : interpolate_samples(p_out_samples));
}

IvpOptions RunConfig::ivp_options() const {
    IvpOptions o;
    o.dt = ivp_dt > 0.0 ? ivp_dt : period / n_t;
    o.horizon = ivp_horizon > 0.0 ? ivp_horizon : period;
    o.max_picard = ivp_max_picard;
    o.picard_tol = ivp_picard_tol;
    return o;
}

GalerkinState RunConfig::ivp_initial(int size) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    GalerkinState s = GalerkinState::zero(size);
    for (auto& x : s.a) x = ivp_displacement * unit(rng);
    for (auto& x : s.a_dot) x = ivp_velocity * unit(rng);
    return s;
}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::string_view section;
    std::vector<std::string_view> seen;
    int line_no = 0;
    for (auto raw : split(text, '\n')) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!known_section(section)) throw ParseError(line_no, "unknown section [" + std::string(section) + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
        const std::string_view name = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        const Key* key = nullptr;
        for (const Key& k : keys())
            if (k.name == name && (section.empty() || k.section == section)) key = &k;
        if (!key) {
            const std::string where = section.empty() ? "" : " in [" + std::string(section) + "]";
            throw ParseError(line_no, "unknown key '" + std::string(name) + "'" + where);
        }
        for (auto s : seen)
            if (s == key->name) throw ParseError(line_no, "duplicate key '" + std::string(name) + "'");
        seen.push_back(key->name);
        key->set(cfg, value, line_no);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string emit_config(const RunConfig& config) {
    std::string out;
    std::string_view section;
    for (const Key& k : keys()) {
        if (k.section != section) {
            out += (section.empty() ? "[" : "\n[") + std::string(k.section) + "]\n";
            section = k.section;
        }
        out += std::string(k.name) + " = " + k.get(config) + "\n";
    }
    return out;
}

}  // namespace perifsi
