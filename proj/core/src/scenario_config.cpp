#include "emff/scenario_config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace emff {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

struct Section {
    std::string header; // full text inside brackets
    int line = 0;
    std::map<std::string, Entry> entries;
    bool used = false;
};

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
    std::ostringstream out;
    out << source;
    if (line > 0) out << ":" << line;
    out << ": " << msg;
    throw ConfigError(out.str());
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<Section> tokenize(const std::string& text, const std::string& source) {
    std::vector<Section> sections;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(source, line, "unterminated section header");
            Section sec;
            sec.header = trim(s.substr(1, s.size() - 2));
            sec.line = line;
            if (sec.header.empty()) fail(source, line, "empty section header");
            sections.push_back(sec);
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) fail(source, line, "expected key = value");
        if (sections.empty()) fail(source, line, "key outside any section");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail(source, line, "empty key");
        if (value.empty()) fail(source, line, "empty value for key '" + key + "'");
        auto& entries = sections.back().entries;
        if (entries.count(key)) fail(source, line, "duplicate key '" + key + "'");
        entries[key] = Entry{value, line, false};
    }
    return sections;
}

class Reader {
  public:
    Reader(Section& sec, const std::string& source) : sec_(sec), source_(source) {}

    bool has(const std::string& key) const { return sec_.entries.count(key) > 0; }

    std::string str(const std::string& key) {
        auto it = sec_.entries.find(key);
        if (it == sec_.entries.end()) {
            fail(source_, sec_.line,
                 "section [" + sec_.header + "] is missing key '" + key + "'");
        }
        it->second.used = true;
        return it->second.value;
    }

    double num(const std::string& key) {
        const std::string v = str(key);
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0') {
            fail(source_, line_of(key), "key '" + key + "' is not a number: " + v);
        }
        return x;
    }

    double num_or(const std::string& key, double fallback) {
        return has(key) ? num(key) : fallback;
    }

    long integer(const std::string& key) {
        const std::string v = str(key);
        char* end = nullptr;
        const long x = std::strtol(v.c_str(), &end, 10);
        if (end == v.c_str() || *end != '\0') {
            fail(source_, line_of(key), "key '" + key + "' is not an integer: " + v);
        }
        return x;
    }

    int line_of(const std::string& key) const {
        auto it = sec_.entries.find(key);
        return it == sec_.entries.end() ? sec_.line : it->second.line;
    }

    void finish() {
        for (const auto& [key, entry] : sec_.entries) {
            if (!entry.used) {
                fail(source_, entry.line,
                     "unknown key '" + key + "' in section [" + sec_.header + "]");
            }
        }
        sec_.used = true;
    }

  private:
    Section& sec_;
    const std::string& source_;
};

Section* find_section(std::vector<Section>& sections, const std::string& header) {
    for (auto& sec : sections) {
        if (sec.header == header) return &sec;
    }
    return nullptr;
}

// Parses headers of the form "word int..." into trailing integers.
bool split_header(const std::string& header, const std::string& word,
                  std::vector<int>& ids) {
    std::istringstream in(header);
    std::string first;
    if (!(in >> first) || first != word) return false;
    int id = 0;
    while (in >> id) ids.push_back(id);
    return in.eof();
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

Scenario parse_scenario(const std::string& text, const std::string& source_name) {
    std::vector<Section> sections = tokenize(text, source_name);
    Scenario s;

    Section* scen_sec = find_section(sections, "scenario");
    if (!scen_sec) fail(source_name, 0, "missing [scenario] section");
    {
        Reader r(*scen_sec, source_name);
        s.name = r.str("name");
        const std::string mode = r.str("mode");
        if (mode == "open_loop") {
            s.mode = RunMode::open_loop;
        } else if (mode == "closed_loop") {
            s.mode = RunMode::closed_loop;
        } else {
            fail(source_name, r.line_of("mode"),
                 "mode must be open_loop or closed_loop, got '" + mode + "'");
        }
        s.duration = r.num("duration_s");
        s.dt = r.num_or("dt_s", s.dt);
        s.control_on = r.num("control_on_s");
        s.seed = static_cast<std::uint64_t>(r.integer("seed"));
        s.noise_var = r.num("noise_var_m2");
        s.sat_mass = r.num("sat_mass_kg");
        s.damping = r.num_or("damping_Nspm", 0.0);
        s.graph.beta = r.num("beta");
        r.finish();
    }

    Section* coil_sec = find_section(sections, "coil");
    if (!coil_sec) fail(source_name, 0, "missing [coil] section");
    {
        Reader r(*coil_sec, source_name);
        s.coil.turns = static_cast<int>(r.integer("turns"));
        s.coil.area = r.num("area_m2");
        s.coil.max_current = r.num("max_current_A");
        r.finish();
    }

    Section* kalman_sec = find_section(sections, "kalman");
    if (!kalman_sec) fail(source_name, 0, "missing [kalman] section");
    {
        Reader r(*kalman_sec, source_name);
        s.kalman.period = r.num("period_s");
        s.kalman.meas_var = r.num("meas_var_m2");
        s.kalman.dist_var = r.num("dist_var_m2ps4");
        r.finish();
    }
    s.plan.period = s.kalman.period;

    if (Section* band_sec = find_section(sections, "deadband")) {
        Reader r(*band_sec, source_name);
        s.band.eps0 = r.num("eps0_m");
        s.band.eps1 = r.num("eps1_m");
        r.finish();
    }

    for (auto& sec : sections) {
        std::vector<int> ids;
        if (!split_header(sec.header, "satellite", ids)) continue;
        if (ids.size() != 1 || ids[0] < 1) {
            fail(source_name, sec.line, "satellite section needs one positive id");
        }
        const std::size_t idx = static_cast<std::size_t>(ids[0] - 1);
        if (s.sats.size() <= idx) s.sats.resize(idx + 1);
        Reader r(sec, source_name);
        s.sats[idx].position = r.num("position_m");
        s.sats[idx].velocity = r.num_or("velocity_mps", 0.0);
        r.finish();
    }
    if (s.sats.size() < 2) fail(source_name, 0, "need at least 2 [satellite k] sections");
    s.graph.n = static_cast<int>(s.sats.size());

    bool any_pair = false;
    for (auto& sec : sections) {
        std::vector<int> ids;
        if (!split_header(sec.header, "pair", ids)) continue;
        if (ids.size() != 2 || ids[0] < 1 || ids[1] <= ids[0]) {
            fail(source_name, sec.line, "pair section header must be [pair i j] with i < j");
        }
        any_pair = true;
        const int i = ids[0];
        const int j = ids[1];
        const PairKey key{i, j};
        s.graph.edges.insert(key);
        Reader r(sec, source_name);
        s.plan.pair_omega[key] = r.num("omega_radps");
        s.graph.alpha[key] = r.num("alpha");
        const double rho = r.num_or("rho", 0.0);
        if (rho != 0.0) s.graph.rho[key] = rho;
        const double gamma_fwd = r.num_or("gamma_fwd", 1.0);
        const double gamma_rev = r.num_or("gamma_rev", 1.0 / gamma_fwd);
        s.graph.gamma[{i, j}] = gamma_fwd;
        s.graph.gamma[{j, i}] = gamma_rev;
        s.graph.desired[key] = Vec3{r.num("d_m"), 0.0, 0.0};
        if (r.has("open_current_fwd_A")) {
            s.open_loop_currents[{i, j}] = r.num("open_current_fwd_A");
        }
        if (r.has("open_current_rev_A")) {
            s.open_loop_currents[{j, i}] = r.num("open_current_rev_A");
        }
        r.finish();
    }
    if (!any_pair) fail(source_name, 0, "need at least one [pair i j] section");

    if (Section* sw_sec = find_section(sections, "setpoint_switch")) {
        Reader r(*sw_sec, source_name);
        SetpointSwitch sw;
        sw.time = r.num("time_s");
        for (const auto& [key, entry] : sw_sec->entries) {
            (void)entry;
            std::vector<int> ids;
            std::string rest = key;
            if (key.size() > 4 && key.rfind("d_", 0) == 0 &&
                key.compare(key.size() - 2, 2, "_m") == 0) {
                rest = key.substr(2, key.size() - 4);
                for (char& c : rest) {
                    if (c == '_') c = ' ';
                }
                std::istringstream in(rest);
                int a = 0, b = 0;
                if (in >> a >> b && in.eof()) {
                    sw.desired[{a, b}] = r.num(key);
                    continue;
                }
            }
            if (key != "time_s") {
                fail(source_name, r.line_of(key),
                     "unknown key '" + key + "' in section [setpoint_switch]");
            }
        }
        s.setpoint_switch = sw;
        r.finish();
    }

    for (const auto& sec : sections) {
        if (!sec.used) {
            fail(source_name, sec.line, "unknown section [" + sec.header + "]");
        }
    }

    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        fail(source_name, 0, e.what());
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

std::string dump_scenario(const Scenario& s) {
    std::ostringstream out;
    out << "[scenario]\n";
    out << "name = " << s.name << "\n";
    out << "mode = " << (s.mode == RunMode::open_loop ? "open_loop" : "closed_loop")
        << "\n";
    out << "duration_s = " << fmt(s.duration) << "\n";
    out << "dt_s = " << fmt(s.dt) << "\n";
    out << "control_on_s = " << fmt(s.control_on) << "\n";
    out << "seed = " << s.seed << "\n";
    out << "noise_var_m2 = " << fmt(s.noise_var) << "\n";
    out << "sat_mass_kg = " << fmt(s.sat_mass) << "\n";
    out << "damping_Nspm = " << fmt(s.damping) << "\n";
    out << "beta = " << fmt(s.graph.beta) << "\n";
    out << "\n[coil]\n";
    out << "turns = " << s.coil.turns << "\n";
    out << "area_m2 = " << fmt(s.coil.area) << "\n";
    out << "max_current_A = " << fmt(s.coil.max_current) << "\n";
    out << "\n[kalman]\n";
    out << "period_s = " << fmt(s.kalman.period) << "\n";
    out << "meas_var_m2 = " << fmt(s.kalman.meas_var) << "\n";
    out << "dist_var_m2ps4 = " << fmt(s.kalman.dist_var) << "\n";
    out << "\n[deadband]\n";
    out << "eps0_m = " << fmt(s.band.eps0) << "\n";
    out << "eps1_m = " << fmt(s.band.eps1) << "\n";
    for (std::size_t k = 0; k < s.sats.size(); ++k) {
        out << "\n[satellite " << (k + 1) << "]\n";
        out << "position_m = " << fmt(s.sats[k].position) << "\n";
        out << "velocity_mps = " << fmt(s.sats[k].velocity) << "\n";
    }
    for (const auto& edge : s.graph.edges) {
        const int i = edge.first;
        const int j = edge.second;
        out << "\n[pair " << i << " " << j << "]\n";
        out << "omega_radps = " << fmt(s.plan.omega(i, j)) << "\n";
        out << "alpha = " << fmt(s.graph.alpha_of(i, j)) << "\n";
        out << "rho = " << fmt(s.graph.rho_of(i, j)) << "\n";
        out << "gamma_fwd = " << fmt(s.graph.gamma_of(i, j)) << "\n";
        out << "gamma_rev = " << fmt(s.graph.gamma_of(j, i)) << "\n";
        out << "d_m = " << fmt(s.graph.desired_of(i, j).x) << "\n";
        auto fwd = s.open_loop_currents.find({i, j});
        if (fwd != s.open_loop_currents.end()) {
            out << "open_current_fwd_A = " << fmt(fwd->second) << "\n";
        }
        auto rev = s.open_loop_currents.find({j, i});
        if (rev != s.open_loop_currents.end()) {
            out << "open_current_rev_A = " << fmt(rev->second) << "\n";
        }
    }
    if (s.setpoint_switch) {
        out << "\n[setpoint_switch]\n";
        out << "time_s = " << fmt(s.setpoint_switch->time) << "\n";
        for (const auto& [pair, d] : s.setpoint_switch->desired) {
            out << "d_" << pair.first << "_" << pair.second << "_m = " << fmt(d) << "\n";
        }
    }
    return out.str();
}

} // namespace emff
