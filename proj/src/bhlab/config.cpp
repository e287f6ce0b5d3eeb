#include "bhlab/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bhlab/field_io.hpp"

namespace bhlab::io {

namespace {

using Section = std::map<std::string, std::string>;

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::map<std::string, Section> parse_sections(const std::string& text) {
    static const std::set<std::string> known = {
        "grid", "equation", "time", "initial", "diagnostics", "stop", "output"};
    std::map<std::string, Section> sections;
    std::istringstream in(text);
    std::string line, current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("line " + std::to_string(lineno) +
                                   ": malformed section header");
            current = trim(line.substr(1, line.size() - 2));
            if (!known.count(current))
                throw config_error("unknown section [" + current + "]");
            sections[current];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos || current.empty())
            throw config_error("line " + std::to_string(lineno) +
                               ": expected key = value inside a section");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw config_error("line " + std::to_string(lineno) +
                               ": empty key or value");
        if (!sections[current].emplace(key, value).second)
            throw config_error("duplicate key '" + key + "' in [" + current + "]");
    }
    return sections;
}

class SectionReader {
public:
    SectionReader(std::map<std::string, Section>& all, const std::string& name)
        : name_(name) {
        auto it = all.find(name);
        if (it == all.end())
            throw config_error("missing required section [" + name + "]");
        section_ = &it->second;
    }

    std::string require(const std::string& key) {
        auto it = section_->find(key);
        if (it == section_->end())
            throw config_error("missing required key '" + key + "' in [" + name_ + "]");
        used_.insert(key);
        return it->second;
    }

    std::optional<std::string> optional(const std::string& key) {
        auto it = section_->find(key);
        if (it == section_->end()) return std::nullopt;
        used_.insert(key);
        return it->second;
    }

    bool has(const std::string& key) const { return section_->count(key) > 0; }

    void reject_unknown() const {
        for (const auto& [key, value] : *section_)
            if (!used_.count(key))
                throw config_error("unknown key '" + key + "' in [" + name_ + "]");
    }

private:
    std::string name_;
    Section* section_;
    std::set<std::string> used_;
};

int parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("cannot parse integer for " + what + ": '" + s + "'");
    }
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    auto sections = parse_sections(text);
    RunConfig cfg;

    SectionReader grid(sections, "grid");
    cfg.sim.grid.n_points = parse_int(grid.require("n"), "grid.n");
    cfg.sim.grid.length = parse_double(grid.require("L"));
    grid.reject_unknown();

    SectionReader equation(sections, "equation");
    cfg.sim.alpha = parse_double(equation.require("alpha"));
    equation.reject_unknown();

    SectionReader time(sections, "time");
    cfg.sim.t_max = parse_double(time.require("t_max"));
    bool has_dt = time.has("dt"), has_sigma = time.has("cfl_sigma");
    if (has_dt == has_sigma)
        throw config_error("[time] requires exactly one of dt / cfl_sigma");
    if (has_dt)
        cfg.sim.dt_policy = solver::DtPolicy::fixed_dt(parse_double(*time.optional("dt")));
    else
        cfg.sim.dt_policy = solver::DtPolicy::cfl(parse_double(*time.optional("cfl_sigma")));
    time.reject_unknown();

    SectionReader initial(sections, "initial");
    std::string variant = initial.require("variant");
    if (variant == "rational") {
        RationalFamily r;
        r.a = parse_double(initial.require("a"));
        r.b = parse_double(initial.require("b"));
        cfg.sim.initial_data = r;
    } else if (variant == "single_mode") {
        SingleMode m;
        m.amplitude = parse_double(initial.require("amplitude"));
        m.wavenumber = parse_int(initial.require("wavenumber"), "initial.wavenumber");
        cfg.sim.initial_data = m;
    } else if (variant == "gaussian") {
        GaussianBump g;
        g.amplitude = parse_double(initial.require("amplitude"));
        g.width = parse_double(initial.require("width"));
        cfg.sim.initial_data = g;
    } else if (variant == "from_file") {
        cfg.sim.initial_data = FromFile{initial.require("path")};
    } else {
        throw config_error("unknown initial data variant '" + variant + "'");
    }
    initial.reject_unknown();

    SectionReader diagnostics(sections, "diagnostics");
    cfg.sim.diag_every = parse_int(diagnostics.require("cadence"), "cadence");
    if (auto b = diagnostics.optional("beta0"))
        cfg.sim.beta0 = parse_double(*b);
    bool has_p = diagnostics.has("weight_p"), has_q = diagnostics.has("weight_q");
    if (has_p != has_q)
        throw config_error("weight_p and weight_q must be given together");
    if (has_p) {
        quad::WeightParams wp;
        wp.p = parse_double(*diagnostics.optional("weight_p"));
        wp.q = parse_double(*diagnostics.optional("weight_q"));
        wp.alpha = cfg.sim.alpha;
        cfg.sim.weights = wp;
    }
    diagnostics.reject_unknown();

    SectionReader stop(sections, "stop");
    cfg.sim.stop.max_slope_factor = parse_double(stop.require("slope_factor"));
    cfg.sim.stop.spectral_tail_fraction = parse_double(stop.require("tail_fraction"));
    stop.reject_unknown();

    SectionReader output(sections, "output");
    cfg.output_directory = output.require("directory");
    if (auto plot = output.optional("plot")) {
        if (*plot == "on")
            cfg.plot = true;
        else if (*plot == "off")
            cfg.plot = false;
        else
            throw config_error("plot must be 'on' or 'off'");
    }
    output.reject_unknown();

    cfg.sim.validate();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace bhlab::io
