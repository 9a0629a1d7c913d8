#include "qarecall/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qarecall/errors.hpp"
#include "qarecall/format.hpp"

namespace qarecall {

SASchedule ExperimentConfig::sa_schedule() const {
    SASchedule s;
    s.t_initial = sa.t_initial;
    s.t_final = sa.t_final;
    s.sweeps = sa.sweeps;
    s.cooling = sa.cooling == "linear" ? Cooling::linear : Cooling::geometric;
    return s;
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& v) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty() || !std::isfinite(out))
        throw std::invalid_argument("expected a number, got '" + v + "'");
    return out;
}

std::uint64_t to_unsigned(const std::string& v) {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("expected a non-negative integer, got '" + v + "'");
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw std::invalid_argument("integer out of range: '" + v + "'");
    }
}

long to_long(const std::string& v) {
    std::size_t used = 0;
    long out = 0;
    try {
        out = std::stol(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty())
        throw std::invalid_argument("expected an integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "yes" || v == "1")
        return true;
    if (v == "false" || v == "no" || v == "0")
        return false;
    throw std::invalid_argument("expected true or false, got '" + v + "'");
}

std::vector<std::size_t> to_list(const std::string& v) {
    std::vector<std::size_t> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ','))
        out.push_back(to_unsigned(trim(item)));
    return out;
}

std::string from_list(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

struct Field {
    std::string section;
    std::string key;
    std::function<void(const std::string&)> set;
    std::function<std::string()> get;
};

template <class T>
Field unsigned_field(std::string section, std::string key, T& target) {
    return {std::move(section), std::move(key), [&target](const std::string& v) { target = static_cast<T>(to_unsigned(v)); },
            [&target] { return std::to_string(target); }};
}

Field double_field(std::string section, std::string key, double& target) {
    return {std::move(section), std::move(key), [&target](const std::string& v) { target = to_double(v); },
            [&target] { return fmt_double(target); }};
}

Field string_field(std::string section, std::string key, std::string& target) {
    return {std::move(section), std::move(key), [&target](const std::string& v) { target = v; },
            [&target] { return target; }};
}

Field bool_field(std::string section, std::string key, bool& target) {
    return {std::move(section), std::move(key), [&target](const std::string& v) { target = to_bool(v); },
            [&target] { return std::string(target ? "true" : "false"); }};
}

Field list_field(std::string section, std::string key, std::vector<std::size_t>& target) {
    return {std::move(section), std::move(key), [&target](const std::string& v) { target = to_list(v); },
            [&target] { return from_list(target); }};
}

// Serialisation order is the order listed here.
std::vector<Field> fields(ExperimentConfig& c) {
    return {
        string_field("memories", "path", c.memories.path),
        string_field("probe", "pattern", c.probe.pattern),
        list_field("probe", "mask", c.probe.mask),
        double_field("probe", "h", c.probe.h),
        string_field("engine", "name", c.engine),
        double_field("sweep", "start", c.sweep.start),
        double_field("sweep", "stop", c.sweep.stop),
        double_field("sweep", "step", c.sweep.step),
        double_field("qa", "t_anneal", c.qa.t_anneal),
        unsigned_field("qa", "steps", c.qa.steps),
        string_field("qa", "schedule_a", c.qa.schedule_a),
        string_field("qa", "schedule_b", c.qa.schedule_b),
        unsigned_field("qa", "gap_grid", c.qa.gap_grid),
        double_field("sa", "t_initial", c.sa.t_initial),
        double_field("sa", "t_final", c.sa.t_final),
        unsigned_field("sa", "sweeps", c.sa.sweeps),
        string_field("sa", "cooling", c.sa.cooling),
        unsigned_field("sa", "restarts", c.sa.restarts),
        unsigned_field("run", "seed", c.run.seed),
        unsigned_field("run", "shots", c.run.shots),
        bool_field("run", "majority", c.run.majority),
        {"basin", "max_d", [&c](const std::string& v) { c.basin.max_d = to_long(v); },
         [&c] { return std::to_string(c.basin.max_d); }},
        double_field("basin", "h", c.basin.h),
        unsigned_field("capacity", "n_max", c.capacity.n_max),
        double_field("capacity", "f_step", c.capacity.f_step),
        unsigned_field("capacity", "n", c.capacity.n),
        list_field("capacity", "p", c.capacity.p),
        double_field("capacity", "t_frac", c.capacity.t_frac),
        double_field("capacity", "c2", c.capacity.c2),
        unsigned_field("capacity", "trials", c.capacity.trials),
        string_field("capacity", "engine", c.capacity.engine),
        unsigned_field("embed", "m", c.embed.m),
        unsigned_field("embed", "defects", c.embed.defects),
        string_field("embed", "graph", c.embed.graph),
        double_field("embed", "chain_strength", c.embed.chain_strength),
        bool_field("embed", "solve", c.embed.solve),
        string_field("output", "dir", c.output.dir),
    };
}

Field* find_field(std::vector<Field>& all, const std::string& section, const std::string& key) {
    for (auto& f : all)
        if (f.section == section && f.key == key)
            return &f;
    return nullptr;
}

bool known_section(std::vector<Field>& all, const std::string& section) {
    for (auto& f : all)
        if (f.section == section)
            return true;
    return false;
}

// `where(dotted key)` returns a location prefix for messages.
void check(const ExperimentConfig& c, const std::function<std::string(const std::string&)>& where) {
    auto fail = [&](const std::string& key, const std::string& why) { throw ConfigError(where(key) + key + ": " + why); };
    if (c.engine != "oracle" && c.engine != "qa" && c.engine != "sa")
        fail("engine.name", "unknown engine '" + c.engine + "' (expected oracle, qa or sa)");
    if (!(c.sweep.step > 0.0))
        fail("sweep.step", "must be positive");
    if (c.sweep.stop < c.sweep.start)
        fail("sweep.stop", "must not be below sweep.start");
    if (!(c.qa.t_anneal > 0.0))
        fail("qa.t_anneal", "must be positive");
    if (c.qa.steps < 1)
        fail("qa.steps", "must be at least 1");
    if (c.qa.gap_grid < 2)
        fail("qa.gap_grid", "must be at least 2");
    if (c.qa.schedule_a.empty() != c.qa.schedule_b.empty())
        fail(c.qa.schedule_a.empty() ? "qa.schedule_a" : "qa.schedule_b", "schedule files come in pairs");
    if (c.sa.cooling != "geometric" && c.sa.cooling != "linear")
        fail("sa.cooling", "expected geometric or linear");
    try {
        c.sa_schedule().validate();
    } catch (const std::invalid_argument& e) {
        fail("sa.t_final", e.what());
    }
    if (c.sa.restarts < 1)
        fail("sa.restarts", "must be at least 1");
    if (c.run.shots < 1)
        fail("run.shots", "must be at least 1");
    if (c.capacity.n_max < 2 || c.capacity.n_max % 2)
        fail("capacity.n_max", "must be even and at least 2");
    if (!(c.capacity.f_step > 0.0))
        fail("capacity.f_step", "must be positive");
    if (!(c.capacity.t_frac >= 0.0 && c.capacity.t_frac < 0.5))
        fail("capacity.t_frac", "must lie in [0, 0.5)");
    if (c.capacity.p.empty())
        fail("capacity.p", "needs at least one value");
    if (c.capacity.engine != "oracle" && c.capacity.engine != "sa")
        fail("capacity.engine", "expected oracle or sa");
    if (c.embed.m < 1)
        fail("embed.m", "must be at least 1");
    if (c.embed.chain_strength < 0.0)
        fail("embed.chain_strength", "must not be negative");
    if (c.output.dir.empty())
        fail("output.dir", "must not be empty");
}

} // namespace

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
    ExperimentConfig c;
    auto all = fields(c);
    std::map<std::string, std::size_t> lines;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::string section;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) {
        throw ConfigError(source + ":" + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto hash = line.find_first_of("#;"); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail("unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!known_section(all, section))
                fail("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail("expected 'key = value'");
        if (section.empty())
            fail("key outside a section");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        Field* f = find_field(all, section, key);
        if (!f)
            fail("unknown key '" + key + "' in [" + section + "]");
        const std::string dotted = section + "." + key;
        if (lines.count(dotted))
            fail("duplicate key '" + key + "' in [" + section + "]");
        lines[dotted] = line_no;
        try {
            f->set(value);
        } catch (const std::invalid_argument& e) {
            fail(dotted + ": " + e.what());
        }
    }
    check(c, [&](const std::string& key) {
        auto it = lines.find(key);
        return it == lines.end() ? source + ": " : source + ":" + std::to_string(it->second) + ": ";
    });
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

std::string serialize_config(const ExperimentConfig& config) {
    ExperimentConfig copy = config;
    std::string out;
    std::string section;
    for (const auto& f : fields(copy)) {
        if (f.section != section) {
            out += (section.empty() ? "[" : "\n[") + f.section + "]\n";
            section = f.section;
        }
        out += f.key + " = " + f.get() + "\n";
    }
    return out;
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw ConfigError("override '" + assignment + "': expected section.key=value");
    const std::string section = trim(std::string_view(assignment).substr(0, dot));
    const std::string key = trim(std::string_view(assignment).substr(dot + 1, eq - dot - 1));
    auto all = fields(config);
    Field* f = find_field(all, section, key);
    if (!f)
        throw ConfigError("override '" + assignment + "': unknown key " + section + "." + key);
    try {
        f->set(trim(std::string_view(assignment).substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("override '" + assignment + "': " + e.what());
    }
}

void validate_config(const ExperimentConfig& config) {
    check(config, [](const std::string&) { return std::string(); });
}

} // namespace qarecall
