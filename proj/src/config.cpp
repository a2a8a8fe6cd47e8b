#include "boundform/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "boundform/errors.hpp"

namespace boundform {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"well", {"V0", "a", "L", "mass", "n_basis", "grid_points"}},
        {"schedule",
         {"type", "V", "x0", "sigma_x", "sigma_t", "centers", "sigma_V", "delta_t", "hold_factor", "n_pulses",
          "seed"}},
        {"run",
         {"initial_index", "t_end", "dt", "sample_every", "norm_tolerance", "settle_margin", "include_initial"}},
        {"ensemble", {"n_realizations", "threads"}},
        {"scan", {"V", "sigma_t", "sigma_x", "min_center"}},
        {"output", {"directory", "prefix", "write_psi", "write_coupling", "write_amplitudes"}},
    };
    return keys;
}

std::string trimmed(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& where, const std::string& raw)
{
    const std::string s = trimmed(raw);
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError(fmt::format("{}: expected a number, got '{}'", where, raw));
    return value;
}

bool parse_bool(const std::string& where, const std::string& raw)
{
    const std::string s = trimmed(raw);
    if (s == "true" || s == "1" || s == "yes")
        return true;
    if (s == "false" || s == "0" || s == "no")
        return false;
    throw ConfigError(fmt::format("{}: expected true or false, got '{}'", where, raw));
}

std::vector<double> parse_list(const std::string& where, const std::string& raw)
{
    std::string s = raw;
    for (char& ch : s)
        if (ch == ',')
            ch = ' ';
    std::istringstream in(s);
    std::vector<double> out;
    for (std::string token; in >> token;)
        out.push_back(parse_number<double>(where, token));
    if (out.empty())
        throw ConfigError(fmt::format("{}: empty list", where));
    return out;
}

// Reads section.key into `target` when present.
class Section {
public:
    Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

    [[nodiscard]] bool present() const { return tree_ != nullptr; }

    [[nodiscard]] const std::string* raw(const std::string& key) const
    {
        if (!tree_)
            return nullptr;
        const auto it = tree_->find(key);
        return it == tree_->not_found() ? nullptr : &it->second.data();
    }

    [[nodiscard]] std::string where(const std::string& key) const { return name_ + "." + key; }

    template <class T>
    void number(const std::string& key, T& target) const
    {
        if (const auto* r = raw(key))
            target = parse_number<T>(where(key), *r);
    }

    void flag(const std::string& key, bool& target) const
    {
        if (const auto* r = raw(key))
            target = parse_bool(where(key), *r);
    }

    void list(const std::string& key, std::vector<double>& target) const
    {
        if (const auto* r = raw(key))
            target = parse_list(where(key), *r);
    }

    void text(const std::string& key, std::string& target) const
    {
        if (const auto* r = raw(key))
            target = trimmed(*r);
    }

private:
    std::string name_;
    const pt::ptree* tree_;
};

// Section headers as written; the ini reader silently drops empty ones.
std::set<std::string> section_headers(std::string_view text)
{
    std::set<std::string> out;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        const std::string t = trimmed(line);
        if (t.size() >= 2 && t.front() == '[' && t.back() == ']')
            out.insert(trimmed(t.substr(1, t.size() - 2)));
    }
    return out;
}

void check_positive_list(const std::string& where, const std::vector<double>& v)
{
    for (const double x : v)
        if (!(x > 0.0))
            throw ConfigError(fmt::format("{}: every entry must be > 0 (got {})", where, x));
}

} // namespace

std::uint64_t fnv1a64(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

PulseSchedule RunConfig::schedule() const
{
    if (schedule_type == ScheduleType::gaussian)
        return gaussian;
    return realize(stochastic);
}

EvolveOptions RunConfig::evolve_options() const
{
    return {run.dt, run.sample_every, run.norm_tolerance};
}

void RunConfig::validate() const
{
    well.validate();
    if (grid_points < kMinGridPoints)
        throw ConfigError(fmt::format("well.grid_points must be >= {} (got {})", kMinGridPoints, grid_points));
    if (schedule_type == ScheduleType::gaussian)
        gaussian.validate();
    else
        stochastic.validate();
    if (run.initial_index < 0 || run.initial_index >= well.n_basis)
        throw ConfigError(fmt::format("run.initial_index must lie in [0, {}) (got {})", well.n_basis,
                                      run.initial_index));
    if (!(run.dt > 0.0))
        throw ConfigError(fmt::format("run.dt must be > 0 (got {})", run.dt));
    if (!(run.t_end > 0.0))
        throw ConfigError(fmt::format("run.t_end must be > 0 (got {})", run.t_end));
    if (run.sample_every < 1)
        throw ConfigError(fmt::format("run.sample_every must be >= 1 (got {})", run.sample_every));
    if (!(run.norm_tolerance > 0.0))
        throw ConfigError(fmt::format("run.norm_tolerance must be > 0 (got {})", run.norm_tolerance));
    if (!(run.settle_margin >= 0.0))
        throw ConfigError(fmt::format("run.settle_margin must be >= 0 (got {})", run.settle_margin));
    (void)step_count(schedule_type == ScheduleType::gaussian ? PulseSchedule{gaussian}
                                                             : PulseSchedule{RealizedStochasticTrain{stochastic, {}}},
                     run.t_end, run.dt);
    ensemble.validate();
    if (threads < 1)
        throw ConfigError(fmt::format("ensemble.threads must be >= 1 (got {})", threads));
    if (scan.V.empty() || scan.sigma_t.empty() || scan.sigma_x.empty())
        throw ConfigError("scan: V, sigma_t and sigma_x lists must be non-empty");
    check_positive_list("scan.V", scan.V);
    check_positive_list("scan.sigma_t", scan.sigma_t);
    check_positive_list("scan.sigma_x", scan.sigma_x);
    if (!(scan.min_center >= 0.0))
        throw ConfigError(fmt::format("scan.min_center must be >= 0 (got {})", scan.min_center));
    if (output.prefix.empty())
        throw ConfigError("output.prefix must not be empty");
    if (output.directory.empty())
        throw ConfigError("output.directory must not be empty");
}

RunConfig parse_config(std::string_view text)
{
    pt::ptree tree;
    {
        std::istringstream in{std::string(text)};
        try {
            pt::ini_parser::read_ini(in, tree);
        } catch (const pt::ini_parser_error& e) {
            throw ConfigError(fmt::format("config syntax error at line {}: {}", e.line(), e.message()));
        }
    }

    const auto& keys = known_keys();
    const auto headers = section_headers(text);
    for (const auto& name : headers)
        if (!keys.contains(name))
            throw ConfigError(fmt::format("config: unknown section [{}]", name));
    for (const auto& [name, node] : tree) {
        const auto it = keys.find(name);
        if (it == keys.end()) {
            if (node.empty() && !node.data().empty())
                throw ConfigError(fmt::format("config: key '{}' outside any section", name));
            throw ConfigError(fmt::format("config: unknown section [{}]", name));
        }
        for (const auto& [key, value] : node) {
            if (!it->second.contains(key))
                throw ConfigError(fmt::format("config: unknown key '{}' in [{}]", key, name));
        }
    }

    static const pt::ptree empty_section;
    auto section = [&](const std::string& name) {
        const auto it = tree.find(name);
        if (it != tree.not_found())
            return Section(name, &it->second);
        return Section(name, headers.contains(name) ? &empty_section : nullptr);
    };

    RunConfig cfg;
    cfg.source = std::string(text);

    const Section well = section("well");
    well.number("V0", cfg.well.V0);
    well.number("a", cfg.well.a);
    well.number("L", cfg.well.L);
    well.number("mass", cfg.well.mass);
    well.number("n_basis", cfg.well.n_basis);
    well.number("grid_points", cfg.grid_points);

    const Section sched = section("schedule");
    if (sched.present()) {
        const auto* type = sched.raw("type");
        if (!type)
            throw ConfigError("schedule: missing required key 'type' (gaussian needs V, sigma_x, sigma_t, "
                              "centers; stochastic needs sigma_V, sigma_x, delta_t, hold_factor, n_pulses, seed)");
        const std::string t = trimmed(*type);
        if (t == "gaussian") {
            cfg.schedule_type = ScheduleType::gaussian;
            for (const char* key : {"sigma_V", "delta_t", "hold_factor", "n_pulses", "seed"})
                if (sched.raw(key))
                    throw ConfigError(fmt::format("schedule.{} does not apply to a gaussian schedule", key));
            sched.number("V", cfg.gaussian.profile.V);
            sched.number("x0", cfg.gaussian.profile.x0);
            sched.number("sigma_x", cfg.gaussian.profile.sigma_x);
            sched.number("sigma_t", cfg.gaussian.sigma_t);
            sched.list("centers", cfg.gaussian.centers);
        } else if (t == "stochastic") {
            cfg.schedule_type = ScheduleType::stochastic;
            for (const char* key : {"V", "sigma_t", "centers"})
                if (sched.raw(key))
                    throw ConfigError(fmt::format("schedule.{} does not apply to a stochastic schedule", key));
            sched.number("x0", cfg.stochastic.profile.x0);
            sched.number("sigma_x", cfg.stochastic.profile.sigma_x);
            sched.number("sigma_V", cfg.stochastic.sigma_V);
            sched.number("delta_t", cfg.stochastic.delta_t);
            sched.number("hold_factor", cfg.stochastic.hold_factor);
            sched.number("n_pulses", cfg.stochastic.n_pulses);
            sched.number("seed", cfg.stochastic.seed);
        } else {
            throw ConfigError(fmt::format("schedule.type must be 'gaussian' or 'stochastic' (got '{}')", t));
        }
    }
    cfg.ensemble.base = cfg.stochastic;

    const Section run = section("run");
    run.number("initial_index", cfg.run.initial_index);
    run.number("t_end", cfg.run.t_end);
    run.number("dt", cfg.run.dt);
    run.number("sample_every", cfg.run.sample_every);
    run.number("norm_tolerance", cfg.run.norm_tolerance);
    run.number("settle_margin", cfg.run.settle_margin);
    run.flag("include_initial", cfg.run.include_initial);

    const Section ens = section("ensemble");
    ens.number("n_realizations", cfg.ensemble.n_realizations);
    ens.number("threads", cfg.threads);

    const Section scan = section("scan");
    scan.list("V", cfg.scan.V);
    scan.list("sigma_t", cfg.scan.sigma_t);
    scan.list("sigma_x", cfg.scan.sigma_x);
    scan.number("min_center", cfg.scan.min_center);
    cfg.scan.initial_index = cfg.run.initial_index;
    cfg.scan.x0 = cfg.schedule_type == ScheduleType::gaussian ? cfg.gaussian.profile.x0 : cfg.stochastic.profile.x0;

    const Section out = section("output");
    out.text("directory", cfg.output.directory);
    out.text("prefix", cfg.output.prefix);
    out.flag("write_psi", cfg.output.write_psi);
    out.flag("write_coupling", cfg.output.write_coupling);
    out.flag("write_amplitudes", cfg.output.write_amplitudes);

    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(fmt::format("cannot open config file '{}'", path));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace boundform
