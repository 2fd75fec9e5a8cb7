#include "parapde/harness.hpp"
#include "parapde/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#ifndef PARAPDE_BUILD_ID
#define PARAPDE_BUILD_ID "unknown"
#endif

namespace parapde {
namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& what) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ConfigurationError("not a number for " + what + ": '" + s + "'");
    return v;
}

}  // namespace

Config Config::parse(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigurationError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigurationError("config line " + std::to_string(lineno) + ": empty key");
        c.values_[key] = trim(line.substr(eq + 1));
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigurationError("cannot read config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

void Config::set(const std::string& key, double value) { values_[key] = fmt(value); }

const std::string& Config::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigurationError("missing config key '" + key + "'");
    return it->second;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    return has(key) ? get(key) : fallback;
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? parse_double(get(key), key) : fallback;
}

long Config::get_int(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const double v = parse_double(get(key), key);
    if (v != std::floor(v)) throw ConfigurationError("integer expected for " + key);
    return static_cast<long>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& v = get(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigurationError("boolean expected for " + key);
}

std::vector<double> Config::get_list(const std::string& key, const std::vector<double>& fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> out;
    std::istringstream in(get(key));
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(item, key));
    }
    return out;
}

void Config::merge(const Config& other) {
    for (const auto& [k, v] : other.values_) values_[k] = v;
}

std::string Config::dump() const {
    std::string s;
    for (const auto& [k, v] : values_) s += k + " = " + v + "\n";
    return s;
}

ExperimentConfig make_experiment_config(const Config& c) {
    ExperimentConfig e;
    e.experiment = c.get("experiment");
    if (c.has("schema") && c.get("schema") != kConfigSchema)
        throw ConfigurationError("unsupported config schema '" + c.get("schema") + "', expected " + kConfigSchema);
    if (c.has("seed")) {
        const auto& s = c.get("seed");
        const auto res = std::from_chars(s.data(), s.data() + s.size(), e.seed);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw ConfigurationError("seed must be a non-negative integer, got '" + s + "'");
    }
    e.replicas = c.get_int("replicas", 1);
    if (e.replicas < 1) throw ConfigurationError("replicas must be at least 1");
    e.threads = static_cast<int>(c.get_int("threads", 1));
    if (e.threads < 1) throw ConfigurationError("threads must be at least 1");
    e.out = c.get("out", "");
    e.format = c.get("format", "csv");
    if (e.format != "csv" && e.format != "json") throw ConfigurationError("format must be csv or json");
    e.params = c;
    return e;
}

Gate gate_near(std::string name, double value, double target, double tol, double se) {
    Gate g{std::move(name), Gate::Kind::Near, value, target, tol, se};
    g.pass = std::abs(value - target) <= std::max(tol, g.z * se);
    return g;
}

Gate gate_at_most(std::string name, double value, double bound) {
    Gate g{std::move(name), Gate::Kind::AtMost, value, bound};
    g.pass = value <= bound;
    return g;
}

Gate gate_at_least(std::string name, double value, double bound) {
    Gate g{std::move(name), Gate::Kind::AtLeast, value, bound};
    g.pass = value >= bound;
    return g;
}

Gate gate_true(std::string name, bool ok) { return gate_at_least(std::move(name), ok ? 1.0 : 0.0, 1.0); }

bool ExperimentReport::passed() const {
    return std::all_of(gates.begin(), gates.end(), [](const Gate& g) { return g.pass; });
}

void ExperimentReport::add(std::string params, std::string statistic, double value, double se, long n) {
    rows.push_back({experiment, std::move(params), std::move(statistic), value, se, n});
}

void ExperimentReport::canonicalize() {
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        return std::tie(a.experiment, a.params, a.statistic) < std::tie(b.experiment, b.params, b.statistic);
    });
}

std::string param_string(const std::vector<std::pair<std::string, double>>& kv) {
    std::string s;
    for (const auto& [k, v] : kv) {
        if (!s.empty()) s += ';';
        s += k + "=" + fmt(v);
    }
    return s;
}

std::string emit_csv(const ExperimentReport& r) {
    std::string s = "experiment,params,statistic,value,stderr,n\n";
    for (const auto& row : r.rows)
        s += row.experiment + "," + row.params + "," + row.statistic + "," + fmt(row.value) + "," + fmt(row.stderr_) +
             "," + std::to_string(row.n) + "\n";
    return s;
}

namespace {

const char* kind_name(Gate::Kind k) {
    switch (k) {
        case Gate::Kind::Near: return "near";
        case Gate::Kind::AtMost: return "at_most";
        case Gate::Kind::AtLeast: return "at_least";
    }
    return "near";
}

// JSON has no infinities; non-finite values travel as strings.
nlohmann::json jnum(double x) {
    if (std::isfinite(x)) return x;
    return fmt(x);
}

double from_jnum(const nlohmann::json& j) {
    return j.is_string() ? parse_double(j.get<std::string>(), "json value") : j.get<double>();
}

}  // namespace

std::string emit_json(const ExperimentReport& r) {
    nlohmann::ordered_json j;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json o;
        o["experiment"] = row.experiment;
        o["params"] = row.params;
        o["statistic"] = row.statistic;
        o["value"] = jnum(row.value);
        o["stderr"] = jnum(row.stderr_);
        o["n"] = row.n;
        rows.push_back(o);
    }
    auto gates = nlohmann::ordered_json::array();
    for (const auto& g : r.gates) {
        nlohmann::ordered_json o;
        o["name"] = g.name;
        o["kind"] = kind_name(g.kind);
        o["value"] = jnum(g.value);
        o["target"] = jnum(g.target);
        o["tol"] = jnum(g.tol);
        o["stderr"] = jnum(g.se);
        o["pass"] = g.pass;
        gates.push_back(o);
    }
    nlohmann::ordered_json meta(nlohmann::ordered_json::value_t::object);
    for (const auto& [k, v] : r.metadata) meta[k] = v;
    j["rows"] = rows;
    j["gates"] = gates;
    j["metadata"] = meta;
    return j.dump(1) + "\n";
}

std::string emit_report(const ExperimentReport& r, const std::string& format) {
    if (format == "csv") return emit_csv(r);
    if (format == "json") return emit_json(r);
    throw ConfigurationError("unknown report format '" + format + "'");
}

std::vector<ReportRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "experiment,params,statistic,value,stderr,n")
        throw ConfigurationError("report csv: bad header");
    std::vector<ReportRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string item;
        while (std::getline(ls, item, ',')) f.push_back(item);
        if (f.size() != 6) throw ConfigurationError("report csv: expected 6 fields in '" + line + "'");
        rows.push_back({f[0], f[1], f[2], parse_double(f[3], "value"), parse_double(f[4], "stderr"),
                        static_cast<long>(parse_double(f[5], "n"))});
    }
    return rows;
}

ExperimentReport parse_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ExperimentReport r;
    for (const auto& o : j.at("rows"))
        r.rows.push_back({o.at("experiment").get<std::string>(), o.at("params").get<std::string>(),
                          o.at("statistic").get<std::string>(), from_jnum(o.at("value")), from_jnum(o.at("stderr")),
                          o.at("n").get<long>()});
    for (const auto& o : j.at("gates")) {
        Gate g;
        g.name = o.at("name").get<std::string>();
        const auto k = o.at("kind").get<std::string>();
        g.kind = k == "at_most" ? Gate::Kind::AtMost : k == "at_least" ? Gate::Kind::AtLeast : Gate::Kind::Near;
        g.value = from_jnum(o.at("value"));
        g.target = from_jnum(o.at("target"));
        g.tol = from_jnum(o.at("tol"));
        g.se = from_jnum(o.at("stderr"));
        g.pass = o.at("pass").get<bool>();
        r.gates.push_back(g);
    }
    for (const auto& [k, v] : j.at("metadata").items()) r.metadata[k] = v.get<std::string>();
    if (!r.rows.empty()) r.experiment = r.rows.front().experiment;
    return r;
}

std::string gate_table(const ExperimentReport& r) {
    std::ostringstream s;
    for (const auto& g : r.gates) {
        s << (g.pass ? "PASS " : "FAIL ") << g.name << "  value=" << fmt(g.value);
        switch (g.kind) {
            case Gate::Kind::Near:
                s << " target=" << fmt(g.target) << " |diff|=" << fmt(std::abs(g.value - g.target))
                  << " allowed=" << fmt(std::max(g.tol, g.z * g.se));
                break;
            case Gate::Kind::AtMost: s << " bound<=" << fmt(g.target); break;
            case Gate::Kind::AtLeast: s << " bound>=" << fmt(g.target); break;
        }
        s << "\n";
    }
    return s.str();
}

double pairwise_sum(const std::vector<double>& x) {
    std::function<double(std::size_t, std::size_t)> rec = [&](std::size_t a, std::size_t b) -> double {
        if (b - a <= 8) {
            double s = 0.0;
            for (std::size_t i = a; i < b; ++i) s += x[i];
            return s;
        }
        const std::size_t m = a + (b - a) / 2;
        return rec(a, m) + rec(m, b);
    };
    return rec(0, x.size());
}

Summary summarize(const std::vector<double>& x) {
    Summary s;
    s.n = static_cast<long>(x.size());
    if (x.empty()) return s;
    s.mean = pairwise_sum(x) / s.n;
    if (s.n > 1) {
        std::vector<double> d(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) d[i] = (x[i] - s.mean) * (x[i] - s.mean);
        s.se = std::sqrt(pairwise_sum(d) / (s.n - 1) / s.n);
    }
    return s;
}

std::vector<std::vector<double>> run_replicas(long replicas, int threads,
                                              const std::function<std::vector<double>(long)>& fn) {
    if (replicas < 1) throw ArgumentError("run_replicas: replicas must be at least 1");
    std::vector<std::vector<double>> out(static_cast<std::size_t>(replicas));
    const int T = std::max(1, std::min<int>(threads, static_cast<int>(replicas)));
    if (T == 1) {
        for (long r = 0; r < replicas; ++r) out[r] = fn(r);
        return out;
    }
    std::vector<std::exception_ptr> errors(T);
    std::vector<std::thread> pool;
    for (int t = 0; t < T; ++t)
        pool.emplace_back([&, t] {
            try {
                for (long r = t; r < replicas; r += T) out[r] = fn(r);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t c) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.at(c));
    return out;
}

std::string build_id() { return PARAPDE_BUILD_ID; }

}  // namespace parapde
