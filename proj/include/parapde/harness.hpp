#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace parapde {

inline constexpr const char* kConfigSchema = "parapde-config/1";

// Flat key = value configuration; '#' starts a comment, blank lines are ignored.
class Config {
public:
    Config() = default;
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    void set(const std::string& key, double value);
    const std::string& get(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;
    // Later values win.
    void merge(const Config& other);
    const std::map<std::string, std::string>& values() const { return values_; }
    std::string dump() const;

private:
    std::map<std::string, std::string> values_;
};

struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 1;
    long replicas = 1;
    int threads = 1;
    std::string out;  // empty: stdout
    std::string format = "csv";
    Config params;
};

// Validates required keys, replicas ≥ 1 and the schema string when present.
ExperimentConfig make_experiment_config(const Config& c);

struct ReportRow {
    std::string experiment, params, statistic;
    double value = 0.0;
    double stderr_ = 0.0;
    long n = 1;
    bool operator==(const ReportRow&) const = default;
};

// Acceptance gate. Near: |value − target| ≤ max(tol, z·se). AtMost: value ≤ target. AtLeast: value ≥ target.
struct Gate {
    enum class Kind { Near, AtMost, AtLeast };
    std::string name;
    Kind kind = Kind::Near;
    double value = 0.0, target = 0.0, tol = 0.0, se = 0.0, z = 3.0;
    bool pass = false;
};
Gate gate_near(std::string name, double value, double target, double tol, double se = 0.0);
Gate gate_at_most(std::string name, double value, double bound);
Gate gate_at_least(std::string name, double value, double bound);
Gate gate_true(std::string name, bool ok);

struct ExperimentReport {
    std::vector<ReportRow> rows;
    std::vector<Gate> gates;
    std::map<std::string, std::string> metadata;
    bool passed() const;
    void add(std::string params, std::string statistic, double value, double se = 0.0, long n = 1);
    std::string experiment;
    // Sorts rows by (experiment, params, statistic); stable for equal keys.
    void canonicalize();
};

// "k=1;t=0.5" from ordered pairs.
std::string param_string(const std::vector<std::pair<std::string, double>>& kv);

std::string emit_csv(const ExperimentReport& r);
std::string emit_json(const ExperimentReport& r);
std::string emit_report(const ExperimentReport& r, const std::string& format);
std::vector<ReportRow> parse_csv(const std::string& text);
ExperimentReport parse_json(const std::string& text);
std::string gate_table(const ExperimentReport& r);

// Mean and standard error with pairwise summation in replica order.
struct Summary {
    double mean = 0.0, se = 0.0;
    long n = 0;
};
double pairwise_sum(const std::vector<double>& x);
Summary summarize(const std::vector<double>& x);

// Runs fn(r) for r = 0..R−1 on `threads` workers; results are returned in replica order.
std::vector<std::vector<double>> run_replicas(long replicas, int threads,
                                              const std::function<std::vector<double>(long)>& fn);
// Column c of per-replica results.
std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t c);

std::string build_id();

}  // namespace parapde
