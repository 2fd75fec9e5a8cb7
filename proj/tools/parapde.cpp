#include "parapde/besov.hpp"
#include "parapde/errors.hpp"
#include "parapde/experiments.hpp"
#include "parapde/harness.hpp"
#include "parapde/spectral.hpp"
#include "parapde/wick.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace parapde;

namespace {

constexpr int kExitPass = 0, kExitUsage = 1, kExitGate = 2, kExitError = 3;

struct FixtureSpec {
    std::string file;
    std::string experiment;
};

const std::vector<FixtureSpec> kFixtures = {
    {"renorm-constants.json", "renorm-constants"},
};
constexpr const char* kTreeFixture = "trees.json";
constexpr int kTreeFixtureDegree = 4;

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigurationError("cannot open output file '" + path + "'");
    f << text;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigurationError("cannot read '" + path + "'");
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

ExperimentReport fixture_run(const std::string& experiment) {
    ExperimentConfig c;
    c.experiment = experiment;
    return run_experiment(c);
}

std::string tree_table() { return trees_to_json(enumerate_trees(kTreeFixtureDegree)) + "\n"; }

int oracle(const std::string& action, const std::string& dir) {
    if (action == "regen") {
        std::filesystem::create_directories(dir);
        for (const auto& f : kFixtures) {
            write_output(dir + "/" + f.file, fixture_json(fixture_run(f.experiment)));
            std::cerr << "wrote " << dir << "/" << f.file << "\n";
        }
        write_output(dir + "/" + kTreeFixture, tree_table());
        std::cerr << "wrote " << dir << "/" << kTreeFixture << "\n";
        return kExitPass;
    }
    bool ok = true;
    for (const auto& f : kFixtures) {
        const auto diff = fixture_diff(read_file(dir + "/" + f.file), fixture_run(f.experiment), 0.0);
        if (!diff.empty()) {
            std::cerr << f.file << " drifted:\n" << diff;
            ok = false;
        }
    }
    if (read_file(dir + "/" + kTreeFixture) != tree_table()) {
        std::cerr << kTreeFixture << " drifted\n";
        ok = false;
    }
    std::cerr << (ok ? "fixtures match\n" : "fixture check failed\n");
    return ok ? kExitPass : kExitGate;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parapde: paracontrolled SPDE toolkit and Monte Carlo harness"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out, format, experiment_flag;
    std::string seed;
    long replicas = -1;
    int threads = -1;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "flat key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "master seed");
    app.add_option("--replicas", replicas, "Monte Carlo replicas");
    app.add_option("--threads", threads, "worker threads");
    app.add_option("--out", out, "output file (default stdout)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--set", sets, "override a parameter, key=value")->allow_extra_args(false);
    app.add_option("--experiment", experiment_flag, "experiment name within the subcommand");
    app.add_flag_callback(
        "--list",
        [] {
            for (const auto& e : experiment_registry())
                std::cout << e.subcommand << "\t" << e.name << "\t" << e.summary << "\n";
            std::exit(kExitPass);
        },
        "list experiments and exit");

    // subcommand-specific flags become parameters
    Config flags;
    auto param = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
        return sub->add_option_function<std::string>(flag, [&flags, key](const std::string& v) { flags.set(key, v); },
                                                     help);
    };

    auto* partition = app.add_subcommand("partition-check", "Littlewood-Paley partition, paraproducts, norm battery");
    std::string export_partition;
    partition->add_option("--export", export_partition, "write the partition table 'd:M' as CSV and exit");

    auto* noise = app.add_subcommand("noise", "white noise and random potential samples, homogenization statistics");
    param(noise, "--dim", "d", "dimension");
    param(noise, "--grid-size", "M", "grid points per side");
    param(noise, "--field", "field", "white or potential")->check(CLI::IsMember({"white", "potential"}));

    auto* ou = app.add_subcommand("ou", "Ornstein-Uhlenbeck second moments");
    param(ou, "--n-modes", "N", "Galerkin cutoff");

    auto* burgers = app.add_subcommand("burgers", "Galerkin stochastic Burgers observables");
    std::string observable = "energy";
    param(burgers, "--n-modes", "N", "Galerkin cutoff");
    param(burgers, "--dt", "dt", "time step");
    param(burgers, "--t-final", "t_final", "final time");
    burgers->add_flag_callback("--stationary-init", [&] { flags.set("stationary", "true"); },
                               "start from the invariant white noise");
    burgers->add_flag_callback("--zero-init", [&] { flags.set("stationary", "false"); }, "start from zero");
    param(burgers, "--trajectory-modes", "trajectory_kmax", "emit re/im rows for modes 1..k per replica");
    burgers->add_option("--observable", observable, "energy, mode-moments or drift-moments")
        ->check(CLI::IsMember({"energy", "mode-moments", "drift-moments"}));

    auto* pam = app.add_subcommand("pam", "2d parabolic Anderson model solvers");
    param(pam, "--n-levels", "ns", "mollification levels, comma separated");
    param(pam, "--grid-size", "M", "grid points per side");
    param(pam, "--gamma", "gamma", "paracontrolled regularity");
    param(pam, "--F", "F", "linear or sine:a");
    param(pam, "--t-final", "t_final", "final time");
    param(pam, "--dt", "dt", "time step");
    param(pam, "--renormalize", "renormalize", "on or off")->check(CLI::IsMember({"on", "off"}));
    param(pam, "--method", "method", "direct, transform or paracontrolled")
        ->check(CLI::IsMember({"direct", "transform", "paracontrolled"}));

    auto* sbe = app.add_subcommand("sbe", "1d stochastic Burgers solvers");
    param(sbe, "--gamma", "gamma", "paracontrolled regularity");
    param(sbe, "--n-level", "n", "mollification level");
    param(sbe, "--grid-size", "M", "grid points");
    param(sbe, "--t-final", "t_final", "final time");
    param(sbe, "--dt", "dt", "time step");
    param(sbe, "--method", "method", "galerkin, paracontrolled or tree:k");

    app.add_subcommand("renorm", "heat-trace and PAM renormalization constants");
    auto* wick = app.add_subcommand("wick", "Wick product identities and tree enumeration");
    int tree_degree = -1;
    wick->add_option("--trees", tree_degree, "write the tree table up to this degree as JSON and exit")
        ->check(CLI::Range(0, kMaxTreeDegree));

    auto* oracle_cmd = app.add_subcommand("oracle", "regenerate or check committed fixtures");
    std::string action;
    std::string fixture_dir = PARAPDE_FIXTURE_DIR;
    oracle_cmd->add_option("action", action, "regen or check")->required()->check(CLI::IsMember({"regen", "check"}));
    oracle_cmd->add_option("--fixtures", fixture_dir, "fixture directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const std::string subname = sub->get_name();
    try {
        if (subname == "oracle") return oracle(action, fixture_dir);
        if (!export_partition.empty()) {
            const auto colon = export_partition.find(':');
            if (colon == std::string::npos) throw ConfigurationError("--export expects d:M");
            const TorusGrid g(std::stoi(export_partition.substr(0, colon)), std::stoi(export_partition.substr(colon + 1)));
            write_output(out, partition_csv(build_partition(g)));
            return kExitPass;
        }
        if (tree_degree >= 0) {
            write_output(out, trees_to_json(enumerate_trees(tree_degree)) + "\n");
            return kExitPass;
        }

        static const std::map<std::string, std::string> defaults = {
            {"partition-check", "partition-check"}, {"noise", "noise-sample"}, {"ou", "ou-moments"},
            {"pam", "pam-path"}, {"sbe", "sbe-path"}, {"renorm", "renorm-constants"}, {"wick", "wick"}};
        static const std::map<std::string, std::string> observables = {
            {"energy", "burgers-energy"}, {"mode-moments", "burgers-invariance"}, {"drift-moments", "drift-moments"}};
        const std::string default_experiment = subname == "burgers" ? observables.at(observable) : defaults.at(subname);

        Config cfg;
        if (!config_path.empty()) cfg = Config::load(config_path);
        cfg.merge(flags);
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) throw ConfigurationError("--set expects key=value, got '" + kv + "'");
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!experiment_flag.empty()) cfg.set("experiment", experiment_flag);
        if (!cfg.has("experiment")) cfg.set("experiment", default_experiment);
        if (!seed.empty()) cfg.set("seed", seed);
        if (replicas >= 0) cfg.set("replicas", std::to_string(replicas));
        if (threads >= 0) cfg.set("threads", std::to_string(threads));
        if (!out.empty()) cfg.set("out", out);
        if (!format.empty()) cfg.set("format", format);

        const auto ec = make_experiment_config(cfg);
        const auto* info = find_experiment(ec.experiment);
        if (!info) throw ConfigurationError("unknown experiment '" + ec.experiment + "'; see --list");
        if (info->subcommand != subname)
            throw ConfigurationError("experiment '" + ec.experiment + "' belongs to subcommand '" + info->subcommand + "'");

        const auto rep = run_experiment(ec);
        write_output(ec.out, emit_report(rep, ec.format));
        if (!rep.gates.empty()) std::cerr << gate_table(rep);
        return rep.passed() ? kExitPass : kExitGate;
    } catch (const ConfigurationError& e) {
        std::cerr << "parapde: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ArgumentError& e) {
        std::cerr << "parapde: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "parapde: " << e.what() << "\n";
        return kExitError;
    }
}
